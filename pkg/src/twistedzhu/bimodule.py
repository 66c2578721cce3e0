"""Bimodule-level structure on W = V: the relation families O-dagger and
O-prime, the right action (u, a) -> u *_ a, the left actions a *~ u at a
general auxiliary index p, the alternative right product, the graded
action, and the two higher relation families they generate.

Both configured automorphisms are involutions, so the companion
automorphism g2 = g1^{-1} equals g1 and W is V acting on itself.  Every
product is a finite sum of residue_sum instances with exact scalars in
the cyclotomic field; scalars of the form (-1)^{fractional} are roots of
unity, never floats.

Index conventions, used consistently below: n is the outer (left) level,
m is the base (right) level, p is the auxiliary level of the general
left action.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import CertificateTerm, MembershipCertificate, QuotientBasis, \
    SpanReducer
from .scalars import check_index, floor_frac, gen_binomial, tilde
from .voa import AdjointModule, _acc_cyc, residue_sum
from .zhu import lambda_exp

_ONE = Fraction(1)


def _level(x, T):
    x = check_index(x, T)
    if x < 0:
        raise ValueError(f"level index {x} must be nonnegative")
    return x


def _merge(out, part):
    for mono, c in part.items():
        _acc_cyc(out, mono, c)


def shift_bimod(ctx, u_vec, m, n):
    """(L_{(-1)} + L_{(0)} + m - n) u, the level-shift relation generator."""
    shift = _level(m, ctx.T) - _level(n, ctx.T)
    out = ctx.l_op(-1, u_vec)
    for mono, c in u_vec.items():
        s = sum(mono) + shift
        if s:
            _acc_cyc(out, mono, c * s)
    return out


def circle_bimod(ctx, a_vec, v_vec, m, n):
    """a o^n_m v: residue against (1+x)^{wt a + lambda(m,j1)} / x^{lambda(m,j1)+lambda(n,j2)+2}."""
    T = ctx.T
    m = _level(m, T)
    n = _level(n, T)
    module = AdjointModule(ctx)
    out = {}
    for am, ac in a_vec.items():
        j1, j2 = ctx.bidegree(am)
        lam1 = lambda_exp(m, j1, T)
        lam2 = lambda_exp(n, j2, T)
        part = residue_sum(module, {am: ac}, v_vec,
                           -(lam1 + lam2 + 2), sum(am) + lam1)
        _merge(out, part)
    return out


def generalized_circle(ctx, a_vec, v_vec, m, n, k, s):
    """The (k, s)-extended circle residue; defined for integers k >= s >= 0."""
    if not (isinstance(k, int) and isinstance(s, int) and k >= s >= 0):
        raise ValueError(f"need integers k >= s >= 0, got k={k!r}, s={s!r}")
    T = ctx.T
    m = _level(m, T)
    n = _level(n, T)
    module = AdjointModule(ctx)
    out = {}
    for am, ac in a_vec.items():
        j1, j2 = ctx.bidegree(am)
        lam1 = lambda_exp(m, j1, T)
        lam2 = lambda_exp(n, j2, T)
        part = residue_sum(module, {am: ac}, v_vec,
                           -(lam1 + lam2 + 2 + k), sum(am) + lam1 + s)
        _merge(out, part)
    return out


def odag_generators(ctx, m, n, weight_cap):
    """Deterministic (descriptor, vector) list spanning the circle-relation
    family O-dagger at (n, m), with every vector supported in weights <= cap."""
    m = _level(m, ctx.T)
    n = _level(n, ctx.T)
    cap = Fraction(weight_cap)
    sn, sm = str(n), str(m)
    T = ctx.T
    out = []
    for a in ctx.basis_upto(floor_frac(cap)):
        if not a:
            continue
        j1, j2 = ctx.bidegree(a)
        top_shift = lambda_exp(m, j1, T) + lambda_exp(n, j2, T) + 1
        vcap = floor_frac(cap - sum(a) - top_shift)
        if vcap < 0:
            continue
        av = ctx.lift({a: _ONE})
        for v in ctx.basis_upto(vcap):
            vec = circle_bimod(ctx, av, ctx.lift({v: _ONE}), m, n)
            if vec:
                out.append((("circle-bimod", sn, sm, ctx.format_monomial(a),
                             ctx.format_monomial(v)), vec))
    return out


def oprime_generators(ctx, m, n, weight_cap):
    """O-dagger generators plus the level-shift family (L_{(-1)}+L_{(0)}+m-n)u."""
    m = _level(m, ctx.T)
    n = _level(n, ctx.T)
    out = odag_generators(ctx, m, n, weight_cap)
    sn, sm = str(n), str(m)
    for u in ctx.basis_upto(weight_cap - 1):
        vec = shift_bimod(ctx, ctx.lift({u: _ONE}), m, n)
        if vec:
            out.append((("shift-bimod", sn, sm, ctx.format_monomial(u)), vec))
    return out


def right_action(ctx, u_vec, a_vec, m, n):
    """u *_^n_m a.  Zero when the acting vector has nonzero first eigenvalue
    index; the scalar (-1)^{-lambda(n,j2)} is an exact root of unity."""
    T = ctx.T
    m = _level(m, T)
    n = _level(n, T)
    fm = floor_frac(m)
    module = AdjointModule(ctx)
    out = {}
    for am, ac in a_vec.items():
        j1, j2 = ctx.bidegree(am)
        if j1 != 0:
            continue
        wa = sum(am)
        lam2 = lambda_exp(n, j2, T)
        pref = ctx.field.root_of_unity_power(-lam2)
        for i in range(fm + 1):
            coeff = pref * gen_binomial(lam2 + i, i)
            part = residue_sum(module, {am: ac * coeff}, u_vec,
                               -(lam2 + i + 1), wa + i - 1)
            _merge(out, part)
    return out


def left_action(ctx, a_vec, u_vec, m, p, n):
    """a *~^n_{m,p} u.  Zero unless j2 matches the residue of n - p."""
    T = ctx.T
    m = _level(m, T)
    p = _level(p, T)
    n = _level(n, T)
    fp = floor_frac(p)
    gate = (tilde(n, T) - tilde(p, T)) % T
    module = AdjointModule(ctx)
    out = {}
    for am, ac in a_vec.items():
        j1, j2 = ctx.bidegree(am)
        if j2 != gate:
            continue
        wa = sum(am)
        lam1 = lambda_exp(m, j1, T)
        for i in range(fp + 1):
            coeff = gen_binomial(lam1 + n - p + i, i)
            if i % 2:
                coeff = -coeff
            part = residue_sum(module, {am: ac * coeff}, u_vec,
                               -(lam1 + n - p + i + 1), wa + lam1)
            _merge(out, part)
    return out


def dj_star(ctx, a_vec, b_vec, m, n):
    """The alternative right product; zero unless the eigenvalue index of the
    left factor equals the residue of m - n."""
    T = ctx.T
    m = _level(m, T)
    n = _level(n, T)
    fm = floor_frac(m)
    fn = floor_frac(n)
    gate = (tilde(m, T) - tilde(n, T)) % T
    module = AdjointModule(ctx)
    out = {}
    for am, ac in a_vec.items():
        r = ctx.eigendatum(am, ctx.g1)
        if r != gate:
            continue
        wa = sum(am)
        lam = lambda_exp(m, r, T)
        for i in range(fm + 1):
            coeff = gen_binomial(fn + i, i)
            if i % 2:
                coeff = -coeff
            part = residue_sum(module, {am: ac * coeff}, b_vec,
                               -(fn + i + 1), wa + lam)
            _merge(out, part)
    return out


def congruence_coefficient(ctx, a_vec, b_vec, m, n, k):
    """Coefficient of x^k in
    e^{x L_{(-1)}} Y(a,-x) b - (1+x)^{n-m-wt a-wt b} Y(a,-x/(1+x)) b.

    Each coefficient of this difference lies in (L_{(-1)}+L_{(0)}+m-n)V;
    the two expansions are exact finite sums thanks to the grading bound.
    """
    T = ctx.T
    m = _level(m, T)
    n = _level(n, T)
    k = int(k)
    out = {}
    for am, ac in a_vec.items():
        wa = sum(am)
        for bm, bc in b_vec.items():
            wb = sum(bm)
            coeff0 = ac * bc
            cap = wa + wb
            fact = Fraction(1)
            vecs = None
            for i in range(max(cap + k, 0) + 1):
                if i:
                    fact *= i
                md = ctx.mode_q(am, i - k - 1, bm)
                if not md:
                    continue
                v = ctx.lift(md)
                for _ in range(i):
                    v = ctx.l_op(-1, v)
                sc = Fraction(1 if (i - k) % 2 == 0 else -1, 1) / fact
                for mono, c in v.items():
                    _acc_cyc(out, mono, coeff0 * (c * sc))
            shift = n - m - wa - wb
            for p in range(-k - 1, cap):
                md = ctx.mode_q(am, p, bm)
                if not md:
                    continue
                bino = gen_binomial(shift + p + 1, k + p + 1)
                if not bino:
                    continue
                sc = -bino if (p + 1) % 2 == 0 else bino
                for mono, q in md.items():
                    _acc_cyc(out, mono, coeff0 * (q * sc))
    return out


@dataclass
class BimodClass:
    """A coset representative in a truncated bimodule quotient."""
    representative: dict
    grade: Fraction
    base: Fraction
    kind: str  # "dagger" or "prime"


def graded_action(ctx, a_vec, p, v_vec, n, m):
    """The mode-p action on level-n classes: lands at grade n + wt a - p - 1,
    computed by the general left action with auxiliary index n; the zero
    class when the target grade is negative."""
    p = Fraction(p)
    check_index(p, ctx.T)
    n = Fraction(n)
    m = Fraction(m)
    weights = {sum(am) for am in a_vec}
    if len(weights) > 1:
        raise ValueError("graded action needs a homogeneous acting vector")
    wa = weights.pop() if weights else 0
    n2 = n + wa - p - 1
    if n2 < 0:
        return BimodClass({}, n2, m, "prime")
    rep = left_action(ctx, a_vec, v_vec, m, n, n2)
    return BimodClass(rep, n2, m, "prime")


def opp2_generators(ctx, n, m, param_cap, weight_cap):
    """Left-associativity defects pushed back into the bimodule: vectors
    d *~^n_{m,p3} ((a *~^{p3}_{p1,p2} b) *~^{p3}_{m,p1} c
                   - a *~^{p3}_{m,p2} (b *~^{p2}_{m,p1} c))
    over all p_i <= param_cap in (1/T)N and monomials of weight <= weight_cap."""
    n = _level(n, ctx.T)
    m = _level(m, ctx.T)
    sn, sm = str(n), str(m)
    T = ctx.T
    pvals = [Fraction(k, T) for k in range(param_cap * T + 1)]
    states = ctx.basis_upto(weight_cap)
    lifted = {s: ctx.lift({s: _ONE}) for s in states}
    fmt = ctx.format_monomial
    out = []
    for p1 in pvals:
        for p2 in pvals:
            for p3 in pvals:
                key = (str(p1), str(p2), str(p3))
                for a in states:
                    av = lifted[a]
                    for b in states:
                        x1 = left_action(ctx, av, lifted[b], p1, p2, p3)
                        for c in states:
                            cv = lifted[c]
                            diff = left_action(ctx, x1, cv, m, p1, p3) if x1 else {}
                            x2 = left_action(ctx, lifted[b], cv, m, p1, p2)
                            if x2:
                                sub = left_action(ctx, av, x2, m, p2, p3)
                                for mono, coeff in sub.items():
                                    _acc_cyc(diff, mono, -coeff)
                            if not diff:
                                continue
                            for d in states:
                                vec = left_action(ctx, lifted[d], diff, m, p3, n)
                                if vec:
                                    out.append((("opp2", sn, sm) + key +
                                                (fmt(a), fmt(b), fmt(c), fmt(d)),
                                                vec))
    return out


def opp3_generators(ctx, n, m, param_cap, weight_cap):
    """Vectors (a *~^n_{p1,p2} o) *~^n_{m,p1} c with o running over the
    O-prime generator family at (p2, p1)."""
    n = _level(n, ctx.T)
    m = _level(m, ctx.T)
    sn, sm = str(n), str(m)
    T = ctx.T
    pvals = [Fraction(k, T) for k in range(param_cap * T + 1)]
    states = ctx.basis_upto(weight_cap)
    lifted = {s: ctx.lift({s: _ONE}) for s in states}
    fmt = ctx.format_monomial
    out = []
    for p1 in pvals:
        for p2 in pvals:
            inner = oprime_generators(ctx, p1, p2, weight_cap)
            for a in states:
                av = lifted[a]
                for gid, o in inner:
                    x = left_action(ctx, av, o, p1, p2, n)
                    if not x:
                        continue
                    for c in states:
                        vec = left_action(ctx, x, lifted[c], m, p1, n)
                        if vec:
                            out.append((("opp3", sn, sm, str(p1), str(p2),
                                         fmt(a), fmt(c), gid), vec))
    return out


def opp_generators(ctx, n, m, param_cap, weight_cap):
    return opp2_generators(ctx, n, m, param_cap, weight_cap) + \
        opp3_generators(ctx, n, m, param_cap, weight_cap)


class BimodSpan:
    """Echelon model of O-dagger or O-prime at (n, m) up to a weight cap."""

    def __init__(self, ctx, m, n, weight_cap, kind="prime", track=True):
        if kind not in ("dagger", "prime"):
            raise ValueError(f"unknown span kind {kind!r}")
        self.ctx = ctx
        self.m = Fraction(m)
        self.n = Fraction(n)
        self.weight_cap = weight_cap
        self.kind = kind
        gens = (oprime_generators if kind == "prime" else odag_generators)(
            ctx, self.m, self.n, weight_cap)
        self.red = SpanReducer(ctx.field, ctx.col_key, track=track)
        for gid, vec in gens:
            self.red.insert(gid, vec)

    def contains(self, target_vec):
        return self.red.membership(target_vec) is not None

    def certificate(self, target_vec, target_id="target"):
        combo = self.red.membership(target_vec)
        if combo is None:
            return None
        terms = [CertificateTerm(g, c) for g, c in combo.items()]
        terms.sort(key=lambda t: str(t.generator))
        return MembershipCertificate(target_id, terms)


class BimodQuotient:
    """Finite-cutoff model of W/O-dagger or W/O-prime at (n, m)."""

    def __init__(self, ctx, m, n, cutoff, slack, kind="dagger"):
        if kind not in ("dagger", "prime"):
            raise ValueError(f"unknown quotient kind {kind!r}")
        self.ctx = ctx
        self.m = Fraction(m)
        self.n = Fraction(n)
        self.cutoff = cutoff
        self.slack = slack
        self.kind = kind
        cap = cutoff + slack
        gens = (oprime_generators if kind == "prime" else odag_generators)(
            ctx, self.m, self.n, cap)
        ambient = set(ctx.basis_upto(cap))
        self.basis = QuotientBasis(ctx.field, ambient, [v for _, v in gens],
                                   ctx.col_key)
        self.representatives = [mono for mono in self.basis.representatives
                                if sum(mono) <= cutoff]

    def reduce(self, vec):
        return self.basis.reduce(vec)

    def dims_by_weight(self):
        out = {}
        for mono in self.representatives:
            out[sum(mono)] = out.get(sum(mono), 0) + 1
        return {w: out[w] for w in sorted(out)}
