"""Level-n twisted Zhu algebras: the circle/star products, the relation
ideal O_{g,n}(V), and exact finite-cutoff quotients A_{g,n}(V) = V/O_{g,n}(V).

All products reduce to residue_sum instances, i.e. finite sums
sum_j binom(nu, j) a_{(mu+j)} b with exact rational/cyclotomic scalars.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import CertificateTerm, MembershipCertificate, QuotientBasis, \
    SpanReducer, span_membership
from .scalars import check_index, floor_frac, gen_binomial, tilde
from .voa import AdjointModule, _acc_cyc, residue_sum

_ONE = Fraction(1)


def _delta(i, r):
    # step indicator on residue indices; r may equal T (never reached by i < T)
    return 1 if i >= r else 0


def lambda_exp(x, r, T):
    """The mode-truncation exponent lambda(x, r) = -1 + floor(x) + [x~ >= r] + r/T."""
    x = Fraction(x)
    check_index(x, T)
    if x < 0:
        raise ValueError(f"index must be nonnegative, got {x}")
    if not (0 <= r < T):
        raise ValueError(f"eigenvalue residue out of range: {r}")
    return -1 + floor_frac(x) + _delta(tilde(x, T), r) + Fraction(r, T)


def _circle_data(ctx, a_mono, n):
    """(mu, nu) for the level-n circle product with left factor a_mono."""
    T = ctx.T
    r = ctx.eigendatum(a_mono, ctx.g1)
    fn = floor_frac(n)
    nt = tilde(n, T)
    mu = -(2 * fn + _delta(nt, r) + _delta(nt, T - r) + 1)
    nu = sum(a_mono) + lambda_exp(n, r, T)
    return mu, nu


def circle_zhu(ctx, a_vec, b_vec, n):
    """a o_{g,n} b, the relation-generating product at level n."""
    n = Fraction(n)
    check_index(n, ctx.T)
    module = AdjointModule(ctx)
    out = {}
    for am, ac in a_vec.items():
        mu, nu = _circle_data(ctx, am, n)
        for mm, c in residue_sum(module, {am: ac}, b_vec, mu, nu).items():
            _acc_cyc(out, mm, c)
    return out


def star_zhu(ctx, a_vec, b_vec, n):
    """a *_{g,n} b.  Only the invariant part of a acts; the rest multiplies to 0."""
    n = Fraction(n)
    check_index(n, ctx.T)
    fn = floor_frac(n)
    module = AdjointModule(ctx)
    out = {}
    for am, ac in a_vec.items():
        if ctx.eigendatum(am, ctx.g1) != 0:
            continue
        wa = sum(am)
        for i in range(fn + 1):
            coeff = gen_binomial(fn + i, i)
            if i % 2:
                coeff = -coeff
            part = residue_sum(module, {am: ac * coeff}, b_vec,
                               -(fn + i + 1), wa + fn)
            for mm, c in part.items():
                _acc_cyc(out, mm, c)
    return out


def weight_shift(ctx, a_vec):
    """(L_{(-1)} + L_{(0)}) a, the grading-shift relation generator."""
    out = ctx.l_op(-1, a_vec)
    for mono, c in a_vec.items():
        w = sum(mono)
        if w:
            _acc_cyc(out, mono, c * w)
    return out


def o_zhu_generators(ctx, n, weight_cap):
    """Deterministic list of (descriptor, vector) spanning O_{g,n}(V) up to weight_cap.

    Descriptors are JSON-ready tuples of strings; every generator vector is
    supported in weights <= weight_cap.
    """
    n = Fraction(n)
    check_index(n, ctx.T)
    module = AdjointModule(ctx)
    out = []
    sn = str(n)
    for a in ctx.basis_upto(weight_cap):
        if not a:
            continue
        wa = sum(a)
        mu, nu = _circle_data(ctx, a, n)
        top_shift = -mu - 1
        av = ctx.lift({a: _ONE})
        for b in ctx.basis_upto(weight_cap - wa - top_shift):
            vec = residue_sum(module, av, ctx.lift({b: _ONE}), mu, nu)
            if vec:
                out.append((("circle-zhu", sn, ctx.format_monomial(a),
                             ctx.format_monomial(b)), vec))
    for a in ctx.basis_upto(weight_cap - 1):
        vec = weight_shift(ctx, ctx.lift({a: _ONE}))
        if vec:
            out.append((("shift", ctx.format_monomial(a)), vec))
    return out


def o_membership(ctx, n, target_vec, weight_cap, target_id="target"):
    """Certificate that target_vec lies in O_{g,n}(V) within weight_cap, or None."""
    gens = o_zhu_generators(ctx, n, weight_cap)
    return span_membership(ctx.field, target_vec, gens, ctx.col_key, target_id)


class OSpan:
    """Echelon model of O_{g,n}(V) up to a weight cap, built once and queried
    many times.  With track=True, membership returns replayable certificates."""

    def __init__(self, ctx, n, weight_cap, track=True):
        self.ctx = ctx
        self.n = Fraction(n)
        self.weight_cap = weight_cap
        self.red = SpanReducer(ctx.field, ctx.col_key, track=track)
        for gid, vec in o_zhu_generators(ctx, self.n, weight_cap):
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


class ZhuQuotient:
    """Finite-cutoff model of A_{g,n}(V).

    Relations are generated up to weight cutoff + slack and the quotient is
    taken inside that ambient space; representatives are reported only up to
    the cutoff, where the extra slack absorbs boundary truncation.
    """

    def __init__(self, ctx, n, cutoff, slack):
        self.ctx = ctx
        self.n = Fraction(n)
        self.cutoff = cutoff
        self.slack = slack
        cap = cutoff + slack
        gens = o_zhu_generators(ctx, self.n, cap)
        ambient = set(ctx.basis_upto(cap))
        self.basis = QuotientBasis(ctx.field, ambient, [v for _, v in gens],
                                   ctx.col_key)
        self.representatives = [m for m in self.basis.representatives
                                if sum(m) <= cutoff]

    def reduce(self, vec):
        return self.basis.reduce(vec)

    def dims_by_weight(self):
        out = {}
        for m in self.representatives:
            out[sum(m)] = out.get(sum(m), 0) + 1
        return {w: out[w] for w in sorted(out)}
