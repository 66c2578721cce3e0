"""The order-2 twisted Fock module and module-level mode machinery.

For the rank-1 Heisenberg backend with the negation automorphism, the
twisted module has generator modes a_r indexed by half-odd integers r,
with [a_r, a_s] = r delta_{r+s,0}.  States are weakly decreasing tuples
of positive half-odd Fractions over the twisted vacuum |s>.

Composite modes (a_{(p)} acting on the module for a a V-monomial) come
from the twisted Jacobi identity.  Peeling one generator u = a of
eigendatum r off the front (u in V^r, here r/T = 1/2):

  (u_{(-k)} b)_{(p)} v = sum_i binom(-k, i) [ (-1)^i u_{(r/T-k-i)} b_{(p-r/T+i)} v
                                 - (-1)^{k+i} b_{(p-r/T-k-i)} u_{(r/T+i)} v ]
                         - sum_{j>=1} binom(r/T, j) (u_{(j-k)} b)_{(p-j)} v

where u_{(j-k)} b is an untwisted product in V.  Every sum truncates by
grading, and the recursion descends in V-weight.  Nothing here hardcodes
the conformal weight of the twisted vacuum; the 1/16 anomaly of the
free-boson twisted sector is a computed consequence.

The functions at the bottom (zero_mode, omega_space, deformed_mode,
bullet_action) are generic over a module adapter (this one or
voa.AdjointModule).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .linalg import SpanReducer
from .scalars import gen_binomial
from .voa import _acc, _acc_cyc

_ONE = Fraction(1)
HALF = Fraction(1, 2)


def _odd_half_partitions(two_d, max_part=None):
    # partitions of two_d into odd parts (doubled half-odd-integer depths)
    if two_d == 0:
        yield ()
        return
    top = two_d if max_part is None else min(two_d, max_part)
    if top % 2 == 0:
        top -= 1
    for first in range(top, 0, -2):
        for rest in _odd_half_partitions(two_d - first, first):
            yield (first,) + rest


class TwistedFock:
    """g-twisted Fock module, g the negation automorphism of the free boson."""

    kind = "twisted-fock"
    min_degree = Fraction(0)

    def __init__(self, voa):
        if voa.backend != "heisenberg" or voa.T % 2:
            raise ValueError("twisted Fock module needs heisenberg backend and even T")
        self.voa = voa
        self.field = voa.field
        self._mode_cache = {}

    # ------------------------------------------------------------------

    def degree(self, mono):
        return sum(mono, Fraction(0))

    def basis(self, d):
        d = Fraction(d)
        if d < 0 or (2 * d).denominator != 1:
            return []
        out = [tuple(Fraction(p, 2) for p in m) for m in _odd_half_partitions(int(2 * d))]
        return sorted(out, key=lambda m: tuple(-p for p in m))

    def basis_upto(self, cap):
        out = []
        two = 0
        while Fraction(two, 2) <= cap:
            out.extend(self.basis(Fraction(two, 2)))
            two += 1
        return out

    def degrees_upto(self, cap):
        out = []
        two = 0
        while Fraction(two, 2) <= cap:
            out.append(Fraction(two, 2))
            two += 1
        return out

    def col_key(self, mono):
        return (-self.degree(mono), tuple(-p for p in mono))

    def vacuum(self):
        return {(): self.field.one}

    def sector(self, a_mono):
        """Mode-lattice coset offset for the field of a V-monomial."""
        return Fraction(len(a_mono) % 2, 2)

    # ------------------------------------------------------------------
    # generator modes a_r, r half-odd

    def gen_apply(self, r, mono):
        r = Fraction(r)
        if r.denominator != 2:
            raise ValueError(f"twisted generator mode must be half-odd, got {r}")
        if r < 0:
            d = -r
            for i, p in enumerate(mono):
                if d >= p:
                    return {mono[:i] + (d,) + mono[i:]: _ONE}
            return {mono + (d,): _ONE}
        cnt = mono.count(r)
        if not cnt:
            return {}
        i = mono.index(r)
        return {mono[:i] + mono[i + 1:]: r * cnt}

    def gen_mode_q(self, r, vec_q):
        out = {}
        for mono, c in vec_q.items():
            for mm, c2 in self.gen_apply(r, mono).items():
                _acc(out, mm, c * c2)
        return out

    # ------------------------------------------------------------------
    # composite modes

    def mode(self, a, p, v):
        """a_{(p)} v for a V-monomial a and twisted monomial v; Fraction dict."""
        p = Fraction(p)
        if (p - self.sector(a)).denominator != 1:
            return {}
        key = (a, p, v)
        hit = self._mode_cache.get(key)
        if hit is not None:
            return hit
        out = self._mode_uncached(a, p, v)
        self._mode_cache[key] = out
        return out

    def _mode_uncached(self, a, p, v):
        if not a:
            return {v: _ONE} if p == -1 else {}
        k = a[0]
        rest = a[1:]
        w_rest = sum(rest)
        d_v = self.degree(v)
        out = {}
        # term 1 and term 2 of the peeled Jacobi expansion
        bound1 = w_rest + d_v - p - HALF       # rest_{(p-1/2+i)} v vanishes beyond
        bound2 = d_v - HALF                    # a_{1/2+i} v vanishes beyond
        i = 0
        while i <= max(bound1, bound2):
            binom = gen_binomial(-k, i)
            if binom:
                if i <= bound1:
                    inner = self.mode(rest, p - HALF + i, v)
                    if inner:
                        sign = binom if i % 2 == 0 else -binom
                        r_mode = HALF - k - i
                        for mono, c in inner.items():
                            for mm, c2 in self.gen_apply(r_mode, mono).items():
                                _acc(out, mm, sign * c * c2)
                if i <= bound2:
                    gv = self.gen_apply(HALF + i, v)
                    if gv:
                        sign = -binom if (k + i) % 2 == 0 else binom
                        for mono, c in gv.items():
                            inner = self.mode(rest, p - HALF - k - i, mono)
                            for mm, c2 in inner.items():
                                _acc(out, mm, sign * c * c2)
            i += 1
        # correction sum: u_{(j-k)} rest are untwisted products of strictly
        # smaller V-weight, u = (1,) the generator state
        for j in range(1, k + w_rest + 1):
            binom = gen_binomial(HALF, j)
            ub = self.voa.mode_q((1,), j - k, rest)
            if not ub:
                continue
            for mono, c in ub.items():
                inner = self.mode(mono, p - j, v)
                if inner:
                    coeff = binom * c
                    for mm, c2 in inner.items():
                        _acc(out, mm, -coeff * c2)
        return out

    def mode_vec(self, a_vec, p, v_vec):
        out = {}
        for am, ac in a_vec.items():
            for vm, vc in v_vec.items():
                cached = self.mode(am, p, vm)
                if cached:
                    coeff = ac * vc
                    for mm, q in cached.items():
                        _acc_cyc(out, mm, coeff * q)
        return out

    # ------------------------------------------------------------------

    def format_monomial(self, mono):
        return "".join(f"a[-{p}]" for p in mono) + "|s>"

    def parse_monomial(self, text):
        text = text.strip()
        if not text.endswith("|s>"):
            raise ValueError(f"twisted monomial must end in |s>: {text!r}")
        body = text[:-3]
        if not body:
            return ()
        parts = re.findall(r"a\[(-\d+/2)\]", body)
        rebuilt = "".join(f"a[{p}]" for p in parts)
        if rebuilt != body:
            raise ValueError(f"cannot parse twisted monomial {text!r}")
        mono = tuple(-Fraction(p) for p in parts)
        if any(p <= 0 or p.denominator != 2 for p in mono) or \
                list(mono) != sorted(mono, reverse=True):
            raise ValueError(f"not a normal-ordered twisted monomial: {text!r}")
        return mono


# ----------------------------------------------------------------------
# generic module-level operations


def zero_mode(module, a_vec, v_vec):
    """o(a) v = a_{(wt a - 1)} v, graded piece by graded piece."""
    out = {}
    for am, ac in a_vec.items():
        wa = sum(am)
        for vm, vc in v_vec.items():
            cached = module.mode(am, Fraction(wa - 1), vm)
            if cached:
                coeff = ac * vc
                for mm, q in cached.items():
                    _acc_cyc(out, mm, coeff * q)
    return out


def _annihilation_probes(module, n, cutoff, probe_cap):
    """(a, mode) pairs whose vanishing cuts out Omega_n within degree cutoff."""
    voa = module.voa
    T = voa.T
    probes = []
    for a in voa.basis_upto(probe_cap):
        if not a:
            continue
        wa = sum(a)
        off = module.sector(a)
        # modes a_{(wt a - 1 + k)}, k in (1/T)N, k > n, reachable in grading
        num = int(n * T) + 1
        while Fraction(num, T) <= cutoff:
            k = Fraction(num, T)
            q = wa - 1 + k
            if (q - off).denominator == 1:
                probes.append((a, q))
            num += 1
    return probes


def omega_space(module, n, cutoff, probe_cap):
    """Basis of {u of degree <= cutoff : a_{(wt a - 1 + k)} u = 0, k > n}.

    Probes use all VOA basis states up to probe_cap; the same system is
    re-solved at probe_cap + 1 and the result is flagged stable when the
    two kernels agree.  Returns (vectors, stable).
    """
    vecs = _omega_kernel(module, n, cutoff, probe_cap)
    vecs_next = _omega_kernel(module, n, cutoff, probe_cap + 1)
    stable = _canon(vecs) == _canon(vecs_next)
    return vecs, stable


def _canon(vecs):
    return sorted(sorted((str(m), str(c)) for m, c in v.items()) for v in vecs)


def _omega_kernel(module, n, cutoff, probe_cap):
    field = module.field
    probes = _annihilation_probes(module, n, cutoff, probe_cap)
    basis = module.basis_upto(cutoff)
    mkey = module.col_key

    def col_key(col):
        tag, payload = col
        if tag == 0:
            pid, mono = payload
            return (0, pid, mkey(mono))
        return (1, payload)

    red = SpanReducer(field, col_key, track=False)
    unit_cols = {}
    for j, u in enumerate(basis):
        vec = {}
        for pid, (a, q) in enumerate(probes):
            img = module.mode(a, q, u)
            for mono, c in img.items():
                vec[(0, (pid, mono))] = field.from_rational(c)
        vec[(1, j)] = field.one
        red.insert(j, vec)
        unit_cols[j] = u
    out = []
    for col in red.pivot_columns():
        if col[0] != 1:
            continue
        rvec, _ = red.rows[col]
        v = {}
        for c, coeff in rvec.items():
            assert c[0] == 1
            v[unit_cols[c[1]]] = coeff
        out.append(v)
    return out


def deformed_mode(module, a_vec, m, z0, v_vec):
    """Res_x x^m (1 - z0 x)^{2 wt a - m - 2} Y(e^{-z0 (1-z0 x)^{-1} L_1} a, x) v.

    Expanded exactly: sum_{i,j} ((-z0)^{i+j}/i!) binom(2 wt a - m - 2 - i, j)
    (L_1^i a)_{(m+j)} v.
    """
    voa = module.voa
    m = Fraction(m)
    z0 = Fraction(z0)
    out = {}
    for am, ac in a_vec.items():
        wa = sum(am)
        cur = {am: _ONE}
        i = 0
        while cur:
            zi = (-z0) ** i
            for vm, vc in v_vec.items():
                jmax = wa - i + module.degree(vm) - m - 1
                j = 0
                while j <= jmax:
                    coeff_j = gen_binomial(2 * wa - m - 2 - i, j) * zi * (-z0) ** j
                    if coeff_j:
                        for mono, c in cur.items():
                            cached = module.mode(mono, m + j, vm)
                            if cached:
                                coeff = ac * vc
                                for mm, q in cached.items():
                                    _acc_cyc(out, mm, coeff * (coeff_j * c * q))
                    j += 1
            i += 1
            cur = {m2: c2 / i for m2, c2 in voa.l_op_q(1, cur).items()}
    return out


def bullet_action(module, a_vec, z0, v_vec):
    """a bullet_{(z0)} v: the deformed zero mode, graded piece by piece."""
    out = {}
    for am, ac in a_vec.items():
        wa = sum(am)
        part = deformed_mode(module, {am: ac}, Fraction(wa - 1), z0, v_vec)
        for mm, c in part.items():
            _acc_cyc(out, mm, c)
    return out
