"""Untwisted mode calculus for two concrete vertex operator algebras.

Backends:
  * "heisenberg": rank-1 free boson, [a_m, a_n] = m delta_{m+n,0},
    conformal vector omega = (1/2) a_{-1}^2 vac, central charge 1.
  * "virasoro": universal Virasoro at rational central charge c,
    [L_m, L_n] = (m-n) L_{m+n} + ((m^3-m)/12) c delta_{m+n,0},
    conformal vector omega = L_{-2} vac.

States are PBW monomials: weakly decreasing tuples of positive depths,
(3, 1) meaning a_{-3} a_{-1} vac, or (4, 2) meaning L_{-4} L_{-2} vac
(Virasoro depths are >= 2; L_{-1} vac = 0 in the universal algebra).
Vectors are dicts monomial -> coefficient.  Internal caches hold exact
Fraction coefficients; the public vector API is uniformly over the
session cyclotomic field so that twisted bookkeeping composes.

The iterate a_{(n)} for composite a is computed by the Borcherds
recursion peeling one generator mode off the front:

  (u_{(-k)} b)_{(p)} = sum_i binom(-k, i) [ (-1)^i u_{(-k-i)} b_{(p+i)}
                                  - (-1)^{k+i} b_{(p-k-i)} u_{(i)} ]

with u the generating field (a or omega).  All sums truncate by grading.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .scalars import Cyc, CycField, gen_binomial

AUTOMORPHISMS = ("id", "neg")

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _insert_part(mono, d):
    """Insert depth d into a weakly decreasing tuple."""
    for i, p in enumerate(mono):
        if d >= p:
            return mono[:i] + (d,) + mono[i:]
    return mono + (d,)


def _partitions(w, min_part, max_first=None):
    if w == 0:
        yield ()
        return
    top = w if max_first is None else min(w, max_first)
    for first in range(top, min_part - 1, -1):
        for rest in _partitions(w - first, min_part, first):
            yield (first,) + rest


class VoaContext:
    """One VOA backend plus the session's order-T scalar field and automorphisms."""

    def __init__(self, backend="heisenberg", central_charge=None, T=1, g1="id"):
        if backend not in ("heisenberg", "virasoro"):
            raise ValueError(f"unknown backend {backend!r}")
        if g1 not in AUTOMORPHISMS:
            raise ValueError(f"unknown automorphism {g1!r}")
        if g1 == "neg":
            if backend != "heisenberg":
                raise ValueError("negation automorphism requires the heisenberg backend")
            if T % 2:
                raise ValueError("negation automorphism requires even order T")
        self.backend = backend
        self.T = T
        self.g1 = g1
        self.g2 = g1  # id and neg are involutions, so g2 = g1^{-1} = g1
        self.field = CycField(T)
        if backend == "heisenberg":
            self.central_charge = Fraction(1)
            self.min_depth = 1
            self._omega = {(1, 1): Fraction(1, 2)}
            self.gen_letter = "a"
        else:
            if central_charge is None:
                raise ValueError("virasoro backend needs a central charge")
            self.central_charge = Fraction(central_charge)
            self.min_depth = 2
            self._omega = {(2,): Fraction(1)}
            self.gen_letter = "L"
        self._mode_cache = {}
        self._gen_cache = {}
        self._basis_cache = {}

    # ------------------------------------------------------------------
    # basis bookkeeping

    def weight(self, mono):
        return sum(mono)

    def basis(self, w):
        """All PBW monomials of weight w, deepest-part-first order."""
        if w not in self._basis_cache:
            self._basis_cache[w] = sorted(_partitions(w, self.min_depth),
                                          key=lambda m: tuple(-p for p in m))
        return self._basis_cache[w]

    def basis_upto(self, wcap):
        out = []
        for w in range(wcap + 1):
            out.extend(self.basis(w))
        return out

    def col_key(self, mono):
        """Canonical elimination column order: weight descending, parts descending."""
        return (-sum(mono), tuple(-p for p in mono))

    def vacuum(self):
        return {(): self.field.one}

    def conformal_vector(self):
        return {m: self.field.from_rational(c) for m, c in self._omega.items()}

    # ------------------------------------------------------------------
    # generator field modes (normal ordering), exact Fractions

    def _gen_apply(self, s, mono):
        """Apply the generating field mode of index s (a_s, or omega_(s) = L_{s-1})."""
        key = (s, mono)
        hit = self._gen_cache.get(key)
        if hit is not None:
            return hit
        if self.backend == "heisenberg":
            out = self._heis_apply(s, mono)
        else:
            out = self._vir_apply(s - 1, mono)
        self._gen_cache[key] = out
        return out

    def _heis_apply(self, s, mono):
        if s == 0:
            return {}
        if s < 0:
            return {_insert_part(mono, -s): _ONE}
        cnt = mono.count(s)
        if not cnt:
            return {}
        i = mono.index(s)
        return {mono[:i] + mono[i + 1:]: Fraction(s * cnt)}

    def _vir_apply(self, m, mono):
        # L_m on a normal-ordered monomial
        if not mono:
            if m <= -2:
                return {(-m,): _ONE}
            return {}
        n1 = mono[0]
        if m <= -2 and -m >= n1:
            return {(-m,) + mono: _ONE}
        rest = mono[1:]
        out = {}
        # L_m L_{-n1} rest = L_{-n1} L_m rest + [L_m, L_{-n1}] rest
        for mm, c in self._vir_apply(m, rest).items():
            for mm2, c2 in self._vir_apply(-n1, mm).items():
                _acc(out, mm2, c * c2)
        coeff = Fraction(m + n1)
        if coeff:
            for mm, c in self._vir_apply(m - n1, rest).items():
                _acc(out, mm, coeff * c)
        if m == n1:
            central = Fraction(m ** 3 - m, 12) * self.central_charge
            if central:
                _acc(out, rest, central)
        return out

    def gen_mode_q(self, s, vec_q):
        out = {}
        for mono, c in vec_q.items():
            for mm, c2 in self._gen_apply(s, mono).items():
                _acc(out, mm, c * c2)
        return out

    # ------------------------------------------------------------------
    # composite modes: the Borcherds iterate

    def mode_q(self, a, p, b):
        """a_{(p)} b for monomials a, b; dict with Fraction coefficients.

        p must be an integer (the adjoint module is untwisted); fractional
        p returns zero.
        """
        pf = Fraction(p)
        if pf.denominator != 1:
            return {}
        p = int(pf)
        key = (a, p, b)
        hit = self._mode_cache.get(key)
        if hit is not None:
            return hit
        out = self._mode_uncached(a, p, b)
        self._mode_cache[key] = out
        return out

    def _mode_uncached(self, a, p, b):
        if not a:
            return {b: _ONE} if p == -1 else {}
        n1 = a[0]
        k = n1 if self.backend == "heisenberg" else n1 - 1
        rest = a[1:]
        w_rest, w_b = sum(rest), sum(b)
        out = {}
        bound1 = w_rest + w_b - 1 - p          # beyond this, rest_{(p+i)} b = 0
        bound2 = w_b + (0 if self.backend == "heisenberg" else 1)
        i = 0
        while i <= max(bound1, bound2):
            binom = gen_binomial(-k, i)
            if binom:
                if i <= bound1:
                    inner = self.mode_q(rest, p + i, b)
                    if inner:
                        sign = binom if i % 2 == 0 else -binom
                        for mono, c in inner.items():
                            for mm, c2 in self._gen_apply(-k - i, mono).items():
                                _acc(out, mm, sign * c * c2)
                if i <= bound2:
                    gb = self._gen_apply(i, b)
                    if gb:
                        sign = -binom if (k + i) % 2 == 0 else binom
                        for mono, c in gb.items():
                            inner = self.mode_q(rest, p - k - i, mono)
                            for mm, c2 in inner.items():
                                _acc(out, mm, sign * c * c2)
            i += 1
        return out

    # ------------------------------------------------------------------
    # rational-level operator helpers

    def l_op_q(self, k, vec_q):
        """L_k = omega_{(k+1)} on a Fraction-coefficient vector."""
        out = {}
        for mono, c in vec_q.items():
            for om, oc in self._omega.items():
                for mm, c2 in self.mode_q(om, k + 1, mono).items():
                    _acc(out, mm, c * oc * c2)
        return out

    def theta_q(self, vec_q):
        """e^{L_1} (-1)^{L_0}, exact on each monomial (L_1 is nilpotent)."""
        out = {}
        for mono, c in vec_q.items():
            w = sum(mono)
            sign = _ONE if w % 2 == 0 else -_ONE
            cur = {mono: sign * c}
            i = 0
            while cur:
                for mm, cc in cur.items():
                    _acc(out, mm, cc)
                i += 1
                cur = {m2: c2 / i for m2, c2 in self.l_op_q(1, cur).items()}
        return out

    # ------------------------------------------------------------------
    # public Cyc-coefficient vector API

    def lift(self, vec_q):
        F = self.field
        return {m: F.from_rational(c) for m, c in vec_q.items()}

    def mode_vec(self, a_vec, p, b_vec):
        """Bilinear a_{(p)} b on Cyc-coefficient vectors."""
        out = {}
        for am, ac in a_vec.items():
            for bm, bc in b_vec.items():
                cached = self.mode_q(am, p, bm)
                if cached:
                    coeff = ac * bc
                    for mm, q in cached.items():
                        _acc_cyc(out, mm, coeff * q)
        return out

    def l_op(self, k, vec):
        out = {}
        for mono, c in vec.items():
            for mm, q in self.l_op_q(k, {mono: _ONE}).items():
                _acc_cyc(out, mm, c * q)
        return out

    def theta(self, vec):
        out = {}
        for mono, c in vec.items():
            for mm, q in self.theta_q({mono: _ONE}).items():
                _acc_cyc(out, mm, c * q)
        return out

    # ------------------------------------------------------------------
    # automorphism eigendata

    def eigendatum(self, mono, g):
        """j with g.mono = e^{2 pi i j/T} mono, as an int in [0, T)."""
        if g == "id":
            return 0
        # negation: eigenvalue (-1)^{length}
        return (len(mono) % 2) * (self.T // 2)

    def bidegree(self, mono):
        return (self.eigendatum(mono, self.g1), self.eigendatum(mono, self.g2))

    def bidegree_decompose(self, vec):
        out = {}
        for mono, c in vec.items():
            out.setdefault(self.bidegree(mono), {})[mono] = c
        return out

    # ------------------------------------------------------------------
    # contragredient vertex-operator modes

    def y_circ_mode(self, a_vec, m, v_vec):
        """Res_x x^m Y_circ(a, x) v = (-1)^{wt a} sum_i (1/i!) (L_1^i a)_{(2 wt a - i - m - 2)} v."""
        out = {}
        for am, ac in a_vec.items():
            wa = sum(am)
            sign = _ONE if wa % 2 == 0 else -_ONE
            cur = {am: sign}
            i = 0
            while cur:
                for vm, vc in v_vec.items():
                    for mono, c in cur.items():
                        cached = self.mode_q(mono, 2 * wa - i - m - 2, vm)
                        if cached:
                            coeff = ac * vc
                            for mm, q in cached.items():
                                _acc_cyc(out, mm, coeff * (c * q))
                i += 1
                cur = {m2: c2 / i for m2, c2 in self.l_op_q(1, cur).items()}
        return out

    # ------------------------------------------------------------------
    # text format

    def format_monomial(self, mono):
        return "".join(f"{self.gen_letter}[-{p}]" for p in mono) + "|1>"

    def parse_monomial(self, text):
        text = text.strip()
        if not text.endswith("|1>"):
            raise ValueError(f"monomial must end in |1>: {text!r}")
        body = text[:-3]
        if not body:
            return ()
        parts = re.findall(rf"{self.gen_letter}\[(-\d+)\]", body)
        rebuilt = "".join(f"{self.gen_letter}[{p}]" for p in parts)
        if rebuilt != body:
            raise ValueError(f"cannot parse monomial {text!r}")
        mono = tuple(-int(p) for p in parts)
        if any(p < self.min_depth for p in mono) or list(mono) != sorted(mono, reverse=True):
            raise ValueError(f"not a normal-ordered basis monomial: {text!r}")
        return mono


def _acc(out, key, val):
    s = out.get(key)
    s = val if s is None else s + val
    if s:
        out[key] = s
    else:
        out.pop(key, None)


def _acc_cyc(out, key, val):
    if not val:
        return
    s = out.get(key)
    s = val if s is None else s + val
    if s:
        out[key] = s
    else:
        out.pop(key, None)


class AdjointModule:
    """V as a module over itself (integer modes only)."""

    kind = "adjoint-V"
    min_degree = 0

    def __init__(self, voa):
        self.voa = voa
        self.field = voa.field

    def degree(self, mono):
        return Fraction(sum(mono))

    def basis(self, d):
        d = Fraction(d)
        if d.denominator != 1 or d < 0:
            return []
        return self.voa.basis(int(d))

    def basis_upto(self, cap):
        return self.voa.basis_upto(int(cap))

    def col_key(self, mono):
        return self.voa.col_key(mono)

    def mode(self, a_mono, p, v_mono):
        """Cached rational mode dict for a monomial pair."""
        return self.voa.mode_q(a_mono, p, v_mono)

    def mode_vec(self, a_vec, p, v_vec):
        return self.voa.mode_vec(a_vec, p, v_vec)

    def sector(self, a_mono):
        """Coset offset of the mode lattice for the field of a (always 0 here)."""
        return Fraction(0)

    def vacuum(self):
        return {(): self.field.one}

    def format_monomial(self, mono):
        return self.voa.format_monomial(mono)

    def parse_monomial(self, text):
        return self.voa.parse_monomial(text)


def residue_sum(module, a_vec, v_vec, mu, nu):
    """Res_x x^mu (1+x)^nu Y(a, x) v = sum_j binom(nu, j) a_{(mu+j)} v.

    a lives in the VOA, v in the module; mu, nu may be fractional.  The sum
    truncates by grading; modes outside a's sector coset contribute zero.
    """
    out = {}
    voa = module.voa
    mu = Fraction(mu)
    nu = Fraction(nu)
    for am, ac in a_vec.items():
        wa = sum(am)
        off = module.sector(am)
        for vm, vc in v_vec.items():
            coeff0 = ac * vc
            jmax = wa + module.degree(vm) - mu - 1 - module.min_degree
            j = 0
            while j <= jmax:
                p = mu + j
                if (p - off).denominator == 1:
                    binom = gen_binomial(nu, j)
                    if binom:
                        cached = module.mode(am, p, vm)
                        if cached:
                            coeff = coeff0 * binom
                            for mm, q in cached.items():
                                _acc_cyc(out, mm, coeff * q)
                j += 1
    return out


def format_state(module, vec):
    """Deterministic text form: 'coeff * monomial' terms joined by ' + '."""
    if not vec:
        return "0"
    items = sorted(vec.items(), key=lambda kv: (module.degree(kv[0]), kv[0]))
    return " + ".join(f"{c} * {module.format_monomial(m)}" for m, c in items)
