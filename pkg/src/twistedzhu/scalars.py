"""Exact scalar arithmetic over the cyclotomic field Q(zeta), zeta = exp(i*pi/T).

Every computation in this package runs over Q(zeta_{2T}) for a session
constant T (the order of the relevant automorphism).  Elements are stored
as dense coefficient vectors of rationals in the power basis
1, zeta, ..., zeta^{phi(2T)-1}, reduced modulo the 2T-th cyclotomic
polynomial.  For T = 1 this degenerates to plain rationals; for T = 2 it
is Q(i).  No floats anywhere.

Fractional indices (elements of (1/T)Z) are plain fractions.Fraction
values; the helpers at the bottom validate membership in the session
lattice and expose floor / fractional-part bookkeeping.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

_FZERO = Fraction(0)


def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1) if p and q else []
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] += a * b
    return _poly_trim(out)


def _poly_divmod(p, q):
    # exact division in Q[x]; q must be nonzero
    p = list(p)
    dq = len(q) - 1
    lead = q[-1]
    quot = [0] * max(len(p) - dq, 0)
    while len(p) - 1 >= dq and _poly_trim(p):
        dp = len(p) - 1
        c = Fraction(p[-1], 1) / lead
        quot[dp - dq] = c
        for j, b in enumerate(q):
            p[dp - dq + j] -= c * b
        _poly_trim(p)
    return _poly_trim(quot), p


def cyclotomic_polynomial(n):
    """Coefficients (low degree first, exact ints) of the n-th cyclotomic polynomial."""
    if n == 1:
        return [-1, 1]
    num = [0] * n + [1]
    num[0] = -1  # x^n - 1
    den = [1]
    for d in range(1, n):
        if n % d == 0:
            den = _poly_mul(den, cyclotomic_polynomial(d))
    quot, rem = _poly_divmod(num, den)
    assert not rem
    return [int(c) for c in quot]


class CycField:
    """The field Q(zeta) for zeta = exp(i*pi/T), a primitive 2T-th root of unity."""

    def __init__(self, T):
        if not isinstance(T, int) or T < 1:
            raise ValueError(f"order T must be a positive integer, got {T!r}")
        self.T = T
        self.n = 2 * T
        self.modulus = cyclotomic_polynomial(self.n)
        self.degree = len(self.modulus) - 1
        # T = 2 gives Q(i); other degree-2 cases (e.g. T = 3) have a
        # different modulus and must take the generic route
        self._gauss = self.modulus == [1, 0, 1]
        # zeta^k reduced into the power basis, for k in [0, 2T)
        self._pow = self._power_table()
        self.zero = Cyc(self, (Fraction(0),) * self.degree)
        self.one = self.from_rational(1)

    def _power_table(self):
        d = self.degree
        table = []
        cur = [Fraction(1)] + [Fraction(0)] * (d - 1)
        for _ in range(self.n):
            table.append(tuple(cur))
            nxt = [Fraction(0)] * (d + 1)
            for i, c in enumerate(cur):
                nxt[i + 1] = c
            # fold x^d using the monic modulus
            top = nxt.pop()
            if top:
                for i in range(d):
                    nxt[i] -= top * self.modulus[i]
            cur = nxt
        return table

    def from_rational(self, q):
        c = [Fraction(0)] * self.degree
        c[0] = Fraction(q)
        return Cyc(self, tuple(c))

    def zeta_power(self, k):
        return Cyc(self, self._pow[k % self.n])

    def root_of_unity_power(self, lam):
        """Exact value of exp(i*pi*lam) for lam in (1/T)Z.

        Raises ValueError when lam is not in the session lattice (wrong T).
        """
        lam = Fraction(lam)
        prod = lam * self.T
        if prod.denominator != 1:
            raise ValueError(
                f"exponent {lam} is not a multiple of 1/{self.T} (order mismatch)")
        return self.zeta_power(int(prod))

    def _mul_coeffs(self, a, b):
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        if self._gauss:
            a0, a1 = a
            b0, b1 = b
            if a1:
                if b1:
                    return (a0 * b0 - a1 * b1, a0 * b1 + a1 * b0)
                return (a0 * b0, a1 * b0)
            if b1:
                return (a0 * b0, a0 * b1)
            return (a0 * b0, _FZERO)
        conv = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        out = list(conv[:d])
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c:
                row = self._pow[k % self.n] if k < self.n else None
                if row is None:
                    row = self._reduce_power(k)
                for i in range(d):
                    out[i] += c * row[i]
        return tuple(out)

    def _reduce_power(self, k):
        return self._pow[k % self.n]

    def inv_coeffs(self, a):
        # extended Euclid in Q[x] against the modulus
        r0, r1 = [Fraction(c) for c in self.modulus], _poly_trim(list(a))
        if not r1:
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        s0, s1 = [], [Fraction(1)]
        while True:
            q, r = _poly_divmod(r0, r1)
            if not r:
                break
            s = [Fraction(0)] * max(len(s0), len(q) + len(s1) - 1)
            for i, c in enumerate(s0):
                s[i] += c
            for i, c in enumerate(_poly_mul(q, s1)):
                s[i] -= c
            r0, r1, s0, s1 = r1, r, s1, _poly_trim(s)
        lead = r1[-1] if len(r1) > 1 else r1[0]
        if len(r1) > 1:
            raise ZeroDivisionError("element is a zero divisor (modulus not coprime)")
        inv = [c / lead for c in s1]
        inv += [Fraction(0)] * (self.degree - len(inv))
        return tuple(inv[:self.degree])

    def __repr__(self):
        return f"CycField(T={self.T})"


class Cyc:
    """One element of a CycField; immutable, hashable, exact."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def _check(self, other):
        if self.field is not other.field:
            raise ValueError("mixing scalars from different cyclotomic fields")

    def __add__(self, other):
        self._check(other)
        return Cyc(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return Cyc(self.field, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return Cyc(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Cyc):
            self._check(other)
            return Cyc(self.field, self.field._mul_coeffs(self.coeffs, other.coeffs))
        q = other if type(other) is Fraction else Fraction(other)
        return Cyc(self.field, tuple(a * q for a in self.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        return Cyc(self.field, self.field.inv_coeffs(self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, Cyc) and self.field is other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def rational_part(self):
        return self.coeffs[0]

    def to_json(self):
        return {"poly": [[str(c.numerator), str(c.denominator)] for c in self.coeffs]}

    @staticmethod
    def from_json(field, data):
        poly = [Fraction(int(n), int(d)) for n, d in data["poly"]]
        if len(poly) != field.degree:
            raise ValueError("coefficient vector length does not match field degree")
        return Cyc(field, tuple(poly))

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*z")
            else:
                parts.append(f"{c}*z^{k}")
        if not parts:
            return "(0)"
        return "(" + " + ".join(parts) + ")"

    def __repr__(self):
        return str(self)


def parse_cyc(field, text):
    """Inverse of Cyc.__str__."""
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"malformed scalar {text!r}")
    body = text[1:-1].strip()
    coeffs = [Fraction(0)] * field.degree
    if body != "0":
        for term in body.split(" + "):
            term = term.strip()
            if "*z" in term:
                q, _, zpart = term.partition("*z")
                k = 1 if not zpart else int(zpart.lstrip("^") or 1)
            else:
                q, k = term, 0
            if k >= field.degree:
                raise ValueError(f"power z^{k} outside the reduced basis")
            coeffs[k] += parse_fraction(q)
    return Cyc(field, tuple(coeffs))


def gen_binomial(alpha, i):
    """Generalized binomial coefficient binom(alpha, i) for rational alpha, i >= 0."""
    if i < 0:
        raise ValueError("lower index must be nonnegative")
    alpha = Fraction(alpha)
    out = Fraction(1)
    for k in range(i):
        out *= alpha - k
    for k in range(2, i + 1):
        out /= k
    return out


def check_index(x, T):
    """Validate x in (1/T)Z and return it as a Fraction."""
    x = Fraction(x)
    if (x * T).denominator != 1:
        raise ValueError(f"index {x} is not a multiple of 1/{T}")
    return x


def floor_frac(x):
    """Floor of a Fraction as an int."""
    return Fraction(x).numerator // Fraction(x).denominator


def tilde(x, T):
    """The residue class t with x = floor(x) + t/T, as an int in [0, T)."""
    x = check_index(x, T)
    return int((x - floor_frac(x)) * T)


def parse_fraction(text):
    """Exact 'p/q' or 'p' string to Fraction; floats are rejected."""
    text = str(text).strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"refusing inexact numeric literal {text!r}")
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_fraction(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
