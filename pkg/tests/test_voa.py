"""Mode-calculus kernel: commutators, iterates, skew symmetry, theta, pairings.

The gram-form oracle below is an independent recursion (generator-level
adjoints only) used to pin down derived values for composite modes and
the contragredient operator.
"""

from fractions import Fraction

import pytest

from twistedzhu.scalars import parse_cyc
from twistedzhu.voa import AdjointModule, VoaContext, format_state, residue_sum

HALF = Fraction(1, 2)


def heis(T=1, g1="id"):
    return VoaContext("heisenberg", T=T, g1=g1)


def vir(c, T=1):
    return VoaContext("virasoro", central_charge=c, T=T)


# ----------------------------------------------------------------------
# gram-form oracle: <x_{-n} u, v> = <u, x_n v>, <vac, vac> = 1


def gram(ctx, u_mono, v_q):
    if not u_mono:
        return v_q.get((), Fraction(0))
    n = u_mono[0]
    if ctx.backend == "heisenberg":
        # invariant form: <a_{-n} u, v> = (-1)^{wt a} <u, a_n v>, wt a = 1
        return -gram(ctx, u_mono[1:], ctx.gen_mode_q(n, v_q))
    # <L_{-n} u, v> = <u, L_n v>; omega_(n+1) = L_n
    return gram(ctx, u_mono[1:], ctx.gen_mode_q(n + 1, v_q))


def gram_vec(ctx, u_q, v_q):
    return sum((c * gram(ctx, m, v_q) for m, c in u_q.items()), Fraction(0))


# ----------------------------------------------------------------------


def test_heisenberg_generator_modes():
    ctx = heis()
    assert ctx._gen_apply(1, (1,)) == {(): 1}
    assert ctx._gen_apply(0, (1,)) == {}
    assert ctx._gen_apply(2, (1,)) == {}
    assert ctx._gen_apply(-2, (1,)) == {(2, 1): 1}
    assert ctx._gen_apply(-1, (2,)) == {(2, 1): 1}
    assert ctx._gen_apply(1, (1, 1, 1)) == {(1, 1): 3}


def test_virasoro_generator_modes():
    c = Fraction(1, 2)
    ctx = vir(c)
    # [L_2, L_{-2}] vac = 4 L_0 vac + (c/2) vac = (c/2) vac
    assert ctx._gen_apply(3, (2,)) == {(): c / 2}
    # L_1 L_{-2} vac = 3 L_{-1} vac = 0
    assert ctx._gen_apply(2, (2,)) == {}
    # L_{-2} L_{-3} vac = L_{-3} L_{-2} vac + [L_{-2}, L_{-3}] vac
    out = ctx._gen_apply(-1, (3,))  # omega_(-1) = L_{-2} applied to L_{-3} vac
    assert out == {(3, 2): 1, (5,): 1}


def test_virasoro_commutator_grid():
    c = Fraction(-7, 10)
    ctx = vir(c)
    # oracle: [L_m, L_n] = (m-n) L_{m+n} + c (m^3-m)/12 delta_{m+n,0}
    for m in range(-3, 4):
        for n in range(-3, 4):
            for b in ctx.basis_upto(4):
                bq = {b: Fraction(1)}
                lm = lambda v, k: ctx.l_op_q(k, v)
                lhs = _qsub(lm(lm(bq, n), m), lm(lm(bq, m), n))
                rhs = _qscale(lm(bq, m + n), Fraction(m - n))
                if m + n == 0:
                    rhs = _qadd(rhs, _qscale(bq, c * Fraction(m**3 - m, 12)))
                assert lhs == rhs, (m, n, b)


def _qadd(u, v):
    out = dict(u)
    for k, x in v.items():
        s = out.get(k, Fraction(0)) + x
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _qsub(u, v):
    return _qadd(u, {k: -x for k, x in v.items()})


def _qscale(u, q):
    return {k: q * x for k, x in u.items()} if q else {}


def test_mode_identities():
    ctx = heis()
    alpha = (1,)
    # vacuum field: vac_{(p)} = delta_{p,-1} id
    assert ctx.mode_q((), -1, (2, 1)) == {(2, 1): 1}
    assert ctx.mode_q((), 0, (2, 1)) == {}
    # creation: a_{(-1)} vac recreates a
    for mono in ctx.basis_upto(4):
        assert ctx.mode_q(mono, -1, ()) == {mono: 1}
    # translation axiom: a_{(-2)} vac = L_{-1} a
    for mono in ctx.basis_upto(4):
        assert ctx.mode_q(mono, -2, ()) == ctx.l_op_q(-1, {mono: Fraction(1)})
    assert ctx.mode_q(alpha, 1, alpha) == {(): 1}
    assert ctx.mode_q(alpha, 0, alpha) == {}
    # fractional mode on the untwisted module vanishes
    assert ctx.mode_q(alpha, HALF, alpha) == {}


def test_iterate_hand_value():
    ctx = heis()
    # (a_{-1} a)_{(-1)} a = a_{-1}^3 vac + 2 a_{-3} vac (Wick oracle, by hand)
    out = ctx.mode_q((1, 1), -1, (1,))
    assert out == {(1, 1, 1): 1, (3,): 2}
    out0 = ctx.mode_q((1, 1), 0, (1,))
    assert out0 == {(2,): 2}


def test_grading():
    for ctx in (heis(), vir(Fraction(1, 2))):
        for a in ctx.basis_upto(4):
            for b in ctx.basis_upto(3):
                for p in range(-5, 7):
                    out = ctx.mode_q(a, p, b)
                    for mono in out:
                        assert sum(mono) == sum(a) + sum(b) - p - 1


def test_l_zero_is_weight():
    for ctx in (heis(), vir(Fraction(3, 4))):
        for mono in ctx.basis_upto(5):
            assert ctx.l_op_q(0, {mono: Fraction(1)}) == \
                ({mono: Fraction(sum(mono))} if sum(mono) else {})


def test_skew_symmetry():
    # b_{(n)} a = sum_i (-1)^{n+1+i} (1/i!) L_{-1}^i (a_{(n+i)} b), weight <= 4, |n| <= 6
    for ctx in (heis(), vir(Fraction(1, 2))):
        basis = ctx.basis_upto(4)
        for a in basis:
            for b in basis:
                for n in range(-6, 7):
                    lhs = ctx.mode_q(b, n, a)
                    rhs = {}
                    # modes vanish once n + i exceeds wt a + wt b - 1
                    for i in range(0, max(sum(a) + sum(b) - n, 0) + 1):
                        cur = ctx.mode_q(a, n + i, b)
                        if not cur:
                            continue
                        for _ in range(i):
                            cur = ctx.l_op_q(-1, cur)
                        sign = Fraction(1) if (n + 1 + i) % 2 == 0 else Fraction(-1)
                        rhs = _qadd(rhs, _qscale(cur, sign / _fact(i)))
                    assert lhs == rhs, (ctx.backend, a, b, n)


def _fact(i):
    out = 1
    for k in range(2, i + 1):
        out *= k
    return out


def test_borcherds_commutator():
    # [a_{(m)}, b_{(n)}] = sum_i binom(m, i) (a_{(i)} b)_{(m+n-i)} on weight <= 4 states
    from twistedzhu.scalars import gen_binomial
    for ctx in (heis(), vir(Fraction(1, 2))):
        basis3 = ctx.basis_upto(3)
        targets = ctx.basis_upto(4)
        for a in basis3:
            for b in basis3:
                for m in range(-2, 4):
                    for n in range(-2, 4):
                        for v in targets:
                            vq = {v: Fraction(1)}
                            bn = ctx.mode_q(b, n, v)
                            lhs = {}
                            for mm, c in bn.items():
                                lhs = _qadd(lhs, _qscale(ctx.mode_q(a, m, mm), c))
                            am = ctx.mode_q(a, m, v)
                            for mm, c in am.items():
                                lhs = _qsub(lhs, _qscale(ctx.mode_q(b, n, mm), c))
                            rhs = {}
                            for i in range(0, sum(a) + sum(b) + 2):
                                coeff = gen_binomial(m, i)
                                if not coeff:
                                    continue
                                ab = ctx.mode_q(a, i, b)
                                for mm, c in ab.items():
                                    rhs = _qadd(rhs,
                                                _qscale(ctx.mode_q(mm, m + n - i, v), coeff * c))
                            assert lhs == rhs, (ctx.backend, a, b, m, n, v)


def test_l1_conjugation_samples():
    # x1^{-L_0} e^{x L_1} x1^{L_0} a = e^{x x1 L_1} a on weight <= 5 monomials
    vals = [Fraction(1), Fraction(-1), Fraction(2), HALF]
    for ctx in (heis(), vir(Fraction(1, 2))):
        for a in ctx.basis_upto(5):
            for x in vals:
                for x1 in vals:
                    lhs = {}
                    cur = {a: x1 ** sum(a)}
                    i = 0
                    while cur:
                        for m, c in cur.items():
                            lhs = _qadd(lhs, {m: c * x1 ** Fraction(-sum(m))})
                        i += 1
                        cur = _qscale(ctx.l_op_q(1, cur), x / i)
                    rhs = {}
                    cur = {a: Fraction(1)}
                    i = 0
                    while cur:
                        rhs = _qadd(rhs, cur)
                        i += 1
                        cur = _qscale(ctx.l_op_q(1, cur), x * x1 / i)
                    assert lhs == rhs


def test_theta():
    ctx = heis()
    assert ctx.theta_q({(): Fraction(1)}) == {(): 1}
    assert ctx.theta_q({(1,): Fraction(1)}) == {(1,): -1}
    # theta(omega) = omega for both backends
    assert ctx.theta_q({(1, 1): HALF}) == {(1, 1): HALF}
    ctxv = vir(Fraction(1, 2))
    assert ctxv.theta_q({(2,): Fraction(1)}) == {(2,): 1}


def test_theta_involution():
    for ctx in (heis(), vir(Fraction(2, 7))):
        for mono in ctx.basis_upto(5):
            assert ctx.theta_q(ctx.theta_q({mono: Fraction(1)})) == {mono: 1}


def test_y_circ_against_gram_oracle():
    # <a_{(n)} b, c> = <b, y_circ_mode(a, n, c)>
    for ctx in (heis(), vir(Fraction(1, 2))):
        basis = ctx.basis_upto(3)
        for a in basis:
            av = ctx.lift({a: Fraction(1)})
            for b in basis:
                for cm in basis:
                    for n in range(-4, 5):
                        lhs = gram(ctx, cm, ctx.mode_q(a, n, b))
                        circ = ctx.y_circ_mode(av, n, ctx.lift({cm: Fraction(1)}))
                        circ_q = {m: c.rational_part() for m, c in circ.items()}
                        assert all(c.is_rational() for c in circ.values())
                        rhs = gram(ctx, b, circ_q)
                        assert lhs == rhs, (ctx.backend, a, b, cm, n)


def test_y_circ_frozen_values():
    ctx = heis()
    alpha = ctx.lift({(1,): Fraction(1)})
    # y_circ_mode(alpha, m, v) = -alpha_{(-m)} v; frozen from the gram oracle
    out = ctx.y_circ_mode(alpha, -1, alpha)
    assert out == {(): -ctx.field.one}
    assert ctx.y_circ_mode(alpha, 0, alpha) == {}


def test_bidegree():
    ctx = heis(T=2, g1="neg")
    assert ctx.bidegree(()) == (0, 0)
    assert ctx.bidegree((1,)) == (1, 1)
    assert ctx.bidegree((1, 1)) == (0, 0)
    dec = ctx.bidegree_decompose(ctx.lift({(1,): Fraction(2), (1, 1): Fraction(3)}))
    assert set(dec) == {(1, 1), (0, 0)}
    ctx_id = heis(T=1)
    assert ctx_id.bidegree((1,)) == (0, 0)


def test_automorphism_validation():
    with pytest.raises(ValueError):
        VoaContext("virasoro", central_charge=1, g1="neg")
    with pytest.raises(ValueError):
        VoaContext("heisenberg", T=1, g1="neg")
    with pytest.raises(ValueError):
        VoaContext("heisenberg", T=0)


def test_memoization_invisible():
    warm = heis()
    a, b = (2, 1), (1, 1)
    r1 = warm.mode_q(a, -1, b)
    r2 = warm.mode_q(a, -1, b)
    cold = heis()
    assert r1 == r2 == cold.mode_q(a, -1, b)


def test_residue_sum_matches_direct_expansion():
    ctx = heis()
    mod = AdjointModule(ctx)
    alpha = ctx.lift({(1,): Fraction(1)})
    v = ctx.lift({(1,): Fraction(1)})
    # Res_x x^{-2} (1+x)^1 Y(a,x) v = a_{(-2)} v + a_{(-1)} v
    out = residue_sum(mod, alpha, v, Fraction(-2), Fraction(1))
    expect = ctx.lift(_qadd(ctx.mode_q((1,), -2, (1,)), ctx.mode_q((1,), -1, (1,))))
    assert out == expect
    # fractional nu: binomial series truncated by grading; binom(1/2, j) for
    # j = 0..3 is 1, 1/2, -1/8, 1/16
    out2 = residue_sum(mod, alpha, v, Fraction(-2), HALF)
    expect2 = ctx.lift(_qadd(
        _qadd(ctx.mode_q((1,), -2, (1,)), _qscale(ctx.mode_q((1,), -1, (1,)), HALF)),
        _qadd(_qscale(ctx.mode_q((1,), 0, (1,)), Fraction(-1, 8)),
              _qscale(ctx.mode_q((1,), 1, (1,)), Fraction(1, 16)))))
    assert out2 == expect2


def test_monomial_text_roundtrip():
    ctx = heis()
    assert ctx.format_monomial((3, 1)) == "a[-3]a[-1]|1>"
    assert ctx.format_monomial(()) == "|1>"
    assert ctx.parse_monomial("a[-3]a[-1]|1>") == (3, 1)
    assert ctx.parse_monomial("|1>") == ()
    ctxv = vir(Fraction(1, 2))
    assert ctxv.format_monomial((4, 2)) == "L[-4]L[-2]|1>"
    assert ctxv.parse_monomial("L[-4]L[-2]|1>") == (4, 2)
    with pytest.raises(ValueError):
        ctx.parse_monomial("a[-1]a[-3]|1>")
    with pytest.raises(ValueError):
        ctxv.parse_monomial("L[-1]|1>")


def test_state_text_format():
    ctx = heis()
    mod = AdjointModule(ctx)
    vec = {(1, 1): ctx.field.from_rational(HALF), (2,): ctx.field.one}
    txt = format_state(mod, vec)
    assert txt == "(1/2) * a[-1]a[-1]|1> + (1) * a[-2]|1>"
    assert format_state(mod, {}) == "0"
    coeff = parse_cyc(ctx.field, "(1/2)")
    assert coeff == ctx.field.from_rational(HALF)
