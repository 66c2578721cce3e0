"""Twisted Zhu algebra quotients at level n.

The quotient A_{g,n}(V) = V / O_{g,n}(V) is modelled by exact elimination
against the circle-product generators; for the free boson with the negation
automorphism the fixed-level quotients collapse to low dimensions.
"""

from fractions import Fraction

from twistedzhu import VoaContext, ZhuQuotient

for (T, g1, n) in [(1, "id", Fraction(0)), (2, "neg", Fraction(0)),
                   (2, "neg", Fraction(1, 2))]:
    ctx = VoaContext("heisenberg", T=T, g1=g1)
    quo = ZhuQuotient(ctx, n, cutoff=6, slack=2)
    print(f"T={T} g1={g1} n={n}: dims by weight", quo.dims_by_weight())
