"""Two-level bimodule products and the quotient dimensions they cut out."""

from fractions import Fraction

from twistedzhu import (BimodQuotient, VoaContext, dj_star, left_action,
                        right_action)

ctx = VoaContext("heisenberg", T=2, g1="neg")
F = Fraction
a = ctx.lift({(1,): F(1)})
n, m = F(1, 2), F(0)

print("a *(n,m) a =", dj_star(ctx, a, a, m, n))
print("right action:", right_action(ctx, a, a, m, n))
print("left action: ", left_action(ctx, a, a, m, n, n))

for kind in ("dagger", "prime"):
    quo = BimodQuotient(ctx, m, n, cutoff=4, slack=2, kind=kind)
    print(f"W/O-{kind} dims:", quo.dims_by_weight())
