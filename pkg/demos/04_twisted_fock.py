"""The order-2 twisted Fock module and its emergent 1/16 anomaly.

The zero mode of the conformal vector is computed from the twisted mode
calculus alone; its value on the twisted vacuum is not an input anywhere.
"""

from fractions import Fraction

from twistedzhu import TwistedFock, VoaContext, omega_space, zero_mode

ctx = VoaContext("heisenberg", T=2, g1="neg")
module = TwistedFock(ctx)
omega = ctx.conformal_vector()
vac = {(): ctx.field.one}
print("o(omega) |0>_tw =", zero_mode(module, omega, vac))

for n in (Fraction(0), Fraction(1, 2)):
    vecs, stable = omega_space(module, n, int(n) + 2, 5)
    print(f"Omega_{n}: dim {len(vecs)} (stable={stable})")
