"""Exact cyclotomic scalars: the coefficient field behind every computation.

All arithmetic is done in Q(zeta_{2T}) with zeta = e^{i pi / T}, so the
branch (-1)^lambda = e^{i pi lambda} of fractional powers of -1 is an honest
field element, never a float.
"""

from fractions import Fraction

from twistedzhu import CycField, gen_binomial

field = CycField(2)   # T = 2: the field is Q(i)
i_unit = field.zeta_power(1)
print("zeta =", i_unit, " zeta^2 =", i_unit * i_unit)

half = Fraction(1, 2)
s = field.root_of_unity_power(-half)   # (-1)^{-1/2}
print("(-1)^{-1/2} =", s, " square =", s * s)

print("binom(-3/2, 4) =", gen_binomial(Fraction(-3, 2), 4))
print("binom(5, 2)    =", gen_binomial(Fraction(5), 2))
