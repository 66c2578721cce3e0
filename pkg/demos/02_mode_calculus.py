"""Mode products in the free boson and universal Virasoro backends.

States are sparse integer-partition monomials; a_{(p)} b is computed by the
exact commutation rules, and standard identities hold on the nose.
"""

from fractions import Fraction

from twistedzhu import VoaContext
from twistedzhu.voa import format_state, AdjointModule

heis = VoaContext("heisenberg")
a = {(1,): Fraction(1)}                 # alpha_{-1}|0>
out = heis.mode_q((1,), 1, (1,))        # alpha-weight-1 mode acting
print("a_(1) a =", out)                 # central term <a,a>|0>

omega = heis.conformal_vector()
vec = heis.lift({(2, 1): Fraction(1)})
print("L_0 eigenvalue check:",
      format_state(AdjointModule(heis), heis.l_op(0, vec)))

vir = VoaContext("virasoro", central_charge=Fraction(1, 2))
braket = vir.mode_q((2,), 3, (2,))      # [L_1, L_{-2}]-type contraction
print("virasoro central term:", braket)
