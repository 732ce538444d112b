# A short exact sequence over the dual numbers and its cone
#
# Over A = k[eps] (2-periodic, curvature eps) we take an inclusion
# phi: M' -> M with contractible cokernel M''.  The cone of phi is then
# strictly isomorphic to M'[1] + M, and the solver finds the homotopy on M''.

from cdglab.fixtures import deformation_sequence
from cdglab.homotopy import is_contractible, strict_iso_check
from cdglab.modules import ShortExactSeq, check_module_axioms, reduce_mod_epsilon, verify_ses

P = deformation_sequence()
rows = lambda m: [[str(x) for x in r] for r in m.to_rows()]
for X in (P.sub, P.middle, P.quotient):
    print(f"{X.name}: dims {X.space.dims}, module axioms {check_module_axioms(X).ok}")

print("sequence:", verify_ses(ShortExactSeq(P.phi, P.p)).to_json())
print("homotopy on M'':", is_contractible(P.quotient).to_json())

# %% The cone's differential, block by block
print("cone d (even -> odd):", rows(P.cone.d.block(0)))
print("cone d (odd -> even):", rows(P.cone.d.block(1)))
print("cone = M'[1] + M strictly:", strict_iso_check(P.witness))

# %% Setting eps = 0 leaves an ordinary Z/2 complex
R = reduce_mod_epsilon(P.middle)
print("M mod eps:", rows(R.d.block(0)), rows(R.d.block(1)))
