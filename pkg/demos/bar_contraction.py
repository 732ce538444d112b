# Contracting k over the curved algebras k[c] and k[c]/c^n
#
# The trivial module k over k[c] should be contracted by a single A-infinity
# homotopy component h_2 with h_2(c, 1) = +-1.  We check the two signs under
# the two arity conventions, and then check the induced homotopy on a
# truncated bar module directly.

from cdglab import bar
from cdglab.algebras import initial_poly, initial_trunc
from cdglab.modules import interval_precomplex

for A in (initial_poly(), initial_trunc(2), initial_trunc(3)):
    k = interval_precomplex(1, 1, algebra=A)
    print(A.name)
    print("  module identities with m_0 = c:", bar.module_identity_check(A, k, 4).ok)
    for sign in (1, -1):
        passing = bar.conventions_passing(A, k, bar.lemma_h2(A, sign), 6)
        print(f"  h_2 = {sign:+d}: passes under {passing or 'no convention'}")
    rep = bar.ainf_contraction_check(A, k, bar.lemma_h2(A, 1), 6, "shifted")
    f = rep.first_failure()
    if f is not None:
        print(f"  h_2 = +1 first fails at arity {f.p}: {f.witness}")

# %% The bar module B(A) (x) k truncated at word length 4
A = initial_poly()
B = bar.build_bar(A, interval_precomplex(1, 1, algebra=A), 4)
print("words:", len(B.words), "interior:", len(B.interior()))
print("D^2 = 0 on the interior:", B.d_squared_interior().is_zero())
H = lambda lets, m: {m: 1} if lets == ("c",) else {}
print("DH + HD = 1:", bar.bar_contraction_check(B, H) == [])

# %% 1 - psi is invertible when psi lowers word length
Psi = bar.comodule_endomorphism(B, H)
print("decay:", bar.filtration_decay_check(B, Psi).ok)
print("inverse verified:", bar.nilpotent_inverse(B, Psi).verified)
