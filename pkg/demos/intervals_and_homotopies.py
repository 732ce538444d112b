# Interval precomplexes and contracting homotopies
#
# A precomplex is a graded vector space with a degree 1 map d and no
# condition on d^2.  The interval X_n has k in degrees 0..n-1 and identity
# maps between them.  We ask the homotopy solver which intervals are
# contractible, and read off a certificate when they are not.

from cdglab.algebras import initial_poly
from cdglab.homotopy import contraction_search, is_homotopy
from cdglab.modules import interval_precomplex

A = initial_poly()
print("algebra:", A.name)

# %% Which intervals admit h with dh + hd = 1?
for n in range(1, 7):
    X = interval_precomplex(1, n, algebra=A)
    S = contraction_search(X)
    print(f"X_{n}: {S.equations} equations in {S.unknowns} unknowns, rank {S.rank}, contractible = {S.found}")

# %% A contracting homotopy of X_4, checked independently
X4 = interval_precomplex(1, 4, algebra=A)
h = contraction_search(X4).homotopy
print("h on X_4:", {d: str(h.block(d).to_rows()[0][0]) for d in range(1, 4)})
print("dh + hd = 1:", is_homotopy(X4, X4, h, X4.identity()))

# %% When no homotopy exists the solver returns a row vector y with yA = 0 and
# yb = 1, which proves the linear system has no solution.
S = contraction_search(interval_precomplex(1, 3, algebra=A))
print("certificate for X_3:", S.to_json()["certificate"])
