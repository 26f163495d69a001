"""Why the Bergman kernel fails the CNP test, three ways."""
# %%
import numpy as np

from cnp_lab.cnp import cnp_sample_test, witness_search
from cnp_lab.functions import Mobius, UnimodularScale, coord
from cnp_lab.kernels import Dbr, bergman, normalize_kernel, radial_series, szego
from cnp_lab.series import diagonal_cnp_test

B = bergman()

# %% 1 - 1/k(t) = 2t - t^2: the coefficient of t^2 is already negative
d = diagonal_cnp_test(radial_series(B))
print("1 - 1/k coefficients:", np.round(d.coefficients[:4], 12) + 0.0)
print("first negative:", d.index, d.value)

# %% the same defect seen on two points
v = cnp_sample_test(B, [np.array([[0.5], [-0.5]])])
print(v.verdict, "min eigenvalue", v.min_eigenvalue)

# %% and found without being told where to look
w = witness_search(B)
print("search phase", w.phase, "points", w.points.ravel(), "eig", w.min_eigenvalue)

# %% multiplying by 1 - |b_mu|^2 repairs it: the result is the Szegő kernel
phi = UnimodularScale(1j, Mobius(0.3))
K = normalize_kernel(Dbr(B, phi))
z = np.array([[0.2 + 0.1j], [-0.4j], [0.6]])
print("max |K - S| =", np.abs(K.matrix(z) - szego().matrix(z)).max())

# %% z^2 does not: 1 - 1/k = 2t/(1 + t) alternates
sq = normalize_kernel(Dbr(B, coord(0) ** 2))
print(diagonal_cnp_test(radial_series(sq)).value, witness_search(sq).min_eigenvalue)
