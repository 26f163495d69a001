"""Weighted Bergman kernels 1/(1 - zw̄)^p: the split of 1 - 1/k and its limits."""
# %%
import numpy as np

from cnp_lab import characterization as ch
from cnp_lab.kernels import WeightedBergman, radial_series
from cnp_lab.sampling import random_points
from cnp_lab.series import diagonal_cnp_test

# %% coefficients of 1 - (1 - t)^p; for fractional p the signs do not simply alternate
for p in (2.0, 3.0, 3.5, 4.0):
    d = ch.weighted_bergman_coefficients(p, 8)
    print(f"p={p}", np.round(d, 4) + 0.0)

# %% the positive and negative parts as rows g, f; residual against the tail bound
rng = np.random.default_rng(1)
for p in (3.0, 3.5, 4.0):
    dp = ch.decompose_weighted_bergman(p, 32, 0.6)
    xs = random_points(rng, dp.kernel.domain, 0.6, (500,))
    ys = random_points(rng, dp.kernel.domain, 0.6, (500,))
    print(f"p={p} widths g={dp.g.width} f={dp.f.width} residual {dp.max_residual(xs, ys):.2e}"
          f" bound {dp.residual_bound:.1e} {dp.notes[0]}")

# %% every p > 1 fails the coefficient test at t^2
for p in (1.5, 2.5, 3.0, 4.0):
    d = diagonal_cnp_test(radial_series(WeightedBergman(p)))
    print(f"p={p}: index {d.index}, value {d.value}, -p(p-1)/2 = {-p * (p - 1) / 2}")

# %% the obstruction: a product of two contractions cannot reach sqrt((p-1)/2) > 1
for p in (3, 4, 6, 10):
    print(p, ch.weighted_bergman_obstruction(p))
