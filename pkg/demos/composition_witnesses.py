"""Explicit Ψ with g ψ₁(φ) = f and u ψ₂(φ) = φ, checked on samples."""
# %%
import numpy as np

from cnp_lab import characterization as ch
from cnp_lab.functions import Polynomial, coord, polydisc
from cnp_lab.sampling import random_points

pts = random_points(np.random.default_rng(0), polydisc(1), 0.6, (200,))

# %% φ(z) = az/(1 - bz) on the Szegő kernel
a, b = 0.5, 0.5
phi = ch.example25_multiplier(a, b)
print("Szegő", ch.verify_characterization(ch.decompose_cnp(coord(0)), phi,
                                          ch.example25_witness(a, b), pts).line())
print("identity", ch.verify_chu_identity(phi, Polynomial((a, b))).line())
print("z^2", ch.verify_chu_identity(coord(0) ** 2, Polynomial((a, b))).line())

# %% a one-parameter family whose f row is an infinite geometric sequence
for a in (0.3, 0.5, 0.9):
    dp = ch.decompose_example33_1(coord(0), a, 64, 0.6)
    rep = ch.verify_characterization(dp, coord(0), ch.example33_1_witness(a, 64), pts)
    print(f"a={a}", dp.notes[0], rep.line())

# %% the θ family: the witness is diagonal
dp = ch.decompose_example33_2(0.6, 0.1, 0.5, 64, 0.6)
print(ch.verify_characterization(dp, 0.6 * coord(0), ch.example33_2_witness(0.6, 0.1, 0.5), pts).line())

# %% wrong φ, right Ψ: the defect is visible
print(ch.verify_characterization(dp, 0.5 * coord(0), ch.example33_2_witness(0.6, 0.1, 0.5), pts).line())
