"""On the bidisc only one-coordinate Möbius maps keep the Szegő transform CNP."""
# %%
from cnp_lab.characterization import classify_bidisc
from cnp_lab.cnp import cnp_sample_test, default_samples, witness_search
from cnp_lab.functions import Mobius, UnimodularScale, coord
from cnp_lab.kernels import Dbr, normalize_kernel, szego
from cnp_lab.runner import terminal_matrix
from cnp_lab.numerics import psd_test

S2 = szego(2)

candidates = {
    "i b_0.3(z2)": UnimodularScale(1j, Mobius(0.3, coord(1))),
    "z1": coord(0),
    "z1 z2": coord(0) * coord(1),
    "(z1 + z2)/2": (coord(0) + coord(1)) * 0.5,
    "z1^2": coord(0) ** 2,
}

# %% classify, then check the verdict against the kernel itself
for name, phi in candidates.items():
    c = classify_bidisc(phi)
    K = normalize_kernel(Dbr(S2, phi))
    w = witness_search(K, random_budget=0)
    v = cnp_sample_test(K, default_samples(K)) if w is None else w.as_verdict()
    print(f"{name:12s} {c.verdict:20s} {v.verdict:18s}",
          "" if w is None else f"points {w.points.round(3).tolist()} eig {w.min_eigenvalue:.4g}")

# %% three variables: even a coordinate leaves a negative 2x2 block
print(terminal_matrix(0.5, 0.5))
print("min eigenvalue", psd_test(terminal_matrix(0.5, 0.5)).min_eigenvalue)
