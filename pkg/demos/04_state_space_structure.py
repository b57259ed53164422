"""Why the state-space construction works: the structural certificate.

The 2x2 factor is realized as k(z) = C (z^-1 I - A)^-1 B + D.  The product
k*(1/z) k(z) has a realization of twice the state dimension; if k is
all-pass that product is identically the identity, which means a suitable
change of state coordinates must wipe out all coupling blocks at once.
The right coordinates come from the Stein equation X = A^T X A + C^T C.
"""

import numpy as np

from allpass import (
    build_b2,
    solve_stein,
    ss_eval,
    ss_product,
    ss_star,
    state_transform,
    structural_blocks,
)

alpha = 0.5 + 0.5j
w = np.array([1.0, 1.0j]) / np.sqrt(2)
ss, V = build_b2(alpha, w)

print("realization for alpha =", alpha)
print("A =\n", ss.A)
print("B =\n", np.round(ss.B, 6))
print("C =\n", np.round(ss.C, 6))
print("D =\n", np.round(ss.D, 6))

# A's eigenvalues are 1/alpha and its conjugate: the factor's poles in 1/z.
print("\neigenvalues of A:", np.linalg.eigvals(ss.A), " (1/alpha =", 1 / alpha, ")")

# The transfer function matches the rational form everywhere.
z = 0.3 + 0.2j
print("max |k(z) - V(z)| at a test point:", np.max(np.abs(ss_eval(ss, z) - V(z))))

# Compose k*(1/z) k(z): 4 states, and on the circle it is the identity.
comp = ss_product(ss_star(ss), ss)
print("\ncomposed product has", comp.n_states, "states")
zc = np.exp(0.7j)
print("product on the circle:\n", np.round(ss_eval(comp, zc).real, 12))

# Before the transform, the composed realization is dense.
print("\ncomposed A before the state transform:\n", np.round(comp.A, 4))

# The Stein solution produces the certificate coordinates.
X = solve_stein(ss.A, ss.C.T @ ss.C)
M = np.eye(4)
M[:2, 2:] = X
t = state_transform(comp, M)
print("\ncomposed A after the transform (block triangular):\n", np.round(t.A, 12))

blocks = structural_blocks(ss, X)
print("\ncertificate block norms (all should vanish):")
for name, val in blocks.items():
    print(f"  {name:16s} {val:.2e}")
