#!/usr/bin/env python3
"""Factor one qudit unitary into rotations: orthogonal x diagonal x orthogonal.

Any U in U(N) splits as exp(i phase) * O1 * D * O2 where O1, O2 are real
special-orthogonal (one y-rotation gate each) and D is a unit-determinant
diagonal (one z-rotation gate). This script walks through the factorization
of a random five-level unitary and shows the angle bookkeeping: N(N-1)/2
free parameters per y rotation and N-1 per z rotation.
"""

import numpy as np

from gcxsynth import (
    dist_up_to_global_phase,
    kak_decompose,
    random_unitary,
    y_rotation_matrix,
    z_rotation_matrix,
)

n = 5
u = random_unitary(n, 2024)
fact = kak_decompose(u)

print(f"input: Haar-random {n}x{n} unitary")
print(f"stripped global phase: {fact.phase:+.6f}")
print(f"z-rotation angles ({n - 1} free parameters):")
print(" ", np.round(fact.z_angles, 6))
print(f"y-rotation angles of O1 ({n * (n - 1) // 2} free parameters):")
print(" ", np.round(fact.y_angles1, 6))

# reconstruct from the angle vectors alone
rebuilt = (np.exp(1j * fact.phase)
           * y_rotation_matrix(n, fact.y_angles1)
           @ z_rotation_matrix(n, fact.z_angles)
           @ y_rotation_matrix(n, fact.y_angles2))
print(f"reconstruction residual: {np.linalg.norm(rebuilt - u):.3e}")

# the orthogonal factors are genuinely real and special
for name, o in (("O1", fact.o1), ("O2", fact.o2)):
    print(f"{name}: orthogonality {np.linalg.norm(o.T @ o - np.eye(n)):.1e}, "
          f"det {np.linalg.det(o):+.12f}")

# a degenerate input exercises the eigenvalue-grouping path
perm = np.eye(4)[[1, 0, 3, 2]]
fact = kak_decompose(perm)
print("\ndouble-swap permutation factors with residual "
      f"{dist_up_to_global_phase(fact.matrix(), perm):.3e}")
