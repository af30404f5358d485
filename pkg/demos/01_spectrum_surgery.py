#!/usr/bin/env python3
"""Prescribing the spectrum of a rank-one update.

Weyl's inequality says the eigenvalues of A + cc^T interlace those of
A. This demo exercises the converse: pick ANY interlacing target and
construct the c that realizes it exactly, including targets that keep
repeated eigenvalues pinned in place.
"""

import numpy as np

from seqalloc import converse_weyl, diagonal_update_vector, eig_oracle, rank1_add

np.set_printoptions(precision=6, suppress=True)

print("=== diagonal case ===")
lam = np.array([3.0, 1.0])
target = np.array([4.0, 2.0])
y = diagonal_update_vector(lam, target)
print(f"current spectrum  {lam}")
print(f"target spectrum   {target}")
print(f"update weights y  {y}   (||y||^2 = {y @ y:.6f} = total shift)")
updated = rank1_add(np.diag(lam), y)
print("diag(lam) + y y^T =")
print(updated)
print(f"oracle spectrum   {eig_oracle(updated)[0]}")

print()
print("=== repeated eigenvalues ===")
lam = np.array([2.0, 2.0, 2.0])
target = np.array([5.0, 2.0, 2.0])
y = diagonal_update_vector(lam, target)
print(f"moving one copy of a triple eigenvalue: y = {y}")
print(f"oracle spectrum   {eig_oracle(rank1_add(np.diag(lam), y))[0]}")

print()
print("=== dense symmetric matrix ===")
rng = np.random.default_rng(0)
q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
lam = np.array([9.0, 6.5, 4.0, 2.5, 1.0])
a = q @ np.diag(lam) @ q.T
a = (a + a.T) / 2
target = np.array([10.0, 7.0, 6.0, 3.0, 2.0])
c = converse_weyl(eig_oracle(a), target)
got = eig_oracle(rank1_add(a, c))[0]
print(f"target   {target}")
print(f"achieved {got}")
print(f"worst error {np.max(np.abs(got - target)):.2e}")
