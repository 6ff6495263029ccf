"""The Kohn Laplacian on a Heisenberg box, discretized structure-first.

The horizontal fields X = d/dx + (y/2) d/dt and Y = d/dy - (x/2) d/dt are
discretized as exactly skew-symmetric matrices, so the operator
L = X^T X + Y^T Y is symmetric positive semidefinite by construction and
[Y, X] reproduces the vertical derivative d/dt in the grid interior at
second order.  The discrete spectrum then feeds the Yang-type bound for the
l = 1 Kohn problem.
"""

import numpy as np

from specgap import SpectrumPrefix, compute_bound, kohn_fd
from specgap.bounds import HEISENBERG
from specgap.eigensolve import dense_symmetric_eig

op = kohn_fd(1, (1.0, 1.0, 1.0), (12, 12, 12))
print(f"grid 12^3, dimension {op.dim}")
skew = max(
    float(np.abs((F + F.T).data).max()) if (F + F.T).nnz else 0.0
    for F in (op.x_field, op.y_field)
)
print(f"skewness defect of X, Y: {skew}")
print(f"symmetry defect of L:    {op.symmetry_defect()}")

w = dense_symmetric_eig(op.matrix, want_vectors=False).eigenvalues
print(f"smallest eigenvalue:     {w[0]:.6f} (PSD by the Gram construction)")
print()

# --- commutator consistency under refinement --------------------------------
print("sup |([Y,X] - D_t) u| over the central half-box, smooth test u:")
for N in (8, 16):
    o = kohn_fd(1, (1.0, 1.0, 1.0), (N, N, N))
    h = 1.0 / (N + 1)
    g = -0.5 + h * np.arange(1, N + 1)
    xs, ys, ts = np.meshgrid(g, g, g, indexing="ij")
    u = np.exp(np.sin(2.1 * xs) + np.cos(1.7 * ys) + np.sin(1.3 * ts + 0.2))
    uf = u.ravel()
    r = (o.y_field @ (o.x_field @ uf) - o.x_field @ (o.y_field @ uf) - o.t_field @ uf)
    r = r.reshape(N, N, N)
    mask = (np.abs(xs) <= 0.25) & (np.abs(ys) <= 0.25) & (np.abs(ts) <= 0.25)
    print(f"  N = {N:2d}: residual {np.abs(r[mask]).max():.5f}")
print("  (second-order: the residual drops by about 4 per refinement)")
print()

# --- Yang-type margins along the discrete spectrum ---------------------------
print("l = 1 Kohn bound along the first 20 discrete eigenvalues:")
lam = w[:21]
for k in (1, 5, 10, 15, 20):
    prefix = SpectrumPrefix(lam[:k], n=1, l=1, problem=HEISENBERG)
    bound = compute_bound("kohn-yang-l1", prefix).value
    nxt = lam[k] if k < len(lam) else float("nan")
    print(f"  k = {k:2d}: bound {bound:8.4f}  next eigenvalue {nxt:8.4f}"
          f"  margin {bound - nxt:+.4f}")
