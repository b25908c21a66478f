#!/usr/bin/env python3
"""Generate extremal (maximum determinant) point sets on the unit sphere.

For polynomial degree q the space of spherical harmonics of degree <= q has
dimension p = (q+1)^2.  An extremal set is a p-point set maximizing the
determinant of the interpolation matrix.  Since det(Y)^2 equals, up to a
constant, det(G) with G_ij = sum_l (2l+1)/(4 pi) P_l(x_i . x_j), we maximize
log det G with L-BFGS from several spherical Fibonacci / random starts and
keep the best local optimum.

The results are locally optimal sets computed here, not copies of a
published table; they are written as sphere_points_pNN.txt with one unit
vector per line.
"""

import argparse
import pathlib

import numpy as np
from numpy.polynomial import legendre
from scipy.optimize import minimize


def kernel_coeffs(q):
    return np.array([(2 * l + 1) / (4 * np.pi) for l in range(q + 1)])


def neg_logdet(flat, q):
    y = flat.reshape(-1, 3)
    norms = np.linalg.norm(y, axis=1)
    x = y / norms[:, None]
    c = kernel_coeffs(q)
    t = np.clip(x @ x.T, -1.0, 1.0)
    g = legendre.legval(t, c)
    dc = legendre.legder(c)
    dg = legendre.legval(t, dc) if len(dc) else np.zeros_like(t)
    sign, logdet = np.linalg.slogdet(g)
    if sign <= 0:
        return 1e10, np.zeros_like(flat)
    ginv = np.linalg.inv(g)
    # d logdet / d x_i = 2 sum_j ginv_ij g'(t_ij) x_j  (j != i)
    w = ginv * dg
    np.fill_diagonal(w, 0.0)
    grad_x = 2.0 * w @ x
    # chain rule through x = y / |y|
    radial = np.sum(grad_x * x, axis=1)
    grad_y = (grad_x - radial[:, None] * x) / norms[:, None]
    return -logdet, -grad_y.ravel()


def fibonacci(p):
    i = np.arange(p) + 0.5
    z = 1.0 - 2.0 * i / p
    r = np.sqrt(1.0 - z * z)
    phi = np.pi * (1.0 + 5 ** 0.5) * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def extremal_points(q, starts, rng):
    p = (q + 1) ** 2
    best = None
    for s in range(starts):
        x0 = fibonacci(p) if s == 0 else rng.normal(size=(p, 3))
        x0 /= np.linalg.norm(x0, axis=1)[:, None]
        res = minimize(neg_logdet, x0.ravel(), args=(q,), jac=True,
                       method="L-BFGS-B",
                       options={"maxiter": 5000, "gtol": 1e-12, "ftol": 1e-15})
        if best is None or res.fun < best[0]:
            best = (res.fun, res.x.reshape(-1, 3))
    x = best[1] / np.linalg.norm(best[1], axis=1)[:, None]
    return x, -best[0]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--qmax", type=int, default=6)
    ap.add_argument("--starts", type=int, default=12)
    ap.add_argument("--seed", type=int, default=20190101)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for q in range(1, args.qmax + 1):
        x, logdet = extremal_points(q, args.starts, rng)
        p = x.shape[0]
        path = out / f"sphere_points_p{p:02d}.txt"
        with open(path, "w") as f:
            for v in x:
                f.write(f"{v[0]: .17e} {v[1]: .17e} {v[2]: .17e}\n")
        print(f"q={q} p={p} logdet={logdet:.12f} -> {path.name}")


if __name__ == "__main__":
    main()
