"""Classical (Torgerson) multidimensional scaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mdmc import CommunityNetwork

OMEGA_DISPLAY_SCALE = 10000.0


@dataclass(frozen=True)
class Layout:
    coords: np.ndarray
    eigenvalues: np.ndarray
    stress_note: float

    def distances(self) -> np.ndarray:
        diff = self.coords[:, None, :] - self.coords[None, :, :]
        return np.sqrt((diff ** 2).sum(axis=2))

    def to_dict(self) -> dict:
        return {
            "coords": self.coords.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "stress_note": self.stress_note,
        }


def jacobi_eigh(a: np.ndarray, tol: float = 1e-15, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns eigenvalues in descending order and the matching eigenvectors as
    columns.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    scale = max(np.abs(a).max(), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt((np.triu(a, 1) ** 2).sum())
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= np.finfo(float).tiny:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    else:
        raise ArithmeticError("Jacobi iteration did not converge")
    vals = np.diag(a).copy()
    order = np.argsort(-vals, kind="stable")
    return vals[order], v[:, order]


def double_center(d: np.ndarray) -> np.ndarray:
    n = d.shape[0]
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    return -0.5 * j @ (d ** 2) @ j


def classical_mds(d: np.ndarray, dims: int = 2) -> Layout:
    """Embed a dissimilarity matrix in ``dims`` dimensions.

    Negative eigenvalues are clamped to zero.  ``stress_note`` is the share of
    the total absolute eigenvalue mass carried by the kept axes, so it drops
    below one for non-Euclidean input or when more axes would be needed.
    Each axis is flipped so that its largest-magnitude coordinate is positive.
    """
    d = np.asarray(d, dtype=float)
    n = d.shape[0]
    if d.shape != (n, n):
        raise ValueError("dissimilarity matrix must be square")
    if dims < 1 or dims > n:
        raise ValueError(f"dims={dims} must lie in 1..{n} (the number of points)")
    if not np.allclose(d, d.T) or np.abs(np.diag(d)).max(initial=0) > 0:
        raise ValueError("dissimilarity matrix must be symmetric with zero diagonal")
    b = double_center(d)
    vals, vecs = jacobi_eigh(b)
    top = vals[:dims]
    coords = vecs[:, :dims] * np.sqrt(np.maximum(top, 0.0))
    for k in range(dims):
        col = coords[:, k]
        if col[np.argmax(np.abs(col))] < 0:
            coords[:, k] = -col
    mass = np.abs(vals).sum()
    note = float(np.maximum(top, 0).sum() / mass) if mass > 0 else 1.0
    return Layout(coords, top, note)


def omega_dissimilarity(cn: CommunityNetwork, scale: float = OMEGA_DISPLAY_SCALE) -> np.ndarray:
    """``1 / (1 + scale * mean(omega[a, b], omega[b, a]))`` with a zero diagonal."""
    sym = 0.5 * (cn.omega + cn.omega.T) * scale
    d = 1.0 / (1.0 + sym)
    np.fill_diagonal(d, 0.0)
    return d


def omega_layout(cn: CommunityNetwork, scale: float = OMEGA_DISPLAY_SCALE) -> Layout:
    k = len(cn.communities)
    if k < 2:
        raise ValueError("need at least two communities to lay out")
    return classical_mds(omega_dissimilarity(cn, scale), dims=2)
