"""Boundary matrices, Hodge Laplacians and the exact Hodge decomposition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .complexes import CliqueComplex

ZERO_TOL = 1e-9
PINV_RCOND = 1e-12

HARMONIC, GRADIENT, CURL = "harmonic", "gradient", "curl"


@dataclass(frozen=True)
class BoundaryMatrix:
    """Signed incidence from k-simplices (columns) to (k-1)-simplices (rows)."""

    k: int
    shape: tuple[int, int]
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    def sparse(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.vals, (self.rows, self.cols)), shape=self.shape, dtype=np.int64)

    def dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        out[self.rows, self.cols] = self.vals
        return out


@dataclass(frozen=True)
class HodgeLaplacian:
    k: int
    lower: np.ndarray
    upper: np.ndarray

    @property
    def full(self) -> np.ndarray:
        return self.lower + self.upper

    @property
    def size(self) -> int:
        return self.lower.shape[0]


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    labels: tuple[str, ...]

    def count(self, label: str) -> int:
        return sum(1 for lab in self.labels if lab == label)

    def select(self, label: str) -> tuple[np.ndarray, np.ndarray]:
        mask = np.array([lab == label for lab in self.labels], dtype=bool)
        return self.eigenvalues[mask], self.eigenvectors[:, mask]


def boundary_matrix(K: CliqueComplex, k: int) -> BoundaryMatrix:
    if k < 1:
        raise ValueError("boundary matrix is undefined for k < 1")
    faces = K.index(k - 1)
    simplices = K.simplices(k)
    rows, cols, vals = [], [], []
    for j, s in enumerate(simplices):
        for pos in range(len(s)):
            rows.append(faces[s[:pos] + s[pos + 1:]])
            cols.append(j)
            vals.append(-1 if pos % 2 else 1)
    return BoundaryMatrix(
        k,
        (len(faces), len(simplices)),
        np.asarray(rows, dtype=np.int64),
        np.asarray(cols, dtype=np.int64),
        np.asarray(vals, dtype=np.int64),
    )


def _boundary_or_none(K: CliqueComplex, k: int) -> np.ndarray | None:
    """Dense B_k, or None when that dimension cannot carry simplices."""
    if k < 1 or k > K.n - 1:
        return None
    if not K.has_dim(k):
        raise ValueError(f"dimension {k} is needed but not enumerated (k_max={K.k_max})")
    return boundary_matrix(K, k).dense()


def hodge_laplacian(K: CliqueComplex, k: int) -> HodgeLaplacian:
    n_k = K.count(k)
    b_lo = _boundary_or_none(K, k)
    b_up = _boundary_or_none(K, k + 1)
    lower = np.zeros((n_k, n_k)) if b_lo is None else (b_lo.T @ b_lo).astype(float)
    upper = np.zeros((n_k, n_k)) if b_up is None else (b_up @ b_up.T).astype(float)
    return HodgeLaplacian(k, lower, upper)


def max_degree(lap: HodgeLaplacian) -> int:
    """Largest number of nonzero off-diagonal entries in a row of L_k."""
    full = lap.full.copy()
    if full.size == 0:
        return 0
    np.fill_diagonal(full, 0.0)
    return int(np.max(np.count_nonzero(full, axis=1)))


def _psd_eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh((m + m.T) / 2)
    return w, v


def _range_basis(m: np.ndarray, tol: float = ZERO_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a PSD matrix restricted to eigenvalues above ``tol``."""
    if m.size == 0:
        return np.zeros(0), np.zeros((m.shape[0], 0))
    w, v = _psd_eigh(m)
    keep = w > tol
    return w[keep], v[:, keep]


def spectral_decompose(lap: HodgeLaplacian, zero_tol: float = ZERO_TOL) -> SpectralData:
    """Eigenbasis of L_k adapted to the harmonic/gradient/curl split.

    Gradient and curl vectors come from the nonzero eigenspaces of the lower
    and upper Laplacians separately, so degenerate eigenvalues shared by both
    parts never mix the two subspaces. The harmonic part is the orthogonal
    complement of their span.
    """
    n_k = lap.size
    wg, vg = _range_basis(lap.lower, zero_tol)
    wc, vc = _range_basis(lap.upper, zero_tol)
    nonharm = np.hstack([vg, vc])
    if nonharm.shape[1] < n_k:
        q, _ = np.linalg.qr(np.hstack([nonharm, np.eye(n_k)]))
        vh = q[:, nonharm.shape[1]:n_k]
        # remove round-off leakage into the nonharmonic span
        vh = vh - nonharm @ (nonharm.T @ vh)
        vh, _ = np.linalg.qr(vh)
    else:
        vh = np.zeros((n_k, 0))
    vals = np.concatenate([np.zeros(vh.shape[1]), wg, wc])
    vecs = np.hstack([vh, vg, vc])
    labels = [HARMONIC] * vh.shape[1] + [GRADIENT] * len(wg) + [CURL] * len(wc)
    order = np.argsort(vals, kind="stable")
    return SpectralData(vals[order], vecs[:, order], tuple(labels[i] for i in order))


def classify_vector(v: np.ndarray, b_k: np.ndarray | None, b_k1: np.ndarray | None, tol: float = 1e-8) -> str:
    """Label a vector by the subspace holding (almost) all of its mass."""
    norm = np.linalg.norm(v)
    for label, b in ((GRADIENT, None if b_k is None else b_k.T), (CURL, b_k1)):
        if b is None or b.size == 0:
            continue
        coef, *_ = np.linalg.lstsq(b, v, rcond=None)
        if np.linalg.norm(b @ coef - v) <= tol * max(norm, 1.0):
            return label
    return HARMONIC


def pinv_psd(m: np.ndarray, rcond: float = PINV_RCOND) -> np.ndarray:
    """Pseudoinverse of a symmetric PSD matrix with a relative eigenvalue cutoff."""
    if m.size == 0:
        return np.zeros_like(m, dtype=float)
    w, v = _psd_eigh(m.astype(float))
    top = np.max(np.abs(w))
    cutoff = rcond * (top if top > 0 else 1.0)
    inv = np.zeros_like(w)
    keep = np.abs(w) > cutoff
    inv[keep] = 1.0 / w[keep]
    return (v * inv) @ v.T


def hodge_projectors(K: CliqueComplex, k: int) -> dict[str, np.ndarray]:
    """Exact orthogonal projectors onto the three Hodge subspaces of C_k."""
    n_k = K.count(k)
    b_k = _boundary_or_none(K, k)
    b_k1 = _boundary_or_none(K, k + 1)
    if b_k is None or b_k.size == 0:
        p_grad = np.zeros((n_k, n_k))
    else:
        b = b_k.astype(float)
        p_grad = b.T @ pinv_psd(b @ b.T) @ b
    if b_k1 is None or b_k1.size == 0:
        p_curl = np.zeros((n_k, n_k))
    else:
        b = b_k1.astype(float)
        p_curl = b @ pinv_psd(b.T @ b) @ b.T
    return {"G": p_grad, "C": p_curl, "H": np.eye(n_k) - p_grad - p_curl}


def hodge_project_oracle(s: np.ndarray, K: CliqueComplex, k: int, component: str) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.shape != (K.count(k),):
        raise ValueError(f"signal length {s.shape} does not match n_{k}={K.count(k)}")
    projs = hodge_projectors(K, k)
    if component not in projs:
        raise ValueError(f"component must be one of G, C, H; got {component!r}")
    return projs[component] @ s


def lower_pseudoinverse(K: CliqueComplex, k: int) -> np.ndarray:
    """(B_k^T)^+ : sends a k-signal to the minimum-norm (k-1)-preimage of its gradient part."""
    b = boundary_matrix(K, k).dense().astype(float)
    return pinv_psd(b @ b.T) @ b


def betti_numbers(K: CliqueComplex) -> list[int]:
    out = []
    for k in range(K.k_max + 1):
        if k + 1 <= K.n - 1 and not K.has_dim(k + 1):
            break
        lap = hodge_laplacian(K, k)
        if lap.size == 0:
            out.append(0)
            continue
        w = np.linalg.eigvalsh(lap.full)
        out.append(int(np.sum(np.abs(w) < ZERO_TOL)))
    return out


def smallest_singular_value(K: CliqueComplex, k: int) -> float:
    """Smallest nonzero singular value of B_k (0.0 if B_k vanishes)."""
    b = _boundary_or_none(K, k)
    if b is None or b.size == 0:
        return 0.0
    w = np.linalg.eigvalsh((b.T @ b).astype(float))
    nz = w[w > ZERO_TOL]
    return float(np.sqrt(nz.min())) if nz.size else 0.0
