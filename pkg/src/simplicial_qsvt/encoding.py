"""Simplex basis encodings, simplex projectors and projected unitary encodings.

Direct encoding: a simplex is the n-bit characteristic vector of its vertex
set, vertex 1 being the most significant bit.

Compact encoding: a simplex is a word of base-(n+1) registers holding its
vertices in increasing order, padded with the reserved value 0 when the state
space has more registers than the simplex has vertices. Register 0 is the
most significant digit.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .complexes import CliqueComplex, Simplex, is_member
from .homology import boundary_matrix

DIRECT, COMPACT = "direct", "compact"
# dense operators are held as complex matrices; states only as vectors
MATRIX_CAP = 2**12
STATE_CAP = 2**20


@dataclass(frozen=True)
class BasisEncoding:
    kind: str
    n: int
    k: int
    extra_register: bool = False

    def __post_init__(self):
        if self.kind not in (DIRECT, COMPACT):
            raise ValueError(f"encoding must be 'direct' or 'compact', got {self.kind!r}")

    @property
    def registers(self) -> int:
        return self.k + 1 + int(self.extra_register)

    @property
    def dim(self) -> int:
        if self.kind == DIRECT:
            return 2**self.n
        return (self.n + 1) ** self.registers

    def index(self, simplex: Simplex) -> int:
        if self.kind == DIRECT:
            return sum(1 << (self.n - v) for v in simplex)
        if len(simplex) > self.registers:
            raise ValueError(f"simplex {simplex} needs more than {self.registers} registers")
        word = tuple(simplex) + (0,) * (self.registers - len(simplex))
        out = 0
        for q in word:
            out = out * (self.n + 1) + q
        return out

    def decode(self, index: int) -> tuple[int, ...]:
        """Basis index -> vertex tuple (direct) or raw register word (compact)."""
        if self.kind == DIRECT:
            return tuple(v for v in range(1, self.n + 1) if index >> (self.n - v) & 1)
        word = []
        for _ in range(self.registers):
            index, q = divmod(index, self.n + 1)
            word.append(q)
        return tuple(reversed(word))


def encoding_for(K: CliqueComplex, k: int, kind: str, upper_path: bool = False) -> BasisEncoding:
    return BasisEncoding(kind, K.n, k, extra_register=upper_path and kind == COMPACT)


def alpha(kind: str, n: int, k: int) -> float:
    """Scale of the boundary encoding of B_k."""
    if kind == DIRECT:
        return math.sqrt(n)
    return math.sqrt((n + 1) * (k + 1))


def boundary_ancillas(kind: str, k: int) -> int:
    return 0 if kind == DIRECT else int(math.ceil(math.log2(k + 1)))


def _check_cap(dim: int, cap: int = STATE_CAP):
    if dim > cap:
        kind = "dense operator" if cap == MATRIX_CAP else "state space"
        raise ValueError(f"{kind} of dimension {dim} exceeds the cap {cap}")


# Signals -------------------------------------------------------------------


@dataclass(frozen=True)
class SignalState:
    encoding: BasisEncoding
    amplitudes: np.ndarray
    indices: np.ndarray
    norm: float


def simplex_indices(K: CliqueComplex, k: int, enc: BasisEncoding) -> np.ndarray:
    return np.array([enc.index(s) for s in K.simplices(k)], dtype=np.int64)


def encode_signal(s, K: CliqueComplex, k: int, enc: BasisEncoding) -> SignalState:
    s = np.asarray(s, dtype=float)
    if s.shape != (K.count(k),):
        raise ValueError(f"signal length {s.shape} does not match n_{k}={K.count(k)}")
    norm = float(np.linalg.norm(s))
    if norm == 0.0:
        raise ValueError("cannot encode a zero signal")
    idx = simplex_indices(K, k, enc)
    amp = np.zeros(enc.dim, dtype=complex)
    amp[idx] = s / norm
    return SignalState(enc, amp, idx, norm)


def decode_signal(amplitudes, K: CliqueComplex, k: int, enc: BasisEncoding) -> np.ndarray:
    return np.asarray(amplitudes)[simplex_indices(K, k, enc)]


# Projectors ----------------------------------------------------------------


def membership_mask(K: CliqueComplex, k: int, enc: BasisEncoding) -> np.ndarray:
    """Diagonal of the k-simplex projector, evaluated state by state with the predicate."""
    _check_cap(enc.dim)
    g = K.graph
    mask = np.zeros(enc.dim, dtype=bool)
    for i in range(enc.dim):
        word = enc.decode(i)
        if enc.kind == DIRECT:
            mask[i] = len(word) == k + 1 and is_member(word, g)
        else:
            head, tail = word[: k + 1], word[k + 1:]
            mask[i] = len(head) == k + 1 and not any(tail) and is_member(head, g)
    return mask


def simplex_mask(K: CliqueComplex, k: int, enc: BasisEncoding) -> np.ndarray:
    """Same diagonal as ``membership_mask``, built from the enumerated simplex list."""
    mask = np.zeros(enc.dim, dtype=bool)
    if 0 <= k <= K.k_max:
        mask[simplex_indices(K, k, enc)] = True
    return mask


def simplex_projector(K: CliqueComplex, k: int, enc: BasisEncoding, with_extra_zero_register: bool = False) -> np.ndarray:
    if with_extra_zero_register and enc.kind == COMPACT and not enc.extra_register:
        enc = BasisEncoding(enc.kind, enc.n, enc.k, True)
    return np.diag(membership_mask(K, k, enc).astype(float))


def cpinot(projector) -> np.ndarray:
    """C_Pi NOT = Pi (x) X + (I - Pi) (x) I on system (x) flag qubit."""
    p = np.asarray(projector, dtype=float)
    if p.ndim == 1:
        p = np.diag(p)
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    return np.kron(p, x) + np.kron(np.eye(len(p)) - p, np.eye(2))


def dirac_operator(n: int) -> np.ndarray:
    """sum_i Z^(i-1) (x) X (x) I^(n-i), as an integer matrix."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_cap(2**n, MATRIX_CAP)
    z = np.diag([1, -1])
    x = np.array([[0, 1], [1, 0]])
    out = np.zeros((2**n, 2**n), dtype=np.int64)
    for i in range(n):
        term = np.ones((1, 1), dtype=np.int64)
        for j in range(n):
            term = np.kron(term, z if j < i else x if j == i else np.eye(2, dtype=np.int64))
        out += term
    return out


def dirac_applier(n: int):
    """v -> (D / sqrt n) v without forming D; D is real symmetric, so this is also its adjoint.

    The i-th term flips bit n-i and picks up the parity of the higher bits.
    """
    _check_cap(2**n)
    idx = np.arange(2**n)
    flips, signs = [], []
    for i in range(1, n + 1):
        flips.append(idx ^ (1 << (n - i)))
        higher = idx >> (n - i + 1)
        parity = np.array([bin(h).count("1") & 1 for h in higher]) if i > 1 else np.zeros(len(idx), dtype=int)
        signs.append(1.0 - 2.0 * parity)
    scale = 1.0 / math.sqrt(n)

    def apply(v, counter=None):
        v = np.asarray(v, dtype=complex)
        shape = (slice(None),) + (None,) * (v.ndim - 1)
        out = np.zeros_like(v)
        for flip, sign in zip(flips, signs):
            out += sign[shape] * v[flip]
        return scale * out

    return apply


# Projected unitary encodings ----------------------------------------------


class PUE:
    """Unitary U with diagonal projectors such that Pi' U Pi holds A / alpha.

    The full space is ancilla (x) system with ``anc_dim`` ancilla levels; the
    projectors already include the all-zero ancilla condition. ``ancillas`` is
    the logical qubit count used for bookkeeping, which may exceed the
    simulated register when idle ancillas are not materialized.

    Large composite encodings are not built eagerly: ``apply`` may act through
    a structured routine, and the dense ``unitary`` is assembled on demand.
    """

    def __init__(
        self,
        left_mask: np.ndarray,
        right_mask: np.ndarray,
        alpha: float,
        ancillas: int,
        anc_dim: int = 1,
        error: float = 0.0,
        unitary: np.ndarray | None = None,
        applier: Callable | None = None,
        adjoint_applier: Callable | None = None,
        tag: str = "",
        dagger: bool = False,
        info: dict | None = None,
    ):
        if unitary is None and applier is None:
            raise ValueError("a PUE needs a unitary or an applier")
        self.left_mask = np.asarray(left_mask, dtype=bool)
        self.right_mask = np.asarray(right_mask, dtype=bool)
        if self.left_mask.shape != self.right_mask.shape:
            raise ValueError("projector dimensions differ")
        if unitary is not None and unitary.shape != (self.dim, self.dim):
            raise ValueError(f"unitary shape {unitary.shape} does not match projectors of size {self.dim}")
        if self.dim % anc_dim:
            raise ValueError("ancilla dimension does not divide the space")
        _check_cap(self.dim)
        self.alpha = float(alpha)
        self.ancillas = int(ancillas)
        self.anc_dim = int(anc_dim)
        self.error = float(error)
        self.tag = tag
        self.dagger = dagger
        self.info = dict(info or {})
        self._unitary = unitary
        self._applier = applier
        self._adjoint_applier = adjoint_applier

    @property
    def dim(self) -> int:
        return len(self.left_mask)

    @property
    def sys_dim(self) -> int:
        return self.dim // self.anc_dim

    @property
    def unitary(self) -> np.ndarray:
        if self._unitary is None:
            _check_cap(self.dim, MATRIX_CAP)
            self._unitary = self._applier(np.eye(self.dim, dtype=complex), None)
        return self._unitary

    @property
    def left_projector(self) -> np.ndarray:
        return np.diag(self.left_mask.astype(float))

    @property
    def right_projector(self) -> np.ndarray:
        return np.diag(self.right_mask.astype(float))

    def apply(self, v: np.ndarray, counter=None) -> np.ndarray:
        """U v; structured encodings report their inner queries to ``counter``."""
        if self._applier is not None:
            return self._applier(v, counter)
        return self._unitary @ v

    def apply_adjoint(self, v: np.ndarray, counter=None) -> np.ndarray:
        if self._adjoint_applier is not None:
            return self._adjoint_applier(v, counter)
        return self.unitary.conj().T @ v

    def block(self) -> np.ndarray:
        """Pi' U Pi restricted to the projector images (rows: left, columns: right)."""
        cols = np.flatnonzero(self.right_mask)
        probe = np.zeros((self.dim, len(cols)), dtype=complex)
        probe[cols, np.arange(len(cols))] = 1.0
        return self.apply(probe)[self.left_mask]

    def encoded(self) -> np.ndarray:
        return self.alpha * self.block()

    def adjoint(self) -> PUE:
        return PUE(
            self.right_mask,
            self.left_mask,
            self.alpha,
            self.ancillas,
            self.anc_dim,
            self.error,
            unitary=None if self._applier is not None else self._unitary.conj().T,
            applier=None if self._applier is None else self.apply_adjoint,
            adjoint_applier=None if self._applier is None else self.apply,
            tag=self.tag,
            dagger=not self.dagger,
            info=self.info,
        )

    def system_mask(self, side: str = "right") -> np.ndarray:
        """Projector diagonal on the system register (ancilla block 0)."""
        mask = self.right_mask if side == "right" else self.left_mask
        return mask[: self.sys_dim]


def _dilation(a: np.ndarray) -> np.ndarray:
    """[[A, sqrt(I - AA^T)], [sqrt(I - A^T A), -A^T]] for a real contraction A."""

    def sqrt_defect(m):
        w, v = np.linalg.eigh(np.eye(len(m)) - m)
        return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T

    top = np.hstack([a, sqrt_defect(a @ a.T)])
    bottom = np.hstack([sqrt_defect(a.T @ a), -a.T])
    return np.vstack([top, bottom])


def boundary_pue(K: CliqueComplex, k: int, enc: BasisEncoding) -> PUE:
    """Encoding of B_k / alpha_k acting on ``enc``'s state space.

    ``enc`` must have at least k + 1 registers in the compact case; the right
    projector selects k-simplices and the left projector (k-1)-simplices,
    each padded with zero registers.
    """
    if k < 1:
        raise ValueError("boundary encodings need k >= 1")
    _check_cap(enc.dim)
    b = boundary_matrix(K, k)
    a = alpha(enc.kind, K.n, k)
    rows = simplex_indices(K, k - 1, enc)
    cols = simplex_indices(K, k, enc) if K.count(k) else np.zeros(0, dtype=np.int64)
    left = simplex_mask(K, k - 1, enc)
    right = simplex_mask(K, k, enc)
    tag = f"B{k}"
    if enc.kind == DIRECT:
        apply_d = dirac_applier(K.n)
        return PUE(left, right, a, 0, 1, 0.0, applier=apply_d, adjoint_applier=apply_d, tag=tag,
                   info={"k": k, "kind": DIRECT})
    if enc.registers < k + 1:
        raise ValueError(f"compact encoding with {enc.registers} registers cannot hold {k}-simplices")
    n_anc = boundary_ancillas(COMPACT, k)
    _check_cap(enc.dim * 2**n_anc, MATRIX_CAP)
    block = np.zeros((enc.dim, enc.dim))
    block[rows[b.rows], cols[b.cols]] = b.vals / a
    v = _dilation(block)
    u = np.kron(np.eye(2 ** (n_anc - 1)), v)
    pad = np.zeros(enc.dim * (2**n_anc - 1), dtype=bool)
    return PUE(
        np.concatenate([left, pad]),
        np.concatenate([right, pad]),
        a,
        n_anc,
        2**n_anc,
        0.0,
        unitary=u.astype(complex),
        tag=tag,
        info={"k": k, "kind": COMPACT},
    )
