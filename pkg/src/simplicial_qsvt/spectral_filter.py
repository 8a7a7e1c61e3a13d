"""Classical simplicial filters: application, frequency response, Chebyshev design.

A filter is stored uniformly as

    H = sum_i lower[i] X^i + sum_i upper[i] Y^i - h0 * I,

with lower[0] == upper[0] == h0. In the raw convention X, Y are the lower and
upper Laplacians; in the rescaled convention they are divided by the squared
encoding scales, which is the form the quantum filter realizes.
"""

from __future__ import annotations

import json
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .homology import CURL, GRADIENT, HARMONIC, HodgeLaplacian, SpectralData

BOUND_GRID = 4096
BOUND_TOL = 1e-9
RECON_GRID = 1000

RAW, RESCALED = "raw", "rescaled"


class FilterBoundError(ValueError):
    """A rescaled response leaves [-1, 1] somewhere on [0, 1]."""


@dataclass(frozen=True)
class FilterSpec:
    h0: float
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    convention: str = RESCALED

    def __post_init__(self):
        if self.convention not in (RAW, RESCALED):
            raise ValueError(f"unknown convention {self.convention!r}")
        lower = tuple(float(c) for c in self.lower) or (float(self.h0),)
        upper = tuple(float(c) for c in self.upper) or (float(self.h0),)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "h0", float(self.h0))
        for name, cs in (("lower", lower), ("upper", upper)):
            if abs(cs[0] - self.h0) > 1e-12:
                raise ValueError(f"{name}[0]={cs[0]} must equal h0={self.h0}")

    @property
    def rescaled(self) -> bool:
        return self.convention == RESCALED

    @property
    def d_lower(self) -> int:
        return _degree(self.lower)

    @property
    def d_upper(self) -> int:
        return _degree(self.upper)

    @property
    def degree(self) -> int:
        return max(self.d_lower, self.d_upper)

    def g_lower(self, x):
        return np.polynomial.polynomial.polyval(x, self.lower)

    def g_upper(self, x):
        return np.polynomial.polynomial.polyval(x, self.upper)

    @classmethod
    def from_raw(cls, h0: float, lower_tail: Sequence[float], upper_tail: Sequence[float], convention: str = RAW):
        """Build from h0 and the coefficients of powers >= 1."""
        return cls(h0, (h0, *lower_tail), (h0, *upper_tail), convention)

    def to_json(self) -> dict:
        return {"h0": self.h0, "lower": list(self.lower), "upper": list(self.upper), "convention": self.convention}

    @classmethod
    def from_json(cls, data: dict | str) -> FilterSpec:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["h0"], tuple(data.get("lower", ())), tuple(data.get("upper", ())), data.get("convention", RESCALED))


def _degree(cs: Sequence[float]) -> int:
    nz = [i for i, c in enumerate(cs) if c != 0.0]
    return nz[-1] if nz else 0


def identity_spec() -> FilterSpec:
    return FilterSpec(1.0, (1.0,), (1.0,), RESCALED)


def _scales(spec: FilterSpec, alphas) -> tuple[float, float]:
    if not spec.rescaled:
        return 1.0, 1.0
    if alphas is None:
        raise ValueError("rescaled filter needs encoding scales (alpha_k, alpha_k+1)")
    a_lo, a_up = (float(a) for a in alphas)
    if a_lo <= 0 or a_up <= 0:
        raise ValueError(f"encoding scales must be positive, got {alphas}")
    return a_lo**2, a_up**2


def _horner(mat: np.ndarray, coeffs: Sequence[float], s: np.ndarray) -> np.ndarray:
    out = coeffs[-1] * s
    for c in reversed(coeffs[:-1]):
        out = mat @ out + c * s
    return out


def apply_filter(spec: FilterSpec, lap: HodgeLaplacian, s, alphas=None) -> np.ndarray:
    """H s by Horner's rule on matrix-vector products."""
    s = np.asarray(s, dtype=float)
    if s.shape[0] != lap.size:
        raise ValueError(f"signal has length {s.shape[0]}, Laplacian acts on {lap.size}")
    sl, su = _scales(spec, alphas)
    x = lap.lower / sl
    y = lap.upper / su
    return _horner(x, spec.lower, s) + _horner(y, spec.upper, s) - spec.h0 * s


def filter_matrix(spec: FilterSpec, lap: HodgeLaplacian, alphas=None) -> np.ndarray:
    """Dense H, column by column from ``apply_filter`` (reference use only)."""
    return apply_filter(spec, lap, np.eye(lap.size), alphas)


@dataclass(frozen=True)
class FrequencyResponse:
    eigenvalues: np.ndarray
    labels: tuple[str, ...]
    response: np.ndarray

    def part(self, label: str) -> tuple[np.ndarray, np.ndarray]:
        mask = np.array([lab == label for lab in self.labels], dtype=bool)
        return self.eigenvalues[mask], self.response[mask]


def frequency_response(spec: FilterSpec, spectral: SpectralData, alphas=None) -> FrequencyResponse:
    sl, su = _scales(spec, alphas)
    lam = spectral.eigenvalues
    resp = np.empty_like(lam)
    for i, (val, lab) in enumerate(zip(lam, spectral.labels)):
        if lab == HARMONIC:
            resp[i] = spec.h0
        elif lab == GRADIENT:
            resp[i] = spec.g_lower(val / sl)
        elif lab == CURL:
            resp[i] = spec.g_upper(val / su)
        else:
            raise ValueError(f"unknown label {lab!r}")
    return FrequencyResponse(lam, spectral.labels, resp)


def design_residual(
    spec: FilterSpec,
    spectral: SpectralData,
    target_lower: Callable,
    target_upper: Callable,
    alphas=None,
) -> float:
    """max |g(lambda) - response(lambda)| over the labelled eigenvalues."""
    fr = frequency_response(spec, spectral, alphas)
    worst = 0.0
    for lam, resp, lab in zip(fr.eigenvalues, fr.response, fr.labels):
        if lab == GRADIENT:
            want = target_lower(lam)
        elif lab == CURL:
            want = target_upper(lam)
        else:
            want = spec.h0
        worst = max(worst, abs(float(want) - float(resp)))
    return worst


# Chebyshev design -----------------------------------------------------------


def chebyshev_coefficients(g: Callable, degree: int, lam_max: float) -> np.ndarray:
    """Coefficients of t -> g(lam_max (t + 1) / 2) in T_0..T_degree.

    Discrete cosine quadrature at the degree+1 Chebyshev-Gauss nodes; exact
    for polynomial targets of degree <= ``degree``.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    if lam_max <= 0:
        raise ValueError("spectral bound must be positive")
    m = degree + 1
    theta = np.pi * (np.arange(m) + 0.5) / m
    vals = np.array([g(lam_max * (np.cos(t) + 1) / 2) for t in theta], dtype=float)
    c = np.array([2.0 / m * np.dot(vals, np.cos(i * theta)) for i in range(m)])
    c[0] /= 2
    return c


def _cheb_eval(c: np.ndarray, lam, lam_max: float):
    t = 2 * np.asarray(lam, dtype=float) / lam_max - 1
    return np.polynomial.chebyshev.chebval(t, c)


@dataclass(frozen=True)
class ChebyshevDesign:
    cheb_lower: np.ndarray
    cheb_upper: np.ndarray
    c0: float
    lambda_g_max: float
    lambda_c_max: float
    reconstruction_error: dict = field(default_factory=dict)

    def g_lower(self, lam):
        return _cheb_eval(self.cheb_lower, lam, self.lambda_g_max)

    def g_upper(self, lam):
        return _cheb_eval(self.cheb_upper, lam, self.lambda_c_max)

    def apply(self, lap: HodgeLaplacian, s) -> np.ndarray:
        """Filter by the three-term Chebyshev recurrence (matrix-vector products only)."""
        s = np.asarray(s, dtype=float)
        out = _cheb_apply(lap.lower, self.cheb_lower, self.lambda_g_max, s)
        out = out + _cheb_apply(lap.upper, self.cheb_upper, self.lambda_c_max, s)
        return out - self.c0 * s


def _cheb_apply(lap: np.ndarray, c: np.ndarray, lam_max: float, s: np.ndarray) -> np.ndarray:
    shifted = lambda v: 2.0 / lam_max * (lap @ v) - v
    t_prev, t_cur = s, shifted(s)
    out = c[0] * t_prev
    if len(c) > 1:
        out = out + c[1] * t_cur
    for ci in c[2:]:
        t_prev, t_cur = t_cur, 2 * shifted(t_cur) - t_prev
        out = out + ci * t_cur
    return out


def chebyshev_design(g_lower: Callable, g_upper: Callable, d_lower: int, d_upper: int, lambda_bounds) -> ChebyshevDesign:
    lam_g, lam_c = (float(b) for b in lambda_bounds)
    cl = chebyshev_coefficients(g_lower, d_lower, lam_g)
    cu = chebyshev_coefficients(g_upper, d_upper, lam_c)
    g0_lower = float(_cheb_eval(cl, 0.0, lam_g))
    g0_upper = float(_cheb_eval(cu, 0.0, lam_c))
    t0_lower, t0_upper = float(g_lower(0.0)), float(g_upper(0.0))
    if abs(t0_lower - t0_upper) > 1e-12 * (1 + abs(t0_lower)):
        raise ValueError(f"targets disagree at 0: {t0_lower} vs {t0_upper}")
    errs = {}
    for name, g, c, lm in (("lower", g_lower, cl, lam_g), ("upper", g_upper, cu, lam_c)):
        grid = np.linspace(0.0, lm, RECON_GRID)
        want = np.array([g(x) for x in grid], dtype=float)
        errs[name] = float(np.max(np.abs(_cheb_eval(c, grid, lm) - want)))
    errs["at_zero_mismatch"] = abs(g0_lower - g0_upper)
    return ChebyshevDesign(cl, cu, (g0_lower + g0_upper) / 2, lam_g, lam_c, errs)


# Conversion to the rescaled convention --------------------------------------


def check_bounded(spec: FilterSpec, grid: int = BOUND_GRID, tol: float = BOUND_TOL) -> float:
    """Largest |g| on [0, 1] over both responses; raise if it exceeds 1 + tol."""
    if not 0.0 <= spec.h0 <= 1.0:
        raise FilterBoundError(f"h0={spec.h0} must lie in [0, 1]")
    x = np.linspace(0.0, 1.0, grid)
    worst = float(max(np.max(np.abs(spec.g_lower(x))), np.max(np.abs(spec.g_upper(x)))))
    if worst > 1.0 + tol:
        raise FilterBoundError(f"|g| reaches {worst:.12g} > 1 on [0, 1]")
    return worst


def _cheb_to_monomial(c: np.ndarray, lam_max: float, alpha_sq: float) -> np.ndarray:
    series = np.polynomial.Chebyshev(c, domain=[0.0, lam_max])
    mono = series.convert(kind=np.polynomial.Polynomial).coef
    return mono * alpha_sq ** np.arange(len(mono))


def to_quantum_spec(source, alphas, check: bool = True) -> FilterSpec:
    """Monomial coefficients in the rescaled variable x = lambda / alpha^2.

    ``source`` is a raw-convention FilterSpec or a ChebyshevDesign.
    """
    a_lo, a_up = (float(a) ** 2 for a in alphas)
    if isinstance(source, ChebyshevDesign):
        lower = _cheb_to_monomial(source.cheb_lower, source.lambda_g_max, a_lo)
        upper = _cheb_to_monomial(source.cheb_upper, source.lambda_c_max, a_up)
        h0 = (lower[0] + upper[0]) / 2
        lower[0] = upper[0] = h0
    elif isinstance(source, FilterSpec):
        if source.rescaled:
            spec = source
            if check:
                check_bounded(spec)
            return spec
        lower = np.array(source.lower) * a_lo ** np.arange(len(source.lower))
        upper = np.array(source.upper) * a_up ** np.arange(len(source.upper))
        h0 = source.h0
    else:
        raise TypeError(f"cannot convert {type(source).__name__}")
    spec = FilterSpec(float(h0), tuple(lower), tuple(upper), RESCALED)
    if check:
        check_bounded(spec)
    return spec


def random_bounded_spec(rng, d_lower: int, d_upper: int, margin: float = 0.95) -> FilterSpec:
    """Random rescaled spec whose responses stay inside [-1, 1] on [0, 1].

    The constant is drawn from [0.2, 0.8] and each random tail is scaled so
    that |h0 + tail| <= h0 + margin * min(h0, 1 - h0) on the grid.
    """
    h0 = float(rng.uniform(0.2, 0.8))
    room = margin * min(h0, 1.0 - h0)
    x = np.linspace(0.0, 1.0, BOUND_GRID)
    parts = []
    for d in (d_lower, d_upper):
        tail = rng.standard_normal(d)
        if d:
            peak = np.max(np.abs(np.polynomial.polynomial.polyval(x, np.concatenate([[0.0], tail]))))
            tail = tail * (room / peak if peak > 0 else 0.0)
        parts.append((h0, *tail))
    spec = FilterSpec(h0, parts[0], parts[1], RESCALED)
    check_bounded(spec)
    return spec
