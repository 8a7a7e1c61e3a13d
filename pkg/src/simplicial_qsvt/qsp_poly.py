"""Parity polynomials, single-qubit QSP and phase-factor solving.

Polynomials are held in the Chebyshev basis, which stays well conditioned at
the degrees the projector construction needs; monomial coefficients are
produced on request for export.

QSP convention: U(x) = prod_i exp(i phi_i Z) R(x) with the reflection
R(x) = [[x, sqrt(1-x^2)], [sqrt(1-x^2), -x]]; the realized polynomial is the
top-left entry.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.special import erfc, erfcinv

EVEN, ODD = "even", "odd"

DEGREE_CAP = 2000
UNITARITY_GRID = 1025
ERROR_GRID = 2048
BOUND_GRID = 4096
SATURATION_MARGIN = 1e-6
SATURATION_SCALE = 0.999
# inverse polynomials are certified against this fraction of the stated bound,
# leaving room for the error between grid points
CERT_MARGIN = 0.9


class PhaseSolverError(RuntimeError):
    def __init__(self, message: str, best_residual: float):
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


# Polynomials ----------------------------------------------------------------


@dataclass(frozen=True)
class ParityPolynomial:
    cheb: np.ndarray
    parity: str
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.parity not in (EVEN, ODD):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        c = np.atleast_1d(np.asarray(self.cheb, dtype=float)).copy()
        if c.size == 0:
            c = np.zeros(1)
        wrong = c[(0 if self.parity == ODD else 1)::2]
        if np.any(wrong != 0.0):
            raise ValueError(f"coefficients of the wrong parity are nonzero for a {self.parity} polynomial")
        c = np.trim_zeros(c, "b")
        if c.size == 0:
            c = np.zeros(1)
        c.flags.writeable = False
        object.__setattr__(self, "cheb", c)

    @classmethod
    def from_monomial(cls, coeffs, parity: str, **meta) -> ParityPolynomial:
        c = C.poly2cheb(np.asarray(coeffs, dtype=float))
        c[(0 if parity == ODD else 1)::2] = 0.0
        mono = np.asarray(coeffs, dtype=float)
        bad = mono[(0 if parity == ODD else 1)::2]
        if np.any(bad != 0.0):
            raise ValueError(f"monomial coefficients of the wrong parity are nonzero for a {parity} polynomial")
        return cls(c, parity, dict(meta))

    @classmethod
    def from_chebyshev(cls, c, parity: str, **meta) -> ParityPolynomial:
        c = np.asarray(c, dtype=float).copy()
        c[(0 if parity == ODD else 1)::2] = 0.0
        return cls(c, parity, dict(meta))

    @property
    def degree(self) -> int:
        return len(self.cheb) - 1 if np.any(self.cheb) else 0

    @property
    def coeffs(self) -> np.ndarray:
        """Monomial coefficients, index = power (lossy at high degree)."""
        return C.cheb2poly(self.cheb)

    def __call__(self, x):
        return C.chebval(x, self.cheb)

    def scaled(self, factor: float) -> ParityPolynomial:
        return ParityPolynomial(self.cheb * factor, self.parity, {**self.meta, "scale": factor})

    def sup_norm(self, grid: int = BOUND_GRID) -> float:
        """max |P| on [-1, 1]: dense grid, then local refinement at the top peaks."""
        x = np.cos(np.linspace(0.0, np.pi, grid))
        vals = np.abs(self(x))
        best = float(vals.max())
        if self.degree < 2:
            return best
        deriv = C.chebder(self.cheb)
        for i in np.argsort(vals)[-8:]:
            lo, hi = x[min(i + 1, grid - 1)], x[max(i - 1, 0)]
            a, b = min(lo, hi), max(lo, hi)
            fa, fb = C.chebval(a, deriv), C.chebval(b, deriv)
            if fa * fb < 0:
                for _ in range(60):
                    mid = (a + b) / 2
                    fm = C.chebval(mid, deriv)
                    if fa * fm <= 0:
                        b = mid
                    else:
                        a, fa = mid, fm
                best = max(best, float(abs(self((a + b) / 2))))
        return best

    def to_json(self) -> dict:
        return {"parity": self.parity, "coeffs": self.coeffs.tolist(), "chebyshev": self.cheb.tolist()}

    @classmethod
    def from_json(cls, data: dict | str) -> ParityPolynomial:
        if isinstance(data, str):
            data = json.loads(data)
        if "chebyshev" in data:
            return cls.from_chebyshev(data["chebyshev"], data["parity"])
        return cls.from_monomial(data["coeffs"], data["parity"])


def chebyshev_t(d: int) -> ParityPolynomial:
    c = np.zeros(d + 1)
    c[d] = 1.0
    return ParityPolynomial(c, EVEN if d % 2 == 0 else ODD)


def fit_parity(func, degree: int, parity: str, **meta) -> ParityPolynomial:
    """Chebyshev interpolant of ``func`` at degree+1 first-kind nodes, parity-projected."""
    c = C.chebinterpolate(func, degree)
    return ParityPolynomial.from_chebyshev(c, parity, **meta)


def random_parity_polynomial(degree: int, rng, bound: float = 0.9) -> ParityPolynomial:
    """Random polynomial of the given degree and parity, rescaled to sup-norm ``bound``."""
    parity = EVEN if degree % 2 == 0 else ODD
    c = np.zeros(degree + 1)
    c[degree % 2::2] = rng.standard_normal(len(c[degree % 2::2]))
    if c[degree] == 0.0:
        c[degree] = 1.0
    p = ParityPolynomial(c, parity)
    return p.scaled(bound / p.sup_norm())


# QSP ------------------------------------------------------------------------


def reflection(x: float) -> np.ndarray:
    s = math.sqrt(max(0.0, 1.0 - x * x))
    return np.array([[x, s], [s, -x]], dtype=complex)


def _angles(phases) -> np.ndarray:
    return np.asarray(getattr(phases, "angles", phases), dtype=float)


def qsp_unitary(x: float, phases) -> np.ndarray:
    if abs(x) > 1.0:
        raise ValueError(f"|x| must be <= 1, got {x}")
    u = np.eye(2, dtype=complex)
    r = reflection(x)
    for phi in _angles(phases):
        u = u @ np.diag([np.exp(1j * phi), np.exp(-1j * phi)]) @ r
    return u


def qsp_polynomial(xs, phases) -> np.ndarray:
    """Top-left entry of the QSP product at each point of ``xs`` (vectorized)."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    s = np.sqrt(np.clip(1 - xs**2, 0.0, None))
    r = np.empty((len(xs), 2, 2), dtype=complex)
    r[:, 0, 0], r[:, 0, 1], r[:, 1, 0], r[:, 1, 1] = xs, s, s, -xs
    # track the first row only: (a, b) <- (a, b) diag(e^{i phi}, e^{-i phi}) R
    a = np.ones(len(xs), dtype=complex)
    b = np.zeros(len(xs), dtype=complex)
    for phi in _angles(phases):
        ea, eb = a * np.exp(1j * phi), b * np.exp(-1j * phi)
        a, b = ea * xs + eb * s, ea * s - eb * xs
    return a


# Phase-factor solver -------------------------------------------------------
#
# The solver works in the symmetric "W" form exp(i psi_0 Z) prod_j W(x) exp(i psi_j Z)
# with W(x) = [[x, i s], [i s, x]], where the all-(pi/4, 0, ..., 0, pi/4) start has zero
# real part and a well conditioned Jacobian. R(x) = -i e^{i pi/4 Z} W(x) e^{i pi/4 Z}
# converts the result to the reflection form above.


@dataclass(frozen=True)
class PhaseFactors:
    angles: np.ndarray
    target: ParityPolynomial
    residual: float
    max_error: float
    iterations: int = 0
    scale: float = 1.0

    @property
    def degree(self) -> int:
        return len(self.angles)


def _full_from_reduced(red: np.ndarray, d: int) -> np.ndarray:
    if d % 2:
        return np.concatenate([red, red[::-1]])
    return np.concatenate([red, red[-2::-1]])


def _reduce_jacobian(jac_full: np.ndarray, d: int) -> np.ndarray:
    m = (d + 2) // 2
    out = jac_full[:, :m].copy()
    mirror = jac_full[:, ::-1]
    if d % 2:
        out += mirror[:, :m]
    else:
        out[:, : m - 1] += mirror[:, : m - 1]
    return out


def _w_residual_and_jacobian(psi: np.ndarray, xs: np.ndarray, want: np.ndarray):
    """Re<0|U_W|0> - want at the nodes and its derivative in each psi_j."""
    d = len(psi) - 1
    m = len(xs)
    s = np.sqrt(np.clip(1 - xs**2, 0.0, None))
    w = np.empty((m, 2, 2), dtype=complex)
    w[:, 0, 0] = w[:, 1, 1] = xs
    w[:, 0, 1] = w[:, 1, 0] = 1j * s
    ph = [np.diag([np.exp(1j * p), np.exp(-1j * p)]) for p in psi]
    left = np.empty((d + 1, m, 2, 2), dtype=complex)
    right = np.empty((d + 1, m, 2, 2), dtype=complex)
    left[0] = np.eye(2)
    for j in range(1, d + 1):
        left[j] = left[j - 1] @ ph[j - 1] @ w
    right[d] = ph[d]
    for j in range(d - 1, -1, -1):
        right[j] = ph[j] @ w @ right[j + 1]
    top = right[0][:, 0, 0]
    res = top.real - want
    # d/dpsi_j inserts iZ in front of exp(i psi_j Z)
    dtop = 1j * (left[:, :, 0, 0] * right[:, :, 0, 0] - left[:, :, 0, 1] * right[:, :, 1, 0])
    return res, dtop.real.T


def _solve_w_phases(target: ParityPolynomial, tol: float, max_iter: int):
    d = target.degree
    m = (d + 2) // 2
    k = np.arange(1, m + 1)
    xs = np.cos((2 * k - 1) * np.pi / (4 * m))
    want = target(xs)
    red = np.zeros(m)
    red[0] = np.pi / 4
    best = (np.inf, red)
    it = 0
    for it in range(1, max_iter + 1):
        psi = _full_from_reduced(red, d)
        res, jac = _w_residual_and_jacobian(psi, xs, want)
        err = float(np.max(np.abs(res)))
        if err < best[0]:
            best = (err, red.copy())
        if err <= tol:
            return _full_from_reduced(red, d), err, it
        jr = _reduce_jacobian(jac, d)
        step, *_ = np.linalg.lstsq(jr, -res, rcond=None)
        # damped Newton: halve until the residual does not grow
        t = 1.0
        while t > 1e-4:
            trial = red + t * step
            tres, _ = _w_residual_and_jacobian(_full_from_reduced(trial, d), xs, want)
            if np.max(np.abs(tres)) < err or t < 2e-4:
                break
            t /= 2
        red = red + t * step
    err, red = best
    if err <= tol:
        return _full_from_reduced(red, d), err, it
    raise PhaseSolverError(f"phase solver did not reach tol={tol:g} for degree {d}", err)


def w_to_reflection(psi: np.ndarray) -> np.ndarray:
    """Reflection-form phases with the same top-left polynomial as the W-form ``psi``."""
    d = len(psi) - 1
    phi = np.empty(d)
    phi[0] = psi[0] + psi[d] + (d - 1) * np.pi / 2
    phi[1:] = psi[1:d] - np.pi / 2
    return np.angle(np.exp(1j * phi))


def find_phase_factors(target: ParityPolynomial, tol: float = 1e-12, max_iter: int = 200) -> PhaseFactors:
    """Phases whose QSP top-left entry has real part equal to ``target``.

    A target whose sup-norm is within 1e-6 of 1 is first attempted as given;
    only if that fails is it scaled by 0.999 (the scale is recorded).
    """
    d = target.degree
    if d == 0:
        raise ValueError("degree-0 targets have no QSP phases; realize constants directly")
    expected = ODD if d % 2 else EVEN
    if target.parity != expected:
        raise ValueError(f"degree {d} polynomial must be {expected}")
    sup = target.sup_norm()
    if sup > 1.0 + 1e-9:
        raise ValueError(f"target sup-norm {sup:.6g} exceeds 1")
    scale = 1.0
    try:
        psi, res, it = _solve_w_phases(target, tol, max_iter)
    except PhaseSolverError:
        if sup < 1.0 - SATURATION_MARGIN:
            raise
        scale = SATURATION_SCALE
        psi, res, it = _solve_w_phases(target.scaled(scale), tol, max_iter)
    angles = w_to_reflection(psi)
    grid = np.linspace(-1.0, 1.0, UNITARITY_GRID)
    realized = qsp_polynomial(grid, angles).real
    max_err = float(np.max(np.abs(realized - scale * target(grid))))
    return PhaseFactors(angles, target, res, max_err, it, scale)


# Pseudoinverse polynomials --------------------------------------------------


def _smoothed_inverse(kappa: float, eps: float):
    """Odd entire function within eps/(4 kappa) of 1/(2 kappa x) on |x| >= 1/kappa.

    The error there is (1 - S(kappa x)) / (2 kappa x), so the step must reach
    1 - eps/(2 kappa) by kappa |x| = 1.

    1/(2 kappa x) is multiplied by a smooth even step S(kappa x): a Gaussian
    factor removes the pole, an erfc step centred at kappa|x| = 0.6 keeps the
    product far below 1 near the origin.
    """
    budget = eps / (4 * kappa)
    c = math.sqrt(math.log(1 / budget))
    t0 = 0.5
    w = float(erfcinv(2 * budget)) / (1 - t0)

    def h(x):
        x = np.asarray(x, dtype=float)
        t = kappa * x
        step = 0.5 * (erfc(w * (t0 - t)) + erfc(w * (t0 + t)))
        gauss = -np.expm1(-(c * t) ** 2)
        with np.errstate(invalid="ignore", divide="ignore"):
            out = gauss * step / (2 * t)
        return np.where(t == 0, 0.0, out)

    return h


def _certify_inverse(p: ParityPolynomial, kappa: float, eps: float) -> tuple[bool, float, float]:
    x = np.linspace(1.0 / kappa, 1.0, ERROR_GRID)
    err = float(np.max(np.abs(p(x) - 1 / (2 * kappa * x))))
    sup = float(np.max(np.abs(p(np.linspace(-1.0, 1.0, BOUND_GRID)))))
    return err <= CERT_MARGIN * eps / (2 * kappa) and sup <= 1.0, err, sup


def inverse_asymptotic_degree(kappa: float, eps: float) -> float:
    """kappa * ln(kappa / eps), the growth class of the inverse polynomial."""
    return kappa * math.log(kappa / eps)


def inverse_polynomial(kappa: float, eps: float) -> ParityPolynomial:
    """Odd g with |g(x) - 1/(2 kappa x)| <= eps/(2 kappa) on 1/kappa <= |x| <= 1 and |g| <= 1.

    The degree is found by doubling until the grid certificate passes and then
    bisecting down to the smallest passing odd degree.
    """
    if kappa <= 1:
        raise ValueError(f"kappa must exceed 1, got {kappa}")
    if not 0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    h = _smoothed_inverse(kappa, eps)

    def build(deg: int) -> ParityPolynomial:
        return fit_parity(h, deg, ODD)

    deg = 2 * int(math.ceil(kappa)) + 1
    while True:
        ok, _, _ = _certify_inverse(build(deg), kappa, eps)
        if ok:
            break
        if deg >= DEGREE_CAP - 1:
            raise ValueError(f"no odd degree <= {DEGREE_CAP} certifies kappa={kappa}, eps={eps}")
        deg = min(2 * deg + 1, DEGREE_CAP - 1)
    lo = max(1, (deg - 1) // 2)
    hi = deg
    while hi - lo > 2:
        mid = (lo + hi) // 2
        mid += 1 - mid % 2
        if mid >= hi:
            break
        if _certify_inverse(build(mid), kappa, eps)[0]:
            hi = mid
        else:
            lo = mid
    p = build(hi)
    _, err, sup = _certify_inverse(p, kappa, eps)
    meta = {
        "kind": "inverse",
        "kappa": kappa,
        "eps": eps,
        "certified_error": err,
        "bound": eps / (2 * kappa),
        "sup_norm": sup,
        "asymptotic_degree": inverse_asymptotic_degree(kappa, eps),
    }
    return ParityPolynomial(p.cheb, ODD, meta)


def projector_polynomial(kappa: float, eps: float) -> ParityPolynomial:
    """H(x) = x g(x) with g the inverse polynomial; 2 kappa H(x) ~ 1 on [1/kappa, 1]."""
    g = inverse_polynomial(kappa, eps)
    c = C.chebmulx(g.cheb)
    x = np.linspace(1.0 / kappa, 1.0, ERROR_GRID)
    p = ParityPolynomial.from_chebyshev(c, EVEN)
    meta = {
        "kind": "projector",
        "kappa": kappa,
        "eps": eps,
        "inverse_degree": g.degree,
        "certified_error": float(np.max(np.abs(2 * kappa * p(x) - 1))),
        "sup_norm": float(np.max(np.abs(p(np.linspace(-1, 1, BOUND_GRID))))),
    }
    return ParityPolynomial(p.cheb, EVEN, meta)


def alt_projector_polynomial(kappa: float, eps: float) -> ParityPolynomial:
    """H'(x) = x g(x^2); 2 kappa H'(xi) ~ 1/xi for xi in [1/sqrt(kappa), 1]."""
    g = inverse_polynomial(kappa, eps)
    deg = 2 * g.degree + 1
    p = fit_parity(lambda x: x * g(x * x), deg, ODD)
    xi = np.linspace(1.0 / math.sqrt(kappa), 1.0, ERROR_GRID)
    meta = {
        "kind": "alt_projector",
        "kappa": kappa,
        "eps": eps,
        "inverse_degree": g.degree,
        "certified_error": float(np.max(np.abs(2 * kappa * p(xi) - 1 / xi))),
        "sup_norm": float(np.max(np.abs(p(np.linspace(-1, 1, BOUND_GRID))))),
    }
    return ParityPolynomial(p.cheb, ODD, meta)
