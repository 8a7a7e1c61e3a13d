"""QSVT sequences, real-polynomial blocks, LCU and the quantum simplicial filter.

Every composite encoding here applies itself through its parts, so running
one state through a filter touches each boundary unitary exactly as often as
the corresponding circuit would; ``QueryCounter`` records those touches.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np

from .complexes import CliqueComplex
from .encoding import (
    MATRIX_CAP,
    PUE,
    _check_cap,
    alpha,
    boundary_ancillas,
    boundary_pue,
    decode_signal,
    encode_signal,
    encoding_for,
    simplex_indices,
    simplex_mask,
)
from .homology import (
    hodge_laplacian,
    hodge_projectors,
    lower_pseudoinverse,
    smallest_singular_value,
)
from .qsp_poly import (
    EVEN,
    ParityPolynomial,
    PhaseFactors,
    alt_projector_polynomial,
    find_phase_factors,
    fit_parity,
    projector_polynomial,
)
from .resources import filter_query_counts, membership_ancillas
from .spectral_filter import FilterSpec, apply_filter, check_bounded

NORM_FLOOR = 1e-12


class QueryCounter:
    """Tallies of boundary-unitary and projector-reflection uses, keyed by (tag, kind)."""

    def __init__(self):
        self.counts: Counter = Counter()

    def add(self, tag: str, kind: str, times: int = 1):
        self.counts[(tag, kind)] += times

    def get(self, tag: str, kind: str) -> int:
        return self.counts[(tag, kind)]

    def as_dict(self) -> dict[str, int]:
        return {f"{t}:{k}": v for (t, k), v in sorted(self.counts.items())}


# Phased sequences ----------------------------------------------------------


def _rotation(mask: np.ndarray, phi: float) -> np.ndarray:
    """Diagonal of exp(i phi (2 Pi - I))."""
    return np.where(mask, np.exp(1j * phi), np.exp(-1j * phi))


def _schedule(pue: PUE, d: int):
    """(projector mask, uses U rather than U^dag) for phases 1..d, leftmost first."""
    out = []
    for j in range(1, d + 1):
        left_side = (j % 2 == 1) == (d % 2 == 1)
        out.append((pue.left_mask if left_side else pue.right_mask, left_side))
    return out


def _count_unitary(counter, pue: PUE, forward: bool):
    if counter is None:
        return
    base_forward = forward != pue.dagger
    counter.add(pue.tag, "U" if base_forward else "U_dag")


def _count_rotation(counter, pue: PUE):
    if counter is not None:
        # exp(i phi (2 Pi - I)) = C_Pi NOT (I (x) exp(-i phi Z)) C_Pi NOT
        counter.add(pue.tag, "cpinot", 2)


def qsvt_apply(pue: PUE, angles, v: np.ndarray, counter=None, adjoint: bool = False) -> np.ndarray:
    """Apply the phased alternating sequence (or its adjoint) to the columns of ``v``."""
    angles = np.asarray(getattr(angles, "angles", angles), dtype=float)
    d = len(angles)
    sched = _schedule(pue, d)
    v = np.array(v, dtype=complex)
    scale_rows = (slice(None),) + (None,) * (v.ndim - 1)
    if not adjoint:
        for j in range(d - 1, -1, -1):
            mask, forward = sched[j]
            v = pue.apply(v, counter) if forward else pue.apply_adjoint(v, counter)
            _count_unitary(counter, pue, forward)
            v = _rotation(mask, angles[j])[scale_rows] * v
            _count_rotation(counter, pue)
    else:
        for j in range(d):
            mask, forward = sched[j]
            v = _rotation(mask, -angles[j])[scale_rows] * v
            _count_rotation(counter, pue)
            v = pue.apply_adjoint(v, counter) if forward else pue.apply(v, counter)
            _count_unitary(counter, pue, not forward)
    return v


def qsvt_sequence(pue: PUE, phases, counter=None) -> np.ndarray:
    """Dense unitary of the phased alternating sequence."""
    angles = getattr(phases, "angles", phases)
    _check_cap(pue.dim, MATRIX_CAP)
    return qsvt_apply(pue, angles, np.eye(pue.dim, dtype=complex), counter)


def svd_oracle(a: np.ndarray, poly) -> np.ndarray:
    """Singular-value transform of ``a`` computed from its SVD.

    Even polynomials give sum f(xi) |v_r><v_r| over a full right basis (zero
    singular values included); odd ones give sum f(xi) |v_l><v_r|.
    """
    a = np.asarray(a)
    m, n = a.shape
    if poly.parity == EVEN:
        _, s, vh = np.linalg.svd(a, full_matrices=True)
        xi = np.zeros(n)
        xi[: len(s)] = s
        return (vh.conj().T * poly(xi)) @ vh
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return (u * poly(s)) @ vh


# Real-polynomial blocks ----------------------------------------------------


def _hadamard_mix(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    half = len(v) // 2
    return (v[:half] + v[half:]) / math.sqrt(2), (v[:half] - v[half:]) / math.sqrt(2)


def _constant_block(c: float, like: PUE, system_mask: np.ndarray, imaginary: bool = False) -> PUE:
    """PUE of the constant c on ``system_mask``: control-qubit phases e^{+-i theta}, cos theta = c."""
    if abs(c) > 1 + 1e-12:
        raise ValueError(f"constant {c} outside [-1, 1]")
    c = float(np.clip(c, -1.0, 1.0))
    e_plus = complex(c, math.sqrt(1 - c * c))
    e_minus = e_plus.conjugate()
    if imaginary:
        e_plus, e_minus = 1j * e_plus, 1j * e_minus
    sys_dim = len(system_mask)

    def fwd(v, counter=None, plus=e_plus, minus=e_minus):
        x0, x1 = _hadamard_mix(v)
        y0, y1 = plus * x0, minus * x1
        if imaginary:
            y1 = -y1
        return np.concatenate([(y0 + y1) / math.sqrt(2), (y0 - y1) / math.sqrt(2)])

    def adj(v, counter=None, plus=e_plus, minus=e_minus):
        x0, x1 = _hadamard_mix(v)
        if imaginary:
            x1 = -x1
        y0, y1 = plus.conjugate() * x0, minus.conjugate() * x1
        return np.concatenate([(y0 + y1) / math.sqrt(2), (y0 - y1) / math.sqrt(2)])

    mask = np.concatenate([system_mask, np.zeros(sys_dim, dtype=bool)])
    return PUE(mask, mask, 1.0, like.ancillas + 1 if like is not None else 1, 2, 0.0,
               applier=fwd, adjoint_applier=adj, tag="const", info={"constant": c})


def real_poly_block(pue: PUE, target: ParityPolynomial, imaginary: bool = False, tol: float = 1e-12,
                    phases: PhaseFactors | None = None) -> PUE:
    """PUE of target(A) (or i target(A)) on the singular values of the encoded A.

    W = |0><0| (x) U_Phi + |1><1| (x) U_{-Phi}, conjugated by a Hadamard on the
    control; the imaginary variant inserts Z on the control after W.
    Degree-0 targets need no queries and are realized by control phases alone.
    """
    if target.degree == 0:
        return _constant_block(float(target(0.0)), pue, pue.right_mask, imaginary)
    if phases is None:
        phases = find_phase_factors(target, tol)
    angles = np.array(phases.angles)
    if imaginary:
        # multiplying P by i turns its imaginary part into the target
        angles = angles.copy()
        angles[0] += np.pi / 2
    neg = -angles

    def fwd(v, counter=None):
        x0, x1 = _hadamard_mix(v)
        y0 = qsvt_apply(pue, angles, x0, counter)
        y1 = qsvt_apply(pue, neg, x1, counter)
        if imaginary:
            y1 = -y1
        return np.concatenate([(y0 + y1) / math.sqrt(2), (y0 - y1) / math.sqrt(2)])

    def adj(v, counter=None):
        x0, x1 = _hadamard_mix(v)
        if imaginary:
            x1 = -x1
        y0 = qsvt_apply(pue, angles, x0, counter, adjoint=True)
        y1 = qsvt_apply(pue, neg, x1, counter, adjoint=True)
        return np.concatenate([(y0 + y1) / math.sqrt(2), (y0 - y1) / math.sqrt(2)])

    zeros = np.zeros(pue.dim, dtype=bool)
    right = np.concatenate([pue.right_mask, zeros])
    left = right if target.parity == EVEN else np.concatenate([pue.left_mask, zeros])
    return PUE(
        left,
        right,
        1.0 / phases.scale,
        pue.ancillas + 1,
        2 * pue.anc_dim,
        phases.max_error,
        applier=fwd,
        adjoint_applier=adj,
        tag=pue.tag,
        info={"degree": target.degree, "phase_residual": phases.residual, "phase_max_error": phases.max_error,
              "scale": phases.scale},
    )


# LCU -----------------------------------------------------------------------


@dataclass
class LcuTerm:
    coeff: float
    sign: complex
    pue: PUE
    base_ancillas: int = 0


@dataclass
class LcuPlan:
    terms: list

    @property
    def weights(self) -> np.ndarray:
        # a term whose block is f / alpha_i contributes c_i alpha_i to the normalization
        return np.array([t.coeff * t.pue.alpha for t in self.terms], dtype=float)

    @property
    def beta(self) -> float:
        return float(self.weights.sum())

    @property
    def prepare(self) -> np.ndarray:
        return np.sqrt(self.weights / self.beta)


def identity_pue(system_mask: np.ndarray) -> PUE:
    m = np.asarray(system_mask, dtype=bool)
    return PUE(m, m, 1.0, 0, 1, 0.0, applier=lambda v, counter=None: np.array(v, dtype=complex),
               adjoint_applier=lambda v, counter=None: np.array(v, dtype=complex), tag="identity")


def _prepare_unitary(p: np.ndarray, size: int) -> np.ndarray:
    """Real orthogonal matrix whose first column is ``p`` (Householder reflection)."""
    e0 = np.zeros(size)
    e0[0] = 1.0
    col = np.zeros(size)
    col[: len(p)] = p
    w = col - e0
    if np.linalg.norm(w) < 1e-15:
        return np.eye(size)
    w /= np.linalg.norm(w)
    return np.eye(size) - 2 * np.outer(w, w)


def lcu_combine(plan: LcuPlan) -> PUE:
    """PUE of (1/beta) sum_i sign_i c_i f_i from Prepare / Select over the terms.

    Terms with smaller ancilla registers are padded with identity on the
    missing ancilla levels; all must share the system register and projectors.
    """
    terms = plan.terms
    if not terms:
        raise ValueError("empty LCU plan")
    if any(t.coeff < 0 for t in terms):
        raise ValueError("LCU coefficients must be non-negative; fold signs into the term")
    sys_dim = terms[0].pue.sys_dim
    ref_left = terms[0].pue.left_mask[:sys_dim]
    ref_right = terms[0].pue.right_mask[:sys_dim]
    for t in terms:
        p = t.pue
        if p.sys_dim != sys_dim:
            raise ValueError("LCU terms act on different system spaces")
        if not (np.array_equal(p.left_mask[:sys_dim], ref_left) and np.array_equal(p.right_mask[:sys_dim], ref_right)):
            raise ValueError("LCU terms have different projectors")
    anc = max(t.pue.anc_dim for t in terms)
    inner = anc * sys_dim
    m = len(terms)
    idx_dim = 1 << max(0, math.ceil(math.log2(m)))
    beta = plan.beta
    if beta <= 0:
        raise ValueError("LCU normalization must be positive")
    g = _prepare_unitary(plan.prepare, idx_dim)

    def padded(t: LcuTerm, v: np.ndarray, counter, adjoint: bool) -> np.ndarray:
        # identity on the missing ancilla levels: one application over all copies
        size = t.pue.dim
        stacked = v.reshape(inner // size, size, -1).transpose(1, 0, 2).reshape(size, -1)
        res = t.pue.apply_adjoint(stacked, counter) if adjoint else t.pue.apply(stacked, counter)
        out = res.reshape(size, inner // size, -1).transpose(1, 0, 2).reshape(v.shape)
        sign = np.conj(t.sign) if adjoint else t.sign
        return sign * out

    def run(v, counter, adjoint):
        shape = v.shape
        mat = np.asarray(v, dtype=complex).reshape((idx_dim, inner) + shape[1:])
        mixed = np.tensordot(g, mat, axes=(1, 0))
        out = np.empty_like(mixed)
        for i in range(idx_dim):
            out[i] = padded(terms[i], mixed[i], counter, adjoint) if i < m else mixed[i]
        back = np.tensordot(g.T, out, axes=(1, 0))
        return back.reshape(shape)

    zeros = np.zeros(idx_dim * inner - sys_dim, dtype=bool)
    left = np.concatenate([ref_left, zeros])
    right = np.concatenate([ref_right, zeros])
    ancillas = sum(t.base_ancillas for t in terms) + math.ceil(math.log2(2 * m)) + 3
    err = beta * max(t.pue.error for t in terms)
    return PUE(left, right, beta, ancillas, idx_dim * anc, err,
               applier=lambda v, counter=None: run(v, counter, False),
               adjoint_applier=lambda v, counter=None: run(v, counter, True),
               tag="lcu", info={"beta": beta, "terms": m, "prepare": plan.prepare.tolist()})


# Quantum simplicial filter --------------------------------------------------


def _even_in_sqrt(coeffs) -> ParityPolynomial:
    """h(y) = g(y^2) for monomial coefficients of g."""
    mono = np.zeros(2 * len(coeffs) - 1)
    mono[::2] = coeffs
    return ParityPolynomial.from_monomial(mono, EVEN)


def _needs_upper(K: CliqueComplex, k: int) -> bool:
    return k + 1 <= K.n - 1


def build_quantum_filter(spec: FilterSpec, K: CliqueComplex, k: int, kind: str, tol: float = 1e-12) -> PUE:
    """PUE of H(L_lower / alpha_k^2, L_upper / alpha_k+1^2) / beta with beta = 2 + h0."""
    if not spec.rescaled:
        raise ValueError("the quantum filter takes a rescaled-convention FilterSpec")
    check_bounded(spec)
    d_lo = spec.d_lower if k >= 1 else 0
    d_up = spec.d_upper if _needs_upper(K, k) else 0
    enc = encoding_for(K, k, kind, upper_path=d_up > 0)
    sys_mask = simplex_mask(K, k, enc)
    tol_info = {}

    if d_lo > 0:
        lo = boundary_pue(K, k, enc)
        term_lo = real_poly_block(lo, _even_in_sqrt(spec.lower), tol=tol)
        tol_info["lower_phase_residual"] = term_lo.info["phase_residual"]
    else:
        term_lo = _constant_block(spec.h0 if k >= 1 else float(spec.lower[0]), None, sys_mask)
    if d_up > 0:
        up = boundary_pue(K, k + 1, enc).adjoint()
        term_up = real_poly_block(up, _even_in_sqrt(spec.upper), tol=tol)
        tol_info["upper_phase_residual"] = term_up.info["phase_residual"]
    else:
        term_up = _constant_block(spec.h0, None, sys_mask)

    plan = LcuPlan([
        LcuTerm(spec.h0, -1.0, identity_pue(sys_mask), 0),
        LcuTerm(1.0, 1.0, term_lo, boundary_ancillas(kind, k)),
        LcuTerm(1.0, 1.0, term_up, boundary_ancillas(kind, k + 1)),
    ])
    pue = lcu_combine(plan)
    a_p = membership_ancillas(K.n, k, kind)
    pue.ancillas += a_p
    pue.info.update({
        "encoding": kind,
        "basis": enc,
        "k": k,
        "d_lower": d_lo,
        "d_upper": d_up,
        "a_p": a_p,
        "system_dim": enc.dim,
        "simulated_dim": pue.dim,
        "alphas": (alpha(kind, K.n, k), alpha(kind, K.n, k + 1)),
        **tol_info,
    })
    pue.tag = "filter"
    return pue


def grouped_query_counts(counter: QueryCounter, k: int) -> dict[str, int]:
    lo, up = f"B{k}", f"B{k + 1}"
    return {
        "U_Bk": counter.get(lo, "U"),
        "U_Bk_dag": counter.get(lo, "U_dag"),
        "U_Bk_total": counter.get(lo, "U") + counter.get(lo, "U_dag"),
        "U_Bk1": counter.get(up, "U"),
        "U_Bk1_dag": counter.get(up, "U_dag"),
        "U_Bk1_total": counter.get(up, "U") + counter.get(up, "U_dag"),
        "cpinot_lower": counter.get(lo, "cpinot"),
        "cpinot_upper": counter.get(up, "cpinot"),
        "phase_rotations": (counter.get(lo, "cpinot") + counter.get(up, "cpinot")) // 2,
    }


@dataclass
class FilterRunReport:
    amplitudes: list
    classical: list
    success_probability: float
    norm: float
    beta: float
    l2_distance: float
    linf_distance: float
    postselection_identity_error: float
    degrees: dict
    ancillas: int
    system_dim: int
    simulated_dim: int
    query_counts: dict
    expected_counts: dict
    tolerances: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _postselect(pue: PUE, sys_vec: np.ndarray, counter=None) -> np.ndarray:
    full = np.zeros(pue.dim, dtype=complex)
    full[: len(sys_vec)] = sys_vec
    out = pue.apply(full, counter)
    return np.where(pue.left_mask, out, 0.0)[: len(sys_vec)]


def run_pipeline(s, spec: FilterSpec, K: CliqueComplex, k: int, kind: str,
                 output_tol: float = 1e-6, identity_tol: float = 1e-9, tol: float = 1e-12) -> FilterRunReport:
    """Encode, filter, postselect and decode; compare with the classical filter."""
    s = np.asarray(s, dtype=float)
    pue = build_quantum_filter(spec, K, k, kind, tol)
    enc = pue.info["basis"]
    state = encode_signal(s, K, k, enc)
    lap = hodge_laplacian(K, k)
    classical = apply_filter(spec, lap, s / state.norm, pue.info["alphas"])
    big_n = float(np.linalg.norm(classical))
    if big_n < NORM_FLOOR:
        raise ValueError(f"filter annihilates signal (norm {big_n:.3e}); postselection impossible")
    counter = QueryCounter()
    kept = _postselect(pue, state.amplitudes, counter)
    p = float(np.vdot(kept, kept).real)
    if p < (NORM_FLOOR / pue.alpha) ** 2:
        raise ValueError("postselection probability vanishes")
    out = decode_signal(kept, K, k, enc) / math.sqrt(p)
    out_real = out.real
    want = classical / big_n
    l2 = float(np.linalg.norm(out - want))
    linf = float(np.max(np.abs(out - want)))
    ident = abs(p * pue.alpha**2 - big_n**2)
    counts = grouped_query_counts(counter, k)
    expected = filter_query_counts(pue.info["d_lower"], pue.info["d_upper"])
    checks = {"postselection_identity": ident <= identity_tol, "query_counts": counts == expected}
    if big_n >= 1e-6:
        checks["matches_classical"] = l2 <= output_tol
    return FilterRunReport(
        amplitudes=out_real.tolist(),
        classical=want.tolist(),
        success_probability=p,
        norm=big_n,
        beta=pue.alpha,
        l2_distance=l2,
        linf_distance=linf,
        postselection_identity_error=ident,
        degrees={"d_lower": pue.info["d_lower"], "d_upper": pue.info["d_upper"]},
        ancillas=pue.ancillas,
        system_dim=enc.dim,
        simulated_dim=pue.dim,
        query_counts=counts,
        expected_counts=expected,
        tolerances={"output_l2": output_tol, "postselection_identity": identity_tol, "phase": tol},
        checks=checks,
    )


# Subcomponent projections ---------------------------------------------------


def default_kappa(xi_min: float, alpha_k: float, margin: float = 1.1) -> float:
    """A kappa just above alpha / xi_min, the smallest admissible value."""
    return margin * alpha_k / xi_min


def _projector_term(K: CliqueComplex, k_b: int, enc, adjoint: bool, kappa: float | None, eps: float, kind: str):
    """Real-polynomial PUE approximating (1 / 2 kappa^2) times the projector onto im(B^T) or im(B)."""
    xi = smallest_singular_value(K, k_b)
    a = alpha(kind, K.n, k_b)
    if xi == 0.0:
        return None, {"xi_min": 0.0, "kappa": None}
    if kappa is None:
        kappa = default_kappa(xi, a)
    if not 1.0 / kappa < xi / a:
        raise ValueError(f"kappa={kappa:.6g} violates 1/kappa < xi_min/alpha = {xi:.6g}/{a:.6g}")
    eps_poly = min(a * a * eps / K.n, 0.45)
    poly = projector_polynomial(kappa**2, eps_poly)
    h = fit_parity(lambda y: poly(y * y), 2 * poly.degree, EVEN)
    pue = boundary_pue(K, k_b, enc)
    if adjoint:
        pue = pue.adjoint()
    term = real_poly_block(pue, h)
    info = {"xi_min": xi, "kappa": kappa, "alpha": a, "eps_poly": eps_poly, "laplacian_degree": poly.degree,
            "boundary_degree": h.degree, "rescale": 2 * kappa**2}
    return term, info


def subcomponent_filter(component: str, K: CliqueComplex, k: int, kind: str, kappa=None, eps: float = 1e-3) -> PUE:
    """PUE whose block times ``info['rescale']`` approximates the Hodge projector."""
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    if component not in ("G", "C", "H"):
        raise ValueError(f"component must be G, C or H, got {component!r}")
    kap_g, kap_c = (kappa, kappa) if not isinstance(kappa, (tuple, list)) else kappa
    upper = _needs_upper(K, k) and K.count(k + 1) > 0
    enc = encoding_for(K, k, kind, upper_path=upper and component in ("C", "H"))
    sys_mask = simplex_mask(K, k, enc)
    parts = {}
    if component in ("G", "H") and k >= 1:
        parts["G"] = _projector_term(K, k, enc, False, kap_g, eps, kind)
    if component in ("C", "H") and upper:
        parts["C"] = _projector_term(K, k + 1, enc, True, kap_c, eps, kind)
    if component in ("G", "C"):
        term, info = parts.get(component, (None, {}))
        if term is None:
            zero = _constant_block(0.0, None, sys_mask)
            zero.info.update({"rescale": 1.0, "component": component, "exact_zero": True})
            return zero
        term.info.update(info)
        term.info["component"] = component
        return term
    terms = [LcuTerm(1.0, 1.0, identity_pue(sys_mask), 0)]
    meta = {}
    for name, (term, info) in parts.items():
        if term is None:
            continue
        terms.append(LcuTerm(info["rescale"], -1.0, term, boundary_ancillas(kind, k if name == "G" else k + 1)))
        meta[name] = info
    if len(terms) == 1:
        pue = identity_pue(sys_mask)
        pue.info.update({"rescale": 1.0, "component": "H"})
        return pue
    pue = lcu_combine(LcuPlan(terms))
    pue.info.update({"rescale": pue.alpha, "component": "H", "parts": meta})
    return pue


def lower_projector_filter(K: CliqueComplex, k: int, kind: str, kappa=None, eps: float = 1e-3) -> PUE:
    """Odd-polynomial QSVT approximating (B_k^T)^+ up to the factor ``info['rescale']``."""
    if k < 1:
        raise ValueError("the lower projection needs k >= 1")
    xi = smallest_singular_value(K, k)
    a = alpha(kind, K.n, k)
    if xi == 0.0:
        raise ValueError(f"B_{k} vanishes; nothing to project onto")
    if kappa is None:
        kappa = default_kappa(xi, a)
    if not 1.0 / kappa < xi / a:
        raise ValueError(f"kappa={kappa:.6g} violates 1/kappa < xi_min/alpha = {xi:.6g}/{a:.6g}")
    eps_poly = min(a * a * eps / math.sqrt(K.n), 0.45)
    poly = alt_projector_polynomial(kappa**2, eps_poly)
    enc = encoding_for(K, k, kind)
    term = real_poly_block(boundary_pue(K, k, enc), poly)
    term.info.update({"xi_min": xi, "kappa": kappa, "alpha": a, "eps_poly": eps_poly,
                      "boundary_degree": poly.degree, "rescale": 2 * kappa**2 / a, "component": "lower"})
    return term


def block_on(pue: PUE, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """Matrix elements <rows| U |cols> with ancillas at zero, in the given index order."""
    probe = np.zeros((pue.dim, len(cols)), dtype=complex)
    probe[cols, np.arange(len(cols))] = 1.0
    return pue.apply(probe)[rows]


def projector_bound(component: str, K: CliqueComplex, k: int, kind: str, kappa=None, eps: float = 1e-3) -> dict:
    """Operator-norm distance between the rescaled block and the exact projector, in simplex order."""
    if component == "lower":
        pue = lower_projector_filter(K, k, kind, kappa, eps)
        oracle = lower_pseudoinverse(K, k)
        enc = encoding_for(K, k, kind)
        rows, cols = simplex_indices(K, k - 1, enc), simplex_indices(K, k, enc)
    else:
        pue = subcomponent_filter(component, K, k, kind, kappa, eps)
        oracle = hodge_projectors(K, k)[component]
        upper = _needs_upper(K, k) and K.count(k + 1) > 0
        enc = encoding_for(K, k, kind, upper_path=upper and component in ("C", "H"))
        rows = cols = simplex_indices(K, k, enc)
    block = pue.info["rescale"] * block_on(pue, rows, cols)
    dist = float(np.linalg.norm(block.real - oracle, 2)) if oracle.size else 0.0
    return {"distance": dist, "eps": eps, "imag_max": float(np.max(np.abs(block.imag))) if block.size else 0.0,
            "pue": pue, "approx": block.real, "oracle": oracle}


@dataclass
class ProjectionRunReport:
    component: str
    amplitudes: list
    oracle: list
    success_probability: float
    oracle_norm: float
    rescale: float
    error: float
    eps: float
    kappa: float | None
    boundary_degree: int | None
    ancillas: int
    feasible: bool
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.feasible and all(self.checks.values())

    def to_json(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def run_projection(s, component: str, K: CliqueComplex, k: int, kind: str, kappa=None, eps: float = 1e-3,
                   infeasible_below: float = 1e-6) -> ProjectionRunReport:
    """Encode, project, postselect and decode one signal.

    The error is ||rescale * sqrt(p) * out - Pi s / ||s|| ||, which the operator-norm
    bound keeps below eps. Outputs whose oracle norm falls under
    ``infeasible_below`` are reported as postselection-infeasible.
    """
    s = np.asarray(s, dtype=float)
    if component == "lower":
        pue = lower_projector_filter(K, k, kind, kappa, eps)
        enc = encoding_for(K, k, kind)
        out_dim = k - 1
        oracle = lower_pseudoinverse(K, k) @ s
    else:
        pue = subcomponent_filter(component, K, k, kind, kappa, eps)
        upper = _needs_upper(K, k) and K.count(k + 1) > 0
        enc = encoding_for(K, k, kind, upper_path=upper and component in ("C", "H"))
        out_dim = k
        oracle = hodge_projectors(K, k)[component] @ s
    state = encode_signal(s, K, k, enc)
    oracle = oracle / state.norm
    full = np.zeros(pue.dim, dtype=complex)
    full[: enc.dim] = state.amplitudes
    kept = np.where(pue.left_mask, pue.apply(full), 0.0)[: enc.dim]
    p = float(np.vdot(kept, kept).real)
    approx = pue.info["rescale"] * decode_signal(kept, K, out_dim, enc)
    err = float(np.linalg.norm(approx - oracle))
    big_n = float(np.linalg.norm(oracle))
    feasible = big_n >= infeasible_below and p > 0
    amps = (approx / np.linalg.norm(approx)).real if p > 0 else np.zeros_like(oracle)
    return ProjectionRunReport(
        component=component,
        amplitudes=amps.tolist(),
        oracle=(oracle / big_n).tolist() if big_n > 0 else oracle.tolist(),
        success_probability=p,
        oracle_norm=big_n,
        rescale=float(pue.info["rescale"]),
        error=err,
        eps=eps,
        kappa=pue.info.get("kappa"),
        boundary_degree=pue.info.get("boundary_degree"),
        ancillas=pue.ancillas,
        feasible=feasible,
        checks={"within_eps": err <= eps},
    )
