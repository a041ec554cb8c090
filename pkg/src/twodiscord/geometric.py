"""Hilbert-Schmidt geometric discord: variational forms, the correlation-matrix
objective, spectral lower bounds, and closed forms for the named families."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._contract import diag_probs_batch, side_blocks_batch
from .errors import (
    DimensionMismatchError,
    DomainError,
    NotUnitVectorError,
    NumericalResidueError,
)
from .measurement import (
    OrthonormalBasis,
    ProductMeasurement,
    bloch_basis,
    diagonal_distribution,
)
from .optimize import (
    OptimizationResult,
    OptimizerConfig,
    _alternating_detail,
    maximize_over_product_bases,
    off_diagonal_coords,
    params_from_bases,
    params_from_unitary,
    pattern_search_multistart,
    product_measurement_from_params,
    product_unitaries_from_params,
    _expm_skew,
    _skew_from_params,
)
from .states import BipartiteState, partial_trace, purity, to_bloch
from .measurement import _basis_unchecked

GRAM_TOL = 1e-12
COMPLETENESS_TOL = 1e-10
RESIDUE_TOL = 1e-10
SPECIAL_CASE_TOL = 1e-12


# ---------------------------------------------------------------------------
# operator bases and correlation matrices

@dataclass(frozen=True)
class HermitianOperatorBasis:
    """dim^2 Hermitian matrices, orthonormal under the trace inner product."""

    dim: int
    operators: np.ndarray  # (dim^2, dim, dim)

    def __post_init__(self):
        ops = np.asarray(self.operators, dtype=complex)
        d = self.dim
        if ops.shape != (d * d, d, d):
            raise DimensionMismatchError(f"expected {d * d} {d}x{d} operators")
        if np.max(np.abs(ops - ops.conj().transpose(0, 2, 1))) > GRAM_TOL:
            raise DomainError("operators must be Hermitian")
        gram = np.einsum("iab,jba->ij", ops, ops)
        if np.max(np.abs(gram - np.eye(d * d))) > GRAM_TOL:
            raise DomainError("operators are not orthonormal under the trace inner product")
        # completeness: a fixed pseudo-random Hermitian must be reconstructed
        rng = np.random.default_rng(7919 * d + 11)
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        h = g + g.conj().T
        coeffs = np.einsum("ab,iba->i", h, ops)
        recon = np.einsum("i,iab->ab", coeffs, ops)
        if np.max(np.abs(recon - h)) > COMPLETENESS_TOL:
            raise DomainError("operators do not span the Hermitian matrices")
        ops.setflags(write=False)
        object.__setattr__(self, "operators", ops)


def hermitian_operator_basis(dim: int) -> HermitianOperatorBasis:
    """Identity over sqrt(dim), then normalized generalized Gell-Mann matrices.

    Fixed order: symmetric pairs (j < k, row-major), antisymmetric pairs
    (same order), then the dim-1 diagonal matrices. For dim 2 this is exactly
    {I, sigma_1, sigma_2, sigma_3}/sqrt(2).
    """
    if dim < 2:
        raise DomainError("dim must be >= 2")
    ops = [np.eye(dim, dtype=complex) / np.sqrt(dim)]
    for j in range(dim):
        for k in range(j + 1, dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[j, k] = m[k, j] = 1 / np.sqrt(2)
            ops.append(m)
    for j in range(dim):
        for k in range(j + 1, dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[j, k] = -1j / np.sqrt(2)
            m[k, j] = 1j / np.sqrt(2)
            ops.append(m)
    for l in range(1, dim):
        m = np.zeros((dim, dim), dtype=complex)
        m[np.arange(l), np.arange(l)] = 1.0
        m[l, l] = -l
        ops.append(m / np.sqrt(l * (l + 1)))
    return HermitianOperatorBasis(dim, np.array(ops))


@dataclass(frozen=True)
class CorrelationData:
    """Real coefficient matrix of a state in fixed Hermitian operator bases."""

    c: np.ndarray  # (na^2, nb^2)
    basis_a: HermitianOperatorBasis
    basis_b: HermitianOperatorBasis

    @property
    def dim_a(self) -> int:
        return self.basis_a.dim

    @property
    def dim_b(self) -> int:
        return self.basis_b.dim


def correlation_matrix(state: BipartiteState, basis_a: HermitianOperatorBasis = None,
                       basis_b: HermitianOperatorBasis = None) -> CorrelationData:
    """C_ij = tr(rho (X_i x Y_j)); tr(C C^t) equals the state's purity."""
    if basis_a is None:
        basis_a = hermitian_operator_basis(state.dim_a)
    if basis_b is None:
        basis_b = hermitian_operator_basis(state.dim_b)
    if basis_a.dim != state.dim_a or basis_b.dim != state.dim_b:
        raise DimensionMismatchError("operator basis dims do not match the state")
    r = state.reshaped()
    c = np.einsum("abcd,ica,jdb->ij", r, basis_a.operators, basis_b.operators, optimize=True)
    if np.max(np.abs(c.imag)) > RESIDUE_TOL:
        raise NumericalResidueError("correlation coefficients have imaginary residue")
    c = c.real
    pur = purity(state.rho)
    if abs(np.sum(c * c) - pur) > 1e-10:
        raise NumericalResidueError("tr(CC^t) deviates from the state's purity")
    return CorrelationData(c, basis_a, basis_b)


def measurement_matrix(basis: OrthonormalBasis, ops: HermitianOperatorBasis) -> np.ndarray:
    """Rows are the operator-basis coefficient vectors of the projectors |a><a|."""
    if basis.dim != ops.dim:
        raise DimensionMismatchError("basis and operator basis dims differ")
    u = basis.vectors
    a = np.einsum("da,idc,ca->ai", u.conj(), ops.operators, u)
    if np.max(np.abs(a.imag)) > RESIDUE_TOL:
        raise NumericalResidueError("projector coefficients have imaginary residue")
    return a.real


def objective27(cd: CorrelationData, a_mat: np.ndarray, b_mat: np.ndarray) -> float:
    """tr(A C B^t B C^t A^t): the retained purity for the bases behind A and B."""
    a_mat = np.asarray(a_mat, dtype=float)
    b_mat = np.asarray(b_mat, dtype=float)
    na, nb = cd.dim_a, cd.dim_b
    if a_mat.shape != (na, na * na) or b_mat.shape != (nb, nb * nb):
        raise DimensionMismatchError("A/B matrices do not conform with C")
    m = a_mat @ cd.c @ b_mat.T
    return float(np.sum(m * m))


# ---------------------------------------------------------------------------
# distances and dephased purities

def hs_distance_sq(r1: BipartiteState, r2: BipartiteState) -> float:
    """tr[(rho1 - rho2)^2]."""
    if (r1.dim_a, r1.dim_b) != (r2.dim_a, r2.dim_b):
        raise DimensionMismatchError("states live on different spaces")
    d = r1.entries - r2.entries
    return float(np.sum(np.abs(d) ** 2))


def dephased_purity(state: BipartiteState, m: ProductMeasurement) -> float:
    """Purity of the two-sided dephasing, sum of squared diagonal probabilities."""
    p = diagonal_distribution(state, m)
    return float(np.sum(p * p))


# ---------------------------------------------------------------------------
# closed forms

def werner_geo_closed(m: int, x: float) -> float:
    """(mx - 1)^2 / (m (m-1) (m+1)^2); zero exactly at x = 1/m."""
    if m < 2:
        raise DomainError("m must be >= 2")
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [-1, 1], got {x}")
    return (m * x - 1) ** 2 / (m * (m - 1) * (m + 1) ** 2)


def isotropic_geo_closed(m: int, x: float) -> float:
    """(m^2 x - 1)^2 / (m (m-1) (m+1)^2); zero exactly at x = 1/m^2."""
    if m < 2:
        raise DomainError("m must be >= 2")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    return (m**2 * x - 1) ** 2 / (m * (m - 1) * (m + 1) ** 2)


# ---------------------------------------------------------------------------
# spectral lower bounds

def _sorted_cc_eigvals(cd: CorrelationData) -> np.ndarray:
    lam = np.linalg.eigvalsh(cd.c @ cd.c.T)
    return lam[::-1]


def lower_bound_two_sided(cd: CorrelationData) -> float:
    """tr(CC^t) minus the top min(n_A, n_B) eigenvalues of CC^t."""
    lam = _sorted_cc_eigvals(cd)
    k = min(cd.dim_a, cd.dim_b)
    return float(np.sum(lam) - np.sum(lam[:k]))


def lower_bound_one_sided(cd: CorrelationData, side: str) -> float:
    """tr(CC^t) minus the top n_A (side A) or n_B (side B) eigenvalues."""
    if side not in ("A", "B"):
        raise DomainError(f"side must be 'A' or 'B', got {side!r}")
    lam = _sorted_cc_eigvals(cd)
    k = cd.dim_a if side == "A" else cd.dim_b
    return float(np.sum(lam) - np.sum(lam[:k]))


# ---------------------------------------------------------------------------
# optimized geometric discords

@dataclass(frozen=True)
class GeoResult:
    """A squared-HS-distance discord value with its certificate data."""

    value: float
    optimal_measurement: object  # ProductMeasurement, or OrthonormalBasis for one-sided
    lower_bound: float
    optimizer_report: OptimizationResult


def _marginal_eigenbasis_params(state: BipartiteState, side: str) -> np.ndarray:
    _, v = np.linalg.eigh(partial_trace(state, side).entries)
    return params_from_unitary(v)


def two_qubit_warm_params(state: BipartiteState, cfg: OptimizerConfig) -> np.ndarray:
    """Product-basis parameters from the Bloch alternating solution (dims (2,2))."""
    a, bv, _, _ = _alternating_detail(
        to_bloch(state), OptimizerConfig(restarts=8, seed=cfg.seed)
    )
    return params_from_bases(bloch_basis(a), bloch_basis(bv))


def _product_warm_starts(state: BipartiteState, cfg: OptimizerConfig, extra=()):
    na, nb = state.dim_a, state.dim_b
    warm = [np.zeros(na * na + nb * nb)]
    warm.append(
        np.concatenate(
            [_marginal_eigenbasis_params(state, "A"), _marginal_eigenbasis_params(state, "B")]
        )
    )
    if (na, nb) == (2, 2):
        warm.append(two_qubit_warm_params(state, cfg))
    for m in extra:
        warm.append(params_from_bases(m.basis_a, m.basis_b))
    return warm


def geo_discord_two_sided(state: BipartiteState, cfg: OptimizerConfig,
                          extra_warm_starts=()) -> GeoResult:
    """purity(state) minus the best found two-sided dephased purity.

    A heuristic upper estimate of the true infimum; the returned lower bound
    brackets it from below. No inner optimization over the classical
    probabilities is needed: for fixed bases the closest classical state is
    the dephased state itself (quadratic completion).
    """
    na, nb = state.dim_a, state.dim_b
    r = state.reshaped()
    pur = purity(state.rho)

    def batch(block):
        ua, ub = product_unitaries_from_params(block, (na, nb))
        p = diag_probs_batch(r, ua, ub)
        return np.sum(p * p, axis=(1, 2))

    def objective(m):
        return dephased_purity(state, m)

    res = maximize_over_product_bases(
        objective, (na, nb), cfg,
        warm_starts=_product_warm_starts(state, cfg, extra_warm_starts),
        param_batch_objective=batch,
    )
    cd = correlation_matrix(state)
    return GeoResult(
        value=pur - res.best_value,
        optimal_measurement=product_measurement_from_params(res.best_params, (na, nb)),
        lower_bound=lower_bound_two_sided(cd),
        optimizer_report=res,
    )


def _one_sided_warm_starts(state: BipartiteState, side: str, extra=()):
    n = state.dim_a if side == "A" else state.dim_b
    warm = [np.zeros(n * n), _marginal_eigenbasis_params(state, side)]
    if (state.dim_a, state.dim_b) == (2, 2):
        b = to_bloch(state)
        if side == "A":
            m = np.outer(b.x, b.x) + b.t @ b.t.T
        else:
            m = np.outer(b.y, b.y) + b.t.T @ b.t
        _, v = np.linalg.eigh(m)
        warm.append(params_from_unitary(bloch_basis(_unit(v[:, -1])).vectors))
    for basis in extra:
        warm.append(params_from_unitary(basis.vectors))
    return warm


def _unit(v):
    n = np.linalg.norm(v)
    return v / n if n > 0 else np.array([0.0, 0.0, 1.0])


def geo_discord_one_sided(state: BipartiteState, side: str, cfg: OptimizerConfig,
                          extra_warm_starts=()) -> GeoResult:
    """purity(state) minus the best found one-sided dephased purity."""
    if side not in ("A", "B"):
        raise DomainError(f"side must be 'A' or 'B', got {side!r}")
    n = state.dim_a if side == "A" else state.dim_b
    r = state.reshaped()
    pur = purity(state.rho)

    def batch(block):
        u = _expm_skew(_skew_from_params(np.atleast_2d(block), n))
        blocks = side_blocks_batch(r, u, side)
        return np.sum(np.abs(blocks) ** 2, axis=(1, 2, 3))

    res = pattern_search_multistart(
        batch, n * n, cfg,
        warm_starts=_one_sided_warm_starts(state, side, extra_warm_starts),
        poll_coords=off_diagonal_coords(n),
    )
    cd = correlation_matrix(state)
    basis = _basis_unchecked(_expm_skew(_skew_from_params(res.best_params[None], n))[0])
    return GeoResult(
        value=pur - res.best_value,
        optimal_measurement=basis,
        lower_bound=lower_bound_one_sided(cd, side),
        optimizer_report=res,
    )


# ---------------------------------------------------------------------------
# two-qubit Bloch forms

def two_qubit_geo_objective(b, a, bv) -> float:
    """(a.x)^2 + (b.y)^2 + (a T b)^2 for unit vectors a, b."""
    a = np.asarray(a, dtype=float)
    bv = np.asarray(bv, dtype=float)
    for v in (a, bv):
        if abs(np.linalg.norm(v) - 1.0) > 1e-10:
            raise NotUnitVectorError("a and b must be unit 3-vectors")
    return float((a @ b.x) ** 2 + (bv @ b.y) ** 2 + (a @ b.t @ bv) ** 2)


def two_qubit_geo(b, cfg: OptimizerConfig) -> GeoResult:
    """Two-sided geometric discord of a two-qubit state from its Bloch data.

    Exact-structure special cases (T = 0; zero marginals; T = x y^t) take
    closed forms; otherwise the alternating eigen-iteration runs multistart.
    """
    from .states import from_bloch  # PSD check happens here

    state = from_bloch(b)
    x, y, t = b.x, b.y, b.t
    total = 0.25 * (x @ x + y @ y + np.sum(t * t))

    a_opt = bv_opt = None
    value = None
    if np.linalg.norm(t) <= SPECIAL_CASE_TOL:
        value = 0.0
        a_opt, bv_opt = _unit(x), _unit(y)
    elif np.linalg.norm(t - np.outer(x, y)) <= SPECIAL_CASE_TOL:
        value = 0.0
        a_opt, bv_opt = _unit(x), _unit(y)
    elif np.linalg.norm(x) <= SPECIAL_CASE_TOL and np.linalg.norm(y) <= SPECIAL_CASE_TOL:
        u, s, vt = np.linalg.svd(t)
        value = 0.25 * (np.sum(t * t) - s[0] ** 2)
        a_opt, bv_opt = u[:, 0], vt[0]

    if value is not None:
        report = OptimizationResult(
            best_value=4.0 * (total - value),
            best_params=np.concatenate([a_opt, bv_opt]),
            restarts_run=0,
            iterations_total=0,
            converged=True,
        )
    else:
        a_opt, bv_opt, best, report = _alternating_detail(b, cfg)
        value = total - 0.25 * best

    cd = correlation_matrix(state)
    return GeoResult(
        value=float(value),
        optimal_measurement=ProductMeasurement(bloch_basis(a_opt), bloch_basis(bv_opt)),
        lower_bound=lower_bound_two_sided(cd),
        optimizer_report=report,
    )
