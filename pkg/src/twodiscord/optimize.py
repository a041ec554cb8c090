"""Search over measurement bases.

Unitaries are parametrized as exponentials of anti-Hermitian matrices; the
search engine is a deterministic multistart compass (pattern) search run in
lockstep across restarts so candidate batches can be evaluated vectorized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DomainError, OptimizerFailureError
from .measurement import OrthonormalBasis, ProductMeasurement, _basis_unchecked
from .states import TwoQubitBloch

_INITIAL_STEP = 0.25
# restarts trailing the incumbent best by less than this are retired early;
# the retained leader still refines down to the configured tolerances
_RETIRE_LAG = 1e-8


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    max_iterations: int = 500
    step_tolerance: float = 1e-10
    value_tolerance: float = 1e-12
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise DomainError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be >= 1")
        if self.step_tolerance <= 0 or self.value_tolerance <= 0:
            raise DomainError("tolerances must be > 0")


@dataclass(frozen=True)
class OptimizationResult:
    best_value: float
    best_params: np.ndarray
    restarts_run: int
    iterations_total: int
    converged: bool


# ---------------------------------------------------------------------------
# unitary parametrization

def _pair_indices(n: int):
    j, k = np.triu_indices(n, k=1)
    return j, k


def _skew_from_params(params: np.ndarray, n: int) -> np.ndarray:
    """Batched anti-Hermitian generator from (N, n^2) parameter rows."""
    params = np.atleast_2d(params)
    nn = params.shape[0]
    npairs = n * (n - 1) // 2
    if params.shape[1] != n * n:
        raise DomainError(f"expected {n * n} parameters, got {params.shape[1]}")
    j, k = _pair_indices(n)
    p1 = params[:, :npairs]
    p2 = params[:, npairs : 2 * npairs]
    d = params[:, 2 * npairs :]
    kmat = np.zeros((nn, n, n), dtype=complex)
    kmat[:, j, k] = p1 + 1j * p2
    kmat[:, k, j] = -p1 + 1j * p2
    kmat[:, np.arange(n), np.arange(n)] = 1j * d
    return kmat


_EXPM_COEFFS = 1.0 / np.array([math.factorial(k) for k in range(16)], dtype=float)


def _expm_skew(kmat: np.ndarray) -> np.ndarray:
    """Batched matrix exponential by scaling-and-squaring.

    The core is a degree-15 Taylor polynomial evaluated Paterson-Stockmeyer
    style (4 chunks in powers of A^4), which needs 6 batched matmuls instead
    of the 15 a Horner loop would take.
    """
    nrm = np.sqrt(np.sum(np.abs(kmat) ** 2, axis=(-2, -1))).max()
    s = 0 if nrm <= 0.4 else int(np.ceil(np.log2(nrm / 0.4)))
    a = kmat / (2.0**s)
    n = kmat.shape[-1]
    eye = np.broadcast_to(np.eye(n, dtype=complex), kmat.shape)
    a2 = a @ a
    a3 = a2 @ a
    a4 = a3 @ a
    powers = np.stack([eye, a, a2, a3])
    chunks = np.tensordot(_EXPM_COEFFS.reshape(4, 4), powers, axes=1)
    u = chunks[0] + a4 @ (chunks[1] + a4 @ (chunks[2] + a4 @ chunks[3]))
    for _ in range(s):
        u = u @ u
    return u


def unitary_from_params(params, n: int) -> np.ndarray:
    """exp of the anti-Hermitian matrix packed in ``params`` (length n^2).

    Layout: n(n-1)/2 real antisymmetric entries, n(n-1)/2 imaginary symmetric
    entries (both upper-triangle row-major), then n diagonal phases.
    params = 0 maps to the identity.
    """
    params = np.asarray(params, dtype=float)
    if params.shape != (n * n,):
        raise DomainError(f"expected {n * n} parameters, got shape {params.shape}")
    return _expm_skew(_skew_from_params(params[None, :], n))[0]


def params_from_unitary(u: np.ndarray) -> np.ndarray:
    """Inverse of unitary_from_params via the principal matrix logarithm."""
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    t, z = scipy.linalg.schur(u, output="complex")
    kmat = (z * (1j * np.angle(np.diag(t)))) @ z.conj().T
    j, k = _pair_indices(n)
    return np.concatenate(
        [kmat[j, k].real, kmat[j, k].imag, np.diag(kmat).imag]
    )


_DEDUP_KEY = np.random.default_rng(901).standard_normal(256)


def split_product_params(params: np.ndarray, dims) -> tuple[np.ndarray, np.ndarray]:
    na, nb = dims
    params = np.atleast_2d(params)
    return params[:, : na * na], params[:, na * na :]


def _expm_skew_dedup(p: np.ndarray, n: int) -> np.ndarray:
    """Exponentiate parameter rows, computing each distinct row only once.

    Compass-search polls perturb one coordinate at a time, so in a product
    search roughly half the candidate rows repeat the base point on each side.
    Rows are grouped by a scalar hash (dot with a fixed random vector), which
    is cheaper than a lexicographic row sort; the grouping is verified exactly
    and falls back to the full computation on a hash collision.
    """
    if p.shape[0] > 2 * p.shape[1]:
        key = p @ _DEDUP_KEY[: p.shape[1]]
        uniq_keys, first, inv = np.unique(key, return_index=True, return_inverse=True)
        if uniq_keys.shape[0] < p.shape[0] // 2 and np.array_equal(p[first][inv], p):
            return _expm_skew(_skew_from_params(p[first], n))[inv]
    return _expm_skew(_skew_from_params(p, n))


def product_unitaries_from_params(params, dims) -> tuple[np.ndarray, np.ndarray]:
    """Batched (U_A, U_B) stacks from concatenated parameter rows."""
    na, nb = dims
    pa, pb = split_product_params(np.atleast_2d(np.asarray(params, dtype=float)), dims)
    return _expm_skew_dedup(pa, na), _expm_skew_dedup(pb, nb)


def product_measurement_from_params(params, dims) -> ProductMeasurement:
    ua, ub = product_unitaries_from_params(np.atleast_2d(params), dims)
    return ProductMeasurement(_basis_unchecked(ua[0]), _basis_unchecked(ub[0]))


def params_from_bases(basis_a: OrthonormalBasis, basis_b: OrthonormalBasis) -> np.ndarray:
    return np.concatenate(
        [params_from_unitary(basis_a.vectors), params_from_unitary(basis_b.vectors)]
    )


def off_diagonal_coords(n: int) -> np.ndarray:
    """Parameter indices that actually move the measurement basis.

    The n trailing diagonal-phase parameters only rephase basis columns, which
    leaves every rank-1 projector fixed, so searches over bases skip them.
    """
    return np.arange(n * (n - 1))


# ---------------------------------------------------------------------------
# multistart compass search

def _restart_seed_params(seed: int, restart: int, n_params: int) -> np.ndarray:
    # counter-based: each restart owns an independent stream keyed on (seed, index)
    rng = np.random.default_rng([seed, restart])
    return rng.uniform(-1.5, 1.5, n_params)


def pattern_search_multistart(batch_eval, n_params: int, cfg: OptimizerConfig,
                              warm_starts=(), poll_coords=None) -> OptimizationResult:
    """Maximize a batched objective over parameter vectors.

    ``batch_eval`` maps an (N, n_params) array to N objective values. Restarts
    run in lockstep; each accepts the best polled neighbor, shrinks its step on
    failure, and stops when an accepted improvement falls below the value
    tolerance or the step falls below the step tolerance.

    ``poll_coords`` restricts polling to a subset of coordinates; use it when
    some parameters are known gauge directions of the objective.
    """
    warm = [np.asarray(w, dtype=float) for w in warm_starts]
    total = len(warm) + cfg.restarts
    if total < 1:
        raise OptimizerFailureError("no restarts to run")
    params = np.empty((total, n_params))
    for i, w in enumerate(warm):
        params[i] = w
    for r in range(cfg.restarts):
        params[len(warm) + r] = _restart_seed_params(cfg.seed, r, n_params)

    values = np.asarray(batch_eval(params), dtype=float)
    steps = np.full(total, _INITIAL_STEP)
    active = np.ones(total, dtype=bool)
    converged = np.zeros(total, dtype=bool)
    iters = np.zeros(total, dtype=int)
    coords = np.arange(n_params) if poll_coords is None else np.asarray(poll_coords)
    basis = np.eye(n_params)[coords]
    directions = np.concatenate([basis, -basis])

    while np.any(active):
        idx = np.nonzero(active)[0]
        cand = params[idx][:, None, :] + steps[idx][:, None, None] * directions[None]
        vals = np.asarray(batch_eval(cand.reshape(-1, n_params)), dtype=float)
        vals = vals.reshape(len(idx), len(directions))
        best_j = np.argmax(vals, axis=1)
        best_v = vals[np.arange(len(idx)), best_j]
        iters[idx] += 1
        imp = best_v - values[idx]
        acc = imp > 0
        up = idx[acc]
        values[up] = best_v[acc]
        params[up] = cand[acc, best_j[acc]]
        steps[up] = np.minimum(2.0 * steps[up], _INITIAL_STEP)
        small = idx[acc & (imp < cfg.value_tolerance)]
        converged[small] = True
        active[small] = False
        down = idx[~acc]
        steps[down] *= 0.5
        stuck = down[steps[down] < cfg.step_tolerance]
        converged[stuck] = True
        active[stuck] = False
        active[idx[iters[idx] >= cfg.max_iterations]] = False
        # retire restarts that have caught up with the incumbent maximum; the
        # lowest-index one among them keeps refining, the rest can only tie it
        vmax = values.max()
        margin = max(cfg.value_tolerance, _RETIRE_LAG)
        caught = np.nonzero(active & (values >= vmax - margin))[0]
        if len(caught):
            keep = int(np.nonzero(values >= vmax - margin)[0][0])
            drop = caught[caught != keep]
            converged[drop] = True
            active[drop] = False

    vmax = values.max()
    best = int(np.nonzero(values >= vmax - cfg.value_tolerance)[0][0])
    return OptimizationResult(
        best_value=float(values[best]),
        best_params=params[best].copy(),
        restarts_run=total,
        iterations_total=int(iters.sum()),
        converged=bool(converged[best]),
    )


def maximize_over_product_bases(objective, dims, cfg: OptimizerConfig,
                                warm_starts=(), param_batch_objective=None) -> OptimizationResult:
    """Maximize ``objective(ProductMeasurement)`` over all product bases.

    ``param_batch_objective``, when given, evaluates a whole (N, n_params)
    block of parameter rows at once and must agree with ``objective``.
    """
    na, nb = dims
    n_params = na * na + nb * nb
    if param_batch_objective is not None:
        batch = param_batch_objective
    else:
        def batch(block):
            return np.array(
                [objective(product_measurement_from_params(row, dims)) for row in block]
            )
    coords = np.concatenate([off_diagonal_coords(na), na * na + off_diagonal_coords(nb)])
    return pattern_search_multistart(batch, n_params, cfg, warm_starts, poll_coords=coords)


# ---------------------------------------------------------------------------
# alternating eigen-iteration and grid oracle on the two-qubit Bloch objective

def bloch_pair_objective(x, y, t, a, b) -> float:
    return float((a @ x) ** 2 + (b @ y) ** 2 + (a @ t @ b) ** 2)


def _top_unit_eigvec(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    vec = v[:, -1]
    # deterministic sign: first component of largest magnitude made positive
    piv = int(np.argmax(np.abs(vec)))
    if vec[piv] < 0:
        vec = -vec
    return vec


def _alternating_detail(b: TwoQubitBloch, cfg: OptimizerConfig):
    x, y, t = b.x, b.y, b.t
    _, _, vt = np.linalg.svd(t)
    starts = [np.eye(3)[i] for i in range(3)] + [vt[0]]
    if np.linalg.norm(y) > 0:
        starts.append(y / np.linalg.norm(y))
    for r in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, r])
        v = rng.standard_normal(3)
        n = np.linalg.norm(v)
        starts.append(v / n if n > 0 else np.eye(3)[0])

    best = (-np.inf, None, None, 0)
    total_iters = 0
    any_converged = False
    for i, bv0 in enumerate(starts):
        bv = bv0
        val = -np.inf
        conv = False
        for _ in range(cfg.max_iterations):
            total_iters += 1
            w = t @ bv
            a = _top_unit_eigvec(np.outer(x, x) + np.outer(w, w))
            w2 = t.T @ a
            bv = _top_unit_eigvec(np.outer(y, y) + np.outer(w2, w2))
            new = bloch_pair_objective(x, y, t, a, bv)
            if new - val < cfg.value_tolerance:
                val = max(val, new)
                conv = True
                break
            val = new
        if val > best[0] + cfg.value_tolerance:
            best = (val, a, bv, i)
        any_converged = any_converged or conv
    value, a, bv, idx = best
    report = OptimizationResult(
        best_value=float(value),
        best_params=np.concatenate([a, bv]),
        restarts_run=len(starts),
        iterations_total=total_iters,
        converged=any_converged,
    )
    return a, bv, float(value), report


def alternating_sphere_max(b: TwoQubitBloch, cfg: OptimizerConfig):
    """Maximize (a.x)^2 + (b.y)^2 + (a T b)^2 over unit vectors by alternation.

    Each half-step is the exact top-eigenvector maximization of a quadratic
    form on the sphere, so the value sequence is nondecreasing.
    """
    a, bv, value, _ = _alternating_detail(b, cfg)
    return a, bv, value


def sphere_grid(resolution: int) -> np.ndarray:
    """Latitude-longitude grid: (resolution+1) latitudes, 2*resolution longitudes."""
    theta = np.linspace(0.0, np.pi, resolution + 1)
    phi = np.arange(2 * resolution) * (np.pi / resolution)
    st, ct = np.sin(theta), np.cos(theta)
    pts = np.empty(((resolution + 1) * 2 * resolution, 3))
    pts[:, 0] = np.outer(st, np.cos(phi)).ravel()
    pts[:, 1] = np.outer(st, np.sin(phi)).ravel()
    pts[:, 2] = np.repeat(ct, 2 * resolution)
    return pts


def sphere_grid_oracle(b: TwoQubitBloch, resolution: int) -> float:
    """Exhaustive max of the Bloch pair objective over grid points on both spheres.

    The pairwise max is computed exactly with branch-and-bound pruning: for a
    fixed a the continuous maximum over b is a closed-form top eigenvalue of a
    rank-2 form, which upper-bounds every grid value, so grid directions whose
    bound cannot beat the incumbent are skipped without changing the result.
    """
    if resolution < 8:
        raise DomainError("resolution must be >= 8")
    x, y, t = b.x, b.y, b.t
    pts = sphere_grid(resolution)
    ax2 = (pts @ x) ** 2
    by2 = (pts @ y) ** 2
    w = pts @ t  # row i is a_i^T T, i.e. (T^t a_i)^t
    g11 = float(y @ y)
    g22 = np.sum(w * w, axis=1)
    g12 = w @ y
    lam = 0.5 * (g11 + g22 + np.sqrt((g11 - g22) ** 2 + 4.0 * g12**2))
    ub = ax2 + lam
    order = np.argsort(-ub, kind="stable")
    best = -np.inf
    for i in order:
        if ub[i] <= best:
            break
        v = ax2[i] + np.max(by2 + (pts @ w[i]) ** 2)
        if v > best:
            best = v
    return float(best)
