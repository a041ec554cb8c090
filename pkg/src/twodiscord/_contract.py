"""Batched contractions shared by the entropic and geometric objectives.

All functions take the state as a (na, nb, na, nb) tensor and stacks of
candidate basis unitaries, so a whole compass-search poll is one call.
"""

from __future__ import annotations

import numpy as np

EIG_FLOOR = 1e-14


def _projector_rows(u: np.ndarray) -> np.ndarray:
    """rows[n, o, a c] = conj(u[n, a, o]) u[n, c, o], flattened over (a, c)."""
    n, d, _ = u.shape
    return np.einsum("nao,nco->noac", u.conj(), u).reshape(n, d, d * d)


def side_blocks_batch(r: np.ndarray, u: np.ndarray, side: str) -> np.ndarray:
    """Blocks <o|rho|o> on the measured side for each candidate basis.

    Side A gives (N, na, nb, nb) blocks, side B gives (N, nb, na, na).
    """
    na, nb = r.shape[0], r.shape[1]
    n = u.shape[0]
    if side == "A":
        rm = np.ascontiguousarray(r.transpose(0, 2, 1, 3)).reshape(na * na, nb * nb)
        w = _projector_rows(u).reshape(n * na, na * na)
        return (w @ rm).reshape(n, na, nb, nb)
    rm = np.ascontiguousarray(r.transpose(1, 3, 0, 2)).reshape(nb * nb, na * na)
    w = _projector_rows(u).reshape(n * nb, nb * nb)
    return (w @ rm).reshape(n, nb, na, na)


def diag_probs_batch(r: np.ndarray, ua: np.ndarray, ub: np.ndarray) -> np.ndarray:
    """p[n, alpha, beta] = <alpha beta|rho|alpha beta> for each candidate pair."""
    nb = r.shape[1]
    n, na, _ = ua.shape
    rm = np.ascontiguousarray(r.transpose(0, 2, 1, 3)).reshape(na * na, nb * nb)
    t = (_projector_rows(ua).reshape(n * na, na * na) @ rm).reshape(n, na, nb * nb)
    v = _projector_rows(ub)
    p = np.matmul(t, v.transpose(0, 2, 1)).real
    return np.where(p < 0, 0.0, p)


def shannon_bits(p: np.ndarray, axis) -> np.ndarray:
    """-sum p log2 p with the 0 log 0 = 0 convention (floor 1e-14)."""
    safe = np.where(p < EIG_FLOOR, 1.0, p)
    return -np.sum(p * np.log2(safe), axis=axis)


def entropy_of_spectra(w: np.ndarray, axis=-1) -> np.ndarray:
    """Entropy in bits from (possibly slightly negative) eigenvalue stacks."""
    w = np.where(w < 0, 0.0, w)
    return shannon_bits(w, axis)
