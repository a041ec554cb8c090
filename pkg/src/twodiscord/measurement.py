"""Orthonormal measurement bases and one-/two-sided dephasing channels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DomainError, NotUnitVectorError
from .states import PAULI, BipartiteState, DensityMatrix

UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class OrthonormalBasis:
    """A complete orthonormal basis stored as a unitary; columns are the vectors."""

    vectors: np.ndarray

    def __post_init__(self):
        u = np.ascontiguousarray(np.asarray(self.vectors, dtype=complex))
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DimensionMismatchError(f"expected a square matrix, got shape {u.shape}")
        gram = u.conj().T @ u
        if np.max(np.abs(gram - np.eye(u.shape[0]))) > UNITARY_TOL:
            raise DomainError("columns are not orthonormal within tolerance")
        u.setflags(write=False)
        object.__setattr__(self, "vectors", u)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def projector(self, alpha: int) -> np.ndarray:
        v = self.vectors[:, alpha]
        return np.outer(v, v.conj())


def _basis_unchecked(vectors: np.ndarray) -> OrthonormalBasis:
    # internal fast path: caller guarantees unitarity
    b = object.__new__(OrthonormalBasis)
    v = np.ascontiguousarray(vectors)
    v.setflags(write=False)
    object.__setattr__(b, "vectors", v)
    return b


@dataclass(frozen=True)
class ProductMeasurement:
    """A pair of subsystem bases defining the projectors |a><a| x |b><b|."""

    basis_a: OrthonormalBasis
    basis_b: OrthonormalBasis


def computational_basis(dim: int) -> OrthonormalBasis:
    if dim < 1:
        raise DomainError("dim must be >= 1")
    return _basis_unchecked(np.eye(dim, dtype=complex))


def bloch_basis(a) -> OrthonormalBasis:
    """Qubit basis whose projectors are (I +- a.sigma)/2 for a real unit 3-vector.

    The first column is the +a eigenvector, fixed by the convention
    (cos(theta/2), e^{i phi} sin(theta/2)).
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (3,):
        raise DimensionMismatchError("expected a real 3-vector")
    if abs(np.linalg.norm(a) - 1.0) > UNITARY_TOL:
        raise NotUnitVectorError(f"norm is {np.linalg.norm(a)}, expected 1")
    theta = np.arccos(np.clip(a[2], -1.0, 1.0))
    phi = np.arctan2(a[1], a[0])
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    plus = np.array([c, np.exp(1j * phi) * s])
    minus = np.array([-s, np.exp(1j * phi) * c])
    return _basis_unchecked(np.column_stack([plus, minus]))


def bloch_vector_of_basis(basis: OrthonormalBasis):
    """Inverse of bloch_basis up to phase: the +a projector's Bloch vector."""
    if basis.dim != 2:
        raise DimensionMismatchError("requires a qubit basis")
    p = basis.projector(0)
    return np.array([np.real(np.trace(p @ PAULI[i])) for i in range(3)])


def _check_side(side: str):
    if side not in ("A", "B"):
        raise DomainError(f"side must be 'A' or 'B', got {side!r}")


def dephase_one_sided(state: BipartiteState, basis: OrthonormalBasis, side: str) -> BipartiteState:
    """sum_a (Pi_a x I) rho (Pi_a x I) (or the B-side analogue).

    Zeroes the off-diagonal blocks on the measured side in the measurement
    basis; the unmeasured marginal is preserved.
    """
    _check_side(side)
    na, nb = state.dim_a, state.dim_b
    u = basis.vectors
    if basis.dim != (na if side == "A" else nb):
        raise DimensionMismatchError("basis dimension does not match the measured side")
    r = state.reshaped()
    if side == "A":
        # blocks[o] = <o|rho|o>_A, an nb x nb matrix per basis vector o
        blocks = np.einsum("ao,abcd,co->obd", u.conj(), r, u, optimize=True)
        out = np.einsum("ao,obd,co->abcd", u, blocks, u.conj(), optimize=True)
    else:
        blocks = np.einsum("bo,abcd,do->oac", u.conj(), r, u, optimize=True)
        out = np.einsum("bo,oac,do->abcd", u, blocks, u.conj(), optimize=True)
    d = na * nb
    return BipartiteState(na, nb, DensityMatrix(out.reshape(d, d)))


def dephase_two_sided(state: BipartiteState, m: ProductMeasurement) -> BipartiteState:
    """sum_ab Pi_ab rho Pi_ab; diagonal in the product basis."""
    p = diagonal_distribution(state, m)
    w = np.kron(m.basis_a.vectors, m.basis_b.vectors)
    rho = (w * p.reshape(-1)) @ w.conj().T
    return BipartiteState(state.dim_a, state.dim_b, DensityMatrix(rho))


def diagonal_distribution(state: BipartiteState, m: ProductMeasurement) -> np.ndarray:
    """The table <alpha beta|rho|alpha beta> >= 0, summing to 1."""
    na, nb = state.dim_a, state.dim_b
    if m.basis_a.dim != na or m.basis_b.dim != nb:
        raise DimensionMismatchError("measurement dims do not match the state")
    ua, ub = m.basis_a.vectors, m.basis_b.vectors
    r = state.reshaped()
    p = np.einsum("ap,bq,abcd,cp,dq->pq", ua.conj(), ub.conj(), r, ua, ub, optimize=True)
    p = np.real(p)
    # round-off may leave residue of order 1e-17 below zero
    return np.where(p < 0, 0.0, p)
