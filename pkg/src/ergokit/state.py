"""Validated density matrices and Hamiltonians."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DimensionMismatch, InvalidState, NotEquispaced, NotHermitian, StructureMismatch

STATE_TOL = 1e-9


def clamp_spectrum(values, tol: float = STATE_TOL) -> np.ndarray:
    """Zero out eigenvalues in ``[-tol, 0)`` and renormalize to unit sum."""
    lam = np.array(values, dtype=float)
    if lam.size and lam.min() < -tol:
        raise InvalidState(f"negative eigenvalue {lam.min():.3e} below -{tol:g}")
    lam[lam < 0] = 0.0
    return lam / lam.sum()


def state_spectra(stack) -> np.ndarray:
    """Clamped ascending spectra of a stack of density matrices, shape ``(n, d)``.

    Applies the same validation as :class:`DensityMatrix` to every matrix.
    """
    a = np.asarray(stack, dtype=np.complex128)
    try:
        lam = linalg.eigvalsh_batch(a, STATE_TOL)
    except NotHermitian as exc:
        raise InvalidState(str(exc)) from None
    tr = np.trace(a, axis1=1, axis2=2)
    if lam.size and np.max(np.abs(tr - 1.0)) > STATE_TOL:
        raise InvalidState("a matrix in the stack has trace differing from 1 by more than 1e-9")
    if lam.size and lam.min() < -STATE_TOL:
        raise InvalidState(f"negative eigenvalue {lam.min():.3e} below -{STATE_TOL:g}")
    lam = np.where(lam < 0, 0.0, lam)
    return lam / lam.sum(axis=1, keepdims=True)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A quantum state with its subsystem structure.

    The matrix is validated on construction (Hermitian, unit trace,
    positive semidefinite up to ``1e-9``); the ascending spectrum and
    eigenbasis are computed once on first access.
    """

    matrix: np.ndarray
    dims: tuple[int, ...] = field(default=None)

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix)
        dims = (m.shape[0],) if self.dims is None else tuple(int(d) for d in self.dims)
        if int(np.prod(dims)) != m.shape[0]:
            raise DimensionMismatch(f"subsystem dims {list(dims)} do not multiply to {m.shape[0]}")
        if not linalg.is_hermitian(m, STATE_TOL):
            raise InvalidState("density matrix is not Hermitian within 1e-9")
        tr = np.trace(m)
        if abs(tr - 1.0) > STATE_TOL:
            raise InvalidState(f"trace {tr.real:.12g} differs from 1 by more than 1e-9")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)
        # forces the PSD check up front
        _ = self.spectrum

    @classmethod
    def from_vector(cls, psi, dims: Sequence[int] | None = None) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=np.complex128).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), dims)

    @classmethod
    def maximally_mixed(cls, dims: Sequence[int]) -> "DensityMatrix":
        d = int(np.prod(dims))
        return cls(np.eye(d) / d, dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def _eig(self) -> tuple[np.ndarray, np.ndarray]:
        # Hermiticity was checked on construction
        w, v = linalg.eig_hermitian_unchecked(self.matrix)
        return clamp_spectrum(w), v

    @property
    def spectrum(self) -> np.ndarray:
        """Ascending eigenvalues after PSD clamping."""
        return self._eig[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._eig[1]

    def purity(self) -> float:
        return float(np.sum(self.spectrum**2))

    def is_pure(self, tol: float = 1e-8) -> bool:
        return self.purity() >= 1.0 - tol

    def expectation(self, observable) -> float:
        # Tr[rho O] without forming the product
        return float(np.real(np.sum(self.matrix * linalg.as_matrix(observable).T)))

    def reduce(self, keep: Sequence[int]) -> "DensityMatrix":
        keep = sorted(set(keep))
        red = linalg.partial_trace(self.matrix, self.dims, keep)
        return DensityMatrix(0.5 * (red + red.conj().T), tuple(self.dims[k] for k in keep))

    def evolve(self, unitary) -> "DensityMatrix":
        u = linalg.as_matrix(unitary)
        return DensityMatrix(u @ self.matrix @ u.conj().T, self.dims)

    def mix(self, other: "DensityMatrix", t: float) -> "DensityMatrix":
        if self.dims != other.dims:
            raise DimensionMismatch(f"cannot mix states with dims {self.dims} and {other.dims}")
        return DensityMatrix(t * self.matrix + (1.0 - t) * other.matrix, self.dims)


class Hamiltonian:
    """An energy observable.

    Built with one of :meth:`explicit`, :meth:`equispaced` or
    :meth:`composite`. ``energies`` is always ascending and ``eigenbasis``
    holds the matching eigenvectors as columns.
    """

    def __init__(self, kind: str, *, matrix=None, d=None, E=None, parts=None):
        self.kind = kind
        self._matrix = matrix
        self.d = d
        self.E = E
        self.parts: tuple[Hamiltonian, ...] = tuple(parts or ())

    @classmethod
    def explicit(cls, matrix) -> "Hamiltonian":
        m = linalg.as_matrix(matrix)
        if not linalg.is_hermitian(m, STATE_TOL):
            raise NotHermitian("Hamiltonian matrix is not Hermitian within 1e-9")
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        return cls("explicit", matrix=m)

    @classmethod
    def equispaced(cls, d: int, E: float = 1.0) -> "Hamiltonian":
        """``sum_j j*E |j><j|`` on a ``d``-level system."""
        if int(d) != d or d < 1:
            raise NotEquispaced(f"level count must be a positive integer, got {d}")
        if not E > 0:
            raise NotEquispaced(f"energy quantum must be positive, got {E}")
        return cls("equispaced", d=int(d), E=float(E))

    @classmethod
    def composite(cls, parts: Sequence["Hamiltonian"]) -> "Hamiltonian":
        """Interaction-free sum of local terms, one per subsystem, in order."""
        flat = []
        for p in parts:
            flat.extend(p.parts if p.kind == "composite" else [p])
        if not flat:
            raise StructureMismatch("composite Hamiltonian needs at least one local term")
        return cls("composite", parts=flat)

    @classmethod
    def local_equispaced(cls, dims: Sequence[int], E: float = 1.0) -> "Hamiltonian":
        dims = list(dims)
        if len(dims) == 1:
            return cls.equispaced(dims[0], E)
        return cls.composite([cls.equispaced(d, E) for d in dims])

    @property
    def dims(self) -> tuple[int, ...]:
        if self.kind == "composite":
            return tuple(p.dim for p in self.parts)
        return (self.dim,)

    @property
    def locals(self) -> tuple["Hamiltonian", ...]:
        return self.parts if self.kind == "composite" else (self,)

    @cached_property
    def dim(self) -> int:
        if self.kind == "explicit":
            return self._matrix.shape[0]
        if self.kind == "equispaced":
            return self.d
        return int(np.prod([p.dim for p in self.parts]))

    @cached_property
    def matrix(self) -> np.ndarray:
        if self.kind == "explicit":
            return self._matrix
        if self.kind == "equispaced":
            return np.diag(np.arange(self.d) * self.E).astype(np.complex128)
        dims = [p.dim for p in self.parts]
        total = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for i, p in enumerate(self.parts):
            left = np.eye(int(np.prod(dims[:i])))
            right = np.eye(int(np.prod(dims[i + 1 :])))
            total += np.kron(np.kron(left, p.matrix), right)
        return total

    @cached_property
    def energies(self) -> np.ndarray:
        """Ascending eigenenergies; for a sum, all sums of local energies."""
        if self.kind == "explicit":
            return self._explicit_eig[0]
        if self.kind == "equispaced":
            return np.arange(self.d) * self.E
        return np.sort(self._sums, kind="stable")

    @cached_property
    def eigenbasis(self) -> np.ndarray:
        """Eigenvectors as columns, matching :attr:`energies`; product vectors for a sum."""
        if self.kind == "explicit":
            return self._explicit_eig[1]
        if self.kind == "equispaced":
            return np.eye(self.d, dtype=np.complex128)
        vecs = np.ones((1, 1), dtype=np.complex128)
        for p in self.parts:
            # column (i, j) of the product basis is kron(vecs[:, i], p.eigenbasis[:, j])
            b = p.eigenbasis
            vecs = np.einsum("ai,bj->abij", vecs, b).reshape(vecs.shape[0] * b.shape[0], -1)
        return vecs[:, np.argsort(self._sums, kind="stable")]

    @cached_property
    def _explicit_eig(self) -> tuple[np.ndarray, np.ndarray]:
        return linalg.eig_hermitian(self._matrix, STATE_TOL)

    @cached_property
    def _sums(self) -> np.ndarray:
        # local energy sums in row-major product order
        total = np.zeros(1)
        for p in self.parts:
            total = np.add.outer(total, p.energies).ravel()
        return total

    def is_equispaced(self) -> bool:
        return self.kind == "equispaced"

    def variance(self) -> float:
        """``Tr[H^2] - (Tr H)^2 / d``."""
        eps = self.energies
        return float(np.sum(eps**2) - np.sum(eps) ** 2 / eps.size)

    def negated(self) -> "Hamiltonian":
        return Hamiltonian.explicit(-self.matrix)

    def __repr__(self) -> str:
        if self.kind == "equispaced":
            return f"Hamiltonian.equispaced(d={self.d}, E={self.E})"
        if self.kind == "composite":
            return f"Hamiltonian.composite({list(self.parts)})"
        return f"Hamiltonian.explicit(dim={self.dim})"


def check_compatible(rho: DensityMatrix, h: Hamiltonian) -> None:
    if rho.dim != h.dim:
        raise DimensionMismatch(f"state dimension {rho.dim} != Hamiltonian dimension {h.dim}")
