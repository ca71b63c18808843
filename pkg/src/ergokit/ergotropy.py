"""Ergotropy, antiergotropy, battery capacity and passive/active states.

Everything here is spectral: the extremal energies of a unitary orbit
depend only on the ascending state spectrum ``lam`` and the ascending
energy levels ``eps``. The passive state puts the largest population on
the lowest level, the active state on the highest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionMismatch, InvalidBlochParameters, InvalidSpectrum, NotEquispaced, NotUnitary
from .state import DensityMatrix, Hamiltonian, check_compatible, state_spectra


def passive_energy_of_spectra(lam, eps):
    """``sum_i lam_i eps_{d-1-i}`` for ascending ``lam`` and ``eps`` (batched on the last axis)."""
    lam = np.sort(np.asarray(lam, dtype=float), axis=-1)
    eps = np.sort(np.asarray(eps, dtype=float), axis=-1)
    return np.sum(lam * eps[..., ::-1], axis=-1)


def active_energy_of_spectra(lam, eps):
    """``sum_i lam_i eps_i`` for ascending ``lam`` and ``eps``."""
    lam = np.sort(np.asarray(lam, dtype=float), axis=-1)
    eps = np.sort(np.asarray(eps, dtype=float), axis=-1)
    return np.sum(lam * eps, axis=-1)


def capacity_of_spectra(lam, eps):
    """Active minus passive energy, ``sum_i lam_i (eps_i - eps_{d-1-i})``."""
    lam = np.sort(np.asarray(lam, dtype=float), axis=-1)
    eps = np.sort(np.asarray(eps, dtype=float), axis=-1)
    return np.sum(lam * (eps - eps[..., ::-1]), axis=-1)


def capacity_of_states(stack, h: Hamiltonian) -> np.ndarray:
    """Capacities of a stack of density matrices under one Hamiltonian."""
    lam = state_spectra(stack)
    if lam.shape[1] != h.dim:
        raise DimensionMismatch(f"state dimension {lam.shape[1]} != Hamiltonian dimension {h.dim}")
    return capacity_of_spectra(lam, h.energies)


@dataclass(frozen=True)
class WorkQuantities:
    mean_energy: float
    ergotropy: float
    antiergotropy: float
    capacity: float
    passive_energy: float
    active_energy: float


@dataclass(frozen=True)
class ExtremalStates:
    passive: DensityMatrix
    active: DensityMatrix


def mean_energy(rho: DensityMatrix, h: Hamiltonian) -> float:
    check_compatible(rho, h)
    return rho.expectation(h.matrix)


def work_extracted(rho: DensityMatrix, h: Hamiltonian, unitary) -> float:
    """Mean-energy drop ``Tr[rho H] - Tr[U rho U^dag H]`` of a unitary cycle."""
    check_compatible(rho, h)
    u = linalg.as_matrix(unitary)
    if u.shape[0] != rho.dim:
        raise DimensionMismatch(f"unitary of size {u.shape[0]} acting on dimension {rho.dim}")
    if not linalg.is_unitary(u, 1e-9):
        raise NotUnitary("operator is not unitary within 1e-9")
    hm = h.matrix
    after = np.real(np.trace(u @ rho.matrix @ u.conj().T @ hm))
    return float(np.real(np.trace(rho.matrix @ hm)) - after)


def work_quantities(rho: DensityMatrix, h: Hamiltonian) -> WorkQuantities:
    check_compatible(rho, h)
    lam, eps = rho.spectrum, h.energies
    mean = rho.expectation(h.matrix)
    # both already ascending
    passive = float(np.dot(lam, eps[::-1]))
    active = float(np.dot(lam, eps))
    # clamp rounding noise so the sign conventions hold exactly
    erg = max(0.0, mean - passive)
    anti = min(0.0, mean - active)
    return WorkQuantities(
        mean_energy=mean,
        ergotropy=erg,
        antiergotropy=anti,
        capacity=erg - anti,
        passive_energy=passive,
        active_energy=active,
    )


def ergotropy(rho: DensityMatrix, h: Hamiltonian) -> float:
    return work_quantities(rho, h).ergotropy


def antiergotropy(rho: DensityMatrix, h: Hamiltonian) -> float:
    return work_quantities(rho, h).antiergotropy


def capacity(rho: DensityMatrix, h: Hamiltonian) -> float:
    return work_quantities(rho, h).capacity


def extremal_states(rho: DensityMatrix, h: Hamiltonian) -> ExtremalStates:
    check_compatible(rho, h)
    lam = rho.spectrum
    basis = h.eigenbasis

    def build(pops):
        return DensityMatrix((basis * pops) @ basis.conj().T, rho.dims)

    return ExtremalStates(passive=build(lam[::-1]), active=build(lam))


def passive_unitary(rho: DensityMatrix, h: Hamiltonian) -> np.ndarray:
    """A unitary mapping ``rho`` onto its passive state."""
    check_compatible(rho, h)
    return h.eigenbasis @ rho.eigenvectors[:, ::-1].conj().T


def active_unitary(rho: DensityMatrix, h: Hamiltonian) -> np.ndarray:
    check_compatible(rho, h)
    return h.eigenbasis @ rho.eigenvectors.conj().T


def qubit_capacity(q: float, c: float) -> float:
    """Capacity of the qubit state with excited population ``q`` and coherence ``c``, in units of E."""
    if not 0.0 <= q <= 1.0 or c < 0 or c > math.sqrt(q * (1 - q)) + 1e-12:
        raise InvalidBlochParameters(f"(q={q}, c={c}) is not a valid qubit state")
    return math.sqrt((2 * q - 1) ** 2 + 4 * c * c)


def variance_lower_bound(rho: DensityMatrix, h: Hamiltonian) -> float:
    """``2 sigma_H sigma_rho / sqrt(d^2 - 1)``, a lower bound on the capacity.

    ``sigma_rho^2 = Tr rho^2 - 1/d`` and ``sigma_H^2 = Tr H^2 - (Tr H)^2/d``.
    """
    check_compatible(rho, h)
    d = rho.dim
    if d < 2:
        return 0.0
    var_rho = max(0.0, rho.purity() - 1.0 / d)
    var_h = max(0.0, h.variance())
    return 2.0 * math.sqrt(var_h * var_rho) / math.sqrt(d * d - 1)


def equispaced_variance(d: int, E: float = 1.0) -> float:
    """``Tr H^2 - (Tr H)^2/d`` for ``d`` levels spaced by ``E``: ``E^2 d(d^2-1)/12``."""
    return E * E * d * (d * d - 1) / 12.0


def bound_coefficient(d: int) -> int:
    """Sum of the pair weights ``d-1-2j`` over ``j < (d-1)/2``; equals ``floor(d^2/4)``."""
    return d * d // 4


def _check_equispaced(d, E):
    if int(d) != d or d < 2:
        raise NotEquispaced(f"need at least two equally spaced levels, got d={d}")
    if not E > 0:
        raise NotEquispaced(f"energy quantum must be positive, got {E}")


def equispaced_duality(rho: DensityMatrix, d: int, E: float = 1.0) -> tuple[float, float]:
    """Passive plus active energy, paired with the expected ``(d-1)E``."""
    _check_equispaced(d, E)
    if rho.dim != d:
        raise DimensionMismatch(f"state dimension {rho.dim} != {d}")
    wq = work_quantities(rho, Hamiltonian.equispaced(d, E))
    return wq.passive_energy + wq.active_energy, (d - 1) * E


def equispaced_capacity_bounds(spectrum, d: int, E: float = 1.0) -> tuple[float, float]:
    """Lower and upper capacity bounds for an equispaced ladder.

    upper: ``floor(d^2/4) E (lam_max - lam_min)``;
    lower: ``floor(d^2/4) E (lam_k - lam_{k-1})`` with ``k = ceil(d/2)``,
    the gap between the two central entries of the ascending spectrum.
    """
    _check_equispaced(d, E)
    lam = np.sort(np.asarray(spectrum, dtype=float))
    if lam.size != d:
        raise InvalidSpectrum(f"spectrum has {lam.size} entries, expected {d}")
    if lam.min() < -1e-9 or abs(lam.sum() - 1) > 1e-9:
        raise InvalidSpectrum("spectrum is not a probability vector")
    k = (d + 1) // 2
    coef = bound_coefficient(d) * E
    return coef * (lam[k] - lam[k - 1]), coef * (lam[-1] - lam[0])
