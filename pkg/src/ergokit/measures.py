"""Entropy and coherence functionals of a state.

Spectral versions (``*_of_spectrum``) accept arrays whose last axis is the
spectrum, so whole batches can be evaluated at once.
"""

from __future__ import annotations

import numpy as np

from .errors import ErgokitError
from .state import DensityMatrix


def _check_base(base: float) -> None:
    if not base > 1:
        raise ErgokitError(f"log base must exceed 1, got {base}")


def von_neumann_of_spectrum(lam, base: float = 2.0):
    lam = np.asarray(lam, dtype=float)
    _check_base(base)
    safe = np.where(lam > 0, lam, 1.0)
    return -np.sum(lam * np.log(safe), axis=-1) / np.log(base)


def tsallis_of_spectrum(lam, p: float):
    if not p > 1:
        raise ErgokitError(f"Tsallis order must exceed 1, got {p}")
    lam = np.asarray(lam, dtype=float)
    return (1.0 - np.sum(lam**p, axis=-1)) / (p - 1.0)


def linear_of_spectrum(lam):
    return tsallis_of_spectrum(lam, 2.0)


def von_neumann_entropy(rho: DensityMatrix, base: float = 2.0) -> float:
    """``-sum_i l_i log_base l_i`` with ``0 log 0 = 0``; base 2 gives bits."""
    return max(0.0, float(von_neumann_of_spectrum(rho.spectrum, base)))


def tsallis_entropy(rho: DensityMatrix, p: float) -> float:
    return max(0.0, float(tsallis_of_spectrum(rho.spectrum, p)))


def linear_entropy(rho: DensityMatrix) -> float:
    """``1 - Tr rho^2``; identical to ``tsallis_entropy(rho, 2)``."""
    return tsallis_entropy(rho, 2.0)


def dephased(rho: DensityMatrix) -> DensityMatrix:
    """The incoherent part: off-diagonal entries removed."""
    return DensityMatrix(np.diag(np.diag(rho.matrix).real), rho.dims)


def coherence_l1(rho: DensityMatrix) -> float:
    """Sum of absolute off-diagonal entries in the stored basis.

    The stored basis is taken to be the energy eigenbasis in ascending
    order; rotating into it is the caller's job.
    """
    m = np.abs(rho.matrix)
    return float(m[~np.eye(len(m), dtype=bool)].sum())


def coherence_relative_entropy(rho: DensityMatrix, base: float = 2.0) -> float:
    diag = np.clip(np.diag(rho.matrix).real, 0.0, None)
    value = von_neumann_of_spectrum(diag / diag.sum(), base) - von_neumann_of_spectrum(rho.spectrum, base)
    return max(0.0, float(value))


def coherence_robustness(rho: DensityMatrix) -> tuple[float, float]:
    """Interval enclosing the robustness of coherence.

    Exact (a degenerate interval at the l1 value) for qubits and pure
    states; otherwise the bounds ``l1/(d-1) <= RoC <= l1``.
    """
    l1 = coherence_l1(rho)
    if rho.dim <= 2 or rho.is_pure(1e-10):
        return l1, l1
    return l1 / (rho.dim - 1), l1
