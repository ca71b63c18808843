"""Entropy-matched Gibbs states and the many-copy (total) quantities.

Entropies in this module are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, EntropyOutOfRange, NoConvergence
from .measures import von_neumann_of_spectrum
from .state import DensityMatrix, Hamiltonian, check_compatible

MAX_ITER = 200
# bisection runs to bracket collapse; this only short-circuits exact hits
ENTROPY_TOL = 1e-15
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class GibbsMatch:
    beta: float
    gibbs_state: DensityMatrix
    achieved_entropy: float
    energy: float


@dataclass(frozen=True)
class TotalQuantities:
    total_ergotropy: float
    total_antiergotropy: float
    total_capacity: float
    beta: float
    beta_star: float


def gibbs_populations(eps, beta: float) -> np.ndarray:
    """``exp(-beta eps)/Z`` computed with a shift that keeps the exponent non-positive."""
    eps = np.asarray(eps, dtype=float)
    if beta == 0:
        return np.full(eps.size, 1.0 / eps.size)
    x = -beta * eps
    w = np.exp(x - x.max())
    return w / w.sum()


def _entropy(p) -> float:
    return float(von_neumann_of_spectrum(p, math.e))


def _gibbs_entropy(shifted: np.ndarray, beta: float) -> float:
    # shifted energies have minimum 0, so exp(-beta*eps) never overflows
    w = np.exp(-beta * shifted)
    z = w.sum()
    return math.log(z) + beta * float(np.dot(w, shifted)) / z


def _solve_positive_beta(eps: np.ndarray, target: float) -> float:
    # S(beta) decreases monotonically from ln d at beta = 0
    spread = eps[-1] - eps[0]
    lo, hi = 0.0, 50.0 / spread
    s_lo, s_hi = math.log(eps.size), _gibbs_entropy(eps, hi)
    while s_hi > target:
        lo, s_lo = hi, s_hi
        hi *= 2.0
        if hi > 1e300:
            raise NoConvergence("could not bracket the inverse temperature")
        s_hi = _gibbs_entropy(eps, hi)
    for _ in range(MAX_ITER):
        if not s_hi - 1e-12 <= target <= s_lo + 1e-12:
            raise NoConvergence(f"bisection bracket [{lo}, {hi}] lost the root")
        mid = 0.5 * (lo + hi)
        s_mid = _gibbs_entropy(eps, mid)
        if abs(s_mid - target) <= ENTROPY_TOL:
            return mid
        if s_mid > target:
            lo, s_lo = mid, s_mid
        else:
            hi, s_hi = mid, s_mid
        if hi - lo <= 1e-15 * hi:
            return mid
    raise NoConvergence(f"bisection did not converge within {MAX_ITER} iterations")


def _match_populations(target_entropy: float, eps: np.ndarray, sign: str) -> tuple[float, np.ndarray]:
    """``(beta, populations)`` over the ascending levels ``eps``."""
    if sign not in ("positive", "negative"):
        raise ValueError(f"sign must be 'positive' or 'negative', got {sign!r}")
    d = eps.size
    ln_d = math.log(d)
    if target_entropy < -1e-12 or target_entropy > ln_d + 1e-12:
        raise EntropyOutOfRange(f"target entropy {target_entropy} outside [0, ln {d}]")
    target = min(max(target_entropy, 0.0), ln_d)
    spread = eps[-1] - eps[0]
    flip = 1.0 if sign == "positive" else -1.0

    if ln_d - target <= 1e-14:
        return 0.0, np.full(d, 1.0 / d)
    if spread <= DEGENERACY_TOL:
        raise DegenerateSpectrum("fully degenerate Hamiltonian admits only the maximally mixed Gibbs state")
    # the negative branch is the positive branch of -H
    work = np.sort(flip * eps)
    work = work - work[0]
    extreme = int(np.sum(work <= DEGENERACY_TOL))
    if target <= math.log(extreme) + 1e-14:
        beta = math.inf
        sorted_pops = np.where(work <= DEGENERACY_TOL, 1.0 / extreme, 0.0)
    else:
        beta = _solve_positive_beta(work, target)
        sorted_pops = gibbs_populations(work, beta)
    # sorted_pops follow ascending flip*eps; map back onto ascending eps
    pops = sorted_pops if flip > 0 else sorted_pops[::-1]
    return flip * beta, pops


def match_gibbs(target_entropy: float, h: Hamiltonian, sign: str = "positive") -> GibbsMatch:
    """Gibbs state ``exp(-beta H)/Z`` whose entropy equals ``target_entropy`` (nats).

    ``sign="positive"`` returns ``beta >= 0`` (lowest energy at that
    entropy); ``sign="negative"`` returns ``beta <= 0`` (highest energy).
    A zero-entropy target short-circuits to ``beta = +-inf`` and the ground
    (or top) projector. When the extreme level is ``g``-fold degenerate and
    the target is below ``ln g`` no Gibbs state matches; the uniform state
    on that level is returned with ``beta = +-inf``.
    """
    eps = np.asarray(h.energies, dtype=float)
    beta, pops = _match_populations(target_entropy, eps, sign)
    basis = h.eigenbasis
    state = DensityMatrix((basis * pops) @ basis.conj().T, h.dims)
    return GibbsMatch(
        beta=beta,
        gibbs_state=state,
        achieved_entropy=_entropy(pops),
        energy=float(np.dot(pops, eps)),
    )


def total_quantities(rho: DensityMatrix, h: Hamiltonian) -> TotalQuantities:
    """Per-copy many-copy limits from the entropy-matched Gibbs pair."""
    check_compatible(rho, h)
    s = _entropy(rho.spectrum)
    eps = np.asarray(h.energies, dtype=float)
    beta, cold = _match_populations(s, eps, "positive")
    neg_beta, hot = _match_populations(s, eps, "negative")
    e_cold, e_hot = float(np.dot(cold, eps)), float(np.dot(hot, eps))
    mean = rho.expectation(h.matrix)
    return TotalQuantities(
        total_ergotropy=mean - e_cold,
        total_antiergotropy=mean - e_hot,
        total_capacity=e_hot - e_cold,
        beta=beta,
        beta_star=-neg_beta,
    )
