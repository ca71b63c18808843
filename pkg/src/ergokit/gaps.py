"""Capacity gaps between global and local unitary control.

For an interaction-free Hamiltonian ``H = sum_i H_i`` the work done by a
product unitary splits into a sum of local works, so the best local
discharge (charge) is the sum of the reduced-state ergotropies
(antiergotropies). All gaps below use that reduction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import InvalidCoefficients, NotPure, StructureMismatch, WcfRequiresTripartite, WrongDimension
from .ergotropy import work_quantities
from .families import acin
from .state import DensityMatrix, Hamiltonian

ZERO_GAP = 1e-10
_RANK_TOL = 64 * np.finfo(float).eps

_SY2 = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def _check_structure(rho: DensityMatrix, h: Hamiltonian) -> None:
    if h.kind != "composite" or len(h.parts) < 2:
        raise StructureMismatch("gap quantities need a composite Hamiltonian with at least two local terms")
    if tuple(rho.dims) != h.dims:
        raise StructureMismatch(f"state dims {list(rho.dims)} do not match Hamiltonian dims {list(h.dims)}")


def _normalize_partition(partition, n: int) -> list[list[int]]:
    blocks = [sorted(int(k) for k in b) for b in partition]
    flat = sorted(k for b in blocks for k in b)
    if flat != list(range(n)) or any(not b for b in blocks):
        raise StructureMismatch(f"partition {partition} does not cover subsystems 0..{n - 1} disjointly")
    return blocks


def block_hamiltonian(h: Hamiltonian, block: Sequence[int]) -> Hamiltonian:
    return _block_of(tuple(h.parts[k] for k in block))


@lru_cache(maxsize=256)
def _block_of(parts: tuple[Hamiltonian, ...]) -> Hamiltonian:
    # keyed by part identity, so repeated cuts reuse cached spectra and matrices
    return parts[0] if len(parts) == 1 else Hamiltonian.composite(parts)


def block_quantities(rho: DensityMatrix, h: Hamiltonian, partition) -> list:
    """Work quantities of each reduced block state under its block Hamiltonian."""
    _check_structure(rho, h)
    blocks = _normalize_partition(partition, len(h.parts))
    return [work_quantities(rho.reduce(b), block_hamiltonian(h, b)) for b in blocks]


def ergotropic_gaps(rho: DensityMatrix, h: Hamiltonian, partition=None) -> tuple[float, float]:
    """``(delta_out, delta_in)``: global advantage for discharging and for charging.

    ``partition`` defaults to one block per subsystem.
    """
    _check_structure(rho, h)
    if partition is None:
        partition = [[k] for k in range(len(h.parts))]
    glob = work_quantities(rho, h)
    local = block_quantities(rho, h, partition)
    delta_out = glob.ergotropy - sum(q.ergotropy for q in local)
    delta_in = sum(q.antiergotropy for q in local) - glob.antiergotropy
    return delta_out, delta_in


def capacity_gap(rho: DensityMatrix, h: Hamiltonian, partition=None) -> float:
    """Global capacity minus the summed capacities of the partition blocks."""
    _check_structure(rho, h)
    if partition is None:
        partition = [[k] for k in range(len(h.parts))]
    glob = work_quantities(rho, h)
    return glob.capacity - sum(q.capacity for q in block_quantities(rho, h, partition))


def bipartitions(n: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All ``2^(n-1) - 1`` unordered bipartitions as ``(X, X^c)``.

    ``X`` is the smaller block (the one holding subsystem 0 on a tie);
    the list is ordered by ``(len(X), X)``.
    """
    out = []
    for size in range(1, n // 2 + 1):
        for x in itertools.combinations(range(n), size):
            rest = tuple(k for k in range(n) if k not in x)
            if size * 2 == n and 0 not in x:
                continue
            out.append((x, rest))
    out.sort(key=lambda pair: (len(pair[0]), pair[0]))
    return out


def concurrence_2q(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit state.

    With ``rho = F F^dag`` and ``F = V sqrt(diag(lam))``, the square roots
    of the eigenvalues of ``rho (Y x Y) rho^* (Y x Y)`` are the singular
    values of the symmetric matrix ``F^T (Y x Y) F``; taking them from an
    SVD avoids an ill-conditioned non-Hermitian eigenproblem.
    Eigenvalues below ``64 eps`` are rounding noise of a rank-deficient
    state and are dropped: their square roots (~1e-8) would otherwise
    leak into ``C`` at that size.
    """
    if tuple(rho.dims) != (2, 2):
        raise WrongDimension(f"concurrence needs a 2x2 system, got dims {list(rho.dims)}")
    lam = np.where(rho.spectrum < _RANK_TOL, 0.0, rho.spectrum)
    f = rho.eigenvectors * np.sqrt(lam)
    mu = np.linalg.svd(f.T @ _SY2 @ f, compute_uv=False)
    return float(min(1.0, max(0.0, mu[0] - mu[1] - mu[2] - mu[3])))


def capacity_gap_mixed_2q(rho: DensityMatrix) -> float:
    """Convex-roof capacity gap of a two-qubit state, in units of E: ``2(1 - sqrt(1 - C^2))``."""
    c = concurrence_2q(rho)
    # sqrt(1 - C^2) turns a one-ulp shortfall at C = 1 into a 2e-8 error
    if c >= 1.0 - 4 * np.finfo(float).eps:
        return 2.0
    return 2.0 * (1.0 - math.sqrt(max(0.0, 1.0 - c * c)))


@dataclass(frozen=True)
class AcinGaps:
    """Charging gaps ``delta_in`` of the three single-qubit cuts, in units of E."""

    closed_form: dict
    direct: dict
    fully_separable_gap: float
    half_sum_of_bipartite_gaps: float

    @property
    def max_deviation(self) -> float:
        return max(abs(self.closed_form[k] - self.direct[k]) for k in self.closed_form)


def acin_marginal_determinants(l: Sequence[float], theta: float = 0.0) -> dict[str, float]:
    """``det rho_X`` of each one-qubit marginal of the five-term state."""
    l0, l1, l2, l3, l4 = np.asarray(l, dtype=float)
    gamma = abs(l1 * l4 * np.exp(-1j * theta) - l2 * l3) ** 2
    return {
        "A|BC": l0**2 * (l2**2 + l3**2 + l4**2),
        "B|CA": l0**2 * (l3**2 + l4**2) + gamma,
        "C|AB": l0**2 * (l2**2 + l4**2) + gamma,
    }


def _acin_bloch_lengths(l: np.ndarray, theta: float) -> dict[str, float]:
    # sqrt(1 - 4 det) = |p0 - p1|^2 + 4|coherence|^2 under the root; the
    # determinant route cancels catastrophically near det = 1/4
    l0, l1, l2, l3, l4 = l
    e = np.exp(1j * theta)
    sq = l * l
    norm = sq.sum()
    parts = {
        "A|BC": (sq[0] - sq[1:].sum(), l0 * l1),
        "B|CA": (sq[:3].sum() - sq[3] - sq[4], abs(l1 * l3 * e + l2 * l4)),
        "C|AB": (sq[0] + sq[1] + sq[3] - sq[2] - sq[4], abs(l1 * l2 * e + l3 * l4)),
    }
    return {cut: math.hypot(z, 2 * c) / norm for cut, (z, c) in parts.items()}


def acin_gap_formulas(l: Sequence[float], theta: float = 0.0) -> AcinGaps:
    """Single-cut charging gaps of a five-term three-qubit state, two ways.

    The closed forms use the largest eigenvalue of each one-qubit
    marginal, ``(1 + sqrt(1 - 4 det rho_X)) / 2``, with ``det rho_X``
    written in the canonical coefficients (see
    :func:`acin_marginal_determinants`) and ``1 - 4 det`` expanded as a
    sum of squares for accuracy; the direct route builds the state and
    calls :func:`ergotropic_gaps` per cut.
    """
    l = np.asarray(l, dtype=float)
    rho = acin(l, theta)  # validates the coefficients
    for cut, det in acin_marginal_determinants(l, theta).items():
        if det < -1e-12 or det > 0.25 + 1e-12:
            raise InvalidCoefficients(f"marginal determinant {det} out of range for cut {cut}")
    closed = {cut: float(1.0 - r) for cut, r in _acin_bloch_lengths(l, theta).items()}

    h = Hamiltonian.local_equispaced([2, 2, 2])
    cuts = {"A|BC": [[0], [1, 2]], "B|CA": [[1], [0, 2]], "C|AB": [[2], [0, 1]]}
    direct = {cut: ergotropic_gaps(rho, h, part)[1] for cut, part in cuts.items()}
    bip = [capacity_gap(rho, h, part) for part in cuts.values()]
    return AcinGaps(
        closed_form=closed,
        direct=direct,
        fully_separable_gap=capacity_gap(rho, h),
        half_sum_of_bipartite_gaps=0.5 * sum(bip),
    )


@dataclass(frozen=True)
class MultipartiteMeasures:
    mbwcg: float
    abcg: float
    wcf: float | None
    wcv: float
    alpha: float
    gaps: dict = field(default_factory=dict)


def _label(block: Sequence[int]) -> str:
    return "".join(_name(k) for k in block)


def _name(k: int) -> str:
    return chr(ord("A") + k) if k < 26 else f"S{k}"


def bipartition_label(x: Sequence[int], rest: Sequence[int]) -> str:
    return f"{_label(x)}|{_label(rest)}"


def bipartite_gaps(rho: DensityMatrix, h: Hamiltonian) -> dict[str, float]:
    n = len(h.parts)
    return {bipartition_label(x, r): capacity_gap(rho, h, [x, r]) for x, r in bipartitions(n)}


def multipartite_measures(rho: DensityMatrix, h: Hamiltonian, alpha: float | None = None) -> MultipartiteMeasures:
    """Genuine-multipartite measures built from all bipartite capacity gaps.

    mbwcg: the minimum gap. abcg: ``alpha * [all gaps nonzero] * sum``,
    ``alpha`` defaulting to ``1/N`` for ``N`` bipartitions. wcf (three
    parties only): ``sqrt(Q * prod(Q - gap) / 3)`` with ``Q`` the gap sum;
    it carries squared energy units. wcv: geometric mean of the gaps.
    Gaps within ``1e-10`` of zero count as zero.
    """
    _check_structure(rho, h)
    if not rho.is_pure(1e-8):
        raise NotPure(f"measures are defined for pure states; purity is {rho.purity():.12g}")
    gaps = bipartite_gaps(rho, h)
    vals = np.array([0.0 if abs(g) <= ZERO_GAP else g for g in gaps.values()])
    n_cuts = len(vals)
    alpha = 1.0 / n_cuts if alpha is None else float(alpha)
    all_nonzero = bool(np.all(vals > 0))
    wcf = None
    if len(h.parts) == 3:
        q = vals.sum()
        wcf = math.sqrt(max(0.0, q * np.prod(q - vals) / 3.0))
    wcv = float(np.prod(vals) ** (1.0 / n_cuts)) if all_nonzero else 0.0
    return MultipartiteMeasures(
        mbwcg=float(vals.min()),
        abcg=alpha * float(vals.sum()) if all_nonzero else 0.0,
        wcf=wcf,
        wcv=wcv,
        alpha=alpha,
        gaps=gaps,
    )


def battery_capacity_fill(rho: DensityMatrix, h: Hamiltonian) -> float:
    m = multipartite_measures(rho, h)
    if m.wcf is None:
        raise WcfRequiresTripartite(f"fill is defined for three parties, got {len(h.parts)}")
    return m.wcf


@dataclass(frozen=True)
class GapReport:
    global_capacity: float
    local_capacities: dict
    delta_in: float
    delta_out: float
    bipartite_gaps: dict
    fully_separable_gap: float
    measures: MultipartiteMeasures | None
    convex_roof_gap_2q: float | None


def gap_report(rho: DensityMatrix, h: Hamiltonian, alpha: float | None = None) -> GapReport:
    """Every gap quantity for one multipartite state.

    ``measures`` is ``None`` for mixed states (no convex-roof extension
    is computed); ``convex_roof_gap_2q`` is filled only for two qubits.
    """
    _check_structure(rho, h)
    glob = work_quantities(rho, h)
    n = len(h.parts)
    locs = block_quantities(rho, h, [[k] for k in range(n)])
    delta_out, delta_in = ergotropic_gaps(rho, h)
    two_qubit = tuple(rho.dims) == (2, 2)
    return GapReport(
        global_capacity=glob.capacity,
        local_capacities={_name(k): q.capacity for k, q in enumerate(locs)},
        delta_in=delta_in,
        delta_out=delta_out,
        bipartite_gaps=bipartite_gaps(rho, h),
        fully_separable_gap=glob.capacity - sum(q.capacity for q in locs),
        measures=multipartite_measures(rho, h, alpha) if rho.is_pure(1e-8) else None,
        convex_roof_gap_2q=capacity_gap_mixed_2q(rho) if two_qubit else None,
    )
