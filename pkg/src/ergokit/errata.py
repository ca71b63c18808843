"""Published-versus-computed discrepancy ledger.

Each entry evaluates the printed expression and the corrected one on a
concrete instance and names the independent oracle that settles it.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import families
from .ergotropy import (
    bound_coefficient,
    capacity_of_spectra,
    equispaced_variance,
    passive_energy_of_spectra,
    work_quantities,
)
from .gaps import capacity_gap, capacity_gap_mixed_2q, concurrence_2q
from .haar import work_samples
from .state import DensityMatrix, Hamiltonian


@dataclass(frozen=True)
class ErrataEntry:
    key: str
    location: str
    instance: str
    printed_expression: str
    printed_value: float
    computed_expression: str
    computed_value: float
    oracle: str
    oracle_value: float

    def as_dict(self) -> dict:
        return asdict(self)


def _variance_closed_form() -> ErrataEntry:
    d = 3
    direct = float(sum(j * j for j in range(d)) - sum(range(d)) ** 2 / d)
    return ErrataEntry(
        key="a",
        location="equispaced levels: closed form of the Hamiltonian variance",
        instance="d = 3, E = 1",
        printed_expression="(d^2 - 1)(2d - 3)/6",
        printed_value=(d * d - 1) * (2 * d - 3) / 6,
        computed_expression="E^2 d (d^2 - 1)/12",
        computed_value=equispaced_variance(d, 1.0),
        oracle="direct summation sum_j j^2 - (sum_j j)^2 / d",
        oracle_value=direct,
    )


def _bound_coefficient() -> ErrataEntry:
    d = 3
    lam = np.array([0.0, 0.0, 1.0])
    cap = float(capacity_of_spectra(lam, np.arange(d)))
    pair_sum = sum(2 * j - d + 1 for j in range(d) if 2 * j > d - 1)
    return ErrataEntry(
        key="b",
        location="equispaced levels: coefficient of the spectral capacity bounds (also the coherence bounds)",
        instance="d = 3, E = 1, spectrum (0, 0, 1): upper bound coefficient * (lam_max - lam_min)",
        printed_expression="(floor(d/2))^2 * (lam_max - lam_min)",
        printed_value=float((d // 2) ** 2 * (lam[-1] - lam[0])),
        computed_expression="floor(d^2/4) * (lam_max - lam_min)",
        computed_value=float(bound_coefficient(d) * (lam[-1] - lam[0])),
        oracle=f"capacity from the spectral formula, which the printed upper bound undercuts; pair-weight sum "
        f"sum_(2j>d-1)(2j-d+1) is {pair_sum}",
        oracle_value=cap,
    )


def _popoviciu(seed: int, n_samples: int) -> ErrataEntry:
    rho = DensityMatrix(np.diag([0.0, 1.0]))
    h = Hamiltonian.equispaced(2, 1.0)
    w = work_samples(rho, h, n_samples, seed)
    cap = work_quantities(rho, h).capacity
    return ErrataEntry(
        key="c",
        location="variance-bound proof: orientation of Popoviciu's inequality",
        instance="pure qubit, H = |1><1|; capacity 1, Haar work variance 1/12",
        printed_expression="Var <= 4 (max - min)^2 (bound on Var at C = 1)",
        printed_value=4.0 * cap**2,
        computed_expression="Var <= (max - min)^2 / 4 (bound on Var at C = 1; yields C >= 2 sigma_H sigma_rho / sqrt(d^2-1))",
        computed_value=cap**2 / 4.0,
        oracle=f"Monte Carlo sample variance over {n_samples} Haar unitaries (seed {seed}); two-point law on "
        "{min, max} attains (max-min)^2/4",
        oracle_value=float(np.var(w, ddof=1)),
    )


def _schmidt_gap() -> ErrataEntry:
    lam = 0.5
    rho = DensityMatrix.from_vector(families.schmidt_pair(lam), [2, 2])
    h = Hamiltonian.local_equispaced([2, 2])
    c = concurrence_2q(rho)
    return ErrataEntry(
        key="d",
        location="two-qubit pure-state example: capacity gap of sqrt(lam)|00> + sqrt(1-lam)|11>",
        instance="lam = 1/2 (Bell state), E = 1",
        printed_expression="4 (1 - max{sqrt(lam), sqrt(1-lam)})",
        printed_value=4 * (1 - max(math.sqrt(lam), math.sqrt(1 - lam))),
        computed_expression="4 (1 - max{lam, 1-lam})",
        computed_value=4 * (1 - max(lam, 1 - lam)),
        oracle=f"spectral gap C(rho) - C(rho_A) - C(rho_B); concurrence form 2(1 - sqrt(1 - C^2)) gives "
        f"{capacity_gap_mixed_2q(rho):.9g} at C = {c:.9g}",
        oracle_value=capacity_gap(rho, h),
    )


def _ghz_range() -> ErrataEntry:
    theta = math.pi / 3
    rho = families.ghz(theta)
    h = Hamiltonian.local_equispaced([2, 2, 2])
    return ErrataEntry(
        key="e",
        location="generalized GHZ example: bipartite gap over theta in (0, pi/2)",
        instance="theta = pi/3, cut A|BC, E = 1",
        printed_expression="4 sin^2(theta)",
        printed_value=4 * math.sin(theta) ** 2,
        computed_expression="4 min(sin^2(theta), cos^2(theta))",
        computed_value=4 * min(math.sin(theta) ** 2, math.cos(theta) ** 2),
        oracle="spectral gap C(rho) - C(rho_A) - C(rho_BC)",
        oracle_value=capacity_gap(rho, h, [[0], [1, 2]]),
    )


def _qubit_antiergotropy(seed: int) -> ErrataEntry:
    q, c = 0.3, 0.2
    rho = families.qubit(q, c)
    h = Hamiltonian.equispaced(2, 1.0)
    lam_plus = 0.5 * (1 + math.sqrt((2 * q - 1) ** 2 + 4 * c * c))
    w = work_samples(rho, h, 20000, seed)
    return ErrataEntry(
        key="f",
        location="two-level battery: closed form of the antiergotropy",
        instance="q = 0.3, c = 0.2, E = 1",
        printed_expression="E (lam_+ - q)",
        printed_value=lam_plus - q,
        computed_expression="E (q - lam_+)  (antiergotropy is a minimum of W_U, hence <= 0)",
        computed_value=q - lam_plus,
        oracle=f"minimum of W_U over 20000 Haar unitaries (seed {seed}); exact value "
        f"{work_quantities(rho, h).antiergotropy:.9g}",
        oracle_value=float(w.min()),
    )


def _spectral_form_sign() -> ErrataEntry:
    lam = np.array([0.2, 0.3, 0.5])
    eps = np.arange(3, dtype=float)
    return ErrataEntry(
        key="g",
        location="capacity definition: second spectral form",
        instance="spectrum (0.5, 0.3, 0.2), equispaced d = 3, E = 1",
        printed_expression="sum_i lam_i (eps_{d-1-i} - eps_i), ascending lam and eps",
        printed_value=float(np.sum(lam * (eps[::-1] - eps))),
        computed_expression="sum_i lam_i (eps_i - eps_{d-1-i})",
        computed_value=float(capacity_of_spectra(lam, eps)),
        oracle="active minus passive energy sum_i lam_i eps_i - sum_i lam_i eps_{d-1-i}",
        oracle_value=float(np.sum(lam * eps) - passive_energy_of_spectra(lam, eps)),
    )


def _werner_reduced() -> ErrataEntry:
    v, theta = 0.5, math.pi / 6
    red = families.werner2(v, theta).reduce([0]).spectrum
    return ErrataEntry(
        key="h",
        location="two-qubit Werner example: reduced spectrum",
        instance="v = 0.5, theta = pi/6: sum of the reduced eigenvalues",
        printed_expression="{v cos^2 theta, v sin^2 theta} (sums to v)",
        printed_value=v,
        computed_expression="{v cos^2 theta + (1-v)/2, v sin^2 theta + (1-v)/2} (sums to 1)",
        computed_value=1.0,
        oracle=f"partial trace eigenvalues {red[0]:.9g}, {red[1]:.9g}",
        oracle_value=float(red.sum()),
    )


def _main_text_variance() -> ErrataEntry:
    h = Hamiltonian.equispaced(3, 1.0)
    eps = h.energies
    return ErrataEntry(
        key="i",
        location="variance bound statement: definition of the Hamiltonian variance",
        instance="equispaced d = 3, E = 1",
        printed_expression="Tr[H^2] - Tr[H]/d",
        printed_value=float(np.sum(eps**2) - np.sum(eps) / eps.size),
        computed_expression="Tr[H^2] - (Tr H)^2/d",
        computed_value=h.variance(),
        oracle="direct summation; only the squared-trace form is dimensionally consistent",
        oracle_value=float(sum(j * j for j in range(3)) - 9 / 3),
    )


def _entropy_coefficients() -> ErrataEntry:
    d = 3
    return ErrataEntry(
        key="j",
        location="equispaced levels: capacity-linear entropy inequality (inherits entry a)",
        instance="d = 3: coefficient of L(rho) in (C/E)^2 + k L >= r",
        printed_expression="k = (4d-6)/3, r = 2(2d-3)(d-1)/(3d)",
        printed_value=(4 * d - 6) / 3,
        computed_expression="k = d/3, r = (d-1)/3",
        computed_value=d / 3,
        oracle="substitution of the directly summed variance into the variance bound",
        oracle_value=4 * equispaced_variance(d) / (d * d - 1),
    )


def _active_state_definition() -> ErrataEntry:
    rho = families.qubit(0.3, 0.2)
    h = Hamiltonian.equispaced(2, 1.0)
    wq = work_quantities(rho, h)
    return ErrataEntry(
        key="k",
        location="active state definition: unitary used",
        instance="q = 0.3, c = 0.2, E = 1: energy of the defined state",
        printed_expression="rho_up = U_down rho U_down^dag (this is the passive state)",
        printed_value=wq.passive_energy,
        computed_expression="rho_up = U_up rho U_up^dag",
        computed_value=wq.active_energy,
        oracle="energy of the maximal-energy state in the unitary orbit, sum_i lam_i eps_i",
        oracle_value=wq.active_energy,
    )


def errata_entries(seed: int = 0, n_samples: int = 100_000) -> list[ErrataEntry]:
    return [
        _variance_closed_form(),
        _bound_coefficient(),
        _popoviciu(seed, n_samples),
        _schmidt_gap(),
        _ghz_range(),
        _qubit_antiergotropy(seed),
        _spectral_form_sign(),
        _werner_reduced(),
        _main_text_variance(),
        _entropy_coefficients(),
        _active_state_definition(),
    ]
