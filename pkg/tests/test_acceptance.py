"""Exit criteria, each at its stated tolerance and time budget.

Every test prints one PASS/FAIL line, collected again in the terminal
summary. Numba compilation happens in a warm-up fixture outside the timed
regions.
"""

import json
import math
import time

import numpy as np
import pytest

from ergokit import families
from ergokit.cli import main
from ergokit.ergotropy import (
    active_energy_of_spectra,
    capacity_of_spectra,
    capacity_of_states,
    passive_energy_of_spectra,
    qubit_capacity,
    variance_lower_bound,
    work_quantities,
)
from ergokit.gaps import (
    acin_gap_formulas,
    bipartite_gaps,
    capacity_gap,
    capacity_gap_mixed_2q,
    concurrence_2q,
    ergotropic_gaps,
    multipartite_measures,
)
from ergokit.haar import (
    SampleConfig,
    haar_unitaries,
    mc_work_variance,
    mixture_of_permutations,
    random_density,
    random_spectra,
    stream,
)
from ergokit.linalg import eig_hermitian, eigvalsh_batch, majorizes
from ergokit.measures import tsallis_of_spectrum, von_neumann_of_spectrum
from ergokit.state import DensityMatrix, Hamiltonian, state_spectra
from ergokit.thermal import match_gibbs, total_quantities

from conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.acceptance

SEED = 20240


@pytest.fixture(scope="module", autouse=True)
def warm_jit():
    eig_hermitian(np.eye(2))
    eigvalsh_batch(np.eye(3)[None].astype(complex))
    capacity_of_states(np.eye(2)[None] / 2, Hamiltonian.equispaced(2))


def record(number: int, title: str, ok: bool, detail: str, elapsed: float, budget: float | None):
    timed = budget is None or elapsed < budget
    status = "PASS" if ok and timed else "FAIL"
    limit = "" if budget is None else f" / {budget:g} s"
    line = f"C{number:<2d} {status}  {title}: {detail} [{elapsed:.2f} s{limit}]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
    assert timed, line


def hs_stack(n, d, rng):
    g = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    m = g @ np.conj(np.swapaxes(g, 1, 2))
    return m / np.trace(m, axis1=1, axis2=2).real[:, None, None]


def hermitian_stack(n, d, rng):
    g = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    return 0.5 * (g + np.conj(np.swapaxes(g, 1, 2)))


def batch_quantities(rho, hm):
    """Mean, ergotropy, antiergotropy and capacity for matched stacks of states and Hamiltonians."""
    lam = state_spectra(rho)
    eps = eigvalsh_batch(hm)
    mean = np.einsum("nij,nji->n", rho, hm).real
    erg = mean - passive_energy_of_spectra(lam, eps)
    anti = mean - active_energy_of_spectra(lam, eps)
    return erg, anti, erg - anti


def test_c1_qubit_closed_form():
    t0 = time.perf_counter()
    q, frac = np.meshgrid(np.linspace(0, 1, 100), np.linspace(0, 1, 100), indexing="ij")
    q, c = q.ravel(), (frac * np.sqrt(q * (1 - q))).ravel()
    theta = np.linspace(0, 2 * np.pi, q.size)
    coh = c * np.exp(1j * theta)
    stack = np.empty((q.size, 2, 2), dtype=complex)
    stack[:, 0, 0], stack[:, 1, 1] = 1 - q, q
    stack[:, 0, 1], stack[:, 1, 0] = coh, coh.conj()
    h = Hamiltonian.equispaced(2, 1.0)
    cap = capacity_of_states(stack, h)
    closed = np.array([qubit_capacity(a, b) for a, b in zip(q, c)])
    lin = 1 - np.sum(state_spectra(stack) ** 2, axis=1)
    elapsed = time.perf_counter() - t0
    err_closed = np.max(np.abs(cap - closed))
    err_ident = np.max(np.abs(cap**2 + 2 * lin - 1))
    ok = err_closed <= 1e-10 and err_ident <= 1e-9
    record(1, "qubit closed form", ok, f"max |C - closed| {err_closed:.1e}, max identity residual {err_ident:.1e}", elapsed, 1.0)


def test_c2_entropy_inequalities():
    rng = stream(SEED, 2)
    t0 = time.perf_counter()
    lam = state_spectra(hs_stack(100_000, 2, rng))
    cap = capacity_of_spectra(lam, [0.0, 1.0])
    slack_s = np.min(cap + von_neumann_of_spectrum(lam, 2) - 1)
    slack_t = min(np.min(1 - cap - tsallis_of_spectrum(lam, p)) for p in (2, 3, 5))
    # equality: pure and maximally mixed for the entropy bound, pure for the Tsallis bound
    pure, mixed = np.array([[0.0, 1.0]]), np.array([[0.5, 0.5]])
    eq = [
        capacity_of_spectra(pure, [0, 1])[0] + von_neumann_of_spectrum(pure)[0] - 1,
        capacity_of_spectra(mixed, [0, 1])[0] + von_neumann_of_spectrum(mixed)[0] - 1,
    ] + [capacity_of_spectra(pure, [0, 1])[0] + tsallis_of_spectrum(pure, p)[0] - 1 for p in (2, 3, 5)]
    elapsed = time.perf_counter() - t0
    eq_err = max(abs(x) for x in eq)
    ok = slack_s >= -1e-9 and slack_t >= -1e-9 and eq_err <= 1e-9
    record(2, "entropy inequalities", ok, f"min slack S {slack_s:.2e}, T {slack_t:.2e}; equality residual {eq_err:.1e}", elapsed, 5.0)


def test_c3_variance_identity():
    rng = stream(SEED, 3)
    t0 = time.perf_counter()
    z = []
    for d in (2, 3, 4):
        h = Hamiltonian.equispaced(d, 1.0)
        for model in ("pure", "hilbert_schmidt"):
            rho = random_density(d, model, rng)
            z.append(mc_work_variance(rho, h, SampleConfig(d, 100_000, SEED + d, model)).z_score)
    est = mc_work_variance(DensityMatrix(np.diag([0.0, 1.0])), Hamiltonian.equispaced(2), SampleConfig(2, 100_000, SEED))
    z_qubit = (est.variance - 1 / 12) / est.std_error_of_variance
    elapsed = time.perf_counter() - t0
    worst = max(abs(x) for x in z)
    ok = worst <= 3 and abs(z_qubit) <= 3 and est.analytic_variance == pytest.approx(1 / 12)
    record(3, "Haar variance identity", ok, f"max |z| {worst:.2f} over 6 cases; pure qubit z {z_qubit:.2f}", elapsed, 60.0)


def test_c4_variance_bound():
    rng = stream(SEED, 4)
    t0 = time.perf_counter()
    worst = math.inf
    for d in range(2, 7):
        rhos = hs_stack(10_000, d, rng)
        hams = hermitian_stack(10_000, d, rng)
        for r, hm in zip(rhos, hams):
            rho, h = DensityMatrix(r), Hamiltonian.explicit(hm)
            worst = min(worst, work_quantities(rho, h).capacity - variance_lower_bound(rho, h))
    elapsed = time.perf_counter() - t0
    record(4, "variance lower bound", worst >= -1e-9, f"min slack {worst:.3e} over 5x10^4 pairs", elapsed, 30.0)


def test_c5_equispaced_duality():
    rng = stream(SEED, 5)
    E = 1.7
    t0 = time.perf_counter()
    worst = 0.0
    for d in range(2, 9):
        lam = random_spectra(10_000, d, rng)
        eps = E * np.arange(d)
        total = passive_energy_of_spectra(lam, eps) + active_energy_of_spectra(lam, eps)
        worst = max(worst, np.max(np.abs(total - (d - 1) * E)))
    elapsed = time.perf_counter() - t0
    record(5, "equispaced duality", worst <= 1e-9, f"max residual {worst:.1e}", elapsed, 10.0)


def test_c6_werner_gaps():
    h = Hamiltonian.local_equispaced([2, 2])
    t0 = time.perf_counter()
    worst = 0.0
    for v in np.linspace(0, 1, 101):
        d_out, d_in = ergotropic_gaps(families.werner2(float(v)), h)
        worst = max(worst, abs(d_in - v), abs(d_out - v))
    general = [ergotropic_gaps(families.werner2(0.8, t), h) for t in (math.pi / 8, math.pi / 3)]
    elapsed = time.perf_counter() - t0
    shown = ", ".join(f"({o:.4f}, {i:.4f})" for o, i in general)
    record(6, "two-qubit Werner gaps", worst <= 1e-9, f"max |delta - v| {worst:.1e}; v=0.8 at pi/8, pi/3: {shown}", elapsed, 1.0)


def test_c7_concurrence_gap():
    h = Hamiltonian.local_equispaced([2, 2])
    t0 = time.perf_counter()
    worst_pure = worst_c = 0.0
    for lam in np.linspace(0, 1, 101):
        rho = DensityMatrix.from_vector(families.schmidt_pair(float(lam)), [2, 2])
        worst_c = max(worst_c, abs(concurrence_2q(rho) - 2 * math.sqrt(lam * (1 - lam))))
        worst_pure = max(worst_pure, abs(capacity_gap(rho, h) - capacity_gap_mixed_2q(rho)))
    worst_iso = 0.0
    for v in np.linspace(0, 1, 101):
        expected = 2 * (1 - 2 * math.sqrt(v - v * v)) if v > 0.5 else 0.0
        worst_iso = max(worst_iso, abs(capacity_gap_mixed_2q(families.isotropic(float(v))) - expected))
    elapsed = time.perf_counter() - t0
    ok = worst_pure <= 1e-9 and worst_iso <= 1e-9 and worst_c <= 1e-9
    detail = f"pure max residual {worst_pure:.1e} (concurrence {worst_c:.1e}), isotropic {worst_iso:.1e}"
    record(7, "concurrence capacity gap", ok, detail, elapsed, 1.0)


def test_c8_three_qubit_measures():
    h = Hamiltonian.local_equispaced([2, 2, 2])
    t0 = time.perf_counter()
    ghz = families.ghz(math.pi / 4)
    m_ghz = multipartite_measures(ghz, h)
    m_w = multipartite_measures(families.w_state(), h)
    checks = [
        all(abs(g - 2) <= 1e-9 for g in m_ghz.gaps.values()),
        abs(capacity_gap(ghz, h) - 3) <= 1e-9,
        abs(m_ghz.mbwcg - 2) <= 1e-9,
        abs(m_ghz.wcv - 2) <= 1e-9,
        abs(m_w.mbwcg - 4 / 3) <= 1e-9,
    ]
    rng = stream(SEED, 8)
    dev = 0.0
    for _ in range(1000):
        l = np.abs(rng.standard_normal(5))
        dev = max(dev, acin_gap_formulas(l / np.linalg.norm(l), float(rng.uniform(0, math.pi))).max_deviation)
    slack = math.inf
    for _ in range(10_000):
        psi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        g = list(bipartite_gaps(DensityMatrix.from_vector(psi, [2, 2, 2]), h).values())
        slack = min(slack, *(g[(k + 1) % 3] + g[(k + 2) % 3] - g[k] for k in range(3)))
    elapsed = time.perf_counter() - t0
    ok = all(checks) and dev <= 1e-8 and slack >= -1e-9
    detail = f"GHZ/W values {'ok' if all(checks) else 'WRONG'}; dual-path max dev {dev:.1e}; polygon min slack {slack:.4f}"
    record(8, "GHZ, W, five-term and polygon", ok, detail, elapsed, 60.0)


def test_c9_schur_convexity_and_convexity():
    rng = stream(SEED, 9)
    t0 = time.perf_counter()
    worst_schur = math.inf
    for _ in range(10_000):
        d = int(rng.integers(2, 7))
        tau = random_spectra(1, d, rng)[0]
        lam = mixture_of_permutations(tau, rng)
        assert majorizes(lam, tau)
        u = haar_unitaries(2, d, rng)
        rho = DensityMatrix((u[0] * lam) @ u[0].conj().T)
        sigma = DensityMatrix((u[1] * tau) @ u[1].conj().T)
        h = Hamiltonian.explicit(hermitian_stack(1, d, rng)[0])
        worst_schur = min(worst_schur, work_quantities(sigma, h).capacity - work_quantities(rho, h).capacity)
    worst = {"convex C": math.inf, "convex E": math.inf, "concave A": math.inf, "sublinear C": math.inf,
             "sublinear E": math.inf, "superlinear A": math.inf}
    for d in (2, 3, 4, 5):
        n = 2500
        rho, tau = hs_stack(n, d, rng), hs_stack(n, d, rng)
        t = rng.uniform(0, 1, n)[:, None, None]
        h1, h2 = hermitian_stack(n, d, rng), hermitian_stack(n, d, rng)
        e_r, a_r, c_r = batch_quantities(rho, h1)
        e_t, a_t, c_t = batch_quantities(tau, h1)
        e_m, a_m, c_m = batch_quantities(t * rho + (1 - t) * tau, h1)
        s = t[:, 0, 0]
        worst["convex C"] = min(worst["convex C"], np.min(s * c_r + (1 - s) * c_t - c_m))
        worst["convex E"] = min(worst["convex E"], np.min(s * e_r + (1 - s) * e_t - e_m))
        worst["concave A"] = min(worst["concave A"], np.min(a_m - s * a_r - (1 - s) * a_t))
        e_2, a_2, c_2 = batch_quantities(rho, h2)
        e_s, a_s, c_s = batch_quantities(rho, h1 + h2)
        worst["sublinear C"] = min(worst["sublinear C"], np.min(c_r + c_2 - c_s))
        worst["sublinear E"] = min(worst["sublinear E"], np.min(e_r + e_2 - e_s))
        worst["superlinear A"] = min(worst["superlinear A"], np.min(a_s - a_r - a_2))
    elapsed = time.perf_counter() - t0
    ok = worst_schur >= -1e-9 and min(worst.values()) >= -1e-9
    detail = f"Schur min slack {worst_schur:.2e}; convexity/sublinearity min slack {min(worst.values()):.2e}"
    record(9, "Schur-convexity and convexity", ok, detail, elapsed, 20.0)


def test_c10_thermal_limits():
    rng = stream(SEED, 10)
    t0 = time.perf_counter()
    worst_res = worst_qubit = 0.0
    worst_dom = math.inf
    for k in range(10_000):
        d = int(rng.integers(2, 6))
        rho = random_density(d, "hilbert_schmidt", rng)
        h = Hamiltonian.explicit(hermitian_stack(1, d, rng)[0])
        worst_dom = min(worst_dom, total_quantities(rho, h).total_capacity - work_quantities(rho, h).capacity)
        if k % 5 == 0:
            s = float(von_neumann_of_spectrum(rho.spectrum, math.e))
            for sign in ("positive", "negative"):
                worst_res = max(worst_res, abs(match_gibbs(s, h, sign).achieved_entropy - s))
    qubit_h = Hamiltonian.equispaced(2, 1.0)
    for _ in range(1000):
        rho = random_density(2, "hilbert_schmidt", rng)
        worst_qubit = max(worst_qubit, abs(total_quantities(rho, qubit_h).total_capacity - work_quantities(rho, qubit_h).capacity))
    elapsed = time.perf_counter() - t0
    ok = worst_dom >= -1e-9 and worst_res <= 1e-8 and worst_qubit <= 1e-9
    detail = f"dominance min slack {worst_dom:.2e}; entropy residual {worst_res:.1e}; qubit equality {worst_qubit:.1e}"
    record(10, "thermal limits", ok, detail, elapsed, 30.0)


def test_c11_errata_ledger(tmp_path):
    t0 = time.perf_counter()
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    codes = [main(["paper-report", "--seed", "0", "--out", str(p)]) for p in paths]
    first, second = (p.read_bytes() for p in paths)
    elapsed = time.perf_counter() - t0
    entries = {e["key"]: e for e in json.loads(first)["errata"]}
    fields = ("location", "printed_value", "computed_value", "oracle", "oracle_value")
    complete = all(k in entries and all(entries[k].get(f) is not None for f in fields) for k in "abcdef")
    values = complete and (
        (entries["a"]["printed_value"], entries["a"]["computed_value"]) == (4.0, 2.0)
        and "(0, 0, 1)" in entries["b"]["instance"]
        and entries["b"]["printed_value"] < entries["b"]["oracle_value"] == entries["b"]["computed_value"]
        and entries["c"]["computed_value"] < entries["c"]["printed_value"]
        and entries["f"]["printed_value"] == -entries["f"]["computed_value"]
    )
    ok = codes == [0, 0] and first == second and complete and values
    detail = f"{len(entries)} entries, a-f complete: {complete}; byte-identical: {first == second}"
    record(11, "errata ledger", ok, detail, elapsed, None)
