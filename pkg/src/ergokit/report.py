"""Reproduction report: worked examples, identities, Monte Carlo checks and errata.

Every random draw comes from a Philox stream keyed by the report seed and
a fixed section id, so the document is byte-identical for a given seed.
All energies are in units of the level spacing E (E = 1).
"""

from __future__ import annotations

import json
import math

import numpy as np

from . import families
from .ergotropy import (
    bound_coefficient,
    capacity_of_spectra,
    equispaced_duality,
    qubit_capacity,
    work_quantities,
)
from .errata import errata_entries
from .gaps import (
    acin_gap_formulas,
    capacity_gap,
    capacity_gap_mixed_2q,
    concurrence_2q,
    ergotropic_gaps,
    multipartite_measures,
)
from .haar import SampleConfig, mc_work_variance, random_density, random_spectra, stream
from .measures import (
    coherence_l1,
    coherence_relative_entropy,
    coherence_robustness,
    linear_entropy,
    tsallis_entropy,
    von_neumann_entropy,
)
from .state import DensityMatrix, Hamiltonian

# stream ids, one per randomized section
_SEC_ACIN, _SEC_POLYGON, _SEC_HAAR, _SEC_LOWER = 1, 2, 3, 4

QUBITS2 = Hamiltonian.local_equispaced([2, 2])
QUBITS3 = Hamiltonian.local_equispaced([2, 2, 2])
CUTS3 = {"A|BC": [[0], [1, 2]], "B|CA": [[1], [0, 2]], "C|AB": [[2], [0, 1]]}


def _qubit_identities() -> dict:
    q, c = 0.3, 0.2
    rho = families.qubit(q, c)
    h = Hamiltonian.equispaced(2, 1.0)
    wq = work_quantities(rho, h)
    c_inc = abs(2 * q - 1)
    l1 = coherence_l1(rho)
    return {
        "q": q,
        "c": c,
        "ergotropy": wq.ergotropy,
        "antiergotropy": wq.antiergotropy,
        "capacity": wq.capacity,
        "closed_form_capacity": qubit_capacity(q, c),
        "capacity_sq_plus_2L": wq.capacity**2 + 2 * linear_entropy(rho),
        "capacity_plus_S2": wq.capacity + von_neumann_entropy(rho, 2),
        "capacity_plus_T3": wq.capacity + tsallis_entropy(rho, 3),
        "coherence_split_residual": abs(wq.capacity**2 - (c_inc**2 + l1**2)),
        "passive_plus_active": equispaced_duality(rho, 2, 1.0)[0],
    }


def _two_qubit_pure_and_isotropic() -> dict:
    rows = []
    for lam in np.linspace(0.0, 1.0, 11):
        lam = float(lam)
        rho = DensityMatrix.from_vector(families.schmidt_pair(lam), [2, 2])
        rows.append(
            {
                "lambda": lam,
                "gap": capacity_gap(rho, QUBITS2),
                "concurrence": concurrence_2q(rho),
                "concurrence_form": capacity_gap_mixed_2q(rho),
                "corrected_closed_form": 4 * (1 - max(lam, 1 - lam)),
                "printed_closed_form": 4 * (1 - max(math.sqrt(lam), math.sqrt(1 - lam))),
            }
        )
    iso = []
    for v in np.linspace(0.0, 1.0, 11):
        v = float(v)
        expected = 2 * (1 - 2 * math.sqrt(v - v * v)) if v > 0.5 else 0.0
        iso.append({"v": v, "gap": capacity_gap_mixed_2q(families.isotropic(v)), "expected": expected})
    return {
        "pure": rows,
        "isotropic": iso,
        "max_pure_residual": max(abs(r["gap"] - r["concurrence_form"]) for r in rows),
        "max_isotropic_residual": max(abs(r["gap"] - r["expected"]) for r in iso),
    }


def _generalized_ghz() -> dict:
    rows = []
    for k in range(1, 12):
        theta = k * math.pi / 24
        rho = families.ghz(theta)
        rows.append(
            {
                "theta_over_pi": k / 24,
                "gap_A_BC": capacity_gap(rho, QUBITS3, CUTS3["A|BC"]),
                "corrected": 4 * min(math.sin(theta) ** 2, math.cos(theta) ** 2),
                "printed": 4 * math.sin(theta) ** 2,
                "mbwcg": multipartite_measures(rho, QUBITS3).mbwcg,
            }
        )
    return {"ghz": rows, "max_residual": max(abs(r["gap_A_BC"] - r["corrected"]) for r in rows)}


def _two_qubit_werner() -> dict:
    grid = np.linspace(0.0, 1.0, 101)
    err = 0.0
    for v in grid:
        d_out, d_in = ergotropic_gaps(families.werner2(float(v)), QUBITS2)
        err = max(err, abs(d_in - v), abs(d_out - v))
    general = []
    for theta_over_pi in (1 / 12, 1 / 6, 1 / 3, 5 / 12):
        for v in (0.25, 0.5, 1.0):
            rho = families.werner2(v, theta_over_pi * math.pi)
            d_out, d_in = ergotropic_gaps(rho, QUBITS2)
            lam = rho.reduce([0]).spectrum
            general.append(
                {
                    "theta_over_pi": theta_over_pi,
                    "v": v,
                    "delta_in": d_in,
                    "delta_out": d_out,
                    "reduced_spectrum_A": [float(x) for x in lam],
                }
            )
    return {"grid_points": int(grid.size), "max_residual_at_quarter_pi": err, "general_theta": general}


def _werner_table() -> dict:
    rows = []
    for d in (2, 3, 4, 5):
        h = Hamiltonian.equispaced(d, 1.0)
        for v in (0.25, 0.5, 0.75, 1.0):
            rho = families.werner_d(d, v)
            cap = work_quantities(rho, h).capacity
            lo, hi = coherence_robustness(rho)
            rows.append(
                {
                    "d": d,
                    "v": v,
                    "WC": cap,
                    "L1C": coherence_l1(rho),
                    "VE": von_neumann_entropy(rho, 2),
                    "LE": linear_entropy(rho),
                    "TE2": tsallis_entropy(rho, 2),
                    "TE3": tsallis_entropy(rho, 3),
                    "REC": coherence_relative_entropy(rho, 2),
                    "ROC_lower": lo,
                    "ROC_upper": hi,
                }
            )
    tol = 1e-9
    checks = {
        "WC = E * L1C": all(abs(r["WC"] - r["L1C"]) <= tol for r in rows),
        "WC = (d-1) v E": all(abs(r["WC"] - (r["d"] - 1) * r["v"]) <= tol for r in rows),
        "VE >= LE, TE": all(r["VE"] >= max(r["LE"], r["TE3"]) - tol for r in rows),
        "LE = TE(2)": all(r["LE"] == r["TE2"] for r in rows),
        "ROC interval contains WC/E": all(r["ROC_lower"] - tol <= r["WC"] <= r["ROC_upper"] + tol for r in rows),
        "REC = log2 d - VE": all(abs(r["REC"] - (math.log2(r["d"]) - r["VE"])) <= tol for r in rows),
    }
    return {"rows": rows, "checks": checks}


def _random_acin(rng: np.random.Generator) -> tuple[np.ndarray, float]:
    l = np.abs(rng.standard_normal(5))
    return l / np.linalg.norm(l), float(rng.uniform(0.0, math.pi))


def _three_qubit_checks(seed: int, n_acin: int, n_polygon: int) -> dict:
    ghz = families.ghz()
    m_ghz = multipartite_measures(ghz, QUBITS3)
    m_w = multipartite_measures(families.w_state(), QUBITS3)
    ghz_acin = acin_gap_formulas([1 / math.sqrt(2), 0, 0, 0, 1 / math.sqrt(2)])

    rng = stream(seed, _SEC_ACIN)
    dev = rel = 0.0
    for _ in range(n_acin):
        l, theta = _random_acin(rng)
        g = acin_gap_formulas(l, theta)
        dev = max(dev, g.max_deviation)
        rel = max(rel, abs(g.fully_separable_gap - g.half_sum_of_bipartite_gaps))

    rng = stream(seed, _SEC_POLYGON)
    slack = math.inf
    for _ in range(n_polygon):
        rho = random_density(8, "pure", rng)
        rho = DensityMatrix(rho.matrix, [2, 2, 2])
        g = [capacity_gap(rho, QUBITS3, part) for part in CUTS3.values()]
        for i in range(3):
            slack = min(slack, g[(i + 1) % 3] + g[(i + 2) % 3] - g[i])
    return {
        "ghz": {
            "bipartite_gaps": m_ghz.gaps,
            "fully_separable_gap": capacity_gap(ghz, QUBITS3),
            "mbwcg": m_ghz.mbwcg,
            "abcg": m_ghz.abcg,
            "wcf": m_ghz.wcf,
            "wcv": m_ghz.wcv,
        },
        "w": {"bipartite_gaps": m_w.gaps, "mbwcg": m_w.mbwcg, "wcf": m_w.wcf, "wcv": m_w.wcv},
        "acin_ghz": {
            "delta_in_closed_form": ghz_acin.closed_form,
            "fully_separable_gap": ghz_acin.fully_separable_gap,
            "half_sum_of_bipartite_gaps": ghz_acin.half_sum_of_bipartite_gaps,
        },
        "acin_random": {
            "samples": n_acin,
            "max_dual_path_deviation": dev,
            "max_half_sum_relation_violation": rel,
        },
        "polygon": {"samples": n_polygon, "min_slack": slack},
    }


def _haar_variance(seed: int, n_samples: int) -> list[dict]:
    out = []
    rng = stream(seed, _SEC_HAAR)
    for d in (2, 3, 4):
        h = Hamiltonian.equispaced(d, 1.0)
        for model in ("pure", "hilbert_schmidt"):
            rho = random_density(d, model, rng)
            est = mc_work_variance(rho, h, SampleConfig(d, n_samples, seed, model))
            out.append(
                {
                    "d": d,
                    "model": model,
                    "n": est.n,
                    "sample_variance": est.variance,
                    "std_error": est.std_error_of_variance,
                    "analytic": est.analytic_variance,
                    "z": est.z_score,
                }
            )
    pure_qubit = DensityMatrix(np.diag([0.0, 1.0]))
    est = mc_work_variance(pure_qubit, Hamiltonian.equispaced(2), SampleConfig(2, n_samples, seed, "pure"))
    out.append(
        {
            "d": 2,
            "model": "excited qubit",
            "n": est.n,
            "sample_variance": est.variance,
            "std_error": est.std_error_of_variance,
            "analytic": 1 / 12,
            "z": (est.variance - 1 / 12) / est.std_error_of_variance,
        }
    )
    return out


def spectral_bound_violations(d: int, n: int, rng: np.random.Generator) -> dict:
    """Counterexample counts for the equispaced capacity bounds over ``n`` random spectra."""
    lam = np.sort(random_spectra(n, d, rng), axis=1)
    cap = capacity_of_spectra(lam, np.arange(d, dtype=float))
    k = (d + 1) // 2
    coef = bound_coefficient(d)
    lower = coef * (lam[:, k] - lam[:, k - 1])
    upper = coef * (lam[:, -1] - lam[:, 0])
    printed_upper = (d // 2) ** 2 * (lam[:, -1] - lam[:, 0])
    return {
        "d": d,
        "samples": n,
        "lower_violations": int(np.sum(lower > cap + 1e-9)),
        "upper_violations": int(np.sum(upper < cap - 1e-9)),
        "printed_coefficient_upper_violations": int(np.sum(printed_upper < cap - 1e-9)),
    }


def _lower_bound_pass(seed: int, n: int) -> list[dict]:
    return [spectral_bound_violations(d, n, stream(seed, _SEC_LOWER, d)) for d in range(2, 9)]


def build_report(seed: int = 0, mc_samples: int = 100_000, n_random: int = 1000) -> dict:
    return {
        "seed": seed,
        "units": "E",
        "qubit_identities": _qubit_identities(),
        "two_qubit_pure_and_isotropic": _two_qubit_pure_and_isotropic(),
        "generalized_ghz": _generalized_ghz(),
        "two_qubit_werner": _two_qubit_werner(),
        "werner_d_table": _werner_table(),
        "three_qubit_measures": _three_qubit_checks(seed, n_random, n_random),
        "haar_work_variance": _haar_variance(seed, mc_samples),
        "spectral_bound_falsification": _lower_bound_pass(seed, 100 * n_random),
        "errata": [e.as_dict() for e in errata_entries(seed, mc_samples)],
    }


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def render_json(report: dict) -> str:
    return json.dumps(_jsonable(report), indent=2) + "\n"


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.9g}"
    if isinstance(x, list):
        return "(" + ", ".join(_fmt(v) for v in x) + ")"
    if isinstance(x, dict):
        return ", ".join(f"{k}: {_fmt(v)}" for k, v in x.items())
    return str(x)


def _table(rows: list[dict]) -> list[str]:
    keys = list(rows[0])
    lines = ["| " + " | ".join(keys) + " |", "|" + "---|" * len(keys)]
    lines += ["| " + " | ".join(_fmt(r[k]) for k in keys) + " |" for r in rows]
    return lines + [""]


def _kv(d: dict) -> list[str]:
    return [f"- {k}: {_fmt(v)}" for k, v in d.items()] + [""]


def render_markdown(report: dict) -> str:
    r = report
    out = [f"# ergokit reproduction report (seed {r['seed']}, energies in units of E)", ""]

    out += ["## Two-level battery", ""] + _kv(r["qubit_identities"])

    ex1 = r["two_qubit_pure_and_isotropic"]
    out += ["## Two-qubit pure states sqrt(lam)|00> + sqrt(1-lam)|11>", ""] + _table(ex1["pure"])
    out += ["Isotropic family, convex-roof gap against 2(1 - 2 sqrt(v - v^2)) for v > 1/2:", ""]
    out += _table(ex1["isotropic"])
    out += _kv({k: ex1[k] for k in ("max_pure_residual", "max_isotropic_residual")})

    ex2 = r["generalized_ghz"]
    out += ["## Generalized GHZ cos(theta)|000> + sin(theta)|111>", ""] + _table(ex2["ghz"])
    out += _kv({"max_residual": ex2["max_residual"]})

    ex3 = r["two_qubit_werner"]
    out += ["## Two-qubit Werner states", ""]
    out += _kv({k: ex3[k] for k in ("grid_points", "max_residual_at_quarter_pi")})
    out += ["General theta:", ""] + _table(ex3["general_theta"])

    tab = r["werner_d_table"]
    out += ["## d-level Werner states", ""] + _table(tab["rows"]) + _kv(tab["checks"])

    c = r["three_qubit_measures"]
    out += ["## Three-qubit capacity gaps and measures", ""]
    for name in ("ghz", "w", "acin_ghz", "acin_random", "polygon"):
        out += [f"### {name}", ""] + _kv(c[name])

    out += ["## Haar work variance", ""] + _table(r["haar_work_variance"])
    out += ["## Equispaced spectral bounds: falsification pass", ""] + _table(r["spectral_bound_falsification"])

    out += ["## Errata", ""]
    for e in r["errata"]:
        out += [
            f"### ({e['key']}) {e['location']}",
            "",
            f"- instance: {e['instance']}",
            f"- printed: `{e['printed_expression']}` gives {_fmt(e['printed_value'])}",
            f"- computed: `{e['computed_expression']}` gives {_fmt(e['computed_value'])}",
            f"- oracle: {e['oracle']}; value {_fmt(e['oracle_value'])}",
            "",
        ]
    return "\n".join(out).rstrip("\n") + "\n"
