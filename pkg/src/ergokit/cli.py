"""Command-line interface.

Every command reads a state (inline JSON or a file) and a Hamiltonian spec,
prints a report as JSON or text, and exits 0. Input errors exit 1 and
numerical failures exit 2; both print one ``ERROR <Code>: message`` line
on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import families
from .ergotropy import equispaced_capacity_bounds, extremal_states, variance_lower_bound, work_quantities
from .errors import ErgokitError, NotHermitian, ParseError, UsageError
from .gaps import gap_report, multipartite_measures
from .haar import SampleConfig, mc_work_variance, work_samples
from .report import build_report, render_json, render_markdown
from .state import DensityMatrix, Hamiltonian, check_compatible
from .thermal import total_quantities

_SPLIT = re.compile(r"x(?=(?:equispaced|matrix):)")
_PARAM = re.compile(r"\s*([A-Za-z_]\w*)\s*=\s*([^,]*)")


def _parse_equispaced(body: str, offset: int) -> Hamiltonian:
    params = {}
    pos = 0
    for item in body.split(","):
        m = _PARAM.fullmatch(item)
        if m is None:
            raise ParseError(f"expected key=value, got {item!r}", offset + pos)
        key, value = m.group(1), m.group(2).strip()
        if key not in ("d", "E"):
            raise ParseError(f"unknown parameter {key!r} (expected d, E)", offset + pos)
        if key in params:
            raise ParseError(f"parameter {key!r} given twice", offset + pos)
        try:
            params[key] = int(value) if key == "d" else float(value)
        except ValueError:
            kind = "an integer" if key == "d" else "a number"
            raise ParseError(f"{key} must be {kind}, got {value!r}", offset + pos + item.index("=") + 1) from None
        pos += len(item) + 1
    if "d" not in params:
        raise ParseError("equispaced spec needs d=<int>", offset)
    return Hamiltonian.equispaced(params["d"], params.get("E", 1.0))


def _parse_matrix(path: str, offset: int) -> Hamiltonian:
    if not path:
        raise ParseError("matrix spec needs a file path", offset)
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"cannot read {path!r}: {exc.strerror}", offset) from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path!r} is not valid JSON: {exc.msg}", offset) from None
    if isinstance(obj, dict):
        obj = obj.get("matrix")
    try:
        m = families.matrix_from_json(obj)
    except ErgokitError as exc:
        raise ParseError(f"{path!r}: {exc}", offset) from None
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.size == 0:
        raise ParseError(f"{path!r} does not hold a square matrix", offset)
    try:
        return Hamiltonian.explicit(m)
    except NotHermitian as exc:
        raise NotHermitian(f"{path}: {exc}") from None


def _parse_local(spec: str, offset: int) -> Hamiltonian:
    kind, sep, body = spec.partition(":")
    if not sep:
        raise ParseError(f"expected '<kind>:...', got {spec!r}", offset)
    if kind == "equispaced":
        return _parse_equispaced(body, offset + len(kind) + 1)
    if kind == "matrix":
        return _parse_matrix(body, offset + len(kind) + 1)
    raise ParseError(f"unknown Hamiltonian kind {kind!r}", offset)


def parse_ham_spec(s: str) -> Hamiltonian:
    """Parse ``equispaced:d=<int>,E=<float>``, ``matrix:<path>`` or
    ``composite:<spec>x<spec>...`` into a :class:`Hamiltonian`.
    """
    s = s.strip()
    if s.startswith("composite:"):
        body = s[len("composite:") :]
        parts, offset, start = [], len("composite:"), 0
        for m in _SPLIT.finditer(body):
            parts.append((body[start : m.start()], offset + start))
            start = m.end()
        parts.append((body[start:], offset + start))
        if any(not p for p, _ in parts):
            raise ParseError("empty term in composite spec", offset)
        return Hamiltonian.composite([_parse_local(p, off) for p, off in parts])
    return _parse_local(s, 0)


# output helpers


def _energy(x: float, units: str = "absolute") -> dict:
    return {"value": float(x), "units": units}


def _complex_matrix(m) -> list:
    return families.matrix_to_json(m)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.9g}"
    return str(x)


def _text_lines(obj, prefix: str = "") -> list[str]:
    if isinstance(obj, dict):
        if set(obj) == {"value", "units"}:
            return [f"{prefix}: {_fmt(obj['value'])} [{obj['units']}]"]
        out = []
        for k, v in obj.items():
            out += _text_lines(v, f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, list) and obj and isinstance(obj[0], list):
        return [f"{prefix}: {json.dumps(obj)}"]
    if isinstance(obj, list):
        return [f"{prefix}: " + " ".join(_fmt(v) for v in obj)]
    return [f"{prefix}: {_fmt(obj)}"]


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def render(payload: dict, fmt: str) -> str:
    payload = _jsonable(payload)
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    return "\n".join(_text_lines(payload)) + "\n"


# commands


def _load(args) -> tuple[DensityMatrix, Hamiltonian]:
    rho = families.load_state(args.state)
    h = parse_ham_spec(args.ham) if args.ham else Hamiltonian.local_equispaced(rho.dims, 1.0)
    check_compatible(rho, h)
    if h.kind == "composite" and len(rho.dims) == 1:
        # a composite spec carries its own subsystem structure
        rho = DensityMatrix(rho.matrix, h.dims)
    return rho, h


def _header(name: str, rho: DensityMatrix) -> dict:
    return {"command": name, "dims": list(rho.dims)}


def cmd_capacity(args) -> dict:
    rho, h = _load(args)
    wq = work_quantities(rho, h)
    out = _header("capacity", rho)
    out["capacity"] = _energy(wq.capacity)
    out["ergotropy"] = _energy(wq.ergotropy)
    out["antiergotropy"] = _energy(wq.antiergotropy)
    out["variance_lower_bound"] = _energy(variance_lower_bound(rho, h))
    if h.is_equispaced() and h.dim >= 2:
        lo, hi = equispaced_capacity_bounds(rho.spectrum, h.dim, h.E)
        out["spectral_bounds"] = {"lower": _energy(lo), "upper": _energy(hi)}
        out["capacity_per_E"] = _energy(wq.capacity / h.E, "E")
    out["state_spectrum"] = [float(x) for x in rho.spectrum]
    out["energies"] = [float(x) for x in h.energies]
    return out


def cmd_ergotropy(args) -> dict:
    rho, h = _load(args)
    wq = work_quantities(rho, h)
    ext = extremal_states(rho, h)
    out = _header("ergotropy", rho)
    out["mean_energy"] = _energy(wq.mean_energy)
    out["ergotropy"] = _energy(wq.ergotropy)
    out["antiergotropy"] = _energy(wq.antiergotropy)
    out["capacity"] = _energy(wq.capacity)
    out["passive_energy"] = _energy(wq.passive_energy)
    out["active_energy"] = _energy(wq.active_energy)
    out["passive_state"] = _complex_matrix(ext.passive.matrix)
    out["active_state"] = _complex_matrix(ext.active.matrix)
    return out


def _measures_json(m) -> dict:
    return {
        "mbwcg": _energy(m.mbwcg),
        "abcg": _energy(m.abcg),
        "wcf": None if m.wcf is None else _energy(m.wcf, "absolute^2"),
        "wcv": _energy(m.wcv),
        "alpha": m.alpha,
    }


def cmd_gap(args) -> dict:
    rho, h = _load(args)
    rep = gap_report(rho, h, args.alpha)
    out = _header("gap", rho)
    out["global_capacity"] = _energy(rep.global_capacity)
    out["local_capacities"] = {k: _energy(v) for k, v in rep.local_capacities.items()}
    out["delta_in"] = _energy(rep.delta_in)
    out["delta_out"] = _energy(rep.delta_out)
    out["bipartite_gaps"] = {k: _energy(v) for k, v in rep.bipartite_gaps.items()}
    out["fully_separable_gap"] = _energy(rep.fully_separable_gap)
    out["measures"] = _measures_json(rep.measures) if rep.measures is not None else "not computed (mixed state)"
    if rep.convex_roof_gap_2q is not None:
        # closed form for local Hamiltonians E|1><1|, in units of E
        out["convex_roof_gap_2q"] = _energy(rep.convex_roof_gap_2q, "E")
    return out


def cmd_multipartite(args) -> dict:
    rho, h = _load(args)
    m = multipartite_measures(rho, h, args.alpha)
    out = _header("multipartite", rho)
    out["bipartite_gaps"] = {k: _energy(v) for k, v in m.gaps.items()}
    out.update(_measures_json(m))
    return out


def cmd_total(args) -> dict:
    rho, h = _load(args)
    t = total_quantities(rho, h)
    wq = work_quantities(rho, h)
    out = _header("total", rho)
    out["total_ergotropy"] = _energy(t.total_ergotropy)
    out["total_antiergotropy"] = _energy(t.total_antiergotropy)
    out["total_capacity"] = _energy(t.total_capacity)
    out["capacity"] = _energy(wq.capacity)
    out["beta"] = t.beta
    out["beta_star"] = t.beta_star
    return out


def cmd_montecarlo(args) -> dict:
    rho, h = _load(args)
    est = mc_work_variance(rho, h, SampleConfig(rho.dim, args.samples, args.seed))
    if args.csv:
        w = work_samples(rho, h, args.samples, args.seed)
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["sample", "work"])
            writer.writerows((i, repr(float(x))) for i, x in enumerate(w))
    out = _header("montecarlo", rho)
    out["seed"] = args.seed
    out["n"] = est.n
    out["mean_work"] = _energy(est.mean)
    out["variance"] = _energy(est.variance, "absolute^2")
    out["std_error_of_variance"] = _energy(est.std_error_of_variance, "absolute^2")
    out["analytic_variance"] = _energy(est.analytic_variance, "absolute^2")
    out["z_score"] = est.z_score
    out["min_work"] = _energy(est.min_work)
    out["max_work"] = _energy(est.max_work)
    return out


def cmd_validate(args) -> dict:
    rho = families.load_state(args.state)
    return {
        "command": "validate",
        "valid": True,
        "dims": list(rho.dims),
        "trace": float(np.trace(rho.matrix).real),
        "min_eigenvalue": float(rho.spectrum[0]),
        "purity": rho.purity(),
    }


def _env_seed() -> int:
    raw = os.environ.get("ERGOKIT_SEED")
    if raw is None or not raw.strip():
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"ERGOKIT_SEED must be an integer, got {raw!r}") from None


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors: exit 1 with the common prefix
    def error(self, message):
        raise UsageError(message.splitlines()[0] if message else "bad usage")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $ERGOKIT_SEED or 0)")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    stateful = argparse.ArgumentParser(add_help=False)
    stateful.add_argument("--state", required=True, help="state JSON, inline or a file path")
    stateful.add_argument(
        "--ham", default=None, help="Hamiltonian spec (default: E=1 ladder on every subsystem)"
    )

    p = _Parser(prog="ergokit", description="Battery capacity and related quantities of quantum states.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, fn, helptext in (
        ("capacity", cmd_capacity, "capacity, ergotropy, antiergotropy and bounds"),
        ("ergotropy", cmd_ergotropy, "work quantities with passive and active states"),
        ("gap", cmd_gap, "global versus local capacity gaps"),
        ("multipartite", cmd_multipartite, "multipartite measures of a pure state"),
        ("total", cmd_total, "many-copy limits from entropy-matched Gibbs states"),
        ("montecarlo", cmd_montecarlo, "Haar Monte Carlo work variance"),
    ):
        sp = sub.add_parser(name, parents=[common, stateful], help=helptext)
        sp.set_defaults(func=fn)
        if name in ("gap", "multipartite"):
            sp.add_argument("--alpha", type=float, default=None, help="abcg prefactor (default 1/N)")
        if name == "montecarlo":
            sp.add_argument("--samples", type=int, default=10_000)
            sp.add_argument("--csv", default=None, help="also write per-sample work as CSV")

    sp = sub.add_parser("validate", parents=[common], help="exit 0 iff the state is valid")
    sp.add_argument("--state", required=True)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("paper-report", parents=[common], help="reproduction report with errata")
    sp.add_argument("--samples", type=int, default=100_000, help="Monte Carlo samples per check")
    sp.set_defaults(func=None)
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.seed is None:
            args.seed = _env_seed()
        if getattr(args, "samples", 1) < 1:
            raise UsageError("--samples must be at least 1")
        if args.command == "paper-report":
            rep = build_report(args.seed, args.samples)
            text = render_json(rep) if args.format == "json" else render_markdown(rep)
        else:
            text = render(args.func(args), args.format)
        _emit(text, args.out)
        return 0
    except ErgokitError as exc:
        msg = " ".join(str(exc).split())
        print(f"ERROR {exc.code}: {msg}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"ERROR IOError: {exc.strerror}: {exc.filename}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
