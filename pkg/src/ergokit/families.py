"""Named state families and the JSON state schema.

A state document is either explicit::

    {"dims": [2, 2], "matrix": [[[re, im], ...], ...]}

or a named constructor such as ``{"name": "werner_d", "d": 3, "v": 0.5}``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import InvalidBlochParameters, InvalidCoefficients, InvalidState
from .state import DensityMatrix


def qubit(q: float, c: float, theta: float = 0.0) -> DensityMatrix:
    """``[[1-q, c e^{i theta}], [c e^{-i theta}, q]]``; ``q`` is the excited population."""
    if not 0.0 <= q <= 1.0:
        raise InvalidBlochParameters(f"population q={q} outside [0, 1]")
    if c < 0 or c > math.sqrt(q * (1 - q)) + 1e-12:
        raise InvalidBlochParameters(f"coherence c={c} outside [0, sqrt(q(1-q))]")
    off = c * np.exp(1j * theta)
    return DensityMatrix(np.array([[1 - q, off], [np.conj(off), q]]))


def ghz(theta: float = math.pi / 4, n: int = 3) -> DensityMatrix:
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = math.cos(theta)
    psi[-1] = math.sin(theta)
    return DensityMatrix.from_vector(psi, [2] * n)


def w_state(n: int = 3) -> DensityMatrix:
    psi = np.zeros(2**n, dtype=complex)
    for k in range(n):
        psi[1 << k] = 1.0
    return DensityMatrix.from_vector(psi, [2] * n)


def werner_d(d: int, v: float) -> DensityMatrix:
    """Noisy uniform superposition ``(1-v) I/d + v |phi><phi|`` on one ``d``-level system."""
    _check_weight(v)
    phi = np.full(d, 1 / math.sqrt(d))
    return DensityMatrix((1 - v) * np.eye(d) / d + v * np.outer(phi, phi), [d])


def schmidt_pair(lam: float) -> np.ndarray:
    """``sqrt(lam)|00> + sqrt(1-lam)|11>``."""
    if not 0.0 <= lam <= 1.0:
        raise InvalidState(f"Schmidt weight {lam} outside [0, 1]")
    return np.array([math.sqrt(lam), 0, 0, math.sqrt(1 - lam)], dtype=complex)


def werner2(v: float, theta: float = math.pi / 4) -> DensityMatrix:
    """``v|psi><psi| + (1-v) I/4`` with ``psi = cos(theta)|00> + sin(theta)|11>``."""
    _check_weight(v)
    psi = np.array([math.cos(theta), 0, 0, math.sin(theta)], dtype=complex)
    return DensityMatrix(v * np.outer(psi, psi.conj()) + (1 - v) * np.eye(4) / 4, [2, 2])


def isotropic(v: float, lam: float = 0.5) -> DensityMatrix:
    """``[(1-v) I + (4v-1)|psi><psi|] / 3`` with ``psi`` from :func:`schmidt_pair`.

    ``v`` is the overlap with ``psi``; the family is a valid state for
    ``0 <= v <= 1``.
    """
    _check_weight(v)
    psi = schmidt_pair(lam)
    return DensityMatrix(((1 - v) * np.eye(4) + (4 * v - 1) * np.outer(psi, psi.conj())) / 3, [2, 2])


def acin_vector(l: Sequence[float], theta: float = 0.0) -> np.ndarray:
    """Three-qubit vector in the five-term canonical form.

    ``l0|000> + l1 e^{i theta}|100> + l2|101> + l3|110> + l4|111>``
    with qubit order A, B, C.
    """
    l = np.asarray(l, dtype=float)
    if l.shape != (5,) or np.any(l < 0):
        raise InvalidCoefficients("need five non-negative coefficients")
    if abs(np.sum(l**2) - 1) > 1e-9:
        raise InvalidCoefficients(f"squared coefficients sum to {np.sum(l**2):.12g}, not 1")
    if not 0.0 <= theta <= math.pi:
        raise InvalidCoefficients(f"phase {theta} outside [0, pi]")
    psi = np.zeros(8, dtype=complex)
    psi[0b000] = l[0]
    psi[0b100] = l[1] * np.exp(1j * theta)
    psi[0b101] = l[2]
    psi[0b110] = l[3]
    psi[0b111] = l[4]
    return psi


def acin(l: Sequence[float], theta: float = 0.0) -> DensityMatrix:
    return DensityMatrix.from_vector(acin_vector(l, theta), [2, 2, 2])


def _check_weight(v: float) -> None:
    if not 0.0 <= v <= 1.0:
        raise InvalidState(f"mixing weight v={v} outside [0, 1]")


def _complex_entry(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise InvalidState(f"complex entries must be [re, im] pairs, got {x!r}")
        return complex(float(x[0]), float(x[1]))
    return complex(float(x))


def matrix_from_json(rows) -> np.ndarray:
    try:
        return np.array([[_complex_entry(x) for x in row] for row in rows], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InvalidState(f"malformed matrix: {exc}") from exc


def matrix_to_json(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


_NAMED = {
    "qubit": lambda o: qubit(float(o["q"]), float(o.get("c", 0.0)), float(o.get("theta", 0.0))),
    "ghz": lambda o: ghz(float(o.get("theta", math.pi / 4)), int(o.get("n", 3))),
    "werner_d": lambda o: werner_d(int(o["d"]), float(o["v"])),
    "werner2": lambda o: werner2(float(o["v"]), float(o.get("theta", math.pi / 4))),
    "isotropic": lambda o: isotropic(float(o["v"]), float(o.get("lambda", 0.5))),
    "acin": lambda o: acin([float(x) for x in o["l"]], float(o.get("theta", 0.0))),
    "w3": lambda o: w_state(3),
    "schmidt": lambda o: DensityMatrix.from_vector(schmidt_pair(float(o["lambda"])), [2, 2]),
}


def state_from_json(obj: Any) -> DensityMatrix:
    if not isinstance(obj, dict):
        raise InvalidState("state document must be a JSON object")
    if "name" in obj:
        name = obj["name"]
        if name not in _NAMED:
            raise InvalidState(f"unknown state family {name!r}; known: {sorted(_NAMED)}")
        try:
            return _NAMED[name](obj)
        except KeyError as exc:
            raise InvalidState(f"state family {name!r} is missing parameter {exc}") from exc
    if "matrix" not in obj:
        raise InvalidState("state document needs either 'name' or 'matrix'")
    m = matrix_from_json(obj["matrix"])
    return DensityMatrix(m, obj.get("dims"))


def load_state(source: str) -> DensityMatrix:
    """Parse ``source`` as inline JSON, falling back to a file path."""
    text = source.strip()
    if not text.startswith("{"):
        path = Path(source)
        if not path.is_file():
            raise InvalidState(f"state source {source!r} is neither JSON nor a readable file")
        text = path.read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidState(f"state JSON does not parse: {exc}") from exc
    return state_from_json(obj)


def state_to_json(rho: DensityMatrix) -> dict:
    return {"dims": list(rho.dims), "matrix": matrix_to_json(rho.matrix)}

