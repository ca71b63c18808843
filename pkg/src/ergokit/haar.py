"""Haar-random unitaries, random states and Monte Carlo work statistics.

Randomness comes from counter-based Philox streams. A Monte Carlo run is
cut into fixed-size blocks and block ``k`` draws from the stream keyed by
``(seed, k)``, so results do not depend on how blocks are scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, ErgokitError, InvalidSpectrum
from .ergotropy import work_quantities
from .state import DensityMatrix, Hamiltonian, check_compatible

BLOCK_SIZE = 4096


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent Philox generator for ``(seed, *key)``."""
    ss = np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def haar_unitaries(n: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Haar-distributed ``dim x dim`` unitaries, shape ``(n, dim, dim)``.

    QR of a complex Ginibre matrix, with the phases of R's diagonal moved
    into Q so the result is exactly Haar rather than merely unitary.
    """
    z = (rng.standard_normal((n, dim, dim)) + 1j * rng.standard_normal((n, dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.abs(diag)
    return q * phases[:, None, :]


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    if dim < 1:
        raise DimensionMismatch(f"dimension must be positive, got {dim}")
    return haar_unitaries(1, dim, rng)[0]


def random_density(dim: int, model="hilbert_schmidt", rng: np.random.Generator | None = None) -> DensityMatrix:
    """Random state of dimension ``dim``.

    ``model`` is ``"hilbert_schmidt"`` (normalized ``G G^dag`` with square
    Ginibre ``G``), ``"pure"`` (Haar-random vector) or a sequence of
    eigenvalues, rotated by a Haar unitary.
    """
    if rng is None:
        rng = np.random.default_rng()
    if dim < 2:
        raise DimensionMismatch(f"dimension must be at least 2, got {dim}")
    if isinstance(model, str):
        if model == "pure":
            psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            return DensityMatrix.from_vector(psi)
        if model == "hilbert_schmidt":
            g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            m = g @ g.conj().T
            return DensityMatrix(m / np.trace(m).real)
        raise ErgokitError(f"unknown purity model {model!r}")
    lam = np.asarray(model, dtype=float)
    if lam.shape != (dim,) or lam.min() < 0 or abs(lam.sum() - 1) > 1e-9:
        raise InvalidSpectrum(f"fixed spectrum {lam} is not a {dim}-element probability vector")
    u = haar_unitary(dim, rng)
    return DensityMatrix((u * lam) @ u.conj().T)


@dataclass(frozen=True)
class SampleConfig:
    dim: int
    n_samples: int
    seed: int = 0
    purity_model: object = "hilbert_schmidt"

    def __post_init__(self):
        if self.n_samples < 1:
            raise ErgokitError("n_samples must be at least 1")
        if self.dim < 2:
            raise ErgokitError("dim must be at least 2")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    variance: float
    std_error_of_variance: float
    n: int
    analytic_variance: float
    min_work: float
    max_work: float

    @property
    def z_score(self) -> float:
        if self.std_error_of_variance == 0:
            return 0.0 if self.variance == self.analytic_variance else np.inf
        return (self.variance - self.analytic_variance) / self.std_error_of_variance


def work_samples(rho: DensityMatrix, h: Hamiltonian, n_samples: int, seed: int) -> np.ndarray:
    """Work ``W_U`` for ``n_samples`` Haar unitaries, block-seeded."""
    check_compatible(rho, h)
    d = rho.dim
    hm = h.matrix
    mean = rho.expectation(hm)
    out = np.empty(n_samples)
    for block, start in enumerate(range(0, n_samples, BLOCK_SIZE)):
        size = min(BLOCK_SIZE, n_samples - start)
        u = haar_unitaries(size, d, stream(seed, block))
        # Tr[U rho U^dag H] = sum_ij (U^dag H U)_ji rho_ij
        rotated = np.einsum("nki,kl,nlj->nij", u.conj(), hm, u, optimize=True)
        out[start : start + size] = mean - np.einsum("nij,ji->n", rotated, rho.matrix).real
    return out


def jackknife_variance_se(x: np.ndarray) -> float:
    """Delete-one jackknife standard error of the unbiased sample variance."""
    n = x.size
    if n < 3:
        return float("nan") if n < 2 else 0.0
    c = x - x.mean()
    s1 = c.sum()
    s2 = np.dot(c, c)
    loo = (s2 - c * c - (s1 - c) ** 2 / (n - 1)) / (n - 2)
    dev = loo - loo.mean()
    return float(np.sqrt((n - 1) / n * np.dot(dev, dev)))


def analytic_work_variance(rho: DensityMatrix, h: Hamiltonian) -> float:
    """``sigma_rho^2 sigma_H^2 / (d^2 - 1)``: variance of ``W_U`` over the Haar measure."""
    d = rho.dim
    return max(0.0, rho.purity() - 1.0 / d) * max(0.0, h.variance()) / (d * d - 1)


def mc_work_variance(rho: DensityMatrix, h: Hamiltonian, cfg: SampleConfig) -> McEstimate:
    if cfg.dim != rho.dim:
        raise DimensionMismatch(f"config dimension {cfg.dim} != state dimension {rho.dim}")
    w = work_samples(rho, h, cfg.n_samples, cfg.seed)
    return McEstimate(
        mean=float(w.mean()),
        variance=float(w.var(ddof=1)) if w.size > 1 else 0.0,
        std_error_of_variance=jackknife_variance_se(w),
        n=int(w.size),
        analytic_variance=analytic_work_variance(rho, h),
        min_work=float(w.min()),
        max_work=float(w.max()),
    )


def popoviciu_check(rho: DensityMatrix, h: Hamiltonian, samples: np.ndarray) -> dict:
    """Range and variance of work samples against the capacity.

    Every sample must lie in ``[antiergotropy, ergotropy]`` and the
    variance obeys ``Var <= (max - min)^2 / 4 <= C^2 / 4``.
    """
    wq = work_quantities(rho, h)
    var = float(np.var(samples))
    span = float(samples.max() - samples.min())
    return {
        "in_range": bool(np.all(samples >= wq.antiergotropy - 1e-9) and np.all(samples <= wq.ergotropy + 1e-9)),
        "variance": var,
        "span_bound": span * span / 4.0,
        "capacity_bound": wq.capacity**2 / 4.0,
    }


def random_spectra(n: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` probability vectors uniform on the simplex, shape ``(n, dim)``."""
    return rng.dirichlet(np.ones(dim), size=n)


def mixture_of_permutations(lam: Sequence[float], rng: np.random.Generator, terms: int = 4) -> np.ndarray:
    """A convex mixture of coordinate permutations of ``lam``; majorized by ``lam``."""
    lam = np.asarray(lam, dtype=float)
    w = rng.dirichlet(np.ones(terms))
    return sum(wk * lam[rng.permutation(lam.size)] for wk in w)
