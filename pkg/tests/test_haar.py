import numpy as np
import pytest

from ergokit.errors import DimensionMismatch, ErgokitError, InvalidSpectrum
from ergokit.ergotropy import work_quantities
from ergokit.haar import (
    SampleConfig,
    analytic_work_variance,
    haar_unitaries,
    haar_unitary,
    jackknife_variance_se,
    mc_work_variance,
    popoviciu_check,
    random_density,
    stream,
    work_samples,
)
from ergokit.linalg import is_unitary
from ergokit.state import DensityMatrix, Hamiltonian

GOLDEN_42 = np.array(
    [
        [-0.5587966851154453 - 0.2622524978494949j, 0.04127948431758996 - 0.7856627115054935j],
        [0.023275242341843777 - 0.7864020315141734j, -0.5784171809233671 + 0.21555433824670367j],
    ]
)
HS_PURITY_BASELINE = 0.7997152774240364

QUBIT_H = Hamiltonian.equispaced(2)


def test_golden_unitary():
    assert np.array_equal(haar_unitary(2, stream(42)), GOLDEN_42)


def test_dim_one_is_a_phase():
    u = haar_unitary(1, stream(1))
    assert u.shape == (1, 1) and abs(abs(u[0, 0]) - 1) <= 1e-12
    with pytest.raises(DimensionMismatch):
        haar_unitary(0, stream(1))


def test_unitarity(rng):
    for u in haar_unitaries(200, 5, rng):
        assert is_unitary(u, 1e-10)


def test_streams_are_independent():
    a = stream(7, 0).standard_normal(4)
    b = stream(7, 1).standard_normal(4)
    assert not np.allclose(a, b)
    assert np.array_equal(a, stream(7, 0).standard_normal(4))


def test_haar_twirl(rng):
    d, n = 3, 100_000
    rho = random_density(d, "hilbert_schmidt", rng).matrix
    u = haar_unitaries(n, d, rng)
    twirled = np.einsum("nij,jk,nlk->nil", u, rho, u.conj())
    mean = twirled.mean(axis=0)
    se = twirled.std(axis=0) / np.sqrt(n)
    assert np.all(np.abs(mean.real - np.eye(d).real / d) <= 5 * se.real + 1e-15)
    assert np.all(np.abs(mean.imag) <= 5 * np.abs(twirled.imag).std(axis=0) / np.sqrt(n) + 1e-15)


def test_left_invariance(rng):
    # moments of |U_00|^2 are 1/d and 2/(d(d+1)); a fixed left factor must not move them
    d, n = 3, 100_000
    v = haar_unitary(d, rng)
    for mats in (haar_unitaries(n, d, rng), v @ haar_unitaries(n, d, rng)):
        x = np.abs(mats[:, 0, 0]) ** 2
        se1, se2 = x.std() / np.sqrt(n), (x * x).std() / np.sqrt(n)
        assert abs(x.mean() - 1 / d) <= 5 * se1
        assert abs((x * x).mean() - 2 / (d * (d + 1))) <= 5 * se2


def test_random_density_models(rng):
    pure = random_density(2, "pure", rng)
    assert abs(pure.purity() - 1) <= 1e-10
    fixed = random_density(3, [0.5, 0.3, 0.2], rng)
    assert np.allclose(fixed.spectrum, [0.2, 0.3, 0.5], atol=1e-9)
    with pytest.raises(InvalidSpectrum):
        random_density(3, [0.5, 0.6, -0.1], rng)
    with pytest.raises(InvalidSpectrum):
        random_density(3, [0.5, 0.5], rng)
    with pytest.raises(ErgokitError):
        random_density(3, "bures", rng)
    with pytest.raises(DimensionMismatch):
        random_density(1, "pure", rng)


def test_hilbert_schmidt_purity_baseline():
    gen = stream(2024)
    purities = np.array([random_density(2, "hilbert_schmidt", gen).purity() for _ in range(100_000)])
    assert purities.mean() == pytest.approx(HS_PURITY_BASELINE, abs=1e-12)
    # the ensemble average for d = 2 is 4/5
    assert abs(purities.mean() - 0.8) <= 3 * purities.std() / np.sqrt(purities.size)


def test_config_validation():
    with pytest.raises(ErgokitError):
        SampleConfig(dim=2, n_samples=0)
    with pytest.raises(ErgokitError):
        SampleConfig(dim=1, n_samples=10)


def test_mc_pure_qubit():
    est = mc_work_variance(DensityMatrix.from_vector([0, 1]), QUBIT_H, SampleConfig(2, 100_000, seed=3))
    assert est.analytic_variance == pytest.approx(1 / 12)
    assert abs(est.variance - 1 / 12) <= 3 * est.std_error_of_variance
    assert est.n == 100_000


def test_mc_maximally_mixed_is_zero():
    est = mc_work_variance(DensityMatrix(np.eye(3) / 3), Hamiltonian.equispaced(3), SampleConfig(3, 1000, seed=1))
    assert est.variance == pytest.approx(0.0, abs=1e-28)
    assert est.analytic_variance == 0.0


def test_mc_three_level_example():
    rho = DensityMatrix(np.diag([0.5, 0.3, 0.2]))
    est = mc_work_variance(rho, Hamiltonian.equispaced(3), SampleConfig(3, 100_000, seed=5))
    assert est.analytic_variance == pytest.approx((0.38 - 1 / 3) * 2 / 8)
    assert abs(est.z_score) <= 3


def test_mc_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mc_work_variance(DensityMatrix(np.eye(2) / 2), QUBIT_H, SampleConfig(3, 10))


def test_mc_reproducible():
    rho = DensityMatrix(np.diag([0.1, 0.9]))
    a = mc_work_variance(rho, QUBIT_H, SampleConfig(2, 9000, seed=11))
    b = mc_work_variance(rho, QUBIT_H, SampleConfig(2, 9000, seed=11))
    assert a == b


def test_samples_within_sandwich_and_popoviciu(rng):
    for d in (2, 3, 4):
        rho = random_density(d, "hilbert_schmidt", rng)
        h = Hamiltonian.equispaced(d)
        w = work_samples(rho, h, 20_000, seed=d)
        check = popoviciu_check(rho, h, w)
        assert check["in_range"]
        assert check["variance"] <= check["span_bound"] <= check["capacity_bound"] + 1e-12
        wq = work_quantities(rho, h)
        assert w.max() - w.min() <= wq.capacity + 1e-9


def _identity_failures(seeds, n):
    fails = 0
    for d in (2, 3, 4):
        h = Hamiltonian.equispaced(d)
        for seed in seeds:
            rho = random_density(d, "hilbert_schmidt", stream(seed, 99))
            est = mc_work_variance(rho, h, SampleConfig(d, n, seed=seed))
            fails += abs(est.z_score) > 3
    return fails


def test_variance_identity_across_seeds():
    # one failure in fifteen is tolerated, with a single re-run on fresh seeds
    fails = _identity_failures(range(5), 20_000)
    if fails > 1:
        fails = _identity_failures(range(100, 105), 20_000)
    assert fails <= 1


def test_analytic_variance_qubit():
    assert analytic_work_variance(DensityMatrix.from_vector([1, 0]), QUBIT_H) == pytest.approx(1 / 12)


def test_jackknife_matches_brute_force(rng):
    x = rng.standard_normal(40) ** 2
    n = x.size
    loo = np.array([np.delete(x, i).var(ddof=1) for i in range(n)])
    brute = np.sqrt((n - 1) / n * np.sum((loo - loo.mean()) ** 2))
    assert jackknife_variance_se(x) == pytest.approx(brute, rel=1e-10)
    assert jackknife_variance_se(np.array([1.0, 2.0])) == 0.0
