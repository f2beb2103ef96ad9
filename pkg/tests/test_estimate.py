import numpy as np
import pytest

from qmet import estimate, purestate, qubit, spinrep, werner
from qmet.errors import BadProbabilitiesError, DegenerateLikelihoodError, ValidationError


def fixed_model(p, interval=(0.0, 1.0)):
    p = np.asarray(p, dtype=float)
    return estimate.OutcomeModel(
        tuple(range(len(p))), lambda t: np.broadcast_to(p, np.shape(t) + p.shape).copy(), interval
    )


def test_splitmix_reference_values():
    assert [int(v) for v in estimate.splitmix64(0, 3)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
    ]


def test_splitmix_matches_scalar_definition():
    def scalar(seed, k):
        z = (seed + (k + 1) * estimate.GOLDEN) & estimate.MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & estimate.MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & estimate.MASK64
        return z ^ (z >> 31)

    seed = 2**64 - 5
    out = estimate.splitmix64(seed, 10, start=3)
    assert [int(v) for v in out] == [scalar(seed, k) for k in range(3, 13)]


def test_uniforms_range():
    u = estimate.uniforms(9, 100_000)
    assert u.min() >= 0 and u.max() < 1
    assert abs(u.mean() - 0.5) < 0.005


def test_degenerate_counts():
    m = fixed_model([1.0, 0.0])
    for seed in (0, 1, 2**63):
        np.testing.assert_array_equal(estimate.sample_counts(m, 0.5, 100, seed), [100, 0])


def test_counts_deterministic_and_sum():
    model = estimate.qubit_optimal_model((1, 0, 0), 0.3)
    a = estimate.sample_counts(model, 0.3, 1000, 42)
    b = estimate.sample_counts(model, 0.3, 1000, 42)
    np.testing.assert_array_equal(a, b)
    assert a.sum() == 1000


def test_counts_statistics():
    c = estimate.sample_counts(fixed_model([0.3, 0.7]), 0.5, 10**6, 5)
    sigma = np.sqrt(0.3 * 0.7 / 10**6)
    assert abs(c[0] / 1e6 - 0.3) < 3 * sigma


def test_bad_probabilities():
    with pytest.raises(BadProbabilitiesError):
        estimate.sample_counts(fixed_model([0.6, 0.6]), 0.1, 10, 0)
    with pytest.raises(BadProbabilitiesError):
        estimate.sample_counts(fixed_model([1.2, -0.2]), 0.1, 10, 0)
    with pytest.raises(ValidationError):
        estimate.sample_counts(fixed_model([0.5, 0.5]), 0.1, 0, 0)


def test_ml_exact_counts_recover_truth():
    wm = estimate.werner_fock_model(0.8)
    grid = np.linspace(0, np.pi / 2, 2001)
    th0 = grid[700]
    counts = np.round(wm.probabilities(th0) * 1e9).astype(np.int64)
    assert estimate.ml_estimate(counts, wm, grid) == pytest.approx(th0, abs=1e-6)


def test_ml_single_draw_qubit():
    model = estimate.qubit_optimal_model((1, 0, 0), 0.3)
    counts = estimate.sample_counts(model, 0.3, 10**4, 2024)
    est = estimate.ml_estimate(counts, model, estimate.default_grid(model, 0.3))
    assert abs(est - 0.3) < 5 / np.sqrt(10**4)


def test_ml_tie_goes_to_smallest_theta():
    # p(theta) = p(-theta): balanced counts leave two symmetric maxima
    def prob(t):
        t = np.asarray(t, dtype=float)
        p0 = 0.5 * (1 + 0.8 * np.cos(t))
        return np.stack([p0, 1 - p0], axis=-1)

    model = estimate.OutcomeModel((0, 1), prob)
    grid = np.linspace(-1.5, 1.5, 301)
    counts = np.array([55, 45])
    est = estimate.ml_estimate(counts, model, grid)
    assert est < 0
    ll = counts @ np.log(prob(grid)).T
    assert abs(est - grid[np.argmax(ll)]) <= grid[1] - grid[0]


def test_ml_degenerate_likelihood():
    model = fixed_model([1.0, 0.0])
    with pytest.raises(DegenerateLikelihoodError):
        estimate.ml_estimate(np.array([3, 2]), model, np.linspace(0, 1, 5))


def test_ml_grid_validation():
    model = fixed_model([0.5, 0.5])
    with pytest.raises(ValidationError):
        estimate.ml_estimate([1, 1], model, [0.0, 1.0])
    with pytest.raises(ValidationError):
        estimate.ml_estimate([1, 1], model, [0.0, 2.0, 1.0])
    with pytest.raises(ValidationError):
        estimate.ml_estimate([1, 1, 1], model, [0.0, 1.0, 2.0])


def test_model_probabilities_match_closed_forms():
    s_in = np.array([0.6, 0, 0.5])
    qp = qubit.IMBALANCE_POVM
    m = estimate.qubit_model(s_in, qp)
    for th in (0.0, 0.4, 2.0):
        s = qubit.rotate_bloch(s_in, th)
        np.testing.assert_allclose(m.probabilities(th), [qubit.povm_probability(s, e) for e in qp], atol=1e-15)
    wm = estimate.werner_fock_model(0.3)
    np.testing.assert_allclose(wm.probabilities(0.7), werner.werner_probabilities(0.3, 0.7), atol=1e-15)
    psi = spinrep.bose_hubbard_ground(4, 1.0)
    cm = estimate.counting_model(psi, "y")
    np.testing.assert_allclose(cm.probabilities(0.3), spinrep.rotate_state(psi, "y", 0.3).probabilities, atol=1e-14)
    expected = purestate.cfi_mode_counting(spinrep.rotate_state(psi, "y", 0.3), "y")
    assert cm.fisher_information(0.3) == pytest.approx(expected, rel=1e-6)


def test_crlb_trial_deterministic():
    model = estimate.werner_fock_model(1.0)
    a = estimate.crlb_trial(model, 4.0, 0.5, 2000, 30, 99)
    b = estimate.crlb_trial(model, 4.0, 0.5, 2000, 30, 99)
    np.testing.assert_array_equal(a.theta_hats, b.theta_hats)
    assert a == b
    assert len(a.theta_hats) == a.trials == 30
    assert a.empirical_std >= 0
    assert a.crlb == pytest.approx(1 / np.sqrt(2000 * 4))


def test_trials_independent_of_order():
    # trial t depends only on substream t
    model = estimate.werner_fock_model(0.9)
    short = estimate.crlb_trial(model, 1.0, 0.6, 500, 5, 3)
    long = estimate.crlb_trial(model, 1.0, 0.6, 500, 12, 3)
    np.testing.assert_array_equal(short.theta_hats, long.theta_hats[:5])


def test_crlb_trial_validation():
    model = estimate.werner_fock_model(1.0)
    with pytest.raises(ValidationError):
        estimate.crlb_trial(model, 0.0, 0.5, 10, 10, 0)
    with pytest.raises(ValidationError):
        estimate.crlb_trial(model, 4.0, 0.5, 10, 0, 0)


def test_qubit_ratio():
    model = estimate.qubit_optimal_model((1, 0, 0), 0.3)
    r = estimate.crlb_trial(model, 1.0, 0.3, 10**4, 200, 7)
    assert 0.9 <= r.ratio <= 1.1


def test_werner_half_alpha_ratios():
    a, th = 0.5, np.pi / 4
    model = estimate.werner_fock_model(a)
    f = werner.werner_imbalance_cfi(a, th)
    r = estimate.crlb_trial(model, f, th, 10**4, 400, 21)
    assert 0.9 <= r.ratio <= 1.15
    rq = r.empirical_std / (1 / np.sqrt(10**4 * werner.werner_qfi(a)))
    assert rq > 1


def test_bound_not_beaten_beyond_noise():
    trials = 200
    cases = [
        (estimate.qubit_optimal_model((1, 0, 0), 0.3), 1.0, 0.3),
        (estimate.werner_fock_model(1.0), 4.0, 0.5),
        (estimate.werner_fock_model(0.7), werner.werner_imbalance_cfi(0.7, 0.6), 0.6),
    ]
    for k, (model, f, th) in enumerate(cases):
        r = estimate.crlb_trial(model, f, th, 5000, trials, 1000 + k)
        assert r.empirical_std >= r.crlb * (1 - 3 / np.sqrt(2 * trials))


def test_std_scales_as_inverse_sqrt_m():
    model = estimate.qubit_optimal_model((1, 0, 0), 0.3)
    ms = np.array([10**2, 10**3, 10**4])
    stds = [estimate.crlb_trial(model, 1.0, 0.3, int(m), 400, 555).empirical_std for m in ms]
    slope = np.polyfit(np.log(ms), np.log(stds), 1)[0]
    assert abs(slope + 0.5) < 0.05
