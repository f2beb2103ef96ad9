import numpy as np
import pytest

from qmet import fisher, qubit
from qmet.errors import NotPovmError, OutOfPlaneError, PoleAtUnitSzError, ZeroStateError


def proj_pair(direction):
    return qubit.QubitPovmSet.projective(direction)


def random_bloch(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v) * rng.uniform(0, 1) ** (1 / 3)


def random_qubit_povm(rng):
    k = int(rng.integers(2, 6))
    q = rng.normal(size=(k, 3))
    q /= np.linalg.norm(q, axis=1)[:, None]
    q *= rng.uniform(0.2, 1, size=(k, 1))
    g = rng.uniform(0.1, 1, size=k)
    # choose an extra element cancelling sum g q; rescale so weights sum to 1
    extra = -(g[:, None] * q).sum(axis=0)
    ge = np.linalg.norm(extra)
    elems = [(gi, qi) for gi, qi in zip(g, q)]
    if ge > 0:
        elems.append((ge, extra / ge))
    total = sum(e[0] for e in elems)
    return qubit.QubitPovmSet(tuple(qubit.QubitPovmElement(gi / total, qi) for gi, qi in elems))


@pytest.mark.parametrize(
    "s_in,theta,expected",
    [((1, 0, 0), 0.0, (1, 0, 0)), ((1, 0, 0), np.pi / 2, (0, 0, -1)), ((0.8, 0, 0), np.pi / 2, (0, 0, -0.8))],
)
def test_rotate_bloch(s_in, theta, expected):
    np.testing.assert_allclose(qubit.rotate_bloch(s_in, theta).s, expected, atol=1e-15)


def test_rotation_matches_unitary_conjugation(rng):
    for _ in range(20):
        s = random_bloch(rng)
        th = rng.uniform(-3, 3)
        u = np.cos(th / 2) * np.eye(2) - 1j * np.sin(th / 2) * qubit.PAULI[1]
        rho = u @ qubit.BlochVector(s).density_matrix() @ u.conj().T
        np.testing.assert_allclose(qubit.rotate_bloch(s, th).density_matrix(), rho, atol=1e-14)


@pytest.mark.parametrize("s,f", [((1, 0, 0), 1.0), ((0, 1, 0), 0.0), ((0.6, 0, 0.4), 0.52)])
def test_qfi_values(s, f):
    assert qubit.qubit_qfi(s) == pytest.approx(f, abs=1e-15)


def test_qfi_theta_invariance(rng):
    for _ in range(100):
        s = random_bloch(rng)
        vals = [qubit.qubit_qfi(qubit.rotate_bloch(s, t)) for t in np.linspace(0, 2 * np.pi, 25)]
        assert np.ptp(vals) < 1e-12


@pytest.mark.parametrize("s,perp", [((1, 0, 0), (0, 0, -1)), ((0, 0, 1), (1, 0, 0))])
def test_sld_vector(s, perp):
    np.testing.assert_allclose(qubit.qubit_sld(s), perp)


def test_sld_matrix_solves_defining_relation(rng):
    h = 1e-6
    for _ in range(20):
        s_in = random_bloch(rng)
        s_in[1] = 0.0
        th = rng.uniform(-3, 3)
        s = qubit.rotate_bloch(s_in, th)
        rho = s.density_matrix()
        drho_fd = (
            qubit.rotate_bloch(s_in, th + h).density_matrix()
            - qubit.rotate_bloch(s_in, th - h).density_matrix()
        ) / (2 * h)
        L = qubit.sld_matrix(s)
        assert np.max(np.abs(0.5 * (rho @ L + L @ rho) - drho_fd)) < 1e-9
        assert abs(s.s @ qubit.qubit_sld(s)) < 1e-15


@pytest.mark.parametrize(
    "s,q,p",
    [((0, 0, 1), (0, 0, 1), 1.0), ((0, 0, 1), (0, 0, -1), 0.0), ((0.6, 0, 0), (1, 0, 0), 0.8)],
)
def test_povm_probability(s, q, p):
    e = qubit.QubitPovmElement(0.5, q)
    assert qubit.povm_probability(s, e) == pytest.approx(p, abs=1e-15)
    rho = qubit.BlochVector(s).density_matrix()
    assert np.trace(rho @ e.matrix()).real == pytest.approx(p, abs=1e-15)


def test_cfi_optimal_pure():
    s_in = (1, 0, 0)
    s = qubit.rotate_bloch(s_in, 0.3)
    povm = proj_pair(qubit.in_plane_frame(s)[1])
    assert qubit.qubit_cfi(s_in, 0.3, povm) == pytest.approx(1.0, abs=1e-12)


def test_cfi_uninformative(rng):
    for _ in range(5):
        assert qubit.qubit_cfi(random_bloch(rng), rng.uniform(0, 3), qubit.UNINFORMATIVE) == 0.0


def test_cfi_mixed_quarter_angle_matches_fd_oracle():
    s_in, phi = np.array([0.8, 0, 0]), np.pi / 4
    fam = qubit.optimal_q_solutions(s_in)
    povm = proj_pair(fam.direction(phi))
    expected = 0.64 * 0.5 / (1 - 0.64 * 0.5)
    assert qubit.qubit_cfi(s_in, 0.0, povm) == pytest.approx(expected, abs=1e-12)
    h = 1e-6
    p = lambda t: np.array([qubit.povm_probability(qubit.rotate_bloch(s_in, t), e) for e in povm])
    dp = (p(h) - p(-h)) / (2 * h)
    assert np.sum(dp**2 / p(0.0)) == pytest.approx(expected, rel=1e-8)


def test_cfi_matches_density_matrix_route(rng):
    for _ in range(30):
        s_in = random_bloch(rng)
        th = rng.uniform(-3, 3)
        povm = random_qubit_povm(rng)
        s = qubit.rotate_bloch(s_in, th)
        rho = s.density_matrix()
        drho = fisher.unitary_derivative(rho, qubit.GENERATOR)
        ref = fisher.cfi_povm(rho, drho, povm.to_povm())
        assert qubit.qubit_cfi(s_in, th, povm) == pytest.approx(ref, abs=1e-10)


def test_cfi_below_qfi(rng):
    for _ in range(200):
        s_in = random_bloch(rng)
        th = rng.uniform(-3, 3)
        povm = random_qubit_povm(rng)
        assert qubit.qubit_cfi(s_in, th, povm) <= qubit.qubit_qfi(qubit.rotate_bloch(s_in, th)) + 1e-9


def test_pure_circle_saturates():
    for beta in np.linspace(0, 2 * np.pi, 7):
        s = np.array([np.cos(beta), 0, np.sin(beta)])
        fam = qubit.optimal_q_solutions(s)
        assert fam.kind == "circle"
        for phi in np.linspace(0.05, np.pi - 0.05, 23):
            assert qubit.qubit_cfi(s, 0.0, proj_pair(fam.direction(phi))) == pytest.approx(1.0, abs=1e-9)


def test_mixed_strict_maximum():
    for r in (0.3, 0.5, 0.8, 0.99):
        s = np.array([0, 0, r])
        fam = qubit.optimal_q_solutions(s)
        assert fam.kind == "pair"
        closed = lambda phi: r**2 * np.sin(phi) ** 2 / (1 - r**2 * np.cos(phi) ** 2)
        assert qubit.qubit_cfi(s, 0.0, proj_pair(fam.direction(np.pi / 2))) == pytest.approx(r**2, abs=1e-12)
        for phi in np.linspace(0.01, np.pi - 0.01, 60):
            if abs(phi - np.pi / 2) < 0.1:
                continue
            cfi = qubit.qubit_cfi(s, 0.0, proj_pair(fam.direction(phi)))
            assert cfi == pytest.approx(closed(phi), abs=1e-12)
            assert cfi < r**2 - 0.5 * (r**2 - closed(phi))


def test_optimal_families():
    fam = qubit.optimal_q_solutions((0.5, 0, 0))
    assert fam.kind == "pair"
    np.testing.assert_allclose(fam.vectors[0], [0, 0, -1])
    np.testing.assert_allclose(fam.vectors[1], [0, 0, 1])
    assert fam.contains((0, 0, 1)) and not fam.contains((0.3, 0, np.sqrt(0.91)))
    circ = qubit.optimal_q_solutions((0, 0, 1))
    assert circ.contains((np.sqrt(0.5), 0, np.sqrt(0.5)))
    with pytest.raises(AttributeError):
        circ.vectors


def test_family_residuals():
    for s in ((1, 0, 0), (0.6, 0, 0.8)):
        fam = qubit.optimal_q_solutions(s)
        for phi in np.linspace(0, 2 * np.pi, 13):
            q = fam.direction(phi)
            if abs(q @ qubit.qubit_sld(s)) < 1e-9:
                continue  # q parallel to s: E L rho vanishes on that element
            for sign in (1, -1):
                _, res = qubit.element_residual(s, qubit.QubitPovmElement(0.5, sign * q))
                assert res < 1e-10
    for r in (0.5, 0.8):
        s = np.array([r, 0, 0])
        fam = qubit.optimal_q_solutions(s)
        for q in fam.vectors:
            assert qubit.element_residual(s, qubit.QubitPovmElement(0.5, q))[1] < 1e-10
            bad = q + 0.1 * fam.e_s
            bad /= np.linalg.norm(bad)
            assert qubit.element_residual(s, qubit.QubitPovmElement(0.5, bad))[1] > 1e-3
        q = 0.3 * fam.e_s + np.sqrt(0.91) * fam.e_perp
        assert qubit.element_residual(s, qubit.QubitPovmElement(0.5, q))[1] > 1e-3


def test_frame_errors():
    with pytest.raises(OutOfPlaneError):
        qubit.optimal_q_solutions((0.5, 0.1, 0))
    with pytest.raises(ZeroStateError):
        qubit.optimal_q_solutions((0, 0, 0))


@pytest.mark.parametrize("s,f", [((0.6, 0, 0.8), 1.0), ((0.6, 0, 0), 0.36), ((0.6, 0, 0.4), 0.36 / 0.84)])
def test_imbalance_cfi(s, f):
    assert qubit.imbalance_cfi_qubit(s) == pytest.approx(f, abs=1e-12)
    assert qubit.qubit_cfi(s, 0.0, qubit.IMBALANCE_POVM) == pytest.approx(f, abs=1e-12)


def test_imbalance_equals_qfi_only_when_pure_or_equatorial():
    assert qubit.imbalance_cfi_qubit((0.6, 0, 0.4)) < qubit.qubit_qfi((0.6, 0, 0.4))
    with pytest.raises(PoleAtUnitSzError):
        qubit.imbalance_cfi_qubit((0, 0, 1))


def test_validation():
    with pytest.raises(ValueError):
        qubit.BlochVector((1, 1, 0))
    with pytest.raises(NotPovmError):
        qubit.QubitPovmSet((qubit.QubitPovmElement(0.5, (0, 0, 1)),))
    with pytest.raises(ValueError):
        qubit.QubitPovmElement(-0.1, (0, 0, 0))
    assert qubit.BlochVector((0, 0, 1)).pure and not qubit.BlochVector((0, 0, 0.5)).pure
    e = qubit.QubitPovmElement(0.3, (0.2, -0.5, 0.7))
    assert np.min(np.linalg.eigvalsh(e.matrix())) >= -1e-15
