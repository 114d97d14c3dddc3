import numpy as np
import pytest
from conftest import rk4, sample_bound_kepler_states

from geoqm.classical import (
    CoordinateSingularityError,
    KeplerState,
    aa_flow,
    conformal_flow,
    frequencies,
    frequencies_fd,
    harmonic_action_printed,
    harmonic_chart,
    harmonic_model,
    invariant_tensor_r4,
    inverse_harmonic_chart,
    kepler_actions_energy,
    kepler_chart,
    kepler_energy,
    kepler_model,
    model_flow,
    nilpotency_defect,
    oscillator_invariants,
    poisson_bracket_fd,
    q_classical,
    recoordinate,
    su2_constants,
    wrap_angle,
)


def test_wrap_angle_half_open_interval():
    assert wrap_angle(np.pi) == pytest.approx(np.pi)
    assert wrap_angle(-np.pi) == pytest.approx(np.pi)  # maps to the closed end
    assert wrap_angle(3 * np.pi) == pytest.approx(np.pi)
    assert wrap_angle(0.3) == pytest.approx(0.3)
    vals = wrap_angle(np.linspace(-20, 20, 101))
    assert np.all(vals > -np.pi) and np.all(vals <= np.pi)


# --- frequencies ---------------------------------------------------------------


def test_harmonic_unit_frequencies():
    model = harmonic_model(1.0, 3)
    np.testing.assert_allclose(frequencies(model, [0.3, 1.2, 7.0]), np.ones(3))


def test_kepler_unit_actions_frequency():
    model = kepler_model(m=1.0, k=1.0)
    nu = frequencies(model, [0.2, 0.3, 0.5])  # total action 1
    np.testing.assert_allclose(nu, np.ones(3), rtol=1e-12)
    fd = frequencies_fd(model, [0.2, 0.3, 0.5], step=1e-6)
    np.testing.assert_allclose(fd, nu, atol=1e-8)


def test_q_classical_frequency_values():
    hbar, omega = 0.5, 1.3
    model = q_classical(hbar, omega)
    nu0 = frequencies(model, [0.0])
    assert nu0[0] == pytest.approx(omega * hbar / np.sinh(hbar), rel=1e-14)
    nu2 = frequencies(model, [2.0])
    assert nu2[0] == pytest.approx(omega * 0.5 * np.cosh(1.0) / np.sinh(0.5), rel=1e-14)
    fd = frequencies_fd(model, [2.0], step=1e-5)
    assert abs(fd[0] - nu2[0]) < 1e-8


def test_q_classical_undeformed_limit():
    model = q_classical(1e-8, omega=2.0)
    for action in ([0.0], [3.3], [10.0]):
        np.testing.assert_allclose(frequencies(model, action), [2.0], rtol=1e-8)


def test_fd_frequencies_one_sided_at_boundary():
    model = kepler_model()
    with pytest.warns(UserWarning, match="one-sided"):
        nu = frequencies_fd(model, [4e-6, 0.0, 0.0], step=1e-5)
    assert np.all(np.isfinite(nu))


def test_fd_matches_analytic_to_step_squared():
    model = q_classical(0.7, 1.0, n_dof=2)
    action = np.array([1.3, 0.4])
    exact = frequencies(model, action)
    for step in (1e-3, 1e-4):
        fd = frequencies_fd(model, action, step=step)
        assert np.max(np.abs(fd - exact)) < 5.0 * step**2 * np.max(np.abs(exact)) + 1e-12


# --- flow ------------------------------------------------------------------------


def test_aa_flow_time_zero_identity():
    model = harmonic_model([1.0, 2.0], 2)
    I0 = np.array([0.4, 0.7])
    phi0 = np.array([0.1, -2.0])
    I1, phi1 = aa_flow(model, I0, phi0, 0.0)
    np.testing.assert_array_equal(I1, I0)
    np.testing.assert_allclose(phi1, phi0, atol=1e-15)


def test_aa_flow_actions_bitwise_frozen():
    model = q_classical(0.3)
    I0 = np.array([0.123456789123])
    I1, _ = aa_flow(model, I0, [0.0], 17.23)
    assert I1[0] == I0[0]  # bitwise


def test_aa_flow_harmonic_period():
    model = harmonic_model(1.0, 1)
    _, phi = aa_flow(model, [0.5], [0.77], 2.0 * np.pi)
    assert phi[0] == pytest.approx(0.77, abs=1e-12)


def test_aa_flow_kepler_torus_dependence():
    model = kepler_model()
    nu_a = frequencies(model, [0.2, 0.3, 0.5])
    nu_b = frequencies(model, [0.4, 0.6, 1.0])
    assert abs(nu_a[0] - nu_b[0]) > 0.5  # different tori, different rates
    assert np.ptp(nu_a) == 0.0 and np.ptp(nu_b) == 0.0  # equal within a torus


# --- harmonic chart --------------------------------------------------------------


def test_harmonic_chart_frozen_point():
    action, phi = harmonic_chart([1.0, 0.0], 1.0)
    assert action[0] == pytest.approx(0.5)
    assert phi[0] == pytest.approx(0.0)


def test_harmonic_chart_roundtrip():
    rng = np.random.default_rng(17)
    omega = np.array([1.0, 2.5])
    for _ in range(20):
        x = rng.standard_normal(4)
        action, phi = harmonic_chart(x, omega)
        back = inverse_harmonic_chart(action, phi, omega)
        assert np.max(np.abs(back - x)) < 1e-12


def test_harmonic_chart_canonical_pairs():
    # {phi_k, I_k} = +1 via the finite-difference bracket oracle
    rng = np.random.default_rng(18)
    omega = np.array([1.0, 2.5])
    for _ in range(10):
        x = rng.standard_normal(4) * 1.5
        if np.min(np.abs(harmonic_chart(x, omega)[0])) < 1e-2:
            continue
        for k in range(2):
            f = lambda y, k=k: harmonic_chart(y, omega)[1][k]
            g = lambda y, k=k: harmonic_chart(y, omega)[0][k]
            assert poisson_bracket_fd(f, g, x, step=1e-6) == pytest.approx(1.0, abs=1e-6)
        # cross pairs commute
        f01 = lambda y: harmonic_chart(y, omega)[1][0]
        g1 = lambda y: harmonic_chart(y, omega)[0][1]
        assert poisson_bracket_fd(f01, g1, x, step=1e-6) == pytest.approx(0.0, abs=1e-6)


def test_harmonic_chart_warns_at_origin():
    with pytest.warns(UserWarning, match="angle undefined"):
        harmonic_chart([0.0, 0.0], 1.0)


def test_printed_action_variant_differs_off_unit_frequency():
    x = np.array([0.7, 0.2])
    np.testing.assert_allclose(
        harmonic_action_printed(x, 1.0), harmonic_chart(x, 1.0)[0], atol=1e-15
    )
    printed = harmonic_action_printed(x, 2.0)
    canonical = harmonic_chart(x, 2.0)[0]
    assert abs(printed[0] - canonical[0]) > 1e-3


# --- Kepler chart -----------------------------------------------------------------


def test_kepler_circular_equatorial_orbit():
    s = KeplerState(r=1.0, theta=np.pi / 2, phi=0.0, p_r=0.0, p_theta=0.0, p_phi=1.0)
    assert kepler_energy(s) == pytest.approx(-0.5)
    chart = kepler_chart(s, with_angles=False)
    np.testing.assert_allclose(chart.J, [0.0, 0.0, 1.0], atol=1e-12)
    assert chart.energy == pytest.approx(-0.5)
    assert chart.frequency == pytest.approx(1.0)  # circular angular speed p_phi/(m r^2)
    assert np.ptp(chart.frequencies) == 0.0


def test_kepler_chart_energy_identity_on_seeded_states():
    for s in sample_bound_kepler_states(50, seed=2024, vary_mk=True):
        chart = kepler_chart(s, with_angles=False)
        direct = kepler_energy(s)
        assert abs(chart.energy - direct) < 1e-9 * abs(direct)
        assert abs(kepler_actions_energy(chart.J, s.m, s.k) - direct) < 1e-9 * abs(direct)


def test_kepler_frequency_matches_fd_gradient():
    model_cache = {}
    for s in sample_bound_kepler_states(25, seed=7, vary_mk=True):
        chart = kepler_chart(s, with_angles=False)
        model = model_cache.setdefault((s.m, s.k), kepler_model(s.m, s.k))
        fd = frequencies_fd(model, chart.J, step=1e-6)
        assert np.max(np.abs(fd - chart.frequency)) < 1e-6 * max(1.0, chart.frequency)


def test_kepler_scaling_covariance():
    J = np.array([0.2, 0.3, 0.5])
    e1 = kepler_actions_energy(J, 1.0, 1.0)
    e4 = kepler_actions_energy(J, 1.0, 4.0)
    assert e4 == pytest.approx(16.0 * e1, rel=1e-12)
    nu1 = frequencies(kepler_model(1.0, 1.0), J)[0]
    nu4 = frequencies(kepler_model(1.0, 4.0), J)[0]
    assert nu4 == pytest.approx(16.0 * nu1, rel=1e-12)


def test_kepler_rejects_unbound_state():
    s = KeplerState(r=1.0, theta=np.pi / 2, phi=0.0, p_r=2.0, p_theta=0.0, p_phi=1.0)
    with pytest.raises(ValueError, match="unbound"):
        kepler_chart(s)


def test_kepler_rejects_axis_states():
    with pytest.raises(ValueError, match="singularity"):
        KeplerState(r=1.0, theta=0.0, phi=0.0, p_r=0.0, p_theta=0.0, p_phi=0.5)


def test_kepler_angles_finite_at_generic_state():
    # hand-tuned bound state: E = -1/2, L = 0.8, p_phi = 0.5, r = 0.8 keeps
    # every arcsin argument inside [-1, 1]
    theta = 1.2
    p_phi = 0.5
    L = 0.8
    p_theta = np.sqrt(L**2 - p_phi**2 / np.sin(theta) ** 2)
    s = KeplerState(r=0.8, theta=theta, phi=0.3, p_r=np.sqrt(0.5), p_theta=p_theta,
                    p_phi=p_phi)
    assert kepler_energy(s) == pytest.approx(-0.5, abs=1e-12)
    chart = kepler_chart(s)
    np.testing.assert_allclose(chart.J, [0.2, 0.3, 0.5], atol=1e-12)
    assert np.all(np.isfinite(chart.angles))


def test_kepler_angles_circular_torus_flagged():
    s = KeplerState(r=1.0, theta=np.pi / 2, phi=0.0, p_r=0.0, p_theta=0.0, p_phi=1.0)
    with pytest.raises(CoordinateSingularityError):
        kepler_chart(s, with_angles=True)


# --- conformal flows ---------------------------------------------------------------


def test_conformal_flow_constant_profile_period():
    omega = 1.7
    x, p = conformal_flow(0.6, -0.4, 2.0 * np.pi / omega, lambda r2: omega)
    assert x == pytest.approx(0.6, abs=1e-12)
    assert p == pytest.approx(-0.4, abs=1e-12)


def test_conformal_flow_quadratic_profile_half_turn():
    x, p = conformal_flow(1.0, 0.0, np.pi, lambda r2: r2)
    assert x == pytest.approx(-1.0, abs=1e-12)
    assert p == pytest.approx(0.0, abs=1e-12)


def test_conformal_flow_radius_exact_long_time():
    for f in (lambda r2: 1.0, lambda r2: r2, lambda r2: np.sin(r2)):
        x, p = conformal_flow(0.8, 0.6, 100.0, f)
        assert np.hypot(x, p) == pytest.approx(1.0, abs=1e-12)


def test_conformal_flow_matches_rk4():
    # independent route: integrate xdot = p f(r^2), pdot = -x f(r^2)
    for f in (lambda r2: 1.0, lambda r2: r2, lambda r2: np.sin(r2)):
        field = lambda y, f=f: np.array(
            [y[1] * f(y[0] ** 2 + y[1] ** 2), -y[0] * f(y[0] ** 2 + y[1] ** 2)]
        )
        got = conformal_flow(0.9, -0.3, 1.0, f)
        want = rk4(field, [0.9, -0.3], 1.0, dt=1e-4)
        assert np.max(np.abs(np.array(got) - want)) < 1e-6


# --- nilpotency ---------------------------------------------------------------------


def test_nilpotency_harmonic():
    model = harmonic_model([1.0, 2.0], 2)
    x0 = np.array([0.4, 0.9, 0.3, -1.1])
    assert nilpotency_defect(model_flow(model), x0, step=1e-4) < 1e-8


def test_nilpotency_kepler_circular_actions():
    model = kepler_model()
    x0 = np.array([0.0, 0.0, 1.0, 0.1, 0.2, 0.3])  # circular-orbit actions, any angles
    assert nilpotency_defect(model_flow(model), x0, step=1e-4) < 1e-6


def test_nilpotency_q_classical():
    model = q_classical(0.4, 1.0, n_dof=2)
    x0 = np.array([0.5, 1.5, -0.4, 2.2])
    assert nilpotency_defect(model_flow(model), x0, step=1e-4) < 1e-6


def test_nilpotency_negative_control():
    # rate field depending on the angle is not nilpotent
    def broken_flow(x, t):
        x = np.asarray(x, dtype=float)
        rate = x[0] + 0.4 * np.sin(x[1])
        return np.array([x[0], x[1] + t * rate])

    assert nilpotency_defect(broken_flow, np.array([1.0, 0.7]), step=1e-4) > 1e-2


# --- su(2) / su(1,1) closure ---------------------------------------------------------


def _grad_su2(x):
    q1, q2, p1, p2 = x
    return {
        0: np.array([-p2, p1, q2, -q1]),  # S1 = p1 q2 - q1 p2
        1: np.array([q2, q1, p2, p1]),  # S2 = p1 p2 + q1 q2
        2: np.array([2 * q1, -2 * q2, 2 * p1, -2 * p2]),  # S3
    }


def _bracket_analytic(da, db, signs=(1.0, 1.0)):
    s = np.asarray(signs)
    return float(np.sum(s * (da[2:] * db[:2] - da[:2] * db[2:])))


def test_su2_closure_standard_bracket():
    # with T3 = S3/2 the triple closes with uniform structure constants -2
    # in this module's bracket orientation
    rng = np.random.default_rng(33)
    for _ in range(50):
        x = rng.standard_normal(4)
        s = su2_constants(x)
        t3 = 0.5 * s[2]
        g = _grad_su2(x)
        b12 = _bracket_analytic(g[0], g[1])
        b23 = 0.5 * _bracket_analytic(g[1], g[2])
        b31 = 0.5 * _bracket_analytic(g[2], g[0])
        assert b12 == pytest.approx(-2.0 * t3, rel=1e-12, abs=1e-12)
        assert b23 == pytest.approx(-2.0 * s[0], rel=1e-12, abs=1e-12)
        assert b31 == pytest.approx(-2.0 * s[1], rel=1e-12, abs=1e-12)
        # finite differences agree with the analytic bracket
        fns = [
            lambda y: su2_constants(y)[0],
            lambda y: su2_constants(y)[1],
            lambda y: su2_constants(y)[2],
        ]
        fd12 = poisson_bracket_fd(fns[0], fns[1], x, step=1e-5)
        fd23 = 0.5 * poisson_bracket_fd(fns[1], fns[2], x, step=1e-5)
        fd31 = 0.5 * poisson_bracket_fd(fns[2], fns[0], x, step=1e-5)
        assert abs(fd12 - b12) < 1e-6
        assert abs(fd23 - b23) < 1e-6
        assert abs(fd31 - b31) < 1e-6


def test_su11_closure_sign_flipped_bracket():
    # flipping {q2, p2} -> -1 closes the same functions onto su(1,1):
    # the compact generator is replaced by the total norm and exactly one
    # structure constant changes sign
    rng = np.random.default_rng(34)
    signs = (1.0, -1.0)
    for _ in range(50):
        x = rng.standard_normal(4)
        s = su2_constants(x)
        q1, q2, p1, p2 = x
        norm_half = 0.5 * (p1 * p1 + q1 * q1 + p2 * p2 + q2 * q2)
        g = _grad_su2(x)
        gn = np.array([q1, q2, p1, p2])  # gradient of norm_half... times 1
        b12 = _bracket_analytic(g[0], g[1], signs)
        b2n = _bracket_analytic(g[1], 2.0 * gn, signs) * 0.5
        bn1 = _bracket_analytic(2.0 * gn, g[0], signs) * 0.5
        assert b12 == pytest.approx(2.0 * norm_half, rel=1e-12, abs=1e-12)
        assert b2n == pytest.approx(-2.0 * s[0], rel=1e-12, abs=1e-12)
        assert bn1 == pytest.approx(-2.0 * s[1], rel=1e-12, abs=1e-12)
        fd12 = poisson_bracket_fd(
            lambda y: su2_constants(y)[0], lambda y: su2_constants(y)[1], x,
            step=1e-5, signs=signs
        )
        assert abs(fd12 - b12) < 1e-6


# --- invariant tensors on R^4 ---------------------------------------------------------


def total_energy(x):
    return 0.5 * float(np.sum(np.asarray(x) ** 2))


def test_invariant_tensor_quadratic_hamiltonian():
    rng = np.random.default_rng(44)
    x = rng.standard_normal(4)
    theta, omega_f, defect = invariant_tensor_r4(total_energy, x, step=1e-4)
    q1, q2, p1, p2 = x
    np.testing.assert_allclose(theta, [-p1, -p2, q1, q2], atol=1e-9)
    want = np.zeros((4, 4))
    want[0, 2], want[2, 0] = 2.0, -2.0  # 2 dq1^dp1
    want[1, 3], want[3, 1] = 2.0, -2.0
    np.testing.assert_allclose(omega_f, want, atol=1e-8)
    assert defect < 1e-7


def test_invariant_tensor_all_four_invariants():
    rng = np.random.default_rng(45)
    for idx in range(4):
        f = lambda y, idx=idx: float(oscillator_invariants(y)[idx])
        for _ in range(5):
            x = rng.standard_normal(4)
            # quadratic invariants: stencils are truncation-free, so the
            # larger step just lowers the eps/h^2 rounding floor
            _, _, defect = invariant_tensor_r4(f, x, step=1e-3)
            assert defect < 1e-7, idx


def test_invariant_tensor_generic_invariant_function():
    def f(y):
        k = oscillator_invariants(y)
        return float(k[0] * k[3] + np.sin(k[2]) + 0.3 * k[1] ** 2)

    rng = np.random.default_rng(46)
    for _ in range(5):
        x = rng.standard_normal(4) * 0.8
        _, _, defect = invariant_tensor_r4(f, x, step=1e-4)
        assert defect < 1e-7


def test_invariant_tensor_negative_control():
    # explicit angle dependence breaks the invariance
    f = lambda y: float(y[0])  # plain q1
    _, _, defect = invariant_tensor_r4(f, np.array([0.7, -0.2, 0.4, 1.1]), step=1e-4)
    assert defect > 1e-3


def test_recoordinate_identity_case():
    rng = np.random.default_rng(47)
    x = rng.standard_normal(4)
    Q, P, defect = recoordinate(total_energy, x, step=1e-3)
    np.testing.assert_allclose(Q, x[:2], atol=1e-9)
    np.testing.assert_allclose(P, x[2:], atol=1e-9)
    assert defect < 1e-8


def test_recoordinate_squared_hamiltonian_chain_rule():
    f = lambda y: total_energy(y) ** 2
    rng = np.random.default_rng(48)
    x = rng.standard_normal(4)
    h = total_energy(x)
    Q, P, defect = recoordinate(f, x, step=1e-4)
    np.testing.assert_allclose(Q, 2.0 * h * x[:2], rtol=1e-6)
    np.testing.assert_allclose(P, 2.0 * h * x[2:], rtol=1e-6)
    assert defect < 1e-7


def test_recoordinate_new_hamiltonian_flow_invariant():
    # h_new = (Q^2 + P^2)/2 drifts less than 1e-7 along the RK4 oscillator flow
    f = lambda y: total_energy(y) ** 2

    def h_new(y):
        Q, P, _ = recoordinate(f, y, step=1e-4)
        return 0.5 * float(Q @ Q + P @ P)

    def gamma(y):
        q1, q2, p1, p2 = y
        return np.array([p1, p2, -q1, -q2])

    x = np.array([0.6, -0.3, 0.2, 0.5])
    ref = h_new(x)
    drift = 0.0
    for t in (1.0, 5.0, 10.0):
        xt = rk4(gamma, x, t, dt=2e-3)
        drift = max(drift, abs(h_new(xt) - ref))
    assert drift < 1e-7 * max(1.0, abs(ref))
