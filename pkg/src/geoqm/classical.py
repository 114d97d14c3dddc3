"""Action-angle dynamics, conformal flows, the Kepler chart, and invariant
tensors of the isotropic oscillator on R^4.

Orientation note: phase-space functions in this module use coordinates
x = (q_1..q_n, p_1..p_n).  The finite-difference Poisson bracket is
oriented as {f, g} = sum_k (df/dp_k dg/dq_k - df/dq_k dg/dp_k), which is
the orientation in which the action-angle chart below is canonical with
{phi_k, I_k} = +1 and angles advance as phi(t) = phi(0) + t dH/dI.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap_angle(phi):
    """Wrap to (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(phi, dtype=float), TWO_PI)


@dataclass(frozen=True)
class ActionAngleModel:
    """Integrable model given by a Hamiltonian of the actions alone.

    frequency, when supplied, is the analytic gradient dH/dI and is used
    preferentially; finite differences remain available for cross-checks.
    in_domain guards the action domain for difference stencils.
    """

    n_dof: int
    hamiltonian: Callable
    frequency: Optional[Callable] = None
    in_domain: Optional[Callable] = None
    name: str = ""

    def h(self, action) -> float:
        return float(self.hamiltonian(np.asarray(action, dtype=float)))


def frequencies_fd(model: ActionAngleModel, action, step: float = 1e-5) -> np.ndarray:
    """Central-difference frequencies, one-sided (with a warning) at a
    domain boundary closer than the step."""
    action = np.asarray(action, dtype=float)
    nu = np.empty_like(action)
    inside = model.in_domain or (lambda _: True)
    if not inside(action):
        raise ValueError("action vector outside the model domain")
    for k in range(action.size):
        h = step * max(1.0, abs(action[k]))
        up, dn = action.copy(), action.copy()
        up[k] += h
        dn[k] -= h
        if inside(up) and inside(dn):
            nu[k] = (model.h(up) - model.h(dn)) / (2.0 * h)
        else:
            warnings.warn(f"one-sided difference at action component {k}", stacklevel=2)
            if inside(up):
                nu[k] = (model.h(up) - model.h(action)) / h
            else:
                nu[k] = (model.h(action) - model.h(dn)) / h
    return nu


def frequencies(model: ActionAngleModel, action, step: float = 1e-5) -> np.ndarray:
    """Torus frequencies dH/dI_k, analytic when the model registers them."""
    action = np.asarray(action, dtype=float)
    if model.frequency is not None:
        return np.asarray(model.frequency(action), dtype=float)
    return frequencies_fd(model, action, step)


def aa_flow(model: ActionAngleModel, action, phi, t: float, wrap: bool = True) -> tuple:
    """Exact action-angle flow: actions frozen, angles linear in time.

    No integrator is involved, so actions are returned bitwise equal and
    the angle advance is exact to rounding.  Wrapping to (-pi, pi] happens
    once at the end; pass wrap=False when composing differentiable steps.
    """
    action = np.array(action, dtype=float)
    phi = np.asarray(phi, dtype=float)
    nu = frequencies(model, action)
    out = phi + t * nu
    return action, wrap_angle(out) if wrap else out


def harmonic_model(omega, n_dof: int) -> ActionAngleModel:
    """H(I) = sum_k omega_k I_k."""
    w = np.broadcast_to(np.asarray(omega, dtype=float), (n_dof,)).copy()
    return ActionAngleModel(
        n_dof=n_dof,
        hamiltonian=lambda action: float(w @ action),
        frequency=lambda action: w.copy(),
        name="harmonic",
    )


def q_classical(hbar: float, omega: float = 1.0, n_dof: int = 1) -> ActionAngleModel:
    """Deformed oscillator model H(I) = omega sum_k sinh(hbar I_k)/sinh(hbar).

    The torus frequency omega hbar cosh(hbar I_k)/sinh(hbar) is no longer a
    constant; it is a function of the action, constant on each torus.
    """
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    sh = np.sinh(hbar)

    return ActionAngleModel(
        n_dof=n_dof,
        hamiltonian=lambda action: float(omega * np.sum(np.sinh(hbar * action)) / sh),
        frequency=lambda action: omega * hbar * np.cosh(hbar * np.asarray(action)) / sh,
        name="q-classical",
    )


def kepler_model(m: float = 1.0, k: float = 1.0) -> ActionAngleModel:
    """Bound Kepler dynamics in action variables: H = -m k^2 / (2 (J1+J2+J3)^2)."""

    def ham(action):
        s = float(np.sum(action))
        return -m * k * k / (2.0 * s * s)

    def freq(action):
        s = float(np.sum(action))
        return np.full(3, m * k * k / s**3)

    return ActionAngleModel(
        n_dof=3,
        hamiltonian=ham,
        frequency=freq,
        in_domain=lambda action: float(np.sum(action)) > 0.0,
        name="kepler",
    )


def harmonic_chart(x, omega) -> tuple:
    """Canonical action-angle chart of the n-dimensional oscillator.

    I_k = (p_k^2 + omega_k^2 q_k^2) / (2 omega_k),  phi_k = atan2(p_k, omega_k q_k).
    {phi_k, I_k} = +1 in this module's bracket orientation.
    """
    x = np.asarray(x, dtype=float)
    n = x.size // 2
    q, p = x[:n], x[n:]
    w = np.broadcast_to(np.asarray(omega, dtype=float), (n,))
    if np.any(w <= 0):
        raise ValueError("frequencies must be positive")
    action = (p * p + w * w * q * q) / (2.0 * w)
    if np.any(action == 0.0):
        warnings.warn("angle undefined on the zero circle (I = 0)", stacklevel=2)
    phi = np.arctan2(p, w * q)
    return action, phi


def inverse_harmonic_chart(action, phi, omega) -> np.ndarray:
    action = np.asarray(action, dtype=float)
    phi = np.asarray(phi, dtype=float)
    w = np.broadcast_to(np.asarray(omega, dtype=float), action.shape)
    if np.any(action < 0):
        raise ValueError("actions must be non-negative")
    q = np.sqrt(2.0 * action / w) * np.cos(phi)
    p = np.sqrt(2.0 * action * w) * np.sin(phi)
    return np.concatenate([q, p])


def harmonic_action_printed(x, omega) -> np.ndarray:
    """Comparison variant I_k = (p_k^2 + omega_k q_k^2)/2 (frequency to the
    first power).  Kept only for side-by-side tables: it is not canonically
    conjugate to the angle for omega != 1."""
    x = np.asarray(x, dtype=float)
    n = x.size // 2
    q, p = x[:n], x[n:]
    w = np.broadcast_to(np.asarray(omega, dtype=float), (n,))
    return 0.5 * (p * p + w * q * q)


def poisson_bracket_fd(f, g, x, step: float = 1e-5, signs=None) -> float:
    """Finite-difference Poisson bracket of scalar functions on (q, p).

    {f, g} = sum_k s_k (df/dp_k dg/dq_k - df/dq_k dg/dp_k), s_k = +1 by
    default.  Passing signs with some -1 entries evaluates the bracket of
    the indefinite structures (e.g. {q_2, p_2} flipped).
    """
    x = np.asarray(x, dtype=float)
    n = x.size // 2
    s = np.ones(n) if signs is None else np.asarray(signs, dtype=float)

    def grad(fun):
        out = np.empty_like(x)
        for i in range(x.size):
            h = step * max(1.0, abs(x[i]))
            up, dn = x.copy(), x.copy()
            up[i] += h
            dn[i] -= h
            out[i] = (fun(up) - fun(dn)) / (2.0 * h)
        return out

    df, dg = grad(f), grad(g)
    return float(np.sum(s * (df[n:] * dg[:n] - df[:n] * dg[n:])))


@dataclass(frozen=True)
class KeplerState:
    """Bound-problem sample point in spherical coordinates and momenta."""

    r: float
    theta: float
    phi: float
    p_r: float
    p_theta: float
    p_phi: float
    m: float = 1.0
    k: float = 1.0

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("radius must be positive")
        if not 0.0 < self.theta < np.pi:
            raise ValueError("polar angle on the axis: coordinate singularity")
        if self.m <= 0 or self.k <= 0:
            raise ValueError("mass and coupling must be positive")


def kepler_energy(s: KeplerState) -> float:
    """Mechanical energy, evaluated directly from the state."""
    sin2 = np.sin(s.theta) ** 2
    kin = (s.p_r**2 + (s.p_theta**2 + s.p_phi**2 / sin2) / s.r**2) / (2.0 * s.m)
    return float(kin - s.k / s.r)


def kepler_actions_energy(J, m: float, k: float) -> float:
    """Energy of the action vector: -m k^2 / (2 (J1+J2+J3)^2)."""
    sj = float(np.sum(J))
    if sj <= 0:
        raise ValueError("total action must be positive")
    return -m * k * k / (2.0 * sj * sj)


@dataclass(frozen=True)
class KeplerChart:
    J: np.ndarray
    angles: np.ndarray
    energy: float
    frequency: float

    @property
    def frequencies(self) -> np.ndarray:
        """All three torus frequencies; equal by construction (one conformal
        factor for the closed problem)."""
        return np.full(3, self.frequency)


class CoordinateSingularityError(ValueError):
    """Angle formulas hit a coordinate singularity (circular or equatorial
    degeneration of the torus)."""


def _clamped_arcsin(val: float, tol: float = 1e-10) -> float:
    if val > 1.0:
        if val > 1.0 + tol:
            raise CoordinateSingularityError(f"arcsin argument {val} outside [-1, 1]")
        val = 1.0
    elif val < -1.0:
        if val < -1.0 - tol:
            raise CoordinateSingularityError(f"arcsin argument {val} outside [-1, 1]")
        val = -1.0
    return float(np.arcsin(val))


def _clamped_sqrt(val: float, scale: float, tol: float = 1e-10) -> float:
    if val < 0.0:
        if val < -tol * max(scale, 1.0):
            raise CoordinateSingularityError(f"negative radicand {val}")
        val = 0.0
    return float(np.sqrt(val))


def kepler_chart(s: KeplerState, with_angles: bool = True) -> KeplerChart:
    """Action-angle data of a bound Kepler state.

    Actions: with L = sqrt(p_theta^2 + p_phi^2/sin^2 theta),
        J3 = p_phi,  J2 = L - p_phi,  J1 = -L + m k / sqrt(-2 m E),
    so J1+J2+J3 = m k / sqrt(-2 m E) and the energy in action form is
    E = -m k^2 / (2 (J1+J2+J3)^2) with the single torus frequency
    nu = m k^2 / (J1+J2+J3)^3 shared by all three angles.

    The angle expressions are evaluated verbatim with arcsin arguments
    clamped within 1e-10 of [-1, 1]; no independent oracle backs them, and
    circular or equatorial tori raise CoordinateSingularityError.  Pass
    with_angles=False to skip them.
    """
    energy = kepler_energy(s)
    if energy >= 0.0:
        raise ValueError(f"state is unbound (E = {energy:.6g} >= 0)")
    m, k = s.m, s.k
    L = float(np.sqrt(s.p_theta**2 + s.p_phi**2 / np.sin(s.theta) ** 2))
    sj = m * k / np.sqrt(-2.0 * m * energy)
    J = np.array([sj - L, L - s.p_phi, s.p_phi])
    nu = m * k * k / sj**3

    angles = np.full(3, np.nan)
    if with_angles:
        l23 = J[1] + J[2]  # = L
        ecc2 = sj * sj - l23 * l23
        if ecc2 <= 0.0:
            raise CoordinateSingularityError("circular torus: J2 + J3 equals the total action")
        if l23 * l23 - J[2] * J[2] <= 0.0:
            raise CoordinateSingularityError("equatorial torus: |J3| equals J2 + J3")
        r = s.r
        rad = -(m * k * r) ** 2 + 2.0 * m * k * sj * sj * r - sj * sj * l23 * l23
        phi1 = -_clamped_sqrt(rad, (m * k * sj * sj) ** 2) / (sj * sj) + _clamped_arcsin(
            (m * k * r - sj * sj) / (sj * np.sqrt(ecc2))
        )
        phi2 = (
            phi1
            - _clamped_arcsin((m * k * r - l23 * l23) * sj / np.sqrt(ecc2))
            - _clamped_arcsin(l23 * np.cos(s.theta) / np.sqrt(l23 * l23 - J[2] ** 2))
        )
        phi3 = (
            phi2
            + _clamped_arcsin(J[2] / np.tan(s.theta) / np.sqrt(l23 * l23 - J[2] ** 2))
            + s.phi
        )
        angles = np.array([phi1, phi2, phi3])

    return KeplerChart(J=J, angles=angles, energy=energy, frequency=float(nu))


def conformal_flow(x0: float, p0: float, t: float, f) -> tuple:
    """Closed-form flow of xdot = p f(x^2+p^2), pdot = -x f(x^2+p^2).

    The radius is a constant of the motion, so the flow is the rigid
    rotation by theta = t f(x0^2 + p0^2):
        (x, p) -> (x cos theta + p sin theta, -x sin theta + p cos theta).
    Radius conservation is exact; there is no integrator error.
    """
    theta = t * float(f(x0 * x0 + p0 * p0))
    c, sn = np.cos(theta), np.sin(theta)
    return float(x0 * c + p0 * sn), float(-x0 * sn + p0 * c)


def nilpotency_defect(flow, x0, step: float = 1e-4, functions=None) -> float:
    """Max |L_Gamma (L_Gamma h)| over coordinate functions h.

    flow(x, t) must return the advanced point; the generator is probed by
    central differences of h along the flow.  For any model whose
    frequencies depend only on the actions the defect vanishes to O(step),
    since the second derivative along the motion of every action and angle
    coordinate is zero; rate fields depending on the angles break it.
    """
    x0 = np.asarray(x0, dtype=float)
    if functions is None:
        functions = [lambda x, i=i: float(x[i]) for i in range(x0.size)]

    def lie(h, x):
        return (h(flow(x, step)) - h(flow(x, -step))) / (2.0 * step)

    worst = 0.0
    for h in functions:
        second = (lie(h, flow(x0, step)) - lie(h, flow(x0, -step))) / (2.0 * step)
        worst = max(worst, abs(second))
    return worst


def model_flow(model: ActionAngleModel):
    """Flow callable on stacked coordinates (I_1..I_n, phi_1..phi_n),
    unwrapped for differentiability."""

    def flow(x, t):
        x = np.asarray(x, dtype=float)
        n = model.n_dof
        action, phi = aa_flow(model, x[:n], x[n:], t, wrap=False)
        return np.concatenate([action, phi])

    return flow


# ---------------------------------------------------------------------------
# invariant tensors of the isotropic oscillator on R^4, x = (q1, q2, p1, p2)

_T_MAT = np.array(
    [
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ]
)
_T_MAT.flags.writeable = False


def oscillator_invariants(x) -> np.ndarray:
    """The four independent constants of the isotropic oscillator flow:
    p1^2+q1^2, p2^2+q2^2, p1 q2 - q1 p2, p1 p2 + q1 q2."""
    q1, q2, p1, p2 = np.asarray(x, dtype=float)
    return np.array(
        [p1 * p1 + q1 * q1, p2 * p2 + q2 * q2, p1 * q2 - q1 * p2, p1 * p2 + q1 * q2]
    )


def su2_constants(x) -> np.ndarray:
    """p1 q2 - q1 p2, p1 p2 + q1 q2, (p1^2+q1^2) - (p2^2+q2^2)."""
    q1, q2, p1, p2 = np.asarray(x, dtype=float)
    return np.array(
        [p1 * q2 - q1 * p2, p1 * p2 + q1 * q2, (p1 * p1 + q1 * q1) - (p2 * p2 + q2 * q2)]
    )


def _gamma(x) -> np.ndarray:
    q1, q2, p1, p2 = x
    return np.array([p1, p2, -q1, -q2])


_GAMMA_JAC = np.zeros((4, 4))  # DG[a][b] = d_a Gamma^b
_GAMMA_JAC[2, 0] = 1.0
_GAMMA_JAC[3, 1] = 1.0
_GAMMA_JAC[0, 2] = -1.0
_GAMMA_JAC[1, 3] = -1.0
_GAMMA_JAC.flags.writeable = False


def _fd_grad(F, x, step):
    g = np.empty(4)
    for i in range(4):
        h = step * max(1.0, abs(x[i]))
        up, dn = x.copy(), x.copy()
        up[i] += h
        dn[i] -= h
        g[i] = (F(up) - F(dn)) / (2.0 * h)
    return g


def _fd_hessian(F, x, step):
    hes = np.empty((4, 4))
    f0 = F(x)
    hs = [step * max(1.0, abs(x[i])) for i in range(4)]
    for i in range(4):
        up, dn = x.copy(), x.copy()
        up[i] += hs[i]
        dn[i] -= hs[i]
        hes[i, i] = (F(up) - 2.0 * f0 + F(dn)) / hs[i] ** 2
    for i in range(4):
        for j in range(i + 1, 4):
            pp, pm, mp, mm = x.copy(), x.copy(), x.copy(), x.copy()
            pp[i] += hs[i]
            pp[j] += hs[j]
            pm[i] += hs[i]
            pm[j] -= hs[j]
            mp[i] -= hs[i]
            mp[j] += hs[j]
            mm[i] -= hs[i]
            mm[j] -= hs[j]
            hes[i, j] = hes[j, i] = (F(pp) - F(pm) - F(mp) + F(mm)) / (4.0 * hs[i] * hs[j])
    return hes


def invariant_tensor_r4(F, point, step: float = 1e-4) -> tuple:
    """One-form theta_F, two-form omega_F, and the invariance defect of F.

    theta_F pairs a vector X to dF(T X) for the invariant (1,1)-tensor T
    with T(d_q) = -d_p, T(d_p) = d_q, giving components
    (-dF/dp_1, -dF/dp_2, dF/dq_1, dF/dq_2).  omega_F is the antisymmetrized
    numeric Jacobian of theta_F, and the defect is the largest component of
    the Lie derivative of theta_F along the oscillator field
    Gamma = p d_q - q d_p, assembled from difference stencils.  The defect
    vanishes exactly when F is a function of the four oscillator invariants.
    """
    x = np.asarray(point, dtype=float)
    grad = _fd_grad(F, x, step)
    theta = _T_MAT.T @ grad
    hes = _fd_hessian(F, x, step)
    jac_theta = hes @ _T_MAT  # [a][b] = d_a theta_b
    omega_f = jac_theta - jac_theta.T
    lie = _gamma(x) @ jac_theta + _GAMMA_JAC @ theta
    return theta, omega_f, float(np.max(np.abs(lie)))


def recoordinate(F, point, step: float = 1e-4) -> tuple:
    """Derived chart Q_j = dF/dq_j, P_j = dF/dp_j and its rotation defect.

    For F a constant of the oscillator motion the pair rotates rigidly
    along the flow: L_Gamma Q_j = P_j and L_Gamma P_j = -Q_j; the returned
    defect is the largest violation of those two relations.
    """
    x = np.asarray(point, dtype=float)
    grad = _fd_grad(F, x, step)
    Q, P = grad[:2].copy(), grad[2:].copy()
    hes = _fd_hessian(F, x, step)
    lie_grad = _gamma(x) @ hes  # [b] = L_Gamma (d_b F)
    defect = max(float(np.max(np.abs(lie_grad[:2] - P))), float(np.max(np.abs(lie_grad[2:] + Q))))
    return Q, P, defect
