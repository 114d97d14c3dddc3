"""Shared test oracles: an RK4 integrator and a bound Kepler state sampler."""

import numpy as np

from geoqm.classical import KeplerState, kepler_energy


def rk4(field, x0, t, dt):
    """Classic fixed-step RK4 for dx/dt = field(x); independent of any
    closed-form flow it is used to check."""
    x = np.array(x0, dtype=float)
    n_steps = int(round(t / dt))
    h = t / n_steps
    for _ in range(n_steps):
        k1 = field(x)
        k2 = field(x + 0.5 * h * k1)
        k3 = field(x + 0.5 * h * k2)
        k4 = field(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return x


def sample_bound_kepler_states(count, seed, vary_mk=False):
    """Seeded bound states with safely negative energy and a nondegenerate
    angular-momentum configuration."""
    rng = np.random.default_rng(seed)
    states = []
    while len(states) < count:
        m = float(rng.uniform(0.5, 2.0)) if vary_mk else 1.0
        k = float(rng.uniform(0.5, 2.0)) if vary_mk else 1.0
        s = KeplerState(
            r=float(rng.uniform(0.3, 3.0)),
            theta=float(rng.uniform(0.4, np.pi - 0.4)),
            phi=float(rng.uniform(-np.pi, np.pi)),
            p_r=float(rng.normal(0.0, 0.3)),
            p_theta=float(rng.normal(0.0, 0.4)),
            p_phi=float(rng.normal(0.1, 0.4)),
            m=m,
            k=k,
        )
        if kepler_energy(s) < -0.05 and abs(s.p_phi) > 1e-3:
            states.append(s)
    return states
