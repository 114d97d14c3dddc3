"""Bound Coulomb spectra generated by oscillator enumeration.

The planar bound problem maps to a two-mode oscillator through parabolic
coordinates x = (u^2 - v^2)/2, y = u v with the points (u, v) and
(-u, -v) identified; the identification keeps only even-parity oscillator
states, which forces the total quantum number n = n_u + n_v + 1 odd.  The
frequency and energy of each level are tied by the self-consistent pair

    k = n omega_n,        omega_n^2 = 2 |E_n| / m,

so E_n = -m k^2 / (2 n^2).  In three dimensions the mapped system is a
pair of planar oscillators carrying equal quanta (the diagonal
representations of the rotational/Runge-Lenz symmetry algebra), and the
level count comes from enumerating both factors.

No differential equation is solved anywhere; the module is an algebraic
and combinatorial spectral mapper.
"""

from __future__ import annotations

import csv
import io as _io
from dataclasses import dataclass


def parabolic_map(u: float, v: float) -> tuple:
    """(u, v) -> (x, y) = ((u^2 - v^2)/2, u v); two-to-one under (u,v) -> (-u,-v)."""
    return 0.5 * (u * u - v * v), u * v


def _degeneracy_2d(n: int) -> int:
    """Count planar oscillator states with n_u + n_v = n - 1 surviving the
    parity identification; exact enumeration, no formula shortcut."""
    count = 0
    for n_u in range(n):
        n_v = (n - 1) - n_u
        if (n_u + n_v) % 2 == 0:  # psi(-u,-v) = psi(u,v)
            count += 1
    return count


def _degeneracy_3d(n: int) -> int:
    """Count pairs of planar-oscillator states carrying equal quanta
    j = (n-1)/2 in each factor; a planar level j holds j+1 states."""
    j = (n - 1) // 2
    count = 0
    for split_mu in range(j + 1):  # quanta split between the two modes of factor mu
        for split_nu in range(j + 1):
            count += 1
    return count


@dataclass(frozen=True)
class CoulombLevel:
    n: int
    energy: float
    degeneracy: int
    omega: float


@dataclass(frozen=True)
class CoulombSpectrum:
    dimension: int
    k: float
    m: float
    levels: tuple

    def to_csv(self, path=None, precision: int = 12):
        """Write levels as CSV (n, energy, degeneracy, omega); returns the
        text when no path is given."""
        buf = _io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "energy", "degeneracy", "omega"])
        for lv in self.levels:
            writer.writerow(
                [lv.n, format(lv.energy, f".{precision}g"), lv.degeneracy,
                 format(lv.omega, f".{precision}g")]
            )
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        return text


def coulomb_spectrum(dimension: int, k: float = 1.0, m: float = 1.0,
                     n_levels: int = 8) -> CoulombSpectrum:
    """First n_levels bound levels with degeneracies by exact enumeration.

    Level index N = 1, 2, ... carries the odd oscillator number n = 2N - 1;
    degeneracies run 1, 3, 5, ... in the plane and 1, 4, 9, ... in space.
    Energies scale as -1/n^2 with the absolute constant fixed by the
    consistency pair k = n omega, omega^2 = 2|E|/m.
    """
    if dimension not in (2, 3):
        raise ValueError("dimension must be 2 or 3")
    if k <= 0 or m <= 0:
        raise ValueError("coupling and mass must be positive")
    if n_levels < 1:
        raise ValueError("need at least one level")
    levels = []
    for idx in range(1, n_levels + 1):
        n = 2 * idx - 1
        omega = k / n
        energy = -0.5 * m * omega * omega
        deg = _degeneracy_2d(n) if dimension == 2 else _degeneracy_3d(n)
        levels.append(CoulombLevel(n=n, energy=energy, degeneracy=deg, omega=omega))
    return CoulombSpectrum(dimension=dimension, k=float(k), m=float(m), levels=tuple(levels))


def enumerate_2d_states(n: int) -> list:
    """The surviving (n_u, n_v) pairs at level n; all have even total parity."""
    return [
        (n_u, n - 1 - n_u)
        for n_u in range(n)
        if (n_u + (n - 1 - n_u)) % 2 == 0
    ]
