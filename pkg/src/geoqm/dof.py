"""Relabeling constructions that split one discrete spectrum into two labels.

A single oscillator-like spectrum indexed by n = 0, 1, 2, ... is relabeled
by two commuting integer labels through the pairing bijection

    n = n1 + (n1 + n2)(n1 + n2 + 1)/2,

giving two commuting diagonal constants of the motion for a manifestly
one-dimensional system.  The same trick generalizes: ladder operators can
be attached to any lower-bounded strictly increasing spectrum, and a single
diagonal operator with eigenvalues 1/(k+1)^2 generates every commuting
diagonal observable as an interpolated function of it.

All pairing arithmetic is exact integer arithmetic; the triangular root
uses an integer square root plus a correction loop (a floating-point sqrt
mislabels pairs near triangular-number boundaries).
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .geometry import HermitianOperator


def cantor_pair(n1: int, n2: int) -> int:
    """n = n1 + (n1+n2)(n1+n2+1)/2, exact in integers."""
    n1, n2 = int(n1), int(n2)
    if n1 < 0 or n2 < 0:
        raise ValueError("pairing labels must be non-negative")
    s = n1 + n2
    return n1 + (s * (s + 1)) // 2


def cantor_unpair(n: int) -> tuple:
    """Exact inverse of cantor_pair via the integer triangular root."""
    n = int(n)
    if n < 0:
        raise ValueError("index must be non-negative")
    s = (math.isqrt(8 * n + 1) - 1) // 2
    # guard against off-by-one at triangular boundaries
    while (s + 1) * (s + 2) // 2 <= n:
        s += 1
    while s * (s + 1) // 2 > n:
        s -= 1
    n1 = n - s * (s + 1) // 2
    return n1, s - n1


def unpair_array(ns) -> tuple:
    """Vectorized cantor_unpair on int64 arrays, exact after correction."""
    ns = np.asarray(ns, dtype=np.int64)
    if np.any(ns < 0):
        raise ValueError("indices must be non-negative")
    s = ((np.sqrt(8.0 * ns + 1.0) - 1.0) / 2.0).astype(np.int64)
    # float sqrt can land one off near triangular numbers; correct exactly
    while True:
        over = (s + 1) * (s + 2) // 2 <= ns
        under = s * (s + 1) // 2 > ns
        if not (over.any() or under.any()):
            break
        s = s + over.astype(np.int64) - under.astype(np.int64)
    n1 = ns - s * (s + 1) // 2
    return n1, s - n1


@dataclass(frozen=True)
class PairingTable:
    max_n: int
    forward: dict  # n -> (n1, n2)
    backward: dict  # (n1, n2) -> n

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "n1", "n2"])
            for n in range(self.max_n + 1):
                n1, n2 = self.forward[n]
                writer.writerow([n, n1, n2])


def pairing_table(max_n: int) -> PairingTable:
    forward = {}
    backward = {}
    for n in range(int(max_n) + 1):
        pair = cantor_unpair(n)
        forward[n] = pair
        backward[pair] = n
    return PairingTable(max_n=int(max_n), forward=forward, backward=backward)


def complete_truncation_order(D: int):
    """m such that D = m(m+1)/2, or None when the cut is mid-anti-diagonal."""
    m = (math.isqrt(8 * D + 1) - 1) // 2
    return m if m * (m + 1) // 2 == D else None


def is_complete_truncation(D: int) -> bool:
    return complete_truncation_order(D) is not None


@dataclass(frozen=True)
class SplitOperators:
    """Diagonal data of the two split labels and the reassembled Hamiltonian.

    Matrices are kept as diagonals (they commute exactly and materializing
    a 10^4-dimensional dense matrix buys nothing); use the *_matrix helpers
    for small-dimension dense views.
    """

    D: int
    hbar: float
    omega: float
    n1_diag: np.ndarray
    n2_diag: np.ndarray
    h_diag: np.ndarray

    def n1_matrix(self) -> np.ndarray:
        return np.diag(self.n1_diag.astype(float))

    def n2_matrix(self) -> np.ndarray:
        return np.diag(self.n2_diag.astype(float))

    def h_matrix(self) -> np.ndarray:
        return np.diag(self.h_diag)


def build_split_operators(D: int, hbar: float = 1.0, omega: float = 1.0) -> SplitOperators:
    """Split labels n1(k), n2(k) for k = 0..D-1 and the reassembled energies.

    The reassembled diagonal hbar*omega*(n1 + (n1+n2)(n1+n2+1)/2 + 1/2)
    equals hbar*omega*(k + 1/2) exactly, because the labels invert the
    pairing exactly and stay integer valued.
    """
    if D < 1:
        raise ValueError("dimension must be at least 1")
    if not is_complete_truncation(D):
        warnings.warn(
            f"D={D} cuts the label grid inside an anti-diagonal; "
            "degeneracy counts of the split labels are distorted",
            stacklevel=2,
        )
    n1, n2 = unpair_array(np.arange(D, dtype=np.int64))
    s = n1 + n2
    h = hbar * omega * (n1 + s * (s + 1) // 2 + 0.5)
    return SplitOperators(D=int(D), hbar=float(hbar), omega=float(omega),
                          n1_diag=n1, n2_diag=n2, h_diag=h)


def build_K(D: int) -> HermitianOperator:
    """Diagonal operator with strictly decreasing distinct eigenvalues 1/(k+1)^2.

    Every diagonal operator on the same basis is an interpolated function
    of it; see interpolate_diagonal.
    """
    if D < 1:
        raise ValueError("dimension must be at least 1")
    k = np.arange(D, dtype=float)
    return HermitianOperator.diagonal(1.0 / (k + 1.0) ** 2)


def k_nodes(D: int) -> np.ndarray:
    return 1.0 / (np.arange(D, dtype=float) + 1.0) ** 2


def newton_coefficients(nodes, values) -> np.ndarray:
    """Divided-difference coefficients of the Newton interpolation polynomial."""
    x = np.asarray(nodes, dtype=float)
    c = np.asarray(values, dtype=float).copy()
    n = x.size
    for j in range(1, n):
        c[j:] = (c[j:] - c[j - 1 : -1]) / (x[j:] - x[: n - j])
    return c


def newton_evaluate(nodes, coeffs, x):
    x = np.asarray(x, dtype=float)
    nodes = np.asarray(nodes, dtype=float)
    out = np.full_like(x, coeffs[-1])
    for j in range(coeffs.size - 2, -1, -1):
        out = out * (x - nodes[j]) + coeffs[j]
    return out


def interpolate_diagonal(D: int, target_diag):
    """Polynomial g (Newton form on the nodes 1/(k+1)^2) with g(K) = target.

    Returns a callable evaluating g.  Reliable reconstruction is limited to
    roughly D <= 12; beyond that the spacing of the nodes makes the divided
    differences ill-conditioned, which is documented rather than asserted.
    """
    nodes = k_nodes(D)
    coeffs = newton_coefficients(nodes, target_diag)
    return lambda x: newton_evaluate(nodes, coeffs, x)


@dataclass(frozen=True)
class LadderSystem:
    """Ladder operators attached to a sorted discrete spectrum.

    In the energy eigenbasis ordering, A[k-1, k] = sqrt(k), N = A^dag A is
    diag(0..D-1), and the spectrum is recovered as the table function
    energy_of applied to the level number.
    """

    energies: np.ndarray
    A: np.ndarray
    A_dag: np.ndarray
    N: np.ndarray

    @property
    def D(self) -> int:
        return self.energies.size

    @property
    def H(self) -> np.ndarray:
        return np.diag(self.energies)

    def energy_of(self, level: int) -> float:
        return float(self.energies[level])

    def table(self) -> dict:
        return {k: float(e) for k, e in enumerate(self.energies)}


def build_ladder(energies) -> LadderSystem:
    """Ladder construction for any strictly increasing finite spectrum."""
    e = np.asarray(energies, dtype=float)
    if e.ndim != 1 or e.size < 1:
        raise ValueError("need a flat non-empty list of energies")
    if e.size > 1 and not np.all(np.diff(e) > 0):
        raise ValueError("energies must be strictly increasing (ordering is ambiguous otherwise)")
    D = e.size
    a = np.diag(np.sqrt(np.arange(1, D, dtype=float)), k=1)
    for m in (e, a):
        m.flags.writeable = False
    return LadderSystem(energies=e, A=a, A_dag=a.T.copy(), N=a.T @ a)
