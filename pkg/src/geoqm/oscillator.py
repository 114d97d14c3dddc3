"""Truncated Fock-space ladder algebra and its f- and q-deformations.

The deformed ladder operators are A = a f(nhat), A^dag = f(nhat) a^dag for
a profile f evaluated on the occupation number.  The deformed number
operator N = A^dag A is diagonal with eigenvalues n f(n)^2.  The
q-deformation uses

    f(n) = sqrt(n_q / n),   n_q = sinh(n*hbar) / sinh(hbar),  q = e^hbar,

with f(0) = sqrt(hbar / sinh(hbar)) by continuity (the value never acts:
A kills the vacuum regardless).

Truncation boundary: identities involving a a^dag acquire an artifact in
the top basis state (already for f = 1 the commutator picks up -(D-1)
there), so commutator statements cover indices 0..D-2 only.  [A, nhat] = A
is exact on the whole truncation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import HermitianOperator


@dataclass(frozen=True)
class FockTruncation:
    """Ladder matrices on the first D number states."""

    D: int
    a: np.ndarray
    a_dag: np.ndarray
    n_op: np.ndarray


def fock(D: int) -> FockTruncation:
    """Truncated annihilation/creation/number matrices, a[k-1, k] = sqrt(k)."""
    if D < 2:
        raise ValueError("need at least two Fock states")
    a = np.diag(np.sqrt(np.arange(1, D, dtype=float)), k=1)
    n_op = a.T @ a
    for m in (a, n_op):
        m.flags.writeable = False
    return FockTruncation(D=int(D), a=a, a_dag=a.T.copy(), n_op=n_op)


@dataclass(frozen=True)
class DeformedOscillator:
    """Deformed ladder algebra A = a f(nhat) over a Fock truncation."""

    base: FockTruncation
    f_values: np.ndarray
    A: np.ndarray
    A_dag: np.ndarray
    N_op: np.ndarray

    @property
    def D(self) -> int:
        return self.base.D

    def n_eigenvalues(self) -> np.ndarray:
        """Closed-form spectrum n f(n)^2 of the deformed number operator."""
        n = np.arange(self.D, dtype=float)
        return n * self.f_values**2

    def commutator_diagonal_closed_form(self) -> np.ndarray:
        """(n+1) f(n+1)^2 - n f(n)^2 for interior indices n = 0..D-2."""
        n = np.arange(self.D - 1, dtype=float)
        f = self.f_values
        return (n + 1.0) * f[1:] ** 2 - n * f[:-1] ** 2


def deform(base: FockTruncation, f) -> DeformedOscillator:
    """Deform a Fock truncation with a profile f of the occupation number.

    f must be finite and nonzero on 1..D-1 (a vanishing profile would make
    the deformation non-invertible); f(0) only completes the table.
    """
    D = base.D
    fv = np.array([float(f(n)) for n in range(D)])
    if not np.all(np.isfinite(fv)):
        raise ValueError("deformation profile must be finite on 0..D-1")
    if np.any(fv[1:] == 0.0):
        raise ValueError("deformation profile must not vanish on 1..D-1")
    fn = np.diag(fv)
    A = base.a @ fn
    A_dag = fn @ base.a_dag
    N_op = A_dag @ A
    for m in (fv, A, A_dag, N_op):
        m.flags.writeable = False
    return DeformedOscillator(base=base, f_values=fv, A=A, A_dag=A_dag, N_op=N_op)


def q_profile(hbar: float, n: int) -> tuple:
    """(f_n, n_q) of the q-deformation at occupation n.

    n_q = sinh(n*hbar)/sinh(hbar); f_n = sqrt(n_q/n) for n >= 1 and the
    continuity value sqrt(hbar/sinh(hbar)) at n = 0.
    """
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    if n < 0:
        raise ValueError("occupation number must be non-negative")
    if n == 0:
        return float(np.sqrt(hbar / np.sinh(hbar))), 0.0
    nq = float(np.sinh(n * hbar) / np.sinh(hbar))
    return float(np.sqrt(nq / n)), nq


def inverse_number(Nq, hbar: float):
    """Analytic inverse of the q-deformed number map:
    (1/hbar) * asinh(Nq * sinh(hbar)) recovers n exactly."""
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    return np.arcsinh(np.asarray(Nq, dtype=float) * np.sinh(hbar)) / hbar


def q_deform(D: int, hbar: float) -> DeformedOscillator:
    """Convenience constructor for the q-deformed truncated oscillator."""
    return deform(fock(D), lambda n: q_profile(hbar, n)[0])


def hq_operator(D: int, hbar: float) -> HermitianOperator:
    """Hamiltonian of the q-deformed oscillator, diagonal with spectrum n + 1/2.

    H_q = (1/hbar) log(N sinh(hbar) + sqrt(N^2 sinh(hbar)^2 + 1)) + 1/2,
    evaluated on the deformed number spectrum.  The +1/2 sits outside the
    logarithm so that the spectrum is exactly n + 1/2 and [A, H_q] = A
    reproduces the undeformed dynamics in the deformed operator basis.
    """
    if D < 2:
        raise ValueError("need at least two Fock states")
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    osc = q_deform(D, hbar)
    nq = osc.n_eigenvalues()
    # log(x + sqrt(x^2 + 1)) = asinh(x), kept in asinh form so the small-hbar
    # limit does not lose precision to the log(1 + tiny) cancellation
    diag = np.arcsinh(nq * np.sinh(hbar)) / hbar + 0.5
    return HermitianOperator.diagonal(diag)


@dataclass(frozen=True)
class DeformedMetric:
    """Alternative Hilbert structure in which the deformed states are orthonormal.

    m_diag holds the metric weights m_n = prod_{j<=n} f(j)^{-2}; norms holds
    the deformed-state normalization constants c_n = prod_{j<=n} f(j), so the
    states |N_n> = c_n |n> satisfy <N_n, N_m>_M = delta_nm.  The pair
    (m_diag, norms) is the basis-label map between the two structures; it is
    defined on basis rays and is not extended linearly.
    """

    D: int
    m_diag: np.ndarray
    norms: np.ndarray

    def inner(self, psi, phi) -> complex:
        """<psi, phi>_M = sum_n m_n conj(psi_n) phi_n."""
        psi = np.asarray(psi, dtype=complex)
        phi = np.asarray(phi, dtype=complex)
        return complex(np.sum(self.m_diag * psi.conj() * phi))

    def gram_of_deformed_states(self) -> np.ndarray:
        """Gram matrix of the states c_n |n> under the deformed inner product."""
        basis = np.diag(self.norms.astype(complex))
        g = np.empty((self.D, self.D), dtype=complex)
        for i in range(self.D):
            for j in range(self.D):
                g[i, j] = self.inner(basis[i], basis[j])
        return g


def deformed_metric(osc: DeformedOscillator) -> DeformedMetric:
    f = osc.f_values
    inv2 = np.concatenate([[1.0], np.cumprod(f[1:] ** -2)])
    norms = np.concatenate([[1.0], np.cumprod(f[1:])])
    for m in (inv2, norms):
        m.flags.writeable = False
    return DeformedMetric(D=osc.D, m_diag=inv2, norms=norms)


def product_index(na: int, nb: int, D: int) -> int:
    """Fixed ordering of the two-mode number basis: (na, nb) -> na*D + nb."""
    return na * D + nb


def product_number_ops(D: int) -> tuple:
    """Diagonal matrices of nhat_a and nhat_b on the D^2 product space."""
    na = np.repeat(np.arange(D, dtype=float), D)
    nb = np.tile(np.arange(D, dtype=float), D)
    return np.diag(na), np.diag(nb)


def deform_2d(D: int, f, mode: str) -> HermitianOperator:
    """Two-mode deformed Hamiltonian on the D^2 product number basis.

    symmetric: both modes share the profile of the total quantum number
    n = na + nb, giving H = (1/2)[n f(n)^2 + (n+2) f(n+1)^2];
    broken: each mode is deformed through its own number,
    H = (1/2)[na f(na)^2 + nb f(nb)^2 + (na+1) f(na+1)^2 + (nb+1) f(nb+1)^2].

    Both commute with nhat_a + nhat_b; the broken form additionally
    commutes with each mode number separately.  The symmetric profile is
    evaluated up to f(2D-1).
    """
    if D < 2:
        raise ValueError("need at least two Fock states per mode")
    if mode not in ("symmetric", "broken"):
        raise ValueError(f"unknown mode {mode!r}")
    na = np.repeat(np.arange(D), D)
    nb = np.tile(np.arange(D), D)
    if mode == "symmetric":
        fv = np.array([float(f(n)) for n in range(2 * D)])
        n = na + nb
        diag = 0.5 * (n * fv[n] ** 2 + (n + 2) * fv[n + 1] ** 2)
    else:
        fv = np.array([float(f(n)) for n in range(D + 1)])
        diag = 0.5 * (
            na * fv[na] ** 2
            + nb * fv[nb] ** 2
            + (na + 1) * fv[na + 1] ** 2
            + (nb + 1) * fv[nb + 1] ** 2
        )
    return HermitianOperator.diagonal(diag)
