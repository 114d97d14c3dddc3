"""Alternative Hamiltonian descriptions of linear dynamics.

A real matrix A generates a linear Hamiltonian vector field exactly when it
splits as A = Lambda H with Lambda antisymmetric (the Poisson structure) and
H symmetric (the quadratic Hamiltonian).  The factorization is never unique:
under an invertible T, Lambda transforms contravariantly and H covariantly,

    Lambda_T = T Lambda T^t,   H_T = T^-t H T^-1,   Lambda_T H_T = T A T^-1,

so the symmetry group of A sweeps out a family of alternative descriptions.
All odd power traces of a factorizable A vanish, which is the cheap
obstruction witness used in diagnostics.

factorize() solves the bilinear problem by alternating linear least squares
over the antisymmetric/symmetric parametrizations with seeded restarts; the
family found is reported as a particular solution plus a basis of the null
space of the linearization at that solution.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

LAMBDA_CAP = 10.0


@dataclass(frozen=True)
class Factorization:
    A: np.ndarray
    Lambda: np.ndarray
    H: np.ndarray
    residual: float

    def rescaled(self, c: float) -> "Factorization":
        """Scale gauge: (Lambda, H) -> (c Lambda, H/c) describes the same A."""
        if c == 0:
            raise ValueError("rescale factor must be nonzero")
        return Factorization(self.A, c * self.Lambda, self.H / c, self.residual)


@dataclass
class FactorizationResult:
    solutions: list
    family_dimension: int
    null_basis: list  # list of (dLambda, dH) direction pairs
    diagnostics: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.solutions)


def _antisym_basis(d):
    basis = []
    for i in range(d):
        for j in range(i + 1, d):
            b = np.zeros((d, d))
            b[i, j] = 1.0
            b[j, i] = -1.0
            basis.append(b)
    return basis


def _sym_basis(d):
    basis = []
    for i in range(d):
        for j in range(i, d):
            b = np.zeros((d, d))
            b[i, j] = 1.0
            b[j, i] = 1.0
            basis.append(b)
    return basis


def _solve_factor(fixed, basis, target, side):
    """Least-squares coefficients c minimizing ||target - sum c_k B_k fixed||
    (side="left") or ||target - fixed sum c_k B_k|| (side="right")."""
    cols = []
    for b in basis:
        prod = b @ fixed if side == "left" else fixed @ b
        cols.append(prod.ravel())
    m = np.array(cols).T
    c, *_ = np.linalg.lstsq(m, target.ravel(), rcond=None)
    out = sum(ci * bi for ci, bi in zip(c, basis))
    return out


def compatible_poisson_directions(A, rel_tol: float = 1e-10) -> list:
    """Antisymmetric basis of the linear compatibility constraint
    A Lambda + Lambda A^t = 0.

    A factors as Lambda H with symmetric H exactly when Lambda solves this
    constraint (and A lies in the range of Lambda), so the returned span is
    where every antisymmetric factor of A lives.
    """
    A = np.asarray(A, dtype=float)
    d = A.shape[0]
    anti = _antisym_basis(d)
    scale = np.linalg.norm(A) or 1.0
    an = A / scale
    m = np.array([(an @ b + b @ an.T).ravel() for b in anti]).T
    _, svals, vt = np.linalg.svd(m)
    rank = int(np.sum(svals > rel_tol * (svals[0] if svals.size else 1.0)))
    return [sum(c * b for c, b in zip(row, anti)) for row in vt[rank:]]


def factorize(A, tol: float = 1e-10, restarts: int = 20, iters: int = 50,
              seed: int = 0) -> FactorizationResult:
    """Search for antisymmetric/symmetric factor pairs of A.

    Alternating linear least squares with seeded restarts.  Each restart
    starts from a random point of the antisymmetric compatibility span
    A Lambda + Lambda A^t = 0 (blind random starts stall in local minima of
    the bilinear residual from dimension 6 up), then alternates exact
    least-squares solves for H given Lambda and Lambda given H.  Converged
    pairs with Frobenius residual below tol are deduplicated up to the
    scale gauge and returned sorted by residual (ties by restart index, so
    the outcome is deterministic for a fixed seed).  An empty solution list
    carries diagnostics: the odd power traces, whose non-vanishing
    certifies that no factorization exists.
    """
    A = np.asarray(A, dtype=float)
    d = A.shape[0]
    if A.shape != (d, d):
        raise ValueError("A must be square")
    rng = np.random.default_rng(seed)
    anti = _antisym_basis(d)
    sym = _sym_basis(d)
    scale = np.linalg.norm(A) or 1.0
    directions = compatible_poisson_directions(A)

    converged = []
    for restart in range(restarts):
        if directions:
            coeffs = rng.standard_normal(len(directions))
            lam = sum(c * b for c, b in zip(coeffs, directions))
        else:
            m = rng.standard_normal((d, d))
            lam = m - m.T
        nrm = np.linalg.norm(lam)
        if nrm == 0.0:
            continue
        lam = lam * (scale / nrm)
        h = None
        res = np.inf
        for _ in range(iters):
            h = _solve_factor(lam, sym, A, side="right")
            lam = _solve_factor(h, anti, A, side="left")
            new_res = np.linalg.norm(A - lam @ h)
            if abs(res - new_res) <= 1e-15 * scale:
                res = new_res
                break
            res = new_res
        if res < tol * max(1.0, scale):
            converged.append((res, restart, lam, h))

    solutions = []
    for res, _, lam, h in sorted(converged, key=lambda t: (t[0], t[1])):
        nrm = np.linalg.norm(lam)
        if nrm == 0:
            continue
        lam_n = lam / nrm
        h_n = h * nrm
        # orient the gauge so duplicates from different restarts coincide
        idx = np.unravel_index(np.argmax(np.abs(lam_n)), lam_n.shape)
        if lam_n[idx] < 0:
            lam_n, h_n = -lam_n, -h_n
        if not any(
            np.linalg.norm(lam_n - s.Lambda) < 1e-6 and np.linalg.norm(h_n - s.H) < 1e-6 * scale
            for s in solutions
        ):
            solutions.append(Factorization(A=A, Lambda=lam_n, H=h_n,
                                           residual=float(np.linalg.norm(A - lam_n @ h_n))))

    diagnostics = {"odd_traces": odd_traces(A, 3)}
    if not solutions:
        return FactorizationResult(solutions=[], family_dimension=0, null_basis=[],
                                   diagnostics=diagnostics)

    best = solutions[0]
    # linearize (dL, dH) -> dL H + L dH at the best solution
    cols = [(b @ best.H).ravel() for b in anti] + [(best.Lambda @ b).ravel() for b in sym]
    jac = np.array(cols).T
    _, svals, vt = np.linalg.svd(jac)
    rank = int(np.sum(svals > 1e-9 * (svals[0] if svals.size else 1.0)))
    null = vt[rank:]
    null_basis = []
    na = len(anti)
    for row in null:
        dl = sum(c * b for c, b in zip(row[:na], anti))
        dh = sum(c * b for c, b in zip(row[na:], sym))
        null_basis.append((dl, dh))
    return FactorizationResult(solutions=solutions, family_dimension=len(null_basis),
                               null_basis=null_basis, diagnostics=diagnostics)


def transform(Lambda, H, T) -> tuple:
    """Push a factorization through an invertible linear change of frame.

    Returns (T Lambda T^t, T^-t H T^-1); their product is T (Lambda H) T^-1.
    """
    Lambda = np.asarray(Lambda, dtype=float)
    H = np.asarray(H, dtype=float)
    T = np.asarray(T, dtype=float)
    cond = np.linalg.cond(T)
    if not np.isfinite(cond):
        raise ValueError("transformation matrix is singular")
    lam_t = T @ Lambda @ T.T
    t_inv = np.linalg.inv(T)
    h_t = t_inv.T @ H @ t_inv
    return lam_t, h_t


def deform_poisson(Lambda, A, lam: float, check_tol: float = 1e-8) -> np.ndarray:
    """Conjugate the Poisson factor by exp(lam A^2) on the left and
    exp(-lam (A^t)^2) on the right.

    When A = Lambda H for symmetric H (equivalently A Lambda = -Lambda A^t,
    which is what is checked), the result is antisymmetric and
    Lambda_lam^-1 A stays symmetric, so every lam yields a Hamiltonian
    description of the same A.  On precondition violation the output loses
    those guarantees; a warning flag is raised instead of an exception.
    lam is capped at |lam| <= 10 to bound the exponential norm growth.
    """
    Lambda = np.asarray(Lambda, dtype=float)
    A = np.asarray(A, dtype=float)
    if abs(lam) > LAMBDA_CAP:
        raise ValueError(f"|lam| capped at {LAMBDA_CAP} to keep exp(lam A^2) bounded")
    scale = max(np.linalg.norm(A) * np.linalg.norm(Lambda), 1e-300)
    defect = np.linalg.norm(A @ Lambda + Lambda @ A.T) / scale
    if defect > check_tol:
        warnings.warn(
            f"A Lambda + Lambda A^t defect {defect:.2e}: A is not Lambda-factorizable, "
            "antisymmetry of the deformed tensor is not guaranteed",
            stacklevel=2,
        )
    a2 = A @ A
    growth = abs(lam) * np.linalg.norm(a2, 2)
    if growth > 14.0:
        # e^(2*growth) amplifies rounding in the two-sided product; beyond
        # this the cancellation between the exponentials is meaningless
        warnings.warn(
            f"lam * ||A^2|| = {growth:.3g}; exponential conditioning dominates, "
            "rescale A before deforming",
            stacklevel=2,
        )
    return expm(lam * a2) @ Lambda @ expm(-lam * a2.T)


def odd_traces(A, k_max: int) -> list:
    """Tr A^(2k+1) for k = 0..k_max; all vanish when A factors as Lambda H."""
    A = np.asarray(A, dtype=float)
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    out = []
    power = A.copy()
    a2 = A @ A
    for _ in range(k_max + 1):
        out.append(float(np.trace(power)))
        power = power @ a2
    return out


@dataclass(frozen=True)
class TwoLevelFamily:
    """Coefficient family of Hamiltonian descriptions of the two-level dynamics.

    On R^4 with coordinates (q1, q2, p1, p2):
        h     = a1^2 (p1^2 + q1^2) + a2^2 (p2^2 + q2^2)
        g     = a1^2 (dp1^2 + dq1^2) + a2^2 (dp2^2 + dq2^2)
        omega = a1^2 dp1^dq1 + a2^2 dp2^dq2
    The Hamiltonian vector field omega^-1(dh) is the same for every choice
    of the coefficients.
    """

    a1: float
    a2: float
    h_matrix: np.ndarray  # h(x) = x^t M x
    g: np.ndarray
    omega: np.ndarray

    def h(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.h_matrix @ x)

    def vector_field(self, x) -> np.ndarray:
        """omega^-1 applied to dh at x; equals (2p, -2q) for all (a1, a2)."""
        x = np.asarray(x, dtype=float)
        return np.linalg.solve(self.omega, 2.0 * self.h_matrix @ x)


def two_level_family(a1: float, a2: float) -> TwoLevelFamily:
    if a1 == 0 or a2 == 0:
        raise ValueError("zero coefficient degenerates the structures")
    w1, w2 = a1 * a1, a2 * a2
    h = np.diag([w1, w2, w1, w2]).astype(float)
    g = h.copy()
    omega = np.zeros((4, 4))
    # omega(d_q1, d_p1) = dp1^dq1 (d_q1, d_p1) = -a1^2, coordinates (q1,q2,p1,p2)
    omega[0, 2], omega[2, 0] = -w1, w1
    omega[1, 3], omega[3, 1] = -w2, w2
    for m in (h, g, omega):
        m.flags.writeable = False
    return TwoLevelFamily(a1=float(a1), a2=float(a2), h_matrix=h, g=g, omega=omega)
