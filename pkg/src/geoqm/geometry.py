"""Kahler geometry of a finite-dimensional quantum state space.

A complex Hilbert space C^n is treated as the real vector space R^{2n}
with coordinates ordered (q_1..q_n, p_1..p_n) and z_k = q_k + i p_k.
The constant tensors on this space form a Kahler triple:

    J     multiplication by i, block form [[0, -I], [I, 0]]
    g     the Euclidean metric (identity matrix)
    omega the symplectic form, block form [[0, -I], [I, 0]]

Sign convention: omega is oriented as sum_k dp_k ^ dq_k, which is the
unique orientation for which g(X, Y) = omega(JX, Y) holds with J the
realification of multiplication by +i, and for which the contravariant
Poisson tensor is literally Omega = omega^{-1} = [[0, I], [-I, 0]],
i.e. {q_k, p_k} = +1.  With f_A = (1/2)<z, Az> this normalization makes
the three brackets on quadratic functions close on operators with no
stray factors:

    {f_A, f_B}_g     = f_{AB+BA}
    {f_A, f_B}_omega = f_{(AB-BA)/i}      (so {f_s1, f_s2} = 2 f_s3)
    f_A * f_B        = f_{2AB}            (non-local star product)

hbar = 1 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _as_matrix(op):
    """Accept a HermitianOperator, DualElement or bare array."""
    if isinstance(op, (HermitianOperator, DualElement)):
        return op.matrix
    return np.asarray(op, dtype=complex)


class HermitianOperator:
    """Dense complex square matrix, checked Hermitian on construction.

    Violating inputs are rejected rather than symmetrized, so that a
    caller passing a buggy matrix hears about it immediately.
    """

    def __init__(self, matrix, tol: float = HERMITICITY_TOL):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] < 1:
            raise ValueError("operator dimension must be at least 1")
        defect = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if defect > tol:
            raise ValueError(f"matrix is not Hermitian: max |A - A^dag| = {defect:.3e}")
        m.flags.writeable = False
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "HermitianOperator":
        return cls(np.eye(dim, dtype=complex))

    @classmethod
    def diagonal(cls, values) -> "HermitianOperator":
        return cls(np.diag(np.asarray(values, dtype=float)).astype(complex))

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


class RealPoint:
    """Point of the realified space, coordinates (q_1..q_n, p_1..p_n)."""

    def __init__(self, coords):
        c = np.array(coords, dtype=float)
        if c.ndim != 1 or c.size % 2 != 0 or c.size == 0:
            raise ValueError("coordinates must be a flat vector of even length 2n")
        c.flags.writeable = False
        self._coords = c

    @classmethod
    def from_complex(cls, z) -> "RealPoint":
        z = np.asarray(z, dtype=complex).ravel()
        return cls(np.concatenate([z.real, z.imag]))

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    @property
    def n(self) -> int:
        return self._coords.size // 2

    @property
    def q(self) -> np.ndarray:
        return self._coords[: self.n]

    @property
    def p(self) -> np.ndarray:
        return self._coords[self.n :]

    def to_complex(self) -> np.ndarray:
        return self.q + 1j * self.p

    def norm_squared(self) -> float:
        return float(self._coords @ self._coords)

    def __repr__(self):
        return f"RealPoint(n={self.n})"


@dataclass(frozen=True)
class KahlerTriple:
    """Constant Kahler tensors (J, g, omega) and contravariant duals (G, Omega)."""

    n: int
    J: np.ndarray
    g: np.ndarray
    omega: np.ndarray
    G: np.ndarray
    Omega: np.ndarray


def standard_kahler(n: int) -> KahlerTriple:
    """Kahler triple of C^n realified, in (q, p) block coordinates.

    J and omega share the block form [[0, -I], [I, 0]]; g = G = identity;
    Omega = omega^{-1} = [[0, I], [-I, 0]] is the Poisson tensor with
    {q_k, p_k} = +1.  See the module docstring for the sign convention.
    """
    if n < 1:
        raise ValueError("complex dimension must be at least 1")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    J = np.block([[zero, -eye], [eye, zero]])
    g = np.eye(2 * n)
    omega = np.block([[zero, -eye], [eye, zero]])
    G = np.eye(2 * n)
    Omega = np.block([[zero, eye], [-eye, zero]])
    for t in (J, g, omega, G, Omega):
        t.flags.writeable = False
    return KahlerTriple(n=n, J=J, g=g, omega=omega, G=G, Omega=Omega)


class QuadraticObservable:
    """Quadratic function f_A(psi) = (1/2) <z, A z> on the realified space.

    For Hermitian A the value is real and calling the observable returns a
    float; for a general complex matrix (as produced by the star product)
    the value is complex.
    """

    def __init__(self, matrix):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator of a quadratic observable must be square")
        m.flags.writeable = False
        self._matrix = m
        self._hermitian = bool(np.max(np.abs(m - m.conj().T)) <= HERMITICITY_TOL)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def is_hermitian(self) -> bool:
        return self._hermitian

    def __call__(self, psi: RealPoint):
        z = psi.to_complex()
        val = 0.5 * np.vdot(z, self._matrix @ z)
        return float(val.real) if self._hermitian else complex(val)


def quad_value(A, psi: RealPoint) -> float:
    """f_A(psi) = (1/2) <psi, A psi>, real for Hermitian A."""
    z = psi.to_complex()
    return float((0.5 * np.vdot(z, _as_matrix(A) @ z)).real)


def expectation_value(A, psi: RealPoint) -> float:
    """e_A(psi) = <psi, A psi> / <psi, psi>; phase and scale invariant."""
    z = psi.to_complex()
    nrm = np.vdot(z, z).real
    if nrm == 0.0:
        raise ValueError("expectation value undefined at the zero vector")
    return float((np.vdot(z, _as_matrix(A) @ z)).real / nrm)


def grad_quad(A, psi: RealPoint) -> np.ndarray:
    """Euclidean gradient of f_A at psi: (Re(Az), Im(Az)) in (q, p) order."""
    w = _as_matrix(A) @ psi.to_complex()
    return np.concatenate([w.real, w.imag])


BRACKET_KINDS = ("riemann", "poisson", "star")


def bracket(A, B, kind: str) -> QuadraticObservable:
    """Bracket of two quadratic observables, returned as an observable.

    riemann -> operator AB + BA   (Jordan side, {f_A, f_B}_g)
    poisson -> operator (AB-BA)/i (Lie side, {f_A, f_B}_omega, Hermitian)
    star    -> operator 2AB       (f_A * f_B, complex valued in general)

    Pointwise these agree with the tensor contractions G(df_A, df_B),
    Omega(df_A, df_B) and their complex combination.
    """
    a, b = _as_matrix(A), _as_matrix(B)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if kind == "riemann":
        return QuadraticObservable(a @ b + b @ a)
    if kind == "poisson":
        return QuadraticObservable((a @ b - b @ a) / 1j)
    if kind == "star":
        return QuadraticObservable(2.0 * (a @ b))
    raise ValueError(f"unknown bracket kind {kind!r}, expected one of {BRACKET_KINDS}")


def bracket_contraction(A, B, psi: RealPoint, triple: KahlerTriple | None = None) -> complex:
    """G(df_A, df_B) + i Omega(df_A, df_B) at psi, from the constant tensors.

    Independent tensor-contraction route for the operator-built brackets;
    the two must agree at every state.
    """
    if triple is None:
        triple = standard_kahler(psi.n)
    da, db = grad_quad(A, psi), grad_quad(B, psi)
    return complex(da @ triple.G @ db + 1j * (da @ triple.Omega @ db))


def hs_inner(A, B) -> float:
    """Hilbert-Schmidt pairing <A, B> = (1/2) Tr(AB) on Hermitian matrices."""
    return 0.5 * float(np.trace(_as_matrix(A) @ _as_matrix(B)).real)


def lie_product(A, B) -> np.ndarray:
    """[A, B] = (AB - BA)/i, Hermitian for Hermitian inputs (hbar = 1)."""
    a, b = _as_matrix(A), _as_matrix(B)
    return (a @ b - b @ a) / 1j


def jordan_product(A, B) -> np.ndarray:
    """[A, B]_+ = AB + BA."""
    a, b = _as_matrix(A), _as_matrix(B)
    return a @ b + b @ a


def fd_gradient(f, x: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Central finite-difference gradient with magnitude-scaled steps."""
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for i in range(x.size):
        h = step * max(1.0, abs(x[i]))
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        grad[i] = (f(xp) - f(xm)) / (2.0 * h)
    return grad


def killing_defect(f, triple: KahlerTriple, samples, step: float = 1e-4) -> float:
    """Max Lie-derivative defect of the metric along the Hamiltonian field of f.

    The field X_f = Omega(df) is assembled from finite differences of the
    scalar f; the defect at a sample is the largest entry of the symmetrized
    Jacobian d_i X_j + d_j X_i, which is (L_{X_f} g)_{ij} for the constant
    Euclidean metric.  The defect vanishes (to O(step^2)) exactly when f is
    the quadratic function of a Hermitian operator; it is reported, never
    raised on.
    """
    Omega = triple.Omega

    def field(x):
        return Omega @ fd_gradient(lambda y: f(RealPoint(y)), x, step)

    worst = 0.0
    for psi in samples:
        x = np.asarray(psi.coords, dtype=float)
        d = x.size
        jac = np.empty((d, d))
        for i in range(d):
            h = step * max(1.0, abs(x[i]))
            xp, xm = x.copy(), x.copy()
            xp[i] += h
            xm[i] -= h
            jac[i, :] = (field(xp) - field(xm)) / (2.0 * h)
        defect = np.max(np.abs(jac + jac.T))
        worst = max(worst, float(defect))
    return worst


@dataclass(frozen=True)
class CriticalPoint:
    value: float
    state: RealPoint
    multiplicity: int


@dataclass(frozen=True)
class SpectrumResult:
    points: tuple
    fully_converged: bool
    failed_trials: int

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points])


def _descend_to_eigenvector(a, z, tol, max_iter, rng):
    """Projected gradient descent (Barzilai-Borwein steps, nonmonotone
    safeguard) of ||A z - e_A z||^2 on the unit sphere.

    The objective is evaluated from the residual vector, which stays
    cancellation-free arbitrarily close to the minimum; every local minimum
    is an eigenvector.  Returns (z, converged).
    """

    def stats(z):
        az = a @ z
        e1 = np.vdot(z, az).real
        resid = az - e1 * z
        return float(np.vdot(resid, resid).real), e1, resid, az

    scale = float(np.linalg.norm(a, ord="fro")) or 1.0
    eta = 0.25 / scale**2
    obj, e1, resid, az = stats(z)
    recent = [obj]
    prev_z = prev_grad = None
    for _ in range(max_iter):
        if 2.0 * np.linalg.norm(resid) < tol:
            return z, True
        aaz = a @ az
        e2 = np.vdot(z, aaz).real
        grad = 2.0 * ((aaz - e2 * z) - 2.0 * e1 * resid)
        gn = np.vdot(grad, grad).real
        if gn == 0.0:
            # saddle of the objective with nonzero residual: kick off it
            z = z + 1e-8 * (rng.standard_normal(z.size) + 1j * rng.standard_normal(z.size))
            z /= np.linalg.norm(z)
            obj, e1, resid, az = stats(z)
            continue
        if prev_z is not None:
            s = z - prev_z
            y = grad - prev_grad
            sy = np.vdot(s, y).real
            if sy > 0:
                eta = np.vdot(s, s).real / sy
        eta = float(np.clip(eta, 1e-8 / scale**2, 1e8 / scale**2))
        cand = z
        accepted = False
        bound = max(recent)
        for _ in range(60):
            cand = z - eta * grad
            cand /= np.linalg.norm(cand)
            cobj = stats(cand)[0]
            if cobj <= bound - 1e-6 * eta * gn or cobj < obj:
                accepted = True
                break
            eta *= 0.5
        if not accepted:
            break
        prev_z, prev_grad = z, grad
        z = cand
        obj, e1, resid, az = stats(z)
        recent.append(obj)
        if len(recent) > 8:
            recent.pop(0)
    return z, 2.0 * np.linalg.norm(resid) < tol


def _complement_basis(w: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the unit vector w,
    via the Householder reflection sending w to a coordinate axis."""
    r = w.size
    v = w.astype(complex).copy()
    phase = v[0] / abs(v[0]) if abs(v[0]) > 0 else 1.0
    v[0] += phase * np.linalg.norm(v)
    h = np.eye(r, dtype=complex) - 2.0 * np.outer(v, v.conj()) / np.vdot(v, v).real
    return h[:, 1:]


def critical_spectrum(A, trials: int, tol: float = 1e-10, seed: int = 0,
                      max_iter: int = 2000, merge_tol: float = 1e-8) -> SpectrumResult:
    """Critical values and points of e_A on the unit sphere.

    Eigenvectors of A are exactly the critical points of e_A; each one is
    located by projected gradient descent of the residual norm
    ||de_A|| = 2||A psi - e_A psi|| over the unit sphere, stopping below
    tol.  After a critical point is found the search deflates to the unit
    sphere of its orthogonal complement (an invariant subspace for
    Hermitian A), which guarantees the full spectrum in dim rounds; the
    trials budget sets how many seeded random starts each round may burn.
    Values within merge_tol are merged into one reported eigenvalue whose
    multiplicity is the rank of the merged eigenvector stack.  If a round
    exhausts its starts without converging, the partial result is returned
    flagged.
    """
    a = _as_matrix(A)
    d = a.shape[0]
    if trials < d:
        raise ValueError(f"need at least dim={d} trials, got {trials}")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    rng = np.random.default_rng(seed)
    starts_per_round = max(1, trials // d)

    found = []
    failed = 0
    basis = np.eye(d, dtype=complex)  # columns span the not-yet-deflated subspace
    while basis.shape[1] > 0:
        r = basis.shape[1]
        b = basis.conj().T @ a @ basis
        b = 0.5 * (b + b.conj().T)  # restore exact Hermiticity lost to rounding
        w = None
        for _ in range(starts_per_round):
            w0 = rng.standard_normal(r) + 1j * rng.standard_normal(r)
            w0 /= np.linalg.norm(w0)
            cand, ok = _descend_to_eigenvector(b, w0, tol, max_iter, rng)
            if ok:
                w = cand
                break
            failed += 1
        if w is None:
            break  # flag partial result rather than loop forever
        z = basis @ w
        z /= np.linalg.norm(z)
        found.append((float(np.vdot(z, a @ z).real), z))
        # deflate: restrict to the orthogonal complement of w inside the span
        basis = basis @ _complement_basis(w)

    found.sort(key=lambda vz: vz[0])
    points = []
    i = 0
    while i < len(found):
        j = i
        while j + 1 < len(found) and found[j + 1][0] - found[i][0] <= merge_tol:
            j += 1
        cluster = found[i : j + 1]
        vecs = np.array([z for _, z in cluster])
        svals = np.linalg.svd(vecs, compute_uv=False)
        mult = int(np.sum(svals > 1e-6 * svals[0]))
        value = float(np.mean([v for v, _ in cluster]))
        points.append(CriticalPoint(value=value, state=RealPoint.from_complex(cluster[0][1]),
                                    multiplicity=mult))
        i = j + 1
    return SpectrumResult(points=tuple(points), fully_converged=(failed == 0),
                          failed_trials=failed)


class DualElement:
    """Hermitian matrix read as an element xi of the dual of the unitary algebra."""

    def __init__(self, matrix, tol: float = HERMITICITY_TOL):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("dual element must be a square matrix")
        defect = np.max(np.abs(m - m.conj().T))
        if defect > tol:
            raise ValueError(f"dual element is not Hermitian: defect {defect:.3e}")
        m.flags.writeable = False
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def pair(self, A) -> float:
        """Pairing with a Hermitian operator: (1/2) Tr(xi A)."""
        return float(np.trace(self._matrix @ _as_matrix(A)).real) * 0.5

    def __repr__(self):
        return f"DualElement(dim={self.dim})"


def momentum_map(psi: RealPoint) -> DualElement:
    """mu(psi) = |psi><psi|, a rank <= 1 dual element with trace <psi, psi>.

    The pullback identity mu(psi).pair(A) == f_A(psi) holds exactly.
    """
    z = psi.to_complex()
    return DualElement(np.outer(z, z.conj()))


def dual_tensors(A, B, xi: DualElement) -> tuple:
    """Evaluate the contravariant pair (R, Lambda) on (A, B) at xi.

    R(A, B)(xi)      = (1/2)  Tr(xi (AB + BA))
    Lambda(A, B)(xi) = (1/2i) Tr(xi (AB - BA))

    Both are real for Hermitian inputs, and are mu-related to the state
    space tensors: G(df_A, df_B)(psi) = R(mu(psi)) and
    Omega(df_A, df_B)(psi) = Lambda(mu(psi)).
    """
    a, b = _as_matrix(A), _as_matrix(B)
    if a.shape != b.shape or a.shape[0] != xi.dim:
        raise ValueError("dimension mismatch between operators and dual element")
    r = 0.5 * np.trace(xi.matrix @ (a @ b + b @ a))
    lam = np.trace(xi.matrix @ (a @ b - b @ a)) / 2j
    return float(r.real), float(lam.real)


def random_state(n: int, rng: np.random.Generator) -> RealPoint:
    """Unit-norm state with complex Gaussian entries; seeded and reproducible."""
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    z /= np.linalg.norm(z)
    return RealPoint.from_complex(z)


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (m + m.conj().T)
