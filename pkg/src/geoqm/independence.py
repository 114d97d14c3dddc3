"""Functional independence of quadratic observables under pointwise calculus.

Two observable functions are independent where their differentials are
linearly independent.  For the pair (f_A, f_{A^2}) the wedge of the
differentials has spectral coefficients l_j l_k (l_k - l_j) on the
dz_j ^ dzbar_k component, so independence is decided by the spectrum of A
alone.  Rank decisions below use analytic gradients, not finite
differences, to keep step-size noise out of the SVD.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .geometry import RealPoint, _as_matrix, grad_quad


@dataclass
class IndependenceReport:
    """Per-sample rank diagnostics and an aggregate verdict."""

    functions: list
    sample_points: list
    jacobian_rank_per_point: list
    min_singular_value_per_point: list
    verdict: str
    full_rank_fraction: float = field(default=0.0)

    def to_json(self) -> str:
        payload = {
            "functions": self.functions,
            "verdict": self.verdict,
            "full_rank_fraction": self.full_rank_fraction,
            "samples": [
                {
                    "q": pt.q.tolist(),
                    "p": pt.p.tolist(),
                    "rank": int(r),
                    "min_singular_value": float(s),
                }
                for pt, r, s in zip(
                    self.sample_points,
                    self.jacobian_rank_per_point,
                    self.min_singular_value_per_point,
                )
            ],
        }
        return json.dumps(payload, sort_keys=True)


def sample_states(n: int, count: int, rng: np.random.Generator,
                  zero_tol: float = 1e-12) -> list:
    """Seeded unit states whose complex coordinates stay away from exact zeros.

    Independence of observable pairs is generic, holding off the loci
    z_j = 0; samples landing there (probability zero, but possible with
    degenerate seeds) are redrawn.
    """
    out = []
    while len(out) < count:
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        if np.min(np.abs(z)) <= zero_tol:
            continue
        z /= np.linalg.norm(z)
        out.append(RealPoint.from_complex(z))
    return out


def independence_test(ops, samples, svd_tol: float = 1e-8) -> IndependenceReport:
    """Rank test of the differentials {df_{A_i}} at each sample state.

    svd_tol is relative: singular values above svd_tol times the largest
    one count toward the rank (absolute thresholds would break under
    rescaling of the states).  Verdict is "independent" when at least 95%
    of samples have full rank, "dependent" when at most 5% do, and
    "borderline" in between; the in-between case is surfaced rather than
    coerced since samples can land on measure-zero degeneration loci.
    """
    mats = [_as_matrix(op) for op in ops]
    if len(mats) < 2:
        raise ValueError("need at least two operators")
    dim = mats[0].shape[0]
    if any(m.shape != (dim, dim) for m in mats):
        raise ValueError("all operators must share one dimension")
    samples = list(samples)
    if len(samples) < 10:
        raise ValueError("need at least 10 sample states")
    if svd_tol <= 0:
        raise ValueError("svd_tol must be positive")

    ranks, min_svals = [], []
    m = len(mats)
    for psi in samples:
        grads = np.array([grad_quad(a, psi) for a in mats])
        svals = np.linalg.svd(grads, compute_uv=False)
        top = svals[0] if svals[0] > 0 else 1.0
        rank = int(np.sum(svals > svd_tol * top))
        ranks.append(rank)
        min_svals.append(float(svals[-1]))

    frac = float(np.mean([r == m for r in ranks]))
    if frac >= 0.95:
        verdict = "independent"
    elif frac <= 0.05:
        verdict = "dependent"
    else:
        verdict = "borderline"
    names = [f"f_A{i}" for i in range(m)]
    return IndependenceReport(
        functions=names,
        sample_points=samples,
        jacobian_rank_per_point=ranks,
        min_singular_value_per_point=min_svals,
        verdict=verdict,
        full_rank_fraction=frac,
    )


def wedge_coefficients(A) -> np.ndarray:
    """Spectral coefficients c[j][k] = l_j l_k (l_k - l_j) of df_A ^ df_{A^2}.

    The coefficient sits on the dz_j ^ dzbar_k component of the wedge in
    the eigenbasis of A.  The matrix vanishes identically exactly when
    f_A and f_{A^2} are functionally dependent (repeated or zero
    eigenvalues kill the corresponding entries).
    """
    a = _as_matrix(A)
    off = a - np.diag(np.diag(a))
    if np.max(np.abs(off)) <= 1e-14 * max(1.0, np.max(np.abs(a))):
        lam = np.diag(a).real  # keep the caller's basis labels when already diagonal
    else:
        lam = np.linalg.eigvalsh(a)
    return lam[None, :] * lam[:, None] * (lam[None, :] - lam[:, None])


def numeric_wedge_coefficient(A, psi: RealPoint, j: int, k: int) -> complex:
    """dz_j ^ dzbar_k component of df_A ^ df_{A^2} at psi, from real gradients.

    Built as the antisymmetrized outer product of the analytic gradients of
    <z, Az> and <z, A^2 z> (twice the package normalization, matching the
    spectral closed form), contracted against the complex frame vectors
    d/dz_j and d/dzbar_k.  Independent cross-check for wedge_coefficients;
    for diagonal A it should equal c[j][k] * zbar_j z_k.
    """
    a = _as_matrix(A)
    n = psi.n
    u = 2.0 * grad_quad(a, psi)
    v = 2.0 * grad_quad(a @ a, psi)
    w = np.outer(u, v) - np.outer(v, u)
    # complex frame vectors d/dz_j = (d_q - i d_p)/2 and d/dzbar_k = (d_q + i d_p)/2
    ddz_j = np.zeros(2 * n, dtype=complex)
    ddz_j[j] = 0.5
    ddz_j[n + j] = -0.5j
    ddzbar_k = np.zeros(2 * n, dtype=complex)
    ddzbar_k[k] = 0.5
    ddzbar_k[n + k] = 0.5j
    return complex(ddz_j @ w @ ddzbar_k)


class DualBasisFunction:
    """Function on the matrix dual basis e_jk = |e_j><e_k|.

    Evaluation follows the dual pairing e_jk(A) = <e_k, A e_j>, i.e. the
    (k, j) entry, so the full evaluation grid reconstructs the matrix
    exactly (transposed indexing).
    """

    def __init__(self, matrix):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("dual basis function needs a square matrix")
        m.flags.writeable = False
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def evaluate(self, j: int, k: int) -> complex:
        return complex(self._matrix[k, j])

    def grid(self) -> np.ndarray:
        """All values, indexed [j][k]; equals the matrix transposed."""
        return self._matrix.T.copy()


def dual_products(A, B, kind: str) -> DualBasisFunction:
    """Hadamard (local, commutative) or composition (row-by-column) product.

    hadamard:    evaluates on e_jk to e_jk(A) * e_jk(B)
    composition: evaluates on e_jk to e_jk(AB)

    The first uses only the linear structure of the matrix algebra; the
    second encodes the operator product and is non-commutative.
    """
    a, b = _as_matrix(A), _as_matrix(B)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if kind == "hadamard":
        return DualBasisFunction(a * b)
    if kind == "composition":
        return DualBasisFunction(a @ b)
    raise ValueError(f"unknown product kind {kind!r}")
