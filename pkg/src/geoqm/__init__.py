"""geoqm: geometric mechanics of finite-dimensional quantum state spaces.

Realified Hilbert spaces with their Kahler tensors, observable brackets and
momentum maps; functional-independence tests; spectrum-splitting label
constructions; deformed oscillator algebras; alternative Hamiltonian
factorizations; action-angle classical models; and the bound-Coulomb
spectral map.  Everything is dense numpy at desk scale, deterministic per
seed, and backed by an independent verification route in the test suite.
"""

from .geometry import (
    SIGMA1,
    SIGMA2,
    SIGMA3,
    DualElement,
    HermitianOperator,
    KahlerTriple,
    QuadraticObservable,
    RealPoint,
    bracket,
    bracket_contraction,
    critical_spectrum,
    dual_tensors,
    expectation_value,
    hs_inner,
    jordan_product,
    killing_defect,
    lie_product,
    momentum_map,
    quad_value,
    random_hermitian,
    random_state,
    standard_kahler,
)
from .independence import (
    DualBasisFunction,
    IndependenceReport,
    dual_products,
    independence_test,
    sample_states,
    wedge_coefficients,
)
from .dof import (
    LadderSystem,
    PairingTable,
    SplitOperators,
    build_K,
    build_ladder,
    build_split_operators,
    cantor_pair,
    cantor_unpair,
    interpolate_diagonal,
    pairing_table,
)
from .oscillator import (
    DeformedMetric,
    DeformedOscillator,
    FockTruncation,
    deform,
    deform_2d,
    deformed_metric,
    fock,
    hq_operator,
    inverse_number,
    q_deform,
    q_profile,
)
from .factorizations import (
    Factorization,
    FactorizationResult,
    deform_poisson,
    factorize,
    odd_traces,
    transform,
    two_level_family,
)
from .classical import (
    ActionAngleModel,
    KeplerChart,
    KeplerState,
    aa_flow,
    conformal_flow,
    frequencies,
    harmonic_chart,
    harmonic_model,
    inverse_harmonic_chart,
    invariant_tensor_r4,
    kepler_chart,
    kepler_energy,
    kepler_model,
    nilpotency_defect,
    q_classical,
    recoordinate,
)
from .coulomb import CoulombSpectrum, coulomb_spectrum, parabolic_map

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
