"""Numerical certificates for field-enhanced binding of a spinless particle.

For a short-range attractive potential V that is just too weak to bind on its
own, this library computes every explicit quantity in the constructive
argument that coupling the particle to a quantized radiation field creates a
bound state: the coupling threshold lambda0, the photon vacuum-sector
integrals, the kinetic reduction factor g(alpha), and a quantitative binding
certificate with its certified coupling window.
"""

from .certificate import (
    BindingCertificate,
    CertificateContext,
    ConstantsSet,
    CriticalAlphaResult,
    Knobs,
    WindowResult,
    binding_margin,
    binding_window,
    critical_alpha,
    kinetic_bound_constants,
    solve_kinetic_shift,
)
from .errors import (
    ConsistencyError,
    ConvergenceError,
    NoBoundStateError,
    QedBindingError,
    QuadratureError,
    ResolutionError,
    ValidationError,
)
from .photon import (
    McEstimate,
    OnePhotonKernel,
    PhotonIntegralSet,
    QuadValue,
    TwoPhotonKernel,
    integral_set,
    mc_coupling_correction,
    mc_mode_oracle,
    one_photon_integral,
    polarization_vectors,
    self_energy,
    two_photon_integral,
)
from .potential import (
    AssumptionReport,
    NormSet,
    Potential,
    check_assumptions,
    delta_ratio_constant,
    make_potential,
    norms,
    rollnik_mc,
    rollnik_yukawa_check,
)
from .schrodinger import (
    CurvatureResult,
    Observables,
    RadialGrid,
    SchrodingerSolution,
    ThresholdResult,
    binding_energy,
    coupling_threshold,
    default_grid,
    expectation_ratio_constant,
    ground_state,
    observables,
    threshold_curvature,
    weak_coupling_curve,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
