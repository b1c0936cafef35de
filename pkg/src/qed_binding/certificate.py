"""Quantitative binding certificates for the field-coupled particle.

Chain implemented here, for a potential V with coupling threshold lambda0:

1. ``kinetic_bound_constants``: the explicit pair (beta, C_V) with
   p^2 <= beta (h + |e|) + C_V for the reduced-kinetic operator
   h = (1-g) p^2 + lam V, namely beta = 4/(1-g) and
   C_V = (2 lambda0^2 ||V||_L2^2 / (3 pi (1-g)^2))^2.
2. ``solve_kinetic_shift``: the kinetic reduction factor g(alpha) chosen so
   that the assembled coefficient of ||p psi||^2 in the trial-state energy
   bound vanishes,

       g = 4 a' alpha [c4 + mu c3 - (lam/2) c3 C] /
           (1 + 4 alpha c6 - 2 alpha a' lam c3 C),      a' = 1 - a,

   iterated to a fixed point because c3, c4 (through the kinetic weight 1-g)
   and c6 (through beta and C_V) depend on g.  Here C is the Laplacian ratio
   constant of the potential, mu = (lam/2) C, and
   a' = min{ 1/(4 c4), c6/(mu c3), 3/4 }, which enforces g <= alpha.
3. ``binding_margin``: the certified energy-gap lower bound

       margin = |e_lam| (1 - 2 alpha lam c3 C (1-a))
                - alpha^2 g (c5 - c1) - B(alpha),
       B(alpha) = alpha^3 (1 + c_self + (4/a) c7),

   where B collects the infrared regularization, the third-order self-energy
   remainder and the higher-order trial-state cross term; c_self and c7 are
   explicit budget knobs (defaults 1.0) and are NOT derived quantities.
   margin > 0 certifies that the coupled system binds at (alpha, lam).
4. ``binding_window`` / ``critical_alpha``: the certified sub-window of
   ((1-g) lambda0, lambda0] and the largest certified coupling strength.

The shift g is always solved at lam = lambda0 (worst case); for lam below
lambda0 the leftover ||p psi||^2 coefficient is negative and is dropped,
which only strengthens the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import photon
from .errors import (
    ConsistencyError,
    ConvergenceError,
    NoBoundStateError,
    ValidationError,
)
from .potential import Potential, check_assumptions, delta_ratio_constant, norms
from .schrodinger import binding_energy, coupling_threshold, expectation_ratio_constant


@dataclass(frozen=True)
class Knobs:
    """Configurable third-order budget constants (non-rigorous, documented)."""

    c_self: float = 1.0
    c7: float = 1.0

    def __post_init__(self):
        if self.c_self < 0 or self.c7 < 0:
            raise ValidationError("budget knobs must be nonnegative")


@dataclass(frozen=True)
class ConstantsSet:
    """Every assembled constant at one (alpha, lam) certificate state."""

    alpha: float
    lam: float
    g: float
    beta: float
    c_of_v: float
    mu: float
    a: float
    laplacian_ratio: float
    resolvent_coeff: float       # directional one-photon, power 1 (enters as c4)
    resolvent_sq_coeff: float    # directional one-photon, power 2 (enters as c3)
    ir_log_coeff: float          # field-energy bound with infrared shift (c6)
    two_photon_norm_bound: float  # c5
    momentum_gain: float         # c1
    provenance: dict = field(default_factory=dict)


@dataclass
class ShiftResult:
    """Fixed point of the kinetic reduction factor g(alpha)."""

    g: float
    iterations: int
    residual: float
    trace: list
    beta: float
    c_of_v: float
    mu: float
    one_minus_a: float
    resolvent_coeff: float
    resolvent_sq_coeff: float
    ir_log_coeff: float
    laplacian_ratio: float


@dataclass
class BindingCertificate:
    """Outcome of the margin assembly at one (alpha, lam)."""

    alpha: float
    lam: float
    g: float
    e_abs: float
    margin: float
    certified: bool
    term_breakdown: dict
    knobs: Knobs
    window_lambda_min: Optional[float] = None
    constants: Optional[ConstantsSet] = None


@dataclass
class WindowResult:
    """Nominal and numerically certified coupling windows at one alpha."""

    alpha: float
    g: float
    lambda0: float
    nominal_min: float
    lambda_min: Optional[float]
    certified: bool
    margin_at_lambda0: float
    certificate: BindingCertificate


@dataclass
class CriticalAlphaResult:
    alpha_star: float
    certified_any: bool
    diagnosis: str
    window_at_reference: Optional[WindowResult]
    reference_alpha: Optional[float]


class CertificateContext:
    """Caches the potential-level quantities shared across certificate calls."""

    def __init__(self, p: Potential, g_hint: float = 0.01):
        self.potential = p
        self.g_hint = g_hint
        self._lambda0 = None
        self._l2 = None
        self._ratio = None
        self._which = None

    @property
    def lambda0(self) -> float:
        if self._lambda0 is None:
            self._lambda0 = coupling_threshold(self.potential).lambda0
        return self._lambda0

    @property
    def l2norm(self) -> float:
        if self._l2 is None:
            self._l2 = norms(self.potential).l2
        return self._l2

    @property
    def laplacian_ratio(self) -> float:
        """The constant C with |(psi, DeltaV psi)| <= C (psi, |V| psi).

        Pointwise sup |DeltaV|/|V| when the profile is strictly negative and
        smooth; the compact-support expectation bound otherwise.
        """
        if self._ratio is None:
            report = check_assumptions(self.potential)
            if report.pointwise_ratio:
                self._ratio = delta_ratio_constant(self.potential)
                self._which = "pointwise |DeltaV|/|V| sup"
            elif report.compact_support:
                self._ratio = expectation_ratio_constant(
                    self.potential, g_range=[self.g_hint]
                )
                self._which = "compact-support expectation ratio"
            else:
                raise ValidationError(
                    "potential satisfies neither the pointwise-ratio nor the "
                    "compact-support hypothesis; no certificate possible"
                )
        return self._ratio

    @property
    def ratio_kind(self) -> str:
        self.laplacian_ratio
        return self._which


# ---------------------------------------------------------------------------
# kinetic interpolation constants
# ---------------------------------------------------------------------------

def kinetic_bound_constants(
    p_or_l2, lambda0: float, g: float, check_tol: float = 1e-9
) -> tuple[float, float]:
    """(beta, C_V) with p^2 <= beta (h + |e|) + C_V, at the optimal beta.

    beta = 4/(1-g); C_V = (2 lambda0^2 ||V||_L2^2 / (3 pi (1-g)^2))^2.  The
    screened Birman-Schwinger sufficiency condition that backs the bound is
    re-evaluated algebraically; at the optimal beta it holds with equality, so
    any violation beyond roundoff indicates an inconsistent norm pipeline.
    """
    if not (0.0 <= g < 1.0):
        raise ValidationError("g must lie in [0, 1)")
    l2 = norms(p_or_l2).l2 if isinstance(p_or_l2, Potential) else float(p_or_l2)
    beta = 4.0 / (1.0 - g)
    c_of_v = (2.0 * lambda0**2 * l2**2 / (3.0 * math.pi * (1.0 - g) ** 2)) ** 2
    lhs = lambda0**2 * math.sqrt(beta) * l2**2 / (
        8.0 * math.pi * (1.0 - g - 1.0 / beta) ** 1.5
    )
    rhs = math.sqrt(c_of_v / (beta * (1.0 - g) - 1.0))
    if lhs > rhs * (1.0 + check_tol):
        raise ConsistencyError(
            f"kinetic-bound sufficiency check failed: {lhs:.12g} > {rhs:.12g}; "
            "the norm pipeline is inconsistent"
        )
    return beta, c_of_v


# ---------------------------------------------------------------------------
# the kinetic reduction factor g(alpha)
# ---------------------------------------------------------------------------

def assembled_p2_coefficient(
    g, alpha, lam, c3, c4, c6, one_minus_a, lap_ratio, mu
) -> float:
    """Coefficient of ||p psi||^2 in the trial-state bound; zero at the solved g."""
    return g * (1.0 + 4.0 * alpha * c6 - 2.0 * alpha * one_minus_a * lam * c3 * lap_ratio) - (
        4.0 * alpha * one_minus_a * (c4 + mu * c3 - 0.5 * lam * c3 * lap_ratio)
    )


def solve_kinetic_shift(
    alpha: float,
    p: Potential,
    lam: float,
    ctx: Optional[CertificateContext] = None,
    tol: float = 1e-12,
    maxiter: int = 100,
) -> ShiftResult:
    """Fixed point of the kinetic reduction factor g(alpha) at coupling lam.

    Iterates from g = 0; each sweep recomputes the one-photon resolvent
    coefficients (which see g through the kinetic weight), the infrared
    field bound (which sees g through beta and C_V) and the split weight
    a' = 1-a.  Enforces g in (0, 1) and the structural bound g <= alpha.
    """
    if alpha <= 0:
        raise ValidationError("alpha must be positive")
    ctx = ctx or CertificateContext(p)
    lam0 = ctx.lambda0
    if not (0.0 < lam <= lam0 * (1.0 + 1e-9)):
        raise ValidationError("lam must lie in (0, lambda0]")
    lap = ctx.laplacian_ratio
    mu = 0.5 * lam * lap
    l2 = ctx.l2norm

    g = 0.0
    trace = []
    damped = False
    last_delta = None
    for it in range(1, maxiter + 1):
        beta, c_of_v = kinetic_bound_constants(l2, lam0, g)
        c4, c3 = photon.directional_resolvent_coeffs(g=g, mu=mu, alpha=alpha)
        c6 = photon.ir_field_bound(beta, c_of_v, alpha)
        one_minus_a = min(1.0 / (4.0 * c4.value), c6.value / (mu * c3.value), 0.75)
        num = 4.0 * alpha * one_minus_a * (
            c4.value + mu * c3.value - 0.5 * lam * c3.value * lap
        )
        den = 1.0 + 4.0 * alpha * c6.value - 2.0 * alpha * one_minus_a * lam * c3.value * lap
        if den <= 0:
            raise ConvergenceError(
                f"shift denominator nonpositive ({den:.3e}) at iteration {it}"
            )
        g_new = num / den
        delta = g_new - g
        trace.append((it, g_new, delta))
        if damped:
            g_new = 0.5 * (g + g_new)
        if last_delta is not None and delta * last_delta < 0 and abs(delta) > abs(last_delta):
            damped = True  # oscillation growing: switch to relaxed iteration
        last_delta = delta
        converged = abs(delta) < tol
        g = g_new
        if converged:
            break
    else:
        raise ConvergenceError(
            "kinetic shift fixed point did not converge; trace: "
            + ", ".join(f"({i}, {gv:.3e})" for i, gv, _ in trace[-5:])
        )

    if not (0.0 < g < 1.0) or g > alpha * (1.0 + 1e-9):
        raise ConvergenceError(
            f"kinetic shift g = {g:.6e} outside (0, alpha={alpha:g}]; trace: "
            + ", ".join(f"({i}, {gv:.3e})" for i, gv, _ in trace[-5:])
        )
    return ShiftResult(
        g=g,
        iterations=it,
        residual=abs(trace[-1][2]),
        trace=trace,
        beta=beta,
        c_of_v=c_of_v,
        mu=mu,
        one_minus_a=one_minus_a,
        resolvent_coeff=c4.value,
        resolvent_sq_coeff=c3.value,
        ir_log_coeff=c6.value,
        laplacian_ratio=lap,
    )


# ---------------------------------------------------------------------------
# the margin and the certified window
# ---------------------------------------------------------------------------

def _alpha_parts(alpha: float, ctx: CertificateContext, knobs: Knobs):
    """Solve the shift at lam = lambda0 and assemble all photon constants."""
    shift = solve_kinetic_shift(alpha, ctx.potential, ctx.lambda0, ctx=ctx)
    c5 = photon.two_photon_field_bound(shift.beta, shift.c_of_v)
    c1 = photon.two_photon_integral(
        photon.TwoPhotonKernel("pf2", "full", 2, ir_shift=alpha**3, alpha=alpha)
    )
    a = 1.0 - shift.one_minus_a
    budget = alpha**3 * (1.0 + knobs.c_self + (4.0 / a) * knobs.c7)
    return shift, c5, c1, a, budget


def _margin_from_parts(alpha, lam, e_abs, shift, c5, c1, a, budget, knobs, ctx):
    screening = (
        2.0 * alpha * lam * shift.resolvent_sq_coeff * shift.laplacian_ratio * shift.one_minus_a
    )
    gain = alpha**2 * shift.g * c1.value
    norm_cost = alpha**2 * shift.g * c5.value
    margin_val = e_abs * (1.0 - screening) - (norm_cost - gain) - budget
    coeff_solved = assembled_p2_coefficient(
        shift.g, alpha, ctx.lambda0, shift.resolvent_sq_coeff, shift.resolvent_coeff,
        shift.ir_log_coeff, shift.one_minus_a, shift.laplacian_ratio, shift.mu,
    )
    coeff_at_lam = assembled_p2_coefficient(
        shift.g, alpha, lam, shift.resolvent_sq_coeff, shift.resolvent_coeff,
        shift.ir_log_coeff, shift.one_minus_a, shift.laplacian_ratio, shift.mu,
    )
    breakdown = {
        "binding": e_abs,
        "screening_loss": e_abs * screening,
        "momentum_gain": gain,
        "two_photon_norm_cost": norm_cost,
        "budget_infrared": alpha**3,
        "budget_self_energy": knobs.c_self * alpha**3,
        "budget_cross_term": (4.0 / a) * knobs.c7 * alpha**3,
        "p2_coefficient_at_lambda0": coeff_solved,
        "p2_coefficient_at_lam": coeff_at_lam,  # <= 0 for lam < lambda0; dropped
    }
    constants = ConstantsSet(
        alpha=alpha, lam=lam, g=shift.g, beta=shift.beta, c_of_v=shift.c_of_v,
        mu=shift.mu, a=a, laplacian_ratio=shift.laplacian_ratio,
        resolvent_coeff=shift.resolvent_coeff,
        resolvent_sq_coeff=shift.resolvent_sq_coeff,
        ir_log_coeff=shift.ir_log_coeff,
        two_photon_norm_bound=c5.value, momentum_gain=c1.value,
        provenance={
            "beta": "optimal kinetic-bound slope 4/(1-g)",
            "c_of_v": "explicit kinetic-bound offset from lambda0 and ||V||_L2",
            "mu": "resolvent shift (lam0/2) * laplacian ratio",
            "a": "split weight, 1-a = min{1/(4 c4), c6/(mu c3), 3/4}",
            "laplacian_ratio": ctx.ratio_kind,
            "resolvent_coeff": "one-photon quadrature (directional, power 1)",
            "resolvent_sq_coeff": "one-photon quadrature (directional, power 2)",
            "ir_log_coeff": "one-photon field bound, infrared shift alpha^3",
            "two_photon_norm_bound": "two-photon field-denominator quadratures",
            "momentum_gain": "two-photon momentum-weighted quadrature",
            "budget": "knobs c_self, c7 (configurable, non-rigorous)",
        },
    )
    return BindingCertificate(
        alpha=alpha, lam=lam, g=shift.g, e_abs=e_abs, margin=margin_val,
        certified=margin_val > 0.0, term_breakdown=breakdown, knobs=knobs,
        constants=constants,
    )


def binding_margin(
    alpha: float,
    lam: float,
    p: Potential,
    knobs: Knobs = Knobs(),
    ctx: Optional[CertificateContext] = None,
) -> BindingCertificate:
    """Certified lower bound on the binding gap at (alpha, lam).

    The shift g is solved at lam = lambda0; lam must lie in the nominal
    window ((1-g) lambda0, lambda0].  A positive margin certifies binding.
    """
    ctx = ctx or CertificateContext(p)
    shift, c5, c1, a, budget = _alpha_parts(alpha, ctx, knobs)
    lam0 = ctx.lambda0
    if not ((1.0 - shift.g) * lam0 * (1.0 - 1e-9) < lam <= lam0 * (1.0 + 1e-9)):
        raise ValidationError(
            f"lam={lam:g} outside enhanced-binding window "
            f"({(1 - shift.g) * lam0:g}, {lam0:g}]"
        )
    try:
        e_abs = binding_energy(p, lam, shift.g)
    except NoBoundStateError:
        e_abs = 0.0  # unresolvably close to the left edge
    return _margin_from_parts(alpha, lam, e_abs, shift, c5, c1, a, budget, knobs, ctx)


def binding_window(
    alpha: float,
    p: Potential,
    knobs: Knobs = Knobs(),
    ctx: Optional[CertificateContext] = None,
    resolution: float = 1e-3,
) -> WindowResult:
    """Certified sub-window of the nominal interval ((1-g) lambda0, lambda0].

    Bisects the margin sign change in lam; ``resolution`` is the bisection
    width relative to the nominal window width.
    """
    ctx = ctx or CertificateContext(p)
    shift, c5, c1, a, budget = _alpha_parts(alpha, ctx, knobs)
    lam0 = ctx.lambda0
    nominal_min = (1.0 - shift.g) * lam0

    def margin_at(lam):
        try:
            e_abs = binding_energy(p, lam, shift.g)
        except NoBoundStateError:
            e_abs = 0.0
        return _margin_from_parts(alpha, lam, e_abs, shift, c5, c1, a, budget, knobs, ctx)

    cert0 = margin_at(lam0)
    if not cert0.certified:
        return WindowResult(
            alpha=alpha, g=shift.g, lambda0=lam0, nominal_min=nominal_min,
            lambda_min=None, certified=False, margin_at_lambda0=cert0.margin,
            certificate=cert0,
        )
    width = lam0 - nominal_min
    lo = nominal_min + 1e-9 * width
    hi = lam0
    if margin_at(lo).certified:
        lam_min = lo  # certified down to the edge at this resolution
    else:
        while (hi - lo) > resolution * width:
            mid = 0.5 * (lo + hi)
            if margin_at(mid).certified:
                hi = mid
            else:
                lo = mid
        lam_min = hi
    cert0.window_lambda_min = lam_min
    return WindowResult(
        alpha=alpha, g=shift.g, lambda0=lam0, nominal_min=nominal_min,
        lambda_min=lam_min, certified=True, margin_at_lambda0=cert0.margin,
        certificate=cert0,
    )


def critical_alpha(
    p: Potential,
    knobs: Knobs = Knobs(),
    ctx: Optional[CertificateContext] = None,
    alpha_lo: float = 1e-6,
    alpha_hi: float = 1.0,
    rtol: float = 0.02,
) -> CriticalAlphaResult:
    """Largest coupling strength with a certified window at lam = lambda0.

    Log-space bisection over [alpha_lo, alpha_hi]; the result is compared
    against the 1e-2 scale and the fine-structure value 1/137 in the returned
    diagnosis (qualitative anchors only).
    """
    ctx = ctx or CertificateContext(p)

    def certified(alpha):
        try:
            return binding_margin(alpha, ctx.lambda0, p, knobs, ctx).certified
        except (ConvergenceError, NoBoundStateError):
            return False

    if not certified(alpha_lo):
        return CriticalAlphaResult(
            alpha_star=0.0, certified_any=False,
            diagnosis=(
                f"margin not positive even at alpha = {alpha_lo:g}; the budget "
                "constants dominate the quadratic binding gain everywhere in range"
            ),
            window_at_reference=None, reference_alpha=None,
        )
    lo = alpha_lo
    hi = alpha_hi
    if certified(hi):
        lo = hi
    else:
        while math.log(hi / lo) > math.log1p(rtol):
            mid = math.sqrt(lo * hi)
            if certified(mid):
                lo = mid
            else:
                hi = mid
    alpha_star = lo
    ref = min(alpha_star, 1.0 / 137.0)
    window = binding_window(ref, p, knobs, ctx)
    fine = 1.0 / 137.0
    diagnosis = (
        f"alpha* = {alpha_star:.4g} (certified); reference scale 1e-2: "
        f"ratio {alpha_star / 1e-2:.3g}; fine-structure 1/137: "
        f"ratio {alpha_star / fine:.3g}; window at alpha = {ref:.4g} is "
        + ("nonempty" if window.certified else "empty")
    )
    return CriticalAlphaResult(
        alpha_star=alpha_star, certified_any=True, diagnosis=diagnosis,
        window_at_reference=window, reference_alpha=ref,
    )
