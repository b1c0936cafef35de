r"""Vacuum-sector integrals of the quantized radiation field.

Derivation note (normalization conventions locked by the MC oracle)
-------------------------------------------------------------------

Modes are sharply cut off at |k| = 1.  The field operator at the origin is
A = D + D* with the annihilation part

    D_i = sum_lam int w(|k|) eps_i^lam(k) a_lam(k) dk,   w(k) = chi(|k| <= 1) / (2 pi |k|^(1/2)),

and orthonormal transverse polarization vectors fixed by
eps^2(k) = khat x eps^1(k).  Two identities pin every prefactor below:

* sum_i [D_i, D_i*] = int w^2 tr(1 - khat khat^T) dk
  = 2 int_{|k|<=1} dk/(4 pi^2 |k|) = 1/pi,
  so A.A = D*D* + DD + 2 D*.D + 1/pi.

* sum_{lam,nu} (eps^lam(k) . eps^nu(q))^2 = 1 + (khat.qhat)^2.

One-photon sector.  For a multiplication operator f(|k|) in the one-photon
sector (field energy |k|, field momentum squared |k|^2),

    sum_i <0| D_i f D_i* |0> = int w^2 tr(1 - khat khat^T) f dk
                             = (2/pi) int_0^1 r f(r) dr.

``one_photon_integral`` returns exactly this traced value with
f = d(r)^(-power) and denominator d(r) = (1-g) r^2 + r + mu + a.  Because
<phi_i| f |phi_j> = delta_ij/3 * (traced value), the coefficient multiplying
||p psi||^2 in directional sandwiches (p.D f D*.p) is one third of the traced
value: overall (2/3) of the *scalar* mode integral int w^2 f dk.  Callers that
need the directional coefficient divide the traced value by 3.

Coupling term in the denominator.  The operator 2 alpha D*.D restricted to the
one-photon sector is the rank-3 projection sum 2 alpha sum_i |phi_i><phi_i|
with phi_i = D_i*|0>.  By isotropy the Sherman-Morrison-Woodbury correction
collapses to scalars: with I_n = (2/pi), int r/d^n and q = (2 alpha / 3) I_1,

    resolvent power 1:  I_1 / (1 + q)
    resolvent power 2:  I_2 / (1 + q)^2

(the power-2 case follows from the power-1 case by d/d mu).

Two-photon sector.  The pair state sum_j D_j* D_j* |0> has radial variables
(r, s) = (|k|, |q|) and t = khat.qhat; P_f^2 = r^2 + s^2 + 2 r s t and
H_f = r + s.  For a symmetric multiplication operator F,

    sum_ij <0| D_i D_i F D_j* D_j* |0>
        = 2 int int w(k)^2 w(q)^2 (1 + (khat.qhat)^2) F dk dq
        = (1/pi^2) int_0^1 int_0^1 int_{-1}^{1} r s (1 + t^2) F(r,s,t) dt dr ds,

the explicit factor 2 being the number of Wick pairings.  The t-integral has
closed forms: with c = r^2 + s^2 + r + s + a and d = 2 r s,

    J1 = int (1+t^2)/(c+dt) dt = (c^2+d^2)/d^3 ln((c+d)/(c-d)) - 2c/d^2
    J2 = int (1+t^2)/(c+dt)^2 dt = -J1'(c)

(series in d/c near the diagonal), so every two-photon kernel reduces to a
2-D adaptive quadrature.

First order in the coupling.  For full-denominator kernels the term
2 alpha D*.D inside the resolvent is included perturbatively:
d/d(2 alpha) <v| B |v> produces sandwiches  sum_m <D_m Psi_X, D_m Psi_Y>
between pair states Psi_X with scalar profiles X(r,s,t), which reduce to

    sum_m <D_m Psi_X, D_m Psi_Y> = (8/pi) int_0^1 r A_X(r) A_Y(r) dr,
    A_X(r) = (1/4 pi) int_0^1 int_{-1}^{1} s (1+t^2) X(r,s,t) dt ds.

The Monte-Carlo oracle integrates the raw 3-D / 6-D / 9-D mode integrals with
explicitly constructed polarization vectors and no reductions; every reduced
value above is locked against it in the test-suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.integrate import dblquad, quad

from .errors import QuadratureError, ValidationError

MODE_CUTOFF = 1.0


class QuadValue(NamedTuple):
    """A quadrature result with its error estimate."""

    value: float
    error: float

    def __float__(self):
        return self.value


class McEstimate(NamedTuple):
    """A Monte-Carlo estimate with its standard error."""

    value: float
    stderr: float
    samples: int


def mode_weight(knorm):
    """w(k) = chi(|k| <= 1) / (2 pi |k|^1/2)."""
    knorm = np.asarray(knorm, dtype=float)
    out = np.zeros_like(knorm)
    inside = (knorm > 0) & (knorm <= MODE_CUTOFF)
    out[inside] = 1.0 / (2.0 * math.pi * np.sqrt(knorm[inside]))
    return out


def polarization_vectors(k):
    """Orthonormal transverse pair with eps2 = khat x eps1; vectorized (N,3)."""
    k = np.atleast_2d(np.asarray(k, dtype=float))
    khat = k / np.linalg.norm(k, axis=1, keepdims=True)
    ref = np.zeros_like(khat)
    ref[np.arange(len(khat)), np.argmin(np.abs(khat), axis=1)] = 1.0
    e1 = np.cross(ref, khat)
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(khat, e1)
    return e1, e2


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OnePhotonKernel:
    """D f(.) D* vacuum integral with f = [(1-g) P_f^2 + H_f + mu + a]^(-power).

    ``g`` in [0, 1]: g = 1 drops the field-momentum term entirely (pure
    field-energy denominators).  ``alpha``, when set, includes the
    2 alpha D*.D coupling in the denominator exactly (rank-3 correction).
    """

    g: float = 0.0
    mu: float = 0.0
    ir_shift: float = 0.0
    power: int = 1
    alpha: Optional[float] = None

    def __post_init__(self):
        if not (0.0 <= self.g <= 1.0):
            raise ValidationError("one-photon kernel needs 0 <= g <= 1")
        if self.mu < 0 or self.ir_shift < 0:
            raise ValidationError("mu and ir_shift must be nonnegative")
        if self.power not in (1, 2):
            raise ValidationError("power must be 1 or 2")
        if self.alpha is not None and self.alpha < 0:
            raise ValidationError("alpha must be nonnegative")

    @property
    def shift(self) -> float:
        return self.mu + self.ir_shift

    def denominator(self, r):
        return (1.0 - self.g) * r * r + r + self.shift


@dataclass(frozen=True)
class TwoPhotonKernel:
    """DD f(.) D*D* vacuum integral over the two-photon sector.

    numerator: "one" or "pf2" (multiply by P_f^2).
    denominator: "full" (P_f^2 + H_f + a) or "field" (H_f + a), raised to
    ``power``.  ``alpha`` adds the 2 alpha D*.D coupling term to first order
    (full denominators only; the neglected remainder is O(alpha^2)).
    """

    numerator: str = "one"
    denominator: str = "full"
    power: int = 1
    ir_shift: float = 0.0
    alpha: Optional[float] = None

    def __post_init__(self):
        if self.numerator not in ("one", "pf2"):
            raise ValidationError("numerator must be 'one' or 'pf2'")
        if self.denominator not in ("full", "field"):
            raise ValidationError("denominator must be 'full' or 'field'")
        if self.power not in (1, 2):
            raise ValidationError("power must be 1 or 2")
        if self.ir_shift < 0:
            raise ValidationError("ir_shift must be nonnegative")
        if self.alpha is not None and self.denominator != "full":
            raise ValidationError(
                "the coupling correction applies to full denominators only"
            )


# ---------------------------------------------------------------------------
# one-photon quadrature
# ---------------------------------------------------------------------------

def _reduced_one_photon(kin: float, c: float, power: int) -> QuadValue:
    """(2/pi) int_0^1 r / (kin r^2 + r + c)^power dr."""
    if power == 2 and c == 0.0:
        raise QuadratureError(
            "infrared divergence: power-2 one-photon integral needs mu + ir_shift > 0"
        )
    pref = 2.0 / math.pi

    if 0.0 < c < 1e-2:
        # decades between c and 1 all contribute: integrate in x = ln r
        x0 = math.log(c) - 30.0

        def fx(x):
            r = math.exp(x)
            return r * r / (kin * r * r + r + c) ** power

        val, err = quad(fx, x0, 0.0, epsabs=1e-15, epsrel=1e-13, limit=2000)
    else:
        f = lambda r: r / (kin * r * r + r + c) ** power
        val, err = quad(f, 0.0, 1.0, epsabs=1e-15, epsrel=1e-13, limit=500)
    if not np.isfinite(val):
        raise QuadratureError("one-photon quadrature did not converge")
    return QuadValue(pref * val, pref * err)


def one_photon_integral(k: OnePhotonKernel) -> QuadValue:
    """Traced vacuum integral sum_i <0| D_i (denominator)^-power D_i* |0>.

    Reduced form (2/pi) int_0^1 r d(r)^-power dr; with ``alpha`` set, the
    2 alpha D*.D term enters the denominator exactly through the isotropic
    rank-3 correction (see the module derivation note).
    """
    kin = 1.0 - k.g
    base = _reduced_one_photon(kin, k.shift, k.power)
    if not k.alpha:
        return base
    i1 = base if k.power == 1 else _reduced_one_photon(kin, k.shift, 1)
    q = (2.0 * k.alpha / 3.0) * i1.value
    if k.power == 1:
        val = i1.value / (1.0 + q)
        err = i1.error / (1.0 + q)
    else:
        val = base.value / (1.0 + q) ** 2
        err = base.error / (1.0 + q) ** 2 + 2.0 * base.value * (2.0 * k.alpha / 3.0) * i1.error
    return QuadValue(val, err)


# ---------------------------------------------------------------------------
# two-photon quadrature
# ---------------------------------------------------------------------------

def _j_pair(c: float, d: float):
    """J1 = int (1+t^2)/(c+dt) dt and J2 = int (1+t^2)/(c+dt)^2 dt on [-1, 1]."""
    if d <= 0.0:
        return (8.0 / 3.0) / c, (8.0 / 3.0) / (c * c)
    x = d / c
    if x < 0.05:
        # series sum_j x^(2j) [1/(2j+1) + 1/(2j+3)]
        j = np.arange(13)
        a = 1.0 / (2 * j + 1) + 1.0 / (2 * j + 3)
        x2j = x ** (2 * j)
        j1 = (2.0 / c) * float(np.sum(a * x2j))
        j2 = (2.0 / (c * c)) * float(np.sum((2 * j + 1) * a * x2j))
        return j1, j2
    lg = math.log((c + d) / (c - d))
    j1 = (c * c + d * d) / d**3 * lg - 2.0 * c / (d * d)
    j2 = -2.0 * c / d**3 * lg + 2.0 * (c * c + d * d) / (d * d * (c * c - d * d)) + 2.0 / (d * d)
    return j1, j2


def _angular_reduced(kernel: TwoPhotonKernel):
    """Per-(r, s) factor: int (1+t^2) N / Den^power dt in closed form."""
    a = kernel.ir_shift
    num, den, p = kernel.numerator, kernel.denominator, kernel.power

    if den == "field":
        if num == "one":
            return lambda r, s: (8.0 / 3.0) / (r + s + a) ** p
        return lambda r, s: (8.0 / 3.0) * (r * r + s * s) / (r + s + a) ** p

    def fac(r, s):
        c = r * r + s * s + r + s + a
        d = 2.0 * r * s
        j1, j2 = _j_pair(c, d)
        if num == "one":
            return j1 if p == 1 else j2
        if p == 1:
            return 8.0 / 3.0 - (r + s + a) * j1
        return j1 - (r + s + a) * j2

    return fac


def _coupling_profiles(kernel: TwoPhotonKernel):
    """The pair (X, Y) of scalar profiles entering the first-order correction."""
    one_over = TwoPhotonKernel("one", "full", 1, kernel.ir_shift)
    if kernel.power == 1:
        other = TwoPhotonKernel(kernel.numerator, "full", 1, kernel.ir_shift)
        return one_over, other, 2.0
    other = TwoPhotonKernel(kernel.numerator, "full", 2, kernel.ir_shift)
    return one_over, other, 4.0


def _a_profile(kernel: TwoPhotonKernel, r: float, nodes, weights) -> float:
    """A_X(r) = (1/4 pi) int_0^1 s * [angular-reduced X] ds (Gauss-Legendre)."""
    fac = _angular_reduced(kernel)
    total = 0.0
    for s, w in zip(nodes, weights):
        total += w * s * fac(r, s)
    return total / (4.0 * math.pi)


def two_photon_integral(kernel: TwoPhotonKernel) -> QuadValue:
    """Contracted two-photon vacuum integral of the kernel.

    Value (1/pi^2) int int r s [int (1+t^2) N/Den^power dt] dr ds, with the
    angular integral in closed form; with ``alpha`` set, adds the first-order
    coupling correction -(2 or 4) alpha (8/pi) int r A_X A_Y dr.
    """
    fac = _angular_reduced(kernel)
    f = lambda s, r: r * s * fac(r, s)
    val, err = dblquad(f, 0.0, 1.0, 0.0, 1.0, epsabs=1e-12, epsrel=1e-10)
    if not np.isfinite(val) or err > max(1e-6 * abs(val), 1e-9):
        raise QuadratureError(
            f"two-photon adaptive refinement failed (err={err:.2e} on value {val:.6e})"
        )
    val /= math.pi**2
    err /= math.pi**2

    if kernel.alpha:
        xk, yk, coeff = _coupling_profiles(kernel)
        nodes, weights = np.polynomial.legendre.leggauss(160)
        nodes = 0.5 * (nodes + 1.0)
        weights = 0.5 * weights
        ax = lambda r: _a_profile(xk, r, nodes, weights)
        ay = ax if (xk == yk) else (lambda r: _a_profile(yk, r, nodes, weights))
        corr, corr_err = quad(
            lambda r: r * ax(r) * ay(r), 0.0, 1.0, epsabs=1e-13, epsrel=1e-10, limit=200
        )
        val -= coeff * kernel.alpha * (8.0 / math.pi) * corr
        err += coeff * kernel.alpha * (8.0 / math.pi) * corr_err
    return QuadValue(val, err)


# ---------------------------------------------------------------------------
# self-energy
# ---------------------------------------------------------------------------

class SelfEnergyEstimate(NamedTuple):
    """E(alpha, 0) through second order with its third-order uncertainty band."""

    value: float
    band: float
    first_order: float
    second_order: float


def self_energy(alpha: float, c_self: float = 1.0, second_order: Optional[float] = None) -> SelfEnergyEstimate:
    """Self-energy expansion alpha/pi - alpha^2 T2(alpha), band +- c_self alpha^3.

    ``second_order`` (the coefficient T2) is computed from the two-photon
    integral with the coupling correction when not supplied.
    """
    if alpha < 0:
        raise ValidationError("alpha must be nonnegative")
    if second_order is None:
        if alpha == 0.0:
            second_order = two_photon_integral(TwoPhotonKernel("one", "full", 1)).value
        else:
            second_order = two_photon_integral(
                TwoPhotonKernel("one", "full", 1, alpha=alpha)
            ).value
    value = alpha / math.pi - alpha**2 * second_order
    return SelfEnergyEstimate(
        value=value,
        band=c_self * alpha**3,
        first_order=1.0 / math.pi,
        second_order=second_order,
    )


# ---------------------------------------------------------------------------
# Monte-Carlo oracle over raw mode integrals
# ---------------------------------------------------------------------------

_CHUNK = 1_000_000


def _ball_directions(rng, n):
    z = rng.uniform(-1.0, 1.0, n)
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    st = np.sqrt(1.0 - z * z)
    return np.stack([st * np.cos(phi), st * np.sin(phi), z], axis=1)


def mc_mode_oracle(kernel, samples: int = 1_000_000, seed: int = 0) -> McEstimate:
    """Unbiased MC estimate of the raw (un-reduced) mode integral of a kernel.

    Radii are drawn uniformly on (0, 1] and directions uniformly on the
    sphere; polarization sums are evaluated from explicitly constructed
    polarization vectors.  Coupling terms in denominators (``alpha``) are
    ignored here: the oracle pins down the coupling-free reductions, the
    coupling corrections have their own raw-integral estimator
    (``mc_coupling_correction``).  Deterministic for fixed seed.
    """
    if samples < 10_000:
        raise ValidationError("need at least 1e4 samples")
    rng = np.random.default_rng(seed)
    tot = 0.0
    tot2 = 0.0
    done = 0
    while done < samples:
        n = min(_CHUNK, samples - done)
        if isinstance(kernel, OnePhotonKernel):
            r = rng.uniform(0.0, 1.0, n)
            dirs = _ball_directions(rng, n)
            e1, e2 = polarization_vectors(dirs)
            polsum = np.sum(e1 * e1, axis=1) + np.sum(e2 * e2, axis=1)
            w2 = 1.0 / (4.0 * math.pi**2 * r)
            vals = 4.0 * math.pi * r**2 * w2 * polsum / kernel.denominator(r) ** kernel.power
        elif isinstance(kernel, TwoPhotonKernel):
            r = rng.uniform(0.0, 1.0, n)
            s = rng.uniform(0.0, 1.0, n)
            dk = _ball_directions(rng, n)
            dq = _ball_directions(rng, n)
            e1k, e2k = polarization_vectors(dk)
            e1q, e2q = polarization_vectors(dq)
            polsq = sum(
                np.sum(a * b, axis=1) ** 2
                for a in (e1k, e2k)
                for b in (e1q, e2q)
            )
            t = np.sum(dk * dq, axis=1)
            pf2 = r * r + s * s + 2.0 * r * s * t
            hf = r + s
            den = (pf2 + hf if kernel.denominator == "full" else hf) + kernel.ir_shift
            num = pf2 if kernel.numerator == "pf2" else 1.0
            w2w2 = 1.0 / (16.0 * math.pi**4 * r * s)
            vals = (
                (4.0 * math.pi) ** 2
                * r**2
                * s**2
                * 2.0
                * w2w2
                * polsq
                * num
                / den**kernel.power
            )
        else:
            raise ValidationError(f"unknown kernel type {type(kernel).__name__}")
        tot += vals.sum()
        tot2 += (vals * vals).sum()
        done += n
    mean = tot / done
    var = max(tot2 / done - mean * mean, 0.0)
    return McEstimate(float(mean), float(math.sqrt(var / done)), done)


def mc_coupling_correction(kernel: TwoPhotonKernel, samples: int = 1_000_000, seed: int = 0) -> McEstimate:
    """Raw 9-D MC estimate of the first-order coupling correction term.

    Estimates -coeff * alpha * sum_m <D_m Psi_X, D_m Psi_Y> as the mode
    integral

        4 int w(k)^2 w(q)^2 w(q')^2 tr[P(q) P(k) P(q')] X(k,q) Y(k,q') dk dq dq'

    with transverse projectors P and the (X, Y, coeff) pairing of the kernel.
    """
    if kernel.alpha is None or kernel.denominator != "full":
        raise ValidationError("kernel must carry alpha and a full denominator")
    xk, yk, coeff = _coupling_profiles(kernel)
    a = kernel.ir_shift
    rng = np.random.default_rng(seed)

    def profile(which, rr, ss, tt):
        pf2 = rr * rr + ss * ss + 2.0 * rr * ss * tt
        den = pf2 + rr + ss + a
        num = pf2 if which.numerator == "pf2" else 1.0
        return num / den**which.power

    tot = 0.0
    tot2 = 0.0
    done = 0
    chunk = min(_CHUNK // 4, samples)
    while done < samples:
        n = min(chunk, samples - done)
        rk = rng.uniform(0.0, 1.0, n)
        rq = rng.uniform(0.0, 1.0, n)
        rq2 = rng.uniform(0.0, 1.0, n)
        ok = _ball_directions(rng, n)
        oq = _ball_directions(rng, n)
        oq2 = _ball_directions(rng, n)
        eye = np.eye(3)[None, :, :]
        Pk = eye - ok[:, :, None] * ok[:, None, :]
        Pq = eye - oq[:, :, None] * oq[:, None, :]
        Pq2 = eye - oq2[:, :, None] * oq2[:, None, :]
        trace = np.einsum("nij,njk,nki->n", Pq, Pk, Pq2)
        x = profile(xk, rk, rq, np.sum(ok * oq, axis=1))
        y = profile(yk, rk, rq2, np.sum(ok * oq2, axis=1))
        w6 = 1.0 / (64.0 * math.pi**6 * rk * rq * rq2)
        vals = (4.0 * math.pi) ** 3 * rk**2 * rq**2 * rq2**2 * 4.0 * w6 * trace * x * y
        tot += vals.sum()
        tot2 += (vals * vals).sum()
        done += n
    mean = tot / done
    var = max(tot2 / done - mean * mean, 0.0)
    scale = coeff * kernel.alpha
    return McEstimate(-scale * float(mean), scale * float(math.sqrt(var / done)), done)


# ---------------------------------------------------------------------------
# assembled constant set
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhotonIntegralSet:
    """All vacuum-sector constants entering the certificate, with errors.

    * second_order: two-photon coefficient of the self-energy expansion
    * momentum_gain: ||P_f (resolvent) D*D*|0>||^2 (gain term)
    * resolvent_coeff / resolvent_sq_coeff: directional one-photon resolvent
      coefficients at shift mu (powers 1 and 2)
    * two_photon_norm_bound: (beta/2) DD H_f^-1 D*D* + C_V DD H_f^-2 D*D*
    * ir_log_coeff: one-photon field-energy bound with the infrared shift,
      growing like log(alpha^-3) as alpha -> 0
    """

    second_order: QuadValue
    momentum_gain: QuadValue
    resolvent_coeff: QuadValue
    resolvent_sq_coeff: QuadValue
    two_photon_norm_bound: QuadValue
    ir_log_coeff: QuadValue


def directional_resolvent_coeffs(g: float, mu: float, alpha: float, ir_shift=None):
    """Directional coefficients (power-1, power-2) of D (K + mu)^-n D* sandwiches.

    K = (1-g) P_f^2 + H_f(+shift) + 2 alpha D*.D; each value is one third of
    the traced one-photon integral (see derivation note).
    """
    if ir_shift is None:
        ir_shift = alpha**3
    k1 = OnePhotonKernel(g=g, mu=mu, ir_shift=ir_shift, power=1, alpha=alpha)
    k2 = OnePhotonKernel(g=g, mu=mu, ir_shift=ir_shift, power=2, alpha=alpha)
    v1 = one_photon_integral(k1)
    v2 = one_photon_integral(k2)
    return QuadValue(v1.value / 3.0, v1.error / 3.0), QuadValue(v2.value / 3.0, v2.error / 3.0)


def ir_field_bound(beta: float, c_of_v: float, alpha: float) -> QuadValue:
    """Directional field-energy bound (beta/2 H~^-1 + C_V H~^-2), H~ = H_f + alpha^3."""
    shift = alpha**3
    v1 = one_photon_integral(OnePhotonKernel(g=1.0, ir_shift=shift, power=1))
    v2 = one_photon_integral(OnePhotonKernel(g=1.0, ir_shift=shift, power=2))
    val = (beta / 2.0 * v1.value + c_of_v * v2.value) / 3.0
    err = (beta / 2.0 * v1.error + c_of_v * v2.error) / 3.0
    return QuadValue(val, err)


def two_photon_field_bound(beta: float, c_of_v: float) -> QuadValue:
    """(beta/2) <DD H_f^-1 D*D*> + C_V <DD H_f^-2 D*D*> (no shift: IR-finite)."""
    p1 = two_photon_integral(TwoPhotonKernel("one", "field", 1))
    p2 = two_photon_integral(TwoPhotonKernel("one", "field", 2))
    return QuadValue(
        beta / 2.0 * p1.value + c_of_v * p2.value,
        beta / 2.0 * p1.error + c_of_v * p2.error,
    )


def integral_set(alpha: float, g: float, mu: float, beta: float, c_of_v: float) -> PhotonIntegralSet:
    """Assemble every vacuum-sector constant at the given certificate state."""
    c4, c3 = directional_resolvent_coeffs(g=g, mu=mu, alpha=alpha)
    t2 = two_photon_integral(TwoPhotonKernel("one", "full", 1, alpha=alpha or None))
    gain = two_photon_integral(
        TwoPhotonKernel("pf2", "full", 2, ir_shift=alpha**3, alpha=alpha or None)
    )
    return PhotonIntegralSet(
        second_order=t2,
        momentum_gain=gain,
        resolvent_coeff=c4,
        resolvent_sq_coeff=c3,
        two_photon_norm_bound=two_photon_field_bound(beta, c_of_v),
        ir_log_coeff=ir_field_bound(beta, c_of_v, alpha),
    )
