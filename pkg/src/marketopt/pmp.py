"""Pontryagin-principle algebra for the customer-dynamics control problem.

Minimizing ``integral of kappa1*P + kappa2*u1^a + kappa3*u2^a`` (a = 2 for the
quadratic objective, a = 1 for the linear one) subject to the model flow leads
to an adjoint triple (p1, p2, p3) paired with (R, C, P).  The adjoint system
is the negative state-gradient of the Hamiltonian

    H = running cost + p1*dR/dt + p2*dC/dt + p3*dP/dt,

with the mixing ratio P*R/N differentiated through N = R + C + P::

    dp1/dt = lambda2*(p1 - p2) + gamma(t)*(p1 - p3)
             + [p3 - alpha2*p1 - (1-alpha2)*p2]*(beta(t) + u2)*P*(C + P)/N^2
    dp2/dt = lambda1*(p2 - p1) + gamma(t)*(p2 - p3)
             - [p3 - alpha2*p1 - (1-alpha2)*p2]*(beta(t) + u2)*P*R/N^2
    dp3/dt = -kappa1 + [p3 - alpha1*p1 - (1-alpha1)*p2]*u1
             + [p3 - alpha2*p1 - (1-alpha2)*p2]*(beta(t) + u2)*R*(C + R)/N^2

The quadratic-cost minimizer is the clamped stationary point of H in u; the
linear-cost minimizer is bang-bang, driven by the switching values (the
coefficients of u1, u2 in H).  The linear running cost has zero state
gradient, so both objectives share the adjoint system above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    ControlPair,
    ModelParams,
    RateCallable,
    State,
    Weights,
    _require_finite,
    rhs_terms,
)


@dataclass(frozen=True)
class Costate:
    """Adjoint values (p1, p2, p3) paired with (R, C, P)."""

    p1: float
    p2: float
    p3: float

    def __post_init__(self) -> None:
        for name in ("p1", "p2", "p3"):
            _require_finite(name, getattr(self, name))


@dataclass(frozen=True)
class SwitchingValues:
    """Coefficients of (u1, u2) in the control-linear Hamiltonian."""

    phi1: float
    phi2: float


def costate_terms(
    R: float,
    C: float,
    P: float,
    p1: float,
    p2: float,
    p3: float,
    u1: float,
    u2: float,
    beta_t: float,
    gamma_t: float,
    alpha1: float,
    alpha2: float,
    lambda1: float,
    lambda2: float,
    kappa1: float,
    n0: float,
) -> tuple[float, float, float]:
    """Raw adjoint right-hand side on scalars; integrator kernel."""
    spread_gap = p3 - alpha2 * p1 - (1.0 - alpha2) * p2
    direct_gap = p3 - alpha1 * p1 - (1.0 - alpha1) * p2
    drive = (beta_t + u2) / (n0 * n0)
    dp1 = (
        lambda2 * (p1 - p2)
        + gamma_t * (p1 - p3)
        + spread_gap * drive * P * (C + P)
    )
    dp2 = (
        lambda1 * (p2 - p1)
        + gamma_t * (p2 - p3)
        - spread_gap * drive * P * R
    )
    dp3 = -kappa1 + direct_gap * u1 + spread_gap * drive * R * (C + R)
    return dp1, dp2, dp3


def costate_rhs(
    t: float,
    x: State,
    p: Costate,
    u: ControlPair,
    params: ModelParams,
    weights: Weights,
    beta: RateCallable,
    gamma: RateCallable,
    n0: float,
) -> tuple[float, float, float]:
    """Evaluate (dp1/dt, dp2/dt, dp3/dt) at time t with N fixed to n0."""
    _require_finite("t", t)
    n0 = _require_finite("n0", n0)
    if n0 <= 0.0:
        raise ValueError(f"n0 must be > 0, got {n0}")
    beta_t = _require_finite("beta(t)", beta(t))
    gamma_t = _require_finite("gamma(t)", gamma(t))
    return costate_terms(
        x.R,
        x.C,
        x.P,
        p.p1,
        p.p2,
        p.p3,
        u.u1,
        u.u2,
        beta_t,
        gamma_t,
        params.alpha1,
        params.alpha2,
        params.lambda1,
        params.lambda2,
        weights.kappa1,
        n0,
    )


def control_law_l2(
    x: State,
    p: Costate,
    params: ModelParams,
    weights: Weights,
    n0: float,
) -> ControlPair:
    """Quadratic-cost pointwise minimizer, clamped to the control box.

    u1 = clamp([p3 - alpha1*p1 - (1-alpha1)*p2] * P / (2*kappa2), 0, u1_max)
    u2 = clamp([p3 - alpha2*p1 - (1-alpha2)*p2] * P*R / (2*kappa3*n0), 0, u2_max)
    """
    if weights.kappa2 <= 0.0 or weights.kappa3 <= 0.0:
        raise ValueError("quadratic control law needs kappa2 > 0 and kappa3 > 0")
    if n0 <= 0.0:
        raise ValueError(f"n0 must be > 0, got {n0}")
    direct_gap = p.p3 - params.alpha1 * p.p1 - (1.0 - params.alpha1) * p.p2
    spread_gap = p.p3 - params.alpha2 * p.p1 - (1.0 - params.alpha2) * p.p2
    u1 = direct_gap * x.P / (2.0 * weights.kappa2)
    u2 = spread_gap * x.P * x.R / (2.0 * weights.kappa3 * n0)
    return ControlPair(
        u1=min(max(0.0, u1), params.u1_max),
        u2=min(max(0.0, u2), params.u2_max),
    )


def switching_functions(
    x: State,
    p: Costate,
    params: ModelParams,
    weights: Weights,
    n0: float,
) -> SwitchingValues:
    """Coefficients of u1 and u2 in the linear-cost Hamiltonian.

    phi1 = kappa2 + (alpha1*p1 + (1-alpha1)*p2 - p3) * P
    phi2 = kappa3 + (alpha2*p1 + (1-alpha2)*p2 - p3) * P*R/n0

    With vanishing terminal adjoints these end at (kappa2, kappa3), which
    forces both controls to switch off at the final time.
    """
    if n0 <= 0.0:
        raise ValueError(f"n0 must be > 0, got {n0}")
    phi1 = weights.kappa2 + (
        params.alpha1 * p.p1 + (1.0 - params.alpha1) * p.p2 - p.p3
    ) * x.P
    phi2 = weights.kappa3 + (
        params.alpha2 * p.p1 + (1.0 - params.alpha2) * p.p2 - p.p3
    ) * x.P * x.R / n0
    return SwitchingValues(phi1=phi1, phi2=phi2)


def control_law_l1(
    phi: SwitchingValues,
    params: ModelParams,
    previous: ControlPair,
    eps_singular: float = 1e-9,
) -> tuple[ControlPair, tuple[bool, bool]]:
    """Bang-bang law: u_i = 0 where phi_i > 0, u_i_max where phi_i < 0.

    Inside the deadband |phi_i| <= eps_singular the previous value is held
    and the component is flagged as a potential singular arc; no singular
    control synthesis is attempted.
    """
    if eps_singular < 0.0:
        raise ValueError("eps_singular must be >= 0")

    def pick(value: float, bound: float, prev: float) -> tuple[float, bool]:
        if value > eps_singular:
            return 0.0, False
        if value < -eps_singular:
            return bound, False
        return prev, True

    u1, singular1 = pick(phi.phi1, params.u1_max, previous.u1)
    u2, singular2 = pick(phi.phi2, params.u2_max, previous.u2)
    return ControlPair(u1=u1, u2=u2), (singular1, singular2)


def hamiltonian(
    t: float,
    x: State,
    p: Costate,
    u: ControlPair,
    objective: str,
    params: ModelParams,
    weights: Weights,
    beta: RateCallable,
    gamma: RateCallable,
    n0: float,
) -> float:
    """Running cost plus adjoint-weighted flow, with N fixed to n0.

    On the conserved simplex n0 equals R + C + P; callers probing state
    gradients should re-tie n0 to the perturbed total so the adjoint system
    remains the exact negative gradient.
    """
    if objective == "l2":
        running = (
            weights.kappa1 * x.P
            + weights.kappa2 * u.u1 * u.u1
            + weights.kappa3 * u.u2 * u.u2
        )
    elif objective == "l1":
        running = weights.kappa1 * x.P + weights.kappa2 * u.u1 + weights.kappa3 * u.u2
    else:
        raise ValueError(f"objective must be 'l1' or 'l2', got {objective!r}")
    if n0 <= 0.0 or not math.isfinite(n0):
        raise ValueError(f"n0 must be finite and > 0, got {n0}")
    dR, dC, dP = rhs_terms(
        x.R,
        x.C,
        x.P,
        u.u1,
        u.u2,
        beta(t),
        gamma(t),
        params.alpha1,
        params.alpha2,
        params.lambda1,
        params.lambda2,
        n0,
    )
    return running + p.p1 * dR + p.p2 * dC + p.p3 * dP
