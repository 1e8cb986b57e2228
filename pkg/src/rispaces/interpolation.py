"""Interpolation-space norms from K-curves, and the identified target norms.

The interpolation norm weighs a K-curve by t^{-theta}(1 - Log t)^alpha in
L^r(dt/t).  Between curve nodes K is log-log interpolated, which makes every
segment a pure power and the whole integral a sum of closed-ish kernel terms;
below the first node K is extended linearly (K(t) ∝ t), which is the boundary
behavior forced by the finiteness of the second component norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .config import DEFAULT, Resolution
from .errors import BadExponent, Divergent, HypothesisViolation
from .kfunctional import (
    CoupleSpec,
    General,
    GrandGrand,
    GrandLq,
    GrandSmallSameP,
    KCurve,
    LpLq,
    SmallSmall,
    k_curve,
)
from .logcalc import LogWeight, UGrid, log_quad, tail_block_integral, weight_integral
from .norms import (
    GammaDouble,
    Small,
    ggamma_norm,
    grand_norm,
    lebesgue_norm,
    lorentz_zygmund_norm,
    small_norm,
)
from .rearrangement import StepRearrangement, power_integral, prefix_power_at, tail_power_at

__all__ = [
    "InterpParams",
    "DerivedExponents",
    "derived_exponents",
    "interp_norm",
    "identify_target",
    "theorem_couple",
    "z_norm",
    "z_norm_alt",
    "doubling_time",
    "THEOREM_IDS",
]


@dataclass(frozen=True)
class InterpParams:
    theta: float
    r: float
    alpha: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= 1.0):
            raise BadExponent("theta must lie in [0, 1]")
        if not self.r >= 1.0:
            raise BadExponent("r must be >= 1")
        if not math.isfinite(self.alpha):
            raise BadExponent("alpha must be finite")


@dataclass(frozen=True)
class DerivedExponents:
    p_theta: float
    sigma: float
    alpha_theta: float
    lam: float
    lam1: float
    a: float
    beta_theta: float


def derived_exponents(p: float, q: float, theta: float, r: float) -> DerivedExponents:
    """The exponent bookkeeping shared by all identities."""
    inv_p_theta = (1.0 - theta) / p + (theta / q if not math.isinf(q) else 0.0)
    lam = theta * (1.0 / p - (1.0 / q if not math.isinf(q) else 0.0))
    lam1 = (1.0 - theta) * (1.0 / p - (1.0 / q if not math.isinf(q) else 0.0))
    p_theta = 1.0 / inv_p_theta
    return DerivedExponents(
        p_theta=p_theta,
        sigma=p * q / (q - p) if not math.isinf(q) else p,
        alpha_theta=1.0 - theta - inv_p_theta,
        lam=lam,
        lam1=lam1,
        a=lam - theta,
        beta_theta=theta - 1.0 / p - 1.0 / r,
    )


# ---------------------------------------------------------------------------
# the interpolation norm of a sampled curve
# ---------------------------------------------------------------------------


def _segment_power(t0, t1, k0, k1) -> Optional[float]:
    if k0 <= 0.0 or k1 <= 0.0:
        return None
    return math.log(k1 / k0) / math.log(t1 / t0)


def _sup_power_log(c: float, d: float, ua: float, ub: float) -> Tuple[float, float]:
    """max of e^{(1-u)c} u^d over [ua, ub], closed form (endpoints or u* = d/c)."""
    cands = [ua, ub]
    if c != 0.0 and d != 0.0:
        ustar = d / c
        if ua < ustar < ub:
            cands.append(ustar)
    best_v, best_u = -math.inf, ua
    for u in cands:
        v = math.exp((1.0 - u) * c) * u**d
        if v > best_v:
            best_v, best_u = v, u
    return best_v, best_u


def interp_norm(curve: KCurve, params: InterpParams, rel_tol: float = 1e-10) -> float:
    """(∫_0^1 [t^{-theta}(1-Log t)^alpha K(t)]^r dt/t)^{1/r}, sup form for r = inf.

    Raises Divergent when the weighted integral is infinite (the function lies
    outside the interpolation space).
    """
    theta, r, alpha = params.theta, params.r, params.alpha
    t = curve.t_nodes
    k = curve.k_values
    if np.all(k == 0.0):
        return 0.0
    slope0 = k[0] / t[0]
    if math.isinf(r):
        best = 0.0
        # below the first node: K = slope0 * t, objective slope0 t^{1-theta}(1-Log t)^alpha
        if slope0 > 0.0:
            ua = float(1.0 - np.log(t[0]))
            if theta < 1.0:
                ub = max(ua + 1.0, alpha / (1.0 - theta) + 1.0)
                v, _ = _sup_power_log(1.0 - theta, alpha, ua, ub)
                best = slope0 * v
            elif alpha > 0.0:
                raise Divergent("sup form diverges toward 0")
            else:
                best = slope0 * ua**alpha
        for i in range(t.size - 1):
            m = _segment_power(t[i], t[i + 1], k[i], k[i + 1])
            ua, ub = float(1.0 - np.log(t[i + 1])), float(1.0 - np.log(t[i]))
            if m is None:
                vals = [
                    k[j] * t[j] ** -theta * (1.0 - math.log(t[j])) ** alpha
                    for j in (i, i + 1)
                    if k[j] > 0
                ]
                best = max([best, *vals]) if vals else best
                continue
            c = m - theta
            scale = k[i] * t[i] ** -m
            v, _ = _sup_power_log(c, alpha, ua, ub)
            best = max(best, scale * v)
        return best
    total = 0.0
    # analytic tail below the first node
    if slope0 > 0.0:
        w = weight_integral(LogWeight((1.0 - theta) * r - 1.0, alpha * r), 0.0, float(t[0]), rel_tol)
        if math.isinf(w):
            raise Divergent("interpolation integral diverges at 0")
        total += slope0**r * w
    for i in range(t.size - 1):
        m = _segment_power(t[i], t[i + 1], k[i], k[i + 1])
        if m is None:
            if k[i] == 0.0 and k[i + 1] == 0.0:
                continue
            lo, hi = float(t[i]), float(t[i + 1])
            k0, k1 = float(k[i]), float(k[i + 1])

            def g(s):
                return (k0 + (k1 - k0) * (s - lo) / (hi - lo)) ** r

            total += log_quad(g, LogWeight(-theta * r - 1.0, alpha * r), lo, hi, rel_tol)
            continue
        scale = float(k[i]) ** r * float(t[i]) ** (-m * r)
        total += scale * weight_integral(
            LogWeight((m - theta) * r - 1.0, alpha * r), float(t[i]), float(t[i + 1]), rel_tol
        )
    if not math.isfinite(total):
        raise Divergent("interpolation integral diverges")
    return total ** (1.0 / r)


# ---------------------------------------------------------------------------
# identified target norms
# ---------------------------------------------------------------------------

THEOREM_IDS = ("T1.1", "T3.1", "T1.2", "T3.4", "T5.1", "P4.1", "P4.2", "T1.3", "T6.2")


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise HypothesisViolation(msg)


def theorem_couple(theorem_id: str, p=None, q=None, alpha=None) -> CoupleSpec:
    if theorem_id == "T1.1":
        return GrandLq(p, q, alpha)
    if theorem_id == "T3.1":
        return LpLq(p, q)
    if theorem_id == "T1.2":
        return GrandGrand(p, q, alpha)
    if theorem_id == "T3.4":
        if alpha == 1.0:
            return SmallSmall(p, q)
        return General(Small(p, alpha), Small(q, alpha))
    if theorem_id == "T5.1":
        return SmallSmall(p, q)
    if theorem_id == "P4.1":
        return LpLq(p, math.inf)
    if theorem_id == "P4.2":
        return LpLq(p, q)
    if theorem_id in ("T1.3", "T6.2"):
        return GrandSmallSameP(p)
    raise HypothesisViolation(f"unknown experiment id {theorem_id!r}")


def _interp_params(theorem_id, p, q, theta, r, alpha) -> InterpParams:
    if theorem_id in ("T1.1", "T3.1"):
        return InterpParams(1.0, math.inf, -alpha / q)
    if theorem_id in ("T1.2", "T3.4", "T5.1", "T1.3", "T6.2"):
        return InterpParams(theta, r, 0.0)
    if theorem_id in ("P4.1", "P4.2"):
        return InterpParams(0.0, 1.0, -alpha / p + alpha - 1.0)
    raise HypothesisViolation(f"unknown experiment id {theorem_id!r}")


def _check_hypotheses(theorem_id, p, q, theta, r, alpha) -> None:
    if theorem_id == "T1.1":
        _need(p is not None and q is not None and alpha is not None, "need p, q, alpha")
        _need(1.0 < p < q < math.inf, "need 1 < p < q < inf")
        _need(alpha > 0.0, "need alpha > 0")
    elif theorem_id == "T3.1":
        _need(p is not None and q is not None and alpha is not None, "need p, q, alpha")
        _need(1.0 <= p < q < math.inf, "need 1 <= p < q < inf")
        _need(alpha > 0.0, "need alpha > 0")
    elif theorem_id in ("T1.2", "T3.4"):
        _need(None not in (p, q, theta, r, alpha), "need p, q, theta, r, alpha")
        _need(1.0 < p < q < math.inf, "need 1 < p < q < inf")
        _need(0.0 < theta < 1.0, "need 0 < theta < 1")
        _need(1.0 <= r < math.inf, "need 1 <= r < inf")
        _need(alpha > 0.0, "need alpha > 0")
        if theorem_id == "T3.4":
            _need(r > 1.0, "need r > 1")
    elif theorem_id == "T5.1":
        _need(None not in (p, q, theta, r), "need p, q, theta, r")
        _need(1.0 < p < q < math.inf, "need 1 < p < q < inf")
        _need(0.0 < theta < 1.0, "need 0 < theta < 1")
        _need(1.0 <= r < math.inf, "need 1 <= r < inf")
    elif theorem_id == "P4.1":
        _need(None not in (p, alpha), "need p, alpha")
        _need(1.0 < p < math.inf, "need 1 < p < inf")
        _need(alpha > 0.0, "need alpha > 0")
    elif theorem_id == "P4.2":
        _need(None not in (p, q, alpha), "need p, q, alpha")
        _need(1.0 < p < q < math.inf, "need 1 < p < q < inf")
        _need(alpha > 0.0, "need alpha > 0")
    elif theorem_id in ("T1.3", "T6.2"):
        _need(None not in (p, theta, r), "need p, theta, r")
        _need(1.0 < p < math.inf, "need 1 < p < inf")
        _need(0.0 < theta < 1.0, "need 0 < theta < 1")
        _need(1.0 <= r < math.inf, "need 1 <= r < inf")
    else:
        raise HypothesisViolation(f"unknown experiment id {theorem_id!r}")


def identify_target(
    theorem_id: str,
    f: StepRearrangement,
    p: float = None,
    q: float = None,
    theta: float = None,
    r: float = None,
    alpha: float = None,
    res: Resolution = DEFAULT,
    curve: Optional[KCurve] = None,
) -> Tuple[float, float]:
    """(interpolation norm from the oracle K-curve, identified target norm)."""
    _check_hypotheses(theorem_id, p, q, theta, r, alpha)
    couple = theorem_couple(theorem_id, p, q, alpha)
    if curve is None:
        curve = k_curve(f, couple, UGrid(res.u_max, res.k_nodes), "oracle", res)
    lhs = interp_norm(curve, _interp_params(theorem_id, p, q, theta, r, alpha), res.rel_tol)
    if theorem_id in ("T1.1", "T3.1"):
        rhs = grand_norm(f, q, alpha, res)
    elif theorem_id == "T1.2":
        d = derived_exponents(p, q, theta, r)
        rhs = lorentz_zygmund_norm(f, d.p_theta, r, -alpha / d.p_theta, res)
    elif theorem_id == "T3.4":
        d = derived_exponents(p, q, theta, r)
        rhs = lorentz_zygmund_norm(f, d.p_theta, r, alpha / d.p_theta, res)
    elif theorem_id == "T5.1":
        d = derived_exponents(p, q, theta, r)
        rhs = lorentz_zygmund_norm(f, d.p_theta, r, d.alpha_theta, res)
    elif theorem_id in ("P4.1", "P4.2"):
        rhs = small_norm(f, p, alpha, res)
    elif theorem_id == "T1.3":
        spec = GammaDouble(
            p, r, LogWeight(-1.0, theta * r - 1.0), LogWeight(0.0, -1.0)
        )
        rhs = ggamma_norm(f, spec, res)
    elif theorem_id == "T6.2":
        rhs = z_norm(f, p, theta, r, res)
    else:  # pragma: no cover
        raise HypothesisViolation(theorem_id)
    return lhs, rhs


# ---------------------------------------------------------------------------
# equivalent norms of the same-exponent interpolation scale
# ---------------------------------------------------------------------------


def doubling_time(k: int) -> float:
    """t_k = 2^{1 - 2^k}: the doubly-exponential grid of the critical case."""
    if k < 0:
        raise BadExponent("index must be a natural number")
    return float(2.0 ** (1.0 - 2.0 ** float(k)))


def z_norm(
    f: StepRearrangement, p: float, theta: float, r: float, res: Resolution = DEFAULT
) -> float:
    """Equivalent norm of the same-exponent couple's (theta, r) space.

    Three regimes split on theta vs 1/p: a tail form, a prefix form, and the
    doubly-exponential block sum at theta = 1/p (exact on step data).
    """
    if not (1.0 < p < math.inf and 0.0 < theta < 1.0 and 1.0 <= r < math.inf):
        raise BadExponent("need 1 < p < inf, 0 < theta < 1, 1 <= r < inf")
    bt = theta - 1.0 / p - 1.0 / r
    ip = 1.0 / p
    if theta == ip:
        # block sum over t_k = 2^{1-2^k}; exact on step data, and the grid
        # underflows past machine range after ~11 blocks
        total = 0.0
        k = 0
        while True:
            t_hi, t_lo = doubling_time(k), doubling_time(k + 1)
            total += power_integral(f, p, t_lo, t_hi) ** (r / p)
            if t_lo == 0.0:
                break
            k += 1
        return total ** (1.0 / r)
    if theta < ip:
        tot = float(prefix_power_at(f, p, 1.0))
        if tot == 0.0:
            return 0.0

        def g(t):
            return tail_power_at(f, p, np.asarray(t, dtype=float)) ** (r / p)

        x1 = f.min_positive_break()
        v1 = float(f.values[0]) ** p
        head = tail_block_integral(bt * r, tot, v1, r / p, x1, res.rel_tol)
        return (head + log_quad(g, LogWeight(-1.0, bt * r), x1, 1.0, res.rel_tol, f.breaks[1:-1])) ** (
            1.0 / r
        )

    def g(t):
        return prefix_power_at(f, p, np.asarray(t, dtype=float)) ** (r / p)

    x1 = f.min_positive_break()
    v1 = float(f.values[0])
    head = v1**r * weight_integral(LogWeight(r / p - 1.0, bt * r), 0.0, x1, res.rel_tol)
    return (head + log_quad(g, LogWeight(-1.0, bt * r), x1, 1.0, res.rel_tol, f.breaks[1:-1])) ** (
        1.0 / r
    )


def z_norm_alt(
    f: StepRearrangement, p: float, theta: float, r: float, res: Resolution = DEFAULT
) -> float:
    """The discretization-derived twin of z_norm: inner log-damped prefix
    integrals under an outer (1 - Log t)^{theta r} weight in dt/((1-Log t) t)."""
    if not (1.0 < p < math.inf and 0.0 < theta < 1.0 and 1.0 <= r < math.inf):
        raise BadExponent("need 1 < p < inf, 0 < theta < 1, 1 <= r < inf")
    spec = GammaDouble(p, r, LogWeight(-1.0, theta * r - 1.0), LogWeight(0.0, -1.0))
    from .norms import _w2_prefix_at

    def g(t):
        return _w2_prefix_at(f, spec, np.asarray(t, dtype=float)) ** (r / p)

    return log_quad(
        g, LogWeight(-1.0, theta * r - 1.0), 0.0, 1.0, res.rel_tol, f.breaks[1:-1]
    ) ** (1.0 / r)
