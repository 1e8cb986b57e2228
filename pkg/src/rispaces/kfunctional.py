"""K-functionals for compatible couples of the implemented spaces.

Two evaluation routes exist for every couple:

* an oracle that minimizes ``norm0(g_c) + t * norm1(h_c)`` over the truncation
  family g_c = (f - c)_+, h_c = min(f, c) with c running over the step values
  (an upper bound on the true infimum, adequate for ratio experiments), and
* the explicit two-or-three-term equivalents, one per couple variant, with the
  split point obtained by inverting the couple's fundamental-function ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union
from weakref import WeakKeyDictionary

import numpy as np

from .config import DEFAULT, Resolution
from .errors import (
    BadExponent,
    ConditionCheckFailed,
    InfiniteNorm,
    OutOfRange,
)
from .logcalc import (
    LogWeight,
    MonotoneMap,
    UGrid,
    _adaptive_u,
    _subdivide,
    log_quad,
    sup_on_interval,
    weight_integral,
)
from .norms import (
    Grand,
    Lebesgue,
    Small,
    SpaceSpec,
    fundamental_equivalent_weight,
    norms_over_cuts,
    space_norm,
)
from .rearrangement import (
    StepRearrangement,
    capped_part,
    excess_part,
    head_restriction,
    prefix_power_at,
    rearrange_from_samples,
    tail_power_at,
    tail_rearranged,
)

__all__ = [
    "LpLq",
    "GrandLq",
    "GrandGrand",
    "SmallSmall",
    "GrandSmallSameP",
    "General",
    "CoupleSpec",
    "KCurve",
    "couple_spaces",
    "couple_psi",
    "split_point",
    "k_oracle",
    "k_explicit",
    "k_curve",
    "check_C_conditions",
]


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise BadExponent(msg)


@dataclass(frozen=True)
class LpLq:
    p: float
    q: float

    def __post_init__(self):
        _check(1.0 <= self.p < self.q <= math.inf, "need 1 <= p < q <= inf")


@dataclass(frozen=True)
class GrandLq:
    p: float
    q: float
    alpha: float

    def __post_init__(self):
        _check(1.0 < self.p < self.q < math.inf, "need 1 < p < q < inf")
        _check(self.alpha > 0.0, "need alpha > 0")


@dataclass(frozen=True)
class GrandGrand:
    p: float
    q: float
    alpha: float

    def __post_init__(self):
        _check(1.0 < self.p < self.q < math.inf, "need 1 < p < q < inf")
        _check(self.alpha > 0.0, "need alpha > 0")


@dataclass(frozen=True)
class SmallSmall:
    """Couple of two small spaces, both with log parameter one."""

    p: float
    q: float

    def __post_init__(self):
        _check(1.0 < self.p < self.q < math.inf, "need 1 < p < q < inf")


@dataclass(frozen=True)
class GrandSmallSameP:
    """Grand and small space sharing the exponent p (log parameter one)."""

    p: float

    def __post_init__(self):
        _check(1.0 < self.p < math.inf, "need 1 < p < inf")


@dataclass(frozen=True)
class General:
    x0: SpaceSpec
    x1: SpaceSpec


CoupleSpec = Union[LpLq, GrandLq, GrandGrand, SmallSmall, GrandSmallSameP, General]


def couple_spaces(c: CoupleSpec) -> Tuple[SpaceSpec, SpaceSpec]:
    if isinstance(c, LpLq):
        return Lebesgue(c.p), Lebesgue(c.q)
    if isinstance(c, GrandLq):
        return Grand(c.p, c.alpha), Lebesgue(c.q)
    if isinstance(c, GrandGrand):
        return Grand(c.p, c.alpha), Grand(c.q, c.alpha)
    if isinstance(c, SmallSmall):
        return Small(c.p, 1.0), Small(c.q, 1.0)
    if isinstance(c, GrandSmallSameP):
        return Grand(c.p, 1.0), Small(c.p, 1.0)
    if isinstance(c, General):
        return c.x0, c.x1
    raise TypeError(f"unknown couple {c!r}")


def couple_psi(c: CoupleSpec) -> LogWeight:
    """The ratio map whose inverse locates the split point of the explicit forms."""
    if isinstance(c, LpLq):
        iq = 0.0 if math.isinf(c.q) else 1.0 / c.q
        return LogWeight(1.0 / c.p - iq, 0.0)
    if isinstance(c, GrandLq):
        return LogWeight(1.0 / c.p - 1.0 / c.q, -c.alpha / c.p)
    if isinstance(c, GrandGrand):
        return LogWeight(1.0 / c.p - 1.0 / c.q, -c.alpha / c.p + c.alpha / c.q)
    if isinstance(c, SmallSmall):
        return LogWeight(1.0 / c.p - 1.0 / c.q, (c.p - c.q + c.p * c.q) / (c.p * c.q))
    if isinstance(c, GrandSmallSameP):
        return LogWeight(0.0, -1.0)
    if isinstance(c, General):
        w0 = fundamental_equivalent_weight(c.x0)
        w1 = fundamental_equivalent_weight(c.x1)
        return LogWeight(w0.a - w1.a, w0.b - w1.b)
    raise TypeError(f"unknown couple {c!r}")


def split_point(c: CoupleSpec, t: float, tol: float = 1e-12) -> float:
    """phi(t): inverse of the couple's ratio map at t."""
    if isinstance(c, LpLq):
        iq = 0.0 if math.isinf(c.q) else 1.0 / c.q
        sigma = 1.0 / (1.0 / c.p - iq)
        return min(t**sigma, 1.0)
    if isinstance(c, GrandSmallSameP):
        if t > 1.0:
            raise OutOfRange("ratio map of this couple only reaches 1")
        return math.exp(1.0 - 1.0 / t)
    return MonotoneMap(couple_psi(c)).inverse(t, tol)


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

_LINES_CACHE: "WeakKeyDictionary[StepRearrangement, dict]" = WeakKeyDictionary()


def oracle_lines(
    f: StepRearrangement, couple: CoupleSpec, res: Resolution = DEFAULT
) -> Tuple[np.ndarray, np.ndarray]:
    """Per-cut intercepts/slopes (norm0 of the excess, norm1 of the cap).

    The oracle K at any t is the lower envelope min_c(A_c + t B_c); cuts do not
    depend on t, so the arrays are cached on the function.
    """
    per_f = _LINES_CACHE.setdefault(f, {})
    key = (couple, res.sup_count, res.u_max, res.rel_tol)
    if key not in per_f:
        x0, x1 = couple_spaces(couple)
        cuts = np.unique(np.concatenate([[0.0], f.values]))
        A = norms_over_cuts(f, x0, cuts, "excess", res)
        B = norms_over_cuts(f, x1, cuts, "capped", res)
        per_f[key] = (A, B)
    return per_f[key]


def k_oracle(
    f: StepRearrangement, couple: CoupleSpec, t: float, res: Resolution = DEFAULT
) -> float:
    """min over truncation cuts of norm0((f-c)_+) + t·norm1(min(f, c))."""
    if not t > 0.0:
        raise BadExponent("K argument must be positive")
    A, B = oracle_lines(f, couple, res)
    vals = A + t * B
    finite = np.isfinite(vals)
    if not np.any(finite):
        raise InfiniteNorm("no trial decomposition has finite component norms")
    return float(np.min(vals[finite]))


# ---------------------------------------------------------------------------
# explicit equivalents
# ---------------------------------------------------------------------------


def _windowed_grand_sup(
    f: StepRearrangement, p: float, alpha: float, lo: float, hi: float, res: Resolution
) -> float:
    """sup over (lo, hi] of (1-Log s)^{-alpha/p} (∫_s^hi f^p)^{1/p}."""
    if hi < 1e-300:
        return 0.0
    e = -alpha / p
    ip = 1.0 / p
    top = prefix_power_at(f, p, hi)

    def g(s):
        s = np.asarray(s, dtype=float)
        return (1.0 - np.log(s)) ** e * np.maximum(
            top - prefix_power_at(f, p, s), 0.0
        ) ** ip

    val, _ = sup_on_interval(
        g, lo, hi, res.sup_count, f.breaks[1:], u_cap=res.u_max + 6.0
    )
    return val


def _windowed_tail_sup(
    f: StepRearrangement, q: float, alpha: float, lo: float, res: Resolution
) -> float:
    """sup over (lo, 1) of (1-Log s)^{-alpha/q} (∫_s^1 f^q)^{1/q}."""
    e = -alpha / q
    iq = 1.0 / q

    def g(s):
        s = np.asarray(s, dtype=float)
        return (1.0 - np.log(s)) ** e * tail_power_at(f, q, s) ** iq

    val, _ = sup_on_interval(
        g, lo, 1.0, res.sup_count, f.breaks[1:], u_cap=res.u_max + 6.0
    )
    return val


def _offset_prefix_integral(
    f: StepRearrangement, p: float, phi: float, res: Resolution
) -> float:
    """∫_phi^1 (1-Log s)^{-1/p} (∫_phi^s f^p)^{1/p} ds/s.

    The integrand vanishes like (s-phi)^{1/p} at the left end; within the step
    panel containing phi the inner integral is exactly v^p (s-phi), so that
    stretch is integrated after the substitution y = (s-phi)^{1/p}, which makes
    it smooth.  The remainder has a positive offset and needs no special care.
    """
    ip = 1.0 / p
    base = float(prefix_power_at(f, p, phi))
    j = min(int(np.searchsorted(f.breaks, phi, side="left")), f.n)
    x_hi = float(f.breaks[j]) if f.breaks[j] > phi else float(f.breaks[min(j + 1, f.n)])
    x_hi = min(x_hi, 1.0)
    v = float(f.values[max(j, 1) - 1]) if f.breaks[j] > phi else float(f.values[min(j, f.n - 1)])
    total = 0.0
    if phi == 0.0:
        # inner integral is exactly v^p s on the whole stretch: a pure kernel
        total += v * weight_integral(LogWeight(ip - 1.0, -ip), 0.0, x_hi, res.rel_tol)
    else:
        # the (s - phi)^{1/p} root is resolved by y = (s - phi)^{1/p} up to 2 phi,
        # beyond which (1 - phi/s)^{1/p} is smooth on the log scale
        s1 = min(x_hi, 2.0 * phi)
        y_top = (s1 - phi) ** ip
        if y_top > 0.0:
            log_phi = math.log(phi)

            def fy(y):
                l = p * np.log(np.asarray(y, dtype=float))
                m = np.maximum(l, log_phi)
                log_s = m + np.log1p(np.exp(-np.abs(l - log_phi)))
                ratio = 1.0 / (1.0 + np.exp(log_phi - l))
                return p * v * ratio * (1.0 - log_s) ** (-ip)

            total += _adaptive_u(fy, _subdivide(0.0, y_top, y_top / 8.0), res.rel_tol)
        if s1 < x_hi:

            def g1(s):
                s = np.asarray(s, dtype=float)
                return v * (1.0 - phi / s) ** ip

            total += log_quad(g1, LogWeight(ip - 1.0, -ip), s1, x_hi, res.rel_tol)
    if x_hi < 1.0:

        def g(s):
            return np.maximum(
                prefix_power_at(f, p, np.asarray(s, dtype=float)) - base, 0.0
            ) ** ip

        total += log_quad(g, LogWeight(-1.0, -ip), x_hi, 1.0, res.rel_tol, f.breaks[1:-1])
    return total


def k_explicit(
    f: StepRearrangement, couple: CoupleSpec, t: float, res: Resolution = DEFAULT
) -> float:
    """The couple's displayed equivalent of K(f, t), term by term."""
    if not t > 0.0:
        raise BadExponent("K argument must be positive")
    if isinstance(couple, LpLq):
        phi = split_point(couple, t)
        first = prefix_power_at(f, couple.p, phi) ** (1.0 / couple.p)
        if math.isinf(couple.q):
            return float(first)
        return float(first + t * tail_power_at(f, couple.q, phi) ** (1.0 / couple.q))
    if isinstance(couple, GrandLq):
        phi = split_point(couple, t)
        first = _windowed_grand_sup(f, couple.p, couple.alpha, 0.0, phi, res)
        second = t * tail_power_at(f, couple.q, phi) ** (1.0 / couple.q)
        return first + float(second)
    if isinstance(couple, GrandGrand):
        phi = split_point(couple, t)
        first = _windowed_grand_sup(f, couple.p, couple.alpha, 0.0, phi, res)
        second = t * _windowed_tail_sup(f, couple.q, couple.alpha, phi, res)
        return first + second
    if isinstance(couple, SmallSmall):
        p, q = couple.p, couple.q
        phi = split_point(couple, t)
        ip = 1.0 / p

        def g(s):
            return prefix_power_at(f, p, np.asarray(s, dtype=float)) ** ip

        x1 = f.min_positive_break()
        k1 = f.values[0] * weight_integral(
            LogWeight(ip - 1.0, -ip), 0.0, min(x1, phi), res.rel_tol
        )
        if phi > x1:
            k1 += log_quad(g, LogWeight(-1.0, -ip), x1, phi, res.rel_tol, f.breaks[1:-1])
        if t >= math.e:
            raise OutOfRange("second term of this form needs 1 - Log t > 0")
        # the middle term carries the outer argument t, not the split point
        k2 = (1.0 - math.log(t)) ** ((p - 1.0) / p) * float(prefix_power_at(f, p, phi)) ** ip
        k3 = t * _windowed_tail_sup(f, q, 1.0, phi, res)
        return float(k1 + k2 + k3)
    if isinstance(couple, GrandSmallSameP):
        p = couple.p
        phi = split_point(couple, t)
        first = _windowed_grand_sup(f, p, 1.0, 0.0, phi, res)
        second = t * _offset_prefix_integral(f, p, phi, res) if phi < 1.0 else 0.0
        return first + float(second)
    if isinstance(couple, General):
        _ensure_conditions(couple, res)
        x = split_point(couple, t)
        if not (0.0 < x < 1.0):
            raise OutOfRange("split point left (0, 1)")
        head = space_norm(head_restriction(f, x), couple.x0, res)
        tail = space_norm(tail_rearranged(f, x), couple.x1, res)
        return head + t * tail
    raise TypeError(f"unknown couple {couple!r}")


# ---------------------------------------------------------------------------
# sampled curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KCurve:
    """K(f, t) sampled on a log t-grid, with monotonicity/concavity flags.

    ``monotone_ok``: values nondecreasing in t (1e-9 relative slack);
    ``concave_ok``: values/t nonincreasing (same slack).  Oracle curves satisfy
    both by construction; explicit curves may not, hence flags instead of errors.
    """

    t_nodes: np.ndarray
    k_values: np.ndarray
    monotone_ok: bool = field(init=False)
    concave_ok: bool = field(init=False)

    def __post_init__(self):
        t = np.asarray(self.t_nodes, dtype=float)
        k = np.asarray(self.k_values, dtype=float)
        if t.ndim != 1 or t.size < 2 or k.shape != t.shape:
            raise BadExponent("curve needs matching t and K arrays, length >= 2")
        if not np.all(np.diff(t) > 0):
            raise BadExponent("curve nodes must be strictly increasing")
        if np.any(k < 0) or not np.all(np.isfinite(k)):
            raise BadExponent("curve values must be finite and nonnegative")
        scale = float(np.max(k)) + 1e-300
        slack = 1e-9 * scale
        object.__setattr__(self, "t_nodes", t)
        object.__setattr__(self, "k_values", k)
        object.__setattr__(self, "monotone_ok", bool(np.all(np.diff(k) >= -slack)))
        ratio = k / t
        object.__setattr__(
            self, "concave_ok", bool(np.all(np.diff(ratio) <= 1e-9 * np.abs(ratio[:-1]) + slack))
        )


def k_curve(
    f: StepRearrangement,
    couple: CoupleSpec,
    grid: UGrid,
    method: str = "oracle",
    res: Resolution = DEFAULT,
) -> KCurve:
    """Sample K(f, t) at the grid's t-nodes by the chosen method."""
    ts = grid.t_nodes()
    if method == "oracle":
        A, B = oracle_lines(f, couple, res)
        finite = np.isfinite(A) & np.isfinite(B)
        if not np.any(finite):
            raise InfiniteNorm("no trial decomposition has finite component norms")
        vals = np.min(A[finite][None, :] + ts[:, None] * B[finite][None, :], axis=1)
    elif method == "explicit":
        vals = np.array([k_explicit(f, couple, float(t), res) for t in ts])
    else:
        raise BadExponent(f"unknown method {method!r}")
    return KCurve(ts, vals)


# ---------------------------------------------------------------------------
# coupling conditions for the general two-space equivalent
# ---------------------------------------------------------------------------

_CONDITION_CACHE: dict = {}


def _discretized_quotient(weight: LogWeight, lo: float, hi: float, grid: UGrid):
    """Rearrangement of 1/weight restricted to (lo, hi], as weighted samples."""
    u_hi = 1.0 - math.log(max(lo, math.exp(1.0 - grid.u_max)))
    u_lo = 1.0 - math.log(hi)
    edges = np.exp(1.0 - np.linspace(u_lo, u_hi, max(grid.count // 16, 64)))[::-1]
    edges[0] = max(lo, edges[0])
    mids = np.sqrt(edges[:-1] * edges[1:])
    widths = np.diff(edges)
    keep = widths > 0
    vals = 1.0 / weight(mids[keep])
    samples = list(zip(vals, widths[keep]))
    slack = 1.0 - float(np.sum(widths[keep]))
    if slack > 0:
        samples.append((0.0, slack))
    total = sum(w for _, w in samples)
    samples = [(v, w / total) for v, w in samples]
    return rearrange_from_samples(samples)


def check_C_conditions(x0: SpaceSpec, x1: SpaceSpec, grid: UGrid, res: Resolution = DEFAULT) -> dict:
    """Empirical suprema of the three coupling conditions, with refinement drift.

    C0: ∫_0^t ds/Φ_i over t/Φ_i(t); C1: (Φ1/Φ0)(t)·norm0 of χ_{(0,t]}/Φ1;
    C2: (Φ0/Φ1)(t)·norm1 of χ_{(t,1]}/Φ0.  Pass = all finite and stable
    (< 5% change) when the probe grid is doubled.
    """
    w0 = fundamental_equivalent_weight(x0)
    w1 = fundamental_equivalent_weight(x1)

    def sups(g: UGrid, m: int):
        # nested probe sets: doubling m to 2m-1 keeps every base probe
        ts = np.exp(1.0 - np.linspace(1.0, g.u_max, m))
        c0 = [0.0, 0.0]
        for i, w in enumerate((w0, w1)):
            inv = LogWeight(-w.a, -w.b)
            vals = [
                weight_integral(inv, 0.0, float(t)) / (float(t) * float(inv(t)))
                for t in ts
            ]
            c0[i] = max(vals)
        c1 = 0.0
        c2 = 0.0
        for t in ts:
            t = float(t)
            ratio = float(w0(t) / w1(t))
            q1 = _discretized_quotient(w1, 0.0, t, g)
            c1 = max(c1, space_norm(q1, x0, res) / ratio)
            if t < 1.0:
                q2 = _discretized_quotient(w0, t, 1.0, g)
                c2 = max(c2, ratio * space_norm(q2, x1, res))
        return np.array([c0[0], c0[1], c1, c2])

    m = max(9, grid.count // 2 + 1)
    base = sups(grid, m)
    fine = sups(grid.doubled(), 2 * m - 1)
    drift = np.abs(fine - base) / np.maximum(np.abs(base), 1e-300)
    finite = bool(np.all(np.isfinite(base)) and np.all(np.isfinite(fine)))
    return {
        "c0": (float(base[0]), float(base[1])),
        "c1": float(base[2]),
        "c2": float(base[3]),
        "drift": drift.tolist(),
        "passed": finite and bool(np.all(drift < 0.05)),
    }


def _ensure_conditions(couple: General, res: Resolution) -> None:
    key = (couple.x0, couple.x1)
    if key not in _CONDITION_CACHE:
        _CONDITION_CACHE[key] = check_C_conditions(
            couple.x0, couple.x1, UGrid(res.u_max, 256), res
        )
    if not _CONDITION_CACHE[key]["passed"]:
        raise ConditionCheckFailed(f"coupling conditions failed: {_CONDITION_CACHE[key]}")
