"""Log-scale quadrature, supremum search, and monotone-map inversion.

Every weight in this package has the shape w(t) = t^a (1 - Log t)^b on (0, 1).
Substituting u = 1 - Log t turns such weights into e^{(1-u)(a+1)} u^b, smooth
and polynomially-varying on a uniform grid, so all integrals and suprema are
done in the u variable.  Integrals over step panels use closed forms where the
antiderivative is elementary (b = 0, or a = -1) and adaptive 15-point
Gauss-Legendre panels otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Tuple

import numpy as np

from .errors import (
    BadExponent,
    BadInterval,
    Divergent,
    NoConvergence,
    NonFiniteValue,
    OutOfRange,
)
from .rearrangement import StepFunction, prefix_power_at

__all__ = [
    "LogWeight",
    "MonotoneMap",
    "UGrid",
    "u_of_t",
    "t_of_u",
    "weight_integral",
    "log_weight_integral",
    "log_quad",
    "sup_on_grid",
    "sup_on_interval",
    "invert_monotone",
    "log_integral_bounds_check",
    "tail_block_integral",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(15)
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_MAX_PANELS = 200_000


def u_of_t(t):
    return 1.0 - np.log(t)


def t_of_u(u):
    return np.exp(1.0 - np.asarray(u, dtype=float))


@dataclass(frozen=True)
class LogWeight:
    """w(t) = t^a (1 - Log t)^b on (0, 1)."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise BadExponent("weight exponents must be finite")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return t**self.a * (1.0 - np.log(t)) ** self.b

    def value_at_u(self, u):
        """w(e^{1-u}) without leaving the u scale."""
        u = np.asarray(u, dtype=float)
        return np.exp((1.0 - u) * self.a + self.b * np.log(u))

    def u_form(self, u):
        """w(t(u))·|dt/du|: the integrand of ∫ w dt after t = e^{1-u}."""
        u = np.asarray(u, dtype=float)
        return np.exp((1.0 - u) * (self.a + 1.0) + self.b * np.log(u))

    def doubling_constant(self) -> float:
        """K with w(2t) <= K w(t) on (0, 1/2); closed form for this weight family."""
        ln2 = math.log(2.0)
        return 2.0**self.a * max(1.0, (1.0 + ln2) ** -self.b)


@dataclass(frozen=True)
class UGrid:
    """Log grid: u uniform on [1, u_max], nodes t_j = e^{1-u_j}."""

    u_max: float = 35.0
    count: int = 4096

    def __post_init__(self):
        if not self.u_max > 1.0:
            raise BadInterval("u_max must exceed 1")
        if self.count < 2:
            raise BadInterval("need at least two grid nodes")

    def u_nodes(self) -> np.ndarray:
        return np.linspace(1.0, self.u_max, self.count)

    def t_nodes(self) -> np.ndarray:
        """Nodes in increasing t order."""
        return np.exp(1.0 - self.u_nodes())[::-1]

    def doubled(self) -> "UGrid":
        return UGrid(self.u_max, 2 * self.count)


# ---------------------------------------------------------------------------
# adaptive Gauss-Legendre machinery in the u variable
# ---------------------------------------------------------------------------


def _gl_batch(fu: Callable[[np.ndarray], np.ndarray], a: np.ndarray, b: np.ndarray) -> np.ndarray:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    u = mid[:, None] + half[:, None] * _GL_X[None, :]
    vals = np.asarray(fu(u.ravel()), dtype=float).reshape(u.shape)
    return half * (vals @ _GL_W)


def _adaptive_u(
    fu: Callable[[np.ndarray], np.ndarray],
    edges: np.ndarray,
    rel_tol: float,
    max_depth: int = 40,
) -> float:
    """Σ over panels of ∫ fu du with per-panel whole-vs-halves refinement."""
    a = edges[:-1].astype(float)
    b = edges[1:].astype(float)
    keep = b > a
    a, b = a[keep], b[keep]
    if a.size == 0:
        return 0.0
    coarse = _gl_batch(fu, a, b)
    span = float(edges[-1] - edges[0])
    total = float(np.sum(np.abs(coarse))) + 1e-300
    acc = 0.0
    for _ in range(max_depth):
        m = 0.5 * (a + b)
        fine = _gl_batch(fu, a, m) + _gl_batch(fu, m, b)
        err = np.abs(fine - coarse)
        budget = rel_tol * np.maximum(np.abs(fine), total * (b - a) / span)
        ok = err <= budget
        acc += float(np.sum(fine[ok]))
        if np.all(ok):
            return acc
        a, b, fine = a[~ok], b[~ok], fine[~ok]
        total = max(total, abs(acc) + float(np.sum(np.abs(fine))))
        m = 0.5 * (a + b)
        a = np.concatenate([a, m])
        b = np.concatenate([m, b])
        if a.size > _MAX_PANELS:
            raise NoConvergence("adaptive panel count exploded")
        coarse = _gl_batch(fu, a, b)
    raise NoConvergence("adaptive depth exhausted before tolerance")


def _subdivide(u_lo: float, u_hi: float, max_width: float = 1.0) -> np.ndarray:
    n = max(1, int(math.ceil((u_hi - u_lo) / max_width)))
    return np.linspace(u_lo, u_hi, n + 1)


def _gl_batch_multi(fu, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    u = mid[:, None] + half[:, None] * _GL_X[None, :]
    vals = np.asarray(fu(u.ravel()), dtype=float)
    vals = vals.reshape(a.size, _GL_X.size, -1)
    return half[:, None] * np.tensordot(vals, _GL_W, axes=([1], [0]))


def _adaptive_u_multi(fu, edges: np.ndarray, rel_tol: float, max_depth: int = 40) -> np.ndarray:
    """Vector-valued twin of _adaptive_u: fu maps flat u to (len(u), m) values."""
    a = edges[:-1].astype(float)
    b = edges[1:].astype(float)
    keep = b > a
    a, b = a[keep], b[keep]
    coarse = _gl_batch_multi(fu, a, b)
    span = float(edges[-1] - edges[0])
    total = np.sum(np.abs(coarse), axis=0) + 1e-300
    acc = np.zeros(coarse.shape[1])
    for _ in range(max_depth):
        m = 0.5 * (a + b)
        fine = _gl_batch_multi(fu, a, m) + _gl_batch_multi(fu, m, b)
        err = np.abs(fine - coarse)
        budget = rel_tol * np.maximum(np.abs(fine), total[None, :] * ((b - a) / span)[:, None])
        ok = np.all(err <= budget, axis=1)
        acc += np.sum(fine[ok], axis=0)
        if np.all(ok):
            return acc
        a, b, fine = a[~ok], b[~ok], fine[~ok]
        total = np.maximum(total, np.abs(acc) + np.sum(np.abs(fine), axis=0))
        m = 0.5 * (a + b)
        a = np.concatenate([a, m])
        b = np.concatenate([m, b])
        if a.size > _MAX_PANELS:
            raise NoConvergence("adaptive panel count exploded")
        coarse = _gl_batch_multi(fu, a, b)
    raise NoConvergence("adaptive depth exhausted before tolerance")


def log_quad_multi(
    g,
    w: LogWeight,
    lo: float,
    hi: float,
    rel_tol: float = 1e-10,
    breaks: Sequence[float] = (),
    max_depth: int = 40,
) -> np.ndarray:
    """Vector-valued log_quad over a closed interval: g maps t to (len(t), m)."""
    if not (0.0 < lo <= hi <= 1.0):
        raise BadInterval("multi-output quadrature needs a closed interval in (0, 1]")
    if lo == hi:
        return np.zeros(np.asarray(g(np.array([hi]))).shape[-1])

    def fu(u):
        return np.asarray(g(t_of_u(u)), dtype=float) * w.u_form(u)[:, None]

    brk = np.asarray([x for x in breaks if lo < x < hi], dtype=float)
    edges = np.unique(np.concatenate([u_of_t(brk), [u_of_t(hi), u_of_t(lo)]]))
    widths = np.diff(edges)
    if np.any(widths > 1.0):
        chain = [edges[:1]]
        chain += [_subdivide(x, y)[1:] for x, y in zip(edges[:-1], edges[1:])]
        edges = np.concatenate(chain)
    return _adaptive_u_multi(fu, edges, rel_tol, max_depth)


def weight_integral(w: LogWeight, lo: float, hi: float, rel_tol: float = 1e-12) -> float:
    """∫_lo^hi t^a (1 - Log t)^b dt, 0 <= lo <= hi <= 1.

    Closed form for b = 0 and for a = -1; otherwise adaptive panels in u.
    Returns inf when the integral diverges at 0.
    """
    if not (0.0 <= lo <= hi <= 1.0):
        raise BadInterval(f"bad interval [{lo}, {hi}]")
    if hi == lo:
        return 0.0
    a, b = w.a, w.b
    if b == 0.0:
        c = a + 1.0
        if c == 0.0:
            return math.inf if lo == 0.0 else math.log(hi / lo)
        if lo == 0.0:
            return hi**c / c if c > 0 else math.inf
        return (hi**c - lo**c) / c
    if a == -1.0:
        # antiderivative of (1 - Log s)^b / s is -(1 - Log s)^{b+1}/(b+1)
        uh = 1.0 - math.log(hi)
        if b == -1.0:
            return math.inf if lo == 0.0 else math.log((1.0 - math.log(lo)) / uh)
        e = b + 1.0
        if lo == 0.0:
            return -(uh**e) / e if e < 0 else math.inf
        return ((1.0 - math.log(lo)) ** e - uh**e) / e
    c = a + 1.0
    u_lo_end = float(u_of_t(hi))
    if lo > 0.0:
        edges = _subdivide(u_lo_end, float(u_of_t(lo)))
        return _adaptive_u(w.u_form, edges, rel_tol)
    if c <= 0.0:
        return math.inf
    # open lower end: march u-chunks upward until the exponential factor kills them
    acc = 0.0
    u0 = u_lo_end
    small = 0
    for _ in range(4000):
        u1 = u0 + 2.0
        chunk = _adaptive_u(w.u_form, np.array([u0, u1]), rel_tol)
        acc += chunk
        small = small + 1 if abs(chunk) <= rel_tol * 1e-2 * (abs(acc) + 1e-300) else 0
        if small >= 2:
            return acc
        u0 = u1
    raise NoConvergence("weight integral tail did not converge")


def _narrow_weight_integrals(w: LogWeight, los: np.ndarray, his: np.ndarray) -> np.ndarray:
    """∫_lo^hi w for many positive intervals: one Gauss-Legendre panel in u
    apiece, with a scalar fallback where the u-width exceeds one unit."""
    out = np.zeros(los.size)
    mask = (his > los) & (los > 0.0)
    if not np.any(mask):
        return out
    ua = 1.0 - np.log(his[mask])
    ub = 1.0 - np.log(los[mask])
    narrow = (ub - ua) <= 1.0
    idx = np.nonzero(mask)[0]
    if np.any(narrow):
        a, b = ua[narrow], ub[narrow]
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        u = mid[:, None] + half[:, None] * _GL_X[None, :]
        out[idx[narrow]] = half * (w.u_form(u.ravel()).reshape(u.shape) @ _GL_W)
    for j in idx[~narrow]:
        out[j] = weight_integral(w, float(los[j]), float(his[j]))
    return out


def weight_prefix_many(w: LogWeight, ts: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    """∫_0^{t_i} w for an array of points, by one cumulative sweep."""
    ts = np.asarray(ts, dtype=float)
    order = np.argsort(ts)
    s = ts[order]
    base = weight_integral(w, 0.0, float(s[0]), rel_tol) if s.size else 0.0
    segs = _narrow_weight_integrals(w, s[:-1], s[1:]) if s.size > 1 else np.zeros(0)
    acc = base + np.concatenate([[0.0], np.cumsum(segs)])
    out = np.empty_like(acc)
    out[order] = acc
    return out


def log_weight_integral(
    f: StepFunction,
    p: float,
    w: LogWeight,
    a: float,
    b: float,
    rel_tol: float = 1e-10,
) -> float:
    """∫_a^b f^p(s) w(s) ds with f a step function: exact values, panel weights.

    Weight factors over each overlapped panel are integrated by closed form or
    adaptive Gauss-Legendre in u (depth-limited: NoConvergence past tolerance).
    """
    if not (0.0 <= a < b <= 1.0):
        raise BadInterval(f"bad interval [{a}, {b}]")
    if not (0.0 < rel_tol <= 1e-4):
        raise BadInterval("rel_tol must lie in (0, 1e-4]")
    lo = np.maximum(f.breaks[:-1], a)
    hi = np.minimum(f.breaks[1:], b)
    mask = (hi > lo) & (f.values > 0.0)
    if not np.any(mask):
        return 0.0
    los, his, vp = lo[mask], hi[mask], f.values[mask] ** p
    total = 0.0
    # the only possibly-open-ended panel is the first
    if los[0] == 0.0:
        total += vp[0] * weight_integral(w, 0.0, float(his[0]), rel_tol)
        los, his, vp = los[1:], his[1:], vp[1:]
    if los.size == 0:
        return total
    if w.b == 0.0 or w.a == -1.0:
        vals = np.array([weight_integral(w, float(l), float(h)) for l, h in zip(los, his)])
        return total + float(np.dot(vp, vals))
    ua = u_of_t(his)
    ub = u_of_t(los)
    n_sub = np.maximum(1, np.ceil(ub - ua).astype(int))
    ids = np.repeat(np.arange(los.size), n_sub)
    steps = (ub - ua) / n_sub
    offs = np.concatenate([np.arange(k) for k in n_sub])
    a_sub = ua[ids] + offs * steps[ids]
    b_sub = a_sub + steps[ids]
    coarse = _gl_batch(w.u_form, a_sub, b_sub)
    mid = 0.5 * (a_sub + b_sub)
    fine = _gl_batch(w.u_form, a_sub, mid) + _gl_batch(w.u_form, mid, b_sub)
    panel = np.zeros(los.size)
    np.add.at(panel, ids, fine)
    bad = np.zeros(los.size, dtype=bool)
    np.logical_or.at(bad, ids, np.abs(fine - coarse) > rel_tol * np.maximum(np.abs(fine), 1e-300))
    for i in np.nonzero(bad)[0]:
        panel[i] = _adaptive_u(w.u_form, _subdivide(float(ua[i]), float(ub[i])), rel_tol)
    return total + float(np.dot(vp, panel))


def log_quad(
    g: Callable[[np.ndarray], np.ndarray],
    w: LogWeight,
    lo: float,
    hi: float,
    rel_tol: float = 1e-10,
    breaks: Sequence[float] = (),
    max_depth: int = 40,
) -> float:
    """∫_lo^hi g(t) w(t) dt for vectorized g, adaptive in u, split at breaks.

    Intended for integrands whose u-tail decays exponentially when lo = 0
    (weights with a+1 > 0 or g vanishing near 0); slowly decaying tails must be
    handled by callers through closed forms such as ``tail_block_integral``.
    """
    if not (0.0 <= lo <= hi <= 1.0):
        raise BadInterval(f"bad interval [{lo}, {hi}]")
    if lo == hi:
        return 0.0

    def fu(u):
        return np.asarray(g(t_of_u(u)), dtype=float) * w.u_form(u)

    brk = np.asarray([x for x in breaks if lo < x < hi], dtype=float)
    u_lo_end = float(u_of_t(hi))
    ends = [u_lo_end] if lo == 0.0 else [u_lo_end, float(u_of_t(lo))]
    edges = np.unique(np.concatenate([u_of_t(brk), ends])) if brk.size else np.asarray(
        sorted(set(ends)), dtype=float
    )
    if edges.size < 2 and lo == 0.0:
        edges = np.array([u_lo_end, u_lo_end + 2.0])
    widths = np.diff(edges)
    if np.any(widths > 1.0):
        chain = [edges[:1]]
        chain += [_subdivide(a, b)[1:] for a, b in zip(edges[:-1], edges[1:])]
        edges = np.concatenate(chain)
    acc = _adaptive_u(fu, edges, rel_tol, max_depth) if edges.size > 1 else 0.0
    if lo > 0.0:
        return acc
    u0 = float(edges[-1])
    small = 0
    grow = 0
    prev = math.inf
    for _ in range(2000):
        u1 = u0 + 2.0
        chunk = _adaptive_u(fu, np.array([u0, u1]), rel_tol, max_depth)
        acc += chunk
        if abs(chunk) <= rel_tol * 1e-2 * (abs(acc) + 1e-300):
            small += 1
            if small >= 2:
                return acc
        else:
            small = 0
        grow = grow + 1 if abs(chunk) > prev else 0
        if grow >= 40:
            raise Divergent("integrand grows without bound toward 0")
        prev = abs(chunk)
        u0 = u1
    raise NoConvergence("log_quad tail did not converge")


def tail_block_integral(
    d: float, total: float, slope: float, s: float, cut: float, rel_tol: float = 1e-12
) -> float:
    """∫_0^cut (1 - Log t)^d (total - slope·t)^s dt/t for the region below the
    smallest breakpoint, where a tail power integral is exactly total - slope·t.

    Marches down until slope·t <= 1e-8·total, then closes with the two leading
    terms of (total - slope·t)^s; converges even when the weight part alone
    decays only polynomially in u (needs d < -1 there).
    """
    if total <= 0.0 or cut <= 0.0:
        return 0.0
    t_freeze = cut if slope <= 0.0 else min(cut, 1e-8 * total / slope)

    acc = 0.0
    if t_freeze < cut:

        def g(t):
            return (total - slope * t) ** s

        acc += log_quad(g, LogWeight(-1.0, d), t_freeze, cut, rel_tol)
    head = weight_integral(LogWeight(-1.0, d), 0.0, t_freeze, rel_tol)
    if not math.isfinite(head):
        return math.inf
    corr = weight_integral(LogWeight(0.0, d), 0.0, t_freeze, rel_tol)
    return acc + total**s * head - s * total ** (s - 1.0) * slope * corr


# ---------------------------------------------------------------------------
# suprema
# ---------------------------------------------------------------------------


def _eval_probe(g, ts: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(g(ts), dtype=float)
        if out.shape == ts.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(g(float(t))) for t in ts])


def _golden_max(h: Callable[[float], float], ua: float, ub: float, rel: float = 1e-8):
    c = ub - _INVPHI * (ub - ua)
    d = ua + _INVPHI * (ub - ua)
    fc, fd = h(c), h(d)
    for _ in range(200):
        if (ub - ua) <= rel * max(1.0, abs(ua), abs(ub)):
            break
        if fc >= fd:
            ub, d, fd = d, c, fc
            c = ub - _INVPHI * (ub - ua)
            fc = h(c)
        else:
            ua, c, fc = c, d, fd
            d = ua + _INVPHI * (ub - ua)
            fd = h(d)
    u = c if fc >= fd else d
    return (fc if fc >= fd else fd), u


def sup_on_interval(
    g: Callable,
    lo: float,
    hi: float,
    count: int,
    extra_points: Iterable[float] = (),
    u_cap: float = 41.0,
) -> Tuple[float, float]:
    """(sup, argmax) of g over (lo, hi] by log-grid scan plus golden refinement."""
    u_hi = float(u_of_t(hi))
    u_lo = float(u_of_t(lo)) if lo > 0.0 else max(u_cap, u_hi + 8.0)
    n = max(8, min(count, int(count * (u_lo - u_hi) / 34.0) + 8))
    ts = t_of_u(np.linspace(u_hi, u_lo, n))
    extras = np.asarray([x for x in extra_points if lo < x <= hi], dtype=float)
    ts = np.unique(np.concatenate([ts, extras]))
    vals = _eval_probe(g, ts)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteValue("objective returned a non-finite value")
    i = int(np.argmax(vals))
    best_v, best_t = float(vals[i]), float(ts[i])
    ua = float(u_of_t(ts[min(i + 1, ts.size - 1)]))
    ub = float(u_of_t(ts[max(i - 1, 0)]))
    if ub > ua:
        def h(u):
            v = float(g(float(t_of_u(u))))
            if not math.isfinite(v):
                raise NonFiniteValue("objective returned a non-finite value")
            return v

        v, u = _golden_max(h, ua, ub)
        if v > best_v:
            best_v, best_t = v, float(t_of_u(u))
    return best_v, best_t


def sup_on_grid(
    g: Callable, grid: UGrid, extra_points: Iterable[float] = ()
) -> Tuple[float, float]:
    """(sup estimate, argmax t) of g over (0, 1]: all grid nodes and supplied
    breakpoints, then golden-section refinement around the best node."""
    return sup_on_interval(g, 0.0, 1.0, grid.count, extra_points, u_cap=grid.u_max)


# ---------------------------------------------------------------------------
# monotone maps and inversion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonotoneMap:
    """A weight t^a (1 - Log t)^b restricted to the interval where it increases.

    For a > 0 the map increases on (0, t0] with t0 = e^{(a-b)/a} when a < b and
    t0 = 1 otherwise; for a = 0 it increases on all of (0, 1] iff b < 0.
    """

    forward: LogWeight

    def __post_init__(self):
        a, b = self.forward.a, self.forward.b
        if a < 0.0 or (a == 0.0 and b >= 0.0):
            raise BadExponent("map must be increasing near 0: need a > 0, or a = 0 with b < 0")
        t0 = 1.0 if (a == 0.0 or a >= b) else math.exp((a - b) / a)
        object.__setattr__(self, "t0", t0)
        object.__setattr__(self, "top", float(self.forward(t0)))

    def value(self, t):
        return self.forward(t)

    def inverse(self, y: float, tol: float = 1e-10) -> float:
        """t in the monotone domain with |forward(t) - y| <= tol·max(|y|, tiny)."""
        a, b = self.forward.a, self.forward.b
        if y <= 0.0 or y > self.top * (1.0 + 1e-12):
            raise OutOfRange(f"target {y} outside map range (0, {self.top}]")
        if b == 0.0:
            return min(y ** (1.0 / a), 1.0)
        if a == 0.0:
            return math.exp(1.0 - y ** (1.0 / b))
        goal = tol * max(abs(y), 1e-300)
        u_lo = float(u_of_t(self.t0))
        u_hi = u_lo + 1.0
        for _ in range(200):
            if float(self.forward.value_at_u(u_hi)) < y:
                break
            u_hi += max(4.0, u_hi)
            if u_hi > 1e7:
                raise OutOfRange("target not bracketed on the monotone domain")
        for _ in range(400):
            um = 0.5 * (u_lo + u_hi)
            fm = float(self.forward.value_at_u(um))
            if abs(fm - y) <= goal:
                return float(t_of_u(um))
            if fm > y:
                u_lo = um
            else:
                u_hi = um
        raise NoConvergence("bisection failed to reach the requested residual")

    def normalized_inverse(self, y: float, tol: float = 1e-10) -> float:
        """Inverse of the [0,1]-normalized restriction t -> forward(t·t0)/forward(t0)."""
        return self.inverse(y * self.top, tol) / self.t0


def invert_monotone(psi, y: float, tol: float = 1e-10) -> float:
    """Invert a strictly monotone map on (0, 1]; closed form when available."""
    if not (0.0 < tol <= 1e-6):
        raise BadInterval("tol must lie in (0, 1e-6]")
    if isinstance(psi, LogWeight):
        psi = MonotoneMap(psi)
    if isinstance(psi, MonotoneMap):
        return psi.inverse(y, tol)
    # generic callable assumed increasing on (0, 1]
    top = float(psi(1.0))
    if y <= 0.0 or y > top * (1.0 + 1e-12):
        raise OutOfRange(f"target {y} outside map range")
    goal = tol * max(abs(y), 1e-300)
    u_lo, u_hi = 1.0, 8.0
    for _ in range(200):
        if float(psi(float(t_of_u(u_hi)))) < y:
            break
        u_hi *= 2.0
        if u_hi > 1e6:
            raise OutOfRange("target not bracketed")
    for _ in range(400):
        um = 0.5 * (u_lo + u_hi)
        fm = float(psi(float(t_of_u(um))))
        if abs(fm - y) <= goal:
            return float(t_of_u(um))
        if fm > y:
            u_lo = um
        else:
            u_hi = um
    raise NoConvergence("bisection failed to reach the requested residual")


# ---------------------------------------------------------------------------
# two-sided power-log integral bounds
# ---------------------------------------------------------------------------


def log_integral_bounds_check(alpha: float, beta: float, a_grid: Sequence[float]) -> dict:
    """Ratios of head/tail power-log integrals against their closed-form bounds.

    Head branch (alpha < 1): ∫_0^a t^{-alpha}(1 - Log t)^beta dt over
    a^{1-alpha}(1 - Log a)^beta; for beta >= 0 the ratio is additionally
    asserted to be at least 1/(1-alpha).  Tail branch (alpha < -1):
    ∫_a^1 t^{alpha}(1 - Log t)^beta dt over a^{alpha+1}(1 - Log a)^beta.
    """
    if not alpha < 1.0:
        raise BadExponent("head branch needs alpha < 1")
    a_grid = [float(a) for a in a_grid]
    if not a_grid or not all(0.0 < a < 1.0 for a in a_grid):
        raise BadExponent("probe points must lie in (0, 1)")
    head = {}
    for a in a_grid:
        num = weight_integral(LogWeight(-alpha, beta), 0.0, a)
        den = a ** (1.0 - alpha) * (1.0 - math.log(a)) ** beta
        head[a] = num / den
    out = {
        "alpha": alpha,
        "beta": beta,
        "head_ratios": head,
        "head_max": max(head.values()),
        "head_lower_bound": 1.0 / (1.0 - alpha) if beta >= 0 else None,
        "head_lower_ok": (
            all(r >= 1.0 / (1.0 - alpha) * (1.0 - 1e-12) for r in head.values())
            if beta >= 0
            else None
        ),
    }
    if alpha < -1.0:
        tail = {}
        for a in a_grid:
            num = weight_integral(LogWeight(alpha, beta), a, 1.0)
            den = a ** (alpha + 1.0) * (1.0 - math.log(a)) ** beta
            tail[a] = num / den
        out["tail_ratios"] = tail
        out["tail_max"] = max(tail.values())
    return out
