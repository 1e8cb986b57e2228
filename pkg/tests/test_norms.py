"""Space norms: closed forms, scipy cross-checks, and axiom-style properties."""

import math

import numpy as np
import pytest
import scipy.integrate as si
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from rispaces.config import Resolution
from rispaces.errors import ConditionC2Failed
from rispaces.logcalc import LogWeight
from rispaces.norms import (
    GammaDouble,
    Grand,
    Lebesgue,
    LorentzZygmund,
    Small,
    fundamental_function,
    ggamma_lower_bound_check,
    ggamma_norm,
    grand_norm,
    lebesgue_norm,
    lorentz_zygmund_norm,
    small_norm,
    space_norm,
)
from rispaces.rearrangement import (
    Char,
    PowerLog,
    StepRearrangement,
    discretize_model,
    rearrange_from_samples,
)

from conftest import FAST

THM13_W1 = LogWeight(-1.0, 0.75 * 2.0 - 1.0)
THM13_W2 = LogWeight(0.0, -1.0)


def zero_fn():
    return StepRearrangement(np.array([0.0, 1.0]), np.array([0.0]))


def scale(f, lam):
    return StepRearrangement(f.breaks, lam * f.values)


# ---------------------------------------------------------------------------
# lebesgue
# ---------------------------------------------------------------------------


def test_lebesgue_indicator(chi_quarter):
    assert lebesgue_norm(chi_quarter, 2) == pytest.approx(0.5, abs=1e-15)


def test_lebesgue_constant(one):
    for p in (1, 2, 5, math.inf):
        assert lebesgue_norm(one, p) == pytest.approx(1.0, abs=1e-15)


def test_lebesgue_powerlog(power_quarter):
    assert lebesgue_norm(power_quarter, 2) == pytest.approx(math.sqrt(2.0), rel=1e-3)


# ---------------------------------------------------------------------------
# lorentz-zygmund
# ---------------------------------------------------------------------------


def test_lz_degenerates_to_lebesgue(one, chi_quarter, power_quarter):
    for f in (one, chi_quarter, power_quarter):
        for p in (1.5, 2.0, 3.0):
            assert lorentz_zygmund_norm(f, p, p, 0.0, FAST) == pytest.approx(
                lebesgue_norm(f, p), rel=1e-8
            )


def test_lz_indicator(chi_quarter):
    assert lorentz_zygmund_norm(chi_quarter, 2, 2, 0.0, FAST) == pytest.approx(0.5, rel=1e-12)


def test_lz_log_weighted_l1(one):
    assert lorentz_zygmund_norm(one, 1.0, 1.0, 1.0, FAST) == pytest.approx(2.0, rel=1e-10)


def test_lz_sup_form(chi_quarter):
    # sup t^{1/2} (1-Log t)^0 over (0, 1/4] = 1/2
    assert lorentz_zygmund_norm(chi_quarter, 2, math.inf, 0.0, FAST) == pytest.approx(
        0.5, rel=1e-8
    )


# ---------------------------------------------------------------------------
# grand
# ---------------------------------------------------------------------------


def test_grand_constant_matches_scalar_sup(one):
    # sup (1-Log t)^{-1} (1-t)^{1/2}, computed independently on a dense grid
    ts = np.linspace(1e-9, 1 - 1e-12, 2_000_001)
    ref = np.max(np.sqrt(1 - ts) / (1 - np.log(ts)))
    assert grand_norm(one, 2, 2, FAST) == pytest.approx(ref, rel=1e-7)


def test_grand_zero():
    assert grand_norm(zero_fn(), 2, 1, FAST) == 0.0


def test_grand_borderline_powerlog():
    # tail ∫_t^1 s^{-1} ds = -Log t: objective ((u-1)/u)^{1/2} climbs toward 1
    f35 = discretize_model(PowerLog(0.5, 0.0), 35.0, 400)
    f50 = discretize_model(PowerLog(0.5, 0.0), 50.0, 400)
    v35 = grand_norm(f35, 2, 1, FAST)
    v50 = grand_norm(f50, 2, 1, FAST)
    assert 0.9 < v35 < 1.0 + 1e-9
    assert v35 < v50 < 1.0 + 1e-9


# ---------------------------------------------------------------------------
# small
# ---------------------------------------------------------------------------


def test_small_zero():
    assert small_norm(zero_fn(), 2, 1, FAST) == 0.0


def test_small_constant(one):
    exact = math.exp(0.5) * 2.0 * math.sqrt(math.pi / 2.0) * sp.erfc(1.0 / math.sqrt(2.0))
    assert small_norm(one, 2, 1, FAST) == pytest.approx(exact, rel=1e-9)


def test_small_scaling(power_quarter):
    base = small_norm(power_quarter, 2, 1, FAST)
    assert small_norm(scale(power_quarter, 2.0), 2, 1, FAST) == pytest.approx(
        2.0 * base, rel=1e-12
    )


# ---------------------------------------------------------------------------
# generalized gamma with two weights
# ---------------------------------------------------------------------------


def test_ggamma_zero():
    spec = GammaDouble(2, 2, LogWeight(0.0, 0.0), LogWeight(0.0, 0.0))
    assert ggamma_norm(zero_fn(), spec, FAST) == 0.0


def test_ggamma_against_scipy(one):
    spec = GammaDouble(2, 2, THM13_W1, THM13_W2)

    def inner(t):
        # ∫_0^t (1 - Log s)^{-1} ds = e·E1(1 - Log t)
        return math.e * sp.exp1(1.0 - math.log(t))

    ref, _ = si.quad(
        lambda t: (1.0 - math.log(t)) ** 0.5 / t * inner(t), 0, 1, limit=200
    )
    assert ggamma_norm(one, spec, FAST) == pytest.approx(math.sqrt(ref), rel=1e-8)


def test_ggamma_homogeneity(power_quarter):
    spec = GammaDouble(2, 2, THM13_W1, THM13_W2)
    base = ggamma_norm(power_quarter, spec, FAST)
    assert ggamma_norm(scale(power_quarter, 3.0), spec, FAST) == pytest.approx(
        3.0 * base, rel=1e-12
    )


def test_ggamma_c2_failure():
    with pytest.raises(ConditionC2Failed):
        GammaDouble(2, 2, LogWeight(-2.0, 0.0), LogWeight(0.0, -1.0))
    with pytest.raises(ConditionC2Failed):
        GammaDouble(2, 2, THM13_W1, LogWeight(-1.0, 0.0))


def test_ggamma_doubling_constant():
    assert THM13_W2.doubling_constant() == pytest.approx(1.0 + math.log(2.0))
    assert LogWeight(1.0, 0.0).doubling_constant() == pytest.approx(2.0)


def test_ggamma_quasi_triangle(rng):
    spec = GammaDouble(2, 2, THM13_W1, THM13_W2)
    k12 = spec.k12
    bound = (2.0 * k12) ** 0.5
    w = 1.0 / 16.0
    for _ in range(10):
        v1 = rng.uniform(0, 3, 16)
        v2 = rng.uniform(0, 3, 16)
        f1 = rearrange_from_samples([(v, w) for v in v1])
        f2 = rearrange_from_samples([(v, w) for v in v2])
        fsum = rearrange_from_samples([(a + b, w) for a, b in zip(v1, v2)])
        lhs = ggamma_norm(fsum, spec, FAST)
        rhs = bound * (ggamma_norm(f1, spec, FAST) + ggamma_norm(f2, spec, FAST))
        assert lhs <= rhs * (1 + 1e-10)


# ---------------------------------------------------------------------------
# shared axioms
# ---------------------------------------------------------------------------

SPACES = [
    Lebesgue(2),
    LorentzZygmund(2, 3, 0.5),
    Grand(2, 1),
    Small(2, 1),
    GammaDouble(2, 2, THM13_W1, THM13_W2),
]


@pytest.mark.parametrize("spec", SPACES, ids=lambda s: s.__class__.__name__)
def test_homogeneity_all_norms(spec, power_quarter):
    lam = 3.7
    base = space_norm(power_quarter, spec, FAST)
    scaled = space_norm(scale(power_quarter, lam), spec, FAST)
    assert scaled == pytest.approx(lam * base, rel=1e-12)


@pytest.mark.parametrize("spec", SPACES, ids=lambda s: s.__class__.__name__)
def test_monotone_in_rearrangement(spec, rng):
    w = 1.0 / 24.0
    for _ in range(5):
        lo = rng.uniform(0, 2, 24)
        hi = lo + rng.uniform(0, 2, 24)
        f = rearrange_from_samples([(v, w) for v in lo])
        g = rearrange_from_samples([(v, w) for v in hi])
        assert space_norm(f, spec, FAST) <= space_norm(g, spec, FAST) * (1 + 1e-10)


# ---------------------------------------------------------------------------
# fundamental functions
# ---------------------------------------------------------------------------


def test_fundamental_lebesgue():
    exact, equiv = fundamental_function(Lebesgue(2), 0.25, FAST)
    assert exact == pytest.approx(0.5, abs=1e-14)
    assert equiv == pytest.approx(0.5, abs=1e-14)


def test_fundamental_lebesgue_toward_one():
    exact, _ = fundamental_function(Lebesgue(2), 1.0 - 1e-12, FAST)
    assert exact == pytest.approx(1.0, rel=1e-6)


def test_fundamental_grand_equivalent():
    exact, equiv = fundamental_function(Grand(2, 2), 0.25, FAST)
    assert equiv == pytest.approx(0.25**0.5 / (1.0 + math.log(4.0)), rel=1e-12)
    assert 0.0 < exact <= equiv * 4.0 and exact >= equiv / 4.0


@pytest.mark.parametrize(
    "spec", [Grand(2, 1), Small(2, 1), Grand(3, 2), Small(3, 2)],
    ids=["grand21", "small21", "grand32", "small32"],
)
def test_fundamental_bracket_stable(spec):
    """Exact/equivalent ratio sits in a bracket stable under grid refinement."""

    def bracket(n):
        ratios = []
        for t in np.exp(np.linspace(math.log(1e-10), math.log(0.9), n)):
            exact, equiv = fundamental_function(spec, float(t), FAST)
            ratios.append(exact / equiv)
        return min(ratios), max(ratios)

    lo1, hi1 = bracket(24)
    lo2, hi2 = bracket(48)
    assert 0.0 < lo1 <= hi1 < math.inf
    assert abs(hi2 - hi1) / hi1 < 0.05
    assert abs(lo2 - lo1) / lo1 < 0.05


# ---------------------------------------------------------------------------
# the explicit-constant lower bound
# ---------------------------------------------------------------------------


def test_lower_bound_equality_for_constant(one):
    spec = GammaDouble(2, 2, THM13_W1, THM13_W2)
    lhs, rhs = ggamma_lower_bound_check(one, spec, 1.0, FAST)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_lower_bound_indicator(chi_half):
    spec = GammaDouble(2, 2, THM13_W1, THM13_W2)
    lhs, rhs = ggamma_lower_bound_check(chi_half, spec, 0.5, FAST)
    assert lhs >= rhs * (1 - 1e-8)


def test_lower_bound_zero():
    spec = GammaDouble(2, 2, THM13_W1, THM13_W2)
    lhs, rhs = ggamma_lower_bound_check(zero_fn(), spec, 0.7, FAST)
    assert lhs == 0.0 and rhs == 0.0


@given(st.floats(0.05, 1.0), st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_lower_bound_random(measure, seed):
    rng = np.random.default_rng(seed)
    vals = np.sort(rng.uniform(0, 4, 12))[::-1]
    f = rearrange_from_samples([(float(v), 1.0 / 12.0) for v in vals])
    spec = GammaDouble(2, 2, THM13_W1, THM13_W2)
    lhs, rhs = ggamma_lower_bound_check(f, spec, measure, FAST)
    assert lhs >= rhs * (1 - 1e-8)
