"""Deviation bounds, Betti constants, thresholds: frozen values and laws."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cipoints.errors import ValidationError
from cipoints.bounds import (
    B_ds,
    BoundContext,
    KIND_BERTINI,
    KIND_EXISTENCE,
    SEVERITY_HARD,
    SEVERITY_SOFT,
    SqrtBound,
    VERDICT_HOLDS,
    VERDICT_NOT_APPLICABLE,
    VERDICT_VIOLATED,
    betti_b1,
    betti_b2,
    betti_b2_upper,
    check,
    comparison_bounds,
    deligne_bound,
    deligne_sqrt_bound,
    eta,
    eta_affine,
    existence_thresholds,
    exponential_error_constant,
    isqrt_ceil,
    kth_root_floor,
    main_estimate,
    nonzero_affine_lower,
    projective_upper_bound,
    q_power_half,
    serre_bound,
    serre_multih,
    singular_fiber_bound,
)

CONE_P3 = BoundContext(n=3, r=2, s=0, multidegree=(2,), q=3)
FERMAT_D3 = BoundContext(n=3, r=2, s=0, multidegree=(3,), q=4)
TWO_QUADRICS = BoundContext(n=4, r=2, s=0, multidegree=(2, 2), q=5)
CONE_P4 = BoundContext(n=4, r=3, s=0, multidegree=(2,), q=3)
CONE_LINE_P4 = BoundContext(n=4, r=3, s=1, multidegree=(2,), q=3)
FERMAT_D4 = BoundContext(n=3, r=2, s=0, multidegree=(4,), q=5)


# -- integer roots ----------------------------------------------------------------


@given(x=st.integers(0, 10**12))
@settings(max_examples=60, deadline=None)
def test_isqrt_ceil_is_the_least_upper_root(x):
    r = isqrt_ceil(x)
    assert r * r >= x
    assert r == 0 or (r - 1) * (r - 1) < x


@given(x=st.integers(0, 10**12), k=st.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_kth_root_floor_brackets(x, k):
    r = kth_root_floor(x, k)
    assert r**k <= x < (r + 1) ** k


def test_kth_root_floor_rejects_bad_input():
    with pytest.raises(ValidationError):
        kth_root_floor(-1, 2)
    with pytest.raises(ValidationError):
        kth_root_floor(5, 0)


# -- exact square-root bounds -------------------------------------------------------


def test_sqrt_bound_admits_by_squaring():
    b = SqrtBound(integer_part=0, sqrt_coefficient=2, q=5)
    # 2*sqrt(5) = 4.47...: admits 4, rejects 5.
    assert b.admits(4)
    assert not b.admits(5)
    assert b.ceiling() == 5
    assert b.admits(Fraction(22, 5))  # 4.4 < 2*sqrt(5)
    assert not b.admits(Fraction(9, 2))  # 4.5 > 2*sqrt(5)


def test_sqrt_bound_addition_and_str():
    a = q_power_half(3, 3, 5)  # 3*q*sqrt(q)
    assert (a.integer_part, a.sqrt_coefficient) == (0, 15)
    b = q_power_half(2, 2, 5)
    total = a + b
    assert (total.integer_part, total.sqrt_coefficient) == (10, 15)
    assert str(total) == "10 + 15*sqrt(5)"
    assert str(q_power_half(7, 0, 9)) == "7"
    with pytest.raises(ValidationError):
        a + q_power_half(1, 1, 7)
    with pytest.raises(ValidationError):
        SqrtBound(-1, 0, 5)


def test_q_power_half_parity():
    even = q_power_half(5, 4, 3)
    assert (even.integer_part, even.sqrt_coefficient) == (45, 0)
    odd = q_power_half(5, 5, 3)
    assert (odd.integer_part, odd.sqrt_coefficient) == (0, 45)


# -- Betti constants ----------------------------------------------------------------


@pytest.mark.parametrize(
    "n, d, expected",
    [
        (2, (3,), 2),   # plane cubic
        (2, (2,), 0),   # plane conic
        (2, (4,), 6),
        (3, (2, 2), 2),
        (3, (2, 3), 8),
    ],
)
def test_betti_b1_values(n, d, expected):
    assert betti_b1(n, d) == expected


@pytest.mark.parametrize(
    "n, d, expected",
    [
        (3, (2,), 1),   # smooth quadric surface
        (3, (3,), 6),   # cubic surface
        (3, (4,), 21),
        (4, (2, 2), 5),
    ],
)
def test_betti_b2_values(n, d, expected):
    assert betti_b2(n, d) == expected


def test_betti_argument_counts():
    with pytest.raises(ValidationError):
        betti_b1(2, (2, 2))  # needs n-1 degrees
    with pytest.raises(ValidationError):
        betti_b2(3, (2, 2))  # needs n-2 degrees


@given(
    d=st.lists(st.integers(1, 6), min_size=1, max_size=4),
)
@settings(max_examples=40, deadline=None)
def test_betti_b1_matches_simplified_leading_constant(d):
    # b'_1(n-r+1, d) equals delta*(D-2)+2 with D the degree excess.
    n = len(d) + 1
    delta = 1
    for di in d:
        delta *= di
    D = sum(di - 1 for di in d)
    assert betti_b1(n, tuple(d)) == delta * (D - 2) + 2


def test_betti_b2_upper_dominates():
    for n, d in [(3, (2,)), (3, (3,)), (4, (2, 2)), (3, (4,))]:
        assert betti_b2_upper(n, d) >= betti_b2(n, d)


# -- classical bounds ---------------------------------------------------------------


def test_deligne_bound():
    assert deligne_sqrt_bound(5, 1, 2).admits(4)
    assert not deligne_sqrt_bound(5, 1, 2).admits(5)
    assert deligne_bound(9, 1, 2) == 6  # 2*sqrt(9)
    assert deligne_bound(7, 2, 1) == 7  # 1*q^(2/2)


def test_serre_bound_values():
    assert serre_bound(2, 2, 3) == 7  # d*q + p_0
    assert serre_bound(3, 3, 4) == 3 * 16 + 5
    with pytest.raises(ValidationError):
        serre_bound(0, 2, 3)


def test_serre_multih_reduces_to_serre():
    assert serre_multih(2, 2, 1, 3) == serre_bound(2, 2, 3)
    assert serre_multih(2, 1, 2, 5) > 0


def test_projective_upper_bound():
    assert projective_upper_bound(2, 2, 3) == 26  # delta * p_2(3)
    assert projective_upper_bound(1, 0, 7) == 1


# -- hypersurface counting bounds ------------------------------------------------


def test_eta_tight_case():
    # Bilinear forms on P^1 x P^1 over F_2 attain the bound.
    assert eta((1, 1), (1, 1), 2) == 5


def test_eta_single_group_is_d_times_hyperplane():
    # One group: the inclusion-exclusion collapses to d * p_(n-1), which
    # the sharper single-form bound always undercuts.
    from cipoints.points import p_r

    assert eta((2,), (2,), 3) == 2 * p_r(3, 1) == 8
    assert serre_bound(2, 2, 3) < eta((2,), (2,), 3)


def test_eta_input_validation():
    with pytest.raises(ValidationError):
        eta((1, 2), (1,), 3)  # mismatched lengths
    with pytest.raises(ValidationError):
        eta((-1,), (1,), 3)
    with pytest.raises(ValidationError):
        eta((1,), (0,), 3)


@given(
    q=st.sampled_from([4, 5, 7, 8, 9]),
    shape=st.lists(
        st.tuples(st.integers(1, 2), st.integers(1, 3)), min_size=1, max_size=3
    ),
)
@settings(max_examples=50, deadline=None)
def test_eta_affine_scaling_identity(q, shape):
    nvec = tuple(n for n, _ in shape)
    dvec = tuple(d for _, d in shape)
    # Exact complement: eta^a + q^sum(n_i) prod(q - d_i) = q^sum(n_i+1).
    total = q ** sum(n + 1 for n in nvec)
    assert eta_affine(dvec, nvec, q) == total - nonzero_affine_lower(
        dvec, nvec, q
    )


@given(
    q=st.sampled_from([4, 5, 7, 8, 9]),
    shape=st.lists(
        st.tuples(st.integers(1, 2), st.integers(1, 3)), min_size=1, max_size=3
    ),
)
@settings(max_examples=50, deadline=None)
def test_nonzero_affine_lower_value(q, shape):
    nvec = tuple(n for n, _ in shape)
    dvec = tuple(d for _, d in shape)
    expected = q ** sum(nvec)
    for d in dvec:
        expected *= q - d
    assert nonzero_affine_lower(dvec, nvec, q) == expected


# -- projection constants -----------------------------------------------------------


@pytest.mark.parametrize(
    "ctx, expected",
    [
        (CONE_P3, 21),
        (FERMAT_D3, 55),
        (TWO_QUADRICS, 89),
        (CONE_P4, 35),
        (CONE_LINE_P4, 21),
        (FERMAT_D4, 105),
    ],
)
def test_B_ds_frozen_values(ctx, expected):
    assert B_ds(ctx) == expected


def test_B_ds_needs_projection_shape():
    with pytest.raises(ValidationError):
        B_ds(BoundContext(n=3, r=2, s=1, multidegree=(2,), q=3))


@pytest.mark.parametrize(
    "ctx, expected",
    [
        (CONE_P3, 2),
        (CONE_P4, 2),
        (FERMAT_D3, 12),
        (TWO_QUADRICS, 16),
    ],
)
def test_singular_fiber_bound_values(ctx, expected):
    assert singular_fiber_bound(ctx) == expected


def test_singular_fiber_bound_scales_with_p_s():
    ctx = BoundContext(n=4, r=3, s=1, multidegree=(2,), q=5)
    assert singular_fiber_bound(ctx) == 2 * 6  # D^(r-s) * delta * p_1(5)


# -- the main estimates -------------------------------------------------------------


def test_main_estimate_codim2_frozen():
    report = main_estimate(CONE_P3)
    assert report.regime == "codim2"
    assert not report.smooth
    assert report.betti_leading == 0
    assert report.refined.ceiling() == 90
    assert report.simplified.ceiling() == 168
    assert report.simplified_alternate is None

    smooth = main_estimate(CONE_P3, smooth=True)
    assert smooth.refined.ceiling() == 282
    assert smooth.simplified.ceiling() == 396
    assert smooth.simplified_alternate.ceiling() == 288


def test_main_estimate_codim3_frozen():
    report = main_estimate(CONE_P4)
    assert report.regime == "codim3"
    assert report.betti_leading == betti_b2(3, (2,)) == 1
    # refined: b2*q^2 + (2*b2 + 2*(7*2+1)*1)*q^2 with q=3.
    assert report.refined.ceiling() == 9 + (2 + 30) * 9
    assert report.simplified.ceiling() == 14 * 1 * 4 * 9
    smooth = main_estimate(CONE_P4, smooth=True)
    assert smooth.simplified.ceiling() == (34 * 3 - 20) * 4 * 9
    assert smooth.simplified_alternate is None


def test_main_estimate_rejects_other_shapes():
    with pytest.raises(ValidationError):
        main_estimate(BoundContext(n=4, r=3, s=2, multidegree=(2,), q=3))
    with pytest.raises(ValidationError):
        main_estimate(BoundContext(n=2, r=1, s=0, multidegree=(2,), q=3))


def test_estimate_admits_uses_both_bounds():
    report = main_estimate(CONE_P3)
    assert report.admits(90)
    assert not report.admits(169)


# -- comparison bounds --------------------------------------------------------------


def test_exponential_error_constant():
    assert exponential_error_constant(2, 1, 3) == 3888
    assert exponential_error_constant(3, 2, 2) == 9 * 2 * 5**4


def test_comparison_bounds_frozen():
    report = comparison_bounds(CONE_P3)
    # exponential: b1*q^(3/2) + 11250*q; q=3.
    assert report.exponential_constant == 11250
    assert report.exponential.ceiling() == 33750
    # normal: b1(2,(2,))*q^(3/2) + 2*(1*2*2)^2*q = 32*3 = 96, valid q > 9.
    assert report.normal.ceiling() == 96
    assert report.normal_q_threshold == 9
    assert not report.normal_applicable
    bigger = comparison_bounds(
        BoundContext(n=3, r=2, s=0, multidegree=(2,), q=11)
    )
    assert bigger.normal_applicable


def test_comparison_bounds_injected_betti():
    deep = BoundContext(n=6, r=5, s=1, multidegree=(2,), q=3)
    with pytest.raises(ValidationError):
        comparison_bounds(deep)  # order r-s-1 = 3 has no built-in constant
    report = comparison_bounds(deep, betti=10)
    assert report.exponential.sqrt_coefficient >= 10


# -- existence thresholds -----------------------------------------------------------


def test_threshold_catalog_names_and_kinds():
    report = existence_thresholds(CONE_P3)
    names = {e.name for e in report.entries}
    assert names == {
        "smooth-point",
        "smooth-point-codim2",
        "smooth-point-codim3",
        "generic-section",
        "nonsingular-fiber",
    }
    assert {e.kind for e in report.entries} == {KIND_EXISTENCE, KIND_BERTINI}


def test_threshold_values_cone_p3():
    report = existence_thresholds(CONE_P3)
    smooth = report.entry("smooth-point")
    assert smooth.applicable and smooth.threshold == 21
    codim2 = report.entry("smooth-point-codim2")
    assert codim2.applicable and codim2.threshold == 21
    codim3 = report.entry("smooth-point-codim3")
    assert not codim3.applicable
    assert codim3.reason
    assert smooth.guaranteed(23)
    assert not smooth.guaranteed(21)


def test_threshold_values_codim3():
    report = existence_thresholds(CONE_P4)
    codim3 = report.entry("smooth-point-codim3")
    assert codim3.applicable
    assert codim3.threshold == 3 * 1 * (1 + 2) ** 2 * 2  # 3 D (D+2)^2 delta
    # The codim2 existence threshold stays applicable for any s <= r-2.
    codim2 = report.entry("smooth-point-codim2")
    assert codim2.applicable and codim2.threshold == (2 * 4 * 1 + 2) * 2 + 1


def test_threshold_codim2_branches():
    # Degree excess D >= 5 switches to the squared-leading-term form.
    big = BoundContext(n=3, r=2, s=0, multidegree=(6,), q=7)
    entry = existence_thresholds(big).entry("smooth-point-codim2")
    delta, D = 6, 5
    assert entry.threshold == (delta * (D - 2) + 2) ** 2
    small = existence_thresholds(FERMAT_D3).entry("smooth-point-codim2")
    # Otherwise branch: (2(n-r+3)D + 2)delta + 1 with D=2, delta=3.
    assert small.threshold == (2 * 4 * 2 + 2) * 3 + 1


def test_bertini_thresholds():
    report = existence_thresholds(CONE_P3)
    section = report.entry("generic-section")
    assert section.kind == KIND_BERTINI
    assert section.threshold == 16 * 1 * 2  # (n+1)^2 D^(r-s-1) delta
    fiber = report.entry("nonsingular-fiber")
    assert fiber.kind == KIND_BERTINI
    assert fiber.threshold == max(B_ds(CONE_P3), 1 * 2)
    assert report.applicable(KIND_EXISTENCE)
    assert report.applicable(KIND_BERTINI)


# -- check plumbing -----------------------------------------------------------------


def test_check_verdicts():
    holds = check("probe", 3, 5)
    assert holds.verdict == VERDICT_HOLDS
    assert holds.severity == SEVERITY_HARD
    assert "probe" in holds.detail and "3" in holds.detail

    violated = check("probe", 7, 5, severity=SEVERITY_SOFT)
    assert violated.verdict == VERDICT_VIOLATED
    assert violated.severity == SEVERITY_SOFT

    na = check("probe", 7, 5, applicable=False, reason="out of regime")
    assert na.verdict == VERDICT_NOT_APPLICABLE
    assert na.detail == "out of regime"
    # Only a hard violation clears the ok flag.
    assert na.ok and holds.ok and violated.ok
    assert not check("probe", 7, 5).ok


def test_check_accepts_sqrt_bounds():
    b = SqrtBound(0, 2, 5)
    assert check("dev", 4, b).verdict == VERDICT_HOLDS
    assert check("dev", 5, b).verdict == VERDICT_VIOLATED
