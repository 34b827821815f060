"""Fourier curves, classification, and the builtin gallery."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ma_singular.curves import (
    PeriodicCurve,
    builtin_curve,
    builtin_curve_names,
    classify_curve,
    eval_curve,
    fit_curve,
    signed_curvature,
)
from ma_singular.errors import DegenerateCurveError, ValidationError

U = np.linspace(0.0, 2.0 * np.pi, 360, endpoint=False)


def test_coefficients_pad_to_common_degree():
    c = PeriodicCurve([1.0], [0.0, 0.5], [0.0], [0.0, -1.0, 0.25])
    assert c.degree == 2
    assert c.alpha_cos.shape == (3,)
    np.testing.assert_array_equal(c.alpha_sin, [0.0, 0.5, 0.0])


def test_sine_constant_term_is_dropped():
    c = PeriodicCurve([0.0], [7.0], [0.0], [3.0])
    assert c.alpha_sin[0] == 0.0 and c.beta_sin[0] == 0.0


def test_coefficients_are_frozen():
    c = builtin_curve("circle")
    with pytest.raises(ValueError):
        c.alpha_cos[1] = 2.0


def test_circle_evaluates_to_cos_minus_sin():
    alpha, beta, da, db, dda, ddb = eval_curve(builtin_curve("circle"), U)
    np.testing.assert_allclose(alpha, np.cos(U), atol=1e-15)
    np.testing.assert_allclose(beta, -np.sin(U), atol=1e-15)
    np.testing.assert_allclose(da, -np.sin(U), atol=1e-15)
    np.testing.assert_allclose(db, -np.cos(U), atol=1e-15)
    np.testing.assert_allclose(dda, -np.cos(U), atol=1e-15)
    np.testing.assert_allclose(ddb, np.sin(U), atol=1e-15)


def test_eval_accepts_scalar_u():
    alpha, *_ = eval_curve(builtin_curve("ellipse"), 0.0)
    assert alpha == pytest.approx(0.8)


def test_reverse_flips_orientation():
    fwd = classify_curve(builtin_curve("circle"))
    rev = classify_curve(builtin_curve("circle").reverse())
    assert fwd.orientation == "negative"
    assert rev.orientation == "positive"


def test_shift_translates_samples():
    c = builtin_curve("wobble")
    shifted = c.shift(0.35)
    a0, b0, *_ = eval_curve(c, U + 0.35)
    a1, b1, *_ = eval_curve(shifted, U)
    np.testing.assert_allclose(a1, a0, atol=1e-14)
    np.testing.assert_allclose(b1, b0, atol=1e-14)


def test_circle_curvature_is_minus_one():
    k = signed_curvature(builtin_curve("circle"), U)
    np.testing.assert_allclose(k, -1.0, atol=1e-14)


def test_ellipse_curvature_matches_closed_form():
    a, b = 0.8, 0.6
    k = signed_curvature(builtin_curve("ellipse"), U)
    speed2 = (a * np.sin(U)) ** 2 + (b * np.cos(U)) ** 2
    np.testing.assert_allclose(k, -a * b / speed2**1.5, atol=1e-13)


def test_point_curve_is_degenerate():
    c = PeriodicCurve([0.5], [0.0], [0.5], [0.0])
    with pytest.raises(DegenerateCurveError):
        signed_curvature(c, U)
    assert classify_curve(c).orientation == "degenerate"


@pytest.mark.parametrize("name,convex,embedded", [
    ("circle", True, True),
    ("ellipse", True, True),
    ("wobble", True, True),
    ("limacon", True, False),     # inner loop: convex but not embedded
    ("remark42", False, False),   # doubly traced, so not an injective loop
])
def test_gallery_classification(name, convex, embedded):
    rep = classify_curve(builtin_curve(name))
    assert rep.regular
    assert rep.strictly_convex == convex
    assert rep.embedded == embedded


def test_remark42_margin_vanishes_at_zero_only():
    rep = classify_curve(builtin_curve("remark42"))
    assert rep.convexity_margin == pytest.approx(0.0, abs=1e-12)
    assert rep.u_star == pytest.approx(0.0, abs=1e-6)
    # The curve is traced twice; u=pi lands on the same image point as u=0.
    k = signed_curvature(builtin_curve("remark42"), U)
    interior = (np.minimum(U, np.abs(U - np.pi)) > 0.1) & (U < 2 * np.pi - 0.1)
    assert np.all(-k[interior] > 1e-3)


def test_classify_rejects_coarse_grid():
    with pytest.raises(ValidationError):
        classify_curve(builtin_curve("circle"), n_grid=4)


def test_fit_reproduces_fourier_coefficients():
    c = builtin_curve("wobble")
    n = 64
    u = 2.0 * np.pi * np.arange(n) / n
    alpha, beta, *_ = eval_curve(c, u)
    fitted = fit_curve(alpha, beta, degree=c.degree)
    np.testing.assert_allclose(fitted.alpha_cos, c.alpha_cos, atol=1e-14)
    np.testing.assert_allclose(fitted.alpha_sin, c.alpha_sin, atol=1e-14)
    np.testing.assert_allclose(fitted.beta_cos, c.beta_cos, atol=1e-14)
    np.testing.assert_allclose(fitted.beta_sin, c.beta_sin, atol=1e-14)


def test_fit_rejects_underresolved_degree():
    with pytest.raises(ValidationError):
        fit_curve(np.zeros(16), np.zeros(16), degree=8)


def test_json_round_trip():
    c = builtin_curve("remark42")
    back = PeriodicCurve.from_json(c.to_json())
    assert back == c


def test_from_dict_reports_missing_key():
    with pytest.raises(ValidationError):
        PeriodicCurve.from_dict({"alpha_cos": [1.0]})


def test_builtin_names_are_sorted_and_resolvable():
    names = builtin_curve_names()
    assert names == tuple(sorted(names))
    for name in names:
        builtin_curve(name)
    with pytest.raises(ValidationError):
        builtin_curve("astroid")


@settings(deadline=None, max_examples=20)
@given(st.floats(min_value=-6.0, max_value=6.0))
def test_classification_is_shift_invariant(c):
    rep = classify_curve(builtin_curve("ellipse").shift(c))
    assert rep.strictly_convex and rep.embedded
    assert rep.orientation == "negative"


@settings(deadline=None, max_examples=25)
@given(st.floats(min_value=0.0, max_value=0.2),
       st.floats(min_value=0.0, max_value=2 * np.pi))
def test_small_perturbations_stay_convex(eps, phase):
    # Degree-3 ripple on the circle; curvature stays negative for small eps.
    base = builtin_curve("circle")
    ripple = PeriodicCurve(
        [0.0, 1.0, 0.0, 0.1 * eps * np.cos(phase)],
        [0.0],
        base.beta_cos,
        base.beta_sin,
    )
    rep = classify_curve(ripple)
    assert rep.regular
    if eps < 0.05:
        assert rep.strictly_convex
