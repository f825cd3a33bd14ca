import json

import numpy as np
import pytest

from equiaffine import invariants
from equiaffine.errors import GridTooCoarseError, NotApplicableError
from equiaffine.expr import Dual4, eval_jet, parse
from equiaffine.frames import FrameField
from equiaffine.generator import GeneratorInput, generate
from equiaffine.invariants import (
    HForm, SurfaceType, act_on_h, analyze, check_asymptotic, classify,
    gauss_curvature, h_form, l_form, normal_form_case, one_adapted_frame,
    read_h_form, two_adapted_frame, two_adapted_gauge
)
from equiaffine.surfaces import ExprSurface

COSH = 'u*cosh(3*v); v; u*sinh(3*v)/3'
SWAPPED_COSH = 'v*cosh(3*u); u; v*sinh(3*u)/3'
REFLECTED_COSH = 'v*cosh(3*u); -u; v*sinh(3*u)/3'
HYPERBOLOID = '(1+u*v)/(u+v); (u-v)/(u+v); (1-u*v)/(u+v)'

U = np.linspace(-1, 1, 9)
V = np.linspace(-0.5, 0.5, 11)


def _ladder(source, u=U, v=V):
    uu, vv = np.meshgrid(u, v)
    jet = ExprSurface.parse(source).jet(uu, vv, 4)
    h = h_form(jet)
    frame = one_adapted_frame(FrameField.zero_adapted(jet), h)
    return h, two_adapted_frame(frame)


def test_h_form_of_simple_surfaces():
    h = h_form(ExprSurface.parse('u;v;u*v').jet(0.3, -0.2, 4)).value
    assert (h.h11, h.h12, h.h22) == (0.0, 1.0, 0.0)

    h = h_form(ExprSurface.parse('u;v;u^2+v^2').jet(0.3, -0.2, 4)).value
    assert (h.h11, h.h12, h.h22) == (2.0, 0.0, 2.0)


def test_classify():
    assert classify(HForm(2.0, 0.0, 2.0)) is SurfaceType.ELLIPTIC
    assert classify(HForm(0.0, 1.0, 0.0)) is SurfaceType.HYPERBOLIC
    assert classify(HForm(0.0, 0.0, 0.0)) is SurfaceType.DEGENERATE
    assert classify(HForm(1e-12, 0.0, 1e-12)) is SurfaceType.DEGENERATE

    types = classify(HForm(np.array([2.0, 0.0]), np.array([0.0, 1.0]),
                           np.array([2.0, 0.0])))
    assert list(types) == [SurfaceType.ELLIPTIC, SurfaceType.HYPERBOLIC]


def test_check_asymptotic():
    ok, worst = check_asymptotic(HForm(np.array([0.0, 1e-3]), 1.0, 0.0))
    assert not ok
    assert worst == 1e-3
    assert check_asymptotic(HForm(0.0, 1.0, 1e-12))[0]


def test_read_h_form_and_its_transformation_law():
    source = 'u; v; u^3 + u*v^2 + sin(u*v)'
    uu, vv = np.meshgrid(U, V)
    jet = ExprSurface.parse(source).jet(uu, vv, 4)
    frame = FrameField.zero_adapted(jet)
    h = h_form(jet).value

    read = read_h_form(frame)
    for name in ('h11', 'h12', 'h22'):
        np.testing.assert_allclose(getattr(read, name), getattr(h, name),
                                   atol=1e-12)

    b = np.array([[1.0, 0.5], [0.2, 1.3]])
    g = np.zeros((3, 3))
    g[:2, :2] = b
    g[2, 2] = 1 / np.linalg.det(b)
    gauged = read_h_form(frame.gauge(g))
    expected = act_on_h(h, b)
    for name in ('h11', 'h12', 'h22'):
        np.testing.assert_allclose(getattr(gauged, name),
                                   getattr(expected, name), atol=1e-10)


def test_gauss_curvature_jet_and_grid_agree():
    u = np.linspace(0, 1, 21)
    v = np.linspace(0, 1, 21)
    uu, vv = np.meshgrid(u, v)
    expected = -0.5 * np.exp(-uu * vv / 2)

    exact = gauss_curvature(eval_jet(parse('exp(u*v)'), uu, vv, 2))
    np.testing.assert_allclose(exact, expected, atol=1e-13)

    sampled = gauss_curvature(np.exp(uu * vv), u, v)
    np.testing.assert_allclose(sampled, expected, atol=1e-5)


def test_gauss_curvature_needs_positive_h12():
    with pytest.raises(NotApplicableError):
        gauss_curvature(eval_jet(parse('-1 - u^2'), U, 0.0, 2))


def test_saddle_is_flat_and_minimal():
    u = np.linspace(-1, 1, 50)
    analysis = analyze('u;v;u*v', u, u)
    assert analysis.affine
    assert analysis.mode == 'analytic'
    assert analysis.type_counts()['hyperbolic'] == 2500
    assert analysis.max_abs_K() <= 1e-12
    assert analysis.max_abs_H() <= 1e-12
    assert analysis.normal_form_case() == 'improper-sphere'
    assert analysis.w33_residual <= 1e-12

    # The affine normal of the saddle is constant
    normal = analysis.normal.reshape(-1, 3)
    np.testing.assert_allclose(normal, normal[:1].repeat(len(normal), 0),
                               atol=1e-12)


def test_cosh_surface_has_straight_u_curves():
    analysis = analyze(COSH, U, V)
    np.testing.assert_allclose(analysis.l.l22, 9, atol=1e-8)
    np.testing.assert_allclose(analysis.l.l11, 0, atol=1e-8)
    np.testing.assert_allclose(analysis.H, 0, atol=1e-8)
    np.testing.assert_allclose(analysis.K, 0, atol=1e-8)
    assert not analysis.relabelled
    assert analysis.normal_form_case() == 'u-rulings'

    # At v = 0 the affine normal is (0, 0, 1)
    j = int(np.argmin(np.abs(V)))
    np.testing.assert_allclose(analysis.normal[j],
                               np.tile([0.0, 0.0, 1.0], (len(U), 1)),
                               atol=1e-12)


def test_cos_surface_has_negative_l():
    analysis = analyze('u*cos(3*v); v; u*sin(3*v)/3', U, V)
    np.testing.assert_allclose(analysis.l.l22, -9, atol=1e-8)
    np.testing.assert_allclose(analysis.H, 0, atol=1e-8)


def test_swapped_coordinates_are_relabelled():
    analysis = analyze(SWAPPED_COSH, U, V)
    assert analysis.relabelled
    np.testing.assert_allclose(analysis.h.h12, -1, atol=1e-12)
    np.testing.assert_allclose(analysis.l.l22, 9, atol=1e-8)
    np.testing.assert_allclose(analysis.H, 0, atol=1e-8)
    assert analysis.normal_form_case() == 'v-rulings'


def test_reflected_coordinates_keep_their_labels():
    analysis = analyze(REFLECTED_COSH, U, V)
    assert not analysis.relabelled
    np.testing.assert_allclose(analysis.h.h12, 1, atol=1e-12)
    np.testing.assert_allclose(np.abs(analysis.l.l11), 9, atol=1e-8)
    np.testing.assert_allclose(analysis.l.l22, 0, atol=1e-8)
    assert analysis.normal_form_case() == 'v-rulings'


def test_hyperboloid_is_an_affine_sphere():
    u = np.linspace(0.5, 1.5, 9)
    points = ExprSurface.parse(HYPERBOLOID).evaluate(*np.meshgrid(u, u))
    np.testing.assert_allclose(
        points[..., 0] ** 2 + points[..., 1] ** 2 - points[..., 2] ** 2, 1,
        atol=1e-12)

    analysis = analyze(HYPERBOLOID, u, u)
    assert analysis.affine
    H = analysis.H
    np.testing.assert_allclose(H, H.flat[0], atol=1e-8)
    assert abs(H.flat[0]) > 0.1
    np.testing.assert_allclose(analysis.l.l11, 0, atol=1e-8)
    np.testing.assert_allclose(analysis.l.l22, 0, atol=1e-8)


@pytest.mark.parametrize('source', [COSH, REFLECTED_COSH])
def test_residual_gauge_scales_l(source):
    _, frame = _ladder(source)
    l = l_form(frame)
    for lam in (-1.0, -0.3, 0.3, 1.0):
        g = np.diag([np.exp(lam), np.exp(-lam), 1.0])
        gauged = frame.gauge(g)
        scaled = l_form(gauged)
        np.testing.assert_allclose(scaled.l11, l.l11 * np.exp(2 * lam),
                                   atol=1e-8)
        np.testing.assert_allclose(scaled.l22, l.l22 * np.exp(-2 * lam),
                                   atol=1e-8)
        np.testing.assert_allclose(scaled.l12, l.l12, atol=1e-8)

        # The gauged frame is still 1- and 2-adapted
        A_u, A_v = gauged.mc.u, gauged.mc.v
        np.testing.assert_allclose(A_u[..., 2, 2], 0, atol=1e-8)
        np.testing.assert_allclose(A_v[..., 2, 2], 0, atol=1e-8)
        h = read_h_form(gauged)
        np.testing.assert_allclose(h.h11, 0, atol=1e-8)
        np.testing.assert_allclose(h.h22, 0, atol=1e-8)


@pytest.mark.parametrize('source', [COSH, SWAPPED_COSH, HYPERBOLOID])
def test_one_adapted_frame_normalizes_h(source):
    u = np.linspace(0.5, 1.5, 9)
    uu, vv = np.meshgrid(u, u)
    jet = ExprSurface.parse(source).jet(uu, vv, 4)
    h = h_form(jet)
    for zero in (FrameField.zero_adapted(jet),
                 FrameField.zero_adapted(jet, h.h12)):
        # Cartan's lemma on the 0-adapted frame, whose coframe is (du, dv)
        np.testing.assert_allclose(zero.mc.u[..., 2, 1], zero.mc.v[..., 2, 0],
                                   atol=1e-12)

        frame = one_adapted_frame(zero, h)
        A_u, A_v = frame.mc.u, frame.mc.v
        c = frame.tangent_coframe()
        # w^3_1 = w^2 and w^3_2 = w^1
        np.testing.assert_allclose(A_u[..., 2, 0], c[..., 1, 0], atol=1e-10)
        np.testing.assert_allclose(A_v[..., 2, 0], c[..., 1, 1], atol=1e-10)
        np.testing.assert_allclose(A_u[..., 2, 1], c[..., 0, 0], atol=1e-10)
        np.testing.assert_allclose(A_v[..., 2, 1], c[..., 0, 1], atol=1e-10)


def test_orientation_reversing_gauge_flips_mean_curvature():
    u = np.linspace(0.5, 1.5, 9)
    _, frame = _ladder(HYPERBOLOID, u, u)
    l = l_form(frame)
    assert np.min(np.abs(l.l12)) > 0.1

    flipped = l_form(frame.gauge(np.diag([1.0, -1.0, -1.0])))
    np.testing.assert_allclose(flipped.l12, -l.l12, atol=1e-10)
    np.testing.assert_allclose(flipped.l11, l.l11, atol=1e-10)
    np.testing.assert_allclose(flipped.l22, l.l22, atol=1e-10)


def test_fundamental_forms():
    analysis = analyze('u;v;u*v', U, V)
    np.testing.assert_allclose(
        analysis.i_aff, np.broadcast_to([[0.0, 1.0], [1.0, 0.0]],
                                        (V.size, U.size, 2, 2)), atol=1e-12)
    np.testing.assert_allclose(analysis.ii_aff, 0, atol=1e-12)

    analysis = analyze(COSH, U, V)
    np.testing.assert_allclose(analysis.ii_aff[..., 1, 1], 9, atol=1e-8)
    np.testing.assert_allclose(analysis.ii_aff[..., 0, 0], 0, atol=1e-8)
    np.testing.assert_allclose(analysis.ii_aff[..., 0, 1], 0, atol=1e-8)

    report = next(analysis.reports())
    np.testing.assert_allclose(report.i_aff, [[0, 1], [1, 0]], atol=1e-12)
    assert report.ii_aff[1][1] == pytest.approx(9)


def test_two_adapted_gauge_absorbs_a_shear():
    u = np.linspace(0.5, 1.5, 9)
    uu, vv = np.meshgrid(u, u)
    jet = ExprSurface.parse(HYPERBOLOID).jet(uu, vv, 4)
    frame = one_adapted_frame(FrameField.zero_adapted(jet), h_form(jet))
    shear = np.eye(3)
    shear[0, 2] = 0.7

    original = two_adapted_gauge(frame).value
    sheared = two_adapted_gauge(frame.gauge(shear)).value
    np.testing.assert_allclose(sheared[..., 0, 2], original[..., 0, 2] - 0.7,
                               atol=1e-12)
    np.testing.assert_allclose(sheared[..., 1, 2], original[..., 1, 2],
                               atol=1e-12)


def test_normal_frame_is_already_two_adapted():
    uu, vv = np.meshgrid(U, V)
    columns = [
        ['cosh(3*v)', '0', 'sinh(3*v)/3'],
        ['3*u*sinh(3*v)', '1', 'u*cosh(3*v)'],
        ['3*sinh(3*v)', '0', 'cosh(3*v)'],
    ]
    matrix = Dual4.stack([
        Dual4.stack([eval_jet(parse(e), uu, vv, 4) for e in column])
        for column in columns
    ])
    coframe = Dual4.constant(
        np.broadcast_to([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]],
                        uu.shape + (3, 2)), 4)
    frame = FrameField(matrix, coframe)
    np.testing.assert_allclose(frame.det(), 1, atol=1e-12)
    np.testing.assert_allclose(two_adapted_gauge(frame).value,
                               np.broadcast_to(np.eye(3), uu.shape + (3, 3)),
                               atol=1e-12)

    A_u, A_v = frame.mc.u, frame.mc.v
    np.testing.assert_allclose(A_u[..., 2, 1], 1, atol=1e-12)
    np.testing.assert_allclose(A_v[..., 2, 0], 1, atol=1e-12)
    np.testing.assert_allclose(A_v[..., 0, 2], 9, atol=1e-10)
    np.testing.assert_allclose(A_v[..., 0, 1], 9 * uu, atol=1e-10)

    l = l_form(frame)
    assert normal_form_case(l) == 'u-rulings'


def test_elliptic_surface_is_skipped(paraboloid):
    analysis = analyze(paraboloid, U, V)
    assert not analysis.affine
    assert analysis.requested
    assert analysis.skipped == 'surface is elliptic'
    assert analysis.max_abs_K() is None
    assert 'affine steps skipped' in analysis.summary_line()


def test_non_asymptotic_hyperbolic_surface_is_skipped():
    analysis = analyze('u; v; u^2 - v^2', U, V)
    assert analysis.type_counts()['hyperbolic'] == U.size * V.size
    assert 'not asymptotic' in analysis.skipped


def test_mixed_surface_is_skipped():
    analysis = analyze('u; v; u^3 - 3*u*v^2 + u^2', U, V)
    assert analysis.skipped.startswith('surface is not hyperbolic everywhere')


def test_classification_only():
    analysis = analyze('u;v;u*v', U, V, affine=False)
    assert not analysis.requested
    assert analysis.skipped == 'not requested'
    rows = list(analysis.csv_rows())
    assert len(rows) == U.size * V.size
    assert rows[0][-1] is None


def test_grid_mode_on_a_generated_surface(sin_grid):
    analysis = analyze(sin_grid)
    assert analysis.mode == 'grid'
    assert analysis.type_counts()['hyperbolic'] == sin_grid.nu * sin_grid.nv
    assert analysis.max_abs_K() <= 1e-5
    assert analysis.max_abs_H() <= 1e-5
    assert analysis.normal_form_case(1e-5) == 'u-rulings'


def test_grid_mode_needs_enough_samples():
    grid = ExprSurface.parse('u;v;u*v').sample(np.linspace(0, 1, 5),
                                              np.linspace(0, 1, 20))
    with pytest.raises(GridTooCoarseError):
        analyze(grid)


def _random_sl3(rng):
    while True:
        m = rng.uniform(-2, 2, (3, 3))
        det = np.linalg.det(m)
        if abs(det) < 0.1:
            continue
        if det < 0:
            m[0] = -m[0]
            det = -det
        m = m / np.cbrt(det)
        if np.linalg.cond(m) < 50:
            return m


def test_grid_mode_is_equiaffine_invariant():
    grid = generate(GeneratorInput('sin(v)', 'v^2', v_range=(-0.5, 0.5),
                                   nu=9, nv=41))
    base = analyze(grid)
    rng = np.random.default_rng(20)
    for _ in range(3):
        a = _random_sl3(rng)
        moved = analyze(grid.transformed(a, rng.normal(size=3)))
        np.testing.assert_allclose(moved.K, base.K, atol=1e-7)
        np.testing.assert_allclose(moved.H, base.H, atol=1e-7)
        np.testing.assert_allclose(moved.h.h12, base.h.h12, atol=1e-7)
        np.testing.assert_allclose(moved.normal, base.normal @ a.T,
                                   atol=1e-6)


def test_report_serialization():
    analysis = analyze(COSH, U[:3], V[:2])
    document = json.loads(json.dumps(analysis.to_dict()))
    assert document['format'] == invariants.REPORT_FORMAT
    assert document['summary']['nu'] == 3
    assert document['summary']['normal_form_case'] == 'u-rulings'
    assert len(document['points']) == 6
    point = document['points'][0]
    assert point['type'] == 'hyperbolic'
    assert point['l22'] == pytest.approx(9)
    assert len(point['affine_normal']) == 3
    assert point['I_aff'][0][1] == pytest.approx(1)
    assert point['II_aff'][1][1] == pytest.approx(9)
