"""
Checks certifying that a surface is a hyperbolic, affine-flat and
affine-minimal surface in the ruled normal form.

Every check compares quantities obtained through independent paths (the
profile integration against the invariant analysis, or the closed forms
against the integration) and reports the worst offending grid point.
"""
import collections
import logging

import numpy as np

from . import generator, stencils
from .errors import (
    GridTooCoarseError, MissingFramesError, UnknownPresetError
)
from .expr import as_expr, evaluate
from .frames import mc_coefficients
from .helpers import max_abs
from .invariants import GRID_ASYMPTOTIC_TOL, SurfaceType, analyze
from .surfaces import SurfaceGrid

_log = logging.getLogger(__name__)

ANALYTIC_TOL = 1e-9
GRID_TOL = 1e-5
CLOSED_FORM_TOL = 1e-6
FRAME_TOL = 1e-6
RULED_TOL = 1e-12
UNIMODULAR_TOL = 1e-8
IMPROPER_SPHERE_TOL = 1e-9


class CheckResult:
    """
    The outcome of a single check.

    Args:
        name (`str`):
            Short name of the check, such as ``'flat'``.

        residual (`float` | `None`):
            The largest residual found, or ``None`` if it could not run.

        tolerance (`float`):
            The largest residual accepted.

        passed (`bool`):
            Whether the check passed.

        worst (`dict`, optional):
            ``{'u': ..., 'v': ...}`` of the sample with the largest residual.

        reason (`str`, optional):
            Why the check failed, when the residual alone does not say.

        details (`dict`, optional):
            Extra, check-specific information.
    """
    def __init__(self, name, residual, tolerance, passed, worst=None,
                 reason=None, details=None):
        self.name = name
        self.residual = residual
        self.tolerance = tolerance
        self.passed = bool(passed)
        self.worst = worst
        self.reason = reason
        self.details = details or {}

    def to_dict(self):
        return collections.OrderedDict([
            ('name', self.name),
            ('residual', self.residual),
            ('tolerance', self.tolerance),
            ('passed', self.passed),
            ('worst', self.worst),
            ('reason', self.reason),
            ('details', self.details),
        ])

    def __repr__(self):
        return 'CheckResult({!r}, residual={!r}, passed={})'.format(
            self.name, self.residual, self.passed)


class VerificationReport:
    """
    A list of `CheckResult`, passing only if every check does. The
    improper-sphere detection is informational and never fails it.
    """
    def __init__(self, checks, improper_sphere=None):
        self.checks = list(checks)
        self.improper_sphere = improper_sphere

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __iter__(self):
        return iter(self.checks)

    def __len__(self):
        return len(self.checks)

    def __getitem__(self, name):
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def failed(self):
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        return collections.OrderedDict([
            ('passed', self.passed),
            ('checks', [c.to_dict() for c in self.checks]),
            ('improper_sphere', self.improper_sphere),
        ])

    def format_table(self):
        """The report as a plain text table, one row per check."""
        rows = [('check', 'residual', 'tolerance', 'result', 'worst (u, v)')]
        for c in self.checks:
            rows.append((
                c.name,
                '-' if c.residual is None else '{:.3e}'.format(c.residual),
                '{:.1e}'.format(c.tolerance),
                'pass' if c.passed else 'FAIL',
                '' if c.worst is None else '({:.6g}, {:.6g})'.format(
                    c.worst['u'], c.worst['v'])
            ))

        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = ['  '.join(x.ljust(w) for x, w in zip(r, widths)).rstrip()
                 for r in rows]
        lines.insert(1, '  '.join('-' * w for w in widths))

        for c in self.checks:
            if c.reason:
                lines.append('{}: {}'.format(c.name, c.reason))
        if self.improper_sphere is not None:
            lines.append('improper affine sphere: {}'.format(
                'yes' if self.improper_sphere['detected'] else 'no'))
        lines.append('verdict: {}'.format(
            'PASS' if self.passed else 'FAIL'))
        return '\n'.join(lines)


def _point(u, v, shape, flat_index):
    if flat_index is None:
        return None
    j, i = np.unravel_index(flat_index, shape)[:2]
    return {'u': float(u[i]), 'v': float(v[j])}


def _require_frames(grid, check):
    if not isinstance(grid, SurfaceGrid) or not grid.has_frames:
        raise MissingFramesError(check)


def _on_v(expr, v):
    return np.broadcast_to(evaluate(as_expr(expr), 0.0, v), np.shape(v))


# region Checks


def verify_flat_minimal(surface, tol=None, u=None, v=None, analysis=None):
    """
    Analyses the surface and checks that every sample is hyperbolic and
    that ``|K_aff|`` and ``|H_aff|`` stay below ``tol``.

    :param surface: a `SurfaceGrid`, or an expression surface (which then
                    needs the ``u`` and ``v`` values).
    :param tol: defaults to 1e-9 for expressions and 1e-5 for grids.
    :param analysis: a previous `SurfaceAnalysis` to reuse.
    :return: the ``hyperbolic``, ``flat`` and ``minimal`` `CheckResult`.
    """
    grid = isinstance(surface, SurfaceGrid)
    if tol is None:
        tol = GRID_TOL if grid else ANALYTIC_TOL

    if analysis is None:
        kwargs = {'asymptotic_tol': max(tol, GRID_ASYMPTOTIC_TOL)} \
            if grid else {}
        analysis = analyze(surface, u, v, **kwargs)

    shape = analysis.types.shape
    others = analysis.types != SurfaceType.HYPERBOLIC
    count = int(np.count_nonzero(others))
    first = int(np.flatnonzero(others)[0]) if count else None
    counts = analysis.type_counts()
    checks = [CheckResult(
        'hyperbolic', float(count), 0.0, count == 0,
        worst=_point(analysis.u, analysis.v, shape, first),
        reason=None if count == 0 else ', '.join(
            '{} {}'.format(n, t) for t, n in counts.items()
            if n and t != SurfaceType.HYPERBOLIC.value),
        details={'types': counts}
    )]

    for name, values in (('flat', analysis.K), ('minimal', analysis.H)):
        if not analysis.affine:
            checks.append(CheckResult(name, None, tol, False,
                                      reason=analysis.skipped))
            continue

        residual, index = max_abs(values)
        checks.append(CheckResult(
            name, residual, tol, residual <= tol,
            worst=_point(analysis.u, analysis.v, shape, index)))

    for c in checks:
        _log.info('Check %s: %s', c.name, 'pass' if c.passed else 'fail')
    return checks


def _normal_form(u, v, ell, f):
    """The expected A_u, A_v for a grid in the normal form."""
    uu, vv = np.meshgrid(u, v)
    l = _on_v(ell, v)[:, None] * np.ones_like(uu)
    ff = _on_v(f, v)[:, None] * np.ones_like(uu)

    A_u = np.zeros(uu.shape + (3, 3))
    A_v = np.zeros(uu.shape + (3, 3))
    A_u[..., 2, 1] = 1.0
    A_v[..., 2, 0] = 1.0
    A_v[..., 0, 2] = l
    A_v[..., 0, 1] = uu * l + ff
    return A_u, A_v


def verify_mc_normal_form(grid, ell, f, tol=FRAME_TOL,
                          accuracy=stencils.DEFAULT_ACCURACY):
    """
    Differentiates the stored frames and compares all the 18 entries of
    their A_u and A_v with the normal form, where only

        A_u[3,2] = 1,  A_v[3,1] = 1,  A_v[1,3] = l(v),  A_v[1,2] = u l(v) + f(v)

    are nonzero (1-based indices).

    :return: the ``mc-normal-form`` `CheckResult`. Its details list the
             offending entries and their largest deviation.
    """
    _require_frames(grid, 'verify_mc_normal_form')
    jet = stencils.grid_jet(grid.frame_matrices(), grid.u, grid.v, 1,
                            accuracy)
    mc = mc_coefficients(jet)
    expected_u, expected_v = _normal_form(grid.u, grid.v, ell, f)

    deviation = np.stack([np.abs(mc.u - expected_u),
                          np.abs(mc.v - expected_v)], axis=-3)
    per_point = deviation.reshape(deviation.shape[:2] + (-1,)).max(axis=-1)
    residual, index = max_abs(per_point)

    offending = collections.OrderedDict()
    per_entry = deviation.max(axis=(0, 1))
    for k, name in enumerate(('A_u', 'A_v')):
        for i in range(3):
            for j in range(3):
                if per_entry[k, i, j] > tol:
                    offending['{}[{},{}]'.format(name, i + 1, j + 1)] = \
                        float(per_entry[k, i, j])

    return CheckResult(
        'mc-normal-form', residual, tol, residual <= tol,
        worst=_point(grid.u, grid.v, per_point.shape, index),
        reason='offending entries: ' + ', '.join(offending)
        if offending else None,
        details={'offending': offending}
    )


def verify_ruled(grid, tol=RULED_TOL):
    """
    Checks that the u-curves are straight lines: every interior sample
    must lie on the chord between its neighbours along u. On uniform
    grids the residual is the plain second difference.
    """
    if grid.nu < 3:
        raise GridTooCoarseError(grid.nu, 3, 'u')

    u = grid.u
    left = (u[2:] - u[1:-1]) / (u[2:] - u[:-2])
    right = (u[1:-1] - u[:-2]) / (u[2:] - u[:-2])
    x = grid.points
    chord = left[None, :, None] * x[:, :-2] + right[None, :, None] * x[:, 2:]
    residual_points = 2.0 * np.linalg.norm(x[:, 1:-1] - chord, axis=-1)
    residual, index = max_abs(residual_points)
    worst = None
    if index is not None:
        j, i = np.unravel_index(index, residual_points.shape)
        worst = {'u': float(u[i + 1]), 'v': float(grid.v[j])}
    return CheckResult('ruled', residual, tol, residual <= tol, worst=worst)


def verify_unimodular(grid, tol=UNIMODULAR_TOL):
    """Checks that ``det[e1, e2, e3] = 1`` on the stored frames."""
    _require_frames(grid, 'verify_unimodular')
    deviation = np.linalg.det(grid.frame_matrices()) - 1.0
    residual, index = max_abs(deviation)
    return CheckResult('unimodular', residual, tol, residual <= tol,
                       worst=_point(grid.u, grid.v, deviation.shape, index))


def verify_sturm_liouville(grid, ell, tol=FRAME_TOL,
                           accuracy=stencils.DEFAULT_ACCURACY):
    """
    Checks that the ruling direction solves ``e1'' = l(v) e1``, with
    the second derivative taken by finite differences along v.
    """
    _require_frames(grid, 'verify_sturm_liouville')
    e1 = grid.frames['e1'][:, 0, :]
    second = stencils.derivative_matrix(grid.v, 2, accuracy, 'v') @ e1
    residual_v = np.linalg.norm(second - _on_v(ell, grid.v)[:, None] * e1,
                                axis=-1)
    residual, index = max_abs(residual_v)
    worst = None if index is None else {'u': float(grid.u[0]),
                                        'v': float(grid.v[index])}
    return CheckResult('sturm-liouville', residual, tol, residual <= tol,
                       worst=worst)


def _improper_sphere(grid, tol, ell):
    _require_frames(grid, 'detect_improper_sphere')
    e3 = grid.frames['e3']
    reference = e3[grid.nearest_index(0.0, 0.0)]
    deviation = max_abs(np.linalg.norm(e3 - reference, axis=-1))[0]
    detected = deviation <= tol

    record = collections.OrderedDict([
        ('detected', bool(detected)),
        ('deviation', deviation),
        ('tolerance', tol),
    ])
    if ell is not None:
        max_ell = max_abs(_on_v(ell, grid.v))[0]
        record['max_abs_ell'] = max_ell
        if (max_ell <= tol) != detected:
            _log.warning('The affine normals say the surface is%s an '
                         'improper affine sphere but max |l| = %g',
                         '' if detected else ' not', max_ell)
    return record


def detect_improper_sphere(grid, tol=IMPROPER_SPHERE_TOL, ell=None):
    """
    Whether the affine normal e3 is constant over the grid, that is,
    whether the surface is an improper affine sphere. The reference is
    the sample closest to (0, 0). When ``ell`` is known, a disagreement
    with ``max |l| <= tol`` is logged as a warning.
    """
    return _improper_sphere(grid, tol, ell)['detected']


def cross_check_closed_form(name, a=3.0, f=None, u_range=(-1.0, 1.0),
                            v_range=(-1.0, 1.0), nu=21, nv=41,
                            rk_step=generator.DEFAULT_RK_STEP):
    """
    Builds the preset both by integrating its profile and through its
    closed form, and returns the largest distance between the two.
    """
    try:
        _, ell, bound_f = generator.PRESETS[name]
    except KeyError:
        raise UnknownPresetError(name, generator.PRESETS) from None

    inp = generator.GeneratorInput(
        repr(float(ell(a))), bound_f or (f if f is not None else '0'),
        u_range, v_range, nu, nv, rk_step)
    integrated = generator.generate(inp)
    closed = generator.closed_form_preset(
        name, inp.u_values, inp.v_values, a=a, f=f, rk_step=rk_step)

    deviation = float(np.max(np.linalg.norm(
        integrated.points - closed.points, axis=-1)))
    _log.info('Preset %s deviates %g from the integration', name, deviation)
    return deviation


# endregion


def run_verification(grid, ell=None, f=None, tol=None):
    """
    Runs every check that applies to the grid:

    * ruledness, when there are 3 or more u values,
    * hyperbolicity, flatness and minimality, with ``tol``,
    * unimodularity, if the grid has frames,
    * the Maurer-Cartan normal form and the Sturm-Liouville equation, if
      ``ell`` and ``f`` are given (which requires frames),

    and records whether the surface is an improper affine sphere.

    :return: the `VerificationReport`.
    """
    checks = []
    if grid.nu >= 3:
        checks.append(verify_ruled(grid))
    checks.extend(verify_flat_minimal(grid, tol))

    if grid.has_frames:
        checks.append(verify_unimodular(grid))
    if ell is not None and f is not None:
        checks.append(verify_mc_normal_form(grid, ell, f))
        checks.append(verify_sturm_liouville(grid, ell))

    improper = None
    if grid.has_frames:
        improper = _improper_sphere(grid, IMPROPER_SPHERE_TOL, ell)

    report = VerificationReport(checks, improper)
    _log.info('Verification %s (%d checks)',
              'passed' if report.passed else 'failed', len(checks))
    return report
