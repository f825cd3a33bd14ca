"""
The frame adaptation ladder and the equiaffine invariants it produces.

Starting from the 0-adapted frame (x_u, x_v, e3) of a surface given in
asymptotic coordinates, the frame is normalized twice:

* the 1-adapted gauge rescales it so that h becomes [[0, 1], [1, 0]],
* the 2-adapted gauge shears e3 along the tangent plane so that w^3_3
  vanishes, making e3 the affine normal.

The remaining coefficients w^1_3, w^2_3 give the l-matrix, whose
off-diagonal entry is the affine mean curvature.
"""
import collections
import enum
import logging

import numpy as np

from . import stencils
from .errors import (
    DegenerateTangentPlaneError, InconsistentReadError, NotApplicableError
)
from .expr import Dual4, matrix_inverse
from .expr.dual import adjugate_inverse, det3, log, stack, value_of
from .frames import DEGENERATE_NORM, RELABEL, FrameField
from .helpers import max_abs
from .surfaces import ExprSurface, SurfaceGrid

_log = logging.getLogger(__name__)

JET_ORDER = 4

DEGENERATE_TOL = 1e-9
ANALYTIC_ASYMPTOTIC_TOL = 1e-9
GRID_ASYMPTOTIC_TOL = 1e-6
ANALYTIC_READ_TOL = 1e-6
GRID_READ_TOL = 1e-4
NORMAL_FORM_TOL = 1e-6

REPORT_FORMAT = 'affine-invariant-report/1'


class SurfaceType(enum.Enum):
    ELLIPTIC = 'elliptic'
    HYPERBOLIC = 'hyperbolic'
    DEGENERATE = 'degenerate'


_TYPES = np.array([SurfaceType.ELLIPTIC, SurfaceType.HYPERBOLIC,
                   SurfaceType.DEGENERATE], dtype=object)


def _first_index(mask):
    mask = np.asarray(mask)
    if mask.ndim == 0:
        return None
    return tuple(int(i) for i in np.argwhere(mask)[0])


# region Forms


class HForm:
    """
    The coefficients of ``w^3_i = h_ij w^j``. Entries are either jets or
    plain values; `value` always gives plain values.
    """
    __slots__ = ('h11', 'h12', 'h22')

    def __init__(self, h11, h12, h22):
        self.h11 = h11
        self.h12 = h12
        self.h22 = h22

    @property
    def value(self):
        return HForm(value_of(self.h11), value_of(self.h12),
                     value_of(self.h22))

    @property
    def det(self):
        h = self.value
        return h.h11 * h.h22 - h.h12 ** 2

    def scale(self):
        h = self.value
        return np.maximum.reduce([np.abs(h.h11), np.abs(h.h12),
                                  np.abs(h.h22), np.ones_like(h.h12)])

    def matrix(self):
        h = self.value
        return np.stack([np.stack([h.h11, h.h12], -1),
                         np.stack([h.h12, h.h22], -1)], -2)

    def __repr__(self):
        h = self.value
        return 'HForm(h11={!r}, h12={!r}, h22={!r})'.format(
            h.h11, h.h12, h.h22)


class LForm:
    """
    The coefficients of ``w^1_3 = l12 w^1 + l22 w^2`` and
    ``w^2_3 = l11 w^1 + l12 w^2`` in a 2-adapted frame. ``mismatch``
    is the disagreement between the two reads of l12.
    """
    __slots__ = ('l11', 'l12', 'l22', 'mismatch')

    def __init__(self, l11, l12, l22, mismatch=0.0):
        self.l11 = l11
        self.l12 = l12
        self.l22 = l22
        self.mismatch = mismatch

    def matrix(self):
        return np.stack([np.stack([self.l11, self.l12], -1),
                         np.stack([self.l12, self.l22], -1)], -2)

    def __repr__(self):
        return 'LForm(l11={!r}, l12={!r}, l22={!r})'.format(
            self.l11, self.l12, self.l22)


def h_form(jet):
    """
    Computes ``h_ij = det[x_u, x_v, x_ij]`` from the jet of x.

    :param jet: a vector `Dual4` of x (order 2 or more).
    :return: the `HForm`, with jets two orders below the input.
    :raises DegenerateTangentPlaneError: where x_u and x_v are parallel.
    """
    x_u, x_v = jet.diff_u(), jet.diff_v()
    norm = np.linalg.norm(np.cross(value_of(x_u), value_of(x_v)), axis=-1)
    bad = ~(norm >= DEGENERATE_NORM)
    if np.any(bad):
        index = _first_index(bad)
        raise DegenerateTangentPlaneError(
            index, float(norm if index is None else norm[index]))

    return HForm(det3(x_u, x_v, x_u.diff_u()),
                 det3(x_u, x_v, x_u.diff_v()),
                 det3(x_u, x_v, x_v.diff_v()))


def read_h_form(frame):
    """
    Reads h from the coefficients of a 0-adapted frame, solving
    ``w^3_i = h_ij w^j`` against its coframe. Unlike `h_form`, this
    works for any 0-adapted frame, not only the standard completion.
    """
    A_u, A_v = frame.mc.u, frame.mc.v
    inverse = adjugate_inverse(frame.tangent_coframe())[0]
    first = (np.stack([A_u[..., 2, 0], A_v[..., 2, 0]], -1)[..., None, :]
             @ inverse)[..., 0, :]
    second = (np.stack([A_u[..., 2, 1], A_v[..., 2, 1]], -1)[..., None, :]
              @ inverse)[..., 0, :]
    return HForm(first[..., 0], 0.5 * (first[..., 1] + second[..., 0]),
                 second[..., 1])


def act_on_h(h, b):
    """The action ``h -> det(B) B^T h B`` of a tangential change of frame."""
    b = np.asarray(b, dtype=float)
    det = np.linalg.det(b)[..., None, None]
    m = det * (np.swapaxes(b, -1, -2) @ h.matrix() @ b)
    return HForm(m[..., 0, 0], m[..., 0, 1], m[..., 1, 1])


def classify(h, tol=DEGENERATE_TOL):
    """
    Classifies by the sign of ``det h`` against ``tol * scale^2``, where
    scale is the largest of ``|h_ij|`` and 1.

    :return: a `SurfaceType` for a single point, or an object array of
             them for many.
    """
    det = h.det
    threshold = tol * h.scale() ** 2
    codes = np.where(det > threshold, 0, np.where(det < -threshold, 1, 2))
    types = _TYPES[codes]
    if np.ndim(types) == 0:
        return types.item() if hasattr(types, 'item') else types
    return types


def check_asymptotic(h, tol=ANALYTIC_ASYMPTOTIC_TOL):
    """
    Whether the coordinates are asymptotic, that is, h11 and h22 vanish.

    :return: a tuple ``(ok, max(|h11|, |h22|))``.
    """
    h = h.value
    worst = max(max_abs(h.h11)[0], max_abs(h.h22)[0])
    return worst <= tol, worst


def mean_curvature(l):
    """The affine mean curvature ``H_aff = l12``."""
    return l.l12


def first_fundamental_form(h12):
    """
    The metric ``2 sqrt(h12) du dv`` as symmetric matrices in (du, dv).
    """
    root = np.sqrt(np.abs(value_of(h12)))
    zero = np.zeros_like(root)
    return np.stack([np.stack([zero, root], -1),
                     np.stack([root, zero], -1)], -2)


def second_fundamental_form(l, coframe):
    """
    ``l11 (w^1)^2 + 2 l12 w^1 w^2 + l22 (w^2)^2`` as symmetric matrices in
    (du, dv), given the tangent coframe values (rows w^1, w^2).
    """
    c = np.asarray(coframe, dtype=float)
    return np.swapaxes(c, -1, -2) @ l.matrix() @ c


def gauss_curvature(h12, u=None, v=None, accuracy=stencils.DEFAULT_ACCURACY):
    """
    The Gauss curvature of the metric ``2 sqrt(h12) du dv``,

        K = -h12^(-1/2) d^2/dudv log(sqrt(h12))

    :param h12: a scalar jet of order 2 or more (exact derivatives), or
                sampled values of shape ``(nv, nu)`` (finite differences,
                in which case ``u`` and ``v`` must be given).
    :return: K at every sample.
    """
    if isinstance(h12, Dual4):
        if h12.order < 2:
            raise ValueError('The Gauss curvature needs a jet of order 2')
        values = h12.value
        _require_positive(values)
        return -values ** -0.5 * (0.5 * log(h12.truncate(2))).partial(1, 1)

    if u is None or v is None:
        raise ValueError('Sampled h12 needs the u and v coordinates')

    values = np.asarray(h12, dtype=float)
    _require_positive(values)
    mixed = stencils.grid_derivative(0.5 * np.log(values), u, v, 1, 1,
                                     accuracy)
    return -values ** -0.5 * mixed


def _require_positive(h12):
    bad = ~(np.asarray(h12) > 0)
    if np.any(bad):
        raise NotApplicableError('h12 must be positive but is {!r} at sample '
                                 '{}'.format(float(np.asarray(h12)[bad][0]),
                                             _first_index(bad)))


# endregion

# region Ladder


def one_adapted_gauge(h):
    """
    The gauge ``diag(h12^-1/4, h12^-1/4, h12^1/2)`` taking a 0-adapted
    frame in asymptotic coordinates to a 1-adapted one. Where h12 < 0 the
    frame is first relabelled as (e2, e1, -e3), which flips its sign.

    :param h: the `HForm` with h12 as a jet (or plain values, for a
              constant gauge).
    :return: the gauge matrices.
    :raises NotApplicableError: if h12 vanishes somewhere.
    """
    flip = value_of(h.h12) < 0
    h12 = h.h12 * np.where(flip, -1.0, 1.0)
    if np.any(~(value_of(h12) > 0)):
        raise NotApplicableError('h12 vanishes at sample {}'.format(
            _first_index(~(value_of(h12) > 0))))

    a = h12 ** -0.25
    b = h12 ** 0.5
    gauge = stack([stack([a, 0.0, 0.0]),
                   stack([0.0, a, 0.0]),
                   stack([0.0, 0.0, b])], axis=-2)

    if np.any(flip):
        _log.debug('Relabelling the frame at %d samples where h12 < 0',
                   int(np.count_nonzero(flip)))
        relabel = np.where(np.asarray(flip)[..., None, None],
                           RELABEL, np.eye(3))
        gauge = relabel @ gauge
    return gauge


def one_adapted_frame(frame, h):
    return frame.gauge(one_adapted_gauge(h))


def two_adapted_gauge(frame):
    """
    The unipotent gauge ``[[1, 0, r1], [0, 1, r2], [0, 0, 1]]`` under
    which ``w^3_3 + r2 w^1 + r1 w^2`` becomes the new w^3_3; r1 and r2
    are solved pointwise so that it vanishes.

    :param frame: a 1-adapted `FrameField` with its coframe.
    """
    mc = frame.mc
    coframe = frame.coframe[..., :2, :]
    w33 = stack([mc.A_u[..., 2, 2], mc.A_v[..., 2, 2]])
    r = -(w33[..., None, :] @ matrix_inverse(coframe))[..., 0, :]
    r2, r1 = r[..., 0], r[..., 1]
    return stack([stack([1.0, 0.0, r1]),
                  stack([0.0, 1.0, r2]),
                  stack([0.0, 0.0, 1.0])], axis=-2)


def two_adapted_frame(frame):
    return frame.gauge(two_adapted_gauge(frame))


def l_form(frame, tol=ANALYTIC_READ_TOL):
    """
    Reads the l-matrix from a 2-adapted frame: l22 from w^1_3 against
    w^2, l11 from w^2_3 against w^1, and l12 (twice) from the diagonal
    reads, reporting their average.

    :raises InconsistentReadError: if the reads of l12 differ by more than
                                   ``tol * max(1, |l12|)``.
    """
    A_u, A_v = frame.mc.u, frame.mc.v
    inverse = adjugate_inverse(frame.tangent_coframe())[0]
    first = (np.stack([A_u[..., 0, 2], A_v[..., 0, 2]], -1)[..., None, :]
             @ inverse)[..., 0, :]
    second = (np.stack([A_u[..., 1, 2], A_v[..., 1, 2]], -1)[..., None, :]
              @ inverse)[..., 0, :]

    l12 = 0.5 * (first[..., 0] + second[..., 1])
    mismatch = np.abs(first[..., 0] - second[..., 1])
    bad = mismatch > tol * np.maximum(1.0, np.abs(l12))
    if np.any(bad):
        index = _first_index(bad)
        raise InconsistentReadError(
            float(np.max(mismatch)), index, tol)

    return LForm(second[..., 0], l12, first[..., 1], mismatch)


def affine_normal(frame):
    """The e3 vectors of a 2-adapted frame (defined up to sign)."""
    return frame.e3


def normal_form_case(l, tol=NORMAL_FORM_TOL):
    """
    Tells which family of asymptotic lines is straight, judging by which
    diagonal entries of the l-matrix vanish:

    * ``'improper-sphere'`` if l vanishes altogether,
    * ``'u-rulings'`` if l11 vanishes (the u-curves are lines),
    * ``'v-rulings'`` if l22 vanishes (the v-curves are lines),
    * ``None`` otherwise.
    """
    small11 = max_abs(l.l11)[0] <= tol
    small22 = max_abs(l.l22)[0] <= tol
    if small11 and small22:
        return 'improper-sphere'
    if small11:
        return 'u-rulings'
    if small22:
        return 'v-rulings'
    return None


# endregion

# region Analysis


def _matrix_tuple(m):
    return tuple(tuple(float(x) for x in row) for row in m)


class InvariantReport:
    """The invariants at a single point of the grid."""
    __slots__ = ('point', 'h', 'type', 'K_aff', 'H_aff', 'l',
                 'affine_normal', 'i_aff', 'ii_aff')

    def __init__(self, point, h, type, K_aff=None, H_aff=None, l=None,
                 affine_normal=None, i_aff=None, ii_aff=None):
        self.point = point
        self.h = h
        self.type = type
        self.K_aff = K_aff
        self.H_aff = H_aff
        self.l = l
        self.affine_normal = affine_normal
        # Symmetric 2x2 matrices in (du, dv)
        self.i_aff = i_aff
        self.ii_aff = ii_aff

    def to_dict(self):
        result = {
            'u': self.point[0],
            'v': self.point[1],
            'type': self.type.value,
            'h11': self.h.h11,
            'h12': self.h.h12,
            'h22': self.h.h22,
        }
        if self.K_aff is not None:
            result.update({
                'K_aff': self.K_aff,
                'H_aff': self.H_aff,
                'l11': self.l.l11,
                'l12': self.l.l12,
                'l22': self.l.l22,
                'affine_normal': list(self.affine_normal),
                'I_aff': [list(row) for row in self.i_aff],
                'II_aff': [list(row) for row in self.ii_aff],
            })
        return result


class SurfaceAnalysis:
    """
    The result of `analyze`: per-sample arrays of shape ``(nv, nu)``
    (v outer, u inner). The affine fields are ``None`` when the affine
    steps were skipped, and `skipped` tells why.
    """
    CSV_HEADER = ('u', 'v', 'type', 'h11', 'h12', 'h22', 'K_aff', 'H_aff',
                  'l11', 'l12', 'l22', 'normal_x', 'normal_y', 'normal_z')

    def __init__(self, u, v, mode, h, types, requested=True):
        self.u = u
        self.v = v
        self.mode = mode
        self.h = h
        self.types = types
        self.requested = requested
        self.skipped = None if requested else 'not requested'
        self.K = None
        self.H = None
        self.l = None
        self.normal = None
        self.i_aff = None
        self.ii_aff = None
        self.w33_residual = None
        # Whether the frame was relabelled (h12 < 0) all over the patch
        self.relabelled = False

    @property
    def affine(self):
        """Whether the affine invariants were computed."""
        return self.skipped is None

    def type_counts(self):
        counter = collections.Counter(self.types.ravel())
        return collections.OrderedDict(
            (t.value, counter.get(t, 0)) for t in SurfaceType)

    def max_abs_K(self):
        return max_abs(self.K)[0] if self.affine else None

    def max_abs_H(self):
        return max_abs(self.H)[0] if self.affine else None

    def normal_form_case(self, tol=NORMAL_FORM_TOL):
        """
        Like `normal_form_case`, but naming the coordinate curves, which
        trade places with the frame vectors on relabelled patches.
        """
        if not self.affine:
            return None
        case = normal_form_case(self.l, tol)
        if self.relabelled:
            case = {'u-rulings': 'v-rulings',
                    'v-rulings': 'u-rulings'}.get(case, case)
        return case

    def reports(self):
        """Yields an `InvariantReport` per sample, v outer and u inner."""
        for j, v in enumerate(self.v):
            for i, u in enumerate(self.u):
                h = HForm(float(self.h.h11[j, i]), float(self.h.h12[j, i]),
                          float(self.h.h22[j, i]))
                if not self.affine:
                    yield InvariantReport((float(u), float(v)), h,
                                          self.types[j, i])
                    continue

                yield InvariantReport(
                    (float(u), float(v)), h, self.types[j, i],
                    K_aff=float(self.K[j, i]),
                    H_aff=float(self.H[j, i]),
                    l=LForm(float(self.l.l11[j, i]), float(self.l.l12[j, i]),
                            float(self.l.l22[j, i]),
                            float(self.l.mismatch[j, i])),
                    affine_normal=tuple(float(x) for x in self.normal[j, i]),
                    i_aff=_matrix_tuple(self.i_aff[j, i]),
                    ii_aff=_matrix_tuple(self.ii_aff[j, i])
                )

    def summary(self):
        return collections.OrderedDict([
            ('mode', self.mode),
            ('nu', int(len(self.u))),
            ('nv', int(len(self.v))),
            ('types', self.type_counts()),
            ('affine', self.affine),
            ('skipped', self.skipped),
            ('max_abs_K_aff', self.max_abs_K()),
            ('max_abs_H_aff', self.max_abs_H()),
            ('max_l12_mismatch',
             max_abs(self.l.mismatch)[0] if self.affine else None),
            ('normal_form_case', self.normal_form_case()),
        ])

    def summary_line(self):
        counts = ', '.join('{} {}'.format(n, t)
                           for t, n in self.type_counts().items() if n)
        if not self.affine:
            return '{}; affine steps skipped ({})'.format(counts, self.skipped)
        return '{}; max|K_aff| = {:.3g}, max|H_aff| = {:.3g}{}'.format(
            counts, self.max_abs_K(), self.max_abs_H(),
            '' if self.normal_form_case() is None
            else '; ' + self.normal_form_case())

    def to_dict(self):
        return {
            'format': REPORT_FORMAT,
            'summary': self.summary(),
            'points': [r.to_dict() for r in self.reports()],
        }

    def csv_rows(self):
        """Yields the CSV rows (without header) of the per-point report."""
        for r in self.reports():
            row = [r.point[0], r.point[1], r.type.value,
                   r.h.h11, r.h.h12, r.h.h22]
            if r.K_aff is None:
                row.extend([None] * 8)
            else:
                row.extend([r.K_aff, r.H_aff, r.l.l11, r.l.l12, r.l.l22])
                row.extend(r.affine_normal)
            yield row


def _surface_jet(surface, u, v, accuracy):
    if isinstance(surface, str):
        surface = ExprSurface.parse(surface)
    elif isinstance(surface, (tuple, list)):
        surface = ExprSurface(*surface)

    if isinstance(surface, SurfaceGrid):
        jet = stencils.grid_jet(surface.points, surface.u, surface.v,
                                JET_ORDER, accuracy)
        return 'grid', surface.u, surface.v, jet

    if isinstance(surface, ExprSurface):
        if u is None or v is None:
            raise ValueError('Expression surfaces need the u and v values')
        u = np.atleast_1d(np.asarray(u, dtype=float))
        v = np.atleast_1d(np.asarray(v, dtype=float))
        uu, vv = np.meshgrid(u, v)
        return 'analytic', u, v, surface.jet(uu, vv, JET_ORDER)

    raise TypeError('Cannot analyse a {}'.format(type(surface).__name__))


def _inapplicable_reason(types, h, tol):
    counts = collections.Counter(types.ravel())
    others = [t for t in (SurfaceType.ELLIPTIC, SurfaceType.DEGENERATE)
              if counts.get(t)]
    if others:
        if not counts.get(SurfaceType.HYPERBOLIC) and len(others) == 1:
            return 'surface is {}'.format(others[0].value)
        return 'surface is not hyperbolic everywhere ({})'.format(', '.join(
            '{} {}'.format(counts[t], t.value) for t in others))

    ok, worst = check_asymptotic(h, tol)
    if not ok:
        return ('coordinates are not asymptotic (max |h11|, |h22| = {:.3g})'
                .format(worst))
    return None


def analyze(surface, u=None, v=None, affine=True,
            degenerate_tol=DEGENERATE_TOL, asymptotic_tol=None,
            read_tol=None, accuracy=stencils.DEFAULT_ACCURACY):
    """
    Runs the whole ladder over a grid of points.

    Args:
        surface (`SurfaceGrid` | `ExprSurface` | `str` | `tuple`):
            The surface. Grids are analysed with finite differences,
            expressions (``"x;y;z"`` or a triple) with exact jets.

        u, v (`ndarray`, optional):
            The sample values, required for expression surfaces.

        affine (`bool`, optional):
            Whether to go beyond the classification.

        degenerate_tol (`float`, optional):
            Relative tolerance of the degenerate classification.

        asymptotic_tol (`float`, optional):
            Largest ``|h11|, |h22|`` accepted as asymptotic coordinates.
            Defaults to 1e-9 for expressions and 1e-6 for grids.

        read_tol (`float`, optional):
            Largest disagreement between the two reads of l12. Defaults
            to 1e-6 for expressions and 1e-4 for grids.

        accuracy (`int`, optional):
            Order of accuracy of the finite differences (grids only).

    Returns:
        The `SurfaceAnalysis`. If the surface is not hyperbolic in
        asymptotic coordinates the affine steps are skipped, and its
        ``skipped`` attribute explains why.
    """
    mode, u, v, jet = _surface_jet(surface, u, v, accuracy)
    grid = mode == 'grid'
    if asymptotic_tol is None:
        asymptotic_tol = GRID_ASYMPTOTIC_TOL if grid else \
            ANALYTIC_ASYMPTOTIC_TOL
    if read_tol is None:
        read_tol = GRID_READ_TOL if grid else ANALYTIC_READ_TOL

    _log.info('Analysing %d x %d samples in %s mode', len(u), len(v), mode)
    h = h_form(jet)
    types = classify(h, degenerate_tol)
    analysis = SurfaceAnalysis(u, v, mode, h.value, types, requested=affine)
    if not affine:
        return analysis

    reason = _inapplicable_reason(types, h, asymptotic_tol)
    if reason:
        _log.info('Skipping the affine invariants: %s', reason)
        analysis.skipped = reason
        return analysis

    frame = FrameField.zero_adapted(jet, h.h12)
    frame = one_adapted_frame(frame, h)
    frame = two_adapted_frame(frame)
    _log.debug('Reached the 2-adapted frame with jets of order %d',
               frame.mc.order)

    l = l_form(frame, read_tol)
    h12 = h.h12 * np.where(h.value.h12 < 0, -1.0, 1.0)
    if grid:
        K = gauss_curvature(h12.value, u, v, accuracy)
    else:
        K = gauss_curvature(h12)

    analysis.K = K
    analysis.H = mean_curvature(l)
    analysis.l = l
    analysis.normal = affine_normal(frame)
    analysis.i_aff = first_fundamental_form(h12)
    analysis.ii_aff = second_fundamental_form(l, frame.tangent_coframe())
    analysis.w33_residual = max(max_abs(frame.mc.u[..., 2, 2])[0],
                                max_abs(frame.mc.v[..., 2, 2])[0])
    analysis.relabelled = bool(np.all(h.value.h12 < 0))
    return analysis


# endregion
