"""
Generation of hyperbolic affine-flat, affine-minimal surfaces.

Given two functions l(v) and f(v), the profile curves are the solution of

    xbar' = e2,    e1' = e3,    e2' = f e1,    e3' = l e1

with the identity frame and xbar = 0 at v = 0, and the surface is swept by
the straight lines

    x(u, v) = u e1(v) + xbar(v)

whose frames (e1, u e3 + e2, e3) are stored along with the points.
"""
import collections
import logging
import math

import numpy as np

from .errors import (
    IntegrationDivergedError, PhiDependsOnUError, UnknownPresetError
)
from .expr import as_expr, evaluate
from .surfaces import SurfaceGrid
from .version import __version__

_log = logging.getLogger(__name__)

DEFAULT_RK_STEP = 1e-3

ODEState = collections.namedtuple('ODEState', 'v xbar e1 e2 e3')

# xbar = 0 and the identity frame, as rows (xbar, e1, e2, e3)
INITIAL_STATE = np.array([
    [0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0]
])


def _generated_by():
    return 'equiaffine {}'.format(__version__)


class GeneratorInput(collections.namedtuple('GeneratorInput', (
        'ell', 'f', 'u_range', 'v_range', 'nu', 'nv', 'rk_step'))):
    """
    The (immutable) input of `generate`.

    Args:
        ell (`str` | `Expr`):
            The function l(v) driving the ruling direction.

        f (`str` | `Expr`):
            The function f(v).

        u_range, v_range (`tuple`):
            The ``(lo, hi)`` intervals, with ``lo < hi``.

        nu, nv (`int`):
            How many samples to take along each direction (2 or more).

        rk_step (`float`, optional):
            The largest step of the Runge-Kutta integration.
    """
    __slots__ = ()

    def __new__(cls, ell, f, u_range=(-1.0, 1.0), v_range=(-1.0, 1.0),
                nu=21, nv=41, rk_step=DEFAULT_RK_STEP):
        ell, f = as_expr(ell), as_expr(f)
        for name, expr in (('ell', ell), ('f', f)):
            extra = expr.variables() - {'v'}
            if extra:
                raise ValueError('{} must depend on v only, not on {}'.format(
                    name, ', '.join(sorted(extra))))

        u_range = tuple(float(x) for x in u_range)
        v_range = tuple(float(x) for x in v_range)
        for name, (lo, hi) in (('u_range', u_range), ('v_range', v_range)):
            if not lo < hi:
                raise ValueError('{} must satisfy lo < hi, not {!r}'.format(
                    name, (lo, hi)))

        if int(nu) < 2 or int(nv) < 2:
            raise ValueError('nu and nv must be 2 or more, not {}x{}'
                             .format(nu, nv))

        rk_step = float(rk_step)
        if not rk_step > 0:
            raise ValueError('rk_step must be positive, not {!r}'
                             .format(rk_step))

        return super().__new__(cls, ell, f, u_range, v_range,
                               int(nu), int(nv), rk_step)

    @property
    def u_values(self):
        return np.linspace(self.u_range[0], self.u_range[1], self.nu)

    @property
    def v_values(self):
        return np.linspace(self.v_range[0], self.v_range[1], self.nv)


# region Integration


def rk4_solve(rhs, t0, y0, targets, step=DEFAULT_RK_STEP):
    """
    Classical fixed-step Runge-Kutta from ``t0``, visiting every target
    in turn. Each interval between consecutive targets is split into
    ``ceil(|delta| / step)`` equal steps, so every target is hit exactly.

    :param rhs: callable ``rhs(t, y)`` returning the derivative of ``y``.
    :param t0: the initial time.
    :param y0: the initial state (any array shape).
    :param targets: the times at which to report the state, in the order
                    they should be visited.
    :param step: the largest step to take.
    :return: the states, with shape ``(len(targets),) + y0.shape``.
    :raises IntegrationDivergedError: on the first non-finite state.
    """
    if not step > 0:
        raise ValueError('The step must be positive, not {!r}'.format(step))

    t = float(t0)
    y = np.array(y0, dtype=float)
    result = np.empty((len(targets),) + y.shape)
    total = 0
    for k, target in enumerate(targets):
        delta = float(target) - t
        n = int(math.ceil(abs(delta) / step - 1e-9)) if delta else 0
        h = delta / n if n else 0.0
        for i in range(n):
            s = t + i * h
            k1 = rhs(s, y)
            k2 = rhs(s + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(s + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(s + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.all(np.isfinite(y)):
                raise IntegrationDivergedError(s + h)

        total += n
        t = float(target)
        result[k] = y

    _log.debug('Integrated %d steps up to t = %r', total, t)
    return result


def _solve_from_zero(rhs, y0, v, step):
    """Integrates outwards from 0 towards both ends of the sorted ``v``."""
    v = np.asarray(v, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    result = np.empty((v.size,) + y0.shape)
    forward = v >= 0
    if np.any(forward):
        result[forward] = rk4_solve(rhs, 0.0, y0, v[forward], step)
    backward = ~forward
    if np.any(backward):
        result[backward] = rk4_solve(
            rhs, 0.0, y0, v[backward][::-1], step)[::-1]
    return result


def _profile_rhs(ell, f):
    def rhs(v, y):
        # rows are xbar, e1, e2, e3
        return np.stack([y[2], y[3], evaluate(f, 0.0, v) * y[1],
                         evaluate(ell, 0.0, v) * y[1]])
    return rhs


def integrate_profile(input):
    """
    Integrates the profile curves at the v values of the input.

    :return: the `ODEState` sampled at ``input.v_values``.
    """
    v = input.v_values
    states = _solve_from_zero(_profile_rhs(input.ell, input.f),
                              INITIAL_STATE, v, input.rk_step)
    return ODEState(v, states[:, 0], states[:, 1], states[:, 2],
                    states[:, 3])


def extend_ruled(profile, u, meta=None):
    """
    Sweeps the profile along its rulings, ``x = u e1 + xbar``.

    :param profile: the `ODEState` of the profile.
    :param u: the u values.
    :return: the `SurfaceGrid`, with frames.
    """
    u = np.asarray(u, dtype=float)
    shape = (profile.v.size, u.size, 3)
    scale = u[None, :, None]
    e1 = profile.e1[:, None, :]
    e3 = profile.e3[:, None, :]
    frames = {
        'e1': np.broadcast_to(e1, shape),
        'e2': scale * e3 + profile.e2[:, None, :],
        'e3': np.broadcast_to(e3, shape),
    }
    points = scale * e1 + profile.xbar[:, None, :]
    return SurfaceGrid(u, profile.v, points, frames=frames, meta=meta)


def generate(input=None, **kwargs):
    """
    Generates the surface of the given `GeneratorInput`. Keyword
    arguments build the input when none is given.
    """
    if input is None:
        input = GeneratorInput(**kwargs)

    _log.info('Generating a %dx%d grid for ell = %s, f = %s',
              input.nu, input.nv, input.ell, input.f)
    profile = integrate_profile(input)
    meta = {
        'ell': str(input.ell),
        'f': str(input.f),
        'presets': None,
        'rk_step': input.rk_step,
        'generated_by': _generated_by(),
    }
    return extend_ruled(profile, input.u_values, meta)


# endregion

# region Presets


def _quadrature(f, weights, v, step):
    """
    F and G with ``F'' = f w1``, ``G'' = f w3`` and zero initial values,
    for weight functions ``weights(v) -> (w1, w3)``.

    :return: arrays ``(F, F', G, G')`` sampled at ``v``.
    """
    def rhs(t, y):
        w1, w3 = weights(t)
        ft = evaluate(f, 0.0, t)
        return np.array([y[1], ft * w1, y[3], ft * w3])

    result = _solve_from_zero(rhs, np.zeros(4), v, step)
    return result[:, 0], result[:, 1], result[:, 2], result[:, 3]


def _profile(v, e1, e3, F, dF, G, dG):
    ones = np.ones_like(v)
    return ODEState(v,
                    np.stack([F, v, G], -1),
                    e1,
                    np.stack([dF, ones, dG], -1),
                    e3)


def _sphere_profile(v, f, step):
    """The improper affine spheres, l = 0."""
    if f is None:
        zero = np.zeros_like(v)
        F = dF = G = dG = zero
    else:
        F, dF, G, dG = _quadrature(f, lambda t: (1.0, t), v, step)

    zeros, ones = np.zeros_like(v), np.ones_like(v)
    return _profile(v, np.stack([ones, zeros, v], -1),
                    np.stack([zeros, zeros, ones], -1), F, dF, G, dG)


def _saddle_profile(v, a, f, step):
    return _sphere_profile(v, None, step)


def _cubic_profile(v, a, f, step):
    zeros, ones = np.zeros_like(v), np.ones_like(v)
    return _profile(v, np.stack([ones, zeros, v], -1),
                    np.stack([zeros, zeros, ones], -1),
                    3 * v ** 2, 6 * v, v ** 3, 3 * v ** 2)


def _general_sphere_profile(v, a, f, step):
    return _sphere_profile(v, f, step)


def _trig_profile(v, a, f, step, c, s, sign):
    zeros = np.zeros_like(v)
    e1 = np.stack([c(a * v), zeros, s(a * v) / a], -1)
    e3 = np.stack([sign * a * s(a * v), zeros, c(a * v)], -1)
    if f is None:
        F = dF = G = dG = zeros
    else:
        F, dF, G, dG = _quadrature(
            f, lambda t: (c(a * t), s(a * t) / a), v, step)
    return _profile(v, e1, e3, F, dF, G, dG)


def _cosh_profile(v, a, f, step):
    return _trig_profile(v, a, f, step, np.cosh, np.sinh, 1.0)


def _cos_profile(v, a, f, step):
    return _trig_profile(v, a, f, step, np.cos, np.sin, -1.0)


# name: (profile, ell as a function of a, f it is bound to or None)
PRESETS = collections.OrderedDict([
    ('saddle', (_saddle_profile, lambda a: 0.0, '0')),
    ('cubic', (_cubic_profile, lambda a: 0.0, '6')),
    ('sphere', (_general_sphere_profile, lambda a: 0.0, None)),
    ('cosh', (_cosh_profile, lambda a: a * a, None)),
    ('cos', (_cos_profile, lambda a: -a * a, None)),
])


def closed_form_preset(name, u, v, a=3.0, f=None, rk_step=DEFAULT_RK_STEP):
    """
    Evaluates one of the closed form families, without going through
    the profile integration:

    * ``saddle``: (u, v, uv), the case l = f = 0.
    * ``cubic``: (u + 3v^2, v, uv + v^3), the case l = 0, f = 6.
    * ``sphere``: (u + F, v, uv + G) for any f with l = 0.
    * ``cosh``: l = a^2, ruling direction (cosh av, 0, sinh(av)/a).
    * ``cos``: l = -a^2, ruling direction (cos av, 0, sin(av)/a).

    Where f is given (``sphere``, ``cosh`` and ``cos``), the functions F
    and G are found by quadrature.

    :param name: the preset name.
    :param u: the u values.
    :param v: the v values.
    :param a: the parameter of ``cosh`` and ``cos``.
    :param f: the function f(v), if any.
    :return: the `SurfaceGrid`, with frames.
    """
    try:
        profile, ell, bound_f = PRESETS[name]
    except KeyError:
        raise UnknownPresetError(name, PRESETS) from None

    if bound_f is not None and f is not None:
        raise ValueError('The {} preset fixes f = {}'.format(name, bound_f))
    if name in ('cosh', 'cos') and not a:
        raise ValueError('The {} preset needs a nonzero a'.format(name))

    if f is not None:
        f = as_expr(f)
        if f.variables() - {'v'}:
            raise ValueError('f must depend on v only')

    v = np.asarray(v, dtype=float)
    meta = {
        'ell': repr(float(ell(a))),
        'f': bound_f or ('0' if f is None else str(f)),
        'presets': name,
        'a': float(a),
        'rk_step': rk_step,
        'generated_by': _generated_by(),
    }
    return extend_ruled(profile(v, float(a), f, rk_step), u, meta)


def improper_sphere_phi(grid, tol=1e-9):
    """
    Returns the function Phi of the graph form ``z = xy + Phi(y)`` that
    improper affine spheres from l = 0 take.

    :return: a tuple ``(v, Phi(v))``.
    :raises PhiDependsOnUError: if ``z - xy`` varies along u by more
                                than ``tol``.
    """
    x, y, z = np.moveaxis(grid.points, -1, 0)
    phi = z - x * y
    spread = float(np.max(np.ptp(phi, axis=1)))
    if spread > tol:
        raise PhiDependsOnUError(spread, tol)
    return grid.v, phi.mean(axis=1)


# endregion
