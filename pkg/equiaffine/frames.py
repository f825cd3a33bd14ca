"""
Unimodular frames along a surface and their Maurer-Cartan coefficients.

A frame field E(u, v) has the frame vectors e1, e2, e3 as its columns.
Its pulled-back Maurer-Cartan forms are encoded by the matrices

    A_u = E^-1 dE/du,    A_v = E^-1 dE/dv

whose entry (i, j) is the form w^i_j evaluated on d/du (resp. d/dv).
The coframe w^i, defined by dx = e_i w^i, is carried along as a 3x2
matrix whose columns are its values on d/du and d/dv.
"""
import logging

import numpy as np

from .errors import (
    DegenerateTangentPlaneError, NonUnimodularGaugeError, SingularFrameError
)
from .expr import Dual4, matrix_inverse
from .expr.dual import cross, dot, stack, value_of

_log = logging.getLogger(__name__)

DEGENERATE_NORM = 1e-12
SINGULAR_CONDITION = 1e12
UNIMODULAR_TOL = 1e-9

# (e1, e2, e3) -> (e2, e1, -e3), which reverses the sign of h12
RELABEL = np.array([
    [0.0, 1.0, 0.0],
    [1.0, 0.0, 0.0],
    [0.0, 0.0, -1.0]
])

_TANGENT_COFRAME = np.array([
    [1.0, 0.0],
    [0.0, 1.0],
    [0.0, 0.0]
])


def _first_bad(mask):
    mask = np.asarray(mask)
    if mask.ndim == 0:
        return None
    return tuple(int(i) for i in np.argwhere(mask)[0])


def complete_unimodular(x_u, x_v):
    """
    Completes the tangent vectors to the unimodular frame
    ``(x_u, x_v, n / |n|^2)`` with ``n = x_u x x_v``.

    Works on plain arrays of shape ``(..., 3)`` as well as on vector jets.

    :return: the frame matrix (columns e1, e2, e3) of shape ``(..., 3, 3)``.
    """
    n = cross(x_u, x_v)
    norm2 = dot(n, n)
    norm = np.sqrt(value_of(norm2))
    bad = ~(norm >= DEGENERATE_NORM)
    if np.any(bad):
        index = _first_bad(bad)
        raise DegenerateTangentPlaneError(
            index, float(norm if index is None else norm[index]))

    e3 = n / norm2[..., None]
    return stack([x_u, x_v, e3], axis=-1)


def complete_asymptotic(x_u, x_v, x_uv, h12):
    """
    Completes the tangent vectors of a surface in asymptotic coordinates
    to the unimodular frame ``(x_u, x_v, x_uv / h12)``, where
    ``h12 = det[x_u, x_v, x_uv]``. The frame of ``A x + b`` is ``A`` times
    the frame of ``x`` for every A in SL(3).

    :return: the frame matrix (columns e1, e2, e3) of shape ``(..., 3, 3)``.
    :raises SingularFrameError: where h12 vanishes.
    """
    values = np.abs(value_of(h12))
    bad = ~(values >= DEGENERATE_NORM)
    if np.any(bad):
        index = _first_bad(bad)
        raise SingularFrameError(index, float('inf'))

    e3 = x_uv / h12[..., None]
    return stack([x_u, x_v, e3], axis=-1)


def frame_determinant(matrix):
    return np.linalg.det(value_of(matrix))


class MCCoefficients:
    """
    The coefficient matrices A_u and A_v, as jets of the same order
    (one less than the order of the frame they come from).
    """
    def __init__(self, A_u, A_v):
        self.A_u = A_u
        self.A_v = A_v

    @property
    def order(self):
        return self.A_u.order

    @property
    def u(self):
        """The values of A_u."""
        return value_of(self.A_u)

    @property
    def v(self):
        """The values of A_v."""
        return value_of(self.A_v)

    def trace_residual(self):
        """max |trace A| over both matrices and every sample."""
        return float(max(np.max(np.abs(np.trace(self.u, axis1=-2, axis2=-1))),
                         np.max(np.abs(np.trace(self.v, axis1=-2, axis2=-1)))))

    def compatibility_residual(self):
        """
        The structure equation residual

            dA_u/dv - dA_v/du + A_v A_u - A_u A_v

        which vanishes for the coefficients of any actual frame field.
        Needs coefficients of order one at least.
        """
        if self.order < 1:
            raise ValueError('The compatibility residual needs jets of '
                             'order 1 or more')
        A_u, A_v = self.A_u.truncate(1), self.A_v.truncate(1)
        residual = (A_u.diff_v() - A_v.diff_u()) + (A_v @ A_u - A_u @ A_v)
        return residual.value


def mc_coefficients(frame):
    """
    Computes ``A_u = E^-1 dE/du`` and ``A_v = E^-1 dE/dv``.

    :param frame: the frame matrix jet (order 1 or more).
    :return: the `MCCoefficients`.
    :raises SingularFrameError: if E is (numerically) singular somewhere.
    """
    if frame.order < 1:
        raise ValueError('Maurer-Cartan coefficients need a frame jet of '
                         'order 1 or more')

    with np.errstate(divide='ignore', invalid='ignore'):
        condition = np.linalg.cond(frame.value)
    bad = ~(condition <= SINGULAR_CONDITION)
    if np.any(bad):
        index = _first_bad(bad)
        raise SingularFrameError(
            index, float(condition if index is None else condition[index]))

    inverse = matrix_inverse(frame)
    return MCCoefficients(inverse @ frame.diff_u(), inverse @ frame.diff_v())


def _check_unimodular(g):
    deviation = np.max(np.abs(np.linalg.det(value_of(g)) - 1.0))
    if deviation > UNIMODULAR_TOL:
        raise NonUnimodularGaugeError(float(deviation))


class FrameField:
    """
    A frame field E(u, v) along a surface, kept as a matrix jet together
    with the coframe it induces. The Maurer-Cartan coefficients are
    computed on first use.

    Args:
        matrix (`Dual4`):
            The frame matrices, trailing shape ``(3, 3)``.

        coframe (`Dual4`, optional):
            The coframe, trailing shape ``(3, 2)``.

        mc (`MCCoefficients`, optional):
            Known coefficients, to avoid inverting the frame again.
    """
    def __init__(self, matrix, coframe=None, mc=None):
        self.matrix = matrix
        self.coframe = coframe
        self._mc = mc

    @classmethod
    def zero_adapted(cls, jet, h12=None):
        """
        The 0-adapted frame ``(x_u, x_v, n / |n|^2)`` of a surface jet,
        whose coframe is ``(du, dv, 0)``.

        If the coordinates are asymptotic, pass the ``h12`` jet to get
        `complete_asymptotic`'s frame ``(x_u, x_v, x_uv / h12)`` instead.
        """
        x_u, x_v = jet.diff_u(), jet.diff_v()
        if h12 is None:
            matrix = complete_unimodular(x_u, x_v)
        else:
            matrix = complete_asymptotic(x_u, x_v, x_u.diff_v(), h12)
        shape = matrix.shape[:-2] + (3, 2)
        coframe = Dual4.constant(
            np.broadcast_to(_TANGENT_COFRAME, shape), matrix.order)
        return cls(matrix, coframe)

    @property
    def order(self):
        return self.matrix.order

    @property
    def value(self):
        return value_of(self.matrix)

    @property
    def e1(self):
        return self.value[..., :, 0]

    @property
    def e2(self):
        return self.value[..., :, 1]

    @property
    def e3(self):
        return self.value[..., :, 2]

    def det(self):
        return frame_determinant(self.matrix)

    @property
    def mc(self):
        if self._mc is None:
            self._mc = mc_coefficients(self.matrix)
        return self._mc

    def tangent_coframe(self):
        """The values of w^1, w^2 on (d/du, d/dv), as ``(..., 2, 2)``."""
        return value_of(self.coframe)[..., :2, :]

    def gauge(self, g):
        """Shorthand for `gauge_transform`."""
        return gauge_transform(self, g)


def gauge_transform(frame, g):
    """
    Changes the frame to ``E g``. The coefficients follow the law

        A' = g^-1 A g + g^-1 dg

    and the coframe becomes ``g^-1 w``.

    :param frame: the `FrameField` to transform.
    :param g: a matrix jet, or plain matrices for a locally constant
              gauge, with determinant 1.
    :raises NonUnimodularGaugeError: if ``|det g - 1| > 1e-9``.
    """
    _check_unimodular(g)

    inverse = matrix_inverse(g)
    mc = frame.mc
    if isinstance(g, Dual4):
        A_u = inverse @ mc.A_u @ g + inverse @ g.diff_u()
        A_v = inverse @ mc.A_v @ g + inverse @ g.diff_v()
    else:
        A_u = inverse @ mc.A_u @ g
        A_v = inverse @ mc.A_v @ g

    coframe = None if frame.coframe is None else inverse @ frame.coframe
    return FrameField(frame.matrix @ g, coframe, MCCoefficients(A_u, A_v))
