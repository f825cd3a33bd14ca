"""
Finite differences on (possibly non-uniform) one-dimensional grids, and
the tensor-product derivatives used to build jets from sampled surfaces.

Stencils are as centered as the grid allows and shift towards the inside
near the boundaries, keeping the same number of points (and accuracy).
"""
import logging
import math

import numpy as np

from .errors import GridTooCoarseError
from .expr import Dual4
from .expr.dual import MONOMIALS, ncoef

_log = logging.getLogger(__name__)

DEFAULT_ACCURACY = 4


def fornberg_weights(x0, nodes, m):
    """
    Weights of the finite difference approximations of the derivatives
    of orders ``0..m`` at ``x0`` using the given nodes.

    :param x0: the point where the derivatives are approximated.
    :param nodes: the abscissas of the samples.
    :param m: the highest derivative order.
    :return: array of shape ``(m + 1, len(nodes))``.
    """
    nodes = np.asarray(nodes, dtype=float) - x0
    n = nodes.size
    c = np.zeros((m + 1, n))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = nodes[0]
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i]
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def stencil_width(m, accuracy=DEFAULT_ACCURACY):
    """Points needed for the m-th derivative; odd so it can be centered."""
    width = m + accuracy
    return width + 1 - width % 2


def derivative_matrix(x, m, accuracy=DEFAULT_ACCURACY, axis_name=None):
    """
    The dense ``n x n`` matrix mapping samples on ``x`` to the
    approximations of their m-th derivative.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if m == 0:
        return np.eye(n)

    width = stencil_width(m, accuracy)
    if n < width:
        raise GridTooCoarseError(n, width, axis_name)

    matrix = np.zeros((n, n))
    for i in range(n):
        start = min(max(i - width // 2, 0), n - width)
        window = slice(start, start + width)
        matrix[i, window] = fornberg_weights(x[i], x[window], m)[m]
    return matrix


def apply_along(matrix, values, axis):
    return np.moveaxis(np.tensordot(matrix, values, axes=([1], [axis])),
                       0, axis)


def grid_derivative(values, u, v, du, dv, accuracy=DEFAULT_ACCURACY):
    """
    Approximates d^(du+dv) / du^du dv^dv of samples laid out with v as
    axis 0 and u as axis 1 (any trailing axes are carried along).
    """
    result = apply_along(derivative_matrix(v, dv, accuracy, 'v'), values, 0)
    return apply_along(derivative_matrix(u, du, accuracy, 'u'), result, 1)


def required_points(order, accuracy=DEFAULT_ACCURACY):
    """How many samples per direction a jet of the given order needs."""
    return max(stencil_width(m, accuracy) for m in range(1, order + 1))


def grid_jet(values, u, v, order, accuracy=DEFAULT_ACCURACY):
    """
    Builds the `Dual4` jet of sampled values by finite differences. The
    value slot holds the samples themselves.

    :param values: samples with shape ``(nv, nu, ...)``.
    :param u: the u coordinates (axis 1).
    :param v: the v coordinates (axis 0).
    :param order: jet order (at most 4).
    :param accuracy: order of accuracy of every stencil.
    """
    values = np.asarray(values, dtype=float)
    du = [derivative_matrix(u, m, accuracy, 'u') for m in range(order + 1)]
    dv = [derivative_matrix(v, m, accuracy, 'v') for m in range(order + 1)]

    coeffs = np.empty((ncoef(order),) + values.shape)
    by_v = [apply_along(dv[j], values, 0) for j in range(order + 1)]
    for k, (i, j) in enumerate(MONOMIALS[:ncoef(order)]):
        coeffs[k] = apply_along(du[i], by_v[j], 1) / (
            math.factorial(i) * math.factorial(j))

    _log.debug('Built a grid jet of order %d from %dx%d samples',
               order, values.shape[1], values.shape[0])
    return Dual4(coeffs, order)
