"""
The two ways a surface reaches the analysis: as three expressions in
(u, v), evaluated exactly, or as a grid of sampled points.
"""
import numpy as np

from .errors import (
    ExprSyntaxError, NonIntegerExponentError, UnknownIdentifierError
)
from .expr import Dual4, as_expr, eval_jet, evaluate, parse

FRAME_NAMES = ('e1', 'e2', 'e3')


class ExprSurface:
    """
    A parametrization x(u, v) given by one expression per coordinate.

    Args:
        x, y, z (`str` | `Expr` | `float`):
            The coordinate functions.
    """
    def __init__(self, x, y, z):
        self.components = tuple(as_expr(c) for c in (x, y, z))

    @classmethod
    def parse(cls, source):
        """
        Parses ``"<x>;<y>;<z>"``. Syntax errors report their offset
        within the whole source, not just within the component.
        """
        parts = source.split(';')
        if len(parts) != 3:
            raise ExprSyntaxError(
                source, len(source) + 1,
                'expected three components separated by ";", got {}'
                .format(len(parts)))

        components = []
        start = 0
        for part in parts:
            try:
                components.append(parse(part))
            except UnknownIdentifierError as e:
                raise UnknownIdentifierError(
                    source, start + e.offset, e.name) from e
            except NonIntegerExponentError as e:
                raise NonIntegerExponentError(
                    source, start + e.offset) from e
            except ExprSyntaxError as e:
                raise ExprSyntaxError(
                    source, start + e.offset, e.problem) from e
            start += len(part) + 1
        return cls(*components)

    def evaluate(self, u, v):
        """The points x(u, v), with shape ``broadcast(u, v).shape + (3,)``."""
        return np.stack([evaluate(c, u, v) for c in self.components], axis=-1)

    def jet(self, u, v, order=4):
        """The `Dual4` jet of x at (u, v), with a trailing axis of size 3."""
        return Dual4.stack([eval_jet(c, u, v, order)
                            for c in self.components])

    def sample(self, u, v, meta=None):
        """Samples the surface on the grid spanned by ``u`` and ``v``."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        uu, vv = np.meshgrid(u, v)
        meta = dict(meta or {})
        meta.setdefault('surface', str(self))
        return SurfaceGrid(u, v, self.evaluate(uu, vv), meta=meta)

    def __str__(self):
        return ';'.join(str(c) for c in self.components)

    def __repr__(self):
        return 'ExprSurface({!r})'.format(str(self))


class SurfaceGrid:
    """
    A surface sampled on the rectangular grid ``u x v``.

    Points are stored row-major with v as the outer index, that is,
    ``points[j, i]`` is x(u[i], v[j]). Frames, when present, follow the
    same layout and hold the columns e1, e2 and e3.

    Args:
        u (`ndarray`):
            The ``nu`` increasing u values.

        v (`ndarray`):
            The ``nv`` increasing v values.

        points (`ndarray`):
            Array of shape ``(nv, nu, 3)``.

        frames (`dict`, optional):
            ``{'e1': ..., 'e2': ..., 'e3': ...}`` with the same shape
            as the points.

        meta (`dict`, optional):
            Provenance of the grid (expressions, step, tool version).
    """
    def __init__(self, u, v, points, frames=None, meta=None):
        self.u = np.asarray(u, dtype=float)
        self.v = np.asarray(v, dtype=float)
        self.points = np.asarray(points, dtype=float)
        self.meta = dict(meta or {})

        if self.u.ndim != 1 or self.v.ndim != 1:
            raise ValueError('u and v must be one-dimensional')
        if self.u.size < 2 or self.v.size < 2:
            raise ValueError('A grid needs at least 2 values along each '
                             'direction, not {}x{}'.format(self.nu, self.nv))
        if np.any(np.diff(self.u) <= 0) or np.any(np.diff(self.v) <= 0):
            raise ValueError('u and v must be strictly increasing')

        shape = (self.nv, self.nu, 3)
        if self.points.shape != shape:
            raise ValueError('Expected points of shape {}, got {}'
                             .format(shape, self.points.shape))
        if not np.all(np.isfinite(self.points)):
            raise ValueError('All the points of a grid must be finite')

        if frames is not None:
            frames = {k: np.asarray(frames[k], dtype=float)
                      for k in FRAME_NAMES}
            for name, array in frames.items():
                if array.shape != shape:
                    raise ValueError('Expected {} of shape {}, got {}'
                                     .format(name, shape, array.shape))
        self.frames = frames

    @property
    def nu(self):
        return self.u.size

    @property
    def nv(self):
        return self.v.size

    @property
    def has_frames(self):
        return self.frames is not None

    def mesh(self):
        """The ``(U, V)`` coordinate arrays, each of shape ``(nv, nu)``."""
        return np.meshgrid(self.u, self.v)

    def frame_matrices(self):
        """The frames as matrices of shape ``(nv, nu, 3, 3)`` (columns)."""
        if self.frames is None:
            return None
        return np.stack([self.frames[k] for k in FRAME_NAMES], axis=-1)

    def nearest_index(self, u, v):
        """The ``(j, i)`` index of the sample closest to (u, v)."""
        return (int(np.argmin(np.abs(self.v - v))),
                int(np.argmin(np.abs(self.u - u))))

    def replace(self, points=None, frames=False, meta=None):
        """
        Returns a copy with some parts replaced. Passing ``frames=None``
        drops the frames; leaving it out keeps the current ones.
        """
        return SurfaceGrid(
            self.u, self.v,
            self.points if points is None else points,
            frames=self.frames if frames is False else frames,
            meta=self.meta if meta is None else meta
        )

    def transformed(self, matrix, translation=(0.0, 0.0, 0.0)):
        """
        Applies the affine map ``x -> A x + b`` to the points and the
        linear part to the frames.
        """
        matrix = np.asarray(matrix, dtype=float)
        frames = None
        if self.frames is not None:
            frames = {k: f @ matrix.T for k, f in self.frames.items()}
        return SurfaceGrid(
            self.u, self.v,
            self.points @ matrix.T + np.asarray(translation, dtype=float),
            frames=frames, meta=self.meta
        )

    def __repr__(self):
        return 'SurfaceGrid(nu={}, nv={}, frames={})'.format(
            self.nu, self.nv, self.has_frames)
