"""
The ``affine-surface-grid/1`` JSON document:

    {"format": "affine-surface-grid/1",
     "meta": {"ell": ..., "f": ..., "presets": ..., "rk_step": ...,
              "generated_by": ...},
     "u": [...], "v": [...],
     "points": [[[x, y, z], ...], ...],
     "frames": {"e1": ..., "e2": ..., "e3": ...}}

with ``points[j][i]`` the point at (u[i], v[j]). Floats are written with
their shortest round-tripping representation, so reading back a written
grid reproduces it bit for bit.
"""
import json
import logging

import numpy as np

from ..errors import GridFormatError
from ..helpers import atomic_write
from ..surfaces import FRAME_NAMES, SurfaceGrid

_log = logging.getLogger(__name__)

FORMAT = 'affine-surface-grid/1'


def grid_to_dict(grid, frames=True):
    """
    Converts the grid into the JSON-ready document. Frames are left out
    if the grid has none or ``frames`` is ``False``.
    """
    result = {
        'format': FORMAT,
        'meta': dict(grid.meta),
        'u': grid.u.tolist(),
        'v': grid.v.tolist(),
        'points': grid.points.tolist(),
    }
    if frames and grid.has_frames:
        result['frames'] = {k: np.asarray(grid.frames[k]).tolist()
                            for k in FRAME_NAMES}
    return result


def _array(document, key, path, ndim):
    try:
        array = np.array(document[key], dtype=float)
    except KeyError:
        raise GridFormatError('missing "{}"'.format(key), path) from None
    except (TypeError, ValueError):
        raise GridFormatError('"{}" must be an array of numbers'
                              .format(key), path) from None
    if array.ndim != ndim:
        raise GridFormatError('"{}" must have {} dimensions, not {}'
                              .format(key, ndim, array.ndim), path)
    return array


def grid_from_dict(document, path=None):
    """
    Builds the `SurfaceGrid` back from a document.

    :raises GridFormatError: if the document is malformed.
    """
    if not isinstance(document, dict):
        raise GridFormatError('expected a JSON object', path)
    if document.get('format') != FORMAT:
        raise GridFormatError('expected format {!r}, got {!r}'.format(
            FORMAT, document.get('format')), path)

    meta = document.get('meta') or {}
    if not isinstance(meta, dict):
        raise GridFormatError('"meta" must be an object', path)

    u = _array(document, 'u', path, 1)
    v = _array(document, 'v', path, 1)
    points = _array(document, 'points', path, 3)

    frames = document.get('frames')
    if frames is not None:
        if not isinstance(frames, dict):
            raise GridFormatError('"frames" must be an object', path)
        frames = {k: _array(frames, k, path, 3) for k in FRAME_NAMES}

    try:
        return SurfaceGrid(u, v, points, frames=frames, meta=meta)
    except ValueError as e:
        raise GridFormatError(str(e), path) from e


def write_grid(grid, file_path, frames=True):
    """Atomically writes the grid as JSON to the given path."""
    with atomic_write(file_path) as file:
        json.dump(grid_to_dict(grid, frames=frames), file)
    _log.info('Wrote a %dx%d grid to %s', grid.nu, grid.nv, file_path)


def read_grid(file_path):
    """
    Reads a grid written by `write_grid`.

    :raises GridFormatError: if the file is not a valid grid document.
    """
    try:
        with open(str(file_path), encoding='utf-8') as file:
            document = json.load(file)
    except ValueError as e:
        raise GridFormatError('invalid JSON ({})'.format(e),
                              file_path) from e

    grid = grid_from_dict(document, file_path)
    _log.debug('Read a %dx%d grid from %s', grid.nu, grid.nv, file_path)
    return grid
