"""
CSV tables of grid points (``u,v,x,y,z``) and of invariant reports.
"""
import csv
import logging

import numpy as np

from ..errors import GridFormatError
from ..helpers import atomic_write, format_float
from ..surfaces import SurfaceGrid

_log = logging.getLogger(__name__)

GRID_HEADER = ('u', 'v', 'x', 'y', 'z')


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, str):
        return value
    return format_float(value)


def write_grid_csv(grid, file_path):
    """Writes one row per sample, v outer and u inner, 17 digits each."""
    with atomic_write(file_path) as file:
        writer = csv.writer(file, lineterminator='\n')
        writer.writerow(GRID_HEADER)
        for j, v in enumerate(grid.v):
            for i, u in enumerate(grid.u):
                writer.writerow([_cell(u), _cell(v)] + [
                    _cell(c) for c in grid.points[j, i]])


def read_grid_csv(file_path):
    """
    Reads a table written by `write_grid_csv` back into a grid (without
    frames or metadata).

    :raises GridFormatError: if the table is not a complete grid.
    """
    with open(str(file_path), newline='', encoding='utf-8') as file:
        reader = csv.reader(file)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != GRID_HEADER:
            raise GridFormatError('expected the header {}'.format(
                ','.join(GRID_HEADER)), file_path)
        try:
            rows = np.array([[float(x) for x in row]
                             for row in reader if row], dtype=float)
        except ValueError as e:
            raise GridFormatError('invalid number ({})'.format(e),
                                  file_path) from e

    if rows.ndim != 2 or rows.shape[1] != 5:
        raise GridFormatError('every row needs 5 columns', file_path)

    # The first row of every v block repeats u[0]
    u_first = rows[0, 0]
    nu = int(np.argmax(rows[1:, 0] == u_first)) + 1 \
        if np.any(rows[1:, 0] == u_first) else rows.shape[0]
    if rows.shape[0] % nu:
        raise GridFormatError('{} rows do not form a grid with {} u values'
                              .format(rows.shape[0], nu), file_path)

    nv = rows.shape[0] // nu
    table = rows.reshape(nv, nu, 5)
    u, v = table[0, :, 0], table[:, 0, 1]
    if not (np.array_equal(table[..., 0], np.broadcast_to(u, (nv, nu)))
            and np.array_equal(table[..., 1],
                               np.broadcast_to(v[:, None], (nv, nu)))):
        raise GridFormatError('the rows are not in v-outer, u-inner order',
                              file_path)

    try:
        return SurfaceGrid(u, v, table[..., 2:])
    except ValueError as e:
        raise GridFormatError(str(e), file_path) from e


def write_report_csv(analysis, file_path):
    """Writes the per-point invariant report of a `SurfaceAnalysis`."""
    with atomic_write(file_path) as file:
        writer = csv.writer(file, lineterminator='\n')
        writer.writerow(analysis.CSV_HEADER)
        for row in analysis.csv_rows():
            writer.writerow([_cell(x) for x in row])
    _log.info('Wrote the invariant report to %s', file_path)
