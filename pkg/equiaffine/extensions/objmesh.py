"""
Wavefront OBJ export of grids, with one vertex per sample and each grid
cell split into two counter-clockwise triangles.
"""
from ..helpers import atomic_write, format_float


def obj_lines(grid):
    """
    Yields the lines (without newline) of the OBJ mesh of the grid.
    Vertices follow the v-outer, u-inner order, so the sample ``(j, i)``
    is the vertex ``j * nu + i + 1``.
    """
    nu, nv = grid.nu, grid.nv
    yield '# {}x{} grid'.format(nu, nv)
    for point in grid.points.reshape(-1, 3):
        yield 'v {} {} {}'.format(*(format_float(c) for c in point))

    for j in range(nv - 1):
        for i in range(nu - 1):
            a = j * nu + i + 1
            b = a + 1
            c = a + nu + 1
            d = a + nu
            yield 'f {} {} {}'.format(a, b, c)
            yield 'f {} {} {}'.format(a, c, d)


def write_obj(grid, file_path):
    with atomic_write(file_path) as file:
        for line in obj_lines(grid):
            file.write(line)
            file.write('\n')
