"""Various helpers not related to the geometry itself"""
import contextlib
import os
import tempfile

import numpy as np


# region Multiple utilities


def ensure_parent_dir_exists(file_path):
    """Ensures that the parent directory exists"""
    parent = os.path.dirname(file_path)
    if parent:
        os.makedirs(parent, exist_ok=True)


@contextlib.contextmanager
def atomic_write(file_path, mode='w', encoding='utf-8'):
    """
    Opens a temporary file next to ``file_path`` and moves it in place
    once the ``with`` block finishes without errors, so readers never
    observe a half-written file.
    """
    file_path = str(file_path)
    ensure_parent_dir_exists(file_path)
    fd, tmp = tempfile.mkstemp(
        prefix='.{}.'.format(os.path.basename(file_path)),
        dir=os.path.dirname(file_path) or '.'
    )
    try:
        kwargs = {} if 'b' in mode else {'encoding': encoding, 'newline': ''}
        with os.fdopen(fd, mode, **kwargs) as file:
            yield file
        os.replace(tmp, file_path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp)
        raise


def format_float(value):
    """Formats a float with 17 significant digits (lossless for binary64)"""
    return '{:.17g}'.format(float(value))


def max_abs(values):
    """
    Returns ``(max |values|, flat index of the maximum)``,
    or ``(0.0, None)`` if there are no values.
    """
    values = np.abs(np.asarray(values, dtype=float))
    if values.size == 0:
        return 0.0, None
    index = int(np.argmax(values))
    return float(values.flat[index]), index


# endregion
