"""Errors raised while parsing, analysing, generating or verifying surfaces"""


class EquiaffineError(Exception):
    """Base class for every error raised by this library."""


# region Expressions


class ExprSyntaxError(EquiaffineError, ValueError):
    """
    Occurs when an expression cannot be parsed. The offset is 1-based
    and counts characters of the original source.
    """
    def __init__(self, source, offset, problem=None):
        super().__init__(
            'Syntax error at offset {} in {!r}: {}'
            .format(offset, source, problem or 'unexpected input'))

        self.source = source
        self.offset = offset
        self.problem = problem


class UnknownIdentifierError(ExprSyntaxError):
    """Occurs when an expression names a variable or function we lack."""
    def __init__(self, source, offset, name):
        super().__init__(source, offset, 'unknown identifier {!r} (known are '
                         'u, v, pi, sin, cos, sinh, cosh, exp, log, sqrt)'
                         .format(name))
        self.name = name


class NonIntegerExponentError(ExprSyntaxError):
    """Occurs when ``^`` is followed by something but an integer literal."""
    def __init__(self, source, offset):
        super().__init__(source, offset, 'exponents must be integer literals')


class ExprDomainError(EquiaffineError, ArithmeticError):
    """
    Occurs when evaluating an expression outside of its domain, such as
    the logarithm of a non-positive number or a division by zero.
    """
    def __init__(self, node, problem, value=None, index=None):
        where = '' if index is None else ' at sample {}'.format(index)
        super().__init__('{} in {}{}'.format(problem, node, where))

        self.node = node
        self.problem = problem
        self.value = value
        self.index = index


# endregion

# region Frames and invariants


class DegenerateTangentPlaneError(EquiaffineError, ArithmeticError):
    """Occurs when x_u and x_v fail to span a plane."""
    def __init__(self, index, norm):
        super().__init__(
            'Degenerate tangent plane at sample {} (|x_u x x_v| = {:.3g})'
            .format(index, norm))

        self.index = index
        self.norm = norm


class SingularFrameError(EquiaffineError, ArithmeticError):
    """Occurs when a frame matrix is too close to singular to invert."""
    def __init__(self, index, condition):
        super().__init__(
            'Singular frame at sample {} (condition number {:.3g})'
            .format(index, condition))

        self.index = index
        self.condition = condition


class NonUnimodularGaugeError(EquiaffineError, ValueError):
    """Occurs when a gauge transformation does not have unit determinant."""
    def __init__(self, deviation):
        super().__init__(
            'The gauge must have determinant 1 (off by {:.3g})'
            .format(deviation))

        self.deviation = deviation


class InconsistentReadError(EquiaffineError, ArithmeticError):
    """
    Occurs when the two independent reads of l12 disagree,
    which means the frame given was not 2-adapted.
    """
    def __init__(self, mismatch, index, tolerance):
        super().__init__(
            'The two reads of l12 differ by {:.3g} at sample {} '
            '(tolerance {:.3g})'.format(mismatch, index, tolerance))

        self.mismatch = mismatch
        self.index = index
        self.tolerance = tolerance


class NotApplicableError(EquiaffineError, ValueError):
    """
    Occurs when the affine steps of the analysis are requested on a
    surface which is not hyperbolic or not in asymptotic coordinates.
    """
    def __init__(self, reason):
        super().__init__('Affine invariants not available: {}'.format(reason))
        self.reason = reason


class GridTooCoarseError(EquiaffineError, ValueError):
    """Occurs when a direction has fewer samples than a stencil needs."""
    def __init__(self, points, required, axis=None):
        super().__init__(
            'Need at least {} samples{} but only {} were given'
            .format(required, '' if axis is None else ' along ' + axis,
                    points))

        self.points = points
        self.required = required
        self.axis = axis


# endregion

# region Generation and files


class IntegrationDivergedError(EquiaffineError, ArithmeticError):
    """Occurs when the integrated profile stops being finite."""
    def __init__(self, v):
        super().__init__(
            'The integration diverged (non-finite state) at v = {!r}'
            .format(v))
        self.v = v


class UnknownPresetError(EquiaffineError, ValueError):
    """Occurs when asking for a closed form preset that doesn't exist."""
    def __init__(self, name, known):
        super().__init__('Unknown preset {!r}, choose one of {}'
                         .format(name, ', '.join(sorted(known))))
        self.name = name


class PhiDependsOnUError(EquiaffineError, ValueError):
    """
    Occurs when z - x*y varies along the rulings,
    meaning the grid was not an improper affine sphere.
    """
    def __init__(self, spread, tolerance):
        super().__init__(
            'z - x*y depends on u (spread {:.3g} > {:.3g})'
            .format(spread, tolerance))

        self.spread = spread
        self.tolerance = tolerance


class MissingFramesError(EquiaffineError, ValueError):
    """Occurs when a check needs the frames stored alongside a grid."""
    def __init__(self, check):
        super().__init__('{} needs a grid with frames'.format(check))
        self.check = check


class GridFormatError(EquiaffineError, ValueError):
    """Occurs when a grid file is malformed."""
    def __init__(self, problem, path=None):
        super().__init__('{}{}'.format(
            '' if path is None else '{}: '.format(path), problem))

        self.problem = problem
        self.path = path


# endregion
