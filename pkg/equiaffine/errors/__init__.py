"""
This module holds every error the library raises, and the exit codes
the command line uses for each of them.
"""
from .common import (
    EquiaffineError, ExprSyntaxError, UnknownIdentifierError,
    NonIntegerExponentError, ExprDomainError, DegenerateTangentPlaneError,
    SingularFrameError, NonUnimodularGaugeError, InconsistentReadError,
    NotApplicableError, GridTooCoarseError, IntegrationDivergedError,
    UnknownPresetError, PhiDependsOnUError, MissingFramesError,
    GridFormatError
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_FORMAT = 2
EXIT_DIVERGED = 3
EXIT_INAPPLICABLE = 4

exit_codes = {
    ExprSyntaxError: EXIT_FORMAT,
    ExprDomainError: EXIT_FORMAT,
    UnknownPresetError: EXIT_FORMAT,
    MissingFramesError: EXIT_FORMAT,
    GridFormatError: EXIT_FORMAT,
    IntegrationDivergedError: EXIT_DIVERGED,
    DegenerateTangentPlaneError: EXIT_INAPPLICABLE,
    SingularFrameError: EXIT_INAPPLICABLE,
    NonUnimodularGaugeError: EXIT_INAPPLICABLE,
    InconsistentReadError: EXIT_INAPPLICABLE,
    NotApplicableError: EXIT_INAPPLICABLE,
    GridTooCoarseError: EXIT_INAPPLICABLE,
    PhiDependsOnUError: EXIT_FAILED,
}


def exit_code_for(error):
    """
    Converts an error raised by the library into the exit code
    the command line reports for it.

    :param error: the exception instance.
    :return: the exit code, or ``None`` if the error is not ours.
    """
    # Walk the MRO so subclasses (like UnknownIdentifierError) inherit codes
    for cls in type(error).__mro__:
        code = exit_codes.get(cls)
        if code is not None:
            return code
    return None
