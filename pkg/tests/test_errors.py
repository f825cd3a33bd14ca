import pytest

from equiaffine import errors
from equiaffine.errors import (
    EquiaffineError, ExprDomainError, ExprSyntaxError, GridFormatError,
    GridTooCoarseError, InconsistentReadError, IntegrationDivergedError,
    MissingFramesError, NotApplicableError, PhiDependsOnUError,
    UnknownIdentifierError, exit_code_for
)


@pytest.mark.parametrize('error, code', [
    (ExprSyntaxError('u +', 4, 'unexpected end'), errors.EXIT_FORMAT),
    (UnknownIdentifierError('w', 1, 'w'), errors.EXIT_FORMAT),
    (ExprDomainError('log(v)', 'log of a non-positive value'),
     errors.EXIT_FORMAT),
    (GridFormatError('missing "u"', 'g.json'), errors.EXIT_FORMAT),
    (MissingFramesError('verify_unimodular'), errors.EXIT_FORMAT),
    (IntegrationDivergedError(0.5), errors.EXIT_DIVERGED),
    (NotApplicableError('surface is elliptic'), errors.EXIT_INAPPLICABLE),
    (InconsistentReadError(1e-3, (0, 1), 1e-6), errors.EXIT_INAPPLICABLE),
    (GridTooCoarseError(4, 9, 'u'), errors.EXIT_INAPPLICABLE),
    (PhiDependsOnUError(1e-3, 1e-9), errors.EXIT_FAILED),
])
def test_exit_codes(error, code):
    assert isinstance(error, EquiaffineError)
    assert exit_code_for(error) == code


def test_foreign_errors_have_no_code():
    assert exit_code_for(ValueError('nope')) is None
    assert exit_code_for(EquiaffineError('base')) is None


def test_messages():
    error = ExprSyntaxError('u $ v', 3, "unexpected character '$'")
    assert 'offset 3' in str(error)
    assert "'u $ v'" in str(error)

    assert str(GridFormatError('missing "u"', 'g.json')) == \
        'g.json: missing "u"'
    assert str(GridTooCoarseError(4, 9, 'u')) == \
        'Need at least 9 samples along u but only 4 were given'


def test_errors_are_catchable_as_builtins():
    with pytest.raises(ValueError):
        raise UnknownIdentifierError('tan(v)', 1, 'tan')
    with pytest.raises(ArithmeticError):
        raise IntegrationDivergedError(1.0)
