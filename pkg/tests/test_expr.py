import math

import numpy as np
import pytest
from hypothesis import given, settings

from equiaffine.errors import (
    ExprDomainError, ExprSyntaxError, NonIntegerExponentError,
    UnknownIdentifierError
)
from equiaffine.expr import (
    Call, Const, Mul, Neg, Pow, Var, as_expr, evaluate, parse, tokenize
)
from equiaffine.surfaces import ExprSurface

from .strategies import expressions


def test_unary_minus_binds_below_power():
    assert parse('-u^2') == Neg(Pow(Var('u'), 2))
    assert evaluate(parse('-u^2'), 3.0, 0.0) == -9.0


def test_negative_integer_exponent():
    assert parse('v^-2') == Pow(Var('v'), -2)
    assert evaluate(parse('v^-2'), 0.0, 2.0) == 0.25


def test_precedence_and_associativity():
    assert evaluate(parse('1 - 2 - 3'), 0, 0) == -4.0
    assert evaluate(parse('8 / 4 / 2'), 0, 0) == 1.0
    assert evaluate(parse('2 + 3 * 4'), 0, 0) == 14.0
    assert parse('2*u') == Mul(Const(2), Var('u'))


def test_constants_and_functions():
    assert evaluate(parse('pi'), 0, 0) == math.pi
    assert evaluate(parse('sin(pi/2)'), 0, 0) == pytest.approx(1.0)
    assert evaluate(parse('sqrt(4) + log(exp(2))'), 0, 0) == \
        pytest.approx(4.0)
    assert parse('cosh(v)') == Call('cosh', Var('v'))


def test_numbers_with_exponents():
    assert evaluate(parse('1.5e-3'), 0, 0) == 1.5e-3
    assert evaluate(parse('.5'), 0, 0) == 0.5


def test_vectorized_evaluation():
    u = np.linspace(0, 1, 5)
    v = np.linspace(1, 2, 5)
    np.testing.assert_allclose(evaluate(parse('u*v + 1'), u, v), u * v + 1)

    # Constants broadcast against the grid
    assert evaluate(parse('3'), u, v).shape == (5,)


def test_variables():
    assert parse('sin(v) + v^2').variables() == {'v'}
    assert parse('u*v').variables() == {'u', 'v'}
    assert parse('pi').variables() == set()


def test_str_reparses_to_the_same_tree():
    for source in ('-u^2', '32*sin(8*v)', 'v^-2 / (1 + u)', '(u^2)^3'):
        tree = parse(source)
        assert parse(str(tree)) == tree


@given(expressions)
@settings(max_examples=100, deadline=None)
def test_random_trees_survive_printing(tree):
    reparsed = parse(str(tree))
    assert reparsed == tree
    assert parse(str(reparsed)) == reparsed


def test_as_expr():
    assert as_expr(2) == Const(2.0)
    assert as_expr('u') == Var('u')
    node = Var('v')
    assert as_expr(node) is node


def test_tokenize_offsets():
    tokens = list(tokenize('u + 12'))
    assert [t.offset for t in tokens] == [0, 2, 4, 6]
    assert tokens[-1].kind == 'end'


@pytest.mark.parametrize('source, offset', [
    ('u +', 4),
    ('u $ v', 3),
    ('(u', 3),
    ('sin u', 5),
    ('u v', 3),
    ('', 1),
])
def test_syntax_error_offsets(source, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(source)
    assert info.value.offset == offset
    assert info.value.source == source


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as info:
        parse('tan(v)')
    assert info.value.offset == 1
    assert info.value.name == 'tan'

    with pytest.raises(UnknownIdentifierError) as info:
        parse('u + w')
    assert info.value.offset == 5


def test_non_integer_exponent():
    with pytest.raises(NonIntegerExponentError) as info:
        parse('u^1.5')
    assert info.value.offset == 3

    with pytest.raises(NonIntegerExponentError):
        parse('u^v')


def test_domain_errors():
    with pytest.raises(ExprDomainError) as info:
        evaluate(parse('log(v)'), 0.0, np.array([1.0, 0.5, -1.0]))
    assert info.value.index == (2,)
    assert info.value.value == -1.0

    with pytest.raises(ExprDomainError):
        evaluate(parse('1/u'), 0.0, 1.0)

    with pytest.raises(ExprDomainError):
        evaluate(parse('u^-1'), 0.0, 1.0)

    with pytest.raises(ExprDomainError):
        evaluate(parse('sqrt(u)'), -1.0, 0.0)


def test_surface_parse():
    surface = ExprSurface.parse('u; v; u*v')
    np.testing.assert_array_equal(surface.evaluate(2.0, 3.0), [2, 3, 6])


def test_surface_syntax_error_offset_is_global():
    with pytest.raises(UnknownIdentifierError) as info:
        ExprSurface.parse('u;v;tan(u)')
    assert info.value.offset == 5
    assert info.value.source == 'u;v;tan(u)'
    assert info.value.name == 'tan'

    with pytest.raises(NonIntegerExponentError) as info:
        ExprSurface.parse('u;v;u^1.5')
    assert info.value.offset == 7
    assert info.value.source == 'u;v;u^1.5'


def test_surface_needs_three_components():
    with pytest.raises(ExprSyntaxError):
        ExprSurface.parse('u;v')
