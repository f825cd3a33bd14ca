"""
Expression trees over the variables ``u`` and ``v``.

Every node evaluates either on plain numbers (vectorized over numpy
arrays) or on `Dual4` jets, through the same code path, so the numeric
value and the derivatives can never disagree.
"""
import numpy as np

from .dual import Dual4, FUNCTIONS, value_of
from ..errors import ExprDomainError


def _first_index(mask):
    mask = np.asarray(mask)
    if mask.ndim == 0:
        return None
    return tuple(int(i) for i in np.argwhere(mask)[0])


class Expr:
    """
    Base class for all the nodes. Nodes compare by structure; the
    ``offset`` where they were found in the source is informative only.
    """
    __slots__ = ('offset',)
    _fields = ()

    def _key(self):
        return (type(self),) + tuple(getattr(self, f) for f in self._fields)

    def __eq__(self, other):
        return isinstance(other, Expr) and self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return '{}({})'.format(type(self).__name__, ', '.join(
            repr(getattr(self, f)) for f in self._fields))

    def children(self):
        return [getattr(self, f) for f in self._fields
                if isinstance(getattr(self, f), Expr)]

    def variables(self):
        """The set of variable names this expression depends on."""
        found = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if isinstance(node, Var):
                found.add(node.name)
            stack.extend(node.children())
        return found

    def _eval(self, u, v):
        raise NotImplementedError


class Const(Expr):
    __slots__ = ('value',)
    _fields = ('value',)

    def __init__(self, value, offset=None):
        self.value = float(value)
        self.offset = offset

    def __str__(self):
        return repr(self.value)

    def _eval(self, u, v):
        return self.value


class Var(Expr):
    __slots__ = ('name',)
    _fields = ('name',)

    def __init__(self, name, offset=None):
        if name not in ('u', 'v'):
            raise ValueError('Only u and v are variables, not {!r}'
                             .format(name))
        self.name = name
        self.offset = offset

    def __str__(self):
        return self.name

    def _eval(self, u, v):
        return u if self.name == 'u' else v


class Neg(Expr):
    __slots__ = ('operand',)
    _fields = ('operand',)

    def __init__(self, operand, offset=None):
        self.operand = operand
        self.offset = offset

    def __str__(self):
        return '(-{})'.format(self.operand)

    def _eval(self, u, v):
        return -self.operand._eval(u, v)


class BinaryOp(Expr):
    __slots__ = ('left', 'right')
    _fields = ('left', 'right')
    symbol = None

    def __init__(self, left, right, offset=None):
        self.left = left
        self.right = right
        self.offset = offset

    def __str__(self):
        return '({} {} {})'.format(self.left, self.symbol, self.right)

    def _eval(self, u, v):
        return self.apply(self.left._eval(u, v), self.right._eval(u, v))


class Add(BinaryOp):
    __slots__ = ()
    symbol = '+'

    @staticmethod
    def apply(a, b):
        return a + b


class Sub(BinaryOp):
    __slots__ = ()
    symbol = '-'

    @staticmethod
    def apply(a, b):
        return a - b


class Mul(BinaryOp):
    __slots__ = ()
    symbol = '*'

    @staticmethod
    def apply(a, b):
        return a * b


class Div(BinaryOp):
    __slots__ = ()
    symbol = '/'

    def apply(self, a, b):
        zero = value_of(b) == 0
        if np.any(zero):
            raise ExprDomainError(self, 'division by zero',
                                  index=_first_index(zero))
        return a / b


class Pow(Expr):
    """A power with an integer exponent."""
    __slots__ = ('base', 'exponent')
    _fields = ('base', 'exponent')

    def __init__(self, base, exponent, offset=None):
        if int(exponent) != exponent:
            raise ValueError('Exponents must be integers, not {!r}'
                             .format(exponent))
        self.base = base
        self.exponent = int(exponent)
        self.offset = offset

    def __str__(self):
        base = str(self.base)
        if isinstance(self.base, Pow):
            base = '({})'.format(base)
        return '{}^{}'.format(base, self.exponent)

    def _eval(self, u, v):
        base = self.base._eval(u, v)
        if self.exponent < 0:
            zero = value_of(base) == 0
            if np.any(zero):
                raise ExprDomainError(self, 'negative power of zero',
                                      index=_first_index(zero))
        if isinstance(base, Dual4):
            return base ** self.exponent
        return np.asarray(base, dtype=float) ** self.exponent


class Call(Expr):
    """Application of one of the known elementary functions."""
    __slots__ = ('name', 'argument')
    _fields = ('name', 'argument')

    def __init__(self, name, argument, offset=None):
        if name not in FUNCTIONS:
            raise ValueError('Unknown function {!r}'.format(name))
        self.name = name
        self.argument = argument
        self.offset = offset

    def __str__(self):
        return '{}({})'.format(self.name, self.argument)

    def _eval(self, u, v):
        x = self.argument._eval(u, v)
        value = value_of(x)
        if self.name == 'log':
            bad = value <= 0
        elif self.name == 'sqrt':
            # The derivatives of sqrt blow up at zero
            jet = isinstance(x, Dual4) and x.order > 0
            bad = value <= 0 if jet else value < 0
        else:
            bad = None

        if bad is not None and np.any(bad):
            index = _first_index(bad)
            raise ExprDomainError(
                self, '{} of a non-positive value'.format(self.name),
                value=float(value if index is None else value[index]),
                index=index
            )
        return FUNCTIONS[self.name](x)


def evaluate(expr, u, v):
    """
    Evaluates the expression numerically. ``u`` and ``v`` may be numbers
    or arrays (which broadcast against each other).

    :return: a float for scalar input, otherwise an array of the
             broadcast shape.
    """
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float),
                               np.asarray(v, dtype=float))
    result = np.broadcast_to(np.asarray(expr._eval(u, v), dtype=float),
                             u.shape)
    if result.ndim == 0:
        return float(result)
    return np.array(result)


def eval_jet(expr, u, v, order):
    """
    Evaluates the expression together with every partial derivative in
    (u, v) up to the given order, exactly (no finite differences).

    :param expr: the `Expr` to evaluate.
    :param u: the point(s) at which to evaluate, numbers or arrays.
    :param v: the point(s) at which to evaluate, numbers or arrays.
    :param order: the jet order, between 0 and 4.
    :return: the `Dual4` jet of the expression.
    """
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float),
                               np.asarray(v, dtype=float))
    result = expr._eval(Dual4.variable(u, 0, order),
                        Dual4.variable(v, 1, order))
    if not isinstance(result, Dual4):
        result = Dual4.constant(np.broadcast_to(result, u.shape), order)
    return result
