"""
Truncated bivariate Taylor series ("jets") in the variables (u, v).

A `Dual4` stores the coefficients ``c[i, j]`` of ``du^i dv^j`` for every
``i + j <= order`` (at most 4), so the partial derivative is
``i! j! c[i, j]``. Coefficients are kept in degree order, which makes
truncating to a lower order a simple prefix slice:

    (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), (3,0), ...

The coefficient array has shape ``(ncoef, *trailing)``, so a single jet
can hold a scalar, a whole grid of samples, vectors or 3x3 matrices.
"""
import math

import numpy as np

MAX_ORDER = 4


def _monomials(order):
    return [(i, d - i) for d in range(order + 1) for i in range(d, -1, -1)]


MONOMIALS = _monomials(MAX_ORDER)
INDEX = {m: k for k, m in enumerate(MONOMIALS)}


def ncoef(order):
    """How many coefficients a jet of the given order has."""
    return (order + 1) * (order + 2) // 2


def _product_table():
    table = []
    for k, (i, j) in enumerate(MONOMIALS):
        for p, (a, b) in enumerate(MONOMIALS):
            if a <= i and b <= j:
                table.append((k, p, INDEX[(i - a, j - b)]))
    return table


# (k, p, q) such that monomial p times monomial q is monomial k.
# Sorted by k, so a prefix serves any lower order too.
_PRODUCTS = _product_table()
_PRODUCTS_UP_TO = [
    [t for t in _PRODUCTS if t[0] < ncoef(n)] for n in range(MAX_ORDER + 1)
]


class Dual4:
    """
    A jet of order up to 4 in (u, v) whose coefficients may be arrays.

    Jets are immutable; every operation returns a new one. Combining
    jets of different orders yields the lower order.
    """
    __slots__ = ('order', 'coeffs')

    # Make numpy defer to our reflected operators (ndarray * Dual4)
    __array_ufunc__ = None

    def __init__(self, coeffs, order):
        if not 0 <= order <= MAX_ORDER:
            raise ValueError('Jet order must be within 0..{}, not {}'
                             .format(MAX_ORDER, order))

        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape[:1] != (ncoef(order),):
            raise ValueError('A jet of order {} needs {} coefficients, got {}'
                             .format(order, ncoef(order), coeffs.shape[:1]))

        self.order = order
        self.coeffs = coeffs

    # region Construction

    @classmethod
    def constant(cls, value, order):
        """Lifts a (possibly array) constant, zero in every derivative."""
        value = np.asarray(value, dtype=float)
        coeffs = np.zeros((ncoef(order),) + value.shape)
        coeffs[0] = value
        return cls(coeffs, order)

    @classmethod
    def variable(cls, value, axis, order):
        """The jet of ``u`` (axis 0) or ``v`` (axis 1) at the given value."""
        jet = cls.constant(value, order)
        if order > 0:
            jet.coeffs[1 + axis] = 1.0
        return jet

    @classmethod
    def from_partials(cls, partials, order):
        """
        Builds a jet from a ``{(i, j): derivative}`` mapping. Missing
        entries are taken as zero.
        """
        first = np.asarray(partials[(0, 0)], dtype=float)
        coeffs = np.zeros((ncoef(order),) + first.shape)
        for (i, j), value in partials.items():
            if i + j <= order:
                coeffs[INDEX[(i, j)]] = (
                    np.asarray(value, dtype=float)
                    / (math.factorial(i) * math.factorial(j))
                )
        return cls(coeffs, order)

    @classmethod
    def stack(cls, parts, axis=-1):
        """
        Stacks jets (and plain constants, which are lifted) along a new
        trailing axis. Trailing shapes are broadcast; only negative axes
        are supported.
        """
        if axis >= 0:
            raise ValueError('Only negative axes can be used to stack jets')

        order = min(p.order for p in parts if isinstance(p, Dual4))
        n = ncoef(order)
        shape = np.broadcast_shapes(*(np.shape(value_of(p)) for p in parts))
        coeffs = []
        for p in parts:
            if isinstance(p, Dual4):
                c = p.coeffs[:n]
                c = c.reshape(c.shape[:1] + (1,) * (len(shape) - c.ndim + 1)
                              + c.shape[1:])
                coeffs.append(np.broadcast_to(c, (n,) + shape))
            else:
                c = np.zeros((n,) + shape)
                c[0] = p
                coeffs.append(c)
        return cls(np.stack(coeffs, axis=axis), order)

    # endregion

    # region Accessors

    @property
    def value(self):
        return self.coeffs[0]

    @property
    def shape(self):
        return self.coeffs.shape[1:]

    def partial(self, i, j):
        """The exact partial derivative d^(i+j) / du^i dv^j."""
        if i + j > self.order:
            raise ValueError('Cannot read a derivative of order {} from a '
                             'jet of order {}'.format(i + j, self.order))
        return (self.coeffs[INDEX[(i, j)]]
                * (math.factorial(i) * math.factorial(j)))

    def truncate(self, order):
        if order > self.order:
            raise ValueError('Cannot raise the order of a jet')
        return Dual4(self.coeffs[:ncoef(order)], order)

    def diff(self, axis):
        """The jet of the derivative along u (0) or v (1), one order lower."""
        if self.order == 0:
            raise ValueError('Cannot differentiate a jet of order 0')

        order = self.order - 1
        coeffs = np.empty((ncoef(order),) + self.shape)
        for k, (i, j) in enumerate(MONOMIALS[:ncoef(order)]):
            if axis == 0:
                coeffs[k] = (i + 1) * self.coeffs[INDEX[(i + 1, j)]]
            else:
                coeffs[k] = (j + 1) * self.coeffs[INDEX[(i, j + 1)]]
        return Dual4(coeffs, order)

    def diff_u(self):
        return self.diff(0)

    def diff_v(self):
        return self.diff(1)

    def __getitem__(self, key):
        if not isinstance(key, tuple):
            key = (key,)
        return Dual4(self.coeffs[(slice(None),) + key], self.order)

    # endregion

    # region Arithmetic

    def _aligned(self, other):
        # Trailing shapes broadcast right-aligned, behind the coefficient axis
        a, b = self.coeffs, other.coeffs
        if a.ndim < b.ndim:
            a = a.reshape(a.shape[:1] + (1,) * (b.ndim - a.ndim) + a.shape[1:])
        elif b.ndim < a.ndim:
            b = b.reshape(b.shape[:1] + (1,) * (a.ndim - b.ndim) + b.shape[1:])
        return a, b

    def _convolve(self, other, op):
        order = min(self.order, other.order)
        a, b = self._aligned(other)
        terms = {}
        for k, p, q in _PRODUCTS_UP_TO[order]:
            term = op(a[p], b[q])
            if k in terms:
                terms[k] = terms[k] + term
            else:
                terms[k] = term
        return Dual4(np.stack([terms[k] for k in range(ncoef(order))]), order)

    def _expanded(self, value):
        value = np.asarray(value, dtype=float)
        coeffs = self.coeffs
        extra = value.ndim - len(self.shape)
        if extra > 0:
            coeffs = coeffs.reshape(
                coeffs.shape[:1] + (1,) * extra + coeffs.shape[1:])
        return coeffs, value

    def _shift(self, value):
        coeffs, value = self._expanded(value)
        coeffs = np.broadcast_to(
            coeffs, coeffs.shape[:1]
            + np.broadcast_shapes(coeffs.shape[1:], value.shape)
        ).copy()
        coeffs[0] = coeffs[0] + value
        return Dual4(coeffs, self.order)

    def __add__(self, other):
        if isinstance(other, Dual4):
            order = min(self.order, other.order)
            n = ncoef(order)
            a, b = self._aligned(other)
            return Dual4(a[:n] + b[:n], order)
        return self._shift(other)

    __radd__ = __add__

    def __neg__(self):
        return Dual4(-self.coeffs, self.order)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Dual4):
            return self._convolve(other, np.multiply)
        coeffs, other = self._expanded(other)
        return Dual4(coeffs * other, self.order)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Dual4):
            return self._convolve(other, np.matmul)
        coeffs, other = self._expanded(other)
        return Dual4(coeffs @ other, self.order)

    def __rmatmul__(self, other):
        coeffs, other = self._expanded(other)
        return Dual4(other @ coeffs, self.order)

    def reciprocal(self):
        return self.compose(_series('power', self.value, self.order, -1.0))

    def __truediv__(self, other):
        if isinstance(other, Dual4):
            return self * other.reciprocal()
        coeffs, other = self._expanded(other)
        return Dual4(coeffs / other, self.order)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, exponent):
        if isinstance(exponent, (int, np.integer)):
            if exponent < 0:
                return self.reciprocal() ** -exponent
            return _integer_power(self, int(exponent))
        return self.compose(
            _series('power', self.value, self.order, float(exponent)))

    def compose(self, taylor):
        """
        Composes a scalar function with this jet, given the Taylor
        coefficients ``f^(k)(value) / k!`` for ``k = 0..order``.
        """
        h = Dual4(self.coeffs.copy(), self.order)
        h.coeffs[0] = 0.0

        result = Dual4.constant(taylor[self.order], self.order)
        for k in range(self.order - 1, -1, -1):
            # h is nilpotent, so Horner's scheme ends after `order` products
            result = (result * h)._shift(taylor[k])
        return result

    # endregion

    def __repr__(self):
        return 'Dual4(order={}, shape={}, value={!r})'.format(
            self.order, self.shape, self.value)


def _integer_power(jet, n):
    result = None
    base = jet
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    if result is None:
        return Dual4.constant(np.ones(jet.shape), jet.order)
    return result


def _series(name, a, order, exponent=None):
    """Taylor coefficients f^(k)(a) / k! for k = 0..order."""
    a = np.asarray(a, dtype=float)
    if name in ('sin', 'cos'):
        s, c = np.sin(a), np.cos(a)
        cycle = [s, c, -s, -c] if name == 'sin' else [c, -s, -c, s]
    elif name in ('sinh', 'cosh'):
        s, c = np.sinh(a), np.cosh(a)
        cycle = [s, c] if name == 'sinh' else [c, s]
    elif name == 'exp':
        cycle = [np.exp(a)]
    elif name == 'log':
        return [np.log(a)] + [
            (-1.0) ** (k + 1) / (k * a ** k) for k in range(1, order + 1)]
    elif name == 'power':
        coeffs = []
        binomial = 1.0
        for k in range(order + 1):
            coeffs.append(binomial * a ** (exponent - k))
            binomial *= (exponent - k) / (k + 1)
        return coeffs
    else:
        raise ValueError('No series known for {!r}'.format(name))

    return [cycle[k % len(cycle)] / math.factorial(k)
            for k in range(order + 1)]


# region Elementary functions


def _apply(name, numeric):
    def function(x):
        if isinstance(x, Dual4):
            return x.compose(_series(name, x.value, x.order))
        return numeric(x)

    function.__name__ = name
    return function


sin = _apply('sin', np.sin)
cos = _apply('cos', np.cos)
sinh = _apply('sinh', np.sinh)
cosh = _apply('cosh', np.cosh)
exp = _apply('exp', np.exp)
log = _apply('log', np.log)


def sqrt(x):
    if isinstance(x, Dual4):
        return x ** 0.5
    return np.sqrt(x)


FUNCTIONS = {
    'sin': sin, 'cos': cos, 'sinh': sinh, 'cosh': cosh,
    'exp': exp, 'log': log, 'sqrt': sqrt
}


# endregion

# region Linear algebra on jets


def value_of(x):
    """The value of a jet, or ``x`` itself if it is a plain number/array."""
    return x.value if isinstance(x, Dual4) else np.asarray(x, dtype=float)


def stack(parts, axis=-1):
    if any(isinstance(p, Dual4) for p in parts):
        return Dual4.stack(parts, axis=axis)
    return np.stack(np.broadcast_arrays(*parts), axis=axis)


def dot(a, b):
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def cross(a, b):
    a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2]
    b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2]
    return stack([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])


def det3(a, b, c):
    """det[a, b, c] for column vectors a, b, c (jets or arrays)."""
    return dot(a, cross(b, c))


def adjugate_inverse(m):
    """
    Inverts a stack of 2x2 or 3x3 matrices with the adjugate formula.

    :return: a tuple ``(inverse, determinant)``.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[-1]
    if n == 2:
        det = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
        adj = np.empty_like(m)
        adj[..., 0, 0] = m[..., 1, 1]
        adj[..., 0, 1] = -m[..., 0, 1]
        adj[..., 1, 0] = -m[..., 1, 0]
        adj[..., 1, 1] = m[..., 0, 0]
    elif n == 3:
        c0 = np.cross(m[..., :, 1], m[..., :, 2])
        c1 = np.cross(m[..., :, 2], m[..., :, 0])
        c2 = np.cross(m[..., :, 0], m[..., :, 1])
        # Rows of the adjugate are the cross products of the columns
        adj = np.stack([c0, c1, c2], axis=-2)
        det = np.einsum('...i,...i->...', m[..., :, 0], c0)
    else:
        raise ValueError('Only 2x2 and 3x3 matrices are supported')

    with np.errstate(divide='ignore', invalid='ignore'):
        return adj / det[..., None, None], det


def matrix_inverse(m):
    """
    Inverts a matrix jet (or a plain stack of matrices). The value is
    inverted with the adjugate formula and the remaining coefficients
    follow from the Neumann series of ``(M0 (1 + M0^-1 N))^-1``.
    """
    if not isinstance(m, Dual4):
        return adjugate_inverse(m)[0]

    inv0 = adjugate_inverse(m.value)[0]
    nilpotent = Dual4(m.coeffs.copy(), m.order)
    nilpotent.coeffs[0] = 0.0
    x = inv0 @ nilpotent

    term = Dual4.constant(inv0, m.order)
    result = term
    for _ in range(m.order):
        term = -(x @ term)
        result = result + term
    return result


# endregion
