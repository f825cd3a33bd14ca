"""
Hypothesis strategies shared by the expression tests.
"""
from hypothesis import strategies as st

from equiaffine.expr import Add, Call, Const, Mul, Neg, Pow, Sub, Var

# Smooth everywhere, so any tree built from them has a jet at every point
SMOOTH_FUNCTIONS = ('sin', 'cos', 'exp', 'sinh', 'cosh')

leaves = st.one_of(
    st.sampled_from([Var('u'), Var('v')]),
    st.sampled_from([0.5, 1.0, 2.0, 3.0]).map(Const)
)


def _extend(children):
    binary = st.sampled_from([Add, Sub, Mul])
    return st.one_of(
        st.builds(lambda op, a, b: op(a, b), binary, children, children),
        st.builds(Neg, children),
        st.builds(Pow, children, st.integers(min_value=0, max_value=3)),
        st.builds(lambda name, a: Call(name, a),
                  st.sampled_from(SMOOTH_FUNCTIONS), children)
    )


expressions = st.recursive(leaves, _extend, max_leaves=6)
