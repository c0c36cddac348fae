# measures/linalg.py
"""Stationary laws of small chains, solved exactly with sympy."""
import logging
from fractions import Fraction

import sympy

from mapevo.exceptions import StructuralInconsistency

logger = logging.getLogger(__name__)


def _rational(q):
    q = Fraction(q)
    return sympy.Rational(q.numerator, q.denominator)


def _fraction(q):
    q = sympy.Rational(q)
    return Fraction(int(q.p), int(q.q))


def stationary_law(states, step):
    """The unique probability pi on `states` with pi P = pi.

    `step(s)` yields (t, weight) pairs: the one-step transitions out of s.
    Raises StructuralInconsistency when pi is not unique.
    """
    position = {s: i for i, s in enumerate(states)}
    size = len(states)
    # balance: sum_s pi_s P[s][t] - pi_t = 0 for each t, plus sum pi = 1
    A = sympy.zeros(size + 1, size)
    for s in states:
        i = position[s]
        for t, w in step(s):
            if t not in position:
                raise StructuralInconsistency(f"chain leaves its state space at {t}")
            A[position[t], i] += _rational(w)
    for t in range(size):
        A[t, t] -= 1
        A[size, t] = 1
    b = sympy.Matrix([0] * size + [1])

    try:
        solution, params = A.gauss_jordan_solve(b)
    except ValueError as exc:
        raise StructuralInconsistency("balance equations are inconsistent") from exc
    if params.shape[0]:
        raise StructuralInconsistency(
            f"stationary law is not unique: {params.shape[0]} free parameter(s)")
    logger.debug(f"solved {size + 1}x{size} balance system")
    return {s: _fraction(solution[position[s]]) for s in states}
