# measures/measure.py
"""Exact, finitely supported probability measures.

A measure is carried either by transformations (measures on the semigroup) or
by tuples of points (laws of particle configurations). Weights are
`fractions.Fraction`, stored for the support only, and always sum to exactly 1.
"""
from fractions import Fraction
from types import MappingProxyType

from mapevo.exceptions import InputError, MeasureError
from transforms.transformation import Transformation, apply_tuple, compose, format_tuple


def format_rational(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(value, field='weight'):
    """"num/den" strings or integers to a Fraction; floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"{field}: {value!r} is not an exact rational, write it as \"num/den\"")
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{field}: {value!r} is not a rational \"num/den\"") from exc


def format_point(x):
    if isinstance(x, Transformation):
        return str(x)
    return format_tuple(x)


class RationalMeasure:
    """Sparse exact probability on transformations or on tuples."""

    __slots__ = ('_weights',)

    def __init__(self, weights, check=True):
        cleaned = {}
        for x, w in dict(weights).items():
            w = Fraction(w)
            if w < 0:
                raise MeasureError(f"negative weight {w} at {format_point(x)}")
            if w:
                cleaned[x] = w
        if check:
            if not cleaned:
                raise MeasureError("a probability measure needs a non-empty support")
            total = sum(cleaned.values())
            if total != 1:
                raise MeasureError(f"weights sum to {total}, not 1")
            kinds = {isinstance(x, Transformation) for x in cleaned}
            if len(kinds) > 1:
                raise MeasureError("a measure cannot mix transformations and tuples")
        self._weights = cleaned

    @classmethod
    def point(cls, x):
        return cls({x: 1})

    @property
    def weights(self):
        return MappingProxyType(self._weights)

    def __getitem__(self, x):
        return self._weights.get(x, Fraction(0))

    def __len__(self):
        return len(self._weights)

    def __iter__(self):
        return iter(self.support())

    def __eq__(self, other):
        if not isinstance(other, RationalMeasure):
            return NotImplemented
        return self._weights == other._weights

    def __hash__(self):
        return hash(frozenset(self._weights.items()))

    def __repr__(self):
        inner = ', '.join(f"{format_point(x)}: {format_rational(w)}" for x, w in self.items())
        return f"RationalMeasure({{{inner}}})"

    def items(self):
        return [(x, self._weights[x]) for x in self.support()]

    def support(self):
        return sorted(self._weights)

    @property
    def on_transformations(self):
        return isinstance(next(iter(self._weights)), Transformation)

    @property
    def domain_size(self):
        """n for measures on maps of V = {1..n}; None for tuple laws."""
        first = next(iter(self._weights))
        return first.n if isinstance(first, Transformation) else None

    def total(self):
        return sum(self._weights.values(), Fraction(0))

    def pushforward(self, fn):
        out = {}
        for x, w in self._weights.items():
            y = fn(x)
            out[y] = out.get(y, Fraction(0)) + w
        return RationalMeasure(out)

    def as_strings(self):
        return {format_point(x): format_rational(w) for x, w in self.items()}

    def as_floats(self):
        return {x: float(w) for x, w in self._weights.items()}


def mixture(terms):
    """sum c_i m_i for nonnegative c_i summing to 1."""
    out = {}
    for c, m in terms:
        c = Fraction(c)
        if not c:
            continue
        for x, w in m.weights.items():
            out[x] = out.get(x, Fraction(0)) + c * w
    return RationalMeasure(out)


def convolve(a, b):
    """(ab){z} = sum over fg = z of a{f} b{g}."""
    if not (a.on_transformations and b.on_transformations):
        raise MeasureError("convolution needs two measures on transformations")
    if a.domain_size != b.domain_size:
        raise MeasureError(f"carrier mismatch: maps on {a.domain_size} and {b.domain_size} points")
    out = {}
    for f, wf in a.weights.items():
        for g, wg in b.weights.items():
            z = compose(f, g)
            out[z] = out.get(z, Fraction(0)) + wf * wg
    return RationalMeasure(out)


def uniform(subset):
    """Uniform law on a finite set; the Haar measure when the set is a group."""
    subset = sorted(set(subset))
    if not subset:
        raise MeasureError("uniform law on an empty set")
    w = Fraction(1, len(subset))
    return RationalMeasure({x: w for x in subset})


def act_on_tuples(mu, lam):
    """(mu Lam){y} = sum over f x = y of mu{f} Lam{x}."""
    if not mu.on_transformations:
        raise MeasureError("the acting measure must live on transformations")
    if lam.on_transformations:
        raise MeasureError("the acted-on law must live on tuples")
    n = mu.domain_size
    out = {}
    for x, wx in lam.weights.items():
        if x and max(x) >= n:
            raise MeasureError(f"dimension mismatch: {format_tuple(x)} is not a tuple of points of 1..{n}")
        for f, wf in mu.weights.items():
            y = apply_tuple(f, x)
            out[y] = out.get(y, Fraction(0)) + wf * wx
    return RationalMeasure(out)


def marginal_transition_matrix(mu):
    """P[x][y] = mu{f : f x = y}, exact and row-stochastic."""
    n = mu.domain_size
    P = [[Fraction(0)] * n for _ in range(n)]
    for f, w in mu.weights.items():
        for x in range(n):
            P[x][f.images[x]] += w
    return P


def _as_measure(piece):
    if isinstance(piece, RationalMeasure):
        return piece
    if isinstance(piece, (Transformation, tuple)):
        return RationalMeasure.point(piece)
    raise MeasureError(f"cannot read {piece!r} as a measure or a point")


def measure_products(pieces):
    """Left-to-right product of measures and points (points read as Dirac masses).

    Everything but the last piece must live on transformations; the last piece
    may be a tuple law, in which case the result is a tuple law.
    """
    pieces = [_as_measure(p) for p in pieces]
    if not pieces:
        raise MeasureError("empty product")
    result = pieces[-1]
    for piece in reversed(pieces[:-1]):
        if result.on_transformations:
            result = convolve(piece, result)
        else:
            result = act_on_tuples(piece, result)
    return result
