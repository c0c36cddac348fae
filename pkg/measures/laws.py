# measures/laws.py
"""Mapping laws: the step distribution mu of an evolution, and its file format.

    {"n": 5, "generators": [[2,3,4,1,5],[2,5,5,2,4]], "weights": ["1/2","1/2"]}
"""
import json
import logging
from fractions import Fraction

from mapevo.exceptions import InputError, TransformationError
from transforms.transformation import Transformation
from .measure import RationalMeasure, format_rational, parse_rational

logger = logging.getLogger(__name__)


class MappingLaw(RationalMeasure):
    """A probability on transformations of V = {1..n}."""

    __slots__ = ()

    def __init__(self, weights):
        super().__init__(weights)
        if not self.on_transformations:
            raise InputError("a mapping law lives on transformations")
        sizes = {f.n for f in self.weights}
        if len(sizes) > 1:
            raise InputError(f"generators act on different domain sizes {sorted(sizes)}")

    @property
    def n(self):
        return self.domain_size

    @property
    def generators(self):
        return self.support()

    def to_json(self):
        return {
            'n': self.n,
            'generators': [f.one_based() for f in self.generators],
            'weights': [format_rational(w) for _, w in self.items()],
        }


def parse_law(data):
    """Validate a decoded law object; field errors name the offending path."""
    if not isinstance(data, dict):
        raise InputError("law: expected a JSON object with n, generators and weights")
    for key in ('n', 'generators', 'weights'):
        if key not in data:
            raise InputError(f"law: missing field '{key}'")
    n = data['n']
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"n: expected a positive integer, got {n!r}")
    generators, weights = data['generators'], data['weights']
    if not isinstance(generators, list) or not generators:
        raise InputError("generators: expected a non-empty list")
    if not isinstance(weights, list) or len(weights) != len(generators):
        raise InputError("weights: expected one weight per generator")

    law = {}
    for i, (images, raw) in enumerate(zip(generators, weights)):
        if not isinstance(images, list) or len(images) != n:
            raise InputError(f"generators[{i}]: expected a list of {n} images")
        for j, y in enumerate(images):
            if isinstance(y, bool) or not isinstance(y, int) or not 1 <= y <= n:
                raise InputError(f"generators[{i}][{j}]: {y!r} is outside 1..{n}")
        w = parse_rational(raw, field=f"weights[{i}]")
        if w <= 0:
            raise InputError(f"weights[{i}]: {raw!r} is not positive")
        f = Transformation.from_images(images)
        law[f] = law.get(f, Fraction(0)) + w

    total = sum(law.values())
    if total != 1:
        raise InputError(f"weights: sum is {format_rational(total)}, expected 1")
    return MappingLaw(law)


def loads_law(text, source='<string>'):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_law(data)


def load_law(path):
    try:
        with open(path, encoding='utf-8') as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read law file {path}: {exc.strerror}") from exc
    law = loads_law(text, source=str(path))
    logger.info(f"loaded law with {len(law)} generators on {law.n} points from {path}")
    return law


def law_from_literals(literals, weights):
    """law_from_literals(["[2,3,4,1,5]", ...], ["1/2", ...])"""
    try:
        maps = [Transformation.parse(s) for s in literals]
    except TransformationError as exc:
        raise InputError(str(exc)) from exc
    out = {}
    for f, w in zip(maps, weights):
        out[f] = out.get(f, Fraction(0)) + parse_rational(w)
    return MappingLaw(out)


def example_law():
    """The two-map law (delta_f + delta_g)/2 with f = [2,3,4,1,5], g = [2,5,5,2,4]."""
    return law_from_literals(['[2,3,4,1,5]', '[2,5,5,2,4]'], ['1/2', '1/2'])


def cyclic_law(n=3):
    """Point mass at the cyclic shift x -> x + 1 mod n; its powers cycle with period n."""
    shift = Transformation(tuple((x + 1) % n for x in range(n)))
    return MappingLaw({shift: 1})
