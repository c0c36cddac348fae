# transforms/transformation.py
"""Maps of a finite set V = {1..n} into itself, and tuples of points of V.

Points are 0-based inside the code and 1-based in every literal that is read
or written, so the map f with f1 = 2, f2 = 3, ... is the literal "[2,3,4,1,5]".
Composition follows the usual convention: fg applies g first, then f.
"""
import json
from dataclasses import dataclass

from mapevo.exceptions import TransformationError


@dataclass(frozen=True, order=True)
class Transformation:
    """A total map V -> V stored as its (0-based) image table."""
    images: tuple

    def __post_init__(self):
        images = tuple(self.images)
        n = len(images)
        if n == 0:
            raise TransformationError("a transformation needs a non-empty domain")
        for i, y in enumerate(images):
            if not isinstance(y, int) or not 0 <= y < n:
                raise TransformationError(f"image of point {i + 1} is {y}, outside 1..{n}")
        object.__setattr__(self, 'images', images)

    @classmethod
    def from_images(cls, images):
        """Build from 1-based images, e.g. [2, 3, 4, 1, 5]."""
        images = list(images)
        n = len(images)
        for i, y in enumerate(images):
            if isinstance(y, bool) or not isinstance(y, int) or not 1 <= y <= n:
                raise TransformationError(f"image of point {i + 1} is {y!r}, outside 1..{n}")
        return cls(tuple(y - 1 for y in images))

    @classmethod
    def parse(cls, literal):
        """Read the literal syntax "[2,3,4,1,5]"."""
        try:
            images = json.loads(literal)
        except (TypeError, ValueError) as exc:
            raise TransformationError(f"not a transformation literal: {literal!r}") from exc
        if not isinstance(images, list):
            raise TransformationError(f"not a transformation literal: {literal!r}")
        return cls.from_images(images)

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n)))

    @property
    def n(self):
        return len(self.images)

    def __call__(self, x):
        return self.images[x]

    def __mul__(self, other):
        return compose(self, other)

    def __str__(self):
        return '[' + ','.join(str(y + 1) for y in self.images) + ']'

    def __repr__(self):
        return f"Transformation({self})"

    def one_based(self):
        return [y + 1 for y in self.images]

    def image(self):
        """The set fV."""
        return frozenset(self.images)

    def is_idempotent(self):
        return compose(self, self) == self

    def power(self, k):
        if k < 1:
            raise TransformationError("powers start at 1")
        result = self
        for _ in range(k - 1):
            result = compose(self, result)
        return result


def compose(f, g):
    """fg: apply g first, then f."""
    if f.n != g.n:
        raise TransformationError(f"cannot compose maps on {f.n} and {g.n} points")
    fi = f.images
    return Transformation(tuple(fi[y] for y in g.images))


def rank(f):
    """#(fV), the number of distinct images."""
    return len(set(f.images))


def apply_tuple(f, x):
    """f acting on a tuple of points componentwise."""
    if x and max(x) >= f.n:
        raise TransformationError(f"tuple {format_tuple(x)} has points outside 1..{f.n}")
    return tuple(f.images[xi] for xi in x)


def is_distinct(x):
    return len(set(x)) == len(x)


def parse_tuple(points, n=None):
    """1-based sequence (or "(2,4,5)" literal) to an internal tuple."""
    if isinstance(points, str):
        text = points.strip()
        if text.startswith('(') and text.endswith(')'):
            text = '[' + text[1:-1] + ']'
        try:
            points = json.loads(text)
        except ValueError as exc:
            raise TransformationError(f"not a tuple literal: {points!r}") from exc
    result = []
    for x in points:
        if isinstance(x, bool) or not isinstance(x, int) or x < 1 or (n is not None and x > n):
            bound = f"1..{n}" if n is not None else "positive integers"
            raise TransformationError(f"tuple entry {x!r} outside {bound}")
        result.append(x - 1)
    return tuple(result)


def format_tuple(x):
    return '(' + ','.join(str(xi + 1) for xi in x) + ')'
