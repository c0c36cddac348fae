# cliques/cliques.py
"""Deadlocks, F-cliques and invariant laws of m-particle systems.

A pair {x, y} is a deadlock when no element of S merges it. The F-cliques are
the images gV of kernel elements: maximal deadlocked sets of m_mu = min rank
points. Other deadlocked m_mu-sets may exist beside them; W_mu collects the
orderings of the F-cliques only, and every x in W_mu factors uniquely as
x = x_L x_G x_W with x_L in L, x_G in G and x_W in a set W of G-orbit
representatives of eW_mu.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

import networkx as nx

from mapevo.exceptions import (ClassificationError, InputError, MeasureError,
                               StructuralInconsistency)
from measures.measure import (RationalMeasure, act_on_tuples, format_point, format_rational,
                              measure_products, mixture, uniform)
from transforms.transformation import apply_tuple, compose, format_tuple, is_distinct, rank

logger = logging.getLogger(__name__)


MERGED = 'merged'


def _pair(x, y):
    return (x, y) if x < y else (y, x)


def pair_graph(S):
    """Pairs {x, y} of points with an edge to {a(x), a(y)} for each generator a.

    Pairs a generator collapses point to the single sink node MERGED.
    """
    P = nx.DiGraph()
    P.add_node(MERGED)
    for x, y in combinations(range(S.n), 2):
        P.add_node((x, y))
        for a in S.generator_maps:
            ax, ay = a(x), a(y)
            P.add_edge((x, y), MERGED if ax == ay else _pair(ax, ay))
    return P


def deadlock_pairs(S):
    """All deadlocked pairs (x, y), x < y, of the points of V.

    A pair is mergeable when a path of the pair graph leads it to MERGED;
    the rest are deadlocks.
    """
    P = pair_graph(S)
    mergeable = nx.ancestors(P, MERGED)
    pairs = frozenset(p for p in P if p != MERGED and p not in mergeable)
    logger.debug(f"{len(pairs)} deadlocked pairs out of {P.number_of_nodes() - 1}")
    return pairs


def is_deadlock(S, x, y, pairs=None):
    if x == y:
        raise InputError(f"a deadlock needs two distinct points, got {x + 1} twice")
    if pairs is None:
        pairs = deadlock_pairs(S)
    return _pair(x, y) in pairs


def is_deadlocked_set(points, pairs):
    return all(_pair(x, y) in pairs for x, y in combinations(points, 2))


def deadlocked_sets(n, m, pairs):
    """Every m-point set of V whose pairs are all deadlocks, as sorted tuples.

    These are the m-cliques of the deadlock graph. They include the
    F-cliques but can be more: for [1,2,1,2] the sets {1,4} and {3,4} are
    deadlocked and are no kernel image.
    """
    D = nx.Graph()
    D.add_nodes_from(range(n))
    D.add_edges_from(pairs)
    found = []
    for clique in nx.enumerate_all_cliques(D):
        if len(clique) > m:
            break
        if len(clique) == m:
            found.append(tuple(sorted(clique)))
    return sorted(found)


def f_cliques(K):
    """The distinct image sets gV of kernel elements, each as a sorted tuple."""
    return sorted({tuple(sorted(z.image())) for z in K})


@dataclass(frozen=True)
class CliqueData:
    m_mu: int
    f_cliques: tuple
    W_mu: tuple
    eW_mu: tuple
    W: tuple
    orbit_of: dict = field(repr=False)
    triple_of: dict = field(repr=False)

    def __contains__(self, x):
        return x in self.triple_of


def compute_W(S, K, rd, pairs=None):
    """W_mu, eW_mu and the representative set W, with the L x G x W bijection checked."""
    if pairs is None:
        pairs = deadlock_pairs(S)
    m_mu = rank(K[0])
    cliques = f_cliques(K)
    for clique in cliques:
        if not is_deadlocked_set(clique, pairs):
            raise StructuralInconsistency(f"image set {format_tuple(clique)} is not deadlocked")

    W_mu = sorted(x for clique in cliques for x in permutations(clique))
    members = set(W_mu)
    eW_mu = sorted({apply_tuple(rd.e, x) for x in W_mu})

    orbit_of = {}
    W = []
    for x in eW_mu:
        if x in orbit_of:
            continue
        # eW_mu is sorted, so x is the smallest point of its orbit
        W.append(x)
        for a in rd.G:
            orbit_of[apply_tuple(a, x)] = x

    triple_of = {}
    for l in rd.L:
        for a in rd.G:
            la = compose(l, a)
            for w in W:
                x = apply_tuple(la, w)
                if x in triple_of or x not in members:
                    raise StructuralInconsistency(f"L x G x W -> W_mu is not a bijection at {format_tuple(x)}")
                triple_of[x] = (l, a, w)
    if len(triple_of) != len(members):
        raise StructuralInconsistency(
            f"|L||G||W| = {len(triple_of)} but W_mu has {len(members)} tuples")
    logger.info(f"m_mu = {m_mu}: {len(cliques)} F-cliques, |W_mu| = {len(W_mu)}, |W| = {len(W)}")
    return CliqueData(m_mu=m_mu, f_cliques=tuple(cliques), W_mu=tuple(W_mu), eW_mu=tuple(eW_mu),
                      W=tuple(W), orbit_of=orbit_of, triple_of=triple_of)


def project_tuple(cd, x):
    """(x_L, x_G, x_W) with x = x_L x_G x_W."""
    try:
        return cd.triple_of[tuple(x)]
    except KeyError:
        raise InputError(f"{format_tuple(x)} is not in W_mu") from None


def _check_on_W(cd, lam, name):
    stray = [x for x in lam.support() if x not in cd.orbit_of or cd.orbit_of[x] != x]
    if lam.on_transformations or stray:
        where = format_point(stray[0]) if stray else 'a transformation'
        raise MeasureError(f"{name} must live on W, found {where}")


def invariant_laws(mu, rd, limits, cd, Lambda_W):
    """The mu-invariant law eta^L omega_G Lambda_W on W_mu."""
    _check_on_W(cd, Lambda_W, 'Lambda_W')
    lam = measure_products([limits.eta_L, uniform(rd.G), Lambda_W])
    if act_on_tuples(mu, lam) != lam:
        raise StructuralInconsistency("eta^L omega_G Lambda_W is not fixed by mu")
    return lam


def mono_marginal(lam, coordinate=0):
    """Law of one coordinate of a tuple law, as a law on 1-tuples."""
    return lam.pushforward(lambda x: (x[coordinate],))


@dataclass(frozen=True)
class InvariantFamily:
    """Lambda_k = sum_i c_i eta^L gamma^(k+i) omega_H Lambda^i_W, k an integer."""
    coefficients: tuple
    conditional_laws: tuple

    @property
    def p(self):
        return len(self.coefficients)

    def to_json(self):
        return {
            'c': [format_rational(c) for c in self.coefficients],
            'Lambda_W': [{format_tuple(w): format_rational(q) for w, q in lam.items()}
                         for lam in self.conditional_laws],
        }


def assemble_family(cd, coefficients, conditional_laws):
    coefficients = tuple(Fraction(c) for c in coefficients)
    conditional_laws = tuple(conditional_laws)
    if len(coefficients) != len(conditional_laws):
        raise InputError("one conditional law Lambda^i_W is needed per coefficient c_i")
    if any(c < 0 for c in coefficients) or sum(coefficients) != 1:
        raise InputError("coefficients c_i must be nonnegative and sum to 1")
    for i, lam in enumerate(conditional_laws):
        _check_on_W(cd, lam, f"Lambda^{i}_W")
    return InvariantFamily(coefficients, conditional_laws)


def family_law(rd, limits, family, k):
    """Lambda_k for any integer k; gamma powers are taken mod p."""
    if family.p != rd.p:
        raise InputError(f"a family for p = {rd.p} needs {rd.p} coefficients, got {family.p}")
    omega_H = uniform(rd.H)
    terms = []
    for i, (c, lam) in enumerate(zip(family.coefficients, family.conditional_laws)):
        if c:
            terms.append((c, measure_products([limits.eta_L, rd.gamma_power(k + i), omega_H, lam])))
    return mixture(terms)


def stationary_family(rd, Lambda_W):
    """The constant family of the invariant law eta^L omega_G Lambda_W."""
    p = rd.p
    return InvariantFamily((Fraction(1, p),) * p, (Lambda_W,) * p)


def classify_family(mu, rd, limits, cd, Lambda_0, window=None):
    """Recover (c_i, Lambda^i_W) from Lambda_0 of a shift-compatible family.

    c_i is the mass of {x : x_G in gamma^i H}; Lambda^i_W is the law of x_W
    on that event, or uniform on W when c_i = 0. Lambda_0 must be reproduced
    exactly; otherwise ClassificationError carries the residual.
    """
    if Lambda_0.on_transformations:
        raise MeasureError("Lambda_0 must be a law on tuples")
    for x in Lambda_0.support():
        if len(x) != cd.m_mu or not is_distinct(x):
            raise MeasureError(f"{format_tuple(x)} is not a tuple of {cd.m_mu} distinct points")
        if x not in cd:
            raise ClassificationError(f"{format_tuple(x)} is outside W_mu",
                                      residual={format_tuple(x): format_rational(Lambda_0[x])})

    p = rd.p
    mass = [Fraction(0)] * p
    joint = [{} for _ in range(p)]
    for x, q in Lambda_0.items():
        _, a, w = cd.triple_of[x]
        i = rd.coset_index(a)
        mass[i] += q
        joint[i][w] = joint[i].get(w, Fraction(0)) + q
    conditional = tuple(RationalMeasure({w: q / mass[i] for w, q in joint[i].items()})
                        if mass[i] else uniform(cd.W) for i in range(p))
    family = InvariantFamily(tuple(mass), conditional)

    rebuilt = family_law(rd, limits, family, 0)
    if rebuilt != Lambda_0:
        points = set(rebuilt.support()) | set(Lambda_0.support())
        residual = {format_tuple(x): format_rational(Lambda_0[x] - rebuilt[x])
                    for x in sorted(points) if Lambda_0[x] != rebuilt[x]}
        raise ClassificationError("Lambda_0 is not of the form sum_i c_i eta^L gamma^i omega_H Lambda^i_W",
                                  residual=residual)

    window = p if window is None else window
    previous = rebuilt
    for k in range(1, window + 1):
        current = family_law(rd, limits, family, k)
        if act_on_tuples(mu, previous) != current:
            raise StructuralInconsistency(f"Lambda_{k} != mu Lambda_{k - 1}")
        previous = current
    logger.info(f"classified family: c = {[format_rational(c) for c in mass]}")
    return family
