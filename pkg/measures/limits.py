# measures/limits.py
"""Limits of the convolution powers mu^n on the semigroup generated by supp(mu).

The powers settle on a cycle eta, mu eta, ..., mu^(p-1) eta with Cesaro limit
nu. Everything here is computed structurally and exactly:

* beta = eta^L omega_G is the unique fixed point of beta = mu beta on Ke, found
  by an exact linear solve of the chain z -> f z (f ~ mu); the right factor
  eta^R comes from the mirrored chain z -> z f on eK.
* p is the period of that chain; its cyclic classes are L H, L gamma H, ...
  so H and gamma are read off the G-parts of the class of e and of the next one.

A float iteration of mu^n is kept as an independent oracle.
"""
import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import networkx as nx
import numpy as np
from django.conf import settings

from mapevo.exceptions import StructuralInconsistency
from transforms.rees import coset_structure
from transforms.transformation import compose
from .linalg import stationary_law
from .measure import RationalMeasure, convolve, measure_products, mixture, uniform

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CyclicLimit:
    p: int
    eta: RationalMeasure
    cycle: tuple
    nu: RationalMeasure
    eta_L: RationalMeasure
    eta_R: RationalMeasure

    @property
    def eta_equals_nu(self):
        return self.eta == self.nu


def left_states(rd):
    return sorted({compose(l, g) for l in rd.L for g in rd.G})


def right_states(rd):
    return sorted({compose(g, r) for g in rd.G for r in rd.R})


def left_stationary(mu, rd):
    """beta on Ke with mu beta = beta; equals eta^L omega_G."""
    states = left_states(rd)
    pi = stationary_law(states, lambda z: [(compose(f, z), w) for f, w in mu.items()])
    return RationalMeasure(pi)


def right_stationary(mu, rd):
    """beta' on eK with beta' mu = beta'; equals omega_G eta^R."""
    states = right_states(rd)
    pi = stationary_law(states, lambda z: [(compose(z, f), w) for f, w in mu.items()])
    return RationalMeasure(pi)


def left_factor(rd, beta):
    return beta.pushforward(lambda z: rd.project(z)[0])


def right_factor(rd, beta):
    return beta.pushforward(lambda z: rd.project(z)[2])


def left_chain_graph(mu, rd):
    graph = nx.DiGraph()
    states = left_states(rd)
    graph.add_nodes_from(states)
    for z in states:
        for f in mu.generators:
            graph.add_edge(z, compose(f, z))
    return graph


def period_and_H(mu, rd):
    """(p, H, gamma) from the cyclic classes of the chain z -> f z on Ke."""
    graph = left_chain_graph(mu, rd)
    if not nx.is_strongly_connected(graph):
        raise StructuralInconsistency("the chain on Ke is not irreducible")
    level = nx.single_source_shortest_path_length(graph, rd.e)
    p = 0
    for u, v in graph.edges:
        p = gcd(p, abs(level[u] + 1 - level[v]))
    # a strongly connected graph with at least one edge has p >= 1
    p = max(p, 1)

    classes = [[] for _ in range(p)]
    for z, depth in level.items():
        classes[depth % p].append(z)
    sizes = {len(c) for c in classes}
    if len(sizes) != 1:
        raise StructuralInconsistency(f"cyclic classes have unequal sizes {sorted(sizes)}")

    H = sorted({rd.project(z)[1] for z in classes[0]})
    if p == 1:
        gamma = rd.e
    else:
        successors = sorted({rd.project(z)[1] for z in classes[1]})
        gamma = next((g for g in successors if g.power(p) == rd.e), None)
        if gamma is None:
            raise StructuralInconsistency(f"no element of order {p} in the successor coset")
    if len(rd.G) != p * len(H):
        raise StructuralInconsistency(f"p = {p} is not the index of H (|G| = {len(rd.G)}, |H| = {len(H)})")
    logger.info(f"period {p}, |H| = {len(H)}, gamma = {gamma}")
    return p, H, gamma


def assemble_limits(mu, rd, eta_L, eta_R):
    """The cycle eta^L gamma^k omega_H eta^R, k < p, and nu; every identity is checked."""
    p = rd.p
    omega_H = uniform(rd.H)
    cycle = tuple(measure_products([eta_L, rd.gamma_power(k), omega_H, eta_R]) for k in range(p))
    nu = mixture([(Fraction(1, p), c) for c in cycle])
    eta = cycle[0]

    def require(condition, message):
        if not condition:
            raise StructuralInconsistency(message)

    require(convolve(eta, eta) == eta, "eta is not idempotent")
    for k in range(p):
        require(convolve(mu, cycle[k]) == cycle[(k + 1) % p], f"mu does not shift the cycle at k = {k}")
    require(convolve(nu, nu) == nu, "nu is not idempotent")
    require(convolve(mu, nu) == nu and convolve(nu, mu) == nu, "nu is not absorbing for mu")
    require(set(nu.support()) == set(rd.K), "supp(nu) is not the kernel")
    LHR = {compose(compose(l, h), r) for l in rd.L for h in rd.H for r in rd.R}
    require(set(eta.support()) == LHR, "supp(eta) is not L H R")
    require(nu == measure_products([eta_L, uniform(rd.G), eta_R]), "nu != eta^L omega_G eta^R")
    supports = [set(c.support()) for c in cycle]
    for i in range(p):
        for j in range(i + 1, p):
            require(not supports[i] & supports[j], f"cycle points {i} and {j} overlap")
    return CyclicLimit(p=p, eta=eta, cycle=cycle, nu=nu, eta_L=eta_L, eta_R=eta_R)


def analyze_limits(mu, rd):
    """Run the whole exact pipeline; returns the Rees data with its cycle filled in."""
    beta = left_stationary(mu, rd)
    beta_right = right_stationary(mu, rd)
    eta_L = left_factor(rd, beta)
    eta_R = right_factor(rd, beta_right)
    if beta != measure_products([eta_L, uniform(rd.G)]):
        raise StructuralInconsistency("left fixed point is not eta^L omega_G")
    if beta_right != measure_products([uniform(rd.G), eta_R]):
        raise StructuralInconsistency("right fixed point is not omega_G eta^R")
    p, H, gamma = period_and_H(mu, rd)
    rd = rd.with_cycle(H, gamma, p)
    coset_structure(rd)
    return rd, assemble_limits(mu, rd, eta_L, eta_R)


# float oracle

@dataclass
class OracleResult:
    converged: bool
    p_est: int
    iterations: int
    eta_est: dict
    nu_est: dict

    def distance_to(self, measure, estimate='eta'):
        values = self.eta_est if estimate == 'eta' else self.nu_est
        keys = set(values) | set(measure.weights)
        return max(abs(values.get(z, 0.0) - float(measure[z])) for z in keys)


def _left_tables(mu, S):
    positions = [S.index[f] for f in mu.generators]
    weights = np.array([float(w) for _, w in mu.items()])
    # S is generated by supp(mu), so each support point has a left table
    tables = [np.array(S.left[S.generators.index(i)]) for i in positions]
    return positions, weights, tables


def _power_step(cur, weights, tables, size):
    out = np.zeros(size)
    for w, table in zip(weights, tables):
        out += w * np.bincount(table, weights=cur, minlength=size)
    return out


def float_limit_oracle(mu, S, max_lag, tol=None, max_iter=None):
    """Iterate mu^n in double precision until mu^n and mu^(n-q) agree within tol."""
    tol = settings.MAPEVO_ORACLE_TOL if tol is None else tol
    max_iter = settings.MAPEVO_ORACLE_MAX_ITER if max_iter is None else max_iter
    size = len(S)
    positions, weights, tables = _left_tables(mu, S)

    cur = np.zeros(size)
    cur[positions] = weights
    history = deque([cur], maxlen=max_lag + 1)
    for n in range(2, max_iter + 1):
        cur = _power_step(cur, weights, tables, size)
        for q in range(1, min(max_lag, len(history)) + 1):
            if np.max(np.abs(cur - history[-q])) < tol:
                history.append(cur)
                # history[-1] is mu^n; the cycle point with exponent divisible by q is eta
                eta_vec = history[-1 - (n % q)]
                nu_vec = sum(history[-j] for j in range(1, q + 1)) / q
                logger.info(f"oracle: mu^n repeats from n = {n - q} with lag {q}")
                return OracleResult(True, q, n - q, _as_dict(S, eta_vec), _as_dict(S, nu_vec))
        history.append(cur)
    logger.warning(f"float oracle did not converge in {max_iter} iterations")
    return OracleResult(False, 0, max_iter, _as_dict(S, cur), _as_dict(S, cur))


def cesaro_average(mu, S, n):
    """(1/n) sum_{k=1..n} mu^k in double precision."""
    size = len(S)
    positions, weights, tables = _left_tables(mu, S)
    cur = np.zeros(size)
    cur[positions] = weights
    total = cur.copy()
    for _ in range(n - 1):
        cur = _power_step(cur, weights, tables, size)
        total += cur
    return _as_dict(S, total / n)


def sup_distance(values, measure):
    keys = set(values) | set(measure.weights)
    return max(abs(values.get(z, 0.0) - float(measure[z])) for z in keys)


def _as_dict(S, vec):
    return {S.elements[i]: float(v) for i, v in enumerate(vec) if v != 0.0}
