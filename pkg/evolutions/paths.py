# evolutions/paths.py
"""Seeded m_mu-particle evolutions X_k = N_k X_(k-1) on a window [k_min, k_max].

The window stands in for the infinite past: X_(k_min) is drawn from the
stationary law (or from Lambda_(k_min) of a family) so the window has the law
of the two-sided process restricted to it. Every X_k is factored as
X_L X_G X_W with X_G = X_C U_H, X_C in C and U_H in H.
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from cliques.cliques import family_law, project_tuple
from mapevo.exceptions import InputError, MeasureError
from transforms.transformation import apply_tuple, compose

logger = logging.getLogger(__name__)

SEED_LIMIT = 2**64


def make_rng(seed, replication=0):
    """Philox stream for one replication: keyed by seed xor replication index."""
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < SEED_LIMIT:
        raise InputError(f"seed must be an integer in [0, 2^64), got {seed!r}")
    if not 0 <= replication < SEED_LIMIT:
        raise InputError(f"replication index {replication} is out of range")
    return np.random.Generator(np.random.Philox(seed ^ replication))


def draw(rng, measure):
    """One point of an exact measure."""
    points = measure.support()
    if len(points) == 1:
        return points[0]
    probs = np.array([float(measure[x]) for x in points])
    return points[rng.choice(len(points), p=probs / probs.sum())]


def draw_uniform(rng, points):
    return points[rng.integers(len(points))]


@dataclass
class EvolutionPath:
    k_min: int
    k_max: int
    seed: int
    replication: int = 0
    # N[j] drives step k_min + j; N[0] is unused (None)
    N: list = field(default_factory=list)
    X: list = field(default_factory=list)
    X_L: list = field(default_factory=list)
    X_G: list = field(default_factory=list)
    X_C: list = field(default_factory=list)
    U_H: list = field(default_factory=list)
    X_W: list = field(default_factory=list)
    M_G: list = field(default_factory=list)
    Y_C: object = None
    Z_W: tuple = None
    start_coset: int = 0

    def __len__(self):
        return len(self.X)

    def index(self, k):
        if not self.k_min <= k <= self.k_max:
            raise InputError(f"time {k} is outside [{self.k_min}, {self.k_max}]")
        return k - self.k_min

    def times(self):
        return range(self.k_min, self.k_max + 1)

    def at(self, k):
        """(N_k, X_k, X_L, X_G, X_C, U_H, X_W, M_G) at time k."""
        i = self.index(k)
        return (self.N[i], self.X[i], self.X_L[i], self.X_G[i], self.X_C[i],
                self.U_H[i], self.X_W[i], self.M_G[i])


def _check_window(k_min, k_max):
    if isinstance(k_min, bool) or isinstance(k_max, bool) or not (isinstance(k_min, int) and isinstance(k_max, int)):
        raise InputError("k_min and k_max must be integers")
    if k_min >= k_max:
        raise InputError(f"k_min = {k_min} must be smaller than k_max = {k_max}")


def _run(analysis, start, k_min, k_max, seed, replication, rng, start_coset=0):
    mu, rd, cd = analysis.law, analysis.rd, analysis.cd
    steps = k_max - k_min
    generators = mu.support()
    probs = np.array([float(w) for _, w in mu.items()])
    choices = rng.choice(len(generators), size=steps, p=probs / probs.sum())

    path = EvolutionPath(k_min=k_min, k_max=k_max, seed=seed, replication=replication,
                         start_coset=start_coset)
    path.N.append(None)
    path.X.append(start)
    for j in choices:
        N = generators[j]
        path.N.append(N)
        path.X.append(apply_tuple(N, path.X[-1]))

    previous = None
    for x in path.X:
        l, a, w = project_tuple(cd, x)
        c, u = rd.split(a)
        path.X_L.append(l)
        path.X_G.append(a)
        path.X_C.append(c)
        path.U_H.append(u)
        path.X_W.append(w)
        path.M_G.append(None if previous is None else compose(a, rd.inverse(previous)))
        previous = a
    path.Y_C = compose(rd.gamma_power(-k_min), path.X_C[0])
    path.Z_W = path.X_W[0]
    return path


def sample_stationary(analysis, Lambda_W, k_min, k_max, seed, replication=0):
    """X_(k_min) ~ eta^L omega_G Lambda_W by three independent draws, then N_k iid mu."""
    _check_window(k_min, k_max)
    rd, limits, cd = analysis.rd, analysis.limits, analysis.cd
    if Lambda_W.on_transformations or any(w not in cd.W for w in Lambda_W.support()):
        raise MeasureError("Lambda_W must be a law on W")
    rng = make_rng(seed, replication)
    l = draw(rng, limits.eta_L)
    a = draw_uniform(rng, rd.G)
    w = draw(rng, Lambda_W)
    start = apply_tuple(compose(l, a), w)
    return _run(analysis, start, k_min, k_max, seed, replication, rng)


def sample_nonstationary(analysis, family, k_min, k_max, seed, replication=0):
    """i ~ c, w ~ Lambda^i_W, X_(k_min) ~ eta^L gamma^(k_min + i) omega_H delta_w."""
    _check_window(k_min, k_max)
    rd, limits, cd = analysis.rd, analysis.limits, analysis.cd
    if family.p != rd.p:
        raise InputError(f"a family for p = {rd.p} needs {rd.p} coefficients, got {family.p}")
    rng = make_rng(seed, replication)
    weights = np.array([float(c) for c in family.coefficients])
    i = int(rng.choice(family.p, p=weights / weights.sum()))
    w = draw(rng, family.conditional_laws[i])
    if w not in cd.W:
        raise MeasureError("conditional laws of a family must live on W")
    l = draw(rng, limits.eta_L)
    u = draw_uniform(rng, rd.H)
    start = apply_tuple(compose(l, compose(rd.gamma_power(k_min + i), u)), w)
    return _run(analysis, start, k_min, k_max, seed, replication, rng, start_coset=i)


def start_law(analysis, family, k):
    """Exact law of X_k under a family (the stationary law when the family is constant)."""
    return family_law(analysis.rd, analysis.limits, family, k)
