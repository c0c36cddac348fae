# evolutions/verification.py
"""Replicated simulations and the checks run on them.

Each replication r is an independent path on [k_min, k_max] driven by the
Philox stream seed ^ r. The remote past is read off a path as the pair
(Y_C, Z_W) and the third noise at time k as U_H_k; the driving noise near k
is the window (N_(k-w+1), ..., N_k), labelled by support positions.
"""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from cliques.cliques import InvariantFamily, mono_marginal, stationary_family
from mapevo.exceptions import InputError
from measures.measure import format_rational
from transforms.transformation import compose, format_tuple
from .checks import (PATH_CHECKS, driven_factors, estimate_Te, path_failures, te_tail,
                     verify_factorization)
from .paths import make_rng, sample_nonstationary, sample_stationary, start_law
from .stats import Check, VerificationReport, exact_check, goodness_of_fit, independence

logger = logging.getLogger(__name__)

MIN_REPLICATIONS = 1000


@dataclass
class VerificationConfig:
    replications: int = None
    seed: int = None
    alpha: float = None
    k_min: int = None
    k_max: int = None
    k: int = None
    window: int = None
    mode: str = 'stationary'
    Lambda_W: object = None
    family: InvariantFamily = None
    mixing_lengths: tuple = None
    path_steps: int = None

    def __post_init__(self):
        defaults = {
            'replications': settings.MAPEVO_REPLICATIONS,
            'seed': settings.MAPEVO_SEED,
            'alpha': settings.MAPEVO_ALPHA,
            'k_min': settings.MAPEVO_K_MIN,
            'k_max': settings.MAPEVO_K_MAX,
            'window': settings.MAPEVO_WINDOW,
            'mixing_lengths': settings.MAPEVO_MIXING_LENGTHS,
            'path_steps': settings.MAPEVO_PATH_STEPS,
        }
        for name, value in defaults.items():
            if getattr(self, name) is None:
                setattr(self, name, value)
        if self.k is None:
            self.k = self.k_max
        self.validate()

    def validate(self):
        for name in ('replications', 'window', 'path_steps'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InputError(f"{name}: expected a positive integer, got {value!r}")
        if not 0 < self.alpha < 1:
            raise InputError(f"alpha: expected a level in (0, 1), got {self.alpha!r}")
        if self.mode not in ('stationary', 'nonstationary'):
            raise InputError(f"mode: expected 'stationary' or 'nonstationary', got {self.mode!r}")
        if self.mode == 'nonstationary' and self.family is None:
            raise InputError("mode 'nonstationary' needs a family")
        if self.k_min >= self.k_max:
            raise InputError(f"k_min = {self.k_min} must be smaller than k_max = {self.k_max}")
        if not self.k_min + self.window <= self.k <= self.k_max:
            raise InputError(f"k = {self.k} must lie in [k_min + window, k_max] = "
                             f"[{self.k_min + self.window}, {self.k_max}]")
        make_rng(self.seed)

    def family_for(self, analysis):
        if self.mode == 'nonstationary':
            return self.family
        return stationary_family(analysis.rd, self.lambda_W(analysis))

    def lambda_W(self, analysis):
        return self.Lambda_W if self.Lambda_W is not None else analysis.default_lambda_W

    def to_json(self):
        data = {
            'mode': self.mode, 'replications': self.replications, 'seed': self.seed,
            'alpha': self.alpha, 'k_min': self.k_min, 'k_max': self.k_max, 'k': self.k,
            'window': self.window,
        }
        if self.Lambda_W is not None:
            data['Lambda_W'] = {format_tuple(w): format_rational(q) for w, q in self.Lambda_W.items()}
        if self.family is not None:
            data['family'] = self.family.to_json()
        return data


def sample_path(analysis, config, replication, k_min=None, k_max=None):
    k_min = config.k_min if k_min is None else k_min
    k_max = config.k_max if k_max is None else k_max
    if config.mode == 'nonstationary':
        return sample_nonstationary(analysis, config.family, k_min, k_max, config.seed, replication)
    return sample_stationary(analysis, config.lambda_W(analysis), k_min, k_max, config.seed, replication)


def simulate(analysis, config):
    """One path per replication."""
    paths = [sample_path(analysis, config, r) for r in range(config.replications)]
    logger.info(f"simulated {len(paths)} paths on [{config.k_min}, {config.k_max}]")
    return paths


def _window_label(path, k, width, position):
    i = path.index(k)
    return tuple(position[path.N[j]] for j in range(i - width + 1, i + 1))


def exact_path_checks(analysis, paths, config):
    """Path invariants on every replication, plus the factorization on one long path."""
    totals = dict.fromkeys(PATH_CHECKS, 0)
    cases = 0
    for path in paths:
        failures, size = path_failures(path, analysis)
        cases += size
        for name, count in failures.items():
            totals[name] += count
    checks = [exact_check(name, totals[name], cases) for name in PATH_CHECKS]

    long_path = sample_path(analysis, config, 0, k_min=0, k_max=config.path_steps)
    for name, count in path_failures(long_path, analysis)[0].items():
        checks.append(exact_check(f"long path: {name}", count, len(long_path)))
    stride = max(1, config.path_steps // 10)
    for k in range(0, config.path_steps + 1, stride):
        check = verify_factorization(long_path, k, analysis)
        check.name = f"long path: {check.name}"
        checks.append(check)
    return checks


def verify_third_noise(analysis, config):
    """U_H_k uniform on H and independent of the N-window and of (Y_C, Z_W)."""
    if config.replications < MIN_REPLICATIONS:
        raise InputError(f"replications: at least {MIN_REPLICATIONS} are needed, got {config.replications}")
    rd, cd = analysis.rd, analysis.cd
    alpha, seed, k = config.alpha, config.seed, config.k
    paths = simulate(analysis, config)
    report = VerificationReport('third noise')
    for check in exact_path_checks(analysis, paths, config):
        report.add(check)

    position = {f: i for i, f in enumerate(analysis.law.support())}
    idx = [p.index(k) for p in paths]
    U = [p.U_H[i] for p, i in zip(paths, idx)]
    remote = [(p.Y_C, p.Z_W) for p in paths]
    windows = [_window_label(p, k, config.window, position) for p in paths]
    X_k = [p.X[i] for p, i in zip(paths, idx)]

    uniform_H = {u: 1 for u in rd.H}
    report.add(goodness_of_fit(f"U_H_{k} uniform on H", U, uniform_H, alpha, seed))

    family = config.family_for(analysis)
    c_law = {rd.C[i]: family.coefficients[i] for i in range(rd.p)}
    joint = {(rd.C[i], w): family.coefficients[i] * family.conditional_laws[i][w]
             for i in range(rd.p) for w in cd.W}
    if config.mode == 'stationary':
        report.add(goodness_of_fit("Y_C uniform on C", [y for y, _ in remote], c_law, alpha, seed))
        report.add(goodness_of_fit("(Y_C, Z_W) ~ omega_C x Lambda_W", remote, joint, alpha, seed))
        report.add(independence("Y_C independent of Z_W", [y for y, _ in remote],
                                [z for _, z in remote], alpha, seed))
    else:
        report.add(goodness_of_fit("Y_C ~ c", [y for y, _ in remote], c_law, alpha, seed))
        report.add(goodness_of_fit("(Y_C, Z_W) ~ c_i Lambda^i_W", remote, joint, alpha, seed))

    report.add(independence(f"U_H_{k} independent of (Y_C, Z_W)", U, remote, alpha, seed))
    report.add(independence(f"U_H_{k} independent of N-window (width {config.window})",
                            U, windows, alpha, seed))
    report.add(independence(f"(Y_C, Z_W) independent of N-window (width {config.window})",
                            remote, windows, alpha, seed))

    marginal = start_law(analysis, family, k)
    report.add(goodness_of_fit(f"law of X_{k}", X_k, dict(marginal.items()), alpha, seed))

    word = analysis.word
    lags = []
    for p in paths:
        t = estimate_Te(p, k, word)
        lags.append(None if t is None else k - t)
    seen = [lag for lag in lags if lag is not None]
    report.extras['Te'] = {
        'word': [str(f) for f in word],
        'observed': len(seen),
        'missing': len(lags) - len(seen),
        'tail': [[t, s] for t, s in te_tail(lags, k - config.k_min)],
    }
    report.extras['config'] = config.to_json()
    if config.mode == 'nonstationary':
        report.extras['joint_table'] = _joint_table(remote, joint)
    return report


def _joint_table(remote, joint):
    total = len(remote)
    counts = {}
    for pair in remote:
        counts[pair] = counts.get(pair, 0) + 1
    return [{'Y_C': str(y), 'Z_W': format_tuple(w), 'expected': format_rational(q),
             'observed': counts.get((y, w), 0) / total}
            for (y, w), q in sorted(joint.items(), key=repr)]


def event_table(analysis, Lambda_W):
    """{v: [(l, u), ...]}: X^1_k = v exactly when X_L_k = l and X_G_k w^1 = u for a listed pair."""
    rd = analysis.rd
    table = {}
    for w in Lambda_W.support():
        for a in rd.G:
            u = a(w[0])
            for l in rd.L:
                table.setdefault(l(u), set()).add((l, u))
    return {v: sorted(pairs) for v, pairs in sorted(table.items())}


def mono_event_failures(analysis, paths, k, table):
    """Paths whose first particle at k is not l(a w^1) for the driven factors (l, a)."""
    failures = 0
    for path in paths:
        l, a = driven_factors(path, k, analysis)
        u = a(path.Z_W[0])
        v = path.X[path.index(k)][0]
        if l(u) != v or (l, u) not in table.get(v, ()):
            failures += 1
    return failures


def verify_mono_projection(analysis, config):
    """The first particle X^1_k against the factors (X_L_k, X_G_k w^1).

    On every replication X^1_k = X_L_k(X_G_k w^1) must hold for the factors
    driven forward from k_min, and their pair must be listed in the event
    table. The table also decides whether X_G_k w^1 is a function of X^1_k,
    and the law of X^1_k is tested against the first marginal of the
    invariant law.
    """
    if config.mode != 'stationary':
        raise InputError("the mono-particle projection is checked on stationary evolutions")
    alpha, seed, k = config.alpha, config.seed, config.k
    Lambda_W = config.lambda_W(analysis)
    table = event_table(analysis, Lambda_W)
    paths = simulate(analysis, config)
    report = VerificationReport('mono-particle projection')

    failures = mono_event_failures(analysis, paths, k, table)
    report.add(exact_check(f"event identities at k = {k}", failures, len(paths)))
    firsts = [(path.X[path.index(k)][0],) for path in paths]

    measurable = all(len({u for _, u in pairs}) == 1 for pairs in table.values())
    report.add(Check(name="X_G_k w^1 is a function of X^1_k", kind='exact', passed=True,
                     gating=False, statistic=int(measurable),
                     note='measurable' if measurable else 'not measurable for this law'))

    lam = analysis.invariant_law(Lambda_W)
    marginal = mono_marginal(lam)
    report.add(goodness_of_fit(f"law of X^1_{k} vs lambda", firsts, dict(marginal.items()), alpha, seed))
    report.extras['events'] = {
        str(v + 1): [{'X_L': str(l), 'u': u + 1} for l, u in pairs] for v, pairs in table.items()}
    report.extras['lambda'] = [format_rational(marginal[(v,)]) for v in range(analysis.law.n)]
    report.extras['measurable'] = measurable
    report.extras['config'] = config.to_json()
    return report


def verify_mixing(analysis, config):
    """(f N'_1 ... N'_n h)^H for fixed kernel elements f, h approaches omega_H as n grows.

    Each length gets a chi-square test; only the longest one gates the run.
    """
    rd, K = analysis.rd, analysis.K
    left, right = K[0], K[-1]
    lengths = sorted(config.mixing_lengths)
    generators = analysis.law.support()
    probs = np.array([float(w) for _, w in analysis.law.items()])
    probs /= probs.sum()
    report = VerificationReport('mixing')
    uniform_H = {u: 1 for u in rd.H}
    for n in lengths:
        samples = []
        for r in range(config.replications):
            rng = make_rng(config.seed, r)
            z = right
            for j in reversed(rng.choice(len(generators), size=n, p=probs)):
                N = generators[j]
                z = compose(N, z)
            z = compose(left, z)
            samples.append(rd.split(rd.project(z)[1])[1])
        check = goodness_of_fit(f"H-part after {n} steps uniform on H", samples, uniform_H,
                                config.alpha, config.seed, gating=n == lengths[-1])
        report.add(check)
    report.extras['f'] = str(left)
    report.extras['h'] = str(right)
    report.extras['lengths'] = list(lengths)
    return report