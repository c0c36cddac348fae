# evolutions/checks.py
"""Exact per-path checks of the factor processes, and the coupling time T^e_k."""
import logging

from mapevo.exceptions import InputError
from transforms.transformation import apply_tuple, compose
from .stats import exact_check

logger = logging.getLogger(__name__)

PATH_CHECKS = (
    'recursion X_k = N_k X_(k-1)',
    'X_k in L G W',
    'X_W constant',
    'X_C_k = gamma^k Y_C',
    'M_G_k = (N_k X_L_(k-1))^G',
    '(M_G_k)^C = gamma',
)


def path_failures(path, analysis):
    """Failure counts per named check, and the number of cases examined."""
    rd, cd = analysis.rd, analysis.cd
    failures = dict.fromkeys(PATH_CHECKS, 0)
    for i, k in enumerate(path.times()):
        x = path.X[i]
        if x not in cd:
            failures['X_k in L G W'] += 1
        if path.X_W[i] != path.Z_W:
            failures['X_W constant'] += 1
        if path.X_C[i] != compose(rd.gamma_power(k), path.Y_C):
            failures['X_C_k = gamma^k Y_C'] += 1
        if i == 0:
            continue
        N = path.N[i]
        if apply_tuple(N, path.X[i - 1]) != x:
            failures['recursion X_k = N_k X_(k-1)'] += 1
        M = path.M_G[i]
        if M != rd.project(compose(N, path.X_L[i - 1]))[1]:
            failures['M_G_k = (N_k X_L_(k-1))^G'] += 1
        if rd.split(M)[0] != rd.gamma_power(1):
            failures['(M_G_k)^C = gamma'] += 1
    return failures, len(path)


def check_path(path, analysis):
    """The per-path invariants as exact checks."""
    failures, total = path_failures(path, analysis)
    return [exact_check(name, failures[name], total) for name in PATH_CHECKS]


def verify_factorization(path, k, analysis):
    """X_j = X_L_j (M^G_(k,j))^-1 (gamma^k Y_C) U_H_k Z_W for every j <= k in the window.

    M^G_(k,j) = M_G_k M_G_(k-1) ... M_G_(j+1), the identity e when j = k.
    """
    rd = analysis.rd
    i_k = path.index(k)
    phase = compose(compose(rd.gamma_power(k), path.Y_C), path.U_H[i_k])
    M = rd.e
    failures = 0
    for i in range(i_k, -1, -1):
        if i < i_k:
            M = compose(M, path.M_G[i + 1])
        rebuilt = apply_tuple(compose(compose(path.X_L[i], rd.inverse(M)), phase), path.Z_W)
        if rebuilt != path.X[i]:
            failures += 1
    return exact_check(f'factorization at k = {k}', failures, i_k + 1)


def driven_factors(path, k, analysis):
    """(X_L_k, X_G_k) rebuilt from the factors at k_min and the noise alone.

    X_L_k = (N_k X_L_(k-1))^L and X_G_k = (N_k X_L_(k-1))^G X_G_(k-1); the
    tuples X_j are never projected after k_min.
    """
    rd = analysis.rd
    l, a = path.X_L[0], path.X_G[0]
    for i in range(1, path.index(k) + 1):
        l, M, _ = rd.project(compose(path.N[i], l))
        a = compose(M, a)
    return l, a


def estimate_Te(path, k, word):
    """Largest l < k - n with N_(l+n) ... N_(l+1) = e, n = len(word); None if unseen.

    `word` is a witness f_1, ..., f_n with f_n ... f_1 = e over supp(mu); only
    its length enters the search.
    """
    n = len(word)
    if n == 0:
        raise InputError("a witness word for e is needed to look for T^e")
    target = word[0]
    for f in word[1:]:
        target = compose(f, target)
    i_k = path.index(k)
    # N[j] is defined for j >= 1, so the earliest block starts at l = k_min
    for l in range(k - n - 1, path.k_min - 1, -1):
        start = l - path.k_min + 1
        if start + n - 1 > i_k:
            continue
        product = path.N[start]
        for j in range(start + 1, start + n):
            product = compose(path.N[j], product)
        if product == target:
            return l
    return None


def te_tail(lags, horizon):
    """Empirical P(k - T^e_k > t) for t = 0..horizon; unseen T^e counts as beyond the window."""
    total = len(lags)
    if not total:
        return []
    return [(t, sum(1 for lag in lags if lag is None or lag > t) / total)
            for t in range(horizon + 1)]
