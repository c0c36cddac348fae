# evolutions/stats.py
"""Named checks and the chi-square tests behind the statistical ones."""
import logging
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

logger = logging.getLogger(__name__)


@dataclass
class Check:
    name: str
    kind: str                 # 'exact' or 'statistical'
    passed: bool
    statistic: float = None
    threshold: float = None
    p_value: float = None
    dof: int = None
    alpha: float = None
    replications: int = None
    seed: int = None
    gating: bool = True       # non-gating checks are reported but never fail a run
    note: str = ''

    def to_json(self):
        data = asdict(self)
        for key in ('statistic', 'threshold', 'p_value'):
            if data[key] is not None:
                data[key] = float(data[key])
        return data


@dataclass
class VerificationReport:
    name: str
    checks: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def add(self, check):
        self.checks.append(check)
        if not check.passed:
            level = logging.WARNING if not check.gating else logging.ERROR
            logger.log(level, f"{self.name}: check '{check.name}' failed {check.note}".rstrip())
        return check

    def failed(self, kind):
        return [c for c in self.checks if c.kind == kind and c.gating and not c.passed]

    @property
    def passed(self):
        return not self.failed('exact') and not self.failed('statistical')

    @property
    def exit_code(self):
        if self.failed('exact'):
            return 2
        if self.failed('statistical'):
            return 1
        return 0

    def to_json(self):
        return {
            'name': self.name,
            'passed': self.passed,
            'checks': [c.to_json() for c in self.checks],
            **self.extras,
        }


def exact_check(name, failures, total, note=''):
    """Exact pass/fail over `total` cases with `failures` violations."""
    detail = f"{failures} of {total} cases violate it" if failures else note
    return Check(name=name, kind='exact', passed=failures == 0,
                 statistic=failures, threshold=0, note=detail)


def _degenerate(name, alpha, replications, seed, note, gating=True):
    logger.warning(f"{name}: {note}; check passes vacuously")
    return Check(name=name, kind='statistical', passed=True, alpha=alpha,
                 replications=replications, seed=seed, gating=gating, note=f"vacuous: {note}")


def goodness_of_fit(name, samples, expected, alpha, seed=None, gating=True):
    """Chi-square test of hashable samples against an exact law {category: prob}."""
    counts = Counter(samples)
    total = sum(counts.values())
    support = [x for x in sorted(expected, key=repr) if expected[x] > 0]
    stray = [x for x in counts if x not in support]
    if stray:
        return Check(name=name, kind='statistical', passed=False, alpha=alpha,
                     replications=total, seed=seed, gating=gating,
                     note=f"{sum(counts[x] for x in stray)} samples outside the support")
    if len(support) < 2:
        return _degenerate(name, alpha, total, seed, "a single category", gating)
    observed = np.array([counts.get(x, 0) for x in support], dtype=float)
    probs = np.array([float(expected[x]) for x in support])
    result = stats.chisquare(observed, f_exp=probs / probs.sum() * total)
    dof = len(support) - 1
    return Check(name=name, kind='statistical', passed=bool(result.pvalue >= alpha),
                 statistic=result.statistic, threshold=stats.chi2.ppf(1 - alpha, dof),
                 p_value=result.pvalue, dof=dof, alpha=alpha, replications=total,
                 seed=seed, gating=gating)


def independence(name, left, right, alpha, seed=None, gating=True):
    """Chi-square contingency test between two paired sequences of labels."""
    rows = sorted(set(left), key=repr)
    cols = sorted(set(right), key=repr)
    total = len(left)
    if len(rows) < 2 or len(cols) < 2:
        return _degenerate(name, alpha, total, seed,
                           f"{len(rows)} x {len(cols)} table", gating)
    row_of = {x: i for i, x in enumerate(rows)}
    col_of = {y: j for j, y in enumerate(cols)}
    table = np.zeros((len(rows), len(cols)))
    for x, y in zip(left, right):
        table[row_of[x], col_of[y]] += 1
    statistic, p_value, dof, _ = stats.chi2_contingency(table, correction=False)
    return Check(name=name, kind='statistical', passed=bool(p_value >= alpha),
                 statistic=statistic, threshold=stats.chi2.ppf(1 - alpha, dof),
                 p_value=p_value, dof=int(dof), alpha=alpha, replications=total,
                 seed=seed, gating=gating)
