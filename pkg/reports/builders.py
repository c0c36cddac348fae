# reports/builders.py
"""JSON reports.

Everything a command prints is built here as plain JSON data; the text
format is a rendering of the same dict. Rationals are "num/den" strings,
maps are 1-based image lists like "[4,2,2,4,5]" and tuples read "(2,4,5)".
"""
import json
import logging
from math import factorial

from django.utils import timezone

from cliques.cliques import deadlocked_sets, mono_marginal, project_tuple
from evolutions.stats import Check, VerificationReport, exact_check
from mapevo import __version__
from measures.limits import cesaro_average, sup_distance
from measures.measure import format_rational, marginal_transition_matrix
from transforms.transformation import format_tuple

logger = logging.getLogger(__name__)

ORACLE_TOLERANCE = 1e-9
CESARO_STEPS = (1000, 10000)
CESARO_TOLERANCE = 1e-3
PROJECTION_SAMPLE = 24


def _maps(fs):
    return [str(f) for f in fs]


def _points(x):
    return [xi + 1 for xi in x]


def semigroup_section(analysis):
    S = analysis.S
    return {
        'size': len(S),
        'kernel_size': len(analysis.K),
        'm_mu': analysis.cd.m_mu,
        'idempotents': len(analysis.idempotents),
        'generators': _maps(S.generator_maps),
        'word_for_e': _maps(analysis.word),
    }


def rees_section(analysis):
    rd = analysis.rd
    return {
        'e': str(rd.e),
        'L': _maps(rd.L),
        'G': _maps(rd.G),
        'R': _maps(rd.R),
        'H': _maps(rd.H),
        'gamma': str(rd.gamma),
        'p': rd.p,
        'H_equals_G': set(rd.H) == set(rd.G),
        'cosets': [_maps(coset) for coset in analysis.cosets],
    }


def oracle_section(analysis):
    oracle, limits = analysis.oracle, analysis.limits
    if oracle is None:
        return None
    return {
        'converged': oracle.converged,
        'p_est': oracle.p_est,
        'iterations': oracle.iterations,
        'eta_distance': oracle.distance_to(limits.eta),
        'nu_distance': oracle.distance_to(limits.nu, estimate='nu'),
    }


def cesaro_section(analysis):
    """Sup-norm distance of the running average of mu^k to nu."""
    distances = [sup_distance(cesaro_average(analysis.law, analysis.S, n), analysis.limits.nu)
                 for n in CESARO_STEPS]
    return {'steps': list(CESARO_STEPS), 'distance': distances}


def limits_section(analysis, cesaro=None):
    limits = analysis.limits
    return {
        'p': limits.p,
        'eta_L': limits.eta_L.as_strings(),
        'eta_R': limits.eta_R.as_strings(),
        'H': _maps(analysis.rd.H),
        'gamma': str(analysis.rd.gamma),
        'eta': limits.eta.as_strings(),
        'nu': limits.nu.as_strings(),
        'eta_equals_nu': limits.eta_equals_nu,
        'cycle': [point.as_strings() for point in limits.cycle],
        'oracle': oracle_section(analysis),
        'cesaro': cesaro,
    }


def cliques_section(analysis):
    cd = analysis.cd
    projections = {}
    for x in cd.W_mu[:PROJECTION_SAMPLE]:
        l, a, w = project_tuple(cd, x)
        projections[format_tuple(x)] = [str(l), str(a), format_tuple(w)]
    # deadlocked m_mu-sets outside the F-cliques are not part of W_mu
    deadlocked = deadlocked_sets(analysis.law.n, cd.m_mu, analysis.pairs)
    return {
        'm_mu': cd.m_mu,
        'f_cliques': [_points(c) for c in cd.f_cliques],
        'W_mu_size': len(cd.W_mu),
        'deadlocked_sets': [_points(c) for c in deadlocked],
        'deadlocked_tuples_size': len(deadlocked) * factorial(cd.m_mu),
        'W': [_points(w) for w in cd.W],
        'example_projections': projections,
    }


def invariant_law_section(analysis, Lambda_W=None):
    Lambda_W = analysis.default_lambda_W if Lambda_W is None else Lambda_W
    lam = analysis.invariant_law(Lambda_W)
    marginal = mono_marginal(lam)
    return {
        'Lambda_W': Lambda_W.as_strings(),
        'law': lam.as_strings(),
        'lambda': [format_rational(marginal[(v,)]) for v in range(analysis.law.n)],
        'transition_matrix': [[format_rational(q) for q in row]
                               for row in marginal_transition_matrix(analysis.law)],
    }


def structure_report(analysis, cesaro=None):
    """Exact pipeline cross-checked against the float oracle and the running average."""
    report = VerificationReport('structure')
    oracle = analysis.oracle
    if oracle is not None:
        if not oracle.converged:
            report.add(Check(name='float oracle converged', kind='exact', passed=False, gating=False,
                             note=f"no repetition within {oracle.iterations} iterations"))
        else:
            report.add(exact_check('oracle period equals p', int(oracle.p_est != analysis.rd.p), 1))
            for estimate, measure in (('eta', analysis.limits.eta), ('nu', analysis.limits.nu)):
                distance = oracle.distance_to(measure, estimate=estimate)
                report.add(Check(name=f'oracle {estimate} within {ORACLE_TOLERANCE:g}', kind='exact',
                                 passed=distance <= ORACLE_TOLERANCE, statistic=distance,
                                 threshold=ORACLE_TOLERANCE))
    if cesaro is not None:
        coarse, fine = cesaro['distance']
        report.add(Check(name=f"running average within {CESARO_TOLERANCE:g} of nu", kind='exact',
                         passed=(fine < CESARO_TOLERANCE and fine * 5 <= coarse) or fine == 0.0,
                         statistic=fine, threshold=CESARO_TOLERANCE, gating=False,
                         note=f"{coarse:.3g} at n = {CESARO_STEPS[0]}"))
    return report


def analysis_report(analysis, command='analyze', seed=None, source=None, timestamp=True,
                    Lambda_W=None):
    """The full structural report of an analysed law."""
    cesaro = cesaro_section(analysis) if analysis.oracle is not None else None
    report = {
        'tool': 'mapevo',
        'version': __version__,
        'command': command,
        'seed': seed,
        'input': {'source': source, **analysis.law.to_json()},
        'semigroup': semigroup_section(analysis),
        'rees': rees_section(analysis),
        'limits': limits_section(analysis, cesaro=cesaro),
        'cliques': cliques_section(analysis),
        'invariant_law': invariant_law_section(analysis, Lambda_W),
        'verification': [],
    }
    structure = structure_report(analysis, cesaro)
    if structure.checks:
        report['verification'].append(structure.to_json())
    report['exit_code'] = structure.exit_code
    if timestamp:
        report['generated_at'] = timezone.now().isoformat()
    logger.info(f"{command} report built for a law on {analysis.law.n} points")
    return report


def add_verification(report, verifications):
    """Append verification reports; the exit code is the worst one seen."""
    for verification in verifications:
        report['verification'].append(verification.to_json())
        report['exit_code'] = max(report['exit_code'], verification.exit_code)
    return report


def dumps_report(report):
    return json.dumps(report, indent=2)
