# reports/analysis.py
"""The structural pipeline every command starts with."""
import logging
from dataclasses import dataclass, field

from cliques.cliques import compute_W, deadlock_pairs, invariant_laws
from measures.limits import analyze_limits, float_limit_oracle
from measures.measure import RationalMeasure
from transforms.rees import coset_structure, rees_at
from transforms.semigroup import generate, idempotents, kernel, kernel_idempotent

logger = logging.getLogger(__name__)


@dataclass
class Analysis:
    law: object
    S: object
    K: list
    rd: object
    limits: object
    cd: object
    pairs: frozenset = field(repr=False)
    word: list = field(repr=False)
    cosets: list = field(repr=False)
    oracle: object = None

    @property
    def default_lambda_W(self):
        """delta at the first representative of W."""
        return RationalMeasure.point(self.cd.W[0])

    def invariant_law(self, Lambda_W=None):
        Lambda_W = self.default_lambda_W if Lambda_W is None else Lambda_W
        return invariant_laws(self.law, self.rd, self.limits, self.cd, Lambda_W)

    @property
    def idempotents(self):
        return idempotents(self.S)


def analyze_law(law, oracle=True):
    """Semigroup, kernel, Rees data, limit cycle and cliques of a mapping law."""
    S = generate(law.generators)
    K = kernel(S)
    e = kernel_idempotent(S, K)
    rd, limits = analyze_limits(law, rees_at(K, e))
    cosets = coset_structure(rd)
    pairs = deadlock_pairs(S)
    cd = compute_W(S, K, rd, pairs=pairs)
    analysis = Analysis(law=law, S=S, K=K, rd=rd, limits=limits, cd=cd, pairs=pairs,
                        word=S.word_for(e), cosets=cosets)
    if oracle:
        analysis.oracle = float_limit_oracle(law, S, max_lag=len(rd.G))
    logger.info(f"analysed law on {law.n} points: |S| = {len(S)}, |K| = {len(K)}, p = {rd.p}")
    return analysis
