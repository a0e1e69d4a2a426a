"""Quantum and fractional indices of MMP hypergraphs and the verdicts of the six inequalities."""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

from mmp_hypergraph.assign_engine import is_binary
from mmp_hypergraph.console import get_logger
from mmp_hypergraph.errors import InfeasibleLPError
from mmp_hypergraph.models import (
    SATISFIED,
    VIOLATED,
    Hypergraph,
    IndexReport,
    InequalityReport,
    LPResult,
)
from mmp_hypergraph.rational_simplex import SimplexTableau

logger = get_logger(__name__)

Bound = Tuple[Fraction, Fraction]
Bounds = Union[None, Tuple, Mapping]

INEQUALITIES = ("v", "e_Max", "e_min", "alpha_r", "alpha_p", "GLS")


def parse_bounds(text: str) -> Bound:
    """Reads "lo,hi" with rational entries, e.g. "1/4,1"."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"bounds must look like 'lo,hi', got {text!r}")
    return Fraction(parts[0]), Fraction(parts[1])


@dataclass
class LPProblem:
    """maximize sum(x) subject to sum over each hyperedge <= 1 and lower <= x <= upper."""
    rows: List[Tuple[int, ...]]
    lower: List[Fraction]
    upper: List[Fraction]

    @classmethod
    def from_hypergraph(cls, H: Hypergraph, bounds: Bounds = None) -> "LPProblem":
        lower = [Fraction(0)] * H.k
        upper = [Fraction(1)] * H.k
        if isinstance(bounds, Mapping):
            for key, (lo, hi) in bounds.items():
                v = H.index_of(key) if isinstance(key, str) else key
                lower[v], upper[v] = Fraction(lo), Fraction(hi)
        elif bounds is not None:
            lo, hi = bounds
            lower = [Fraction(lo)] * H.k
            upper = [Fraction(hi)] * H.k
        for v in range(H.k):
            if lower[v] < 0 or upper[v] > 1:
                raise ValueError(f"bounds of vertex {H.labels[v]} must lie within [0, 1]")
        return cls(rows=[tuple(sorted(edge)) for edge in H.edge_sets], lower=lower, upper=upper)

    def check_feasible(self):
        for v, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if lo > hi:
                raise InfeasibleLPError(f"vertex {v}: lower bound {lo} exceeds upper bound {hi}")
        for j, row in enumerate(self.rows):
            if sum(self.lower[v] for v in row) > 1:
                raise InfeasibleLPError(f"hyperedge {j}: lower bounds sum above 1")

    def solve(self) -> LPResult:
        """Shifts x = lower + y so the slack basis of the tableau is feasible."""
        self.check_feasible()
        k = len(self.lower)
        A, b = [], []
        for row in self.rows:
            A.append([1 if v in row else 0 for v in range(k)])
            b.append(1 - sum(self.lower[v] for v in row))
        covered = {v for row in self.rows for v in row}
        for v in range(k):
            if self.upper[v] < 1 or v not in covered:
                A.append([1 if u == v else 0 for u in range(k)])
                b.append(self.upper[v] - self.lower[v])
        value, y = SimplexTableau(A, b, [1] * k).solve()
        solution = tuple(self.lower[v] + y[v] for v in range(k))
        return LPResult(value=value + sum(self.lower), solution=solution)


def lp_alpha_star(H: Hypergraph, bounds: Bounds = None) -> LPResult:
    return LPProblem.from_hypergraph(H, bounds).solve()


def quantum_index(H: Hypergraph) -> Fraction:
    """Sum of within-hyperedge probabilities 1/|e| over all hyperedges; always l."""
    return sum((Fraction(1, len(edge)) for edge in H.edge_sets for _ in edge), Fraction(0))


def vertex_probabilities(H: Hypergraph) -> Dict[int, Tuple[Tuple[Fraction, ...], Fraction]]:
    """Per vertex: the probability 1/|e| in each hyperedge containing it, and their mean."""
    table = {}
    for v, incident in enumerate(H.vertex_edges):
        probs = tuple(Fraction(1, len(H.edge_sets[j])) for j in incident)
        mean = sum(probs, Fraction(0)) / len(probs) if probs else Fraction(0)
        table[v] = (probs, mean)
    return table


def alpha_raw(H: Hypergraph, declared_n: Optional[int] = None) -> Fraction:
    n = declared_n or H.n
    if n < H.max_edge_size:
        raise ValueError(f"declared dimension {n} is below the largest hyperedge ({H.max_edge_size})")
    if all(len(edge) == n for edge in H.edge_sets):
        return Fraction(H.k, n)
    return sum((mean for _, mean in vertex_probabilities(H).values()), Fraction(0))


def alpha_post(H: Hypergraph) -> Fraction:
    return Fraction(H.l)


def _verdict(holds: bool) -> str:
    return SATISFIED if holds else VIOLATED


def evaluate(H: Hypergraph, idx: IndexReport, binary: Optional[bool] = None,
             declared_n: Optional[int] = None) -> InequalityReport:
    """Values and verdicts of the v, e_Max, e_min, alpha_r, alpha_p and GLS inequalities.

    Only is_binary decides the classification; the alpha_r and GLS lines are reported
    for comparison.
    """
    if binary is None:
        binary = is_binary(H)[0]
    if not idx.exact:
        logger.info("verdicts for %s use heuristic index values", H.size)
    l = H.l
    a_raw = alpha_raw(H, declared_n)
    free = lp_alpha_star(H).value
    verdicts = {
        "v": _verdict(idx.hi_m_max < l),
        "e_Max": _verdict(idx.l_max < l),
        "e_min": _verdict(idx.l_min < l),
        "alpha_r": _verdict(idx.hi_max <= a_raw),
        "alpha_p": _verdict(idx.hi_max < l),
        "GLS": _verdict(idx.hi_max <= free),
    }
    return InequalityReport(
        hi_q=quantum_index(H),
        alpha=idx.hi_max,
        alpha_r=a_raw,
        alpha_p=alpha_post(H),
        alpha_star_free=free,
        verdicts=verdicts,
        classification="noncontextual" if binary else "contextual",
    )
