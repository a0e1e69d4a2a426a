from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Tuple


def fraction_text(value) -> str:
    """Renders an exact rational as "p/q" (or "p" when integral)."""
    return str(Fraction(value))


@dataclass(frozen=True)
class Hypergraph:
    """An MMP hypergraph: vertex labels, hyperedges over vertex indices, and dimension n.

    Vertex order and within-hyperedge order are kept exactly as given so that
    strings round-trip; every analysis treats hyperedges as sets.
    """
    edges: Tuple[Tuple[int, ...], ...]
    labels: Tuple[str, ...]
    n: int

    def __post_init__(self):
        k = len(self.labels)
        for edge in self.edges:
            for v in edge:
                if not 0 <= v < k:
                    raise ValueError(f"hyperedge {edge} refers to unknown vertex {v}")

    @property
    def k(self) -> int:
        return len(self.labels)

    @property
    def l(self) -> int:
        return len(self.edges)

    @property
    def size(self) -> str:
        return f"{self.k}-{self.l}"

    @cached_property
    def edge_sets(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(edge) for edge in self.edges)

    @cached_property
    def vertex_edges(self) -> Tuple[Tuple[int, ...], ...]:
        """For every vertex, the indices of the hyperedges containing it."""
        incident = [[] for _ in range(self.k)]
        for j, edge in enumerate(self.edges):
            for v in set(edge):
                incident[v].append(j)
        return tuple(tuple(js) for js in incident)

    @property
    def max_edge_size(self) -> int:
        return max((len(edge) for edge in self.edges), default=0)

    @property
    def is_full(self) -> bool:
        return all(len(edge) == self.n for edge in self.edges)

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    def edge_labels(self, j: int) -> List[str]:
        return [self.labels[v] for v in self.edges[j]]

    def to_dict(self):
        return {
            "k": self.k,
            "l": self.l,
            "n": self.n,
            "labels": list(self.labels),
            "hyperedges": [self.edge_labels(j) for j in range(self.l)],
        }


@dataclass(frozen=True)
class Violation:
    rule: str
    locus: str
    message: str

    def to_dict(self):
        return {"rule": self.rule, "locus": self.locus, "message": self.message}


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)
    strict: bool = False

    @property
    def valid(self) -> bool:
        return not self.violations

    def rules(self) -> List[str]:
        return sorted({v.rule for v in self.violations})

    def to_dict(self):
        return {
            "valid": self.valid,
            "strict": self.strict,
            "violations": [v.to_dict() for v in self.violations],
        }


@dataclass(frozen=True)
class Assignment:
    """A 0-1 labelling given by the set of vertices carrying 1."""
    ones: FrozenSet[int] = frozenset()

    def value(self, v: int) -> int:
        return 1 if v in self.ones else 0

    def ones_in_edges(self, H: Hypergraph) -> List[int]:
        return [len(edge & self.ones) for edge in H.edge_sets]

    def is_admissible(self, H: Hypergraph) -> bool:
        return all(count <= 1 for count in self.ones_in_edges(H))

    def is_exact(self, H: Hypergraph) -> bool:
        return all(count == 1 for count in self.ones_in_edges(H))

    def is_maximal(self, H: Hypergraph) -> bool:
        if not self.is_admissible(H):
            return False
        for v in range(H.k):
            if v in self.ones:
                continue
            if all(not (self.ones & H.edge_sets[j]) for j in H.vertex_edges[v]):
                return False
        return True

    def edges_hit(self, H: Hypergraph) -> int:
        return sum(1 for count in self.ones_in_edges(H) if count)

    def to_dict(self, H: Optional[Hypergraph] = None):
        ones = sorted(self.ones)
        if H is None:
            return {"ones": ones}
        return {"ones": [H.labels[v] for v in ones]}


INDEX_KEYS = ("HI_cM", "HI_cm", "HI_mcM", "l_cM", "l_cm")


@dataclass
class IndexReport:
    """Classical indices of a hypergraph together with one witness per extremum."""
    hi_max: int
    hi_min: int
    hi_m_max: int
    l_max: int
    l_min: int
    exact: bool = True
    witnesses: Dict[str, Assignment] = field(default_factory=dict)
    runs_used: int = 0

    def as_tuple(self) -> Tuple[int, int, int, int]:
        """The (HI_cM, HI_cm, l_cM, l_cm) columns of the published tables."""
        return (self.hi_max, self.hi_min, self.l_max, self.l_min)

    def values(self) -> Dict[str, int]:
        return dict(zip(INDEX_KEYS, (self.hi_max, self.hi_min, self.hi_m_max, self.l_max, self.l_min)))

    def to_dict(self, H: Optional[Hypergraph] = None):
        result = self.values()
        result["exact"] = self.exact
        result["runs_used"] = self.runs_used
        result["witnesses"] = {key: w.to_dict(H)["ones"] for key, w in sorted(self.witnesses.items())}
        return result


SATISFIED = "satisfied"
VIOLATED = "violated"


@dataclass
class InequalityReport:
    hi_q: Fraction
    alpha: int
    alpha_r: Fraction
    alpha_p: Fraction
    alpha_star_free: Fraction
    verdicts: Dict[str, str]
    classification: str

    @property
    def contextual(self) -> bool:
        return self.classification == "contextual"

    def to_dict(self):
        return {
            "HI_q": fraction_text(self.hi_q),
            "alpha": self.alpha,
            "alpha_r": fraction_text(self.alpha_r),
            "alpha_p": fraction_text(self.alpha_p),
            "alpha_star_free": fraction_text(self.alpha_star_free),
            "verdicts": dict(self.verdicts),
            "classification": self.classification,
        }


@dataclass
class LPResult:
    value: Fraction
    solution: Tuple[Fraction, ...]

    def to_dict(self):
        return {
            "value": fraction_text(self.value),
            "solution": [fraction_text(x) for x in self.solution],
        }


@dataclass
class AnalysisRecord:
    """Everything `mmp analyze` reports for one input hypergraph."""
    name: str
    mmp: str
    identity: str
    identity_canonical: bool
    k: int
    l: int
    n: int
    multiplicity_histogram: Dict[int, int]
    binary: bool
    critical: Optional[bool]
    parity: bool
    components: int
    indices: Optional[IndexReport] = None
    inequalities: Optional[InequalityReport] = None

    @property
    def size(self) -> str:
        return f"{self.k}-{self.l}"

    @property
    def max_multiplicity(self) -> int:
        return max(self.multiplicity_histogram, default=0)

    @property
    def classification(self) -> str:
        return "noncontextual" if self.binary else "contextual"

    def to_dict(self):
        return {
            "name": self.name,
            "mmp": self.mmp,
            "identity": self.identity,
            "identity_canonical": self.identity_canonical,
            "k": self.k,
            "l": self.l,
            "n": self.n,
            "multiplicity_histogram": {str(m): c for m, c in sorted(self.multiplicity_histogram.items())},
            "max_multiplicity": self.max_multiplicity,
            "binary": self.binary,
            "critical": self.critical,
            "parity": self.parity,
            "components": self.components,
            "classification": self.classification,
            "indices": self.indices.to_dict() if self.indices else None,
            "inequalities": self.inequalities.to_dict() if self.inequalities else None,
        }
