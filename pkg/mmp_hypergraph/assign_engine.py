"""Binary / non-binary decisions, classical indices, criticality and the reduction pipelines.

Vertices and hyperedges are handled as Python int bitsets: bit v of a vertex mask stands
for vertex v, bit j of an edge mask for hyperedge j.
"""
import multiprocessing
import time
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from mmp_hypergraph.console import get_logger
from mmp_hypergraph.errors import BudgetExceededError, HypergraphError
from mmp_hypergraph.hypergraph_core import canonical_form, remove_hyperedge, strip_unishared, subhypergraph
from mmp_hypergraph.models import Assignment, Hypergraph, IndexReport

logger = get_logger(__name__)

DEFAULT_BUDGET = 2_000_000
DEFAULT_RUNS = 50_000
DEFAULT_ATTEMPTS = 20


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class _Incidence:
    """Bitset view of a hypergraph shared by the searches below."""

    def __init__(self, H: Hypergraph):
        self.k = H.k
        self.l = H.l
        self.all_vertices = (1 << H.k) - 1
        self.all_edges = (1 << H.l) - 1
        self.edge_masks = [sum(1 << v for v in edge) for edge in H.edge_sets]
        self.vertex_edges = [sum(1 << j for j in incident) for incident in H.vertex_edges]
        # closed neighbourhood: the vertex itself and everything sharing a hyperedge with it
        self.closed = [1 << v for v in range(H.k)]
        for mask in self.edge_masks:
            for v in _bits(mask):
                self.closed[v] |= mask
        self.multiplicity = [len(incident) for incident in H.vertex_edges]
        self.unishared = sum(1 << v for v, m in enumerate(self.multiplicity) if m == 1)


class _NodeCounter:
    def __init__(self, operation: str, budget: Optional[int]):
        self.operation = operation
        self.budget = budget or DEFAULT_BUDGET
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceededError(self.operation, self.budget)


def is_binary(H: Hypergraph, budget: Optional[int] = None) -> Tuple[bool, Optional[Assignment]]:
    """Decides whether some assignment puts exactly one 1 in every hyperedge.

    Complete backtracking: pick the uncovered hyperedge with the fewest candidate
    vertices and branch on which of them carries the 1. Hyperedges that still own an
    available multiplicity-1 vertex are left for last since that vertex can always
    close them without touching another hyperedge.
    """
    inc = _Incidence(H)
    counter = _NodeCounter("is_binary", budget)

    def search(available: int, covered: int, chosen: List[int]) -> Optional[List[int]]:
        counter.tick()
        uncovered = inc.all_edges & ~covered
        target = None
        fewest = None
        for j in _bits(uncovered):
            options = available & inc.edge_masks[j]
            if not options:
                return None
            if options & inc.unishared:
                continue
            count = options.bit_count()
            if fewest is None or count < fewest:
                target, fewest = options, count
                if count == 1:
                    break
        if target is None:
            closing = [_lowest(available & inc.edge_masks[j] & inc.unishared) for j in _bits(uncovered)]
            return chosen + closing
        for v in _bits(target):
            found = search(available & ~inc.closed[v], covered | inc.vertex_edges[v], chosen + [v])
            if found is not None:
                return found
        return None

    ones = search(inc.all_vertices, 0, [])
    logger.debug("is_binary(%s): %d nodes", H.size, counter.nodes)
    if ones is None:
        return False, None
    return True, Assignment(frozenset(ones))


class _MaxIndependentSet:
    """Include-first branch and bound for a maximum-weight independent set.

    The bound is a greedy clique cover of the candidates, each clique counting its
    heaviest vertex. Only strict improvements are recorded, so the first optimum met,
    which is the lexicographically smallest, is the witness.
    """

    def __init__(self, inc: _Incidence, weights: Sequence[int], counter: _NodeCounter):
        self.inc = inc
        self.weights = weights
        self.counter = counter
        self.best = -1
        self.best_set: List[int] = []

    def bound(self, candidates: int) -> int:
        total = 0
        while candidates:
            v = _lowest(candidates)
            heaviest = self.weights[v]
            candidates &= ~(1 << v)
            clique = candidates & self.inc.closed[v]
            while clique:
                u = _lowest(clique)
                heaviest = max(heaviest, self.weights[u])
                candidates &= ~(1 << u)
                clique &= self.inc.closed[u] & ~(1 << u)
            total += heaviest
        return total

    def branch(self, candidates: int, chosen: List[int], weight: int):
        self.counter.tick()
        if not candidates:
            if weight > self.best:
                self.best = weight
                self.best_set = list(chosen)
            return
        if weight + self.bound(candidates) <= self.best:
            return
        v = _lowest(candidates)
        chosen.append(v)
        self.branch(candidates & ~self.inc.closed[v], chosen, weight + self.weights[v])
        chosen.pop()
        self.branch(candidates & ~(1 << v), chosen, weight)

    def run(self) -> Tuple[int, Assignment]:
        self.branch(self.inc.all_vertices, [], 0)
        return self.best, Assignment(frozenset(self.best_set))


class _MinIndependentDominatingSet:
    """Minimum-weight maximal independent set (independent dominating set).

    Branches on the undominated vertex with the fewest admissible dominators; a
    dominator already tried in an earlier sibling branch is forbidden afterwards.
    Lower bound: undominated vertices whose admissible dominators are pairwise disjoint
    each need their own chosen vertex.
    """

    def __init__(self, inc: _Incidence, weights: Sequence[int], counter: _NodeCounter):
        self.inc = inc
        self.weights = weights
        self.counter = counter
        self.best_set = self._greedy()
        self.best = sum(weights[v] for v in self.best_set)

    def _greedy(self) -> List[int]:
        chosen = []
        free = self.inc.all_vertices
        while free:
            v = _lowest(free)
            chosen.append(v)
            free &= ~self.inc.closed[v]
        return chosen

    def _cheapest(self, mask: int) -> int:
        return min(self.weights[v] for v in _bits(mask))

    def branch(self, chosen: List[int], dominated: int, forbidden: int, weight: int):
        self.counter.tick()
        undominated = self.inc.all_vertices & ~dominated
        if not undominated:
            if weight < self.best:
                self.best = weight
                self.best_set = list(chosen)
            return
        target = None
        fewest = None
        packed = 0
        lower = 0
        for u in _bits(undominated):
            options = self.inc.closed[u] & ~dominated & ~forbidden
            if not options:
                return
            count = options.bit_count()
            if fewest is None or count < fewest:
                target, fewest = options, count
            if not options & packed:
                packed |= options
                lower += self._cheapest(options)
        if weight + lower >= self.best:
            return
        for v in _bits(target):
            chosen.append(v)
            self.branch(chosen, dominated | self.inc.closed[v], forbidden, weight + self.weights[v])
            chosen.pop()
            forbidden |= 1 << v

    def run(self) -> Tuple[int, Assignment]:
        self.branch([], 0, 0, 0)
        return self.best, Assignment(frozenset(self.best_set))


def classical_indices_exact(H: Hypergraph, budget: Optional[int] = None) -> IndexReport:
    """Exact HI_cM, HI_cm, HI_mcM, l_cM and l_cm.

    An independent set hits each hyperedge at most once, so the number of hyperedges
    it hits is its multiplicity-weighted size: l_cM coincides with HI_mcM and l_cm is
    the minimum multiplicity-weighted maximal independent set.
    """
    inc = _Incidence(H)
    counter = _NodeCounter("classical_indices_exact", budget)
    unit = [1] * H.k
    hi_max, hi_max_witness = _MaxIndependentSet(inc, unit, counter).run()
    hi_m_max, hi_m_witness = _MaxIndependentSet(inc, inc.multiplicity, counter).run()
    hi_min, hi_min_witness = _MinIndependentDominatingSet(inc, unit, counter).run()
    l_min, l_min_witness = _MinIndependentDominatingSet(inc, inc.multiplicity, counter).run()
    logger.debug("exact indices of %s: %d nodes", H.size, counter.nodes)
    return IndexReport(
        hi_max=hi_max,
        hi_min=hi_min,
        hi_m_max=hi_m_max,
        l_max=hi_m_max,
        l_min=l_min,
        exact=True,
        witnesses={
            "HI_cM": hi_max_witness,
            "HI_cm": hi_min_witness,
            "HI_mcM": hi_m_witness,
            "l_cM": hi_m_witness,
            "l_cm": l_min_witness,
        },
    )


# (index key, aggregate with max?, position in a run result)
_HEURISTIC_KEYS = (
    ("HI_cM", True, 0),
    ("HI_cm", False, 0),
    ("HI_mcM", True, 1),
    ("l_cM", True, 1),
    ("l_cm", False, 1),
)


def _heuristic_run(inc: _Incidence, seed: int, run_index: int) -> Tuple[int, int, frozenset]:
    rng = np.random.default_rng([seed, run_index])
    start_edge = inc.edge_masks[int(rng.integers(inc.l))]
    members = list(_bits(start_edge))
    first = members[int(rng.integers(len(members)))]
    chosen = [first]
    blocked = inc.closed[first]
    for v in rng.permutation(inc.k):
        v = int(v)
        if not blocked >> v & 1:
            chosen.append(v)
            blocked |= inc.closed[v]
    weight = sum(inc.multiplicity[v] for v in chosen)
    return len(chosen), weight, frozenset(chosen)


def _heuristic_chunk(H: Hypergraph, seed: int, start: int, stop: int) -> Dict[str, Tuple[int, int, frozenset]]:
    """Best (value, run index, ones) per index over the runs start..stop-1."""
    inc = _Incidence(H)
    best: Dict[str, Tuple[int, int, frozenset]] = {}
    for run_index in range(start, stop):
        result = _heuristic_run(inc, seed, run_index)
        for key, maximize, position in _HEURISTIC_KEYS:
            value = result[position]
            current = best.get(key)
            if current is None or (value > current[0] if maximize else value < current[0]):
                best[key] = (value, run_index, result[2])
    return best


def _merge_chunks(chunks: List[Dict[str, Tuple[int, int, frozenset]]]) -> Dict[str, Tuple[int, int, frozenset]]:
    merged = {}
    for key, maximize, _ in _HEURISTIC_KEYS:
        candidates = [chunk[key] for chunk in chunks if key in chunk]
        if maximize:
            merged[key] = min(candidates, key=lambda item: (-item[0], item[1]))
        else:
            merged[key] = min(candidates, key=lambda item: (item[0], item[1]))
    return merged


def classical_indices_heuristic(H: Hypergraph, runs: int = DEFAULT_RUNS, seed: int = 0,
                                workers: int = 1) -> IndexReport:
    """Randomized greedy estimate of the classical indices.

    Every run starts from a random vertex of a random hyperedge and adds vertices in a
    shuffled order while no hyperedge receives a second 1. Run i draws from a generator
    seeded with (seed, i), so the report does not depend on the number of workers.
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    if workers > 1 and runs > workers:
        bounds = np.linspace(0, runs, workers + 1).astype(int)
        tasks = [(H, seed, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with multiprocessing.Pool(workers) as pool:
            chunks = pool.starmap(_heuristic_chunk, tasks)
    else:
        chunks = [_heuristic_chunk(H, seed, 0, runs)]
    best = _merge_chunks(chunks)
    logger.debug("heuristic indices of %s over %d runs", H.size, runs)
    return IndexReport(
        hi_max=best["HI_cM"][0],
        hi_min=best["HI_cm"][0],
        hi_m_max=best["HI_mcM"][0],
        l_max=best["l_cM"][0],
        l_min=best["l_cm"][0],
        exact=False,
        witnesses={key: Assignment(value[2]) for key, value in best.items()},
        runs_used=runs,
    )


def classical_indices(H: Hypergraph, mode: str = "exact", runs: int = DEFAULT_RUNS, seed: int = 0,
                      budget: Optional[int] = None, workers: int = 1) -> IndexReport:
    if mode not in ("exact", "heuristic"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exact":
        try:
            return classical_indices_exact(H, budget)
        except BudgetExceededError as e:
            logger.warning("%s; falling back to %d heuristic runs", e, runs)
    return classical_indices_heuristic(H, runs=runs, seed=seed, workers=workers)


def is_critical(H: Hypergraph, budget: Optional[int] = None) -> bool:
    if is_binary(H, budget)[0]:
        return False
    return all(is_binary(remove_hyperedge(H, j), budget)[0] for j in range(H.l))


def has_parity_proof(H: Hypergraph) -> bool:
    """Odd number of hyperedges, every vertex in an even number of them."""
    return H.l % 2 == 1 and all(len(incident) % 2 == 0 for incident in H.vertex_edges)


def _identity_key(H: Hypergraph, canonical_budget: Optional[int]):
    try:
        return canonical_form(H, canonical_budget).digest
    except BudgetExceededError as e:
        logger.warning("%s; deduplicating %s by its labelled hyperedges", e, H.size)
        return tuple(sorted(tuple(sorted(H.edge_labels(j))) for j in range(H.l)))


def _descend(H: Hypergraph, rng: np.random.Generator, budget: Optional[int]) -> Hypergraph:
    """One pass over the hyperedges in random order, dropping each one whose removal keeps H non-binary.

    Any hyperedge that survives made the hypergraph binary when it was tried, and
    dropping further hyperedges keeps it binary, so the result is critical.
    """
    keep = set(range(H.l))
    for j in rng.permutation(H.l):
        j = int(j)
        trial = keep - {j}
        if trial and not is_binary(subhypergraph(H, trial), budget)[0]:
            keep = trial
    return subhypergraph(H, keep)


def find_criticals(H: Hypergraph, seed: int = 0, budget: Optional[int] = None,
                   attempts: int = DEFAULT_ATTEMPTS, max_seconds: Optional[float] = None,
                   canonical_budget: Optional[int] = None) -> List[Hypergraph]:
    """Critical subhypergraphs reached by random descents, one per isomorphism class."""
    if is_binary(H, budget)[0]:
        return []
    rng = np.random.default_rng(seed)
    started = time.monotonic()
    found: Dict[object, Hypergraph] = {}
    for attempt in range(attempts):
        if max_seconds is not None and time.monotonic() - started > max_seconds:
            logger.info("find_criticals stopped after %d descents (time limit)", attempt)
            break
        critical = _descend(H, rng, budget)
        key = _identity_key(critical, canonical_budget)
        if key not in found:
            found[key] = critical
            logger.info("descent %d: new critical %s", attempt, critical.size)
        else:
            logger.debug("descent %d: %s already known", attempt, critical.size)
    return list(found.values())


def strip_pipeline(H: Hypergraph, seed: int = 0, budget: Optional[int] = None,
                   attempts: int = DEFAULT_ATTEMPTS, fixpoint: bool = False,
                   canonical_budget: Optional[int] = None) -> List[Hypergraph]:
    """Drop the multiplicity-1 vertices of H, then descend to critical subhypergraphs."""
    stripped = strip_unishared(H, fixpoint=fixpoint)
    logger.info("strip pipeline: %s stripped to %s", H.size, stripped.size)
    return find_criticals(stripped, seed=seed, budget=budget, attempts=attempts,
                          canonical_budget=canonical_budget)


def grow_pipeline(master: Hypergraph, start_edges: Sequence[int], additions: int = 1, seed: int = 0,
                  budget: Optional[int] = None, attempts: int = DEFAULT_ATTEMPTS,
                  canonical_budget: Optional[int] = None) -> List[Hypergraph]:
    """Add random master hyperedges to a starting set until it turns non-binary, then descend."""
    if additions < 1:
        raise ValueError("additions must be at least 1")
    keep = list(dict.fromkeys(start_edges))
    if not keep:
        raise HypergraphError("the starting subhypergraph needs at least one hyperedge")
    rng = np.random.default_rng(seed)
    started = set(keep)
    pool = [int(j) for j in rng.permutation(master.l) if int(j) not in started]
    grown = subhypergraph(master, keep)
    while is_binary(grown, budget)[0]:
        if not pool:
            logger.info("grow pipeline: master %s is binary, nothing to find", master.size)
            return []
        keep.extend(pool[:additions])
        pool = pool[additions:]
        grown = subhypergraph(master, keep)
    logger.info("grow pipeline: non-binary %s after growing", grown.size)
    return find_criticals(grown, seed=int(rng.integers(2 ** 32)), budget=budget, attempts=attempts,
                          canonical_budget=canonical_budget)
