import hashlib
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from mmp_hypergraph.console import get_logger
from mmp_hypergraph.errors import BudgetExceededError, HypergraphError
from mmp_hypergraph.mmp_lang import encode_label, make_hypergraph, restrict_to_edges, serialize_mmp, validate
from mmp_hypergraph.models import Hypergraph

logger = get_logger(__name__)

DEFAULT_CANONICAL_BUDGET = 200_000


def multiplicities(H: Hypergraph) -> Dict[int, int]:
    return {v: len(incident) for v, incident in enumerate(H.vertex_edges)}


def multiplicity_histogram(H: Hypergraph) -> Dict[int, int]:
    """Number of vertices per multiplicity, e.g. {2: 18} for the 18-9 set."""
    return dict(sorted(Counter(multiplicities(H).values()).items()))


def max_multiplicity(H: Hypergraph) -> int:
    return max(multiplicities(H).values(), default=0)


def vertex_hyperedge_sum_holds(H: Hypergraph) -> bool:
    total = sum(multiplicities(H).values())
    if total != sum(len(edge) for edge in H.edge_sets):
        return False
    return not H.is_full or total == H.n * H.l


def _check_lenient(H: Hypergraph, operation: str) -> Hypergraph:
    report = validate(H)
    if not report.valid:
        logger.warning("%s produced a hypergraph violating %s", operation, ", ".join(report.rules()))
    return H


def strip_unishared(H: Hypergraph, fixpoint: bool = False) -> Hypergraph:
    """Removes every vertex of multiplicity 1 and the hyperedges left with fewer than two vertices."""
    while True:
        counts = multiplicities(H)
        if all(m != 1 for m in counts.values()):
            return H
        edges = [[v for v in edge if counts[v] > 1] for edge in H.edges]
        kept = [edge for edge in edges if len(edge) >= 2]
        if not kept:
            raise HypergraphError(f"stripping {H.size} leaves no hyperedge")
        used = sorted({v for edge in kept for v in edge})
        remap = {v: i for i, v in enumerate(used)}
        stripped = Hypergraph(
            edges=tuple(tuple(remap[v] for v in edge) for edge in kept),
            labels=tuple(H.labels[v] for v in used),
            n=H.n,
        )
        logger.debug("stripped %s to %s", H.size, stripped.size)
        H = _check_lenient(stripped, "strip_unishared")
        if not fixpoint:
            return H


def remove_hyperedges(H: Hypergraph, indices: Iterable[int]) -> Hypergraph:
    drop = set(indices)
    for j in drop:
        if not 0 <= j < H.l:
            raise HypergraphError(f"hyperedge index {j} out of range 0..{H.l - 1}")
    keep = [j for j in range(H.l) if j not in drop]
    if not keep:
        raise HypergraphError("removing every hyperedge leaves an empty hypergraph")
    return restrict_to_edges(H, keep)


def remove_hyperedge(H: Hypergraph, index: int) -> Hypergraph:
    return remove_hyperedges(H, [index])


def subhypergraph(H: Hypergraph, edge_indices: Iterable[int]) -> Hypergraph:
    indices = list(edge_indices)
    if not indices:
        raise HypergraphError("a subhypergraph needs at least one hyperedge")
    for j in indices:
        if not 0 <= j < H.l:
            raise HypergraphError(f"hyperedge index {j} out of range 0..{H.l - 1}")
    return restrict_to_edges(H, indices)


def add_hyperedges(H: Hypergraph, edges: Iterable[Sequence[str]]) -> Hypergraph:
    """Appends hyperedges given as label sequences; unknown labels become new vertices."""
    labels = list(H.labels)
    index = {label: v for v, label in enumerate(labels)}
    new_edges = list(H.edges)
    for edge in edges:
        indexed = []
        for label in edge:
            if label not in index:
                index[label] = len(labels)
                labels.append(label)
            indexed.append(index[label])
        new_edges.append(tuple(indexed))
    n = max(H.n, max((len(edge) for edge in new_edges), default=0))
    return Hypergraph(edges=tuple(new_edges), labels=tuple(labels), n=n)


def delta_feature_pairs(H: Hypergraph) -> List[Tuple[int, int]]:
    """Hyperedge pairs sharing two or more vertices."""
    shared = Counter()
    for incident in H.vertex_edges:
        shared.update(combinations(incident, 2))
    return sorted(pair for pair, count in shared.items() if count >= 2)


def to_graph(H: Hypergraph) -> nx.Graph:
    G = nx.Graph()
    for v, label in enumerate(H.labels):
        G.add_node(v, label=label)
    for edge in H.edges:
        G.add_edges_from(combinations(edge, 2))
    return G


def from_graph(G: nx.Graph, n: int) -> Hypergraph:
    """Turns a graph into a hypergraph whose hyperedges are its maximal cliques."""
    if n < 3:
        raise HypergraphError(f"dimension must be at least 3, got {n}")
    position = {node: i for i, node in enumerate(G.nodes)}
    cliques = []
    for clique in nx.find_cliques(G):
        if len(clique) > n:
            raise HypergraphError(f"clique of size {len(clique)} exceeds dimension {n}")
        if len(clique) < 2:
            logger.warning("isolated vertex %r dropped", clique[0])
            continue
        cliques.append(tuple(sorted(position[node] for node in clique)))
    if not cliques:
        raise HypergraphError("graph has no edges")
    cliques.sort()
    used = sorted({v for clique in cliques for v in clique})
    remap = {v: i for i, v in enumerate(used)}
    nodes = list(G.nodes)
    labels = [G.nodes[nodes[v]].get("label", encode_label(v)) for v in used]
    return make_hypergraph([[remap[v] for v in clique] for clique in cliques], n=n, labels=labels)


def relabel(H: Hypergraph, permutation: Sequence[int], edge_order: Optional[Sequence[int]] = None) -> Hypergraph:
    """Vertex v becomes vertex permutation[v] with a fresh label; hyperedges optionally reordered."""
    if sorted(permutation) != list(range(H.k)):
        raise HypergraphError("not a permutation of the vertex indices")
    order = list(edge_order) if edge_order is not None else list(range(H.l))
    if sorted(order) != list(range(H.l)):
        raise HypergraphError("not a permutation of the hyperedge indices")
    edges = [tuple(permutation[v] for v in H.edges[j]) for j in order]
    return make_hypergraph(edges, n=H.n, labels=[encode_label(i) for i in range(H.k)])


@dataclass(frozen=True)
class CanonicalForm:
    text: str
    n: int
    digest: str


class _CanonicalSearch:
    """Individualization-refinement over the vertex/hyperedge incidence graph.

    Only vertex cells are individualized. Each leaf yields a certificate (the sorted
    hyperedges in vertex ranks); the smallest certificate is canonical. Automorphisms
    found from equal leaves prune children lying in an explored orbit.
    """

    def __init__(self, H: Hypergraph, budget: int):
        self.H = H
        self.k = H.k
        self.neighbors: List[List[int]] = [[] for _ in range(H.k + H.l)]
        for j, edge in enumerate(H.edge_sets):
            for v in edge:
                self.neighbors[v].append(H.k + j)
                self.neighbors[H.k + j].append(v)
        self.budget = budget
        self.nodes = 0
        self.best = None
        self.best_owner = None
        self.automorphisms: List[Tuple[int, ...]] = []

    @staticmethod
    def _renumber(keys) -> List[int]:
        order = {key: i for i, key in enumerate(sorted(set(keys)))}
        return [order[key] for key in keys]

    def refine(self, colors: List[int]) -> List[int]:
        while True:
            signatures = [(colors[x], tuple(sorted(colors[y] for y in self.neighbors[x])))
                          for x in range(len(colors))]
            refined = self._renumber(signatures)
            if max(refined, default=0) == max(colors, default=0):
                return refined
            colors = refined

    def individualize(self, colors: List[int], v: int) -> List[int]:
        return self._renumber([(c, 0 if x == v else 1) for x, c in enumerate(colors)])

    def target_cell(self, colors: List[int]) -> List[int]:
        cells: Dict[int, List[int]] = {}
        for v in range(self.k):
            cells.setdefault(colors[v], []).append(v)
        for color in sorted(cells):
            if len(cells[color]) > 1:
                return cells[color]
        return []

    def leaf(self, colors: List[int]):
        ranks = colors[:self.k]
        certificate = tuple(sorted(tuple(sorted(ranks[v] for v in edge)) for edge in self.H.edge_sets))
        if self.best is None or certificate < self.best:
            self.best = certificate
            owner = [0] * self.k
            for v, r in enumerate(ranks):
                owner[r] = v
            self.best_owner = owner
        elif certificate == self.best:
            self.automorphisms.append(tuple(self.best_owner[ranks[v]] for v in range(self.k)))

    def orbit_root(self, prefix: List[int]):
        parent = list(range(self.k))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.automorphisms:
            if any(g[p] != p for p in prefix):
                continue
            for v, w in enumerate(g):
                a, b = find(v), find(w)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        return find

    def branch(self, colors: List[int], prefix: List[int]):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceededError("canonical_form", self.budget)
        colors = self.refine(colors)
        cell = self.target_cell(colors)
        if not cell:
            self.leaf(colors)
            return
        explored: List[int] = []
        for v in cell:
            if explored:
                find = self.orbit_root(prefix)
                if find(v) in {find(u) for u in explored}:
                    continue
            self.branch(self.individualize(colors, v), prefix + [v])
            explored.append(v)

    def run(self) -> Tuple[Tuple[int, ...], ...]:
        self.branch([0] * self.k + [1] * self.H.l, [])
        logger.debug("canonical form of %s: %d search nodes, %d automorphisms",
                     self.H.size, self.nodes, len(self.automorphisms))
        return self.best


def canonical_form(H: Hypergraph, budget: Optional[int] = None) -> CanonicalForm:
    search = _CanonicalSearch(H, budget or DEFAULT_CANONICAL_BUDGET)
    certificate = search.run()
    canonical = make_hypergraph(certificate, n=H.n, labels=[encode_label(i) for i in range(H.k)])
    text = serialize_mmp(canonical)
    digest = hashlib.sha256(f"{H.n}:{text}".encode("utf-8")).hexdigest()
    return CanonicalForm(text=text, n=H.n, digest=digest)


def is_isomorphic(H1: Hypergraph, H2: Hypergraph, budget: Optional[int] = None) -> bool:
    if (H1.k, H1.l, H1.n) != (H2.k, H2.l, H2.n):
        return False
    if sorted(map(len, H1.edge_sets)) != sorted(map(len, H2.edge_sets)):
        return False
    if multiplicity_histogram(H1) != multiplicity_histogram(H2):
        return False
    return canonical_form(H1, budget) == canonical_form(H2, budget)
