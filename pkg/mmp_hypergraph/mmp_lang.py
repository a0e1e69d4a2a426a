import csv
import io
from collections import Counter
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from mmp_hypergraph.console import get_logger
from mmp_hypergraph.errors import MMPParseError
from mmp_hypergraph.models import Hypergraph, ValidationReport, Violation

logger = get_logger(__name__)

ALPHABET = (
    "123456789"
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "abcdefghijklmnopqrstuvwxyz"
    "!\"#$%&'()*-/:;<=>?@[\\]^_`{|}~"
)
PREFIX = "+"
RANK = {c: i for i, c in enumerate(ALPHABET)}

DOT_COLORS = (
    "red", "blue", "darkgreen", "orange", "purple", "brown",
    "magenta", "cyan4", "gold3", "gray40", "navy", "olivedrab",
)


def encode_label(index: int) -> str:
    if index < 0:
        raise ValueError(f"vertex index must be non-negative, got {index}")
    depth, rank = divmod(index, len(ALPHABET))
    return PREFIX * depth + ALPHABET[rank]


def decode_label(token: str) -> int:
    base = token.lstrip(PREFIX)
    if len(base) != 1 or base not in RANK:
        raise ValueError(f"not a vertex label: {token!r}")
    return (len(token) - 1) * len(ALPHABET) + RANK[base]


def make_hypergraph(edges: Iterable[Sequence[int]], n: Optional[int] = None,
                    labels: Optional[Sequence[str]] = None) -> Hypergraph:
    """Builds a Hypergraph from index lists; labels default to the ASCII codes of the indices."""
    edges = tuple(tuple(edge) for edge in edges)
    if labels is None:
        k = max((max(edge) for edge in edges if edge), default=-1) + 1
        labels = [encode_label(i) for i in range(k)]
    max_size = max((len(edge) for edge in edges), default=0)
    if n is None:
        n = max(3, max_size)
    return Hypergraph(edges=edges, labels=tuple(labels), n=n)


def parse_mmp(text: str, n: Optional[int] = None) -> Hypergraph:
    """Parses one MMP string ("12,23,34,45,51.") into a Hypergraph.

    Whitespace between tokens is ignored. Vertices are registered in order of first
    occurrence and keep their labels; hyperedges keep their written order.
    """
    index: Dict[str, int] = {}
    labels: List[str] = []
    edges: List[Tuple[int, ...]] = []
    current: List[int] = []
    prefix = 0
    prefix_start = 0
    edge_start = 0
    terminated = None

    for pos, ch in enumerate(text):
        if terminated is not None:
            if not ch.isspace():
                raise MMPParseError(pos, f"unexpected {ch!r} after terminating '.'")
            continue
        if ch.isspace():
            continue
        if ch == PREFIX:
            if not prefix:
                prefix_start = pos
            prefix += 1
            continue
        if ch in (",", "."):
            if prefix:
                raise MMPParseError(prefix_start, "dangling '+' prefix")
            if not current:
                raise MMPParseError(pos, "empty hyperedge")
            edges.append(tuple(current))
            current = []
            edge_start = pos + 1
            if ch == ".":
                terminated = pos
            continue
        if ch not in RANK:
            raise MMPParseError(pos, f"illegal character {ch!r}")
        label = PREFIX * prefix + ch
        prefix = 0
        v = index.get(label)
        if v is None:
            v = index[label] = len(labels)
            labels.append(label)
        if v in current:
            raise MMPParseError(pos, f"vertex {label!r} repeated in hyperedge starting at {edge_start}")
        current.append(v)

    if terminated is None:
        if prefix:
            raise MMPParseError(prefix_start, "dangling '+' prefix")
        raise MMPParseError(len(text), "unterminated string, missing '.'")

    max_size = max(len(edge) for edge in edges)
    if n is None:
        n = max(3, max_size)
    elif n < 3:
        raise MMPParseError(terminated, f"dimension {n} is below 3")
    elif n < max_size:
        raise MMPParseError(terminated, f"dimension {n} is smaller than the largest hyperedge ({max_size})")
    return Hypergraph(edges=tuple(edges), labels=tuple(labels), n=n)


def iter_mmp_strings(text: str) -> Iterator[Tuple[int, str]]:
    """Yields (line number, string) for every MMP string in a file's text.

    Lines starting with '#' between strings are comments. A string may span lines
    and several strings may share a line; each ends at its '.'.
    """
    buffer: List[str] = []
    start_line = 0
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not buffer and line.lstrip().startswith("#"):
            continue
        for ch in line:
            if not buffer:
                if ch.isspace():
                    continue
                start_line = line_no
            buffer.append(ch)
            if ch == ".":
                yield start_line, "".join(buffer)
                buffer = []
        if buffer:
            buffer.append("\n")
    leftover = "".join(buffer).strip()
    if leftover:
        yield start_line, leftover


def serialize_mmp(H: Hypergraph) -> str:
    return ",".join("".join(H.labels[v] for v in edge) for edge in H.edges) + "."


def _edge_locus(H: Hypergraph, j: int) -> str:
    return f"hyperedge {j} ({''.join(H.edge_labels(j))})"


def validate(H: Hypergraph, strict: bool = False) -> ValidationReport:
    report = ValidationReport(strict=strict)
    add = report.violations.append
    n = H.n

    for v, incident in enumerate(H.vertex_edges):
        if not incident:
            add(Violation("orphan-vertex", f"vertex {H.labels[v]}", "vertex belongs to no hyperedge"))

    for j, edge in enumerate(H.edges):
        if not 2 <= len(edge) <= n:
            add(Violation("edge-size", _edge_locus(H, j), f"{len(edge)} vertices, expected 2..{n}"))
        if len(set(edge)) != len(edge):
            add(Violation("repeated-vertex", _edge_locus(H, j), "a vertex occurs twice"))

    shared = Counter()
    for incident in H.vertex_edges:
        for pair in combinations(incident, 2):
            shared[pair] += 1
    duplicates = []
    for (i, j), count in sorted(shared.items()):
        if H.edge_sets[i] == H.edge_sets[j]:
            duplicates.append((i, j))
            continue
        if count > n - 2:
            add(Violation("intersection", f"hyperedges {i} and {j}",
                          f"share {count} vertices, at most {n - 2} allowed"))

    if strict:
        if H.l >= 2:
            for j, edge in enumerate(H.edge_sets):
                attached = sum(1 for v in edge if len(H.vertex_edges[v]) >= 2)
                if attached < 2:
                    add(Violation("attachment", _edge_locus(H, j),
                                  f"shares {attached} vertices with the rest of the hypergraph"))
        if len(_components(H)) > 1:
            add(Violation("disconnected", "hypergraph", "hypergraph is not connected"))
        for i, j in duplicates:
            add(Violation("duplicate-hyperedge", f"hyperedges {i} and {j}", "identical vertex sets"))
    elif duplicates:
        logger.warning("%d duplicate hyperedge pair(s), e.g. hyperedges %d and %d",
                       len(duplicates), *duplicates[0])
    return report


def export_incidence(H: Hypergraph) -> np.ndarray:
    matrix = np.zeros((H.k, H.l), dtype=np.int8)
    for j, edge in enumerate(H.edges):
        matrix[list(edge), j] = 1
    return matrix


def incidence_csv(H: Hypergraph) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["vertex"] + list(range(H.l)))
    for label, row in zip(H.labels, export_incidence(H)):
        writer.writerow([label] + row.tolist())
    return out.getvalue()


def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(H: Hypergraph) -> str:
    """Renders vertices as nodes and every hyperedge as a coloured path through its vertices."""
    lines = ["graph mmp {", "  node [shape=circle];"]
    for label in H.labels:
        lines.append(f"  {_dot_id(label)};")
    for j, edge in enumerate(H.edges):
        color = DOT_COLORS[j % len(DOT_COLORS)]
        path = " -- ".join(_dot_id(H.labels[v]) for v in edge)
        lines.append(f'  {path} [color="{color}", label="{j}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def restrict_to_edges(H: Hypergraph, edge_indices: Iterable[int]) -> Hypergraph:
    """The hypergraph made of the selected hyperedges; unused vertices are dropped, labels kept."""
    chosen = sorted(set(edge_indices))
    used = sorted({v for j in chosen for v in H.edges[j]})
    remap = {v: i for i, v in enumerate(used)}
    edges = tuple(tuple(remap[v] for v in H.edges[j]) for j in chosen)
    return Hypergraph(edges=edges, labels=tuple(H.labels[v] for v in used), n=H.n)


def _components(H: Hypergraph) -> List[List[int]]:
    G = nx.Graph()
    G.add_nodes_from(("e", j) for j in range(H.l))
    for j, edge in enumerate(H.edges):
        G.add_edges_from((("e", j), ("v", v)) for v in edge)
    return [sorted(j for kind, j in part if kind == "e") for part in nx.connected_components(G)]


def decompose_components(H: Hypergraph) -> List[Hypergraph]:
    parts = [(edges[0], restrict_to_edges(H, edges)) for edges in _components(H) if edges]
    parts.sort(key=lambda item: (-item[1].l, -item[1].k, item[0]))
    return [part for _, part in parts]
