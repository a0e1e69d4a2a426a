"""Complex vectors for MMP vertices: component sets, coordinatizations, master sets and operator checks."""
import cmath
import itertools
import math
import multiprocessing
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from mmp_hypergraph.console import get_logger
from mmp_hypergraph.errors import BudgetExceededError, ComponentParseError, CoordinatizationError
from mmp_hypergraph.mmp_lang import encode_label, make_hypergraph
from mmp_hypergraph.models import Hypergraph

logger = get_logger(__name__)

DEFAULT_EPS = 1e-10
DEFAULT_ENUMERATION_BUDGET = 10 ** 7
DEFAULT_VECFIND_BUDGET = 2_000_000
MAX_SIGN_VERTICES = 24

OMEGA = cmath.exp(2j * math.pi / 3)

# name -> (value, Gaussian form (a, b) = a + bi, Eisenstein form (a, b) = a + bw)
NAMED_COMPONENTS = {
    "i": (1j, (0, 1), None),
    "w": (OMEGA, None, (0, 1)),
    "w2": (OMEGA.conjugate(), None, (-1, -1)),
    "r2": (math.sqrt(2), None, None),
    "r3": (math.sqrt(3), None, None),
    "r5": (math.sqrt(5), None, None),
    "tau": ((1 + math.sqrt(5)) / 2, None, None),
}

_TOKEN = re.compile(r"^([+-]?)(\d+(?:\.\d*)?|\.\d+)?\*?(i|w2|w|r2|r3|r5|tau)?$")


@dataclass(frozen=True)
class Component:
    token: str
    value: complex
    gaussian: Optional[Tuple[int, int]] = None
    eisenstein: Optional[Tuple[int, int]] = None

    @property
    def is_zero(self) -> bool:
        return self.value == 0


def parse_component(token: str) -> Component:
    """Parses one scalar literal such as "1", "-0.5", "i", "w2", "-r2" or "2w"."""
    text = token.strip().replace(" ", "")
    match = _TOKEN.match(text)
    if not text or match is None or (match.group(2) is None and match.group(3) is None):
        raise ComponentParseError(f"unknown component literal {token!r}")
    sign, number, name = match.groups()
    scale = -1 if sign == "-" else 1
    integral = number is not None and "." not in number
    coefficient = int(number) if integral else (float(number) if number is not None else 1)
    if name is None:
        value = complex(scale * coefficient)
        exact = (scale * coefficient, 0) if integral else None
        return Component(text, value, exact, exact)
    named, gaussian, eisenstein = NAMED_COMPONENTS[name]
    factor = scale * coefficient
    value = complex(factor * named)
    if not isinstance(factor, int):
        return Component(text, value)
    if gaussian is not None:
        gaussian = (factor * gaussian[0], factor * gaussian[1])
    if eisenstein is not None:
        eisenstein = (factor * eisenstein[0], factor * eisenstein[1])
    return Component(text, value, gaussian, eisenstein)


@dataclass(frozen=True)
class ComponentSet:
    atoms: Tuple[Component, ...]
    eps: float = DEFAULT_EPS

    @property
    def tokens(self) -> List[str]:
        return [atom.token for atom in self.atoms]

    def __len__(self):
        return len(self.atoms)


def parse_components(spec: str, eps: float = DEFAULT_EPS) -> ComponentSet:
    """Parses "0,±1,2" style lists; "±x" stands for "x,-x" and near-equal atoms are merged."""
    atoms: List[Component] = []
    for raw in spec.split(","):
        raw = raw.strip()
        if not raw:
            continue
        tokens = [raw[1:], "-" + raw[1:]] if raw.startswith("±") else [raw]
        for token in tokens:
            atom = parse_component(token)
            if any(abs(atom.value - other.value) <= eps for other in atoms):
                logger.debug("component %s duplicates an earlier one", token)
                continue
            atoms.append(atom)
    if not atoms:
        raise ComponentParseError(f"no components in {spec!r}")
    return ComponentSet(tuple(atoms), eps)


def _conj_gaussian(z):
    return (z[0], -z[1])


def _mul_gaussian(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _conj_eisenstein(z):
    return (z[0] - z[1], -z[1])


def _mul_eisenstein(x, y):
    # w**2 = -1 - w
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0] - x[1] * y[1])


def _exact_inner(u, v, conj, mul) -> Tuple[int, int]:
    total = (0, 0)
    for a, b in zip(u, v):
        term = mul(conj(a), b)
        total = (total[0] + term[0], total[1] + term[1])
    return total


@dataclass(frozen=True)
class CVector:
    """An n-dimensional complex vector, with exact integer forms when its entries allow them."""
    entries: Tuple[complex, ...]
    gaussian: Optional[Tuple[Tuple[int, int], ...]] = None
    eisenstein: Optional[Tuple[Tuple[int, int], ...]] = None
    tokens: Optional[Tuple[str, ...]] = None

    @classmethod
    def from_components(cls, components: Sequence[Component]) -> "CVector":
        gaussian = tuple(c.gaussian for c in components)
        eisenstein = tuple(c.eisenstein for c in components)
        return cls(
            entries=tuple(c.value for c in components),
            gaussian=gaussian if all(z is not None for z in gaussian) else None,
            eisenstein=eisenstein if all(z is not None for z in eisenstein) else None,
            tokens=tuple(c.token for c in components),
        )

    @classmethod
    def from_tokens(cls, tokens: Sequence[str]) -> "CVector":
        return cls.from_components([parse_component(t) for t in tokens])

    @classmethod
    def from_values(cls, values: Iterable[complex]) -> "CVector":
        entries = tuple(complex(x) for x in values)
        if all(z.real.is_integer() and z.imag.is_integer() for z in entries):
            gaussian = tuple((int(z.real), int(z.imag)) for z in entries)
            eisenstein = gaussian if all(b == 0 for _, b in gaussian) else None
            return cls(entries, gaussian, eisenstein)
        return cls(entries)

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=complex)

    @property
    def is_zero(self) -> bool:
        return all(z == 0 for z in self.entries)

    def inner(self, other: "CVector") -> complex:
        """Conjugate-linear in the first argument."""
        return complex(np.vdot(self.array, other.array))

    def is_orthogonal(self, other: "CVector", eps: float = DEFAULT_EPS) -> bool:
        if self.gaussian is not None and other.gaussian is not None:
            return _exact_inner(self.gaussian, other.gaussian, _conj_gaussian, _mul_gaussian) == (0, 0)
        if self.eisenstein is not None and other.eisenstein is not None:
            return _exact_inner(self.eisenstein, other.eisenstein, _conj_eisenstein, _mul_eisenstein) == (0, 0)
        u, v = self.array, other.array
        return abs(np.vdot(u, v)) <= eps * np.linalg.norm(u) * np.linalg.norm(v)

    def canonical(self) -> np.ndarray:
        """Divides by the first entry of largest modulus so that entry becomes 1."""
        u = self.array
        moduli = np.abs(u)
        pivot = int(np.argmax(moduli >= moduli.max() * (1 - 1e-12)))
        return u / u[pivot]

    def canonical_key(self, eps: float = DEFAULT_EPS) -> Tuple[Tuple[float, float], ...]:
        digits = max(1, int(round(-math.log10(eps))) - 2)
        return tuple((round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0) for z in self.canonical())

    def to_pairs(self) -> List[List[float]]:
        return [[z.real, z.imag] for z in self.entries]


def _canonical_key_of(values: np.ndarray, eps: float) -> Tuple[Tuple[float, float], ...]:
    return CVector(tuple(complex(z) for z in values)).canonical_key(eps)


@dataclass
class Coordinatization:
    """Vertex index -> CVector, all of dimension n."""
    vectors: Dict[int, CVector]
    n: int

    def __getitem__(self, v: int) -> CVector:
        return self.vectors[v]

    def __contains__(self, v: int) -> bool:
        return v in self.vectors

    def to_json(self, H: Hypergraph) -> Dict[str, List[List[float]]]:
        return {H.labels[v]: self.vectors[v].to_pairs() for v in sorted(self.vectors)}


def _entry_to_component(entry) -> Component:
    if isinstance(entry, str):
        return parse_component(entry)
    if isinstance(entry, (int, float)):
        if float(entry).is_integer():
            return parse_component(str(int(entry)))
        return Component(repr(entry), complex(entry))
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        value = complex(float(entry[0]), float(entry[1]))
        if value.real.is_integer() and value.imag.is_integer():
            exact = (int(value.real), int(value.imag))
            return Component(f"{entry[0]},{entry[1]}", value, exact, exact if exact[1] == 0 else None)
        return Component(f"{entry[0]},{entry[1]}", value)
    raise CoordinatizationError(f"cannot read vector entry {entry!r}")


def load_coordinatization(H: Hypergraph, data: Mapping[str, Sequence], n: Optional[int] = None) -> Coordinatization:
    """Reads a label -> entries mapping; entries are literals ("w2") or [re, im] pairs."""
    n = n or H.n
    vectors = {}
    index = {label: v for v, label in enumerate(H.labels)}
    for label, entries in data.items():
        if label not in index:
            raise CoordinatizationError(f"vector given for unknown vertex {label!r}")
        if len(entries) != n:
            raise CoordinatizationError(f"vector of vertex {label!r} has {len(entries)} entries, expected {n}")
        vector = CVector.from_components([_entry_to_component(e) for e in entries])
        if vector.is_zero:
            raise CoordinatizationError(f"vertex {label!r} has the zero vector")
        vectors[index[label]] = vector
    return Coordinatization(vectors, n)


def dump_coordinatization(H: Hypergraph, C: Coordinatization) -> Dict[str, List[List[float]]]:
    return C.to_json(H)


def verify_coordinatization(H: Hypergraph, C: Coordinatization,
                            eps: float = DEFAULT_EPS) -> Tuple[bool, List[Tuple[int, int, int]]]:
    """Checks mutual orthogonality inside every hyperedge; returns all (hyperedge, u, v) violations."""
    missing = [H.labels[v] for v in range(H.k) if v not in C]
    if missing:
        raise CoordinatizationError(f"no vector for vertices {''.join(missing)}")
    for v, vector in C.vectors.items():
        if vector.dim != C.n:
            raise CoordinatizationError(f"vector of vertex {H.labels[v]} has dimension {vector.dim}, expected {C.n}")
    violations = []
    for j, edge in enumerate(H.edges):
        for u, v in itertools.combinations(edge, 2):
            if not C[u].is_orthogonal(C[v], eps):
                violations.append((j, u, v))
    return not violations, violations


def enumerate_vectors(cs: ComponentSet, n: int, budget: Optional[int] = None) -> List[CVector]:
    """All nonzero n-tuples over the atoms, one representative per projective class."""
    budget = budget or DEFAULT_ENUMERATION_BUDGET
    if len(cs) ** n > budget:
        raise BudgetExceededError("enumerate_vectors", budget)
    seen = set()
    vectors = []
    for combo in itertools.product(cs.atoms, repeat=n):
        if all(atom.is_zero for atom in combo):
            continue
        vector = CVector.from_components(combo)
        key = vector.canonical_key(cs.eps)
        if key in seen:
            continue
        seen.add(key)
        vectors.append(vector)
    logger.debug("%d projective classes from %d atoms in dimension %d", len(vectors), len(cs), n)
    return vectors


def _orthogonality_masks(vectors: Sequence[CVector], eps: float) -> List[int]:
    """Bit j of masks[i] is set when vectors i and j are orthogonal."""
    if not vectors:
        return []
    M = np.array([v.entries for v in vectors], dtype=complex)
    gram = np.abs(M.conj() @ M.T)
    norms = np.linalg.norm(M, axis=1)
    orthogonal = gram <= eps * np.outer(norms, norms)
    np.fill_diagonal(orthogonal, False)
    masks = []
    for row in orthogonal:
        masks.append(sum(1 << int(j) for j in np.flatnonzero(row)))
    return masks


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _bases_from(first: int, masks: Sequence[int], n: int) -> List[Tuple[int, ...]]:
    """All orthogonal n-sets whose smallest member is `first`."""
    found = []

    def extend(clique: List[int], candidates: int):
        if len(clique) == n:
            found.append(tuple(clique))
            return
        if candidates.bit_count() < n - len(clique):
            return
        for v in _bits(candidates):
            above = candidates & ~((1 << (v + 1)) - 1)
            extend(clique + [v], above & masks[v])

    extend([first], masks[first] & ~((1 << (first + 1)) - 1))
    return found


def _bases_chunk(firsts: Sequence[int], masks: Sequence[int], n: int) -> List[Tuple[int, ...]]:
    bases = []
    for first in firsts:
        bases.extend(_bases_from(first, masks, n))
    return bases


def generate_master(cs: ComponentSet, n: int, budget: Optional[int] = None,
                    workers: int = 1) -> Tuple[Hypergraph, Coordinatization]:
    """The master hypergraph of all orthogonal n-bases built from the component set."""
    vectors = enumerate_vectors(cs, n, budget)
    masks = _orthogonality_masks(vectors, cs.eps)
    firsts = list(range(len(vectors)))
    if workers > 1:
        chunks = [firsts[i::workers] for i in range(workers)]
        with multiprocessing.Pool(workers) as pool:
            parts = pool.starmap(_bases_chunk, [(chunk, masks, n) for chunk in chunks])
        bases = [basis for part in parts for basis in part]
    else:
        bases = _bases_chunk(firsts, masks, n)
    bases.sort()
    if not bases:
        raise CoordinatizationError(f"no orthogonal {n}-basis can be built from {', '.join(cs.tokens)}")
    used = sorted({v for basis in bases for v in basis})
    remap = {v: i for i, v in enumerate(used)}
    H = make_hypergraph([[remap[v] for v in basis] for basis in bases], n=n,
                        labels=[encode_label(i) for i in range(len(used))])
    C = Coordinatization({remap[v]: vectors[v] for v in used}, n)
    logger.info("master from {%s} in dimension %d: %s", ", ".join(cs.tokens), n, H.size)
    return H, C


@dataclass
class VecfindResult:
    coordinatization: Optional[Coordinatization]
    complete: bool
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.coordinatization is not None


def _complement_ray(vectors: Sequence[CVector]) -> np.ndarray:
    A = np.array([v.entries for v in vectors], dtype=complex).conj()
    _, _, vh = np.linalg.svd(A)
    return vh[-1].conj()


class _VectorSearch:
    """Backtracking assignment of enumerated vectors to vertices.

    Vertices are taken in order of most already-assigned neighbours. Each vertex gets a
    vector unused so far and orthogonal to its assigned neighbours. For a hyperedge one
    vertex short of full, the missing direction is fixed once its vectors are known; it
    may coincide neither with a vertex vector nor with another hyperedge's missing
    direction, since filling would otherwise merge distinct vertices.
    """

    def __init__(self, H: Hypergraph, vectors: List[CVector], eps: float, budget: int,
                 seed: Optional[int]):
        self.H = H
        self.vectors = vectors
        self.eps = eps
        self.budget = budget
        self.nodes = 0
        self.masks = _orthogonality_masks(vectors, eps)
        self.keys = [v.canonical_key(eps) for v in vectors]
        self.key_index = {key: i for i, key in enumerate(self.keys)}
        self.neighbors = [set() for _ in range(H.k)]
        for edge in H.edge_sets:
            for u in edge:
                self.neighbors[u] |= edge - {u}
        order = np.arange(len(vectors)) if seed is None else np.random.default_rng(seed).permutation(len(vectors))
        self.rank = {int(i): r for r, i in enumerate(order)}
        self.assigned: Dict[int, int] = {}
        self.used = 0
        self.reserved_keys: Dict[tuple, int] = {}
        self.exhausted = False

    def next_vertex(self) -> int:
        best, best_score = None, None
        for v in range(self.H.k):
            if v in self.assigned:
                continue
            score = (sum(1 for u in self.neighbors[v] if u in self.assigned), len(self.neighbors[v]))
            if best_score is None or score > best_score:
                best, best_score = v, score
        return best

    def candidates(self, v: int) -> List[int]:
        mask = (1 << len(self.vectors)) - 1
        mask &= ~self.used
        for u in self.neighbors[v]:
            if u in self.assigned:
                mask &= self.masks[self.assigned[u]]
        reserved = {self.key_index[key] for key in self.reserved_keys if key in self.key_index}
        return sorted((i for i in _bits(mask) if i not in reserved), key=self.rank.__getitem__)

    def close_edges(self, v: int) -> Optional[List[tuple]]:
        """Reserves the missing directions of hyperedges completed by v; None on a clash."""
        added = []
        for j in self.H.vertex_edges[v]:
            edge = self.H.edge_sets[j]
            if len(edge) != self.H.n - 1 or any(u not in self.assigned for u in edge):
                continue
            ray = _complement_ray([self.vectors[self.assigned[u]] for u in edge])
            key = _canonical_key_of(ray, self.eps)
            clash = key in self.reserved_keys
            if not clash and key in self.key_index:
                clash = bool(self.used >> self.key_index[key] & 1)
            if clash:
                for key in added:
                    del self.reserved_keys[key]
                return None
            self.reserved_keys[key] = j
            added.append(key)
        return added

    def branch(self) -> bool:
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted = True
            return False
        v = self.next_vertex()
        if v is None:
            return True
        for i in self.candidates(v):
            self.assigned[v] = i
            self.used |= 1 << i
            added = self.close_edges(v)
            if added is not None:
                if self.branch():
                    return True
                for key in added:
                    del self.reserved_keys[key]
            if self.exhausted:
                del self.assigned[v]
                self.used &= ~(1 << i)
                return False
            del self.assigned[v]
            self.used &= ~(1 << i)
        return False


def vecfind(H: Hypergraph, cs: ComponentSet, budget: Optional[int] = None, seed: Optional[int] = None,
            enumeration_budget: Optional[int] = None) -> VecfindResult:
    """Searches a coordinatization of H with vectors built from the component set.

    `complete` is true when the search finished within budget, so a missing
    coordinatization then means none exists over these components.
    """
    vectors = enumerate_vectors(cs, H.n, enumeration_budget)
    search = _VectorSearch(H, vectors, cs.eps, budget or DEFAULT_VECFIND_BUDGET, seed)
    found = search.branch()
    logger.debug("vecfind on %s: %d nodes, found=%s", H.size, search.nodes, found)
    if not found:
        return VecfindResult(None, complete=not search.exhausted, nodes=search.nodes)
    C = Coordinatization({v: vectors[i] for v, i in search.assigned.items()}, H.n)
    return VecfindResult(C, complete=True, nodes=search.nodes)


def _snap(values: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    rounded = np.round(values.real) + 1j * np.round(values.imag)
    return np.where(np.abs(values - rounded) <= tol, rounded, values)


def _complement_basis(vectors: Sequence[CVector], n: int, eps: float) -> List[CVector]:
    """Orthogonal basis of the complement of span(vectors): standard basis vectors
    projected out of the span, in order, Gram-Schmidt style."""
    basis = []
    for vector in vectors:
        w = vector.array.copy()
        for q in basis:
            w = w - np.vdot(q, w) * q
        norm = np.linalg.norm(w)
        if norm <= 1e-8 * np.linalg.norm(vector.array):
            raise CoordinatizationError("hyperedge vectors are linearly dependent")
        basis.append(w / norm)
    added = []
    for i in range(n):
        if len(basis) == n:
            break
        w = np.zeros(n, dtype=complex)
        w[i] = 1
        for q in basis:
            w = w - np.vdot(q, w) * q
        norm = np.linalg.norm(w)
        if norm <= 1e-8:
            continue
        q = w / norm
        basis.append(q)
        canonical = CVector(tuple(complex(z) for z in q)).canonical()
        added.append(CVector.from_values(_snap(canonical)))
    return added


def fill(H: Hypergraph, C: Coordinatization, eps: float = DEFAULT_EPS) -> Tuple[Hypergraph, Coordinatization]:
    """Completes every hyperedge to n vertices with fresh multiplicity-1 vertices."""
    ok, violations = verify_coordinatization(H, C, eps)
    if not ok:
        j, u, v = violations[0]
        raise CoordinatizationError(
            f"vectors of {H.labels[u]} and {H.labels[v]} in hyperedge {j} are not orthogonal")
    if H.is_full:
        return H, C
    labels = list(H.labels)
    taken = set(labels)
    codes = (encode_label(i) for i in itertools.count())
    vectors = dict(C.vectors)
    edges = []
    for edge in H.edges:
        if len(edge) > C.n:
            raise CoordinatizationError(f"hyperedge with {len(edge)} vertices exceeds dimension {C.n}")
        extended = list(edge)
        for vector in _complement_basis([C[v] for v in edge], C.n, eps):
            label = next(code for code in codes if code not in taken)
            taken.add(label)
            vectors[len(labels)] = vector
            extended.append(len(labels))
            labels.append(label)
        edges.append(extended)
    filled = make_hypergraph(edges, n=C.n, labels=labels)
    logger.debug("filled %s to %s", H.size, filled.size)
    return filled, Coordinatization(vectors, C.n)


def edge_operator_product(H: Hypergraph, C: Coordinatization, j: int) -> np.ndarray:
    """Product over the hyperedge, in its order, of O_v = 2 v v^dagger / <v, v> - I."""
    edge = H.edges[j]
    if len(edge) != C.n:
        raise CoordinatizationError(f"hyperedge {j} has {len(edge)} vertices, the product needs {C.n}")
    identity = np.eye(C.n, dtype=complex)
    product = identity
    for v in edge:
        u = C[v].array
        operator = 2 * np.outer(u, u.conj()) / np.vdot(u, u) - identity
        product = product @ operator
    return product


def verify_operator_identity(H: Hypergraph, C: Coordinatization, tol: float = 1e-9) -> bool:
    """Every full hyperedge multiplies out to (-1)**(n-1) I."""
    target = (-1) ** (C.n - 1) * np.eye(C.n)
    for j, edge in enumerate(H.edges):
        if len(edge) != C.n:
            continue
        if np.max(np.abs(edge_operator_product(H, C, j) - target)) > tol:
            logger.debug("operator identity fails on hyperedge %d", j)
            return False
    return True


def _sign(n: int) -> int:
    return -1 if n % 2 == 0 else 1


def quantum_operator_value(H: Hypergraph, C: Coordinatization) -> float:
    sigma = _sign(C.n)
    total = 0.0
    for j in range(H.l):
        total += sigma * np.trace(edge_operator_product(H, C, j)).real / C.n
    return total


def classical_operator_max(H: Hypergraph, chunk_bits: int = 16) -> Tuple[int, Tuple[int, ...]]:
    """Maximum over sign assignments s of sigma * sum over hyperedges of the product of s_v.

    Returns the value and the first maximizing assignment in binary counting order.
    """
    if H.k > MAX_SIGN_VERTICES:
        raise CoordinatizationError(f"{H.k} vertices is too many for exhaustive sign enumeration "
                                    f"(limit {MAX_SIGN_VERTICES})")
    sigma = _sign(H.n)
    shifts = np.arange(H.k, dtype=np.int64)
    edges = [list(edge) for edge in H.edge_sets]
    total = 1 << H.k
    step = 1 << min(chunk_bits, H.k)
    best, best_x = None, 0
    for start in range(0, total, step):
        x = np.arange(start, min(start + step, total), dtype=np.int64)
        bits = (x[:, None] >> shifts) & 1
        value = np.zeros(len(x), dtype=np.int64)
        for edge in edges:
            value += 1 - 2 * (bits[:, edge].sum(axis=1) & 1)
        value *= sigma
        i = int(np.argmax(value))
        if best is None or value[i] > best:
            best, best_x = int(value[i]), int(x[i])
    witness = tuple(-1 if best_x >> v & 1 else 1 for v in range(H.k))
    return best, witness
