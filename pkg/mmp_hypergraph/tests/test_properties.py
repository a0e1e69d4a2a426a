import random
import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from mmp_hypergraph.assign_engine import classical_indices_exact, is_binary
from mmp_hypergraph.errors import HypergraphError
from mmp_hypergraph.hypergraph_core import canonical_form, multiplicities, relabel, strip_unishared
from mmp_hypergraph.inequalities import lp_alpha_star, quantum_index
from mmp_hypergraph.mmp_lang import make_hypergraph, parse_mmp, serialize_mmp, validate


@st.composite
def hypergraphs(draw, max_vertices=16, max_edges=8):
    """MMP hypergraphs in 3 to 5 dimensions: hyperedges of 2..n vertices, any two sharing at most n-2."""
    n = draw(st.integers(3, 5))
    candidates = draw(st.lists(
        st.frozensets(st.integers(0, max_vertices - 1), min_size=2, max_size=n),
        min_size=1, max_size=max_edges))
    edges = []
    for edge in candidates:
        if all(edge != kept and len(edge & kept) <= n - 2 for kept in edges):
            edges.append(edge)
    used = sorted(set().union(*edges))
    remap = {v: i for i, v in enumerate(used)}
    order = draw(st.randoms(use_true_random=False))
    ordered = []
    for edge in edges:
        members = [remap[v] for v in edge]
        order.shuffle(members)
        ordered.append(members)
    return make_hypergraph(ordered, n=n)


def subset_table(H):
    """Every vertex subset as a bit mask, with the number of its vertices in each hyperedge."""
    masks = np.arange(1 << H.k, dtype=np.int64)
    bits = np.array([(masks >> v) & 1 for v in range(H.k)])
    hits = np.array([bits[list(edge)].sum(axis=0) for edge in H.edge_sets])
    return masks, bits, hits


def maximal_admissible_table(H):
    """Sizes and hyperedge counts of all maximal admissible sets."""
    masks, bits, hits = subset_table(H)
    admissible = (hits <= 1).all(axis=0)
    closed = [{v}.union(*(H.edge_sets[j] for j in H.vertex_edges[v])) for v in range(H.k)]
    dominated = np.array([(masks & sum(1 << u for u in c)) != 0 for c in closed]).all(axis=0)
    maximal = admissible & dominated
    return bits.sum(axis=0)[maximal], (hits >= 1).sum(axis=0)[maximal]


class TestAgainstBruteForce(unittest.TestCase):

    @given(hypergraphs())
    def test_generated_hypergraphs_are_valid(self, H):
        self.assertTrue(validate(H).valid)

    @given(hypergraphs())
    def test_strings_parse_back(self, H):
        text = serialize_mmp(H)
        back = parse_mmp(text, H.n)
        self.assertEqual(serialize_mmp(back), text)
        self.assertEqual(back.size, H.size)

    @settings(max_examples=200, deadline=None)
    @given(hypergraphs())
    def test_binary_verdict(self, H):
        _, _, hits = subset_table(H)
        expected = bool((hits == 1).all(axis=0).any())
        binary, witness = is_binary(H)
        self.assertEqual(binary, expected)
        if binary:
            self.assertTrue(witness.is_exact(H))

    @settings(max_examples=200, deadline=None)
    @given(hypergraphs())
    def test_exact_indices(self, H):
        sizes, edges_hit = maximal_admissible_table(H)
        report = classical_indices_exact(H)
        self.assertEqual(report.hi_max, sizes.max())
        self.assertEqual(report.hi_min, sizes.min())
        self.assertEqual(report.l_max, edges_hit.max())
        self.assertEqual(report.l_min, edges_hit.min())
        self.assertEqual(report.hi_m_max, report.l_max)

    @given(hypergraphs())
    def test_lp_bounds_the_independence_number(self, H):
        lp = lp_alpha_star(H)
        self.assertGreaterEqual(lp.value, classical_indices_exact(H).hi_max)
        self.assertLessEqual(lp.value, H.k)
        for edge in H.edge_sets:
            self.assertLessEqual(sum(lp.solution[v] for v in edge), 1)
        self.assertEqual(quantum_index(H), H.l)

    @given(hypergraphs(max_vertices=10), st.integers(0, 2 ** 32 - 1))
    def test_canonical_form_ignores_labelling(self, H, seed):
        rng = random.Random(seed)
        permutation = list(range(H.k))
        rng.shuffle(permutation)
        edge_order = list(range(H.l))
        rng.shuffle(edge_order)
        self.assertEqual(canonical_form(H), canonical_form(relabel(H, permutation, edge_order)))

    @given(hypergraphs())
    def test_stripping_to_fixpoint_leaves_shared_vertices(self, H):
        try:
            stripped = strip_unishared(H, fixpoint=True)
        except HypergraphError:
            return
        self.assertTrue(all(m >= 2 for m in multiplicities(stripped).values()))
        if is_binary(stripped)[0]:
            self.assertTrue(is_binary(H)[0])


if __name__ == '__main__':
    unittest.main()
