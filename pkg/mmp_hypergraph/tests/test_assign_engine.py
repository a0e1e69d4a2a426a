import os
import unittest

from mmp_hypergraph.assign_engine import (classical_indices, classical_indices_exact, classical_indices_heuristic,
                                          find_criticals, grow_pipeline, has_parity_proof, is_binary, is_critical,
                                          strip_pipeline)
from mmp_hypergraph.catalog import FixtureCatalog
from mmp_hypergraph.errors import BudgetExceededError, HypergraphError
from mmp_hypergraph.hypergraph_core import is_isomorphic, multiplicities, strip_unishared
from mmp_hypergraph.mmp_lang import parse_mmp, serialize_mmp
from mmp_hypergraph.models import Assignment

SLOW = os.environ.get("MMP_SLOW_TESTS") == "1"
CATALOG = FixtureCatalog()


def fixture(name):
    return CATALOG.get(name).hypergraph()


class TestIsBinary(unittest.TestCase):

    def test_pentagon_is_not_binary(self):
        self.assertEqual(is_binary(fixture("pentagon-5-5")), (False, None))

    def test_filled_pentagon_is_binary_with_exact_witness(self):
        H = fixture("pentagon-10-5")
        binary, witness = is_binary(H)
        self.assertTrue(binary)
        self.assertTrue(witness.is_exact(H))

    def test_expected_verdicts(self):
        for f in CATALOG:
            if "binary" not in f.expected or f.name in ("gamma-232-108", "gamma-152-71", "5d-105-136-master"):
                continue
            with self.subTest(fixture=f.name):
                H = f.hypergraph()
                binary, witness = is_binary(H)
                self.assertEqual(binary, f.expected["binary"])
                if binary:
                    self.assertTrue(witness.is_exact(H))

    def test_budget(self):
        with self.assertRaises(BudgetExceededError) as cm:
            is_binary(fixture("ks-18-9"), budget=1)
        self.assertEqual(cm.exception.operation, "is_binary")


class TestClassicalIndices(unittest.TestCase):

    def test_exact_indices_of_small_fixtures(self):
        for f in CATALOG:
            H = f.hypergraph()
            if "indices" not in f.expected or H.k > 30:
                continue
            with self.subTest(fixture=f.name):
                values = classical_indices_exact(H).values()
                for key, expected in f.expected["indices"].items():
                    self.assertEqual(values[key], expected, key)

    def test_witnesses_realize_the_indices(self):
        H = fixture("ks-18-9")
        report = classical_indices_exact(H)
        m = multiplicities(H)
        witnesses = report.witnesses
        self.assertTrue(witnesses["HI_cM"].is_admissible(H))
        self.assertEqual(len(witnesses["HI_cM"].ones), report.hi_max)
        self.assertTrue(witnesses["HI_cm"].is_maximal(H))
        self.assertEqual(len(witnesses["HI_cm"].ones), report.hi_min)
        self.assertEqual(witnesses["l_cM"].edges_hit(H), report.l_max)
        self.assertTrue(witnesses["l_cm"].is_maximal(H))
        self.assertEqual(sum(m[v] for v in witnesses["l_cm"].ones), report.l_min)

    def test_weighted_maximum_equals_l_max(self):
        for name in ("pentagon-5-5", "yu-oh-13-16", "hypergraph-6-4"):
            report = classical_indices_exact(fixture(name))
            self.assertEqual(report.hi_m_max, report.l_max)

    def test_binary_hypergraph_reaches_l(self):
        for name in ("pentagon-10-5", "9-3", "7-3", "peres-mermin-9-6"):
            H = fixture(name)
            self.assertEqual(classical_indices_exact(H).l_max, H.l)

    def test_heuristic_bounds_the_exact_values(self):
        H = fixture("ks-18-9")
        report = classical_indices_heuristic(H, runs=500, seed=1)
        self.assertFalse(report.exact)
        self.assertEqual(report.runs_used, 500)
        self.assertLessEqual(report.hi_max, 4)
        self.assertGreaterEqual(report.hi_min, 3)
        self.assertLessEqual(report.l_max, 8)
        self.assertGreaterEqual(report.l_min, 6)
        self.assertTrue(report.witnesses["HI_cM"].is_maximal(H))

    def test_heuristic_is_reproducible(self):
        H = fixture("yu-oh-13-16")
        first = classical_indices_heuristic(H, runs=300, seed=7)
        second = classical_indices_heuristic(H, runs=300, seed=7)
        self.assertEqual(first, second)

    def test_heuristic_does_not_depend_on_workers(self):
        H = fixture("yu-oh-13-16")
        single = classical_indices_heuristic(H, runs=200, seed=3, workers=1)
        pooled = classical_indices_heuristic(H, runs=200, seed=3, workers=2)
        self.assertEqual(single, pooled)

    def test_budget_falls_back_to_heuristic(self):
        with self.assertLogs("mmp_hypergraph.assign_engine", level="WARNING"):
            report = classical_indices(fixture("ks-18-9"), mode="exact", runs=100, budget=1)
        self.assertFalse(report.exact)

    def test_bad_arguments(self):
        H = fixture("pentagon-5-5")
        with self.assertRaises(ValueError):
            classical_indices(H, mode="fast")
        with self.assertRaises(ValueError):
            classical_indices_heuristic(H, runs=0)

    def test_bub_has_a_maximal_set_hitting_22_hyperedges(self):
        H = fixture("bub-49-36")
        witness = Assignment(frozenset(H.index_of(label) for label in "7CRKjP9OdEY6aUi4X"))
        self.assertTrue(witness.is_maximal(H))
        self.assertEqual(witness.edges_hit(H), 22)

    def test_bub_heuristic_stays_within_the_exact_range(self):
        report = classical_indices_heuristic(fixture("bub-49-36"), runs=1000, seed=1)
        self.assertLessEqual(report.hi_max, 21)
        self.assertGreaterEqual(report.hi_min, 11)
        self.assertLessEqual(report.l_max, 35)
        self.assertGreaterEqual(report.l_min, 22)

    def test_peres_57_40_has_a_maximal_set_hitting_30_hyperedges(self):
        H = fixture("peres-57-40")
        witness = Assignment(frozenset(H.index_of(label) for label in "4AGPRVXZbdfghijklmnopqrstuv"))
        self.assertTrue(witness.is_maximal(H))
        self.assertEqual(witness.edges_hit(H), 30)

    @unittest.skipUnless(SLOW, "set MMP_SLOW_TESTS=1")
    def test_bub_exact(self):
        report = classical_indices_exact(fixture("bub-49-36"))
        self.assertEqual(report.as_tuple(), (21, 11, 35, 22))

    @unittest.skipUnless(SLOW, "set MMP_SLOW_TESTS=1")
    def test_larger_exact_indices(self):
        for f in CATALOG:
            H = f.hypergraph()
            if "indices" not in f.expected or H.k <= 30 or f.name == "bub-49-36":
                continue
            with self.subTest(fixture=f.name):
                values = classical_indices_exact(H).values()
                for key, expected in f.expected["indices"].items():
                    self.assertEqual(values[key], expected, key)


class TestCriticality(unittest.TestCase):

    def test_expected_criticality(self):
        for f in CATALOG:
            if "critical" not in f.expected or f.name.startswith("gamma"):
                continue
            with self.subTest(fixture=f.name):
                self.assertEqual(is_critical(f.hypergraph()), f.expected["critical"])

    def test_parity_proofs(self):
        self.assertTrue(has_parity_proof(fixture("ks-18-9")))
        self.assertTrue(has_parity_proof(fixture("pentagon-5-5")))
        self.assertFalse(has_parity_proof(fixture("9-3")))
        self.assertFalse(has_parity_proof(fixture("peres-mermin-9-18")))

    def test_critical_hypergraph_is_its_own_only_critical(self):
        H = fixture("ks-18-9")
        criticals = find_criticals(H, seed=0, attempts=3)
        self.assertEqual(len(criticals), 1)
        self.assertTrue(is_isomorphic(criticals[0], H))

    def test_criticals_of_a_non_critical_set(self):
        H = fixture("peres-mermin-9-18")
        criticals = find_criticals(H, seed=2, attempts=60)
        sizes = {critical.size for critical in criticals}
        self.assertLessEqual({"3-3", "5-5"}, sizes)
        self.assertLessEqual(sizes, {"3-3", "5-5", "7-7", "9-9"})
        self.assertEqual(len(criticals), len(sizes))
        for critical in criticals:
            self.assertTrue(is_critical(critical))

    @unittest.skipUnless(SLOW, "set MMP_SLOW_TESTS=1")
    def test_every_critical_of_peres_mermin_9_18(self):
        # 9-9 turns up in about one descent out of 500
        criticals = find_criticals(fixture("peres-mermin-9-18"), seed=2, attempts=6000)
        self.assertEqual(sorted(critical.size for critical in criticals), ["3-3", "5-5", "7-7", "9-9"])

    def test_find_criticals_is_reproducible(self):
        H = fixture("yu-oh-13-16")
        first = [serialize_mmp(c) for c in find_criticals(H, seed=5, attempts=4)]
        second = [serialize_mmp(c) for c in find_criticals(H, seed=5, attempts=4)]
        self.assertEqual(first, second)

    def test_binary_hypergraph_has_no_criticals(self):
        self.assertEqual(find_criticals(fixture("9-3")), [])

    def test_strip_pipeline(self):
        criticals = strip_pipeline(parse_mmp("12,23,31,3X."), attempts=2)
        self.assertEqual([serialize_mmp(c) for c in criticals], ["12,23,31."])

    def test_binary_yu_oh_strips_to_a_contextual_core(self):
        H = fixture("yu-oh-25-16")
        self.assertTrue(is_binary(H)[0])
        criticals = strip_pipeline(H, attempts=2)
        self.assertGreaterEqual(len(criticals), 1)
        for critical in criticals:
            self.assertTrue(is_critical(critical))
            self.assertEqual(critical.n, 3)

    def test_grow_pipeline(self):
        master = fixture("peres-mermin-9-18")
        criticals = grow_pipeline(master, [0], additions=2, seed=4, attempts=3)
        self.assertGreaterEqual(len(criticals), 1)
        for critical in criticals:
            self.assertTrue(is_critical(critical))

    def test_grow_pipeline_on_binary_master(self):
        self.assertEqual(grow_pipeline(fixture("pentagon-10-5"), [0, 1]), [])

    def test_grow_pipeline_arguments(self):
        master = fixture("peres-mermin-9-18")
        with self.assertRaises(HypergraphError):
            grow_pipeline(master, [])
        with self.assertRaises(ValueError):
            grow_pipeline(master, [0], additions=0)

    @unittest.skipUnless(SLOW, "set MMP_SLOW_TESTS=1")
    def test_gamma_152_71_is_critical(self):
        self.assertTrue(is_critical(fixture("gamma-152-71")))

    @unittest.skipUnless(SLOW, "set MMP_SLOW_TESTS=1")
    def test_gamma_232_108_descends_to_152_71(self):
        criticals = find_criticals(fixture("gamma-232-108"), seed=0, attempts=1)
        self.assertEqual([critical.size for critical in criticals], ["152-71"])
        self.assertTrue(is_isomorphic(strip_unishared(criticals[0]), strip_unishared(fixture("gamma-152-71"))))


if __name__ == '__main__':
    unittest.main()
