import cmath
import math
import os
import unittest

import numpy as np

from mmp_hypergraph.assign_engine import classical_indices_exact, is_binary, is_critical
from mmp_hypergraph.catalog import FixtureCatalog
from mmp_hypergraph.coordinatization import (OMEGA, CVector, classical_operator_max, dump_coordinatization,
                                             edge_operator_product, enumerate_vectors, fill, generate_master,
                                             load_coordinatization, parse_component, parse_components,
                                             quantum_operator_value, vecfind, verify_coordinatization,
                                             verify_operator_identity)
from mmp_hypergraph.errors import BudgetExceededError, ComponentParseError, CoordinatizationError
from mmp_hypergraph.hypergraph_core import is_isomorphic, multiplicity_histogram, strip_unishared
from mmp_hypergraph.mmp_lang import decompose_components, parse_mmp, serialize_mmp

SLOW = os.environ.get("MMP_SLOW_TESTS") == "1"
CATALOG = FixtureCatalog()
PENTAGON = "12,23,34,45,51."
KS_18_9 = "1234,4567,789A,ABCD,DEFG,GHI1,35CE,29BI,68FH."


class TestComponents(unittest.TestCase):

    def test_integers_are_exact(self):
        one = parse_component("1")
        self.assertEqual(one.value, 1)
        self.assertEqual(one.gaussian, (1, 0))
        self.assertEqual(parse_component("-2").eisenstein, (-2, 0))

    def test_named_components(self):
        self.assertEqual(parse_component("i").gaussian, (0, 1))
        self.assertEqual(parse_component("w").eisenstein, (0, 1))
        self.assertEqual(parse_component("-2w").eisenstein, (0, -2))
        self.assertAlmostEqual(parse_component("-2w").value, -2 * OMEGA)
        self.assertAlmostEqual(parse_component("w2").value, cmath.exp(-2j * math.pi / 3))
        self.assertAlmostEqual(parse_component("2*i").value, 2j)

    def test_irrational_components_have_no_exact_form(self):
        root = parse_component("-r2")
        self.assertAlmostEqual(root.value, -math.sqrt(2))
        self.assertIsNone(root.gaussian)
        self.assertIsNone(parse_component("0.5").eisenstein)

    def test_unknown_literals(self):
        for token in ("x", "", "1e3", "ww"):
            with self.subTest(token=token):
                with self.assertRaises(ComponentParseError):
                    parse_component(token)

    def test_plus_minus_shorthand_and_merging(self):
        self.assertEqual(parse_components("0,±1").tokens, ["0", "1", "-1"])
        self.assertEqual(parse_components("1, 1.0, -1").tokens, ["1", "-1"])
        with self.assertRaises(ComponentParseError):
            parse_components(" , ")


class TestVectors(unittest.TestCase):

    def test_eisenstein_orthogonality_is_exact(self):
        u = CVector.from_tokens(["1", "w", "w2"])
        v = CVector.from_tokens(["1", "1", "1"])
        self.assertIsNotNone(u.eisenstein)
        self.assertTrue(u.is_orthogonal(v))
        self.assertFalse(u.is_orthogonal(CVector.from_tokens(["1", "0", "0"])))

    def test_gaussian_orthogonality(self):
        u = CVector.from_tokens(["1", "i"])
        self.assertTrue(u.is_orthogonal(CVector.from_tokens(["1", "-i"])))
        self.assertFalse(u.is_orthogonal(CVector.from_tokens(["1", "i"])))

    def test_float_orthogonality(self):
        u = CVector.from_tokens(["r2", "1"])
        self.assertTrue(u.is_orthogonal(CVector.from_tokens(["1", "-r2"])))

    def test_projective_classes_share_a_key(self):
        key = CVector.from_tokens(["1", "1", "0"]).canonical_key()
        self.assertEqual(CVector.from_tokens(["2", "2", "0"]).canonical_key(), key)
        self.assertEqual(CVector.from_tokens(["-1", "-1", "0"]).canonical_key(), key)
        self.assertEqual(CVector.from_tokens(["w", "w", "0"]).canonical_key(), key)
        self.assertNotEqual(CVector.from_tokens(["1", "-1", "0"]).canonical_key(), key)

    def test_enumeration_counts_projective_classes(self):
        cs = parse_components("0,±1")
        self.assertEqual(len(enumerate_vectors(cs, 3)), 13)
        self.assertEqual(len(enumerate_vectors(cs, 4)), 40)

    def test_enumeration_budget(self):
        with self.assertRaises(BudgetExceededError) as cm:
            enumerate_vectors(parse_components("0,±1"), 4, budget=10)
        self.assertEqual(cm.exception.operation, "enumerate_vectors")


class TestMasterGeneration(unittest.TestCase):

    def test_four_dimensional_master_contains_peres_24_24(self):
        H, C = generate_master(parse_components("0,±1"), 4)
        self.assertEqual(H.size, "40-32")
        parts = decompose_components(H)
        self.assertEqual([part.size for part in parts], ["24-24", "16-8"])
        self.assertEqual(multiplicity_histogram(parts[0]), {4: 24})
        self.assertFalse(is_binary(parts[0])[0])
        self.assertTrue(verify_coordinatization(H, C)[0])
        self.assertEqual(classical_indices_exact(parts[0]).as_tuple(), (5, 3, 20, 12))
        self.assertFalse(is_critical(parts[0]))

    def test_three_dimensional_master_with_root_two(self):
        H, C = generate_master(parse_components("0,±1,±r2,3"), 3)
        self.assertEqual(H.size, "81-52")
        self.assertEqual(multiplicity_histogram(H), {1: 48, 2: 6, 3: 24, 8: 3})
        self.assertFalse(is_binary(H)[0])
        self.assertTrue(verify_coordinatization(H, C)[0])

    def test_five_dimensional_master(self):
        H, C = generate_master(parse_components("0,±1"), 5)
        self.assertEqual(H.size, "105-136")
        self.assertEqual(multiplicity_histogram(H), {4: 80, 10: 20, 32: 5})
        self.assertEqual(len(decompose_components(H)), 1)

    def test_small_binary_master(self):
        H, _ = generate_master(parse_components("0,1"), 3)
        self.assertEqual(serialize_mmp(H), "123.")
        self.assertTrue(is_binary(H)[0])

    def test_workers_do_not_change_the_master(self):
        cs = parse_components("0,±1")
        single, _ = generate_master(cs, 4, workers=1)
        pooled, _ = generate_master(cs, 4, workers=2)
        self.assertEqual(serialize_mmp(single), serialize_mmp(pooled))

    def test_no_basis(self):
        with self.assertRaises(CoordinatizationError):
            generate_master(parse_components("1"), 3)

    @unittest.skipUnless(SLOW, "set MMP_SLOW_TESTS=1")
    def test_five_dimensional_master_matches_the_catalog(self):
        H, _ = generate_master(parse_components("0,±1"), 5)
        self.assertTrue(is_isomorphic(H, CATALOG.get("5d-105-136-master").hypergraph()))

    @unittest.skipUnless(SLOW, "set MMP_SLOW_TESTS=1")
    def test_six_dimensional_master(self):
        H, _ = generate_master(parse_components("0,±1"), 6, workers=2)
        self.assertEqual(H.size, "332-1408")
        self.assertEqual([part.size for part in decompose_components(H)], ["236-1216", "96-192"])


class TestVecfind(unittest.TestCase):

    def test_pentagon_has_a_coordinatization(self):
        H = parse_mmp(PENTAGON)
        result = vecfind(H, parse_components("0,±1"))
        self.assertTrue(result.found)
        self.assertTrue(result.complete)
        self.assertTrue(verify_coordinatization(H, result.coordinatization)[0])

    def test_triangle_cannot_be_filled_in_three_dimensions(self):
        result = vecfind(parse_mmp("12,23,31."), parse_components("0,±1"))
        self.assertFalse(result.found)
        self.assertTrue(result.complete)

    def test_18_9_from_peres_components(self):
        H = parse_mmp(KS_18_9)
        result = vecfind(H, parse_components("0,±1"))
        self.assertTrue(result.found)
        C = result.coordinatization
        self.assertTrue(verify_coordinatization(H, C)[0])
        self.assertTrue(verify_operator_identity(H, C))
        self.assertAlmostEqual(quantum_operator_value(H, C), 9.0)

    def test_budget_leaves_the_answer_open(self):
        result = vecfind(parse_mmp(KS_18_9), parse_components("0,±1"), budget=3)
        self.assertFalse(result.found)
        self.assertFalse(result.complete)

    def test_seeded_search_still_verifies(self):
        H = parse_mmp(PENTAGON)
        result = vecfind(H, parse_components("0,±1"), seed=11)
        self.assertTrue(verify_coordinatization(H, result.coordinatization)[0])


class TestFill(unittest.TestCase):

    def test_fill_then_strip_recovers_the_pentagon(self):
        H = parse_mmp(PENTAGON)
        C = vecfind(H, parse_components("0,±1")).coordinatization
        filled, filled_coords = fill(H, C)
        self.assertEqual(serialize_mmp(filled), "126,237,348,459,51A.")
        self.assertTrue(filled.is_full)
        self.assertTrue(verify_coordinatization(filled, filled_coords)[0])
        self.assertEqual(serialize_mmp(strip_unishared(filled)), PENTAGON)

    def test_full_hypergraph_is_unchanged(self):
        f = CATALOG.get("pentagon-10-5")
        H = f.hypergraph()
        filled, _ = fill(H, f.coordinates(H))
        self.assertIs(filled, H)

    def test_non_orthogonal_vectors_are_rejected(self):
        H = parse_mmp("12,23.")
        C = load_coordinatization(H, {"1": ["1", "0", "0"], "2": ["1", "1", "0"], "3": ["0", "0", "1"]})
        with self.assertRaises(CoordinatizationError):
            fill(H, C)


class TestOperators(unittest.TestCase):

    def test_filled_pentagon_identities(self):
        f = CATALOG.get("pentagon-10-5")
        H = f.hypergraph()
        C = f.coordinates(H)
        self.assertTrue(verify_operator_identity(H, C))
        self.assertTrue(np.allclose(edge_operator_product(H, C, 0), np.eye(3)))
        self.assertAlmostEqual(quantum_operator_value(H, C), 5.0)
        self.assertEqual(classical_operator_max(H)[0], 5)

    def test_product_needs_full_hyperedges(self):
        H = parse_mmp(PENTAGON)
        C = vecfind(H, parse_components("0,±1")).coordinatization
        with self.assertRaises(CoordinatizationError):
            edge_operator_product(H, C, 0)

    def test_classical_maximum(self):
        for name in ("pentagon-10-5", "ks-mmp-6-3", "ks-18-9", "9-3"):
            f = CATALOG.get(name)
            with self.subTest(fixture=name):
                value, witness = classical_operator_max(f.hypergraph())
                self.assertEqual(value, f.expected["operator_max"])
                self.assertEqual(len(witness), f.hypergraph().k)

    def test_chunking_does_not_change_the_maximum(self):
        H = CATALOG.get("ks-18-9").hypergraph()
        self.assertEqual(classical_operator_max(H, chunk_bits=5), classical_operator_max(H))

    def test_sign_enumeration_limit(self):
        with self.assertRaises(CoordinatizationError):
            classical_operator_max(CATALOG.get("26-15").hypergraph())


class TestCoordinatizationFiles(unittest.TestCase):

    def test_dump_and_load_pairs(self):
        f = CATALOG.get("pentagon-10-5")
        H = f.hypergraph()
        data = dump_coordinatization(H, f.coordinates(H))
        self.assertEqual(set(data), set(H.labels))
        self.assertTrue(all(len(pair) == 2 for pair in data["1"]))
        self.assertTrue(verify_coordinatization(H, load_coordinatization(H, data))[0])

    def test_numeric_entries(self):
        H = parse_mmp("12.")
        C = load_coordinatization(H, {"1": [1, 0, 0], "2": [0, 1.0, 0]})
        self.assertEqual(C[0].gaussian, ((1, 0), (0, 0), (0, 0)))
        with self.assertRaises(CoordinatizationError):
            verify_coordinatization(parse_mmp("12,23."), C)

    def test_bad_files(self):
        H = parse_mmp("12.")
        with self.assertRaises(CoordinatizationError):
            load_coordinatization(H, {"1": ["1", "0"]})
        with self.assertRaises(CoordinatizationError):
            load_coordinatization(H, {"9": ["1", "0", "0"]})
        with self.assertRaises(CoordinatizationError):
            load_coordinatization(H, {"1": ["0", "0", "0"]})
        with self.assertRaises(CoordinatizationError):
            load_coordinatization(H, {"1": [{"re": 1}, "0", "0"]})


if __name__ == '__main__':
    unittest.main()
