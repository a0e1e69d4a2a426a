import json
import unittest
from unittest.mock import patch, mock_open

from mmp_hypergraph.catalog import FixtureCatalog, UnknownFixtureError
from mmp_hypergraph.coordinatization import verify_operator_identity
from mmp_hypergraph.hypergraph_core import strip_unishared
from mmp_hypergraph.mmp_lang import parse_mmp, serialize_mmp, validate

CATALOG = FixtureCatalog()


class TestFixtureCatalog(unittest.TestCase):

    def test_every_entry_checks_out(self):
        for f in CATALOG:
            with self.subTest(fixture=f.name):
                self.assertEqual(CATALOG.check(f), [])

    def test_strings_serialize_back_unchanged(self):
        for f in CATALOG:
            with self.subTest(fixture=f.name):
                self.assertEqual(serialize_mmp(parse_mmp(f.mmp, f.n)), f.mmp)

    def test_names_carry_the_size(self):
        for f in CATALOG:
            with self.subTest(fixture=f.name):
                self.assertIn(f.size, f.name)

    def test_declared_dimension_fits_every_hyperedge(self):
        for f in CATALOG:
            with self.subTest(fixture=f.name):
                self.assertGreaterEqual(f.n, f.hypergraph().max_edge_size)

    def test_ks_vectors_satisfy_the_operator_identity(self):
        for f in CATALOG.with_coordinatization():
            H = f.hypergraph()
            if not H.is_full:
                continue
            with self.subTest(fixture=f.name):
                self.assertTrue(verify_operator_identity(H, f.coordinates(H)))

    def test_yu_oh_strips_to_its_13_vertex_core(self):
        stripped = strip_unishared(CATALOG.get("yu-oh-25-16").hypergraph())
        self.assertEqual(serialize_mmp(stripped), CATALOG.get("yu-oh-13-16").mmp)

    def test_sections(self):
        self.assertIn("pentagon", CATALOG.sections())
        self.assertEqual([f.name for f in CATALOG.in_section("pentagon")], ["pentagon-5-5", "pentagon-10-5"])
        self.assertEqual(len(CATALOG.in_section("6-dim KS sets")), 10)
        self.assertEqual([f.name for f in CATALOG.in_section("4-dim KS sets")],
                         ["ks-18-9", "peres-24-24", "ks-20-11", "ks-22-13"])

    def test_lookup(self):
        self.assertIn("ks-18-9", CATALOG)
        self.assertNotIn("ks-19-9", CATALOG)
        with self.assertRaises(UnknownFixtureError):
            CATALOG.get("ks-19-9")
        self.assertEqual(len(CATALOG), len(CATALOG.names()))

    def test_fixture_without_vectors(self):
        f = CATALOG.get("pentagon-5-5")
        self.assertIsNone(f.coordinates())
        self.assertNotIn("coordinatization", f.to_dict())
        self.assertTrue(validate(f.hypergraph(), strict=True).valid)

    @patch("builtins.open", new_callable=mock_open, read_data=json.dumps({"fixtures": [
        {"name": "a", "mmp": "12.", "n": 3, "section": "s"},
        {"name": "a", "mmp": "12,23.", "n": 3, "section": "s"},
    ]}))
    def test_duplicate_names(self, mock_file):
        with self.assertRaises(ValueError):
            FixtureCatalog("catalog.json")
        mock_file.assert_called_once_with("catalog.json", "r", encoding="utf-8")

    @patch("builtins.open", new_callable=mock_open, read_data=json.dumps({"fixtures": [
        {"name": "broken", "mmp": "12,23", "n": 3, "section": "s"},
        {"name": "skew", "mmp": "12.", "n": 3, "section": "s",
         "coordinatization": {"1": ["1", "0", "0"], "2": ["1", "1", "0"]}},
    ]}))
    def test_check_reports_problems(self, mock_file):
        catalog = FixtureCatalog("catalog.json")
        self.assertIn("broken: position 5", catalog.check(catalog.get("broken"))[0])
        self.assertEqual(catalog.check(catalog.get("skew")), ["skew: 1 non-orthogonal pairs"])


if __name__ == '__main__':
    unittest.main()
