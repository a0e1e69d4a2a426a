import json
import os
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional

from mmp_hypergraph.console import get_logger
from mmp_hypergraph.coordinatization import Coordinatization, load_coordinatization, verify_coordinatization
from mmp_hypergraph.errors import MMPError
from mmp_hypergraph.mmp_lang import parse_mmp
from mmp_hypergraph.models import Hypergraph

logger = get_logger(__name__)

CATALOG_PATH = os.path.join(os.path.dirname(__file__), 'fixtures', 'catalog.json')


class UnknownFixtureError(MMPError):
    pass


@dataclass
class Fixture:
    """A named hypergraph with its expected metrics and, for KS sets, its vectors."""
    name: str
    mmp: str
    n: int
    section: str
    expected: Dict = field(default_factory=dict)
    coordinatization: Optional[Dict[str, List[str]]] = None

    def hypergraph(self) -> Hypergraph:
        return parse_mmp(self.mmp, self.n)

    def coordinates(self, H: Optional[Hypergraph] = None) -> Optional[Coordinatization]:
        if self.coordinatization is None:
            return None
        return load_coordinatization(H or self.hypergraph(), self.coordinatization, self.n)

    @property
    def size(self) -> str:
        H = self.hypergraph()
        return H.size

    def to_dict(self):
        data = {
            "name": self.name,
            "mmp": self.mmp,
            "n": self.n,
            "section": self.section,
            "expected": self.expected,
        }
        if self.coordinatization is not None:
            data["coordinatization"] = self.coordinatization
        return data


class FixtureCatalog:

    def __init__(self, path=CATALOG_PATH):
        self.path = path
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        self.fixtures: Dict[str, Fixture] = {}
        for entry in data['fixtures']:
            fixture = Fixture(**entry)
            if fixture.name in self.fixtures:
                raise ValueError(f"duplicate fixture name {fixture.name!r} in {path}")
            self.fixtures[fixture.name] = fixture
        logger.debug("loaded %d fixtures from %s", len(self.fixtures), path)

    def __iter__(self) -> Iterator[Fixture]:
        return iter(self.fixtures.values())

    def __len__(self):
        return len(self.fixtures)

    def __contains__(self, name):
        return name in self.fixtures

    def names(self) -> List[str]:
        return list(self.fixtures)

    def get(self, name) -> Fixture:
        try:
            return self.fixtures[name]
        except KeyError:
            raise UnknownFixtureError(f"no fixture named {name!r}")

    def sections(self) -> List[str]:
        return list(dict.fromkeys(f.section for f in self))

    def in_section(self, section) -> List[Fixture]:
        return [f for f in self if f.section == section]

    def with_coordinatization(self) -> List[Fixture]:
        return [f for f in self if f.coordinatization is not None]

    def check(self, fixture: Fixture) -> List[str]:
        """Problems with one entry: its string must parse and its vectors must verify."""
        problems = []
        try:
            H = fixture.hypergraph()
        except MMPError as e:
            return [f"{fixture.name}: {e}"]
        if fixture.coordinatization is not None:
            try:
                ok, violations = verify_coordinatization(H, fixture.coordinates(H))
            except MMPError as e:
                problems.append(f"{fixture.name}: {e}")
            else:
                if not ok:
                    problems.append(f"{fixture.name}: {len(violations)} non-orthogonal pairs")
        return problems
