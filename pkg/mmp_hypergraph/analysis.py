import hashlib
import multiprocessing
import os
import sys
from typing import List, Optional, Tuple

from mmp_hypergraph.assign_engine import classical_indices, has_parity_proof, is_binary, is_critical
from mmp_hypergraph.catalog import FixtureCatalog
from mmp_hypergraph.console import get_logger
from mmp_hypergraph.errors import BudgetExceededError
from mmp_hypergraph.hypergraph_core import canonical_form, multiplicity_histogram
from mmp_hypergraph.inequalities import evaluate
from mmp_hypergraph.mmp_lang import decompose_components, iter_mmp_strings, parse_mmp, serialize_mmp, validate
from mmp_hypergraph.models import AnalysisRecord, Hypergraph

logger = get_logger(__name__)


def read_inputs(source: str, catalog: Optional[FixtureCatalog] = None,
                n: Optional[int] = None) -> List[Tuple[str, Hypergraph]]:
    """Hypergraphs named by a file path, '-' for stdin, or a catalog fixture name."""
    if source == '-':
        text, base = sys.stdin.read(), 'stdin'
    elif os.path.isfile(source):
        with open(source, 'r', encoding='utf-8') as f:
            text = f.read()
        base = os.path.basename(source)
    elif catalog is not None and source in catalog:
        fixture = catalog.get(source)
        return [(fixture.name, parse_mmp(fixture.mmp, n or fixture.n))]
    else:
        raise FileNotFoundError(f"no such file or fixture: {source}")
    strings = list(iter_mmp_strings(text))
    if not strings:
        raise ValueError(f"{source} contains no MMP string")
    if len(strings) == 1:
        return [(base, parse_mmp(strings[0][1], n))]
    return [(f"{base}:{line_no}", parse_mmp(string, n)) for line_no, string in strings]


class HypergraphAnalysis:
    """Builds one AnalysisRecord per hypergraph from the module operations."""

    def __init__(self, mode='exact', runs=50_000, seed=0, budget=None, canonical_budget=None,
                 workers=1, declared_n=None):
        self.mode = mode
        self.runs = runs
        self.seed = seed
        self.budget = budget
        self.canonical_budget = canonical_budget
        self.workers = workers
        self.declared_n = declared_n

    def identity(self, H: Hypergraph) -> Tuple[str, bool]:
        try:
            return canonical_form(H, self.canonical_budget).digest, True
        except BudgetExceededError as e:
            logger.warning("%s; identity of %s falls back to its string", e, H.size)
            return hashlib.sha256(f"{H.n}:{serialize_mmp(H)}".encode('utf-8')).hexdigest(), False

    def criticality(self, H: Hypergraph, binary: bool) -> Optional[bool]:
        if binary:
            return False
        try:
            return is_critical(H, self.budget)
        except BudgetExceededError as e:
            logger.warning("%s; criticality of %s left undecided", e, H.size)
            return None

    def analyze(self, name: str, H: Hypergraph, workers: Optional[int] = None) -> AnalysisRecord:
        report = validate(H)
        if not report.valid:
            logger.warning("%s violates %s", name, ", ".join(report.rules()))
        binary, _ = is_binary(H, self.budget)
        indices = classical_indices(H, mode=self.mode, runs=self.runs, seed=self.seed,
                                    budget=self.budget, workers=workers or self.workers)
        identity, canonical = self.identity(H)
        record = AnalysisRecord(
            name=name,
            mmp=serialize_mmp(H),
            identity=identity,
            identity_canonical=canonical,
            k=H.k,
            l=H.l,
            n=H.n,
            multiplicity_histogram=multiplicity_histogram(H),
            binary=binary,
            critical=self.criticality(H, binary),
            parity=has_parity_proof(H),
            components=len(decompose_components(H)),
            indices=indices,
            inequalities=evaluate(H, indices, binary=binary, declared_n=self.declared_n),
        )
        logger.info("%s: %s %s", name, record.size, record.classification)
        return record

    def analyze_all(self, inputs: List[Tuple[str, Hypergraph]]) -> List[AnalysisRecord]:
        """Records in input order; with several workers the inputs are spread over processes."""
        if self.workers > 1 and len(inputs) > 1:
            with multiprocessing.Pool(self.workers) as pool:
                return pool.starmap(self.analyze, [(name, H, 1) for name, H in inputs])
        return [self.analyze(name, H) for name, H in inputs]
