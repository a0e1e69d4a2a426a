from typing import List

from mmp_hypergraph.models import AnalysisRecord

TABLE_COLUMNS = ("name", "k-l", "n", "HI_cM", "HI_cm", "HI_mcM", "l_cM", "l_cm", "crit.", "parity", "comp.", "class")


def _yes_no(value):
    if value is None:
        return "?"
    return "yes" if value else "no"


class OutputFormatterBase:
    def output_file_extension(self):
        raise NotImplementedError

    def format(self, records: List[AnalysisRecord]) -> str:
        raise NotImplementedError

    def table_row(self, record: AnalysisRecord) -> List[str]:
        idx = record.indices
        values = [idx.hi_max, idx.hi_min, idx.hi_m_max, idx.l_max, idx.l_min] if idx else ["-"] * 5
        marker = "" if idx is None or idx.exact else "~"
        return [
            record.name,
            record.size,
            str(record.n),
            *(f"{marker}{v}" for v in values),
            _yes_no(record.critical),
            _yes_no(record.parity),
            str(record.components),
            record.classification,
        ]

    def generate_table_string(self, records: List[AnalysisRecord]) -> str:
        """Fixed-width table with the columns of the published index tables."""
        rows = [list(TABLE_COLUMNS)] + [self.table_row(r) for r in records]
        widths = [max(len(row[i]) for row in rows) for i in range(len(TABLE_COLUMNS))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"

    def generate_record_string(self, record: AnalysisRecord) -> str:
        histogram = ", ".join(f"m={m}: {c}" for m, c in record.multiplicity_histogram.items())
        output = f"{record.name}: {record.size} (n={record.n}) {record.classification}\n"
        output += f"  identity: {record.identity}{'' if record.identity_canonical else ' (non-canonical)'}\n"
        output += f"  multiplicities: {histogram}\n"
        output += f"  binary: {_yes_no(record.binary)}, critical: {_yes_no(record.critical)}, "
        output += f"parity proof: {_yes_no(record.parity)}, components: {record.components}\n"
        if record.inequalities:
            ineq = record.inequalities.to_dict()
            output += (f"  HI_q = {ineq['HI_q']}, alpha = {ineq['alpha']}, alpha*_r = {ineq['alpha_r']}, "
                       f"alpha*_p = {ineq['alpha_p']}, LP alpha* = {ineq['alpha_star_free']}\n")
            verdicts = ", ".join(f"{name} {verdict}" for name, verdict in ineq['verdicts'].items())
            output += f"  inequalities: {verdicts}\n"
        return output

    def generate_summary_string(self, records: List[AnalysisRecord]) -> str:
        contextual = sum(1 for r in records if not r.binary)
        summary = "\nSummary:\n"
        summary += f"Hypergraphs analyzed: {len(records)}\n"
        summary += f"Contextual (non-binary): {contextual}\n"
        summary += f"Noncontextual (binary): {len(records) - contextual}\n"
        summary += f"Critical: {sum(1 for r in records if r.critical)}\n"
        return summary


class PlainTextOutputFormatter(OutputFormatterBase):
    def output_file_extension(self):
        return ".txt"

    def format(self, records: List[AnalysisRecord]) -> str:
        output = "MMP hypergraph analysis\n\n"
        output += self.generate_table_string(records)
        output += "\n"
        for record in records:
            output += self.generate_record_string(record)
        output += self.generate_summary_string(records)
        return output


class MarkdownOutputFormatter(OutputFormatterBase):
    def output_file_extension(self):
        return ".md"

    def format(self, records: List[AnalysisRecord]) -> str:
        output = "# MMP hypergraph analysis\n\n"
        output += "| " + " | ".join(TABLE_COLUMNS) + " |\n"
        output += "|" + "---|" * len(TABLE_COLUMNS) + "\n"
        for record in records:
            output += "| " + " | ".join(self.table_row(record)) + " |\n"
        output += "\n## Details\n\n"
        for record in records:
            output += f"### {record.name}\n\n```\n{self.generate_record_string(record)}```\n\n"
        output += "## Summary\n"
        output += self.generate_summary_string(records).replace("\nSummary:\n", "\n")
        return output
