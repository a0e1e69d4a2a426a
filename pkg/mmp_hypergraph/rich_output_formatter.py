import json
from typing import List

from colorama import Fore, Style

from mmp_hypergraph.models import VIOLATED, AnalysisRecord
from mmp_hypergraph.output_formatter import OutputFormatterBase, PlainTextOutputFormatter


class ColoredTextOutputFormatter(PlainTextOutputFormatter):

    def generate_table_string(self, records: List[AnalysisRecord]) -> str:
        table = super().generate_table_string(records)
        lines = table.splitlines()
        colored = [Fore.CYAN + lines[0] + Style.RESET_ALL, lines[1]]
        for line, record in zip(lines[2:], records):
            color = Fore.RED if not record.binary else Fore.GREEN
            colored.append(color + line + Style.RESET_ALL)
        return "\n".join(colored) + "\n"

    def generate_record_string(self, record: AnalysisRecord) -> str:
        text = super().generate_record_string(record)
        text = text.replace(record.name, Fore.BLUE + record.name + Style.RESET_ALL, 1)
        return text.replace(VIOLATED, Fore.YELLOW + VIOLATED + Style.RESET_ALL)

    def generate_summary_string(self, records: List[AnalysisRecord]) -> str:
        return Fore.CYAN + super().generate_summary_string(records) + Style.RESET_ALL


class JsonOutputFormatter(OutputFormatterBase):
    def output_file_extension(self):
        return ".json"

    def format(self, records: List[AnalysisRecord]) -> str:
        return json.dumps([record.to_dict() for record in records], indent=2)
