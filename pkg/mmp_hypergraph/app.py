# mmp - parses, analyzes and generates MMP hypergraphs of contextual sets.

import argparse
import json
import os
import sys

import pyperclip
from colorama import Fore, Style

from mmp_hypergraph import __version__
from mmp_hypergraph.analysis import HypergraphAnalysis, read_inputs
from mmp_hypergraph.assign_engine import find_criticals, grow_pipeline, is_critical, strip_pipeline
from mmp_hypergraph.catalog import FixtureCatalog
from mmp_hypergraph.console import configure_logging, error, print_frame, success, warning
from mmp_hypergraph.coordinatization import fill, generate_master, load_coordinatization, parse_components, vecfind
from mmp_hypergraph.errors import BudgetExceededError, MMPError
from mmp_hypergraph.hypergraph_core import multiplicity_histogram, strip_unishared
from mmp_hypergraph.input_handler import InputHandler
from mmp_hypergraph.mmp_lang import decompose_components, export_dot, incidence_csv, serialize_mmp, validate
from mmp_hypergraph.output_formatter import MarkdownOutputFormatter, OutputFormatterBase, PlainTextOutputFormatter
from mmp_hypergraph.rich_output_formatter import ColoredTextOutputFormatter, JsonOutputFormatter
from mmp_hypergraph.settings_manager import SettingsManager

LONG_EXACT_K = 200
LONG_ENUMERATION = 10 ** 6
EXPORT_FORMATS = ["mmp", "json", "dot", "incidence"]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="Write the result to this file instead of stdout")
    common.add_argument("-n", "--dim", type=int, help="Dimension n (default: max(3, largest hyperedge))")
    common.add_argument("--seed", type=int, help="Random seed (default: 0)")
    common.add_argument("--budget", type=int, help="Node budget of exact searches (default: 2000000)")
    common.add_argument("--workers", type=int, help="Worker processes (default: 1)")
    common.add_argument("--copy-to-clipboard", action="store_true", help="Copy the output to clipboard")
    common.add_argument("--no-input", action="store_true", help="Never ask for confirmation")
    common.add_argument("-v", "--verbose", action="store_true", help="Log search progress to stderr")

    parser = argparse.ArgumentParser(
        prog="mmp",
        description="Parse, analyze and generate MMP hypergraphs of quantum contextual sets.",
        formatter_class=argparse.RawTextHelpFormatter
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", metavar="command")

    analyze = commands.add_parser("analyze", parents=[common],
                                  help="Indices, criticality and inequalities of each input")
    analyze.add_argument("inputs", nargs="+",
                         help="MMP files, '-' for stdin, or catalog fixture names")
    mode = analyze.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="mode", action="store_const", const="exact",
                      help="Exact branch-and-bound indices (default)")
    mode.add_argument("--heuristic", dest="mode", action="store_const", const="heuristic",
                      help="Randomized greedy indices")
    analyze.add_argument("--runs", type=int, help="Heuristic runs (default: 50000)")
    analyze.add_argument("--format", choices=["text", "colored", "markdown", "json"],
                         help="Report format (default: colored on the console, text in a file)")
    analyze.set_defaults(mode="exact", handler=cmd_analyze)

    generate = commands.add_parser("generate", parents=[common],
                                   help="Master hypergraph of all orthogonal bases from vector components")
    generate.add_argument("--components", required=True,
                          help="Vector components, e.g. \"0,±1\" or \"0,1,-1,w,w2\"")
    generate.set_defaults(handler=cmd_generate)

    strip = commands.add_parser("strip", parents=[common], help="Drop vertices that lie in one hyperedge")
    strip.add_argument("input")
    strip.add_argument("--fixpoint", action="store_true", help="Repeat until no such vertex remains")
    strip.add_argument("--format", choices=EXPORT_FORMATS, default="mmp")
    strip.set_defaults(handler=cmd_strip)

    fill_cmd = commands.add_parser("fill", parents=[common],
                                   help="Complete every hyperedge to n vertices using its vectors")
    fill_cmd.add_argument("input")
    fill_cmd.add_argument("--coords", help="JSON coordinatization (default: the fixture's own)")
    fill_cmd.add_argument("--format", choices=["mmp", "json"], default="mmp")
    fill_cmd.set_defaults(handler=cmd_fill)

    critical = commands.add_parser("critical", parents=[common],
                                   help="Decide criticality or search critical subhypergraphs")
    critical.add_argument("input")
    critical.add_argument("--find", action="store_true", help="Descend to critical subhypergraphs")
    critical.add_argument("--method", choices=["descend", "strip", "grow"], default="descend",
                          help="descend: from the input; strip: drop m=1 vertices first;\n"
                               "grow: add random hyperedges to --start until non-binary")
    critical.add_argument("--start", help="Comma-separated hyperedge indices the grow method starts from")
    critical.add_argument("--additions", type=int, default=1, help="Hyperedges added per growth step")
    critical.add_argument("--attempts", type=int, help="Random descents (default: 20)")
    critical.add_argument("--max-seconds", type=float, help="Stop descending after this many seconds")
    critical.set_defaults(handler=cmd_critical)

    vecfind_cmd = commands.add_parser("vecfind", parents=[common],
                                      help="Search a coordinatization over vector components")
    vecfind_cmd.add_argument("input")
    vecfind_cmd.add_argument("--components", required=True)
    vecfind_cmd.set_defaults(handler=cmd_vecfind)

    export = commands.add_parser("export", parents=[common], help="Print the hypergraph in another format")
    export.add_argument("input")
    export.add_argument("--format", choices=EXPORT_FORMATS, default="mmp")
    export.set_defaults(handler=cmd_export)

    catalog = commands.add_parser("catalog", parents=[common], help="List or print embedded fixtures")
    catalog.add_argument("name", nargs="?")
    catalog.add_argument("--section", help="Only fixtures of this section")
    catalog.add_argument("--check", action="store_true", help="Parse and verify every fixture")
    catalog.add_argument("--format", choices=["mmp", "json"], default="mmp")
    catalog.set_defaults(handler=cmd_catalog)
    return parser


def load_settings(args):
    return SettingsManager(extra_settings={
        'budget_nodes': args.budget,
        'workers': args.workers,
        'seed': args.seed,
        'runs': getattr(args, 'runs', None),
        'critical_attempts': getattr(args, 'attempts', None),
    })


def emit(output, args):
    if args.output:
        full_path = os.path.abspath(args.output)
        with open(full_path, 'w', encoding='utf-8') as f:
            f.write(output if output.endswith("\n") else output + "\n")
        success(f"Saved to: {full_path}")
    else:
        print(output)

    if args.copy_to_clipboard:
        try:
            pyperclip.copy(output)
            success("Output copied to clipboard!")
        except Exception as e:
            error(f"Failed to copy to clipboard: {str(e)}")


def single_input(args, catalog):
    inputs = read_inputs(args.input, catalog, args.dim)
    if len(inputs) != 1:
        raise ValueError(f"{args.input} holds {len(inputs)} MMP strings, expected one")
    return inputs[0]


def export_text(H, fmt):
    if fmt == "json":
        return json.dumps(H.to_dict(), indent=2)
    if fmt == "dot":
        return export_dot(H)
    if fmt == "incidence":
        return incidence_csv(H)
    return serialize_mmp(H)


def cmd_analyze(args, settings, catalog, input_handler):
    inputs = []
    for source in args.inputs:
        inputs.extend(read_inputs(source, catalog, args.dim))
    for name, H in inputs:
        report = validate(H)
        if not report.valid:
            for violation in report.violations:
                error(f"{name}: {violation.locus}: {violation.message} [{violation.rule}]")
            return 2

    largest = max(H.k for _, H in inputs)
    if args.mode == "exact" and not input_handler.confirm_search("vertices", largest, LONG_EXACT_K):
        warning("Analysis aborted.")
        return 0

    analysis = HypergraphAnalysis(
        mode=args.mode,
        runs=settings['runs'],
        seed=settings['seed'],
        budget=settings['budget_nodes'],
        canonical_budget=settings['canonical_budget'],
        workers=settings['workers'],
        declared_n=args.dim,
    )
    if sys.stdout.isatty() and not args.output:
        print_frame("MMP Hypergraph Analysis")
    records = analysis.analyze_all(inputs)

    fmt = args.format or ("text" if args.output else "colored")
    output_formatter: OutputFormatterBase = None
    if fmt == "json":
        output_formatter = JsonOutputFormatter()
    elif fmt == "markdown":
        output_formatter = MarkdownOutputFormatter()
    elif fmt == "colored":
        output_formatter = ColoredTextOutputFormatter()
    else:
        output_formatter = PlainTextOutputFormatter()
    emit(output_formatter.format(records), args)
    return 0


def cmd_generate(args, settings, catalog, input_handler):
    if not args.dim:
        raise ValueError("generate needs --dim")
    components = parse_components(args.components, settings['eps'])
    if not input_handler.confirm_search("candidate vectors", len(components) ** args.dim, LONG_ENUMERATION):
        warning("Generation aborted.")
        return 0
    H, C = generate_master(components, args.dim, budget=settings['budget_nodes'], workers=settings['workers'])
    parts = decompose_components(H)

    print(Fore.CYAN + "Master: " + Fore.WHITE + H.size + Style.RESET_ALL)
    histogram = ", ".join(f"m={m}: {c}" for m, c in multiplicity_histogram(H).items())
    print(Fore.CYAN + "Multiplicities: " + Fore.WHITE + histogram + Style.RESET_ALL)
    print(Fore.CYAN + "Components: " + Fore.WHITE + ", ".join(part.size for part in parts) + Style.RESET_ALL)

    emit(serialize_mmp(H), args)
    if args.output:
        sidecar = os.path.splitext(os.path.abspath(args.output))[0] + ".coords.json"
        with open(sidecar, 'w', encoding='utf-8') as f:
            json.dump(C.to_json(H), f, indent=2)
        success(f"Coordinatization saved to: {sidecar}")
    return 0


def cmd_strip(args, settings, catalog, input_handler):
    _, H = single_input(args, catalog)
    emit(export_text(strip_unishared(H, fixpoint=args.fixpoint), args.format), args)
    return 0


def cmd_fill(args, settings, catalog, input_handler):
    name, H = single_input(args, catalog)
    if args.coords:
        with open(args.coords, 'r', encoding='utf-8') as f:
            C = load_coordinatization(H, json.load(f), args.dim)
    elif args.input in catalog and catalog.get(args.input).coordinatization is not None:
        C = catalog.get(args.input).coordinates(H)
    else:
        raise ValueError(f"{name} has no coordinatization; pass --coords")
    filled, filled_coords = fill(H, C, settings['eps'])
    if args.format == "json":
        output = json.dumps({"hypergraph": filled.to_dict(),
                             "coordinatization": filled_coords.to_json(filled)}, indent=2)
    else:
        output = serialize_mmp(filled)
    emit(output, args)
    return 0


def cmd_critical(args, settings, catalog, input_handler):
    name, H = single_input(args, catalog)
    budget = settings['budget_nodes']
    if not args.find and args.method == "descend":
        verdict = is_critical(H, budget)
        emit(f"critical: {'yes' if verdict else 'no'}", args)
        return 0

    options = dict(seed=settings['seed'], budget=budget, attempts=settings['critical_attempts'],
                   canonical_budget=settings['canonical_budget'])
    if args.method == "strip":
        criticals = strip_pipeline(H, **options)
    elif args.method == "grow":
        if not args.start:
            raise ValueError("the grow method needs --start")
        start = [int(j) for j in args.start.split(",") if j.strip()]
        criticals = grow_pipeline(H, start, additions=args.additions, **options)
    else:
        criticals = find_criticals(H, max_seconds=args.max_seconds, **options)

    if not criticals:
        warning(f"{name} is binary: no critical subhypergraphs")
        return 0
    print(Fore.CYAN + f"{len(criticals)} critical subhypergraph(s) of {H.size}: " + Fore.WHITE
          + ", ".join(c.size for c in criticals) + Style.RESET_ALL)
    emit("\n".join(serialize_mmp(c) for c in criticals), args)
    return 0


def cmd_vecfind(args, settings, catalog, input_handler):
    name, H = single_input(args, catalog)
    components = parse_components(args.components, settings['eps'])
    result = vecfind(H, components, budget=settings['budget_nodes'], seed=args.seed)
    if result.found:
        success(f"Coordinatization of {name} found after {result.nodes} nodes")
        emit(json.dumps(result.coordinatization.to_json(H), indent=2), args)
        return 0
    if not result.complete:
        raise BudgetExceededError("vecfind", settings['budget_nodes'])
    warning(f"{name} has no coordinatization over {', '.join(components.tokens)}")
    return 0


def cmd_export(args, settings, catalog, input_handler):
    _, H = single_input(args, catalog)
    emit(export_text(H, args.format), args)
    return 0


def cmd_catalog(args, settings, catalog, input_handler):
    if args.check:
        problems = [problem for fixture in catalog for problem in catalog.check(fixture)]
        for problem in problems:
            error(problem)
        if problems:
            return 2
        success(f"All {len(catalog)} fixtures parse and verify")
        return 0
    if args.name:
        fixture = catalog.get(args.name)
        emit(json.dumps(fixture.to_dict(), indent=2) if args.format == "json" else fixture.mmp, args)
        return 0
    fixtures = catalog.in_section(args.section) if args.section else list(catalog)
    width = max((len(f.name) for f in fixtures), default=0)
    lines = [f"{f.name.ljust(width)}  {f.size:>9}  n={f.n}  {f.section}" for f in fixtures]
    emit("\n".join(lines), args)
    return 0


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help(sys.stderr)
        return 2

    configure_logging(verbose=args.verbose)
    input_handler = InputHandler(no_input=args.no_input)
    try:
        settings = load_settings(args)
        catalog = FixtureCatalog()
        return args.handler(args, settings, catalog, input_handler)
    except BudgetExceededError as e:
        error(f"Indeterminate: {str(e)}")
        return 1
    except (MMPError, OSError, ValueError) as e:
        error(f"Error: {str(e)}")
        return 2


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
