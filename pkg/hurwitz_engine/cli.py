"""
HurwitzForge command line.

Every subcommand prints one JSON document (or a TSV table) on stdout; logs
go to stderr. Exit status: 0 on success, 1 on a verification mismatch,
2 on a usage, parse or budget error.
"""

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, TextIO

from . import __version__
from .config import Settings
from .logging_config import setup_logging
from .tools.group_tools import GroupTools
from .tools.verify_tools import VerifyTools
from .utils.errors import HurwitzError

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ERROR = 2


def _add_group_source(parser: argparse.ArgumentParser, element: bool = True) -> None:
    source = parser.add_argument_group("group")
    source.add_argument("--family", help="G(m,p,n) as m,p,n, e.g. 3,3,3")
    source.add_argument("--preset", help="Real root system: A2, B3, D4, H3, I2(5), ...")
    source.add_argument("--roots", help="JSON list of simple roots, e.g. '[[1,-1,0],[0,1,-1]]'")
    if element:
        source.add_argument(
            "--element",
            help='Element JSON: {"perm":[...],"colors":[...]} for --family, {"word":[...]} otherwise; default id',
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hurwitzforge",
        description="HurwitzForge - full reflection factorizations in well generated reflection groups",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  hurwitzforge hurwitz --genus 0 --lambda 3
  hurwitzforge count full --preset B2
  hurwitzforge verify main --family 3,3,3 --all-classes
  hurwitzforge verify identities --max-m 50
  hurwitzforge poset --preset B2 --dot b2.dot
  hurwitzforge cache evict --preset B2
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--format", choices=["json", "tsv"], default=None, help="Output format (default from config)")
    parser.add_argument("--config", help="Path to a YAML config file")
    parser.add_argument("--project-root", help="Project root directory path")
    parser.add_argument("--log-level", help="Override the configured log level")

    commands = parser.add_subparsers(dest="command", required=True)

    group = commands.add_parser("group", help="Group information").add_subparsers(dest="action", required=True)
    _add_group_source(group.add_parser("info", help="Order, rank, reflections, element classification"))

    count = commands.add_parser("count", help="Factorization counts").add_subparsers(dest="action", required=True)
    _add_group_source(count.add_parser("reduced", help="Reduced reflection factorizations"))
    full = count.add_parser("full", help="Full reflection factorizations")
    _add_group_source(full)
    full.add_argument("--length", type=int, help="Factorization length (default ltr of the element)")

    rgs = commands.add_parser("rgs", help="Relative generating sets").add_subparsers(dest="action", required=True)
    _add_group_source(rgs.add_parser("count", help="Count relative generating sets"))
    _add_group_source(rgs.add_parser("list", help="List relative generating sets"))

    hurwitz = commands.add_parser("hurwitz", help="Transitive Hurwitz numbers")
    hurwitz.add_argument("--genus", type=int, choices=[0, 1], required=True)
    hurwitz.add_argument("--lambda", dest="lam", required=True, help="Cycle type a,b,c")

    verify = commands.add_parser("verify", help="Verification suites").add_subparsers(dest="action", required=True)
    main_parser = verify.add_parser("main", help="Closed forms against oracles, per conjugacy class")
    _add_group_source(main_parser, element=False)
    main_parser.add_argument("--all-classes", action="store_true", help="Every conjugacy class, not only the identity")
    _add_group_source(verify.add_parser("cutjoin", help="Cut-and-join recursion"), element=False)
    identities = verify.add_parser("identities", help="Roots-of-unity and Chebyshev identities")
    identities.add_argument("--max-m", type=int, required=True)
    identities.add_argument("--check-mode", choices=["exact", "float", "both"], default="both")

    poset = commands.add_parser("poset", help="Prefix poset of full factorizations of the identity")
    _add_group_source(poset, element=False)
    poset.add_argument("--dot", help="Write the Hasse diagram as DOT to this path")

    phi = commands.add_parser("phi", help="Phi polynomial of an element")
    _add_group_source(phi)

    cache = commands.add_parser("cache", help="Lattice cache").add_subparsers(dest="action", required=True)
    cache.add_parser("stats", help="Entries, hits and misses")
    _add_group_source(cache.add_parser("evict", help="Forget the stored lattice of one group"), element=False)
    return parser


def dispatch(args: argparse.Namespace, settings: Settings) -> Dict[str, Any]:
    source = {"family": getattr(args, "family", None), "preset": getattr(args, "preset", None), "roots": getattr(args, "roots", None)}
    element = getattr(args, "element", None)
    groups = GroupTools(settings)
    verifier = VerifyTools(settings)

    if args.command == "group":
        return groups.group_info(element=element, **source)
    if args.command == "count":
        if args.action == "reduced":
            return groups.count_reduced(element=element, **source)
        return groups.count_full(element=element, length=args.length, **source)
    if args.command == "rgs":
        if args.action == "count":
            return groups.rgs_count(element=element, **source)
        return groups.rgs_list(element=element, **source)
    if args.command == "hurwitz":
        return groups.hurwitz(args.genus, args.lam)
    if args.command == "verify":
        if args.action == "main":
            return verifier.verify_main(all_classes=args.all_classes, **source)
        if args.action == "cutjoin":
            return verifier.verify_cutjoin(**source)
        return verifier.verify_identities(args.max_m, args.check_mode)
    if args.command == "poset":
        return verifier.poset(dot_path=args.dot, **source)
    if args.command == "cache":
        if args.action == "stats":
            return groups.cache_stats()
        return groups.cache_evict(**source)
    return groups.phi(element=element, **source)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (dict, list)):
        return json.dumps(value, ensure_ascii=False, separators=(",", ":"))
    return str(value)


def to_tsv(result: Dict[str, Any]) -> str:
    """Rows as a header plus one line per row; other payloads as key/value lines."""
    rows: Optional[List[Dict[str, Any]]] = result.get("rows")
    if rows:
        columns = list(rows[0].keys())
        lines = ["\t".join(columns)]
        lines += ["\t".join(_cell(row.get(c)) for c in columns) for row in rows]
        return "\n".join(lines) + "\n"
    return "".join(f"{key}\t{_cell(value)}\n" for key, value in result.items())


def exit_code(result: Dict[str, Any]) -> int:
    if not result.get("success", False):
        return EXIT_ERROR
    if result.get("match") is False:
        return EXIT_MISMATCH
    return EXIT_OK


def run_command(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    Parse argv, run the subcommand and write its payload.

    Returns:
        The process exit status.
    """
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR

    try:
        settings = Settings.load(project_root=args.project_root, config_path=args.config)
    except HurwitzError as e:
        setup_logging("INFO")
        out.write(json.dumps({"success": False, "error": e.to_dict()}, ensure_ascii=False, indent=2) + "\n")
        return EXIT_ERROR
    setup_logging(args.log_level or settings.log_level)

    result = dispatch(args, settings)
    fmt = args.format or settings.output_format
    if fmt == "tsv" and result.get("success"):
        out.write(to_tsv(result))
    else:
        out.write(json.dumps(result, ensure_ascii=False, indent=2) + "\n")
    return exit_code(result)


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
