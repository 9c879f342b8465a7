"""
Dyck Pattern Syzygy Toolkit
Command-line driver for Dyck-pattern enumeration, gl(m|n) characters and the
conjectural Betti tables of GL-invariant ideals.

The empty partition is spelled "" on the command line, e.g. --lambda "".
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import List, Optional, TextIO

from betti import (
    betti_polynomial,
    betti_table,
    betti_totals,
    equivariant_betti,
    euler_check,
    first_strand,
    generator_check,
    hs_reconstruction_check,
    rectangular_betti,
    regularity_closed,
    regularity_enum,
    strand_classes,
)
from characters import (
    GradedSeries,
    K0Class,
    check_shape,
    configure_store,
    kac_composition,
    kac_hilbert,
    simple_character,
    simple_hilbert,
)
from dyck_paths import pattern_to_dict, render_pattern
from errors import BadArgs, ConsistencyError, DyckresError, StorageError, ValidationError
from partitions import Partition, format_partition, parse_partition
from pattern_enumeration import enumerate_A, enumerate_A0, enumerate_K, pattern_sort_key, patterns_frame

logger = logging.getLogger(__name__)

# ---------------------------
# Constants
# ---------------------------

COMMANDS = [
    "patterns",
    "kac",
    "simple",
    "betti",
    "strands",
    "regularity",
    "rect-check",
    "render",
    "selftest",
    "euler",
    "config",
]

PATTERN_SETS = {"K": enumerate_K, "A": enumerate_A, "A0": enumerate_A0}
M_FREE_COMMANDS = ("patterns", "render", "regularity")

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
CONFIG_FILE = os.path.join(DATA_DIR, "config.json")
GOLDEN_DIR = os.path.join(DATA_DIR, "golden")

EXIT_OK = 0
EXIT_STORAGE = 1
EXIT_VALIDATION = 2
EXIT_CONSISTENCY = 3

DEFAULT_CONFIG = {
    "m": 3,
    "n": 3,
    "format": "ascii",
    "slack": 0,
    "jobs": 1,
    "cache_dir": None,
    "log_level": "WARNING",
}

# ---------------------------
# Config
# ---------------------------

def load_config(path: str = None) -> dict:
    """
    Load configuration, falling back to the defaults key by key.
    Returns:
        dict: configuration dictionary
    """
    path = path or CONFIG_FILE
    config = dict(DEFAULT_CONFIG)
    if os.path.exists(path):
        try:
            with open(path, 'r') as f:
                config.update(json.load(f))
        except Exception as e:
            logger.warning("ignoring unreadable config %s: %s", path, e)
    return config


def save_config(config: dict, path: str = None) -> None:
    """
    Save configuration.
    Args:
        config (dict): configuration dictionary
    """
    path = path or CONFIG_FILE
    try:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, 'w') as f:
            json.dump(config, f, indent=2)
    except Exception as e:
        raise StorageError(f"Failed to save configuration: {str(e)}")

# ---------------------------
# Invocation
# ---------------------------

@dataclass
class Invocation:
    """A parsed and validated command line."""
    command: str
    lam: Partition
    m: int
    n: int
    fmt: str = "ascii"
    pattern_set: str = "A"
    b: Optional[int] = None
    slack: int = 0
    jobs: int = 1
    totals: bool = False
    character: bool = False
    index: Optional[int] = None
    save: bool = False
    config_path: Optional[str] = None


def parse_lambda(text: str) -> Partition:
    """
    Parse a comma-separated partition; "" is the empty partition.
    Raises:
        MalformedPartition: on non-numeric, negative or increasing parts
    """
    return parse_partition(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyckres",
        description="Dyck patterns, gl(m|n) characters and Betti tables of GL-invariant ideals.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--lambda", dest="lam", default="", help='partition such as "3,2"; "" is empty')
    parser.add_argument("--m", type=int, default=None)
    parser.add_argument("--n", type=int, default=None)
    parser.add_argument("--format", dest="fmt", choices=["ascii", "json"], default=None)
    parser.add_argument("--set", dest="pattern_set", choices=sorted(PATTERN_SETS), default="A")
    parser.add_argument("--b", type=int, default=None, help="bullet count for strands")
    parser.add_argument("--slack", type=int, default=None, help="extra search columns")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes for betti")
    parser.add_argument("--totals", action="store_true", help="append column totals to betti")
    parser.add_argument("--character", action="store_true", help="simple: print the full character; betti: characters per slot")
    parser.add_argument("--index", type=int, default=None, help="render: only the k-th pattern (1-based)")
    parser.add_argument("--save", action="store_true", help="config: store the given flags as defaults")
    parser.add_argument("--config", dest="config_path", default=None, help="alternative config file")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def _config_int(config: dict, key: str) -> int:
    value = config[key]
    if isinstance(value, bool):
        raise BadArgs(f"config value {key!r} must be an integer, got {value!r}")
    try:
        return int(value)
    except (TypeError, ValueError):
        raise BadArgs(f"config value {key!r} must be an integer, got {value!r}")


def build_invocation(args: argparse.Namespace, config: dict) -> Invocation:
    """
    Merge flags over config values and validate them.
    Raises:
        BadArgs, BadShape, TooManyRows, MalformedPartition
    """
    lam = parse_lambda(args.lam)
    inv = Invocation(
        command=args.command,
        lam=lam,
        m=args.m if args.m is not None else _config_int(config, "m"),
        n=args.n if args.n is not None else _config_int(config, "n"),
        fmt=args.fmt or config["format"],
        pattern_set=args.pattern_set,
        b=args.b,
        slack=args.slack if args.slack is not None else _config_int(config, "slack"),
        jobs=args.jobs if args.jobs is not None else _config_int(config, "jobs"),
        totals=args.totals,
        character=args.character,
        index=args.index,
        save=args.save,
        config_path=args.config_path,
    )
    if inv.fmt not in ("ascii", "json"):
        raise BadArgs(f"--format must be ascii or json, got {inv.fmt!r}")
    if inv.slack < 0:
        raise BadArgs(f"--slack must be nonnegative, got {inv.slack}")
    if inv.jobs < 1:
        raise BadArgs(f"--jobs must be at least 1, got {inv.jobs}")
    if inv.b is not None and inv.b < 0:
        raise BadArgs(f"--b must be nonnegative, got {inv.b}")
    if inv.command in M_FREE_COMMANDS:
        # these only read n; m is checked by the commands that use it
        check_shape(inv.lam, inv.n, inv.n)
    elif inv.command not in ("selftest", "config"):
        check_shape(inv.lam, inv.m, inv.n)
    return inv

# ---------------------------
# Serialization
# ---------------------------

def patterns_to_json(lam: Partition, patterns) -> list:
    return [pattern_to_dict(lam, p) for p in sorted(patterns, key=lambda p: pattern_sort_key(lam, p))]


def pattern_summary(lam: Partition, patterns) -> list:
    """[{lambda_of, d, b}] in canonical order; the form kept in the golden corpus."""
    out = []
    for p in sorted(patterns, key=lambda p: pattern_sort_key(lam, p)):
        data = pattern_to_dict(lam, p)
        out.append({"lambda_of": data["lambda_of"], "d": data["d"], "b": data["b"]})
    return out


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False)


def _label(lam: Partition) -> str:
    return format_partition(lam) or "()"

# ---------------------------
# Commands
# ---------------------------

def cmd_patterns(inv: Invocation, out: TextIO) -> int:
    patterns = PATTERN_SETS[inv.pattern_set](inv.lam, inv.n, inv.slack)
    if inv.fmt == "json":
        print(_dump(patterns_to_json(inv.lam, patterns)), file=out)
        return EXIT_OK
    frame = patterns_frame(inv.lam, patterns)
    frame["lambda_of"] = frame["lambda_of"].replace("", "()")
    print(f"{inv.pattern_set}({_label(inv.lam)}; n={inv.n}): {len(patterns)} patterns", file=out)
    print(frame.to_string(index=False), file=out)
    return EXIT_OK


def cmd_kac(inv: Invocation, out: TextIO) -> int:
    composition = kac_composition(inv.lam, inv.n)
    series = kac_hilbert(inv.lam, inv.m, inv.n)
    if inv.fmt == "json":
        print(_dump({"composition": composition.to_json(), "hilbert": series.to_json()}), file=out)
    else:
        print(f"[K({_label(inv.lam)})] = {composition}", file=out)
        print(f"HS = {series}", file=out)
    return EXIT_OK


def cmd_simple(inv: Invocation, out: TextIO) -> int:
    if inv.character:
        char = simple_character(inv.lam, inv.m, inv.n)
        if inv.fmt == "json":
            print(_dump(char.to_json()), file=out)
        else:
            for term in char.to_json():
                print(f"({term['alpha'] or '()'}; {term['beta'] or '()'}) x{term['mult']}", file=out)
        return EXIT_OK
    series = simple_hilbert(inv.lam, inv.m, inv.n)
    if inv.fmt == "json":
        print(_dump(series.to_json()), file=out)
    else:
        print(f"HS({_label(inv.lam)}) = {series}", file=out)
    return EXIT_OK


def _equivariant(inv: Invocation, out: TextIO) -> int:
    slots = equivariant_betti(inv.lam, inv.m, inv.n)
    order = sorted(slots, key=lambda k: (k[0], k[1]))
    if inv.fmt == "json":
        print(_dump([{"row": r, "column": i, "character": slots[(r, i)].to_json()} for r, i in order]), file=out)
        return EXIT_OK
    for r, i in order:
        terms = ", ".join(f"({t['alpha'] or '()'}; {t['beta'] or '()'}) x{t['mult']}"
                          for t in slots[(r, i)].to_json())
        print(f"row {r} column {i}: {terms}", file=out)
    return EXIT_OK


def cmd_betti(inv: Invocation, out: TextIO) -> int:
    if inv.character:
        return _equivariant(inv, out)
    table = betti_table(inv.lam, inv.m, inv.n, jobs=inv.jobs)
    if inv.fmt == "json":
        data = table.to_json()
        data["polynomial"] = betti_polynomial(inv.lam, inv.m, inv.n).to_json()
        if inv.totals:
            data["totals"] = betti_totals(table)
        print(_dump(data), file=out)
    else:
        print(table.render(totals=inv.totals), file=out)
    return EXIT_OK


def cmd_strands(inv: Invocation, out: TextIO) -> int:
    if inv.b is not None:
        classes = {inv.b: strand_classes(inv.lam, inv.m, inv.n, inv.b)}
    else:
        top = max(len(p.bullets) for p in enumerate_A(inv.lam, inv.n))
        classes = {b: strand_classes(inv.lam, inv.m, inv.n, b) for b in range(top + 1)}
        first = first_strand(inv.lam, inv.m, inv.n)
        if first.terms != classes[0].terms:
            raise ConsistencyError(f"first strand {first} differs from the b=0 strand {classes[0]}")
    if inv.fmt == "json":
        print(_dump({str(b): c.to_json() for b, c in classes.items()}), file=out)
    else:
        for b, c in classes.items():
            print(f"b={b}: {c}", file=out)
    return EXIT_OK


def cmd_regularity(inv: Invocation, out: TextIO) -> int:
    enum = regularity_enum(inv.lam, inv.n)
    closed = regularity_closed(inv.lam, inv.n)
    agree = enum == closed
    if inv.fmt == "json":
        print(_dump({"enum": enum, "closed": closed, "agree": agree}), file=out)
    else:
        print(f"enum={enum} closed={closed} agree={str(agree).lower()}", file=out)
    return EXIT_OK if agree else EXIT_CONSISTENCY


def cmd_rect_check(inv: Invocation, out: TextIO) -> int:
    parts = set(inv.lam.parts)
    if len(parts) != 1:
        raise BadArgs(f"--lambda must be a nonempty rectangle, got {_label(inv.lam)!r}")
    a, b = len(inv.lam), inv.lam.part(1)
    closed = rectangular_betti(a, b, inv.m, inv.n)
    enum = betti_polynomial(inv.lam, inv.m, inv.n)
    agree = closed.terms == enum.terms
    if inv.fmt == "json":
        print(_dump({"closed": closed.to_json(), "enum": enum.to_json(), "agree": agree}), file=out)
    else:
        print(f"closed: {closed}", file=out)
        print(f"enum:   {enum}", file=out)
        print(f"agree={str(agree).lower()}", file=out)
    return EXIT_OK if agree else EXIT_CONSISTENCY


def cmd_render(inv: Invocation, out: TextIO) -> int:
    patterns = sorted(PATTERN_SETS[inv.pattern_set](inv.lam, inv.n, inv.slack),
                      key=lambda p: pattern_sort_key(inv.lam, p))
    chosen = list(enumerate(patterns, start=1))
    if inv.index is not None:
        if not 1 <= inv.index <= len(patterns):
            raise BadArgs(f"--index must lie in 1..{len(patterns)}, got {inv.index}")
        chosen = [chosen[inv.index - 1]]
    blocks = []
    for k, p in chosen:
        data = pattern_to_dict(inv.lam, p)
        header = f"# {k}: lambda(D)={data['lambda_of'] or '()'} d={data['d']} b={data['b']}"
        picture = render_pattern(inv.lam, p)
        blocks.append(header + ("\n" + picture if picture else ""))
    print("\n\n".join(blocks), file=out)
    return EXIT_OK


def cmd_euler(inv: Invocation, out: TextIO) -> int:
    report = euler_check(inv.lam, inv.m, inv.n)
    generators = generator_check(inv.lam, inv.m, inv.n)
    if inv.fmt == "json":
        print(_dump({"euler": report.ok, "details": list(report.details), "generators": generators}), file=out)
    else:
        print(f"euler={str(report.ok).lower()} generators={str(generators).lower()}", file=out)
        for line in report.details:
            print(f"  {line}", file=out)
    return EXIT_OK if report.ok and generators else EXIT_CONSISTENCY


def cmd_config(inv: Invocation, out: TextIO) -> int:
    config = load_config(inv.config_path)
    if inv.save:
        config.update({"m": inv.m, "n": inv.n, "format": inv.fmt, "slack": inv.slack, "jobs": inv.jobs})
        save_config(config, inv.config_path)
    print(_dump(config), file=out)
    return EXIT_OK

# ---------------------------
# Golden corpus
# ---------------------------

def _read_golden(name: str) -> str:
    path = os.path.join(GOLDEN_DIR, name)
    try:
        with open(path, 'r') as f:
            return f.read()
    except Exception as e:
        raise StorageError(f"Failed to read golden file {name}: {str(e)}")


def golden_checks() -> List[tuple]:
    """(name, passed) for every golden file."""
    results = []

    table = betti_table(parse_partition("3,2"), 3, 3)
    results.append(("betti_3_2_m3_n3.txt", table.render() + "\n" == _read_golden("betti_3_2_m3_n3.txt")))

    expected = json.loads(_read_golden("hilbert_m3_n3.json"))
    ok = all(simple_hilbert(parse_partition(mu), 3, 3) == GradedSeries.from_json(series)
             for mu, series in expected.items())
    results.append(("hilbert_m3_n3.json", ok))

    expected = K0Class.from_json(json.loads(_read_golden("kac_composition_3_2_n3.json")))
    results.append(("kac_composition_3_2_n3.json", kac_composition(parse_partition("3,2"), 3) == expected))

    lam = parse_partition("3,2")
    expected = json.loads(_read_golden("patterns_A_3_2_n3.json"))
    results.append(("patterns_A_3_2_n3.json", pattern_summary(lam, enumerate_A(lam, 3)) == expected))

    ok = True
    for row in json.loads(_read_golden("regularity.json")):
        lam = parse_partition(row["lambda"])
        n = int(row["n"])
        if not (regularity_enum(lam, n) == regularity_closed(lam, n) == int(row["reg"])):
            logger.info("regularity mismatch at lambda=%s n=%d", row["lambda"], n)
            ok = False
    results.append(("regularity.json", ok))

    lam = parse_partition("3,2")
    results.append(("reconstruction (3,2) m=n=3", bool(hs_reconstruction_check(lam, 3, 3))))
    results.append(("euler (3,2) m=n=3", bool(euler_check(lam, 3, 3))))
    return results


def cmd_selftest(inv: Invocation, out: TextIO) -> int:
    results = golden_checks()
    for name, passed in results:
        print(f"{'ok' if passed else 'FAIL'} {name}", file=out)
    return EXIT_OK if all(passed for _, passed in results) else EXIT_CONSISTENCY

# ---------------------------
# Entry point
# ---------------------------

HANDLERS = {
    "patterns": cmd_patterns,
    "kac": cmd_kac,
    "simple": cmd_simple,
    "betti": cmd_betti,
    "strands": cmd_strands,
    "regularity": cmd_regularity,
    "rect-check": cmd_rect_check,
    "render": cmd_render,
    "selftest": cmd_selftest,
    "euler": cmd_euler,
    "config": cmd_config,
}


def run(inv: Invocation, out: TextIO = None) -> int:
    """Dispatch one invocation; returns the exit code."""
    return HANDLERS[inv.command](inv, out or sys.stdout)


def setup_logging(verbose: int, config: dict) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, str(config.get("log_level", "WARNING")).upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(name)s:%(levelname)s:%(message)s", stream=sys.stderr)


def main(argv: List[str] = None, out: TextIO = None) -> int:
    args = build_parser().parse_args(argv)
    config = load_config(args.config_path)
    setup_logging(args.verbose, config)
    try:
        configure_store(os.environ.get("DYCKRES_CACHE") or config.get("cache_dir"))
        inv = build_invocation(args, config)
        return run(inv, out)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConsistencyError as e:
        print(f"consistency failure: {e}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except DyckresError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_STORAGE


if __name__ == "__main__":
    sys.exit(main())
