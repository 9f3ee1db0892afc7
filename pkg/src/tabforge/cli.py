"""Command-line front end: analyze, rules, prove, bench.

Exit codes: 0 success / VALID, 1 COUNTERMODEL, 2 usage or spec errors,
3 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .core import (
    DEFAULT_ASSIGNMENT_CAP,
    FormulaSyntaxError,
    Matrix,
    ResourceCapError,
    SignedFormula,
    SpecError,
    T,
    TabforgeError,
    bundled_matrix,
    bundled_names,
    parse_formula,
)
from .prints import minimal_unobtainable_prints, print_table
from .prover import (
    DEFAULT_NODE_BUDGET,
    decide_entailment,
    fat_formula,
    metrics,
    prove_branching_analytic,
    prove_cutbased_analytic,
)
from .rulegen import (
    DEFAULT_VECTOR_CAP,
    RuleContext,
    build_branching_system,
    build_cutbased_system,
)
from .separation import (
    NotSeparableError,
    conservative_extension,
    definable_unary_functions,
    is_separable,
    separating_sequence,
)

EXIT_OK = 0
EXIT_COUNTERMODEL = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

CAPS_ENV = "TABFORGE_CAPS"


@dataclass
class RunConfig:
    spec: str
    command: str
    system: str = "branching"
    strategy: str = "analytic"
    streamline: bool = True
    extend: str | None = None
    exact_separators: bool = False
    out_format: str = "text"
    out: str | None = None
    seed: int = 0
    assignment_cap: int = DEFAULT_ASSIGNMENT_CAP
    vector_cap: int = DEFAULT_VECTOR_CAP
    node_budget: int = DEFAULT_NODE_BUDGET
    jobs: int = 1
    k_range: tuple = (1, 3)
    family: str = "fat"


def _env_caps() -> dict:
    raw = os.environ.get(CAPS_ENV, "")
    caps = {}
    if not raw:
        return caps
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise SpecError(f"{CAPS_ENV}: expected key=value entries, got {part!r}")
        key, value = part.split("=", 1)
        key = key.strip()
        if key not in ("assignments", "vectors", "nodes"):
            raise SpecError(f"{CAPS_ENV}: unknown cap {key!r}")
        try:
            caps[key] = int(value)
        except ValueError:
            raise SpecError(f"{CAPS_ENV}: {key} needs an integer, got {value!r}") from None
    for k, v in caps.items():
        if v <= 0:
            raise SpecError(f"{CAPS_ENV}: {k} must be positive")
    return caps


def load_matrix(spec: str) -> Matrix:
    if os.path.exists(spec):
        return Matrix.from_file(spec)
    return bundled_matrix(spec)


def _prepare(config: RunConfig):
    """Load the spec, apply the requested extension, pick a sequence."""
    matrix = load_matrix(config.spec)
    if config.extend:
        matrix = conservative_extension(matrix, config.extend)
    seq = separating_sequence(matrix, exact=config.exact_separators)
    return matrix, seq


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# analyze

def cmd_analyze(config: RunConfig) -> int:
    matrix = load_matrix(config.spec)
    fns = definable_unary_functions(matrix)
    separable, pairs = is_separable(matrix)
    report: dict = {
        "logic": matrix.name,
        "values": matrix.n,
        "designated": sorted(matrix.designated),
        "definable_unary_functions": len(fns),
        "separable": separable,
        "unseparated_pairs": [list(p) for p in pairs],
    }
    target = matrix
    if config.extend:
        target = conservative_extension(matrix, config.extend)
    if target is not matrix:
        fns = definable_unary_functions(target)
        report["extended"] = {
            "logic": target.name,
            "added_connectives": [
                c.name for c in target.connectives if c.name not in matrix.by_name  # type: ignore[attr-defined]
            ],
            "definable_unary_functions": len(fns),
        }
    ok_now, _ = is_separable(target)
    if ok_now:
        seq = separating_sequence(target, exact=config.exact_separators)
        ctx = RuleContext(target, seq)
        report["separating_sequence"] = [str(w) for w in seq.witness_formulas()]
        report["prints"] = {
            target.value_str(v): p for v, p in sorted(print_table(target, seq).items())
        }
        report["minimal_unobtainable_prints"] = list(minimal_unobtainable_prints(target, seq))
        report["intersection_formulas"] = sorted(str(f) for f in ctx.intersections)

    if config.out_format == "json":
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        lines = [
            f"logic: {report['logic']} (values: {report['values']}, "
            f"designated: {report['designated']})",
            f"definable unary functions: {report['definable_unary_functions']}",
        ]
        if separable:
            lines.append("separable: yes")
        else:
            lines.append(
                "separable: no; pairs: "
                + ", ".join(f"({x},{y})" for x, y in pairs)
            )
        if "extended" in report:
            ext = report["extended"]
            lines.append(
                f"extension ({config.extend}): {ext['logic']} adds "
                + ", ".join(ext["added_connectives"])
            )
        if "separating_sequence" in report:
            lines.append("separating sequence:")
            for r, w in enumerate(report["separating_sequence"]):
                lines.append(f"  {r}: {w}")
            lines.append("binary prints:")
            for value, p in report["prints"].items():
                lines.append(f"  {value}: {p}")
            lines.append(
                "minimal unobtainable prints: "
                + (", ".join(report["minimal_unobtainable_prints"]) or "(none)")
            )
            lines.append(
                "intersection formulas: "
                + (", ".join(report["intersection_formulas"]) or "(none)")
            )
        text = "\n".join(lines) + "\n"
    _emit(text, config.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# rules

def _build_system(config: RunConfig, matrix: Matrix, seq):
    if config.system == "branching":
        return build_branching_system(matrix, seq, streamline=config.streamline)
    return build_cutbased_system(
        matrix, seq, streamline=config.streamline, vector_cap=config.vector_cap
    )


def cmd_rules(config: RunConfig) -> int:
    matrix, seq = _prepare(config)
    ruleset = _build_system(config, matrix, seq)
    if config.out_format == "json":
        text = json.dumps(ruleset.to_json(), indent=2) + "\n"
    else:
        text = ruleset.to_text()
    _emit(text, config.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# prove

def parse_sequent(text: str, matrix: Matrix):
    if text.count("|-") != 1:
        raise SpecError("sequent must contain exactly one '|-'")
    left, right = text.split("|-")
    gamma = [parse_formula(part, matrix) for part in left.split(";") if part.strip()]
    alpha = parse_formula(right, matrix)
    return gamma, alpha


def _transcript(node, depth=0, lines=None):
    lines = [] if lines is None else lines
    label = " ".join(str(f) for f in node.formulas) if node.formulas else "*"
    lines.append("  " * depth + f"[{node.rule_tag}] {label}")
    for child in node.children:
        _transcript(child, depth + 1, lines)
    return lines


def _dot(tableau) -> str:
    lines = ["digraph tableau {", "  node [shape=box, fontname=monospace];"]
    ids = {}

    def visit(node):
        ids[id(node)] = len(ids)
        label = "\\n".join(str(f) for f in node.formulas) if node.formulas else "*"
        tag = node.rule_tag
        lines.append(f'  n{ids[id(node)]} [label="{label}\\n({tag})"];')
        for child in node.children:
            visit(child)
            lines.append(f"  n{ids[id(node)]} -> n{ids[id(child)]};")

    visit(tableau.root)
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_prove(config: RunConfig, sequent: str) -> int:
    matrix, seq = _prepare(config)
    gamma, alpha = parse_sequent(sequent, matrix)
    ruleset = _build_system(config, matrix, seq)
    t0 = time.perf_counter()
    verdict = decide_entailment(
        ruleset, gamma, alpha, strategy=config.strategy, node_budget=config.node_budget
    )
    wall_ms = (time.perf_counter() - t0) * 1000.0
    m = metrics(verdict.tableau)
    if config.out_format == "dot":
        _emit(_dot(verdict.tableau), config.out)
        return EXIT_OK if verdict.valid else EXIT_COUNTERMODEL
    if config.out_format == "json":
        data = {
            "valid": verdict.valid,
            "size": m.size,
            "lambda": m.lam,
            "rho": m.rho,
            "wall_ms": wall_ms,
        }
        if not verdict.valid:
            data["countermodel"] = {
                name: matrix.value_str(v) for name, v in sorted(verdict.assignment.items())
            }
        _emit(json.dumps(data, indent=2) + "\n", config.out)
    else:
        if verdict.valid:
            lines = [f"VALID  size={m.size} lambda={m.lam} rho={m.rho} wall_ms={wall_ms:.1f}"]
        else:
            model = ", ".join(
                f"{name}={matrix.value_str(v)}"
                for name, v in sorted(verdict.assignment.items())
            )
            lines = [f"COUNTERMODEL  {model or '(no atoms)'}"]
        lines.extend(_transcript(verdict.tableau.root))
        _emit("\n".join(lines) + "\n", config.out)
    return EXIT_OK if verdict.valid else EXIT_COUNTERMODEL


# ---------------------------------------------------------------------------
# bench

def _bench_one(args):
    """One bench task: build the system in-process and prove T:fat(k)."""
    spec, system, streamline, k, node_budget, vector_cap, exact = args
    matrix = load_matrix(spec)
    seq = separating_sequence(matrix, exact=exact)
    if system == "branching":
        ruleset = build_branching_system(matrix, seq, streamline=streamline)
        prove = prove_branching_analytic
    else:
        ruleset = build_cutbased_system(
            matrix, seq, streamline=streamline, vector_cap=vector_cap
        )
        prove = prove_cutbased_analytic
    phi = fat_formula(k, matrix)
    t0 = time.perf_counter()
    verdict = prove(ruleset, [SignedFormula(T, phi)], node_budget)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    m = metrics(verdict.tableau)
    return {
        "logic": matrix.name,
        "system": system,
        "strategy": "analytic",
        "root": f"T:fat({k})",
        "k": k,
        "closed": verdict.valid,
        "size": m.size,
        "lambda": m.lam,
        "rho": m.rho,
        "wall_ms": round(wall_ms, 2),
    }


def _bench_figure(rows, png_path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for system in ("branching", "cut-based"):
        pts = sorted((r["k"], r["lambda"]) for r in rows if r["system"] == system)
        if pts:
            ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=system)
    ax.set_xlabel("k (fat formula index)")
    ax.set_ylabel("lambda (nodes)")
    ax.set_yscale("log")
    ax.set_title(f"{rows[0]['logic']}: proof size growth on fat formulas")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)


def cmd_bench(config: RunConfig) -> int:
    if config.family != "fat":
        raise SpecError(f"unknown benchmark family {config.family!r}; only 'fat' exists")
    matrix = load_matrix(config.spec)  # validate early, incl. and/or/neg presence
    fat_formula(1, matrix)
    lo, hi = config.k_range
    tasks = [
        (config.spec, system, config.streamline, k, config.node_budget,
         config.vector_cap, config.exact_separators)
        for k in range(lo, hi + 1)
        for system in ("branching", "cut-based")
    ]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            rows = list(pool.map(_bench_one, tasks))
    else:
        rows = [_bench_one(t) for t in tasks]

    buf = io.StringIO()
    writer = csv.DictWriter(
        buf,
        fieldnames=["logic", "system", "strategy", "root", "closed", "size",
                    "lambda", "rho", "wall_ms"],
        extrasaction="ignore",
    )
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    text = buf.getvalue()
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        png = os.path.splitext(config.out)[0] + ".png"
        _bench_figure(rows, png)
        sys.stdout.write(f"wrote {config.out} and {png}\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def _add_common(p: argparse.ArgumentParser):
    p.add_argument("spec", help="bundled logic name or path to a JSON spec "
                                f"(bundled: {', '.join(bundled_names())})")
    p.add_argument("--extend", choices=["constants", "primitive"], default=None,
                   help="make a non-separable logic separable first")
    p.add_argument("--exact-separators", action="store_true",
                   help="exhaustive minimal separator search (short sequences only)")
    p.add_argument("--seed", type=int, default=0,
                   help="random seed carried in the run configuration")
    p.add_argument("--out", default=None, help="write output to this file")
    p.add_argument("--node-budget", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tabforge",
        description="Generate and run two-signed tableau provers for finite-valued logics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="expressiveness and binary-print report")
    _add_common(p)
    p.add_argument("--format", dest="out_format", choices=["text", "json"], default="text")

    p = sub.add_parser("rules", help="emit a tableau rule set")
    _add_common(p)
    p.add_argument("--system", choices=["branching", "cut"], default="branching")
    p.add_argument("--streamline", dest="streamline", action="store_true", default=True)
    p.add_argument("--no-streamline", dest="streamline", action="store_false")
    p.add_argument("--format", dest="out_format", choices=["text", "json"], default="text")

    p = sub.add_parser("prove", help="decide a sequent 'g1; g2 |- a'")
    _add_common(p)
    p.add_argument("sequent")
    p.add_argument("--system", choices=["branching", "cut"], default="branching")
    p.add_argument("--strategy", choices=["analytic", "ttsim"], default="analytic")
    p.add_argument("--streamline", dest="streamline", action="store_true", default=True)
    p.add_argument("--no-streamline", dest="streamline", action="store_false")
    p.add_argument("--format", dest="out_format", choices=["text", "json", "dot"],
                   default="text")

    p = sub.add_parser("bench", help="fat-formula benchmark (CSV + figure)")
    _add_common(p)
    p.add_argument("--family", choices=["fat"], default="fat")
    p.add_argument("--k-range", default="1:3", help="like 1:3")
    p.add_argument("--streamline", dest="streamline", action="store_true", default=True)
    p.add_argument("--no-streamline", dest="streamline", action="store_false")
    p.add_argument("--jobs", type=int, default=1, help="parallel proof workers")
    return parser


def _config_from(args) -> RunConfig:
    caps = _env_caps()
    config = RunConfig(spec=args.spec, command=args.command)
    config.extend = args.extend
    config.exact_separators = args.exact_separators
    config.seed = args.seed
    config.out = args.out
    config.assignment_cap = caps.get("assignments", DEFAULT_ASSIGNMENT_CAP)
    config.vector_cap = caps.get("vectors", DEFAULT_VECTOR_CAP)
    config.node_budget = args.node_budget or caps.get("nodes", DEFAULT_NODE_BUDGET)
    if config.node_budget <= 0:
        raise SpecError(f"--node-budget must be positive, got {config.node_budget}")
    if hasattr(args, "system"):
        config.system = "cut-based" if args.system == "cut" else args.system
    if hasattr(args, "strategy"):
        config.strategy = args.strategy
    if hasattr(args, "streamline"):
        config.streamline = args.streamline
    if hasattr(args, "out_format"):
        config.out_format = args.out_format
    if hasattr(args, "jobs"):
        config.jobs = max(1, args.jobs)
    if hasattr(args, "family"):
        config.family = args.family
    if hasattr(args, "k_range"):
        try:
            lo, hi = (int(x) for x in args.k_range.split(":"))
        except ValueError:
            raise SpecError(f"--k-range expects LO:HI, got {args.k_range!r}") from None
        if lo < 1 or hi < lo:
            raise SpecError(f"--k-range needs 1 <= LO <= HI, got {args.k_range!r}")
        config.k_range = (lo, hi)
    if config.strategy == "ttsim" and config.system != "cut-based":
        raise SpecError("--strategy ttsim needs --system cut")
    return config


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from(args)
        if args.command == "analyze":
            return cmd_analyze(config)
        if args.command == "rules":
            return cmd_rules(config)
        if args.command == "prove":
            return cmd_prove(config, args.sequent)
        if args.command == "bench":
            return cmd_bench(config)
        parser.error(f"unknown command {args.command!r}")
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (SpecError, FormulaSyntaxError, NotSeparableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TabforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
