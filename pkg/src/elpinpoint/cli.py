"""Command-line entry point: classify, check, pinpoint, encode.

Exit status: 0 ok, 1 query not entailed (``check``/``encode``), 2 parse or
usage errors, 3 budget exhausted before enumeration completed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .classify import classify, holds, render_assertion
from .encode import build_instance, build_pinpoint_formula, coi_reduce, emit_wcnf, empty_instance
from .errors import ParseError, QueryNotEntailed
from .normalize import explain_origin, normalize, render_normal
from .ontology import parse_ontology, parse_query, render_axiom
from .pinpoint import Budget, explain

EXIT_OK, EXIT_NOT_ENTAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    ontology: str
    query: str = None
    mode: str = "all"
    limit: int = None
    coi: bool = True
    format: str = "text"
    emit_wcnf: str = None
    timeout: float = 0.0
    report: str = "normalized"

    def validate(self):
        if self.mode == "limit" and (self.limit is None or self.limit < 1):
            raise ValueError("--limit requires N >= 1")
        if self.timeout < 0:
            raise ValueError("--timeout must be >= 0")
        if self.command in ("check", "pinpoint", "encode") and not self.query:
            raise ValueError(f"{self.command} requires --query")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elpinpoint", description="Explain EL+ subsumptions by their minimal axiom sets."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, query=True):
        p.add_argument("ontology", help="ontology file in the line-based text format")
        if query:
            p.add_argument("--query", required=True, help="'Sub <= Super' over concept names")

    p = sub.add_parser("classify", help="print the classification closure")
    common(p, query=False)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("check", help="decide a subsumption")
    common(p)

    for name, help_text in (("pinpoint", "compute MinAs"), ("encode", "write the WCNF instance")):
        p = sub.add_parser(name, help=help_text)
        common(p)
        p.add_argument("--coi", dest="coi", action="store_true", default=True)
        p.add_argument("--no-coi", dest="coi", action="store_false")
        p.add_argument("--emit-wcnf", metavar="PATH", help="write the WCNF instance ('-' for stdout)")
        if name == "pinpoint":
            mode = p.add_mutually_exclusive_group()
            mode.add_argument("--all", dest="mode", action="store_const", const="all")
            mode.add_argument("--one", dest="mode", action="store_const", const="one")
            mode.add_argument("--limit", type=int, metavar="N")
            p.add_argument("--format", choices=["text", "json"], default="text")
            p.add_argument("--timeout", type=float, default=0.0, metavar="SECS")
            p.add_argument("--report", choices=["normalized", "source"], default="normalized")
    return parser


def config_from_args(args) -> RunConfig:
    mode = getattr(args, "mode", None) or "all"
    limit = getattr(args, "limit", None)
    if limit is not None:
        mode = "limit"
    cfg = RunConfig(
        command=args.command,
        ontology=args.ontology,
        query=getattr(args, "query", None),
        mode=mode,
        limit=limit,
        coi=getattr(args, "coi", True),
        format=getattr(args, "format", "text"),
        emit_wcnf=getattr(args, "emit_wcnf", None),
        timeout=getattr(args, "timeout", 0.0),
        report=getattr(args, "report", "normalized"),
    )
    cfg.validate()
    return cfg


def _write(path, text, out):
    if path == "-":
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _lines(tbox, o, axiom_ids):
    """Sorted renderings of normalized axioms with their source lines."""
    out = []
    for a in sorted(axiom_ids):
        lines = sorted(o.axioms[s].span[0] for s in explain_origin(tbox, [a]))
        tag = ",".join(map(str, lines))
        out.append(f"{render_normal(tbox.axiom(a), tbox.symbols)} [line {tag}]")
    return sorted(out)


def _report_sets(cfg, o, tbox, sets):
    """Each set rendered as a list of axiom strings (plus source ids)."""
    rendered = []
    if cfg.report == "source":
        collapsed = sorted({explain_origin(tbox, s) for s in sets}, key=sorted)
        for src in collapsed:
            rendered.append((sorted(render_axiom(o, k) for k in src), sorted(src)))
    else:
        for s in sets:
            texts = sorted(render_normal(tbox.axiom(a), tbox.symbols) for a in s)
            rendered.append((texts, sorted(explain_origin(tbox, s))))
    return rendered


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    with open(cfg.ontology, encoding="utf-8") as fh:
        o = parse_ontology(fh.read())
    tbox = normalize(o)

    if cfg.command == "classify":
        closure = classify(tbox)
        items = [render_assertion(a, tbox.symbols) for a in closure.assertions]
        if cfg.format == "json":
            out.write(json.dumps({"assertions": items}, indent=2) + "\n")
        else:
            out.write("".join(line + "\n" for line in items))
        return EXIT_OK

    query = parse_query(cfg.query, o.symbols)

    if cfg.command == "check":
        entailed = holds(classify(tbox), *query)
        out.write("ENTAILED\n" if entailed else "NOT-ENTAILED\n")
        return EXIT_OK if entailed else EXIT_NOT_ENTAILED

    if cfg.command == "encode":
        if query[0] == query[1] or query[1] == 0:
            inst = empty_instance()
        else:
            try:
                inst = build_instance(build_pinpoint_formula(classify(tbox)), query)
            except QueryNotEntailed as exc:
                err.write(f"NOT-ENTAILED: {exc}\n")
                return EXIT_NOT_ENTAILED
            if cfg.coi:
                inst = coi_reduce(inst)
        _write(cfg.emit_wcnf or "-", emit_wcnf(inst), out)
        return EXIT_OK

    budget = Budget(time_limit=cfg.timeout or None)
    result = explain(tbox, query, mode="one" if cfg.mode == "one" else "all", coi=cfg.coi, budget=budget)
    if cfg.emit_wcnf and result.instance is not None:
        _write(cfg.emit_wcnf, emit_wcnf(result.instance), out)

    minas = result.minas
    complete = result.complete
    exhausted = cfg.mode != "one" and not result.complete
    if cfg.mode == "limit" and len(minas) > cfg.limit:
        minas = minas[: cfg.limit]
        complete = False

    elapsed = result.stats.get("wall_time", 0.0)
    if cfg.format == "json":
        reported = _report_sets(cfg, o, tbox, minas)
        doc = {
            "query": cfg.query,
            "entailed": result.entailed,
            "minas": [texts for texts, _ in reported],
            "mina_sources": [src for _, src in reported],
            "mcses": [texts for texts, _ in _report_sets(cfg, o, tbox, result.mcses)],
            "complete": complete,
            "stats": result.stats,
        }
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        if cfg.report == "source":
            shown = [texts for texts, _ in _report_sets(cfg, o, tbox, minas)]
        else:
            shown = [_lines(tbox, o, m) for m in minas]
        for texts in shown:
            out.write(("; ".join(texts) if texts else "(trivial)") + "\n")
        out.write(
            f"minas={len(shown)} mcses={len(result.mcses)} "
            f"complete={'true' if complete else 'false'} time={elapsed:.3f}\n"
        )
    return EXIT_BUDGET if exhausted else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return run(cfg)
    except ValueError as exc:
        parser.error(str(exc))
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
