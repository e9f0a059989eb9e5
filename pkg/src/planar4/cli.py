"""Batch front door: extraction, verification, discharging reports,
generation, and oracle runs.

Exit codes: 0 all checks pass; 1 usage, IO, or parse problems (including
non-planar input where an embedding is required); 2 a bound or verification
failure; 3 a counterexample report (a structural guarantee failed -- this
would be mathematically significant).

Every output starts with header lines embedding the tool version, the run
configuration, and a SHA-256 digest of the input so results are
reproducible.  Rationals are always printed "p/q" in lowest terms.
"""

import argparse
import csv
import hashlib
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from . import __version__
from .cuts import good_subgraph, lemma9_dichotomy
from .discharging import (
    charge_report_rows,
    check_lemma_faces,
    classify_types,
    lemma12_violations,
    run_discharging,
)
from .embedding import write_planar_code
from .errors import CounterexampleFound, FormatError, GenerationError, NotPlanarError, Planar4Error
from .generators import (
    NAMED_GRAPHS,
    all_connected_planar_graphs,
    all_triangulations,
    ingest_stream,
    named,
    random_triangulation,
)
from .graphs import average_degree, graph6_bytes, write_graph6
from .oracle import compare_extract_to_oracle, min_deletion_exact
from .reduction import (
    CollectAll,
    certificate_from_json,
    certificate_to_json,
    extract_with_report,
    theorem2_witness,
    verify_certificate,
)

SUITES = ("lemma7", "lemma9", "lemma12", "theorem1", "theorem2", "corollary3", "certificate")


@dataclass
class RunConfig:
    subcommand: str
    input: Optional[str] = None
    format: str = "graph6"
    output: Optional[str] = None
    seed: Optional[int] = None
    max_n: Optional[int] = None
    jobs: int = 1
    suite: Optional[str] = None
    verbosity: int = 0
    extras: dict = field(default_factory=dict)

    def as_json(self) -> str:
        payload = {k: v for k, v in self.__dict__.items() if v not in (None, {}, 0)}
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _digest(path: Optional[str]) -> str:
    if not path:
        return "-"
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _header_lines(config: RunConfig) -> List[str]:
    return [
        f"# planar4 {__version__}",
        f"# config {config.as_json()}",
        f"# input_sha256 {_digest(config.input)}",
    ]


def _load_records(config: RunConfig):
    records = list(ingest_stream(config.input, config.format))
    if config.max_n is not None:
        records = [r for r in records if len(r.graph) <= config.max_n]
    return records


def _frac(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def _extract_one(payload):
    """Worker for the extract pool; returns row data or an error marker."""
    blob_format, blob, cut_limit = payload
    if blob_format == "planar_code":
        from .embedding import read_planar_code

        eg = next(read_planar_code(blob))
        g = eg.graph
    else:
        from .graphs import graph6_loads

        g = graph6_loads(blob)
        eg = None
    try:
        cert, _ = extract_with_report(g, eg, cut_analysis_limit=cut_limit)
    except CounterexampleFound as exc:
        return ("counterexample", str(exc), exc.graph6)
    ok = verify_certificate(g, cert).ok
    return ("ok", cert, ok)


def cmd_extract(config: RunConfig) -> int:
    records = _load_records(config)
    out = sys.stdout
    writer = csv.writer(out)
    for line in _header_lines(config):
        out.write(line + "\n")
    writer.writerow(["index", "n", "E", "avg_degree", "gamma", "deletions", "collected", "fraction", "verified"])
    cert_sink = open(config.output, "w") if config.output else None
    exit_code = 0
    cut_limit = config.extras.get("cut_limit", 1500)

    def payloads():
        from .embedding import planar_code_bytes

        for rec in records:
            if rec.embedding is not None:
                yield ("planar_code", planar_code_bytes(rec.embedding), cut_limit)
            else:
                yield ("graph6", graph6_bytes(rec.graph), cut_limit)

    try:
        if config.jobs > 1:
            import multiprocessing

            with multiprocessing.Pool(config.jobs) as pool:
                results = pool.map(_extract_one, list(payloads()))
        else:
            results = map(_extract_one, payloads())
        for rec, result in zip(records, results):
            g = rec.graph
            if not rec.planar:
                print(f"error: record {rec.index} is not planar", file=sys.stderr)
                return 1
            if result[0] == "counterexample":
                raise CounterexampleFound(result[1], graph6=result[2])
            _, cert, ok = result
            n = len(g)
            s = len(cert.deletions)
            collected = n - s
            gamma = cert.original_gamma
            bounds_ok = Fraction(s) <= gamma
            writer.writerow(
                [
                    rec.index,
                    n,
                    g.edge_count,
                    _frac(average_degree(g)) if n else "0/1",
                    _frac(gamma),
                    s,
                    collected,
                    _frac(Fraction(collected, n)) if n else "1/1",
                    int(ok),
                ]
            )
            if cert_sink:
                cert_sink.write(certificate_to_json(cert) + "\n")
            if not ok or not bounds_ok:
                exit_code = 2
    except CounterexampleFound as exc:
        print(f"counterexample: {exc} graph6={exc.graph6}", file=sys.stderr)
        return 3
    finally:
        if cert_sink:
            cert_sink.close()
    return exit_code


def _suite_rows(config: RunConfig, records):
    suite = config.suite
    strict = not config.extras.get("relaxed", False)
    if suite == "certificate":
        cert_path = config.extras.get("certificates")
        if not cert_path:
            raise FormatError("suite=certificate needs --certificates")
        with open(cert_path) as fh:
            certs = [certificate_from_json(line) for line in fh if line.strip()]
        if len(certs) != len(records):
            raise FormatError(
                f"{len(certs)} certificates for {len(records)} graphs"
            )
        for rec, cert in zip(records, certs):
            rep = verify_certificate(rec.graph, cert)
            yield rec.index, rep.ok, "" if rep.ok else f"certificate: {rep.reason}"
        return
    for rec in records:
        g = rec.graph
        if suite == "theorem2":
            if not rec.planar:
                yield rec.index, True, "skipped: non-planar"
                continue
            outcome = theorem2_witness(g)  # CounterexampleFound propagates
            yield rec.index, True, "collect_all" if isinstance(outcome, CollectAll) else "witness"
            continue
        if suite in ("theorem1", "corollary3"):
            if not rec.planar:
                yield rec.index, True, "skipped: non-planar"
                continue
            cert, _ = extract_with_report(g, rec.embedding)
            n = len(g)
            s = len(cert.deletions)
            gamma = cert.original_gamma
            if Fraction(s) > gamma:
                yield rec.index, False, f"|S|={s} exceeds gamma={_frac(gamma)}"
                continue
            if suite == "theorem1":
                from .graphs import connected_components

                d = average_degree(g) if n else Fraction(0)
                if len(connected_components(g)) == 1 and d >= 2:
                    need = Fraction(38 - d, 36)
                    have = Fraction(n - s, n)
                    if have < need:
                        yield rec.index, False, f"fraction {_frac(have)} below {_frac(need)}"
                        continue
            else:
                if not (Fraction(s) < Fraction(n, 9) and Fraction(n - s) > Fraction(8 * n, 9)):
                    yield rec.index, False, f"|S|={s} not below n/9={_frac(Fraction(n, 9))}"
                    continue
            yield rec.index, True, ""
            continue
        # discharging-based suites need an embedding
        if not rec.planar:
            yield rec.index, True, "skipped: non-planar"
            continue
        eg = rec.ensure_embedding()
        if suite == "lemma12":
            state = run_discharging(eg, strict=strict, with_ledger=False, check=False)
            bad = lemma12_violations(state, eg)
            yield rec.index, not bad, "" if not bad else f"inflow cap broken at {bad[0][0]}"
            continue
        state = run_discharging(eg, strict=strict, with_ledger=False)
        if suite == "lemma7":
            rep = check_lemma_faces(state, eg)
            if not rep.hypothesis_met:
                yield rec.index, True, "hypothesis not met (min degree < 5)"
            else:
                yield rec.index, rep.passed, "" if rep.passed else "positive face or vertex total below 12"
            continue
        if suite == "lemma9":
            from .graphs import connected_components

            if len(connected_components(g)) != 1 or min(g.degree(v) for v in g.vertex_list) < 5:
                yield rec.index, True, "hypothesis not met"
                continue
            gs = good_subgraph(g, eg)
            rep = lemma9_dichotomy(gs, state)
            cut = "none" if gs.cut is None else f"{gs.cut.kind}{gs.cut.vertices}"
            detail = f"cut={cut} kernel={len(gs.kernel)} extraordinary={len(gs.extraordinary)}"
            yield rec.index, rep.passed, detail if rep.passed else f"dichotomy failed; {detail}"
            continue
        raise FormatError(f"unknown suite {suite!r}")


def cmd_verify(config: RunConfig) -> int:
    if config.suite not in SUITES:
        print(f"error: unknown suite {config.suite!r}; choose from {SUITES}", file=sys.stderr)
        return 1
    records = _load_records(config)
    out = sys.stdout
    writer = csv.writer(out)
    for line in _header_lines(config):
        out.write(line + "\n")
    writer.writerow(["index", "suite", "pass", "detail"])
    all_ok = True
    try:
        for index, ok, detail in _suite_rows(config, records):
            writer.writerow([index, config.suite, int(ok), detail])
            all_ok = all_ok and ok
    except CounterexampleFound as exc:
        print(f"counterexample: {exc} graph6={exc.graph6}", file=sys.stderr)
        return 3
    return 0 if all_ok else 2


def cmd_discharge(config: RunConfig) -> int:
    records = _load_records(config)
    out = sys.stdout
    writer = csv.writer(out)
    for line in _header_lines(config):
        out.write(line + "\n")
    writer.writerow(
        ["graph", "id", "kind", "size", "type", "initial", "step1", "step2", "step3", "final"]
    )
    strict = not config.extras.get("relaxed", False)
    for rec in records:
        if not rec.planar:
            print(f"error: record {rec.index} is not planar", file=sys.stderr)
            return 1
        eg = rec.ensure_embedding()
        types = classify_types(eg)
        state = run_discharging(eg, strict=strict, with_ledger=True)
        for row in charge_report_rows(eg, state, types):
            writer.writerow([rec.index] + list(row))
        total = state.total()
        writer.writerow(
            [rec.index, "total", "conservation", "", "", _frac(total), "0/1", "0/1", "0/1", _frac(total)]
        )
        if config.verbosity >= 2:
            for t in state.ledger:
                out.write(
                    f"# ledger {rec.index} step{t.step} "
                    f"{t.source[0]}{t.source[1]}->{t.target[0]}{t.target[1]} {_frac(t.amount)}\n"
                )
    return 0


def cmd_gen(config: RunConfig) -> int:
    kind = config.extras["kind"]
    out_path = config.output
    if not out_path:
        print("error: gen needs --output", file=sys.stderr)
        return 1
    graphs = []
    if kind == "named":
        graphs = [named(config.extras["name"])]
    elif kind == "random":
        count = config.extras.get("count", 1)
        seed = config.seed if config.seed is not None else 0
        for i in range(count):
            graphs.append(
                random_triangulation(
                    config.extras["n"],
                    seed=seed + i,
                    min_degree_target=config.extras.get("min_degree", 3),
                )
            )
    elif kind == "all-triangulations":
        graphs = list(all_triangulations(config.extras["n"]))
    elif kind == "all-connected-planar":
        if config.format == "planar_code":
            print("error: all-connected-planar only writes graph6", file=sys.stderr)
            return 1
        with open(out_path, "wb") as fh:
            write_graph6(fh, all_connected_planar_graphs(config.extras["n"]))
        return 0
    else:
        print(f"error: unknown gen kind {kind!r}", file=sys.stderr)
        return 1
    with open(out_path, "wb") as fh:
        if config.format == "planar_code":
            write_planar_code(fh, graphs)
        else:
            write_graph6(fh, (eg.graph for eg in graphs))
    return 0


def cmd_oracle(config: RunConfig) -> int:
    records = _load_records(config)
    out = sys.stdout
    writer = csv.writer(out)
    for line in _header_lines(config):
        out.write(line + "\n")
    writer.writerow(["index", "n", "optimum", "optimal", "extract_S", "floor_gamma", "time"])
    exit_code = 0
    for rec in records:
        g = rec.graph
        if not rec.planar:
            print(f"error: record {rec.index} is not planar", file=sys.stderr)
            return 1
        res = min_deletion_exact(g, 4, budget=config.extras.get("budget"))
        comparison = compare_extract_to_oracle(g, oracle=res)
        writer.writerow(
            [
                rec.index,
                len(g),
                res.optimum_deletions,
                int(res.optimal),
                comparison.extract_size,
                int(comparison.gamma),
                f"{res.time:.4f}",
            ]
        )
        if not comparison.ok:
            exit_code = 2
    return exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planar4",
        description="4-degenerate induced subgraphs of planar graphs: "
        "certified extraction, discharging, oracles, generators",
    )
    parser.add_argument("--version", action="version", version=f"planar4 {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="input stream path")
        p.add_argument("--format", choices=("graph6", "planar_code"), default="graph6")
        p.add_argument("--output", help="output path")
        p.add_argument("--seed", type=int)
        p.add_argument("--max-n", type=int, dest="max_n")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("-v", "--verbose", action="count", default=0)

    p = sub.add_parser("extract", help="extraction certificates + summary")
    common(p)
    p.add_argument("--cut-limit", type=int, default=1500, dest="cut_limit")

    p = sub.add_parser("verify", help="invariant suites")
    common(p)
    p.add_argument("--suite", required=True)
    p.add_argument("--certificates", help="certificate JSONL for suite=certificate")
    p.add_argument("--relaxed-distance", action="store_true", dest="relaxed")

    p = sub.add_parser("discharge", help="per-element charge report CSV")
    common(p)
    p.add_argument("--report", action="store_true",
                   help="emit the per-element CSV (the default behaviour)")
    p.add_argument("--relaxed-distance", action="store_true", dest="relaxed")

    p = sub.add_parser("gen", help="write graph corpora")
    common(p, needs_input=False)
    p.add_argument("--kind", required=True,
                   choices=("named", "random", "all-triangulations", "all-connected-planar"))
    p.add_argument("--name", choices=NAMED_GRAPHS)
    p.add_argument("--n", type=int)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--min-degree", type=int, default=3, dest="min_degree")

    p = sub.add_parser("oracle", help="exact minimum deletions vs extraction")
    common(p)
    p.add_argument("--budget", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    extras = {}
    for key in ("cut_limit", "certificates", "relaxed", "kind", "name", "n", "count",
                "min_degree", "budget"):
        if hasattr(args, key) and getattr(args, key) is not None:
            extras[key] = getattr(args, key)
    config = RunConfig(
        subcommand=args.subcommand,
        input=getattr(args, "input", None),
        format=args.format,
        output=args.output,
        seed=args.seed,
        max_n=args.max_n,
        jobs=args.jobs,
        suite=getattr(args, "suite", None),
        verbosity=args.verbose,
        extras=extras,
    )
    handler = {
        "extract": cmd_extract,
        "verify": cmd_verify,
        "discharge": cmd_discharge,
        "gen": cmd_gen,
        "oracle": cmd_oracle,
    }[config.subcommand]
    try:
        return handler(config)
    except CounterexampleFound as exc:
        print(f"counterexample: {exc} graph6={exc.graph6}", file=sys.stderr)
        return 3
    except (OSError, FormatError, NotPlanarError, GenerationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Planar4Error as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
