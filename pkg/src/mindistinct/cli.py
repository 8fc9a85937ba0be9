"""``mindistinct`` command line: bound, construct, verify, search, survey.

Exit codes: 0 success, 1 verification failure (or no certificate found),
2 inconsistent bounds, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import constructions as cons
from . import graph as gr
from .bounds import bound_report
from .search import DEFAULT_ETA, SearchProblem, estimate_q, run_search
from .spectra import DEFAULT_RTOL, Certificate, verify

EXIT_OK, EXIT_VERIFY, EXIT_INCONSISTENT, EXIT_USAGE = 0, 1, 2, 64
SURVEY_SEARCH_MAX_N = 8
SURVEY_RESTARTS = 16


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _number(text: str):
    try:
        return int(text)
    except ValueError:
        try:
            return float(text)
        except ValueError:
            return text


def _graph_from_args(args, required: bool = True) -> gr.Graph | None:
    try:
        if args.graph6:
            return gr.parse_graph6(args.graph6)
        if args.family:
            name, *params = args.family
            return gr.generate(name, *(_number(p) for p in params))
        if args.edge_list:
            return gr.parse_edge_list(Path(args.edge_list).read_text())
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from exc
    if required:
        raise UsageError("give a graph with --graph6, --family or --edge-list")
    return None


def _add_graph_args(p: argparse.ArgumentParser):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--graph6", help="graph in graph6 format")
    src.add_argument("--family", nargs="+", metavar=("NAME", "PARAM"),
                     help=f"named family and parameters ({', '.join(sorted(gr.FAMILIES))})")
    src.add_argument("--edge-list", metavar="FILE", help="edge list file: 'n' then 'u v' lines")


def _add_search_args(p: argparse.ArgumentParser, restarts: int):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=restarts)
    p.add_argument("--workers", type=int, default=1)


def _emit(obj, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(obj, indent=1, sort_keys=False, default=str) + "\n")
    else:
        for key, value in obj.items():
            if not isinstance(value, (list, dict)):
                out.write(f"{key}\t{value}\n")


def witness_certificates(g: gr.Graph, seed: int = 0) -> list[Certificate]:
    """Cheap certificates every report starts from: adjacency and clique cover."""
    if g.n == 0:
        return []
    certs = [cons.clique_cover_certificate(g, seed=seed)]
    if g.m:
        certs.append(cons.adjacency_certificate(g))
    return certs


# ---------------------------------------------------------------- bound


def cmd_bound(args) -> int:
    g = _graph_from_args(args)
    certs = witness_certificates(g, args.seed)
    if args.search:
        est = estimate_q(g, restarts=args.restarts, seed=args.seed, workers=args.workers,
                         certificates=certs)
        report, certs = est.report, est.certificates
    else:
        report = bound_report(g, certs)
    data = report.to_dict()
    data["rules_fired"] = report.rules_fired
    data["certificates"] = [c.cert_id for c in certs]
    if args.format == "tsv":
        print("graph6\tn\tm\tlower\tupper\texact\trules")
        print(f"{data['graph6']}\t{g.n}\t{g.m}\t{report.best_lower}\t{report.best_upper}\t"
              f"{'' if report.exact is None else report.exact}\t{','.join(report.rules_fired)}")
    else:
        _emit(data, "json")
    return EXIT_OK if report.consistent else EXIT_INCONSISTENT


# ---------------------------------------------------------------- construct


def _ints(params, count=None, name=""):
    try:
        values = [int(p) for p in params]
    except ValueError as exc:
        raise UsageError(f"{name}: integer parameters expected") from exc
    if count is not None and len(values) != count:
        raise UsageError(f"{name} takes {count} integer parameter(s)")
    return values


def build_certificate(recipe: str, params: list[str], g: gr.Graph | None, seed: int) -> Certificate:
    """Dispatch a ``construct`` request to the constructions module."""
    simple = {
        "complete": (cons.complete_certificate, 1),
        "path": (cons.path_certificate, 1),
        "complete-minus-edge": (cons.complete_minus_edge_certificate, 1),
        "complete-bipartite": (cons.complete_bipartite_certificate, 2),
        "hypercube": (cons.hypercube_certificate, 1),
    }
    if recipe in simple:
        fn, count = simple[recipe]
        return fn(*_ints(params, count, recipe))
    if recipe == "cycle":
        return cons.cycle_certificate(*_ints(params, 1, recipe), seed=seed)
    if recipe == "g-nk":
        return cons.g_nk_certificate(*_ints(params, 2, recipe), seed=seed)
    if recipe == "s-graph":
        return cons.s_graph_certificate(*_ints(params, 2, recipe), seed=seed)
    if recipe == "multipartite":
        return cons.multipartite_certificate(*_ints(params, None, recipe))
    if recipe == "k222":
        return cons.k222_certificate()
    if recipe == "exceptional":
        if len(params) != 1 or params[0] not in ("c5", "c5p", "c5pp"):
            raise UsageError("exceptional takes one of c5, c5p, c5pp")
        return cons.exceptional_certificates(seed)[params[0]]
    needs_graph = {
        "join-self": cons.join_self_certificate,
        "adjacency": cons.adjacency_certificate,
        "clique-cover": lambda h: cons.clique_cover_certificate(h, seed=seed),
        "corona": lambda h: cons.corona_certificate(cons.adjacency_certificate(h)),
    }
    if recipe in needs_graph:
        if g is None:
            raise UsageError(f"{recipe} needs --graph6, --family or --edge-list")
        return needs_graph[recipe](g)
    raise UsageError(f"unknown construction {recipe!r}")


CONSTRUCT_RECIPES = ("complete", "path", "complete-minus-edge", "complete-bipartite", "hypercube",
                     "cycle", "g-nk", "s-graph", "multipartite", "k222", "exceptional",
                     "join-self", "adjacency", "clique-cover", "corona")


def cmd_construct(args) -> int:
    g = _graph_from_args(args, required=False)
    try:
        cert = build_certificate(args.recipe, args.params, g, args.seed)
    except cons.ConstructionError as exc:
        sys.stderr.write(f"construction failed: {exc}\n")
        return EXIT_VERIFY
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    text = cert.to_json()
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK if cert.verified else EXIT_VERIFY


# ---------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    try:
        text = sys.stdin.read() if args.certificate == "-" else Path(args.certificate).read_text()
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    try:
        cert = verify(Certificate.from_json(text), rtol=args.tol)
    except (ValueError, KeyError, TypeError) as exc:
        _emit({"ok": False, "failures": [f"malformed certificate: {exc}"]}, args.format)
        return EXIT_VERIFY
    record = cert.verification.to_dict()
    record = {"certificate": cert.cert_id, "graph6": gr.to_graph6(cert.graph),
              "claimed_q": cert.claimed_q, **record}
    _emit(record, args.format)
    return EXIT_OK if cert.verified else EXIT_VERIFY


# ---------------------------------------------------------------- search


def _parse_floats(text: str, name: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"{name}: comma-separated numbers expected") from exc


def cmd_search(args) -> int:
    g = _graph_from_args(args)
    if args.target == "q2":
        target, values = "involution", None
    else:
        target = tuple(int(x) for x in _parse_floats(args.target, "--target"))
        values = ("adaptive" if args.values == "adaptive"
                  else None if args.values is None else _parse_floats(args.values, "--values"))
    try:
        problem = SearchProblem(g, target, values=values, restarts=args.restarts, seed=args.seed,
                                max_sweeps=args.max_sweeps, tol=args.tol, eta=args.eta,
                                workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    outcome = run_search(problem)
    if outcome.certificate is not None:
        print(outcome.certificate.to_json())
        return EXIT_OK
    _emit(outcome.to_dict(), "json")
    return EXIT_VERIFY


# ---------------------------------------------------------------- survey


@dataclass
class SurveyRow:
    graph6: str
    n: int
    m: int
    best_lower: int
    best_upper: int
    exact: int | None
    rules_fired: list[str]
    lower_witness: dict
    certificate_ids: list[str]
    upper_certificate: dict | None = field(default=None)

    def tsv(self) -> str:
        return "\t".join([self.graph6, str(self.n), str(self.m), str(self.best_lower),
                          str(self.best_upper), "" if self.exact is None else str(self.exact),
                          ",".join(self.rules_fired), ",".join(self.certificate_ids)])


TSV_HEADER = "graph6\tn\tm\tlower\tupper\texact\trules\tcertificates"


def survey_row(line: str, seed: int, restarts: int, search_max_n: int) -> SurveyRow:
    """Bounds, cheap certificates and (for small graphs) search for one graph6 line."""
    g = gr.parse_graph6(line)
    certs = witness_certificates(g, seed)
    if g.m and g.n <= search_max_n and restarts > 0:
        est = estimate_q(g, restarts=restarts, seed=seed, certificates=certs)
        report, certs = est.report, est.certificates
    else:
        report = bound_report(g, certs)
    best_cert = min(certs, key=lambda c: c.verification.measured_q) if certs else None
    return SurveyRow(
        graph6=gr.to_graph6(g), n=g.n, m=g.m,
        best_lower=report.best_lower, best_upper=report.best_upper, exact=report.exact,
        rules_fired=report.rules_fired, lower_witness=report.lower_witness().to_dict(),
        certificate_ids=[c.cert_id for c in certs],
        upper_certificate=best_cert.to_dict() if best_cert is not None else None,
    )


def _survey_worker(job):
    return survey_row(*job)


def survey_summary(rows: list[SurveyRow]) -> dict:
    exact = [r for r in rows if r.exact is not None]
    return {
        "graphs": len(rows),
        "exact": len(exact),
        "not_exact": len(rows) - len(exact),
        "inconsistent": sum(r.best_lower > r.best_upper for r in rows),
        "q_equals_n_minus_1": [r.graph6 for r in exact if r.n >= 2 and r.exact == r.n - 1],
        "q_equals_2": [r.graph6 for r in exact if r.exact == 2],
    }


def run_survey(lines: list[str], seed: int = 0, restarts: int = SURVEY_RESTARTS,
               search_max_n: int = SURVEY_SEARCH_MAX_N, workers: int = 1) -> list[SurveyRow]:
    jobs = [(line, seed, restarts, search_max_n) for line in lines]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_survey_worker, jobs))
    return [_survey_worker(job) for job in jobs]


def cmd_survey(args) -> int:
    stream = sys.stdin if args.input == "-" else open(args.input)
    with stream:
        lines = [ln.strip().removeprefix(">>graph6<<") for ln in stream]
    lines = [ln for ln in lines if ln]
    try:
        for ln in lines:
            gr.parse_graph6(ln)
    except gr.GraphFormatError as exc:
        raise UsageError(f"bad graph6 line: {exc}") from exc
    restarts = 0 if args.no_search else args.restarts
    rows = run_survey(lines, args.seed, restarts, args.search_max_n, args.workers)
    summary = survey_summary(rows)
    out = sys.stdout
    if args.format == "json":
        for r in rows:
            out.write(json.dumps(asdict(r), sort_keys=True, default=str) + "\n")
        out.write(json.dumps({"summary": summary}, sort_keys=True) + "\n")
    else:
        out.write(TSV_HEADER + "\n")
        for r in rows:
            out.write(r.tsv() + "\n")
        for key, value in summary.items():
            out.write(f"# {key}\t{','.join(value) if isinstance(value, list) else value}\n")
    return EXIT_INCONSISTENT if summary["inconsistent"] else EXIT_OK


# ---------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mindistinct", description="Bounds and certificates for q(G).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="lower and upper bounds for one graph")
    _add_graph_args(p)
    _add_search_args(p, SURVEY_RESTARTS)
    p.add_argument("--search", action="store_true", help="also run numerical search")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("construct", help="build and verify a certificate")
    p.add_argument("recipe", choices=CONSTRUCT_RECIPES)
    p.add_argument("params", nargs="*")
    _add_graph_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="write the certificate here instead of stdout")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="re-verify a certificate file")
    p.add_argument("certificate", help="certificate JSON file, or - for stdin")
    p.add_argument("--tol", type=float, default=DEFAULT_RTOL, help="clustering rtol")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="alternating-projection search")
    _add_graph_args(p)
    p.add_argument("--target", default="q2", help="q2, or multiplicities such as 2,2,2")
    p.add_argument("--values", help="target eigenvalues (decreasing), or 'adaptive'")
    _add_search_args(p, 64)
    p.add_argument("--max-sweeps", type=int, default=5000)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("survey", help="bound every graph in a graph6 stream")
    p.add_argument("input", nargs="?", default="-", help="graph6 file (default stdin)")
    _add_search_args(p, SURVEY_RESTARTS)
    p.add_argument("--search-max-n", type=int, default=SURVEY_SEARCH_MAX_N)
    p.add_argument("--no-search", action="store_true")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.set_defaults(func=cmd_survey)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"mindistinct {args.command}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
