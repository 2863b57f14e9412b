"""Batch front-end: verify, approximate, classify, and check witnesses
against declarative instance files.

Reports go to stdout (or ``--out``) and are byte-identical for identical
inputs and seed; wall-clock timing goes to stderr so it never perturbs a
report. Exit codes: 0 success, 2 file parse error, 3 semantic error
(unknown labels, missing embedding, bad selectors), 4 axiom failure,
5 verdict failure (a witness check or classification that does not hold).
"""
from __future__ import annotations

import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import click

from .approximation import FORWARD, BACKWARD, Query, best_approximation_set
from .chebyshev import QueryFamily, classify as classify_family
from .cones import as_rational, check_cone_axioms, format_rational
from .errors import (
    DuplicateLabel,
    EmbeddingRequired,
    InstanceFileError,
    NotARational,
    UnknownLabel,
)
from .files import (
    LoadedInstance,
    approximation_json,
    axiom_report_json,
    chebyshev_report_json,
    instance_json,
    load_instance_file,
    load_witness_file,
    verdict_json,
    vec_json,
    witness_json,
)
from .metric import build_example3, build_example4, verify_axioms
from .witnesses import (
    canonical_witness,
    verify_witness_for_element,
    verify_witness_for_set,
)

EXIT_PARSE = 2
EXIT_SEMANTIC = 3
EXIT_AXIOM = 4
EXIT_VERDICT = 5

_SEMANTIC_ERRORS = (UnknownLabel, EmbeddingRequired, DuplicateLabel, NotARational, ValueError)


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(path: str) -> LoadedInstance:
    try:
        return load_instance_file(path)
    except InstanceFileError as exc:
        raise _Failure(EXIT_PARSE, str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _finish(doc: dict, out: str | None, pretty_text: str | None) -> None:
    if pretty_text is not None:
        _emit(pretty_text, out)
    else:
        _emit(json.dumps(doc, indent=2) + "\n", out)


def _select_queries(
    loaded: LoadedInstance, selector: str, direction: str | None
) -> list[Query]:
    queries = loaded.queries
    if not queries:
        raise _Failure(
            EXIT_SEMANTIC,
            "instance file has no queries; add a 'queries' section",
        )
    if selector == "all":
        chosen = list(queries)
    else:
        try:
            index = int(selector)
        except ValueError:
            chosen = [q for q in queries if q.q == selector]
            if not chosen:
                raise _Failure(
                    EXIT_SEMANTIC, f"no query with target point {selector!r}"
                ) from None
        else:
            if not 0 <= index < len(queries):
                raise _Failure(
                    EXIT_SEMANTIC,
                    f"query index {index} out of range (file has {len(queries)})",
                )
            chosen = [queries[index]]
    if direction:
        chosen = [Query(q.q, q.candidates, direction) for q in chosen]
    return chosen


def _run(command):
    """Execute a command body, mapping library errors to exit codes."""
    started = time.perf_counter()
    try:
        command()
    except _Failure as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.code)
    except InstanceFileError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    except _SEMANTIC_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_SEMANTIC)
    finally:
        elapsed = time.perf_counter() - started
        click.echo(f"elapsed: {elapsed:.3f}s", err=True)


def _common_options(fn):
    fn = click.option("--out", type=click.Path(dir_okay=False), default=None,
                      help="Write the report to this file instead of stdout.")(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True,
                      help="Seed for the sampled checks; echoed in the report.")(fn)
    fn = click.option("--jobs", type=int, default=1, show_default=True,
                      help="Worker processes for the exhaustive triple checks.")(fn)
    fn = click.option("--pretty", is_flag=True, help="Human-readable report.")(fn)
    return fn


@click.group()
def main():
    """Exact best-approximation toolkit for finite quasi-cone metric instances."""


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _pretty_axioms(doc: dict) -> str:
    lines = []
    for section in ("cone_axioms", "metric_axioms"):
        parts = []
        for check in doc[section]["checks"]:
            mark = "ok" if check["passed"] else "FAIL"
            parts.append(f"{check['axiom']} {mark} ({check['checks']} checks)")
        lines.append(f"{section.replace('_', ' ')}: " + "; ".join(parts))
        for check in doc[section]["checks"]:
            if not check["passed"]:
                lines.append(f"  counterexample for {check['axiom']}: {check['counterexample']}")
    lines.append("all axioms hold" if doc["passed"] else "AXIOM FAILURE")
    return "\n".join(lines) + "\n"


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@_common_options
def verify(path, out, seed, jobs, pretty):
    """Check the cone axioms and the metric axioms exhaustively."""

    def body():
        loaded = _load(path)
        instance = loaded.instance
        cone_report = check_cone_axioms(instance.space.cone, seed=seed)
        metric_report = verify_axioms(instance, jobs=jobs)
        doc = {
            "command": "verify",
            "file": path,
            "seed": seed,
            "jobs": jobs,
            "points": len(instance.points),
            "cone_axioms": axiom_report_json(cone_report),
            "metric_axioms": axiom_report_json(metric_report),
            "passed": cone_report.passed and metric_report.passed,
        }
        _finish(doc, out, _pretty_axioms(doc) if pretty else None)
        if not doc["passed"]:
            failing = [c.axiom for c in (*cone_report.failures, *metric_report.failures)]
            raise _Failure(EXIT_AXIOM, f"axiom failure: {', '.join(failing)}")

    _run(body)


# ---------------------------------------------------------------------------
# approx
# ---------------------------------------------------------------------------

def _pretty_approx(results: list[dict]) -> str:
    lines = []
    for r in results:
        tag = "P_{H_f}" if r["direction"] == FORWARD else "P_{H_b}"
        best = "{" + ", ".join(r["best"]) + "}" if r["best"] else "∅"
        lines.append(f"{tag}(q={r['q']}) = {best}")
        if r["common_distance"] is not None:
            lines.append(f"  common distance ({', '.join(r['common_distance'])})")
        front = "{" + ", ".join(r["minimal_front"]) + "}"
        stats = r["stats"]
        lines.append(
            f"  minimal front {front}; comparable pairs "
            f"{stats['comparable']}/{stats['pairs']}"
        )
    return "\n".join(lines) + "\n"


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--query", "selector", default="all", show_default=True,
              help="Which file query to run: 'all', an index, or a target label.")
@click.option("--direction", type=click.Choice([FORWARD, BACKWARD]), default=None,
              help="Override the direction of the selected queries.")
@_common_options
def approx(path, selector, direction, out, seed, jobs, pretty):
    """Compute best-approximation sets for the file's queries."""

    def body():
        loaded = _load(path)
        queries = _select_queries(loaded, selector, direction)
        results = [
            approximation_json(q, best_approximation_set(loaded.instance, q))
            for q in queries
        ]
        doc = {
            "command": "approx",
            "file": path,
            "seed": seed,
            "jobs": jobs,
            "results": results,
        }
        _finish(doc, out, _pretty_approx(results) if pretty else None)

    _run(body)


# ---------------------------------------------------------------------------
# witness
# ---------------------------------------------------------------------------

def _pretty_witness(doc: dict) -> str:
    lines = [f"witness for q={doc['witness']['q']} ({doc['witness']['direction']})"]
    if "verdict" in doc:
        v = doc["verdict"]
        if v["holds"]:
            lines.append("verdict: holds")
        else:
            ce = v["counterexample"]
            lines.append(
                f"verdict: fails {v['failed_condition']} at {ce['point']} "
                f"with value ({', '.join(ce['value'])})"
            )
    if "certified" in doc:
        certified = "{" + ", ".join(doc["certified"]) + "}" if doc["certified"] else "∅"
        lines.append(f"certified members: {certified}")
    return "\n".join(lines) + "\n"


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["emit", "check"]), required=True)
@click.option("--query", "selector", default="0", show_default=True,
              help="File query supplying q and the candidate set.")
@click.option("--witness-path", type=click.Path(dir_okay=False), default=None,
              help="Where to write (emit) or read (check) the witness file.")
@click.option("--members", multiple=True,
              help="Check the witness for exactly these members (repeatable).")
@click.option("--direction", type=click.Choice([FORWARD, BACKWARD]), default=None)
@_common_options
def witness(path, mode, selector, witness_path, members, direction, out, seed, jobs, pretty):
    """Emit the canonical witness for a query, or check a witness file.

    In check mode without --members, the verdict holds when the table
    certifies at least one candidate; the certified set is reported.
    """

    def body():
        loaded = _load(path)
        query = _select_queries(loaded, selector, direction)[0]
        candidates = sorted(query.candidates)
        if mode == "emit":
            table = canonical_witness(loaded.instance, query.q, query.direction)
            wdoc = witness_json(table)
            if witness_path:
                Path(witness_path).write_text(json.dumps(wdoc, indent=2) + "\n")
            doc = {
                "command": "witness",
                "mode": "emit",
                "file": path,
                "seed": seed,
                "witness": wdoc,
            }
            _finish(doc, out, _pretty_witness(doc) if pretty else None)
            return

        if not witness_path:
            raise _Failure(EXIT_SEMANTIC, "check mode needs --witness-path")
        try:
            table = load_witness_file(witness_path)
        except InstanceFileError as exc:
            raise _Failure(EXIT_PARSE, str(exc)) from None
        if members:
            verdict = verify_witness_for_set(
                loaded.instance, table, candidates, members
            )
            certified = sorted(members) if verdict.holds else []
        else:
            certified = [
                h
                for h in candidates
                if verify_witness_for_element(loaded.instance, table, candidates, h).holds
            ]
            verdict = verify_witness_for_set(
                loaded.instance, table, candidates, certified
            )
            if verdict.holds and not certified:
                verdict = None
        doc = {
            "command": "witness",
            "mode": "check",
            "file": path,
            "seed": seed,
            "witness": {"q": table.q, "direction": table.direction},
            "certified": certified,
        }
        if verdict is None:
            doc["verdict"] = {"holds": False, "reason": "witness certifies no candidate"}
            _finish(doc, out, _pretty_witness(doc) if pretty else None)
            raise _Failure(EXIT_VERDICT, "witness certifies no candidate")
        doc["verdict"] = verdict_json(verdict)
        _finish(doc, out, _pretty_witness(doc) if pretty else None)
        if not verdict.holds:
            raise _Failure(
                EXIT_VERDICT, f"witness check failed: {verdict.failed_condition}"
            )

    _run(body)


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def _pretty_classify(doc: dict) -> str:
    lines = [f"direction: {doc['direction']}"]
    ch = doc["chebyshev"]
    if ch["holds"]:
        lines.append("Chebyshev: holds (every best set a singleton)")
    else:
        lines.append("Chebyshev: FAILS")
        for ce in ch["counterexamples"]:
            lines.append(f"  q={ce['q']}: distinct members {ce['h1']}, {ce['h2']}")
    qu = doc["quasi"]
    lines.append("quasi-Chebyshev: holds (every best set nonempty)" if qu["holds"]
                 else "quasi-Chebyshev: FAILS")
    for ce in qu["counterexamples"]:
        lines.append(f"  q={ce['q']}: {ce['reason']}")
    ps = doc["pseudo"]
    if ps["evaluated"]:
        lines.append("pseudo-Chebyshev: holds (finite scale); span ranks in census")
    lines.append("census (q: cardinality" + (", rank)" if ps["evaluated"] else ")"))
    for entry in doc["census"]:
        rank = f", {entry['rank']}" if entry["rank"] is not None else ""
        lines.append(f"  {entry['q']}: {entry['cardinality']}{rank}")
    return "\n".join(lines) + "\n"


@main.command(name="classify")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--direction", type=click.Choice([FORWARD, BACKWARD]), default=None,
              help="Override the family direction.")
@click.option("--pseudo/--no-pseudo", "pseudo", default=None,
              help="Force or skip the linear-independence census "
                   "(default: run it when the file has an embedding).")
@_common_options
def classify_cmd(path, direction, pseudo, out, seed, jobs, pretty):
    """Classify the candidate set over the file's query family.

    The family is taken from the file's queries (which must share one
    candidate set); without queries, every ground-set point is both a
    query and a candidate. Exit code 5 when the set is not Chebyshev.
    """

    def body():
        loaded = _load(path)
        if loaded.queries:
            candidate_sets = {q.candidates for q in loaded.queries}
            if len(candidate_sets) != 1:
                raise _Failure(
                    EXIT_SEMANTIC,
                    "classification needs a single shared candidate set across queries",
                )
            family = QueryFamily(
                tuple(q.q for q in loaded.queries),
                next(iter(candidate_sets)),
                direction or loaded.queries[0].direction,
            )
        else:
            family = QueryFamily(
                tuple(instance_label for instance_label in loaded.instance.points),
                frozenset(loaded.instance.points),
                direction or FORWARD,
            )
        report = classify_family(
            loaded.instance, family, embedding=loaded.embedding, check_pseudo=pseudo
        )
        doc = {
            "command": "classify",
            "file": path,
            "seed": seed,
            "jobs": jobs,
            **chebyshev_report_json(report),
        }
        _finish(doc, out, _pretty_classify(doc) if pretty else None)
        if not (report.chebyshev_holds and report.quasi_holds):
            first = (
                report.chebyshev_counterexamples[0][0]
                if report.chebyshev_counterexamples
                else report.quasi_counterexamples[0][0]
            )
            raise _Failure(
                EXIT_VERDICT, f"classification failed; first counterexample at q={first}"
            )

    _run(body)


# ---------------------------------------------------------------------------
# example
# ---------------------------------------------------------------------------

def _parse_grid(spec: str) -> list[Fraction]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise _Failure(EXIT_SEMANTIC, f"grid spec must be start:stop:step, got {spec!r}")
    try:
        start, stop, step = (as_rational(p) for p in parts)
    except NotARational:
        raise _Failure(EXIT_SEMANTIC, f"grid spec has non-rational parts: {spec!r}") from None
    if step <= 0:
        raise _Failure(EXIT_SEMANTIC, "grid step must be positive")
    if stop < start:
        raise _Failure(EXIT_SEMANTIC, "grid stop must not precede start")
    values = []
    value = start
    while value <= stop:
        values.append(value)
        value += step
    return values


@main.command()
@click.argument("name", type=click.Choice(["example3", "example4"]))
@click.option("--grid", required=True,
              help="Candidate grid as start:stop:step with rational parts, e.g. 0:2:1/4.")
@click.option("--alpha", default="1", show_default=True,
              help="Slack parameter for example4.")
@click.option("--beta", default=None,
              help="Query parameter; the query point is beta^2 for example3 "
                   "and beta itself for example4.")
@click.option("--direction", type=click.Choice([FORWARD, BACKWARD]), default=FORWARD,
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def example(name, grid, alpha, beta, direction, out):
    """Generate an instance file for one of the closed-form metrics."""

    def body():
        grid_values = _parse_grid(grid)
        points = [(format_rational(v), v) for v in grid_values]
        candidate_labels = [label for label, _ in points]
        queries = []
        if beta is not None:
            try:
                beta_value = as_rational(beta)
            except NotARational:
                raise _Failure(EXIT_SEMANTIC, f"beta must be rational, got {beta!r}") from None
            q_value = beta_value * beta_value if name == "example3" else beta_value
            q_label = format_rational(q_value)
            if q_value not in grid_values:
                points.append((q_label, q_value))
            queries.append(Query(q_label, frozenset(candidate_labels), direction))
        if name == "example3":
            instance = build_example3(points)
        else:
            instance = build_example4(points, as_rational(alpha))
        doc = instance_json(instance, queries)
        _emit(json.dumps(doc, indent=2) + "\n", out)

    _run(body)


if __name__ == "__main__":
    main()
