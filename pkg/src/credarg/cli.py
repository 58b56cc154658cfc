"""Batch command-line front end.

Exit codes: 0 success or accepted, 1 rejected (``accept`` below threshold,
``audit`` fail, a support rejected), 2 inconsistent premises, 3 impossible
evidence, 4 parse or usage error. With several files the largest code wins.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .credal import CredalSet, cond_bounds, restrict
from .decision import RULES, GAMMA_MAXIMIN, choose, expected_utility_interval
from .dsl import ArgumentFile, exact_decimal, parse_argument_file
from .errors import (
    ArgumentFileError,
    CredargError,
    ImpossibleEvidenceError,
    InconsistentPremisesError,
    PremiseNotAcceptedError,
    SupportRejectedError,
)
from .logic import DEFAULT_ATOM_CAP, conjoin, conjuncts, render
from .schema import (
    CombinationWarning,
    conjunction_audit,
    credal_set_for,
    eliminate,
    evaluate_schema_i,
    evaluate_schema_ii,
)

COMMANDS = ("eval", "accept", "eliminate", "audit", "decide", "maxent")

EXIT_OK, EXIT_REJECTED, EXIT_INCONSISTENT, EXIT_IMPOSSIBLE, EXIT_PARSE = range(5)


# ---------------------------------------------------------------------------
# Rendering helpers
# ---------------------------------------------------------------------------


def decimal6(x: Fraction) -> str:
    q = round(x * 10**6)
    sign = "-" if q < 0 else ""
    whole, frac = divmod(abs(q), 10**6)
    return f"{sign}{whole}.{frac:06d}"


def fmt(x: Fraction) -> str:
    """Short decimal when exact within 6 places, else ``a/b (0.xxxxxx)``."""
    d = exact_decimal(x)
    if d is not None and len(d.partition(".")[2]) <= 6:
        return d
    return f"{x.numerator}/{x.denominator} ({decimal6(x)})"


def fmt_interval(iv, point: bool = True) -> str:
    lo, hi = iv
    if point and lo == hi:
        return fmt(lo)
    return f"[{fmt(lo)}, {fmt(hi)}]"


def jnum(x: Fraction) -> dict[str, str]:
    return {"exact": f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator),
            "decimal": decimal6(x)}


def jinterval(iv) -> dict[str, Any]:
    lo, hi = iv
    return {"lower": jnum(lo), "upper": jnum(hi)}


@dataclass
class RunResult:
    command: str
    file: str
    exit_code: int = EXIT_OK
    data: dict[str, Any] = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "file": self.file,
            "exit_code": self.exit_code,
            "result": self.data,
            "diagnostics": list(self.diagnostics),
        }

    def text(self) -> str:
        out = [f"== {self.command} {self.file}"] + self.lines
        out += [f"note: {d}" for d in self.diagnostics]
        return "\n".join(out)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _query_text(query, evidence) -> str:
    inner = render(query)
    if evidence:
        inner += " | " + render(conjoin(evidence))
    return f"P({inner})"


def _evidence_notes(c: CredalSet, evidence, res: RunResult) -> None:
    if not evidence:
        return
    e_interval = cond_bounds(c, conjoin(evidence))
    if e_interval.lower == 0:
        res.diagnostics.append(
            "regular extension: the evidence has lower probability 0; bounds range "
            "over distributions giving it positive mass (both bounds attained)"
        )
    res.data["evidence"] = jinterval(e_interval)


def _ignored(af: ArgumentFile, res: RunResult, *what: str) -> None:
    present = {
        "acts": af.acts, "supports": af.supports, "threshold": af.threshold is not None,
        "observe": af.observe, "query": af.query is not None,
    }
    for w in what:
        if present[w]:
            res.diagnostics.append(f"{w} ignored by {res.command}")


def _cmd_eval(af: ArgumentFile, res: RunResult, opts) -> None:
    arg = af.schema_i()
    c = credal_set_for(arg)
    iv = evaluate_schema_i(arg)
    res.data["interval"] = jinterval(iv)
    res.lines.append(f"{_query_text(arg.query, arg.evidence)} = {fmt_interval(iv)}")
    _evidence_notes(c, arg.evidence, res)
    if opts.resolution:
        from .oracle import oracle_bounds  # scipy import deferred

        orc = oracle_bounds(c, arg.query, conjoin(arg.evidence), opts.resolution)
        res.data["oracle"] = None if orc is None else jinterval(orc)
        res.data["resolution"] = opts.resolution
        shown = "no admissible grid point" if orc is None else fmt_interval(orc, point=False)
        res.lines.append(f"grid oracle at resolution {opts.resolution}: {shown}")
    _ignored(af, res, "acts", "supports")


def _cmd_accept(af: ArgumentFile, res: RunResult, opts) -> None:
    arg = af.schema_ii(opts.threshold)
    v = evaluate_schema_ii(arg)
    res.data.update(
        interval=jinterval(v.interval), threshold=jnum(v.threshold),
        accepted=v.accepted, conclusion=render(v.conclusion),
    )
    word = "ACCEPTED" if v.accepted else "REJECTED"
    res.lines.append(f"{word} at {fmt(v.threshold)} with {fmt_interval(v.interval, point=False)}")
    if v.accepted:
        res.lines.append(f"conclusion: {render(v.conclusion)}")
    else:
        res.exit_code = EXIT_REJECTED
    _evidence_notes(credal_set_for(arg.base), arg.base.evidence, res)
    _ignored(af, res, "acts", "supports")


def _cmd_eliminate(af: ArgumentFile, res: RunResult, opts) -> None:
    main = af.schema_i()
    supports = af.support_arguments()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CombinationWarning)
        report = eliminate(main, supports)
    for w in caught:
        if issubclass(w.category, CombinationWarning):
            res.diagnostics.append(str(w.message))
    new = report.new_argument
    res.data.update(
        old_interval=jinterval(report.old_interval),
        new_interval=jinterval(report.new_interval),
        deviation_bound=jnum(report.deviation_bound),
        targets=[render(t) for t in report.targets],
        new_evidence=[render(f) for f in new.evidence],
        new_background=[render(f) for f in new.background],
        expansion=[{"weight": jinterval(w), "factor": jinterval(f)} for w, f in report.expansion],
    )
    res.lines.append(f"old {_query_text(main.query, main.evidence)} = {fmt_interval(report.old_interval)}")
    res.lines.append(f"new {_query_text(new.query, new.evidence)} = {fmt_interval(report.new_interval)}")
    res.lines.append(f"deviation bound {fmt(report.deviation_bound)}")
    res.lines.append(f"expansion ({len(report.expansion)} terms):")
    for i, (w, f) in enumerate(report.expansion):
        res.lines.append(f"  {i}: weight {fmt_interval(w)} x factor {fmt_interval(f)}")


def _cmd_audit(af: ArgumentFile, res: RunResult, opts) -> None:
    if af.query is None:
        raise ValueError("audit needs a query naming the conjunction to audit")
    p = opts.threshold if opts.threshold is not None else af.threshold
    if p is None:
        raise ValueError("audit needs a threshold")
    accepted = conjuncts(af.query)
    report = conjunction_audit(af.uncertainty(), af.given, accepted, p, af.space)
    res.data.update(
        premises=[{"formula": render(f), "interval": jinterval(iv)}
                  for f, iv in zip(report.premises, report.premise_intervals)],
        conjunction=jinterval(report.conjunction),
        frechet_bound=jnum(report.frechet_bound),
        threshold=jnum(report.threshold),
        passed=report.passed,
    )
    for f, iv in zip(report.premises, report.premise_intervals):
        res.lines.append(f"P({render(f)}) = {fmt_interval(iv, point=False)}")
    res.lines.append(
        f"conjunction {fmt_interval(report.conjunction, point=False)}, "
        f"Frechet floor {fmt(report.frechet_bound)}"
    )
    res.lines.append(f"{'PASS' if report.passed else 'FAIL'} at {fmt(report.threshold)}")
    if not report.passed:
        res.exit_code = EXIT_REJECTED
    _ignored(af, res, "observe", "acts", "supports")


def _cmd_decide(af: ArgumentFile, res: RunResult, opts) -> None:
    problem = af.decision_problem()
    eus = {a.name: expected_utility_interval(problem, a) for a in problem.acts}
    chosen = choose(problem, opts.rule)
    res.data.update(
        rule=opts.rule,
        expected_utility={name: jinterval(eu) for name, eu in eus.items()},
        chosen=[a.name for a in chosen],
    )
    for a in problem.acts:
        res.lines.append(f"EU({a.name}) = {fmt_interval(eus[a.name], point=False)}")
    res.lines.append(f"{opts.rule}: {', '.join(a.name for a in chosen)}")
    _evidence_notes(problem.credal_set(), problem.evidence, res)
    _ignored(af, res, "supports")


def _cmd_maxent(af: ArgumentFile, res: RunResult, opts) -> None:
    from .maxent import max_entropy

    c = restrict(CredalSet(af.space, af.constraints), conjoin(af.given))
    dist = max_entropy(c)
    worlds = [
        {"world": af.space.describe_world(w), "mass": f"{m:.12f}"}
        for w, m in enumerate(dist.masses)
    ]
    res.data.update(worlds=worlds, entropy=f"{dist.entropy():.12f}")
    for row in worlds:
        res.lines.append(f"{row['world']}: {row['mass']}")
    res.lines.append(f"entropy {res.data['entropy']}")
    if af.query is not None:
        q = dist.prob(af.query)
        res.data["query"] = {"formula": render(af.query), "probability": f"{q:.12f}"}
        res.lines.append(f"P({render(af.query)}) = {q:.12f}")
    _ignored(af, res, "observe", "acts", "supports")


_DISPATCH = {
    "eval": _cmd_eval,
    "accept": _cmd_accept,
    "eliminate": _cmd_eliminate,
    "audit": _cmd_audit,
    "decide": _cmd_decide,
    "maxent": _cmd_maxent,
}


def run(command: str, path: str, opts: argparse.Namespace) -> RunResult:
    """Run one command on one file."""
    res = RunResult(command, str(path))
    try:
        text = Path(path).read_text()
    except OSError as exc:
        res.exit_code = EXIT_PARSE
        res.data["error"] = f"cannot read file: {exc.strerror}"
        res.lines.append(f"error: {res.data['error']}")
        return res
    try:
        af = parse_argument_file(text, max_atoms=opts.max_atoms)
        _DISPATCH[command](af, res, opts)
    except ArgumentFileError as exc:
        _fail(res, EXIT_PARSE, f"{path}:{exc.line}:{exc.column}: {exc.args[0]}")
    except InconsistentPremisesError as exc:
        _fail(res, EXIT_INCONSISTENT, f"inconsistent premises: {exc}")
    except ImpossibleEvidenceError as exc:
        _fail(res, EXIT_IMPOSSIBLE, f"impossible evidence: {exc}")
    except (SupportRejectedError, PremiseNotAcceptedError) as exc:
        _fail(res, EXIT_REJECTED, str(exc))
    except (CredargError, ValueError) as exc:
        _fail(res, EXIT_PARSE, str(exc))
    return res


def _fail(res: RunResult, code: int, message: str) -> None:
    res.exit_code = code
    res.data = {"error": message}
    res.lines = [f"error: {message}"]


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would read as "inconsistent"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="credarg", description="Evaluate uncertain arguments over credal sets."
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("files", nargs="+", metavar="FILE")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--rule", choices=RULES, default=GAMMA_MAXIMIN,
                        help="decision rule for 'decide'")
    parser.add_argument("--resolution", type=int, default=None,
                        help="also report the grid oracle at this resolution ('eval')")
    parser.add_argument("--max-atoms", type=int, default=DEFAULT_ATOM_CAP)
    parser.add_argument("--threshold", type=Fraction, default=None,
                        help="override the file's acceptance level")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        opts = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE
    if opts.resolution is not None and opts.resolution < 1:
        print("credarg: --resolution must be positive", file=sys.stderr)
        return EXIT_PARSE
    results = [run(opts.command, f, opts) for f in opts.files]
    if opts.json:
        payload = [r.to_dict() for r in results]
        out = payload[0] if len(payload) == 1 else payload
        print(json.dumps(out, sort_keys=True, indent=2))
    else:
        print("\n\n".join(r.text() for r in results))
    return max(r.exit_code for r in results)


if __name__ == "__main__":
    sys.exit(main())
