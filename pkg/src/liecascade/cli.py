"""Command-line entry point: ``liecascade <subcommand> ...``.

Exit codes: 0 success, 1 a verification found a failure, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Any, Callable, Sequence

from . import __version__
from .cascade import (
    OrthoSet,
    classify_d_normal_form,
    commuting_generators,
    d_form1,
    d_form2,
    d_form2_index,
    d_normal_form_exhaustion,
    decomposition_dims,
    interior_parity_ok,
    kostant_cascade,
    normal_form,
    parity,
    strongly_orthogonal_subsets,
)
from .certifier import SCENARIOS, aut_from_spec, formality_certificate, scenario_certificate, subgroups_of_Z2xZk
from .diagram import (
    DiagramAut,
    diagram_automorphisms,
    folded_fixed_type,
    folding_table,
    induced_lattice_map,
    standard_flip,
    triality,
)
from .errors import CounterexampleFound, LieCascadeError
from .rootsys import SystemType, all_types, build_root_system, cartan_int, neg, root_string, to_json
from .torusauto import lifts_to_involution, odd_parity_witness, property_star_sweep
from .weyl import WeylWord, apply

JOBS_ENV = "LIECASCADE_JOBS"


class UsageError(Exception):
    """Bad command-line input detected after argparse."""


class VerificationFailed(Exception):
    """Raised by a command whose check found a failure; carries the report."""

    def __init__(self, payload: Any, text: str):
        super().__init__(text)
        self.payload = payload
        self.text = text


# -- helpers ---------------------------------------------------------------


def _stype(text: str) -> SystemType:
    return SystemType.parse(text)


def _json_arg(text: str, what: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"cannot parse {what} as JSON: {e}") from None


def _parse_nu(rs, text: str) -> DiagramAut:
    t = text.strip().lower()
    if t in ("id", "identity"):
        return DiagramAut.identity(rs.rank)
    if t == "flip":
        return standard_flip(rs)
    if t == "triality":
        return triality(rs)
    if t.startswith("["):
        perm = _json_arg(text, "--nu")
    else:
        try:
            perm = [int(x) for x in t.replace(" ", "").split(",") if x]
        except ValueError:
            raise UsageError(f"--nu must be id, flip, triality or a permutation like 1,2,4,3; got {text!r}") from None
    if not isinstance(perm, list) or not all(isinstance(x, int) for x in perm):
        raise UsageError("--nu permutation must be a list of integers")
    return DiagramAut(tuple(perm))


def _roots_text(roots) -> str:
    return " ".join("(" + ",".join(str(x) for x in r) + ")" for r in roots)


def _jobs(value: int | None) -> int:
    if value is None:
        env = os.environ.get(JOBS_ENV)
        if env is None or env == "":
            return 1
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"{JOBS_ENV} must be a positive integer, got {env!r}") from None
    if value < 1:
        raise UsageError("--jobs must be at least 1")
    return value


# -- subcommands -------------------------------------------------------------


def cmd_roots(args) -> tuple[Any, str]:
    rs = build_root_system(_stype(args.type))
    doc = to_json(rs)
    doc["count"] = len(rs.roots)
    doc["highest_root"] = list(rs.highest_long)
    lines = [
        f"type {rs.stype}",
        f"roots {len(rs.roots)} (positive {len(rs.positives)})",
        f"highest root {_roots_text([rs.highest_long])}",
        "positive roots:",
    ]
    lines += [f"  {_roots_text([r])}" for r in rs.positives]
    return doc, "\n".join(lines)


def _fold_rows(sources: Sequence[tuple[SystemType, int, str | None, SystemType | None]]) -> tuple[list, bool]:
    rows, ok = [], True
    for src, order, column, expected in sources:
        rs = build_root_system(src)
        nus = [nu for nu in diagram_automorphisms(rs) if nu.order() == order]
        if src.family == "D" and order == 2:
            nu = standard_flip(rs)
        else:
            nu = nus[0]
        got = folded_fixed_type(rs, nu)
        match = expected is None or got == expected
        ok &= match
        rows.append(
            {
                "source": str(src),
                "order": order,
                "nu": list(nu.perm),
                "fixed_type": str(got),
                "expected": None if expected is None else str(expected),
                "column": column,
                "match": match,
            }
        )
    return rows, ok


def cmd_fold(args) -> tuple[Any, str]:
    if args.all == (args.type is not None):
        raise UsageError("fold takes either --all or a type")
    if args.all:
        table = folding_table(8)
        rows, ok = _fold_rows([(r.source, r.order, r.column, r.fixed_type) for r in table])
    else:
        src = _stype(args.type)
        rs = build_root_system(src)
        orders = sorted({nu.order() for nu in diagram_automorphisms(rs) if not nu.is_identity()})
        if not orders:
            raise UsageError(f"{src} has no nontrivial diagram automorphism")
        ref = {(r.source, r.order): r for r in folding_table(max(8, src.rank))}
        specs = []
        for k in orders:
            r = ref.get((src, k))
            specs.append((src, k, r.column if r else None, r.fixed_type if r else None))
        rows, ok = _fold_rows(specs)
    lines = [f"{'source':<7} {'k':>2}  {'fixed':<6} {'expected':<8} match"]
    for r in rows:
        lines.append(
            f"{r['source']:<7} {r['order']:>2}  {r['fixed_type']:<6} {r['expected'] or '-':<8} {'yes' if r['match'] else 'NO'}"
        )
    doc = {"rows": rows, "all_match": ok}
    if not ok:
        raise VerificationFailed(doc, "\n".join(lines))
    return doc, "\n".join(lines)


def cmd_cascade(args) -> tuple[Any, str]:
    rs = build_root_system(_stype(args.type))
    chain = kostant_cascade(rs)
    span, kernel = decomposition_dims(rs, chain.roots)
    doc = {"type": str(rs.stype), "cascade": chain.to_json(), "span_dim": span, "kernel_dim": kernel}
    text = "\n".join(
        [f"type {rs.stype}", f"cascade ({len(chain)} roots): {_roots_text(chain.roots)}", f"span {span} + kernel {kernel} = rank {rs.rank}"]
    )
    return doc, text


def cmd_normal_form(args) -> tuple[Any, str]:
    rs = build_root_system(_stype(args.type))
    roots = _json_arg(args.set, "--set")
    if not isinstance(roots, list) or not all(isinstance(r, list) for r in roots):
        raise UsageError("--set must be a JSON list of root coefficient lists")
    omega = OrthoSet.of(rs, roots)
    nu = _parse_nu(rs, args.nu)
    word, normal = normal_form(rs, omega, nu)
    doc = {
        "type": str(rs.stype),
        "nu": list(nu.perm),
        "input": omega.to_json(),
        "word": list(word.letters),
        "normal_form": normal.to_json(),
    }
    lines = [f"word {list(word.letters)}", f"normal form {_roots_text(normal.roots)}"]
    if rs.stype.family == "D" and len(omega) and nu == standard_flip(rs):
        try:
            form = classify_d_normal_form(rs, omega, nu)
            doc["form"] = {"kind": form.kind, "index": form.index}
            lines.append(f"{form.kind} with index {form.index}")
        except LieCascadeError as e:
            doc["form"] = None
            lines.append(f"no standard form: {e}")
    return doc, "\n".join(lines)


# verify ----------------------------------------------------------------


def _closed_form_count(st: SystemType) -> int:
    n = st.rank
    return {
        "A": n * (n + 1),
        "B": 2 * n * n,
        "C": 2 * n * n,
        "D": 2 * n * (n - 1),
        "E": {6: 72, 7: 126, 8: 240}.get(n, -1),
        "F": 48,
        "G": 12,
    }[st.family]


def verify_counts(types: Sequence[SystemType]) -> dict:
    rows = []
    for st in types:
        got = len(build_root_system(st).roots)
        rows.append({"type": str(st), "roots": got, "expected": _closed_form_count(st), "match": got == _closed_form_count(st)})
    return {"rows": rows, "failed": sum(not r["match"] for r in rows)}


def verify_strings(st: SystemType) -> dict:
    """Check ``p - q = 2<beta,alpha>/<alpha,alpha>`` and string length at most 4 over all pairs."""
    rs = build_root_system(st)
    checked, bad = 0, []
    for a in rs.roots:
        for b in rs.roots:
            if b == a or b == neg(a):
                continue
            p, q = root_string(rs, a, b)
            checked += 1
            if p - q != cartan_int(rs, a, b) or p + q > 3:
                bad.append({"alpha": list(a), "beta": list(b), "p": p, "q": q})
    return {"type": str(st), "checked": checked, "failed": len(bad), "failures": bad[:10]}


def verify_parity(st: SystemType) -> dict:
    """Form1 sets have even parity everywhere and lift; even-rank Form2 sets do not."""
    if st.family != "D":
        raise UsageError("verify parity applies to type D")
    r = st.rank
    rs = build_root_system(st)
    rows = []
    for m in range(1, r - 1, 2):
        omega = d_form1(r, m).roots
        even = all(parity(rs, omega, b) % 2 == 0 for b in rs.positives)
        lift = lifts_to_involution(rs, omega)
        rows.append({"form": "Form1", "index": m, "parity_even": even, "lift": lift, "ok": even and lift})
    omega = d_form2(r).roots
    witness = odd_parity_witness(rs, omega)
    lift = lifts_to_involution(rs, omega)
    row = {
        "form": "Form2",
        "index": d_form2_index(r),
        "odd_parity_witness": None if witness is None else list(witness),
        "lift": lift,
    }
    row["ok"] = (witness is not None and not lift) if r % 2 == 0 else True
    rows.append(row)
    return {"type": str(st), "rows": rows, "failed": sum(not x["ok"] for x in rows)}


def verify_prop71(st: SystemType, seed: int, samples: int = 3) -> dict:
    """Exhaustive classification plus a seeded check that commuting conjugation preserves the form."""
    if st.family != "D":
        raise UsageError("verify prop71 applies to type D")
    report = d_normal_form_exhaustion(st.rank)
    doc = report.to_json()
    rs = build_root_system(st)
    flip = standard_flip(rs)
    gens = commuting_generators(rs, flip)
    rng = random.Random(seed)
    m = induced_lattice_map(rs, flip)
    fixed = [x for x in rs.positives if m(x) == x]
    roundtrip_bad = []
    tried = 0
    for sub in strongly_orthogonal_subsets(rs, fixed):
        if not interior_parity_ok(rs, sub):
            continue
        base = normal_form(rs, OrthoSet.of(rs, sub), flip)[1].as_set()
        for _ in range(samples):
            word = WeylWord(())
            for _ in range(rng.randint(0, 6)):
                word = word + rng.choice(gens)
            moved = [apply(rs, word, x) for x in sub]
            moved = [x if any(c > 0 for c in x) else neg(x) for x in moved]
            tried += 1
            if normal_form(rs, OrthoSet.of(rs, moved), flip)[1].as_set() != base:
                roundtrip_bad.append({"input": [list(x) for x in sub], "word": list(word.letters)})
    doc["roundtrip_samples"] = tried
    doc["roundtrip_failures"] = roundtrip_bad[:10]
    doc["seed"] = seed
    doc["failed"] = len(report.counterexamples) + len(roundtrip_bad) + (report.form1 + report.form2 != report.eligible)
    return doc


def cmd_verify(args) -> tuple[Any, str]:
    what = args.what
    jobs = _jobs(args.jobs)
    if what != "counts" and args.type is None:
        raise UsageError(f"verify {what} needs --type")
    st = _stype(args.type) if args.type is not None else None
    if what == "star":
        report = property_star_sweep(st, max_order=args.max_order, jobs=jobs)
        doc = report.to_json(limit=args.limit)
        text = f"type {doc['type']} max-order {doc['max_order']}: checked {doc['checked']}, skipped {doc['skipped']}, failed {doc['failed']}"
        for k, v in doc["skipped_by_reason"].items():
            text += f"\n  skipped {k}: {v}"
        if report.failed:
            first = report.failures[0].to_json()
            text += "\ncounterexample: " + json.dumps(first, sort_keys=True)
    elif what == "counts":
        doc = verify_counts([st] if st is not None else all_types(8))
        text = "\n".join(f"{r['type']:<4} {r['roots']:>4} {'ok' if r['match'] else 'expected ' + str(r['expected'])}" for r in doc["rows"])
    elif what == "strings":
        doc = verify_strings(st)
        text = f"type {doc['type']}: checked {doc['checked']} pairs, failed {doc['failed']}"
    elif what == "parity":
        doc = verify_parity(st)
        lines = [f"type {doc['type']}"]
        for r in doc["rows"]:
            extra = f"parity_even {r['parity_even']}" if r["form"] == "Form1" else f"odd witness {r['odd_parity_witness']}"
            lines.append(f"  {r['form']} index {r['index']}: {extra}, lift {r['lift']}{'' if r['ok'] else '  FAIL'}")
        text = "\n".join(lines)
    else:
        doc = verify_prop71(st, args.seed)
        text = (
            f"type {doc['type']}: subsets {doc['subsets']}, eligible {doc['eligible']}, "
            f"Form1 {doc['form1']}, Form2 {doc['form2']}, counterexamples {len(doc['counterexamples'])}, "
            f"round trips {doc['roundtrip_samples']} (failed {len(doc['roundtrip_failures'])})"
        )
    if doc["failed"]:
        raise VerificationFailed(doc, text)
    return doc, text


def cmd_certify(args) -> tuple[Any, str]:
    if args.list:
        rows = [{"name": n, "type": t, "sigma1": s1, "sigma2": s2, "case_path": p} for n, t, s1, s2, p in SCENARIOS]
        return rows, "\n".join(f"{r['name']:<40} {r['type']:<3} {r['case_path']}" for r in rows)
    if args.scenario is not None:
        if any(x is not None for x in (args.type, args.sigma1, args.sigma2)):
            raise UsageError("--scenario cannot be combined with --type/--sigma1/--sigma2")
        names = [n for n, *_ in SCENARIOS]
        if args.scenario not in names:
            raise UsageError(f"unknown scenario {args.scenario!r}; see 'certify --list'")
        cert = scenario_certificate(args.scenario)
    else:
        if None in (args.type, args.sigma1, args.sigma2):
            raise UsageError("certify needs --type, --sigma1 and --sigma2 (or --scenario)")
        rs = build_root_system(_stype(args.type))
        cert = formality_certificate(rs, aut_from_spec(rs, args.sigma1), aut_from_spec(rs, args.sigma2))
    doc = cert.to_json()
    text = cert.dumps() if args.json else f"case path {cert.case_path}\nverdict {cert.verdict}\nchecks {len(cert.checks)}\n" + cert.dumps()
    return doc, text


def cmd_subgroups(args) -> tuple[Any, str]:
    subs = subgroups_of_Z2xZk(args.k)
    rows = [s.to_json() for s in subs]
    lines = [f"Z2 x Z{args.k}: {len(subs)} subgroups"]
    for s in subs:
        gens = " ".join(f"({a},{b})" for a, b in s.generators) or "-"
        lines.append(f"  {s.classification}  order {len(s.elements())}  generators {gens}")
    return rows, "\n".join(lines)


# -- parser ----------------------------------------------------------------


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return v


def _pos_int(text: str) -> int:
    v = _nonneg_int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--seed", type=_nonneg_int, default=0, help="seed for randomized sampling (default 0)")
    common.add_argument("--jobs", type=_pos_int, default=None, help=f"worker processes (default ${JOBS_ENV} or 1)")

    parser = argparse.ArgumentParser(prog="liecascade", description="Exact root-system combinatorics.")
    parser.add_argument("--version", action="version", version=f"liecascade {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("roots", parents=[common], help="list the roots of a type")
    p.add_argument("type")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("fold", parents=[common], help="folded types of diagram automorphisms")
    p.add_argument("type", nargs="?")
    p.add_argument("--all", action="store_true", help="reference table for all ranks up to 8")
    p.set_defaults(func=cmd_fold)

    p = sub.add_parser("cascade", parents=[common], help="highest-root cascade of a type")
    p.add_argument("type")
    p.set_defaults(func=cmd_cascade)

    p = sub.add_parser("normal-form", parents=[common], help="normal form of a fixed strongly orthogonal set")
    p.add_argument("--type", required=True)
    p.add_argument("--set", required=True, help="JSON list of roots, e.g. [[1,2,1,1]]")
    p.add_argument("--nu", default="id", help="id, flip, triality or a permutation such as 1,2,4,3")
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("verify", parents=[common], help="run a verification sweep")
    p.add_argument("what", choices=["star", "prop71", "counts", "strings", "parity"])
    p.add_argument("--type")
    p.add_argument("--max-order", type=_pos_int, default=6)
    p.add_argument("--limit", type=_nonneg_int, default=5, help="failures to include in output (default 5)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify", parents=[common], help="formality certificate for a commuting pair")
    p.add_argument("--type")
    p.add_argument("--sigma1", help="id, flip, triality or a JSON automorphism spec")
    p.add_argument("--sigma2", help="id, flip, triality or a JSON automorphism spec")
    p.add_argument("--scenario", help="name of a built-in scenario")
    p.add_argument("--list", action="store_true", help="list built-in scenarios")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("subgroups", parents=[common], help="subgroups of Z2 x Zk")
    p.add_argument("k", type=_pos_int)
    p.set_defaults(func=cmd_subgroups)
    return parser


def _emit(doc: Any, text: str, as_json: bool, stream) -> None:
    if as_json:
        stream.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        stream.write(text.rstrip("\n") + "\n")


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    func: Callable = args.func
    try:
        args.jobs = _jobs(args.jobs)
        doc, text = func(args)
    except VerificationFailed as e:
        _emit(e.payload, e.text, args.json, stdout)
        stderr.write("verification failed\n")
        return 1
    except CounterexampleFound as e:
        stderr.write(f"counterexample: {e}\n")
        if e.witness is not None:
            stderr.write(json.dumps(e.witness, sort_keys=True, default=str) + "\n")
        return 1
    except (UsageError, LieCascadeError) as e:
        stderr.write(f"error: {e}\n")
        return 2
    except Exception as e:  # never let a traceback reach the user
        stderr.write(f"internal error: {type(e).__name__}: {e}\n")
        return 1
    _emit(doc, text, args.json, stdout)
    return 0


def main() -> None:
    sys.exit(run())
