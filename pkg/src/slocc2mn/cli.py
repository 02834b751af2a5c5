"""Command-line front end.

Commands: gen, signature, classify, equiv, perturb, verify.  Every command
honors ``--format json|text``; JSON output follows schemas/report.schema.json.
Exit codes: 0 success, 1 assertion/verification failure, 2 usage or parse
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .families import ClassLabel, make_canonical, SMALL_FAMILIES, PARAMETRIC_FAMILIES
from .operators import random_ilo
from .ranges import (
    UnsupportedSubspaceError,
    bc_pencil,
    slocc_signature,
)
from .classify import classify, decide_equivalence
from .verify import verify_theorem, verify_appendix_theta45
from .stateio import (
    StateFileError,
    load_state,
    dump_state,
    state_to_json,
    operator_triple_to_json,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _profile_to_json(profile) -> dict:
    points = []
    for p in profile.exceptional:
        points.append(
            {
                "location": p.location,
                "rank": p.rank,
                "parameter": None if p.parameter is None else str(p.parameter),
                "numeric": p.numeric,
            }
        )
    return {
        "generic_rank": profile.generic_rank,
        "exceptional": points,
        "rank_multiset": list(profile.rank_multiset()),
    }


def _factor_to_json(f) -> dict:
    out = {"party": f.party, "kind": f.kind, "i": f.i}
    if f.kind in ("add", "swap"):
        out["j"] = f.j
    if f.kind in ("add", "scale"):
        out["alpha"] = str(f.alpha)
    return out


def _proof_to_json(steps) -> list:
    out = []
    for step in steps:
        out.append(
            {
                "input_dims": list(step.input_dims),
                "ilo_word": [_factor_to_json(f) for f in step.ilo_word],
                "residual_dims": list(step.residual.dims),
            }
        )
    return out


def _emit(report: dict, fmt: str, text_lines) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _label_from_args(args) -> ClassLabel:
    try:
        return ClassLabel(args.family, args.m)
    except ValueError as exc:
        raise StateFileError(str(exc)) from exc


def cmd_gen(args) -> int:
    t0 = time.monotonic()
    label = _label_from_args(args)
    state = make_canonical(label)
    payload = state_to_json(state)
    if args.out is not None:
        dump_state(state, args.out)
    report = {
        "command": "gen",
        "inputs": {"family": args.family, "m": args.m, "out": args.out},
        "seed": args.seed,
        "result": {"label": label.render(), "dims": list(state.dims), "state": payload},
        "elapsed_seconds": time.monotonic() - t0,
        "ok": True,
    }
    if args.out is None and args.format == "text":
        # no destination: the state file itself is the useful text output
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    _emit(report, args.format, [f"label: {label.render()}", f"dims: {list(state.dims)}"]
          + ([f"wrote: {args.out}"] if args.out else []))
    return EXIT_OK


def cmd_signature(args) -> int:
    t0 = time.monotonic()
    state = load_state(args.state)
    ranks = state.local_ranks().as_tuple()
    result: dict = {"dims": list(state.dims), "local_ranks": list(ranks)}
    lines = [f"dims: {list(state.dims)}", f"local ranks: {list(ranks)}"]
    if min(ranks) < 2:
        rendered = f"NotTrueTripartite(ranks {','.join(map(str, ranks))})"
        result["signature"] = rendered
        lines.append(rendered)
        ok = True
    else:
        try:
            sig = slocc_signature(state)
        except UnsupportedSubspaceError as exc:
            print(f"signature: unsupported counting shape: {exc}", file=sys.stderr)
            return EXIT_FAILED
        result["signature"] = sig.render()
        result["exact"] = all(c.exact for c in sig.counts)
        lines.append(f"signature: {sig.render()}")
        if ranks[0] == 2:
            profile = bc_pencil(state).rank_profile(tol=args.tolerance)
            result["bc_pencil_profile"] = _profile_to_json(profile)
            lines.append(
                "bc pencil profile: generic rank "
                f"{profile.generic_rank}, exceptional ranks "
                f"{list(profile.rank_multiset())}"
            )
        ok = True
    report = {
        "command": "signature",
        "inputs": {"state": args.state},
        "seed": args.seed,
        "tolerance": args.tolerance,
        "result": result,
        "elapsed_seconds": time.monotonic() - t0,
        "ok": ok,
    }
    _emit(report, args.format, lines)
    return EXIT_OK


def cmd_classify(args) -> int:
    t0 = time.monotonic()
    state = load_state(args.state)
    res = classify(state)
    result = {
        "label": res.label.render(),
        "note": res.note,
        "proof": _proof_to_json(res.proof),
    }
    if res.invariants is not None:
        inv = res.invariants
        result["invariants"] = {
            "local_ranks": list(inv.ranks.as_tuple()),
            "signature": inv.signature.render(),
        }
    lines = [f"label: {res.label.render()}"]
    if res.note:
        lines.append(f"note: {res.note}")
    if "invariants" in result:
        lines.append(f"signature: {result['invariants']['signature']}")
    if result["proof"]:
        lines.append(f"proof: {len(result['proof'])} reduction step(s)")
    report = {
        "command": "classify",
        "inputs": {"state": args.state},
        "seed": args.seed,
        "result": result,
        "elapsed_seconds": time.monotonic() - t0,
        "ok": True,
    }
    _emit(report, args.format, lines)
    return EXIT_OK


def cmd_equiv(args) -> int:
    t0 = time.monotonic()
    s1 = load_state(args.state1)
    s2 = load_state(args.state2)
    verdict = decide_equivalence(s1, s2)
    result = {
        "verdict": verdict.kind,
        "separating_invariant": verdict.separating_invariant,
        "detail": verdict.detail,
        "witness": None,
    }
    lines = [f"verdict: {verdict.kind}"]
    if verdict.kind == "Inequivalent":
        lines.append(f"separated by: {verdict.separating_invariant}")
    if verdict.witness is not None:
        result["witness"] = operator_triple_to_json(verdict.witness)
        lines.append("witness: exact invertible local operator triple attached (json format)")
    if verdict.detail:
        lines.append(f"detail: {verdict.detail}")
    report = {
        "command": "equiv",
        "inputs": {"state1": args.state1, "state2": args.state2},
        "seed": args.seed,
        "result": result,
        "elapsed_seconds": time.monotonic() - t0,
        "ok": True,
    }
    _emit(report, args.format, lines)
    return EXIT_OK


def cmd_perturb(args) -> int:
    t0 = time.monotonic()
    state = load_state(args.state)
    triple = random_ilo(state.dims, args.seed)
    perturbed = triple.apply(state)
    payload = state_to_json(perturbed)
    if args.out is not None:
        dump_state(perturbed, args.out)
    report = {
        "command": "perturb",
        "inputs": {"state": args.state, "out": args.out},
        "seed": args.seed,
        "result": {
            "dims": list(perturbed.dims),
            "state": payload,
            "ilo": operator_triple_to_json(triple),
        },
        "elapsed_seconds": time.monotonic() - t0,
        "ok": True,
    }
    if args.out is None and args.format == "text":
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    _emit(report, args.format, [f"dims: {list(perturbed.dims)}", f"seed: {args.seed}"]
          + ([f"wrote: {args.out}"] if args.out else []))
    return EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.monotonic()
    which = args.theorem
    if which == "appendix":
        if args.m is None:
            raise StateFileError("verify --theorem appendix requires --m")
        result = verify_appendix_theta45(args.m, trials=args.trials, seed=args.seed)
    else:
        result = verify_theorem(
            which, m_parameter=args.m, trials=args.trials, seed=args.seed
        )
    ok = bool(result.get("ok"))
    report = {
        "command": "verify",
        "inputs": {"theorem": which, "m": args.m},
        "seed": args.seed,
        "trials": args.trials,
        "result": result,
        "elapsed_seconds": time.monotonic() - t0,
        "ok": ok,
    }
    lines = [f"theorem: {which}", f"ok: {ok}"]
    if which == "appendix":
        for case in result["cases"]:
            lines.append(
                f"case {case['case']}: forced singular "
                f"{case['forced_singular']}/{case['draws']}"
            )
    else:
        for fam in result.get("families", []):
            mark = "" if fam["signature_matches"] else "  (differs from displayed bracket)"
            lines.append(f"{fam['label']}: signature {fam['signature']}{mark}")
        if "pairs" in result:
            lines.append(
                "pairs inequivalent: "
                f"{sum(1 for p in result['pairs'] if p['verdict'] == 'Inequivalent')}"
                f"/{len(result['pairs'])}"
            )
        if "census" in result:
            lines.append(f"census: {result['census']}")
    _emit(report, args.format, lines)
    return EXIT_OK if ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slocc2mn",
        description="Exact SLOCC classification of true tripartite 2 x M x N states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, trials=False, tolerance=False):
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--seed", type=int, default=0)
        if trials:
            p.add_argument("--trials", type=int, default=100)
        if tolerance:
            p.add_argument("--tolerance", type=float, default=1e-9)

    p = sub.add_parser("gen", help="emit a canonical family state as a state file")
    p.add_argument("family", choices=tuple(SMALL_FAMILIES) + tuple(PARAMETRIC_FAMILIES))
    p.add_argument("--m", type=int, default=None, help="family parameter M")
    p.add_argument("--out", default=None, help="destination path ('-' for stdout)")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("signature", help="local ranks, product-count signature, pencil profile")
    p.add_argument("state", help="state file path or '-' for stdin")
    common(p, tolerance=True)
    p.set_defaults(func=cmd_signature)

    p = sub.add_parser("classify", help="assign a class label with a proof trace")
    p.add_argument("state", help="state file path or '-' for stdin")
    common(p, tolerance=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("equiv", help="decide SLOCC equivalence of two states")
    p.add_argument("state1")
    p.add_argument("state2")
    common(p, tolerance=True)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("perturb", help="apply a seeded random invertible local operator")
    p.add_argument("state", help="state file path or '-' for stdin")
    p.add_argument("--out", default=None, help="destination path ('-' for stdout)")
    common(p)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("verify", help="re-derive a theorem block or the appendix argument")
    p.add_argument(
        "--theorem",
        required=True,
        choices=("2", "3", "4", "upsilon0", "two_by_two_by_three", "appendix"),
    )
    p.add_argument("--m", type=int, default=None, help="family parameter M")
    common(p, trials=True)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except StateFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
