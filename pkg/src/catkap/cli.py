"""Command-line front end: run sessions, verify transcripts, run attacks,
check algebraic laws.

Exit codes are a stable enumeration:

    0  success (agreement reached / transcript consistent / key recovered
       / zero law violations)
    1  failure (disagreement, inconsistent transcript, law violation,
       protocol or model error)
    2  usage error (bad flags, unreadable or invalid parameter file)
    3  brute-force search exhausted its bound
    4  parameters exceed the exhaustive-search ceiling

Seeds are explicit flags so every run is reproducible; --entropy opts
into OS randomness.  Keys are redacted in transcripts unless
--disclose-keys is given.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from .enrichment import EnrichedModel, enrich
from .errors import (
    CatkapError,
    InvalidParams,
    NotEnumerable,
    ParamsTooLarge,
    SearchExhausted,
)
from .instantiations import build_model, default_params, instantiation_names
from .instantiations.dh import DhParams
from .laws import (
    check_category_laws,
    check_enriched_laws,
    check_matrix_laws,
)
from .netsim import (
    EavesdropperView,
    brute_force_dh,
    brute_force_generic,
    run_session,
    verify_transcript,
)
from .protocols import SessionConfig
from .transcript import Transcript

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_EXHAUSTED = 3
EXIT_TOO_LARGE = 4


def _load_params(inst: str, path: str | None) -> dict:
    if path is None:
        return default_params(inst)
    p = Path(path)
    if not p.is_file():
        raise InvalidParams(f"parameter file not found: {p}")
    try:
        return json.loads(p.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidParams(f"cannot read parameter file {p}: {exc}") from exc


def _parse_seeds(text: str | None, count: int, entropy: bool) -> tuple[int, ...]:
    if entropy:
        sysrand = random.SystemRandom()
        return tuple(sysrand.randrange(1 << 62) for _ in range(count))
    if text is None:
        raise InvalidParams("either --seeds or --entropy is required")
    try:
        seeds = tuple(int(s) for s in text.split(","))
    except ValueError as exc:
        raise InvalidParams(f"bad --seeds value {text!r}: {exc}") from exc
    if len(seeds) != count:
        raise InvalidParams(f"need {count} seeds, got {len(seeds)}")
    return seeds


def _emit(args, text_lines: list[str], json_doc: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(json_doc, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_run(args) -> int:
    params = _load_params(args.inst, args.params)
    count = args.parties if args.protocol == "multi" else 2
    seeds = _parse_seeds(args.seeds, count, args.entropy)
    try:
        dims = tuple(int(v) for v in args.dims.split("x"))
        lo, hi = (int(v) for v in args.coeffs.split(":"))
    except ValueError as exc:
        raise InvalidParams(f"bad --dims/--coeffs value: {exc}") from exc
    config = SessionConfig(
        protocol=args.protocol,
        instantiation=args.inst,
        params=params,
        seeds=seeds,
        setup_seed=args.setup_seed,
        parties=args.parties,
        dims=dims,  # type: ignore[arg-type]
        degree=args.degree,
        coeff_range=(lo, hi),
        reduce_to_base=args.reduce,
        delivery=args.delivery,
        delivery_seed=args.delivery_seed,
        disclose_keys=args.disclose_keys,
        disclose_seeds=args.disclose_seeds,
    )
    result = run_session(config)
    text = result.transcript.to_json()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    agreement = result.outcome.agreement
    _emit(
        args,
        [f"session {result.session.session_id}: agreement={agreement}"]
        + ([f"transcript written to {args.out}"] if args.out else []),
        {"session": result.session.session_id, "agreement": agreement,
         "out": args.out},
    )
    return EXIT_OK if agreement else EXIT_FAILURE


def cmd_verify(args) -> int:
    path = Path(args.transcript)
    if not path.is_file():
        raise InvalidParams(f"transcript file not found: {path}")
    report = verify_transcript(path.read_text())
    _emit(
        args,
        report.lines(),
        {"ok": report.ok, "mode": report.mode, "notes": report.notes},
    )
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_attack(args) -> int:
    path = Path(args.transcript)
    if not path.is_file():
        raise InvalidParams(f"transcript file not found: {path}")
    transcript = Transcript.from_json(path.read_text())
    header = transcript.header
    if header.get("protocol") != "ckap":
        print("attack supports two-party scalar transcripts only", file=sys.stderr)
        return EXIT_FAILURE
    view = EavesdropperView.from_transcript(transcript)
    inst = header["instantiation"]
    started = time.perf_counter()
    if inst in ("dh", "broken"):
        key_payload = brute_force_dh(
            view, DhParams.from_dict(header["params"]), args.bound
        )
        recovered = str(key_payload)
    else:
        model = build_model(inst, dict(header["params"]))
        recovered = model.encode(brute_force_generic(view, model, args.bound or 1 << 16))
    elapsed = time.perf_counter() - started

    keys = transcript.outcome.get("keys")
    matches = None
    if isinstance(keys, dict) and keys:
        matches = all(k == recovered for k in keys.values())
    lines = [f"recovered key: {recovered}", f"wall time: {elapsed:.3f}s"]
    if matches is not None:
        lines.append(f"matches disclosed key: {matches}")
    _emit(
        args,
        lines,
        {"recovered": recovered, "seconds": elapsed, "matches_disclosed": matches},
    )
    if matches is False:
        return EXIT_FAILURE
    return EXIT_OK


def cmd_laws(args) -> int:
    params = _load_params(args.inst, args.params)
    rng = random.Random(args.seed)
    base = build_model(args.inst, params)
    side_trials = max(1, args.trials // 10)
    reports = [check_category_laws(base, rng, args.trials, side_trials)]
    enriched = base if isinstance(base, EnrichedModel) else enrich(base)
    if enriched is not base:
        reports.append(check_category_laws(enriched, rng, args.trials, side_trials))
    reports.append(check_enriched_laws(enriched, rng, side_trials))
    try:
        dims = tuple(int(v) for v in args.dims.split("x"))
    except ValueError as exc:
        raise InvalidParams(f"bad --dims value: {exc}") from exc
    reports.append(check_matrix_laws(enriched, rng, side_trials, dims))  # type: ignore[arg-type]

    lines: list[str] = []
    violations = 0
    for report in reports:
        lines.extend(report.lines())
        violations += report.violation_count
    lines.append(f"total violations: {violations}")
    _emit(
        args,
        lines,
        {
            "violations": violations,
            "reports": [
                {
                    "model": r.model_id,
                    "ok": r.ok,
                    "first_witness": r.first_witness(),
                }
                for r in reports
            ],
        },
    )
    return EXIT_OK if violations == 0 else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catkap",
        description="Key agreement sessions built from category composition.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one session and write its transcript")
    run.add_argument("--protocol", choices=("ckap", "eckap", "multi"), required=True)
    run.add_argument("--inst", choices=instantiation_names(), required=True)
    run.add_argument("--params", help="JSON parameter file (default: desk presets)")
    run.add_argument("--seeds", help="comma-separated per-party seeds")
    run.add_argument("--entropy", action="store_true", help="draw seeds from the OS")
    run.add_argument("--setup-seed", type=int, default=0)
    run.add_argument("--parties", type=int, default=2, help="multi-party count")
    run.add_argument("--dims", default="2x2", help="matrix shape MxN (eckap)")
    run.add_argument("--degree", type=int, default=1, help="family polynomial degree")
    run.add_argument("--coeffs", default="0:7", help="family coefficient range LO:HI")
    run.add_argument("--reduce", action="store_true",
                     help="run eckap in 1x1 base-reduction mode")
    run.add_argument("--delivery", choices=("in-order", "shuffle"), default="in-order")
    run.add_argument("--delivery-seed", type=int, default=0)
    run.add_argument("--disclose-keys", action="store_true")
    run.add_argument("--disclose-seeds", action="store_true")
    run.add_argument("--out", help="transcript output path (default: stdout)")
    run.add_argument("--json", action="store_true")
    run.set_defaults(func=cmd_run)

    verify = sub.add_parser("verify", help="re-validate a transcript file")
    verify.add_argument("transcript")
    verify.add_argument("--json", action="store_true")
    verify.set_defaults(func=cmd_verify)

    attack = sub.add_parser("attack", help="brute-force a transcript at toy scale")
    attack.add_argument("transcript")
    attack.add_argument("--bound", type=int, default=None,
                        help="candidate ceiling; unbounded scans refuse huge orders")
    attack.add_argument("--json", action="store_true")
    attack.set_defaults(func=cmd_attack)

    laws = sub.add_parser("laws", help="run the algebraic law suites")
    laws.add_argument("--inst", choices=instantiation_names(), required=True)
    laws.add_argument("--params", help="JSON parameter file (default: desk presets)")
    laws.add_argument("--trials", type=int, default=10_000)
    laws.add_argument("--seed", type=int, default=0)
    laws.add_argument("--dims", default="2x2", help="matrix-law shape MxN")
    laws.add_argument("--json", action="store_true")
    laws.set_defaults(func=cmd_laws)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParamsTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (SearchExhausted, NotEnumerable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED if isinstance(exc, SearchExhausted) else EXIT_FAILURE
    except InvalidParams as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CatkapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
