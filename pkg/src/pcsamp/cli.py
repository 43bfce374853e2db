"""Command-line front end.

One scenario JSON file per invocation; subcommands cover each pipeline
stage.  All numeric output is exact rational text unless --float asks for
12-significant-digit decimals.

Exit codes: 0 success, 1 verification failure, 2 invalid scenario,
3 inconsistent observations.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence, Union

from .estimator import (
    Estimate,
    best_reference,
    closed_form_energy,
    estimate_partial,
)
from .inference import InconsistentObservations, ObservationSet, infer_model
from .oracle import exhaustive_consistency_sweep, verify_scenario
from .sampler import SamplingPattern, enumerate_atlas
from .signal_core import SignalSpec, SpecViolation, as_rational, validate_spec

DEFAULT_SEED = 0


class ScenarioError(ValueError):
    """The scenario or observations file does not match the schema."""


# ---------------------------------------------------------------------------
# scenario and observations ingestion
# ---------------------------------------------------------------------------

def _exact_field(raw, where: str) -> Fraction:
    if isinstance(raw, float):
        raise ScenarioError(f"{where}: floats are not exact; write rationals as strings like \"1/4\"")
    try:
        return as_rational(raw)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def load_scenario(path: str) -> tuple[SignalSpec, Union[str, tuple[tuple[int, ...], ...]]]:
    """Parse and validate a scenario file.

    Returns the validated signal plus either the keyword "all" or the
    explicit observation vectors.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "regions" not in data:
        raise ScenarioError("scenario must be an object with a \"regions\" list")

    T = _exact_field(data.get("T", 1), "T")
    regions = data["regions"]
    if not isinstance(regions, list) or not regions:
        raise ScenarioError("\"regions\" must be a non-empty list")
    g, n, f = [], [], []
    for idx, region in enumerate(regions, start=1):
        if not isinstance(region, dict) or not {"g", "n", "f"} <= set(region):
            raise ScenarioError(f"region {idx} must be an object with g, n, f")
        g.append(_exact_field(region["g"], f"region {idx} g"))
        if not isinstance(region["n"], int) or isinstance(region["n"], bool):
            raise ScenarioError(f"region {idx} n must be an integer")
        n.append(region["n"])
        f.append(_exact_field(region["f"], f"region {idx} f"))
    spec = validate_spec(SignalSpec.from_columns(g=g, n=n, f=f, T=T))

    observations = data.get("observations", "all")
    if observations == "all":
        return spec, "all"
    vectors = _as_vectors(observations, spec.m, "scenario observations")
    return spec, vectors


def _as_vectors(raw, m: int, where: str) -> tuple[tuple[int, ...], ...]:
    if not isinstance(raw, list) or not raw:
        raise ScenarioError(f"{where}: expected a non-empty list of integer vectors")
    vectors = []
    for idx, row in enumerate(raw):
        if isinstance(row, dict) and "eta" in row:
            row = row["eta"]
        if not isinstance(row, list) or len(row) != m:
            raise ScenarioError(f"{where}: entry {idx} must be a length-{m} integer vector")
        if not all(isinstance(e, int) and not isinstance(e, bool) for e in row):
            raise ScenarioError(f"{where}: entry {idx} contains non-integers")
        vectors.append(tuple(row))
    if len(set(vectors)) != len(vectors):
        raise ScenarioError(f"{where}: observation vectors must be distinct")
    return tuple(vectors)


def load_observations_file(path: str, m: int) -> tuple[tuple[int, ...], ...]:
    """Read observation vectors from a JSON or CSV file.

    JSON accepts a bare list of vectors, {"observations": [...]}, or a
    patterns dump {"cells": [{"eta": [...]}, ...]}.  CSV accepts either
    eta_1..eta_m columns or plain integer rows.
    """
    if path.endswith(".csv"):
        try:
            with open(path, "r", encoding="utf-8", newline="") as handle:
                rows = list(csv.reader(handle))
        except OSError as exc:
            raise ScenarioError(f"cannot read observations {path}: {exc}") from exc
        if not rows:
            raise ScenarioError(f"observations {path} is empty")
        header = rows[0]
        if "eta_1" in header:
            cols = [header.index(f"eta_{j}") for j in range(1, m + 1)]
            data = [[int(row[c]) for c in cols] for row in rows[1:]]
        else:
            data = [[int(x) for x in row] for row in rows]
        return _as_vectors(data, m, f"observations {path}")
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ScenarioError(f"cannot read observations {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"observations {path} is not valid JSON: {exc}") from exc
    if isinstance(data, dict):
        data = data.get("observations", data.get("cells"))
    return _as_vectors(data, m, f"observations {path}")


def _resolve_observations(spec: SignalSpec, scenario_obs, flag: Optional[str]) -> ObservationSet:
    """Build the observation set, cross-checking membership in the atlas."""
    atlas = enumerate_atlas(spec)
    if flag is None:
        chosen = scenario_obs
    elif flag == "all":
        chosen = "all"
    else:
        chosen = load_observations_file(flag, spec.m)
    if chosen == "all":
        return ObservationSet.from_atlas(atlas, spec.g)
    achievable = set(atlas.patterns)
    for vec in chosen:
        if SamplingPattern(vec) not in achievable:
            raise InconsistentObservations(
                f"observed pattern {list(vec)} is not achievable for this signal"
            )
    return ObservationSet.of(chosen, spec.g)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _fmt(value, as_float: bool) -> str:
    if isinstance(value, Fraction):
        return f"{float(value):.12g}" if as_float else str(value)
    return str(value)


def _emit_rows(headers: list[str], rows: list[list], fmt: str, as_float: bool) -> None:
    cells = [[_fmt(v, as_float) for v in row] for row in rows]
    if fmt == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(headers)
        writer.writerows(cells)
        return
    widths = [max(len(h), *(len(r[j]) for r in cells)) if cells else len(h) for j, h in enumerate(headers)]
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip())
    for row in cells:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())


def _jsonable(obj, as_float: bool):
    if isinstance(obj, Fraction):
        return float(obj) if as_float else str(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v, as_float) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v, as_float) for v in obj]
    return obj


def _emit_json(payload: dict, as_float: bool) -> None:
    print(json.dumps(_jsonable(payload, as_float), indent=2))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    spec, observations = load_scenario(args.scenario)
    print(f"OK: {spec.m} region(s), T = {spec.T}")
    print(f"region lengths (units of T): {', '.join(str(r) for r in spec.lengths)}")
    if observations != "all":
        print(f"observations: {len(observations)} pattern(s)")
    return 0


def cmd_patterns(args) -> int:
    spec, _ = load_scenario(args.scenario)
    atlas = enumerate_atlas(spec)
    if args.format == "json":
        _emit_json(
            {
                "m": spec.m,
                "T": spec.T,
                "cells": [
                    {"delta_lo": c.delta_lo, "delta_hi": c.delta_hi, "eta": list(c.pattern.eta)}
                    for c in atlas.cells
                ],
            },
            args.float,
        )
        return 0
    headers = ["delta_lo", "delta_hi"] + [f"eta_{j}" for j in range(1, spec.m + 1)]
    rows = [[c.delta_lo, c.delta_hi, *c.pattern.eta] for c in atlas.cells]
    _emit_rows(headers, rows, args.format, args.float)
    return 0


def _knowledge(model, i: int) -> str:
    if i == model.l:
        return "reference"
    return "2T" if i in model.U else "T"


def cmd_infer(args) -> int:
    spec, scenario_obs = load_scenario(args.scenario)
    if not (0 <= args.ref <= spec.m):
        raise ScenarioError(f"--ref must lie in 0..{spec.m}")
    obs = _resolve_observations(spec, scenario_obs, args.observations)
    model = infer_model(obs, args.ref)
    chain_role = {}
    for c in model.chains.plus + model.chains.minus:
        for i in c.members:
            chain_role[i] = f"chain@{c.anchor}"
    if args.format == "json":
        _emit_json(
            {
                "l": model.l,
                "C": list(model.C),
                "U": sorted(model.U),
                "intervals": [
                    {"i": i, "lo": model.G[i][0], "hi": model.G[i][1], "knowledge": _knowledge(model, i)}
                    for i in range(model.m + 1)
                ],
                "chains": [
                    {"side": side, "anchor": c.anchor, "length": c.length, "members": list(c.members)}
                    for side, chains in (("plus", model.chains.plus), ("minus", model.chains.minus))
                    for c in chains
                ],
            },
            args.float,
        )
        return 0
    headers = ["i", "c", "g_lo", "g_hi", "width", "knowledge", "chain"]
    rows = [
        [i, model.C[i], model.G[i][0], model.G[i][1], model.width(i), _knowledge(model, i), chain_role.get(i, "")]
        for i in range(model.m + 1)
    ]
    _emit_rows(headers, rows, args.format, args.float)
    return 0


def _estimate_rows(spec: SignalSpec, est: Estimate) -> tuple[list[str], list[list]]:
    headers = ["cell_lo", "cell_hi", "value", "provenance"]
    rows = [[c.lo, c.hi, c.value, c.tag] for c in est.cells]
    return headers, rows


def _print_energy(spec: SignalSpec, energy: Optional[Fraction], as_float: bool) -> None:
    if energy is None:
        print("closed-form energy: unavailable: chains present")
    else:
        physical = energy * spec.T
        print(f"closed-form energy: {_fmt(energy, as_float)} (units g^2*T)"
              f" = {_fmt(physical, as_float)} physical")


def cmd_estimate(args) -> int:
    spec, scenario_obs = load_scenario(args.scenario)
    obs = _resolve_observations(spec, scenario_obs, args.observations)
    if args.sweep:
        energies = {}
        for l in range(spec.m + 1):
            energies[l] = closed_form_energy(infer_model(obs, l), spec.g)
        available = {l: e for l, e in energies.items() if e is not None}
        arg_min = min(available, key=lambda l: (available[l], l)) if available else None
        law = best_reference(spec.g)
        if args.format == "json":
            _emit_json(
                {
                    "energies": [
                        {"l": l, "energy": e if e is not None else "unavailable"}
                        for l, e in energies.items()
                    ],
                    "argmin": arg_min,
                    "best_reference": law,
                    "agrees": arg_min == law,
                },
                args.float,
            )
            return 0
        rows = [
            [l, e if e is not None else "unavailable", "*" if l == arg_min else ""]
            for l, e in energies.items()
        ]
        _emit_rows(["l", "energy", "argmin"], rows, args.format, args.float)
        if args.format == "table":
            print(f"argmin l = {arg_min}; largest-jump reference l = {law}; "
                  f"{'agree' if arg_min == law else 'DISAGREE'}")
        return 0

    if args.ref is None:
        raise ScenarioError("estimate needs --ref L or --sweep")
    if not (0 <= args.ref <= spec.m):
        raise ScenarioError(f"--ref must lie in 0..{spec.m}")
    model = infer_model(obs, args.ref)
    est = estimate_partial(model, spec.g)
    energy = closed_form_energy(model, spec.g)
    if args.format == "json":
        _emit_json(
            {
                "l": model.l,
                "T": spec.T,
                "cells": [
                    {
                        "cell_lo": c.lo, "cell_hi": c.hi,
                        "x_lo": c.lo * spec.T, "x_hi": c.hi * spec.T,
                        "value": c.value, "provenance": c.tag,
                        "indices": list(c.indices),
                    }
                    for c in est.cells
                ],
                "closed_form_energy": energy if energy is not None else "unavailable",
                "closed_form_energy_physical": energy * spec.T if energy is not None else "unavailable",
            },
            args.float,
        )
        return 0
    headers, rows = _estimate_rows(spec, est)
    if args.format == "table" and spec.T != 1:
        headers = headers[:2] + ["x_lo", "x_hi"] + headers[2:]
        rows = [[r[0], r[1], r[0] * spec.T, r[1] * spec.T, r[2], r[3]] for r in rows]
    _emit_rows(headers, rows, args.format, args.float)
    if args.format == "table":
        print("outside the listed cells the estimate is 0")
        _print_energy(spec, energy, args.float)
    return 0


def cmd_verify(args) -> int:
    spec, _ = load_scenario(args.scenario)
    if args.grid < 2:
        raise ScenarioError("--grid must be at least 2")
    if args.trials < 1:
        raise ScenarioError("--trials must be at least 1")
    results = verify_scenario(spec, resolution=args.grid)
    sweep = exhaustive_consistency_sweep(args.trials, seed=args.seed)
    rows = [[r.name, "pass" if r.passed else "FAIL", r.detail] for r in results]
    rows.append(
        [
            f"random-consistency-sweep(seed={sweep.seed})",
            "pass" if sweep.failed == 0 else "FAIL",
            sweep.first_failure or f"{sweep.passed}/{sweep.trials} random signals",
        ]
    )
    if args.format == "json":
        _emit_json(
            {
                "checks": [{"name": r[0], "status": r[1], "detail": r[2]} for r in rows],
                "passed": all(r[1] == "pass" for r in rows),
            },
            args.float,
        )
    else:
        _emit_rows(["check", "status", "detail"], rows, args.format, args.float)
    return 0 if all(r[1] == "pass" for r in rows) else 1


EXAMPLE6 = {
    "g": ("4", "2", "1"),
    "n": (3, 3, 2),
    "f": ("1/4", "1/3", "1/5"),
    "observations": ((3, 3, 2), (3, 3, 1)),
}


def cmd_demo(args) -> int:
    if args.name != "example6":
        raise ScenarioError(f"unknown demo {args.name!r}; available: example6")
    spec = validate_spec(
        SignalSpec.from_columns(g=EXAMPLE6["g"], n=EXAMPLE6["n"], f=EXAMPLE6["f"])
    )
    obs = ObservationSet.of(EXAMPLE6["observations"], spec.g)
    print("Two observed patterns that differ only in the last region's count:")
    for p in obs.patterns:
        print(f"  {list(p.eta)}")
    print()
    for l in (0, spec.m):
        model = infer_model(obs, l)
        widths = ", ".join(
            f"D_{i}: {model.width(i)}T" if model.width(i) != 1 else f"D_{i}: T"
            for i in range(spec.m + 1) if i != l
        )
        energy = closed_form_energy(model, spec.g)
        print(f"reference l={l}: uncertainty widths {widths}")
        print(f"  worst-case energy of the optimal estimate: {energy} g^2*T")
    print()
    print("Counting from the left leaves two discontinuities twice as uncertain")
    print("as counting from the right: accuracy depends on the reference point.")
    return 0


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------

def _add_common(sub, scenario: bool = True) -> None:
    if scenario:
        sub.add_argument("scenario", help="scenario JSON file")
    sub.add_argument("--format", choices=("table", "csv", "json"), default="table")
    sub.add_argument("--float", action="store_true",
                     help="render rationals as 12-significant-digit decimals")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcsamp",
        description="Exact grid-sampling analysis of piecewise constant signals",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("validate", help="check a scenario file")
    _add_common(sub)
    sub.set_defaults(func=cmd_validate)

    sub = subs.add_parser("patterns", help="list every achievable count pattern")
    _add_common(sub)
    sub.set_defaults(func=cmd_patterns)

    sub = subs.add_parser("infer", help="locate discontinuities from observed patterns")
    _add_common(sub)
    sub.add_argument("--ref", type=int, required=True, help="reference discontinuity index")
    sub.add_argument("--observations", help='"all" or a JSON/CSV observations file')
    sub.set_defaults(func=cmd_infer)

    sub = subs.add_parser("estimate", help="build the worst-case-optimal estimate")
    _add_common(sub)
    sub.add_argument("--ref", type=int, help="reference discontinuity index")
    sub.add_argument("--sweep", action="store_true", help="tabulate energies for every reference")
    sub.add_argument("--observations", help='"all" or a JSON/CSV observations file')
    sub.set_defaults(func=cmd_estimate)

    sub = subs.add_parser("sweep-ref", help="alias for estimate --sweep")
    _add_common(sub)
    sub.add_argument("--observations", help='"all" or a JSON/CSV observations file')
    sub.set_defaults(func=cmd_estimate, sweep=True, ref=None)

    sub = subs.add_parser("verify", help="run the property suite against a scenario")
    _add_common(sub)
    sub.add_argument("--grid", type=int, default=50, help="oracle grid points per unit interval")
    sub.add_argument("--trials", type=int, default=25, help="random signals in the sweep")
    sub.add_argument(
        "--seed", type=int,
        default=int(os.environ.get("PCSAMP_SEED", DEFAULT_SEED)),
        help="sweep seed (falls back to PCSAMP_SEED)",
    )
    sub.set_defaults(func=cmd_verify)

    sub = subs.add_parser("demo", help="built-in worked demonstrations")
    sub.add_argument("name", help="demo name (example6)")
    sub.add_argument("--format", choices=("table",), default="table")
    sub.add_argument("--float", action="store_true")
    sub.set_defaults(func=cmd_demo)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, SpecViolation) as exc:
        print(f"{type(exc).__name__} {exc}", file=sys.stderr)
        return 2
    except InconsistentObservations as exc:
        print(f"InconsistentObservations: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
