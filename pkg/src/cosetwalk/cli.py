"""Command-line front end.

Subcommands: validate, dispersion, evolve, show-example, suite.
Exit codes: 0 success, 1 validation/oracle failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
from . import examples
from .evolve import TorusSizeError, evolve, make_delta, make_plane_wave
from .groups import validate_tiling
from .io import WalkFileError, load_walk, save_dispersion_csv, save_probability_csv, save_walk
from .linalg import PAULI_X, PAULI_Z
from .spectral import dispersion_grid
from .walks import IsotropySpec, WalkSpec, check_isotropy, unitarity_residual

ORACLE_TOLERANCE = 1e-9
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _parse_params(raw: str | None) -> dict[str, str]:
    if not raw:
        return {}
    out: dict[str, str] = {}
    for chunk in raw.split(","):
        if "=" not in chunk:
            raise UsageError(f"malformed --params entry {chunk!r}; expected key=value")
        key, value = chunk.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _g1_params(fields: dict[str, str]) -> examples.G1Params:
    sign_text = fields.get("sign", "+")
    if sign_text not in ("+", "-", "+1", "-1"):
        raise UsageError(f"sign must be '+' or '-', got {sign_text!r}")
    try:
        return examples.G1Params(
            walk_class=fields.get("class", "I"),
            n=float(fields.get("n", "1")),
            m=float(fields.get("m", "0")),
            sign=-1 if sign_text.startswith("-") else 1,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _resolve_walk(args: argparse.Namespace) -> tuple[WalkSpec, str]:
    """Walk from --example (with --params) or from a walk-spec file."""
    fields = _parse_params(getattr(args, "params", None))
    if args.example:
        if args.example == "g1":
            return examples.g1_walk(_g1_params(fields)), "g1"
        if args.example == "g2":
            variant = fields.get("class", "I")
            if variant not in ("I", "II"):
                raise UsageError(f"g2 class must be I or II, got {variant!r}")
            return examples.g2_walk(variant), "g2"
        raise UsageError(f"unknown example {args.example!r}; available: g1, g2")
    if args.path:
        return load_walk(args.path), "file"
    raise UsageError("provide a walk-spec file or --example g1|g2")


def _add_walk_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("path", nargs="?", help="walk-spec file")
    parser.add_argument("--example", help="built-in walk name (g1 or g2)")
    parser.add_argument(
        "--params",
        help="example parameters, e.g. n=0.6,m=0.8,class=I,sign=+ (g1) or class=II (g2)",
    )


def cmd_validate(args: argparse.Namespace) -> int:
    walk, _ = _resolve_walk(args)
    report = validate_tiling(walk.tiling, walk.presentation)
    status = EXIT_OK
    if report.ok:
        print("tiling: ok")
    else:
        print(report.summary())
        status = EXIT_FAILURE
    residual, _ = unitarity_residual(walk)
    print(f"unitarity residual: {residual:.3e}")
    if residual > args.tolerance:
        print(f"unitarity: FAIL (tolerance {args.tolerance:.1e})")
        status = EXIT_FAILURE
    else:
        print("unitarity: ok")
    if args.isotropy:
        coin = {"sigma_x": PAULI_X, "sigma_z": PAULI_Z}[args.isotropy]
        labels = {g.name: g for g in walk.presentation.alphabet}
        try:
            swap = {
                labels["a"]: labels["b"],
                labels["b"]: labels["a"],
                labels["a^-1"]: labels["b^-1"],
                labels["b^-1"]: labels["a^-1"],
            }
        except KeyError:
            raise UsageError("--isotropy needs generators named a and b")
        deviation = check_isotropy(walk, IsotropySpec(swap, coin))
        print(f"isotropy deviation ({args.isotropy}): {deviation:.3e}")
        if deviation > args.tolerance:
            print("isotropy: FAIL")
            status = EXIT_FAILURE
        else:
            print("isotropy: ok")
    return status


def cmd_dispersion(args: argparse.Namespace) -> int:
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    walk, kind = _resolve_walk(args)
    grid = dispersion_grid(walk, args.grid)
    if args.out:
        save_dispersion_csv(grid, args.out)
        print(f"wrote {grid.kpoints.shape[0]} rows to {args.out}")
    if args.oracle:
        if kind == "g1":
            deviation = examples.g1_grid_oracle_deviation(
                grid, _g1_params(_parse_params(args.params))
            )
        elif kind == "g2":
            deviation = examples.g2_grid_oracle_deviation(grid)
        else:
            raise UsageError("--oracle requires --example g1 or g2")
        print(f"oracle deviation: {deviation:.3e}")
        if deviation >= ORACLE_TOLERANCE:
            print(f"oracle: FAIL (tolerance {ORACLE_TOLERANCE:.1e})")
            return EXIT_FAILURE
        print("oracle: ok")
    return EXIT_OK


def cmd_evolve(args: argparse.Namespace) -> int:
    if args.steps < 0:
        raise UsageError("--steps must be nonnegative")
    walk, _ = _resolve_walk(args)
    if args.init == "delta":
        state = make_delta(walk, args.torus)
    else:
        momentum = tuple(int(x) for x in args.momentum.split(","))
        state = make_plane_wave(walk, args.torus, momentum)
    final = evolve(walk, state, args.steps)
    drift = abs(final.norm - state.norm)
    print(f"norm drift after {args.steps} steps: {drift:.3e}")
    if args.out:
        save_probability_csv(final, args.out)
        print(f"wrote probabilities to {args.out}")
    return EXIT_OK


def cmd_show_example(args: argparse.Namespace) -> int:
    walk, _ = _resolve_walk(args)
    save_walk(walk, args.out)
    print(f"wrote {args.example} to {args.out}")
    return EXIT_OK


def cmd_suite(args: argparse.Namespace) -> int:
    report = examples.verification_suite(seed=args.seed, scalar_samples=args.samples)
    print(report.summary())
    return EXIT_OK if report.all_passed else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cosetwalk",
        description="Quantum walks on tiled Cayley graphs: validation, "
        "dispersion sweeps, torus evolution.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a walk spec's tiling and unitarity")
    _add_walk_source(p)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--isotropy", choices=["sigma_x", "sigma_z"], help="also check a<->b swap covariance")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("dispersion", help="sweep eigenphases over the wave-vector lattice")
    _add_walk_source(p)
    p.add_argument("--grid", type=int, default=33, help="points per axis (N >= 2)")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--oracle", action="store_true", help="cross-check built-ins against the closed form")
    p.set_defaults(handler=cmd_dispersion)

    p = sub.add_parser("evolve", help="evolve a state on a finite torus")
    _add_walk_source(p)
    p.add_argument("--torus", type=int, default=16, help="sites per axis")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--init", choices=["delta", "planewave"], default="delta")
    p.add_argument("--momentum", default="1,0", help="integer momentum index for --init planewave")
    p.add_argument("--out", help="probability CSV output path")
    p.set_defaults(handler=cmd_evolve)

    p = sub.add_parser("show-example", help="export a built-in walk to a walk-spec file")
    p.add_argument("example", help="g1 or g2")
    p.add_argument("--params", help="same syntax as the dispersion command")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_show_example, path=None)

    p = sub.add_parser("suite", help="run the solution-family verification suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000, help="random scalar families per graph")
    p.set_defaults(handler=cmd_suite)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WalkFileError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TorusSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
