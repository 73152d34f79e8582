"""Command-line entry point.

    rismimo run <spec.toml|spec.json>
    rismimo run --builtin <name> [--scale desk|paper] [--seed S] [--out DIR]
    rismimo validate <spec.toml>
    rismimo list

Exit codes: 0 success, 2 configuration error, 3 runtime/numerical error.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import (
    ConfigError,
    builtin_names,
    builtin_spec,
    load_spec,
    run_experiment,
    validate_spec,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rismimo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment spec or builtin")
    run.add_argument("spec", nargs="?", help="path to a TOML/JSON experiment spec")
    run.add_argument("--builtin", help="name of a builtin experiment")
    run.add_argument("--scale", choices=("desk", "paper"), default="desk")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", default="results", help="output directory")

    val = sub.add_parser("validate", help="check a spec file without running it")
    val.add_argument("spec", help="path to a TOML/JSON experiment spec")

    sub.add_parser("list", help="list builtin experiment names")
    return parser


def _cmd_run(args) -> int:
    if bool(args.spec) == bool(args.builtin):
        print("run needs exactly one of: a spec file path, or --builtin NAME", file=sys.stderr)
        return EXIT_CONFIG
    if args.builtin:
        spec = builtin_spec(args.builtin, scale=args.scale, seed=args.seed, output_dir=args.out)
    else:
        spec = load_spec(args.spec)
    errors, warnings = validate_spec(spec)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if errors:
        for e in errors:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    csv_path = run_experiment(spec)
    print(csv_path)
    return EXIT_OK


def _cmd_validate(args) -> int:
    spec = load_spec(args.spec)
    errors, warnings = validate_spec(spec)
    for w in warnings:
        print(f"warning: {w}")
    if errors:
        for e in errors:
            print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"ok: {spec.name} sweeps {spec.sweep_param} over {len(spec.sweep_values)} values")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            code = _cmd_run(args)
        elif args.command == "validate":
            code = _cmd_validate(args)
        else:
            for name in builtin_names():
                print(name)
            code = EXIT_OK
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        code = EXIT_RUNTIME
    return code


if __name__ == "__main__":
    sys.exit(main())
