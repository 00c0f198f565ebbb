"""Command line entry point: ``tsm check <manifest> [options]``.

Exit codes: 0 when every applicable check passes, 2 when any check fails,
1 on usage or manifest errors.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .manifest import SUITES, ManifestError, parse_manifest
from .manifold import ManifoldError
from .report import exit_code, render_json, render_text
from .runner import run


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("transsasakian") / "fixtures" / name))


def _read(path: str) -> tuple[str, str]:
    p = Path(path)
    if not p.exists() and not p.is_absolute() and fixture_path(p.name).exists():
        p = fixture_path(p.name)  # bundled fixtures by bare name
    return p.name, p.read_text(encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tsm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    check = sub.add_parser("check", help="run identity suites on a manifest")
    check.add_argument("manifest", help="path to a .tsm manifest (or a bundled fixture name)")
    check.add_argument("--suite", action="append", choices=("all",) + SUITES,
                       help="suite to run; repeatable (default: the manifest's suites)")
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument("--oracle", action="store_true",
                       help="also run the finite-difference cross-check (chart mode only)")
    check.add_argument("--seed", type=int, default=0, help="seed for oracle sample points")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        name, text = _read(args.manifest)
        manifest = parse_manifest(text)
        reports = run(manifest, args.suite, oracle_check=args.oracle, seed=args.seed)
    except OSError as exc:
        print(f"tsm: cannot read manifest: {exc}", file=sys.stderr)
        return 1
    except (ManifestError, ManifoldError) as exc:
        print(f"tsm: {args.manifest}: {exc}", file=sys.stderr)
        return 1
    render = render_json if args.format == "json" else render_text
    sys.stdout.write(render(reports, name))
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
