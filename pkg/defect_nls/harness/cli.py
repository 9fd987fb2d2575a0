"""Command-line entry point.

Commands:
- ``run``: evaluate the configured field on its grid and write the CSV,
  optionally verifying and writing the report
- ``verify``: report only
- ``schema``: print the JSON schema of run configurations
- ``shifts``: predicted (and, for moving solitons, measured) transmission shifts
- ``tracks``: soliton tracks fitted in an exported CSV

Exit codes: 0 success, 1 a check failed, 2 configuration error, 3 I/O error,
4 any other domain error.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from defect_nls.config import settings
from defect_nls.engine.scattering import canonical_point, measure_shift, predict_transmission
from defect_nls.errors import DefectNLSError, InvariantViolation
from defect_nls.harness.export import emit_report, export_csv, read_csv
from defect_nls.harness.grid import build_system, evaluate_grid
from defect_nls.harness.loader import parse_config
from defect_nls.harness.tracks import extract_tracks
from defect_nls.harness.verify import verify_all
from defect_nls.models.schemas import Mode, RunConfig
from defect_nls.utils import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1


def _csv_path(args: argparse.Namespace, cfg: RunConfig) -> Path:
    stem = Path(args.config).stem
    if args.out:
        return Path(args.out) / f"{stem}.csv"
    if cfg.output.csv:
        return Path(cfg.output.csv)
    return Path(f"{stem}.csv")


def _report_path(args: argparse.Namespace, cfg: RunConfig) -> Optional[Path]:
    if args.report:
        return Path(args.report)
    if getattr(args, "out", None):
        return Path(args.out) / f"{Path(args.config).stem}_report.json"
    if cfg.output.report:
        return Path(cfg.output.report)
    return None


def _verify(args: argparse.Namespace, cfg: RunConfig) -> int:
    report = verify_all(cfg)
    path = _report_path(args, cfg)
    text = emit_report(report, path)
    if path is None:
        sys.stdout.write(text)
    for record in report.failed:
        print(f"FAIL {record.check}: measured {record.measured}, tolerance {record.tolerance}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def command_run(args: argparse.Namespace) -> int:
    cfg = parse_config(args.config)
    table = evaluate_grid(cfg)
    path = _csv_path(args, cfg)
    export_csv(table, path)
    print(f"wrote {len(table)} rows to {path}")
    if args.verify:
        return _verify(args, cfg)
    return EXIT_OK


def command_verify(args: argparse.Namespace) -> int:
    return _verify(args, parse_config(args.config))


def command_schema(args: argparse.Namespace) -> int:
    print(json.dumps(RunConfig.model_json_schema(), indent=2))
    return EXIT_OK


def command_shifts(args: argparse.Namespace) -> int:
    cfg = parse_config(args.config)
    if cfg.mode is not Mode.DEFECT_NSOLITON:
        raise InvariantViolation("transmission shifts need a defect-nsoliton run", field="mode")
    system = build_system(cfg)
    rows = []
    for j, point in enumerate(system.right.points):
        lam = canonical_point(point).lam
        predicted = predict_transmission(system.defect, lam)
        measured = measure_shift(system, j).model_dump() if lam.real != 0 else None
        rows.append(
            {
                "index": j,
                "lambda": [lam.real, lam.imag],
                "predicted": predicted.model_dump(),
                "measured": measured,
            }
        )
    print(json.dumps(rows, indent=2))
    return EXIT_OK


def command_tracks(args: argparse.Namespace) -> int:
    tracks = extract_tracks(read_csv(args.csv), fraction=args.fraction)
    rows = []
    for track in tracks:
        fit = track.fit()
        rows.append({**fit.model_dump(), "shift": fit.shift, "points": len(track.points)})
    print(json.dumps(rows, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="defect-nls", description=settings.APP_DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.APP_VERSION}")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Logging level (default: %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Evaluate the grid and export CSV")
    run.add_argument("--config", required=True, help="Run configuration (JSON)")
    run.add_argument("--out", help="Output directory for the CSV and report")
    run.add_argument("--verify", action="store_true", help="Also run the verification suite")
    run.add_argument("--report", help="Report path (JSON)")
    run.set_defaults(func=command_run)

    verify = sub.add_parser("verify", help="Run the verification suite only")
    verify.add_argument("--config", required=True, help="Run configuration (JSON)")
    verify.add_argument("--report", help="Report path; printed to stdout when omitted")
    verify.set_defaults(func=command_verify, out=None)

    schema = sub.add_parser("schema", help="Print the run configuration JSON schema")
    schema.set_defaults(func=command_schema)

    shifts = sub.add_parser("shifts", help="Predicted and measured transmission shifts")
    shifts.add_argument("--config", required=True, help="Run configuration (JSON)")
    shifts.set_defaults(func=command_shifts)

    tracks = sub.add_parser("tracks", help="Fit soliton tracks in an exported CSV")
    tracks.add_argument("--csv", required=True, help="Field table written by run")
    tracks.add_argument("--fraction", type=float, default=0.5, help="Peak threshold (default: %(default)s)")
    tracks.set_defaults(func=command_tracks)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.func(args)
    except DefectNLSError as exc:
        logger.debug("command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
