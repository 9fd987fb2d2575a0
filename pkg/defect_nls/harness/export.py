"""CSV and JSON writers.

Both outputs are byte-stable for identical inputs: numbers are written with
17 significant digits, lines end in LF, and report records keep check order.
"""

import csv
import logging
from pathlib import Path

import numpy as np

from defect_nls.errors import IoError
from defect_nls.models.schemas import FieldTable, Report

logger = logging.getLogger(__name__)

CSV_HEADER = ("t", "x", "side", "re_u", "im_u", "abs_u", "flag")


def _number(value: float) -> str:
    return format(float(value), ".17g")


def export_csv(table: FieldTable, path) -> None:
    """Write a field table as ``t,x,side,re_u,im_u,abs_u,flag`` rows.

    Raises:
        IoError: If the file cannot be written
    """
    path = Path(path)
    magnitude = np.abs(table.u)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for i in range(len(table)):
                writer.writerow(
                    (
                        _number(table.t[i]),
                        _number(table.x[i]),
                        table.side[i],
                        _number(table.u[i].real),
                        _number(table.u[i].imag),
                        _number(magnitude[i]),
                        table.flag[i],
                    )
                )
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc
    logger.info("wrote %d rows to %s", len(table), path)


def read_csv(path) -> FieldTable:
    """Load a table written by :func:`export_csv`.

    Raises:
        IoError: If the file cannot be read or has the wrong header
    """
    try:
        with Path(path).open(encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            header = tuple(next(reader, ()))
            rows = list(reader)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if header != CSV_HEADER:
        raise IoError(f"{path} is not a field table (header {','.join(header)})")
    columns = list(zip(*rows)) if rows else [()] * len(CSV_HEADER)
    return FieldTable(
        t=np.array(columns[0], dtype=float),
        x=np.array(columns[1], dtype=float),
        side=np.array(columns[2], dtype=str),
        u=np.array(columns[3], dtype=float) + 1j * np.array(columns[4], dtype=float),
        flag=np.array(columns[6], dtype=str),
    )


def emit_report(report: Report, path=None) -> str:
    """Serialize a report as a JSON array; write it when ``path`` is given.

    Returns:
        The JSON text

    Raises:
        IoError: If the file cannot be written
    """
    text = report.model_dump_json(indent=2) + "\n"
    if path is not None:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8", newline="\n")
        except OSError as exc:
            raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return text
