"""
CSV and JSON tables with a metadata header
"""

import contextlib
import csv
import json
import sys
from typing import Any, Dict, Iterator, List, Sequence, TextIO

from .config import RunConfig
from .logging import get_logger

logger = get_logger(__name__)

SIGNIFICANT_DIGITS = 12


def format_value(value: Any) -> str:
    """Floats with 12 significant digits, everything else as text"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def json_value(value: Any) -> Any:
    if isinstance(value, float):
        return float(format_value(value))
    return value


def display_error(value: float) -> str:
    """One significant digit in the table style, e.g. '-2e-4'

    >>> display_error(-0.00021)
    '-2e-4'
    >>> display_error(6.2e-12)
    '6e-12'
    """
    mantissa, exponent = f"{value:.0e}".split("e")
    return f"{mantissa}e{int(exponent)}"


@contextlib.contextmanager
def _open(run: RunConfig) -> Iterator[TextIO]:
    if run.output is None:
        yield sys.stdout
    else:
        with open(run.output, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _csv_header(metadata: Dict[str, Any]) -> List[str]:
    lines = []
    for key, value in metadata.items():
        if isinstance(value, dict):
            value = json.dumps(value, sort_keys=True, default=str)
        lines.append(f"# {key}: {value}")
    return lines


def write_table(
    rows: Sequence[Dict[str, Any]], columns: Sequence[str], run: RunConfig
) -> None:
    """Write rows in the run's output format to its output"""
    metadata = run.metadata()
    with _open(run) as fh:
        if run.output_format == "json":
            record = {
                "metadata": json.loads(
                    json.dumps(metadata, sort_keys=True, default=str)
                ),
                "rows": [
                    {col: json_value(row.get(col)) for col in columns}
                    for row in rows
                ],
            }
            json.dump(record, fh, indent=2)
            fh.write("\n")
        else:
            for line in _csv_header(metadata):
                fh.write(line + "\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow(
                    [format_value(row.get(col)) for col in columns]
                )
    if run.output is not None:
        logger.info("wrote %d rows to %s", len(rows), run.output)
