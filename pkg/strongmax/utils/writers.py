import csv
import json
import logging
import math
import numbers
from pathlib import Path
from typing import Iterable, Sequence, TextIO, Union

logger = logging.getLogger(__name__)


def format_number(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, numbers.Integral) and not isinstance(value, bool):
        return str(value)
    return repr(float(value))


def write_csv(
    path: Union[str, Path], columns: Sequence[str], rows: Iterable[Sequence]
) -> int:
    """
    Writes a CSV file with a single ``#``-prefixed header line.

    Parameters
    ----------
    path : str or Path
        Destination file.
    columns : Sequence[str]
        Column names.
    rows : Iterable[Sequence]
        Row values; floats are written with ``repr``.

    Returns
    -------
    int
        Number of data rows written.
    """

    count = 0
    with open(path, "w", newline="") as fh:
        fh.write("# " + ",".join(columns) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        for row in rows:
            writer.writerow([format_number(v) for v in row])
            count += 1
    logger.info("Wrote %d rows to %s", count, path)
    return count


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _json_safe(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def dump_json(data: dict, stream: TextIO):
    """Writes *data* as sorted-key JSON followed by a newline; NaN becomes null."""

    json.dump(_json_safe(data), stream, sort_keys=True, indent=2)
    stream.write("\n")
