"""CSV series files: header row, fixed column order, 17 significant digits."""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Dict, List, Mapping, Sequence

from burgerslab.core.exceptions import OutputError
from burgerslab.core.logger import get_logger

logger = get_logger(__name__)


def emit_csv(columns: Mapping[str, Sequence[float]], path: Path | str) -> Path:
    """
    Write equally long columns, in mapping order, to path.

    Raises:
        ValueError: no columns, or columns of different lengths
        OutputError: path cannot be written
    """
    if not columns:
        raise ValueError("nothing to write: no columns")
    lengths = {name: len(values) for name, values in columns.items()}
    if len(set(lengths.values())) != 1:
        raise ValueError(f"columns differ in length: {lengths}")

    target = Path(path)
    rows = zip(*columns.values())
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(list(columns))
            for row in rows:
                writer.writerow([f"{float(value):.17g}" for value in row])
    except OSError as exc:
        raise OutputError(f"cannot write {target}: {exc}") from exc
    logger.debug("csv.written", path=str(target), rows=next(iter(lengths.values())))
    return target


def read_csv(path: Path | str) -> Dict[str, List[float]]:
    """Inverse of emit_csv: column name -> values, in file order."""
    with Path(path).open(encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        columns: Dict[str, List[float]] = {name: [] for name in header}
        for row in reader:
            for name, value in zip(header, row):
                columns[name].append(float(value))
    return columns
