"""CSV ingestion for samples and trajectory batches.

Sample files carry two columns ``z,x``; batch files three columns
``copy_id,z,x``.  A header row is optional, the decimal separator is ``.``
and the encoding UTF-8.  Parse failures raise :class:`CsvFormatError`
naming the offending row.
"""

from __future__ import annotations

import csv

import numpy as np

from .design import RawSample
from .exceptions import CsvFormatError, InvalidArgumentError
from .functional import TrajectoryBatch

__all__ = ["read_sample_csv", "read_batch_csv"]


def _parse_rows(path, ncols: int, colnames: tuple[str, ...]):
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != ncols:
                raise CsvFormatError(
                    f"{path}: row {lineno}: expected {ncols} columns "
                    f"({','.join(colnames)}), got {len(row)}"
                )
            try:
                rows.append(tuple(float(cell) for cell in row))
            except ValueError:
                if lineno == 1:  # header row
                    continue
                bad = next(c for c in row if not _is_float(c))
                raise CsvFormatError(
                    f"{path}: row {lineno}: could not parse {bad!r} as a number"
                ) from None
    if not rows:
        raise CsvFormatError(f"{path}: no data rows")
    return np.asarray(rows, dtype=float)


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def _resolve_domain(z: np.ndarray, domain):
    if domain is None:
        lo, hi = float(z.min()), float(z.max())
        if lo == hi:
            raise InvalidArgumentError("cannot infer a domain from a constant design")
        return (lo, hi)
    return (float(domain[0]), float(domain[1]))


def read_sample_csv(path, domain=None) -> RawSample:
    """Read a ``z,x`` file; the domain defaults to the design range."""
    data = _parse_rows(path, 2, ("z", "x"))
    return RawSample(data[:, 0], data[:, 1], _resolve_domain(data[:, 0], domain))


def read_batch_csv(path, domain=None) -> TrajectoryBatch:
    """Read a ``copy_id,z,x`` file into a trajectory batch."""
    data = _parse_rows(path, 3, ("copy_id", "z", "x"))
    dom = _resolve_domain(data[:, 1], domain)
    copies = []
    for cid in np.unique(data[:, 0]):
        part = data[data[:, 0] == cid]
        copies.append(RawSample(part[:, 1], part[:, 2], dom))
    return TrajectoryBatch(copies=tuple(copies), domain=dom)
