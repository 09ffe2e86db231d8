"""Numeric CSV datasets."""

import csv
import io
import urllib.request
from dataclasses import dataclass

import numpy as np

from .errors import DatasetError

MIN_ROWS = 3


@dataclass(frozen=True)
class Dataset:
    names: tuple
    columns: dict
    source: str = ""

    @property
    def n(self):
        return len(next(iter(self.columns.values())))

    def __getitem__(self, name):
        try:
            return self.columns[name]
        except KeyError:
            raise DatasetError(f"no column named {name!r}; available: {', '.join(self.names)}") from None

    def matrix(self, names):
        return np.column_stack([self[name] for name in names]) if names else np.zeros((self.n, 0))


def _parse_number(text):
    # float() is locale independent; reject things like "nan" and "inf"
    value = float(text)
    if not np.isfinite(value):
        raise ValueError(text)
    return value


def read_dataset_csv(handle, source=""):
    reader = csv.reader(handle)
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetError(f"{source or 'input'}: no header") from None
    header = [h.strip() for h in header]
    if not any(header):
        raise DatasetError(f"{source or 'input'}: no header")
    seen = set()
    for name in header:
        if not name:
            raise DatasetError(f"{source}: empty column name in header")
        if name in seen:
            raise DatasetError(f"{source}: duplicate column name {name!r}")
        seen.add(name)
    rows = []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise DatasetError(f"{source}: row {line_no} has {len(row)} cells, expected {len(header)}")
        values = []
        for col, cell in zip(header, row):
            cell = cell.strip()
            if not cell:
                raise DatasetError(f"{source}: row {line_no}, column {col!r}: missing value")
            try:
                values.append(_parse_number(cell))
            except ValueError:
                raise DatasetError(
                    f"{source}: row {line_no}, column {col!r}: non-numeric value {cell!r}") from None
        rows.append(values)
    if len(rows) < MIN_ROWS:
        raise DatasetError(f"{source}: need at least {MIN_ROWS} data rows, found {len(rows)}")
    data = np.array(rows, dtype=float)
    return Dataset(tuple(header), {name: data[:, k] for k, name in enumerate(header)}, source)


def parse_dataset_csv(path):
    """Read a comma-separated, UTF-8 file whose first row names the columns."""
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            return read_dataset_csv(fh, str(path))
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc


def fetch_dataset_csv(url, timeout=30):
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            text = resp.read().decode("utf-8-sig")
    except OSError as exc:
        raise DatasetError(f"cannot fetch {url}: {exc}") from exc
    return read_dataset_csv(io.StringIO(text), url)
