import csv
import io
import logging
import math
import os
from dataclasses import dataclass

import numpy as np
import pandas as pd

from rankql.exceptions import EmptyFile, ParseError, RaggedRows, SampleTooSmall, UnknownColumn

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dataset:
    """
    Named numeric columns read from a CSV file.

    Attributes
    ----------
    frame : :class:`~pandas.DataFrame`
        One float column per header name, in file order.
    source_path : str
    """
    frame: pd.DataFrame
    source_path: str = ''

    @property
    def column_names(self):
        return tuple(self.frame.columns)

    @property
    def columns(self):
        return {name: self.frame[name].to_numpy(dtype=np.float64) for name in self.frame.columns}

    @property
    def n(self):
        return int(len(self.frame))

    def column(self, name):
        """Values of column `name`; raises UnknownColumn."""
        if name not in self.frame.columns:
            raise UnknownColumn('unknown column {!r}; available: {}'.format(name, ', '.join(self.column_names)))
        return self.frame[name].to_numpy(dtype=np.float64)

    def select(self, names):
        """Mapping of the requested columns, in the requested order."""
        return {name: self.column(name) for name in names}

    @classmethod
    def from_columns(cls, columns, source_path=''):
        return cls(frame=pd.DataFrame({k: np.asarray(v, dtype=np.float64) for k, v in columns.items()}),
                   source_path=source_path)


def _parse_cell(text, row, column):
    try:
        value = float(text)
    except ValueError:
        raise ParseError('row {}, column {!r}: cannot parse {!r} as a number'.format(row, column, text),
                         row=row, column=column) from None
    if not math.isfinite(value):
        raise ParseError('row {}, column {!r}: non-finite value {!r}'.format(row, column, text),
                         row=row, column=column)
    return value


def ingest_csv(path):
    """
    Read a comma separated file with a header row into a :class:`Dataset`.

    Parameters
    ----------
    path : str
        Path to the CSV file.

    Returns
    -------
    ds : Dataset
        Columns in file order.

    Raises
    ------
    EmptyFile
        No header or no data rows.
    RaggedRows
        A row has a different number of cells than the header.
    ParseError
        A cell is not a finite decimal number, or the file is not UTF-8;
        carries the line number and, for cells, the column name.
    """
    with open(path, 'rb') as fp:
        raw = fp.read()
    try:
        text = raw.decode('utf-8-sig')
    except UnicodeDecodeError as e:
        row = raw[:e.start].count(b'\n') + 1
        raise ParseError('row {}: {} is not UTF-8 text ({})'.format(row, path, e.reason), row=row) from None
    reader = csv.reader(io.StringIO(text, newline=''))
    rows = [(i, r) for i, r in enumerate(reader, start=1) if r and any(c.strip() for c in r)]
    if not rows:
        raise EmptyFile('{} is empty'.format(path))
    _, header = rows[0]
    header = [h.strip() for h in header]
    if len(set(header)) != len(header) or not all(header):
        raise ParseError('{}: header names must be unique and non-empty'.format(path), row=1)
    if len(rows) == 1:
        raise EmptyFile('{} has a header but no data rows'.format(path))

    values = []
    for line, row in rows[1:]:
        if len(row) != len(header):
            raise RaggedRows('row {} has {} cells, the header has {}'.format(line, len(row), len(header)), row=line)
        values.append([_parse_cell(cell.strip(), line, name) for cell, name in zip(row, header)])
    if len(values) < 2:
        raise SampleTooSmall('{} has {} data row(s), at least 2 are needed'.format(path, len(values)))

    frame = pd.DataFrame(np.array(values, dtype=np.float64), columns=header)
    logger.debug('read %d rows x %d columns from %s', len(frame), len(header), path)
    return Dataset(frame=frame, source_path=os.path.abspath(path))
