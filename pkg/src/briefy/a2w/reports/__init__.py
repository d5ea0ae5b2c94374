"""A2W Reports package."""
from io import StringIO
from typing import Sequence

import csv


FLOAT_DIGITS = 6


def export_float(value: float, digits: int = FLOAT_DIGITS) -> str:
    """Format a float with a fixed number of decimals."""
    return f'{value:.{digits}f}'


def export_labels(labels: Sequence) -> str:
    """Join a label sequence with spaces."""
    return ' '.join(str(label) for label in labels)


def save_data_to_file(buffer: StringIO, filename: str) -> bool:
    """Save the contents of a StringIO buffer to a real file."""
    with open(filename, 'w', encoding='utf-8') as fout:
        buffer.seek(0)
        fout.write(buffer.read())
    return True


def records_to_csv(records: Sequence, fieldnames: Sequence) -> StringIO:
    """Return a tab delimited buffer with a header line and all records."""
    fout = StringIO()
    writer = csv.DictWriter(fout, fieldnames=fieldnames, delimiter='\t', lineterminator='\n')
    writer.writeheader()
    for data in records:
        data = {k: v for k, v in data.items() if k in fieldnames}
        writer.writerow(data)
    return fout
