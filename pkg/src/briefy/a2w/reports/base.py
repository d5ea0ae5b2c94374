"""Base report class."""
from briefy.a2w.reports import records_to_csv
from briefy.a2w.reports import save_data_to_file
from io import StringIO

import os
import typing as t


class BaseReport:
    """Base report."""

    fieldnames = ()
    filename = ''

    @property
    def records(self) -> t.Sequence:
        """Return the raw records of this report."""
        raise NotImplementedError('Need to be implemented by a subclass')

    @staticmethod
    def transform(record: t.Any) -> dict:
        """Transform a record into a row.

        This should be specialised on subclasses.

        :param record: Object to be transformed.
        :return: Dictionary keyed by fieldnames.
        """
        return dict(record)

    def __call__(self) -> StringIO:
        """Execute this report.

        :return: A StringIO buffer with the result.
        """
        records = [self.transform(record) for record in self.records]
        return records_to_csv(records, self.fieldnames)

    def save(self, directory: str) -> str:
        """Write the report under its file name and return the path."""
        path = os.path.join(directory, self.filename)
        save_data_to_file(self(), path)
        return path
