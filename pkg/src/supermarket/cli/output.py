"""Rendering of `ResultsDocument` objects as text, CSV or JSON.

Text rounds to six significant digits; CSV and JSON keep full precision so
both carry identical numbers.
"""

import csv
import io
import math

from enum import Enum
from typing import Any

from supermarket.types import ResultsDocument
from supermarket.utils.constants import DEFAULT_SIGNIFICANT_DIGITS


class OutputFormat(str, Enum):
    TEXT = 'text'
    CSV = 'csv'
    JSON = 'json'


def format_number(value: Any, digits: int = DEFAULT_SIGNIFICANT_DIGITS) -> str:
    """Formats floats to `digits` significant digits and leaves other values alone."""
    if isinstance(value, bool) or not isinstance(value, float):
        if isinstance(value, list):
            return '(' + ', '.join(format_number(item, digits) for item in value) + ')'
        return str(value)
    if math.isnan(value) or math.isinf(value):
        return str(value)
    return f'{value:.{digits}g}'


def _full(value: Any) -> Any:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return ';'.join(str(_full(item)) for item in value)
    return value


def render_text(document: ResultsDocument, digits: int = DEFAULT_SIGNIFICANT_DIGITS) -> str:
    lines = [f'# {document.command}']
    for key, value in document.parameters.items():
        lines.append(f'  {key} = {format_number(value, digits)}')
    for table in document.tables:
        lines.append('')
        lines.append(f'[{table.name}]')
        cells = [table.columns] + [
            [format_number(value, digits) for value in row] for row in table.rows
        ]
        widths = [max(len(row[i]) for row in cells) for i in range(len(table.columns))]
        for row in cells:
            lines.append('  '.join(cell.rjust(width) for cell, width in zip(row, widths)))
    if document.summary:
        lines.append('')
        lines.append('[summary]')
        for key, value in document.summary.items():
            lines.append(f'  {key}: {format_number(value, digits)}')
    for note in document.notes:
        lines.append(f'note: {note}')
    return '\n'.join(lines) + '\n'


def render_csv(document: ResultsDocument) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    tables = list(document.tables)
    for index, table in enumerate(tables):
        if index:
            buffer.write('\n')
        buffer.write(f'# {table.name}\n')
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_full(value) for value in row])
    if document.summary:
        if tables:
            buffer.write('\n')
        buffer.write('# summary\n')
        writer.writerow(['key', 'value'])
        for key, value in document.summary.items():
            writer.writerow([key, _full(value)])
    return buffer.getvalue()


def render_json(document: ResultsDocument) -> str:
    return document.model_dump_json(indent=2) + '\n'


def render(
    document: ResultsDocument,
    output_format: OutputFormat = OutputFormat.TEXT,
    digits: int = DEFAULT_SIGNIFICANT_DIGITS,
) -> str:
    if output_format is OutputFormat.JSON:
        return render_json(document)
    if output_format is OutputFormat.CSV:
        return render_csv(document)
    return render_text(document, digits)
