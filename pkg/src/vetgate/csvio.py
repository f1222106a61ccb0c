"""RFC 4180 reading that keeps track of which fields were quoted.

The stdlib :mod:`csv` reader drops that distinction, but it matters here:
an unquoted empty field or ``NA`` is a missing value, a quoted one is text.
"""

from .errors import UsageError
from .values import TypeTag, factor, frame, parse_column


class CsvFormatError(UsageError):
    pass


def read_records(text):
    """Split CSV text into records of ``(field, quoted)`` pairs; blank lines are skipped."""
    records = []
    record = []
    field = []
    quoted = False
    i = 0
    n = len(text)
    line = 1
    at_field_start = True
    while i < n:
        c = text[i]
        if at_field_start and c == '"':
            quoted = True
            at_field_start = False
            i += 1
            while True:
                if i >= n:
                    raise CsvFormatError(f'line {line}: unterminated quoted field')
                c = text[i]
                if c == '"':
                    if i + 1 < n and text[i + 1] == '"':
                        field.append('"')
                        i += 2
                        continue
                    i += 1
                    break
                if c == '\n':
                    line += 1
                field.append(c)
                i += 1
            if i < n and text[i] not in ',\r\n':
                raise CsvFormatError(f'line {line}: unexpected text after closing quote')
            continue
        if c == ',':
            record.append((''.join(field), quoted))
            field, quoted, at_field_start = [], False, True
        elif c == '\r' or c == '\n':
            if c == '\r' and i + 1 < n and text[i + 1] == '\n':
                i += 1
            if record or field or quoted:
                record.append((''.join(field), quoted))
                records.append(record)
            # a blank line is skipped, not read as one empty field
            record, field, quoted, at_field_start = [], [], False, True
            line += 1
        else:
            if c == '"':
                raise CsvFormatError(f'line {line}: quote inside unquoted field')
            field.append(c)
            at_field_start = False
        i += 1
    if field or record or quoted:
        record.append((''.join(field), quoted))
        records.append(record)
    return records


def read_table(text):
    """Header and columns of ``(cells, quoted)``; ragged rows are errors."""
    records = read_records(text)
    if not records:
        raise CsvFormatError('empty CSV: a header row is required')
    header = [name for name, _ in records[0]]
    width = len(header)
    columns = [([], []) for _ in header]
    for lineno, record in enumerate(records[1:], start=2):
        if len(record) != width:
            raise CsvFormatError(f'row {lineno} has {len(record)} fields, expected {width}')
        for (cells, quoted), (text_, q) in zip(columns, record):
            cells.append(text_)
            quoted.append(q)
    return header, columns


def column_value(cells, quoted, hint=None):
    """Parse one column. A ``Factor`` hint reads labels as text."""
    if hint is TypeTag.FACTOR:
        labels = parse_column(cells, TypeTag.STR, quoted=quoted)
        return factor(labels.to_python())
    return parse_column(cells, hint, quoted=quoted)


def read_frame(text, hints=None):
    hints = hints or {}
    header, columns = read_table(text)
    return frame([(name, column_value(cells, quoted, hints.get(name)))
                  for name, (cells, quoted) in zip(header, columns)])
