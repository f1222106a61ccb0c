"""Rule schemas for columnar data and the validation report."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import List, Tuple

from .csvio import column_value, read_table
from .dsl import ClassCode, Rule, eval_rule, parse_rule
from .errors import ColumnParseError, RuleParseError, UsageError


class SchemaError(UsageError):
    pass


_LINE_RE = re.compile(
    r'''\s*(?P<key>[A-Za-z0-9_-]+|"(?:[^"\\]|\\.)*"|'[^']*')\s*=\s*'''
    r'''(?P<value>"(?:[^"\\]|\\.)*"|'[^']*')\s*(?:\#.*)?''')


def _unquote(token):
    if token.startswith("'"):
        return token[1:-1]
    if token.startswith('"'):
        try:
            return json.loads(token)
        except json.JSONDecodeError as exc:
            raise ValueError(f'bad escape in {token}: {exc.msg}') from None
    return token


@dataclass(frozen=True)
class Schema:
    columns: Tuple[Tuple[str, str], ...]
    allow_extra_columns: bool = True
    required_all: bool = True
    rules: Tuple[Rule, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        names = [name for name, _ in self.columns]
        if len(set(names)) != len(names):
            raise SchemaError('duplicate column in schema')
        rules = []
        for name, rule in self.columns:
            try:
                rules.append(parse_rule(rule))
            except RuleParseError as exc:
                raise SchemaError(f'column {name!r}: {exc}') from exc
        object.__setattr__(self, 'rules', tuple(rules))


def parse_schema(text, source='<schema>', **options):
    """Parse ``name = "rule"`` lines; ``#`` starts a comment."""
    columns = []
    seen = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        m = _LINE_RE.fullmatch(line)
        if m is None:
            raise SchemaError(f'{source}:{lineno}: expected name = "rule"')
        try:
            name = _unquote(m.group('key'))
            rule = _unquote(m.group('value'))
        except ValueError as exc:
            raise SchemaError(f'{source}:{lineno}: {exc}') from None
        if name in seen:
            raise SchemaError(f'{source}:{lineno}: duplicate column {name!r}')
        seen.add(name)
        try:
            parse_rule(rule)
        except RuleParseError as exc:
            raise SchemaError(f'{source}:{lineno}: column {name!r}: {exc}') from exc
        columns.append((name, rule))
    return Schema(tuple(columns), **options)


def load_schema(path, **options):
    with open(path, encoding='utf-8') as fh:
        return parse_schema(fh.read(), source=str(path), **options)


@dataclass
class ValidationReport:
    file: str
    checked_columns: int = 0
    failures: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def to_dict(self):
        return {
            'file': self.file,
            'checked_columns': self.checked_columns,
            'failures': [{'column': c, 'message': m} for c, m in self.failures],
            'passed': self.passed,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + '\n'

    def to_text(self, color=False):
        def paint(text, code):
            return f'\x1b[{code}m{text}\x1b[0m' if color else text
        plural = 's' if self.checked_columns != 1 else ''
        if self.passed:
            return (f'{self.file}: {paint("OK", 32)} '
                    f'({self.checked_columns} column{plural} checked)\n')
        n = len(self.failures)
        lines = [f'{self.file}: {paint("FAILED", 31)} ({self.checked_columns} column{plural} '
                 f'checked, {n} failure{"s" if n != 1 else ""})']
        lines += [f'  {column}: {message}' for column, message in self.failures]
        return '\n'.join(lines) + '\n'


_HINTS = {
    ClassCode.DOUBLE: 'Float',
    ClassCode.STR: 'Str',
    ClassCode.FACTOR: 'Factor',
}


def _hint(rule):
    from .values import TypeTag
    if len(rule.class_codes) != 1:
        return None
    (code,) = rule.class_codes
    name = _HINTS.get(code)
    return TypeTag(name) if name else None


def validate_text(text, schema, file='<data>'):
    """Validate CSV text. Raises CsvFormatError on malformed CSV."""
    header, columns = read_table(text)
    if len(set(header)) != len(header):
        raise SchemaError('duplicate column in data header')
    data = dict(zip(header, columns))
    report = ValidationReport(file)
    for (name, _), rule in zip(schema.columns, schema.rules):
        if name not in data:
            if schema.required_all:
                report.failures.append((name, 'Must be present in the data, but is absent'))
            continue
        report.checked_columns += 1
        cells, quoted = data[name]
        hint = _hint(rule)
        try:
            value = column_value(cells, quoted, hint)
        except ColumnParseError as exc:
            report.failures.append((name, (
                f'Must contain {hint} values, but has text {exc.text!r} (element {exc.index})')))
            continue
        outcome = eval_rule(value, rule)
        if outcome is not True:
            report.failures.append((name, outcome))
    if not schema.allow_extra_columns:
        declared = {name for name, _ in schema.columns}
        for name in header:
            if name not in declared:
                report.failures.append((name, 'Must be declared in the schema, but is not'))
    return report


def validate_file(path, schema, file=None):
    with open(path, encoding='utf-8', newline='') as fh:
        text = fh.read()
    return validate_text(text, schema, file=str(path) if file is None else file)
