"""``vetgate`` command line.

Exit codes: 0 when every check passes, 1 when data fails validation,
2 for usage and IO errors.
"""

import argparse
import os
import sys

from . import bench
from .csvio import CsvFormatError
from .dsl import compile_rule, eval_rule
from .errors import ColumnParseError, UsageError, VerdictMismatch
from .schema import SchemaError, load_schema, validate_file
from .values import TypeTag, parse_column

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

_TYPE_HINTS = {'bool': TypeTag.BOOL, 'int': TypeTag.INT, 'float': TypeTag.FLOAT, 'str': TypeTag.STR}


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise _ArgumentError(f'{self.prog}: error: {message}')


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected a positive integer, got {text!r}') from None
    if v < 1:
        raise argparse.ArgumentTypeError(f'expected a positive integer, got {text!r}')
    return v


def _non_negative(text):
    try:
        v = int(text)
    except ValueError:
        v = -1
    if v < 0:
        raise argparse.ArgumentTypeError(f'expected a non-negative integer, got {text!r}')
    return v


def _use_color(stream):
    if os.environ.get('VETGATE_NO_COLOR') is not None:
        return False
    isatty = getattr(stream, 'isatty', None)
    return bool(isatty and isatty())


def build_parser():
    parser = _Parser(prog='vetgate', description='Fail-fast validation of vectors and CSV columns.')
    sub = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    p = sub.add_parser('validate', help='validate a CSV file against a schema of rules')
    p.add_argument('--schema', required=True, help='file of name = "rule" lines')
    p.add_argument('data', help='CSV file with a header row')
    p.add_argument('--format', choices=('text', 'json'), default='text')
    p.add_argument('--strict', action='store_true', help='fail on columns missing from the schema')

    p = sub.add_parser('rule', help='check literal values against a rule')
    p.add_argument('--rule', required=True)
    p.add_argument('--type', choices=sorted(_TYPE_HINTS), default=None,
                   help='element type; inferred when omitted')
    p.add_argument('values', nargs='*')

    p = sub.add_parser('bench', help='run the benchmark scenarios')
    p.add_argument('--n', type=_positive, default=bench.DEFAULT_N)
    p.add_argument('--reps', type=_positive, default=bench.DEFAULT_REPS)
    p.add_argument('--warmup', type=_non_negative, default=bench.DEFAULT_WARMUP)
    p.add_argument('--scenario', action='append', metavar='ID',
                   help='S1..S4 or a full id; repeatable')
    p.add_argument('--out', help='per-replication CSV')
    p.add_argument('--summary-out', help='summary CSV')
    return parser


def cmd_validate(args, out, err):
    try:
        schema = load_schema(args.schema, allow_extra_columns=not args.strict)
        report = validate_file(args.data, schema, file=args.data)
    except (OSError, UnicodeDecodeError) as exc:
        err.write(f'vetgate: {exc}\n')
        return EXIT_USAGE
    except (SchemaError, CsvFormatError) as exc:
        err.write(f'vetgate: {exc}\n')
        return EXIT_USAGE
    if args.format == 'json':
        out.write(report.to_json())
    else:
        out.write(report.to_text(color=_use_color(out)))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_rule(args, out, err):
    try:
        rule = compile_rule(args.rule)
    except UsageError as exc:
        err.write(f'vetgate: {exc}\n')
        return EXIT_USAGE
    hint = _TYPE_HINTS[args.type] if args.type else None
    try:
        x = parse_column(args.values, hint)
    except ColumnParseError as exc:
        err.write(f'vetgate: {exc}\n')
        return EXIT_USAGE
    outcome = eval_rule(x, rule)
    if outcome is True:
        out.write('Ok\n')
        return EXIT_OK
    out.write(outcome + '\n')
    return EXIT_FAILED


def cmd_bench(args, out, err):
    try:
        ids = [bench.resolve_scenario_id(s) for s in args.scenario] if args.scenario else None
    except UsageError as exc:
        err.write(f'vetgate: {exc}\n')
        return EXIT_USAGE
    if ids:
        ids = list(dict.fromkeys(ids))
    handles = []
    try:
        # open outputs up front so a bad path fails before minutes of timing
        try:
            rec_fh = open(args.out, 'w', encoding='utf-8', newline='') if args.out else None
            handles.append(rec_fh)
            sum_fh = (open(args.summary_out, 'w', encoding='utf-8', newline='')
                      if args.summary_out else None)
            handles.append(sum_fh)
        except OSError as exc:
            err.write(f'vetgate: {exc}\n')
            return EXIT_USAGE
        selected = bench.scenarios(args.n, ids or bench.SCENARIO_IDS)
        try:
            records = bench.run_benchmark(selected, reps=args.reps, warmup=args.warmup)
        except VerdictMismatch as exc:
            err.write(f'vetgate: {exc}\n')
            return EXIT_FAILED
        summary = bench.summarize(records)
        if rec_fh:
            bench.write_records_csv(records, rec_fh)
        if sum_fh:
            bench.write_summary_csv(summary, sum_fh)
        out.write(bench.format_summary(summary) + '\n')
        return EXIT_OK
    finally:
        for fh in handles:
            if fh is not None:
                fh.close()


_COMMANDS = {'validate': cmd_validate, 'rule': cmd_rule, 'bench': cmd_bench}


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _ArgumentError as exc:
        err.write(f'{exc}\n')
        return EXIT_USAGE
    except SystemExit as exc:
        # --help and --version exit through argparse
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    return _COMMANDS[args.command](args, out, err)


def run():
    sys.exit(main())
