import csv
import io
import json
from pathlib import Path

import pytest

from vetgate import cli
from vetgate.csvio import CsvFormatError, read_records, read_table
from vetgate.schema import SchemaError, parse_schema, validate_text

GOLDEN = Path(__file__).parent / 'golden'


def run(argv, cwd=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if cwd is not None:
        monkeypatch.chdir(cwd)
    code = cli.main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize('data, code', [('ages_ok.csv', 0), ('ages_missing.csv', 1)])
def test_validate_golden_json(data, code, monkeypatch):
    got = run(['validate', '--schema', 'age.schema', data, '--format', 'json'], GOLDEN, monkeypatch)
    expected = (GOLDEN / data.replace('.csv', '.json')).read_text(encoding='utf-8')
    assert got[0] == code
    assert got[1] == expected


def test_validate_golden_text(monkeypatch):
    monkeypatch.setenv('VETGATE_NO_COLOR', '1')
    code, out, _ = run(['validate', '--schema', 'age.schema', 'ages_missing.csv'], GOLDEN, monkeypatch)
    assert code == 1
    assert out == (GOLDEN / 'ages_missing.txt').read_text(encoding='utf-8')


def test_validate_bad_rule(monkeypatch):
    code, out, err = run(['validate', '--schema', 'bad_rule.schema', 'ages_ok.csv', '--format',
                          'json'], GOLDEN, monkeypatch)
    assert code == 2 and out == ''
    assert err == (GOLDEN / 'bad_rule.stderr').read_text(encoding='utf-8')
    assert 'position 0' in err


@pytest.mark.parametrize('argv, code, out', [
    (['rule', '--rule', 'N+[0,]', '--type', 'float', '1', '2', '3'], 0, 'Ok\n'),
    (['rule', '--rule', 'N+[0,]', '--type', 'float', '1', 'NA'], 1,
     'Must not contain missing values, but has a missing value (element 2)\n'),
    (['rule', '--rule', 's1', 'hello'], 0, 'Ok\n'),
    (['rule', '--rule', 'i', '--type', 'int', '1.5'], 2, ''),
    (['rule', '--rule', 'Q'], 2, ''),
])
def test_rule_command(argv, code, out):
    got = run(argv)
    assert got[0] == code and got[1] == out


def _write(tmp_path, schema, data):
    (tmp_path / 's.schema').write_text(schema, encoding='utf-8')
    (tmp_path / 'd.csv').write_text(data, encoding='utf-8')
    return ['validate', '--schema', str(tmp_path / 's.schema'), str(tmp_path / 'd.csv')]


@pytest.mark.parametrize('schema, data, code', [
    ('a = "I+"\n', 'a\n1\n2\n', 0),
    ('a = "I+"\n', 'a\n1\n\n', 0),  # blank lines are skipped
    ('a = "I+"\n', 'a\n1\nNA\n', 1),
    ('a = "I+"\nb = "s"\n', 'a\n1\n', 1),  # required column absent
    ('a = "d[0,1]"\n', 'a\n0.5\nx\n', 1),  # hinted parse failure
    ('a = "s"\n', 'a,b\n"x",1\n', 0),
    ('a = "N"\n', 'a\n"1\n', 2),  # unterminated quote
    ('a = "N"\n', 'a,b\n1\n', 2),  # ragged row
    ('a = "N"\na = "n"\n', 'a\n1\n', 2),  # duplicate key
    ('a: N\n', 'a\n1\n', 2),
])
def test_exit_code_discipline(tmp_path, schema, data, code):
    assert run(_write(tmp_path, schema, data))[0] == code


def test_missing_files_exit_2(tmp_path):
    assert run(['validate', '--schema', str(tmp_path / 'nope'), str(tmp_path / 'x.csv')])[0] == 2
    (tmp_path / 's.schema').write_text('a = "n"\n')
    assert run(['validate', '--schema', str(tmp_path / 's.schema'), str(tmp_path / 'x.csv')])[0] == 2


def test_strict_reports_extra_columns(tmp_path):
    argv = _write(tmp_path, 'a = "n"\n', 'a,b\n1,2\n')
    assert run(argv)[0] == 0
    code, out, _ = run(argv + ['--strict', '--format', 'json'])
    assert code == 1
    assert json.loads(out)['failures'] == [
        {'column': 'b', 'message': 'Must be declared in the schema, but is not'}]


def test_failures_in_schema_order_and_deterministic(tmp_path):
    argv = _write(tmp_path, 'c = "S"\na = "B"\nb = "N[0,]"\n', 'a,b,c\nx,-1,\n') + ['--format', 'json']
    first = run(argv)
    assert first == run(argv)
    assert [f['column'] for f in json.loads(first[1])['failures']] == ['c', 'a', 'b']
    assert list(json.loads(first[1])) == ['file', 'checked_columns', 'failures', 'passed']


def test_schema_parsing():
    s = parse_schema('# header\n"two words" = "n"  # trailing\nx = \'S+\'\ny="b?"\n')
    assert s.columns == (('two words', 'n'), ('x', 'S+'), ('y', 'b?'))
    with pytest.raises(SchemaError, match='position 0'):
        parse_schema('a = "Q"')
    with pytest.raises(SchemaError, match='duplicate'):
        parse_schema('a = "n"\n"a" = "s"')


def test_csv_quoting():
    assert read_records('a,b\r\n"x,""y""",NA\n') == [
        [('a', False), ('b', False)], [('x,"y"', True), ('NA', False)]]
    header, cols = read_table('v\n"NA"\nNA\n""\n\n')
    assert header == ['v'] and cols == [(['NA', 'NA', ''], [True, False, True])]
    report = validate_text('v\n"NA"\nNA\n', parse_schema('v = "S"'))
    assert [f[0] for f in report.failures] == ['v']
    assert validate_text('v\n"NA"\n""\n', parse_schema('v = "S"')).passed
    with pytest.raises(CsvFormatError):
        read_records('a\n"x"y\n')


def test_bench_command(tmp_path):
    out_csv = tmp_path / 'r.csv'
    summary = tmp_path / 's.csv'
    code, out, _ = run(['bench', '--n', '1000', '--reps', '10', '--warmup', '1',
                        '--out', str(out_csv), '--summary-out', str(summary)])
    assert code == 0 and 'S4_long_na_first' in out
    rows = list(csv.DictReader(out_csv.open()))
    assert len(rows) == 4 * 3 * 10
    assert len(list(csv.DictReader(summary.open()))) == 12
    run(['bench', '--n', '100', '--reps', '2', '--scenario', 'S4', '--out', str(out_csv)])
    assert {r['scenario'] for r in csv.DictReader(out_csv.open())} == {'S4_long_na_first'}


@pytest.mark.parametrize('argv', [
    ['bench', '--n', '0'],
    ['bench', '--reps', 'x'],
    ['bench', '--scenario', 'S7'],
    ['bench', '--out', '/nonexistent-dir/r.csv'],
    [],
    ['frobnicate'],
])
def test_bench_usage_errors(argv):
    assert run(argv)[0] == 2


def test_help_exits_zero():
    assert run(['--help'])[0] == 0


def test_color_only_on_tty(monkeypatch):
    class Tty(io.StringIO):
        def isatty(self):
            return True

    monkeypatch.delenv('VETGATE_NO_COLOR', raising=False)
    assert cli._use_color(Tty())
    assert not cli._use_color(io.StringIO())
    monkeypatch.setenv('VETGATE_NO_COLOR', '1')
    assert not cli._use_color(Tty())
