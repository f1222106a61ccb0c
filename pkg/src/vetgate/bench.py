"""Timing harness for the log() input check: numeric, no missing values, all >= 0.

Four scenarios mirror the failure modes that matter for a validator: a
wrong-typed scalar, a passing scalar, a long passing vector and a long
vector whose first element is missing. Three implementations are timed:
the structured engine, the rule DSL and a naive validator that
materializes per-element predicate lists before aggregating them.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dsl import qtest
from .engine import NUMERIC_TAGS, Bounds, VectorSpec, check_vector
from .errors import UsageError, VerdictMismatch
from .values import TypeTag, float_vector, str_vector

SCENARIO_IDS = ('S1_wrong_type', 'S2_scalar_ok', 'S3_long_ok', 'S4_long_na_first')

DEFAULT_N = 10 ** 6
DEFAULT_REPS = 100
DEFAULT_WARMUP = 10

RECORD_HEADER = ('scenario', 'implementation', 'replication', 'elapsed_ns')
SUMMARY_HEADER = ('scenario', 'implementation', 'min_ns', 'median_ns', 'mean_ns', 'max_ns')

_DESCRIPTIONS = {
    'S1_wrong_type': 'scalar string (wrong type)',
    'S2_scalar_ok': 'scalar float that passes',
    'S3_long_ok': 'long float vector that passes',
    'S4_long_na_first': 'long float vector, first element missing',
}


@dataclass(frozen=True)
class Scenario:
    id: str
    n: int = DEFAULT_N
    description: str = ''

    def build(self, seed=0):
        if self.id == 'S1_wrong_type':
            return str_vector(['a'])
        if self.id == 'S2_scalar_ok':
            return float_vector([1.0])
        values = np.random.default_rng(seed).uniform(0.5, 100.0, self.n)
        if self.id == 'S4_long_na_first':
            values[0] = np.nan
        return float_vector(values)


def resolve_scenario_id(name):
    for sid in SCENARIO_IDS:
        if name == sid or name == sid.split('_', 1)[0]:
            return sid
    raise UsageError(f'unknown scenario {name!r}; choose from {", ".join(SCENARIO_IDS)}')


def scenarios(n=DEFAULT_N, ids=SCENARIO_IDS):
    return [Scenario(resolve_scenario_id(sid), n, _DESCRIPTIONS[resolve_scenario_id(sid)])
            for sid in ids]


@dataclass(frozen=True)
class Implementation:
    id: str
    fn: Callable


LOG_INPUT_SPEC = VectorSpec(NUMERIC_TAGS, any_missing_ok=False, bounds=Bounds(0.0))
LOG_INPUT_RULE = 'N[0,]'


def engine_structured(x):
    return check_vector(x, LOG_INPUT_SPEC) is True


def engine_dsl(x):
    return qtest(x, LOG_INPUT_RULE)


def naive_two_pass(x):
    """Type test, then a full missingness list, then a full ``>= 0`` list."""
    if x.tag is not TypeTag.INT and x.tag is not TypeTag.FLOAT:
        return False
    missing = [flag != 0 for flag in x.mask.tolist()]
    if any(missing):
        return False
    nonnegative = [v >= 0 for v in x.data.tolist()]
    return all(nonnegative)


IMPLEMENTATIONS = (
    Implementation('engine_structured', engine_structured),
    Implementation('engine_dsl', engine_dsl),
    Implementation('naive_two_pass', naive_two_pass),
)


@dataclass(frozen=True)
class TimingRecord:
    scenario: str
    implementation: str
    replication: int
    elapsed_ns: int
    n: int = 0


@dataclass(frozen=True)
class Summary:
    min_ns: int
    median_ns: float
    mean_ns: float
    max_ns: int
    count: int


def verify_agreement(inputs, implementations):
    """``inputs`` is a sequence of ``(scenario, value)`` pairs."""
    for s, x in inputs:
        verdicts = {impl.id: impl.fn(x) for impl in implementations}
        if len(set(verdicts.values())) > 1:
            raise VerdictMismatch(f'implementations disagree on {s.id} (n={s.n}): {verdicts}')


def run_benchmark(scenarios, implementations=IMPLEMENTATIONS, reps=DEFAULT_REPS,
                  warmup=DEFAULT_WARMUP, clock=time.perf_counter_ns):
    """Time every implementation on every scenario.

    Inputs are built once, outside the timed region. Warmup runs are not
    recorded. Raises :class:`VerdictMismatch` before timing anything if
    the implementations disagree on some input.
    """
    if reps < 1:
        raise UsageError('reps must be at least 1')
    if warmup < 0:
        raise UsageError('warmup must not be negative')
    inputs = [(s, s.build()) for s in scenarios]
    verify_agreement(inputs, implementations)
    records = []
    sink = 0
    for s, x in inputs:
        for impl in implementations:
            fn = impl.fn
            for _ in range(warmup):
                sink ^= fn(x)
            for rep in range(1, reps + 1):
                start = clock()
                verdict = fn(x)
                elapsed = clock() - start
                sink ^= verdict
                # coarse clocks can report zero for sub-tick calls
                records.append(TimingRecord(s.id, impl.id, rep, max(elapsed, 1), s.n))
    return records


def summarize(records):
    """Order statistics per (scenario, implementation), in first-seen order."""
    if not records:
        raise ValueError('cannot summarize an empty set of records')
    groups = {}
    for r in records:
        groups.setdefault((r.scenario, r.implementation), []).append(r.elapsed_ns)
    return {
        key: Summary(min(times), statistics.median(times), statistics.fmean(times),
                     max(times), len(times))
        for key, times in groups.items()
    }


def median_of(records, scenario, implementation):
    times = [r.elapsed_ns for r in records
             if r.scenario == scenario and r.implementation == implementation]
    if not times:
        raise ValueError(f'no records for {scenario}/{implementation}')
    return statistics.median(times)


def write_records_csv(records, fh):
    writer = csv.writer(fh, lineterminator='\n')
    writer.writerow(RECORD_HEADER)
    for r in records:
        writer.writerow((r.scenario, r.implementation, r.replication, r.elapsed_ns))


def _num(v):
    return int(v) if float(v).is_integer() else round(v, 1)


def write_summary_csv(summary, fh):
    writer = csv.writer(fh, lineterminator='\n')
    writer.writerow(SUMMARY_HEADER)
    for (sid, impl), s in summary.items():
        writer.writerow((sid, impl, s.min_ns, _num(s.median_ns), _num(s.mean_ns), s.max_ns))


def format_ns(ns):
    if ns >= 1e6:
        return f'{ns / 1e6:.2f} ms'
    if ns >= 1e3:
        return f'{ns / 1e3:.1f} us'
    return f'{ns:.0f} ns'


def format_summary(summary):
    rows = [('scenario', 'implementation', 'min', 'median', 'mean', 'max')]
    for (sid, impl), s in summary.items():
        rows.append((sid, impl, format_ns(s.min_ns), format_ns(s.median_ns),
                     format_ns(s.mean_ns), format_ns(s.max_ns)))
    widths = [max(len(row[k]) for row in rows) for k in range(len(rows[0]))]
    return '\n'.join('  '.join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
                     for row in rows)
