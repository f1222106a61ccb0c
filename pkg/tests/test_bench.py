import io
import math

import numpy as np
import pytest

import vetgate as vg
from vetgate import bench
from vetgate.errors import UsageError, VerdictMismatch


def test_scenarios():
    built = {s.id: s.build() for s in bench.scenarios(50)}
    assert built['S1_wrong_type'].tag is vg.TypeTag.STR
    assert vg.length_of(built['S2_scalar_ok']) == 1
    s3 = built['S3_long_ok']
    assert vg.length_of(s3) == 50 and np.all(np.asarray(s3.data) > 0)
    s4 = built['S4_long_na_first']
    assert s4.mask[0] != 0 and not np.any(np.asarray(s4.mask[1:]))


def test_resolve_short_ids():
    assert bench.resolve_scenario_id('S4') == 'S4_long_na_first'
    assert bench.resolve_scenario_id('S2_scalar_ok') == 'S2_scalar_ok'
    with pytest.raises(UsageError):
        bench.resolve_scenario_id('S9')


def test_naive_two_pass():
    assert bench.naive_two_pass(vg.float_vector([1.0, 2.0]))
    assert not bench.naive_two_pass(vg.float_vector([-1.0]))
    assert not bench.naive_two_pass(vg.float_vector([1.0, None]))
    assert not bench.naive_two_pass(vg.str_vector(['a']))


def test_implementations_agree_on_corpus():
    corpus = [vg.float_vector(v) for v in ([], [0.0], [1.0, None], [math.nan], [-0.5, 2.0],
                                          [math.inf], [0.0, 3.0])]
    corpus += [vg.int_vector([1, -1]), vg.str_vector(['a']), vg.bool_vector([True])]
    for x in corpus:
        verdicts = {impl.id: impl.fn(x) for impl in bench.IMPLEMENTATIONS}
        assert len(set(verdicts.values())) == 1, (x, verdicts)


def test_run_benchmark_cardinality():
    records = bench.run_benchmark(bench.scenarios(100), reps=5, warmup=2)
    assert len(records) == 4 * 3 * 5
    assert all(r.elapsed_ns > 0 for r in records)
    assert {r.replication for r in records} == {1, 2, 3, 4, 5}


def test_disagreement_aborts():
    bad = bench.Implementation('always_true', lambda x: True)
    with pytest.raises(VerdictMismatch):
        bench.run_benchmark(bench.scenarios(10), bench.IMPLEMENTATIONS + (bad,), reps=1)


def test_bad_reps():
    with pytest.raises(UsageError):
        bench.run_benchmark(bench.scenarios(10), reps=0)


def _records(times):
    return [bench.TimingRecord('S', 'i', k + 1, t) for k, t in enumerate(times)]


def test_summarize_order_statistics():
    s = bench.summarize(_records([3, 1, 2]))[('S', 'i')]
    assert (s.min_ns, s.median_ns, s.max_ns) == (1, 2, 3)
    assert bench.summarize(_records([1, 2, 3, 4]))[('S', 'i')].median_ns == 2.5
    one = bench.summarize(_records([7]))[('S', 'i')]
    assert one.min_ns == one.median_ns == one.max_ns == 7
    with pytest.raises(ValueError):
        bench.summarize([])


def test_csv_outputs():
    records = _records([1, 2, 4])
    out = io.StringIO()
    bench.write_records_csv(records, out)
    assert out.getvalue().splitlines()[0] == 'scenario,implementation,replication,elapsed_ns'
    assert out.getvalue().splitlines()[1] == 'S,i,1,1'
    out = io.StringIO()
    bench.write_summary_csv(bench.summarize(records), out)
    assert out.getvalue() == ('scenario,implementation,min_ns,median_ns,mean_ns,max_ns\n'
                              'S,i,1,2,2.3,4\n')


@pytest.mark.slow
def test_s3_scales_linearly():
    spec = [bench.Implementation('engine_structured', bench.engine_structured)]
    n = 400_000
    recs = bench.run_benchmark([bench.Scenario('S3_long_ok', n),
                                bench.Scenario('S3_long_ok', 2 * n)], spec, reps=30)
    small = np.median([r.elapsed_ns for r in recs if r.n == n])
    large = np.median([r.elapsed_ns for r in recs if r.n == 2 * n])
    assert 1.5 <= large / small <= 3.0


def test_s1_overhead_small():
    recs = bench.run_benchmark([bench.Scenario('S1_wrong_type', 1)], reps=200, warmup=20)
    medians = {impl.id: bench.median_of(recs, 'S1_wrong_type', impl.id)
               for impl in bench.IMPLEMENTATIONS}
    assert medians['engine_structured'] <= 20 * min(medians.values())
