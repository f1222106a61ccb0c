"""Random rules and values shared by the DSL tests and the acceptance suite."""

import math

import vetgate as vg

LETTERS = 'binsdflavx0'
RANGE_LETTERS = 'indx'
ENDPOINTS = ['-Inf', '-2.5e-1', '-1', '0', '.5', '0.5', '1', '1e0', '2.', 'Inf']


def _endpoint_value(text):
    return float(text.replace('Inf', 'inf'))


def random_rule(rng):
    letter = rng.choice(LETTERS)
    if letter != '0' and rng.random() < 0.5:
        letter = letter.upper()
    rule = letter
    r = rng.random()
    if r < 0.15:
        rule += '?'
    elif r < 0.3:
        rule += '+'
    elif r < 0.6:
        rule += rng.choice(['', '==', '<', '<=', '>', '>=']) + str(rng.randint(0, 4))
    if letter.lower() in RANGE_LETTERS and rng.random() < 0.6:
        lo = rng.choice(ENDPOINTS + [''] * 3)
        hi = rng.choice(ENDPOINTS + [''] * 3)
        if lo and hi and _endpoint_value(lo) > _endpoint_value(hi):
            lo, hi = hi, lo
        rule += rng.choice('[(') + lo + ',' + hi + rng.choice('])')
    return rule


FLOAT_POOL = [None, math.nan, -1.0, 0.0, 0.5, 1.0, math.inf, -math.inf, 2.0]
INT_POOL = [None, -1, 0, 1, 3]
BOOL_POOL = [None, True, False]
STR_POOL = [None, 'a', 'b', '']


def random_value(rng, max_len=5):
    kind = rng.random()
    n = rng.randint(0, max_len)
    if kind < 0.4:
        return vg.float_vector([rng.choice(FLOAT_POOL) for _ in range(n)])
    if kind < 0.6:
        return vg.int_vector([rng.choice(INT_POOL) for _ in range(n)])
    if kind < 0.72:
        return vg.bool_vector([rng.choice(BOOL_POOL) for _ in range(n)])
    if kind < 0.82:
        return vg.str_vector([rng.choice(STR_POOL) for _ in range(n)])
    if kind < 0.88:
        return vg.factor([rng.choice(['a', 'b', None]) for _ in range(n)], levels=['a', 'b'])
    if kind < 0.95:
        return vg.list_value([rng.choice([None, 1, 'a', 2.5]) for _ in range(n)])
    return vg.null()
