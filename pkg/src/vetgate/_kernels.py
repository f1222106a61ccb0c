"""Element scans shared by the structured engine and the rule DSL.

Each scan walks the elements once, stops at the first violation and
allocates nothing proportional to the input. On numpy storage the
compiled version runs; any other indexable storage (for instance the
counting wrappers in :mod:`vetgate.instrument`) runs the identical Python
source through ``py_func``.
"""

import numpy as np
from numba import njit

OK = 0
MISSING = 1
MISSING_NAN = 2
BELOW = 3
ABOVE = 4
NOT_INTEGERISH = 5

# doubles in this open range round to a representable int64
_INT64_LIMIT = 9.223372036854775e18


@njit(cache=True, nogil=True)
def scan_numeric(data, mask, missing_ok, lower, lower_strict, upper, upper_strict,
                 integerish, tol):
    """Return ``(status, index, seen_present)``; index is 0-based."""
    seen_present = False
    n = len(mask)
    for i in range(n):
        m = mask[i]
        if m != 0:
            if not missing_ok:
                return (MISSING if m == 1 else MISSING_NAN), i, seen_present
            continue
        seen_present = True
        v = data[i]
        if integerish:
            if not abs(v) < _INT64_LIMIT:
                return NOT_INTEGERISH, i, seen_present
            if not abs(v - round(v)) < tol:
                return NOT_INTEGERISH, i, seen_present
        if lower_strict:
            if not v > lower:
                return BELOW, i, seen_present
        elif not v >= lower:
            return BELOW, i, seen_present
        if upper_strict:
            if not v < upper:
                return ABOVE, i, seen_present
        elif not v <= upper:
            return ABOVE, i, seen_present
    return OK, n, seen_present


@njit(cache=True, nogil=True)
def scan_mask(mask, missing_ok, need_present):
    """Missingness-only scan.

    With ``missing_ok`` false, stops at the first missing element. With
    ``need_present`` true, stops at the first present one.
    """
    n = len(mask)
    for i in range(n):
        m = mask[i]
        if m != 0:
            if not missing_ok:
                return (MISSING if m == 1 else MISSING_NAN), i, False
        elif need_present:
            return OK, n, True
    return OK, n, False


def numeric(data, mask, *args):
    if isinstance(mask, np.ndarray) and isinstance(data, np.ndarray):
        if data.dtype == np.bool_:
            data = data.view(np.uint8)
        return scan_numeric(data, mask, *args)
    return scan_numeric.py_func(data, mask, *args)


def missing(mask, missing_ok, need_present):
    if isinstance(mask, np.ndarray):
        return scan_mask(mask, missing_ok, need_present)
    return scan_mask.py_func(mask, missing_ok, need_present)
