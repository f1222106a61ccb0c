"""Instrumentation for the scan contracts.

:func:`instrumented` swaps a vector's storage for counting wrappers, which
routes checks through the interpreted twin of the compiled scan kernels so
every element inspection is observed. :func:`peak_aux_bytes` measures the
peak extra memory a call needs with :mod:`tracemalloc`.
"""

import dataclasses
import gc
import tracemalloc

import numpy as np

from .values import VECTOR_TAGS, TypeTag


class CountingSequence:
    """Read-only sequence that counts indexed reads."""

    def __init__(self, seq):
        self._seq = seq.tolist() if isinstance(seq, np.ndarray) else list(seq)
        self.reads = 0

    def __len__(self):
        return len(self._seq)

    def __getitem__(self, i):
        self.reads += 1
        return self._seq[i]

    def tolist(self):
        self.reads += len(self._seq)
        return list(self._seq)


@dataclasses.dataclass
class Probe:
    value: object
    mask: CountingSequence
    data: CountingSequence

    @property
    def inspected(self):
        """Elements inspected: every inspection starts by reading the element's flag."""
        return self.mask.reads


def instrumented(value):
    """Return a :class:`Probe` wrapping a copy of ``value`` with counting storage."""
    if value.tag not in VECTOR_TAGS and value.tag is not TypeTag.MATRIX:
        raise TypeError(f'cannot instrument {value.tag}')
    mask = CountingSequence(value.mask)
    data = CountingSequence(value.data)
    probe_value = dataclasses.replace(value, mask=mask, data=data)
    return Probe(probe_value, mask, data)


def peak_aux_bytes(fn, *args, **kwargs):
    """Peak memory traced during ``fn(*args, **kwargs)`` beyond what was live before."""
    fn(*args, **kwargs)
    gc.collect()
    was_enabled = gc.isenabled()
    gc.disable()
    started = not tracemalloc.is_tracing()
    if started:
        tracemalloc.start()
    try:
        tracemalloc.reset_peak()
        before, _ = tracemalloc.get_traced_memory()
        fn(*args, **kwargs)
        _, peak = tracemalloc.get_traced_memory()
    finally:
        if started:
            tracemalloc.stop()
        if was_enabled:
            gc.enable()
    return peak - before
