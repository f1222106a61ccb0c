"""The dynamically-typed value universe checked by the library.

A :class:`Value` is immutable. Atomic payloads are numpy arrays (strings
are a tuple) paired with a ``uint8`` missingness mask holding one
:class:`MissingKind` code per element, so every atomic type supports
missing elements the same way.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Any, Mapping, Optional

import numpy as np

from .errors import ColumnParseError, UsageError

__all__ = [
    'TypeTag',
    'MissingKind',
    'Value',
    'NA',
    'null',
    'bool_vector',
    'int_vector',
    'float_vector',
    'str_vector',
    'factor',
    'list_value',
    'matrix',
    'frame',
    'as_value',
    'type_of',
    'length_of',
    'parse_column',
    'render_cells',
]


class TypeTag(enum.Enum):
    NULL = 'Null'
    BOOL = 'Bool'
    INT = 'Int'
    FLOAT = 'Float'
    STR = 'Str'
    FACTOR = 'Factor'
    LIST = 'List'
    MATRIX = 'Matrix'
    FRAME = 'Frame'

    def __str__(self):
        return self.value

    def __repr__(self):
        return f'TypeTag.{self.name}'


class MissingKind(enum.IntEnum):
    """Mask codes. ``PRESENT`` is not a missing kind but shares the encoding."""
    PRESENT = 0
    ABSENT = 1
    NAN = 2


ATOMIC_TAGS = frozenset({TypeTag.BOOL, TypeTag.INT, TypeTag.FLOAT, TypeTag.STR})
VECTOR_TAGS = ATOMIC_TAGS | {TypeTag.FACTOR}

_DTYPES = {
    TypeTag.BOOL: np.bool_,
    TypeTag.INT: np.int64,
    TypeTag.FLOAT: np.float64,
    TypeTag.FACTOR: np.int64,
}

_INT64_MIN = -(2 ** 63)
_INT64_MAX = 2 ** 63 - 1


class _Missing:
    """Sentinel accepted by constructors to denote a missing element."""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return 'NA'

    def __bool__(self):
        raise TypeError('NA has no truth value')


NA = _Missing()


@dataclass(frozen=True, eq=False)
class Value:
    """A checked datum.

    Use the module-level constructors rather than instantiating directly;
    they enforce the structural invariants.
    """
    tag: TypeTag
    data: Any = None
    mask: Any = None
    names: Optional[tuple] = None
    levels: Optional[tuple] = None
    items: Optional[tuple] = None
    columns: Optional[tuple] = None
    elem_tag: Optional[TypeTag] = None
    dims: Optional[tuple] = None
    row_names: Optional[tuple] = None
    col_names: Optional[tuple] = None

    def __len__(self):
        return length_of(self)

    @property
    def length(self):
        return length_of(self)

    def is_missing(self, i):
        return self.mask[i] != MissingKind.PRESENT

    def missing_kind(self, i):
        return MissingKind(int(self.mask[i]))

    def column(self, name):
        for key, col in self.columns:
            if key == name:
                return col
        raise KeyError(name)

    @property
    def column_names(self):
        return tuple(key for key, _ in self.columns)

    def to_python(self):
        """Plain Python elements, ``None`` for missing ones."""
        tag = self.tag
        if tag is TypeTag.NULL:
            return None
        if tag is TypeTag.LIST:
            return [item.to_python() for item in self.items]
        if tag is TypeTag.FRAME:
            return {key: col.to_python() for key, col in self.columns}
        mask = _mask_list(self.mask)
        if tag is TypeTag.FACTOR:
            levels = self.levels
            return [None if m else levels[c] for c, m in zip(_as_list(self.data), mask)]
        return [None if m else v for v, m in zip(_as_list(self.data), mask)]

    def _key(self):
        tag = self.tag
        if tag is TypeTag.NULL:
            return (tag,)
        if tag is TypeTag.LIST:
            return (tag, tuple(item._key() for item in self.items), self.names)
        if tag is TypeTag.FRAME:
            return (tag, tuple((k, c._key()) for k, c in self.columns))
        mask = tuple(_mask_list(self.mask))
        values = tuple(None if m else v for v, m in zip(_as_list(self.data), mask))
        return (tag, self.elem_tag, values, mask, self.names, self.levels,
                self.dims, self.row_names, self.col_names)

    def __eq__(self, other):
        if not isinstance(other, Value):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.tag is TypeTag.NULL:
            return 'Value(Null)'
        if self.tag is TypeTag.FRAME:
            cols = ', '.join(f'{k}: {c.tag}' for k, c in self.columns)
            return f'Value(Frame {{{cols}}}, nrow={length_of(self)})'
        if self.tag is TypeTag.MATRIX:
            return f'Value(Matrix {self.elem_tag} {self.dims[0]}x{self.dims[1]})'
        shown = self.to_python()
        if self.tag is TypeTag.LIST:
            return f'Value(List {shown!r})'
        body = ', '.join('NA' if v is None else repr(v) for v in shown[:8])
        if len(shown) > 8:
            body += ', ...'
        return f'Value({self.tag} [{body}])'


def _as_list(seq):
    return seq.tolist() if isinstance(seq, np.ndarray) else list(seq)


def _mask_list(mask):
    return mask.tolist() if isinstance(mask, np.ndarray) else [int(m) for m in mask]


def _frozen(arr):
    arr.flags.writeable = False
    return arr


def _check_names(names, n, what='names'):
    if names is None:
        return None
    names = tuple(None if (nm is None or nm is NA) else nm for nm in names)
    if len(names) != n:
        raise UsageError(f'{what} has length {len(names)}, expected {n}')
    for nm in names:
        if nm is not None and not isinstance(nm, str):
            raise UsageError(f'{what} must be text or missing, got {nm!r}')
    return names


def _is_missing_input(v):
    return v is None or v is NA


def _atomic(tag, elements, names):
    elements = list(elements)
    n = len(elements)
    mask = np.zeros(n, dtype=np.uint8)
    if tag is TypeTag.STR:
        data = []
        for i, v in enumerate(elements):
            if _is_missing_input(v):
                mask[i] = MissingKind.ABSENT
                data.append('')
            elif isinstance(v, str):
                data.append(v)
            else:
                raise UsageError(f'Str element {i + 1} is not text: {v!r}')
        data = tuple(data)
    else:
        data = np.zeros(n, dtype=_DTYPES[tag])
        for i, v in enumerate(elements):
            if _is_missing_input(v):
                mask[i] = MissingKind.ABSENT
                continue
            data[i] = _coerce_element(tag, v, i)
            if tag is TypeTag.FLOAT and math.isnan(data[i]):
                mask[i] = MissingKind.NAN
                data[i] = 0.0
        _frozen(data)
    return Value(tag, data=data, mask=_frozen(mask), names=_check_names(names, n))


def _coerce_element(tag, v, i):
    if tag is TypeTag.BOOL:
        if isinstance(v, (bool, np.bool_)):
            return bool(v)
    elif tag is TypeTag.INT:
        if isinstance(v, (int, np.integer)) and not isinstance(v, (bool, np.bool_)):
            if not _INT64_MIN <= int(v) <= _INT64_MAX:
                raise UsageError(f'Int element {i + 1} overflows 64 bits: {v!r}')
            return int(v)
    elif tag is TypeTag.FLOAT:
        if isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, (bool, np.bool_)):
            return float(v)
    raise UsageError(f'{tag} element {i + 1} has incompatible type: {v!r}')


def null():
    return _NULL


_NULL = Value(TypeTag.NULL)


def bool_vector(elements=(), names=None):
    return _atomic(TypeTag.BOOL, elements, names)


def int_vector(elements=(), names=None):
    return _atomic(TypeTag.INT, elements, names)


def float_vector(elements=(), names=None):
    """Float vector; NaN payloads become missing elements of kind ``NAN``."""
    if isinstance(elements, np.ndarray) and elements.dtype == np.float64 and elements.ndim == 1:
        return _float_from_array(elements, names)
    return _atomic(TypeTag.FLOAT, elements, names)


def _float_from_array(arr, names):
    nan = np.isnan(arr)
    mask = nan.astype(np.uint8) * np.uint8(MissingKind.NAN)
    data = np.where(nan, 0.0, arr)
    return Value(TypeTag.FLOAT, data=_frozen(data), mask=_frozen(mask),
                 names=_check_names(names, len(arr)))


def str_vector(elements=(), names=None):
    return _atomic(TypeTag.STR, elements, names)


def factor(labels=(), levels=None, names=None):
    """Factor from labels. Levels default to the sorted distinct labels."""
    labels = list(labels)
    if levels is None:
        levels = sorted({lb for lb in labels if not _is_missing_input(lb)})
    levels = tuple(levels)
    if len(set(levels)) != len(levels):
        raise UsageError('factor levels must be distinct')
    if not all(isinstance(lv, str) for lv in levels):
        raise UsageError('factor levels must be text')
    index = {lv: k for k, lv in enumerate(levels)}
    n = len(labels)
    codes = np.zeros(n, dtype=np.int64)
    mask = np.zeros(n, dtype=np.uint8)
    for i, lb in enumerate(labels):
        if _is_missing_input(lb):
            mask[i] = MissingKind.ABSENT
        elif lb in index:
            codes[i] = index[lb]
        else:
            raise UsageError(f'factor label {lb!r} is not a level')
    return Value(TypeTag.FACTOR, data=_frozen(codes), mask=_frozen(mask),
                 levels=levels, names=_check_names(names, n))


def list_value(items=(), names=None):
    """List of values. Null entries count as missing."""
    items = tuple(as_value(it) for it in items)
    mask = np.array([it.tag is TypeTag.NULL for it in items], dtype=np.uint8)
    return Value(TypeTag.LIST, items=items, mask=_frozen(mask),
                 names=_check_names(names, len(items)))


def matrix(elements, nrows, ncols, row_names=None, col_names=None):
    """Matrix from a flat atomic vector in column-major order."""
    vec = as_value(elements)
    if vec.tag not in ATOMIC_TAGS:
        raise UsageError(f'matrix elements must be Bool/Int/Float/Str, not {vec.tag}')
    if nrows < 0 or ncols < 0 or nrows * ncols != length_of(vec):
        raise UsageError(
            f'matrix dimensions {nrows}x{ncols} do not match {length_of(vec)} elements')
    return Value(TypeTag.MATRIX, data=vec.data, mask=vec.mask, elem_tag=vec.tag,
                 dims=(int(nrows), int(ncols)),
                 row_names=_check_names(row_names, nrows, 'row names'),
                 col_names=_check_names(col_names, ncols, 'column names'))


def frame(columns):
    """Frame from a mapping (or pair sequence) of column name to vector."""
    pairs = list(columns.items()) if isinstance(columns, Mapping) else list(columns)
    out = []
    seen = set()
    nrow = None
    for name, col in pairs:
        if not isinstance(name, str) or not name:
            raise UsageError(f'frame column names must be non-empty text, got {name!r}')
        if name in seen:
            raise UsageError(f'duplicate frame column {name!r}')
        seen.add(name)
        col = as_value(col)
        if col.tag not in VECTOR_TAGS:
            raise UsageError(f'frame column {name!r} must be an atomic vector, not {col.tag}')
        if nrow is None:
            nrow = length_of(col)
        elif length_of(col) != nrow:
            raise UsageError(
                f'frame column {name!r} has length {length_of(col)}, expected {nrow}')
        out.append((name, col))
    return Value(TypeTag.FRAME, columns=tuple(out))


def as_value(x):
    """Convert plain Python data to a :class:`Value`.

    ``None`` is Null; scalars become length-1 vectors; homogeneous sequences
    (``None``/``NA`` for missing, ints mixed with floats promote to Float)
    become vectors; anything else becomes a List. Dicts become named Lists,
    1-d and 2-d numpy arrays become vectors and matrices.
    """
    if isinstance(x, Value):
        return x
    if x is None:
        return _NULL
    if x is NA:
        return bool_vector([NA])
    if isinstance(x, (bool, np.bool_)):
        return bool_vector([bool(x)])
    if isinstance(x, (int, np.integer)):
        return int_vector([int(x)])
    if isinstance(x, (float, np.floating)):
        return float_vector([float(x)])
    if isinstance(x, str):
        return str_vector([x])
    if isinstance(x, np.ndarray):
        return _from_ndarray(x)
    if isinstance(x, Mapping):
        return list_value(list(x.values()), names=list(x.keys()))
    if isinstance(x, (list, tuple)):
        tag = _infer_sequence_tag(x)
        if tag is None:
            return list_value(x)
        return _atomic(tag, x, None)
    raise UsageError(f'cannot convert {type(x).__name__} to a Value')


def _scalar_tag(v):
    if isinstance(v, (bool, np.bool_)):
        return TypeTag.BOOL
    if isinstance(v, (int, np.integer)):
        return TypeTag.INT
    if isinstance(v, (float, np.floating)):
        return TypeTag.FLOAT
    if isinstance(v, str):
        return TypeTag.STR
    return None


def _infer_sequence_tag(seq):
    if not seq:
        return None
    tags = set()
    for v in seq:
        if _is_missing_input(v):
            continue
        tag = _scalar_tag(v)
        if tag is None:
            return None
        tags.add(tag)
    if not tags:
        return TypeTag.BOOL
    if tags == {TypeTag.INT, TypeTag.FLOAT}:
        return TypeTag.FLOAT
    if len(tags) == 1:
        return tags.pop()
    return None


def _from_ndarray(arr):
    if arr.ndim == 2:
        nrows, ncols = arr.shape
        return matrix(_from_ndarray(arr.ravel(order='F')), nrows, ncols)
    if arr.ndim != 1:
        raise UsageError('only 1-d and 2-d arrays are supported')
    kind = arr.dtype.kind
    if kind == 'b':
        return bool_vector(arr.tolist())
    if kind in 'iu':
        return int_vector(arr.tolist())
    if kind == 'f':
        return float_vector(arr.astype(np.float64, copy=False))
    if kind in 'US':
        return str_vector([str(v) for v in arr.tolist()])
    return as_value(arr.tolist())


def type_of(x):
    return x.tag


def length_of(x):
    tag = x.tag
    if tag is TypeTag.NULL:
        return 0
    if tag is TypeTag.FRAME:
        return length_of(x.columns[0][1]) if x.columns else 0
    return len(x.mask)


# -- text ingestion ---------------------------------------------------------

_BOOL_TEXT = {'true': True, 'false': False}
_INT_RE = re.compile(r'[+-]?[0-9]+')
_FLOAT_RE = re.compile(
    r'[+-]?(?:[0-9]+\.?[0-9]*(?:[eE][+-]?[0-9]+)?|\.[0-9]+(?:[eE][+-]?[0-9]+)?'
    r'|[iI][nN][fF](?:[iI][nN][iI][tT][yY])?|[nN][aA][nN])')

_INFERENCE_ORDER = (TypeTag.BOOL, TypeTag.INT, TypeTag.FLOAT, TypeTag.STR)


def _parse_cell(tag, text):
    """Parse one non-missing cell, returning ``(ok, value)``."""
    if tag is TypeTag.STR:
        return True, text
    if tag is TypeTag.BOOL:
        v = _BOOL_TEXT.get(text.lower())
        return v is not None, v
    if tag is TypeTag.INT:
        if _INT_RE.fullmatch(text):
            v = int(text)
            return _INT64_MIN <= v <= _INT64_MAX, v
        return False, None
    if _FLOAT_RE.fullmatch(text):
        return True, float(text)
    return False, None


def _is_missing_cell(text, quoted):
    return not quoted and (text == '' or text == 'NA')


def parse_column(cells, hint=None, *, quoted=None):
    """Build a vector from text cells.

    Empty cells and the literal ``NA`` are missing unless flagged in
    ``quoted``. Without a hint the narrowest tag among Bool, Int, Float,
    Str that parses every present cell is chosen.
    """
    cells = list(cells)
    if quoted is None:
        quoted = [False] * len(cells)
    elif len(quoted) != len(cells):
        raise UsageError('quoted flags must match cells')
    if hint is not None and hint not in _INFERENCE_ORDER:
        raise UsageError(f'column hint must be Bool, Int, Float or Str, not {hint}')
    present = [i for i, (c, q) in enumerate(zip(cells, quoted)) if not _is_missing_cell(c, q)]
    if hint is None:
        for tag in _INFERENCE_ORDER:
            if all(_parse_cell(tag, cells[i])[0] for i in present):
                hint = tag
                break
    elements = [NA] * len(cells)
    for i in present:
        ok, v = _parse_cell(hint, cells[i])
        if not ok:
            raise ColumnParseError(i + 1, cells[i], hint)
        elements[i] = v
    return _atomic(hint, elements, None)


def render_cells(x):
    """Text cells for a vector, inverse of :func:`parse_column`."""
    if x.tag not in ATOMIC_TAGS:
        raise UsageError(f'cannot render {x.tag} as cells')
    out = []
    data = _as_list(x.data)
    for v, m in zip(data, _mask_list(x.mask)):
        if m == MissingKind.NAN:
            out.append('NaN')
        elif m:
            out.append('NA')
        elif x.tag is TypeTag.BOOL:
            out.append('true' if v else 'false')
        elif x.tag is TypeTag.FLOAT:
            out.append(repr(v))
        else:
            out.append(str(v))
    return out
