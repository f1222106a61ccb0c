"""Fail-fast argument and data validation.

Every check comes in four forms: ``check_*`` returns ``True`` or a
message, ``test_*`` returns a bool, ``assert_*`` raises
:class:`ValidationError` or hands the input back, and ``expect_*`` sends
a record to a reporter. ``qcheck``/``qtest``/``qassert``/``qexpect`` do the
same for compact rule strings such as ``"N+[0,]"``.

Where names overlap, the top level exposes the convenience checks from
:mod:`vetgate.api`; the engine functions that take a VectorSpec or FrameSpec live in
:mod:`vetgate.engine`.
"""

from . import api, engine  # noqa: F401
from .engine import *  # noqa: F401,F403
from .api import *  # noqa: F401,F403
from .dsl import (  # noqa: F401
    ClassCode,
    LengthCode,
    Rule,
    compile_rule,
    eval_rule,
    parse_rule,
    qassert,
    qcheck,
    qexpect,
    qtest,
    render_rule,
    rule_to_spec,
)
from .errors import (  # noqa: F401
    ColumnParseError,
    RuleParseError,
    UsageError,
    ValidationError,
    VerdictMismatch,
    VetgateError,
)
from .schema import Schema, ValidationReport, load_schema, parse_schema  # noqa: F401
from .values import *  # noqa: F401,F403

__version__ = '0.1.0'
