"""Faceted biographical knowledge-graph engine.

Thin wrapper over the C++ core: an indexed triple store with Turtle and
N-Triples round-tripping, schema extraction and validation, rule-based
materialization, a query engine, and the spreadsheet-to-graph mapper.
"""

import json

from ._rkg import (
    RkgIoError,
    RkgParseError,
    RkgResolveError,
    RkgSchemaError,
    Schema,
    Store,
    __version__,
    apply_rules,
    apply_rules_with_schema,
    check_consistency,
    compute_metrics,
    extract_schema,
    materialize,
    query_json,
    query_table,
    types_of,
    validate,
)


def query(store, text):
    """Evaluate a query and return the results-JSON document as a dict."""
    return json.loads(query_json(store, text))


__all__ = [
    "RkgIoError",
    "RkgParseError",
    "RkgResolveError",
    "RkgSchemaError",
    "Schema",
    "Store",
    "__version__",
    "apply_rules",
    "apply_rules_with_schema",
    "check_consistency",
    "compute_metrics",
    "extract_schema",
    "materialize",
    "query",
    "query_json",
    "query_table",
    "types_of",
    "validate",
]
