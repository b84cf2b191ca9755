"""Indeterminate moment problems driven by a Jacobi matrix."""

import json as _json

from ._core import (
    ConfigError,
    DiscreteMeasure,
    Error,
    JacobiModel,
    NevanlinnaValue,
    NumericError,
    Precision,
    Settings,
    eval_pq,
    find_zeros,
    geometric,
    lemma32_finite,
    load_model,
    measure,
    measure_from_json,
    nevanlinna,
    nevanlinna_determinant,
    nevanlinna_partial,
    parse_model_csv,
    sequence,
    stieltjes_residual,
    verify,
)
from ._core import density as _density


def density(model, kind="P", v0=0.0, m_max=40, targets=("e0", "e1", "e5", "pv0"), window=None,
            settings=None):
    """Projection residual report for the P, Q or M family, as a dict."""
    text = _density(model, kind, v0, m_max, list(targets), window, settings or Settings())
    return _json.loads(text)


__all__ = [
    "ConfigError", "DiscreteMeasure", "Error", "JacobiModel", "NevanlinnaValue", "NumericError",
    "Precision", "Settings", "density", "eval_pq", "find_zeros", "geometric", "lemma32_finite",
    "load_model", "measure", "measure_from_json", "nevanlinna", "nevanlinna_determinant",
    "nevanlinna_partial", "parse_model_csv", "sequence", "stieltjes_residual", "verify",
]
