"""Python access to the cove pipeline.

Structured results are plain dicts; run directories are the same as the CLI writes.
"""
import json

from ._cove import (
    ConfigError,
    CoveError,
    ablation_rows,
    date_delta,
    evaluate,
    fleiss_kappa,
    map_verdict,
    match_key,
    meteor,
    parse_verdict,
    people_prf,
    porter_stem,
    rouge_l,
    run,
)
from . import _cove

__all__ = [
    "ConfigError",
    "CoveError",
    "ablation_rows",
    "config",
    "date_delta",
    "evaluate",
    "fleiss_kappa",
    "map_verdict",
    "match_key",
    "meteor",
    "parse_verdict",
    "people_prf",
    "porter_stem",
    "rouge_l",
    "run",
    "should_trigger",
    "toggles_from_row",
    "veracity_report",
]


def config(text=""):
    """Parsed and validated pipeline configuration (defaults for blank text)."""
    if not isinstance(text, str):
        text = json.dumps(text)
    return json.loads(_cove.config_json(text))


def toggles_from_row(bits):
    return json.loads(_cove.toggles_from_row_json(bits))


def veracity_report(predictions, references):
    return json.loads(_cove.veracity_report_json(list(predictions), list(references)))


def should_trigger(target, context):
    """context maps item names to values; missing or None items are unknown."""
    return _cove.should_trigger_json(target, json.dumps(context))
