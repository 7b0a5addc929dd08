"""Deterministic scoring for symbolic music notation (ABC staff, Jianpu, ASCII tab)."""
import json
from fractions import Fraction

from . import _notegrade
from ._notegrade import (
    ConfigError,
    ConversionError,
    DomainError,
    Error,
    IntegrityError,
    ParseError,
    SchemaError,
    edit_distance,
    jianpu_to_midi,
    midi_to_scientific,
    scientific_to_midi,
    tab_to_midi,
)

__version__ = _notegrade.__version__

__all__ = [
    "ConfigError", "ConversionError", "DomainError", "Error", "IntegrityError", "ParseError", "SchemaError",
    "alignment_accuracy", "batch", "edit_distance", "jianpu_to_midi", "midi_to_scientific", "project",
    "scientific_to_midi", "score", "tab_to_midi", "validate",
]


def _config(config):
    return "" if config is None else json.dumps(config)


def alignment_accuracy(gt, pred):
    """Returns (accuracy as Fraction, edit distance)."""
    value, ed = _notegrade.alignment_accuracy(list(gt), list(pred))
    return Fraction(value), ed


def validate(text, format):
    return json.loads(_notegrade.validate(text, format))


def project(text, format):
    """format is "staff", "jianpu", "tab" or "gt" (ground-truth JSON text)."""
    return json.loads(_notegrade.project(text, format))


def score(task, format, pred, gt=None, answer="", key="", meter="", config=None):
    """Scores one prediction. `gt` is a ground-truth dict or JSON string (CNC, AST)."""
    gt_json = gt if isinstance(gt, str) or gt is None else json.dumps(gt)
    return json.loads(_notegrade.score(task, format, pred, gt_json or "", answer, key, meter, _config(config)))


def batch(manifest_path, workers=0, config=None, external_scores=None):
    return json.loads(_notegrade.batch(str(manifest_path), workers, _config(config),
                                       "" if external_scores is None else str(external_scores)))
