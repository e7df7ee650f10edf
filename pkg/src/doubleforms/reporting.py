"""Input parsing, report assembly and deterministic JSON emission."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import multiindex as mi
from .algebra import DEFAULT_TOL, CurvatureStructure, DoubleForm, bianchi_residual
from .errors import ConfigError, DimensionExceeded, DoubleFormError, ParseError, SymmetryConflict
from .invariants import invariant_report
from .models import ModelSpec
from .positivity import DEFAULT_SAMPLES, condition_A_check, h4_sign, isotropic_check, min_p_curvature
from .suites import SuiteConfig, run_suite

# entries closer than this (relative) count as the same value under the symmetries
_CONFLICT_TOL = 1e-12


@dataclass(frozen=True)
class RunConfig:
    command: str = "invariants"
    input: str | None = None
    model: dict | None = None
    q_max: int | None = None
    p: tuple[int, ...] = (1,)
    tol: float = DEFAULT_TOL
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    out: str | None = None
    suite: str = "all"

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(int(x) for x in self.p))
        if not (isinstance(self.tol, (int, float)) and math.isfinite(self.tol) and self.tol >= 0):
            raise ConfigError(f"tolerance must be a finite non-negative number, got {self.tol!r}")
        if self.command != "check" and self.tol == 0:
            raise ConfigError("reports need a positive tolerance")
        if self.samples < 1:
            raise ConfigError("sample count must be positive")
        if self.q_max is not None and self.q_max < 1:
            raise ConfigError("q_max must be at least 1")

    def echo(self) -> dict:
        """Everything that determines the report; the output path does not."""
        out = {"command": self.command}
        if self.command == "check":
            out.update(suite=self.suite, tol=float(self.tol), samples=self.samples, seed=self.seed)
            return out
        out.update(input=self.input, model=self.model, q_max=self.q_max, p=list(self.p),
                   tol=float(self.tol), samples=self.samples, seed=self.seed)
        return out


# ---------------------------------------------------------------------------
# input


def _load(document) -> dict:
    if isinstance(document, (bytes, bytearray)):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON: {exc}") from None
    if not isinstance(document, dict):
        raise ParseError("the input document must be a JSON object")
    return document


def _int_field(obj: dict, key: str) -> int:
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        if isinstance(v, float) and v.is_integer():
            return int(v)
        raise ParseError(f"field {key!r} must be an integer, got {v!r}")
    return v


def _expand_entries(n: int, entries) -> np.ndarray:
    """Place each R(i,j,k,l) on its canonical basis pair, checking the symmetries."""
    if not isinstance(entries, list):
        raise ParseError("'entries' must be a list")
    rank = mi.rank_map(n, 2)
    seen: dict[tuple[int, int], tuple[float, dict]] = {}
    for e in entries:
        if not isinstance(e, dict):
            raise ParseError(f"entry {e!r} is not an object")
        i, j, k, l = (_int_field(e, key) for key in "ijkl")
        for x in (i, j, k, l):
            if not 1 <= x <= n:
                raise ParseError(f"index {x} in entry {e} is outside 1..{n}")
        v = e.get("value")
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ParseError(f"entry {e} needs a finite numeric 'value'")
        v = float(v)
        if i == j or k == l:
            if v != 0.0:
                raise SymmetryConflict(f"entry {e} must vanish by antisymmetry")
            continue
        sign = (1 if i < j else -1) * (1 if k < l else -1)
        a = rank[(min(i, j) - 1, max(i, j) - 1)]
        b = rank[(min(k, l) - 1, max(k, l) - 1)]
        key = (min(a, b), max(a, b))
        val = sign * v
        if key in seen:
            old, first = seen[key]
            if abs(old - val) > _CONFLICT_TOL * max(1.0, abs(old), abs(val)):
                raise SymmetryConflict(f"entries {first} and {e} disagree under the curvature symmetries")
            continue
        seen[key] = (val, e)
    out = np.zeros((mi.dim(n, 2), mi.dim(n, 2)))
    for (a, b), (val, _) in seen.items():
        out[a, b] = out[b, a] = val
    return out


def parse_input(document) -> CurvatureStructure:
    """A (2, 2) curvature structure from a model spec or an entry list.

    Entry lists are not required to satisfy the first Bianchi identity;
    the returned structure then has ``bianchi_certified`` unset.
    """
    doc = _load(document)
    if "model" in doc:
        return ModelSpec.from_dict(doc).build()
    if "n" not in doc or "entries" not in doc:
        raise ParseError("expected either a 'model' spec or 'n' with 'entries'")
    n = _int_field(doc, "n")
    if n > mi.MAX_DIM:
        raise DimensionExceeded(f"dimension {n} exceeds the cap {mi.MAX_DIM}")
    if n < 2:
        raise ParseError(f"curvature tensors need n >= 2, got {n}")
    return CurvatureStructure.certify(DoubleForm(n, 2, 2, _expand_entries(n, doc["entries"])))


# ---------------------------------------------------------------------------
# reports


def _verdict_dict(v) -> dict:
    return {"holds": bool(v.holds), "residual": v.residual, "tol": v.tol, "margin": v.margin,
            "details": {k: v.details[k] for k in sorted(v.details)}}


def run_report(R: CurvatureStructure, config: RunConfig, positivity: bool = False) -> dict:
    """The report document; positivity checks run when ``positivity`` is set."""
    n = R.n
    warnings = []
    residual = bianchi_residual(R)
    work = R
    if not R.bianchi_certified:
        warnings.append(f"input violates the first Bianchi identity (residual {residual:.3e}); "
                        "invariants are computed formally and classifications may be meaningless")
        work = CurvatureStructure(R.form, bianchi_certified=True)
    q_max = config.q_max if config.q_max is not None else n // 2
    if not 1 <= q_max <= n // 2:
        raise ConfigError(f"q_max={q_max} outside 1..{n // 2} for n={n}")
    rep = invariant_report(work, q_max=q_max, p_list=config.p, tol=config.tol)
    pos: dict = {}
    if n >= 4:
        pos["h4_sign"] = h4_sign(work, config.tol)
    if positivity:
        for p in config.p:
            if 0 <= p <= n - 2:
                pos[f"p_curvature(p={p})"] = min_p_curvature(work, p, config.samples, config.seed, config.tol).to_dict()
        if n >= 4:
            pos["isotropic"] = isotropic_check(work, config.samples, config.seed, config.tol).to_dict()
        if n >= 3:
            pos["condition_A"] = condition_A_check(work, config.samples, config.seed, config.tol).to_dict()
    return {
        "n": n,
        "bianchi_residual": residual,
        "h": {str(k): v for k, v in rep.h.items()},
        "h_dual_residual": rep.h_dual_residual,
        "lovelock": {str(k): {"min_eig": lo, "max_eig": hi} for k, (lo, hi) in rep.lovelock.items()},
        "avez_residual": rep.avez_residual,
        "classifiers": {name: _verdict_dict(v) for name, v in rep.classifiers.items()},
        "positivity": pos,
        "passed": rep.passed,
        "warnings": warnings,
        "config_echo": config.echo(),
    }


def run_check(config: RunConfig) -> dict:
    results = run_suite(config.suite, SuiteConfig(seed=config.seed, tol=config.tol, samples=config.samples))
    return {
        "suite": config.suite,
        "properties": [r.to_dict() for r in results],
        "passed": all(r.passed for r in results),
        "config_echo": config.echo(),
    }


def error_document(exc: Exception) -> dict:
    kind = type(exc).__name__ if isinstance(exc, DoubleFormError) else "InternalError"
    return {"error": {"type": kind, "message": str(exc)}}


# ---------------------------------------------------------------------------
# serialization


def _number(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    return text if any(c in text for c in ".en") else text + ".0"


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _number(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


_NUM = {"type": ["number", "null"]}
_VERDICT = {
    "type": "object",
    "required": ["holds", "residual", "tol", "margin", "details"],
    "properties": {"holds": {"type": "boolean"}, "residual": _NUM, "tol": _NUM, "margin": _NUM,
                   "details": {"type": "object"}},
}
_POSITIVITY_ENTRY = {
    "type": "object",
    "required": ["condition", "samples", "min_margin", "witness_frame", "verdict"],
    "properties": {
        "condition": {"type": "string"},
        "samples": {"type": "integer", "minimum": 1},
        "min_margin": _NUM,
        "witness_frame": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "verdict": {"enum": ["positive", "nonnegative", "indefinite"]},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["n", "bianchi_residual", "h", "h_dual_residual", "lovelock", "avez_residual",
                 "classifiers", "positivity", "passed", "warnings", "config_echo"],
    "additionalProperties": False,
    "properties": {
        "n": {"type": "integer", "minimum": 2, "maximum": mi.MAX_DIM},
        "bianchi_residual": _NUM,
        "h": {"type": "object", "patternProperties": {"^[0-9]+$": _NUM}, "additionalProperties": False},
        "h_dual_residual": _NUM,
        "lovelock": {
            "type": "object",
            "patternProperties": {"^[0-9]+$": {
                "type": "object", "required": ["min_eig", "max_eig"],
                "properties": {"min_eig": _NUM, "max_eig": _NUM}}},
            "additionalProperties": False,
        },
        "avez_residual": _NUM,
        "classifiers": {"type": "object", "additionalProperties": _VERDICT},
        "positivity": {
            "type": "object",
            "properties": {"h4_sign": {"enum": ["positive", "zero", "negative"]}},
            "additionalProperties": _POSITIVITY_ENTRY,
        },
        "passed": {"type": "boolean"},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "config_echo": {"type": "object"},
    },
}

CHECK_SCHEMA = {
    "type": "object",
    "required": ["suite", "properties", "passed", "config_echo"],
    "additionalProperties": False,
    "properties": {
        "suite": {"type": "string"},
        "properties": {"type": "array", "items": {
            "type": "object",
            "required": ["suite", "name", "worst_residual", "trials", "passed"],
            "properties": {"suite": {"type": "string"}, "name": {"type": "string"},
                           "worst_residual": _NUM, "trials": {"type": "integer"},
                           "passed": {"type": "boolean"}},
        }},
        "passed": {"type": "boolean"},
        "config_echo": {"type": "object"},
    },
}
