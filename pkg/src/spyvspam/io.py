"""Instance configs and result documents.

Configs and results are JSON; plot tables are CSV. Floats are written with
Python's shortest round-trip representation, so reading a document back
reproduces every double exactly.

Config fields::

    N, p, c_d, c_a, c_fa      game constants (required)
    epsilon                   positivity shift (optional, defaults to c_a)
    spammer                   {"theta0": x} for binomial, or {"pmf": [...]}
    verify_tol                equilibrium check tolerance (optional)
    trials, seed              simulation defaults (optional)
"""

from __future__ import annotations

import copy
import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import jsonschema
import numpy as np

from .errors import ValidationError
from .game import GameParams, SpammerModel, build_spammer_binomial
from .solver import EquilibriumResult

_positive = {"type": "number", "exclusiveMinimum": 0}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["N", "p", "c_d", "c_a", "c_fa", "spammer"],
    "properties": {
        "N": {"type": "integer", "minimum": 1},
        "p": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "c_d": _positive,
        "c_a": _positive,
        "c_fa": _positive,
        "epsilon": _positive,
        "spammer": {
            "oneOf": [
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["theta0"],
                    "properties": {
                        "theta0": {"type": "number", "exclusiveMinimum": 0,
                                   "exclusiveMaximum": 1},
                    },
                },
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["pmf"],
                    "properties": {
                        "pmf": {"type": "array", "minItems": 2,
                                "items": {"type": "number", "exclusiveMinimum": 0}},
                    },
                },
            ]
        },
        "verify_tol": _positive,
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2 ** 64 - 1},
    },
}


@dataclass(frozen=True)
class InstanceConfig:
    params: GameParams
    model: SpammerModel
    raw: dict
    verify_tol: float = 1e-6
    trials: int = 1_000_000
    seed: int = 0


def _field_path(error: jsonschema.ValidationError) -> str:
    path = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in error.absolute_path)
    return "config" + path


def parse_config(data: dict) -> InstanceConfig:
    """Validate a config mapping and build the game objects it describes."""
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ValidationError(f"{_field_path(err)}: {err.message}")
    params = GameParams(N=data["N"], p=data["p"], c_d=data["c_d"], c_a=data["c_a"],
                        c_fa=data["c_fa"], epsilon=data.get("epsilon"))
    spam = data["spammer"]
    if "theta0" in spam:
        model = build_spammer_binomial(params.N, spam["theta0"])
    else:
        if len(spam["pmf"]) != params.N + 1:
            raise ValidationError(
                f"config.spammer.pmf: length {len(spam['pmf'])}, expected N+1 = {params.N + 1}"
            )
        model = SpammerModel(np.array(spam["pmf"], dtype=float), source="user pmf")
    return InstanceConfig(
        params=params,
        model=model,
        raw=copy.deepcopy(data),
        verify_tol=data.get("verify_tol", 1e-6),
        trials=data.get("trials", 1_000_000),
        seed=data.get("seed", 0),
    )


def load_config(path: Union[str, Path]) -> InstanceConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(data)


def _floats(x) -> list:
    return [float(v) for v in np.asarray(x, dtype=float)]


def params_dict(params: GameParams) -> dict:
    return {"N": params.N, "p": params.p, "c_d": params.c_d, "c_a": params.c_a,
            "c_fa": params.c_fa, "epsilon": params.epsilon}


def result_document(config: InstanceConfig, result: EquilibriumResult) -> dict:
    return {
        "params": params_dict(config.params),
        "spammer": {"source": config.model.source, "pmf": _floats(config.model.pmf)},
        "form": result.form,
        "s": int(result.s),
        "unique": bool(result.unique),
        "theta_hat": float(result.theta_hat),
        "theta_hat_shifted": float(result.theta_hat_shifted),
        "delta": float(result.delta),
        "alpha": _floats(result.alpha),
        "beta": _floats(result.beta),
        "ties": [{"form": f, "s": int(s), "theta_shifted": float(t)} for f, s, t in result.ties],
        "candidates": [{"form": f, "s": int(s), "theta_shifted": float(t)}
                       for f, s, t in result.candidates],
        "verification": result.verification.as_dict(),
        "indifference_residual": float(result.indifference_residual),
        "fallback": result.fallback,
        "notes": list(result.notes),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=True) + "\n"


def strategy_csv(result: EquilibriumResult, model: SpammerModel) -> str:
    """One row per index ``0..N+1``: index, alpha, beta, spammer_pmf."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "alpha", "beta", "spammer_pmf"])
    N = model.N
    for k in range(N + 2):
        a = repr(float(result.alpha[k])) if k <= N else ""
        pm = repr(float(model.pmf[k])) if k <= N else ""
        writer.writerow([k, a, repr(float(result.beta[k])), pm])
    return buf.getvalue()


def read_vector(path: Union[str, Path], key: Optional[str] = None) -> np.ndarray:
    """Read a strategy vector.

    Accepts a JSON array, a JSON object holding the vector under ``key``
    (so a result document can be passed as is), or plain numbers separated
    by whitespace or commas.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        try:
            return np.array([float(tok) for tok in text.replace(",", " ").split()])
        except ValueError as exc:
            raise ValidationError(f"{path}: cannot parse numbers: {exc}") from exc
    if isinstance(data, dict):
        if key is None or key not in data:
            raise ValidationError(f"{path}: JSON object has no {key!r} field")
        data = data[key]
    if not isinstance(data, list) or not all(isinstance(v, (int, float)) and
                                             not isinstance(v, bool) for v in data):
        raise ValidationError(f"{path}: expected a list of numbers")
    return np.array(data, dtype=float)
