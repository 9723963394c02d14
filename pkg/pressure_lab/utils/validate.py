import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import jsonschema
from jsonschema import Draft7Validator
from pydantic import ValidationError as PydanticValidationError

from pressure_lab.errors import ConfigValidationError
from pressure_lab.models import ExperimentConfig

SCHEMA_DIR = Path(__file__).parent.parent / "schema"
EXPERIMENT_SCHEMA_PATH = SCHEMA_DIR / "experiment.schema.json"

with open(EXPERIMENT_SCHEMA_PATH) as f:
    experiment_schema = json.load(f)
    Draft7Validator.check_schema(experiment_schema)
    experiment_validator = Draft7Validator(experiment_schema)


def _format_jsonschema_errors(errors):
    error_details = []
    for error in sorted(errors, key=str):
        error_details.append(
            {
                "loc": list(error.path),
                "msg": error.message,
                "type": error.validator,
            }
        )
    return error_details


def validate_experiment(data: Dict[str, Any]) -> ExperimentConfig:
    errors = list(experiment_validator.iter_errors(data))
    if errors:
        details = _format_jsonschema_errors(errors)
        raise ConfigValidationError(f"config does not match the experiment schema: {details[0]['msg']}", details)
    try:
        return ExperimentConfig(**data)
    except (jsonschema.exceptions.ValidationError, PydanticValidationError) as e:
        raise ConfigValidationError(str(e)) from e


def load_experiment(path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Read and validate a JSON experiment config; unreadable files are validation
    errors too. `overrides` replace top-level keys before validation.
    """
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigValidationError(f"cannot read config {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigValidationError(f"config {path} must hold a JSON object")
    data.update(overrides or {})
    return validate_experiment(data)
