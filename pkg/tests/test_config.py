import json
from pathlib import Path

import pytest

from pressure_lab.errors import ConfigValidationError
from pressure_lab.models import Budgets, SftModel
from pressure_lab.systems.maps import LinearTorusMap, StandardMap
from pressure_lab.systems.potentials import GeometricPotential
from pressure_lab.utils.validate import experiment_schema, load_experiment, validate_experiment

FIXTURE_DIR = Path(__file__).parent / "fixtures"
TEMPLATE_DIR = Path(__file__).parent.parent / "templates"


def load_fixture(name: str):
    with open(FIXTURE_DIR / name) as f:
        return json.load(f)


def test_validate_catmap_config():
    config = validate_experiment(load_fixture("catmap_phi0.json"))
    assert config.command == "pressure"
    assert isinstance(config.system, LinearTorusMap)
    assert config.budgets.methods == ["periodic"]
    assert config.seed == 0


def test_validate_standard_map_config():
    config = validate_experiment(load_fixture("standard_map_k1.json"))
    assert isinstance(config.system, StandardMap)
    assert config.system.K == 1.0
    assert isinstance(config.potential, GeometricPotential)
    assert config.budgets.t_grid == [0.0, 0.5, 1.0, 2.0, 3.0]


def test_validate_sft_config():
    config = validate_experiment(load_fixture("golden_mean_sft.json"))
    assert isinstance(config.system, SftModel)
    # unset budgets fall back to their defaults
    assert config.budgets.max_period == Budgets().max_period


@pytest.mark.parametrize("name", ["invalid_budget_1.json", "missing_seed_1.json"])
def test_schema_errors_are_reported(name):
    with pytest.raises(ConfigValidationError) as exc_info:
        validate_experiment(load_fixture(name))
    assert exc_info.value.errors
    assert all({"loc", "msg", "type"} <= set(e) for e in exc_info.value.errors)


def test_non_unimodular_matrix_fails_model_validation():
    # passes the schema, the model rejects det = 2
    with pytest.raises(ConfigValidationError):
        validate_experiment(load_fixture("invalid_system_1.json"))


def test_sft_only_supports_pressure():
    payload = load_fixture("golden_mean_sft.json")
    payload["command"] = "transition"
    with pytest.raises(ConfigValidationError):
        validate_experiment(payload)


def test_unknown_keys_are_rejected():
    payload = load_fixture("catmap_phi0.json")
    payload["budgets"]["max_periods"] = 3
    with pytest.raises(ConfigValidationError) as exc_info:
        validate_experiment(payload)
    assert exc_info.value.errors[0]["loc"] == ["budgets"]


def test_load_experiment_from_disk(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(load_fixture("catmap_validate.json")))
    assert load_experiment(path).command == "validate"


def test_load_experiment_applies_overrides_before_validation(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(load_fixture("missing_seed_1.json")))
    with pytest.raises(ConfigValidationError):
        load_experiment(path)
    config = load_experiment(path, {"seed": 9, "command": "orbits", "output_dir": str(tmp_path / "out")})
    assert config.seed == 9
    assert config.command == "orbits"
    assert config.output_dir == str(tmp_path / "out")
    with pytest.raises(ConfigValidationError):
        load_experiment(path, {"seed": -1})


def test_load_experiment_failures(tmp_path):
    with pytest.raises(ConfigValidationError):
        load_experiment(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{ not json")
    with pytest.raises(ConfigValidationError):
        load_experiment(broken)
    listed = tmp_path / "list.json"
    listed.write_text("[]")
    with pytest.raises(ConfigValidationError):
        load_experiment(listed)


def test_schema_budgets_match_model():
    schema_keys = set(experiment_schema["definitions"]["budgets"]["properties"])
    assert schema_keys == set(Budgets.model_fields)


@pytest.mark.parametrize("path", sorted(TEMPLATE_DIR.glob("*.json")), ids=lambda p: p.name)
def test_templates_are_valid(path):
    assert load_experiment(path) is not None
