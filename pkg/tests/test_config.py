from __future__ import annotations

import copy
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracperiod.config import (
    ClassifyConfig,
    ScenarioConfig,
    bundled_scenarios,
    eval_expression,
    resolve_config,
)
from fracperiod.errors import ConfigError
from fracperiod.operator_model import OperatorKind

BASE = {
    "name": "t",
    "alpha": 0.5,
    "operator": {"kind": "explicit", "eigenvalues": [-1.0, -2.0]},
    "forcing": {"terms": [{"omega": "2*pi", "amplitude_re": 1.0, "amplitude_im": 0.0}], "decay": None},
    "initial": [1.0, [0.0, 2.0]],
    "grid": {"t_max": 13, "dt": 0.001},
}


def with_changes(**changes):
    raw = copy.deepcopy(BASE)
    raw.update(changes)
    return raw


def config_error_path(raw) -> str:
    with pytest.raises(ConfigError) as info:
        ScenarioConfig.from_dict(raw)
    return info.value.path


# {{{ expressions


@pytest.mark.parametrize(
    "text,value",
    [
        ("2/3", 2.0 / 3.0),
        ("pi**(2/3)", math.pi ** (2.0 / 3.0)),
        ("(2*pi)**0.4", (2.0 * math.pi) ** 0.4),
        ("-pi", -math.pi),
        ("sqrt(2) + exp(1) - log(e)", math.sqrt(2.0) + math.e - 1.0),
        ("1e-3", 1e-3),
    ],
)
def test_eval_expression(text, value):
    assert eval_expression(text) == value


@pytest.mark.parametrize(
    "text", ["__import__('os')", "x + 1", "1/0", "(-8)**(1/3)", "10.0**400", "pow(2, 3)", "2 +", "'a'"]
)
def test_eval_expression_rejects(text):
    with pytest.raises(ValueError):
        eval_expression(text)


# }}}

# {{{ parsing


def test_parse_and_build():
    cfg = ScenarioConfig.from_dict(BASE)
    op = cfg.build_operator()
    assert op.eigenvalues == (-1.0, -2.0)
    assert cfg.build_initial() == [1.0, 2.0j]
    assert cfg.build_forcing().declared_spectrum == (2.0 * math.pi,)
    assert cfg.build_grid().n_steps == 13000
    assert cfg.classify is None


def test_per_mode_forcing():
    raw = with_changes(
        forcing=[
            {"terms": [{"omega": 1.0, "amplitude_re": 1.0}]},
            {"terms": [], "decay": {"d": 2.0, "gamma": 0.5}},
        ]
    )
    forcing = ScenarioConfig.from_dict(raw).build_forcing()
    assert forcing.declared_spectrum == (1.0,)
    assert forcing.modes[1].decay.rate == 0.5


def test_dirichlet_operator():
    raw = with_changes(operator={"kind": "dirichlet_laplacian", "a": "pi**(2/3)", "modes": [1, 3]})
    op = ScenarioConfig.from_dict(raw).build_operator()
    assert op.kind is OperatorKind.DIRICHLET_LAPLACIAN_1D
    assert op.modes == (1, 3)
    assert op.eigenvalues[1] == pytest.approx(-9.0 * math.pi ** (2.0 / 3.0))


@pytest.mark.parametrize(
    "changes,path",
    [
        ({"alpha": 0.0}, "alpha"),
        ({"alpha": 1.5}, "alpha"),
        ({"alpha": "two"}, "alpha"),
        ({"alpha": True}, "alpha"),
        ({"operator": {"kind": "explicit", "eigenvalues": []}}, "operator.eigenvalues"),
        ({"operator": {"kind": "dirichlet_laplacian", "a": 1.0, "n_modes": 0}}, "operator.n_modes"),
        ({"operator": {"kind": "dirichlet_laplacian", "a": -1.0, "n_modes": 2}}, "operator.a"),
        ({"operator": {"kind": "dirichlet_laplacian", "a": 1.0, "modes": [0, 1]}}, "operator.modes[0]"),
        ({"operator": {"kind": "unknown"}}, "operator.kind"),
        ({"grid": {"t_max": 13, "dt": 0.0}}, "grid.dt"),
        ({"grid": {"t_max": 13}}, "grid.dt"),
        ({"initial": [1.0]}, "initial"),
        ({"forcing": [{"terms": []}]}, "forcing"),
        ({"forcing": {"terms": [], "decay": {"d": 1.0, "gamma": 0.0}}}, "forcing.decay.gamma"),
        ({"colour": "red"}, "colour"),
        ({"classify": {"windows": [2, 6]}}, "classify.windows"),
        ({"classify": {"windows": [2, 6, 6]}}, "classify.windows[2]"),
        ({"classify": {"ratio": 1.0}}, "classify.ratio"),
        ({"classify": {"bloch_p": "2*pi"}}, "classify.bloch_p"),
        ({"classify": {}, "grid": {"t_max": 13, "dt": 0.003}}, "grid.dt"),
        ({"classify": {}, "grid": {"t_max": 11, "dt": 0.001}}, "grid.t_max"),
    ],
)
def test_error_paths(changes, path):
    assert config_error_path(with_changes(**changes)) == path


def test_missing_required_field():
    raw = copy.deepcopy(BASE)
    del raw["grid"]
    assert config_error_path(raw) == "grid"


def test_zero_mode_message():
    raw = with_changes(operator={"kind": "explicit", "eigenvalues": []})
    with pytest.raises(ConfigError, match=r"N >= 1"):
        ScenarioConfig.from_dict(raw)


def test_require_classify_uses_defaults():
    cfg = ScenarioConfig.from_dict(BASE)
    c = cfg.require_classify()
    assert c == ClassifyConfig()
    assert c.params().windows == (2.0, 6.0, 10.0)

    short = ScenarioConfig.from_dict(with_changes(grid={"t_max": 5, "dt": 0.001}))
    with pytest.raises(ConfigError):
        short.require_classify()


# }}}

# {{{ round trip and loading


@pytest.mark.parametrize("name", bundled_scenarios())
def test_bundled_round_trip(name):
    cfg = ScenarioConfig.load(name)
    text = cfg.dumps()
    again = ScenarioConfig.from_dict(json.loads(text))
    assert again == cfg
    assert again.dumps() == text


@given(
    alpha=st.one_of(st.floats(0.01, 1.0), st.sampled_from(["2/3", "1/2", "pi/4"])),
    eigs=st.lists(st.floats(-100.0, -0.01), min_size=1, max_size=4),
    dt=st.sampled_from([0.001, 0.01, "1/64"]),
)
def test_round_trip_idempotent(alpha, eigs, dt):
    raw = {
        "alpha": alpha,
        "operator": {"kind": "explicit", "eigenvalues": eigs},
        "initial": [0.0] * len(eigs),
        "grid": {"t_max": 20, "dt": dt},
        "classify": {"windows": [2, 6, 10]},
    }
    once = ScenarioConfig.from_dict(raw).dumps()
    twice = ScenarioConfig.from_dict(json.loads(once)).dumps()
    assert once == twice


def test_expressions_survive_round_trip():
    cfg = ScenarioConfig.load("example_3_18")
    out = cfg.to_dict()
    assert out["alpha"] == "2/3"
    assert out["operator"]["a"] == "pi**(2/3)"


def test_bundled_scenarios_listed():
    assert {"example_3_18", "example_2_k2", "negative_control"} <= set(bundled_scenarios())


def test_resolve_config(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(BASE))
    assert resolve_config(path) == path
    assert resolve_config("example_3_18.json").name == "example_3_18.json"
    with pytest.raises(ConfigError):
        resolve_config(tmp_path / "missing.json")


def test_load_invalid_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        ScenarioConfig.load(path)


# }}}
