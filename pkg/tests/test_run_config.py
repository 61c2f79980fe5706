import json

import pytest

from config import OutputFormat, ScalingKind
from errors import ConfigError
from run_config import GridSpec, apply_overrides, emit_config, field_path, parse_config

ARCSINE_LINEAR = {"t": 1, "a": [0], "b": [1], "phi": {"kind": "power", "gamma": 1}}


def document(**changes):
    data = dict(ARCSINE_LINEAR)
    data.update(changes)
    return json.dumps(data)


class TestParse:
    def test_minimal_document(self):
        config = parse_config(document())
        assert config.coeffs.t == 1
        assert config.scaling.kind == ScalingKind.POWER
        assert config.scaling.gamma == 1.0
        assert config.format == OutputFormat.CSV
        assert config.n is None

    def test_default_grid_pads_support(self):
        grid = parse_config(document()).grid
        assert grid.zmin == pytest.approx(-2.1)
        assert grid.zmax == pytest.approx(2.1)
        assert grid.points == 512

    def test_constant_phi(self):
        config = parse_config(json.dumps({"t": 2, "a": [0, 0], "b": [1, 2], "phi": {"kind": "constant"}}))
        assert config.scaling.kind == ScalingKind.CONSTANT
        assert config.grid.zmin == pytest.approx(-3.15)

    def test_table_phi(self):
        config = parse_config(document(phi={"kind": "table", "points": [[0.5, 2.0], [1.0, 2.0]]}))
        assert config.scaling.kind == ScalingKind.TABULATED

    def test_explicit_fields(self):
        config = parse_config(document(grid={"zmin": -1, "zmax": 1, "points": 11}, n=300, moments_max=4,
                                       format="json", output="run.json", ks_threshold=0.1))
        assert config.grid == GridSpec(-1.0, 1.0, 11)
        assert config.n == 300
        assert config.moments_max == 4
        assert config.format == OutputFormat.JSON
        assert config.output == "run.json"
        assert config.ks_threshold == 0.1


class TestParseErrors:
    @pytest.mark.parametrize("changes,field", [
        ({"b": [0]}, "b[0]"),
        ({"phi": {"kind": "power", "gamma": -1}}, "phi.gamma"),
        ({"phi": {"kind": "table", "points": [[0.5, 1.0]]}}, "phi.points"),
        ({"a": "zero"}, "a"),
        ({"t": 2}, "a"),
        ({"n": 0}, "n"),
        ({"grid": {"zmin": 1, "zmax": -1, "points": 5}}, "grid"),
        ({"surprise": True}, "surprise"),
    ])
    def test_field_is_reported(self, changes, field):
        with pytest.raises(ConfigError) as info:
            parse_config(document(**changes))
        assert info.value.field == field
        assert info.value.to_dict()["error"] == "CONFIG_ERROR"

    def test_bad_table_is_a_config_error(self):
        with pytest.raises(ConfigError) as info:
            parse_config(document(phi={"kind": "table", "points": [[0.5, 1.0], [1.0, 2.0]]}))
        assert info.value.field.startswith("phi")

    def test_invalid_json(self):
        with pytest.raises(ConfigError):
            parse_config("{not json")

    def test_non_object(self):
        with pytest.raises(ConfigError):
            parse_config("[1, 2]")


def test_field_path():
    assert field_path(("b", 0)) == "b[0]"
    assert field_path(("phi", "power", "gamma")) == "phi.gamma"
    assert field_path(("phi", "table", "points", 1, 0)) == "phi.points[1][0]"
    assert field_path(("grid", "points")) == "grid.points"


@pytest.mark.parametrize("text", [
    document(),
    document(n=100, moments_max=3, output="x.csv"),
    document(phi={"kind": "table", "points": [[0.25, 0.0], [0.5, 2.0], [0.75, 2.0], [1.0, 0.0]]}),
    json.dumps({"t": 2, "a": [0.5, -1], "b": [1, -2], "phi": {"kind": "constant"}, "format": "json"}),
])
def test_emit_then_parse_is_identity(text):
    config = parse_config(text)
    assert parse_config(emit_config(config)) == config


class TestOverrides:
    def test_values_replace_config(self):
        config = apply_overrides(parse_config(document()), n=50, zmin=-1.0, points=9, format="json",
                                 output=None)
        assert config.n == 50
        assert (config.grid.zmin, config.grid.points) == (-1.0, 9)
        assert config.grid.zmax == pytest.approx(2.1)
        assert config.format == OutputFormat.JSON

    def test_none_leaves_config_alone(self):
        config = parse_config(document(n=7))
        assert apply_overrides(config, n=None, zmin=None) == config

    @pytest.mark.parametrize("overrides,field", [
        ({"zmin": 5.0}, "grid"),
        ({"points": 1}, "grid"),
        ({"n": 0}, "n"),
        ({"moments_max": -1}, "moments_max"),
        ({"ks_threshold": 0.0}, "ks_threshold"),
    ])
    def test_invalid_overrides(self, overrides, field):
        with pytest.raises(ConfigError) as info:
            apply_overrides(parse_config(document()), **overrides)
        assert info.value.field == field
