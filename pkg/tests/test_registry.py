import pytest

from core.errors import ConfigError
from utils.registry import ParameterType, Registry


@pytest.fixture
def registry():
    reg = Registry("widget")

    def scale(x: float, times: int = 2, label: str = "w", loud: bool = False):
        """Scale a number."""
        return (x * times, label, loud)

    reg.register(scale, aliases=["s"])
    return reg


def test_schema_from_signature(registry):
    schema = registry.get_schema("s")
    assert schema.name == "scale"
    assert schema.description == "Scale a number."
    types = {p.name: p.type for p in schema.parameters}
    assert types == {
        "x": ParameterType.FLOAT,
        "times": ParameterType.INTEGER,
        "label": ParameterType.STRING,
        "loud": ParameterType.BOOLEAN,
    }
    assert [p.required for p in schema.parameters] == [True, False, False, False]


def test_call_coerces(registry):
    assert registry.call("scale", {"x": "1.5", "times": 4.0, "loud": "true"}) == (6.0, "w", True)


def test_missing_required(registry):
    with pytest.raises(ConfigError, match="Missing parameters"):
        registry.call("scale", {})


def test_rejects_lossy_integer(registry):
    with pytest.raises(ConfigError, match="expects integer"):
        registry.validate("scale", {"x": 1.0, "times": 2.5})


def test_rejects_bad_boolean(registry):
    with pytest.raises(ConfigError):
        registry.validate("scale", {"x": 1.0, "loud": "maybe"})


def test_membership_and_json(registry):
    assert "s" in registry and "scale" in registry and "other" not in registry
    doc = registry.to_json()
    assert doc[0]["aliases"] == ["s"]
    assert doc[0]["parameters"][1] == {"name": "times", "type": "integer", "required": False, "default": 2}
    with pytest.raises(ConfigError, match="Unknown widget entry"):
        registry.get("other")
