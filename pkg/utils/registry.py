"""
Decorator-based registry with parameter schemas.

Entries are registered with a name, a description and aliases; the parameter
schema is read from the function signature so overrides coming from JSON or
the command line can be validated and coerced before the call.
"""

import inspect
import logging
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

from core.errors import ConfigError

logger = logging.getLogger(__name__)


class ParameterType(Enum):
    """Parameter types for entry schemas."""
    STRING = "string"
    INTEGER = "integer"
    FLOAT = "number"
    BOOLEAN = "boolean"


_ANNOTATIONS = {
    int: ParameterType.INTEGER,
    float: ParameterType.FLOAT,
    bool: ParameterType.BOOLEAN,
}


@dataclass
class ParameterSchema:
    """Schema definition for an entry parameter."""
    name: str
    type: ParameterType
    required: bool = True
    default: Optional[Any] = None


@dataclass
class EntrySchema:
    """Schema definition for a registered entry."""
    name: str
    description: str
    parameters: List[ParameterSchema]
    aliases: List[str]

    def to_json(self) -> Dict[str, Any]:
        out = asdict(self)
        for param in out["parameters"]:
            param["type"] = param["type"].value
        return out


def _coerce(param: ParameterSchema, value: Any) -> Any:
    try:
        if param.type is ParameterType.BOOLEAN:
            if isinstance(value, str):
                if value.lower() not in ("true", "false", "1", "0"):
                    raise ValueError(value)
                return value.lower() in ("true", "1")
            return bool(value)
        if param.type is ParameterType.INTEGER:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        if param.type is ParameterType.FLOAT:
            return float(value)
        return str(value)
    except (TypeError, ValueError):
        raise ConfigError(f"Parameter '{param.name}' expects {param.type.value}, got {value!r}")


class Registry:
    """Registry of named callables of one kind (gallery entries, commands)."""

    def __init__(self, kind: str):
        self.kind = kind
        self._entries: Dict[str, Callable] = {}
        self._schemas: Dict[str, EntrySchema] = {}
        self._aliases: Dict[str, str] = {}

    def register(
        self,
        func: Callable,
        name: Optional[str] = None,
        description: Optional[str] = None,
        aliases: Optional[List[str]] = None,
    ) -> Callable:
        """
        Register a function with schema information.

        Args:
            func: The function to register
            name: Entry name (defaults to func.__name__)
            description: Entry description
            aliases: Alternative names for this entry
        """
        entry_name = name or func.__name__
        parameters = []
        for param_name, param in inspect.signature(func).parameters.items():
            if param.kind in (param.VAR_POSITIONAL, param.VAR_KEYWORD):
                continue
            required = param.default is inspect.Parameter.empty
            parameters.append(ParameterSchema(
                name=param_name,
                type=_ANNOTATIONS.get(param.annotation, ParameterType.STRING),
                required=required,
                default=None if required else param.default,
            ))

        doc = (func.__doc__ or "").strip().splitlines()
        self._entries[entry_name] = func
        self._schemas[entry_name] = EntrySchema(
            name=entry_name,
            description=description or (doc[0] if doc else entry_name),
            parameters=parameters,
            aliases=list(aliases or []),
        )
        for alias in aliases or []:
            self._aliases[alias] = entry_name
        logger.debug(f"Registered {self.kind} entry: {entry_name}")
        return func

    def resolve(self, name: str) -> str:
        if name in self._entries:
            return name
        if name in self._aliases:
            return self._aliases[name]
        raise ConfigError(f"Unknown {self.kind} entry: {name}")

    def get(self, name: str) -> Callable:
        return self._entries[self.resolve(name)]

    def get_schema(self, name: str) -> EntrySchema:
        return self._schemas[self.resolve(name)]

    def names(self) -> List[str]:
        return sorted(self._entries)

    def __contains__(self, name: str) -> bool:
        return name in self._entries or name in self._aliases

    def validate(self, name: str, overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Check override keys against the entry schema and coerce their types."""
        schema = self.get_schema(name)
        params = {p.name: p for p in schema.parameters}
        out = {}
        for key, value in (overrides or {}).items():
            if key not in params:
                raise ConfigError(
                    f"Unknown parameter '{key}' for {self.kind} entry '{schema.name}'; "
                    f"expected one of {sorted(params)}"
                )
            out[key] = _coerce(params[key], value)
        missing = [p.name for p in schema.parameters if p.required and p.name not in out]
        if missing:
            raise ConfigError(f"Missing parameters for {self.kind} entry '{schema.name}': {missing}")
        return out

    def call(self, name: str, overrides: Optional[Dict[str, Any]] = None) -> Any:
        return self.get(name)(**self.validate(name, overrides))

    def to_json(self) -> List[Dict[str, Any]]:
        return [self._schemas[name].to_json() for name in self.names()]
