"""
Report writers: sorted-key JSON checked against the shipped schemas, and CSV tables.
"""

import json
import logging
import math
import os
from typing import Any, Dict, Optional, Sequence

import jsonschema
import numpy as np

from core.factors import WarpedCandidate
from core.profiles import PROFILE_SCHEMA

logger = logging.getLogger(__name__)

SCHEMA_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "schemas")


def load_schema(name: str) -> Dict[str, Any]:
    with open(os.path.join(SCHEMA_DIR, f"{name}.json"), "r") as f:
        return json.load(f)


def to_plain(value: Any) -> Any:
    """Convert numpy scalars and arrays to JSON types; non-finite floats become None."""
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_plain(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def validate(document: Dict[str, Any], schema_name: str) -> None:
    """Raise jsonschema.ValidationError when document does not match the schema."""
    jsonschema.validate(document, load_schema(schema_name))


def write_json(path: str, document: Dict[str, Any], schema_name: Optional[str] = None) -> str:
    """Write document with sorted keys, validating first when a schema is named."""
    document = to_plain(document)
    if schema_name is not None:
        validate(document, schema_name)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as f:
        f.write(json.dumps(document, sort_keys=True, indent=2, allow_nan=False) + "\n")
    logger.info(f"Wrote {path}")
    return path


def write_table(path: str, header: Sequence[str], rows: np.ndarray) -> str:
    """CSV with a one-line header and round-trip exact floats."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    np.savetxt(path, np.atleast_2d(rows), fmt="%.17g", delimiter=",", header=",".join(header), comments="")
    logger.info(f"Wrote {path}")
    return path


def profile_export(candidate: WarpedCandidate) -> Dict[str, Any]:
    """profile-v1 document holding every profile of a candidate."""
    profiles = {"phi": candidate.phi, "f": candidate.f, "h": candidate.h, "u": candidate.u}
    if candidate.tau is not None:
        profiles["tau"] = candidate.tau
    return {
        "schema": PROFILE_SCHEMA,
        "candidate": candidate.label,
        "n": candidate.n,
        "m": candidate.m,
        "base_signature": list(candidate.base.signature),
        "fiber_signature": list(candidate.fiber.signature),
        "alpha": list(candidate.alpha.coefficients),
        "beta": list(candidate.beta.coefficients) if candidate.beta is not None else None,
        "u_placement": candidate.u_placement.value,
        "theta": candidate.theta,
        "lam": candidate.lam,
        "mu": candidate.mu,
        "profiles": {name: p.to_json() for name, p in profiles.items()},
    }
