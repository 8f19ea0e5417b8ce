"""
Command handlers for the batch front end.

Each handler takes a RunConfig, writes its artifacts under config.out and
returns a CommandResult; app.run() wraps it into the report file.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import jsonschema
import numpy as np

from constructor import CaseParams, construct, gallery, gallery_registry
from core.errors import ConfigError
from core.factors import Placement, WarpedCandidate
from curvature import oracle_check
from geodesics import (
    GeodesicState,
    IntegratorSettings,
    completeness_probe,
    initial_states,
    integrate_geodesic,
)
from geodesics.probe import sample_position
from soliton import GridSpec, verify
from .config import RunConfig
from .registry import Registry
from .reports import profile_export, validate, write_json, write_table

logger = logging.getLogger(__name__)

command_registry = Registry("command")


def command(name: str, description: str, aliases: Optional[List[str]] = None):
    """Decorator to register a command handler."""
    def decorator(func):
        return command_registry.register(func, name, description, aliases)
    return decorator


@dataclass
class CommandResult:
    passed: bool
    result: Dict[str, Any] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)


#########################
# Candidate resolution
#########################

def case_params(config: RunConfig) -> CaseParams:
    """CaseParams from defaults, the run file's case_params, --case and --sign."""
    data = dict(config.defaults.get("case", {}))
    data.update(config.case_params)
    if config.case_id is not None:
        data["case_id"] = config.case_id
    if config.sign is not None:
        data["sign"] = config.sign
    if "case_id" not in data:
        raise ConfigError("construct needs --case or case_params.case_id")
    try:
        validate(data, "caseparams-v1")
    except jsonschema.ValidationError as e:
        raise ConfigError(f"Invalid case parameters: {e.message}")
    return CaseParams.from_json(data)


def resolve_candidate(config: RunConfig) -> Tuple[WarpedCandidate, Optional[CaseParams]]:
    if config.gallery is not None:
        overrides = dict(config.overrides)
        if config.variant is not None:
            overrides["variant"] = config.variant
        return gallery(config.gallery, overrides), None
    if config.case_id is not None or config.case_params:
        params = case_params(config)
        return construct(params), params
    raise ConfigError(f"{config.command} needs --gallery or --case")


def _span(profiles, requested: Tuple[float, float], offset: float) -> Tuple[float, float]:
    lo, hi = requested
    for p in profiles:
        d_lo, d_hi = p.domain
        if d_lo + offset > lo:
            lo = d_lo + offset
        if d_hi - offset < hi:
            hi = d_hi - offset
    if not lo < hi:
        raise ConfigError(f"requested span {requested} leaves nothing inside the profile domains")
    return lo, hi


def grid_for(candidate: WarpedCandidate, config: RunConfig, params: Optional[CaseParams] = None) -> GridSpec:
    """Grid from --grid, the case spans or the defaults, kept inside the profile domains."""
    defaults = config.defaults["grid"]
    offset = float(defaults["domain_offset"])
    count = int(defaults["count"])
    if config.grid is not None:
        xi_span = config.grid[:2]
        count = config.grid[2]
    elif params is not None:
        xi_span = params.xi_span
    else:
        xi_span = tuple(defaults["xi_span"])

    base = [candidate.phi, candidate.f, candidate.h]
    fiber = [candidate.tau] if candidate.tau is not None else []
    (fiber if candidate.u_placement is Placement.FIBER else base).append(candidate.u)
    xi_span = _span(base, xi_span, offset)

    zeta_span = None
    if candidate.beta is not None:
        requested = params.zeta_span if params is not None else tuple(defaults["zeta_span"])
        zeta_span = _span(fiber, requested, offset)
    return GridSpec(xi_span, zeta_span, count, float(defaults["shrink"]))


def _check_tolerance(config: RunConfig, candidate: WarpedCandidate) -> float:
    if config.tol is not None:
        return config.tol
    tolerances = config.defaults["tolerances"]
    return tolerances["closed_form"] if candidate.is_closed_form else tolerances["numerical"]


def _settings(config: RunConfig) -> IntegratorSettings:
    return IntegratorSettings.from_json(config.defaults["geodesic"])


#########################
# Commands
#########################

@command(name="verify", description="Evaluate every applicable equation of a candidate on a grid")
def run_verify(config: RunConfig) -> CommandResult:
    candidate, params = resolve_candidate(config)
    report = verify(candidate, grid_for(candidate, config, params), _check_tolerance(config, candidate), config.workers)
    return CommandResult(report.passed, {"verification": report.to_json()})


@command(name="construct", description="Build a classified case from parameters and verify it")
def run_construct(config: RunConfig) -> CommandResult:
    params = case_params(config)
    candidate = construct(params)
    report = verify(candidate, grid_for(candidate, config, params), _check_tolerance(config, candidate), config.workers)
    path = write_json(os.path.join(config.out, "profiles.json"), profile_export(candidate))
    result = {"case_params": params.to_json(), "verification": report.to_json()}
    return CommandResult(report.passed, result, [path])


@command(name="gallery", description="List gallery entries or export one entry's profiles")
def run_gallery(config: RunConfig) -> CommandResult:
    if config.gallery is None:
        return CommandResult(True, {"entries": gallery_registry.to_json()})
    candidate, _ = resolve_candidate(config)
    path = write_json(os.path.join(config.out, "profiles.json"), profile_export(candidate))
    schema = gallery_registry.get_schema(config.gallery).to_json()
    return CommandResult(True, {"entry": schema, "candidate": candidate.label}, [path])


@command(name="oracle", description="Compare the closed-form Ricci tensor with finite differences")
def run_oracle(config: RunConfig) -> CommandResult:
    candidate, _ = resolve_candidate(config)
    settings = config.defaults["oracle"]
    steps = config.steps or [float(s) for s in settings["steps"]]
    rng = np.random.default_rng(config.seed)
    points = [sample_position(candidate, rng) for _ in range(int(settings["points"]))]
    report = oracle_check(candidate, points, steps)

    low, high = settings["ratio_range"]
    exact = bool(max(report.errors) < float(settings["exact_below"]))
    within_max_error = bool(report.errors[0] <= float(settings["max_error"]))
    passed = exact or (within_max_error and report.ratios_within(low, high))
    result = report.to_json()
    result["ratio_range"] = [low, high]
    result["exact"] = exact
    result["within_max_error"] = within_max_error
    return CommandResult(passed, {"oracle": result})


def _initial_state(candidate: WarpedCandidate, config: RunConfig) -> GeodesicState:
    if config.init is not None:
        return GeodesicState(0.0, config.init["position"], config.init["velocity"])
    sampler = config.geodesic_setting("sampler")
    return initial_states(candidate, sampler, 1, config.seed)[0]


@command(name="geodesic", description="Integrate one geodesic and dump the trajectory")
def run_geodesic(config: RunConfig) -> CommandResult:
    candidate, _ = resolve_candidate(config)
    init = _initial_state(candidate, config)
    trajectory = integrate_geodesic(
        candidate,
        init,
        float(config.geodesic_setting("s_max")),
        float(config.geodesic_setting("tol")),
        config.geodesic_setting("system"),
        _settings(config),
    )
    header, rows = trajectory.table()
    path = write_table(os.path.join(config.out, "trajectory.csv"), header, rows)
    result = trajectory.to_json()
    result["init"] = {"position": init.position, "velocity": init.velocity}
    return CommandResult(not trajectory.early, {"trajectory": result}, [path])


@command(name="probe", description="Integrate a seeded batch of geodesics and count early terminations")
def run_probe(config: RunConfig) -> CommandResult:
    candidate, _ = resolve_candidate(config)
    summary = completeness_probe(
        candidate,
        sampler=config.geodesic_setting("sampler"),
        count=int(config.geodesic_setting("count")),
        s_max=float(config.geodesic_setting("s_max")),
        seed=config.seed,
        tol=float(config.geodesic_setting("tol")),
        system=config.geodesic_setting("system"),
        settings=_settings(config),
        workers=config.workers,
    )
    document = summary.to_json()
    path = write_json(os.path.join(config.out, "probe-summary.json"), document, "probe-v1")
    passed = summary.early_terminations == 0 and summary.bound_holds is not False
    return CommandResult(passed, {"probe": document}, [path])
