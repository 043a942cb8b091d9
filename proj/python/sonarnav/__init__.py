"""Acoustic-flow subsumption navigation: flow model, sonar simulation, masks,
controller and closed-loop simulation."""

import json as _json

from ._sonarnav import (  # noqa: F401
    ConfigurationError,
    ControlRegion,
    ControllerConfig,
    ControllerMasks,
    ControllerState,
    Grid,
    SensorPose,
    WireError,
    calibrate_thresholds,
    clamp_command,
    controller_step,
    fast_energyscape,
    flowline_mask,
    full_energyscape,
    integrate_flow_line,
    linear_flow_constant,
    parse_client_message,
    polar_to_cartesian,
    read_energyscape,
    region_to_mask,
    velocity_field,
    write_energyscape,
)
from . import _sonarnav


def load_scenario(path):
    """Scenario file parsed and normalized, as a dict."""
    return _json.loads(_sonarnav.scenario_json(str(path)))


def run_scenario(path, seed=1, fast_sonar=True, setup=0):
    """Closed-loop run. Returns (report dict, trajectory CSV text)."""
    report, csv = _sonarnav.run_scenario(str(path), seed, fast_sonar, setup)
    return _json.loads(report), csv
