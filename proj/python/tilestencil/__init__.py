"""Jacobi stencil pipelines on a simulated tile accelerator.

Grids are float32 numpy arrays whose values are bfloat16-representable;
inputs are rounded to bfloat16 on entry. Machine overrides are plain dicts
of MachineSpec fields.
"""

import json

from . import _core
from ._core import (
    CapacityError,
    ConfigError,
    bf16_round,
    distribute_tiles,
    jacobi_reference,
    random_grid,
    tilize,
    untilize,
)

__all__ = [
    "CapacityError",
    "ConfigError",
    "axpy_run",
    "bf16_round",
    "calibrate",
    "default_machine",
    "distribute_tiles",
    "end_to_end",
    "jacobi_reference",
    "matmul_run",
    "random_grid",
    "run",
    "sweep",
    "tilize",
    "untilize",
]


def _machine(machine):
    return None if machine is None else json.dumps(machine)


def default_machine():
    return json.loads(_core.default_machine_json())


def calibrate(machine=None):
    return json.loads(_core.calibrate_json(_machine(machine)))


def axpy_run(grid, iterations, scenario="pcie", threads=1, machine=None):
    """Returns (output grid, modeled phase totals)."""
    return _core.axpy_run(grid, iterations, scenario, threads, _machine(machine))


def matmul_run(grid, iterations, scenario="pcie", threads=1, machine=None):
    """Returns (output grid, modeled phase totals)."""
    return _core.matmul_run(grid, iterations, scenario, threads, _machine(machine))


def end_to_end(method, size, iterations, scenario="pcie", machine=None):
    return _core.end_to_end(method, size, iterations, scenario, _machine(machine))


def run(method, size, iterations, scenario="pcie", seed=0, validate=False, model_only=False, threads=1,
        machine=None):
    """One experiment; returns the single report of the v1 JSON schema."""
    text = _core.run_json(method, size, iterations, scenario, seed, validate, model_only, threads,
                          _machine(machine))
    return json.loads(text)["reports"][0]


def sweep(preset, machine=None):
    return json.loads(_core.sweep_json(preset, _machine(machine)))
