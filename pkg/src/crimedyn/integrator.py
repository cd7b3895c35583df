"""Adaptive Dormand-Prince 5(4) integration with equidistant dense output.

The step loop lives in a compiled kernel (``_dopri_ext``) when available and
in ``_dopri_py`` otherwise; set ``CRIMEDYN_PURE=1`` to force the fallback.
Both kernels take their coefficients from ``_tableau``.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _dopri_py, _tableau
from .errors import IntegrationError, ParameterError
from .model import ModelParams, StateVec, total_population_exact

try:
    if os.environ.get("CRIMEDYN_PURE") == "1":
        raise ImportError("pure-Python kernel requested")
    from . import _dopri_ext as _kernel

    BACKEND = "cython"
except ImportError:
    _kernel = _dopri_py
    BACKEND = "python"

KERNELS = {"python": _dopri_py}
if BACKEND == "cython":
    KERNELS["cython"] = _kernel

_A, _B5, _E, _C, _D = _tableau.as_float_arrays()

_STATUS_MESSAGES = {
    _dopri_py.STEP_UNDERFLOW: "step-underflow: step size fell below 1e-14 * t_end",
    _dopri_py.MAX_STEPS: "max-steps-exceeded",
    _dopri_py.NEGATIVE_EXCURSION: "negative excursion larger than 10 * abs_tol",
}


@dataclass(frozen=True)
class SolverConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-8
    initial_step: float = 0.01
    max_step: float = 1.0
    output_interval: float = 0.01
    max_steps: int = 100_000_000
    clamp_negative: bool = True
    fixed_step: float | None = None

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "initial_step", "max_step", "output_interval"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be a positive finite number, got {value!r}")
        if self.max_steps < 1:
            raise ParameterError("max_steps must be >= 1")
        if self.fixed_step is not None and not self.fixed_step > 0:
            raise ParameterError("fixed_step must be > 0")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    steps_accepted: int
    steps_rejected: int
    min_step_used: float
    backend: str = field(default=BACKEND, compare=False)

    @property
    def final(self) -> StateVec:
        return StateVec(*map(float, self.states[-1]))

    @property
    def totals(self) -> np.ndarray:
        return self.states.sum(axis=1)

    def to_csv(self) -> str:
        lines = ["t,S1,S2,C,R"]
        for t, row in zip(self.times, self.states):
            lines.append(",".join(format(float(x), ".17g") for x in (t, *row)))
        return "\n".join(lines) + "\n"


def output_times(t_end: float, interval: float) -> np.ndarray:
    """Multiples of ``interval`` up to ``t_end``, with ``t_end`` appended if needed."""
    n = int(math.floor(t_end / interval * (1.0 + 1e-12)))
    times = np.arange(n + 1, dtype=float) * interval
    times = times[times <= t_end]
    if t_end - times[-1] > 1e-9 * interval:
        times = np.append(times, t_end)
    else:
        times[-1] = min(times[-1], t_end)
    return times


def integrate(
    params: ModelParams,
    y0,
    t_end: float,
    config: SolverConfig | None = None,
    backend: str | None = None,
) -> Trajectory:
    """Integrate the model from ``y0`` over ``[0, t_end]``.

    Raises:
        ParameterError: ``t_end <= 0`` or ``y0`` negative or non-finite.
        IntegrationError: step underflow, step budget exhausted, or a negative
            excursion the clamp refuses to hide.
    """
    config = config or SolverConfig()
    if not (isinstance(t_end, (int, float)) and math.isfinite(t_end) and t_end > 0):
        raise ParameterError(f"t_end must be > 0, got {t_end!r}")
    y0 = [float(v) for v in y0]
    if len(y0) != 4:
        raise ParameterError("initial state needs four components")
    # Starts above pi/mu are allowed: the region is attracting and the
    # random-start protocol on [0, 1e6]^4 routinely exceeds the bound.
    if not all(math.isfinite(v) and v >= 0.0 for v in y0):
        raise ParameterError(f"initial state must be finite and nonnegative, got {y0}")
    kernel = KERNELS[backend] if backend else _kernel
    times = output_times(float(t_end), config.output_interval)
    states = np.empty((times.size, 4))
    status, t, acc, rej, min_step, written = kernel.run(
        params.as_tuple(), y0, float(t_end), config.rel_tol, config.abs_tol,
        config.initial_step, config.max_step, config.fixed_step or 0.0,
        times, states, int(config.max_steps), bool(config.clamp_negative),
        _A, _E, _D,
    )
    if status != _dopri_py.OK:
        raise IntegrationError(
            _STATUS_MESSAGES[status], t=t, steps_accepted=acc, steps_rejected=rej,
            min_step=min_step,
        )
    if written != times.size:
        raise IntegrationError(
            f"dense output incomplete ({written}/{times.size})", t=t,
            steps_accepted=acc, steps_rejected=rej, min_step=min_step,
        )
    if not np.all(np.isfinite(states)):
        raise IntegrationError(
            "non-finite state (solution blew up)", t=t, steps_accepted=acc,
            steps_rejected=rej, min_step=min_step,
        )
    times.setflags(write=False)
    states.setflags(write=False)
    name = "python" if kernel is _dopri_py else "cython"
    return Trajectory(times, states, acc, rej, float(min_step), name)


def total_population_error(traj: Trajectory, params: ModelParams) -> float:
    """Max relative deviation of the summed state from the exact total population."""
    exact = total_population_exact(params, float(traj.states[0].sum()), traj.times)
    return float(np.max(np.abs(traj.totals - exact)) / (params.pi / params.mu))


def seeded_random_initial_condition(seed: int, upper: float = 1e6) -> StateVec:
    """Four independent U[0, upper] draws from numpy's PCG64 seeded with ``seed``."""
    if not upper > 0:
        raise ParameterError("upper must be > 0")
    rng = np.random.Generator(np.random.PCG64(seed))
    return StateVec(*map(float, rng.uniform(0.0, upper, size=4)))


def max_workers() -> int:
    raw = os.environ.get("CRIMEDYN_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ParameterError(f"CRIMEDYN_THREADS must be an integer, got {raw!r}") from None
    return min(8, os.cpu_count() or 1)


def integrate_many(jobs, config: SolverConfig | None = None) -> list:
    """Run ``(params, y0, t_end)`` jobs in a thread pool; results keep job order.

    Failed jobs yield the raised exception in place of a trajectory.
    """

    def one(job):
        params, y0, t_end = job
        try:
            return integrate(params, y0, t_end, config)
        except Exception as exc:  # per-job isolation
            return exc

    jobs = list(jobs)
    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        return list(pool.map(one, jobs))
