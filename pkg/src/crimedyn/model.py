"""Parameters, state and vector field of the four-compartment crime model.

Compartments: law-abiding ``s1``, at-risk ``s2``, criminal ``c`` and
incarcerated ``r``. Recruitment into crime follows the imitation incidence
``beta * s2 * c * (1 + alpha * c)``. All rates are per year.
"""
from __future__ import annotations

import dataclasses
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Sequence

from .errors import InadmissibleError, ParameterError

PARAM_NAMES = ("pi", "mu", "theta", "epsilon", "sigma", "beta", "alpha", "gamma", "p", "q")
REGION_SLACK = 1e-12


class StateVec(NamedTuple):
    """Compartment sizes in persons (also used for their time derivatives)."""

    s1: float
    s2: float
    c: float
    r: float

    @property
    def total(self) -> float:
        return self.s1 + self.s2 + self.c + self.r


@dataclass(frozen=True)
class ModelParams:
    """The ten rate and proportion parameters.

    Proportions ``p`` and ``q`` must lie in the open interval (0, 1). Setting
    ``allow_degenerate`` admits the endpoints 0 and 1 (with a warning), which
    is useful for limiting-case tests.
    """

    pi: float
    mu: float
    theta: float
    epsilon: float
    sigma: float
    beta: float
    alpha: float
    gamma: float
    p: float
    q: float
    allow_degenerate: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        for name in PARAM_NAMES:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float, Fraction)):
                raise ParameterError(f"{name}: expected a number, got {value!r}")
            value = float(value)
            object.__setattr__(self, name, value)
            if not math.isfinite(value):
                raise ParameterError(f"{name}: must be finite, got {value}")
            if value < 0:
                raise ParameterError(f"{name}: rates and proportions must be >= 0, got {value}")
        if self.mu <= 0:
            raise ParameterError(f"mu: must be > 0, got {self.mu}")
        if self.pi <= 0:
            raise ParameterError(f"pi: must be > 0, got {self.pi}")
        for name in ("p", "q"):
            value = getattr(self, name)
            if value > 1:
                raise ParameterError(f"{name}: proportion must lie in (0, 1), got {value}")
            if value in (0.0, 1.0):
                if not self.allow_degenerate:
                    raise ParameterError(
                        f"{name}: proportion must lie in the open interval (0, 1), got {value}"
                        " (pass allow_degenerate=True for limiting cases)"
                    )
                warnings.warn(f"degenerate proportion {name}={value}", stacklevel=3)

    def replace(self, **changes) -> "ModelParams":
        changes.setdefault("allow_degenerate", self.allow_degenerate)
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, name) for name in PARAM_NAMES)

    @property
    def lambda_cap(self) -> float:
        """``(mu + gamma)(mu + sigma) - q gamma sigma``."""
        return (self.mu + self.gamma) * (self.mu + self.sigma) - self.q * self.gamma * self.sigma

    @property
    def carrying_total(self) -> float:
        """Upper bound ``pi / mu`` of the invariant region."""
        return self.pi / self.mu


@dataclass(frozen=True)
class Region:
    """Positively invariant set: nonnegative states with total <= ``upper_total``."""

    upper_total: float

    @classmethod
    def of(cls, params: ModelParams) -> "Region":
        return cls(params.pi / params.mu)

    def contains(self, y: Sequence[float], slack: float = REGION_SLACK) -> bool:
        if any(v < 0 for v in y):
            return False
        return sum(y) <= self.upper_total * (1.0 + slack)


def check_admissible(params: ModelParams) -> ModelParams:
    """Raise :class:`InadmissibleError` unless ``Lambda > 0``."""
    lam = params.lambda_cap
    if not lam > 0:
        raise InadmissibleError(
            f"Lambda = (mu+gamma)(mu+sigma) - q*gamma*sigma = {lam!r} must be > 0"
        )
    return params


def incidence(params: ModelParams, s2: float, c: float) -> float:
    return params.beta * s2 * c * (1.0 + params.alpha * c)


def rhs(params: ModelParams, y: Sequence[float]) -> StateVec:
    """Right-hand side of the model at state ``y`` (persons per year)."""
    s1, s2, c, r = y
    pi, mu, theta, eps = params.pi, params.mu, params.theta, params.epsilon
    sigma, gamma, p, q = params.sigma, params.gamma, params.p, params.q
    inc = params.beta * s2 * c * (1.0 + params.alpha * c)
    return StateVec(
        (1.0 - p) * pi + (1.0 - q) * gamma * r - (mu + theta) * s1 + eps * s2,
        p * pi - inc - (mu + eps) * s2 + theta * s1,
        inc + q * gamma * r - (mu + sigma) * c,
        sigma * c - (mu + gamma) * r,
    )


def total_population_derivative(params: ModelParams, y: Sequence[float]) -> float:
    return params.pi - params.mu * sum(y)


def total_population_exact(params: ModelParams, n0: float, t):
    """Closed-form solution of ``dN/dt = pi - mu N`` (scalar or array ``t``)."""
    import numpy as np

    k = params.pi / params.mu
    return k + (n0 - k) * np.exp(-params.mu * np.asarray(t, dtype=float))


def in_region(params: ModelParams, y: Sequence[float]) -> bool:
    return Region.of(params).contains(y)


# -- parameter files ---------------------------------------------------------


def _parse_number(key: str, raw) -> float:
    if isinstance(raw, bool):
        raise ParameterError(f"{key}: expected a number, got {raw!r}")
    if isinstance(raw, (int, float)):
        return float(raw)
    if not isinstance(raw, str):
        raise ParameterError(f"{key}: expected a number, got {raw!r}")
    try:
        # Fraction parses decimal strings exactly and also accepts "1/75";
        # float(Fraction) is correctly rounded.
        return float(Fraction(raw.strip()))
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"{key}: cannot parse {raw!r} as a decimal number") from None


def params_from_mapping(mapping: dict, allow_degenerate: bool = False) -> ModelParams:
    missing = [k for k in PARAM_NAMES if k not in mapping]
    if missing:
        raise ParameterError(f"missing parameter(s): {', '.join(missing)}")
    unknown = sorted(set(mapping) - set(PARAM_NAMES))
    if unknown:
        raise ParameterError(f"unknown parameter(s): {', '.join(unknown)}")
    values = {k: _parse_number(k, mapping[k]) for k in PARAM_NAMES}
    return ModelParams(**values, allow_degenerate=allow_degenerate)


def parse_params_text(text: str, allow_degenerate: bool = False) -> ModelParams:
    """Parse ``name = decimal`` lines; ``#`` starts a comment."""
    mapping: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"line {lineno}: expected 'name = value', got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in mapping:
            raise ParameterError(f"line {lineno}: duplicate key {key!r}")
        mapping[key] = value
    return params_from_mapping(mapping, allow_degenerate)


def load_params(path, allow_degenerate: bool = False) -> ModelParams:
    """Load a key-value or JSON parameter file and check ``Lambda > 0``."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParameterError(f"cannot read parameter file {path}: {exc}") from None
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            mapping = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"{path}: invalid JSON: {exc}") from None
        if not isinstance(mapping, dict):
            raise ParameterError(f"{path}: expected a JSON object")
        params = params_from_mapping(mapping, allow_degenerate)
    else:
        params = parse_params_text(text, allow_degenerate)
    return check_admissible(params)


def format_params(params: ModelParams) -> str:
    return "".join(f"{name} = {getattr(params, name)!r}\n" for name in PARAM_NAMES)
