"""Normalized forward sensitivity indices of the reproduction number.

Three layers are kept side by side for every parameter:

* ``derived``: closed forms obtained by differentiating ``analysis.r0``;
* ``finite_difference``: a central-difference oracle on ``analysis.r0``;
* ``paper_*`` fields: the commonly quoted closed forms and their tabulated values.

The first two must agree; the third is reported, never trusted.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

from . import analysis
from .errors import CrimeDynError, InadmissibleError, ParameterError
from .model import ModelParams

SENSITIVITY_PARAMS = ("pi", "beta", "theta", "epsilon", "gamma", "sigma", "p", "q")
DEFAULT_REL_STEP = 1e-6
AGREEMENT_TOL = 1e-6
ERRATA_TOL = 1e-3

# Tabulated indices at the endemic (R0 > 1) parameter set.
TABLE2 = {
    "pi": 1.0,
    "beta": 1.0,
    "theta": 0.67451972,
    "epsilon": -0.65934066,
    "gamma": 1.4243619,
    "sigma": -0.96835443,
    "p": 0.02877698,
    "q": -0.4556962,
}


def _check_name(param_name: str) -> None:
    if param_name == "mu":
        raise ParameterError("unsupported-parameter: the index with respect to mu is not defined here")
    if param_name not in SENSITIVITY_PARAMS:
        raise ParameterError(
            f"unknown sensitivity parameter {param_name!r}; choose from {', '.join(SENSITIVITY_PARAMS)}"
        )


def nfsi_derived(params: ModelParams, param_name: str) -> float:
    """Closed-form index ``(x / R0) dR0/dx`` for ``x = param_name``."""
    _check_name(param_name)
    pr = params
    lam = analysis.lambda_cap(pr)
    mu, th, eps, sg, gm, p, q = pr.mu, pr.theta, pr.epsilon, pr.sigma, pr.gamma, pr.p, pr.q
    if param_name in ("pi", "beta"):
        return 1.0
    if param_name == "theta":
        return th * ((1.0 - p) * mu + eps) / ((p * mu + th) * (mu + th + eps))
    if param_name == "epsilon":
        return -eps / (mu + th + eps)
    if param_name == "p":
        return p * mu / (p * mu + th)
    if param_name == "gamma":
        return gm * (lam - (mu + gm) * (mu + sg - q * sg)) / (lam * (mu + gm))
    if param_name == "sigma":
        return -sg * (mu + gm - q * gm) / lam
    return q * gm * sg / lam  # q


def nfsi_paper_formula(params: ModelParams, param_name: str) -> float:
    """Index from the commonly quoted closed forms (three of which are inconsistent)."""
    _check_name(param_name)
    pr = params
    mu, th, eps, sg, gm, p, q = pr.mu, pr.theta, pr.epsilon, pr.sigma, pr.gamma, pr.p, pr.q
    den = mu + sg - q * gm * sg
    if param_name in ("pi", "beta"):
        return 1.0
    if param_name == "theta":
        return (th * (1.0 - p) * mu + th * eps) / ((mu + th + eps) * (p * mu + th))
    if param_name == "epsilon":
        return -eps / (mu + th + eps)
    if param_name == "p":
        return p * mu / (p * mu + th)
    if param_name == "gamma":
        return gm * (mu + sg + q * mu * sg) / ((mu + gm) * den)
    if param_name == "sigma":
        return -sg * (1.0 - q * gm) / den
    return -q * gm * sg / den  # q


def _perturbed_r0(params: ModelParams, name: str, value: float) -> float:
    try:
        pr = params.replace(**{name: value})
        return analysis.r0(pr)
    except CrimeDynError as exc:
        raise InadmissibleError(f"inadmissible-perturbation: {name}={value!r}: {exc}") from None


def nfsi_finite_difference(params: ModelParams, param_name: str, rel_step: float = DEFAULT_REL_STEP) -> float:
    """Central-difference oracle ``[R0(x(1+h)) - R0(x(1-h))] / (2 h R0)``.

    Raises:
        ParameterError: ``rel_step`` outside ``(1e-10, 1e-2)`` or unknown name.
        InadmissibleError: a perturbed parameter set fails validation.
    """
    _check_name(param_name)
    if not 1e-10 < rel_step < 1e-2:
        raise ParameterError(f"rel_step must lie in (1e-10, 1e-2), got {rel_step!r}")
    x = getattr(params, param_name)
    base = analysis.r0(params)
    if x == 0.0:
        return 0.0  # the index carries a factor x
    if base == 0.0:
        raise InadmissibleError("index undefined when R0 = 0")
    up = _perturbed_r0(params, param_name, x * (1.0 + rel_step))
    down = _perturbed_r0(params, param_name, x * (1.0 - rel_step))
    return (up - down) / (2.0 * rel_step * base)


@dataclass(frozen=True)
class SensitivityRow:
    param_name: str
    derived_analytic: float
    finite_difference: float
    paper_printed: float | None
    agreement: bool
    paper_formula: float

    @property
    def paper_deviation(self) -> float | None:
        """Relative deviation of the tabulated value from the derived one."""
        if self.paper_printed is None:
            return None
        return abs(self.paper_printed - self.derived_analytic) / max(abs(self.derived_analytic), 1e-300)

    @property
    def paper_mismatch(self) -> bool:
        dev = self.paper_deviation
        return dev is not None and dev > ERRATA_TOL


def sensitivity_row(
    params: ModelParams, param_name: str, rel_step: float = DEFAULT_REL_STEP, printed: dict | None = None
) -> SensitivityRow:
    printed = TABLE2 if printed is None else printed
    derived = nfsi_derived(params, param_name)
    fd = nfsi_finite_difference(params, param_name, rel_step)
    agree = abs(derived - fd) <= AGREEMENT_TOL * max(1.0, abs(derived))
    return SensitivityRow(
        param_name, derived, fd, printed.get(param_name), agree, nfsi_paper_formula(params, param_name)
    )


def sensitivity_table(
    params: ModelParams, rel_step: float = DEFAULT_REL_STEP, printed: dict | None = None
) -> list[SensitivityRow]:
    """One row per parameter in :data:`SENSITIVITY_PARAMS`.

    ``printed`` overrides the tabulated comparison values (pass ``{}`` to
    omit them, e.g. for parameter sets other than the endemic preset).
    """
    analysis.lambda_cap(params)
    return [sensitivity_row(params, name, rel_step, printed) for name in SENSITIVITY_PARAMS]


def _g(x) -> str:
    return "" if x is None else format(float(x), ".17g")


def table_to_csv(rows: list[SensitivityRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["param", "derived", "finite_difference", "paper_printed", "agrees"])
    for r in rows:
        writer.writerow(
            [r.param_name, _g(r.derived_analytic), _g(r.finite_difference), _g(r.paper_printed),
             "true" if r.agreement else "false"]
        )
    return buf.getvalue()


def table_to_json(rows: list[SensitivityRow]) -> list[dict]:
    return [asdict(r) for r in rows]


def errata_lines(rows: list[SensitivityRow]) -> list[str]:
    """Rows whose tabulated value deviates from the derived one by more than 0.1%."""
    out = []
    for r in rows:
        if r.paper_mismatch:
            out.append(
                f"{r.param_name}: printed {r.paper_printed!r} vs derived {r.derived_analytic:.8g} "
                f"(finite difference {r.finite_difference:.8g}; printed closed form {r.paper_formula:.8g})"
            )
    return out


def text_report(rows: list[SensitivityRow]) -> str:
    lines = [f"{'param':8s} {'derived':>14s} {'finite diff':>14s} {'printed':>14s}  agrees"]
    for r in rows:
        printed = "-" if r.paper_printed is None else f"{r.paper_printed:.8g}"
        lines.append(
            f"{r.param_name:8s} {r.derived_analytic:14.8g} {r.finite_difference:14.8g} {printed:>14s}  "
            f"{'yes' if r.agreement else 'NO'}"
        )
    errata = errata_lines(rows)
    lines.append("")
    lines.append("errata (printed value deviates from derived by > 1e-3 relative):")
    lines.extend("  " + e for e in errata) if errata else lines.append("  none")
    return "\n".join(lines) + "\n"


def dumps_json(rows: list[SensitivityRow]) -> str:
    return json.dumps(table_to_json(rows), indent=2, sort_keys=True) + "\n"
