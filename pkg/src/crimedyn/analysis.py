"""Closed-form analysis: thresholds, equilibria, linear stability and the
center-manifold coefficients at the ``R0 = 1`` transcritical point.

Two threshold variants exist for the imitation coefficient. ``alpha_star``
reproduces the commonly quoted closed form; it is not dimensionally
homogeneous and does not coincide with the sign change of the linear
coefficient of the endemic quadratic. ``alpha_star_corrected`` is the value at
which that coefficient (and the center-manifold coefficient ``a``) changes
sign, and is the one used for root counting and regime labels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InadmissibleError, NumericalError
from .model import ModelParams, StateVec, check_admissible, rhs

STABLE = "stable"
UNSTABLE = "unstable"
NON_HYPERBOLIC = "non-hyperbolic"

UNIQUE_ENDEMIC = "unique-endemic"
NONE = "none"
TWO_ENDEMIC = "two-endemic"
NONE_BELOW_CRITICAL = "none-below-critical"

HYPERBOLIC_BAND = 1e-10  # |Re lambda| <= band * mu counts as zero
R0_UNIT_BAND = 1e-9


# -- thresholds ----------------------------------------------------------------


def lambda_cap(params: ModelParams) -> float:
    return check_admissible(params).lambda_cap


def r0(params: ModelParams) -> float:
    """Basic reproduction number."""
    pr = params
    lam = lambda_cap(pr)
    return (
        pr.beta * pr.pi * (pr.p * pr.mu + pr.theta) * (pr.mu + pr.gamma)
        / (pr.mu * (pr.mu + pr.theta + pr.epsilon) * lam)
    )


def beta_star(params: ModelParams) -> float:
    """Contact rate at which ``R0 = 1``."""
    pr = params
    lam = lambda_cap(pr)
    return (
        pr.mu * (pr.mu + pr.theta + pr.epsilon) * lam
        / (pr.pi * (pr.p * pr.mu + pr.theta) * (pr.mu + pr.gamma))
    )


def _bracket(pr: ModelParams) -> float:
    # mu^2 (mu+theta+sigma+gamma) + mu theta (sigma+gamma) + (1-q) gamma sigma mu
    return (
        pr.mu ** 2 * (pr.mu + pr.theta + pr.sigma + pr.gamma)
        + pr.mu * pr.theta * (pr.sigma + pr.gamma)
        + (1.0 - pr.q) * pr.gamma * pr.sigma * pr.mu
    )


def phi(params: ModelParams) -> float:
    pr = params
    return _bracket(pr) * pr.mu * (pr.mu + pr.theta + pr.epsilon) * lambda_cap(pr)


def alpha_star(params: ModelParams) -> float:
    """Imitation threshold in its commonly quoted closed form."""
    pr = params
    num = (pr.mu + pr.gamma) * (pr.mu + pr.sigma) - pr.gamma * pr.sigma * (pr.q * pr.mu + pr.theta)
    return num / (pr.pi * (pr.mu + pr.gamma) * (pr.p * pr.mu + pr.theta))


def alpha_star_corrected(params: ModelParams) -> float:
    """Imitation threshold at which the linear quadratic coefficient vanishes.

    Equal to ``[(mu+gamma)(mu+sigma)(mu+theta) - gamma sigma (q mu + theta)]
    / [pi (mu+gamma)(p mu + theta)]``.
    """
    pr = params
    return _bracket(pr) / (pr.pi * (pr.mu + pr.gamma) * (pr.p * pr.mu + pr.theta))


@dataclass(frozen=True)
class QuadraticCoefficients:
    """``b2 C^2 + b1 C + b0 = 0`` for the criminal level ``C`` at equilibrium."""

    b0: float
    b1: float
    b2: float

    @property
    def discriminant(self) -> float:
        return self.b1 * self.b1 - 4.0 * self.b2 * self.b0


def quadratic_coefficients(params: ModelParams) -> QuadraticCoefficients:
    pr = params
    lam = lambda_cap(pr)
    br = _bracket(pr)
    k = pr.pi * (pr.mu + pr.gamma) * (pr.p * pr.mu + pr.theta)
    b0 = pr.mu * (pr.mu + pr.theta + pr.epsilon) * lam * (r0(pr) - 1.0)
    b1 = pr.beta * (pr.alpha * k - br)
    b2 = -pr.beta * pr.alpha * br
    return QuadraticCoefficients(b0, b1, b2)


def quadratic_coefficients_printed(params: ModelParams) -> QuadraticCoefficients:
    """Same as :func:`quadratic_coefficients` but with ``b1`` built from
    :func:`alpha_star`. Kept for the errata comparison only."""
    pr = params
    exact = quadratic_coefficients(pr)
    k = pr.pi * (pr.mu + pr.gamma) * (pr.p * pr.mu + pr.theta)
    return QuadraticCoefficients(exact.b0, pr.beta * k * (pr.alpha - alpha_star(pr)), exact.b2)


def r0_critical(params: ModelParams) -> float:
    """``R0`` value at which the discriminant of the endemic quadratic vanishes.

    ``1 - b1^2 / (4 beta alpha Phi)``, evaluated at the given parameters; the
    discriminant is positive exactly when ``R0`` exceeds this value.
    """
    pr = params
    if not (pr.alpha > 0 and pr.beta > 0):
        raise InadmissibleError("critical threshold requires alpha > 0 and beta > 0")
    b1 = quadratic_coefficients(pr).b1
    return 1.0 - b1 * b1 / (4.0 * pr.beta * pr.alpha * phi(pr))


def r0_critical_printed(params: ModelParams) -> float:
    """``1 - beta (alpha - alpha*)^2 / (4 alpha Phi)`` with the quoted ``alpha*``."""
    pr = params
    if not pr.alpha > 0:
        raise InadmissibleError("critical threshold requires alpha > 0")
    return 1.0 - pr.beta * (pr.alpha - alpha_star(pr)) ** 2 / (4.0 * pr.alpha * phi(pr))


def fold_r0(params: ModelParams) -> float | None:
    """``R0`` at the saddle-node fold when ``beta`` is the varied parameter.

    Only defined for ``alpha > alpha_star_corrected``; otherwise ``None``.
    """
    pr = params
    if not pr.alpha > alpha_star_corrected(pr):
        return None
    k = pr.pi * (pr.mu + pr.gamma) * (pr.p * pr.mu + pr.theta) * (pr.alpha - alpha_star_corrected(pr))
    four_a_phi = 4.0 * pr.alpha * phi(pr)
    return four_a_phi / (beta_star(pr) * k * k + four_a_phi)


def theorem2_regime(params: ModelParams) -> str:
    """Case label for the number of endemic equilibria."""
    pr = params
    rep = r0(pr)
    above = pr.alpha > alpha_star_corrected(pr)
    if rep > 1.0:
        return UNIQUE_ENDEMIC
    if rep == 1.0:
        return UNIQUE_ENDEMIC if above else NONE
    if not above or pr.beta == 0.0:
        return NONE
    return TWO_ENDEMIC if rep > r0_critical(pr) else NONE_BELOW_CRITICAL


def solve_quadratic(b2: float, b1: float, b0: float) -> tuple[float, ...]:
    """Real roots of ``b2 x^2 + b1 x + b0`` in ascending order.

    Uses the cancellation-free form; falls back to the linear root when
    ``|b2| < 1e-300``.
    """
    if abs(b2) < 1e-300:
        if b1 == 0.0:
            return ()
        return (-b0 / b1,)
    disc = b1 * b1 - 4.0 * b2 * b0
    if disc < 0.0:
        return ()
    s = math.sqrt(disc)
    qq = -0.5 * (b1 + math.copysign(s, b1))
    if qq == 0.0:
        return (0.0,)
    x1, x2 = qq / b2, b0 / qq
    if x1 == x2:
        return (x1,)
    return (x1, x2) if x1 < x2 else (x2, x1)


ROOT_FLOOR = 1e-12


def positive_roots(params: ModelParams) -> tuple[float, ...]:
    qc = quadratic_coefficients(params)
    # roots at rounding level of pi/mu are the crime-free state, not an endemic one
    floor = ROOT_FLOOR * params.pi / params.mu
    return tuple(x for x in solve_quadratic(qc.b2, qc.b1, qc.b0) if x > floor)


# -- equilibria and linearisation ------------------------------------------------


def crime_free_state(params: ModelParams) -> StateVec:
    pr = params
    d = pr.mu * (pr.mu + pr.theta + pr.epsilon)
    return StateVec(
        pr.pi * ((1.0 - pr.p) * pr.mu + pr.epsilon) / d,
        pr.pi * (pr.p * pr.mu + pr.theta) / d,
        0.0,
        0.0,
    )


def jacobian(params: ModelParams, y) -> np.ndarray:
    """Analytic Jacobian of the vector field at ``y``."""
    pr = params
    s1, s2, c, r = y
    inc_c = pr.beta * s2 * (1.0 + 2.0 * pr.alpha * c)  # d incidence / dc
    inc_s2 = pr.beta * c * (1.0 + pr.alpha * c)  # d incidence / ds2
    return np.array(
        [
            [-(pr.mu + pr.theta), pr.epsilon, 0.0, (1.0 - pr.q) * pr.gamma],
            [pr.theta, -inc_s2 - (pr.mu + pr.epsilon), -inc_c, 0.0],
            [0.0, inc_s2, inc_c - (pr.mu + pr.sigma), pr.q * pr.gamma],
            [0.0, 0.0, pr.sigma, -(pr.mu + pr.gamma)],
        ]
    )


def second_partials(params: ModelParams, y) -> tuple[np.ndarray, np.ndarray]:
    """Second derivatives of the vector field.

    Returns ``(H, G)`` with ``H[k, i, j] = d2 g_k / dx_i dx_j`` and
    ``G[k, i] = d2 g_k / dx_i d beta``. Only the incidence term is nonlinear,
    so only rows 1 and 2 (``s2`` and ``c`` equations) are nonzero.
    """
    pr = params
    _, s2, c, _ = y
    h = np.zeros((4, 4, 4))
    g = np.zeros((4, 4))
    d_s2c = pr.beta * (1.0 + 2.0 * pr.alpha * c)
    d_cc = 2.0 * pr.beta * pr.alpha * s2
    for k, sign in ((1, -1.0), (2, 1.0)):
        h[k, 1, 2] = h[k, 2, 1] = sign * d_s2c
        h[k, 2, 2] = sign * d_cc
        g[k, 1] = sign * c * (1.0 + pr.alpha * c)
        g[k, 2] = sign * s2 * (1.0 + 2.0 * pr.alpha * c)
    return h, g


def eigenvalues_4x4(m) -> np.ndarray:
    """Eigenvalues sorted by real part, then imaginary part."""
    m = np.asarray(m, dtype=float)
    if m.shape != (4, 4) or not np.all(np.isfinite(m)):
        raise NumericalError("eigenvalues_4x4 expects a finite 4x4 matrix")
    try:
        ev = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue iteration did not converge: {exc}") from None
    order = np.lexsort((ev.imag, ev.real))
    return ev[order]


def classify_eigenvalues(eigs, mu: float) -> str:
    band = HYPERBOLIC_BAND * mu
    re = np.real(eigs)
    if np.any(np.abs(re) <= band):
        return NON_HYPERBOLIC
    return STABLE if np.all(re < -band) else UNSTABLE


@dataclass(frozen=True)
class EquilibriumReport:
    kind: str
    state: StateVec
    eigenvalues: tuple
    stability: str
    residual: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "state": dict(zip(("S1", "S2", "C", "R"), self.state)),
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "stability": self.stability,
            "residual": self.residual,
        }


def _report(params: ModelParams, kind: str, state: StateVec, stability: str | None = None):
    eigs = eigenvalues_4x4(jacobian(params, state))
    res = max(abs(v) for v in rhs(params, state))
    label = stability or classify_eigenvalues(eigs, params.mu)
    return EquilibriumReport(kind, state, tuple(complex(z) for z in eigs), label, res)


def crime_free_equilibrium(params: ModelParams) -> EquilibriumReport:
    return _report(params, "crime-free", crime_free_state(params), classify_crime_free_stability(params))


def classify_crime_free_stability(params: ModelParams) -> str:
    eigs = eigenvalues_4x4(jacobian(params, crime_free_state(params)))
    if abs(r0(params) - 1.0) <= R0_UNIT_BAND:
        return NON_HYPERBOLIC
    return classify_eigenvalues(eigs, params.mu)


def endemic_state(params: ModelParams, c_star: float) -> StateVec:
    """Back-substitute a root of the endemic quadratic into the other classes."""
    pr = params
    lam = lambda_cap(pr)
    f = pr.beta * (1.0 + pr.alpha * c_star)
    ds = (1.0 - pr.p) * (pr.mu + pr.gamma) * pr.pi * f + (1.0 - pr.q) * pr.gamma * pr.sigma * c_star * f
    s1 = (pr.epsilon * lam + ds) / ((pr.mu + pr.theta) * (pr.mu + pr.gamma) * f)
    s2 = lam / ((pr.mu + pr.gamma) * f)
    return StateVec(s1, s2, c_star, pr.sigma * c_star / (pr.mu + pr.gamma))


def solve_endemic(params: ModelParams) -> tuple[list[EquilibriumReport], list[StateVec]]:
    """Admissible endemic equilibria and rejected (negative-component) roots."""
    if params.beta == 0.0:
        return [], []
    accepted, rejected = [], []
    for c_star in positive_roots(params):
        state = endemic_state(params, c_star)
        if min(state) < 0.0:
            rejected.append(state)
        else:
            accepted.append(_report(params, "endemic", state))
    return accepted, rejected


def endemic_equilibria(params: ModelParams) -> list[EquilibriumReport]:
    """Endemic equilibria ordered by increasing criminal level."""
    return solve_endemic(params)[0]


# -- next-generation oracle ------------------------------------------------------


def next_generation_matrices(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """``(F, V)`` for the (C, R) subsystem linearised at the crime-free state.

    ``F`` holds the derivative of the incidence (new recruits into crime),
    ``V`` the remaining outflow/inflow rates, so that ``F - V`` is the
    infected block of the Jacobian.
    """
    pr = params
    s2 = crime_free_state(pr).s2
    f = np.array([[pr.beta * s2, 0.0], [0.0, 0.0]])
    v = np.array([[pr.mu + pr.sigma, -pr.q * pr.gamma], [-pr.sigma, pr.mu + pr.gamma]])
    return f, v


def next_generation_r0(params: ModelParams) -> float:
    f, v = next_generation_matrices(params)
    k = f @ np.linalg.inv(v)
    return float(np.max(np.abs(np.linalg.eigvals(k))))


# -- center manifold ---------------------------------------------------------------


@dataclass(frozen=True)
class BifurcationCoefficients:
    """Normal-form coefficients at ``(E0, beta*)``.

    ``a``/``b`` come from the analytic second partials; ``a_numeric`` and
    ``b_numeric`` from finite differences of the vector field contracted with
    the same null vectors.
    """

    a: float
    b: float
    v: np.ndarray
    w: np.ndarray
    a_numeric: float
    b_numeric: float
    jacobian: np.ndarray = field(repr=False)

    @property
    def backward(self) -> bool:
        return self.a > 0 and self.b > 0

    def rel_mismatch(self) -> tuple[float, float]:
        da = abs(self.a - self.a_numeric) / max(abs(self.a), abs(self.a_numeric), 1e-300)
        db = abs(self.b - self.b_numeric) / max(abs(self.b), abs(self.b_numeric), 1e-300)
        return da, db


def null_vectors(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Left and right singular directions of the smallest singular value."""
    u, s, vt = np.linalg.svd(m)
    return u[:, -1].copy(), vt[-1, :].copy()


def _check_simple_zero(m: np.ndarray) -> None:
    eigs = np.linalg.eigvals(m)
    scale = np.linalg.norm(m, 2)
    zeros = np.sum(np.abs(eigs) <= 1e-9 * scale)
    if zeros != 1:
        raise NumericalError(
            f"no-null-vector: expected a simple zero eigenvalue, found {zeros} near zero"
        )


def contraction_numeric(params: ModelParams, x0, v, w) -> tuple[float, float]:
    """``a`` and ``b`` by finite differences of ``s -> v . g(x0 + s w; beta)``.

    The vector field is a cubic polynomial in the state and linear in beta,
    so the symmetric second difference is exact up to rounding for any step;
    the mixed derivative uses Richardson extrapolation to cancel the cubic
    term.
    """
    x0 = np.asarray(x0, dtype=float)
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    scale = max(params.pi / params.mu, 1.0)
    h = 1e-2 * scale / np.max(np.abs(w))

    def phi_(s, beta):
        pr = params.replace(beta=beta)
        return float(v @ np.asarray(rhs(pr, x0 + s * w)))

    beta0 = params.beta
    a_num = (phi_(h, beta0) - 2.0 * phi_(0.0, beta0) + phi_(-h, beta0)) / (h * h)

    k = 1e-3 * beta0

    def mixed(hs):
        return (
            phi_(hs, beta0 + k) - phi_(-hs, beta0 + k) - phi_(hs, beta0 - k) + phi_(-hs, beta0 - k)
        ) / (4.0 * hs * k)

    hb = 1e-3 * scale / np.max(np.abs(w))
    b_num = (4.0 * mixed(hb) - mixed(2.0 * hb)) / 3.0
    return a_num, b_num


def center_manifold_coefficients(params: ModelParams) -> BifurcationCoefficients:
    """Coefficients ``a`` and ``b`` with ``beta`` set to ``beta*``.

    Null vectors come from the SVD of the analytic Jacobian, oriented so the
    criminal component of ``w`` is positive and scaled so ``v . w = 1``.
    """
    pr = params.replace(beta=beta_star(params))
    x0 = np.asarray(crime_free_state(pr))
    jac = jacobian(pr, x0)
    _check_simple_zero(jac)
    v, w = null_vectors(jac)
    if w[2] < 0:
        w = -w
    w = w / w[3] if w[3] > 0 else w
    v = v / float(v @ w)
    h, g = second_partials(pr, x0)
    a = float(np.einsum("k,kij,i,j->", v, h, w, w))
    b = float(np.einsum("k,ki,i->", v, g, w))
    a_num, b_num = contraction_numeric(pr, x0, v, w)
    return BifurcationCoefficients(a, b, v, w, a_num, b_num, jac)


def left_null_vector_closed_form(params: ModelParams) -> np.ndarray:
    pr = params
    return np.array([0.0, 0.0, (pr.mu + pr.gamma) / (pr.q * pr.gamma), 1.0])


def right_null_vector_closed_form(params: ModelParams) -> np.ndarray:
    """Right null vector of the analytic Jacobian at ``(E0, beta*)`` with ``w4 = 1``."""
    pr = params
    lam = lambda_cap(pr)
    den = pr.sigma * pr.mu * (pr.mu + pr.theta + pr.epsilon)
    rel = (1.0 - pr.q) * pr.gamma * pr.sigma
    return np.array(
        [
            (rel * (pr.mu + pr.epsilon) - pr.epsilon * lam) / den,
            (rel * pr.theta - lam * (pr.mu + pr.theta)) / den,
            (pr.mu + pr.gamma) / pr.sigma,
            1.0,
        ]
    )


def right_null_vector_printed(params: ModelParams) -> np.ndarray:
    """Commonly quoted right eigenvector (null vector of a sign-flipped Jacobian)."""
    pr = params
    lam = lambda_cap(pr)
    den = pr.sigma * pr.mu * (pr.mu + pr.theta + pr.epsilon)
    rel = (1.0 - pr.q) * pr.gamma * pr.sigma
    return np.array(
        [
            (rel * (pr.mu + pr.epsilon) + pr.epsilon * lam) / den,
            (rel * pr.theta + lam * (pr.mu + pr.theta)) / den,
            (pr.mu + pr.gamma) / pr.sigma,
            1.0,
        ]
    )


def printed_jacobian_at_bifurcation(params: ModelParams) -> np.ndarray:
    """Jacobian at ``(E0, beta*)`` as commonly quoted, with ``+Lambda/(mu+gamma)`` at (2,3)."""
    pr = params
    jac = jacobian(pr.replace(beta=beta_star(pr)), crime_free_state(pr))
    jac[1, 2] = -jac[1, 2]
    return jac


def a_closed_form(params: ModelParams) -> float:
    """``a`` from the analytic Jacobian's null vectors, in closed form."""
    pr = params
    lam = lambda_cap(pr)
    k = pr.pi * (pr.p * pr.mu + pr.theta)
    m = (pr.mu + pr.gamma) ** 2 + pr.q * pr.gamma * pr.sigma
    return 2.0 * lam * (pr.mu + pr.gamma) * (pr.alpha * k * (pr.mu + pr.gamma) - _bracket(pr)) / (
        pr.sigma * k * m
    )


def a_printed(params: ModelParams) -> float:
    """Commonly quoted closed form of ``a`` (positive for every parameter set)."""
    pr = params
    psi = (
        (1.0 - pr.q) * pr.gamma * pr.sigma * (pr.mu + 2.0 * pr.theta)
        + (pr.mu + pr.theta) * pr.mu * (pr.mu + pr.sigma + pr.gamma)
        + (pr.mu + pr.gamma) * pr.mu * pr.alpha * pr.pi * (pr.p * pr.mu + pr.theta)
    )
    num = 2.0 * (pr.mu * (pr.mu + pr.sigma + pr.gamma) + (1.0 - pr.q) * pr.gamma * pr.sigma)
    num *= (pr.mu + pr.gamma) * pr.mu
    den = pr.pi * (pr.p * pr.mu + pr.theta) * ((pr.mu + pr.gamma) ** 2 + pr.q * pr.gamma * pr.sigma)
    return num / den * psi


def b_closed_form(params: ModelParams) -> float:
    pr = params
    m = (pr.mu + pr.gamma) ** 2 + pr.q * pr.gamma * pr.sigma
    return (pr.mu + pr.gamma) ** 2 * pr.pi * (pr.p * pr.mu + pr.theta) / (
        m * pr.mu * (pr.mu + pr.theta + pr.epsilon)
    )


# -- summary ---------------------------------------------------------------------


@dataclass(frozen=True)
class AnalysisSummary:
    params: ModelParams
    lambda_cap: float
    r0: float
    alpha_star: float
    alpha_star_corrected: float
    r0_critical: float | None
    r0_critical_printed: float | None
    r0_fold: float | None
    beta_star: float
    phi: float
    quadratic: QuadraticCoefficients
    regime: str
    crime_free: EquilibriumReport
    equilibria: list
    rejected_roots: list

    def to_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "r0": self.r0,
            "lambda": self.lambda_cap,
            "alpha_star": self.alpha_star,
            "alpha_star_corrected": self.alpha_star_corrected,
            "r0_critical": self.r0_critical,
            "r0_critical_printed": self.r0_critical_printed,
            "r0_fold": self.r0_fold,
            "beta_star": self.beta_star,
            "phi": self.phi,
            "quadratic": {"b0": self.quadratic.b0, "b1": self.quadratic.b1, "b2": self.quadratic.b2},
            "regime": self.regime,
            "crime_free": self.crime_free.to_dict(),
            "equilibria": [e.to_dict() for e in self.equilibria],
            "rejected_roots": [dict(zip(("S1", "S2", "C", "R"), s)) for s in self.rejected_roots],
        }


def analyze(params: ModelParams) -> AnalysisSummary:
    check_admissible(params)
    has_crit = params.alpha > 0 and params.beta > 0
    accepted, rejected = solve_endemic(params)
    return AnalysisSummary(
        params=params,
        lambda_cap=lambda_cap(params),
        r0=r0(params),
        alpha_star=alpha_star(params),
        alpha_star_corrected=alpha_star_corrected(params),
        r0_critical=r0_critical(params) if has_crit else None,
        r0_critical_printed=r0_critical_printed(params) if params.alpha > 0 else None,
        r0_fold=fold_r0(params),
        beta_star=beta_star(params),
        phi=phi(params),
        quadratic=quadratic_coefficients(params),
        regime=theorem2_regime(params),
        crime_free=crime_free_equilibrium(params),
        equilibria=accepted,
        rejected_roots=rejected,
    )


def summary_text(summary: AnalysisSummary) -> str:
    """Plain-text rendering of :class:`AnalysisSummary`."""

    def opt(x):
        return "n/a" if x is None else f"{x:.10g}"

    s = summary
    lines = [
        "parameters:",
        *(f"  {k:8s} = {v!r}" for k, v in s.params.as_dict().items()),
        "",
        "thresholds:",
        f"  Lambda                 = {s.lambda_cap:.10g}",
        f"  R0                     = {s.r0:.10g}",
        f"  beta*                  = {s.beta_star:.10g}",
        f"  alpha* (quoted form)   = {s.alpha_star:.10g}",
        f"  alpha* (sign change)   = {s.alpha_star_corrected:.10g}",
        f"  R0c (discriminant)     = {opt(s.r0_critical)}",
        f"  R0c (quoted form)      = {opt(s.r0_critical_printed)}",
        f"  R0 at fold (beta sweep)= {opt(s.r0_fold)}",
        f"  Phi                    = {s.phi:.10g}",
        f"  quadratic b2, b1, b0   = {s.quadratic.b2:.10g}, {s.quadratic.b1:.10g}, {s.quadratic.b0:.10g}",
        "",
        f"regime: {s.regime}",
        "",
        "equilibria:",
    ]
    for e in [s.crime_free, *s.equilibria]:
        st = ", ".join(f"{x:.10g}" for x in e.state)
        lines.append(f"  {e.kind:10s} ({st})  {e.stability}  residual {e.residual:.3g}")
        lines.append("      eigenvalues: " + ", ".join(f"{z.real:.6g}{z.imag:+.6g}j" for z in e.eigenvalues))
    for st in s.rejected_roots:
        lines.append("  rejected root with a negative component: " + ", ".join(f"{x:.6g}" for x in st))
    return "\n".join(lines) + "\n"
