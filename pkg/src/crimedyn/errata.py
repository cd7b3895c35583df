"""Side-by-side comparison of quoted numbers with recomputed ones.

Each item keeps the quoted value verbatim next to the recomputed value and is
marked PASS or MISMATCH. Nothing here changes what the rest of the package
computes; the report only documents where quoted numbers and the model's own
formulas disagree.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import analysis, sensitivity
from ._io import dumps
from .experiments import FIG2, TABLE3, TABLE4
from .model import rhs

PASS = "PASS"
MISMATCH = "MISMATCH"


@dataclass(frozen=True)
class ErrataItem:
    id: str
    description: str
    reported: str
    recomputed: str
    status: str
    note: str = ""


def _numeric(id_, description, reported, recomputed, tol, note="") -> ErrataItem:
    status = PASS if abs(reported - recomputed) <= tol else MISMATCH
    return ErrataItem(id_, description, repr(reported), f"{recomputed:.10g}", status, note)


def _r0_items() -> list[ErrataItem]:
    r3, r4 = analysis.r0(TABLE3.params), analysis.r0(TABLE4.params)
    return [
        _numeric("table3-R0", "R0 for the crime-free parameter table (caption)", 0.8494, r3, 5e-4),
        _numeric("table3-R0-text", "R0 for the crime-free parameter table (text)", 0.6462, r3, 5e-4,
                 "neither quoted value follows from the R0 formula at the tabulated parameters"),
        _numeric("table4-R0", "R0 for the endemic parameter table (text)", 1.5108, r4, 5e-4),
        _numeric("table4-R0-caption", "R0 for the endemic parameter table (caption)", 1.2883, r4, 5e-4),
    ]


def _fig2_items() -> list[ErrataItem]:
    pr = FIG2.params
    cap = pr.replace(alpha=0.0002)
    a_star, a_corr = analysis.alpha_star(pr), analysis.alpha_star_corrected(pr)
    items = [
        _numeric("fig2-alpha-star", "quoted imitation threshold at the bifurcation-figure parameters",
                 0.0035, a_star, 2e-4,
                 f"the threshold at which the linear coefficient of the endemic quadratic changes sign "
                 f"is {a_corr:.6g}"),
    ]
    rc = analysis.r0_critical(pr)
    note = (
        f"discriminant threshold {rc:.6g} (alpha=0.00018) / {analysis.r0_critical(cap):.6g} (alpha=0.0002); "
        f"fold along a beta sweep {analysis.fold_r0(pr):.6g} / {analysis.fold_r0(cap):.6g}; "
        f"quoted closed form {analysis.r0_critical_printed(pr):.6g} / {analysis.r0_critical_printed(cap):.6g}"
    )
    items.append(_numeric("fig2-R0c", "critical threshold quoted in the bifurcation figure", 0.3815, rc, 5e-4, note))
    cond = pr.alpha > a_star
    items.append(
        ErrataItem(
            "fig2-backward-condition",
            "backward-bifurcation condition alpha > alpha* at the figure parameters",
            f"backward bifurcation shown with alpha={pr.alpha!r}, alpha*=0.0035",
            f"alpha > quoted alpha*: {cond}; alpha > corrected threshold {a_corr:.6g}: {pr.alpha > a_corr}",
            PASS if cond else MISMATCH,
            "with the quoted threshold the figure contradicts the root-count classification; with the "
            "corrected one the backward bifurcation is genuine",
        )
    )
    return items


def _sensitivity_items() -> list[ErrataItem]:
    items = []
    for row in sensitivity.sensitivity_table(TABLE4.params):
        dev = row.paper_deviation
        items.append(
            ErrataItem(
                f"sensitivity-{row.param_name}",
                f"sensitivity index of R0 with respect to {row.param_name} at the endemic table",
                repr(row.paper_printed),
                f"{row.derived_analytic:.10g}",
                MISMATCH if row.paper_mismatch else PASS,
                f"finite difference {row.finite_difference:.10g}; quoted closed form gives "
                f"{row.paper_formula:.10g}; relative deviation {dev:.3g}",
            )
        )
    return items


def _quadratic_items() -> list[ErrataItem]:
    pr = TABLE4.params
    quoted = analysis.quadratic_coefficients_printed(pr)
    exact = analysis.quadratic_coefficients(pr)
    c_q = max(analysis.solve_quadratic(quoted.b2, quoted.b1, quoted.b0))
    c_e = max(analysis.solve_quadratic(exact.b2, exact.b1, exact.b0))
    res_q = max(abs(v) for v in rhs(pr, analysis.endemic_state(pr, c_q)))
    res_e = max(abs(v) for v in rhs(pr, analysis.endemic_state(pr, c_e)))
    return [
        ErrataItem(
            "quadratic-b1",
            "linear coefficient of the endemic quadratic at the endemic table",
            f"b1={quoted.b1:.6g} (root C={c_q:.6g}, vector-field residual {res_q:.3g})",
            f"b1={exact.b1:.6g} (root C={c_e:.6g}, vector-field residual {res_e:.3g})",
            MISMATCH,
            "the quoted b1 uses alpha*, which is not the sign-change point of the linear coefficient",
        )
    ]


def _center_manifold_items() -> list[ErrataItem]:
    items = []
    for name, pr in (("table4", TABLE4.params), ("fig2", FIG2.params)):
        cm = analysis.center_manifold_coefficients(pr)
        items.append(
            ErrataItem(
                f"{name}-a-sign",
                f"sign of the center-manifold coefficient a at the {name} parameters",
                f"a > 0 (quoted closed form {analysis.a_printed(pr):.6g})",
                f"a = {cm.a:.6g} (finite-difference contraction {cm.a_numeric:.6g})",
                PASS if cm.a > 0 else MISMATCH,
                "a > 0 exactly when alpha exceeds the corrected threshold "
                f"{analysis.alpha_star_corrected(pr):.6g}",
            )
        )
    pr = TABLE4.params
    jac = analysis.jacobian(pr.replace(beta=analysis.beta_star(pr)), analysis.crime_free_state(pr))
    w = analysis.right_null_vector_printed(pr)
    rel = np.linalg.norm(jac @ w) / (np.linalg.norm(jac, 2) * np.linalg.norm(w))
    items.append(
        ErrataItem(
            "jacobian-bifurcation-sign",
            "entry (S2 row, C column) of the Jacobian at the bifurcation point, and the quoted right null vector",
            "+Lambda/(mu+gamma); quoted w solves J w = 0",
            f"{jac[1, 2]:.6g} (negative); relative residual of the quoted w against the analytic Jacobian {rel:.3g}",
            MISMATCH,
            "the quoted w is a null vector of the sign-flipped matrix only",
        )
    )
    return items


def errata_items() -> list[ErrataItem]:
    return _r0_items() + _fig2_items() + _sensitivity_items() + _quadratic_items() + _center_manifold_items()


def errata_text(items: list[ErrataItem]) -> str:
    lines = ["Errata report: quoted values against recomputed values", ""]
    for it in items:
        lines.append(f"[{it.status}] {it.id}: {it.description}")
        lines.append(f"    reported:   {it.reported}")
        lines.append(f"    recomputed: {it.recomputed}")
        if it.note:
            lines.append(f"    note:       {it.note}")
    n_bad = sum(it.status == MISMATCH for it in items)
    lines += ["", f"{len(items)} items, {len(items) - n_bad} PASS, {n_bad} MISMATCH"]
    return "\n".join(lines) + "\n"


def errata_json(items: list[ErrataItem]) -> str:
    return dumps([asdict(it) for it in items])
