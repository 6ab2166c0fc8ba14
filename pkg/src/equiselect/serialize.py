"""Machine-readable output formats: trajectory CSV and density JSON.

Floats in CSV are written with 17 significant digits so binary64 values
survive a text round trip; JSON floats rely on Python's shortest
round-trip repr, which is equally lossless.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .validation import check_density


def format_float(x: float) -> str:
    return f"{float(x):.17g}"


def trajectory_csv(times, densities, labels) -> str:
    """CSV text with header ``t,<profile labels...>``, one row per sample."""
    lines = ["t," + ",".join(labels)]
    for t, row in zip(times, densities):
        lines.append(",".join([format_float(t)] + [format_float(v) for v in row]))
    return "\n".join(lines) + "\n"


def density_to_json(density, labels) -> str:
    """JSON object mapping profile label to probability, in index order."""
    return json.dumps({lab: float(v) for lab, v in zip(labels, density)}, indent=2)


def density_from_json(text: str, labels) -> np.ndarray:
    """Parse a density JSON back to a vector in profile-index order.

    Requires exactly the expected labels and a total mass of 1 within
    1e-12, which makes every emitted density re-loadable.
    """
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ValueError("density document must be a JSON object")
    expected = list(labels)
    if sorted(doc) != sorted(expected):
        missing = sorted(set(expected) - set(doc))
        extra = sorted(set(doc) - set(expected))
        raise ValueError(f"density labels mismatch (missing {missing}, extra {extra})")
    vec = np.array([float(doc[lab]) for lab in expected])
    return check_density(vec, len(expected), name="density")


def diagnostics_csv(report) -> str:
    """CSV text ``t,H,I,F`` for a diagnostics report."""
    lines = ["t,H,I,F"]
    for t, h, i, f in zip(report.times, report.entropy, report.fisher,
                          report.free_energy):
        lines.append(",".join(format_float(v) for v in (t, h, i, f)))
    return "\n".join(lines) + "\n"


def diagnostics_summary_json(report) -> str:
    """JSON summary {C, R2, max_defect} of a diagnostics report."""
    def clean(v):
        return None if isinstance(v, float) and math.isnan(v) else v
    return json.dumps({
        "C": clean(report.decay_rate),
        "R2": clean(report.r_squared),
        "max_defect": clean(report.max_defect),
    }, indent=2)


def selection_to_json(result) -> str:
    """JSON body of a selection run.

    Carries the equilibrium masses, the tie-aware order, the residual
    (non-equilibrium) mass, the full limit density, and one summary entry
    per annealing level.
    """
    nash = [
        {"profile": lab, "mass": float(mass)}
        for lab, mass in zip(result.nash_labels(), result.nash_masses)
    ]
    history = [
        {
            "beta": rec.beta,
            "converged": rec.converged,
            "residual": None if math.isnan(rec.residual) else rec.residual,
            "delta_prev": None if math.isnan(rec.delta_prev) else rec.delta_prev,
        }
        for rec in result.history
    ]
    body = {
        "nash": nash,
        "order": [list(cls) for cls in result.order],
        "residual_mass": result.residual_mass,
        "limit": {lab: float(v) for lab, v in zip(result.labels, result.limit_density)},
        "beta_history": history,
    }
    return json.dumps(body, indent=2)
