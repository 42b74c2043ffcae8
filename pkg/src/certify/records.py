"""
Structured, JSON-serializable records emitted by the certification layer.

Every record carries the inputs needed to recompute its conclusion, so a
certificate read back from disk can be re-checked without the original data.
"""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field

########################################################
#              Rule verification
########################################################


class RuleVerification(BaseModel):
    """Exactness residual and weight spread of a concrete quadrature rule."""

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    t: int
    n: int
    residual: float
    weight_sum: float
    eps_hat: float

    def passes(self, tol: float, epsilon: float) -> bool:
        return self.residual < tol and self.eps_hat <= epsilon + 1e-12


########################################################
#              Certificates
########################################################


class EpsilonCertificate(BaseModel):
    """Lower bound ε̲ such that every admissible point set is a t_ε-design for ε ≥ ε̲.

    `kind="enclosures"` certifies every selection from an enclosure set;
    `rad` is the enclosure radius and ε̲ = 2τ·rad·κ / (1 − 4τ·rad·κ).
    `kind="point_set"` certifies one point set near a known design;
    `rad` then holds the Hausdorff distance σ and ε̲ = τσκ / (1 − τσκ).
    """

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    kind: Literal["enclosures", "point_set"]
    t: int
    n: int
    rad: float
    rho: float
    tau: float
    kappa: float
    eps_lower: float | None
    hypothesis_ok: dict[str, bool]
    assumes_design_exists: bool = True
    sigma_star: float | None = None
    eps_center_weights: float | None = None
    eps_center_formula: float | None = None
    center_resolution: float | None = None
    meta: dict[str, Any] = Field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.eps_lower is not None and all(self.hypothesis_ok.values())

    def failed_hypotheses(self) -> list[str]:
        return [name for name, ok in self.hypothesis_ok.items() if not ok]
