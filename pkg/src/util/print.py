"""
This module formats the artifacts and summaries emitted by the toolkit.
It includes:

1. Artifact writers
   - Floats with 17 significant digits, so written values re-read bitwise
   - CSV tables with a fixed column order behind `# key: value` metadata lines
   - JSON records in pydantic declaration order

2. Human-readable summaries (stderr) for certificates, verified rules and
   design-search results

3. JSON validation against pydantic type adapters
"""

from __future__ import annotations

import csv
import math
from collections.abc import Iterable, Mapping, Sequence
from typing import IO, TYPE_CHECKING, Any

from pydantic import BaseModel, TypeAdapter, ValidationError

from ..util.constants import err
from ..util.exceptions import UsageError
from .types import T

if TYPE_CHECKING:
    from ..certify.records import EpsilonCertificate, RuleVerification
    from ..search.design import SearchResult

########################################################
#         Private method
########################################################


def _indent(text: str, indent_level: int) -> str:
    """Indent each line of text by the specified number of spaces."""
    return "\n".join("  " * indent_level + line for line in text.splitlines())


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _sci(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.6e}"


########################################################
#         Artifact writers
########################################################


def format_float(value: float) -> str:
    """Shortest-safe decimal: %.17g, with nan/inf spelled the way float() reads them."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


def metadata_lines(metadata: Mapping[str, Any]) -> list[str]:
    return [f"# {key}: {_cell(value)}" for key, value in metadata.items()]


def write_csv(
    stream: IO[str],
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    metadata: Mapping[str, Any] | None = None,
) -> int:
    """Write metadata comments, a header and rows; return the number of rows."""
    for line in metadata_lines(metadata or {}):
        stream.write(line + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(header)
    count = 0
    for row in rows:
        if len(row) != len(header):
            raise UsageError(
                err.USAGE_ERROR.format(error=f"row has {len(row)} cells for {len(header)} columns")
            )
        writer.writerow([_cell(value) for value in row])
        count += 1
    return count


def dump_json(record: BaseModel) -> str:
    return record.model_dump_json(indent=2)


########################################################
#         Summaries
########################################################


def certificate_summary(certificate: EpsilonCertificate) -> str:
    """Emoji-headed block describing a certificate or a refusal."""
    header = (
        f"\n✅ Certificate (t={certificate.t}, N={certificate.n}, {certificate.kind})"
        if certificate.valid
        else f"\n❌ Refused (t={certificate.t}, N={certificate.n}, {certificate.kind})"
    )
    lines = [
        header,
        f"      ε̲     → {_sci(certificate.eps_lower)}",
        f"      rad   → {_sci(certificate.rad)}",
        f"      ρ     → {_sci(certificate.rho)}",
        f"      τ     → {_sci(certificate.tau)}",
        f"      κ     → {_sci(certificate.kappa)}",
    ]
    if certificate.sigma_star is not None:
        lines.append(f"      σ*    → {_sci(certificate.sigma_star)}")
    if certificate.eps_center_weights is not None:
        lines.append(f"      ε(X̃)  → {_sci(certificate.eps_center_weights)} (solved weights)")
    if certificate.eps_center_formula is not None:
        lines.append(f"      ε(X̃)  → {_sci(certificate.eps_center_formula)} (bound at σ)")

    checks = ["\n🔎 Hypotheses:"]
    checks.extend(
        f"      {'✔️' if ok else '✖️'} {name}" for name, ok in certificate.hypothesis_ok.items()
    )
    return "\n".join(_indent(line, 1) for line in lines) + "\n" + "\n".join(checks)


def verification_summary(verification: RuleVerification) -> str:
    lines = [
        f"\n📐 Rule (t={verification.t}, N={verification.n})",
        f"      ‖Yᵀw − √4π e₁‖ → {verification.residual:.3e}",
        f"      Σ w            → {format_float(verification.weight_sum)}",
        f"      ε̂              → {_sci(verification.eps_hat)}",
    ]
    return "\n".join(lines)


def search_summary(result: SearchResult) -> str:
    status = "✔️ Converged" if result.converged else "🟡 Not converged"
    lines = [
        f"\n🧭 Design search (t={result.t}, ε={result.epsilon:g}, N={result.n})",
        f"      Status     → {status}",
        f"      ‖r‖        → {result.residual:.3e}",
        f"      ε̂          → {_sci(result.eps_hat)}",
        f"      Iterations → {result.iterations}",
        f"      Seed       → {result.seed}",
    ]
    return "\n".join(lines)


########################################################
#         JSON validation
########################################################


def validate_json(json_str: str, type_adapter: TypeAdapter[T]) -> T:
    """Parse and validate a JSON document; raise UsageError on mismatch."""
    try:
        return type_adapter.validate_json(json_str)
    except ValidationError as e:
        raise UsageError(err.USAGE_ERROR.format(error=f"invalid JSON: {e}")) from e


__all__ = [
    "certificate_summary",
    "dump_json",
    "format_float",
    "metadata_lines",
    "search_summary",
    "validate_json",
    "verification_summary",
    "write_csv",
]
