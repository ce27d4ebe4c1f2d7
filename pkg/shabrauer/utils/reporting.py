# shabrauer/utils/reporting.py

"""Plain-text rendering of result documents for the command line."""

from typing import Dict, List

import pandas as pd

from shabrauer.algebra.linalg import AbelianGroupStructure
from shabrauer.models import RestrictionRow, ResultDocument, StructureModel
from shabrauer.sha import ShaResult


def structure_frame(structures: Dict[str, AbelianGroupStructure]) -> pd.DataFrame:
    rows = [
        {
            "group": name,
            "structure": str(s),
            "free_rank": s.free_rank,
            "invariant_factors": " ".join(str(d) for d in s.invariant_factors) or "-",
            "order": "inf" if s.order is None else s.order,
        }
        for name, s in structures.items()
    ]
    return pd.DataFrame(rows, columns=["group", "structure", "free_rank", "invariant_factors", "order"])


def restriction_rows(sha: ShaResult) -> List[RestrictionRow]:
    return [
        RestrictionRow(
            subgroup=list(report.subgroup.element_indices),
            order=report.subgroup.order,
            target=StructureModel.from_structure(report.target_structure),
            matrix=report.matrix.to_rows(),
            kernel=StructureModel.from_structure(report.kernel_structure),
        )
        for report in sha.per_subgroup_report
    ]


def restriction_frame(rows: List[RestrictionRow]) -> pd.DataFrame:
    """One line per cyclic subgroup: its elements, the target H^1 and what the restriction kills."""
    return pd.DataFrame(
        [
            {
                "subgroup": "{" + ", ".join(str(a) for a in row.subgroup) + "}",
                "order": row.order,
                "H1(subgroup)": str(row.target.to_structure()),
                "kernel": str(row.kernel.to_structure()),
            }
            for row in rows
        ],
        columns=["subgroup", "order", "H1(subgroup)", "kernel"],
    )


def render_text(result: ResultDocument) -> str:
    lines = [f"command: {result.command}"]
    if result.input_digest:
        lines.append(f"input sha256: {result.input_digest}")
    if result.error is not None:
        lines.append(f"error ({result.error.type}): {result.error.message}")
        lines.append(f"exit status: {result.exit_status}")
        return "\n".join(lines)
    if result.structures:
        structures = {name: model.to_structure() for name, model in result.structures.items()}
        lines.append(structure_frame(structures).to_string(index=False))
    if result.generators:
        lines.append(f"{len(result.generators)} cocycle generator(s) (use --json for the value tables)")
    if result.restrictions:
        lines.append("restrictions to cyclic subgroups:")
        lines.append(restriction_frame(result.restrictions).to_string(index=False))
    if result.sha is not None:
        lines.append(f"Sha^{result.degree or 1}_omega,alg = {result.sha.to_structure()}")
    if result.interpretation:
        lines.append(f"interpretation: {result.interpretation} ({result.theorem})")
        lines.append(f"  {result.statement}")
        for caveat in result.caveats:
            lines.append(f"  caveat: {caveat}")
    if result.exponents is not None:
        lines.append("exponent matrix (one column per relator):")
        if result.exponents:
            lines.append(pd.DataFrame(result.exponents).to_string(index=False, header=False))
        else:
            lines.append("  (empty)")
    if result.oracle is not None:
        verdict = "agrees" if result.oracle.agrees else "DISAGREES"
        lines.append(f"oracle {result.oracle.oracle}: {result.oracle.structure.to_structure()} ({verdict})")
    for diagnostic in result.diagnostics:
        status = "ok" if diagnostic.valid else "INVALID"
        lines.append(f"{diagnostic.name}: {status}")
        lines.extend(f"  {failure}" for failure in diagnostic.failures)
    return "\n".join(lines)
