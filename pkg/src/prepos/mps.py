"""Free-format MPS export, the cross-validation seam against external solvers."""

from __future__ import annotations

from .formulation import LinearProgram

OBJECTIVE_ROW = "COST"


def _num(value: float) -> str:
    return repr(float(value))


def row_names(lp: LinearProgram) -> list[str]:
    """Deterministic, unique row names carrying the constraint provenance tag."""
    return [f"{row.tag}_r{k}" for k, row in enumerate(lp.rows)]


def export_mps(lp: LinearProgram, name: str = "PREPOS") -> str:
    """Render the LP as free-format MPS text, byte-identical per input.

    Column names are the VariableKey encodings; columns fixed to zero are
    emitted as FX 0 bounds.  A fully empty LP renders as NAME/ENDATA only.
    """
    if lp.n_columns == 0 and lp.n_rows == 0:
        return f"NAME {name}\nENDATA\n"

    names = row_names(lp)
    lines = [f"NAME {name}", "ROWS", f" N {OBJECTIVE_ROW}"]
    for k, row in enumerate(lp.rows):
        sense = "E" if row.sense == "=" else "L"
        lines.append(f" {sense} {names[k]}")

    entries: list[list[tuple[str, float]]] = [[] for _ in range(lp.n_columns)]
    for k, row in enumerate(lp.rows):
        for col, coef in sorted(row.coeffs.items()):
            if coef != 0.0:
                entries[col].append((names[k], coef))

    lines.append("COLUMNS")
    for col, key in enumerate(lp.columns):
        cname = key.encode()
        lines.append(f" {cname} {OBJECTIVE_ROW} {_num(lp.objective[col])}")
        for rname, coef in entries[col]:
            lines.append(f" {cname} {rname} {_num(coef)}")

    lines.append("RHS")
    for k, row in enumerate(lp.rows):
        if row.rhs != 0.0:
            lines.append(f" RHS {names[k]} {_num(row.rhs)}")

    fixed = [lp.columns[k].encode() for k in range(lp.n_columns) if lp.fixed_zero[k]]
    if fixed:
        lines.append("BOUNDS")
        for cname in fixed:
            lines.append(f" FX BND {cname} 0.0")

    lines.append("ENDATA")
    return "\n".join(lines) + "\n"
