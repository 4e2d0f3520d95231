"""
Plain-text table utilities shared by the report renderers.
"""
from typing import List, Optional, Sequence, Any


def format_cell(value: Any, precision: int = 2) -> str:
    """
    Render a single cell value.

    Args:
        value: Cell content; floats are fixed-point, None is blank
        precision: Digits after the decimal point for floats

    Returns:
        Cell text
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.{precision}f}"
    return str(value)


def render_table(
    headers: Sequence[str],
    rows: Sequence[Sequence[Any]],
    title: Optional[str] = None,
    precision: int = 2,
) -> str:
    """
    Render rows as an aligned plain-text table.

    The first column is left-aligned (row labels), the rest right-aligned.

    Args:
        headers: Column headers
        rows: Row values, one sequence per row
        title: Optional title line printed above the table
        precision: Float precision passed to format_cell

    Returns:
        Table text without a trailing newline
    """
    cells: List[List[str]] = [list(headers)]
    cells.extend([format_cell(v, precision) for v in row] for row in rows)

    widths = [0] * len(headers)
    for row in cells:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))

    def _line(row: List[str]) -> str:
        parts = []
        for i, cell in enumerate(row):
            parts.append(cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i]))
        return "  ".join(parts).rstrip()

    lines = []
    if title:
        lines.append(title)
    lines.append(_line(cells[0]))
    lines.append("  ".join("-" * w for w in widths))
    lines.extend(_line(row) for row in cells[1:])
    return "\n".join(lines)


def render_key_values(pairs: Sequence[tuple], title: Optional[str] = None) -> str:
    """Render (key, value) pairs as 'key: value' lines with aligned colons."""
    width = max((len(str(k)) for k, _ in pairs), default=0)
    lines = [title] if title else []
    lines.extend(f"{str(k).ljust(width)} : {format_cell(v, 4)}" for k, v in pairs)
    return "\n".join(lines)
