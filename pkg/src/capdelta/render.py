"""ASCII and SVG rendering of CR diagrams.

Human performance runs up the vertical axis, autonomous performance along
the horizontal one. One cell per grid point inside both capacities.
"""

from __future__ import annotations

from typing import Optional
from xml.sax.saxutils import escape

from .aggregation import AggregationKind
from .crsolver import ControlDistribution, SpaceLabel, classify_point, requirement_line

CHOSEN = "*"
ON_LINE = "#"
CELL = {
    SpaceLabel.COLLABORATIVE: "c",
    SpaceLabel.SUMMATIVE_ONLY: "s",
    SpaceLabel.INSUFFICIENT: ".",
}
LEGEND = "legend: * chosen  # requirement line  c collaborative  s summative-only  . insufficient"


def cell_grid(
    requirement: int,
    kind: AggregationKind,
    cap_auto: int,
    cap_human: int,
    chosen: Optional[ControlDistribution] = None,
) -> list[str]:
    """Rows of cell characters, top row = highest human performance."""
    line = set(requirement_line(requirement, kind, cap_auto, cap_human))
    rows = []
    for h in range(cap_human, -1, -1):
        row = []
        for a in range(cap_auto + 1):
            p = ControlDistribution(a, h)
            if p == chosen:
                row.append(CHOSEN)
            elif p in line:
                row.append(ON_LINE)
            else:
                row.append(CELL[classify_point(p, requirement)])
        rows.append("".join(row))
    return rows


def render_ascii(
    requirement: int,
    kind: AggregationKind,
    cap_auto: int,
    cap_human: int,
    chosen: Optional[ControlDistribution] = None,
) -> str:
    rows = cell_grid(requirement, kind, cap_auto, cap_human, chosen)
    width = len(str(max(cap_auto, cap_human)))
    out = [f"CR diagram: r={requirement} kind={kind.value} cap_auto={cap_auto} cap_human={cap_human}", "h"]
    for h, row in zip(range(cap_human, -1, -1), rows):
        out.append(f"{h:>{width}} |{row}")
    out.append(" " * width + " +" + "-" * (cap_auto + 1))
    ticks = "".join(str(a % 10) for a in range(cap_auto + 1))
    out.append(" " * width + "  " + ticks + " a")
    if chosen is not None:
        out.append(f"chosen: {chosen}")
    out.append(LEGEND)
    return "\n".join(out) + "\n"


def parse_ascii_grid(text: str) -> list[str]:
    """Cell rows back out of :func:`render_ascii` output."""
    return [line.split("|", 1)[1] for line in text.splitlines() if "|" in line]


_FILL = {
    SpaceLabel.COLLABORATIVE: "#cfe8cf",
    SpaceLabel.SUMMATIVE_ONLY: "#f6e3b4",
    SpaceLabel.INSUFFICIENT: "#ffffff",
}


def render_svg(
    requirement: int,
    kind: AggregationKind,
    cap_auto: int,
    cap_human: int,
    chosen: Optional[ControlDistribution] = None,
    cell: int = 40,
) -> str:
    margin = 40
    width = margin * 2 + cell * (cap_auto + 1)
    height = margin * 2 + cell * (cap_human + 1)

    def x(a: float) -> float:
        return margin + cell * (a + 0.5)

    def y(h: float) -> float:
        return height - margin - cell * (h + 0.5)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{escape(f'CR diagram r={requirement} ({kind.value})')}</title>",
    ]
    for a in range(cap_auto + 1):
        for h in range(cap_human + 1):
            label = classify_point(ControlDistribution(a, h), requirement)
            parts.append(
                f'<rect class="{label.value}" x="{x(a) - cell / 2}" y="{y(h) - cell / 2}" '
                f'width="{cell}" height="{cell}" fill="{_FILL[label]}" stroke="#bbbbbb"/>'
            )
    line = requirement_line(requirement, kind, cap_auto, cap_human)
    if len(line) > 1:
        pts = " ".join(f"{x(p.auto_perf)},{y(p.human_perf)}" for p in sorted(line))
        parts.append(f'<polyline class="requirement-line" points="{pts}" fill="none" stroke="#c0392b" stroke-width="2"/>')
    for p in line:
        parts.append(f'<circle class="line-point" cx="{x(p.auto_perf)}" cy="{y(p.human_perf)}" r="4" fill="#c0392b"/>')
    if chosen is not None:
        parts.append(
            f'<circle class="chosen" cx="{x(chosen.auto_perf)}" cy="{y(chosen.human_perf)}" r="9" fill="#000000"/>'
        )
    base_y = height - margin
    parts.append(f'<line x1="{margin}" y1="{base_y}" x2="{width - margin}" y2="{base_y}" stroke="#000000"/>')
    parts.append(f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{base_y}" stroke="#000000"/>')
    for a in range(cap_auto + 1):
        parts.append(f'<text x="{x(a)}" y="{base_y + 16}" text-anchor="middle" font-size="12">{a}</text>')
    for h in range(cap_human + 1):
        parts.append(f'<text x="{margin - 8}" y="{y(h) + 4}" text-anchor="end" font-size="12">{h}</text>')
    parts.append(
        f'<text x="{width / 2}" y="{height - 6}" text-anchor="middle" font-size="13">autonomous performance</text>'
    )
    parts.append(
        f'<text x="14" y="{height / 2}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 14 {height / 2})">human performance</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_cr_diagram(
    requirement: int,
    kind: AggregationKind,
    cap_auto: int,
    cap_human: int,
    chosen: Optional[ControlDistribution] = None,
    format: str = "ascii",
) -> str:
    if format == "ascii":
        return render_ascii(requirement, kind, cap_auto, cap_human, chosen)
    if format == "svg":
        return render_svg(requirement, kind, cap_auto, cap_human, chosen)
    raise ValueError(f"unsupported diagram format {format!r}")
