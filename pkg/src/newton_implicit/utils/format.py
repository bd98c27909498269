"""Pure formatting helpers: polynomial and polygon text, JSON dumps and the
SVG rendering used by the plot command. Nothing here computes geometry."""
from __future__ import annotations

import io
import json
from fractions import Fraction
from typing import Iterable, Mapping, Optional

import matplotlib

matplotlib.use("Agg")

from matplotlib import pyplot as plt  # noqa: E402
from matplotlib.patches import Polygon as PolygonPatch  # noqa: E402

_SUPERSCRIPT_PLUS = "⁺"

# fixed so the ids matplotlib writes into the SVG do not change between runs
_SVG_RC = {"svg.hashsalt": "newton-implicit", "svg.fonttype": "none"}

PREDICTED_COLOR = "#1f77b4"
ORACLE_COLOR = "#d62728"
GRID_COLOR = "#b0b0b0"


def format_monomial(e0: int, e1: int) -> str:
    parts = []
    for name, e in (("x", e0), ("y", e1)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(terms: Mapping[tuple, Fraction]) -> str:
    """Readable form of a bivariate polynomial given as {(e0, e1): coeff},
    highest total degree first, e.g. 'x^3 + y^3 - 3*x*y'."""
    items = [(e, Fraction(c)) for e, c in terms.items() if c != 0]
    if not items:
        return "0"
    items.sort(key=lambda item: (-(item[0][0] + item[0][1]), -item[0][0]))

    out = []
    for k, ((e0, e1), c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        mono = format_monomial(e0, e1)
        mag_text = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        if not mono:
            body = mag_text
        elif mag == 1:
            body = mono
        else:
            body = f"{mag_text}*{mono}"
        if k == 0:
            out.append(f"-{body}" if sign == "-" else body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def format_vertices(vertices: Iterable[tuple]) -> str:
    return ", ".join(f"({x}, {y})" for x, y in vertices)


def format_selection(marked: Iterable[tuple]) -> str:
    """Support points with the selected ones marked, e.g. '{0+, 1, 2+}'
    with a superscript plus."""
    return "{" + ", ".join(f"{a}{_SUPERSCRIPT_PLUS}" if chosen else str(a) for a, chosen in marked) + "}"


def dump_json(data, compact: bool = False) -> str:
    """Sorted keys; two-space indentation, or one line when compact."""
    if compact:
        return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)


def format_report(report: dict) -> str:
    """Plain-text rendering of a RunReport dictionary."""
    lines = []
    if "case" in report:
        lines.append(f"case: {report['case']}")
    if "predicted" in report:
        lines.append(f"predicted: {format_vertices(report['predicted']['polygon']['vertices'])}")
    if "oracle" in report:
        lines.append(f"oracle: {format_vertices(report['oracle']['vertices'])}")
    if "phi" in report:
        lines.append(f"phi: {report['phi']['text']}")
    for name, value in sorted(report.get("verdicts", {}).items()):
        lines.append(f"{name}: {'yes' if value else 'no'}")
    if "degree_bounds" in report:
        b = report["degree_bounds"]
        lines.append(f"degree bounds: total {b['total']}, in x {b['deg_x']}, in y {b['deg_y']}")
    if "timing" in report:
        for step, seconds in sorted(report["timing"].items()):
            lines.append(f"time {step}: {seconds:.3f}s")
    return "\n".join(lines)


def _draw_outline(ax, vertices, color, label, linestyle="-"):
    if len(vertices) >= 3:
        ax.add_patch(PolygonPatch(vertices, closed=True, fill=False, edgecolor=color,
                                  linewidth=2, linestyle=linestyle, label=label))
    else:
        xs = [v[0] for v in vertices]
        ys = [v[1] for v in vertices]
        ax.plot(xs, ys, color=color, linewidth=2, linestyle=linestyle, marker="o", label=label)


def render_svg(vertices, oracle_vertices: Optional[Iterable[tuple]] = None,
               scale: int = 40, margin: int = 1) -> str:
    """SVG of the lattice grid with the predicted polygon and, optionally,
    the oracle polygon drawn dashed on top. Every predicted vertex is
    labelled with its coordinates. Output is byte-stable for fixed input."""
    vertices = [tuple(v) for v in vertices]
    oracle_vertices = [tuple(v) for v in oracle_vertices] if oracle_vertices is not None else None
    everything = vertices + (oracle_vertices or [])
    width = max(v[0] for v in everything)
    height = max(v[1] for v in everything)

    with matplotlib.rc_context(_SVG_RC):
        size = ((width + 2 * margin) * scale / 72, (height + 2 * margin) * scale / 72)
        fig = plt.figure(figsize=size, dpi=72)
        ax = fig.add_axes([0, 0, 1, 1])
        ax.set_xlim(-margin, width + margin)
        ax.set_ylim(-margin, height + margin)
        ax.set_aspect("equal")
        ax.axis("off")

        grid_x = [x for x in range(width + 1) for _ in range(height + 1)]
        grid_y = [y for _ in range(width + 1) for y in range(height + 1)]
        ax.scatter(grid_x, grid_y, s=4, color=GRID_COLOR, zorder=1)

        _draw_outline(ax, vertices, PREDICTED_COLOR, "predicted")
        if oracle_vertices is not None:
            _draw_outline(ax, oracle_vertices, ORACLE_COLOR, "oracle", linestyle="--")
        for x, y in vertices:
            ax.annotate(f"({x}, {y})", (x, y), textcoords="offset points", xytext=(4, 4), fontsize=8)

        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
        plt.close(fig)
    return buffer.getvalue()
