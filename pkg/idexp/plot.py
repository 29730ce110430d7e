"""SVG rendering of two-dimensional polyhedra."""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .errors import PreconditionError  # noqa: E402
from .polyhedra import OrthantPolyhedron  # noqa: E402

logger = logging.getLogger(__name__)

# stable ids and no timestamp, so equal polyhedra give equal files
matplotlib.rcParams["svg.hashsalt"] = "idexp"
matplotlib.rcParams["svg.fonttype"] = "none"


def render_polyhedron(P: OrthantPolyhedron, path: Union[str, Path], title: Optional[str] = None) -> Path:
    """Generator points as circles, vertices filled, the boundary and the dashed delta line."""
    if P.dimension != 2:
        raise PreconditionError(f"Plots exist for two-dimensional polyhedra only, got dimension {P.dimension}")
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5, 5))
    try:
        if P.is_empty:
            ax.text(0.5, 0.5, "empty polyhedron", ha="center", va="center", transform=ax.transAxes)
        else:
            points = sorted(P.points)
            vertices = list(P.vertices)
            reach = max(max(float(x) for p in points for x in p), 1.0) * 1.25
            ax.scatter([float(p[0]) for p in points], [float(p[1]) for p in points],
                       facecolors="none", edgecolors="tab:blue", label="points")
            ax.scatter([float(v[0]) for v in vertices], [float(v[1]) for v in vertices],
                       color="tab:red", zorder=3, label="vertices")
            xs = [float(vertices[0][0])] + [float(v[0]) for v in vertices] + [reach]
            ys = [reach] + [float(v[1]) for v in vertices] + [float(vertices[-1][1])]
            ax.plot(xs, ys, color="black", linewidth=1)
            delta = P.delta()
            ax.plot([0, float(delta)], [float(delta), 0], linestyle="--", color="tab:gray",
                    label=f"delta = {_fraction_label(delta)}")
            for v in vertices:
                ax.annotate(f"({_fraction_label(v[0])}, {_fraction_label(v[1])})",
                            (float(v[0]), float(v[1])), textcoords="offset points", xytext=(5, 5), fontsize=8)
            ax.set_xlim(0, reach)
            ax.set_ylim(0, reach)
            ax.legend(loc="upper right", fontsize=8)
        ax.set_aspect("equal")
        if title:
            ax.set_title(title)
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    logger.info("Wrote %s", path)
    return path


def _fraction_label(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
