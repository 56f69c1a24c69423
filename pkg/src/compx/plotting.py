"""Self-contained plot rendering: observations plus all fitted family curves.

SVG is the canonical output (diffable, no display needed); the terminal
renderer is a best-effort unicode sketch of the same picture. The best
model's curve is emphasized in both.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyPlotError
from .families import ComplexityFamily, transform
from .fitting import BenchmarkResult, MeasurementSeries

_COLORS = {
    ComplexityFamily.CONSTANT: "#888888",
    ComplexityFamily.LOG: "#1f77b4",
    ComplexityFamily.SQUAREROOT: "#2ca02c",
    ComplexityFamily.LINEAR: "#ff7f0e",
    ComplexityFamily.NLOGN: "#9467bd",
    ComplexityFamily.QUADRATIC: "#d62728",
    ComplexityFamily.CUBIC: "#8c564b",
}

_WIDTH, _HEIGHT = 640, 440
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 150, 56, 48


@dataclass(frozen=True)
class PlotSpec:
    """Everything a renderer needs: points, per-family lines, emphasis."""

    resource: str
    points: tuple                 # ((size, value), ...) one per replicate
    curves: dict                  # family -> (intercept, slope)
    best: ComplexityFamily
    subtitle: tuple = ("", "")


def plot_spec_from(result: BenchmarkResult, series: MeasurementSeries,
                   subtitle=("", "")) -> PlotSpec:
    """Assemble a PlotSpec from a benchmark result and its series."""
    curves = {fam: (fit.intercept, fit.slope) for fam, fit in result.fits.items()}
    return PlotSpec(
        resource=series.resource.value,
        points=tuple(zip(series.sizes, series.values)),
        curves=curves,
        best=result.best,
        subtitle=tuple(subtitle),
    )


def _validate(spec: PlotSpec):
    if not spec.points:
        raise EmptyPlotError("nothing to plot: no observations")
    if len({s for s, _ in spec.points}) < 2:
        raise EmptyPlotError("nothing to plot: a single sample size has no trend")


def _curve_values(spec: PlotSpec, n_grid):
    out = {}
    for family, (intercept, slope) in spec.curves.items():
        out[family] = intercept + slope * transform(family, n_grid)
    return out


def render_plot(spec: PlotSpec, fmt: str = "svg") -> str:
    """Render the spec as an "svg" document or a "terminal" sketch."""
    _validate(spec)
    if fmt == "svg":
        return _render_svg(spec)
    if fmt == "terminal":
        return _render_terminal(spec)
    raise ValueError(f"unknown plot format {fmt!r}")


def _render_svg(spec: PlotSpec) -> str:
    sizes = np.array([s for s, _ in spec.points], dtype=float)
    values = np.array([v for _, v in spec.points], dtype=float)
    n_grid = np.linspace(sizes.min(), sizes.max(), 128)
    curves = _curve_values(spec, n_grid)

    y_candidates = [values]
    for fam, ys in curves.items():
        y_candidates.append(ys)
    y_all = np.concatenate(y_candidates)
    y_min = min(0.0, float(y_all.min()))
    y_max = float(y_all.max())
    if y_max <= y_min:
        y_max = y_min + 1.0
    x_min, x_max = float(sizes.min()), float(sizes.max())

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def sx(x):
        return _MARGIN_L + (x - x_min) / (x_max - x_min) * plot_w

    def sy(y):
        return _MARGIN_T + plot_h - (y - y_min) / (y_max - y_min) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="sans-serif">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_MARGIN_L}" y="24" font-size="16">{spec.resource} complexity fit '
        f'(best: {spec.best.name})</text>',
    ]
    subtitle = " ".join(s for s in spec.subtitle if s).strip()
    if subtitle:
        parts.append(f'<text x="{_MARGIN_L}" y="42" font-size="11" fill="#555">{subtitle}</text>')

    # axes
    x0, y0 = _MARGIN_L, _MARGIN_T + plot_h
    parts.append(f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="#222"/>')
    parts.append(f'<line x1="{x0}" y1="{_MARGIN_T}" x2="{x0}" y2="{y0}" stroke="#222"/>')
    for frac in (0.0, 0.5, 1.0):
        xv = x_min + frac * (x_max - x_min)
        yv = y_min + frac * (y_max - y_min)
        parts.append(
            f'<text x="{sx(xv):.1f}" y="{y0 + 16}" font-size="10" text-anchor="middle">{xv:.0f}</text>'
        )
        parts.append(
            f'<text x="{x0 - 6}" y="{sy(yv) + 3:.1f}" font-size="10" text-anchor="end">{yv:.3g}</text>'
        )
    parts.append(
        f'<text x="{x0 + plot_w / 2:.0f}" y="{_HEIGHT - 10}" font-size="11" '
        f'text-anchor="middle">sample size</text>'
    )

    # fitted curves, best last so it draws on top
    ordering = sorted(curves, key=lambda f: f is spec.best)
    legend_y = _MARGIN_T + 8
    for family in ordering:
        ys = curves[family]
        pts = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in zip(n_grid, ys))
        is_best = family is spec.best
        klass = "curve best" if is_best else "curve"
        width = 3.0 if is_best else 1.2
        parts.append(
            f'<polyline class="{klass}" data-family="{family.name}" points="{pts}" '
            f'fill="none" stroke="{_COLORS[family]}" stroke-width="{width}"/>'
        )
    for family in spec.curves:
        weight = ' font-weight="bold"' if family is spec.best else ""
        parts.append(
            f'<text x="{_WIDTH - _MARGIN_R + 12}" y="{legend_y}" font-size="11" '
            f'fill="{_COLORS[family]}"{weight}>{family.name}</text>'
        )
        legend_y += 16

    for x, y in spec.points:
        parts.append(
            f'<circle class="obs" cx="{sx(x):.1f}" cy="{sy(y):.1f}" r="3" '
            f'fill="#111" fill-opacity="0.65"/>'
        )

    parts.append("</svg>")
    return "\n".join(parts)


def _render_terminal(spec: PlotSpec, width: int = 64, height: int = 18) -> str:
    sizes = np.array([s for s, _ in spec.points], dtype=float)
    values = np.array([v for _, v in spec.points], dtype=float)
    n_grid = np.linspace(sizes.min(), sizes.max(), width)
    best_curve = _curve_values(spec, n_grid)[spec.best]

    y_max = max(float(values.max()), float(best_curve.max()), 1e-12)
    y_min = min(0.0, float(values.min()), float(best_curve.min()))
    x_min, x_max = float(sizes.min()), float(sizes.max())

    grid = [[" "] * width for _ in range(height)]

    def put(x, y, ch):
        col = int((x - x_min) / (x_max - x_min) * (width - 1))
        row = height - 1 - int((y - y_min) / (y_max - y_min) * (height - 1))
        if 0 <= row < height and 0 <= col < width:
            grid[row][col] = ch

    for x, y in zip(n_grid, best_curve):
        put(x, y, "·")
    for x, y in spec.points:
        put(x, y, "●")

    lines = [f"{spec.resource} complexity (best: {spec.best.name})"]
    subtitle = " ".join(s for s in spec.subtitle if s).strip()
    if subtitle:
        lines.append(subtitle)
    lines.append("┌" + "─" * width + "┐")
    for row in grid:
        lines.append("│" + "".join(row) + "│")
    lines.append("└" + "─" * width + "┘")
    lines.append(f"n: {x_min:.0f} … {x_max:.0f}   value: {y_min:.3g} … {y_max:.3g}")
    return "\n".join(lines)
