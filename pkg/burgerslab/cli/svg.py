"""
Static SVG line charts of emitted series.
Fixed 800x600 viewBox, linear axes with about ten ticks, a legend in the
top-left corner. Thick and thin polylines, plain lines and x-shaped markers
cover the figure styles (numerical curve, linearized curve, prediction, t_f).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Literal, Sequence, Tuple
from xml.sax.saxutils import escape

from burgerslab.core.exceptions import OutputError
from burgerslab.core.logger import get_logger

logger = get_logger(__name__)

WIDTH, HEIGHT = 800, 600
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 30, 50, 60
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"]
STROKES = {"thick": 2.5, "thin": 1.0, "line": 1.5, "crosses": 1.5}

Style = Literal["thick", "thin", "line", "crosses"]


@dataclass(frozen=True)
class PlotSeries:
    label: str
    x: Sequence[float]
    y: Sequence[float]
    style: Style = "line"

    def points(self) -> List[Tuple[float, float]]:
        """Finite (x, y) pairs; NaN marks a missing value."""
        return [
            (float(a), float(b))
            for a, b in zip(self.x, self.y)
            if math.isfinite(a) and math.isfinite(b)
        ]


def nice_ticks(low: float, high: float, count: int = 10) -> List[float]:
    """Round tick values (steps 1, 2 or 5 times a power of ten) covering [low, high]."""
    if high <= low:
        pad = abs(low) * 0.5 or 1.0
        low, high = low - pad, high + pad
    raw = (high - low) / count
    magnitude = 10.0 ** math.floor(math.log10(raw))
    step = next(m * magnitude for m in (1.0, 2.0, 5.0, 10.0) if m * magnitude >= raw)
    first = math.floor(low / step) * step
    ticks = [round(first, 12)]
    while ticks[-1] < high:
        ticks.append(round(first + len(ticks) * step, 12))
    return ticks


class SvgCanvas:
    """String builder for one chart."""

    def __init__(self, x_range: Tuple[float, float], y_range: Tuple[float, float]):
        self.parts: List[str] = [
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">\n',
            f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n',
        ]
        self.x_range = x_range
        self.y_range = y_range

    def _px(self, x: float) -> float:
        low, high = self.x_range
        return MARGIN_LEFT + (x - low) / (high - low) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)

    def _py(self, y: float) -> float:
        low, high = self.y_range
        return HEIGHT - MARGIN_BOTTOM - (y - low) / (high - low) * (
            HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
        )

    def text(self, x: float, y: float, content: str, extra: str = "") -> None:
        self.parts.append(
            f'<text x="{x:.1f}" y="{y:.1f}" font-family="sans-serif" font-size="12" {extra}>'
            f"{escape(content)}</text>\n"
        )

    def axes(self, x_ticks: Sequence[float], y_ticks: Sequence[float]) -> None:
        left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
        top, bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM
        self.parts.append('<g class="axes" stroke="black" stroke-width="1">\n')
        self.parts.append(f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}"/>\n')
        self.parts.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}"/>\n')
        for tick in x_ticks:
            px = self._px(tick)
            self.parts.append(
                f'<line x1="{px:.1f}" y1="{bottom}" x2="{px:.1f}" y2="{bottom + 5}"/>\n'
            )
        for tick in y_ticks:
            py = self._py(tick)
            self.parts.append(
                f'<line x1="{left - 5}" y1="{py:.1f}" x2="{left}" y2="{py:.1f}"/>\n'
            )
        self.parts.append("</g>\n")
        for tick in x_ticks:
            self.text(self._px(tick), bottom + 20, f"{tick:g}", 'text-anchor="middle"')
        for tick in y_ticks:
            self.text(left - 8, self._py(tick) + 4, f"{tick:g}", 'text-anchor="end"')

    def polyline(self, points: Sequence[Tuple[float, float]], color: str, width: float) -> None:
        coords = " ".join(f"{self._px(x):.2f},{self._py(y):.2f}" for x, y in points)
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"/>\n'
        )

    def crosses(
        self, points: Sequence[Tuple[float, float]], color: str, size: float = 5.0
    ) -> None:
        self.parts.append(f'<g class="crosses" stroke="{color}" stroke-width="1.5">\n')
        for x, y in points:
            px, py = self._px(x), self._py(y)
            self.parts.append(
                f'<path d="M {px - size:.2f} {py - size:.2f} L {px + size:.2f} {py + size:.2f} '
                f'M {px - size:.2f} {py + size:.2f} L {px + size:.2f} {py - size:.2f}"/>\n'
            )
        self.parts.append("</g>\n")

    def legend(self, entries: Sequence[Tuple[str, str, Style]]) -> None:
        x, y = MARGIN_LEFT + 15, MARGIN_TOP + 15
        for label, color, style in entries:
            if style == "crosses":
                self.crosses_marker(x + 10, y - 4, color)
            else:
                self.parts.append(
                    f'<line x1="{x}" y1="{y - 4}" x2="{x + 20}" y2="{y - 4}" '
                    f'stroke="{color}" stroke-width="{STROKES[style]}"/>\n'
                )
            self.text(x + 28, y, label, 'class="legend"')
            y += 18

    def crosses_marker(self, px: float, py: float, color: str, size: float = 4.0) -> None:
        self.parts.append(
            f'<path d="M {px - size} {py - size} L {px + size} {py + size} '
            f'M {px - size} {py + size} L {px + size} {py - size}" '
            f'stroke="{color}" stroke-width="1.5"/>\n'
        )

    def render(self) -> str:
        return "".join(self.parts) + "</svg>\n"


def render_svg(
    series: Sequence[PlotSeries], title: str = "", x_label: str = "", y_label: str = ""
) -> str:
    """Render series as an SVG document."""
    if not series:
        raise ValueError("nothing to plot: series list is empty")
    points = [p for s in series for p in s.points()]
    if not points:
        raise ValueError("nothing to plot: no finite values")

    x_ticks = nice_ticks(min(p[0] for p in points), max(p[0] for p in points))
    y_ticks = nice_ticks(min(p[1] for p in points), max(p[1] for p in points))
    canvas = SvgCanvas((x_ticks[0], x_ticks[-1]), (y_ticks[0], y_ticks[-1]))
    canvas.axes(x_ticks, y_ticks)

    entries = []
    for index, item in enumerate(series):
        color = PALETTE[index % len(PALETTE)]
        if item.style == "crosses":
            canvas.crosses(item.points(), color)
        else:
            canvas.polyline(item.points(), color, STROKES[item.style])
        entries.append((item.label, color, item.style))
    canvas.legend(entries)

    if title:
        canvas.text(WIDTH / 2, 25, title, 'text-anchor="middle" font-weight="bold"')
    if x_label:
        canvas.text(WIDTH / 2, HEIGHT - 15, x_label, 'text-anchor="middle"')
    if y_label:
        canvas.text(
            20, HEIGHT / 2, y_label, f'text-anchor="middle" transform="rotate(-90 20 {HEIGHT / 2})"'
        )
    return canvas.render()


def emit_svg(
    series: Sequence[PlotSeries],
    path: Path | str,
    title: str = "",
    x_label: str = "",
    y_label: str = "",
) -> Path:
    """
    Write an SVG chart of series to path.

    Raises:
        ValueError: no finite data
        OutputError: path cannot be written
    """
    target = Path(path)
    document = render_svg(series, title, x_label, y_label)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(document, encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {target}: {exc}") from exc
    logger.debug("svg.written", path=str(target), series=len(series))
    return target
