"""Static SVG figures: the tree picture and the colored disk tiling.

Floating point lives only here.  Pixel classification pulls points back
through the two disk isometries and tests membership in the central
Dirichlet cell; ties go to the shorter word.  Output is deterministic:
fixed formatting, row-major order, no concurrency.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import Shallow
from .trees import Patch

_TOL = 1e-9


@dataclass(frozen=True)
class DiskIsometry:
    """Unit-disk Moebius map z -> (alpha z + beta) / (conj(beta) z + conj(alpha))."""

    alpha: complex
    beta: complex

    def normalized(self) -> "DiskIsometry":
        det = abs(self.alpha) ** 2 - abs(self.beta) ** 2
        s = 1 / math.sqrt(det)
        return DiskIsometry(self.alpha * s, self.beta * s)

    def __call__(self, z: complex) -> complex:
        return (self.alpha * z + self.beta) / (
            self.beta.conjugate() * z + self.alpha.conjugate()
        )

    def inverse(self) -> "DiskIsometry":
        return DiskIsometry(self.alpha.conjugate(), -self.beta)

    def compose(self, other: "DiskIsometry") -> "DiskIsometry":
        return DiskIsometry(
            self.alpha * other.alpha + self.beta * other.beta.conjugate(),
            self.alpha * other.beta + self.beta * other.alpha.conjugate(),
        )


def make_generators() -> tuple[DiskIsometry, DiskIsometry]:
    """The two isometries: one moves -1/2 to 1/2 fixing +-1, the other is its
    quarter-turn conjugate moving -i/2 to i/2 fixing +-i.

    Maps fixing +-1 form the one-parameter family z -> (z+t)/(tz+1); the
    half-point condition solves to t = 4/5 exactly.
    """
    t = _solve_half_shift()
    h1 = DiskIsometry(complex(1), complex(t)).normalized()
    rot = DiskIsometry(cmath.exp(1j * math.pi / 4), 0)
    h2 = rot.compose(h1).compose(rot.inverse())
    return h1, h2


def _solve_half_shift() -> Fraction:
    # (-1/2 + t) / (1 - t/2) = 1/2  =>  t * 5/4 = 1
    lhs_coeff = Fraction(1) + Fraction(1, 2) * Fraction(1, 2)
    rhs = Fraction(1, 2) + Fraction(1, 2)
    return rhs / lhs_coeff


def hyperbolic_distance(z: complex, w: complex) -> float:
    return math.atanh(abs(z - w) / abs(1 - w.conjugate() * z))


@dataclass(frozen=True)
class RenderConfig:
    resolution: int = 512
    depth_limit: int = 3
    palette: dict = field(default_factory=lambda: {0: "#9a9a9a", 1: "#101010"})
    background: str = "#ffffff"
    root_color: str = "#e6c800"


def classify_point(z, gens, depth_limit, tol=_TOL):
    """Positive word whose cell contains z, or None (inverse side / too deep)."""
    h1, h2 = gens
    inv1, inv2 = h1.inverse(), h2.inverse()
    targets = [h(0) for h in (h1, inv1, h2, inv2)]
    word = []
    for _ in range(depth_limit + 1):
        d0 = hyperbolic_distance(z, 0)
        ds = [hyperbolic_distance(z, t) for t in targets]
        if all(d0 <= d + tol for d in ds):
            return "".join(word)
        best = min(range(4), key=lambda k: ds[k])
        if best == 0:
            word.append("a")
            z = inv1(z)
        elif best == 2:
            word.append("b")
            z = inv2(z)
        else:
            return None  # lives in an inverse-letter half-plane
    return None


def tiling_svg(p: Patch, cfg: RenderConfig) -> str:
    """Per-pixel coloring of the positive-word cells by the patch digits."""
    if p.depth < cfg.depth_limit:
        raise Shallow(f"patch depth {p.depth} below word limit {cfg.depth_limit}")
    gens = make_generators()
    res = cfg.resolution
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{res}" height="{res}" '
        f'viewBox="0 0 {res} {res}">',
        f'<rect width="{res}" height="{res}" fill="{cfg.background}"/>',
    ]
    cache: dict = {}
    for row in range(res):
        y = 1 - (2 * row + 1) / res
        runs = []
        current = None
        start = 0
        for col in range(res):
            x = (2 * col + 1) / res - 1
            z = complex(x, y)
            if abs(z) >= 1:
                color = None
            else:
                word = classify_point(z, gens, cfg.depth_limit)
                if word is None:
                    color = None
                else:
                    color = cache.get(word)
                    if color is None:
                        color = cfg.palette[p.get(word)]
                        cache[word] = color
            if color != current:
                if current is not None:
                    runs.append((start, col, current))
                current = color
                start = col
        if current is not None:
            runs.append((start, res, current))
        for x0, x1, color in runs:
            out.append(
                f'<rect x="{x0}" y="{row}" width="{x1 - x0}" height="1" fill="{color}"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def tree_svg(p: Patch, cfg: RenderConfig | None = None) -> str:
    """Classic layered layout: squares under a-edges, disks under b-edges."""
    cfg = cfg or RenderConfig()
    if p.depth > 12:
        warnings.warn(f"depth {p.depth} will not render readably", stacklevel=2)
    unit = 24
    width = (1 << p.depth) * unit
    height = (p.depth + 1) * 2 * unit
    half = unit * 0.32

    def pos(level, i):
        x = width * (2 * i + 1) / (2 << level)
        y = unit + level * 2 * unit
        return x, y

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="{cfg.background}"/>',
    ]
    for level in range(p.depth):
        for i in range(1 << level):
            x0, y0 = pos(level, i)
            for child in (2 * i, 2 * i + 1):
                x1, y1 = pos(level + 1, child)
                out.append(
                    f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" '
                    f'stroke="#606060" stroke-width="1"/>'
                )
    for level, rowbits in enumerate(p.levels):
        for i, c in enumerate(rowbits):
            x, y = pos(level, i)
            if level == 0:
                fill = cfg.root_color
            else:
                fill = cfg.palette[int(c)]
            if level == 0 or i % 2 == 0:  # root and a-followers: rectangles
                out.append(
                    f'<rect x="{x - half:.2f}" y="{y - half:.2f}" '
                    f'width="{2 * half:.2f}" height="{2 * half:.2f}" fill="{fill}"/>'
                )
            else:  # b-followers: disks
                out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{half:.2f}" fill="{fill}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
