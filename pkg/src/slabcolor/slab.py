"""Slab colorings of the real line: exact checking, constructions, chi_m bounds.

Slabs are half-open, ``[b_i, b_{i+1})``, so a point landing exactly on a
breakpoint belongs to the slab on its right.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Optional

from .certify import Certificate, certify_no_t_slab
from .distset import DistanceSet, parse_expression
from .errors import ParseError
from .exact import DEFAULT_RADICAND, QuadExt, as_quad, format_quad, quad_ceil_div
from .lattice import Window, find_linear_coloring, window_chromatic
from .zgraph import PeriodicColoring, chi_integer

PERIODIC = "periodic"
WINDOWED = "windowed"


@dataclass(frozen=True)
class SlabColoring:
    """Slabs ``[breakpoints[i], breakpoints[i+1])`` colored ``colors[i]``.

    In periodic mode ``breakpoints`` runs from 0 to the period and the
    pattern repeats; in windowed mode only ``[L, R)`` is colored.
    """

    mode: str
    breakpoints: tuple
    colors: tuple
    t: Optional[int] = None

    def __post_init__(self):
        if self.mode not in (PERIODIC, WINDOWED):
            raise ValueError(f"unknown slab mode {self.mode!r}")
        bps = tuple(as_quad(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "colors", tuple(int(c) for c in self.colors))
        if self.t is None:
            object.__setattr__(self, "t", max(self.colors, default=-1) + 1)
        if len(bps) != len(self.colors) + 1 or not self.colors:
            raise ValueError("need n + 1 breakpoints for n >= 1 slabs")
        for lo, hi in zip(bps, bps[1:]):
            if not lo < hi:
                raise ValueError(f"breakpoints not strictly increasing at {format_quad(lo)}")
        if self.mode == PERIODIC and bps[0]:
            raise ValueError("periodic slab colorings start at breakpoint 0")
        if any(not 0 <= c < self.t for c in self.colors):
            raise ValueError(f"slab colors must lie in 0..{self.t - 1}")

    @property
    def period(self) -> QuadExt:
        if self.mode != PERIODIC:
            raise AttributeError("windowed slab colorings have no period")
        return self.breakpoints[-1]

    @property
    def span(self) -> tuple:
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def num_colors(self) -> int:
        return len(set(self.colors))

    def slab_index(self, x) -> Optional[int]:
        x = as_quad(x, self.breakpoints[-1].m)
        if self.mode == PERIODIC:
            x = x - (x / self.period).floor() * self.period
        elif not self.breakpoints[0] <= x < self.breakpoints[-1]:
            return None
        return bisect_right(self.breakpoints, x) - 1

    def color_at(self, x) -> Optional[int]:
        i = self.slab_index(x)
        return None if i is None else self.colors[i]

    def scaled(self, factor) -> SlabColoring:
        return SlabColoring(self.mode, tuple(b * factor for b in self.breakpoints), self.colors, self.t)

    def to_text(self) -> str:
        if self.mode == PERIODIC:
            lines = [f"period {format_quad(self.period)}"]
        else:
            lo, hi = self.span
            lines = [f"window {format_quad(lo)} {format_quad(hi)}"]
        for lo, hi, c in zip(self.breakpoints, self.breakpoints[1:], self.colors):
            lines.append(f"[{format_quad(lo)}, {format_quad(hi)}) {c}")
        return "\n".join(lines) + "\n"


_SLAB_LINE = re.compile(r"^\[([^,\]]+),([^)\]]+)\)\s*(\d+)\s*$")


def parse_slab_coloring(text: str, radicand: int = DEFAULT_RADICAND) -> SlabColoring:
    """Read the ``period``/``window`` header plus one ``[lo, hi) color`` line per slab."""
    lines = [(n, ln.strip()) for n, ln in enumerate(text.splitlines(), 1)]
    lines = [(n, ln) for n, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty slab coloring")
    n, header = lines[0]
    words = header.split()
    if words[0] == "period" and len(words) == 2:
        mode, ends = PERIODIC, (QuadExt(0, 0, radicand), parse_expression(words[1], radicand))
    elif words[0] == "window" and len(words) == 3:
        mode = WINDOWED
        ends = (parse_expression(words[1], radicand), parse_expression(words[2], radicand))
    else:
        raise ParseError(f"line {n}: expected 'period <expr>' or 'window <expr> <expr>'")

    bps, colors = [], []
    for n, ln in lines[1:]:
        m = _SLAB_LINE.match(ln)
        if not m:
            raise ParseError(f"line {n}: expected '[<expr>, <expr>) <color>'")
        lo, hi = parse_expression(m.group(1), radicand), parse_expression(m.group(2), radicand)
        if bps and bps[-1] != lo:
            raise ParseError(f"line {n}: slab starts at {format_quad(lo)}, previous ended at {format_quad(bps[-1])}")
        if not bps:
            bps.append(lo)
        bps.append(hi)
        colors.append(int(m.group(3)))
    if not colors:
        raise ParseError("slab coloring has no slabs")
    if (bps[0], bps[-1]) != ends:
        raise ParseError("slabs do not cover the declared period or window exactly")
    try:
        return SlabColoring(mode, tuple(bps), tuple(colors))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


# -- verification -------------------------------------------------------------


@dataclass(frozen=True)
class SlabViolation:
    """``x`` and ``x + d`` share a color; ``x_range`` holds every such x in slab i."""

    x: QuadExt
    d: QuadExt
    slab_i: int
    slab_j: int
    x_range: tuple

    def to_dict(self) -> dict:
        return {
            "x": format_quad(self.x),
            "x_approx": float(self.x),
            "d": format_quad(self.d),
            "slab_i": self.slab_i,
            "slab_j": self.slab_j,
            "x_range": [format_quad(v) for v in self.x_range],
        }


def _overlap(lo, hi, u, v):
    """``[lo, hi) & [u, v)`` as a pair, or None when empty."""
    a = lo if lo > u else u
    b = hi if hi < v else v
    return (a, b) if a < b else None


def verify_slab(c: SlabColoring, dset: DistanceSet) -> Optional[SlabViolation]:
    """``None`` if no two points at a distance in D share a color, else a witness.

    For each distance d and slab i the shifted slab ``[b_i + d, b_{i+1} + d)``
    is intersected with every slab of the same color (after reduction modulo
    the period, splitting at the wrap). All comparisons are exact.
    """
    bps, colors = c.breakpoints, c.colors
    n = len(colors)
    for d in dset.elements:
        for i in range(n):
            lo, hi = bps[i], bps[i + 1]
            if c.mode == PERIODIC:
                period = c.period
                k = ((lo + d) / period).floor()
                shifts = [k * period]
                if hi + d - k * period > period:
                    shifts.append((k + 1) * period)
            else:
                shifts = [QuadExt(0, 0, lo.m)]
            for s in shifts:
                for j in range(n):
                    if colors[j] != colors[i]:
                        continue
                    # x in slab i with x + d - s in slab j
                    rng = _overlap(lo, hi, bps[j] + s - d, bps[j + 1] + s - d)
                    if rng is not None:
                        x = (rng[0] + rng[1]) / 2
                        return SlabViolation(x, d, i, j, rng)
    return None


# -- constructions ------------------------------------------------------------


def unit_slab_coloring(dset: DistanceSet) -> SlabColoring:
    """Slabs of width ``d_1`` colored cyclically with ``ceil(d_k/d_1) + 1`` colors."""
    m = quad_ceil_div(dset.d_max, dset.d_min) + 1
    width = dset.d_min
    return SlabColoring(PERIODIC, tuple(j * width for j in range(m + 1)), tuple(range(m)), m)


def integer_slab_from_periodic(pc: PeriodicColoring, alpha) -> SlabColoring:
    """Color ``[n/alpha, (n+1)/alpha)`` with ``pc.color_at(n)``."""
    alpha = as_quad(alpha)
    if alpha.sign() <= 0:
        raise ValueError("alpha must be positive")
    width = 1 / alpha
    return SlabColoring(
        PERIODIC,
        tuple(j * width for j in range(pc.period + 1)),
        pc.colors,
        max(pc.colors) + 1,
    )


# -- chi_m bounds -------------------------------------------------------------


@dataclass(frozen=True)
class ChiMBounds:
    lower: int
    upper: int
    chi: Optional[int]
    slab_witness: SlabColoring
    certificates: tuple = field(default=())
    literature_upper: Optional[int] = None
    notes: tuple = field(default=())

    @property
    def exact(self) -> bool:
        return self.lower == self.upper


def chi_m_bounds(
    dset: DistanceSet,
    window: Window = Window.square(20),
    chi_window: Window = Window.box(0, 6),
    budget_states: int = 10**7,
) -> ChiMBounds:
    """Lower and upper bounds on the slab chromatic number of G(R, D).

    Commensurable sets get the exact value from the integer model. For
    rank-2 sets the lower bound is the chromatic number of a finite window,
    raised by one when the no-slab certificate holds at that color count;
    the upper bound is the verified cyclic unit-slab construction.
    """
    if dset.rank == 1:
        chi, pc = chi_integer(dset.integer_form, budget_states)
        slab = integer_slab_from_periodic(pc, dset.alpha)
        violation = verify_slab(slab, dset)
        if violation is not None:  # pragma: no cover - construction invariant
            raise AssertionError(f"integer slab witness fails: {violation}")
        return ChiMBounds(
            chi,
            slab.num_colors,
            chi,
            slab,
            notes=(f"commensurable: chi(Z, {list(dset.integer_form)}) = {chi} with period {pc.period}",),
        )

    k = len(dset)
    wc = window_chromatic(dset, chi_window, t_max=2 * k + 1)
    chi_lower = wc.chi
    notes = [f"window chromatic number {chi_lower} on {chi_window.to_dict()}"]
    chi = None
    for t in range(chi_lower, 2 * k + 2):
        lc = find_linear_coloring(dset, t)
        if lc is not None:
            if t == chi_lower:
                chi = t
            notes.append(f"linear coloring weights {list(lc.weights)} mod {t}")
            break

    cert = certify_no_t_slab(dset, chi_lower, window)
    lower = chi_lower + 1 if cert.verdict else chi_lower

    slab = unit_slab_coloring(dset)
    if verify_slab(slab, dset) is not None:  # pragma: no cover - construction invariant
        raise AssertionError("unit slab construction is not proper")
    upper = slab.num_colors
    if lower > upper:  # pragma: no cover - would contradict a verified construction
        raise AssertionError(f"lower bound {lower} exceeds verified upper bound {upper}")
    return ChiMBounds(
        lower,
        upper,
        chi,
        slab,
        (cert,),
        literature_upper=k + 1,
        notes=tuple(notes),
    )
