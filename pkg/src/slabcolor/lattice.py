"""Colorings of the lattice Z[D] in its integer coordinates ``(a, b)``.

A point ``(a, b)`` stands for ``a*basis[0] + b*basis[1]`` (see
``DistanceSet.value``). Because that map is injective, two points are
adjacent exactly when their coordinate difference is ``+-`` the lattice
coordinates of some distance; the exact real-valued test is
``adjacent``.
"""

from __future__ import annotations

import csv
import functools
import random
import sys
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .distset import DistanceSet
from .errors import BudgetExceeded, PropagationContradiction
from .exact import QuadExt, format_quad_csv, quad_compare

DEFAULT_WINDOW_BUDGET = 81 * 81
DEFAULT_CLIQUE_BUDGET = 10**6
DEFAULT_SEARCH_BUDGET = 10**6

CSV_HEADER = ("a", "b", "value", "value_approx", "color")


@dataclass(frozen=True)
class Window:
    """Rectangle ``a_range x b_range`` of lattice coordinates (inclusive)."""

    a_range: tuple
    b_range: tuple

    def __post_init__(self):
        for lo, hi in (self.a_range, self.b_range):
            if lo > hi:
                raise ValueError(f"empty window range [{lo}, {hi}]")

    @classmethod
    def square(cls, radius: int) -> Window:
        return cls((-radius, radius), (-radius, radius))

    @classmethod
    def box(cls, lo: int, hi: int) -> Window:
        return cls((lo, hi), (lo, hi))

    @property
    def size(self) -> int:
        (a0, a1), (b0, b1) = self.a_range, self.b_range
        return (a1 - a0 + 1) * (b1 - b0 + 1)

    def __contains__(self, point) -> bool:
        a, b = point
        return (
            self.a_range[0] <= a <= self.a_range[1]
            and self.b_range[0] <= b <= self.b_range[1]
        )

    def points(self) -> list:
        (a0, a1), (b0, b1) = self.a_range, self.b_range
        return [(a, b) for a in range(a0, a1 + 1) for b in range(b0, b1 + 1)]

    def for_distance_set(self, dset: DistanceSet) -> Window:
        """Collapse the ``b`` range to ``{0}`` when Z[D] has rank 1."""
        if dset.rank == 1:
            return Window(self.a_range, (0, 0))
        return self

    def halved(self) -> Window:
        """The concentric window with half the radius in each direction."""

        def half(r):
            lo, hi = r
            mid, rad = (lo + hi) // 2, (hi - lo) // 2
            return (mid - rad // 2, mid + rad // 2)

        return Window(half(self.a_range), half(self.b_range))

    def to_dict(self) -> dict:
        return {"a_range": list(self.a_range), "b_range": list(self.b_range)}

    @classmethod
    def from_dict(cls, d) -> Window:
        return cls(tuple(d["a_range"]), tuple(d["b_range"]))


def check_window_budget(window: Window, budget: int = DEFAULT_WINDOW_BUDGET):
    if window.size > budget:
        raise BudgetExceeded(f"window has {window.size} points, budget is {budget}")


@dataclass(frozen=True)
class PartialColoring:
    """Finite map from lattice points to colors ``0..t-1``."""

    t: int
    assignments: Mapping = field(default_factory=dict)

    def __len__(self):
        return len(self.assignments)

    def __getitem__(self, point):
        return self.assignments[point]

    def get(self, point, default=None):
        return self.assignments.get(point, default)

    def __contains__(self, point):
        return point in self.assignments

    def colors_used(self) -> set:
        return set(self.assignments.values())

    def restrict(self, window: Window) -> PartialColoring:
        return PartialColoring(
            self.t, {p: c for p, c in self.assignments.items() if p in window}
        )

    def conflicts(self, dset: DistanceSet) -> list:
        """Adjacent same-colored pairs ``(p, q)`` with ``p < q``."""
        offsets = dset.offsets()
        bad = []
        for p, c in sorted(self.assignments.items()):
            for da, db in offsets:
                q = (p[0] + da, p[1] + db)
                if q > p and self.assignments.get(q) == c:
                    bad.append((p, q))
        return bad

    def is_proper(self, dset: DistanceSet) -> bool:
        return not self.conflicts(dset)


# -- adjacency and cliques ------------------------------------------------


def adjacent(x, y, dset: DistanceSet) -> bool:
    """Whether ``|value(x) - value(y)|`` is one of the distances (exact)."""
    diff = dset.value(x) - dset.value(y)
    if not diff:
        return False
    return abs(diff) in _element_set(dset)


@functools.lru_cache(maxsize=64)
def _element_set(dset: DistanceSet) -> frozenset:
    return frozenset(dset.elements)


def find_clique(
    dset: DistanceSet, t: int, budget: int = DEFAULT_CLIQUE_BUDGET
) -> Optional[tuple]:
    """A ``t``-clique whose smallest point is the origin, or ``None``.

    Every clique can be translated so its smallest member sits at 0, and
    then all other members are distances from 0, so the search ranges
    over subsets of the lattice coordinates of D. Candidates are tried in
    increasing real order, which makes ``(0,0), (1,0), ...`` come first
    whenever that run is a clique.
    """
    if t < 1:
        raise ValueError(f"clique size must be >= 1, got {t}")
    origin = (0, 0)
    if t == 1:
        return (origin,)
    offsets = dset.offsets()
    candidates = list(dset.lattice_coords)  # sorted by value
    visited = 0

    def grow(clique, cands):
        nonlocal visited
        if len(clique) == t:
            return clique
        if len(clique) + len(cands) < t:
            return None
        for i, v in enumerate(cands):
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"clique search visited more than {budget} subsets")
            rest = [u for u in cands[i + 1 :] if (u[0] - v[0], u[1] - v[1]) in offsets]
            found = grow(clique + [v], rest)
            if found:
                return found
        return None

    found = grow([origin], candidates)
    return tuple(found) if found else None


def is_clique(points: Iterable, dset: DistanceSet) -> bool:
    pts = list(points)
    return all(adjacent(p, q, dset) for i, p in enumerate(pts) for q in pts[i + 1 :])


# -- exact chromatic number of a window ------------------------------------


@dataclass(frozen=True)
class WindowChromatic:
    """Result of ``window_chromatic``; ``chi`` is None when it exceeds ``t_max``."""

    chi: Optional[int]
    witness: Optional[PartialColoring]
    t_max: int

    @property
    def exceeded(self) -> bool:
        return self.chi is None


def _window_graph(dset, window):
    pts = window.points()
    offsets = sorted(dset.offsets())
    adj = {}
    for p in pts:
        adj[p] = [q for q in ((p[0] + da, p[1] + db) for da, db in offsets) if q in window]
    return pts, adj


def _dsatur_color(pts, adj, k, budget):
    """A proper ``k``-coloring of the graph, or None; exhaustive DSATUR search."""
    colors = {}
    neighbor_colors = {p: {} for p in pts}  # color -> count among colored neighbors
    degree = {p: len(adj[p]) for p in pts}
    nodes = 0

    def pick():
        best, best_key = None, None
        for p in pts:
            if p in colors:
                continue
            key = (-len(neighbor_colors[p]), -degree[p], p)
            if best_key is None or key < best_key:
                best, best_key = p, key
        return best

    def assign(p, c):
        colors[p] = c
        for q in adj[p]:
            nc = neighbor_colors[q]
            nc[c] = nc.get(c, 0) + 1

    def unassign(p):
        c = colors.pop(p)
        for q in adj[p]:
            nc = neighbor_colors[q]
            nc[c] -= 1
            if not nc[c]:
                del nc[c]

    def search(used):
        nonlocal nodes
        p = pick()
        if p is None:
            return True
        for c in range(min(k, used + 1)):
            if c in neighbor_colors[p]:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"coloring search exceeded {budget} nodes")
            assign(p, c)
            if search(max(used, c + 1)):
                return True
            unassign(p)
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, len(pts) + 100))
    try:
        return dict(colors) if search(0) else None
    finally:
        sys.setrecursionlimit(limit)


def window_chromatic(
    dset: DistanceSet,
    window: Window,
    t_max: int,
    budget: int = DEFAULT_SEARCH_BUDGET,
    window_budget: int = DEFAULT_WINDOW_BUDGET,
) -> WindowChromatic:
    """Exact chromatic number of the subgraph induced on ``window``."""
    check_window_budget(window, window_budget)
    pts, adj = _window_graph(dset, window)
    has_edge = any(adj[p] for p in pts)
    k = 2 if has_edge else 1
    while k <= t_max:
        found = _dsatur_color(pts, adj, k, budget)
        if found is not None:
            return WindowChromatic(k, PartialColoring(k, found), t_max)
        k += 1
    return WindowChromatic(None, None, t_max)


# -- linear colorings -------------------------------------------------------


@dataclass(frozen=True)
class LinearColoring:
    """``(a, b) -> (w_a*a + w_b*b) mod t``."""

    t: int
    weights: tuple

    def color(self, point) -> int:
        return (self.weights[0] * point[0] + self.weights[1] * point[1]) % self.t

    def is_valid_for(self, dset: DistanceSet) -> bool:
        return all(self.color(d) != 0 for d in dset.lattice_coords)

    def on_window(self, window: Window) -> PartialColoring:
        return PartialColoring(self.t, {p: self.color(p) for p in window.points()})


def find_linear_coloring(dset: DistanceSet, t: int) -> Optional[LinearColoring]:
    """First weight pair in lexicographic order giving a proper coloring mod ``t``."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    for wa in range(t):
        for wb in range(t):
            lc = LinearColoring(t, (wa, wb))
            if lc.is_valid_for(dset):
                return lc
    return None


def match_linear(coloring: PartialColoring, dset: DistanceSet) -> Optional[tuple]:
    """``(LinearColoring, renaming)`` reproducing ``coloring`` up to a color bijection.

    ``renaming[r]`` is the color that residue ``r`` receives. The first
    matching weight pair in lexicographic order is returned.
    """
    t = coloring.t
    items = sorted(coloring.assignments.items())
    for wa in range(t):
        for wb in range(t):
            lc = LinearColoring(t, (wa, wb))
            if not lc.is_valid_for(dset):
                continue
            renaming = {}
            ok = True
            for p, c in items:
                r = lc.color(p)
                if renaming.setdefault(r, c) != c:
                    ok = False
                    break
            if ok and len(set(renaming.values())) == len(renaming):
                return lc, dict(sorted(renaming.items()))
    return None


# -- forced propagation -----------------------------------------------------


@dataclass(frozen=True)
class ForcingStep:
    """``point`` received ``color`` because ``witnesses`` show every other color."""

    point: tuple
    color: int
    witnesses: tuple  # ((point, color), ...) sorted by point


@dataclass(frozen=True)
class PropagationResult:
    coloring: PartialColoring
    fully_forced: bool
    transcript: tuple


def propagate_forced(
    dset: DistanceSet,
    t: int,
    seed: PartialColoring,
    window: Window,
    shuffle_seed: Optional[int] = None,
    window_budget: int = DEFAULT_WINDOW_BUDGET,
) -> PropagationResult:
    """Close ``seed`` under the rule "t-1 distinct neighbor colors force the last one".

    Only neighbors inside ``window`` count. ``shuffle_seed`` randomizes the
    processing order; the fixpoint does not depend on it.
    """
    check_window_budget(window, window_budget)
    for p in seed.assignments:
        if p not in window:
            raise ValueError(f"seed point {p} lies outside the window")
    if not seed.is_proper(dset):
        raise ValueError(f"seed is not proper: {seed.conflicts(dset)[:3]}")
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
    offsets = sorted(dset.offsets())

    colors = dict(seed.assignments)
    seen = {}  # uncolored point -> {color: witness point}
    transcript = []
    queue = deque(sorted(colors))
    if rng:
        rng.shuffle(queue)

    while queue:
        p = queue.popleft()
        c = colors[p]
        order = offsets[:]
        if rng:
            rng.shuffle(order)
        for da, db in order:
            q = (p[0] + da, p[1] + db)
            if q not in window:
                continue
            if q in colors:
                if colors[q] == c:
                    raise PropagationContradiction(q, {p: c, q: colors[q]})
                continue
            wit = seen.setdefault(q, {})
            if c in wit:
                continue
            wit[c] = p
            if len(wit) == t:
                raise PropagationContradiction(q, {w: col for col, w in wit.items()})
            if len(wit) == t - 1:
                (forced,) = set(range(t)) - set(wit)
                colors[q] = forced
                del seen[q]
                transcript.append(
                    ForcingStep(q, forced, tuple(sorted((w, col) for col, w in wit.items())))
                )
                queue.append(q)

    result = PartialColoring(t, dict(sorted(colors.items())))
    return PropagationResult(result, len(colors) == window.size, tuple(transcript))


def replay_transcript(
    dset: DistanceSet, t: int, seed: PartialColoring, transcript, window: Window
) -> PartialColoring:
    """Re-check every forcing step independently of the search that produced it."""
    colors = dict(seed.assignments)
    for step in transcript:
        if step.point in colors:
            raise ValueError(f"step recolors {step.point}")
        if step.point not in window:
            raise ValueError(f"step point {step.point} outside window")
        shown = set()
        for w, col in step.witnesses:
            if w not in window or colors.get(w) != col:
                raise ValueError(f"witness {w} does not carry color {col}")
            if not adjacent(w, step.point, dset):
                raise ValueError(f"witness {w} is not adjacent to {step.point}")
            shown.add(col)
        if len(shown) != t - 1 or step.color in shown or not 0 <= step.color < t:
            raise ValueError(f"step at {step.point} is not forced by its witnesses")
        colors[step.point] = step.color
    return PartialColoring(t, dict(sorted(colors.items())))


# -- density of color classes -------------------------------------------------


@dataclass(frozen=True)
class DensityGap:
    """``ell``: every interval of length ``ell`` in the core sees all colors.

    ``ell`` is realized: it equals ``realized_by[2] - realized_by[1]`` for
    two consecutive points of color ``realized_by[0]``.
    """

    ell: QuadExt
    per_color_max_gap: dict
    core: tuple
    realized_by: tuple


def _sort_exact(values):
    return sorted(values, key=functools.cmp_to_key(lambda x, y: quad_compare(x[0], y[0])))


def density_gap(
    coloring: PartialColoring, window: Window, dset: DistanceSet
) -> DensityGap:
    """Largest gap between consecutive same-colored points over the central half.

    The window points are embedded in R and sorted exactly; the core is
    the middle half of their span. For each color, every gap between two
    consecutive points of that color that meets the core is measured.
    """
    pts = window.points()
    missing = [p for p in pts if p not in coloring]
    if missing:
        raise ValueError(f"coloring is not total on the window (e.g. {missing[0]})")
    present = {coloring[p] for p in pts}
    if len(present) < coloring.t:
        raise ValueError(f"only {len(present)} of {coloring.t} colors present")

    ordered = _sort_exact([(dset.value(p), coloring[p]) for p in pts])
    lo, hi = ordered[0][0], ordered[-1][0]
    quarter = (hi - lo) / 4
    core_lo, core_hi = lo + quarter, hi - quarter

    last = {}
    per_color = {}
    best = None
    for v, c in ordered:
        u = last.get(c)
        if u is not None and u < core_hi and v > core_lo:
            gap = v - u
            if c not in per_color or gap > per_color[c]:
                per_color[c] = gap
            if best is None or gap > best[0]:
                best = (gap, c, u, v)
        last[c] = v

    for c in sorted(present):
        c_vals = [v for v, col in ordered if col == c]
        if not (c_vals[0] <= core_lo and c_vals[-1] >= core_hi):
            raise ValueError(f"color {c} does not straddle the core of the window")
    gap, c, u, v = best
    return DensityGap(gap, dict(sorted(per_color.items())), (core_lo, core_hi), (c, u, v))


# -- point dumps --------------------------------------------------------------


def point_rows(coloring: PartialColoring, dset: DistanceSet) -> list:
    """CSV rows ``a, b, exact value, decimal value, color`` in (a, b) order."""
    rows = []
    for p in sorted(coloring.assignments):
        v = dset.value(p)
        rows.append((p[0], p[1], format_quad_csv(v), f"{float(v):.12g}", coloring[p]))
    return rows


def write_points_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(rows)
