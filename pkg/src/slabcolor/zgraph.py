"""Exact chromatic numbers of integer distance graphs G(Z, D').

A proper coloring of Z is a bi-infinite walk through the transfer graph
whose states are proper color windows of length ``max(D')``. Such a walk
exists iff the graph has a directed cycle, and any cycle is a periodic
coloring. States are kept up to renaming of colors, which preserves the
existence of cycles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import BudgetExceeded

DEFAULT_STATE_BUDGET = 10**7
DEFAULT_PERIOD_NODE_BUDGET = 200_000
MAX_SEARCHED_PERIOD = 400  # recursion depth of the cyclic search


@dataclass(frozen=True)
class PeriodicColoring:
    """Coloring ``n -> colors[n mod period]`` of the integers."""

    colors: tuple

    @property
    def period(self) -> int:
        return len(self.colors)

    @property
    def num_colors(self) -> int:
        return len(set(self.colors))

    def color_at(self, n: int) -> int:
        return self.colors[n % len(self.colors)]

    def is_proper(self, dprime: Iterable[int]) -> bool:
        p = len(self.colors)
        return all(
            self.colors[r] != self.colors[(r + d) % p] for d in dprime for r in range(p)
        )


def _normalize(dprime: Iterable[int]) -> tuple:
    dp = sorted({int(d) for d in dprime})
    if not dp:
        raise ValueError("integer distance set must be nonempty")
    if dp[0] <= 0:
        raise ValueError(f"integer distances must be positive, got {dp[0]}")
    return tuple(dp)


def _canon(window) -> tuple:
    seen = {}
    return tuple(seen.setdefault(c, len(seen)) for c in window)


def _fits(window, c, dp) -> bool:
    n = len(window)
    return all(window[n - d] != c for d in dp if d <= n)


def _canonical_windows(dp, t, length):
    out = []
    stack = [()]
    while stack:
        w = stack.pop()
        if len(w) == length:
            out.append(w)
            continue
        top = max(w) + 1 if w else 0
        for c in range(min(t, top + 1) - 1, -1, -1):
            if _fits(w, c, dp):
                stack.append(w + (c,))
    out.sort()
    return out


def _residual_states(dp, t, length):
    """States of the canonical transfer graph that lie on or between cycles."""
    states = _canonical_windows(dp, t, length)
    succ = {}
    for s in states:
        top = max(s) + 1
        nxt = set()
        for c in range(min(t, top + 1)):
            if _fits(s, c, dp):
                nxt.add(_canon(s[1:] + (c,)))
        succ[s] = nxt

    pred = {s: set() for s in states}
    for s, nxt in succ.items():
        for u in nxt:
            pred[u].add(s)
    alive = set(states)
    queue = [s for s in states if not succ[s] or not pred[s]]
    while queue:
        s = queue.pop()
        if s not in alive:
            continue
        alive.discard(s)
        for u in succ[s]:
            if u in alive:
                pred[u].discard(s)
                if not pred[u]:
                    queue.append(u)
        for u in pred[s]:
            if u in alive:
                succ[u].discard(s)
                if not succ[u]:
                    queue.append(u)
    return alive


def _walk_cycle(alive, dp, t) -> tuple:
    window = min(alive)
    appended = []
    seen = {window: 0}
    while True:
        for c in range(t):
            if _fits(window, c, dp) and _canon(window[1:] + (c,)) in alive:
                break
        else:  # pragma: no cover - pruning guarantees a live successor
            raise AssertionError("residual transfer graph has a dead end")
        window = window[1:] + (c,)
        appended.append(c)
        if window in seen:
            return tuple(appended[seen[window] :])
        seen[window] = len(appended)


def _cyclic_coloring(dp, t, p, node_budget) -> Optional[tuple]:
    """Lexicographically least canonical proper coloring of Z_p, if any."""
    forbidden = set()
    for d in dp:
        forbidden.add(d % p)
        forbidden.add(-d % p)
    if 0 in forbidden:
        return None
    colors = [0] * p
    nodes = 0

    def extend(i, top):
        nonlocal nodes
        if i == p:
            return True
        for c in range(min(t, top + 1)):
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceeded("cyclic search budget")
            if all(colors[(i - f) % p] != c for f in forbidden if (i - f) % p < i):
                colors[i] = c
                if extend(i + 1, max(top, c + 1)):
                    return True
        return False

    return tuple(colors) if extend(0, 0) else None


def _shortest_periodic(dp, t, walk, node_budget) -> tuple:
    for p in range(1, min(len(walk), MAX_SEARCHED_PERIOD) + 1):
        try:
            found = _cyclic_coloring(dp, t, p, node_budget)
        except BudgetExceeded:
            break
        if found is not None:
            return found
    return _canon(walk)


def is_t_colorable_integer(
    dprime: Iterable[int], t: int, budget_states: int = DEFAULT_STATE_BUDGET
) -> Optional[PeriodicColoring]:
    """A proper periodic ``t``-coloring of G(Z, D'), or ``None`` if none exists.

    The returned witness has the shortest period that admits a proper
    coloring (searched up to the period of the transfer-graph cycle) and is
    the lexicographically least such color sequence.
    """
    dp = _normalize(dprime)
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    length = dp[-1]
    if t**length > budget_states:
        raise BudgetExceeded(
            f"transfer graph has up to {t}^{length} states, above budget {budget_states}"
        )
    alive = _residual_states(dp, t, length)
    if not alive:
        return None
    walk = _walk_cycle(alive, dp, t)
    colors = _shortest_periodic(dp, t, walk, DEFAULT_PERIOD_NODE_BUDGET)
    pc = PeriodicColoring(colors)
    if not pc.is_proper(dp):  # pragma: no cover - construction invariant
        raise AssertionError(f"constructed coloring {colors} is not proper for {dp}")
    return pc


def clique_number_integer(dprime: Iterable[int]) -> tuple:
    """Largest clique of G(Z, D') as ``(size, witness)``; the witness contains 0."""
    dp = _normalize(dprime)
    dset = set(dp)
    best = [(0,)]

    def grow(clique, candidates):
        if len(clique) > len(best[0]):
            best[0] = tuple(clique)
        if len(clique) + len(candidates) <= len(best[0]):
            return
        for i, v in enumerate(candidates):
            rest = [u for u in candidates[i + 1 :] if u - v in dset]
            grow(clique + [v], rest)

    grow([0], list(dp))
    return len(best[0]), best[0]


def chi_integer(
    dprime: Iterable[int], budget_states: int = DEFAULT_STATE_BUDGET
) -> tuple:
    """``(chi, witness)``: the chromatic number of G(Z, D') and a periodic coloring."""
    dp = _normalize(dprime)
    lower, _ = clique_number_integer(dp)
    for t in range(lower, len(dp) + 2):
        pc = is_t_colorable_integer(dp, t, budget_states)
        if pc is not None:
            return t, pc
    raise AssertionError(f"no coloring with {len(dp) + 1} colors for {dp}")  # pragma: no cover
