"""Replayable evidence that no proper t-coloring of R is a slab coloring.

The argument has four checkable parts:

1. a t-clique through the origin, so any proper t-coloring may be assumed
   to color it ``0, 1, ..., t-1``;
2. forced propagation from that seed colors the whole window;
3. the forced coloring is a linear coloring up to renaming colors;
4. its color classes are cosets of a rank-2 sublattice of Z[D], hence dense.

Part 4 makes every color class meet every interval, so no color class can
contain an interval of positive length. On a finite window the measured
gap ``ell`` bounds the length of any monochromatic interval in the core.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .distset import DistanceSet, parse_expression
from .exact import QuadExt, format_quad
from .lattice import (
    DEFAULT_CLIQUE_BUDGET,
    DEFAULT_WINDOW_BUDGET,
    ForcingStep,
    LinearColoring,
    PartialColoring,
    Window,
    check_window_budget,
    density_gap,
    find_clique,
    is_clique,
    match_linear,
    propagate_forced,
    replay_transcript,
)

INTERPRETATION = (
    "slab color classes are read as unions of intervals of positive length; "
    "under the literal reading one-point intervals would make every coloring a slab coloring"
)


@dataclass(frozen=True)
class Certificate:
    """A verdict plus the JSON-ready data needed to re-derive it."""

    kind: str
    verdict: bool
    payload: dict
    components: tuple = field(default=())

    def component(self, kind: str) -> Certificate:
        for c in self.components:
            if c.kind == kind:
                return c
        raise KeyError(kind)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "payload": self.payload,
            "components": [c.to_dict() for c in self.components],
        }

    @classmethod
    def from_dict(cls, d: dict) -> Certificate:
        return cls(
            d["kind"],
            bool(d["verdict"]),
            d["payload"],
            tuple(cls.from_dict(c) for c in d.get("components", ())),
        )


def _quad_fields(name: str, x: QuadExt) -> dict:
    return {name: format_quad(x), f"{name}_approx": float(x)}


def clique_certificate(dset: DistanceSet, t: int, budget: int = DEFAULT_CLIQUE_BUDGET) -> Certificate:
    clique = find_clique(dset, t, budget)
    return Certificate(
        "clique",
        clique is not None,
        {"t": t, "points": [list(p) for p in clique] if clique else None},
    )


def _seed_for(dset, t, clique, window):
    points = clique if clique else tuple((j, 0) for j in range(t))
    seed = PartialColoring(t, {p: j for j, p in enumerate(points)})
    usable = all(p in window for p in points) and seed.is_proper(dset)
    return seed, usable


def _forced_certificate(dset, t, window, seed, usable):
    payload = {
        "t": t,
        "window": window.to_dict(),
        "seed": [[p[0], p[1], c] for p, c in sorted(seed.assignments.items())],
        "window_points": window.size,
    }
    if not usable:
        payload.update(transcript=[], forced_points=len(seed), fully_forced=False,
                       linear_match=None, note="seed is improper or leaves the window")
        return Certificate("forced_unique", False, payload), None

    prop = propagate_forced(dset, t, seed, window)
    match = match_linear(prop.coloring, dset) if prop.fully_forced else None
    payload.update(
        transcript=[
            [s.point[0], s.point[1], s.color, [[w[0], w[1], c] for w, c in s.witnesses]]
            for s in prop.transcript
        ],
        forced_points=len(prop.coloring),
        fully_forced=prop.fully_forced,
        linear_match=None
        if match is None
        else {
            "weights": list(match[0].weights),
            "renaming": {str(r): c for r, c in match[1].items()},
        },
    )
    return Certificate("forced_unique", prop.fully_forced, payload), (prop, match)


def _dense_classes(dset, t, match):
    """Exact evidence that the color classes of ``match`` are dense in R."""
    if match is None or dset.rank != 2:
        return False, {"rank": dset.rank, "generators": None}
    g1, g2 = t * dset.basis[0], t * dset.basis[1]
    ratio = g2 / g1
    return (not ratio.is_rational()), {
        "rank": 2,
        "generators": [format_quad(g1), format_quad(g2)],
        "ratio": format_quad(ratio),
    }


def _density_certificate(dset, t, window, coloring, match):
    dense, reason = _dense_classes(dset, t, match)
    gap = density_gap(coloring, window, dset)
    nested = window.halved()
    nested_gap = density_gap(coloring.restrict(nested), nested, dset)
    c, u, v = gap.realized_by
    payload = {
        "window": window.to_dict(),
        **_quad_fields("ell", gap.ell),
        "per_color_max_gap": {str(k): format_quad(g) for k, g in gap.per_color_max_gap.items()},
        "realized_by": {"color": c, "from": format_quad(u), "to": format_quad(v)},
        "core": [format_quad(gap.core[0]), format_quad(gap.core[1])],
        "nested_window": nested.to_dict(),
        **_quad_fields("nested_ell", nested_gap.ell),
        "shrinks": gap.ell < nested_gap.ell,
        "dense_classes": reason,
    }
    return Certificate("density", dense, payload)


def certify_no_t_slab(
    dset: DistanceSet,
    t: int,
    window: Window,
    clique_budget: int = DEFAULT_CLIQUE_BUDGET,
    window_budget: int = DEFAULT_WINDOW_BUDGET,
) -> Certificate:
    """Check that proper ``t``-colorings of G(R, D) have no monochromatic intervals.

    Raises ``PropagationContradiction`` if the seed cannot be extended on
    the window (the window needs more than ``t`` colors).
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    window = window.for_distance_set(dset)
    check_window_budget(window, window_budget)

    clique_cert = clique_certificate(dset, t, clique_budget)
    clique = tuple(tuple(p) for p in clique_cert.payload["points"] or ())
    if clique and not all(p in window for p in clique):
        raise ValueError(f"window {window} does not contain the clique {clique}")
    seed, usable = _seed_for(dset, t, clique, window)
    forced_cert, outcome = _forced_certificate(dset, t, window, seed, usable)

    components = [clique_cert, forced_cert]
    verdicts = {
        "clique": clique_cert.verdict,
        "fully_forced": forced_cert.verdict,
        "linear_match": forced_cert.payload["linear_match"] is not None,
        "dense_classes": False,
    }
    ell = None
    if outcome is not None and outcome[0].fully_forced:
        prop, match = outcome
        density = _density_certificate(dset, t, window, prop.coloring, match)
        components.append(density)
        verdicts["dense_classes"] = density.verdict
        ell = density.payload["ell"]

    certified = all(verdicts.values())
    payload = {
        "t": t,
        "distances": dset.to_text(),
        "radicand": dset.radicand,
        "window": window.to_dict(),
        "verdicts": verdicts,
        "ell": ell,
        "interpretation": INTERPRETATION,
        "statement": (
            f"no proper {t}-coloring of R is a slab coloring; on this window no "
            f"monochromatic interval of length >= ell fits in the core"
            if certified
            else f"not certified: {', '.join(k for k, v in verdicts.items() if not v)} failed"
        ),
    }
    return Certificate("no_t_slab", certified, payload, tuple(components))


# -- replay -------------------------------------------------------------------


class ReplayError(ValueError):
    """A certificate claim did not reproduce."""


def _expect(cond, message):
    if not cond:
        raise ReplayError(message)


def _replay_clique(cert, dset):
    pts = cert.payload["points"]
    t = cert.payload["t"]
    if pts is None:
        _expect(find_clique(dset, t) is None, "a clique exists but none was recorded")
        _expect(not cert.verdict, "verdict true without a clique")
        return None
    pts = [tuple(p) for p in pts]
    _expect(len(set(pts)) == t and is_clique(pts, dset), "recorded points are not a t-clique")
    _expect(cert.verdict, "clique present but verdict false")
    return tuple(pts)


def _replay_forced(cert, dset):
    pl = cert.payload
    t = pl["t"]
    window = Window.from_dict(pl["window"])
    seed = PartialColoring(t, {(a, b): c for a, b, c in pl["seed"]})
    steps = [
        ForcingStep((a, b), c, tuple(((wa, wb), wc) for wa, wb, wc in wit))
        for a, b, c, wit in pl["transcript"]
    ]
    coloring = replay_transcript(dset, t, seed, steps, window)
    _expect(len(coloring) == pl["forced_points"], "forced point count differs")
    fully = len(coloring) == window.size
    _expect(fully == pl["fully_forced"] == cert.verdict, "fully_forced claim differs")
    if fully:
        _expect(coloring.is_proper(dset), "forced coloring is not proper")
    lm = pl["linear_match"]
    match = None
    if lm is not None:
        lc = LinearColoring(t, tuple(lm["weights"]))
        renaming = {int(r): c for r, c in lm["renaming"].items()}
        _expect(lc.is_valid_for(dset), "recorded weights are not a proper linear coloring")
        _expect(len(set(renaming.values())) == len(renaming), "renaming is not injective")
        _expect(
            all(renaming.get(lc.color(p)) == c for p, c in coloring.assignments.items()),
            "forced coloring differs from the recorded linear coloring",
        )
        match = (lc, renaming)
    return coloring, window, match


def _replay_density(cert, dset, t, coloring, window, match):
    pl = cert.payload
    gap = density_gap(coloring, window, dset)
    _expect(format_quad(gap.ell) == pl["ell"], "ell does not reproduce")
    nested = Window.from_dict(pl["nested_window"])
    nested_gap = density_gap(coloring.restrict(nested), nested, dset)
    _expect(format_quad(nested_gap.ell) == pl["nested_ell"], "nested ell does not reproduce")
    _expect((gap.ell < nested_gap.ell) == pl["shrinks"], "shrink flag differs")
    dense, _ = _dense_classes(dset, t, match)
    _expect(dense == cert.verdict, "density verdict differs")


def check_certificate(cert: Certificate, dset: DistanceSet) -> None:
    """Raise ``ReplayError`` unless every recorded claim re-derives from ``dset``."""
    if cert.kind == "clique":
        _replay_clique(cert, dset)
        return
    if cert.kind == "forced_unique":
        _replay_forced(cert, dset)
        return
    if cert.kind != "no_t_slab":
        raise ReplayError(f"density certificates replay inside a no_t_slab certificate, got {cert.kind}")
    t = cert.payload["t"]
    _expect(_same_distance_set(cert.payload["distances"], dset), "certificate is for another D")
    clique = _replay_clique(cert.component("clique"), dset)
    coloring, window, match = _replay_forced(cert.component("forced_unique"), dset)
    if clique:
        seed = {(a, b): c for a, b, c in cert.component("forced_unique").payload["seed"]}
        _expect(seed == {p: j for j, p in enumerate(clique)}, "seed is not the recorded clique")
    verdicts = dict(cert.payload["verdicts"])
    _expect(verdicts["clique"] == (clique is not None), "clique verdict differs")
    _expect(verdicts["linear_match"] == (match is not None), "linear match verdict differs")
    if len(coloring) == window.size:
        density = cert.component("density")
        _replay_density(density, dset, t, coloring, window, match)
        _expect(verdicts["dense_classes"] == density.verdict, "dense verdict differs")
    else:
        _expect(not verdicts["dense_classes"], "dense verdict without full forcing")
    _expect(cert.verdict == all(verdicts.values()), "overall verdict differs")


def _same_distance_set(text: str, dset: DistanceSet) -> bool:
    values = sorted(parse_expression(part, dset.radicand) for part in text.split(","))
    return tuple(values) == dset.elements


def replay_certificate(cert: Certificate, dset: DistanceSet) -> bool:
    try:
        check_certificate(cert, dset)
    except (ReplayError, ValueError, KeyError):
        return False
    return True
