"""Distance sets: parsing, commensurability analysis, and the D_t family.

Text grammar (whitespace ignored; ``s`` denotes sqrt m)::

    set      := distance ("," distance)*
    distance := term (("+" | "-") term)*
    term     := rational | rational "s" | "s"
    rational := ["-"] digits ["/" digits]
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import ParseError
from .exact import (
    DEFAULT_RADICAND,
    QuadExt,
    check_radicand,
    format_quad,
    lattice_hnf,
)


class _Parser:
    def __init__(self, text: str, radicand: int):
        self.text = text
        self.m = radicand
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _digits(self) -> int:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected digits", self.pos)
        return int(self.text[start : self.pos])

    def _rational(self) -> Fraction:
        neg = False
        if self._peek() == "-":
            neg = True
            self.pos += 1
        num = self._digits()
        den = 1
        if self._peek() == "/":
            self.pos += 1
            den_pos = self.pos
            den = self._digits()
            if den == 0:
                raise ParseError("zero denominator", den_pos)
        value = Fraction(num, den)
        return -value if neg else value

    def term(self) -> QuadExt:
        c = self._peek()
        if c == "s":
            self.pos += 1
            return QuadExt(0, 1, self.m)
        if c == "-" or c.isdigit():
            r = self._rational()
            if self._peek() == "s":
                self.pos += 1
                return QuadExt(0, r, self.m)
            return QuadExt(r, 0, self.m)
        raise ParseError(f"unexpected {c!r}" if c else "unexpected end of input", self.pos)

    def expression(self) -> QuadExt:
        value = self.term()
        while self._peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            t = self.term()
            value = value + t if op == "+" else value - t
        return value

    def distance_list(self) -> list:
        out = []
        while True:
            self._skip_ws()
            start = self.pos
            value = self.expression()
            out.append((value, start))
            c = self._peek()
            if c == ",":
                self.pos += 1
                continue
            if c:
                raise ParseError(f"unexpected {c!r}", self.pos)
            return out


def parse_expression(text: str, radicand: int = DEFAULT_RADICAND) -> QuadExt:
    """Parse one ``distance`` expression (any sign allowed)."""
    p = _Parser(text, check_radicand(radicand))
    value = p.expression()
    if p._peek():
        raise ParseError(f"unexpected {p._peek()!r}", p.pos)
    return value


@dataclass(frozen=True)
class DistanceSet:
    """A finite set of positive distances with its integer-lattice model.

    ``basis`` holds the generators of Z[D] embedded in Q(sqrt m) and
    ``lattice_coords[i]`` gives element ``i`` as an integer pair ``(a, b)``
    over that basis (``b`` is always 0 when ``rank == 1``). For
    commensurable sets ``alpha * elements == integer_form`` exactly.
    """

    elements: tuple
    radicand: int
    rank: int
    basis: tuple
    lattice_coords: tuple
    alpha: Optional[QuadExt] = None
    integer_form: Optional[tuple] = None

    @property
    def commensurable(self) -> bool:
        return self.rank == 1

    @property
    def d_min(self) -> QuadExt:
        return self.elements[0]

    @property
    def d_max(self) -> QuadExt:
        return self.elements[-1]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def value(self, point) -> QuadExt:
        """Embed lattice point ``(a, b)`` as a real number."""
        a, b = point
        v = a * self.basis[0]
        if b:
            v = v + b * self.basis[1]
        return v

    def offsets(self) -> frozenset:
        """All lattice differences ``+-coords`` that realize a distance in D."""
        out = set()
        for a, b in self.lattice_coords:
            out.add((a, b))
            out.add((-a, -b))
        return frozenset(out)

    def to_text(self) -> str:
        return ", ".join(format_quad(e) for e in self.elements)

    def __str__(self):
        return "{" + self.to_text() + "}"


def _positive_sorted_unique(elements: Iterable[QuadExt]) -> tuple:
    seen = {}
    for e in elements:
        if e.sign() <= 0:
            raise ValueError(f"distance {format_quad(e)} is not positive")
        seen.setdefault(e, e)
    if not seen:
        raise ValueError("distance set is empty")
    return tuple(sorted(seen))


def analyze_distance_set(
    elements: Sequence, radicand: Optional[int] = None
) -> DistanceSet:
    """Sort, deduplicate, and compute the lattice model of ``elements``."""
    elements = list(elements)
    if radicand is None:
        radicand = next(
            (e.m for e in elements if isinstance(e, QuadExt) and e.q), DEFAULT_RADICAND
        )
    check_radicand(radicand)
    quads = []
    for e in elements:
        if not isinstance(e, QuadExt):
            e = QuadExt(e, 0, radicand)
        elif e.q and e.m != radicand:
            raise ValueError(f"mixed radicands {e.m} and {radicand}")
        else:
            e = QuadExt(e.p, e.q, radicand)
        quads.append(e)
    elems = _positive_sorted_unique(quads)

    scale = 1
    for e in elems:
        scale = math.lcm(scale, e.p.denominator, e.q.denominator)
    vectors = [(int(e.p * scale), int(e.q * scale)) for e in elems]
    hnf = lattice_hnf(vectors)
    basis = tuple(QuadExt(Fraction(a, scale), Fraction(b, scale), radicand) for a, b in hnf.basis)

    if hnf.rank == 1:
        g = basis[0]
        ints = [c[0] for c in hnf.coords]
        if g.sign() < 0:
            g, ints = -g, [-c for c in ints]
        coords = tuple((c, 0) for c in ints)
        return DistanceSet(
            elements=elems,
            radicand=radicand,
            rank=1,
            basis=(g,),
            lattice_coords=coords,
            alpha=1 / g,
            integer_form=tuple(ints),
        )
    return DistanceSet(
        elements=elems,
        radicand=radicand,
        rank=2,
        basis=basis,
        lattice_coords=tuple(tuple(c) for c in hnf.coords),
    )


def parse_distance_set(text: str, radicand: int = DEFAULT_RADICAND) -> DistanceSet:
    check_radicand(radicand)
    parser = _Parser(text, radicand)
    if not parser._peek():
        raise ParseError("empty distance set", 0)
    values = parser.distance_list()
    for value, start in values:
        if value.sign() <= 0:
            raise ParseError(
                f"distance {format_quad(value)} is not positive"
                + (" (element equals 0)" if not value else ""),
                start,
            )
    return analyze_distance_set([v for v, _ in values], radicand)


def generate_theorem_family(t: int, radicand: int = DEFAULT_RADICAND) -> DistanceSet:
    """``{a + b*sqrt(m) : a, b >= 0, 1 <= a + b <= t - 1}``."""
    if t < 2:
        raise ValueError(f"theorem family needs t >= 2, got {t}")
    elems = [
        QuadExt(a, b, radicand)
        for a in range(t)
        for b in range(t)
        if 1 <= a + b <= t - 1
    ]
    return analyze_distance_set(elems, radicand)


def scale_distance_set(dset: DistanceSet, factor) -> DistanceSet:
    """The set ``factor * D`` for a positive rational factor."""
    factor = Fraction(factor)
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    return analyze_distance_set([e * factor for e in dset.elements], dset.radicand)
