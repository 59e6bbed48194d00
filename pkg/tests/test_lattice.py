import itertools
import random
from decimal import Decimal, getcontext

import pytest
from hypothesis import given, settings, strategies as st

from slabcolor.distset import generate_theorem_family, parse_distance_set
from slabcolor.errors import BudgetExceeded, PropagationContradiction
from slabcolor.exact import QuadExt, format_quad
from slabcolor.lattice import (
    CSV_HEADER,
    LinearColoring,
    PartialColoring,
    Window,
    adjacent,
    density_gap,
    find_clique,
    find_linear_coloring,
    is_clique,
    match_linear,
    point_rows,
    propagate_forced,
    replay_transcript,
    window_chromatic,
    write_points_csv,
)


def independent_proper(coloring, dset):
    """Pairwise scan by exact values, with no use of lattice offsets."""
    items = list(coloring.assignments.items())
    elems = set(dset.elements)
    for (p, c), (q, e) in itertools.combinations(items, 2):
        if c == e and abs(dset.value(p) - dset.value(q)) in elems:
            return False
    return True


def seed_run(t):
    return PartialColoring(t, {(j, 0): j for j in range(t)})


# -- adjacency ---------------------------------------------------------------


@pytest.mark.parametrize(
    "x, y, expected", [((0, 0), (1, 1), True), ((0, 0), (0, 0), False), ((0, 0), (3, 0), False)]
)
def test_adjacent_examples(d3, x, y, expected):
    assert adjacent(x, y, d3) is expected


@settings(max_examples=300)
@given(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_adjacency_matches_offsets(x, y):
    d = generate_theorem_family(4)
    diff = (x[0] - y[0], x[1] - y[1])
    assert adjacent(x, y, d) == (diff in d.offsets())
    assert adjacent(x, y, d) == adjacent(y, x, d)


# -- cliques -----------------------------------------------------------------


def test_clique_counterexample(d3):
    assert find_clique(d3, 3) == ((0, 0), (1, 0), (2, 0))
    assert is_clique([(0, 0), (0, 1), (0, 2)], d3)
    assert find_clique(d3, 4) is None


@pytest.mark.parametrize("t", [2, 3, 4, 5])
def test_clique_family(family, t):
    assert find_clique(family[t], t) == tuple((j, 0) for j in range(t))


def test_clique_budget(family):
    with pytest.raises(BudgetExceeded):
        find_clique(family[5], 6, budget=3)


def test_clique_size_one_and_bad_t(d3):
    assert find_clique(d3, 1) == ((0, 0),)
    with pytest.raises(ValueError):
        find_clique(d3, 0)


# -- window chromatic number -------------------------------------------------


def test_window_chromatic_counterexample(d3):
    res = window_chromatic(d3, Window.box(0, 4), t_max=4)
    assert res.chi == 3 and not res.exceeded
    assert len(res.witness) == 25 and independent_proper(res.witness, d3)


def test_window_chromatic_path():
    d = parse_distance_set("1")
    res = window_chromatic(d, Window((0, 3), (0, 0)), t_max=3)
    assert res.chi == 2 and independent_proper(res.witness, d)


def test_window_chromatic_d4(family):
    res = window_chromatic(family[4], Window.box(0, 5), t_max=5)
    assert res.chi == 4 and independent_proper(res.witness, family[4])


def test_window_chromatic_exceeded(d3):
    res = window_chromatic(d3, Window.box(0, 3), t_max=2)
    assert res.exceeded and res.chi is None and res.witness is None


def test_window_budget(d3):
    with pytest.raises(BudgetExceeded):
        window_chromatic(d3, Window.square(50), t_max=3)


def test_window_chromatic_monotone_and_bounded(family):
    for t, d in family.items():
        values = [window_chromatic(d, Window.box(0, r), t_max=t + 1).chi for r in range(0, 4)]
        assert values == sorted(values)
        assert find_linear_coloring(d, t) is not None
        assert max(values) <= t


# -- linear colorings --------------------------------------------------------


def brute_linear(dset, t):
    for w in itertools.product(range(t), repeat=2):
        if all((w[0] * a + w[1] * b) % t for a, b in dset.lattice_coords):
            return w
    return None


def test_linear_examples(d3):
    assert find_linear_coloring(d3, 3).weights == (1, 1)
    assert [(a + b) % 3 for a, b in d3.lattice_coords] == [1, 1, 2, 2, 2]
    assert find_linear_coloring(d3, 2) is None
    assert find_linear_coloring(parse_distance_set("1"), 2).weights == (1, 0)


@pytest.mark.parametrize("t", range(1, 7))
def test_linear_matches_bruteforce(d3, family, t):
    for d in [d3, *family.values()]:
        lc = find_linear_coloring(d, t)
        assert (lc.weights if lc else None) == brute_linear(d, t)
        if lc:
            w = Window.square(3)
            assert independent_proper(lc.on_window(w), d)


def test_match_linear_recovers_renaming(d3):
    w = Window.square(4)
    lc = LinearColoring(3, (1, 1))
    shuffled = PartialColoring(3, {p: (2 - lc.color(p)) for p in w.points()})
    found, renaming = match_linear(shuffled, d3)
    assert found.weights == (1, 1)
    assert all(renaming[found.color(p)] == c for p, c in shuffled.assignments.items())
    broken = dict(shuffled.assignments)
    broken[(0, 0)] = (broken[(0, 0)] + 1) % 3
    assert match_linear(PartialColoring(3, broken), d3) is None


# -- forced propagation ------------------------------------------------------


def test_forced_counterexample(d3):
    w = Window.square(8)
    res = propagate_forced(d3, 3, seed_run(3), w)
    assert res.fully_forced and len(res.coloring) == 17 * 17
    assert all(c == (p[0] + p[1]) % 3 for p, c in res.coloring.assignments.items())
    assert independent_proper(res.coloring, d3)


def test_single_seed_forces_nothing(d3):
    seed = PartialColoring(3, {(0, 0): 0})
    res = propagate_forced(d3, 3, seed, Window.square(8))
    assert res.coloring == seed and not res.fully_forced and res.transcript == ()


def test_four_colors_do_not_force(d3):
    seed = seed_run(4)
    assert seed.is_proper(d3)
    res = propagate_forced(d3, 4, seed, Window.box(-2, 5))
    assert not res.fully_forced
    assert len(res.coloring) < Window.box(-2, 5).size // 4


@pytest.mark.parametrize("t", [2, 3, 4, 5])
def test_forced_family(family, t):
    w = Window.square(6)
    res = propagate_forced(family[t], t, seed_run(t), w)
    assert res.fully_forced
    assert all(c == (p[0] + p[1]) % t for p, c in res.coloring.assignments.items())
    match = match_linear(res.coloring, family[t])
    assert match[0].weights == (1, 1)
    assert match[1] == {j: j for j in range(t)}


def test_propagation_contradiction(d3):
    # two colors and a triangle: the third point sees both colors
    with pytest.raises(PropagationContradiction) as info:
        propagate_forced(d3, 2, PartialColoring(2, {(0, 0): 0, (1, 0): 1}), Window.square(3))
    assert info.value.point is not None


def test_seed_validation(d3):
    with pytest.raises(ValueError):
        propagate_forced(d3, 3, PartialColoring(3, {(0, 0): 0, (1, 0): 0}), Window.square(3))
    with pytest.raises(ValueError):
        propagate_forced(d3, 3, PartialColoring(3, {(9, 0): 0}), Window.square(3))


@pytest.mark.parametrize("shuffle", range(8))
def test_propagation_confluent(d3, family, shuffle):
    for t, d in [(3, d3), (4, family[4])]:
        w = Window.square(5)
        base = propagate_forced(d, t, seed_run(t), w)
        other = propagate_forced(d, t, seed_run(t), w, shuffle_seed=shuffle)
        assert other.coloring == base.coloring
    partial = PartialColoring(4, {(0, 0): 0, (1, 0): 1, (0, 1): 2})
    base = propagate_forced(d3, 4, partial, Window.square(4))
    other = propagate_forced(d3, 4, partial, Window.square(4), shuffle_seed=shuffle)
    assert other.coloring == base.coloring


def test_replay_transcript_and_tamper(d3):
    w = Window.square(4)
    res = propagate_forced(d3, 3, seed_run(3), w)
    assert replay_transcript(d3, 3, seed_run(3), res.transcript, w) == res.coloring
    step = res.transcript[5]
    bad_color = type(step)(step.point, (step.color + 1) % 3, step.witnesses)
    tampered = res.transcript[:5] + (bad_color,) + res.transcript[6:]
    with pytest.raises(ValueError):
        replay_transcript(d3, 3, seed_run(3), tampered, w)
    thin = type(step)(step.point, step.color, step.witnesses[:1])
    with pytest.raises(ValueError):
        replay_transcript(d3, 3, seed_run(3), res.transcript[:5] + (thin,), w)


# -- density -----------------------------------------------------------------


def decimal_value(p, m=2):
    getcontext().prec = 60
    return Decimal(p[0]) + Decimal(p[1]) * Decimal(m).sqrt()


def oracle_ell(coloring, window, dset):
    """Per-color sort by 60-digit decimals, exact gaps, same core rule."""
    pts = window.points()
    vals = sorted(decimal_value(p) for p in pts)
    quarter = (vals[-1] - vals[0]) / 4
    lo, hi = vals[0] + quarter, vals[-1] - quarter
    best = None
    for c in coloring.colors_used():
        mine = sorted((p for p in pts if coloring[p] == c), key=decimal_value)
        for u, v in zip(mine, mine[1:]):
            if decimal_value(u) < hi and decimal_value(v) > lo:
                gap = dset.value(v) - dset.value(u)
                if best is None or gap > best:
                    best = gap
    return best


def test_density_counterexample(d3):
    w = Window.box(0, 20)
    gap = density_gap(LinearColoring(3, (1, 1)).on_window(w), w, d3)
    assert gap.ell < QuadExt(1, 0) / 2
    assert format_quad(gap.ell) == "-1+s"
    c, u, v = gap.realized_by
    assert v - u == gap.ell


def test_density_rank_one():
    d = parse_distance_set("1, 2")
    w = Window((0, 20), (0, 0))
    pc = PartialColoring(3, {p: p[0] % 3 for p in w.points()})
    assert density_gap(pc, w, d).ell == 3


def test_density_single_color():
    # {5} embeds with unit 5, so neighbors sit 5 apart
    d = parse_distance_set("5")
    w = Window((0, 8), (0, 0))
    gap = density_gap(PartialColoring(1, {p: 0 for p in w.points()}), w, d)
    assert gap.ell == 5 == max(gap.per_color_max_gap.values())


def test_density_errors(d3):
    w = Window.square(3)
    with pytest.raises(ValueError):
        density_gap(PartialColoring(3, {(0, 0): 0}), w, d3)
    with pytest.raises(ValueError):
        density_gap(PartialColoring(3, {p: 0 for p in w.points()}), w, d3)


@pytest.mark.parametrize("radius", [4, 6, 10])
def test_density_matches_oracle(d3, family, radius):
    for t, d in [(3, d3), (2, family[2]), (5, family[5])]:
        w = Window.square(radius)
        coloring = LinearColoring(t, (1, 1)).on_window(w)
        assert density_gap(coloring, w, d).ell == oracle_ell(coloring, w, d)


def test_density_antitone(family):
    for t, d in family.items():
        lc = LinearColoring(t, (1, 1))
        ells = [density_gap(lc.on_window(Window.square(r)), Window.square(r), d).ell for r in (10, 20, 40)]
        assert ells[0] >= ells[1] >= ells[2], (t, [format_quad(e) for e in ells])


def test_density_uses_exact_order(d3, monkeypatch):
    w = Window.square(6)
    coloring = LinearColoring(3, (1, 1)).on_window(w)
    expected = density_gap(coloring, w, d3).ell
    monkeypatch.setattr(QuadExt, "__float__", lambda self: float(random.random()))
    assert density_gap(coloring, w, d3).ell == expected


# -- windows, colorings, dumps -----------------------------------------------


def test_window_basics(d3):
    w = Window.square(2)
    assert w.size == 25 and (2, -2) in w and (3, 0) not in w
    assert w.points()[:2] == [(-2, -2), (-2, -1)]
    assert Window.from_dict(w.to_dict()) == w
    assert w.for_distance_set(parse_distance_set("1, 2")).b_range == (0, 0)
    assert Window.square(20).halved() == Window.square(10)
    with pytest.raises(ValueError):
        Window((3, 1), (0, 0))


def test_partial_coloring_conflicts(d3):
    pc = PartialColoring(3, {(0, 0): 0, (1, 1): 0, (5, 5): 0})
    assert not pc.is_proper(d3) and len(pc.conflicts(d3)) == 1
    assert pc.colors_used() == {0}
    assert len(pc.restrict(Window.square(1))) == 2


def test_point_csv(tmp_path, d3):
    w = Window.box(0, 1)
    rows = point_rows(LinearColoring(3, (1, 1)).on_window(w), d3)
    path = tmp_path / "pts.csv"
    write_points_csv(path, rows)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1:] == ["0,0,0/1+0/1*s,0,0", "0,1,0/1+1/1*s,1.41421356237,1",
                         "1,0,1/1+0/1*s,1,1", "1,1,1/1+1/1*s,2.41421356237,2"]
