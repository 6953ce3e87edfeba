import math

import pytest
from hypothesis import given, strategies as st

from fppmorse.errors import PreconditionError, SpecError
from fppmorse.sublinear import SublinearFunction, concavize, parse_sublinear, upper_hull


def chord_max(ts, ys):
    """O(n^2) least concave majorant on the grid: best chord over every bracket."""
    out = []
    for k, t in enumerate(ts):
        best = ys[k]
        for i in range(k + 1):
            for j in range(k, len(ts)):
                if i == j:
                    continue
                lam = (ts[j] - t) / (ts[j] - ts[i])
                best = max(best, lam * ys[i] + (1 - lam) * ys[j])
        out.append(best)
    return out


def test_parse_and_values():
    k = parse_sublinear("pow:2:0.5")
    assert k(100) == 20.0
    assert k(0) == 1.0
    assert parse_sublinear("const:3")(1e9) == 3.0
    assert parse_sublinear("log:1")(0) == 1.0
    assert k.spec == "pow:2:0.5"


@pytest.mark.parametrize("bad", ["pow:1:1", "pow:1:0", "const:0.5", "log", "sqrt:1", "pow:a:0.5", "const:-1"])
def test_parse_rejects(bad):
    with pytest.raises(SpecError):
        parse_sublinear(bad)


def test_negative_argument():
    with pytest.raises(PreconditionError):
        parse_sublinear("pow:1:0.5")(-1)


@pytest.mark.parametrize("spec", ["const:4", "pow:1:0.5", "pow:3:0.9", "log:2"])
@pytest.mark.parametrize("eps", [0.5, 0.1, 0.01])
def test_horizon(spec, eps):
    k = parse_sublinear(spec)
    T = k.horizon(eps)
    for f in (1, 2, 10, 1000):
        assert k(T * f) / (T * f) < eps


def test_concave_input_is_fixed_point():
    grid = [(float(t), math.sqrt(1 + t)) for t in range(0, 200, 3)]
    env = concavize(grid)
    for (t, y), v in zip(grid, env.values):
        assert v == pytest.approx(y, rel=1e-12)
    assert env.ratio_bound == pytest.approx(1.0)


def test_step_input_dominated():
    grid = [(float(t), float(max(1, math.floor(math.log2(1 + t))))) for t in range(300)]
    env = concavize(grid)
    assert all(v >= y for (_, y), v in zip(grid, env.values))


def test_sawtooth_matches_chord_oracle():
    ts = [float(t) for t in range(0, 120, 2)]
    ys = [1 + math.sqrt(t) + (2.0 if int(t) % 10 == 0 else 0.0) for t in ts]
    env = concavize(list(zip(ts, ys)))
    for a, b in zip(env.values, chord_max(ts, ys)):
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


def test_interpolation_between_grid_points():
    env = concavize([(0.0, 1.0), (10.0, 3.0)])
    assert env(5.0) == pytest.approx(2.0)
    assert env(-1.0) == 1.0 and env(99.0) == 3.0


@pytest.mark.parametrize("bad", [[], [(1.0, 1.0), (1.0, 2.0)], [(0.0, 0.5)]])
def test_concavize_rejects(bad):
    with pytest.raises(PreconditionError):
        concavize(bad)


grids = st.lists(st.floats(1.0, 50.0), min_size=1, max_size=25).map(
    lambda ys: [(float(3 * i), y) for i, y in enumerate(ys)]
)


@given(grids)
def test_envelope_dominates_and_is_idempotent(grid):
    env = concavize(grid)
    assert all(v >= y - 1e-12 for (_, y), v in zip(grid, env.values))
    again = concavize(list(zip(env.ts, env.values)))
    for a, b in zip(again.values, env.values):
        assert a == pytest.approx(b, rel=1e-9, abs=1e-9)


@given(grids)
def test_envelope_is_concave(grid):
    env = concavize(grid)
    ts, vs = env.ts, env.values
    for i in range(1, len(ts) - 1):
        lam = (ts[i + 1] - ts[i]) / (ts[i + 1] - ts[i - 1])
        assert vs[i] >= lam * vs[i - 1] + (1 - lam) * vs[i + 1] - 1e-9


@given(grids)
def test_envelope_matches_chord_oracle(grid):
    ts, ys = zip(*grid)
    env = concavize(grid)
    for a, b in zip(env.values, chord_max(ts, ys)):
        assert a == pytest.approx(b, rel=1e-9, abs=1e-9)


def test_upper_hull_drops_collinear():
    assert upper_hull([0, 1, 2], [0, 1, 2]) == [0, 2]
