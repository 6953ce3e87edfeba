import math
import statistics

import pytest

from fppmorse.errors import PathError, PreconditionError, SpecError
from fppmorse.weights import (
    TableWeights,
    WeightField,
    edge_hash,
    hash_to_unit,
    norm_ppf,
    omega_length,
    parse_distribution,
)


def test_golden_vectors(golden):
    rows = golden("weight_vectors.json")
    assert len(rows) == 32
    for r in rows:
        e = tuple(tuple(v) for v in r["edge"])
        for spec, hexw in r["weights"].items():
            W = WeightField(r["seed"], parse_distribution(spec))
            assert W.uniform(e) == float.fromhex(r["u"]), (spec, e)
            assert W.weight(e) == float.fromhex(hexw), (spec, e)


def test_constant_field():
    W = WeightField(5, parse_distribution("const:1"))
    assert W.weight(((0, 0, 0), (1, 0, 0))) == 1.0


def test_purity():
    W = WeightField(11, parse_distribution("lognorm:0:1"))
    e = ((3, 4, 0), (3, 5, 0))
    assert W.weight(e).hex() == WeightField(11, parse_distribution("lognorm:0:1")).weight(e).hex()


def test_uniform_mean_law_of_large_numbers():
    W = WeightField(2024, parse_distribution("unif:0:1"))
    xs = [W.weight(((i, 0, 0), (i + 1, 0, 0))) for i in range(100_000)]
    assert abs(statistics.fmean(xs) - 0.5) < 0.01
    assert 0 < min(xs) and max(xs) < 1


def test_exponential_mean():
    W = WeightField(7, parse_distribution("exp:2"))
    xs = [W.weight(((0, i, 0), (0, i + 1, 0))) for i in range(50_000)]
    assert abs(statistics.fmean(xs) - 0.5) < 0.01


def test_unit_interval_open():
    assert hash_to_unit(0) == 0.5 / 2**52
    assert hash_to_unit(2**64 - 1) < 1.0


def test_seed_changes_hash():
    e = ((0, 0, 0), (1, 0, 0))
    assert edge_hash(1, e) != edge_hash(2, e)


def test_wide_words_are_distinct():
    a = ((0, 70, 2**64), (0, 71, 2**65))
    b = ((0, 70, 0), (0, 71, 0))
    assert edge_hash(0, a) != edge_hash(0, b)


@pytest.mark.parametrize("p", [1e-300, 1e-12, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.97575, 0.999, 1 - 1e-12])
def test_norm_ppf_against_stdlib(p):
    assert norm_ppf(p) == pytest.approx(statistics.NormalDist().inv_cdf(p), rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("spec", ["unif:0:1", "unif:0.5:1.5", "exp:1", "exp:3", "lognorm:0:1", "lognorm:1:0.5"])
@pytest.mark.parametrize("u", [0.01, 0.25, 0.5, 0.9, 0.999])
def test_cdf_inverts_quantile(spec, u):
    d = parse_distribution(spec)
    assert d.cdf(d.quantile(u)) == pytest.approx(u, rel=1e-9)


def test_means():
    assert parse_distribution("unif:0.5:1.5").mean == 1.0
    assert parse_distribution("exp:4").mean == 0.25
    assert parse_distribution("lognorm:0:1").mean == pytest.approx(math.exp(0.5))


def test_open_at_zero_grammar():
    d = parse_distribution("unif:0:1")
    assert (d.kind, d.a, d.b) == ("unif", 0.0, 1.0)


@pytest.mark.parametrize("bad", ["unif:0:0", "unif:2:1", "exp:0", "const:0", "lognorm:0:0", "gamma:1", "unif:1", "exp:x"])
def test_bad_distributions(bad):
    with pytest.raises(SpecError):
        parse_distribution(bad)


def test_omega_length_cases():
    W = WeightField(0, parse_distribution("const:2.5"))
    path = [(i, 0, 0) for i in range(5)]
    assert omega_length(path, W) == 10.0
    assert omega_length([(0, 0, 0)], W) == 0.0
    T = TableWeights({((0, 0, 0), (1, 0, 0)): 0.2, ((1, 0, 0), (2, 0, 0)): 1.1, ((2, 0, 0), (3, 0, 0)): 0.7})
    assert omega_length([(i, 0, 0) for i in range(4)], T) == pytest.approx(2.0)


def test_omega_length_non_adjacent():
    T = TableWeights({((0, 0, 0), (1, 0, 0)): 1.0})
    with pytest.raises((PathError, KeyError)):
        omega_length([(0, 0, 0), (2, 0, 0)], T)


def test_table_weights_positive():
    with pytest.raises(PreconditionError):
        TableWeights({((0, 0, 0), (1, 0, 0)): 0.0})
