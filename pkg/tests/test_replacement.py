import numpy as np
import pytest

from moeda_lab.base.exceptions import InvalidArgumentError
from moeda_lab.services.core import (
    Individual,
    ObjectiveVector,
    Population,
    RngStream,
    as_genome,
)
from moeda_lab.services.pareto_toolkit import nondominated_sort
from moeda_lab.services.replacement import (
    RtsConfig,
    TiePolicy,
    elitist_replacement,
    rts_generation,
    rts_replace,
)
from tests.conftest import make_population, points_population


def _child(genome: str, f1: float, f2: float) -> Individual:
    return Individual(genome=as_genome(genome), objectives=ObjectiveVector(f1, f2))


def test_elitist_replacement_keeps_best_ranks() -> None:
    parents = make_population(["000", "001"], [(1, 1), (0, 0)])
    offspring = make_population(["111", "110"], [(3, 3), (2, 2)])
    survivors = elitist_replacement(parents, offspring)
    assert survivors.size == 2
    assert survivors.genomes.tolist() == [[1, 1, 1], [1, 1, 0]]


def test_elitist_replacement_truncates_by_crowding() -> None:
    parents = make_population(["00", "01", "10"], [(1, 5), (2, 3), (4, 1)])
    offspring = make_population(["11"], [(1.5, 4.5)])
    survivors = elitist_replacement(parents, offspring)
    assert survivors.size == 3
    kept = {tuple(row) for row in survivors.require_objectives().tolist()}
    # 中间两点的拥挤距离：(2, 3) 为 2.5+3.5，(1.5, 4.5) 为 1+2
    assert kept == {(1.0, 5.0), (4.0, 1.0), (2.0, 3.0)}


def test_elitist_replacement_rejects_oversized_offspring() -> None:
    parents = make_population(["0"], [(1, 1)])
    offspring = make_population(["0", "1"], [(1, 1), (2, 2)])
    with pytest.raises(InvalidArgumentError):
        elitist_replacement(parents, offspring)


def test_rts_dominating_child_replaces_nearest(rng: RngStream) -> None:
    current = make_population(["000", "111"], [(1, 1), (5, 5)])
    rts_replace(current, _child("001", 2, 2), RtsConfig(w=2), rng)
    assert current.genomes.tolist() == [[0, 0, 1], [1, 1, 1]]
    assert current.require_objectives()[0].tolist() == [2.0, 2.0]


def test_rts_dominated_child_is_discarded(rng: RngStream) -> None:
    current = make_population(["000", "111"], [(3, 3), (5, 5)])
    rts_replace(current, _child("001", 2, 2), RtsConfig(w=2), rng)
    assert current.genomes.tolist() == [[0, 0, 0], [1, 1, 1]]


@pytest.mark.parametrize(
    ("policy", "expected"),
    [(TiePolicy.KEEP_INCUMBENT, [0, 0, 0]), (TiePolicy.ALWAYS_REPLACE, [0, 0, 1])],
)
def test_rts_tie_policies(
    policy: TiePolicy, expected: list[int], rng: RngStream
) -> None:
    current = make_population(["000", "111"], [(3, 1), (5, 5)])
    rts_replace(current, _child("001", 1, 3), RtsConfig(w=2, tie_policy=policy), rng)
    assert current.genomes[0].tolist() == expected


def test_rts_coin_flip_tie_is_fair() -> None:
    rng = RngStream.of(5)
    replaced = 0
    for _ in range(4000):
        current = make_population(["000", "111"], [(3, 1), (5, 5)])
        rts_replace(current, _child("001", 1, 3), RtsConfig(w=2), rng)
        replaced += int(current.genomes[0, 2])
    assert 0.45 <= replaced / 4000 <= 0.55


def test_rts_window_too_large(rng: RngStream) -> None:
    current = make_population(["000", "111"], [(1, 1), (5, 5)])
    with pytest.raises(InvalidArgumentError):
        rts_replace(current, _child("001", 2, 2), RtsConfig(w=3), rng)


def test_rts_default_window() -> None:
    assert RtsConfig().window(100, 30) == 30
    assert RtsConfig().window(8, 30) == 8
    assert RtsConfig(w=4).window(100, 30) == 4


def test_rts_generation_leaves_input_untouched(rng: RngStream) -> None:
    current = make_population(["000", "111"], [(1, 1), (5, 5)])
    offspring = make_population(["001", "110"], [(2, 2), (6, 6)])
    result = rts_generation(current, offspring, RtsConfig(w=2), rng)
    assert current.genomes.tolist() == [[0, 0, 0], [1, 1, 1]]
    assert result.genomes.tolist() == [[0, 0, 1], [1, 1, 0]]
    assert np.array_equal(result.require_objectives(), [[2, 2], [6, 6]])


def test_rts_capped_window() -> None:
    assert RtsConfig(w=10).capped(8).w == 8
    assert RtsConfig(w=4).capped(8).w == 4
    assert RtsConfig().capped(8).w is None


def test_elitist_replacement_prefers_every_front_member() -> None:
    generator = RngStream.of(31).generator
    for _ in range(50):
        values = generator.integers(0, 6, size=(16, 2)).astype(float)
        parents = points_population([tuple(v) for v in values[:8]])
        offspring = points_population([tuple(v) for v in values[8:]])
        combined = nondominated_sort(Population.concat(parents, offspring))
        assert combined.rank is not None
        survivors = elitist_replacement(parents, offspring)
        assert survivors.rank is not None and survivors.size == 8
        front = int((combined.rank == 1).sum())
        if (survivors.rank >= 2).any():
            assert int((survivors.rank == 1).sum()) == front
