import numpy as np
import pytest

from moeda_lab.base.exceptions import InvalidArgumentError, InvalidStateError
from moeda_lab.services.core import (
    Population,
    RngStream,
    as_genome,
    genome_to_str,
    hamming_distance,
    random_population,
)


def test_random_population_is_deterministic_per_seed() -> None:
    a = random_population(1, 4, RngStream.of(7))
    b = random_population(1, 4, RngStream.of(7))
    assert np.array_equal(a.genomes, b.genomes)


def test_random_population_shape() -> None:
    pop = random_population(3, 5, RngStream.of(1))
    assert pop.size == 3
    assert pop.length == 5
    assert pop.genomes.dtype == np.uint8
    assert not pop.is_evaluated


def test_random_population_is_unbiased() -> None:
    pop = random_population(10000, 1, RngStream.of(3))
    assert 0.47 <= pop.genomes.mean() <= 0.53


@pytest.mark.parametrize(("n", "ell"), [(0, 4), (4, 0)])
def test_random_population_rejects_empty(n: int, ell: int) -> None:
    with pytest.raises(InvalidArgumentError):
        random_population(n, ell, RngStream.of(1))


@pytest.mark.parametrize(
    ("a", "b", "expected"),
    [("0000", "0000", 0), ("0000", "1111", 4), ("0110", "1100", 2)],
)
def test_hamming_distance(a: str, b: str, expected: int) -> None:
    assert hamming_distance(as_genome(a), as_genome(b)) == expected


def test_hamming_distance_length_mismatch() -> None:
    with pytest.raises(InvalidArgumentError):
        hamming_distance(as_genome("01"), as_genome("011"))


def test_as_genome_rejects_non_binary() -> None:
    with pytest.raises(InvalidArgumentError):
        as_genome("0120")
    with pytest.raises(InvalidArgumentError):
        as_genome([0, 2])


def test_genome_to_str() -> None:
    assert genome_to_str(as_genome([1, 0, 1, 1])) == "1011"


def test_child_streams_are_independent_of_parent_state() -> None:
    parent = RngStream.of(11)
    first = parent.child(3).generator.random(4)
    parent.generator.random(100)
    again = parent.child(3).generator.random(4)
    assert np.array_equal(first, again)
    assert not np.array_equal(first, parent.child(4).generator.random(4))


def test_population_requires_objectives() -> None:
    pop = Population(genomes=np.zeros((2, 3), dtype=np.uint8))
    with pytest.raises(InvalidStateError):
        pop.require_objectives()


def test_population_take_and_concat() -> None:
    pop = Population(
        genomes=np.array([[0, 0], [1, 1]], dtype=np.uint8),
        objectives=np.array([[0.0, 2.0], [2.0, 0.0]]),
    )
    both = Population.concat(pop, pop.take([1]))
    assert both.size == 3
    assert both.individual(2).objectives == (2.0, 0.0)
    assert both.rank is None


def test_hamming_distance_triangle_inequality() -> None:
    rows = random_population(30, 12, RngStream.of(9)).genomes
    for a in rows[:10]:
        for b in rows[10:20]:
            for c in rows[20:]:
                assert hamming_distance(a, c) <= (
                    hamming_distance(a, b) + hamming_distance(b, c)
                )


def test_fresh_restarts_the_sequence() -> None:
    stream = RngStream.of(5, 2)
    first = stream.generator.random(3)
    again = stream.fresh()
    assert again == stream
    assert np.array_equal(again.generator.random(3), first)
