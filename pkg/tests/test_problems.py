import numpy as np
import pytest

from moeda_lab.base.exceptions import CapacityError, InvalidArgumentError
from moeda_lab.services.core import as_genome, genome_to_str, random_population
from moeda_lab.services.problems import (
    ProblemSpec,
    RepresentativeMode,
    distinct_front_points,
    evaluate,
    evaluate_population,
    invtrap,
    niche_counts,
    pareto_oracle_bruteforce,
    representative_set,
    trap,
)


@pytest.mark.parametrize(("k", "d"), [(3, 0.9), (4, 0.75), (5, 0.8)])
def test_default_signal_difference(k: int, d: float) -> None:
    assert ProblemSpec.trap_invtrap(m=2, k=k).d == d


@pytest.mark.parametrize(("u", "expected"), [(3, 1.0), (2, 0.0), (0, 0.1)])
def test_trap(u: int, expected: float) -> None:
    assert trap(u, 3, 0.9) == pytest.approx(expected)


@pytest.mark.parametrize(("u", "expected"), [(0, 1.0), (1, 0.0), (3, 0.1)])
def test_invtrap(u: int, expected: float) -> None:
    assert invtrap(u, 3, 0.9) == pytest.approx(expected)


def test_trap_argument_checks() -> None:
    with pytest.raises(InvalidArgumentError):
        trap(4, 3, 0.9)
    with pytest.raises(InvalidArgumentError):
        trap(0, 1, 0.9)
    with pytest.raises(InvalidArgumentError):
        invtrap(0, 3, 1.0)


@pytest.mark.parametrize(
    ("genome", "expected"), [("111000", (1.1, 1.1)), ("111111", (2.0, 0.2))]
)
def test_evaluate_trap_invtrap(
    trap_m2: ProblemSpec, genome: str, expected: tuple[float, float]
) -> None:
    assert evaluate(trap_m2, as_genome(genome)) == pytest.approx(expected)


def test_evaluate_onemax_zeromax() -> None:
    p = ProblemSpec.onemax_zeromax(4)
    assert evaluate(p, as_genome("1010")) == (2.0, 2.0)


def test_evaluate_length_mismatch(trap_m2: ProblemSpec) -> None:
    with pytest.raises(InvalidArgumentError):
        evaluate(trap_m2, as_genome("11100"))


def test_evaluate_population_agrees_with_evaluate(rng) -> None:
    p = ProblemSpec.overlap(m=4, k=3, m_d=2)
    pop = random_population(50, p.ell, rng)
    batch = evaluate_population(p, pop.genomes)
    for row, genome in zip(batch, pop.genomes, strict=True):
        assert tuple(row) == pytest.approx(evaluate(p, genome))


def test_onemax_zeromax_equals_full_conflict_unit_overlap(rng) -> None:
    pop = random_population(20, 6, rng)
    a = evaluate_population(ProblemSpec.onemax_zeromax(6), pop.genomes)
    b = evaluate_population(ProblemSpec.overlap(m=6, k=1, m_d=6), pop.genomes)
    assert np.allclose(a, b)


def test_overlap_shared_partitions_agree() -> None:
    p = ProblemSpec.overlap(m=2, k=3, m_d=1)
    # 第二个分块共享：两个目标都按 trap 计
    assert evaluate(p, as_genome("000111")) == pytest.approx((1.1, 2.0))


def test_md_greater_than_m_is_rejected() -> None:
    with pytest.raises(InvalidArgumentError) as info:
        ProblemSpec.overlap(m=2, k=3, m_d=3)
    assert info.value.data == "problem"


def test_bad_permutation_is_rejected() -> None:
    with pytest.raises(InvalidArgumentError):
        ProblemSpec.build(kind="trap-invtrap", m=1, k=3, permutation=(0, 1, 1))


def test_permutation_moves_partition_bits() -> None:
    p = ProblemSpec.build(kind="trap-invtrap", m=2, k=3, permutation=(0, 2, 4, 1, 3, 5))
    # 分块 0 占据位置 0,2,4
    assert evaluate(p, as_genome("101010")) == pytest.approx((1.1, 1.1))
    reps = representative_set(p, RepresentativeMode.GENOTYPE)
    assert reps.genomes is not None
    assert "101010" in {genome_to_str(g) for g in reps.genomes}


def test_representative_set_genotype(trap_m2: ProblemSpec) -> None:
    reps = representative_set(trap_m2, RepresentativeMode.GENOTYPE)
    assert reps.genomes is not None
    assert [genome_to_str(g) for g in reps.genomes] == [
        "000000",
        "000111",
        "111000",
        "111111",
    ]


def test_representative_set_objective(trap_m2: ProblemSpec) -> None:
    reps = representative_set(trap_m2, RepresentativeMode.OBJECTIVE)
    assert len(reps) == 3
    assert np.allclose(reps.points, [(0.2, 2.0), (1.1, 1.1), (2.0, 0.2)])


def test_representative_set_overlap_genotype_count() -> None:
    p = ProblemSpec.overlap(m=3, k=3, m_d=1)
    assert len(representative_set(p, RepresentativeMode.GENOTYPE)) == 2
    assert distinct_front_points(p).shape == (2, 2)


def test_representative_set_capacity() -> None:
    p = ProblemSpec.onemax_zeromax(12)
    with pytest.raises(CapacityError):
        representative_set(p, RepresentativeMode.GENOTYPE, cap=1000)


def test_oracle_single_partition() -> None:
    front = pareto_oracle_bruteforce(ProblemSpec.trap_invtrap(m=1, k=3))
    assert front.genomes is not None
    assert [genome_to_str(g) for g in front.genomes] == ["000", "111"]


def test_oracle_onemax_zeromax_everything_is_optimal() -> None:
    front = pareto_oracle_bruteforce(ProblemSpec.onemax_zeromax(2))
    assert front.genomes is not None
    assert [genome_to_str(g) for g in front.genomes] == ["00", "01", "10", "11"]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_oracle_matches_representative_set(m: int) -> None:
    p = ProblemSpec.trap_invtrap(m=m, k=3)
    front = pareto_oracle_bruteforce(p)
    reps = representative_set(p, RepresentativeMode.GENOTYPE)
    assert front.genomes is not None and reps.genomes is not None
    assert front.genomes.shape[0] == 2**m
    assert np.array_equal(front.genomes, reps.genomes)
    assert front.points.shape[0] == m + 1
    assert np.allclose(front.points, reps.points, atol=1e-9)


def test_oracle_rejects_long_genomes() -> None:
    with pytest.raises(CapacityError):
        pareto_oracle_bruteforce(ProblemSpec.onemax_zeromax(25))


def test_niche_counts() -> None:
    assert niche_counts(4) == [1, 4, 6, 4, 1]
    assert niche_counts(1) == [1, 1]
    assert niche_counts(10)[5] == 252
    for m in range(1, 21):
        assert sum(niche_counts(m)) == 2**m


def test_niche_counts_match_front_structure() -> None:
    p = ProblemSpec.trap_invtrap(m=3, k=3)
    reps = representative_set(p, RepresentativeMode.GENOTYPE)
    assert reps.genomes is not None
    objectives = evaluate_population(p, reps.genomes)
    counts = [int(np.isclose(objectives, pt).all(axis=1).sum()) for pt in reps.points]
    assert sorted(counts) == sorted(niche_counts(3))
