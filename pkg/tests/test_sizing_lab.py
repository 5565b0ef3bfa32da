import math

import pytest
from pydantic import ValidationError

from moeda_lab.base.exceptions import InfeasibleAtBudgetError, InvalidArgumentError
from moeda_lab.services.core import RngStream
from moeda_lab.services.engine import AlgorithmConfig
from moeda_lab.services.problems import ProblemSpec, RepresentativeMode
from moeda_lab.services.replacement import ReplacementKind, RtsConfig
from moeda_lab.services.sizing_lab import (
    BisectionConfig,
    SizingParams,
    bisection_min_popsize,
    controlled_growth_family,
    exact_competing_substructures,
    fit_scaling_exponent,
    growth_rate_schedule,
    max_competing_substructures,
    predict_eda_popsize,
    predict_niching_popsize,
    scalability_sweep,
    success_probability,
)
from moeda_lab.services.variation_models import VariationConfig, VariationKind

UMDA = AlgorithmConfig(variation=VariationConfig(kind=VariationKind.UMDA))
TRAP = ProblemSpec.trap_invtrap(m=2, k=3)


def test_predict_eda_popsize() -> None:
    assert predict_eda_popsize(3, 8, SizingParams()) == pytest.approx(192.0)
    assert predict_eda_popsize(1, 4, SizingParams(c1=2.0)) == pytest.approx(32.0)
    with pytest.raises(InvalidArgumentError):
        predict_eda_popsize(3, 1, SizingParams())


def test_predict_niching_popsize() -> None:
    exact, approx = predict_niching_popsize(SizingParams(n_opt=8, gamma=0.5, t=10))
    assert exact == pytest.approx(35.82, rel=1e-3)
    assert approx == 8.0
    with pytest.raises(InvalidArgumentError):
        predict_niching_popsize(SizingParams(n_opt=1))
    with pytest.raises(InvalidArgumentError):
        predict_niching_popsize(SizingParams(n_opt=4, gamma=1.0))


@pytest.mark.parametrize(("m", "k", "expected"), [(8, 3, 6), (1, 3, 1), (16, 5, 9)])
def test_max_competing_substructures(m: int, k: int, expected: int) -> None:
    assert max_competing_substructures(m, k) == expected


def test_exact_competing_substructures() -> None:
    assert exact_competing_substructures(8, 3, SizingParams()) == 4


def test_growth_rate_schedule() -> None:
    rows = growth_rate_schedule([3], [1, 8])
    assert [(r.k, r.m, r.m_d, r.m_d_exact) for r in rows] == [
        (3, 1, 1, None),
        (3, 8, 6, 4),
    ]


def test_controlled_growth_family() -> None:
    family = controlled_growth_family([4, 16], k=3)
    assert [(p.m, p.m_d) for p in family] == [(4, 4), (16, 7)]
    assert family[0].d == 0.9


def test_fit_scaling_exponent() -> None:
    quadratic = fit_scaling_exponent([(x, x**2) for x in (2.0, 4.0, 8.0, 16.0)])
    assert quadratic.power_slope == pytest.approx(2.0)
    assert quadratic.power_residual == pytest.approx(0.0, abs=1e-12)
    assert quadratic.prefers_power
    doubling = fit_scaling_exponent([(x, 2**x) for x in (2.0, 4.0, 8.0, 16.0)])
    assert doubling.exp_slope == pytest.approx(math.log(2))
    assert not doubling.prefers_power


def test_fit_scaling_exponent_argument_checks() -> None:
    with pytest.raises(InvalidArgumentError):
        fit_scaling_exponent([(1.0, 1.0), (2.0, 4.0)])
    with pytest.raises(InvalidArgumentError):
        fit_scaling_exponent([(1.0, 1.0), (2.0, 0.0), (3.0, 9.0)])


def test_bisection_with_injected_threshold() -> None:
    result = bisection_min_popsize(
        TRAP, UMDA, RepresentativeMode.GENOTYPE, BisectionConfig(), 1,
        predicate=lambda n, _: n >= 37,
    )
    assert result.n_min_samples == [38] * 10
    assert result.n_min_mean == 38 and result.n_min_std == 0
    assert math.isnan(result.evals_mean)


def test_bisection_searches_below_passing_start() -> None:
    cfg = BisectionConfig(repeats=1)
    result = bisection_min_popsize(
        TRAP, UMDA, RepresentativeMode.GENOTYPE, cfg, 1, predicate=lambda n, _: n >= 5
    )
    assert result.n_min_samples == [6]
    always = bisection_min_popsize(
        TRAP, UMDA, RepresentativeMode.GENOTYPE, cfg, 1, predicate=lambda n, _: True
    )
    assert always.n_min_samples == [2]


def test_bisection_infeasible_at_budget() -> None:
    with pytest.raises(InfeasibleAtBudgetError) as info:
        bisection_min_popsize(
            TRAP, UMDA, RepresentativeMode.GENOTYPE,
            BisectionConfig(repeats=1, n_max=1024), 1,
            predicate=lambda n, _: False,
        )
    assert info.value.data == 1024


def test_bisection_config_checks_bounds() -> None:
    with pytest.raises(ValidationError):
        BisectionConfig(n_start=64, n_max=32)


def test_success_probability() -> None:
    p = ProblemSpec.onemax_zeromax(1)
    algo = AlgorithmConfig(
        variation=VariationConfig(kind=VariationKind.UMDA), max_generations=0
    )
    assert success_probability(p, algo, 64, 3, 2, RepresentativeMode.OBJECTIVE) == 1.0
    assert success_probability(p, algo, 2, 3, 2, RepresentativeMode.GENOTYPE) <= 1.0
    with pytest.raises(InvalidArgumentError):
        success_probability(p, algo, 8, 0, 2)


def test_sweep_records_feasible_problem() -> None:
    algo = AlgorithmConfig(
        variation=VariationConfig(kind=VariationKind.UMDA), early_abort=True
    )
    cfg = BisectionConfig(n_start=8, n_max=256, runs=2, repeats=1)
    result = scalability_sweep(
        [ProblemSpec.onemax_zeromax(2)], algo, RepresentativeMode.OBJECTIVE, cfg, 5
    )
    assert result.failures == []
    [record] = result.records
    assert record.ell == 2 and record.repeats == 1
    assert record.algo == "umda" and record.mode == "objective"
    assert 3 <= record.n_min_mean <= 256


def test_sweep_keeps_going_after_infeasible_problem() -> None:
    cfg = BisectionConfig(n_start=2, n_max=2, runs=1, repeats=1)
    result = scalability_sweep([TRAP], UMDA, RepresentativeMode.GENOTYPE, cfg, 5)
    assert result.records == []
    [failure] = result.failures
    assert failure.last_failing_n == 2


def test_sweep_rejects_empty_family() -> None:
    with pytest.raises(InvalidArgumentError):
        scalability_sweep([], UMDA, RepresentativeMode.GENOTYPE, BisectionConfig(), 1)


def test_predictor_properties() -> None:
    assert predict_eda_popsize(3, 2, SizingParams()) == pytest.approx(16.0)
    doubled = predict_eda_popsize(4, 6, SizingParams(c1=2.0))
    assert doubled == pytest.approx(2 * predict_eda_popsize(4, 6, SizingParams()))
    exact = [
        predict_niching_popsize(SizingParams(n_opt=n, gamma=0.5))[0] for n in (4, 8, 16)
    ]
    assert exact == sorted(exact) and len(set(exact)) == 3


@pytest.mark.parametrize("n_start", [2, 4, 16])
def test_bisection_independent_of_start_below_threshold(n_start: int) -> None:
    result = bisection_min_popsize(
        TRAP, UMDA, RepresentativeMode.GENOTYPE,
        BisectionConfig(n_start=n_start, repeats=1, stop_ratio=1.01, stop_gap=0), 1,
        predicate=lambda n, _: n >= 100,
    )
    assert result.n_min_samples == [100]


def test_fit_prefers_power_on_noisy_power_law() -> None:
    noise = RngStream.of(12).generator.normal(0.0, 0.05, size=6)
    ells = [8.0, 16.0, 32.0, 64.0, 128.0, 256.0]
    fit = fit_scaling_exponent(
        [(ell, 4 * ell**2 * (1 + e)) for ell, e in zip(ells, noise, strict=True)]
    )
    assert fit.prefers_power
    assert fit.power_slope == pytest.approx(2.0, abs=0.1)


def test_doubling_reaches_n_max() -> None:
    tried: list[int] = []

    def predicate(n: int, _: RngStream) -> bool:
        tried.append(n)
        return n >= 80

    result = bisection_min_popsize(
        TRAP, UMDA, RepresentativeMode.GENOTYPE,
        BisectionConfig(n_start=16, n_max=100, repeats=1, stop_ratio=1.01, stop_gap=0),
        1, predicate=predicate,
    )
    assert 100 in tried
    assert result.n_min_samples == [80]


def test_infeasible_reports_n_max_as_last_failure() -> None:
    with pytest.raises(InfeasibleAtBudgetError) as info:
        bisection_min_popsize(
            TRAP, UMDA, RepresentativeMode.GENOTYPE,
            BisectionConfig(n_start=16, n_max=100, repeats=1), 1,
            predicate=lambda n, _: False,
        )
    assert info.value.data == 100


def test_sweep_with_wide_rts_window_at_small_sizes() -> None:
    algo = AlgorithmConfig(
        variation=VariationConfig(kind=VariationKind.UMDA),
        replacement=ReplacementKind.RTS,
        rts=RtsConfig(w=10),
        max_generations=2,
    )
    cfg = BisectionConfig(n_start=16, n_max=1024, runs=1, repeats=1)
    family = [ProblemSpec.onemax_zeromax(2), ProblemSpec.onemax_zeromax(3)]
    result = scalability_sweep(family, algo, RepresentativeMode.OBJECTIVE, cfg, 6)
    assert result.failures == []
    assert len(result.records) == 2


def test_success_probability_grows_with_popsize() -> None:
    p = ProblemSpec.onemax_zeromax(8)
    algo = AlgorithmConfig(
        variation=VariationConfig(kind=VariationKind.UMDA), max_generations=2
    )
    probabilities = [
        success_probability(p, algo, n, 10, 8, RepresentativeMode.GENOTYPE)
        for n in (128, 512, 2048, 8192)
    ]
    assert probabilities == sorted(probabilities)
    assert probabilities[0] == 0.0 and probabilities[-1] > 0.5


@pytest.mark.slow
def test_umda_with_crowding_needs_exponential_popsize() -> None:
    algo = AlgorithmConfig(
        variation=VariationConfig(kind=VariationKind.UMDA),
        generation_cap_multiplier=1,
    )
    cfg = BisectionConfig(runs=3, repeats=2)
    family = [ProblemSpec.onemax_zeromax(ell) for ell in (4, 6, 8, 10)]
    result = scalability_sweep(family, algo, RepresentativeMode.GENOTYPE, cfg, 21)
    assert result.failures == []
    fit = fit_scaling_exponent([(r.ell, r.n_min_mean) for r in result.records])
    assert fit.exp_slope / math.log(2) > 0.2
    assert not fit.prefers_power


@pytest.mark.slow
def test_mecga_with_rts_grows_polynomially() -> None:
    algo = AlgorithmConfig(
        variation=VariationConfig(kind=VariationKind.MECGA),
        replacement=ReplacementKind.RTS,
        early_abort=True,
    )
    cfg = BisectionConfig(runs=3, repeats=2)
    family = controlled_growth_family([4, 8, 16], k=3)
    result = scalability_sweep(family, algo, RepresentativeMode.OBJECTIVE, cfg, 22)
    assert result.failures == []
    fit = fit_scaling_exponent([(r.ell, r.evals_mean) for r in result.records])
    assert fit.prefers_power
    assert fit.power_slope <= 3
