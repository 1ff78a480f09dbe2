import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from tangentri.measure import DiscreteRandomVariable, SizingError
from tangentri.tangent import (AdaptedSequence, DecoupledPair, DecouplingError,
                               DyadicSpace, PredictableMultiplier, check_ci,
                               check_tangent, conditional_distribution, decouple,
                               index_prefix, is_conditionally_symmetric, lift,
                               maximal_function, monte_carlo, prefix_index,
                               sum_distribution, tail_probs,
                               verify_kolmogorov_converse, verify_levy,
                               verify_tail_comparison)
from strategies import sequences

RAD = DiscreteRandomVariable([-1.0, 1.0], [0.5, 0.5])


def law_dict(x):
    return {v: Fraction(p) for v, p in x.atoms}


def oracle_dict(d):
    return {float(k): v for k, v in d.items()}


def funcs_of(seq):
    return [lambda pre, k=k: seq.value(k, pre) for k in range(1, seq.depth + 1)]


def test_prefix_round_trip():
    assert prefix_index((1, -1, 1)) == 5
    assert index_prefix(5, 3) == (1, -1, 1)
    with pytest.raises(ValueError):
        prefix_index((0, 1))


def test_dyadic_space():
    paths = DyadicSpace(3).paths()
    assert paths.shape == (8, 3)
    assert paths[5].tolist() == [1, -1, 1]
    with pytest.raises(ValueError):
        DyadicSpace(0)
    with pytest.raises(SizingError):
        DyadicSpace(23).paths()


def test_sequence_validation_and_caps():
    with pytest.raises(ValueError, match="entries"):
        AdaptedSequence([[1.0, 2.0], [1.0]])
    with pytest.raises(ValueError):
        AdaptedSequence([[1.0, math.nan]])
    with pytest.raises(SizingError):
        AdaptedSequence.rademacher(23)
    with pytest.raises(SizingError):
        decouple(AdaptedSequence.rademacher(12))


def test_from_functions_matches_tables():
    seq = AdaptedSequence.from_functions(3, lambda k, pre: sum(pre) * k)
    assert seq.value(3, (1, 1, -1)) == 3.0
    assert seq.tables[0].tolist() == [-1.0, 1.0]


def test_conditional_distribution_examples():
    r = AdaptedSequence.rademacher(3)
    for node in range(4):
        assert conditional_distribution(r, 3, node) == [(-1.0, 0.5), (1.0, 0.5)]
    pm = PredictableMultiplier([[2.0], [0.0, 5.0]]).times_rademacher()
    assert conditional_distribution(pm, 2, (1,)) == [(-5.0, 0.5), (5.0, 0.5)]
    assert conditional_distribution(pm, 2, (-1,)) == [(0.0, 1.0)]
    const = AdaptedSequence([[7.0, 7.0]])
    assert conditional_distribution(const, 1, ()) == [(7.0, 1.0)]


def test_check_tangent_examples():
    pm = PredictableMultiplier([[2.0], [1.0, 3.0], [0.0, 1.0, -2.0, 4.0]]).times_rademacher()
    assert check_tangent(pm, pm.negate())
    r = AdaptedSequence.rademacher(2)
    shifted = AdaptedSequence([r.tables[0], r.tables[1] + np.repeat([0.0, 1.0], 2)])
    assert not check_tangent(r, shifted)
    assert check_tangent(pm, decouple(pm).marginal)
    with pytest.raises(ValueError):
        check_tangent(r, AdaptedSequence.rademacher(3))


def test_decouple_rademacher_is_independent_copy():
    pair = decouple(AdaptedSequence.rademacher(3))
    for k in range(1, 4):
        for e in range(8):
            col = pair.increments_given(e)[:, k - 1]
            e2 = np.arange(8)
            np.testing.assert_array_equal(col, np.where((e2 >> (3 - k)) & 1, 1.0, -1.0))


def test_decouple_multiplier_keeps_predictable_part():
    v = [[2.0], [1.0, 3.0]]
    pair = decouple(PredictableMultiplier(v).times_rademacher())
    # fbar_2 = v_2(eps_1) r'_2
    assert pair.value(2, (1, -1), (-1, 1)) == 3.0
    assert pair.value(2, (-1, 1), (1, -1)) == -1.0


def test_ci_passes_on_depth3_integer_sequence():
    rng = np.random.default_rng(3)
    seq = AdaptedSequence([rng.integers(-3, 4, size=1 << k).astype(float) for k in (1, 2, 3)])
    rep = check_ci(decouple(seq))
    assert rep.passed and rep.checked_paths == 64


class _Glued(DecoupledPair):
    """Copies fbar_1 into fbar_2, which breaks conditional independence."""

    def increments_given(self, e):
        out = super().increments_given(e)
        out[:, 1] = out[:, 0]
        return out


def test_ci_checker_detects_dependence():
    rep = check_ci(_Glued(AdaptedSequence.rademacher(2)))
    assert not rep.factorization_ok and not rep.passed


def test_decouple_postcondition_failure_raises(monkeypatch):
    import tangentri.tangent as tg
    monkeypatch.setattr(tg, "check_tangent", lambda a, b: False)
    with pytest.raises(DecouplingError):
        tg.decouple(AdaptedSequence.rademacher(2))


def test_lift_ignores_copy_coordinates():
    seq = AdaptedSequence([[1.0, 2.0], [1.0, 2.0, 3.0, 4.0]])
    lifted = lift(seq)
    assert lifted.width == 2
    # node (eps_1, eps'_1) = (+1, -1) has index 2
    assert lifted.tables[0].tolist() == [1.0, 1.0, 2.0, 2.0]
    assert check_tangent(seq, lifted)


def test_sum_distribution_examples():
    r3 = sum_distribution(AdaptedSequence.rademacher(3))
    assert law_dict(r3) == {-3.0: Fraction(1, 8), -1.0: Fraction(3, 8),
                            1.0: Fraction(3, 8), 3.0: Fraction(1, 8)}
    seq = AdaptedSequence.from_functions(2, [lambda p: p[0], lambda p: p[0] * p[1]])
    assert law_dict(sum_distribution(seq)) == {-2.0: Fraction(1, 4), 0.0: Fraction(1, 2),
                                               2.0: Fraction(1, 4)}
    # r'_1 + r_1 r'_2 from 16-pair enumeration
    expected = oracle_dict(oracles.decoupled_law(funcs_of(seq), 2))
    assert law_dict(sum_distribution(decouple(seq))) == expected


@given(sequences(max_depth=4))
def test_sum_laws_match_enumeration_oracle(seq):
    f = funcs_of(seq)
    n = seq.depth
    pair = decouple(seq)
    assert law_dict(sum_distribution(seq)) == oracle_dict(oracles.path_law(f, n))
    assert law_dict(sum_distribution(pair)) == oracle_dict(oracles.decoupled_law(f, n))
    for stat, variant in (("max_increment", "increments"), ("max_partial", "partial_sums")):
        assert law_dict(maximal_function(seq, variant)) == oracle_dict(oracles.path_law(f, n, stat))
        assert law_dict(maximal_function(pair, variant)) == oracle_dict(
            oracles.decoupled_law(f, n, stat))


@given(sequences(max_depth=7, lo=-4, hi=4))
def test_dp_agrees_with_enumeration(seq):
    pair = decouple(seq, check=False)
    a, b = sum_distribution(seq), sum_distribution(seq, "dp")
    assert a.values.tolist() == b.values.tolist() and a.probs.tolist() == b.probs.tolist()
    c, d = sum_distribution(pair), sum_distribution(pair, "dp")
    assert c.values.tolist() == d.values.tolist() and c.probs.tolist() == d.probs.tolist()
    assert math.fsum(a.probs.tolist()) == 1.0 and math.fsum(c.probs.tolist()) == 1.0


def test_dp_with_real_values():
    rng = np.random.default_rng(0)
    seq = AdaptedSequence([np.round(rng.normal(size=1 << k), 3) for k in range(1, 7)])
    for obj in (seq, decouple(seq, check=False)):
        a, b = sum_distribution(obj), sum_distribution(obj, "dp")
        assert a.same_law(b)


def test_dp_support_cap():
    rng = np.random.default_rng(0)
    seq = AdaptedSequence([rng.normal(size=1 << k) for k in range(1, 9)])
    with pytest.raises(SizingError, match="atoms"):
        sum_distribution(decouple(seq, check=False), "dp")


def test_sum_distribution_rejects_mode():
    with pytest.raises(ValueError):
        sum_distribution(AdaptedSequence.rademacher(2), "bogus")


def test_martingale_means_vanish():
    pm = PredictableMultiplier([[2.0], [1.0, -3.0], [0.5, 1.0, 2.0, 4.0]]).times_rademacher()
    assert sum_distribution(pm).mean() == 0.0
    assert sum_distribution(decouple(pm)).mean() == 0.0


def test_maximal_function_examples():
    r2 = AdaptedSequence.rademacher(2)
    assert law_dict(maximal_function(r2, "partial_sums")) == {1.0: Fraction(1, 2),
                                                              2.0: Fraction(1, 2)}
    one = AdaptedSequence([[-3.0, 2.0]])
    assert law_dict(maximal_function(one)) == {2.0: Fraction(1, 2), 3.0: Fraction(1, 2)}
    consts = AdaptedSequence([[1.0, 1.0], [4.0] * 4, [2.0] * 8])
    assert law_dict(maximal_function(consts)) == {4.0: Fraction(1)}
    with pytest.raises(ValueError):
        maximal_function(r2, "bogus")


def test_tail_probs():
    x = DiscreteRandomVariable([0.0, 1.0, 2.0], [0.5, 0.25, 0.25])
    assert tail_probs(x, [0.0, 0.5, 1.0, 2.0, 3.0]).tolist() == [1.0, 0.5, 0.5, 0.25, 0.0]


def test_tail_comparison_examples():
    rep = verify_tail_comparison(AdaptedSequence.rademacher(4))
    assert rep.passed and rep.lhs == rep.rhs
    from tangentri.experiments import prop23_sequence
    assert verify_tail_comparison(prop23_sequence(2, 4)).passed


@given(sequences(max_depth=5))
def test_tail_comparison_property(seq):
    assert verify_tail_comparison(seq).passed


def test_levy_examples():
    pm = PredictableMultiplier([[1.0], [2.0, 0.0], [1.0, 3.0, 1.0, 2.0]]).times_rademacher()
    rep = verify_levy(decouple(pm))
    assert rep.status == "checked" and rep.passed
    single = verify_levy(decouple(PredictableMultiplier([[2.0]]).times_rademacher()))
    assert single.passed and single.violations == 0
    beyond = verify_levy(decouple(AdaptedSequence.rademacher(3)), t_grid=[10.0])
    assert beyond.passed and beyond.checks == 2 * 8


def test_levy_needs_conditional_symmetry():
    skew = AdaptedSequence([[1.0, 2.0], [0.0, 1.0, 1.0, 2.0]])
    assert not is_conditionally_symmetric(skew)
    assert verify_levy(skew).status == "not-applicable"


def test_levy_mixed_form_fails_at_depth_two():
    # given eps, max|N_k| >= 1 surely while 2 P(N_2 >= 1) = 1/2
    rep = verify_levy(decouple(AdaptedSequence.rademacher(2)), t_grid=[1.0])
    assert rep.passed
    assert rep.mixed_violations == 4


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=15).map(
    lambda v: PredictableMultiplier([np.resize(np.array(v, float), 1 << (k - 1))
                                     for k in range(1, min(len(v), 5) + 1)]).times_rademacher()))
def test_levy_property(seq):
    assert verify_levy(seq).passed


def test_kolmogorov_examples():
    rep = verify_kolmogorov_converse([RAD] * 8, 2, t_grid=[2.0])
    lhs, rhs = oracles.kolmogorov_sides([[(-1, 0.5), (1, 0.5)]] * 8, 2, 2.0)
    assert lhs == 0.9375
    assert rep.passed and rep.worst_margin == pytest.approx(lhs - rhs, rel=1e-12)
    xis = [RAD.scale(w) for w in (1.0, 2.0, 4.0)]
    rep1 = verify_kolmogorov_converse(xis, 1, t_grid=[1.0])
    lhs1, rhs1 = oracles.kolmogorov_sides([[(-w, 0.5), (w, 0.5)] for w in (1, 2, 4)], 1, 1.0)
    assert rep1.passed and rep1.worst_margin == pytest.approx(lhs1 - rhs1, rel=1e-12)
    big = verify_kolmogorov_converse([RAD], 1, t_grid=[5.0])
    assert big.passed


@pytest.mark.parametrize("q", [1.0, 2.0, 4.0])
def test_kolmogorov_exhaustive(q):
    xis = [DiscreteRandomVariable([-3.0, -1.0, 1.0, 3.0], [0.125, 0.375, 0.375, 0.125])] * 4
    assert verify_kolmogorov_converse(xis, q).passed


def test_kolmogorov_requires_symmetry():
    with pytest.raises(ValueError):
        verify_kolmogorov_converse([DiscreteRandomVariable([0.0, 1.0], [0.5, 0.5])], 1)


def test_monte_carlo_is_seeded_and_close():
    seq = AdaptedSequence.rademacher(6)
    a = monte_carlo(seq, np.square, 20000, seed=11)
    b = monte_carlo(seq, np.square, 20000, seed=11)
    assert a == b
    assert abs(a.mean - 6.0) < 5 * a.stderr
    pair = decouple(seq)
    c = monte_carlo(pair, np.abs, 20000, seed=2, statistic="max_partial")
    exact = maximal_function(pair, "partial_sums").mean()
    assert abs(c.mean - exact) < 5 * c.stderr
