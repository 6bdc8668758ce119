import math
from pathlib import Path

import numpy as np
import pytest

from constructions import (
    CBS_87, INTERLEAVE, SEED_PAIRS, ConstructionPlan, GcsSet, Planner, build_arbitrary, cardinality_bound,
    cbs_as_grouped, cbs_from_pair, cbs_from_pairs, cbs_seed_87, check_corpus_records, check_plan,
    craigen_compose, digits_base, empty_set, interleave_sets, load_base_corpus, plan_arbitrary, plan_pair,
    prop3_compose, quarter_sequences, realize, scale_by, seed_pair, thm1_compose, yang_combine, yang_compose,
)
from erros import (
    CorpusVerificationFailed, GroupingMismatch, NotTwoPhase, OddCardinality, PlanArithmeticMismatch,
    RouteConstraintViolated, TrivialTwoPhase, UnsupportedSeedLength,
)
from golay_numbers import golay_numbers_upto
from seqcore import QSeq, verify_gcs_set

CORPUS = Path(__file__).resolve().parent.parent / "data" / "corpus_cbs.txt"


@pytest.mark.parametrize("n,pico", [(1, 2), (2, 4), (10, 20), (26, 52), (3, 6), (5, 10), (11, 22), (13, 26)])
def test_seed_pairs_are_complementary(n, pico):
    S = seed_pair(n)
    assert S.certified and S.lengths == (n, n)
    assert S.report.peak == pico


def test_seed_pair_unknown_length():
    with pytest.raises(UnsupportedSeedLength):
        seed_pair(7)
    with pytest.raises(UnsupportedSeedLength):
        seed_pair(0)


def test_empty_pair_from_plan():
    S = realize(plan_pair(0))
    assert S.lengths == (0, 0) and S.certified
    assert realize(plan_pair(1)).lengths == (1, 1)


def test_cbs_87_lag_zero_is_30():
    S = cbs_seed_87()
    assert S.lengths == (8, 8, 7, 7)
    assert S.cbs == (8, 7)
    assert S.report.peak == 30


def test_quarter_sequences_checks_two_phase():
    p, q = quarter_sequences(seed_pair(10))
    assert len(p) == len(q) == 10
    with pytest.raises(NotTwoPhase):
        quarter_sequences(seed_pair(3))
    with pytest.raises(TrivialTwoPhase):
        quarter_sequences(seed_pair(1))


def test_craigen_length_is_product():
    S = craigen_compose(seed_pair(10), seed_pair(3), seed_pair(5))
    assert S.certified and S.lengths == (150, 150)


def test_quad_87_from_sum_of_pairs():
    B = interleave_sets(seed_pair(3), seed_pair(26))
    S = thm1_compose(seed_pair(3), B, (3, 26))
    assert S.cardinality == 4 and S.lengths == (87,) * 4
    rep = verify_gcs_set(S.seqs)
    assert rep.ok and rep.peak == 4 * 87


def test_thm1_rejects_bad_grouping():
    B = interleave_sets(seed_pair(3), seed_pair(26))
    with pytest.raises(GroupingMismatch):
        thm1_compose(seed_pair(3), B, (26, 3))
    with pytest.raises(OddCardinality):
        thm1_compose(GcsSet((QSeq.from_values([1]),)), B, (3, 26))


def test_thm1_with_cbs_grouping():
    S = thm1_compose(seed_pair(2), cbs_as_grouped(cbs_seed_87()), (8, 7))
    assert S.lengths == (30,) * 4


def test_prop3_and_scale_by():
    S = prop3_compose(seed_pair(1), seed_pair(3), seed_pair(2))
    assert S.lengths == (6, 6)
    T = scale_by(seed_pair(3), seed_pair(5), 2)
    assert T.lengths == (30, 30) and T.certified


def test_cbs_from_pair_shape():
    S = cbs_from_pair(seed_pair(3))
    assert S.cbs == (4, 3)
    assert S.report.peak == 2 * 4 + 2 * 3


def test_yang_interleave_and_combine():
    q = yang_compose(cbs_seed_87(), route=INTERLEAVE)
    assert q.length == 15
    S = yang_combine(q, q)
    assert S.cbs == (225, 225)
    assert S.certified


def test_yang_concat_route():
    q = yang_compose(cbs_from_pairs(seed_pair(3), seed_pair(2)), seed_pair(2), seed_pair(5))
    assert q.length == 2 * (3 * 2 + 2 * 5)
    S = yang_combine(q, yang_compose(cbs_seed_87(), route=INTERLEAVE))
    assert S.lengths == (32 * 15,) * 4


def test_yang_concat_needs_pair_split_for_unequal_multipliers():
    with pytest.raises(RouteConstraintViolated):
        yang_compose(cbs_seed_87(), seed_pair(2), seed_pair(3))


def test_plan_pair_craigen_node():
    plan = plan_pair(30)
    assert plan.kind == "craigen"
    S = realize(plan)
    assert S.lengths == (30, 30) and S.certified
    with pytest.raises(UnsupportedSeedLength):
        plan_pair(7)


def test_plan_dict_round_trip():
    plan = plan_arbitrary(100, 26)
    assert ConstructionPlan.from_dict(plan.to_dict()) == plan


def test_check_plan_catches_wrong_length():
    bad = ConstructionPlan("thm1", 88, 4, children=(plan_pair(3), plan_pair(3), plan_pair(26)))
    with pytest.raises(PlanArithmeticMismatch):
        check_plan(bad)


def test_planner_quad_87():
    plan = Planner(87).plan_quad(87)
    assert plan is not None and plan.length == 87 and plan.cardinality == 4
    S = realize(plan)
    assert S.certified and S.lengths == (87,) * 4


def test_digits_base():
    assert digits_base(100, 26) == [22, 3]


def test_build_arbitrary_25():
    res = build_arbitrary(25, P=26)
    assert res.digits == (25,)
    assert res.level == "full"
    assert set(res.gcs.lengths) == {25}


def test_build_arbitrary_multi_digit():
    res = build_arbitrary(100, P=26)
    assert res.gcs.length == 100
    assert res.gcs.certified
    assert res.plan.kind == "hier"


def test_build_arbitrary_structural_only_over_budget():
    res = build_arbitrary(100, P=26, certify_max_entries=10)
    assert res.gcs is None and res.level == "structural"


def test_bundled_corpus_loads():
    ok = load_base_corpus(CORPUS)
    assert sorted(S.lengths[2] for S in ok) == [1, 2, 3, 5, 7, 10]
    assert all(S.certified for S in ok)


def test_corpus_rejects_non_complementary(tmp_path):
    a = [QSeq.from_values(x) for x in CBS_87]
    bad = [a[0], a[0], a[2], a[3]]
    ok, rejeitados = check_corpus_records([a, bad, a[:3]])
    assert len(ok) == 1
    assert [i for i, _ in rejeitados] == [1, 2]

    p = tmp_path / "ruim.txt"
    p.write_text("#gcs n=8 L=4\n" + "\n".join(",".join(s.tokens()) for s in bad) + "\n", encoding="utf-8")
    with pytest.raises(CorpusVerificationFailed):
        load_base_corpus(p)
    assert load_base_corpus(p, skip_invalid=True) == []


GOLAY_ATE_10K = golay_numbers_upto(10_000)


def test_plan_pair_every_golay_length():
    for n in sorted(SEED_PAIRS) + GOLAY_ATE_10K:
        plan = plan_pair(n)
        check_plan(plan)
        assert (plan.length, plan.cardinality) == (n, 2)


@pytest.mark.parametrize("n", sorted(SEED_PAIRS) + [n for n in GOLAY_ATE_10K if n <= 2000])
def test_realize_golay_pair(n):
    S = realize(plan_pair(n))
    assert S.certified and S.lengths == (n, n)


@pytest.mark.slow
@pytest.mark.parametrize("n", [n for n in GOLAY_ATE_10K if n > 2000])
def test_realize_golay_pair_large(n):
    S = realize(plan_pair(n))
    assert S.certified and S.lengths == (n, n)
    assert verify_gcs_set(S.seqs).ok


def _complexo(a):
    return a.re + 1j * a.im


def _soma_produto_direta(A, B, t, u):
    """Membros de comprimento s·(t+u), entrada a entrada."""
    out = []
    for l in range(A.cardinality // 2):
        a1, a2 = _complexo(A[2 * l]), _complexo(A[2 * l + 1])
        s = a1.size
        for m in range(B.cardinality // 2):
            bo, be = _complexo(B[2 * m]), _complexo(B[2 * m + 1])
            c = np.zeros(s * (t + u), dtype=complex)
            d = np.zeros(s * (t + u), dtype=complex)
            for i in range(s):
                for j in range(t):
                    c[i * (t + u) + j] += a1[i] * bo[j]
                    d[i * (t + u) + j] += np.conj(a2[s - 1 - i]) * bo[j]
                for j in range(u):
                    c[i * (t + u) + t + j] += a2[i] * be[j]
                    d[i * (t + u) + t + j] -= np.conj(a1[s - 1 - i]) * be[j]
            out += [c, d]
    return out


def _par_com_sinais(rng, n):
    a, b = seed_pair(n).seqs
    sa, sb = rng.choice([-1, 1], size=2)
    return GcsSet((a if sa > 0 else -a, b if sb > 0 else -b), certified=True)


def test_thm1_matches_direct_expansion():
    rng = np.random.default_rng(11)
    tamanhos = [1, 2, 3, 5, 10]
    for _ in range(30):
        s, t, u = (int(x) for x in rng.choice(tamanhos, size=3))
        A = _par_com_sinais(rng, s)
        B = interleave_sets(_par_com_sinais(rng, t), _par_com_sinais(rng, u))
        S = thm1_compose(A, B, (t, u))
        esperado = _soma_produto_direta(A, B, t, u)
        assert len(S.seqs) == len(esperado) == 4
        for got, exp in zip(S.seqs, esperado):
            assert np.array_equal(_complexo(got), exp)
        assert verify_gcs_set(S.seqs).ok


def test_thm1_with_empty_even_half():
    B = interleave_sets(seed_pair(5), empty_set(2))
    S = thm1_compose(seed_pair(3), B, (5, 0))
    assert S.certified and S.lengths == (15,) * 4
    esperado = _soma_produto_direta(seed_pair(3), B, 5, 0)
    assert all(np.array_equal(_complexo(g), e) for g, e in zip(S.seqs, esperado))
    assert S.report.peak == 4 * 15


def test_interleave_route_on_cbs_2_1():
    q = yang_compose(cbs_from_pair(seed_pair(1)), route=INTERLEAVE)
    assert q.e == QSeq.from_values([1, 0, 1])
    assert q.g == QSeq.from_values([1, 0, -1])
    assert q.f == QSeq.from_values([0, 1, 0])
    assert q.h == QSeq.from_values([0, 1, 0])
    S = yang_combine(q, q)
    assert S.cbs == (9, 9) and S.certified
    assert verify_gcs_set(S.seqs).ok


def test_cbs_from_pair_26():
    S = cbs_from_pair(seed_pair(26))
    assert S.cbs == (27, 26) and S.certified
    assert S.report.peak == 2 * 27 + 2 * 26


def test_scale_node_wraps_prop3_chain():
    plan = plan_arbitrary(100, 26)
    alto = plan.children[1]
    assert alto.kind == "scale" and alto.param("factor") == 26
    (p3,) = alto.children
    assert p3.kind == "prop3"
    assert [c.length for c in p3.children] == [13, 3, 2]
    duas = plan_arbitrary(3 * 26 * 26, 26)
    assert duas.kind == "scale" and duas.param("factor") == 26 * 26
    assert duas.children[0].kind == "prop3" and duas.children[0].children[1].kind == "prop3"
    assert realize(duas).lengths == (3 * 26 * 26,) * 2


def test_check_plan_catches_wrong_scale_factor():
    plan = plan_arbitrary(78, 26)
    bad = ConstructionPlan("scale", 78, 2, params=(("factor", 10),), children=plan.children)
    with pytest.raises(PlanArithmeticMismatch):
        check_plan(bad)


def _cota(n, P):
    r = sum(1 for d in digits_base(n, P) if d)
    return 2 ** (3 + math.ceil(math.log2(r)))


def test_plan_cardinality_bound_random():
    rng = np.random.default_rng(7)
    for n in rng.integers(1, 10**6, size=200).tolist():
        plan = plan_arbitrary(n, 26)
        assert plan.length == n
        assert plan.cardinality <= _cota(n, 26) == cardinality_bound(n, 26)


def test_build_arbitrary_small_random_lengths():
    rng = np.random.default_rng(3)
    for n in rng.integers(1, 2001, size=10).tolist():
        res = build_arbitrary(n)
        assert set(res.gcs.lengths) == {n} and res.gcs.certified
        assert res.gcs.cardinality <= _cota(n, res.P)


@pytest.mark.slow
def test_build_arbitrary_random_lengths():
    rng = np.random.default_rng(2024)
    for n in rng.integers(1, 10_001, size=50).tolist():
        res = build_arbitrary(n)
        assert res.level == "full"
        assert set(res.gcs.lengths) == {n}
        assert res.gcs.cardinality <= _cota(n, res.P)
        assert verify_gcs_set(res.gcs.seqs).ok
