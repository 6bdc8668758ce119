import numpy as np
import pytest

import golay_numbers as gn
from erros import BudgetExceeded, CorpusRequired
from golay_numbers import (
    WitnessIndex, build_Sk, check_budget, choose_P, density_rows, enumerate_S1, from_elements,
    golay_membership, golay_numbers_upto, golay_product_membership, is_golay, product, scale, sumset,
)


def _random_set(rng, kind, N, p, zero):
    elems = np.flatnonzero(rng.random(N) < p) + 1
    return from_elements(kind, N, elems.tolist(), zero)


def _brute_sum(A, B):
    N = A.bound
    xa = [x for x in range(N + 1) if A.bits[x]]
    xb = [x for x in range(N + 1) if B.bits[x]]
    return {a + b for a in xa for b in xb if a + b <= N}


def test_golay_numbers_up_to_13():
    assert golay_numbers_upto(13) == [1, 2, 3, 4, 5, 6, 8, 10, 11, 12, 13]
    assert enumerate_S1(13).elements().tolist() == [1, 2, 3, 4, 5, 6, 8, 10, 11, 12, 13]
    assert enumerate_S1(13).has_zero


@pytest.mark.parametrize("n,esperado", [(26, True), (9, False), (7, False), (15, False), (30, True), (1, True)])
def test_is_golay(n, esperado):
    assert is_golay(n) is esperado


def test_membership_exponents_rebuild_n():
    e = golay_membership(2 * 3 * 5 * 13)
    assert e is not None and e.value == 390
    assert golay_membership(7) is None


def test_product_membership():
    w = golay_product_membership(9, 2)
    assert w is not None and sorted(w.witness) == [3, 3]
    assert golay_product_membership(9, 1) is None


def test_choose_P():
    assert choose_P(25) == 26
    with pytest.raises(ValueError):
        choose_P(1)


def test_scale_keeps_zero_and_bound():
    X = from_elements("X", 20, [1, 3, 7], True)
    Y = scale(X, 3)
    assert Y.elements().tolist() == [3, 9]
    assert Y.has_zero


def test_product_matches_brute_force():
    rng = np.random.default_rng(2)
    A = _random_set(rng, "A", 400, 0.05, True)
    B = _random_set(rng, "B", 400, 0.05, False)
    P = product(A, B)
    xa = [x for x in range(401) if A.bits[x]]
    xb = [x for x in range(401) if B.bits[x]]
    esperado = {a * b for a in xa for b in xb if a * b <= 400}
    assert set(np.flatnonzero(P.bits).tolist()) == esperado


@pytest.mark.parametrize("pairwise,shift", [(1 << 25, 64), (0, 1 << 20), (0, 0)])
def test_sumset_strategies_agree(monkeypatch, pairwise, shift):
    monkeypatch.setattr(gn, "PAIRWISE_MAX", pairwise)
    monkeypatch.setattr(gn, "SHIFT_MAX", shift)
    monkeypatch.setattr(gn, "HYBRID_DENSE_SHIFTS", 5)
    rng = np.random.default_rng(9)
    A = _random_set(rng, "A", 500, 0.03, True)
    B = _random_set(rng, "B", 500, 0.2, False)
    S = sumset(A, B)
    assert set(np.flatnonzero(S.bits).tolist()) == _brute_sum(A, B)


def test_s2_contains_87_and_dense_is_superset():
    S2 = build_Sk(200, 2)
    S2D = build_Sk(200, 2, dense=True)
    assert 87 in S2
    assert S2.is_subset(S2D)
    assert S2D.kind == "S2D"


def test_witness_s2_decomposes():
    idx = WitnessIndex(200)
    s, t, u = idx.s2(87)
    assert s * (t + u) == 87
    assert all(x in idx.S1 for x in (s, t, u))


def test_density_rows_are_cumulative():
    S = build_Sk(1000, 2)
    rows = density_rows(S, samples=10)
    rhos = [r[1] for r in rows]
    assert rhos == sorted(rhos)
    n, rho, dens = rows[-1]
    assert n == 1000 and rho == S.count() and dens == pytest.approx(rho / 1000)


def test_budget_guard():
    with pytest.raises(BudgetExceeded) as exc:
        check_budget(10_000, memory_cap=1024)
    assert exc.value.exit_code == 4
    with pytest.raises(BudgetExceeded):
        build_Sk(10_000, 2, memory_cap=1024)


def test_b_table_strict_requires_corpus():
    with pytest.raises(CorpusRequired):
        gn.compute_b_table(4, 0, 10, base_lengths=None, strict=True)


def test_b_table_restricted_flag():
    b = gn.compute_b_table(4, 0, 20, base_lengths=None)
    assert b.restricted and b.label == "restricted-B"
    assert 1 <= b.b <= 20


def test_density_s1_matches_membership_scan():
    S = build_Sk(10_000, 1)
    acc = np.cumsum([is_golay(x) for x in range(1, 10_001)])
    for n, rho, _ in density_rows(S, samples=20):
        assert rho == acc[n - 1]


def test_dense_density_dominates_plain():
    plain = density_rows(build_Sk(10_000, 2), samples=20)
    dense = density_rows(build_Sk(10_000, 2, dense=True), samples=20)
    assert all(d[1] >= p[1] for p, d in zip(plain, dense))


def test_product_membership_2025():
    assert golay_product_membership(2025, 4) is None
    divs = [d for d in golay_numbers_upto(2025) if 2025 % d == 0]
    assert not any(a * b * c * d == 2025 for a in divs for b in divs for c in divs for d in divs)
    w = golay_product_membership(2025, 6)
    assert w is not None and int(np.prod(w.witness)) == 2025
    assert all(is_golay(x) for x in w.witness)


def test_s1_s2_s3_are_nested():
    S1, S2, S3 = (build_Sk(5000, k) for k in (1, 2, 3))
    assert S1.is_subset(S2) and S2.is_subset(S3)
    assert build_Sk(5000, 3).is_subset(build_Sk(5000, 3, dense=True))


def test_dense_sets_small_members():
    dense = gn.build_dense_sets(300, gn.RESTRICTED_BASE_LENGTHS)
    assert 15 in dense.B
    assert 225 in dense.F
    assert 15 in gn.build_dense_sets(300).B


def test_s2_witness_matches_scan():
    N = 10_000
    G = golay_numbers_upto(N)
    S1 = [0] + G
    S2 = set()
    for s in G:
        for t in S1:
            if s * t > N:
                break
            for u in S1:
                if u < t:
                    continue
                if s * (t + u) > N:
                    break
                S2.add(s * (t + u))
    idx = WitnessIndex(N)
    for n in range(1, N + 1):
        w = idx.s2(n)
        if n in S2:
            s, t, u = w
            assert s * (t + u) == n and is_golay(s)
            assert all(x == 0 or is_golay(x) for x in (t, u))
        else:
            assert w is None, n


def _representable_gamma4(N):
    """Somas T+T e termos t·(s1+s2) montados só com conjuntos Python."""
    G = golay_numbers_upto(N)
    T = sorted({0} | {l * m for l in G for m in G if l * m <= N})
    TT = {x + y for x in T for y in T if x + y <= N}
    B = {2 * b + 1 for b in range(39)} | {2 * g + 1 for g in [0] + G if 2 * g + 1 <= N}
    E = set(B) | {2 * s * b for s in G for b in B if 2 * s * b <= N} | {2 * x for x in TT if 0 < 2 * x <= N}
    while True:
        ordem = sorted(E)
        F = set()
        for e in ordem:
            for f in ordem:
                if e * f > N:
                    break
                F.add(e * f)
        novo = E | {4 * s * f for s in G for f in F if 4 * s * f <= N}
        if novo == E:
            break
        E = novo
    somas = B | {2 * f for f in F}
    C = {t * x for t in G for x in somas if t * x <= N}
    return TT | C


def test_b_table_gamma4_matches_set_oracle():
    R = _representable_gamma4(4400)
    for i, esperado in [(0, 546), (1, 958), (2, 1030)]:
        b = next(b for b in range(1, 1101) if (b << i) not in R) - 1
        assert b == esperado
        got = gn.compute_b_table(4, i, 1100, gn.LITERATURE_BASE_LENGTHS)
        assert (got.b, got.restricted) == (esperado, False)
    assert 1918 not in R
    assert 1918 not in gn.representable_set(4, 2000, gn.LITERATURE_BASE_LENGTHS)


def test_b_table_restricted_never_exceeds_corpus():
    for i in (0, 1):
        restrito = gn.compute_b_table(4, i, 1100)
        completo = gn.compute_b_table(4, i, 1100, gn.LITERATURE_BASE_LENGTHS)
        assert restrito.restricted and restrito.b <= completo.b


@pytest.mark.slow
@pytest.mark.parametrize("gamma,i,limit,esperado", [
    (4, 0, 2000, 546), (4, 1, 2000, 958), (4, 2, 2000, 1030), (4, 3, 2000, 1030), (4, 4, 2000, 1030),
    (6, 0, 500_000, 436146),
])
def test_b_table_values(gamma, i, limit, esperado):
    assert gn.compute_b_table(gamma, i, limit, gn.LITERATURE_BASE_LENGTHS).b == esperado


@pytest.mark.slow
@pytest.mark.parametrize("dense", [False, True])
def test_s3_has_no_gap_up_to_10_7(dense):
    gap, count = gn.coverage(build_Sk(10**7, 3, dense=dense))
    assert gap is None and count == 10**7
