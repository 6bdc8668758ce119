import numpy as np
import pytest

from constructions import GcsSet, cbs_seed_87, seed_pair
from erros import (
    LengthMismatch, NonCommutingEntries, NotCertifiedInput, NotDisjoint, NotPerfect, NotPolyphase,
    NotQuasiSymmetric, OrderMismatch, PerfectionFailed, ShapeMismatch, ShapeViolation,
)
from seqcore import PERIODIC, QSeq
from signed_perm import (
    SP2_J, MatProfile, SignedPerm, SPSeq, combine, complex_matrix, composite_orthogonal, is_perfect,
    matprofile_from_complex, perfect_from_inputs, require_perfect, sp2_unit, sp_embed, sp_mul,
    sp_transpose, spseq_corr, thm4_sequences, verify_supplementary,
)
from seqcore import corr_profile

I = sp2_unit(1)


def _random_sp(rng, v):
    return SignedPerm(rng.permutation(v), rng.choice([-1, 1], size=v))


def test_product_matches_matrix_product():
    rng = np.random.default_rng(1)
    for _ in range(20):
        x, y = _random_sp(rng, 6), _random_sp(rng, 6)
        assert np.array_equal(sp_mul(x, y).matrix(), x.matrix() @ y.matrix())
        assert np.array_equal(sp_transpose(x).matrix(), x.matrix().T)


def test_embed_is_block_diagonal():
    x = _random_sp(np.random.default_rng(4), 3)
    assert np.array_equal(sp_embed(x).matrix(), np.kron(np.eye(2, dtype=np.int64), x.matrix()))


def test_sp2_quaternion_identities():
    assert I * SP2_J == -(SP2_J * I)
    assert sp_transpose(I) == -I
    assert sp_transpose(SP2_J) == SP2_J
    assert I * I == -SignedPerm.identity(2)
    assert np.array_equal(I.matrix(), complex_matrix(0, 1))


def test_from_matrix_round_trip_and_validation():
    x = _random_sp(np.random.default_rng(8), 5)
    assert SignedPerm.from_matrix(x.matrix()) == x
    with pytest.raises(ShapeMismatch):
        SignedPerm(np.array([0, 0]), np.array([1, 1]))
    with pytest.raises(ShapeMismatch):
        SignedPerm(np.array([1, 0]), np.array([1, 2]))
    with pytest.raises(OrderMismatch):
        sp_mul(SignedPerm.identity(2), SignedPerm.identity(4))


def test_from_complex_rejects_other_values():
    with pytest.raises(NotPolyphase):
        SPSeq.from_complex(QSeq([1, 2]))


def test_corr_of_complex_matches_scalar_corr():
    a = QSeq.from_values([1, 1j, -1, 0, -1j])
    s = SPSeq.from_complex(a)
    assert spseq_corr(s, s) == matprofile_from_complex(corr_profile(a, a))
    assert spseq_corr(s, s, PERIODIC) == matprofile_from_complex(corr_profile(a, a, PERIODIC))


def test_combine_worked_example():
    a = SPSeq.from_complex(QSeq.from_values([0, -1j, 0, -1, 0]))
    b = SPSeq.from_complex(QSeq.from_values([1, 0, 0, 0, -1j]))
    c = combine(a, b)
    assert c.v == 4 and len(c) == 5
    assert c.mask.tolist() == [True, True, False, True, True]
    assert np.array_equal(c.mask, a.mask | b.mask)
    esperado = {
        0: [[0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 0, 0], [-1, 0, 0, 0]],
        1: [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]],
        3: [[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
        4: [[0, 0, 0, 1], [0, 0, -1, 0], [-1, 0, 0, 0], [0, -1, 0, 0]],
    }
    for i, M in esperado.items():
        assert np.array_equal(c.entry(i).matrix(), np.array(M)), i
    assert c.entry(2) is None
    R = spseq_corr(c, c)
    assert np.array_equal(R.at(0), 4 * np.eye(4, dtype=np.int64))
    assert np.array_equal(R.at(-2), np.kron(np.eye(2, dtype=np.int64), complex_matrix(0, 1)))
    alvo = (spseq_corr(a, a) + spseq_corr(b, b)).embed()
    assert R == alvo
    cs = c.flip_transpose()
    assert spseq_corr(cs, cs) == alvo


def test_combine_input_checks():
    a = SPSeq.from_complex(QSeq.from_values([0, 1, 0]))
    with pytest.raises(NotDisjoint):
        combine(a, a)
    with pytest.raises(LengthMismatch):
        combine(a, SPSeq.from_complex(QSeq.from_values([1, 0, 0, 1])))
    with pytest.raises(OrderMismatch):
        combine(a, SPSeq.from_complex(QSeq.from_values([1, 0, 1])).embed())
    with pytest.raises(NotQuasiSymmetric):
        combine(a, SPSeq.from_complex(QSeq.from_values([1, 0, 0])))


def test_combine_requires_commuting_entries():
    a = SPSeq.from_entries([I, None, I], 2)
    b = SPSeq.from_entries([None, SP2_J, None], 2)
    with pytest.raises(NonCommutingEntries):
        combine(a, b)


def test_thm4_example_216():
    out = thm4_sequences([(seed_pair(3), seed_pair(3))], [(cbs_seed_87(), seed_pair(3), seed_pair(3))])
    assert out.n == 216
    assert out.offsets == (0, 9, 33, 54)
    assert len(out.seqs) == 6
    assert out.gamma == 6
    rep = verify_supplementary(out.seqs)
    assert rep.ok and rep.peak == 216


def test_thm4_minimal_case():
    out = thm4_sequences([(seed_pair(1), seed_pair(1))])
    assert out.seqs[0] == QSeq.from_values([1, 0, 0, 1])
    assert out.seqs[1] == QSeq.from_values([0, -1, 1, 0])


def test_thm4_input_checks():
    solto = GcsSet((QSeq.from_values([1]), QSeq.from_values([1])))
    with pytest.raises(NotCertifiedInput):
        thm4_sequences([(solto, seed_pair(1))])
    with pytest.raises(ShapeViolation):
        thm4_sequences([], [(cbs_seed_87(), seed_pair(2), seed_pair(3))])


def test_verify_supplementary_detects_overlap():
    a = QSeq.from_values([1, 0, 0, 1])
    rep = verify_supplementary([a, a])
    assert not rep.ok


def test_perfect_minimal_case():
    out = thm4_sequences([(seed_pair(1), seed_pair(1))])
    c = perfect_from_inputs(out)
    assert c.v == 4 and len(c) == 4
    assert is_perfect(c) is None
    require_perfect(c)


def test_delta_residue_compares_whole_matrices():
    eye = np.eye(2, dtype=np.int64)
    mats = np.stack([3 * eye, 0 * eye, 0 * eye])
    assert MatProfile(PERIODIC, 3, 2, mats).delta_residue(3) is None
    assert MatProfile(PERIODIC, 3, 2, mats).delta_residue(2) == 0
    J = np.array([[0, 3], [3, 0]], dtype=np.int64)
    assert MatProfile(PERIODIC, 3, 2, np.stack([J, 0 * eye, 0 * eye])).delta_residue(3) == 0
    mats[2, 0, 1] = 1
    assert MatProfile(PERIODIC, 3, 2, mats).delta_residue(3) == 2


def test_is_perfect_on_short_sequences():
    assert is_perfect(SPSeq.from_complex(QSeq.from_values([1]))) is None
    assert is_perfect(SPSeq.from_complex(QSeq.from_values([1, 1]))) == 1
    assert is_perfect(SPSeq.from_complex(QSeq.from_values([1, 1j]))) is None
    assert is_perfect(SPSeq.from_complex(QSeq.from_values([1, 1j, 1]))) == 1


@pytest.mark.slow
def test_perfect_216_over_sp64():
    out = thm4_sequences([(seed_pair(3), seed_pair(3))], [(cbs_seed_87(), seed_pair(3), seed_pair(3))])
    c = perfect_from_inputs(out)
    assert c.v == 64 and len(c) == 216
    C = spseq_corr(c, c, PERIODIC)
    assert np.array_equal(C.at(0), 216 * np.eye(64, dtype=np.int64))
    assert C.delta_residue(216) is None


def test_perfect_fails_on_non_supplementary():
    a = QSeq.from_values([1, 0, 0, 1])
    b = QSeq.from_values([0, 1, 1, 0])
    with pytest.raises(PerfectionFailed):
        perfect_from_inputs([a, b], check=False)


def test_require_perfect_rejects_zero_entries():
    c = SPSeq.from_complex(QSeq.from_values([1, 0]))
    assert is_perfect(c) == -1
    with pytest.raises(NotPerfect):
        require_perfect(c)


def test_composite_orthogonal_for_golay_pair():
    a, b = seed_pair(3).seqs
    ok, diag = composite_orthogonal(a, b)
    assert ok
    assert diag == QSeq.from_values([0, 0, 6, 0, 0])
