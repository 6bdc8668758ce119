import numpy as np
import pytest

from erros import LengthMismatch, NotPolyphase
from seqcore import (
    APERIODIC, PERIODIC, GaussInt, QSeq, _kronecker_convolve, concat, corr_profile, delta_residue,
    flip_conj, int_convolve, interleave, kron, periodic_from_aperiodic, poly_mul, sum_autocorr,
    verify_gcs_set,
)


def _naive_corr(a, b, tau):
    x = [complex(v.re, v.im) for v in a]
    y = [complex(v.re, v.im) for v in b]
    s = 0j
    for i in range(len(x)):
        j = i - tau
        if 0 <= j < len(y):
            s += x[i] * y[j].conjugate()
    return GaussInt(int(s.real), int(s.imag))


def _random_qseq(rng, n):
    return QSeq.from_exponents(rng.integers(0, 4, size=n))


def test_parse_tokens():
    assert GaussInt.parse("i") == GaussInt(0, 1)
    assert GaussInt.parse(" -i ") == GaussInt(0, -1)
    assert GaussInt.parse("+1") == GaussInt(1, 0)
    with pytest.raises(ValueError):
        GaussInt.parse("2")
    with pytest.raises(ValueError):
        GaussInt.parse("1+i")


def test_tokens_and_equality():
    a = QSeq.from_values([1, 1j, -1, -1j, 0])
    assert a.tokens() == ["1", "i", "-1", "-i", "0"]
    assert a == QSeq.from_values(["1", "i", "-1", "-i", "0"])
    assert a.weight == 4


def test_flip_conj_reverses_and_conjugates():
    a = QSeq.from_values([1, 1j, -1])
    assert flip_conj(a) == QSeq.from_values([-1, -1j, 1])
    assert flip_conj(flip_conj(a)) == a


def test_kron_layout():
    a = QSeq.from_values([1, -1])
    b = QSeq.from_values([1, 1j, 0])
    assert kron(a, b) == QSeq.from_values([1, 1j, 0, -1, -1j, 0])


def test_interleave_requires_one_extra():
    u = QSeq.from_values([1, 1, 1])
    v = QSeq.from_values([-1, -1])
    assert interleave(u, v) == QSeq.from_values([1, -1, 1, -1, 1])
    with pytest.raises(LengthMismatch):
        interleave(v, v)


def test_poly_mul_matches_schoolbook():
    rng = np.random.default_rng(7)
    a, b = _random_qseq(rng, 17), _random_qseq(rng, 9)
    got = poly_mul(a, b)
    xa = [complex(v.re, v.im) for v in a]
    xb = [complex(v.re, v.im) for v in b]
    esperado = [0j] * (len(a) + len(b) - 1)
    for i, x in enumerate(xa):
        for j, y in enumerate(xb):
            esperado[i + j] += x * y
    assert got == QSeq.from_values(esperado)


def test_kronecker_convolution_is_exact():
    rng = np.random.default_rng(11)
    x = rng.integers(-50, 51, size=300)
    y = rng.integers(-50, 51, size=200)
    bound = 50 * 50 * 200
    assert np.array_equal(_kronecker_convolve(x, y, bound), np.convolve(x, y))
    assert np.array_equal(int_convolve(x, y), np.convolve(x, y))


def test_aperiodic_profile_matches_definition():
    rng = np.random.default_rng(3)
    a, b = _random_qseq(rng, 6), _random_qseq(rng, 4)
    p = corr_profile(a, b)
    assert p.mode == APERIODIC and p.n == 6
    for tau in range(-5, 6):
        assert p.at(tau) == _naive_corr(a, b.pad_right(6), tau)
    assert p.at(6) == GaussInt(0, 0)


def test_periodic_profile_folds_aperiodic():
    rng = np.random.default_rng(5)
    a = _random_qseq(rng, 8)
    assert corr_profile(a, a, PERIODIC) == periodic_from_aperiodic(corr_profile(a, a))
    with pytest.raises(LengthMismatch):
        corr_profile(a, QSeq.zeros(3), PERIODIC)


def test_sum_autocorr_pads_shorter_members():
    a = QSeq.from_values([1, 1, -1])
    b = QSeq.from_values([1])
    total = sum_autocorr([a, b])
    assert total.at(0) == GaussInt(4, 0)
    assert total.at(2) == GaussInt(-1, 0)


def test_verify_gcs_set_pair_of_length_two():
    rep = verify_gcs_set([QSeq.from_values([1, 1]), QSeq.from_values([1, -1])])
    assert rep.ok and rep.peak == 4


def test_verify_gcs_set_reports_first_bad_lag():
    rep = verify_gcs_set([QSeq.from_values([1, 1]), QSeq.from_values([1, 1])])
    assert not rep.ok
    assert rep.lag == 1
    assert rep.residue == GaussInt(2, 0)


def test_verify_gcs_set_rejects_non_polyphase():
    with pytest.raises(NotPolyphase):
        verify_gcs_set([QSeq([2, 1])])


def test_delta_residue_on_empty_profile():
    p = corr_profile(QSeq.empty(), QSeq.empty())
    assert delta_residue(p, 0) == (None, None)


def test_concat_and_pad():
    a = QSeq.from_values([1, -1])
    assert concat(a, QSeq.zeros(1), a) == QSeq.from_values([1, -1, 0, 1, -1])
    assert a.pad_right(4) == QSeq.from_values([1, -1, 0, 0])
