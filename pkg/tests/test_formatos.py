import math

import numpy as np
import pytest

from constructions import cbs_seed_87, plan_arbitrary, seed_pair
from erros import CorpusParse
from formatos import (
    HMAT_MAGIC, atomic_write, format_csv, format_matrix, format_sequences, format_spseq,
    length_set_from_bytes, length_set_to_bytes, load_length_set, matrix_from_bytes, matrix_to_bytes,
    parse_corpus, parse_matrix, parse_sequences, parse_spseq, read_matrix, read_plan, save_length_set,
    write_matrix, write_plan,
)
from golay_numbers import build_Sk
from hadamard import PMMatrix, sylvester
from seqcore import QSeq
from signed_perm import SPSeq, perfect_from_inputs, thm4_sequences


def test_sequences_text_round_trip():
    S = cbs_seed_87()
    text = format_sequences(S.seqs, ["CBS(8,7)"])
    assert text.startswith("#gcs n=8 L=4\n# CBS(8,7)\n")
    assert parse_sequences(text) == list(S.seqs)


def test_complex_tokens_survive():
    a = QSeq.from_values([1, 1j, -1, -1j, 0])
    assert parse_sequences(format_sequences([a])) == [a]


def test_empty_sequences_round_trip():
    seqs = [QSeq.from_values([1]), QSeq.from_values([-1]), QSeq.empty(), QSeq.empty()]
    text = format_sequences(seqs, ["CBS(1,0)"])
    assert text == "#gcs n=1 L=4\n# CBS(1,0)\n1\n-1\n\n\n"
    assert parse_sequences(text) == seqs
    vazios = [QSeq.empty(), QSeq.empty()]
    assert parse_sequences(format_sequences(vazios)) == vazios


def test_blank_lines_between_blocks_are_ignored():
    texto = format_sequences(seed_pair(2).seqs) + "\n\n" + format_sequences(seed_pair(3).seqs)
    assert [len(s) for s in parse_sequences(texto)] == [2, 2, 3, 3]


def test_bad_token_reports_position():
    with pytest.raises(CorpusParse) as exc:
        parse_sequences("#gcs n=3 L=1\n1,2,-1\n", fonte="x.gcs")
    e = exc.value
    assert (e.line, e.col) == (2, 3)
    assert e.exit_code == 2
    assert str(e).startswith("x.gcs:2:3:")


def test_block_count_must_match_header():
    with pytest.raises(CorpusParse):
        parse_sequences("#gcs n=2 L=2\n1,1\n")
    with pytest.raises(CorpusParse):
        parse_sequences("1,1\n")
    with pytest.raises(CorpusParse):
        parse_sequences("#gcs n=3 L=1\n1,1\n")


def test_corpus_blocks():
    texto = format_sequences(cbs_seed_87().seqs) + "\n" + format_sequences(cbs_seed_87().seqs)
    blocos = parse_corpus(texto)
    assert len(blocos) == 2 and all(len(b) == 4 for b in blocos)


def test_matrix_text_round_trip():
    H = sylvester(3)
    text = format_matrix(H, ["Sylvester"])
    assert text.splitlines()[0] == "order 8"
    assert text.splitlines()[2] == "++++++++"
    assert parse_matrix(text) == H


def test_matrix_text_bad_symbol():
    with pytest.raises(CorpusParse) as exc:
        parse_matrix("order 2\n++\n+x\n")
    assert exc.value.line == 3 and exc.value.col == 2


def test_matrix_binary_round_trip(tmp_path):
    H = PMMatrix.from_signs(sylvester(2).signs(), block=2)
    data = matrix_to_bytes(H)
    assert data[:4] == HMAT_MAGIC
    back = matrix_from_bytes(data)
    assert back == H and back.block == 2
    p = write_matrix(tmp_path / "h.hmat", H)
    assert read_matrix(p) == H
    q = write_matrix(tmp_path / "h.txt", H)
    assert read_matrix(q) == H


def test_matrix_binary_checks():
    data = matrix_to_bytes(sylvester(2))
    with pytest.raises(CorpusParse):
        matrix_from_bytes(b"XMAT" + data[4:])
    with pytest.raises(CorpusParse):
        matrix_from_bytes(data[:-1])
    sujo = bytearray(data)
    sujo[28] |= 1 << 5
    with pytest.raises(CorpusParse):
        matrix_from_bytes(bytes(sujo))


def test_spseq_round_trip(tmp_path):
    c = perfect_from_inputs(thm4_sequences([(seed_pair(1), seed_pair(1))]))
    text = format_spseq(c)
    assert text.startswith("#spseq v=4 n=4\n")
    assert parse_spseq(text) == c
    com_zero = SPSeq.from_complex(QSeq.from_values([1, 0, 1j]))
    assert parse_spseq(format_spseq(com_zero)) == com_zero


def test_spseq_rejects_non_permutation():
    with pytest.raises(CorpusParse):
        parse_spseq("#spseq v=2 n=1\nperm:0,0;sign:1,1\n")
    with pytest.raises(CorpusParse):
        parse_spseq("#spseq v=2 n=2\n0\n")


def test_length_set_cache(tmp_path):
    S = build_Sk(300, 2)
    assert length_set_from_bytes(length_set_to_bytes(S)) == S
    p = save_length_set(tmp_path / "s2.gls", S)
    back = load_length_set(p)
    assert back == S and back.kind == "S2"
    with pytest.raises(CorpusParse):
        length_set_from_bytes(b"NOPE" + length_set_to_bytes(S)[4:])


def test_plan_file_round_trip(tmp_path):
    plan = plan_arbitrary(100, 26)
    p = write_plan(tmp_path / "100.plan", plan, {"n": 100})
    assert read_plan(p) == plan


def test_csv_cells():
    text = format_csv(("a", "b", "c"), [(1, math.nan, None), (2, 0.5, "x")], ["nota"])
    assert text == "# nota\na,b,c\n1,,none\n2,0.500000,x\n"


def test_atomic_write_leaves_no_temp(tmp_path):
    p = atomic_write(tmp_path / "sub" / "a.txt", "ok\n")
    assert p.read_text(encoding="utf-8") == "ok\n"
    assert sorted(x.name for x in p.parent.iterdir()) == ["a.txt"]
