"""
formatos.py — Leitura e escrita dos artefatos em disco.

  sequências   : cabeçalho `#gcs n=<comprimento> L=<quantidade>`, uma sequência por linha
                 (símbolos 0, 1, -1, i, -i separados por vírgula); `#` inicia comentário
  corpus       : vários blocos `#gcs` seguidos, um por CBS(b+1, b)
  receita      : JSON com as tags de nó de ConstructionPlan
  matriz texto : `order <n> [block <v>]` e n linhas de + / -
  matriz HMAT  : magic `HMAT`, ordem, bloco, palavras por linha, linhas empacotadas (uint64 LE)
  SPSeq        : `#spseq v=<ordem> n=<comprimento>`, entrada `0` ou `perm:<csv>;sign:<csv>`
  GLS1         : magic `GLS1`, tag do conjunto, limite e o vetor de bits em palavras uint64 LE
  CSV          : relatórios de densidade, cobertura e curvas

Toda escrita é atômica: arquivo temporário no mesmo diretório e os.replace.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import re
import struct
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from constructions import ConstructionPlan
from erros import CorpusParse, ShapeMismatch
from golay_numbers import LengthSet
from hadamard import PMMatrix
from seqcore import GaussInt, QSeq
from signed_perm import SignedPerm, SPSeq

log = logging.getLogger(__name__)

Destino = Union[str, Path]

HMAT_MAGIC = b"HMAT"
GLS1_MAGIC = b"GLS1"
_HMAT_HEAD = struct.Struct("<4sQQQ")

_GCS_HEADER = re.compile(r"#gcs\s+n=(\d+)\s+L=(\d+)\s*$")
_SPSEQ_HEADER = re.compile(r"#spseq\s+v=(\d+)\s+n=(\d+)\s*$")
_ORDER_LINE = re.compile(r"order\s+(\d+)(?:\s+block\s+(\d+))?\s*$")


# =========================
# Utilidades gerais
# =========================

def ensure_parent_dir(p: Path) -> None:
    p.parent.mkdir(parents=True, exist_ok=True)


def atomic_write(path: Destino, data: Union[str, bytes]) -> Path:
    """Grava em `.<nome>.tmp` e troca com os.replace."""
    p = Path(path)
    ensure_parent_dir(p)
    tmp = p.with_name(f".{p.name}.tmp")
    payload = data.encode("utf-8") if isinstance(data, str) else data
    try:
        with tmp.open("wb") as f:
            f.write(payload)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, p)
    finally:
        if tmp.exists():
            tmp.unlink()
    log.debug("gravado %s (%d bytes)", p, len(payload))
    return p


def stamp_comment() -> str:
    return f"gerado em {datetime.now(timezone.utc).isoformat(timespec='seconds')}"


def _comment_lines(comments: Iterable[str]) -> List[str]:
    return [f"# {c}" for c in comments]


def _text(src: Union[Destino, str], fonte: Optional[str]) -> Tuple[str, str]:
    if isinstance(src, Path):
        return src.read_text(encoding="utf-8"), fonte or str(src)
    return src, fonte or "<texto>"


# =========================
# Sequências
# =========================

def format_sequences(seqs: Sequence[QSeq], comments: Iterable[str] = ()) -> str:
    n = max((len(s) for s in seqs), default=0)
    linhas = [f"#gcs n={n} L={len(seqs)}", *_comment_lines(comments)]
    linhas += [",".join(s.tokens()) for s in seqs]
    return "\n".join(linhas) + "\n"


def _parse_tokens(corpo: str, lineno: int, offset: int, fonte: str) -> QSeq:
    if not corpo.strip():
        return QSeq.empty()
    valores: List[GaussInt] = []
    col = offset
    for tok in corpo.split(","):
        try:
            valores.append(GaussInt.parse(tok))
        except ValueError as exc:
            lead = len(tok) - len(tok.lstrip())
            raise CorpusParse(str(exc), lineno, col + lead + 1, fonte) from None
        col += len(tok) + 1
    return QSeq.from_values(valores)


def _parse_blocks(text: str, fonte: str) -> List[List[QSeq]]:
    blocos: List[Tuple[int, int, int, List[QSeq]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s.startswith("#gcs"):
            m = _GCS_HEADER.match(s)
            if not m:
                raise CorpusParse(f"cabeçalho inválido {s!r}", lineno, raw.index("#") + 1, fonte)
            blocos.append((lineno, int(m.group(1)), int(m.group(2)), []))
            continue
        corpo = raw.split("#", 1)[0]
        if not corpo.strip():
            # linha vazia dentro de um bloco incompleto = sequência vazia
            if not s and blocos and len(blocos[-1][3]) < blocos[-1][2]:
                blocos[-1][3].append(QSeq.empty())
            continue
        if not blocos:
            raise CorpusParse("sequência antes do cabeçalho #gcs", lineno, 1, fonte)
        seq = _parse_tokens(corpo, lineno, 0, fonte)
        head, n, _, seqs = blocos[-1]
        if len(seq) > n:
            raise CorpusParse(f"sequência de comprimento {len(seq)} acima de n={n}", lineno, 1, fonte)
        seqs.append(seq)

    out = []
    for head, n, L, seqs in blocos:
        if len(seqs) != L:
            raise CorpusParse(f"bloco com {len(seqs)} sequências (cabeçalho diz L={L})", head, 1, fonte)
        if seqs and max(len(s) for s in seqs) != n:
            raise CorpusParse(f"nenhuma sequência tem o comprimento n={n} do cabeçalho", head, 1, fonte)
        out.append(seqs)
    return out


def parse_sequences(src: Union[Destino, str], fonte: Optional[str] = None) -> List[QSeq]:
    """Todas as sequências do arquivo (vários blocos são concatenados)."""
    text, fonte = _text(src, fonte)
    blocos = _parse_blocks(text, fonte)
    if not blocos:
        raise CorpusParse("arquivo sem cabeçalho #gcs", 1, 1, fonte)
    return [s for b in blocos for s in b]


def parse_corpus(src: Union[Destino, str], fonte: Optional[str] = None) -> List[List[QSeq]]:
    """Um registro por bloco; a verificação fica com constructions.check_corpus_records."""
    text, fonte = _text(src, fonte)
    return _parse_blocks(text, fonte)


def write_sequences(path: Destino, seqs: Sequence[QSeq], comments: Iterable[str] = ()) -> Path:
    return atomic_write(path, format_sequences(seqs, comments))


# =========================
# Receitas
# =========================

def plan_to_json(plan: ConstructionPlan, extra: Optional[dict] = None) -> str:
    dados: dict = {"plan": plan.to_dict()}
    if extra:
        dados.update(extra)
    return json.dumps(dados, indent=2, ensure_ascii=False) + "\n"


def plan_from_json(text: str) -> ConstructionPlan:
    dados = json.loads(text)
    return ConstructionPlan.from_dict(dados["plan"] if "plan" in dados else dados)


def write_plan(path: Destino, plan: ConstructionPlan, extra: Optional[dict] = None) -> Path:
    return atomic_write(path, plan_to_json(plan, extra))


def read_plan(path: Destino) -> ConstructionPlan:
    return plan_from_json(Path(path).read_text(encoding="utf-8"))


# =========================
# Matrizes
# =========================

_PM = np.frombuffer(b"+-", dtype=np.uint8)


def format_matrix(H: PMMatrix, comments: Iterable[str] = ()) -> str:
    head = f"order {H.n}" + (f" block {H.block}" if H.block else "")
    linhas = [head, *_comment_lines(comments)]
    out = io.StringIO()
    out.write("\n".join(linhas) + "\n")
    step = max(1, (1 << 24) // max(1, H.n))
    for i0 in range(0, H.n, step):
        chars = _PM[H.neg_rows(i0, min(i0 + step, H.n)).astype(np.uint8)]
        for row in chars:
            out.write(row.tobytes().decode("ascii"))
            out.write("\n")
    return out.getvalue()


def parse_matrix(src: Union[Destino, str], fonte: Optional[str] = None) -> PMMatrix:
    text, fonte = _text(src, fonte)
    linhas = [(i, l.strip()) for i, l in enumerate(text.splitlines(), start=1)]
    linhas = [(i, l) for i, l in linhas if l and not l.startswith("#")]
    if not linhas:
        raise CorpusParse("arquivo de matriz vazio", 1, 1, fonte)
    lineno, head = linhas[0]
    m = _ORDER_LINE.match(head)
    if not m:
        raise CorpusParse(f"primeira linha deveria ser 'order <n> [block <v>]' (veio {head!r})", lineno, 1, fonte)
    n, block = int(m.group(1)), int(m.group(2) or 0)
    corpo = linhas[1:]
    if len(corpo) != n:
        raise CorpusParse(f"{len(corpo)} linhas para ordem {n}", lineno, 1, fonte)
    neg = np.zeros((n, n), dtype=bool)
    for r, (ln, row) in enumerate(corpo):
        arr = np.frombuffer(row.encode("ascii", errors="replace"), dtype=np.uint8)
        bad = np.flatnonzero((arr != ord("+")) & (arr != ord("-")))
        if bad.size:
            raise CorpusParse(f"símbolo {row[int(bad[0])]!r} (use + ou -)", ln, int(bad[0]) + 1, fonte)
        if arr.size != n:
            raise CorpusParse(f"linha com {arr.size} símbolos (esperado {n})", ln, 1, fonte)
        neg[r] = arr == ord("-")
    return PMMatrix.from_signs(np.where(neg, -1, 1), block)


def matrix_to_bytes(H: PMMatrix) -> bytes:
    words = H.bits.shape[1]
    return _HMAT_HEAD.pack(HMAT_MAGIC, H.n, H.block, words) + H.bits.astype("<u8").tobytes()


def matrix_from_bytes(data: bytes, fonte: str = "<bytes>") -> PMMatrix:
    if len(data) < _HMAT_HEAD.size:
        raise CorpusParse("arquivo HMAT truncado", fonte=fonte)
    magic, n, block, words = _HMAT_HEAD.unpack_from(data)
    if magic != HMAT_MAGIC:
        raise CorpusParse(f"magic {magic!r} (esperado {HMAT_MAGIC!r})", fonte=fonte)
    if words != (n + 63) // 64:
        raise CorpusParse(f"{words} palavras por linha para ordem {n}", fonte=fonte)
    corpo = data[_HMAT_HEAD.size:]
    if len(corpo) != n * words * 8:
        raise CorpusParse(f"{len(corpo)} bytes de linhas (esperado {n * words * 8})", fonte=fonte)
    bits = np.frombuffer(corpo, dtype="<u8").astype(np.uint64).reshape(n, words)
    # bits de preenchimento além da coluna n precisam estar zerados
    if n % 64 and np.any(bits[:, -1] >> np.uint64(n % 64)):
        raise CorpusParse("bits de preenchimento não nulos", fonte=fonte)
    return PMMatrix(int(n), bits, int(block))


def write_matrix(path: Destino, H: PMMatrix, comments: Iterable[str] = ()) -> Path:
    """Extensão .hmat grava binário; qualquer outra grava texto."""
    p = Path(path)
    if p.suffix.lower() == ".hmat":
        return atomic_write(p, matrix_to_bytes(H))
    return atomic_write(p, format_matrix(H, comments))


def read_matrix(path: Destino) -> PMMatrix:
    p = Path(path)
    data = p.read_bytes()
    if data[:4] == HMAT_MAGIC:
        return matrix_from_bytes(data, str(p))
    return parse_matrix(data.decode("utf-8"), str(p))


# =========================
# SPSeq
# =========================

def format_spseq(c: SPSeq, comments: Iterable[str] = ()) -> str:
    linhas = [f"#spseq v={c.v} n={len(c)}", *_comment_lines(comments)]
    for i in range(len(c)):
        if not c.mask[i]:
            linhas.append("0")
            continue
        img = ",".join(str(x) for x in c.images[i].tolist())
        sgn = ",".join(str(x) for x in c.signs[i].tolist())
        linhas.append(f"perm:{img};sign:{sgn}")
    return "\n".join(linhas) + "\n"


def parse_spseq(src: Union[Destino, str], fonte: Optional[str] = None) -> SPSeq:
    text, fonte = _text(src, fonte)
    head: Optional[Tuple[int, int]] = None
    entradas: List[Optional[Tuple[List[int], List[int]]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if s.startswith("#spseq"):
            m = _SPSEQ_HEADER.match(s)
            if not m:
                raise CorpusParse(f"cabeçalho inválido {s!r}", lineno, 1, fonte)
            head = (int(m.group(1)), int(m.group(2)))
            continue
        s = s.split("#", 1)[0].strip()
        if not s:
            continue
        if head is None:
            raise CorpusParse("entrada antes do cabeçalho #spseq", lineno, 1, fonte)
        if s == "0":
            entradas.append(None)
            continue
        m = re.fullmatch(r"perm:([-\d,\s]+);\s*sign:([-+\d,\s]+)", s)
        if not m:
            raise CorpusParse(f"entrada inválida {s!r}", lineno, 1, fonte)
        try:
            img = [int(x) for x in m.group(1).split(",")]
            sgn = [int(x) for x in m.group(2).split(",")]
        except ValueError:
            raise CorpusParse(f"número inválido em {s!r}", lineno, 1, fonte) from None
        if len(img) != head[0] or len(sgn) != head[0]:
            raise CorpusParse(f"entrada com {len(img)}/{len(sgn)} valores (v={head[0]})", lineno, 1, fonte)
        entradas.append((img, sgn))
    if head is None:
        raise CorpusParse("arquivo sem cabeçalho #spseq", 1, 1, fonte)
    v, n = head
    if len(entradas) != n:
        raise CorpusParse(f"{len(entradas)} entradas (cabeçalho diz n={n})", 1, 1, fonte)
    c = SPSeq.zeros(n, v)
    img, sgn, mask = c.images.copy(), c.signs.copy(), c.mask.copy()
    for i, e in enumerate(entradas):
        if e is not None:
            img[i], sgn[i], mask[i] = e[0], e[1], True
    for i in np.flatnonzero(mask).tolist():
        try:
            SignedPerm(img[i], sgn[i])
        except ShapeMismatch as exc:
            raise CorpusParse(f"entrada {i}: {exc}", fonte=fonte) from None
    return SPSeq(v, img, sgn, mask)


def write_spseq(path: Destino, c: SPSeq, comments: Iterable[str] = ()) -> Path:
    return atomic_write(path, format_spseq(c, comments))


# =========================
# Cache de conjuntos (GLS1)
# =========================

def length_set_to_bytes(S: LengthSet) -> bytes:
    tag = S.kind.encode("utf-8")
    packed = np.packbits(S.bits, bitorder="little")
    pad = (-packed.size) % 8
    if pad:
        packed = np.concatenate([packed, np.zeros(pad, dtype=np.uint8)])
    head = GLS1_MAGIC + struct.pack("<H", len(tag)) + tag + struct.pack("<Q", S.bound)
    return head + packed.view("<u8").tobytes()


def length_set_from_bytes(data: bytes, fonte: str = "<bytes>") -> LengthSet:
    if data[:4] != GLS1_MAGIC:
        raise CorpusParse(f"magic {data[:4]!r} (esperado {GLS1_MAGIC!r})", fonte=fonte)
    (tlen,) = struct.unpack_from("<H", data, 4)
    kind = data[6:6 + tlen].decode("utf-8")
    (bound,) = struct.unpack_from("<Q", data, 6 + tlen)
    corpo = data[14 + tlen:]
    nbits = bound + 1
    if len(corpo) != ((nbits + 63) // 64) * 8:
        raise CorpusParse(f"{len(corpo)} bytes de bits para limite {bound}", fonte=fonte)
    bits = np.unpackbits(np.frombuffer(corpo, dtype=np.uint8), bitorder="little")[:nbits].astype(bool)
    return LengthSet(kind, int(bound), bits)


def save_length_set(path: Destino, S: LengthSet) -> Path:
    return atomic_write(path, length_set_to_bytes(S))


def load_length_set(path: Destino) -> LengthSet:
    p = Path(path)
    return length_set_from_bytes(p.read_bytes(), str(p))


# =========================
# CSV
# =========================

def _cell(x: Any) -> str:
    if isinstance(x, float):
        return "" if math.isnan(x) else f"{x:.6f}"
    if x is None:
        return "none"
    return str(x)


def format_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], comments: Iterable[str] = ()) -> str:
    out = io.StringIO()
    for c in comments:
        out.write(f"# {c}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(x) for x in row])
    return out.getvalue()


def write_csv(path: Destino, header: Sequence[str], rows: Iterable[Sequence[Any]],
              comments: Iterable[str] = ()) -> Path:
    return atomic_write(path, format_csv(header, rows, comments))
