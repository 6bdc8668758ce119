"""
constructions.py — Construtores de conjuntos GCS / CBS e o planejador de comprimentos arbitrários.

Blocos:
  - pares semente (comprimentos 1, 2, 3, 5, 10, 11, 13, 26) e a CBS(8, 7)
  - composição de Craigen (par 2-fase × dois pares 4-fase)
  - composição soma-produto (conjunto A × conjunto B agrupado em t/u)
  - escala multiplicativa por um par 2-fase
  - composição de Yang (rotas concat / interleave) e a combinação final
  - receita (ConstructionPlan) em árvore, serializável em JSON
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from erros import (
    CorpusRequired, CorpusVerificationFailed, DigitNotCovered, GroupingMismatch, LengthMismatch,
    NotPair, NotTwoPhase, OddCardinality, PlanArithmeticMismatch, QuarterScaleViolation,
    RouteConstraintViolated, ShapeMismatch, TrivialTwoPhase, UnsupportedSeedLength, VerificationFailed,
)
from golay_numbers import (
    DEFAULT_MEMORY_CAP, RESTRICTED_BASE_LENGTHS, TWO_PHASE_SEEDS, WitnessIndex, _divisors,
    choose_P, is_golay,
)
from seqcore import QSeq, VerificationReport, concat, flip_conj, interleave, kron, verify_gcs_set

log = logging.getLogger(__name__)


# =========================
# Conjunto GCS
# =========================

@dataclass(frozen=True, eq=False)
class GcsSet:
    seqs: Tuple[QSeq, ...]
    certified: bool = False
    cbs: Optional[Tuple[int, int]] = None
    pair_split: bool = False
    report: Optional[VerificationReport] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "seqs", tuple(self.seqs))

    def __len__(self) -> int:
        return len(self.seqs)

    def __iter__(self):
        return iter(self.seqs)

    def __getitem__(self, i: int) -> QSeq:
        return self.seqs[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GcsSet):
            return NotImplemented
        return self.seqs == other.seqs

    @property
    def cardinality(self) -> int:
        return len(self.seqs)

    @property
    def lengths(self) -> Tuple[int, ...]:
        return tuple(len(s) for s in self.seqs)

    @property
    def length(self) -> int:
        """Comprimento comum; LengthMismatch se os membros diferem."""
        ls = set(self.lengths)
        if len(ls) > 1:
            raise LengthMismatch(f"membros com comprimentos {sorted(ls)}")
        return ls.pop() if ls else 0

    @property
    def total_entries(self) -> int:
        return sum(self.lengths)

    def verify(self) -> VerificationReport:
        return verify_gcs_set(self.seqs)


def certify(S: GcsSet, what: str = "conjunto") -> GcsSet:
    rep = S.verify()
    if not rep.ok:
        raise VerificationFailed(f"{what} não é complementar: {rep.message}")
    return replace(S, certified=True, report=rep)


def _finish(S: GcsSet, verify: bool, what: str) -> GcsSet:
    return certify(S, what) if verify else S


def empty_set(cardinality: int) -> GcsSet:
    return GcsSet(tuple(QSeq.empty() for _ in range(cardinality)), certified=True)


def pad_cardinality(S: GcsSet, cardinality: int) -> GcsSet:
    """Repete os membros até a cardinalidade pedida (múltiplo da atual)."""
    if cardinality == S.cardinality:
        return S
    if S.cardinality == 0 or cardinality % S.cardinality:
        raise ShapeMismatch(f"não dá para levar cardinalidade {S.cardinality} a {cardinality}")
    return replace(S, seqs=S.seqs * (cardinality // S.cardinality), cbs=None, pair_split=False)


# =========================
# Sementes
# =========================

_I = 1j

SEED_PAIRS: Dict[int, Tuple[List[complex], List[complex]]] = {
    1: ([1], [1]),
    2: ([1, 1], [1, -1]),
    3: ([1, 1, -1], [1, _I, 1]),
    5: ([_I, _I, 1, -1, 1], [_I, 1, 1, _I, -1]),
    10: ([1, -1, -1, 1, -1, 1, -1, -1, -1, 1],
         [1, -1, -1, -1, -1, -1, -1, 1, 1, -1]),
    11: ([1, _I, -1, 1, -1, _I, -_I, -1, _I, _I, 1],
         [1, 1, -_I, -_I, -_I, 1, 1, _I, -1, 1, -1]),
    13: ([1, 1, 1, _I, -1, 1, 1, -_I, 1, -1, 1, -_I, _I],
         [1, _I, -1, -1, -1, _I, -1, 1, 1, -_I, -1, 1, -_I]),
    26: ([-1, 1, -1, -1, 1, 1, -1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1, -1, 1, 1, -1, -1, -1, 1, -1, 1],
         [-1, 1, -1, -1, 1, 1, -1, 1, 1, 1, 1, -1, 1, -1, 1, 1, 1, 1, -1, -1, 1, 1, 1, -1, 1, -1]),
}

CBS_87: Tuple[List[int], ...] = (
    [-1, 1, 1, 1, 1, 1, -1, 1],
    [1, 1, 1, -1, -1, 1, -1, 1],
    [-1, 1, 1, -1, 1, 1, 1],
    [1, -1, 1, 1, 1, -1, -1],
)


def seed_pair(length: int) -> GcsSet:
    if length not in SEED_PAIRS:
        raise UnsupportedSeedLength(f"não há par semente de comprimento {length} (use {sorted(SEED_PAIRS)})")
    a, b = SEED_PAIRS[length]
    return certify(GcsSet((QSeq.from_values(a), QSeq.from_values(b))), f"par semente {length}")


def cbs_seed_87() -> GcsSet:
    return certify(GcsSet(tuple(QSeq.from_values(s) for s in CBS_87), cbs=(8, 7)), "CBS(8,7)")


def _require_pair(P: GcsSet, what: str) -> Tuple[QSeq, QSeq]:
    if P.cardinality != 2 or len(P[0]) != len(P[1]):
        raise NotPair(f"{what}: esperado par de comprimentos iguais (veio {P.lengths})")
    return P[0], P[1]


def _require_two_phase(P: GcsSet) -> Tuple[QSeq, QSeq]:
    e, f = _require_pair(P, "par 2-fase")
    if not (e.is_two_phase() and f.is_two_phase()):
        raise NotTwoPhase("o par multiplicador precisa ter entradas ±1")
    if len(e) <= 1:
        raise TrivialTwoPhase("o par 2-fase precisa ter comprimento > 1")
    return e, f


# =========================
# Quarto de sequências
# =========================

def quarter_sequences_x4(e: QSeq, f: QSeq) -> Tuple[QSeq, QSeq]:
    """(4p, 4q) com 4p = e+f+(f*-e*) e 4q = e+f-(f*-e*)."""
    soma = e + f
    dif = flip_conj(f) - flip_conj(e)
    return soma + dif, soma - dif


def quarter_sequences(two_phase: GcsSet) -> Tuple[QSeq, QSeq]:
    e, f = _require_two_phase(two_phase)
    p4, q4 = quarter_sequences_x4(e, f)
    if not (p4.divisible_by(4) and q4.divisible_by(4)):
        raise QuarterScaleViolation("quarto de sequência não divisível por 4: par 2-fase inválido")
    return p4.exact_div(4), q4.exact_div(4)


# =========================
# Composições
# =========================

def craigen_compose(two_phase: GcsSet, t_pair: GcsSet, u_pair: GcsSet, verify: bool = True) -> GcsSet:
    """Par de comprimento s·t·u a partir de um par 2-fase (s) e dois pares 4-fase (t, u)."""
    p, q = quarter_sequences(two_phase)
    c, d = _require_pair(t_pair, "par t")
    e, f = _require_pair(u_pair, "par u")
    x = kron(p, c) + kron(q, d)
    y = kron(flip_conj(q), c) - kron(flip_conj(p), d)
    g = kron(x, e) + kron(y, f)
    h = kron(flip_conj(y), e) - kron(flip_conj(x), f)
    return _finish(GcsSet((g, h)), verify, f"Craigen {len(p)}·{len(c)}·{len(e)}")


def _split_a(setA: GcsSet) -> int:
    if setA.cardinality % 2:
        raise OddCardinality(f"conjunto A com cardinalidade ímpar ({setA.cardinality})")
    if len(set(setA.lengths)) > 1:
        raise ShapeMismatch(f"conjunto A com comprimentos distintos {setA.lengths}")
    return setA.length


def _pair_sum(A: GcsSet, b_odd: Sequence[QSeq], b_even: Sequence[QSeq]) -> List[QSeq]:
    out: List[QSeq] = []
    for l in range(A.cardinality // 2):
        a1, a2 = A[2 * l], A[2 * l + 1]
        a1s, a2s = flip_conj(a1), flip_conj(a2)
        for bo, be in zip(b_odd, b_even):
            out.append(kron(a1, bo) + kron(a2, be))
            out.append(kron(a2s, bo) - kron(a1s, be))
    return out


def thm1_compose(setA: GcsSet, setB: GcsSet, grouping: Tuple[int, int], verify: bool = True) -> GcsSet:
    """Conjunto de cardinalidade 2LM com membros de comprimento s·(t+u).

    Posições ímpares de B (1, 3, ...) têm comprimento t, as pares comprimento u;
    t ou u podem ser zero com sequências vazias.
    """
    s = _split_a(setA)
    t, u = grouping
    if setB.cardinality % 2:
        raise OddCardinality(f"conjunto B com cardinalidade ímpar ({setB.cardinality})")
    odd, even = setB.seqs[0::2], setB.seqs[1::2]
    if any(len(b) != t for b in odd) or any(len(b) != u for b in even):
        raise GroupingMismatch(f"agrupamento (t={t}, u={u}) não bate com comprimentos {setB.lengths}")
    b_odd = [b.pad_right(t + u) for b in odd]
    b_even = [concat(QSeq.zeros(t), b) for b in even]
    out = _pair_sum(setA, b_odd, b_even)
    return _finish(GcsSet(tuple(out)), verify, f"soma-produto {s}·({t}+{u})")


def interleave_sets(X: GcsSet, Y: GcsSet) -> GcsSet:
    """B = [x1, y1, x2, y2, ...], completando a menor cardinalidade por repetição."""
    c = max(X.cardinality, Y.cardinality)
    X, Y = pad_cardinality(X, c), pad_cardinality(Y, c)
    seqs: List[QSeq] = []
    for x, y in zip(X.seqs, Y.seqs):
        seqs += [x, y]
    return GcsSet(tuple(seqs), certified=X.certified and Y.certified)


def cbs_as_grouped(cbs: GcsSet) -> GcsSet:
    """CBS [a1, a2, a3, a4] -> [a1, a3, a2, a4] (ímpares com s1, pares com s2)."""
    if cbs.cardinality != 4:
        raise ShapeMismatch("CBS precisa de quatro sequências")
    a = cbs.seqs
    return GcsSet((a[0], a[2], a[1], a[3]), certified=cbs.certified)


def prop3_compose(setA: GcsSet, setB: GcsSet, two_phase: GcsSet, verify: bool = True) -> GcsSet:
    """Cardinalidade 2LM, comprimento s·t·u (u = comprimento do par 2-fase)."""
    s = _split_a(setA)
    if setB.cardinality % 2:
        raise OddCardinality(f"conjunto B com cardinalidade ímpar ({setB.cardinality})")
    t = setB.length
    p, q = quarter_sequences(two_phase)
    ps, qs = flip_conj(p), flip_conj(q)
    b_odd, b_even = [], []
    for m in range(setB.cardinality // 2):
        b1, b2 = setB[2 * m], setB[2 * m + 1]
        b_odd.append(kron(p, b1) + kron(q, b2))
        b_even.append(kron(qs, b1) - kron(ps, b2))
    out = _pair_sum(setA, b_odd, b_even)
    return _finish(GcsSet(tuple(out)), verify, f"escala {s}·{t}·{len(p)}")


def scale_by(S: GcsSet, g_pair: GcsSet, s: int, verify: bool = True) -> GcsSet:
    """Aumenta o comprimento por g·s ∈ {2,10,26}·S1 sem mudar a cardinalidade."""
    return prop3_compose(g_pair, S, seed_pair(s), verify)


def cbs_from_pair(pair: GcsSet, verify: bool = True) -> GcsSet:
    """{a|1, a|-1, b, b} = CBS(g+1, g)."""
    a, b = _require_pair(pair, "cbs_from_pair")
    one, minus = QSeq.from_values([1]), QSeq.from_values([-1])
    g = len(a)
    S = GcsSet((concat(a, one), concat(a, minus), b, b), cbs=(g + 1, g))
    return _finish(S, verify, f"CBS({g + 1},{g})")


def cbs_from_pairs(p1: GcsSet, p2: GcsSet) -> GcsSet:
    """CBS(s1, s2) formada por dois pares (carrega o certificado de divisão em pares)."""
    a, b = _require_pair(p1, "par 1")
    c, d = _require_pair(p2, "par 2")
    return GcsSet((a, b, c, d), certified=p1.certified and p2.certified,
                  cbs=(len(a), len(c)), pair_split=True)


# =========================
# Yang
# =========================

CONCAT = "concat"
INTERLEAVE = "interleave"
COMBINE = "combine"


@dataclass(frozen=True, eq=False)
class YangQuad:
    """Quádrupla intermediária {e, f, g, h}: e, g e f, h com suportes complementares."""
    e: QSeq
    f: QSeq
    g: QSeq
    h: QSeq
    route: str

    @property
    def seqs(self) -> Tuple[QSeq, QSeq, QSeq, QSeq]:
        return (self.e, self.f, self.g, self.h)

    @property
    def length(self) -> int:
        return len(self.e)


def _cbs_lengths(cbs: GcsSet) -> Tuple[int, int]:
    if cbs.cardinality != 4:
        raise ShapeMismatch(f"CBS precisa de 4 sequências (veio {cbs.cardinality})")
    l = cbs.lengths
    if l[0] != l[1] or l[2] != l[3]:
        raise ShapeMismatch(f"CBS com comprimentos {l}")
    return l[0], l[2]


def _is_pair_split(cbs: GcsSet) -> bool:
    if cbs.pair_split:
        return True
    a, b, c, d = cbs.seqs
    return verify_gcs_set([a, b]).ok and verify_gcs_set([c, d]).ok


def yang_compose(cbs: GcsSet, pair1: Optional[GcsSet] = None, pair2: Optional[GcsSet] = None,
                 route: str = CONCAT) -> YangQuad:
    s1, s2 = _cbs_lengths(cbs)
    a, b, c, d = cbs.seqs
    if route == INTERLEAVE:
        if s1 != s2 + 1:
            raise ShapeMismatch(f"rota interleave exige CBS(s+1, s) (veio CBS({s1},{s2}))")
        z2, z1 = QSeq.zeros(s2), QSeq.zeros(s1)
        return YangQuad(interleave(a, z2), interleave(z1, c), interleave(b, z2), interleave(z1, d), route)
    if route != CONCAT:
        raise ValueError(f"rota desconhecida: {route}")
    if pair1 is None or pair2 is None:
        raise ShapeMismatch("rota concat precisa de dois pares")
    i, j = _require_pair(pair1, "par 1")
    k, l = _require_pair(pair2, "par 2")
    t1, t2 = len(i), len(k)
    if t1 != t2 and not _is_pair_split(cbs):
        raise RouteConstraintViolated(
            f"t1={t1} != t2={t2} exige CBS formada por dois pares")
    z_mid = QSeq.zeros(t2 * s2)
    z_end = QSeq.zeros(t1 * s1)
    e = concat(kron(a, i), z_mid, z_mid, kron(b, j))
    g = concat(kron(flip_conj(b), i), z_mid, z_mid, -kron(flip_conj(a), j))
    f = concat(z_end, kron(c, k), kron(d, l), z_end)
    h = concat(z_end, kron(flip_conj(d), k), -kron(flip_conj(c), l), z_end)
    return YangQuad(e, f, g, h, route)


def yang_combine(q1: YangQuad, q2: YangQuad, verify: bool = True) -> GcsSet:
    """CBS(s, s) com s = |q1|·|q2|."""
    for q in (q1, q2):
        if len({len(x) for x in q.seqs}) != 1:
            raise ShapeMismatch("quádrupla intermediária com comprimentos distintos")
    e1, f1, g1, h1 = q1.seqs
    e2, f2, g2, h2 = q2.seqs
    fc = flip_conj
    p = kron(e1, fc(f2)) - kron(fc(g1), e2) + kron(f1, g2) + kron(h1, h2)
    q = kron(fc(e1), e2) + kron(g1, fc(f2)) - kron(f1, fc(h2)) + kron(h1, fc(g2))
    r = kron(fc(f1), e2) - kron(h1, f2) + kron(e1, fc(h2)) + kron(g1, g2)
    s = -kron(f1, f2) - kron(fc(h1), e2) + kron(e1, fc(g2)) - kron(g1, h2)
    n = len(p)
    return _finish(GcsSet((p, q, r, s), cbs=(n, n)), verify, f"CBS({n},{n}) de Yang")


# =========================
# Corpus de sequências base
# =========================

def check_corpus_records(records: Sequence[Sequence[QSeq]]) -> Tuple[List[GcsSet], List[Tuple[int, str]]]:
    """Separa registros válidos (CBS(b+1, b) complementar) dos rejeitados (índice, motivo)."""
    ok: List[GcsSet] = []
    bad: List[Tuple[int, str]] = []
    for idx, rec in enumerate(records):
        if len(rec) != 4:
            bad.append((idx, f"{len(rec)} sequências (esperado 4)"))
            continue
        S = GcsSet(tuple(rec))
        l = S.lengths
        if not (l[0] == l[1] == l[2] + 1 == l[3] + 1):
            bad.append((idx, f"comprimentos {l} não formam CBS(b+1, b)"))
            continue
        if not all(s.is_polyphase() for s in rec):
            bad.append((idx, "entradas fora de {0, ±1, ±i}"))
            continue
        rep = S.verify()
        if not rep.ok:
            bad.append((idx, rep.message))
            continue
        ok.append(replace(S, certified=True, report=rep, cbs=(l[0], l[2])))
    return ok, bad


def load_base_corpus(path: Union[str, Path], skip_invalid: bool = False) -> List[GcsSet]:
    from formatos import parse_corpus  # formatos depende deste módulo

    records = parse_corpus(Path(path))
    ok, bad = check_corpus_records(records)
    for idx, msg in bad:
        if not skip_invalid:
            raise CorpusVerificationFailed(f"registro {idx} do corpus rejeitado: {msg}")
        log.warning("registro %d do corpus rejeitado: %s", idx, msg)
    log.info("corpus %s: %d CBS aceitas, %d rejeitadas", path, len(ok), len(bad))
    return ok


def corpus_by_length(corpus: Iterable[GcsSet]) -> Dict[int, GcsSet]:
    """b -> CBS(b+1, b); o primeiro registro de cada b vence."""
    out: Dict[int, GcsSet] = {}
    for S in corpus:
        b = S.lengths[2]
        out.setdefault(b, S)
    return out


# =========================
# Receita
# =========================

SEED = "seed"
TRIVIAL = "trivial"
CRAIGEN = "craigen"
THM1 = "thm1"
PROP3 = "prop3"
YANG = "yang"
CBS_SEED = "cbs_seed"
CBS_FROM_PAIR = "cbs_from_pair"
SCALE = "scale"
HIER = "hier"

PLAN_KINDS = (SEED, TRIVIAL, CRAIGEN, THM1, PROP3, YANG, CBS_SEED, CBS_FROM_PAIR, SCALE, HIER)

Param = Union[int, str]


@dataclass(frozen=True)
class ConstructionPlan:
    kind: str
    length: int
    cardinality: int
    length2: int = -1
    params: Tuple[Tuple[str, Param], ...] = ()
    children: Tuple["ConstructionPlan", ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in PLAN_KINDS:
            raise ValueError(f"tipo de nó desconhecido: {self.kind}")
        if self.length2 < 0:
            object.__setattr__(self, "length2", self.length)
        object.__setattr__(self, "params", tuple(sorted(self.params)))

    def param(self, key: str, default: Any = None) -> Any:
        for k, v in self.params:
            if k == key:
                return v
        return default

    def to_dict(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {"kind": self.kind, "length": self.length, "cardinality": self.cardinality}
        if self.length2 != self.length:
            d["length2"] = self.length2
        if self.params:
            d["params"] = dict(self.params)
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ConstructionPlan":
        return cls(
            kind=d["kind"],
            length=int(d["length"]),
            cardinality=int(d["cardinality"]),
            length2=int(d.get("length2", -1)),
            params=tuple((k, v) for k, v in d.get("params", {}).items()),
            children=tuple(cls.from_dict(c) for c in d.get("children", [])),
        )


@lru_cache(maxsize=None)
def node_count(plan: ConstructionPlan) -> int:
    return 1 + sum(node_count(c) for c in plan.children)


def _plan(kind: str, length: int, card: int, children: Sequence[ConstructionPlan] = (),
          length2: int = -1, **params: Param) -> ConstructionPlan:
    return ConstructionPlan(kind, length, card, length2, tuple(params.items()), tuple(children))


def _halves(p: ConstructionPlan, children: Tuple[ConstructionPlan, ...]) -> Tuple[int, int, int]:
    """(t, u, M) do conjunto B de um nó thm1."""
    if len(children) == 2:
        return children[1].length, children[1].length2, children[1].cardinality // 2
    X, Y = children[1], children[2]
    return X.length, Y.length, max(X.cardinality, Y.cardinality)


def expected_shape(plan: ConstructionPlan) -> Tuple[int, int, int]:
    """(comprimento, comprimento2, cardinalidade) calculados de baixo para cima."""
    k, ch = plan.kind, plan.children
    for c in ch:
        check_plan(c)
    if k == SEED:
        n = plan.length
        if n and n not in SEED_PAIRS:
            raise UnsupportedSeedLength(f"não há par semente de comprimento {n}")
        return n, n, 2
    if k == TRIVIAL:
        return 1, 1, 2
    if k == CRAIGEN:
        n = ch[0].length * ch[1].length * ch[2].length
        return n, n, 2
    if k == THM1:
        A = ch[0]
        t, u, M = _halves(plan, ch)
        n = A.length * (t + u)
        return n, n, A.cardinality * M
    if k == PROP3:
        A, B, U = ch
        n = A.length * B.length * U.length
        return n, n, A.cardinality * B.cardinality // 2
    if k == YANG:
        route = plan.param("route")
        if route == COMBINE:
            n = ch[0].length * ch[1].length
            return n, n, 4
        if route == INTERLEAVE:
            n = ch[0].length + ch[0].length2
            return n, n, 4
        if len(ch) == 3:
            s1, s2, t1, t2 = ch[0].length, ch[0].length2, ch[1].length, ch[2].length
        else:
            s1, s2, t1, t2 = ch[0].length, ch[1].length, ch[2].length, ch[3].length
        n = 2 * (s1 * t1 + s2 * t2)
        return n, n, 4
    if k == CBS_SEED:
        ident = str(plan.param("id"))
        b = 7 if ident == "cbs87" else int(ident.split("-b", 1)[1])
        return b + 1, b, 4
    if k == CBS_FROM_PAIR:
        g = ch[0].length
        return g + 1, g, 4
    if k == SCALE:
        (Y,) = ch
        f, base = 1, Y
        while base.kind == PROP3:
            f *= base.children[0].length * base.children[2].length
            base = base.children[1]
        if int(plan.param("factor")) != f or Y.length != base.length * f:
            raise PlanArithmeticMismatch(f"fator {plan.param('factor')} != {f} acumulado nas composições")
        return Y.length, Y.length2, Y.cardinality
    if k == HIER:
        r = len(ch)
        card = max(c.cardinality for c in ch) * (1 << math.ceil(math.log2(r))) if r > 1 else ch[0].cardinality
        n = sum(c.length for c in ch)
        return n, n, card
    raise PlanArithmeticMismatch(f"nó desconhecido {k}")


def check_plan(plan: ConstructionPlan) -> None:
    got = expected_shape(plan)
    decl = (plan.length, plan.length2, plan.cardinality)
    if got != decl:
        raise PlanArithmeticMismatch(f"nó {plan.kind}: declarado {decl}, calculado {got}")


# =========================
# Planejadores
# =========================

def plan_trivial() -> ConstructionPlan:
    return _plan(TRIVIAL, 1, 2)


@lru_cache(maxsize=None)
def plan_pair(n: int) -> ConstructionPlan:
    """Par 4-fase de comprimento n ∈ S1 (0 = par vazio)."""
    if n == 1:
        return plan_trivial()
    if n == 0 or n in SEED_PAIRS:
        return _plan(SEED, n, 2)
    if not is_golay(n):
        raise UnsupportedSeedLength(f"{n} não é número de Golay 4-fase")
    best: Optional[Tuple[Tuple[int, int, int], ConstructionPlan]] = None
    for s in TWO_PHASE_SEEDS:
        if n % s:
            continue
        m = n // s
        for t in _divisors(m):
            u = m // t
            if t > u:
                break
            if not (is_golay(t) and is_golay(u)):
                continue
            try:
                cand = _plan(CRAIGEN, n, 2, (plan_pair(s), plan_pair(t), plan_pair(u)))
            except UnsupportedSeedLength:
                continue
            key = (node_count(cand), s, t)
            if best is None or key < best[0]:
                best = (key, cand)
    if best is None:
        raise UnsupportedSeedLength(f"sem decomposição s·t·u para {n}")
    return best[1]


class Planner:
    """Escolhe receitas: menor cardinalidade, depois a menor testemunha."""

    def __init__(self, bound: int, base_lengths: Sequence[int] = RESTRICTED_BASE_LENGTHS,
                 memory_cap: int = DEFAULT_MEMORY_CAP) -> None:
        self.index = WitnessIndex(bound, base_lengths, memory_cap)
        self.base_lengths = set(base_lengths)

    # ---- CBS(b+1, b) ----

    def plan_cbs(self, b: int) -> ConstructionPlan:
        src = self.index.b_source(b)
        if src == "pair":
            return _plan(CBS_FROM_PAIR, b + 1, 4, (plan_pair(b),), length2=b)
        if b == 7:
            return _plan(CBS_SEED, 8, 4, length2=7, id="cbs87")
        if src == "base":
            return _plan(CBS_SEED, b + 1, 4, length2=b, id=f"corpus-b{b}")
        raise CorpusRequired(f"CBS({b + 1},{b}) não disponível")

    # ---- E / F ----

    def plan_e(self, e: int) -> ConstructionPlan:
        w = self.index.e_witness(e)
        if w is None:
            raise DigitNotCovered(e, 0)
        if w[0] == "inter":
            return _plan(YANG, e, 4, (self.plan_cbs(w[1]),), route=INTERLEAVE)
        if w[0] == "cbs":
            t, b = w[1], w[2]
            return _plan(YANG, e, 4, (self.plan_cbs(b), plan_pair(t), plan_pair(t)), route=CONCAT)
        if w[0] == "pairs":
            s1, t1, s2, t2 = w[1:]
            ch = (plan_pair(s1), plan_pair(s2), plan_pair(t1), plan_pair(t2))
            return _plan(YANG, e, 4, ch, route=CONCAT)
        t, f = w[1], w[2]
        return _plan(YANG, e, 4, (self.plan_f(f), plan_pair(t), plan_pair(t)), route=CONCAT)

    def plan_f(self, f: int) -> ConstructionPlan:
        w = self.index.f_witness(f)
        if w is None:
            raise DigitNotCovered(f, 0)
        return _plan(YANG, f, 4, (self.plan_e(w[0]), self.plan_e(w[1])), length2=f, route=COMBINE)

    # ---- pares / quádruplas / óctuplas ----

    def plan_quad(self, n: int) -> Optional[ConstructionPlan]:
        w = self.index.s2_dense(n)
        if w is None:
            return None
        tag = w[0]
        if tag == "plain":
            s, t, u = w[1:]
            return _plan(THM1, n, 4, (plan_pair(s), plan_pair(t), plan_pair(u)))
        if tag == "F":
            return self.plan_f(w[1])
        s = w[1]
        if tag == "SB":
            return _plan(THM1, n, 4, (plan_pair(s), self.plan_cbs(w[2])))
        return _plan(THM1, n, 4, (plan_pair(s), self.plan_f(w[2])))

    def plan_octet(self, n: int) -> Optional[ConstructionPlan]:
        w = self.index.s3(n, dense=True)
        if w is None:
            return None
        s, x, y = w
        X = self.plan_quad(x) if x else plan_pair(0)
        Y = self.plan_quad(y) if y else plan_pair(0)
        return _plan(THM1, n, 2 * max(X.cardinality, Y.cardinality), (plan_pair(s), X, Y))

    def plan_length(self, n: int) -> Optional[ConstructionPlan]:
        if n >= 1 and is_golay(n):
            return plan_pair(n)
        return self.plan_quad(n) or self.plan_octet(n)


def _plan_scale(X: ConstructionPlan, P: int, times: int) -> ConstructionPlan:
    s, g = _split_under_s(P)
    G, U = plan_pair(g), plan_pair(s)
    Y = X
    for _ in range(times):
        Y = _plan(PROP3, Y.length * P, Y.cardinality, (G, Y, U))
    return _plan(SCALE, Y.length, Y.cardinality, (Y,), factor=P ** times)


@lru_cache(maxsize=None)
def _split_under_s(P: int) -> Tuple[int, int]:
    for s in TWO_PHASE_SEEDS:
        if P % s == 0 and is_golay(P // s):
            return s, P // s
    raise UnsupportedSeedLength(f"{P} não está em {{2,10,26}}·S1")


def digits_base(n: int, P: int) -> List[int]:
    out = []
    while n:
        n, r = divmod(n, P)
        out.append(r)
    return out


def plan_arbitrary(n: int, P: int, base_lengths: Sequence[int] = RESTRICTED_BASE_LENGTHS,
                   memory_cap: int = DEFAULT_MEMORY_CAP) -> ConstructionPlan:
    """Receita para comprimento n: dígitos na base P, escala por P^i e combinação hierárquica."""
    if n < 1:
        raise ValueError("n precisa ser >= 1")
    digits = digits_base(n, P)
    nz = [(i, d) for i, d in enumerate(digits) if d]
    planner = Planner(max(d for _, d in nz), base_lengths, memory_cap)

    parts: List[ConstructionPlan] = []
    for i, d in nz:
        p = planner.plan_length(d)
        if p is None:
            raise DigitNotCovered(d, i)
        parts.append(_plan_scale(p, P, i) if i else p)

    if len(parts) == 1:
        plan = parts[0]
    else:
        r = len(parts)
        card = max(p.cardinality for p in parts) * (1 << math.ceil(math.log2(r)))
        plan = _plan(HIER, n, card, parts)
    check_plan(plan)
    return plan


def cardinality_bound(n: int, P: int, k: int = 3) -> int:
    r = sum(1 for d in digits_base(n, P) if d)
    return 1 << (k + math.ceil(math.log2(r))) if r > 1 else 1 << k


# =========================
# Realização
# =========================

class Realizer:
    def __init__(self, corpus: Optional[Mapping[int, GcsSet]] = None, verify: bool = True) -> None:
        self.corpus = dict(corpus or {})
        self.verify = verify
        self._memo: Dict[ConstructionPlan, Any] = {}

    def __call__(self, plan: ConstructionPlan) -> Any:
        if plan in self._memo:
            return self._memo[plan]
        out = self._build(plan)
        shape = self._shape_of(out)
        if shape != (plan.length, plan.cardinality):
            raise PlanArithmeticMismatch(
                f"nó {plan.kind}: receita ({plan.length}, {plan.cardinality}) != realizado {shape}")
        self._memo[plan] = out
        return out

    @staticmethod
    def _shape_of(out: Any) -> Tuple[int, int]:
        if isinstance(out, YangQuad):
            return out.length, 4
        lens = set(out.lengths)
        n = max(lens) if lens else 0
        return n, out.cardinality

    def _build(self, p: ConstructionPlan) -> Any:
        k, ch, v = p.kind, p.children, self.verify
        if k == SEED:
            n = p.length
            return empty_set(2) if n == 0 else seed_pair(n)
        if k == TRIVIAL:
            return seed_pair(1)
        if k == CRAIGEN:
            return craigen_compose(self(ch[0]), self(ch[1]), self(ch[2]), v)
        if k == THM1:
            A = self(ch[0])
            if len(ch) == 2:
                B = self._as_set(self(ch[1]))
                return thm1_compose(A, cbs_as_grouped(B), (ch[1].length, ch[1].length2), v)
            X, Y = self(ch[1]), self(ch[2])
            return thm1_compose(A, interleave_sets(X, Y), (ch[1].length, ch[2].length), v)
        if k == PROP3:
            return prop3_compose(self(ch[0]), self(ch[1]), self(ch[2]), v)
        if k == YANG:
            route = p.param("route")
            if route == COMBINE:
                return yang_combine(self(ch[0]), self(ch[1]), v)
            if route == INTERLEAVE:
                return yang_compose(self(ch[0]), route=INTERLEAVE)
            if len(ch) == 3:
                return yang_compose(self._as_set(self(ch[0])), self(ch[1]), self(ch[2]), CONCAT)
            return yang_compose(cbs_from_pairs(self(ch[0]), self(ch[1])), self(ch[2]), self(ch[3]), CONCAT)
        if k == CBS_SEED:
            ident = str(p.param("id"))
            if ident == "cbs87":
                return cbs_seed_87()
            b = int(ident.split("-b", 1)[1])
            if b not in self.corpus:
                raise CorpusRequired(f"CBS({b + 1},{b}) exige o corpus carregado")
            return self.corpus[b]
        if k == CBS_FROM_PAIR:
            return cbs_from_pair(self(ch[0]), v)
        if k == SCALE:
            return self(ch[0])
        if k == HIER:
            return self._hier([self(c) for c in ch])
        raise PlanArithmeticMismatch(f"nó desconhecido {k}")

    @staticmethod
    def _as_set(x: Any) -> GcsSet:
        if isinstance(x, YangQuad):
            raise ShapeMismatch("quádrupla intermediária usada como conjunto")
        return x

    def _hier(self, sets: List[GcsSet]) -> GcsSet:
        c = max(S.cardinality for S in sets)
        level = [pad_cardinality(S, c) for S in sets]
        width = 1 << math.ceil(math.log2(len(level)))
        level += [empty_set(c)] * (width - len(level))
        trivial = seed_pair(1)
        while len(level) > 1:
            nxt = []
            for X, Y in zip(level[0::2], level[1::2]):
                nxt.append(thm1_compose(trivial, interleave_sets(X, Y), (X.length, Y.length), False))
            level = nxt
        return _finish(level[0], self.verify, "combinação hierárquica")


def realize(plan: ConstructionPlan, corpus: Optional[Mapping[int, GcsSet]] = None,
            verify: bool = True) -> Any:
    check_plan(plan)
    return Realizer(corpus, verify)(plan)


@dataclass(frozen=True)
class BuildResult:
    plan: ConstructionPlan
    gcs: Optional[GcsSet]
    P: int
    digits: Tuple[int, ...]
    level: str


def build_arbitrary(n: int, P: Optional[int] = None, verified_bound: int = 10**7,
                    corpus: Optional[Sequence[GcsSet]] = None,
                    certify_max_entries: int = 1 << 24,
                    memory_cap: int = DEFAULT_MEMORY_CAP) -> BuildResult:
    P = P if P is not None else choose_P(verified_bound)
    by_len = corpus_by_length(corpus or [])
    base = tuple(sorted(set(RESTRICTED_BASE_LENGTHS) | set(by_len)))
    plan = plan_arbitrary(n, P, base, memory_cap)
    digits = tuple(digits_base(n, P))
    entries = plan.length * plan.cardinality
    if entries > certify_max_entries:
        log.warning("n=%d: %d entradas acima do orçamento; só a receita foi conferida", n, entries)
        return BuildResult(plan, None, P, digits, "structural")
    S = realize(plan, by_len, verify=True)
    return BuildResult(plan, S, P, digits, "full")
