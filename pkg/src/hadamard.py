"""
hadamard.py — Matrizes de Hadamard: Sylvester, arranjo de Goethals–Seidel a partir de quádruplas,
bloco-circulantes a partir de sequências perfeitas, verificação exata por bits e o planejador
assintótico (ordem 2^t·m para m ímpar).

As linhas ±1 ficam empacotadas em palavras de 64 bits (bit 1 = entrada -1); duas linhas
distintas de uma Hadamard de ordem n discordam em exatamente n/2 posições.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from constructions import GcsSet, Planner, plan_pair, realize
from erros import (
    DigitNotCovered, NotCertified, NotHadamardSeed, NotQuad, PlanArithmeticMismatch, ShapeMismatch,
    ThresholdUnavailable, VerificationFailed,
)
from golay_numbers import (
    DEFAULT_MEMORY_CAP, RESTRICTED_BASE_LENGTHS, LengthSet, WitnessIndex, product, scale, sumset, union,
)
from seqcore import VerificationReport, flip_conj
from signed_perm import SPSeq, Thm4Output, perfect_from_inputs, require_perfect, thm4_sequences

log = logging.getLogger(__name__)

FULL_VERIFY_MAX = 4096
CROSSCHECK_MAX = 2048
# bytes do bloco temporário de XOR na verificação
_CHUNK_BYTES = 1 << 25


# =========================
# Contagem de bits
# =========================

_POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


def _popcount_rows(x: np.ndarray) -> np.ndarray:
    """Soma de bits 1 ao longo do último eixo (palavras uint64)."""
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(x).sum(axis=-1, dtype=np.int64)
    b = np.ascontiguousarray(x).view(np.uint8)
    return _POP8[b].sum(axis=-1)


def _pack(neg: np.ndarray) -> np.ndarray:
    """Linhas booleanas (True = -1) -> (linhas, palavras) uint64."""
    neg = np.atleast_2d(neg)
    packed = np.packbits(neg, axis=1, bitorder="little")
    pad = (-packed.shape[1]) % 8
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    return np.ascontiguousarray(packed).view(np.uint64)


# =========================
# Matriz ±1
# =========================

@dataclass(frozen=True, eq=False)
class PMMatrix:
    n: int
    bits: np.ndarray
    block: int = 0
    report: Optional[VerificationReport] = None

    def __post_init__(self) -> None:
        if self.bits.dtype != np.uint64 or self.bits.shape[0] != self.n:
            raise ShapeMismatch("linhas empacotadas inconsistentes com a ordem")
        if self.block and self.n % self.block:
            raise ShapeMismatch(f"bloco {self.block} não divide a ordem {self.n}")
        self.bits.setflags(write=False)

    @classmethod
    def from_signs(cls, M: np.ndarray, block: int = 0) -> "PMMatrix":
        M = np.asarray(M)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ShapeMismatch("matriz precisa ser quadrada")
        if not np.all(np.abs(M) == 1):
            raise ShapeMismatch("entradas precisam ser ±1")
        return cls(M.shape[0], _pack(M < 0), block)

    @property
    def order(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PMMatrix):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    def neg_rows(self, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
        raw = np.ascontiguousarray(self.bits[start:stop]).view(np.uint8)
        return np.unpackbits(raw, axis=1, bitorder="little")[:, : self.n].astype(bool)

    def signs(self) -> np.ndarray:
        return np.where(self.neg_rows(), -1, 1).astype(np.int8)

    def flipped(self, r: int, c: int) -> "PMMatrix":
        """Cópia com a entrada (r, c) trocada de sinal."""
        bits = self.bits.copy()
        bits.view(np.uint8)[r, c // 8] ^= np.uint8(1 << (c % 8))
        return PMMatrix(self.n, bits, self.block)


# =========================
# Verificação
# =========================

def _check_rows(H: PMMatrix, rows: range, jobs: int = 1) -> Optional[Tuple[int, int, int]]:
    """Primeiro (i, j, discordâncias) com i em rows, j != i e discordâncias != n/2.

    Com jobs > 1 as faixas de linhas vão para um pool de threads; o resultado
    continua sendo o da menor linha com falha.
    """
    if jobs > 1 and len(rows) > jobs:
        corte = -(-len(rows) // jobs)
        faixas = [range(a, min(a + corte, rows.stop)) for a in range(rows.start, rows.stop, corte)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            hits = list(pool.map(lambda r: _check_rows(H, r), faixas))
        return next((h for h in hits if h is not None), None)
    n, w = H.n, H.bits.shape[1]
    alvo = n // 2
    step = max(1, _CHUNK_BYTES // max(1, n * w * 8))
    for i0 in range(rows.start, rows.stop, step):
        i1 = min(i0 + step, rows.stop)
        dis = _popcount_rows(H.bits[i0:i1, None, :] ^ H.bits[None, :, :])
        idx = np.arange(i0, i1)
        bad = dis != alvo
        bad[idx - i0, idx] = False
        hit = np.argwhere(bad)
        if hit.size:
            i, j = int(hit[0][0]) + i0, int(hit[0][1])
            return i, j, int(dis[i - i0, j])
    return None


def _fail(H: PMMatrix, hit: Tuple[int, int, int], level: str) -> VerificationReport:
    i, j, d = hit
    a, b = min(i, j), max(i, j)
    return VerificationReport(ok=False, peak=H.n, rows=(a, b), level=level,
                              message=f"linhas {a} e {b} com produto interno {H.n - 2 * d}")


def _verify_full(H: PMMatrix, jobs: int = 1) -> VerificationReport:
    if H.n > 2 and H.n % 4:
        return VerificationReport(ok=False, peak=H.n, level="full", message=f"ordem {H.n} não é 1, 2 ou múltiplo de 4")
    hit = _check_rows(H, range(H.n), jobs)
    if hit is not None:
        return _fail(H, hit, "full")
    return VerificationReport(ok=True, peak=H.n, level="full", message=f"ok: HHᵀ = {H.n}·I")


def _verify_shortcut(H: PMMatrix, jobs: int = 1) -> VerificationReport:
    v, n = H.block, H.n
    row0 = H.neg_rows(0, v)
    for r in range(1, n // v):
        if not np.array_equal(H.bits[r * v:(r + 1) * v], _pack(np.roll(row0, r * v, axis=1))):
            return VerificationReport(ok=False, peak=n, rows=(0, r * v), level="shortcut",
                                      message=f"bloco-linha {r} não é deslocamento do bloco-linha 0")
    hit = _check_rows(H, range(v), jobs)
    if hit is not None:
        return _fail(H, hit, "shortcut")
    return VerificationReport(ok=True, peak=n, level="shortcut",
                              message=f"ok: bloco-circulante (bloco {v}), primeiro bloco-linha ortogonal")


def verify_hadamard(H: PMMatrix, level: str = "auto", full_max: int = FULL_VERIFY_MAX,
                    jobs: int = 1) -> VerificationReport:
    """Confere HHᵀ = nI exatamente.

    level: "full", "shortcut" (só para bloco-circulantes) ou "auto" (atalho acima de full_max).
    jobs: threads usadas na comparação de linhas.
    """
    if level not in ("auto", "full", "shortcut"):
        raise ValueError(f"nível desconhecido: {level}")
    if level == "auto":
        level = "shortcut" if H.block and H.n > full_max else "full"
    if level == "shortcut":
        if not H.block:
            log.warning("matriz sem estrutura bloco-circulante; usando verificação completa")
            return _verify_full(H, jobs)
        return _verify_shortcut(H, jobs)
    return _verify_full(H, jobs)


def _certify(H: PMMatrix, level: str, full_max: int, crosscheck_max: int, what: str,
             jobs: int = 1) -> PMMatrix:
    rep = verify_hadamard(H, level, full_max, jobs)
    if H.block and H.n <= crosscheck_max:
        outro = _verify_full(H, jobs) if rep.level == "shortcut" else _verify_shortcut(H, jobs)
        if outro.ok != rep.ok:
            raise VerificationFailed(f"{what}: atalho e verificação completa discordam ({rep.message} / {outro.message})")
    if not rep.ok:
        raise VerificationFailed(f"{what} não é Hadamard: {rep.message}")
    log.info("%s: ordem %d verificada (%s)", what, H.n, rep.level)
    return replace(H, report=rep)


# =========================
# Sylvester
# =========================

def sylvester(t: int) -> PMMatrix:
    if t < 0:
        raise ValueError("t precisa ser >= 0")
    H = np.ones((1, 1), dtype=np.int8)
    for _ in range(t):
        H = np.block([[H, H], [H, -H]])
    M = PMMatrix.from_signs(H)
    return replace(M, report=VerificationReport(ok=True, peak=M.n, level="full", message="Sylvester"))


# =========================
# Goethals–Seidel
# =========================

# i^k·j^J em SP_2 trocado por blocos 2×2 de ±1
_S1 = np.array([[1, 1], [1, -1]], dtype=np.int8)
_SI = np.array([[-1, 1], [1, 1]], dtype=np.int8)
_SJ = np.array([[1, 1], [-1, 1]], dtype=np.int8)
_SIJ = np.array([[1, -1], [1, 1]], dtype=np.int8)
SUBSTITUTION = np.array([[_S1, _SI, -_S1, -_SI], [_SJ, _SIJ, -_SJ, -_SIJ]], dtype=np.int8)


def _circulant_exponents(k: np.ndarray) -> np.ndarray:
    n = k.size
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return k[idx]


def goethals_seidel_8n(quad: GcsSet, level: str = "auto", full_max: int = FULL_VERIFY_MAX,
                       jobs: int = 1) -> PMMatrix:
    """Hadamard de ordem 8n a partir de uma quádrupla 4-fase certificada de comprimento n."""
    if not isinstance(quad, GcsSet) or quad.cardinality != 4 or len(set(quad.lengths)) != 1:
        raise NotQuad(f"esperada quádrupla de comprimentos iguais (veio {getattr(quad, 'lengths', quad)})")
    if not quad.certified:
        raise NotCertified("quádrupla sem certificado de complementaridade")
    for idx, s in enumerate(quad):
        if not s.is_unimodular():
            raise NotQuad(f"sequência {idx} tem entradas fora de {{±1, ±i}}")
    n = quad.length
    A, B, C, D = (_circulant_exponents(s.unit_exponents()) for s in quad)
    Bs, Cs, Ds = (_circulant_exponents(flip_conj(s).unit_exponents()) for s in quad.seqs[1:])

    def rj(X: np.ndarray, neg: bool = False) -> Tuple[np.ndarray, int]:
        return (X[:, ::-1] + (2 if neg else 0)) % 4, 1

    a = (A, 0)
    layout = [
        [a, rj(B, True), rj(C, True), rj(D, True)],
        [rj(B), a, rj(Ds, True), rj(Cs)],
        [rj(C), rj(Ds), a, rj(Bs, True)],
        [rj(D), rj(Cs, True), rj(Bs), a],
    ]
    K = np.block([[blk[0] for blk in row] for row in layout])
    J = np.block([[np.full((n, n), blk[1], dtype=np.int64) for blk in row] for row in layout])
    M = SUBSTITUTION[J, K].transpose(0, 2, 1, 3).reshape(8 * n, 8 * n)
    return _certify(PMMatrix.from_signs(M), level, full_max, 0, f"Goethals–Seidel n={n}", jobs)


# =========================
# Bloco-circulante a partir de sequência perfeita
# =========================

def signed_perm_circulant(c: SPSeq) -> np.ndarray:
    """D denso de ordem v·n: bloco (r, s) = c_{(s-r) mod n}."""
    n, v = len(c), c.v
    D = np.zeros((n * v, n * v), dtype=np.int8)
    rows = np.arange(v)
    for r in range(n):
        for s in range(n):
            t = (s - r) % n
            if c.mask[t]:
                D[r * v + rows, s * v + c.images[t]] = c.signs[t]
    return D


def block_circulant_from_perfect(c: SPSeq, H_v: PMMatrix, level: str = "auto",
                                 full_max: int = FULL_VERIFY_MAX,
                                 crosscheck_max: int = CROSSCHECK_MAX, jobs: int = 1) -> PMMatrix:
    """H = D·(I_n ⊗ H_v), bloco-circulante de ordem v·n com bloco v."""
    require_perfect(c)
    if H_v.n != c.v:
        raise NotHadamardSeed(f"semente de ordem {H_v.n}, esperado {c.v}")
    if not verify_hadamard(H_v, "full").ok:
        raise NotHadamardSeed(f"semente de ordem {H_v.n} não é Hadamard")
    n, v = len(c), c.v
    Hd = H_v.signs()
    row0 = np.concatenate([c.signs[t][:, None] * Hd[c.images[t]] for t in range(n)], axis=1) < 0
    bits = np.concatenate([_pack(np.roll(row0, r * v, axis=1)) for r in range(n)], axis=0)
    H = PMMatrix(n * v, bits, block=v)
    return _certify(H, level, full_max, crosscheck_max, f"bloco-circulante n={n} v={v}", jobs)


def hadamard_from_supplementary(out: Thm4Output, level: str = "auto", full_max: int = FULL_VERIFY_MAX,
                                crosscheck_max: int = CROSSCHECK_MAX, jobs: int = 1) -> Tuple[SPSeq, PMMatrix]:
    c = perfect_from_inputs(out)
    H_v = sylvester(c.v.bit_length() - 1)
    return c, block_circulant_from_perfect(c, H_v, level, full_max, crosscheck_max, jobs)


def hadamard_order_from_lengths(pairs: Sequence[Tuple[int, int]],
                                cbs: Sequence[Tuple[int, int, int]] = ()) -> Tuple[int, int]:
    """(ordem, bloco) do Hadamard obtido de k pares (l, m) e d CBS (s1, s2, t)."""
    total = sum(l * m for l, m in pairs) + sum((s1 + s2) * t for s1, s2, t in cbs)
    gamma = 2 * len(pairs) + 4 * len(cbs)
    return (1 << (gamma + 2)) * total, 1 << gamma


# =========================
# Planejador assintótico
# =========================

KAPPA = 2
XI = 40
P_ASYMPTOTIC = KAPPA ** XI
GAMMA0 = 6
MAX_SHIFT = 4

# termos: T = l·m (um par, γ 2), C = (s1+s2)·t (uma CBS, γ 4)
_PATTERNS: Tuple[Tuple[int, Tuple[str, ...]], ...] = (
    (4, ("TT", "C")),
    (6, ("TTT", "TC")),
    (8, ("TTTT", "TTC", "CC")),
)
_TERM_GAMMA = {"T": 2, "C": 4}

WITNESS = "witness"
TRUSTED = "trusted"


@dataclass(frozen=True)
class DigitPlan:
    position: int
    digit: int
    value: int
    gamma: int
    k: Optional[int]
    d: Optional[int]
    pairs: Tuple[Tuple[int, int], ...]
    cbs: Tuple[Tuple[int, int, int], ...]
    scale: int
    provenance: str

    def total(self) -> int:
        return sum(l * m for l, m in self.pairs) + sum((s1 + s2) * t for s1, s2, t in self.cbs)

    def to_dict(self) -> Dict[str, object]:
        return {
            "position": self.position, "digit": self.digit, "value": self.value,
            "gamma": self.gamma, "k": self.k, "d": self.d,
            "pairs": [list(p) for p in self.pairs], "cbs": [list(c) for c in self.cbs],
            "scale": self.scale, "provenance": self.provenance,
        }


@dataclass(frozen=True)
class AsymptoticPlan:
    m: int
    t_bound: int
    P: int
    digits: Tuple[int, ...]
    parts: Tuple[DigitPlan, ...]

    @property
    def gamma(self) -> int:
        return sum(p.gamma for p in self.parts)

    @property
    def gamma_bound(self) -> int:
        r = sum(1 for i, d in enumerate(self.digits) if i and d)
        return 8 + GAMMA0 * r

    @property
    def t(self) -> int:
        """Expoente alcançado: ordem 2^t·m."""
        return self.gamma + 2

    @property
    def order(self) -> int:
        return (1 << self.t) * self.m

    @property
    def block(self) -> int:
        return 1 << self.gamma

    @property
    def explicit(self) -> bool:
        return all(p.provenance == WITNESS for p in self.parts)

    def to_dict(self) -> Dict[str, object]:
        return {
            "m": self.m, "t": self.t, "t_bound": self.t_bound, "P": self.P, "digits": list(self.digits),
            "gamma": self.gamma, "order": self.order, "block": self.block,
            "parts": [p.to_dict() for p in self.parts],
        }


def asymptotic_exponent(m: int) -> int:
    """6·⌊log2(m)/40⌋ + 10."""
    return GAMMA0 * ((m.bit_length() - 1) // XI) + 10


class DigitSearch:
    """Decomposição de um valor em termos T (pares) e C (CBS) com o menor γ."""

    def __init__(self, index: WitnessIndex) -> None:
        self.index = index
        self._suffix: Dict[str, LengthSet] = {}

    @property
    def bound(self) -> int:
        return self.index.bound

    def _term_set(self, kind: str) -> LengthSet:
        if kind == "T":
            return self.index.T
        if "C" not in self._suffix:
            dense = self.index.dense
            self._suffix["C"] = product(self.index.S1, union("B∪2F", dense.B, scale(dense.F, 2)), "C")
        return self._suffix["C"]

    def _set(self, pattern: str) -> LengthSet:
        if len(pattern) == 1:
            return self._term_set(pattern)
        if pattern not in self._suffix:
            self._suffix[pattern] = sumset(self._term_set(pattern[0]), self._set(pattern[1:]))
        return self._suffix[pattern]

    def _factor_C(self, x: int) -> Tuple[int, int, int]:
        dense = self.index.dense
        for t in self.index.s1_divisors(x):
            y = x // t
            if y % 2 and y in dense.B:
                b = (y - 1) // 2
                return (b + 1, b, t)
            if y % 2 == 0 and y // 2 in dense.F:
                return (y // 2, y // 2, t)
        raise ValueError(f"{x} não está em S1·(B ∪ 2F)")

    def decompose(self, value: int, pattern: str) -> Optional[Tuple[Tuple[Tuple[int, int], ...], Tuple[Tuple[int, int, int], ...]]]:
        if value > self.bound or value not in self._set(pattern):
            return None
        terms: List[Tuple[str, int]] = []
        for pos in range(len(pattern) - 1):
            x, value = WitnessIndex.split_sum(self._term_set(pattern[pos]), self._set(pattern[pos + 1:]), value)
            terms.append((pattern[pos], x))
        terms.append((pattern[-1], value))
        pairs = tuple(self.index.factor_T(x) for kind, x in terms if kind == "T" and x)
        cbs = tuple(self._factor_C(x) for kind, x in terms if kind == "C" and x)
        return pairs, cbs

    def best(self, value: int, max_gamma: int = 8):
        """(γ, pares, cbs) de menor γ efetivo entre os padrões até max_gamma."""
        melhor = None
        for gamma, patterns in _PATTERNS:
            if gamma > max_gamma:
                break
            for pat in patterns:
                w = self.decompose(value, pat)
                if w is None:
                    continue
                g = 2 * len(w[0]) + 4 * len(w[1])
                if melhor is None or g < melhor[0]:
                    melhor = (g, w[0], w[1])
            if melhor is not None and melhor[0] <= gamma:
                break
        return melhor


def _plan_digit(search: Optional[DigitSearch], i: int, digit: int, allow_trusted: bool) -> DigitPlan:
    max_gamma = 8 if i == 0 else GAMMA0
    shifts = [0] if i == 0 else range(MAX_SHIFT + 1)
    melhor = None
    if search is not None:
        for j in shifts:
            value = digit << j
            if value > search.bound:
                break
            w = search.best(value, max_gamma)
            if w is not None and (melhor is None or w[0] < melhor[0][0]):
                melhor = (w, j)
    if melhor is not None:
        (g, pairs, cbs), j = melhor
        part = DigitPlan(i, digit, digit << j, g, len(pairs), len(cbs), pairs, cbs,
                         1 << (i * XI - j), WITNESS)
        if part.total() * part.scale != digit * P_ASYMPTOTIC ** i:
            raise PlanArithmeticMismatch(f"dígito {i}: termos somam {part.total()}·{part.scale}")
        return part
    if not allow_trusted:
        if search is not None and digit <= search.bound:
            raise DigitNotCovered(digit, i)
        raise ThresholdUnavailable(f"dígito {digit} (posição {i}) acima do alcance verificado e limiares de confiança desligados")
    log.warning("dígito %d (posição %d): usando limiar de confiança γ=%d", digit, i, max_gamma)
    return DigitPlan(i, digit, digit, max_gamma, None, None, (), (), 1 << (i * XI), TRUSTED)


def asymptotic_plan(m: int, witness_bound: int = 10**6, allow_trusted: bool = True,
                    base_lengths: Sequence[int] = RESTRICTED_BASE_LENGTHS,
                    memory_cap: int = DEFAULT_MEMORY_CAP) -> AsymptoticPlan:
    """Plano para uma Hadamard de ordem 2^t·m (m ímpar): dígitos na base 2^40 e termos por dígito."""
    if m < 1 or m % 2 == 0:
        raise ValueError("m precisa ser ímpar e >= 1")
    digits: List[int] = []
    x = m
    while x:
        x, r = divmod(x, P_ASYMPTOTIC)
        digits.append(r)

    alvo = max((d << (0 if i == 0 else MAX_SHIFT)) for i, d in enumerate(digits) if d)
    bound = min(witness_bound, alvo)
    search = DigitSearch(WitnessIndex(bound, base_lengths, memory_cap)) if min(d for d in digits if d) <= bound else None

    parts = tuple(_plan_digit(search, i, d, allow_trusted) for i, d in enumerate(digits) if d)
    if sum(p.digit * P_ASYMPTOTIC ** p.position for p in parts) != m:
        raise PlanArithmeticMismatch("dígitos não reconstroem m")
    plan = AsymptoticPlan(m, asymptotic_exponent(m), P_ASYMPTOTIC, tuple(digits), parts)
    if plan.gamma > plan.gamma_bound or plan.t > plan.t_bound:
        raise PlanArithmeticMismatch(
            f"m={m}: γ={plan.gamma} dá t={plan.t}, acima da cota t <= {plan.t_bound} (γ <= {plan.gamma_bound})")
    log.info("m=%d: t=%d (cota %d), γ=%d", m, plan.t, plan.t_bound, plan.gamma)
    return plan


def plan_inputs(plan: AsymptoticPlan, corpus: Optional[Mapping[int, GcsSet]] = None,
                base_lengths: Sequence[int] = RESTRICTED_BASE_LENGTHS) -> Thm4Output:
    """Realiza os pares e CBS do plano e monta as sequências suplementares."""
    if not plan.explicit:
        raise ThresholdUnavailable("plano com dígitos de confiança não pode ser construído")
    planner = Planner(max(max((max(s1, s2) for p in plan.parts for s1, s2, _ in p.cbs), default=1), 1),
                      base_lengths)
    pairs, cbs_list = [], []
    for part in plan.parts:
        for l, m in part.pairs:
            pairs.append((realize(plan_pair(l), corpus), realize(plan_pair(m * part.scale), corpus)))
        for s1, s2, t in part.cbs:
            node = planner.plan_cbs(s2) if s1 == s2 + 1 else planner.plan_f(s1)
            G = realize(plan_pair(t * part.scale), corpus)
            cbs_list.append((realize(node, corpus), G, G))
    return thm4_sequences(pairs, cbs_list)


def build_from_plan(plan: AsymptoticPlan, corpus: Optional[Mapping[int, GcsSet]] = None,
                    max_order: int = 1 << 16, level: str = "auto", full_max: int = FULL_VERIFY_MAX,
                    crosscheck_max: int = CROSSCHECK_MAX,
                    base_lengths: Sequence[int] = RESTRICTED_BASE_LENGTHS,
                    jobs: int = 1) -> Optional[PMMatrix]:
    """Constrói a matriz do plano se a ordem cabe em max_order; senão devolve None."""
    if plan.order > max_order:
        log.info("ordem %d acima de %d: só o plano", plan.order, max_order)
        return None
    out = plan_inputs(plan, corpus, base_lengths)
    _, H = hadamard_from_supplementary(out, level, full_max, crosscheck_max, jobs)
    if H.n != plan.order:
        raise PlanArithmeticMismatch(f"ordem construída {H.n} != planejada {plan.order}")
    return H


# =========================
# Curvas de expoente
# =========================

CURVE_HEADER = ("log2m", "t_1976", "t_1995", "t_1997", "t_2012", "t_novo", "t_conjectura")


def _log2(x: float) -> float:
    return math.log2(x) if x > 0 else math.nan


def asymptotic_curves(log2_points: Sequence[float]) -> List[Tuple[float, ...]]:
    """Expoentes t(m) das construções conhecidas, sem piso, com m = 2^x."""
    rows = []
    for x in log2_points:
        m = 2.0 ** x
        rows.append((
            float(x),
            2 * _log2(m - 3) + 1,
            (4 / 6) * _log2((m - 1) / 2) + 6,
            (4 / 10) * _log2(m - 1) + 6,
            (6 / 26) * _log2((m - 1) / 2) + 11,
            (6 / 40) * _log2(m) + 10,
            2.0,
        ))
    return rows


@lru_cache(maxsize=None)
def curve_points(lo: int = 2, hi: int = 200, step: int = 2) -> Tuple[float, ...]:
    return tuple(float(x) for x in range(lo, hi + 1, step))
