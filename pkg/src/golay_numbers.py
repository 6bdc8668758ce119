"""
golay_numbers.py — Conjuntos de comprimentos viáveis.

  S1   = {0} ∪ números de Golay 4-fase
  Sk   = S1 · (S_{k-1} + S_{k-1})
  B, E, F (sequências base complexas) e as versões densas Sk^D
  {2,10,26}·S1 (fatores de escala)

Os conjuntos até N são vetores numpy bool de tamanho N+1; a posição 0 guarda
se o zero pertence ao conjunto.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from erros import BudgetExceeded, CorpusRequired

log = logging.getLogger(__name__)

TWO_PHASE_SEEDS = (2, 10, 26)
# b com CBS(b+1, b) publicado (sequências base até 38)
LITERATURE_BASE_LENGTHS: Tuple[int, ...] = tuple(range(1, 39))
# sem corpus: só a CBS(8,7) embutida além de 2·S1+1
RESTRICTED_BASE_LENGTHS: Tuple[int, ...] = (7,)

DEFAULT_MEMORY_CAP = 2 << 30
# cópias simultâneas de um vetor de N+1 bytes durante os construtores
_ARRAYS_IN_FLIGHT = 12

PAIRWISE_MAX = 1 << 25
SHIFT_MAX = 64
HYBRID_DENSE_SHIFTS = 256


# =========================
# Expoentes
# =========================

@dataclass(frozen=True)
class GolayExponents:
    a: int
    b: int
    c: int
    d: int
    e: int
    u: int

    @property
    def value(self) -> int:
        return 2 ** (self.a + self.u) * 3 ** self.b * 5 ** self.c * 11 ** self.d * 13 ** self.e

    def as_tuple(self) -> Tuple[int, int, int, int, int, int]:
        return (self.a, self.b, self.c, self.d, self.e, self.u)


@dataclass(frozen=True)
class ProductMembership:
    exponents: GolayExponents
    k: int
    witness: Tuple[int, ...]


def _factor(n: int) -> Optional[Tuple[int, int, int, int, int]]:
    exps = []
    for p in (2, 3, 5, 11, 13):
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        exps.append(k)
    if n != 1:
        return None
    return tuple(exps)  # type: ignore[return-value]


def _split_two(x: int, b: int, c: int, d: int, e: int, k: int) -> Optional[GolayExponents]:
    # a+u = x fixo; a+2u = x+u cresce com u, então u máximo basta
    u = min(x, c + e)
    a = x - u
    if b + c + d + e <= a + 2 * u + k:
        return GolayExponents(a, b, c, d, e, u)
    return None


def golay_membership(n: int) -> Optional[GolayExponents]:
    if n < 1:
        raise ValueError("n precisa ser >= 1")
    f = _factor(n)
    if f is None:
        return None
    return _split_two(*f, k=1)


def is_golay(n: int) -> bool:
    return n >= 1 and golay_membership(n) is not None


def _divisors(n: int) -> List[int]:
    f = _factor(n)
    if f is None:
        return [d for d in range(1, n + 1) if n % d == 0]
    divs = [1]
    for p, k in zip((2, 3, 5, 11, 13), f):
        divs = [d * p ** j for d in divs for j in range(k + 1)]
    return sorted(divs)


def golay_product_membership(n: int, k: int) -> Optional[ProductMembership]:
    """Decompõe n em k números de Golay (fator 1 permitido)."""
    if n < 1 or k < 1:
        raise ValueError("n e k precisam ser >= 1")
    f = _factor(n)
    if f is None:
        return None
    exps = _split_two(*f, k=k)
    if exps is None:
        return None

    golay_divs = [d for d in _divisors(n) if is_golay(d)]

    @lru_cache(maxsize=None)
    def busca(m: int, restantes: int, maior: int) -> Optional[Tuple[int, ...]]:
        if restantes == 1:
            return (m,) if is_golay(m) and m <= maior else None
        for d in reversed(golay_divs):
            if d > maior or m % d:
                continue
            resto = busca(m // d, restantes - 1, d)
            if resto is not None:
                return (d,) + resto
        return None

    w = busca(n, k, n)
    if w is None:
        return None
    return ProductMembership(exps, k, w)


def golay_numbers_upto(N: int) -> List[int]:
    """Números de Golay 4-fase em [1, N], ordenados (inteiros Python, sem teto de memória)."""
    out: List[int] = []
    if N < 1:
        return out
    e = 0
    while 13 ** e <= N:
        d = 0
        while 13 ** e * 11 ** d <= N:
            c = 0
            while 13 ** e * 11 ** d * 5 ** c <= N:
                b = 0
                while 13 ** e * 11 ** d * 5 ** c * 3 ** b <= N:
                    base = 13 ** e * 11 ** d * 5 ** c * 3 ** b
                    x = 0
                    while base << x <= N:
                        if _split_two(x, b, c, d, e, 1) is not None:
                            out.append(base << x)
                        x += 1
                    b += 1
                c += 1
            d += 1
        e += 1
    out.sort()
    return out


def under_s_upto(N: int) -> List[int]:
    """{2,10,26}·S1 ∩ [1, N]."""
    g = golay_numbers_upto(N // 2)
    return sorted({s * x for s in TWO_PHASE_SEEDS for x in g if s * x <= N})


def choose_P(N_verified: int) -> int:
    if N_verified < 2:
        raise ValueError("N_verified precisa ser >= 2")
    return under_s_upto(N_verified + 1)[-1]


# =========================
# Conjuntos em bits
# =========================

def check_budget(N: int, memory_cap: int, what: str = "conjunto") -> None:
    needed = (N + 1) * _ARRAYS_IN_FLIGHT
    if needed > memory_cap:
        raise BudgetExceeded(needed, memory_cap, what)


@dataclass(frozen=True, eq=False)
class LengthSet:
    kind: str
    bound: int
    bits: np.ndarray

    def __post_init__(self) -> None:
        if self.bits.dtype != np.bool_ or self.bits.size != self.bound + 1:
            raise ValueError("bits precisa ser bool de tamanho bound+1")
        self.bits.setflags(write=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LengthSet):
            return NotImplemented
        return self.bound == other.bound and np.array_equal(self.bits, other.bits)

    def __contains__(self, n: int) -> bool:
        return 0 <= n <= self.bound and bool(self.bits[n])

    @property
    def has_zero(self) -> bool:
        return bool(self.bits[0])

    def elements(self) -> np.ndarray:
        """Elementos não nulos, crescentes."""
        return np.flatnonzero(self.bits[1:]) + 1

    def count(self, upto: Optional[int] = None) -> int:
        hi = self.bound if upto is None else min(upto, self.bound)
        return int(np.count_nonzero(self.bits[1:hi + 1]))

    def first_gap(self) -> Optional[int]:
        miss = np.flatnonzero(~self.bits[1:])
        return int(miss[0]) + 1 if miss.size else None

    def is_subset(self, other: "LengthSet") -> bool:
        n = min(self.bound, other.bound)
        return not bool(np.any(self.bits[1:n + 1] & ~other.bits[1:n + 1]))

    def is_nonempty(self) -> bool:
        return bool(self.bits.any())

    def relabel(self, kind: str) -> "LengthSet":
        return LengthSet(kind, self.bound, self.bits)


def _new(N: int) -> np.ndarray:
    return np.zeros(N + 1, dtype=bool)


def _same_bound(*sets: LengthSet) -> int:
    N = sets[0].bound
    if any(s.bound != N for s in sets):
        raise ValueError("conjuntos com limites diferentes")
    return N


def from_elements(kind: str, N: int, elems: Iterable[int], has_zero: bool) -> LengthSet:
    bits = _new(N)
    arr = np.fromiter((x for x in elems if 1 <= x <= N), dtype=np.int64)
    bits[arr] = True
    bits[0] = has_zero
    return LengthSet(kind, N, bits)


def union(kind: str, *sets: LengthSet) -> LengthSet:
    N = _same_bound(*sets)
    bits = _new(N)
    for s in sets:
        bits |= s.bits
    return LengthSet(kind, N, bits)


def scale(X: LengthSet, k: int, kind: Optional[str] = None) -> LengthSet:
    """{k·x | x ∈ X} ∩ [0, N]."""
    N = X.bound
    bits = _new(N)
    m = N // k
    bits[0: k * m + 1: k] = X.bits[: m + 1]
    return LengthSet(kind or f"{k}·{X.kind}", N, bits)


def product(A: LengthSet, B: LengthSet, kind: Optional[str] = None) -> LengthSet:
    """{a·b} ∩ [0, N] por dilatação: todo par com a·b <= N tem um fator <= √N."""
    N = _same_bound(A, B)
    bits = _new(N)
    r = math.isqrt(N)
    for X, Y in ((A, B), (B, A)):
        for s in X.elements().tolist():
            if s > r:
                break
            m = N // s
            bits[0: s * m + 1: s] |= Y.bits[: m + 1]
    bits[0] = (A.has_zero and B.is_nonempty()) or (B.has_zero and A.is_nonempty())
    return LengthSet(kind or f"{A.kind}·{B.kind}", N, bits)


def _pairwise_sum(bits: np.ndarray, xa: np.ndarray, xb: np.ndarray, N: int) -> None:
    chunk = max(1, (1 << 22) // max(1, xb.size))
    for i in range(0, xa.size, chunk):
        s = (xa[i:i + chunk, None] + xb[None, :]).ravel()
        bits[s[s <= N]] = True


def sumset(A: LengthSet, B: LengthSet, kind: Optional[str] = None) -> LengthSet:
    """{a+b} ∩ [0, N].

    Estratégias (mesma saída, a união é a mesma):
      - poucos pares: soma explícita em blocos
      - conjunto esparso: OR deslocado pelo conjunto mais esparso
      - ambos densos: poucos deslocamentos densos e depois só os índices ainda descobertos
    """
    N = _same_bound(A, B)
    bits = _new(N)
    if A.has_zero:
        bits |= B.bits
    if B.has_zero:
        bits |= A.bits

    xa, xb = A.elements(), B.elements()
    ybits = B.bits
    if xa.size > xb.size:
        xa, xb = xb, xa
        ybits = A.bits
    if xa.size == 0:
        return LengthSet(kind or f"{A.kind}+{B.kind}", N, bits)

    if xa.size * xb.size <= PAIRWISE_MAX:
        _pairwise_sum(bits, xa, xb, N)
    elif xa.size <= SHIFT_MAX:
        for a in xa.tolist():
            if a >= N:
                break
            bits[a + 1:] |= ybits[1: N + 1 - a]
    else:
        k = min(HYBRID_DENSE_SHIFTS, xa.size)
        for a in xa[:k].tolist():
            if a >= N:
                break
            bits[a + 1:] |= ybits[1: N + 1 - a]
        todo = np.flatnonzero(~bits[1:]) + 1
        log.debug("sumset %s+%s: %d índices após fase densa", A.kind, B.kind, todo.size)
        for a in xa[k:].tolist():
            if todo.size == 0 or a >= todo[-1]:
                break
            j = int(np.searchsorted(todo, a, side="right"))
            cand = todo[j:]
            hit = ybits[cand - a]
            if hit.any():
                bits[cand[hit]] = True
                todo = np.concatenate([todo[:j], cand[~hit]])
    return LengthSet(kind or f"{A.kind}+{B.kind}", N, bits)


# =========================
# Construtores
# =========================

def enumerate_S1(N: int, memory_cap: int = DEFAULT_MEMORY_CAP) -> LengthSet:
    if N < 1:
        raise ValueError("N precisa ser >= 1")
    check_budget(N, memory_cap, "S1")
    return from_elements("S1", N, golay_numbers_upto(N), has_zero=True)


def under_s_set(N: int, memory_cap: int = DEFAULT_MEMORY_CAP) -> LengthSet:
    check_budget(N, memory_cap, "underS")
    return from_elements("underS", N, under_s_upto(N), has_zero=False)


def build_B(S1: LengthSet, base_lengths: Sequence[int] = LITERATURE_BASE_LENGTHS) -> LengthSet:
    """B = {2b+1 | b em base_lengths} ∪ (2·S1 + 1); 1 ∈ B pois 0 ∈ S1."""
    N = S1.bound
    bits = _new(N)
    g = np.concatenate([[0], S1.elements()])
    odd = 2 * g + 1
    bits[odd[odd <= N]] = True
    for b in base_lengths:
        if 2 * b + 1 <= N:
            bits[2 * b + 1] = True
    return LengthSet("B", N, bits)


@dataclass(frozen=True)
class DenseSets:
    B: LengthSet
    E: LengthSet
    F: LengthSet
    rounds: int


def build_dense_sets(N: int, base_lengths: Sequence[int] = LITERATURE_BASE_LENGTHS,
                     memory_cap: int = DEFAULT_MEMORY_CAP, S1: Optional[LengthSet] = None) -> DenseSets:
    check_budget(N, memory_cap, "B/E/F")
    S1 = S1 if S1 is not None else enumerate_S1(N, memory_cap)
    B = build_B(S1, base_lengths)
    T = product(S1, S1, "S1²")
    E = union("E",
              B,
              scale(product(S1, B), 2),
              scale(sumset(T, T), 2))
    E = _drop_zero(E)
    F = _drop_zero(product(E, E, "F"))

    rounds = 0
    while True:
        rounds += 1
        novo = _drop_zero(union("E", E, scale(product(S1, F), 4)))
        if novo == E:
            break
        E = novo
        F = _drop_zero(product(E, E, "F"))
    log.info("B/E/F até %d: |B|=%d |E|=%d |F|=%d (%d rodadas)", N, B.count(), E.count(), F.count(), rounds)
    return DenseSets(B, E, F, rounds)


def _drop_zero(X: LengthSet) -> LengthSet:
    if not X.has_zero:
        return X
    bits = X.bits.copy()
    bits[0] = False
    return LengthSet(X.kind, X.bound, bits)


def dense_S2(S1: LengthSet, S2: LengthSet, dense: DenseSets) -> LengthSet:
    """S2^D = S2 ∪ F ∪ S1·(B ∪ 2F)."""
    cbs_sums = union("B∪2F", dense.B, scale(dense.F, 2))
    return union("S2D", S2, dense.F, product(S1, cbs_sums))


def build_Sk(N: int, k: int, dense: bool = False,
             base_lengths: Sequence[int] = LITERATURE_BASE_LENGTHS,
             memory_cap: int = DEFAULT_MEMORY_CAP) -> LengthSet:
    if k < 1:
        raise ValueError("k precisa ser >= 1")
    check_budget(N, memory_cap, f"S{k}")
    S1 = enumerate_S1(N, memory_cap)
    S = S1
    for j in range(2, k + 1):
        S = product(S1, sumset(S, S), f"S{j}")
        if j == 2 and dense:
            S = dense_S2(S1, S, build_dense_sets(N, base_lengths, memory_cap, S1))
    if dense and k >= 2:
        return S.relabel(f"S{k}D")
    return S.relabel(f"S{k}")


# =========================
# Densidade
# =========================

def sample_points(N: int, samples: int) -> List[int]:
    pts = np.unique(np.rint(np.geomspace(1, N, num=max(2, samples))).astype(np.int64))
    return [int(p) for p in pts if 1 <= p <= N]


def density_rows(S: LengthSet, samples: int = 50) -> List[Tuple[int, int, float]]:
    """Linhas (n, ρ(n), ρ(n)/n) nos pontos de amostragem."""
    acc = np.cumsum(S.bits[1:], dtype=np.int64)
    rows = []
    for n in sample_points(S.bound, samples):
        rho = int(acc[n - 1])
        rows.append((n, rho, rho / n))
    return rows


# =========================
# Tabela b (representações Σ l·m + Σ (s1+s2)·t)
# =========================

@dataclass(frozen=True)
class BValue:
    gamma: int
    i: int
    b: int
    restricted: bool = False

    @property
    def label(self) -> str:
        return "restricted-B" if self.restricted else "corpus"


GAMMAS = (4, 6, 8)


def representable_set(gamma: int, N: int, base_lengths: Sequence[int],
                      memory_cap: int = DEFAULT_MEMORY_CAP) -> LengthSet:
    """Somas com k pares (termos l·m) e d CBS (termos (s1+s2)·t), 2k+4d = gamma."""
    if gamma not in GAMMAS:
        raise ValueError(f"gamma precisa estar em {GAMMAS}")
    S1 = enumerate_S1(N, memory_cap)
    T = product(S1, S1, "GG")
    dense = build_dense_sets(N, base_lengths, memory_cap, S1)
    C = product(S1, union("B∪2F", dense.B, scale(dense.F, 2)), "CBS")
    TT = sumset(T, T)
    if gamma == 4:
        return union("R4", TT, C)
    TTT = sumset(TT, T)
    if gamma == 6:
        return union("R6", TTT, sumset(T, C))
    return union("R8", sumset(TTT, T), sumset(TT, C), sumset(C, C))


def compute_b_table(gamma: int, i: int, limit: int,
                    base_lengths: Optional[Sequence[int]] = None,
                    strict: bool = False,
                    memory_cap: int = DEFAULT_MEMORY_CAP) -> BValue:
    """Maior b <= limit com N·2^i representável para todo 1 <= N <= b."""
    restricted = base_lengths is None
    if restricted:
        if strict:
            raise CorpusRequired("tabela b exige o corpus de sequências base (use --corpus)")
        log.warning("corpus ausente: usando B restrito (2·S1+1 e CBS(8,7))")
        base_lengths = RESTRICTED_BASE_LENGTHS
    step = 1 << i
    R = representable_set(gamma, limit * step, base_lengths, memory_cap)
    alvo = R.bits[step: limit * step + 1: step]
    miss = np.flatnonzero(~alvo)
    b = int(miss[0]) if miss.size else limit
    return BValue(gamma, i, b, restricted)


# =========================
# Testemunhas
# =========================

class WitnessIndex:
    """Decomposições explícitas dos comprimentos de S2, S2^D, S3, E e F.

    As buscas são crescentes, logo a testemunha devolvida é a lexicograficamente menor.
    """

    def __init__(self, bound: int, base_lengths: Sequence[int] = RESTRICTED_BASE_LENGTHS,
                 memory_cap: int = DEFAULT_MEMORY_CAP) -> None:
        check_budget(bound, memory_cap, "índice de testemunhas")
        self.bound = bound
        self.base_lengths = tuple(sorted(set(base_lengths)))
        self.memory_cap = memory_cap

    @cached_property
    def S1(self) -> LengthSet:
        return enumerate_S1(self.bound, self.memory_cap)

    @cached_property
    def _s1_list(self) -> List[int]:
        return self.S1.elements().tolist()

    @cached_property
    def T(self) -> LengthSet:
        return product(self.S1, self.S1, "S1²")

    @cached_property
    def dense(self) -> DenseSets:
        return build_dense_sets(self.bound, self.base_lengths, self.memory_cap, self.S1)

    @cached_property
    def S2(self) -> LengthSet:
        return product(self.S1, sumset(self.S1, self.S1), "S2")

    @cached_property
    def S2D(self) -> LengthSet:
        return dense_S2(self.S1, self.S2, self.dense)

    def S3(self, dense: bool) -> LengthSet:
        S2 = self.S2D if dense else self.S2
        return product(self.S1, sumset(S2, S2), "S3D" if dense else "S3")

    def _check(self, n: int) -> None:
        if n > self.bound:
            raise ValueError(f"{n} acima do limite do índice ({self.bound})")

    @staticmethod
    def split_sum(X: LengthSet, Y: LengthSet, m: int) -> Optional[Tuple[int, int]]:
        """Menor x com x ∈ X, m-x ∈ Y (zero permitido pelas flags)."""
        hit = np.flatnonzero(X.bits[: m + 1] & Y.bits[m::-1])
        if hit.size == 0:
            return None
        x = int(hit[0])
        return x, m - x

    def s1_divisors(self, n: int) -> List[int]:
        return [s for s in self._s1_list if s <= n and n % s == 0]

    # ---- S2 ----

    def s2(self, n: int) -> Optional[Tuple[int, int, int]]:
        """(s, t, u) com n = s·(t+u)."""
        self._check(n)
        for s in self.s1_divisors(n):
            tu = self.split_sum(self.S1, self.S1, n // s)
            if tu is not None:
                return (s, tu[0], tu[1])
        return None

    def s2_dense(self, n: int) -> Optional[Tuple]:
        """("plain", s, t, u) | ("F", f) | ("SB", s, b) | ("SF", s, f)."""
        w = self.s2(n)
        if w is not None:
            return ("plain",) + w
        if n in self.dense.F:
            return ("F", n)
        for s in self.s1_divisors(n):
            m = n // s
            if m in self.dense.B and m % 2 == 1:
                return ("SB", s, (m - 1) // 2)
            if m % 2 == 0 and m // 2 in self.dense.F:
                return ("SF", s, m // 2)
        return None

    # ---- S3 ----

    def s3(self, n: int, dense: bool = True) -> Optional[Tuple[int, int, int]]:
        """(s, x, y) com n = s·(x+y), x, y ∈ S2 (ou S2^D)."""
        self._check(n)
        S2 = self.S2D if dense else self.S2
        for s in self.s1_divisors(n):
            xy = self.split_sum(S2, S2, n // s)
            if xy is not None:
                return (s, xy[0], xy[1])
        return None

    # ---- B / E / F ----

    def b_source(self, b: int) -> Optional[str]:
        """Origem da CBS(b+1, b): "pair" (b ∈ S1, inclui 0) ou "base"."""
        if b == 0 or b in self.S1:
            return "pair"
        if b in self.base_lengths:
            return "base"
        return None

    def e_witness(self, e: int) -> Optional[Tuple]:
        """("inter", b) | ("cbs", t, b) | ("pairs", s1, t1, s2, t2) | ("F", t, f)."""
        self._check(e)
        if e not in self.dense.E:
            return None
        if e % 2 == 1 and self.b_source((e - 1) // 2) is not None:
            return ("inter", (e - 1) // 2)
        if e % 2 == 0:
            h = e // 2
            for t in self.s1_divisors(h):
                m = h // t
                if m % 2 == 1 and self.b_source((m - 1) // 2) is not None:
                    return ("cbs", t, (m - 1) // 2)
            xy = self.split_sum(self.T, self.T, h)
            if xy is not None:
                s1, t1 = self.factor_T(xy[0])
                s2, t2 = self.factor_T(xy[1])
                return ("pairs", s1, t1, s2, t2)
        if e % 4 == 0:
            q = e // 4
            for t in self.s1_divisors(q):
                if q // t in self.dense.F:
                    return ("F", t, q // t)
        return None

    def factor_T(self, x: int) -> Tuple[int, int]:
        if x == 0:
            return (0, 1)
        for s in self.s1_divisors(x):
            if x // s in self.S1:
                return (s, x // s)
        raise ValueError(f"{x} não está em S1·S1")

    def f_witness(self, f: int) -> Optional[Tuple[int, int]]:
        """(e1, e2) com f = e1·e2, ambos em E."""
        self._check(f)
        if f not in self.dense.F:
            return None
        for e1 in self.dense.E.elements().tolist():
            if e1 * e1 > f:
                break
            if f % e1 == 0 and (f // e1) in self.dense.E:
                return (e1, f // e1)
        return None


def coverage(S: LengthSet) -> Tuple[Optional[int], int]:
    return S.first_gap(), S.count()
