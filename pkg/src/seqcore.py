"""
seqcore.py — Álgebra exata de sequências 4-fase (inteiros de Gauss).

Tudo aqui é inteiro: sequências guardam a parte real e a imaginária em dois
vetores numpy int64. Correlações aperiódicas saem de uma multiplicação de
polinômios exata:

    poly(a) · poly(flip_conj(b))  ->  coeficiente m  =  R_ab(m - (n-1))

com R_ab(τ) = Σ_i a_i · conj(b_{i-τ}).

Multiplicação de polinômios:
  - pequena: np.convolve em int64
  - grande : substituição de Kronecker em inteiros do Python (sem ponto flutuante)
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from erros import LengthMismatch, NotPolyphase

log = logging.getLogger(__name__)

APERIODIC = "aperiodic"
PERIODIC = "periodic"

# Acima deste produto de comprimentos, troca np.convolve pela substituição de Kronecker.
CONVOLVE_MAX_WORK = 1 << 22


# =========================
# Inteiro de Gauss
# =========================

@dataclass(frozen=True)
class GaussInt:
    re: int = 0
    im: int = 0

    def __add__(self, o: "GaussInt") -> "GaussInt":
        return GaussInt(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "GaussInt") -> "GaussInt":
        return GaussInt(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "GaussInt":
        return GaussInt(-self.re, -self.im)

    def __mul__(self, o: Union["GaussInt", int]) -> "GaussInt":
        if isinstance(o, int):
            return GaussInt(self.re * o, self.im * o)
        return GaussInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    @classmethod
    def coerce(cls, v: Union["GaussInt", int, complex, str]) -> "GaussInt":
        if isinstance(v, GaussInt):
            return v
        if isinstance(v, str):
            return cls.parse(v)
        if isinstance(v, (int, np.integer)):
            return cls(int(v), 0)
        if isinstance(v, complex):
            re, im = int(v.real), int(v.imag)
            if re != v.real or im != v.imag:
                raise ValueError(f"Entrada não inteira: {v!r}")
            return cls(re, im)
        raise TypeError(f"Tipo sem conversão para GaussInt: {type(v).__name__}")

    @classmethod
    def parse(cls, token: str) -> "GaussInt":
        """Aceita só os símbolos 4-fase: 0, 1, -1, i, -i (e +1, +i)."""
        t = token.strip().lstrip("+")
        if t not in _TOKENS:
            raise ValueError(f"símbolo inválido {token.strip()!r} (use 0, 1, -1, i, -i)")
        return _TOKENS[t]

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return {1: "i", -1: "-i"}.get(self.im, f"{self.im}i")
        return f"{self.re}{self.im:+d}i"


_TOKENS = {
    "0": GaussInt(0, 0), "-0": GaussInt(0, 0),
    "1": GaussInt(1, 0), "-1": GaussInt(-1, 0),
    "i": GaussInt(0, 1), "-i": GaussInt(0, -1),
}

# expoente k de i^k -> (re, im)
_UNIT_RE = np.array([1, 0, -1, 0], dtype=np.int64)
_UNIT_IM = np.array([0, 1, 0, -1], dtype=np.int64)


def unit(k: int) -> GaussInt:
    k %= 4
    return GaussInt(int(_UNIT_RE[k]), int(_UNIT_IM[k]))


# =========================
# Sequência
# =========================

def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.int64).copy()
    out.setflags(write=False)
    return out


class QSeq:
    """Sequência finita de inteiros de Gauss (imutável)."""

    __slots__ = ("re", "im")

    def __init__(self, re: Iterable[int] | np.ndarray, im: Iterable[int] | np.ndarray | None = None) -> None:
        r = _frozen(np.asarray(list(re) if not isinstance(re, np.ndarray) else re, dtype=np.int64).reshape(-1))
        if im is None:
            i = np.zeros_like(r)
        else:
            i = np.asarray(list(im) if not isinstance(im, np.ndarray) else im, dtype=np.int64).reshape(-1)
        if i.shape != r.shape:
            raise LengthMismatch(f"partes real/imaginária com tamanhos {r.size} e {i.size}")
        object.__setattr__(self, "re", r)
        object.__setattr__(self, "im", _frozen(i))

    def __setattr__(self, *_: object) -> None:
        raise AttributeError("QSeq é imutável")

    # ---- construtores ----

    @classmethod
    def from_values(cls, values: Iterable[Union[GaussInt, int, complex, str]]) -> "QSeq":
        g = [GaussInt.coerce(v) for v in values]
        return cls([x.re for x in g], [x.im for x in g])

    @classmethod
    def zeros(cls, n: int) -> "QSeq":
        return cls(np.zeros(n, dtype=np.int64))

    @classmethod
    def empty(cls) -> "QSeq":
        return cls.zeros(0)

    @classmethod
    def from_exponents(cls, exps: Sequence[int] | np.ndarray) -> "QSeq":
        k = np.asarray(exps, dtype=np.int64) % 4
        return cls(_UNIT_RE[k], _UNIT_IM[k])

    # ---- acesso ----

    def __len__(self) -> int:
        return int(self.re.size)

    def __getitem__(self, i: int) -> GaussInt:
        return GaussInt(int(self.re[i]), int(self.im[i]))

    def __iter__(self) -> Iterator[GaussInt]:
        for r, i in zip(self.re.tolist(), self.im.tolist()):
            yield GaussInt(r, i)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeq):
            return NotImplemented
        return np.array_equal(self.re, other.re) and np.array_equal(self.im, other.im)

    def __hash__(self) -> int:
        return hash((self.re.tobytes(), self.im.tobytes()))

    def __repr__(self) -> str:
        return f"QSeq([{', '.join(self.tokens())}])"

    def tokens(self) -> List[str]:
        return [str(g) for g in self]

    # ---- aritmética ----

    def _same_len(self, o: "QSeq") -> None:
        if len(self) != len(o):
            raise LengthMismatch(f"comprimentos {len(self)} e {len(o)} diferem")

    def __add__(self, o: "QSeq") -> "QSeq":
        self._same_len(o)
        return QSeq(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "QSeq") -> "QSeq":
        self._same_len(o)
        return QSeq(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "QSeq":
        return QSeq(-self.re, -self.im)

    def scale(self, k: int) -> "QSeq":
        return QSeq(self.re * k, self.im * k)

    def mul_unit(self, k: int) -> "QSeq":
        """Multiplica por i^k."""
        k %= 4
        if k == 0:
            return self
        if k == 1:
            return QSeq(-self.im, self.re)
        if k == 2:
            return -self
        return QSeq(self.im, -self.re)

    def conj(self) -> "QSeq":
        return QSeq(self.re, -self.im)

    def divisible_by(self, k: int) -> bool:
        return bool(np.all(self.re % k == 0) and np.all(self.im % k == 0))

    def exact_div(self, k: int) -> "QSeq":
        if not self.divisible_by(k):
            raise ValueError(f"sequência não divisível por {k}")
        return QSeq(self.re // k, self.im // k)

    def concat(self, *others: "QSeq") -> "QSeq":
        return concat(self, *others)

    def pad_right(self, n: int) -> "QSeq":
        if n < len(self):
            raise LengthMismatch(f"não dá para preencher {len(self)} até {n}")
        if n == len(self):
            return self
        z = np.zeros(n - len(self), dtype=np.int64)
        return QSeq(np.concatenate([self.re, z]), np.concatenate([self.im, z]))

    # ---- predicados ----

    @property
    def weight(self) -> int:
        return int(np.dot(self.re, self.re) + np.dot(self.im, self.im))

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero((self.re != 0) | (self.im != 0))

    def _entry_ok(self, allow_zero: bool) -> np.ndarray:
        n2 = self.re * self.re + self.im * self.im
        ok = n2 == 1
        if allow_zero:
            ok |= n2 == 0
        return ok

    def is_polyphase(self) -> bool:
        return bool(np.all(self._entry_ok(True)))

    def is_unimodular(self) -> bool:
        return bool(np.all(self._entry_ok(False)))

    def is_two_phase(self) -> bool:
        return bool(np.all(self.im == 0) and np.all(np.abs(self.re) == 1))

    def first_non_polyphase(self) -> Optional[int]:
        bad = np.flatnonzero(~self._entry_ok(True))
        return int(bad[0]) if bad.size else None

    def unit_exponents(self) -> np.ndarray:
        """Expoente k com entrada = i^k; -1 onde a entrada é zero ou não unitária."""
        k = np.full(len(self), -1, dtype=np.int64)
        k[(self.re == 1) & (self.im == 0)] = 0
        k[(self.re == 0) & (self.im == 1)] = 1
        k[(self.re == -1) & (self.im == 0)] = 2
        k[(self.re == 0) & (self.im == -1)] = 3
        return k


def concat(*seqs: QSeq) -> QSeq:
    if not seqs:
        return QSeq.empty()
    return QSeq(np.concatenate([s.re for s in seqs]), np.concatenate([s.im for s in seqs]))


# =========================
# Operações básicas
# =========================

def flip_conj(a: QSeq) -> QSeq:
    """a*: inverte a ordem e conjuga cada entrada."""
    return QSeq(a.re[::-1], -a.im[::-1])


def kron(a: QSeq, b: QSeq) -> QSeq:
    """a ⊗ b com result[i·|b| + j] = a_i · b_j."""
    re = np.outer(a.re, b.re) - np.outer(a.im, b.im)
    im = np.outer(a.re, b.im) + np.outer(a.im, b.re)
    return QSeq(re.ravel(), im.ravel())


def interleave(u: QSeq, v: QSeq) -> QSeq:
    """u/v = [u0, v0, u1, v1, ..., u_|v|]."""
    if len(u) != len(v) + 1:
        raise LengthMismatch(f"intercalação exige |u| = |v|+1 (veio {len(u)} e {len(v)})")
    n = 2 * len(v) + 1
    re = np.zeros(n, dtype=np.int64)
    im = np.zeros(n, dtype=np.int64)
    re[0::2], im[0::2] = u.re, u.im
    re[1::2], im[1::2] = v.re, v.im
    return QSeq(re, im)


# =========================
# Multiplicação exata de polinômios
# =========================

def _kron_pack(x: np.ndarray, width: int) -> int:
    return int.from_bytes(x.astype(f"<u{width // 8}").tobytes(), "little")


def _kron_unpack(v: int, count: int, width: int) -> np.ndarray:
    nb = width // 8
    raw = v.to_bytes((count + 1) * nb, "little")[: count * nb]
    return np.frombuffer(raw, dtype=f"<u{nb}").astype(np.int64)


def _kronecker_convolve(x: np.ndarray, y: np.ndarray, bound: int) -> np.ndarray:
    # x = xp - xn, y = yp - yn; cada produto de partes não negativas tem coeficientes <= bound
    width = 32 if 2 * bound < (1 << 32) else 64
    if 2 * bound >= (1 << 63):
        raise OverflowError("coeficientes grandes demais para int64")
    xp, xn = np.maximum(x, 0), np.maximum(-x, 0)
    yp, yn = np.maximum(y, 0), np.maximum(-y, 0)
    XP, XN = _kron_pack(xp, width), _kron_pack(xn, width)
    YP, YN = _kron_pack(yp, width), _kron_pack(yn, width)
    count = x.size + y.size - 1
    pos = _kron_unpack(XP * YP + XN * YN, count, width)
    neg = _kron_unpack(XP * YN + XN * YP, count, width)
    return pos - neg


def int_convolve(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Convolução inteira exata (int64)."""
    x = np.asarray(x, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    if x.size == 0 or y.size == 0:
        return np.zeros(0, dtype=np.int64)
    mx = int(np.abs(x).max())
    my = int(np.abs(y).max())
    if mx == 0 or my == 0:
        return np.zeros(x.size + y.size - 1, dtype=np.int64)
    bound = mx * my * min(x.size, y.size)
    if x.size * y.size <= CONVOLVE_MAX_WORK and bound < (1 << 62):
        return np.convolve(x, y)
    return _kronecker_convolve(x, y, bound)


def poly_mul(a: QSeq, b: QSeq) -> QSeq:
    """Coeficientes de poly(a)·poly(b) sobre Z[i]; comprimento |a|+|b|-1."""
    if len(a) == 0 or len(b) == 0:
        return QSeq.empty()
    rr = int_convolve(a.re, b.re)
    ii = int_convolve(a.im, b.im)
    ri = int_convolve(a.re, b.im)
    ir = int_convolve(a.im, b.re)
    return QSeq(rr - ii, ri + ir)


# =========================
# Correlações
# =========================

@dataclass(frozen=True, eq=False)
class CorrProfile:
    """Perfil de correlação.

    aperiódico: valores nos lags 1-n..n-1 (posição m = τ + n - 1)
    periódico : valores nos lags 0..n-1
    """
    mode: str
    n: int
    re: np.ndarray
    im: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CorrProfile):
            return NotImplemented
        return (self.mode == other.mode and self.n == other.n
                and np.array_equal(self.re, other.re) and np.array_equal(self.im, other.im))

    def __add__(self, other: "CorrProfile") -> "CorrProfile":
        if self.mode != other.mode or self.n != other.n:
            raise LengthMismatch("perfis com modo ou comprimento diferentes")
        return CorrProfile(self.mode, self.n, self.re + other.re, self.im + other.im)

    @property
    def lags(self) -> range:
        if self.mode == APERIODIC:
            return range(1 - self.n, self.n)
        return range(0, self.n)

    def _pos(self, tau: int) -> int:
        return tau + self.n - 1 if self.mode == APERIODIC else tau

    def at(self, tau: int) -> GaussInt:
        if tau not in self.lags:
            return GaussInt(0, 0)
        p = self._pos(tau)
        return GaussInt(int(self.re[p]), int(self.im[p]))

    def values(self) -> List[GaussInt]:
        return [GaussInt(r, i) for r, i in zip(self.re.tolist(), self.im.tolist())]


def corr_profile(a: QSeq, b: QSeq, mode: str = APERIODIC) -> CorrProfile:
    if mode == PERIODIC:
        if len(a) != len(b):
            raise LengthMismatch(f"correlação periódica exige comprimentos iguais ({len(a)} != {len(b)})")
    elif mode != APERIODIC:
        raise ValueError(f"modo desconhecido: {mode}")

    n = max(len(a), len(b))
    if n == 0:
        z = np.zeros(0, dtype=np.int64)
        return CorrProfile(mode, 0, z, z)
    ap = poly_mul(a.pad_right(n), flip_conj(b.pad_right(n)))
    if mode == APERIODIC:
        return CorrProfile(mode, n, ap.re, ap.im)
    # C(τ) = R(τ) + R(τ - n)
    re = ap.re[n - 1:].copy()
    im = ap.im[n - 1:].copy()
    re[1:] += ap.re[: n - 1]
    im[1:] += ap.im[: n - 1]
    return CorrProfile(mode, n, re, im)


def autocorr(a: QSeq, mode: str = APERIODIC) -> CorrProfile:
    return corr_profile(a, a, mode)


def periodic_from_aperiodic(p: CorrProfile) -> CorrProfile:
    """Dobra um perfil aperiódico em periódico (C(τ) = R(τ) + R(τ-n))."""
    n = p.n
    if n == 0:
        return CorrProfile(PERIODIC, 0, p.re, p.im)
    re = p.re[n - 1:].copy()
    im = p.im[n - 1:].copy()
    re[1:] += p.re[: n - 1]
    im[1:] += p.im[: n - 1]
    return CorrProfile(PERIODIC, n, re, im)


# =========================
# Verificação de conjuntos GCS
# =========================

@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    peak: int = 0
    lag: Optional[int] = None
    residue: Optional[GaussInt] = None
    rows: Optional[Tuple[int, int]] = None
    level: str = "full"
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def sum_autocorr(seqs: Sequence[QSeq], mode: str = APERIODIC) -> CorrProfile:
    """Σ_l R_{a_l} com preenchimento à direita até o maior comprimento."""
    n = max((len(s) for s in seqs), default=0)
    if mode == PERIODIC:
        total = CorrProfile(PERIODIC, n, np.zeros(n, np.int64), np.zeros(n, np.int64))
        for s in seqs:
            total = total + corr_profile(s, s, PERIODIC)
        return total
    re = np.zeros(max(2 * n - 1, 0), dtype=np.int64)
    im = np.zeros_like(re)
    for s in seqs:
        m = len(s)
        if m == 0:
            continue
        # R_a não muda com zeros à direita; centraliza no vetor de tamanho 2n-1
        p = poly_mul(s, flip_conj(s))
        off = n - m
        re[off: off + 2 * m - 1] += p.re
        im[off: off + 2 * m - 1] += p.im
    return CorrProfile(APERIODIC, n, re, im)


def delta_residue(profile: CorrProfile, peak: int) -> Tuple[Optional[int], Optional[GaussInt]]:
    """Primeiro lag τ >= 0 onde o perfil difere de peak·δ."""
    if profile.n == 0:
        return None, None
    start = profile.n - 1 if profile.mode == APERIODIC else 0
    re = profile.re[start:].copy()
    im = profile.im[start:]
    re[0] -= peak
    bad = np.flatnonzero((re != 0) | (im != 0))
    if bad.size == 0:
        return None, None
    t = int(bad[0])
    return t, GaussInt(int(re[t]), int(im[t]))


def verify_gcs_set(seqs: Sequence[QSeq]) -> VerificationReport:
    """Confere Σ R_{a_l}(τ) = (Σ w(a_l))·δ(τ) exatamente."""
    for idx, s in enumerate(seqs):
        bad = s.first_non_polyphase()
        if bad is not None:
            raise NotPolyphase(f"sequência {idx}, posição {bad}: entrada {s[bad]} fora de {{0, ±1, ±i}}")

    peak = sum(s.weight for s in seqs)
    prof = sum_autocorr(seqs)
    lag, res = delta_residue(prof, peak)
    if lag is None:
        return VerificationReport(ok=True, peak=peak, message=f"ok: pico {peak}")
    if lag == 0:
        msg = f"lag 0 vale {res.re + peak} (esperado {peak})"
    else:
        msg = f"lag {lag} com resíduo {res}"
    log.debug("verify_gcs_set falhou: %s", msg)
    return VerificationReport(ok=False, peak=peak, lag=lag, residue=res, message=msg)
