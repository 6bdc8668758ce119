"""
signed_perm.py — Grupo simétrico com sinal SP_v, sequências sobre {0} ∪ SP_v e sequências perfeitas.

Um elemento de SP_v é guardado como (imagem, sinal): a matriz correspondente tem
sinal[r] na linha r, coluna imagem[r]. Em SP_2:

    1 -> I,   i -> [[0,-1],[1,0]],   j -> [[1,0],[0,-1]]

A conjugação complexa vira transposição (ī = -i, j̄ = j).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from constructions import GcsSet
from erros import (
    FlipCorrMismatch, LengthMismatch, NonCommutingEntries, NotCertifiedInput, NotDisjoint, NotPair,
    NotPerfect, NotPolyphase, NotQuasiSymmetric, OrderMismatch, PerfectionFailed, ShapeMismatch,
    ShapeViolation,
)
from seqcore import (
    APERIODIC, PERIODIC, CorrProfile, QSeq, VerificationReport, concat, corr_profile, flip_conj,
    kron, poly_mul,
)

log = logging.getLogger(__name__)


# =========================
# SignedPerm
# =========================

def _ro(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SignedPerm:
    image: np.ndarray
    sign: np.ndarray

    def __post_init__(self) -> None:
        img, sgn = _ro(self.image), _ro(self.sign)
        if img.shape != sgn.shape or img.ndim != 1:
            raise ShapeMismatch("imagem e sinal precisam ser vetores do mesmo tamanho")
        if not np.array_equal(np.sort(img), np.arange(img.size)):
            raise ShapeMismatch(f"imagem não é uma permutação de 0..{img.size - 1}")
        if not np.all(np.abs(sgn) == 1):
            raise ShapeMismatch("sinais precisam ser ±1")
        object.__setattr__(self, "image", img)
        object.__setattr__(self, "sign", sgn)

    @property
    def order(self) -> int:
        return int(self.image.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedPerm):
            return NotImplemented
        return np.array_equal(self.image, other.image) and np.array_equal(self.sign, other.sign)

    def __hash__(self) -> int:
        return hash((self.image.tobytes(), self.sign.tobytes()))

    def __repr__(self) -> str:
        return f"SignedPerm(image={self.image.tolist()}, sign={self.sign.tolist()})"

    def __mul__(self, other: "SignedPerm") -> "SignedPerm":
        return sp_mul(self, other)

    def __neg__(self) -> "SignedPerm":
        return SignedPerm(self.image, -self.sign)

    @classmethod
    def identity(cls, v: int) -> "SignedPerm":
        return cls(np.arange(v), np.ones(v, dtype=np.int64))

    @classmethod
    def from_matrix(cls, M: np.ndarray) -> "SignedPerm":
        M = np.asarray(M)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ShapeMismatch("matriz precisa ser quadrada")
        if not (np.all(np.count_nonzero(M, axis=1) == 1) and np.all(np.count_nonzero(M, axis=0) == 1)):
            raise ShapeMismatch("matriz não é de permutação com sinal")
        img = np.argmax(M != 0, axis=1)
        return cls(img, M[np.arange(M.shape[0]), img])

    def matrix(self) -> np.ndarray:
        v = self.order
        M = np.zeros((v, v), dtype=np.int64)
        M[np.arange(v), self.image] = self.sign
        return M


def _check_order(x: SignedPerm, y: SignedPerm) -> None:
    if x.order != y.order:
        raise OrderMismatch(f"ordens diferentes ({x.order} e {y.order})")


def sp_mul(x: SignedPerm, y: SignedPerm) -> SignedPerm:
    _check_order(x, y)
    return SignedPerm(y.image[x.image], x.sign * y.sign[x.image])


def sp_transpose(x: SignedPerm) -> SignedPerm:
    inv = np.argsort(x.image)
    return SignedPerm(inv, x.sign[inv])


def sp_embed(x: SignedPerm) -> SignedPerm:
    """diag(x, x) em SP_2v."""
    v = x.order
    return SignedPerm(np.concatenate([x.image, x.image + v]), np.concatenate([x.sign, x.sign]))


_UNIT_IMAGES = np.array([[0, 1], [1, 0], [0, 1], [1, 0]], dtype=np.int64)
_UNIT_SIGNS = np.array([[1, 1], [-1, 1], [-1, -1], [1, -1]], dtype=np.int64)


def sp2_unit(k: int) -> SignedPerm:
    """i^k em SP_2."""
    k %= 4
    return SignedPerm(_UNIT_IMAGES[k], _UNIT_SIGNS[k])


SP2_J = SignedPerm(np.array([0, 1]), np.array([1, -1]))


def complex_matrix(re: int, im: int) -> np.ndarray:
    """Representação de re + i·im: [[re, -im], [im, re]]."""
    return np.array([[re, -im], [im, re]], dtype=np.int64)


# =========================
# Sequências sobre {0} ∪ SP_v
# =========================

@dataclass(frozen=True, eq=False)
class SPSeq:
    """Sequência de comprimento n sobre {0} ∪ SP_v (linhas zeradas onde mask é falso)."""
    v: int
    images: np.ndarray
    signs: np.ndarray
    mask: np.ndarray

    def __post_init__(self) -> None:
        for nome in ("images", "signs"):
            a = _ro(getattr(self, nome)).reshape(-1, self.v)
            object.__setattr__(self, nome, a)
        m = np.ascontiguousarray(self.mask, dtype=bool)
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)
        if m.size != self.images.shape[0] or self.signs.shape != self.images.shape:
            raise ShapeMismatch("dimensões inconsistentes em SPSeq")

    def __len__(self) -> int:
        return int(self.mask.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SPSeq):
            return NotImplemented
        if self.v != other.v or not np.array_equal(self.mask, other.mask):
            return False
        m = self.mask
        return np.array_equal(self.images[m], other.images[m]) and np.array_equal(self.signs[m], other.signs[m])

    def entry(self, i: int) -> Optional[SignedPerm]:
        if not self.mask[i]:
            return None
        return SignedPerm(self.images[i], self.signs[i])

    def entries(self) -> List[Optional[SignedPerm]]:
        return [self.entry(i) for i in range(len(self))]

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def has_zero(self) -> bool:
        return not bool(self.mask.all())

    def is_quasi_symmetric(self) -> bool:
        return bool(np.array_equal(self.mask, self.mask[::-1]))

    # ---- construtores ----

    @classmethod
    def zeros(cls, n: int, v: int) -> "SPSeq":
        return cls(v, np.tile(np.arange(v), (n, 1)), np.ones((n, v), dtype=np.int64), np.zeros(n, dtype=bool))

    @classmethod
    def from_entries(cls, entries: Sequence[Optional[SignedPerm]], v: int) -> "SPSeq":
        S = cls.zeros(len(entries), v)
        img, sgn, mask = S.images.copy(), S.signs.copy(), S.mask.copy()
        for i, x in enumerate(entries):
            if x is None:
                continue
            if x.order != v:
                raise OrderMismatch(f"entrada {i} tem ordem {x.order} (esperado {v})")
            img[i], sgn[i], mask[i] = x.image, x.sign, True
        return cls(v, img, sgn, mask)

    @classmethod
    def from_complex(cls, a: QSeq) -> "SPSeq":
        """Sequência sobre {0, ±1, ±i} vista em {0} ∪ SP_2."""
        k = a.unit_exponents()
        zero = (a.re == 0) & (a.im == 0)
        bad = np.flatnonzero((k < 0) & ~zero)
        if bad.size:
            raise NotPolyphase(f"posição {int(bad[0])}: entrada {a[int(bad[0])]} fora de {{0, ±1, ±i}}")
        kk = np.where(k < 0, 0, k)
        return cls(2, _UNIT_IMAGES[kk], _UNIT_SIGNS[kk], ~zero)

    # ---- operações entrada a entrada ----

    def transpose_entries(self) -> "SPSeq":
        inv = np.argsort(self.images, axis=1)
        return SPSeq(self.v, inv, np.take_along_axis(self.signs, inv, axis=1), self.mask)

    def flip_transpose(self) -> "SPSeq":
        """a*: ordem invertida e cada entrada transposta."""
        t = self.transpose_entries()
        return SPSeq(self.v, t.images[::-1], t.signs[::-1], self.mask[::-1])

    def embed(self, times: int = 1) -> "SPSeq":
        img, sgn, v = self.images, self.signs, self.v
        for _ in range(times):
            img = np.concatenate([img, img + v], axis=1)
            sgn = np.concatenate([sgn, sgn], axis=1)
            v *= 2
        return SPSeq(v, img, sgn, self.mask)

    def embed_to(self, v: int) -> "SPSeq":
        if v < self.v or v % self.v or (v // self.v) & (v // self.v - 1):
            raise OrderMismatch(f"não dá para mergulhar SP_{self.v} em SP_{v}")
        return self.embed((v // self.v).bit_length() - 1)


def _products(ai: np.ndarray, asg: np.ndarray, bi: np.ndarray, bsg: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Produtos linha a linha (k, v) de elementos de SP_v."""
    img = np.take_along_axis(bi, ai, axis=1)
    sgn = asg * np.take_along_axis(bsg, ai, axis=1)
    return img, sgn


# =========================
# Perfis matriciais
# =========================

@dataclass(frozen=True, eq=False)
class MatProfile:
    """Correlação com valores matriciais v×v (denso, inteiro).

    aperiódico: lags 1-n..n-1 na posição τ+n-1; periódico: lags 0..n-1.
    """
    mode: str
    n: int
    v: int
    mats: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatProfile):
            return NotImplemented
        return (self.mode, self.n, self.v) == (other.mode, other.n, other.v) and np.array_equal(self.mats, other.mats)

    def __add__(self, other: "MatProfile") -> "MatProfile":
        if (self.mode, self.n, self.v) != (other.mode, other.n, other.v):
            raise ShapeMismatch("perfis matriciais incompatíveis")
        return MatProfile(self.mode, self.n, self.v, self.mats + other.mats)

    @property
    def lags(self) -> range:
        return range(1 - self.n, self.n) if self.mode == APERIODIC else range(self.n)

    def at(self, tau: int) -> np.ndarray:
        if tau not in self.lags:
            return np.zeros((self.v, self.v), dtype=np.int64)
        return self.mats[tau + self.n - 1 if self.mode == APERIODIC else tau]

    def embed(self, times: int = 1) -> "MatProfile":
        mats, v = self.mats, self.v
        for _ in range(times):
            z = np.zeros_like(mats)
            mats = np.concatenate([np.concatenate([mats, z], axis=2), np.concatenate([z, mats], axis=2)], axis=1)
            v *= 2
        return MatProfile(self.mode, self.n, v, mats)

    def delta_residue(self, peak: int) -> Optional[int]:
        """Primeiro lag τ >= 0 onde o perfil difere de peak·I·δ(τ); None se é delta."""
        eye = np.eye(self.v, dtype=np.int64)
        if not np.array_equal(self.at(0), peak * eye):
            return 0
        for tau in range(1, self.n):
            if self.at(tau).any() or (self.mode == APERIODIC and self.at(-tau).any()):
                return tau
        return None


def matprofile_from_complex(p: CorrProfile, v: int = 2) -> MatProfile:
    mats = np.zeros((p.re.size, 2, 2), dtype=np.int64)
    mats[:, 0, 0] = p.re
    mats[:, 1, 1] = p.re
    mats[:, 0, 1] = -p.im
    mats[:, 1, 0] = p.im
    prof = MatProfile(p.mode, p.n, 2, mats)
    return prof.embed((v // 2).bit_length() - 1)


def spseq_corr(a: SPSeq, b: SPSeq, mode: str = APERIODIC) -> MatProfile:
    """R_ab(τ) = Σ_i a_i · transposta(b_{i-τ}) em inteiros exatos."""
    if a.v != b.v:
        raise OrderMismatch(f"ordens diferentes ({a.v} e {b.v})")
    if mode == PERIODIC and len(a) != len(b):
        raise LengthMismatch(f"correlação periódica exige comprimentos iguais ({len(a)} != {len(b)})")
    if mode not in (APERIODIC, PERIODIC):
        raise ValueError(f"modo desconhecido: {mode}")
    v = a.v
    n = max(len(a), len(b))
    bt = b.transpose_entries()
    lags = range(1 - n, n) if mode == APERIODIC else range(n)
    mats = np.zeros((len(lags), v, v), dtype=np.int64)
    rows = np.arange(v)
    ia = np.arange(len(a))
    for pos, tau in enumerate(lags):
        j = ia - tau
        if mode == PERIODIC:
            j %= n
        ok = (j >= 0) & (j < len(b))
        i, j = ia[ok], j[ok]
        ok = a.mask[i] & b.mask[j]
        i, j = i[ok], j[ok]
        if i.size == 0:
            continue
        img, sgn = _products(a.images[i], a.signs[i], bt.images[j], bt.signs[j])
        np.add.at(mats[pos], (np.broadcast_to(rows, img.shape).ravel(), img.ravel()), sgn.ravel())
    return MatProfile(mode, n, v, mats)


# =========================
# Combinação de duas sequências
# =========================

def _entries_commute(a: SPSeq, b: SPSeq) -> Optional[Tuple[int, int]]:
    def distintos(S: SPSeq) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        idx = S.support
        chave = np.concatenate([S.images[idx], S.signs[idx]], axis=1)
        _, first = np.unique(chave, axis=0, return_index=True)
        sel = idx[np.sort(first)]
        return sel, S.images[sel], S.signs[sel]

    ia, ai, asg = distintos(a)
    ib, bi, bsg = distintos(b)
    for p in range(ia.size):
        k = ib.size
        A_i, A_s = np.repeat(ai[p:p + 1], k, axis=0), np.repeat(asg[p:p + 1], k, axis=0)
        ab = _products(A_i, A_s, bi, bsg)
        ba = _products(bi, bsg, A_i, A_s)
        bad = np.flatnonzero(~(np.all(ab[0] == ba[0], axis=1) & np.all(ab[1] == ba[1], axis=1)))
        if bad.size:
            return int(ia[p]), int(ib[bad[0]])
    return None


def check_combine_inputs(a: SPSeq, b: SPSeq) -> None:
    if a.v != b.v:
        raise OrderMismatch(f"ordens diferentes ({a.v} e {b.v})")
    if len(a) != len(b):
        raise LengthMismatch(f"comprimentos diferentes ({len(a)} e {len(b)})")
    both = np.flatnonzero(a.mask & b.mask)
    if both.size:
        raise NotDisjoint(f"suportes se cruzam na posição {int(both[0])}")
    for nome, s in (("a", a), ("b", b)):
        if not s.is_quasi_symmetric():
            raise NotQuasiSymmetric(f"suporte de {nome} não é simétrico")
        if spseq_corr(s, s) != spseq_corr(s.flip_transpose(), s.flip_transpose()):
            raise FlipCorrMismatch(f"R_{nome} != R_{nome}*")
    par = _entries_commute(a, b)
    if par is not None:
        raise NonCommutingEntries(f"a_{par[0]} e b_{par[1]} não comutam")


def combine(a: SPSeq, b: SPSeq, check: bool = True) -> SPSeq:
    """c_i = [[a_i, b_i], [-b̄_{n-1-i}, ā_{n-1-i}]] em SP_2v."""
    if check:
        check_combine_inputs(a, b)
    v, n = a.v, len(a)
    at, bt = a.transpose_entries(), b.transpose_entries()
    rev = np.arange(n)[::-1]

    top_a_img, top_a_sgn = a.images, a.signs
    bot_a_img, bot_a_sgn = at.images[rev] + v, at.signs[rev]
    top_b_img, top_b_sgn = b.images + v, b.signs
    bot_b_img, bot_b_sgn = bt.images[rev], -bt.signs[rev]

    sel = a.mask[:, None]
    img = np.concatenate([np.where(sel, top_a_img, top_b_img), np.where(sel, bot_a_img, bot_b_img)], axis=1)
    sgn = np.concatenate([np.where(sel, top_a_sgn, top_b_sgn), np.where(sel, bot_a_sgn, bot_b_sgn)], axis=1)
    mask = a.mask | b.mask
    img[~mask] = np.arange(2 * v)
    sgn[~mask] = 1
    return SPSeq(2 * v, img, sgn, mask)


# =========================
# Sequências quase-simétricas suplementares
# =========================

@dataclass(frozen=True)
class Thm4Output:
    n: int
    seqs: Tuple[QSeq, ...]
    offsets: Tuple[int, ...]
    k: int
    d: int

    @property
    def gamma(self) -> int:
        return 2 * self.k + 4 * self.d


def _certified_pair(P: GcsSet, what: str) -> Tuple[QSeq, QSeq]:
    if not P.certified:
        raise NotCertifiedInput(f"{what} sem certificado")
    if P.cardinality != 2 or len(P[0]) != len(P[1]):
        raise NotPair(f"{what}: esperado par (veio {P.lengths})")
    return P[0], P[1]


def thm4_sequences(pairs: Sequence[Tuple[GcsSet, GcsSet]],
                   cbs_list: Sequence[Tuple[GcsSet, GcsSet, GcsSet]] = ()) -> Thm4Output:
    """2(k+2d) sequências quase-simétricas e suplementares de comprimento n.

    pairs: k tuplas (par {e, f} de comprimento l, par multiplicador {g, h} de comprimento m)
    cbs_list: d tuplas (CBS(s1, s2), multiplicador do primeiro par, multiplicador do segundo),
              os dois multiplicadores com o mesmo comprimento t
    """
    blocos: List[Tuple[QSeq, QSeq, QSeq, QSeq]] = []
    for idx, (ef, gh) in enumerate(pairs):
        e, f = _certified_pair(ef, f"par {idx}")
        g, h = _certified_pair(gh, f"multiplicador {idx}")
        blocos.append((e, f, g, h))
    for idx, (cbs, gh1, gh2) in enumerate(cbs_list):
        if not cbs.certified:
            raise NotCertifiedInput(f"CBS {idx} sem certificado")
        if cbs.cardinality != 4:
            raise ShapeMismatch(f"CBS {idx} com {cbs.cardinality} sequências")
        l = cbs.lengths
        if l[0] != l[1] or l[2] != l[3]:
            raise ShapeMismatch(f"CBS {idx} com comprimentos {l}")
        g1, h1 = _certified_pair(gh1, f"multiplicador da CBS {idx}")
        g2, h2 = _certified_pair(gh2, f"multiplicador da CBS {idx}")
        if len(g1) != len(g2):
            raise ShapeViolation(f"CBS {idx}: multiplicadores com comprimentos {len(g1)} e {len(g2)}")
        blocos.append((cbs[0], cbs[1], g1, h1))
        blocos.append((cbs[2], cbs[3], g2, h2))
    if not blocos:
        raise ShapeMismatch("nenhuma entrada")

    offsets = [0]
    for e, _, g, _ in blocos:
        offsets.append(offsets[-1] + len(e) * len(g))
    n = 4 * offsets[-1]
    half = n // 2

    seqs: List[QSeq] = []
    for i, (e, f, g, h) in enumerate(blocos):
        lam, nxt = offsets[i], offsets[i + 1]
        a = concat(QSeq.zeros(lam), kron(e, g), QSeq.zeros(n - 2 * nxt), kron(f, h), QSeq.zeros(lam))
        b = concat(QSeq.zeros(half - nxt), -kron(flip_conj(e), h), QSeq.zeros(2 * lam),
                   kron(flip_conj(f), g), QSeq.zeros(half - nxt))
        seqs += [a, b]
    log.info("sequências suplementares: n=%d, %d sequências, λ=%s", n, len(seqs), offsets)
    return Thm4Output(n, tuple(seqs), tuple(offsets), len(pairs), len(cbs_list))


def verify_supplementary(seqs: Sequence[QSeq]) -> VerificationReport:
    """Quase-simetria, suportes disjuntos cobrindo Z_n e Σ C = n·δ."""
    if not seqs:
        return VerificationReport(ok=False, message="lista vazia")
    n = len(seqs[0])
    if any(len(s) != n for s in seqs):
        raise LengthMismatch("sequências com comprimentos diferentes")
    cont = np.zeros(n, dtype=np.int64)
    for idx, s in enumerate(seqs):
        m = (s.re != 0) | (s.im != 0)
        if not np.array_equal(m, m[::-1]):
            return VerificationReport(ok=False, rows=(idx, idx), message=f"sequência {idx} não é quase-simétrica")
        cont += m
    if np.any(cont != 1):
        pos = int(np.flatnonzero(cont != 1)[0])
        return VerificationReport(ok=False, message=f"posição {pos} coberta {int(cont[pos])} vezes")
    total = CorrProfile(PERIODIC, n, np.zeros(n, np.int64), np.zeros(n, np.int64))
    for s in seqs:
        total = total + corr_profile(s, s, PERIODIC)
    re = total.re.copy()
    re[0] -= n
    bad = np.flatnonzero((re != 0) | (total.im != 0))
    if bad.size:
        tau = int(bad[0])
        return VerificationReport(ok=False, peak=n, lag=tau, message=f"Σ C no lag {tau} vale {total.at(tau)}")
    return VerificationReport(ok=True, peak=n, level="full", message=f"ok: Σ C = {n}·δ")


# =========================
# Sequência perfeita
# =========================

def is_perfect(c: SPSeq) -> Optional[int]:
    """None se c é perfeita; senão o lag ofensor (-1 se há entrada nula)."""
    if c.has_zero():
        return -1
    return spseq_corr(c, c, PERIODIC).delta_residue(len(c))


def perfect_from_inputs(out: Thm4Output | Sequence[QSeq], check: bool = True) -> SPSeq:
    """Dobra combine sobre a1, b1, a2, b2, ... (recém-chegados complexos mergulhados como escalares)."""
    seqs = list(out.seqs if isinstance(out, Thm4Output) else out)
    if len(seqs) < 2:
        raise ShapeMismatch("precisa de pelo menos duas sequências")
    parts = [SPSeq.from_complex(s) for s in seqs]
    c = combine(parts[0], parts[1], check)
    alvo = None
    if check:
        alvo = spseq_corr(parts[0], parts[0]) + spseq_corr(parts[1], parts[1])
        _check_stage(c, alvo, 1)
    for t, nova in enumerate(parts[2:], start=2):
        b = nova.embed_to(c.v)
        if check:
            alvo = alvo.embed() + spseq_corr(b, b)
        c = combine(c, b, check)
        if check:
            _check_stage(c, alvo, t)
    zeros = np.flatnonzero(~c.mask)
    if zeros.size:
        raise PerfectionFailed(f"entrada nula na posição {int(zeros[0])} após a combinação")
    lag = spseq_corr(c, c, PERIODIC).delta_residue(len(c))
    if lag is not None:
        raise PerfectionFailed(f"autocorrelação periódica não nula no lag {lag}")
    log.info("sequência perfeita de comprimento %d sobre SP_%d", len(c), c.v)
    return c


def _check_stage(c: SPSeq, alvo: MatProfile, etapa: int) -> None:
    if spseq_corr(c, c) != alvo.embed():
        raise PerfectionFailed(f"etapa {etapa}: R_c difere de R_a + R_b")
    cs = c.flip_transpose()
    if spseq_corr(cs, cs) != alvo.embed():
        raise PerfectionFailed(f"etapa {etapa}: R_c* difere de R_a + R_b")


def require_perfect(c: SPSeq) -> None:
    lag = is_perfect(c)
    if lag == -1:
        raise NotPerfect("sequência com entrada nula")
    if lag is not None:
        raise NotPerfect(f"autocorrelação periódica não nula no lag {lag}")


# =========================
# Composto ortogonal 2×2
# =========================

def composite_orthogonal(a: QSeq, b: QSeq) -> Tuple[bool, QSeq]:
    """C = [[a, b], [-b*, a*]]: confere C·C* = C*·C = (aa* + bb*)·I sobre polinômios de Gauss.

    Devolve (ok, aa* + bb*).
    """
    n = max(len(a), len(b))
    a, b = a.pad_right(n), b.pad_right(n)
    ast, bst = flip_conj(a), flip_conj(b)
    diag = poly_mul(a, ast) + poly_mul(b, bst)
    # C* = [[a*, -b], [b*, a]]
    cc = (
        (poly_mul(a, ast) + poly_mul(b, bst), poly_mul(a, -b) + poly_mul(b, a)),
        (poly_mul(-bst, ast) + poly_mul(ast, bst), poly_mul(bst, b) + poly_mul(ast, a)),
    )
    cs_c = (
        (poly_mul(ast, a) + poly_mul(-b, -bst), poly_mul(ast, b) + poly_mul(-b, ast)),
        (poly_mul(bst, a) + poly_mul(a, -bst), poly_mul(bst, b) + poly_mul(a, ast)),
    )
    zero = QSeq.zeros(len(diag))
    ok = all(M[0][0] == diag and M[1][1] == diag and M[0][1] == zero and M[1][0] == zero for M in (cc, cs_c))
    return ok, diag
