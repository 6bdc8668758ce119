"""
erros.py — Exceções do gerador de sequências de Golay / matrizes de Hadamard.

Cada família carrega o código de saída usado pela CLI:
  1 = falha de verificação
  2 = entrada inválida
  3 = comprimento não suportado / não coberto
  4 = orçamento de recursos excedido
"""

from __future__ import annotations


class GcsError(Exception):
    exit_code: int = 2


# =========================
# Famílias
# =========================

class EntradaInvalida(GcsError):
    exit_code = 2


class FalhaVerificacao(GcsError):
    exit_code = 1


class ComprimentoNaoSuportado(GcsError):
    exit_code = 3


class OrcamentoExcedido(GcsError):
    exit_code = 4


# =========================
# Entrada inválida
# =========================

class LengthMismatch(EntradaInvalida): pass
class NotPolyphase(EntradaInvalida): pass
class NotTwoPhase(EntradaInvalida): pass
class TrivialTwoPhase(EntradaInvalida): pass
class QuarterScaleViolation(EntradaInvalida): pass
class GroupingMismatch(EntradaInvalida): pass
class OddCardinality(EntradaInvalida): pass
class NotPair(EntradaInvalida): pass
class RouteConstraintViolated(EntradaInvalida): pass
class ShapeMismatch(EntradaInvalida): pass
class OrderMismatch(EntradaInvalida): pass
class NotDisjoint(EntradaInvalida): pass
class NotQuasiSymmetric(EntradaInvalida): pass
class FlipCorrMismatch(EntradaInvalida): pass
class NonCommutingEntries(EntradaInvalida): pass
class ShapeViolation(EntradaInvalida): pass
class NotCertifiedInput(EntradaInvalida): pass
class NotQuad(EntradaInvalida): pass
class NotCertified(EntradaInvalida): pass
class NotPerfect(EntradaInvalida): pass
class NotHadamardSeed(EntradaInvalida): pass
class CorpusRequired(EntradaInvalida): pass


class CorpusParse(EntradaInvalida):
    """Erro de leitura com posição (linha e coluna começam em 1)."""

    def __init__(self, msg: str, line: int = 0, col: int = 0, fonte: str = "") -> None:
        self.line = line
        self.col = col
        self.fonte = fonte
        onde = f"{fonte}:" if fonte else ""
        if line:
            onde += f"{line}:{col}: "
        super().__init__(f"{onde}{msg}")


ParseError = CorpusParse


# =========================
# Falha de verificação
# =========================

class VerificationFailed(FalhaVerificacao): pass
class CorpusVerificationFailed(FalhaVerificacao): pass
class PerfectionFailed(FalhaVerificacao): pass
class PlanArithmeticMismatch(FalhaVerificacao): pass


# =========================
# Comprimento não suportado
# =========================

class UnsupportedSeedLength(ComprimentoNaoSuportado): pass


class DigitNotCovered(ComprimentoNaoSuportado):
    def __init__(self, digit: int, position: int) -> None:
        self.digit = digit
        self.position = position
        super().__init__(f"dígito {digit} (posição {position}) fora da cobertura verificada")


class ThresholdUnavailable(ComprimentoNaoSuportado): pass


# =========================
# Orçamento
# =========================

class BudgetExceeded(OrcamentoExcedido):
    def __init__(self, needed: int, cap: int, what: str = "conjunto") -> None:
        self.needed = needed
        self.cap = cap
        super().__init__(
            f"{what} precisaria de {needed} bytes, acima do teto de {cap} bytes "
            f"(ajuste GCS_MEMORY_CAP ou memory_cap_bytes)"
        )
