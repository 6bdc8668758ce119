"""
configuracao.py — Limites de trabalho (memória, certificação, verificação) lidos de JSON.

Ordem de precedência:
  1. GCS_MEMORY_CAP no ambiente (apenas o teto de memória)
  2. arquivo JSON informado (--config) ou data/config.json
  3. padrões desta classe
"""

from __future__ import annotations

import json
import logging
import os
import re
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict

log = logging.getLogger(__name__)

RAIZ = Path(__file__).resolve().parent.parent
CONFIG_PADRAO = RAIZ / "data" / "config.json"
ENV_MEMORIA = "GCS_MEMORY_CAP"

_SUFIXOS = {"": 1, "K": 1 << 10, "M": 1 << 20, "G": 1 << 30, "T": 1 << 40}


@dataclass(frozen=True)
class Configuracao:
    memory_cap_bytes: int = 2 << 30
    certify_max_entries: int = 1 << 24
    hadamard_full_verify_max: int = 4096
    shortcut_crosscheck_max: int = 2048
    matrix_build_max_order: int = 1 << 16
    verified_bound: int = 10**7
    witness_bound: int = 10**6
    allow_trusted_thresholds: bool = True
    corpus_path: str = "data/corpus_cbs.txt"

    def corpus_file(self) -> Path:
        p = Path(self.corpus_path)
        return p if p.is_absolute() else RAIZ / p

    def com(self, **mudancas: Any) -> "Configuracao":
        return _validar(replace(self, **mudancas))


def parse_bytes(texto: str) -> int:
    """'512M' -> 536870912; aceita inteiro puro."""
    m = re.fullmatch(r"\s*(\d+)\s*([KMGT]?)I?B?\s*", texto.upper())
    if not m:
        raise ValueError(f"Valor de memória inválido: {texto!r}")
    return int(m.group(1)) * _SUFIXOS[m.group(2)]


def _validar(cfg: Configuracao) -> Configuracao:
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if isinstance(v, bool) or isinstance(v, str):
            continue
        if not isinstance(v, int) or v <= 0:
            raise ValueError(f"Configuração '{f.name}' precisa ser inteiro positivo (veio {v!r})")
    return cfg


def carregar_config(path: Path | None = None, env: Dict[str, str] | None = None) -> Configuracao:
    env = os.environ if env is None else env
    path = CONFIG_PADRAO if path is None else Path(path)

    dados: Dict[str, Any] = {}
    if path.exists():
        dados = json.loads(path.read_text(encoding="utf-8"))
    else:
        log.info("Config %s ausente; usando padrões", path)

    conhecidos = {f.name for f in fields(Configuracao)}
    kwargs = {}
    for k, v in dados.items():
        if k.startswith("_"):
            continue
        if k not in conhecidos:
            log.warning("Chave de configuração ignorada: %s", k)
            continue
        kwargs[k] = v

    if env.get(ENV_MEMORIA):
        kwargs["memory_cap_bytes"] = parse_bytes(env[ENV_MEMORIA])

    return _validar(Configuracao(**kwargs))
