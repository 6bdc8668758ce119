#!/usr/bin/env python3
"""
gera_hadamard.py — Constrói e verifica sequências complementares de Golay (pares, quádruplas,
conjuntos de comprimento arbitrário, CBS) e matrizes de Hadamard.

Uso típico:
  python3 src/gera_hadamard.py pair 26
  python3 src/gera_hadamard.py set 87 --plan out/87.plan -o out/87.gcs
  python3 src/gera_hadamard.py hadamard gs 87 -o out/h696.hmat --png out/h696.png
  python3 src/gera_hadamard.py hadamard sp --pairs 3 --cbs 8,7 --mult 3 3 -o out/h13824.hmat
  python3 src/gera_hadamard.py hadamard plan 3 --build -o out/plan3.json
  python3 src/gera_hadamard.py density --k 2 --dense --limit 10000 -o out/dens.csv
  python3 src/gera_hadamard.py coverage --k 3 --limit 10000000 --cache out/s3.gls
  python3 src/gera_hadamard.py btable --gamma 4 --i 0 1 2 --limit 2000 --literature
  python3 src/gera_hadamard.py verify out/h696.hmat
  python3 src/gera_hadamard.py corpus load data/corpus_cbs.txt

Códigos de saída: 0 ok, 1 falha de verificação, 2 entrada inválida, 3 comprimento não suportado,
4 orçamento de memória excedido.

Dependências Python:
  - numpy
  - pillow (--png), reportlab (--pdf)
"""

from __future__ import annotations

import json
import logging
import sys
from argparse import ArgumentParser, Namespace
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from configuracao import Configuracao, carregar_config, parse_bytes
from constructions import (
    GcsSet, Planner, build_arbitrary, cbs_from_pair, cbs_seed_87, corpus_by_length, load_base_corpus,
    plan_pair, realize,
)
from erros import (
    BudgetExceeded, CorpusRequired, DigitNotCovered, GcsError, ShapeMismatch,
)
from formatos import (
    atomic_write, format_csv, format_matrix, format_sequences, load_length_set, parse_sequences, parse_spseq,
    read_matrix, save_length_set, stamp_comment, write_csv, write_matrix, write_plan, write_sequences,
    write_spseq,
)
from golay_numbers import (
    GAMMAS, LITERATURE_BASE_LENGTHS, RESTRICTED_BASE_LENGTHS, build_Sk, compute_b_table, coverage, density_rows,
    is_golay,
)
from hadamard import (
    CURVE_HEADER, PMMatrix, asymptotic_curves, build_from_plan, asymptotic_plan, curve_points,
    goethals_seidel_8n, hadamard_from_supplementary, hadamard_order_from_lengths, verify_hadamard,
)
from seqcore import verify_gcs_set
from signed_perm import is_perfect, thm4_sequences

log = logging.getLogger("gera_hadamard")

EXIT_OK = 0
EXIT_ENTRADA = 2


# =========================
# Utilidades gerais
# =========================

class Contexto:
    """Configuração carregada e corpus sob demanda."""

    def __init__(self, args: Namespace) -> None:
        cfg = carregar_config(Path(args.config) if args.config else None)
        if args.memory_cap:
            cfg = cfg.com(memory_cap_bytes=parse_bytes(args.memory_cap))
        if args.corpus:
            cfg = cfg.com(corpus_path=args.corpus)
        self.cfg: Configuracao = cfg
        self.args = args
        self._corpus: Optional[List[GcsSet]] = None

    @property
    def corpus(self) -> List[GcsSet]:
        if self._corpus is None:
            path = self.cfg.corpus_file()
            if path.exists():
                self._corpus = load_base_corpus(path, skip_invalid=not self.args.corpus)
            else:
                if self.args.corpus:
                    raise FileNotFoundError(f"corpus não encontrado: {path}")
                log.info("corpus %s ausente; só CBS(8,7) e CBS de pares", path)
                self._corpus = []
        return self._corpus

    @property
    def by_length(self) -> Dict[int, GcsSet]:
        return corpus_by_length(self.corpus)

    @property
    def base_lengths(self) -> Tuple[int, ...]:
        if getattr(self.args, "literature", False):
            return LITERATURE_BASE_LENGTHS
        return tuple(sorted(set(RESTRICTED_BASE_LENGTHS) | set(self.by_length)))

    def comments(self, *linhas: str) -> List[str]:
        out = [l for l in linhas if l]
        if self.args.stamp:
            out.append(stamp_comment())
        return out


def emit_text(text: str, out: Optional[str]) -> None:
    if out:
        p = atomic_write(out, text)
        print("Gerado:", p)
    else:
        sys.stdout.write(text)


def emit_sequences(ctx: Contexto, seqs: Sequence, out: Optional[str], comments: Iterable[str]) -> None:
    if out:
        print("Gerado:", write_sequences(out, seqs, comments))
    else:
        sys.stdout.write(format_sequences(seqs, comments))


def emit_matrix(ctx: Contexto, H: PMMatrix, out: Optional[str], titulo: str, extra: Sequence[str] = ()) -> None:
    rep = H.report
    nivel = f"verificação: {rep.level} ({rep.message})" if rep else "verificação: ausente"
    comments = ctx.comments(titulo, nivel, *extra)
    if out:
        print("Gerado:", write_matrix(out, H, comments))
    else:
        sys.stdout.write(format_matrix(H, comments))
    a = ctx.args
    if getattr(a, "png", None):
        from render import save_png
        print("Gerado PNG 1-bit:", save_png(H, a.png))
    if getattr(a, "pdf", None):
        from render import report_pdf
        print("Gerado PDF:", report_pdf(H, a.pdf, titulo, [nivel, *extra]))


def _planner(ctx: Contexto, bound: int) -> Planner:
    return Planner(max(bound, 1), ctx.base_lengths, ctx.cfg.memory_cap_bytes)


# =========================
# Sequências
# =========================

def cmd_pair(ctx: Contexto) -> int:
    n = ctx.args.n
    S = realize(plan_pair(n))
    emit_sequences(ctx, S.seqs, ctx.args.out, ctx.comments(f"par 4-fase de comprimento {n}", S.report.message if S.report else ""))
    return EXIT_OK


def cmd_quad(ctx: Contexto) -> int:
    n = ctx.args.n
    plan = _planner(ctx, n).plan_quad(n)
    if plan is None:
        raise DigitNotCovered(n, 0)
    S = realize(plan, ctx.by_length)
    emit_sequences(ctx, S.seqs, ctx.args.out, ctx.comments(f"quádrupla de comprimento {n} ({plan.kind})"))
    return EXIT_OK


def cmd_set(ctx: Contexto) -> int:
    a, cfg = ctx.args, ctx.cfg
    res = build_arbitrary(a.n, a.P, cfg.verified_bound, ctx.corpus, cfg.certify_max_entries, cfg.memory_cap_bytes)
    info = f"n={a.n} P={res.P} dígitos={list(res.digits)} cardinalidade={res.plan.cardinality} nível={res.level}"
    if a.plan:
        print("Gerado:", write_plan(a.plan, res.plan, {"n": a.n, "P": res.P, "level": res.level}))
    if res.gcs is None:
        print(f"Só a receita: {info}")
        return EXIT_OK
    emit_sequences(ctx, res.gcs.seqs, a.out, ctx.comments(info))
    return EXIT_OK


def _cbs(ctx: Contexto, s1: int, s2: int) -> GcsSet:
    if (s1, s2) == (8, 7):
        return cbs_seed_87()
    if s1 == s2 + 1:
        if s2 == 0 or is_golay(s2):
            return cbs_from_pair(realize(plan_pair(s2)))
        if s2 in ctx.by_length:
            return ctx.by_length[s2]
        raise CorpusRequired(f"CBS({s1},{s2}) não está no corpus")
    if s1 == s2:
        return realize(_planner(ctx, s1).plan_f(s1), ctx.by_length)
    raise ShapeMismatch(f"CBS({s1},{s2}): use s1 = s2 + 1 ou s1 = s2")


def cmd_cbs(ctx: Contexto) -> int:
    a = ctx.args
    S = _cbs(ctx, a.s1, a.s2)
    emit_sequences(ctx, S.seqs, a.out, ctx.comments(f"CBS({a.s1},{a.s2})"))
    return EXIT_OK


# =========================
# Hadamard
# =========================

def cmd_hadamard_gs(ctx: Contexto) -> int:
    n = ctx.args.n
    plan = _planner(ctx, n).plan_quad(n)
    if plan is None:
        raise DigitNotCovered(n, 0)
    quad = realize(plan, ctx.by_length)
    H = goethals_seidel_8n(quad, ctx.args.level, ctx.cfg.hadamard_full_verify_max, ctx.args.jobs)
    emit_matrix(ctx, H, ctx.args.out, f"Goethals–Seidel: quádrupla {n}, ordem {H.n}")
    return EXIT_OK


def _parse_cbs_arg(txt: str) -> Tuple[int, int]:
    try:
        s1, s2 = (int(x) for x in txt.split(","))
    except ValueError:
        raise ShapeMismatch(f"--cbs espera 's1,s2' (veio {txt!r})") from None
    return s1, s2


def cmd_hadamard_sp(ctx: Contexto) -> int:
    a, cfg = ctx.args, ctx.cfg
    pairs_l = a.pairs or []
    cbs_s = [_parse_cbs_arg(x) for x in (a.cbs or [])]
    mult = a.mult or []
    k, d = len(pairs_l), len(cbs_s)
    if len(mult) != k + d:
        raise ShapeMismatch(f"--mult precisa de {k + d} valores ({k} pares + {d} CBS), veio {len(mult)}")
    order, block = hadamard_order_from_lengths(
        list(zip(pairs_l, mult[:k])), [(s1, s2, t) for (s1, s2), t in zip(cbs_s, mult[k:])])
    if order > cfg.matrix_build_max_order:
        raise BudgetExceeded(order, cfg.matrix_build_max_order, "ordem da matriz")

    pairs = [(realize(plan_pair(l)), realize(plan_pair(m))) for l, m in zip(pairs_l, mult[:k])]
    cbs_list = []
    for (s1, s2), t in zip(cbs_s, mult[k:]):
        G = realize(plan_pair(t))
        cbs_list.append((_cbs(ctx, s1, s2), G, G))
    out = thm4_sequences(pairs, cbs_list)
    c, H = hadamard_from_supplementary(out, a.level, cfg.hadamard_full_verify_max, cfg.shortcut_crosscheck_max,
                                       a.jobs)
    if a.spseq:
        print("Gerado:", write_spseq(a.spseq, c, ctx.comments(f"sequência perfeita n={len(c)} sobre SP_{c.v}")))
    emit_matrix(ctx, H, a.out, f"bloco-circulante: n={out.n}, λ={list(out.offsets)}, bloco {block}")
    return EXIT_OK


def cmd_hadamard_plan(ctx: Contexto) -> int:
    a, cfg = ctx.args, ctx.cfg
    plan = asymptotic_plan(a.m, cfg.witness_bound, cfg.allow_trusted_thresholds, ctx.base_lengths, cfg.memory_cap_bytes)
    text = json.dumps(plan.to_dict(), indent=2, ensure_ascii=False) + "\n"
    emit_text(text, a.out)
    if a.build:
        H = build_from_plan(plan, ctx.by_length, cfg.matrix_build_max_order, a.level,
                            cfg.hadamard_full_verify_max, cfg.shortcut_crosscheck_max, ctx.base_lengths, a.jobs)
        if H is None:
            print(f"Ordem {plan.order} acima de {cfg.matrix_build_max_order}: matriz não construída")
        else:
            emit_matrix(ctx, H, a.matrix, f"plano m={a.m}: ordem 2^{plan.t}·{a.m}")
    return EXIT_OK


def cmd_hadamard_curves(ctx: Contexto) -> int:
    a = ctx.args
    rows = asymptotic_curves(curve_points(a.lo, a.hi, a.step))
    if a.out:
        print("Gerado:", write_csv(a.out, CURVE_HEADER, rows, ctx.comments()))
    else:
        sys.stdout.write(format_csv(CURVE_HEADER, rows, ctx.comments()))
    return EXIT_OK


# =========================
# Densidade / cobertura
# =========================

def _build_set(ctx: Contexto):
    a = ctx.args
    return build_Sk(a.limit, a.k, a.dense, ctx.base_lengths, ctx.cfg.memory_cap_bytes)


def cmd_density(ctx: Contexto) -> int:
    a = ctx.args
    S = _build_set(ctx)
    rows = density_rows(S, a.samples)
    comments = ctx.comments(f"{S.kind} até {a.limit}")
    if a.out:
        print("Gerado:", write_csv(a.out, ("n", "rho", "density"), rows, comments))
    else:
        sys.stdout.write(format_csv(("n", "rho", "density"), rows, comments))
    return EXIT_OK


def cmd_coverage(ctx: Contexto) -> int:
    a = ctx.args
    S = None
    kind = f"S{a.k}D" if a.dense and a.k >= 2 else f"S{a.k}"
    if a.cache and Path(a.cache).exists():
        S = load_length_set(a.cache)
        if S.kind != kind or S.bound != a.limit:
            log.warning("cache %s é %s até %d; reconstruindo", a.cache, S.kind, S.bound)
            S = None
    if S is None:
        S = _build_set(ctx)
        if a.cache:
            save_length_set(a.cache, S)
    gap, count = coverage(S)
    rows = [(a.k, int(a.dense), a.limit, gap, count)]
    sys.stdout.write(format_csv(("k", "dense", "limit", "first_gap", "count"), rows, ctx.comments()))
    return EXIT_OK


def cmd_btable(ctx: Contexto) -> int:
    """Linhas gamma,i,b,label: maior b com N·2^i representável para todo N <= b."""
    a = ctx.args
    if a.literature:
        base: Optional[Tuple[int, ...]] = LITERATURE_BASE_LENGTHS
    elif a.corpus:
        base = ctx.base_lengths
    else:
        base = None
    rows = []
    for i in a.i:
        bv = compute_b_table(a.gamma, i, a.limit, base, a.strict, ctx.cfg.memory_cap_bytes)
        log.info("b_%d^(%d) = %d (%s)", bv.gamma, bv.i, bv.b, bv.label)
        rows.append((bv.gamma, bv.i, bv.b, bv.label))
    header = ("gamma", "i", "b", "label")
    comments = ctx.comments(f"tabela b até {a.limit}")
    if a.out:
        print("Gerado:", write_csv(a.out, header, rows, comments))
    else:
        sys.stdout.write(format_csv(header, rows, comments))
    return EXIT_OK


# =========================
# Verificação / corpus
# =========================

def cmd_verify(ctx: Contexto) -> int:
    p = Path(ctx.args.file)
    head = p.read_bytes()[:64]
    if head.startswith(b"HMAT") or head.lstrip().startswith(b"order"):
        H = read_matrix(p)
        rep = verify_hadamard(H, ctx.args.level, ctx.cfg.hadamard_full_verify_max, ctx.args.jobs)
    elif head.lstrip().startswith(b"#spseq"):
        c = parse_spseq(p)
        lag = is_perfect(c)
        ok = lag is None
        msg = "ok: sequência perfeita" if ok else ("entrada nula" if lag == -1 else f"lag {lag} não nulo")
        print(f"{p}: {msg}")
        return EXIT_OK if ok else 1
    else:
        rep = verify_gcs_set(parse_sequences(p))
    print(f"{p}: {rep.message} [{rep.level}]")
    return EXIT_OK if rep.ok else 1


def cmd_corpus_load(ctx: Contexto) -> int:
    a = ctx.args
    ok = load_base_corpus(Path(a.path), skip_invalid=a.skip_invalid)
    bs = sorted(S.lengths[2] for S in ok)
    print(f"{len(ok)} CBS aceitas: b = {bs}")
    return EXIT_OK


# =========================
# CLI
# =========================

def _add_comuns(p: ArgumentParser) -> None:
    p.add_argument("--config", help="JSON de configuração (padrão: data/config.json).")
    p.add_argument("--corpus", help="Arquivo do corpus de sequências base.")
    p.add_argument("--memory-cap", help="Teto de memória (ex.: 512M, 2G).")
    p.add_argument("--jobs", type=int, default=1, help="Threads (o resultado não depende do valor).")
    p.add_argument("--stamp", action="store_true", help="Grava '# gerado em <data>' nas saídas de texto.")
    p.add_argument("--verbose", action="store_true", help="Mostra o log INFO.")


def build_parser() -> ArgumentParser:
    p = ArgumentParser(description="Sequências complementares de Golay e matrizes de Hadamard.")
    _add_comuns(p)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("pair", help="Par 4-fase de comprimento n (número de Golay).")
    s.add_argument("n", type=int)
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_pair)

    s = sub.add_parser("quad", help="Quádrupla 4-fase de comprimento n.")
    s.add_argument("n", type=int)
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_quad)

    s = sub.add_parser("set", help="Conjunto GCS de comprimento arbitrário n.")
    s.add_argument("n", type=int)
    s.add_argument("-P", type=int, default=None, help="Base P (padrão: maior de {2,10,26}·S1 <= limite verificado + 1).")
    s.add_argument("--plan", help="Grava a receita JSON.")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_set)

    s = sub.add_parser("cbs", help="CBS(s1, s2).")
    s.add_argument("s1", type=int)
    s.add_argument("s2", type=int)
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_cbs)

    h = sub.add_parser("hadamard", help="Matrizes de Hadamard.")
    hs = h.add_subparsers(dest="hcmd", required=True)

    def saida_matriz(x: ArgumentParser) -> None:
        x.add_argument("-o", "--out", help="Arquivo de saída (.hmat = binário).")
        x.add_argument("--png", help="Exporta PNG 1-bit.")
        x.add_argument("--pdf", help="Exporta relatório PDF.")
        x.add_argument("--level", choices=["auto", "full", "shortcut"], default="auto")

    s = hs.add_parser("gs", help="Goethals–Seidel: ordem 8n a partir da quádrupla de comprimento n.")
    s.add_argument("n", type=int)
    saida_matriz(s)
    s.set_defaults(func=cmd_hadamard_gs)

    s = hs.add_parser("sp", help="Bloco-circulante via sequência perfeita sobre SP_v.")
    s.add_argument("--pairs", type=int, nargs="*", help="Comprimentos dos pares (e, f).")
    s.add_argument("--cbs", nargs="*", help="CBS como s1,s2.")
    s.add_argument("--mult", type=int, nargs="*", help="Multiplicadores: um por par, depois um t por CBS.")
    s.add_argument("--spseq", help="Grava a sequência perfeita.")
    saida_matriz(s)
    s.set_defaults(func=cmd_hadamard_sp)

    s = hs.add_parser("plan", help="Plano assintótico para ordem 2^t·m (m ímpar).")
    s.add_argument("m", type=int)
    s.add_argument("--build", action="store_true", help="Constrói a matriz se couber no orçamento.")
    s.add_argument("--matrix", help="Arquivo da matriz construída.")
    s.add_argument("--literature", action="store_true", help="Aceita todas as CBS publicadas (b <= 38).")
    s.add_argument("-o", "--out", help="JSON do plano.")
    s.add_argument("--png")
    s.add_argument("--pdf")
    s.add_argument("--level", choices=["auto", "full", "shortcut"], default="auto")
    s.set_defaults(func=cmd_hadamard_plan)

    s = hs.add_parser("curves", help="CSV dos expoentes t(m) das construções conhecidas.")
    s.add_argument("--lo", type=int, default=2)
    s.add_argument("--hi", type=int, default=200)
    s.add_argument("--step", type=int, default=2)
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_hadamard_curves)

    for nome, func, ajuda in (("density", cmd_density, "CSV n,rho,density de S_k."),
                              ("coverage", cmd_coverage, "Primeira lacuna e contagem de S_k.")):
        s = sub.add_parser(nome, help=ajuda)
        s.add_argument("--k", type=int, required=True)
        s.add_argument("--dense", action="store_true")
        s.add_argument("--limit", type=int, required=True)
        s.add_argument("--literature", action="store_true", help="Aceita todas as CBS publicadas (b <= 38).")
        if nome == "density":
            s.add_argument("--samples", type=int, default=50)
            s.add_argument("-o", "--out")
        else:
            s.add_argument("--cache", help="Arquivo GLS1 reaproveitado entre execuções.")
        s.set_defaults(func=func)

    s = sub.add_parser("btable", help="Tabela b_gamma^(i) das somas de pares e CBS.")
    s.add_argument("--gamma", type=int, choices=GAMMAS, required=True)
    s.add_argument("--i", type=int, nargs="+", default=[0], help="Expoentes de escala 2^i.")
    s.add_argument("--limit", type=int, required=True)
    s.add_argument("--literature", action="store_true", help="Aceita todas as CBS publicadas (b <= 38).")
    s.add_argument("--strict", action="store_true", help="Falha sem corpus em vez de usar B restrito.")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_btable)

    s = sub.add_parser("verify", help="Verifica sequências, SPSeq ou matriz.")
    s.add_argument("file")
    s.add_argument("--level", choices=["auto", "full", "shortcut"], default="auto")
    s.set_defaults(func=cmd_verify)

    c = sub.add_parser("corpus", help="Corpus de sequências base.")
    cs = c.add_subparsers(dest="ccmd", required=True)
    s = cs.add_parser("load", help="Lê e verifica o corpus.")
    s.add_argument("path")
    s.add_argument("--skip-invalid", action="store_true", help="Descarta registros inválidos em vez de falhar.")
    s.set_defaults(func=cmd_corpus_load)
    return p


def _validar_args(a: Namespace) -> None:
    if a.jobs < 1:
        raise ValueError("--jobs precisa ser >= 1")
    for nome in ("n", "m", "limit", "k", "samples"):
        v = getattr(a, nome, None)
        if v is not None and v < 1:
            raise ValueError(f"{nome} precisa ser >= 1")
    if any(i < 0 for i in getattr(a, "i", None) or ()):
        raise ValueError("--i precisa ser >= 0")


def run(argv: Optional[Sequence[str]] = None) -> int:
    p = build_parser()
    args = p.parse_args(argv)
    logging.basicConfig(format="[%(levelname)s] %(message)s",
                        level=logging.INFO if args.verbose else logging.WARNING, force=True)
    try:
        _validar_args(args)
        ctx = Contexto(args)
        log.info("comando %s (jobs=%d)", args.cmd, args.jobs)
        return args.func(ctx)
    except GcsError as exc:
        print("Erro:", exc, file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print("Erro:", exc, file=sys.stderr)
        return EXIT_ENTRADA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
