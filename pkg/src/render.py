"""
render.py — Exporta uma matriz ±1 como PNG 1-bit (preto = -1) e um relatório PDF de uma página.
"""

from __future__ import annotations

import logging
from io import BytesIO
from pathlib import Path
from typing import Iterable

import numpy as np
from PIL import Image
from reportlab.lib.pagesizes import A4
from reportlab.lib.units import mm
from reportlab.lib.utils import ImageReader
from reportlab.pdfgen import canvas

from formatos import Destino, atomic_write
from hadamard import PMMatrix

log = logging.getLogger(__name__)

MAX_PX = 2048
THUMB_MM = 120.0


def matrix_image(H: PMMatrix, max_px: int = MAX_PX, cell: int = 1) -> Image.Image:
    """Imagem modo "1"; acima de max_px pixels amostra uma linha/coluna a cada passo."""
    step = max(1, -(-H.n // max_px))
    idx = np.arange(0, H.n, step)
    rows = []
    for i in idx.tolist():
        rows.append(H.neg_rows(i, i + 1)[0, idx])
    neg = np.vstack(rows) if rows else np.zeros((0, 0), dtype=bool)
    if cell > 1:
        neg = np.kron(neg, np.ones((cell, cell), dtype=bool))
    img = Image.fromarray(np.where(neg, 0, 255).astype(np.uint8), mode="L")
    return img.point(lambda x: 0 if x < 128 else 255, mode="1")


def save_png(H: PMMatrix, path: Destino, max_px: int = MAX_PX) -> Path:
    img = matrix_image(H, max_px, cell=max(1, 256 // max(1, H.n)))
    buf = BytesIO()
    img.save(buf, format="PNG", optimize=True)
    out = atomic_write(path, buf.getvalue())
    log.info("PNG 1-bit %s (%dx%d)", out, img.width, img.height)
    return out


def draw_text_mm(c: canvas.Canvas, text: str, x_mm: float, y_mm: float, font: str = "Helvetica", pt: float = 10) -> None:
    c.setFont(font, pt)
    c.drawString(x_mm * mm, y_mm * mm, text)


def report_pdf(H: PMMatrix, path: Destino, titulo: str = "Matriz de Hadamard",
               extra: Iterable[str] = (), max_px: int = 1024) -> Path:
    """Cabeçalho, ordem, bloco, nível de verificação e miniatura da matriz."""
    page_w, page_h = A4
    buf = BytesIO()
    c = canvas.Canvas(buf, pagesize=A4)
    top = page_h / mm - 20

    draw_text_mm(c, titulo, 20, top, "Helvetica-Bold", 14)
    linhas = [f"ordem: {H.n}", f"bloco: {H.block or '-'}"]
    rep = H.report
    if rep is not None:
        linhas.append(f"verificação: {rep.level} ({'ok' if rep.ok else 'falhou'})")
        if rep.message:
            linhas.append(rep.message)
    else:
        linhas.append("verificação: não registrada")
    linhas += list(extra)
    y = top - 10
    for linha in linhas:
        draw_text_mm(c, linha, 20, y)
        y -= 6

    img = matrix_image(H, max_px).convert("L")
    lado = min(THUMB_MM, (y - 20))
    c.drawImage(ImageReader(img), 20 * mm, (y - 5 - lado) * mm, lado * mm, lado * mm)
    c.showPage()
    c.save()
    out = atomic_write(path, buf.getvalue())
    log.info("relatório PDF %s", out)
    return out


