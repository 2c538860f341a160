"""Deterministic SVG rendering of attention alignment heatmaps."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .decode import AttentionMatrix

CELL = 36
LABEL_W = 120
LABEL_H = 110
FONT = "font-family='sans-serif' font-size='12'"


def render_attention_svg(matrix: AttentionMatrix) -> str:
    """Grayscale grid with source tokens as columns and targets as rows.

    Cell luminance maps linearly from weight 0 (black) to 1 (white); the
    output bytes are identical for identical matrices.
    """
    rows = matrix.rows
    if rows.size == 0:
        raise ValueError("empty attention matrix")
    n_rows, n_cols = rows.shape
    if n_cols != len(matrix.source_tokens) or n_rows != len(matrix.target_tokens):
        raise ValueError(
            f"matrix {rows.shape} does not match axis labels "
            f"({len(matrix.target_tokens)} x {len(matrix.source_tokens)})"
        )

    width = LABEL_W + n_cols * CELL + 10
    height = LABEL_H + n_rows * CELL + 10
    out = [
        f"<svg xmlns='http://www.w3.org/2000/svg' width='{width}' height='{height}'>",
        "<rect width='100%' height='100%' fill='white'/>",
    ]
    for j, tok in enumerate(matrix.source_tokens):
        x = LABEL_W + j * CELL + CELL // 2
        out.append(
            f"<text x='{x}' y='{LABEL_H - 8}' {FONT} text-anchor='start' "
            f"transform='rotate(-60 {x} {LABEL_H - 8})'>{escape(tok)}</text>"
        )
    for i, tok in enumerate(matrix.target_tokens):
        y = LABEL_H + i * CELL + CELL // 2 + 4
        out.append(
            f"<text x='{LABEL_W - 6}' y='{y}' {FONT} text-anchor='end'>{escape(tok)}</text>"
        )
    for i in range(n_rows):
        for j in range(n_cols):
            w = min(max(float(rows[i, j]), 0.0), 1.0)
            v = round(255 * w)
            out.append(
                f"<rect x='{LABEL_W + j * CELL}' y='{LABEL_H + i * CELL}' "
                f"width='{CELL}' height='{CELL}' fill='rgb({v},{v},{v})' "
                f"stroke='#888' stroke-width='0.5'>"
                f"<title>{escape(matrix.source_tokens[j])} / "
                f"{escape(matrix.target_tokens[i])}: {w:.4f}</title></rect>"
            )
    out.append("</svg>")
    return "\n".join(out)
