"""Space-time diagrams of finite evolutions, as text grids or binary PGM.

Row 0 is the initial word; each later row is one application of the rule.
On a finite word the computable region narrows: a one-sided rule consumes
``hi`` cells on the right per step, a two-sided rule consumes from both
ends.  Rows carry their absolute cell offsets so the text renderer can
align them; the PGM renderer crops to the rectangle of cells defined in
every row.
"""

from __future__ import annotations

from .core import LocalRule, Sidedness, Word, apply_word

__all__ = ["spacetime_rows", "render_text", "render_pgm"]

_GLYPHS = "0123456789abcdefghijklmnopqrstuvwxyz"


def spacetime_rows(rule: LocalRule, initial: Word, steps: int) -> list[tuple[int, Word]]:
    """Evolve a finite word, returning ``steps + 1`` rows of (offset, word)."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    rows = [(0, tuple(initial))]
    s, cur = 0, tuple(initial)
    for _ in range(steps):
        if len(cur) < rule.width:
            raise ValueError(
                f"word exhausted after {len(rows) - 1} steps; "
                "start from a longer initial word"
            )
        out = apply_word(rule, cur)
        s = s - rule.lo
        if rule.sidedness is Sidedness.ONE_SIDED and s < 0:
            out = out[-s:]
            s = 0
            if not out:
                raise ValueError("word exhausted; start from a longer initial word")
        rows.append((s, out))
        cur = out
    return rows


def render_text(rule: LocalRule, initial: Word, steps: int) -> str:
    """One text line per time step, states as digits then letters."""
    if rule.source.size > len(_GLYPHS):
        raise ValueError("text rendering supports at most 36 states")
    rows = spacetime_rows(rule, initial, steps)
    base = min(off for off, _ in rows)
    lines = []
    for off, word in rows:
        lines.append(" " * (off - base) + "".join(_GLYPHS[s] for s in word))
    return "\n".join(lines) + "\n"


def render_pgm(rule: LocalRule, initial: Word, steps: int) -> bytes:
    """Binary (P5) PGM; gray levels scale states 0..n-1 onto 0..255.

    The image is cropped to the cells computed in every row, so each pixel
    is a real state and no padding value is invented.
    """
    rows = spacetime_rows(rule, initial, steps)
    left = max(off for off, _ in rows)
    right = min(off + len(word) for off, word in rows)
    if right <= left:
        raise ValueError("no common cells across all steps; use a longer word")
    width = right - left
    height = len(rows)
    n = rule.source.size
    body = bytearray()
    for off, word in rows:
        for x in range(left, right):
            body.append((word[x - off] * 255) // (n - 1) if n > 1 else 0)
    header = f"P5\n{width} {height}\n255\n".encode()
    return header + bytes(body)
