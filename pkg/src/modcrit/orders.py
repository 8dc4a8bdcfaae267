"""Monomial orders and their extension to free modules.

Every order is exposed as a *key* function returning a flat tuple of ints;
larger keys are larger terms.  Flat integer keys let the reduction loop keep
negated keys in a min-heap.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["MonomialOrder", "ModuleOrder", "grevlex", "lex", "elimination_order", "parse_order"]

_KINDS = ("lex", "grevlex")


def _grevlex_key(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on ``nvars`` variables.

    ``blocks`` is a tuple of ``(size, kind)`` pairs; a single block is a plain
    ``lex`` or ``grevlex`` order, several blocks give a product (elimination)
    order in which earlier blocks dominate.
    """

    blocks: tuple

    @property
    def nvars(self) -> int:
        return sum(size for size, _ in self.blocks)

    @property
    def signature(self) -> str:
        if len(self.blocks) == 1:
            return self.blocks[0][1]
        return "block(" + ",".join(f"{s}:{k}" for s, k in self.blocks) + ")"

    def key(self, e) -> tuple:
        if len(self.blocks) == 1:
            kind = self.blocks[0][1]
            return tuple(e) if kind == "lex" else _grevlex_key(e)
        out = ()
        start = 0
        for size, kind in self.blocks:
            part = e[start:start + size]
            out += tuple(part) if kind == "lex" else _grevlex_key(part)
            start += size
        return out

    def extend(self, extra: int, kind: str = "grevlex", front: bool = True) -> "MonomialOrder":
        """Add ``extra`` variables in their own block, eliminated first when ``front``."""
        if front:
            return MonomialOrder(((extra, kind),) + self.blocks)
        return MonomialOrder(self.blocks + ((extra, kind),))


def grevlex(n: int) -> MonomialOrder:
    return MonomialOrder(((n, "grevlex"),))


def lex(n: int) -> MonomialOrder:
    return MonomialOrder(((n, "lex"),))


def elimination_order(first: int, rest: int, kind: str = "grevlex") -> MonomialOrder:
    """Block order eliminating the first ``first`` variables."""
    if first == 0:
        return MonomialOrder(((rest, kind),))
    if rest == 0:
        return MonomialOrder(((first, kind),))
    return MonomialOrder(((first, kind), (rest, kind)))


def parse_order(text: str, nvars: int) -> MonomialOrder:
    text = text.strip()
    if text in _KINDS:
        return MonomialOrder(((nvars, text),))
    if text.startswith("block(") and text.endswith(")"):
        blocks = []
        for part in text[6:-1].split(","):
            size, kind = part.split(":")
            if kind not in _KINDS:
                raise ValueError(f"unknown order kind {kind!r}")
            blocks.append((int(size), kind))
        order = MonomialOrder(tuple(blocks))
        if order.nvars != nvars:
            raise ValueError(f"block sizes sum to {order.nvars}, ring has {nvars} variables")
        return order
    raise ValueError(f"unknown monomial order {text!r}")


@dataclass(frozen=True)
class ModuleOrder:
    """Extension of a monomial order to terms ``x^a * e_c`` of a free module.

    ``scheme`` is ``"pot"`` (position over term, lower component index
    dominates) or ``"top"`` (term over position).  With ``split = r`` every
    term in components ``< r`` dominates every term in components ``>= r``;
    the scheme then applies inside each group.  Split orders drive syzygy,
    kernel and lifting computations.
    """

    mono: MonomialOrder
    scheme: str = "pot"
    split: int | None = None

    @property
    def signature(self) -> str:
        s = f"{self.mono.signature}/{self.scheme}"
        if self.split is not None:
            s += f"/split{self.split}"
        return s

    def key(self, c: int, e) -> tuple:
        mk = self.mono.key(e)
        inner = (-c,) + mk if self.scheme == "pot" else mk + (-c,)
        if self.split is None:
            return inner
        return (0 if c < self.split else -1,) + inner
