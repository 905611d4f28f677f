"""Doubly linked tape over a fixed cell arena.

Cell indices 0..n+1 are fixed for the whole run; index 0 holds the left
marker, n+1 the right marker, and neither is ever deleted.  Deleting a
cell only relinks its neighbours; dead cells are never reused, which
keeps indices stable for traces and shadow bookkeeping at O(n) memory.
"""
from __future__ import annotations

from .model import word_indices

MARKER = 0
LETTER = 1
SEGMAP = 2
DELETED = 3


class ListTape:
    __slots__ = ("n", "kind", "sym", "visits", "fmap", "prev", "nxt", "sym_names")

    def __init__(self, n, kind, sym, visits, fmap, prev, nxt, sym_names):
        self.n = n
        self.kind = kind
        self.sym = sym
        self.visits = visits
        self.fmap = fmap
        self.prev = prev
        self.nxt = nxt
        self.sym_names = sym_names

    @classmethod
    def from_word(cls, aut, word) -> "ListTape":
        c = aut.compiled
        syms = word_indices(aut, word)
        n = len(syms)
        return cls(
            n=n,
            kind=[MARKER] + [LETTER] * n + [MARKER],
            sym=[c.n_letters] + syms + [c.n_letters + 1],
            visits=[0] * (n + 2),
            fmap=[None] * (n + 2),
            prev=list(range(-1, n + 1)),
            nxt=list(range(1, n + 3)),
            sym_names=c.sym_names,
        )

    def unlink(self, i: int) -> None:
        """Remove interior cell i from the list; its index is never reused."""
        p = self.prev[i]
        nx = self.nxt[i]
        self.nxt[p] = nx
        self.prev[nx] = p
        self.kind[i] = DELETED
        self.fmap[i] = None

    def payload(self, i: int):
        k = self.kind[i]
        if k == MARKER:
            return ("marker", "left" if i == 0 else "right")
        if k == LETTER:
            return ("letter", self.sym_names[self.sym[i]], self.visits[i])
        if k == SEGMAP:
            return ("map", self.fmap[i])
        return ("deleted",)

    def cells(self) -> list:
        """Live cell indices in tape order."""
        out = [0]
        i = 0
        while i != self.n + 1:
            i = self.nxt[i]
            out.append(i)
        return out


def init_tape(aut, word) -> ListTape:
    return ListTape.from_word(aut, word)
