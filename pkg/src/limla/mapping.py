"""Segment description maps and their directed composition.

A maximal frozen stretch of tape behaves like a black box: all that
matters is, for each state and entry side, where the head eventually pops
out, or that it never does.  A SegmentMap records exactly that.  Entries
and exits are directed states: (q, RIGHT) on the input side means the
head walks into the segment at its left end moving right, (q, LEFT) means
entry at the right end moving left.  On the output side (p, RIGHT) means
the head leaves past the segment's right end and (p, LEFT) past its left
end; LOOP marks entries that never leave.

Composition of maps over adjacent segments is computed by a single marked
walk over a glued successor graph, so one composition plus the full
boundary departure table costs O(|Q|).  Every operation here is pure;
maps are immutable values.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .model import LEFT_MARKER, RIGHT_MARKER, RANKED, RIGHT


class _Loop:
    __slots__ = ()

    def __repr__(self):
        return "LOOP"


LOOP = _Loop()


class SizeMismatch(ValueError):
    pass


class EmptySegment(ValueError):
    pass


class DirectedState(NamedTuple):
    state: int
    dir: int  # RIGHT or LEFT

    @property
    def canon(self) -> int:
        return 2 * self.state + self.dir


def from_canon(i: int) -> DirectedState:
    return DirectedState(i >> 1, i & 1)


@dataclass(frozen=True)
class SegmentMap:
    """Total map over 2*q_count directed states; -1 encodes LOOP."""

    q_count: int
    table: tuple

    def __post_init__(self):
        if len(self.table) != 2 * self.q_count:
            raise ValueError("table must have one entry per directed state")


def apply(f: SegmentMap, s) -> DirectedState | _Loop:
    """Look up the exit for one entry; s is a DirectedState or (state, dir)."""
    out = f.table[2 * s[0] + s[1]]
    return LOOP if out < 0 else DirectedState(out >> 1, out & 1)


def transparent_map(q_count: int) -> SegmentMap:
    """The two-sided identity of composition: every entry passes straight through."""
    return SegmentMap(q_count, tuple(range(2 * q_count)))


def cf_idx(c, s: int) -> SegmentMap:
    """Single-cell map for the letter with symbol index s (cached per machine)."""
    m = c.cf_cache.get(s)
    if m is None:
        w = c.width
        tab = [0] * (2 * c.n_states)
        to_tab, mv_tab = c.to_tab, c.mv_tab
        for q in range(c.n_states):
            k = q * w + s
            out = 2 * to_tab[k] + mv_tab[k]
            tab[2 * q] = out      # one step always leaves a one-cell segment,
            tab[2 * q + 1] = out  # so the entry side is irrelevant
        m = SegmentMap(c.n_states, tuple(tab))
        c.cf_cache[s] = m
    return m


def _frozen_letter_index(aut, letter: str) -> int:
    c = aut.compiled
    if letter in (LEFT_MARKER, RIGHT_MARKER):
        raise ValueError("markers do not describe segments")
    i = c.sym_index.get(letter)
    if i is None or i >= c.n_letters:
        raise ValueError(f"unknown tape letter {letter!r}")
    if aut.mode == RANKED and c.ranks[i] != aut.dlimit.k:
        raise ValueError(f"letter {letter!r} has rank {c.ranks[i]}, not frozen")
    return i


def cf(aut, letter: str) -> SegmentMap:
    """Map describing a single frozen cell holding the given letter."""
    return cf_idx(aut.compiled, _frozen_letter_index(aut, letter))


@dataclass(frozen=True)
class CompositionResult:
    h: SegmentMap          # the composed map
    dep: tuple             # boundary departure table, canon-indexed, -1 = LOOP
    edges: int             # graph edges traversed; at most 4*|Q| per call


# Vertex blocks of the glued graph, each |Q| wide; vertex id = block * q + state.
# LINR / RINL are the external entries of the combined segment, BRIGHT / BLEFT
# the internal boundary crossings, LOUTL / ROUTR the external exits.  Gluing
# identifies the left part's rightward exits with the right part's rightward
# entries, and the right part's leftward exits with the left part's leftward
# entries.
LINR, RINL, BRIGHT, BLEFT, LOUTL, ROUTR = range(6)


def graph_successors(f: SegmentMap, g: SegmentMap) -> list:
    """Successor array of the glued graph; -1 where the underlying map loops.

    f drives blocks LINR and BLEFT, g drives BRIGHT and RINL.  Exit blocks
    have no successors, so out-degree is at most one everywhere.
    """
    q = f.q_count
    nxt = [-1] * (6 * q)
    ft, gt = f.table, g.table
    for s in range(q):
        for vert, out in ((LINR * q + s, ft[2 * s]), (BLEFT * q + s, ft[2 * s + 1])):
            if out >= 0:
                p = out >> 1
                nxt[vert] = (BRIGHT * q + p) if (out & 1) == RIGHT else (LOUTL * q + p)
        for vert, out in ((BRIGHT * q + s, gt[2 * s]), (RINL * q + s, gt[2 * s + 1])):
            if out >= 0:
                p = out >> 1
                nxt[vert] = (ROUTR * q + p) if (out & 1) == RIGHT else (BLEFT * q + p)
    return nxt


def compose_full(f: SegmentMap, g: SegmentMap) -> CompositionResult:
    """Compose adjacent segment maps and compute the boundary departure table.

    One walk per origin, marking every internal vertex it visits.  A walk
    ends at an exit vertex, at a dead end (the underlying map looped), on
    its own mark (a cycle), or on another origin's mark, whose resolved
    outcome it inherits since the paths share their tail.  Marks persist
    across origins, so every edge is traversed at most once per call.
    Origins run in pinned order: LINR then RINL ascending for the composed
    map, then BRIGHT then BLEFT ascending for the departure table.
    """
    if f.q_count != g.q_count:
        raise SizeMismatch(f"cannot compose maps over {f.q_count} and {g.q_count} states")
    q = f.q_count
    nxt = graph_successors(f, g)
    exit_lo = LOUTL * q
    routr_lo = ROUTR * q
    marks = [-1] * (6 * q)
    res = [0] * (6 * q)
    edges = 0

    def walk(origin: int) -> int:
        nonlocal edges
        u = origin
        while True:
            if u < 0:
                val = -1
                break
            if u >= exit_lo:
                val = 2 * (u - routr_lo) if u >= routr_lo else 2 * (u - exit_lo) + 1
                break
            m = marks[u]
            if m == origin:
                val = -1
                break
            if m >= 0:
                val = res[m]
                break
            marks[u] = origin
            u = nxt[u]
            edges += 1
        res[origin] = val
        return val

    h = [0] * (2 * q)
    for s in range(q):
        h[2 * s] = walk(LINR * q + s)
    for s in range(q):
        h[2 * s + 1] = walk(RINL * q + s)
    dep = [0] * (2 * q)
    for s in range(q):
        u = BRIGHT * q + s
        m = marks[u]
        dep[2 * s] = res[m] if m >= 0 else walk(u)
    for s in range(q):
        u = BLEFT * q + s
        m = marks[u]
        dep[2 * s + 1] = res[m] if m >= 0 else walk(u)
    return CompositionResult(SegmentMap(q, tuple(h)), tuple(dep), edges)


def departure(dep, s) -> DirectedState | _Loop:
    """Exit of the combined segment after a boundary crossing in directed state s.

    (p, RIGHT) asks about the head crossing the internal boundary rightward
    in state p, (p, LEFT) about crossing it leftward.
    """
    if isinstance(dep, CompositionResult):
        dep = dep.dep
    out = dep[2 * s[0] + s[1]]
    return LOOP if out < 0 else DirectedState(out >> 1, out & 1)


def describe_indices(c, idxs) -> list:
    """Brute-force description of a frozen letter-index sequence.

    Walks the head from each of the 2|Q| entries with a per-entry
    (position, state) visited set; a repeat means the head never leaves.
    Independent of composition, which makes it the oracle for cf and for
    the coalescing done by the linear engine.
    """
    q = c.n_states
    w = c.width
    to_tab, mv_tab = c.to_tab, c.mv_tab
    length = len(idxs)
    table = []
    for ci in range(2 * q):
        state = ci >> 1
        pos = 0 if (ci & 1) == RIGHT else length - 1
        seen = set()
        while True:
            key = pos * q + state
            if key in seen:
                out = -1
                break
            seen.add(key)
            k = state * w + idxs[pos]
            state = to_tab[k]
            if mv_tab[k] == RIGHT:
                pos += 1
                if pos == length:
                    out = 2 * state
                    break
            else:
                pos -= 1
                if pos < 0:
                    out = 2 * state + 1
                    break
        table.append(out)
    return table


def describe_segment(aut, letters) -> SegmentMap:
    """Map describing a non-empty sequence of frozen letters, by direct walk."""
    letters = list(letters)
    if not letters:
        raise EmptySegment("a described segment holds at least one letter")
    idxs = [_frozen_letter_index(aut, tok) for tok in letters]
    return SegmentMap(aut.compiled.n_states, tuple(describe_indices(aut.compiled, idxs)))


def oracle_compose(f: SegmentMap, g: SegmentMap):
    """Unmemoized reference for compose_full: plain path following.

    Bounces between the two part tables with a fresh visited set per
    entry.  Returns (h_table, dep_table) as tuples.
    """
    if f.q_count != g.q_count:
        raise SizeMismatch("size mismatch")
    q = f.q_count

    def follow(side: int, ci: int) -> int:
        seen = set()
        while True:
            if (side, ci) in seen:
                return -1
            seen.add((side, ci))
            out = (f.table if side == 0 else g.table)[ci]
            if out < 0:
                return -1
            p, dr = out >> 1, out & 1
            if side == 0:
                if dr == RIGHT:
                    side, ci = 1, 2 * p      # crosses the boundary rightward
                else:
                    return out               # leaves the combined segment leftward
            else:
                if dr == RIGHT:
                    return out               # leaves rightward
                side, ci = 0, 2 * p + 1      # crosses back leftward

    h = []
    dep = []
    for s in range(q):
        h.append(follow(0, 2 * s))       # entry (s, RIGHT) starts in the left part
        h.append(follow(1, 2 * s + 1))   # entry (s, LEFT) starts in the right part
    for s in range(q):
        dep.append(follow(1, 2 * s))     # crossing rightward enters the right part
        dep.append(follow(0, 2 * s + 1))  # crossing leftward enters the left part
    return tuple(h), tuple(dep)


def dump_segment_map(f: SegmentMap, state_names) -> list:
    """Debug dump, one line per entry in canonical order."""
    lines = []
    for ci in range(2 * f.q_count):
        src = f"{state_names[ci >> 1]},{'R' if (ci & 1) == RIGHT else 'L'}"
        out = f.table[ci]
        if out < 0:
            dst = "LOOP"
        else:
            dst = f"{state_names[out >> 1]},{'R' if (out & 1) == RIGHT else 'L'}"
        lines.append(f"{src} -> {dst}")
    return lines
