"""Linear-time engine over the linked-list tape.

Each loop iteration handles one cell.  Letters behave as in the reference
engine until the visit that makes the cell permanently unwritable; that
visit triggers a deletion scan, which replaces the cell with the map
describing it and coalesces it with any adjacent map cells, so no two map
cells are ever adjacent.  Arriving on a map cell costs a single table
lookup that teleports the head across the whole frozen segment.

The freeze trigger is deliberately keyed on the written letter, not on
the letter read: ranked rewrites may jump several ranks at once, so a
cell can become frozen on a visit that read a low rank.  Without this the
frozen letter would persist and no case could handle its next visit.

A map lookup answers LOOP only for loops inside one frozen segment.
Loops that bounce off the end markers never stay inside a segment, so the
engine also keeps an exact stretch detector: a set of (position, state,
arrival direction) triples, cleared on every letter visit (each such
visit advances a bounded per-cell budget and changes what the engine will
do there next).  Between letter visits the tape is completely static, so
a repeated triple replays forever.  Arrival direction matters because map
cells, unlike letters, react to it.
"""
from __future__ import annotations

from dataclasses import dataclass

from .model import (
    ACCEPT, LOOP_DETECTED, MAP_LOOP, RANKED, REJECT, RIGHT,
    d_of, word_indices,
)
from .mapping import DirectedState, cf_idx, compose_full, describe_indices
from .outcome import BudgetExceeded, RunOutcome, decode_projection, regular_projection
from .tape import LETTER, ListTape, SEGMAP


class ShadowMismatch(Exception):
    """A map cell disagrees with the brute-force description of its segment."""


@dataclass
class ScanResult:
    p: DirectedState
    rejected: bool
    merged_left: bool
    merged_right: bool
    segment: tuple
    compose_calls: int
    edges_max: int


def deletion_scan(tape: ListTape, i: int, p: DirectedState, g) -> ScanResult:
    """Freeze-time coalescing at cell i.

    g is the single-cell map of the letter just written at i and p the
    directed result of the transition there.  If the left neighbour is a
    map f, the two segments merge: when p points left the head is about
    to cross into f's segment, so p is rerouted through the departure
    table of (f, g), rejecting on LOOP; then g becomes f composed with g
    and the neighbour is unlinked.  The right neighbour is handled the
    same way afterwards, with the possibly rerouted p.  On success cell i
    holds the merged map and both its neighbours are letters or markers.
    """
    kind = tape.kind
    fmap = tape.fmap
    state, dr = p
    calls = 0
    edges = 0
    merged_left = merged_right = False

    left = tape.prev[i]
    if kind[left] == SEGMAP:
        comp = compose_full(fmap[left], g)
        calls += 1
        edges = comp.edges
        if dr == 1:  # heading left, into the merged territory
            out = comp.dep[2 * state + 1]
            if out < 0:
                return ScanResult(DirectedState(state, dr), True, merged_left,
                                  merged_right, (tape.prev[i] + 1, tape.nxt[i] - 1),
                                  calls, edges)
            state, dr = out >> 1, out & 1
        g = comp.h
        tape.unlink(left)
        merged_left = True

    right = tape.nxt[i]
    if kind[right] == SEGMAP:
        comp = compose_full(g, fmap[right])
        calls += 1
        if comp.edges > edges:
            edges = comp.edges
        if dr == RIGHT:
            out = comp.dep[2 * state]
            if out < 0:
                return ScanResult(DirectedState(state, dr), True, merged_left,
                                  merged_right, (tape.prev[i] + 1, tape.nxt[i] - 1),
                                  calls, edges)
            state, dr = out >> 1, out & 1
        g = comp.h
        tape.unlink(right)
        merged_right = True

    kind[i] = SEGMAP
    fmap[i] = g
    tape.sym[i] = -1
    return ScanResult(DirectedState(state, dr), False, merged_left, merged_right,
                      (tape.prev[i] + 1, tape.nxt[i] - 1), calls, edges)


def _shadow_check(c, tape: ListTape, i: int, shadow_letters) -> None:
    if tape.kind[tape.prev[i]] == SEGMAP or tape.kind[tape.nxt[i]] == SEGMAP:
        raise ShadowMismatch(f"adjacent segment maps around cell {i}")
    lo = tape.prev[i] + 1
    hi = tape.nxt[i] - 1
    expected = describe_indices(c, shadow_letters[lo - 1:hi])
    if tuple(expected) != tape.fmap[i].table:
        raise ShadowMismatch(f"map at cell {i} does not describe cells {lo}..{hi}")


def run_linear(aut, word, *, trace: bool = False, shadow: bool = False,
               max_steps: int | None = None) -> RunOutcome:
    """Run the deleting engine on a word; requires validate_automaton(aut).ok.

    With shadow=True a parallel letter array mirrors what the reference
    tape would hold, and after every deletion scan the stored map is
    compared against the brute-force description of its segment
    (ShadowMismatch on any disagreement).  Verdicts always match
    run_naive; steps here count loop iterations.
    """
    c = aut.compiled
    tape = ListTape.from_word(aut, word)
    n = tape.n
    kind = tape.kind
    sym = tape.sym
    visits = tape.visits
    fmap = tape.fmap
    prev = tape.prev
    nxt = tape.nxt

    lo = c.n_letters
    width = c.width
    nq = c.n_states
    to_tab, wr_tab, mv_tab = c.to_tab, c.wr_tab, c.mv_tab
    accepting = c.accepting
    ranks = c.ranks

    ranked = aut.mode == RANKED
    d_n = aut.dlimit.k if ranked else d_of(aut.dlimit, n)

    state = c.start_idx
    dr = RIGHT
    pos = 1
    steps = 0
    letter_moves = map_jumps = scans = marker_moves = 0
    writes = 0
    last_write = 0
    cell_writes = [0] * (n + 2)
    compose_calls = 0
    edges_max = 0
    stretch = set()
    tr = [] if trace else None
    shadow_letters = list(sym[1:n + 1]) if shadow else None
    verdict = None
    reason = None

    if pos == n + 1 and accepting[state]:
        verdict = ACCEPT
    else:
        while True:
            if max_steps is not None and steps >= max_steps:
                raise BudgetExceeded(steps)
            k0 = kind[pos]
            if k0 == LETTER:
                stretch.clear()
                s = sym[pos]
                k = state * width + s
                ns = to_tab[k]
                w = wr_tab[k]
                mv = mv_tab[k]
                v = visits[pos] + 1
                visits[pos] = v
                freeze = (ranks[w] == d_n) if ranked else (v >= d_n)
                if not freeze:
                    sym[pos] = w
                    if w != s:
                        writes += 1
                        cell_writes[pos] += 1
                        last_write = steps + 1
                    if tr is not None:
                        tr.append((steps + 1, pos, state, s, w, mv, False,
                                   0, False, False, -1, -1))
                    if shadow_letters is not None:
                        shadow_letters[pos - 1] = w
                    letter_moves += 1
                    steps += 1
                    state = ns
                    dr = mv
                else:
                    x = w if (ranked or v <= d_n) else s
                    if x != s:
                        writes += 1
                        cell_writes[pos] += 1
                        last_write = steps + 1
                    was_frozen = (not ranked) and (v - 1 >= d_n)
                    g = cf_idx(c, x)
                    sc = deletion_scan(tape, pos, DirectedState(ns, mv), g)
                    scans += 1
                    compose_calls += sc.compose_calls
                    if sc.edges_max > edges_max:
                        edges_max = sc.edges_max
                    if tr is not None:
                        tr.append((steps + 1, pos, state, s, x, mv, was_frozen,
                                   1, sc.merged_left, sc.merged_right,
                                   sc.segment[0], sc.segment[1]))
                    steps += 1
                    if sc.rejected:
                        verdict, reason = REJECT, MAP_LOOP
                        break
                    if shadow_letters is not None:
                        shadow_letters[pos - 1] = x
                        _shadow_check(c, tape, pos, shadow_letters)
                    else:
                        assert kind[prev[pos]] != SEGMAP and kind[nxt[pos]] != SEGMAP
                    state, dr = sc.p
            elif k0 == SEGMAP:
                key = ((pos * nq + state) << 1) | dr
                if key in stretch:
                    verdict, reason = REJECT, LOOP_DETECTED
                    break
                stretch.add(key)
                out = fmap[pos].table[2 * state + dr]
                map_jumps += 1
                steps += 1
                if out < 0:
                    verdict, reason = REJECT, MAP_LOOP
                    break
                if tr is not None:
                    tr.append((steps, pos, state, -2, -2, out & 1, True,
                               2, False, False, -1, -1))
                state = out >> 1
                dr = out & 1
            else:  # marker
                key = ((pos * nq + state) << 1) | dr
                if key in stretch:
                    verdict, reason = REJECT, LOOP_DETECTED
                    break
                stretch.add(key)
                s = sym[pos]
                k = state * width + s
                ns = to_tab[k]
                mv = mv_tab[k]
                if tr is not None:
                    tr.append((steps + 1, pos, state, s, s, mv, False,
                               0, False, False, -1, -1))
                visits[pos] += 1
                marker_moves += 1
                steps += 1
                state = ns
                dr = mv
            pos = prev[pos] if dr == 1 else nxt[pos]
            if pos == n + 1 and accepting[state]:
                verdict = ACCEPT
                break

    return RunOutcome(
        verdict=verdict, reason=reason, steps=steps,
        moves={"letter": letter_moves, "map": map_jumps,
               "marker": marker_moves, "scan": scans},
        visits=visits, writes=writes, cell_writes=cell_writes,
        loop_iterations=steps, last_write_step=last_write, trace=tr,
        scans=scans, compose_calls=compose_calls, compose_edges_max=edges_max,
    )


def regular_trace_linear(aut, outcome: RunOutcome) -> list:
    """Token-form projection onto regular moves; equals the reference
    engine's projection on the same machine and word (up to the point
    where either loop detector fires, on rejecting runs)."""
    return decode_projection(aut, regular_projection(aut, outcome))
