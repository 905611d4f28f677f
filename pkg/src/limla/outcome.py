"""Run results, trace records and the regular-move projection.

In-memory traces are flat tuples for speed.  Both engines share the first
seven fields (step, pos, state, read, write, move, frozen), all symbol
and state fields as indices into the compiled machine; the linear engine
appends (case, merged_left, merged_right, seg_lo, seg_hi) where case is
0 = plain move, 1 = deletion scan, 2 = map jump.  Map jumps use -2 as
their read/write index.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .model import ACCEPT, RIGHT


class BudgetExceeded(Exception):
    def __init__(self, steps: int):
        super().__init__(f"step budget exceeded after {steps} steps")
        self.steps = steps


@dataclass
class RunOutcome:
    verdict: str                 # "accept" | "reject"
    reason: str | None           # None | LOOP_DETECTED | MAP_LOOP
    steps: int
    moves: dict                  # per-kind move counters
    visits: list                 # per-cell visit counts, index 0..n+1
    writes: int                  # content-changing writes
    cell_writes: list
    loop_iterations: int
    last_write_step: int = 0
    trace: list | None = None
    scans: int = 0
    compose_calls: int = 0
    compose_edges_max: int = 0

    @property
    def accepted(self) -> bool:
        return self.verdict == ACCEPT


def regular_projection(aut, outcome: RunOutcome) -> list:
    """Index-form projection onto regular moves, initial configuration first.

    A step is regular when it is applied at a marker or at a cell that was
    still writable on arrival.  Map jumps carry read = -2 and frozen = True,
    so one filter covers both engines' trace layouts.
    """
    if outcome.trace is None:
        raise ValueError("run was not recorded with trace enabled")
    c = aut.compiled
    lo = c.n_letters
    recs = [(c.start_idx, 1, -1, -1, -1)]
    for t in outcome.trace:
        if t[3] >= lo or not t[6]:
            recs.append((t[2], t[1], t[3], t[4], t[5]))
    return recs


def decode_projection(aut, recs) -> list:
    """Token form of a projection: (state, pos, read, write, move) tuples."""
    c = aut.compiled
    out = []
    for state, pos, rd, wr, mv in recs:
        if rd < 0:
            out.append((c.state_names[state], pos, None, None, None))
        else:
            out.append((c.state_names[state], pos, c.sym_names[rd], c.sym_names[wr],
                        "R" if mv == RIGHT else "L"))
    return out


_CASES = ("amove", "scan", "mapjump")


def trace_records(aut, outcome: RunOutcome, engine: str):
    """Yield the JSON-ready step records followed by the final record."""
    c = aut.compiled

    def tok(i):
        return "[map]" if i == -2 else c.sym_names[i]

    for t in outcome.trace or ():
        rec = {
            "step": t[0], "pos": t[1], "state": c.state_names[t[2]],
            "read": tok(t[3]), "write": tok(t[4]),
            "move": "R" if t[5] == RIGHT else "L", "frozen": bool(t[6]),
        }
        if engine == "linear":
            rec["case"] = _CASES[t[7]]
            if t[7] == 1:
                rec["merged_left"] = bool(t[8])
                rec["merged_right"] = bool(t[9])
                rec["segment"] = [t[10], t[11]]
        yield rec
    yield {
        "verdict": outcome.verdict,
        "reason": "loop" if outcome.reason is not None else None,
        "steps": outcome.steps,
    }


def write_trace(aut, outcome: RunOutcome, engine: str, dest) -> None:
    """Write the run as JSON lines to a path or file-like object."""
    if hasattr(dest, "write"):
        for rec in trace_records(aut, outcome, engine):
            dest.write(json.dumps(rec) + "\n")
    else:
        with open(dest, "w", encoding="utf-8") as fp:
            write_trace(aut, outcome, engine, fp)
