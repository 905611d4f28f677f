"""Machine model for rewrite-limited automata over a marked tape.

A machine walks a tape holding the input word between an immovable left
marker ``|>`` and right marker ``<|``.  Interior cells can be rewritten
only a bounded number of times.  In ranked mode every tape letter carries
a rank and each rewrite must strictly increase it, up to the limit d; a
letter of rank d can never change again.  In counted mode there are no
ranks: a cell freezes once it has been visited d(n) times, where n is the
input length.  Frozen cells stay readable forever but keep their content.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

LEFT_MARKER = "|>"
RIGHT_MARKER = "<|"
RESERVED_TOKENS = (LEFT_MARKER, RIGHT_MARKER, "->", "L", "R")

RANKED = "ranked"
COUNTED = "counted"

# Direction encoding is pinned: right = 0, left = 1.  It is the low bit of
# directed-state indices, so serialized dumps stay byte-stable.
RIGHT = 0
LEFT = 1

ACCEPT = "accept"
REJECT = "reject"

# Rejection reasons.
LOOP_DETECTED = "loop"      # a (position, state) pair repeated inside a write-free stretch
MAP_LOOP = "map-loop"       # a segment map reported that the head never leaves


@dataclass(frozen=True)
class DLimit:
    """Per-cell rewrite budget: a constant or a function of the input length."""

    kind: str  # "const" | "log2" | "sqrt" | "id"
    k: int = 0

    @staticmethod
    def const(k: int) -> "DLimit":
        return DLimit("const", k)

    def token(self) -> str:
        return str(self.k) if self.kind == "const" else self.kind


LOG2 = DLimit("log2")
SQRT = DLimit("sqrt")
ID = DLimit("id")


def d_of(spec: DLimit, n: int) -> int:
    """Evaluate the rewrite budget for an input of length n."""
    if n < 0:
        raise ValueError("input length must be >= 0")
    if spec.kind == "const":
        return spec.k
    if spec.kind == "log2":
        return n.bit_length() - 1 if n >= 1 else 0
    if spec.kind == "sqrt":
        return math.isqrt(n)
    if spec.kind == "id":
        return n
    raise ValueError(f"unknown d-limit kind {spec.kind!r}")


@dataclass(frozen=True)
class Transition:
    from_state: str
    read: str
    to_state: str
    write: str
    move: str  # "L" | "R"


def token_error(tok: str) -> str | None:
    """Reason a token cannot appear in the machine format, or None if fine."""
    if not tok:
        return "empty token"
    if tok in RESERVED_TOKENS:
        return f"reserved token {tok!r}"
    if any(ch.isspace() for ch in tok):
        return "token contains whitespace"
    if "#" in tok or ":" in tok:
        return "token contains '#' or ':'"
    return None


@dataclass(frozen=True)
class Automaton:
    """Complete machine description.

    Immutable after construction; validation is a separate pass
    (validate_automaton) so that malformed machines can be represented
    and reported on.  ``accepting`` is normalized to declaration order,
    making equal machines compare and serialize identically.
    """

    mode: str
    dlimit: DLimit
    states: tuple
    input_alphabet: tuple
    tape_alphabet: tuple
    ranks: dict          # letter -> rank; empty in counted mode
    start_state: str
    accepting: tuple
    delta: dict          # (state, read token) -> Transition

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "input_alphabet", tuple(self.input_alphabet))
        object.__setattr__(self, "tape_alphabet", tuple(self.tape_alphabet))
        order = {s: i for i, s in enumerate(self.states)}
        acc = sorted(set(self.accepting), key=lambda s: (order.get(s, len(order)), s))
        object.__setattr__(self, "accepting", tuple(acc))
        object.__setattr__(self, "ranks", dict(self.ranks))
        object.__setattr__(self, "delta", dict(self.delta))

    @cached_property
    def compiled(self) -> "CompiledAutomaton":
        return _compile(self)

    @cached_property
    def description_len(self) -> int:
        """Token count of the canonical serialized form."""
        from .fmt import serialize_machine

        return len(serialize_machine(self).split())


@dataclass
class CompiledAutomaton:
    """Dense integer form of a validated machine, shared by both engines.

    Symbols are indexed in tape declaration order; the two markers get the
    last two indices (left marker first).  Transition tables are flat lists
    indexed by state * width + symbol.
    """

    n_states: int
    n_letters: int
    width: int
    state_names: tuple
    state_index: dict
    sym_names: tuple
    sym_index: dict
    input_set: frozenset
    start_idx: int
    accepting: list
    to_tab: list
    wr_tab: list
    mv_tab: list
    ranks: tuple
    cf_cache: dict


def _compile(aut: Automaton) -> CompiledAutomaton:
    states = aut.states
    letters = aut.tape_alphabet
    state_index = {s: i for i, s in enumerate(states)}
    if len(state_index) != len(states):
        raise ValueError("duplicate state names")
    lo = len(letters)
    sym_names = letters + (LEFT_MARKER, RIGHT_MARKER)
    sym_index = {s: i for i, s in enumerate(sym_names)}
    if len(sym_index) != len(sym_names):
        raise ValueError("duplicate tape symbols")
    width = lo + 2
    size = len(states) * width
    to_tab = [0] * size
    wr_tab = [0] * size
    mv_tab = [0] * size
    for q, qi in state_index.items():
        base = qi * width
        for s, si in sym_index.items():
            t = aut.delta.get((q, s))
            if t is None:
                raise ValueError(f"transition table is not total: missing ({q!r}, {s!r}); "
                                 "run validate_automaton for a full report")
            try:
                to_tab[base + si] = state_index[t.to_state]
                wr_tab[base + si] = sym_index[t.write]
            except KeyError as e:
                raise ValueError(f"transition ({q!r}, {s!r}) references unknown token {e}") from None
            mv_tab[base + si] = RIGHT if t.move == "R" else LEFT
    start = state_index.get(aut.start_state)
    if start is None:
        raise ValueError(f"start state {aut.start_state!r} is not a state")
    accepting = [False] * len(states)
    for s in aut.accepting:
        if s in state_index:
            accepting[state_index[s]] = True
    ranks = tuple(aut.ranks.get(tok, 0) for tok in letters)
    input_set = frozenset(sym_index[t] for t in aut.input_alphabet if t in sym_index)
    return CompiledAutomaton(
        n_states=len(states), n_letters=lo, width=width,
        state_names=states, state_index=state_index,
        sym_names=sym_names, sym_index=sym_index,
        input_set=input_set, start_idx=start, accepting=accepting,
        to_tab=to_tab, wr_tab=wr_tab, mv_tab=mv_tab,
        ranks=ranks, cf_cache={},
    )


def word_tokens(word) -> list:
    """Split a word argument into symbol tokens (a str is one token per char)."""
    if isinstance(word, str):
        return list(word)
    return [str(t) for t in word]


def word_indices(aut: Automaton, word) -> list:
    """Symbol indices of a word; rejects tokens outside the input alphabet."""
    c = aut.compiled
    idx = c.sym_index
    allowed = c.input_set
    out = []
    for t in word_tokens(word):
        i = idx.get(t, -1)
        if i < 0 or i not in allowed:
            raise ValueError(f"symbol {t!r} is not in the input alphabet")
        out.append(i)
    return out


@dataclass(frozen=True)
class Violation:
    rule: str
    state: str | None = None
    symbol: str | None = None
    detail: str = ""

    def __str__(self):
        where = ""
        if self.state is not None or self.symbol is not None:
            where = f" at ({self.state}, {self.symbol})"
        tail = f": {self.detail}" if self.detail else ""
        return f"{self.rule}{where}{tail}"


@dataclass
class ValidationReport:
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_automaton(aut: Automaton) -> ValidationReport:
    """Check every definitional constraint; violations are data, not errors."""
    v = []

    def bad(rule, state=None, symbol=None, detail=""):
        v.append(Violation(rule, state, symbol, detail))

    ranked = aut.mode == RANKED
    if aut.mode not in (RANKED, COUNTED):
        bad("Mode", detail=f"unknown mode {aut.mode!r}")
        ranked = False
    if ranked and aut.dlimit.kind != "const":
        bad("ModeDLimit", detail="ranked mode requires a constant d")
    if aut.dlimit.kind == "const" and aut.dlimit.k < 0:
        bad("ModeDLimit", detail="d must be >= 0")

    for group, toks in (("state", aut.states), ("input", aut.input_alphabet),
                        ("tape", aut.tape_alphabet)):
        seen = set()
        for tok in toks:
            err = token_error(tok)
            if err:
                bad("BadToken", symbol=tok, detail=f"{group}: {err}")
            if tok in seen:
                bad("DuplicateToken", symbol=tok, detail=f"duplicate in {group} list")
            seen.add(tok)

    tape_set = set(aut.tape_alphabet)
    for tok in aut.input_alphabet:
        if tok not in tape_set:
            bad("InputNotInTape", symbol=tok)

    d = aut.dlimit.k if (ranked and aut.dlimit.kind == "const") else None
    if ranked:
        for tok in aut.tape_alphabet:
            r = aut.ranks.get(tok)
            if r is None:
                bad("BadRank", symbol=tok, detail="missing rank")
            elif r < 0 or (d is not None and r > d):
                bad("BadRank", symbol=tok, detail=f"rank {r} outside 0..{d}")
        for tok in aut.input_alphabet:
            if tok in tape_set and aut.ranks.get(tok) not in (None, 0):
                bad("BadRank", symbol=tok, detail="input symbols must have rank 0")
        for tok in aut.ranks:
            if tok not in tape_set:
                bad("BadRank", symbol=tok, detail="rank for unknown symbol")
    elif aut.ranks:
        bad("BadRank", detail="counted mode carries no ranks")

    state_set = set(aut.states)
    if aut.start_state not in state_set:
        bad("UnknownState", state=aut.start_state, detail="start state")
    for s in aut.accepting:
        if s not in state_set:
            bad("UnknownState", state=s, detail="accepting state")

    all_syms = aut.tape_alphabet + (LEFT_MARKER, RIGHT_MARKER)
    sym_set = set(all_syms)
    for q in aut.states:
        for s in all_syms:
            if (q, s) not in aut.delta:
                bad("Totality", q, s, "missing transition")
    for (q, s), t in aut.delta.items():
        if q not in state_set:
            bad("UnknownState", q, s, "transition from unknown state")
            continue
        if s not in sym_set:
            bad("UnknownSymbol", q, s, "transition reads unknown symbol")
            continue
        if (t.from_state, t.read) != (q, s):
            bad("Malformed", q, s, "transition fields do not match the table key")
        if t.to_state not in state_set:
            bad("UnknownState", q, s, f"target {t.to_state!r}")
        if t.move not in ("L", "R"):
            bad("BadMove", q, s, f"move {t.move!r}")
        if s == LEFT_MARKER:
            if t.write != s:
                bad("MarkerWrite", q, s, "markers cannot be rewritten")
            if t.move != "R":
                bad("MarkerDirection", q, s, "left marker forces a right move")
        elif s == RIGHT_MARKER:
            if t.write != s:
                bad("MarkerWrite", q, s, "markers cannot be rewritten")
            if t.move != "L":
                bad("MarkerDirection", q, s, "right marker forces a left move")
        else:
            if t.write in (LEFT_MARKER, RIGHT_MARKER):
                bad("MarkerWrite", q, s, "markers cannot be written over letters")
            elif t.write not in tape_set:
                bad("UnknownSymbol", q, s, f"write {t.write!r}")
            elif ranked and d is not None:
                rr = aut.ranks.get(s)
                wr = aut.ranks.get(t.write)
                if rr is None or wr is None:
                    pass  # already reported as BadRank
                elif rr >= d:
                    if t.write != s:
                        bad("FrozenRewrite", q, s, f"rank-{rr} letter must be rewritten as itself")
                elif wr <= rr:
                    bad("RankNotIncreased", q, s, f"rank {rr} -> {wr}")
    return ValidationReport(v)
