"""Single-tape Turing machines on three locations.

``q`` holds the control state, ``l`` the tape left of the head (nearest
cell on top) and ``r`` the cell under the head with everything to its
right beneath it. The ends of the tape carry markers ``bot`` (under
``l``) and ``top`` (under ``r``); reading a marker counts as reading a
blank, which keeps memories finite.

Source format::

    initial: i
    halt: h
    blank: 0
    i 1 -> i 1 R
    i 0 -> h 1 R
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..machine import Budget, explore
from ..memory import Memory
from ..syntax import SKIP, ZERO, Fun, New, Pop, Push, Star, Term, Var, canonicalize, seq, sum_of

BOT, TOP = Fun("bot", ()), Fun("top", ())
MOVES = ("L", "R", "N")


@dataclass(frozen=True)
class Rule:
    state: str
    read: str
    new_state: str
    write: str
    move: str


@dataclass(frozen=True)
class TuringMachine:
    initial: str
    halt: str
    blank: str = "0"
    rules: tuple = field(default_factory=tuple)

    def __post_init__(self):
        for r in self.rules:
            if r.move not in MOVES:
                raise ValueError(f"move must be one of {MOVES}, got {r.move!r}")
            for s in (r.read, r.write):
                if s in ("bot", "top"):
                    raise ValueError(f"tape symbol {s!r} is reserved")


def parse_turing(text: str) -> TuringMachine:
    header = {"initial": None, "halt": None, "blank": "0"}
    rules = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition(":")
        if sep and key.strip() in header:
            header[key.strip()] = val.strip()
            continue
        lhs, arrow, rhs = line.partition("->")
        a, b = lhs.split(), rhs.split()
        if not arrow or len(a) != 2 or len(b) != 3:
            raise ValueError(f"line {n}: expected 'state read -> state write move'")
        rules.append(Rule(a[0], a[1], b[0], b[1], b[2]))
    if header["initial"] is None or header["halt"] is None:
        raise ValueError("machine needs 'initial:' and 'halt:' lines")
    return TuringMachine(header["initial"], header["halt"], header["blank"], tuple(rules))


def _c(s: str) -> Fun:
    return Fun(s, ())


def _move(m: str) -> Term:
    x = Var("X")
    if m == "L":
        return New("X", seq(Pop("l", x), Push(x, "r")))
    if m == "R":
        return New("X", seq(Pop("r", x), Push(x, "l")))
    return SKIP


def _read(tm: TuringMachine, a: str) -> Term:
    plain = Pop("r", _c(a))
    if a != tm.blank:
        return plain
    return sum_of([plain, seq(Pop("r", BOT), Push(BOT, "l")), seq(Pop("r", TOP), Push(TOP, "r"))])


def encode_rule(tm: TuringMachine, d: Rule) -> Term:
    return seq(
        Pop("q", _c(d.state)),
        _read(tm, d.read),
        Push(_c(d.new_state), "q"),
        Push(_c(d.write), "r"),
        _move(d.move),
    )


def encode_turing(tm: TuringMachine) -> Term:
    if not tm.rules:
        return Star(ZERO)
    return canonicalize(Star(sum_of([encode_rule(tm, d) for d in tm.rules])))


def initial_memory(tm: TuringMachine, tape: str | list, head: int = 0) -> Memory:
    cells = list(tape)
    left = [BOT] + [_c(s) for s in cells[:head]]
    right = [TOP] + [_c(s) for s in reversed(cells[head:])]
    return Memory({"l": left, "r": right, "q": [_c(tm.initial)]})


def _strip(cells: list[str], blank: str) -> str:
    s = "".join(cells)
    return s.strip(blank) if len(blank) == 1 else s


def read_tape(tm: TuringMachine, mem: Memory) -> str:
    left = [v.symbol for v in mem.stack("l")]
    right = [v.symbol for v in reversed(mem.stack("r"))]
    cells = [s for s in left + right if s not in ("bot", "top")]
    return _strip(cells, tm.blank)


def is_halted(tm: TuringMachine, mem: Memory) -> bool:
    return mem.stack("q") == (_c(tm.halt),)


_SEARCH = Budget(max_steps_per_path=20_000, max_solutions=10_000, max_states=200_000)


def run_machine(tm: TuringMachine, tape: str, head: int = 0, budget: Budget = _SEARCH) -> set[str]:
    """Tapes of the halting runs, read off memories whose ``q`` is the halt state."""
    res = explore(initial_memory(tm, tape, head), encode_turing(tm), budget, dedup=True)
    return {read_tape(tm, mem) for mem, _ in res if is_halted(tm, mem)}


def simulate(tm: TuringMachine, tape: str, head: int = 0, max_steps: int = 10_000) -> str | None:
    """Direct deterministic simulator; None if no rule applies before halting or fuel runs out."""
    cells = dict(enumerate(tape))
    state, pos = tm.initial, head
    table = {(r.state, r.read): r for r in tm.rules}
    for _ in range(max_steps):
        if state == tm.halt:
            lo, hi = min(cells, default=0), max(cells, default=-1)
            return _strip([cells.get(i, tm.blank) for i in range(lo, hi + 1)], tm.blank)
        r = table.get((state, cells.get(pos, tm.blank)))
        if r is None:
            return None
        cells[pos] = r.write
        state = r.new_state
        pos += {"L": -1, "R": 1, "N": 0}[r.move]
    return None
