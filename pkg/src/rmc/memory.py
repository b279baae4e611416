"""Memories: finite families of named stacks, head at the right."""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from .syntax import DEFAULT_LOC, Subst, Value, value_height, value_vars


class Memory(Mapping):
    """Immutable map from location to a tuple of values (last = top).

    Absent locations are empty stacks; empty stacks are never stored, so
    two memories compare equal exactly when every stack agrees.
    """

    __slots__ = ("_stacks", "_hash")

    def __init__(self, stacks: Mapping[str, Iterable[Value]] | None = None):
        clean = {}
        if stacks:
            for loc, vs in stacks.items():
                t = tuple(vs)
                if t:
                    clean[loc] = t
        self._stacks = clean
        self._hash = None

    @classmethod
    def of(cls, *values: Value, loc: str = DEFAULT_LOC) -> "Memory":
        return cls({loc: values})

    def __getitem__(self, loc: str) -> tuple:
        return self._stacks.get(loc, ())

    def __contains__(self, loc) -> bool:
        return loc in self._stacks

    def __iter__(self):
        return iter(sorted(self._stacks))

    def __len__(self) -> int:
        return len(self._stacks)

    def __eq__(self, other) -> bool:
        if isinstance(other, Memory):
            return self._stacks == other._stacks
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._stacks.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Memory({self._stacks!r})"

    def __str__(self) -> str:
        if not self._stacks:
            return "ε"
        return "; ".join(
            f"{loc}: [{','.join(str(v) for v in self._stacks[loc])}]" for loc in self
        )

    def stack(self, loc: str = DEFAULT_LOC) -> tuple:
        return self._stacks.get(loc, ())

    def depth(self, loc: str = DEFAULT_LOC) -> int:
        return len(self._stacks.get(loc, ()))

    def depths(self) -> dict[str, int]:
        return {loc: len(vs) for loc, vs in self._stacks.items()}

    def push(self, loc: str, v: Value) -> "Memory":
        new = dict(self._stacks)
        new[loc] = self[loc] + (v,)
        return Memory._raw(new)

    def push_many(self, loc: str, vs: Iterable[Value]) -> "Memory":
        new = dict(self._stacks)
        new[loc] = self[loc] + tuple(vs)
        return Memory(new)

    def top(self, loc: str) -> Value | None:
        st = self._stacks.get(loc)
        return st[-1] if st else None

    def pop(self, loc: str) -> "Memory":
        new = dict(self._stacks)
        rest = new[loc][:-1]
        if rest:
            new[loc] = rest
        else:
            del new[loc]
        return Memory._raw(new)

    def apply(self, s: Subst) -> "Memory":
        if not s:
            return self
        return Memory._raw({loc: tuple(s.value(v) for v in vs) for loc, vs in self._stacks.items()})

    def vars(self) -> set[str]:
        out: set[str] = set()
        for vs in self._stacks.values():
            for v in vs:
                out |= value_vars(v)
        return out

    def is_closed(self) -> bool:
        return not self.vars()

    def max_height(self) -> int:
        return max((value_height(v) for vs in self._stacks.values() for v in vs), default=0)

    def items_sorted(self):
        return [(loc, self._stacks[loc]) for loc in self]

    @classmethod
    def _raw(cls, stacks: dict) -> "Memory":
        m = cls.__new__(cls)
        m._stacks = stacks
        m._hash = None
        return m


EMPTY_MEMORY = Memory()


def parse_memory(text: str) -> Memory:
    """Parse ``a: [t1, t2]; b: [...]``; a bare ``[t1, t2]`` targets the default location."""
    from .parsing import ParseError, parse_values

    text = text.strip()
    if not text or text in ("ε", "{}"):
        return EMPTY_MEMORY
    stacks: dict[str, list] = {}
    depth = 0
    parts, cur = [], []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == ";" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    for part in parts:
        part = part.strip()
        if not part:
            continue
        if ":" in part.split("[", 1)[0]:
            loc, _, body = part.partition(":")
            loc = loc.strip()
        else:
            loc, body = DEFAULT_LOC, part
        body = body.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ParseError(f"stack for location {loc!r} must be bracketed", 0, text)
        stacks.setdefault(loc, []).extend(parse_values(body))
    return Memory(stacks)
