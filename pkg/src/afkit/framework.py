"""In-memory model of abstract argumentation frameworks.

Arguments are interned to dense indices at construction time, and every set
of arguments is a plain integer used as a bitmask (bit ``i`` stands for the
argument with index ``i``). Python integers are arbitrary precision, so the
model itself imposes no cap on framework size; the exhaustive enumeration in
:mod:`afkit.oracle` applies its own cap instead. Frameworks are immutable
after construction and can be shared freely between threads.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

ArgumentSet = int


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class ArgumentationFramework:
    """A directed attack graph over a fixed, ordered set of named arguments.

    The iteration order over arguments is the input order, which keeps every
    derived answer reproducible for a given input file. Self-attacks are
    permitted. Duplicate attack pairs collapse into one.
    """

    __slots__ = ("names", "attacks", "attacker_masks", "attacked_masks", "all_mask", "_index")

    def __init__(self, names: Sequence[str], attacks: Iterable[tuple[int, int]] = ()):
        self.names = tuple(names)
        self._index: dict[str, int] = {}
        for i, name in enumerate(self.names):
            if not name:
                raise ValueError("argument names must be non-empty")
            if name in self._index:
                raise ValueError(f"duplicate argument name {name!r}")
            self._index[name] = i
        n = len(self.names)
        attacker_masks = [0] * n
        attacked_masks = [0] * n
        pairs = set()
        for a, b in attacks:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"attack ({a}, {b}) out of range for {n} arguments")
            pairs.add((a, b))
            attacked_masks[a] |= 1 << b
            attacker_masks[b] |= 1 << a
        self.attacks = frozenset(pairs)
        self.attacker_masks = tuple(attacker_masks)
        self.attacked_masks = tuple(attacked_masks)
        self.all_mask = (1 << n) - 1

    @classmethod
    def from_named_attacks(
        cls, names: Sequence[str], attacks: Iterable[tuple[str, str]]
    ) -> "ArgumentationFramework":
        """Build a framework from name pairs instead of index pairs."""
        lookup = {name: i for i, name in enumerate(names)}

        def resolve(name: str) -> int:
            try:
                return lookup[name]
            except KeyError:
                raise ValueError(f"attack endpoint {name!r} is not a declared argument") from None

        return cls(names, [(resolve(a), resolve(b)) for a, b in attacks])

    @property
    def n(self) -> int:
        return len(self.names)

    def index_of(self, name: str) -> int:
        """Dense index of ``name``. Raises ``KeyError`` for unknown names."""
        return self._index[name]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def mask_of(self, names: Iterable[str]) -> ArgumentSet:
        mask = 0
        for name in names:
            mask |= 1 << self._index[name]
        return mask

    def names_of(self, s: ArgumentSet) -> tuple[str, ...]:
        """Member names of ``s`` in argument (input) order."""
        return tuple(self.names[i] for i in bits(s))

    def set_attacks(self, s: ArgumentSet, b: int) -> bool:
        """True iff some member of ``s`` attacks argument ``b``."""
        return bool(self.attacker_masks[b] & s)

    def set_defends(self, s: ArgumentSet, a: int) -> bool:
        """True iff every attacker of ``a`` is attacked by ``s``."""
        for b in bits(self.attacker_masks[a]):
            if not self.attacker_masks[b] & s:
                return False
        return True

    def attacked_by(self, s: ArgumentSet) -> ArgumentSet:
        """The set of arguments attacked by ``s`` (S+)."""
        plus = 0
        for a in bits(s):
            plus |= self.attacked_masks[a]
        return plus

    def range_of(self, s: ArgumentSet) -> ArgumentSet:
        """``s`` together with everything it attacks."""
        return s | self.attacked_by(s)

    def is_conflict_free(self, s: ArgumentSet) -> bool:
        return not self.attacked_by(s) & s

    def is_admissible(self, s: ArgumentSet) -> bool:
        """Conflict-free and defending each of its members."""
        plus = self.attacked_by(s)
        if plus & s:
            return False
        for a in bits(s):
            if self.attacker_masks[a] & ~plus:
                return False
        return True

    def defended_by(self, s: ArgumentSet) -> ArgumentSet:
        """Mask of all arguments whose every attacker is attacked by ``s``."""
        plus = self.attacked_by(s)
        defended = 0
        for a in range(self.n):
            if not self.attacker_masks[a] & ~plus:
                defended |= 1 << a
        return defended

    def is_complete_set(self, s: ArgumentSet) -> bool:
        """Admissible and containing every argument it defends."""
        if self.attacked_by(s) & s:
            return False
        return self.defended_by(s) == s

    def is_stable_set(self, s: ArgumentSet) -> bool:
        """Conflict-free and attacking every argument outside itself."""
        plus = self.attacked_by(s)
        return not plus & s and (s | plus) == self.all_mask

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArgumentationFramework):
            return NotImplemented
        return self.names == other.names and self.attacks == other.attacks

    def __hash__(self) -> int:
        return hash((self.names, self.attacks))

    def __repr__(self) -> str:
        return f"ArgumentationFramework({self.n} arguments, {len(self.attacks)} attacks)"
