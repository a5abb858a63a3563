"""Generalized permutations and the combinatorial Rauzy moves R0, R1, S.

A generalized permutation is a two-line table in which every symbol occurs
exactly twice.  Positions are numbered 1..2d reading the top line and then
the bottom line; ``sigma`` pairs the two positions carrying the same symbol.

Text format, used everywhere (CLI, caches, reports)::

    "1 2 3 4 3 / 2 4 5 5 1"
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .errors import MoveUndefined, PermutationError


class Move(str, Enum):
    R0 = "R0"
    R1 = "R1"
    S = "S"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class GenPerm:
    top: tuple[int, ...]
    bottom: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "top", tuple(int(a) for a in self.top))
        object.__setattr__(self, "bottom", tuple(int(a) for a in self.bottom))
        if not self.top or not self.bottom:
            raise PermutationError("both lines must be non-empty")
        counts = Counter(self.top + self.bottom)
        for sym, n in sorted(counts.items()):
            if n != 2:
                raise PermutationError(f"symbol {sym} occurs {n} times (expected 2)")
        if set(counts) != set(range(1, len(counts) + 1)):
            raise PermutationError(
                f"symbols must be exactly 1..{len(counts)}, got {sorted(counts)}"
            )

    def __str__(self) -> str:
        return format_perm(self)

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.top)

    @property
    def m(self) -> int:
        return len(self.bottom)

    @property
    def d(self) -> int:
        return (self.l + self.m) // 2

    @property
    def type(self) -> tuple[int, int]:
        return (self.l, self.m)

    @property
    def sequence(self) -> tuple[int, ...]:
        return self.top + self.bottom

    @cached_property
    def sigma(self) -> tuple[int, ...]:
        """``sigma[k-1]`` is the 1-based position of the other occurrence of position k."""
        seen: dict[int, int] = {}
        out = [0] * (2 * self.d)
        for k, a in enumerate(self.sequence, start=1):
            if a in seen:
                j = seen[a]
                out[j - 1] = k
                out[k - 1] = j
            else:
                seen[a] = k
        return tuple(out)

    @cached_property
    def lines(self) -> dict[int, frozenset[str]]:
        """Symbol -> set of line names ('top', 'bottom') it occurs in."""
        where: dict[int, set[str]] = {}
        for a in self.top:
            where.setdefault(a, set()).add("top")
        for a in self.bottom:
            where.setdefault(a, set()).add("bottom")
        return {a: frozenset(s) for a, s in where.items()}

    def top_only(self) -> frozenset[int]:
        return frozenset(a for a, s in self.lines.items() if s == {"top"})

    def bottom_only(self) -> frozenset[int]:
        return frozenset(a for a, s in self.lines.items() if s == {"bottom"})

    def both_lines(self) -> frozenset[int]:
        return frozenset(a for a, s in self.lines.items() if len(s) == 2)


def parse(text: str) -> GenPerm:
    if text.count("/") != 1:
        raise PermutationError(f"expected exactly one '/' in {text!r}")
    top_s, bottom_s = text.split("/")
    try:
        top = tuple(int(t) for t in top_s.split())
        bottom = tuple(int(t) for t in bottom_s.split())
    except ValueError as exc:
        raise PermutationError(f"non-integer symbol in {text!r}") from exc
    if any(a <= 0 for a in top + bottom):
        raise PermutationError("symbols must be positive integers")
    return GenPerm(top, bottom)


def format_perm(p: GenPerm) -> str:
    return " ".join(map(str, p.top)) + " / " + " ".join(map(str, p.bottom))


def relabel(p: GenPerm, f: dict[int, int]) -> GenPerm:
    return GenPerm(tuple(f[a] for a in p.top), tuple(f[a] for a in p.bottom))


def reduce(p: GenPerm) -> tuple[GenPerm, dict[int, int]]:
    """Renumber so that first occurrences appear in increasing order.

    Returns the reduced permutation and the map old symbol -> new symbol.
    """
    f: dict[int, int] = {}
    for a in p.sequence:
        if a not in f:
            f[a] = len(f) + 1
    return relabel(p, f), f


def is_reduced(p: GenPerm) -> bool:
    return reduce(p)[0] == p


def is_abelian(p: GenPerm) -> bool:
    return all(len(s) == 2 for s in p.lines.values())


def regular_symbols(p: GenPerm) -> frozenset[int]:
    top_only, bottom_only = p.top_only(), p.bottom_only()
    out = set(p.both_lines())
    if len(top_only) >= 2:
        out |= top_only
    if len(bottom_only) >= 2:
        out |= bottom_only
    return frozenset(out)


def swap_lines(p: GenPerm) -> GenPerm:
    return GenPerm(p.bottom, p.top)


def _r0_prime(p: GenPerm) -> GenPerm:
    l, m = p.l, p.m
    seq = p.sequence
    k = p.sigma[l - 1]  # other occurrence of pi(l), 1-based
    moved = seq[-1]
    if l + 1 <= k <= l + m - 1:
        bottom = list(p.bottom[:-1])
        bottom.insert(k - l, moved)  # lands right after position k
        return GenPerm(p.top, tuple(bottom))
    if 1 <= k <= l - 1:
        if not any(a != moved for a in p.bottom_only()):
            raise MoveUndefined(f"R0 undefined at {p}: no other symbol lives only in the bottom line")
        top = list(p.top)
        top.insert(k - 1, moved)  # k = 1 puts it left of pi(1)
        return GenPerm(tuple(top), p.bottom[:-1])
    raise MoveUndefined(f"R0 undefined at {p}: last symbols of both lines coincide")


def _r1_prime(p: GenPerm) -> GenPerm:
    try:
        return swap_lines(_r0_prime(swap_lines(p)))
    except MoveUndefined as exc:
        raise MoveUndefined(str(exc).replace("R0", "R1").replace("bottom line", "top line")) from None


def s_prime(p: GenPerm) -> GenPerm:
    rev = p.sequence[::-1]
    return GenPerm(rev[: p.m], rev[p.m :])


def move_prime(p: GenPerm, move: Move | str) -> GenPerm:
    """Unreduced image of ``p`` under a move."""
    move = Move(move)
    if move is Move.R0:
        return _r0_prime(p)
    if move is Move.R1:
        return _r1_prime(p)
    return s_prime(p)


def apply_move(p: GenPerm, move: Move | str) -> GenPerm:
    return reduce(move_prime(p, move))[0]


def shrinking_symbol(p: GenPerm, move: Move | str) -> int:
    """Symbol whose length is subtracted from the winner under R0/R1.

    For R0 the top line wins and the bottom-last symbol moves; for R1 the
    roles are exchanged.
    """
    move = Move(move)
    if move is Move.R0:
        return p.bottom[-1]
    if move is Move.R1:
        return p.top[-1]
    raise ValueError("S has no shrinking symbol")


def all_reduced(d: int):
    """Yield every reduced generalized permutation with ``d`` symbols.

    A reduced table is determined by its type and by the pairing of the 2d
    positions, so this walks all perfect matchings for each split l + m = 2d.
    """
    n = 2 * d

    def matchings(free: list[int]):
        if not free:
            yield []
            return
        a, rest = free[0], free[1:]
        for i, b in enumerate(rest):
            for mt in matchings(rest[:i] + rest[i + 1 :]):
                yield [(a, b)] + mt

    pairings = []
    for mt in matchings(list(range(n))):
        seq = [0] * n
        for sym, (a, b) in enumerate(sorted(mt), start=1):
            seq[a] = seq[b] = sym
        pairings.append(tuple(seq))
    for l in range(1, n):
        for seq in pairings:
            yield GenPerm(seq[:l], seq[l:])
