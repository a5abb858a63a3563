"""Corner cycles of the suspension polygon, cone angles and the stratum."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    AngleResolutionFailure,
    EmbeddingBudgetExceeded,
    InconsistentSignature,
    MoveUndefined,
    NotEmbedded,
    Reducible,
    RepresentativeNotFound,
)
from .genperm import GenPerm, Move, apply_move, is_abelian, parse
from .suspension import SuspensionDatum, broken_lines, is_embedded, is_irreducible, witness_suspension


@dataclass(frozen=True, order=True)
class StratumSignature:
    holonomy: str  # "abelian" | "quadratic"
    orders: tuple[int, ...]  # sorted descending

    def __post_init__(self) -> None:
        if self.holonomy not in ("abelian", "quadratic"):
            raise ValueError(f"unknown holonomy {self.holonomy!r}")
        object.__setattr__(self, "orders", tuple(sorted(self.orders, reverse=True)))

    @property
    def genus(self) -> int:
        return genus(self)

    def __str__(self) -> str:
        letter = "H" if self.holonomy == "abelian" else "Q"
        return f"{letter}({','.join(map(str, self.orders))})"


def parse_stratum(text: str) -> StratumSignature:
    text = text.strip()
    if text[:2] not in ("H(", "Q(") or not text.endswith(")"):
        raise ValueError(f"cannot parse stratum {text!r}")
    orders = tuple(int(k) for k in text[2:-1].split(","))
    return StratumSignature("abelian" if text[0] == "H" else "quadratic", orders)


def genus(s: StratumSignature) -> int:
    total = sum(s.orders)
    if s.holonomy == "abelian":
        if any(k < 0 for k in s.orders) or (total + 2) % 2:
            raise InconsistentSignature(f"{s}: orders must be >= 0 with even sum")
        return (total + 2) // 2
    if any(k < -1 for k in s.orders) or (total + 4) % 4:
        raise InconsistentSignature(f"{s}: orders must be >= -1 with sum = 0 mod 4")
    return (total + 4) // 4


@dataclass(frozen=True)
class CornerCycles:
    """Polygon corners grouped by the side gluing.

    Corners are numbered 0..2d-1: 0 is the common start point, 1..l-1 the
    interior top vertices, l the common end point, l+1..l+m-1 the interior
    bottom vertices.
    """

    cycles: tuple[tuple[int, ...], ...]
    multiples: tuple[int, ...]  # total angle of each cycle, in units of pi


def _corner_ids(p: GenPerm) -> tuple[list[int], list[int]]:
    l, m = p.l, p.m
    top = list(range(0, l + 1))
    bottom = [0] + [l + j for j in range(1, m)] + [l]
    return top, bottom


def _cycles(p: GenPerm) -> tuple[tuple[int, ...], ...]:
    """Vertex classes of the glued polygon: a purely combinatorial union-find."""
    parent = list(range(2 * p.d))

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    def union(u, v):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)

    top, bottom = _corner_ids(p)
    sides: dict[int, list[tuple[str, int, int]]] = {}
    for k, a in enumerate(p.top):
        sides.setdefault(a, []).append(("top", top[k], top[k + 1]))
    for k, a in enumerate(p.bottom):
        sides.setdefault(a, []).append(("bottom", bottom[k], bottom[k + 1]))
    for (l1, s1, e1), (l2, s2, e2) in sides.values():
        if l1 != l2:  # translation
            union(s1, s2)
            union(e1, e2)
        else:  # half-turn
            union(s1, e2)
            union(e1, s2)
    groups: dict[int, list[int]] = {}
    for v in range(2 * p.d):
        groups.setdefault(find(v), []).append(v)
    return tuple(tuple(g) for g in sorted(groups.values()))


def vertex_count(p: GenPerm) -> int:
    return len(_cycles(p))


def corner_cycles(p: GenPerm, z: SuspensionDatum) -> CornerCycles:
    if not is_embedded(p, z):
        raise NotEmbedded(f"suspension of {p} is not embedded")
    top_pts, bottom_pts = broken_lines(p, z)
    top_ids, bottom_ids = _corner_ids(p)
    # counter-clockwise boundary: bottom line left to right, then top line back
    ring = [(bottom_ids[j], bottom_pts[j]) for j in range(p.m)]
    ring += [(top_ids[k], top_pts[k]) for k in range(p.l, 0, -1)]
    angle = [0.0] * (2 * p.d)
    n = len(ring)
    for i, (vid, v) in enumerate(ring):
        u, w = ring[i - 1][1], ring[(i + 1) % n][1]
        ax, ay = float(v.re - u.re), float(v.im - u.im)
        bx, by = float(w.re - v.re), float(w.im - v.im)
        turn = math.atan2(ax * by - ay * bx, ax * bx + ay * by)
        angle[vid] = math.pi - turn
    cycles = _cycles(p)
    multiples = []
    for cyc in cycles:
        total = sum(angle[v] for v in cyc) / math.pi
        k = round(total)
        if abs(total - k) >= 1e-6 or k < 1:
            raise AngleResolutionFailure(f"cycle {cyc} of {p} has angle {total}*pi")
        multiples.append(k)
    return CornerCycles(cycles, tuple(multiples))


def signature_from_cycles(p: GenPerm, cc: CornerCycles) -> StratumSignature:
    if is_abelian(p):
        if any(k % 2 for k in cc.multiples):
            raise InconsistentSignature(f"odd cone angle on abelian {p}: {cc.multiples}")
        sig = StratumSignature("abelian", tuple(k // 2 - 1 for k in cc.multiples))
    else:
        sig = StratumSignature("quadratic", tuple(k - 2 for k in cc.multiples))
    g = genus(sig)
    if len(cc.cycles) - p.d + 1 != 2 - 2 * g:
        raise InconsistentSignature(f"Euler characteristic mismatch for {p}: {sig}")
    return sig


@lru_cache(maxsize=1 << 16)
def stratum(p: GenPerm, search_budget: int = 10_000) -> StratumSignature:
    """Stratum of the surfaces built from ``p``.

    Read off an embedded witness for ``p``; failing that, off the first
    member of its Rauzy class (breadth first) that has one.  Moves preserve
    the stratum, so any member will do.
    """
    if not is_irreducible(p):
        raise Reducible(f"{p} is reducible")
    seen = {p}
    queue = deque([p])
    while queue:
        q = queue.popleft()
        try:
            z = witness_suspension(q)
        except EmbeddingBudgetExceeded:
            for mv in (Move.R0, Move.R1):
                try:
                    r = apply_move(q, mv)
                except MoveUndefined:
                    continue
                if r not in seen and len(seen) < search_budget:
                    seen.add(r)
                    queue.append(r)
            continue
        return signature_from_cycles(q, corner_cycles(q, z))
    raise RepresentativeNotFound(f"no embedded representative near {p} within {search_budget} nodes")


def stratum_of(text: str) -> StratumSignature:
    return stratum(parse(text))
