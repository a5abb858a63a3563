"""Independent reference implementations used only by the tests.

Nothing here imports the package: permutations are plain (top, bottom)
tuples and every geometric test is written from first principles.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction


def canon(top, bottom):
    """Renumber by order of first appearance, reading top then bottom."""
    names = {}
    for a in list(top) + list(bottom):
        names.setdefault(a, len(names) + 1)
    return tuple(names[a] for a in top), tuple(names[a] for a in bottom)


def _other_position(top, bottom, line, idx):
    a = (top, bottom)[line][idx]
    spots = [(0, i) for i, b in enumerate(top) if b == a] + [(1, i) for i, b in enumerate(bottom) if b == a]
    spots.remove((line, idx))
    return spots[0]


def top_move(top, bottom):
    """The top-last symbol absorbs the bottom-last one (undefined -> None)."""
    top, bottom = list(top), list(bottom)
    if len(bottom) < 2:
        return None
    beta = bottom[-1]
    line, k = _other_position(top, bottom, 0, len(top) - 1)
    if line == 1:
        if k == len(bottom) - 1:
            return None
        nb = bottom[:-1]
        nb.insert(k + 1, beta)
        return canon(top, nb)
    if k == len(top) - 1:
        return None
    bottom_only = {a for a in bottom if a not in top}
    if not (bottom_only - {beta}):
        return None
    nt = top[:k] + [beta] + top[k:]
    return canon(nt, bottom[:-1])


def bottom_move(top, bottom):
    r = top_move(bottom, top)
    if r is None:
        return None
    # swap back, then canonicalize in the original orientation
    return canon(r[1], r[0])


def class_size(top, bottom):
    start = canon(top, bottom)
    seen = {start}
    queue = deque([start])
    while queue:
        t, b = queue.popleft()
        for nxt in (top_move(t, b), bottom_move(t, b)):
            if nxt is not None and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen)


# ---------------------------------------------------------------------------
# polygon geometry


def polygon(top, bottom, zeta):
    """Vertex ring (counter-clockwise): bottom line left to right, top line back."""
    def walk(line):
        pts = [(Fraction(0), Fraction(0))]
        for a in line:
            x, y = zeta[a - 1]
            pts.append((pts[-1][0] + x, pts[-1][1] + y))
        return pts

    tp, bp = walk(top), walk(bottom)
    return bp[:-1] + tp[::-1][:-1]


def shoelace(ring):
    s = Fraction(0)
    for i in range(len(ring)):
        (x1, y1), (x2, y2) = ring[i], ring[(i + 1) % len(ring)]
        s += x1 * y2 - x2 * y1
    return abs(s) / 2


def _orient(a, b, c):
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on_segment(a, b, c):
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])


def segments_meet(p1, p2, q1, q2):
    o1, o2 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    o3, o4 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    if o1 != o2 and o3 != o4:
        return True
    return any(
        o == 0 and _on_segment(a, b, c)
        for o, a, b, c in ((o1, p1, p2, q1), (o2, p1, p2, q2), (o3, q1, q2, p1), (o4, q1, q2, p2))
    )


def is_simple(ring):
    """No two non-adjacent edges touch, and adjacent edges meet only at their shared corner."""
    n = len(ring)
    if n < 3:
        return False
    edges = [(ring[i], ring[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                a, b = edges[i]
                c, d = edges[j]
                # collinear backtracking is the only way adjacent edges overlap
                shared = b if j == i + 1 else a
                other_i = a if j == i + 1 else b
                other_j = d if j == i + 1 else c
                if _orient(other_i, shared, other_j) == 0 and (
                    (other_i[0] - shared[0]) * (other_j[0] - shared[0])
                    + (other_i[1] - shared[1]) * (other_j[1] - shared[1])
                ) > 0:
                    return False
                continue
            if segments_meet(*edges[i], *edges[j]):
                return False
    return True
