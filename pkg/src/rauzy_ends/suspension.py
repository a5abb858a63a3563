"""Suspension data: exact-rational complex vectors indexed by symbol.

A suspension datum assigns ``zeta[a] = x_a + i y_a`` to every symbol ``a`` so
that the top broken line stays strictly above the real axis, the bottom one
strictly below, and both end at the same point.  Every test here is exact.

Serialization: one ``(re, im)`` pair per symbol in symbol order, each
rational written ``p/q``, e.g. ``"(2/1, 2/1) (1/1, -1/1)"``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import EmbeddingBudgetExceeded, InfeasibleConstraints, MissingSymbol, NotEmbedded
from .genperm import GenPerm, regular_symbols
from .lp import Model


def fmt_q(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Vec:
    re: Fraction
    im: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other: "Vec") -> "Vec":
        return Vec(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "Vec") -> "Vec":
        return Vec(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "Vec":
        return Vec(-self.re, -self.im)

    def scale(self, t) -> "Vec":
        return Vec(self.re * t, self.im * t)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __str__(self) -> str:
        return f"({fmt_q(self.re)}, {fmt_q(self.im)})"


ORIGIN = Vec(0, 0)


@dataclass(frozen=True)
class SuspensionDatum:
    """``zeta[k]`` is the vector of symbol ``k + 1``; index with ``z[symbol]``."""

    zeta: tuple[Vec, ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "SuspensionDatum":
        out = []
        for v in pairs:
            if isinstance(v, Vec):
                out.append(v)
            elif isinstance(v, complex):
                out.append(Vec(Fraction(v.real), Fraction(v.imag)))
            else:
                a, b = v
                out.append(Vec(Fraction(a), Fraction(b)))
        return cls(tuple(out))

    def __getitem__(self, symbol: int) -> Vec:
        return self.zeta[symbol - 1]

    def __len__(self) -> int:
        return len(self.zeta)

    def __str__(self) -> str:
        return " ".join(str(v) for v in self.zeta)

    def scaled(self, t) -> "SuspensionDatum":
        return SuspensionDatum(tuple(v.scale(t) for v in self.zeta))

    def relabeled(self, f: dict[int, int]) -> "SuspensionDatum":
        """Datum for ``relabel(p, f)``: the vector of old symbol a moves to f[a]."""
        out: list[Vec | None] = [None] * len(self.zeta)
        for a, b in f.items():
            out[b - 1] = self.zeta[a - 1]
        return SuspensionDatum(tuple(out))  # type: ignore[arg-type]

    def as_json(self) -> list[list[str]]:
        return [[fmt_q(v.re), fmt_q(v.im)] for v in self.zeta]


_PAIR = re.compile(r"\(\s*([^,()]+?)\s*,\s*([^,()]+?)\s*\)")


def parse_datum(text: str) -> SuspensionDatum:
    pairs = _PAIR.findall(text)
    if not pairs or _PAIR.sub("", text).strip():
        raise ValueError(f"cannot parse suspension datum {text!r}")
    return SuspensionDatum.from_pairs((Fraction(a), Fraction(b)) for a, b in pairs)


def combine(z1: SuspensionDatum, z2: SuspensionDatum, t) -> SuspensionDatum:
    """(1 - t) z1 + t z2."""
    t = Fraction(t)
    return SuspensionDatum(tuple(a.scale(1 - t) + b.scale(t) for a, b in zip(z1.zeta, z2.zeta)))


@dataclass(frozen=True)
class Violation:
    condition: str  # "re>0", "1", "2", "3"
    index: int | None
    detail: str

    def __str__(self) -> str:
        where = "" if self.index is None else f" at {self.index}"
        return f"condition {self.condition}{where}: {self.detail}"


def _require_complete(p: GenPerm, z: SuspensionDatum) -> None:
    if len(z) != p.d:
        raise MissingSymbol(f"datum has {len(z)} vectors but the permutation has {p.d} symbols")


def check_suspension(p: GenPerm, z: SuspensionDatum) -> list[Violation]:
    """Every broken condition; an empty list means ``z`` is a suspension datum."""
    _require_complete(p, z)
    out = []
    for a in range(1, p.d + 1):
        if z[a].re <= 0:
            out.append(Violation("re>0", a, f"Re zeta_{a} = {fmt_q(z[a].re)}"))
    acc = ORIGIN
    for i, a in enumerate(p.top[:-1], start=1):
        acc = acc + z[a]
        if acc.im <= 0:
            out.append(Violation("1", i, f"top partial sum has Im {fmt_q(acc.im)}"))
    top_total = acc + z[p.top[-1]]
    acc = ORIGIN
    for i, a in enumerate(p.bottom[:-1], start=1):
        acc = acc + z[a]
        if acc.im >= 0:
            out.append(Violation("2", i, f"bottom partial sum has Im {fmt_q(acc.im)}"))
    bottom_total = acc + z[p.bottom[-1]]
    if top_total != bottom_total:
        out.append(Violation("3", None, f"top sum {top_total} != bottom sum {bottom_total}"))
    return out


def broken_lines(p: GenPerm, z: SuspensionDatum) -> tuple[list[Vec], list[Vec]]:
    top, bottom = [ORIGIN], [ORIGIN]
    for a in p.top:
        top.append(top[-1] + z[a])
    for a in p.bottom:
        bottom.append(bottom[-1] + z[a])
    return top, bottom


def _height_at(line: list[Vec], x: Fraction) -> Fraction:
    # lines are x-monotone because every Re is positive
    for u, v in zip(line, line[1:]):
        if u.re <= x <= v.re:
            return u.im + (x - u.re) / (v.re - u.re) * (v.im - u.im)
    raise ValueError("abscissa outside the broken line")


def is_embedded(p: GenPerm, z: SuspensionDatum) -> bool:
    """True iff the two broken lines meet only at their common endpoints.

    Both lines are graphs over the same interval, so it suffices that the top
    one is strictly higher at every interior vertex of either line.
    """
    top, bottom = broken_lines(p, z)
    interior = [(v, "top") for v in top[1:-1]] + [(v, "bottom") for v in bottom[1:-1]]
    if not interior:
        return False
    for v, side in interior:
        if side == "top":
            if v.im <= _height_at(bottom, v.re):
                return False
        elif _height_at(top, v.re) <= v.im:
            return False
    return True


def signed_area(p: GenPerm, z: SuspensionDatum) -> Fraction:
    """Integral of (top line - bottom line): the shoelace area of the polygon.

    This quadratic form equals the area of the glued surface; on embedded
    data it is the literal polygon area.
    """
    total = Fraction(0)
    h = Fraction(0)
    for a in p.top:
        v = z[a]
        total += v.re * (h + v.im / 2)
        h += v.im
    h = Fraction(0)
    for a in p.bottom:
        v = z[a]
        total -= v.re * (h + v.im / 2)
        h += v.im
    return total


def area(p: GenPerm, z: SuspensionDatum, require_embedded: bool = True) -> Fraction:
    if require_embedded and not is_embedded(p, z):
        raise NotEmbedded(f"suspension of {p} is not embedded")
    return abs(signed_area(p, z))


def small_symbols(
    p: GenPerm, z: SuspensionDatum, eps, require_embedded: bool = True
) -> list[int]:
    """Regular symbols with |zeta|^2 < eps^2 * area, smallest |zeta| first."""
    eps = Fraction(eps)
    bound = eps * eps * area(p, z, require_embedded)
    hits = [a for a in sorted(regular_symbols(p)) if z[a].abs2() < bound]
    return sorted(hits, key=lambda a: (z[a].abs2(), a))


def in_D(p: GenPerm, z: SuspensionDatum, eps, require_embedded: bool = True) -> int | None:
    """A regular symbol short enough for the area-one rescaling of ``z``, or None."""
    hits = small_symbols(p, z, eps, require_embedded)
    return hits[0] if hits else None


# ---------------------------------------------------------------------------
# feasibility programs


@dataclass(frozen=True)
class WitnessConstraints:
    """Extra linear requirements on a generated suspension datum.

    ``re_order`` compares Re of the last top symbol with Re of the last
    bottom symbol ("<" or ">").  ``caps`` maps a symbol to an upper bound
    on its real part (all other real parts live in (0, 1]).
    """

    zero_im_sum: bool = False
    re_order: str | None = None
    caps: tuple[tuple[int, Fraction], ...] = field(default=())

    def __post_init__(self) -> None:
        if self.re_order not in (None, "<", ">"):
            raise ValueError("re_order must be '<', '>' or None")
        object.__setattr__(
            self, "caps", tuple(sorted((int(a), Fraction(b)) for a, b in dict(self.caps).items()))
        )
        for _, b in self.caps:
            if not 0 < b <= 1:
                raise ValueError("caps must lie in (0, 1]")


def _line_counts(p: GenPerm) -> dict[int, int]:
    c = {a: 0 for a in range(1, p.d + 1)}
    for a in p.top:
        c[a] += 1
    for a in p.bottom:
        c[a] -= 1
    return c


def _re_model(p: GenPerm, c: WitnessConstraints) -> tuple[Model, list[int], int]:
    M = Model()
    xs = [M.var(0, 1) for _ in range(p.d)]
    s = M.var(-1, 1)
    caps = dict(c.caps)
    for a in range(1, p.d + 1):
        if a in caps:
            M.add({xs[a - 1]: 1, s: -caps[a]}, ">=")
            M.add({xs[a - 1]: 1}, "<=", caps[a])
        else:
            M.add({xs[a - 1]: 1, s: -1}, ">=")
    M.add({xs[a - 1]: k for a, k in _line_counts(p).items() if k}, "==")
    if c.re_order is not None:
        lo, hi = (p.top[-1], p.bottom[-1]) if c.re_order == "<" else (p.bottom[-1], p.top[-1])
        if lo == hi:
            M.add({s: 1}, "<=", -1)  # strict order between a symbol and itself
        else:
            M.add({xs[hi - 1]: 1, xs[lo - 1]: -1, s: -1}, ">=")
    return M, xs, s


def _prefix_rows(line: Sequence[int], ys: list[int]) -> list[dict[int, Fraction]]:
    rows, acc = [], {}
    for a in line[:-1]:
        acc = dict(acc)
        acc[ys[a - 1]] = acc.get(ys[a - 1], 0) + 1
        rows.append(acc)
    return rows


def _embedding_rows(p: GenPerm, x: Sequence[Fraction], ys: list[int]) -> list[dict[int, Fraction]]:
    """Rows expressing (top height - bottom height) at each interior vertex, for fixed Re."""

    def vertices(line):
        out, pos = [], Fraction(0)
        for a in line:
            pos += x[a - 1]
            out.append(pos)
        return out

    def height(line, X):
        # linear form (symbol-index -> coeff) for the height of ``line`` above abscissa X
        form: dict[int, Fraction] = {}
        pos = Fraction(0)
        for a in line:
            nxt = pos + x[a - 1]
            j = ys[a - 1]
            if X >= nxt:
                form[j] = form.get(j, 0) + 1
            else:
                form[j] = form.get(j, 0) + (X - pos) / x[a - 1]
                break
            pos = nxt
        return form

    def diff(X):
        f = height(p.top, X)
        for j, v in height(p.bottom, X).items():
            f[j] = f.get(j, 0) - v
        return f

    xs_top = vertices(p.top)[:-1]
    xs_bot = vertices(p.bottom)[:-1]
    return [diff(X) for X in sorted(set(xs_top + xs_bot))]


def _im_model(p: GenPerm, zero_im_sum: bool, x: Sequence[Fraction] | None = None):
    M = Model()
    ys = [M.var(-1, 1) for _ in range(p.d)]
    s = M.var(-1, 1)
    for row in _prefix_rows(p.top, ys):
        M.add({**row, s: -1}, ">=")
    for row in _prefix_rows(p.bottom, ys):
        M.add({**row, s: 1}, "<=")
    M.add({ys[a - 1]: k for a, k in _line_counts(p).items() if k}, "==")
    if zero_im_sum:
        tot: dict[int, int] = {}
        for a in p.top:
            tot[ys[a - 1]] = tot.get(ys[a - 1], 0) + 1
        M.add(tot, "==")
    if x is not None:
        for row in _embedding_rows(p, x, ys):
            M.add({**row, s: -1}, ">=")
    return M, ys, s


def re_feasible(p: GenPerm) -> bool:
    """Positive real parts with equal line sums exist iff top-only and bottom-only are both empty or both not."""
    return bool(p.top_only()) == bool(p.bottom_only())


@lru_cache(maxsize=1 << 16)
def is_irreducible(p: GenPerm) -> bool:
    if not re_feasible(p):
        return False
    M, _, s = _im_model(p, zero_im_sum=False)
    res = M.maximize({s: 1})
    return res.status == "optimal" and res.value > 0


def _solve(M: Model, s: int, what: str):
    res = M.maximize({s: 1})
    if res.status != "optimal" or res.value <= 0:
        raise InfeasibleConstraints(what)
    return res


def witness_suspension(
    p: GenPerm,
    c: WitnessConstraints = WitnessConstraints(),
    *,
    embed: bool = True,
    budget: int = 64,
    seed: int = 0,
) -> SuspensionDatum:
    """An exact suspension datum for ``p`` meeting ``c`` (embedded unless ``embed=False``).

    Real parts come from a max-slack program; imaginary parts are then solved
    with the real parts frozen, which makes "top line above bottom line at
    every vertex" a set of linear rows.  When that fails, further real parts
    are drawn as midpoints with randomly weighted vertices of the same
    feasible region, up to ``budget`` attempts.
    """
    Mre, xs, sre = _re_model(p, c)
    re_opt = _solve(Mre, sre, f"no admissible real parts for {p} under {c}")
    Mim, ys, sim = _im_model(p, c.zero_im_sum)
    im_opt = _solve(Mim, sim, f"no admissible imaginary parts for {p} under {c}")
    x0 = [re_opt.x[j] for j in xs]
    if not embed:
        return SuspensionDatum(tuple(Vec(x0[k], im_opt.x[ys[k]]) for k in range(p.d)))

    rng = random.Random(f"{p}|{c}|{seed}")
    for attempt in range(budget):
        if attempt == 0:
            x = x0
        else:
            Mr, xr, sr = _re_model(p, c)
            Mr.lower[sr] = re_opt.value / 2
            res = Mr.maximize({j: rng.randint(1, 97) for j in xr})
            x = [(a + res.x[j]) / 2 for a, j in zip(x0, xr)]
        Me, ye, se = _im_model(p, c.zero_im_sum, x)
        res = Me.maximize({se: 1})
        if res.status == "optimal" and res.value > 0:
            z = SuspensionDatum(tuple(Vec(x[k], res.x[ye[k]]) for k in range(p.d)))
            assert not check_suspension(p, z) and is_embedded(p, z)
            return z
    raise EmbeddingBudgetExceeded(f"no embedded suspension for {p} after {budget} attempts")
