"""One step of Rauzy-Veech induction on (permutation, suspension) pairs, and
exact area-preserving linear actions on suspension data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import ConditionsBroken, TieBreak
from .genperm import GenPerm, Move, move_prime, reduce, s_prime
from .suspension import SuspensionDatum, Vec, check_suspension


@dataclass(frozen=True)
class G:
    """diag(lam, 1/lam); lam plays the role of exp(t/2) in the geodesic flow."""

    lam: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.lam <= 0:
            raise ValueError("lam must be positive")

    def apply(self, v: Vec) -> Vec:
        return Vec(v.re * self.lam, v.im / self.lam)


@dataclass(frozen=True)
class H:
    """Unipotent shear [[1, t], [0, 1]]."""

    t: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", Fraction(self.t))

    def apply(self, v: Vec) -> Vec:
        return Vec(v.re + self.t * v.im, v.im)


@dataclass(frozen=True)
class Rot180:
    def apply(self, v: Vec) -> Vec:
        return -v


LinearAction = Union[G, H, Rot180]


def act(p: GenPerm, z: SuspensionDatum, a: LinearAction) -> SuspensionDatum:
    """Apply ``a`` to every vector of ``z``.

    G and H results are checked against ``p``.  Rot180 is returned raw: the
    negated vectors describe the half-turned polygon, whose sides read left
    to right are those of s'(p) (see :func:`half_turn`).
    """
    out = SuspensionDatum(tuple(a.apply(v) for v in z.zeta))
    if not isinstance(a, Rot180):
        bad = check_suspension(p, out)
        if bad:
            raise ConditionsBroken(f"{a} breaks the suspension conditions: {bad[0]}")
    return out


def induct(p: GenPerm, z: SuspensionDatum) -> tuple[GenPerm, SuspensionDatum, Move, dict[int, int]]:
    """One Rauzy-Veech step.

    The last top and last bottom symbols compete by real part; the winner
    loses the loser's vector, the table changes by R0 (top wins) or R1, and
    the result is renumbered to reduced form.  Returns the new permutation,
    its datum, the move and the old -> new relabeling.
    """
    a, b = p.top[-1], p.bottom[-1]
    if z[a].re == z[b].re:
        raise TieBreak(f"Re zeta_{a} = Re zeta_{b}: induction undefined")
    if z[a].re > z[b].re:
        move, winner, loser = Move.R0, a, b
    else:
        move, winner, loser = Move.R1, b, a
    q = move_prime(p, move)
    zeta = list(z.zeta)
    zeta[winner - 1] = z[winner] - z[loser]
    q_red, f = reduce(q)
    return q_red, SuspensionDatum(tuple(zeta)).relabeled(f), move, f


def half_turn(p: GenPerm, z: SuspensionDatum) -> tuple[GenPerm, SuspensionDatum, dict[int, int]]:
    """Reading the half-turned polygon of (p, z) left to right.

    Rotating by 180 degrees negates every side vector and reverses the order
    of the sides; traversing them left to right again flips each sign back.
    So the rotated surface is (s'(p), z) and, after renumbering, (s(p), z o f^-1).
    The result is a suspension datum whenever the top line of ``z`` has
    zero total imaginary part (the end point then sits on the real axis).
    """
    rotated = act(p, z, Rot180())
    q, f = reduce(s_prime(p))
    unflipped = SuspensionDatum(tuple(-v for v in rotated.zeta))
    return q, unflipped.relabeled(f), f
