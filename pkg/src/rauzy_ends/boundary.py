"""Certified witnesses for the boundary constructions.

* :func:`shrink_witness` builds a point of D(p, eps): a suspension datum
  whose area-one rescaling has a short regular side.
* :func:`rauzy_connect` and :func:`s_connect` exhibit one surface lying in
  D(p, eps) and in D(p', eps) for neighbouring class members.
* :func:`d_path` joins two points of D(p, eps) by the shifted convex
  combination path, certified at rational samples.
* :func:`connectivity_report` runs all of the above over a class.

Every certificate can be replayed by :func:`verify_connection` and
:func:`verify_path`, which only use the checker functions (suspension
conditions, embedding, membership, one induction step, the half-turn) and
never the linear programs that produced the data.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .classes import ClassGraph, perm_key
from .dynamics import G, Rot180, act, half_turn, induct
from .errors import (
    BudgetExceeded,
    CaseUnavailable,
    EmbeddingBudgetExceeded,
    InfeasibleConstraints,
    NotRegular,
    RauzyError,
    Reducible,
    VerificationFailure,
)
from .genperm import GenPerm, Move, apply_move, is_abelian, reduce, regular_symbols, s_prime, shrinking_symbol
from .suspension import (
    SuspensionDatum,
    Vec,
    WitnessConstraints,
    area,
    check_suspension,
    combine,
    fmt_q,
    is_embedded,
    is_irreducible,
    small_symbols,
    witness_suspension,
)

ROTATION_NOTE = (
    "abelian stratum: the half-turn is realised by the rotation path r_theta, "
    "theta in [0, pi]; only its endpoints are certified"
)


def _balance(v: Vec, A: Fraction, eps: Fraction) -> Fraction | None:
    """A rational lam with |G(lam) v|^2 < eps^2 A, or None if none is found."""
    bound = eps * eps * A
    x, y = v.re, abs(v.im)

    def ok(lam):
        return lam * lam * x * x + y * y / (lam * lam) < bound

    # small powers of two first: they keep the certificates short
    cands = [Fraction(2) ** k for k in sorted(range(-60, 61), key=lambda k: (abs(k), k))]
    if y:
        cands.append(Fraction(math.sqrt(float(y / x))).limit_denominator(1 << 20))
    for lam in cands:
        if lam > 0 and ok(lam):
            return lam
    return None


def shrink_witness(
    p: GenPerm,
    alpha: int,
    eps,
    order: str | None = None,
    zero_im_sum: bool = False,
    budget: int = 48,
    seed: int = 0,
) -> SuspensionDatum:
    """An embedded suspension datum of ``p`` in D(p, eps) with ``alpha`` short.

    The real part of ``alpha`` is capped in the feasibility program and the
    cap tightened until the product Re * |Im| is small against the area; a
    geodesic-flow matrix diag(lam, 1/lam) with rational lam then balances
    the two components.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not is_irreducible(p):
        raise Reducible(f"{p} is reducible")
    if alpha not in regular_symbols(p):
        raise NotRegular(f"symbol {alpha} is not regular in {p}")
    delta = Fraction(1, 2)
    for _ in range(budget):
        c = WitnessConstraints(zero_im_sum=zero_im_sum, re_order=order, caps=((alpha, delta),))
        z = witness_suspension(p, c, seed=seed)
        lam = _balance(z[alpha], area(p, z), eps)
        if lam is not None:
            z = act(p, z, G(lam))
            assert alpha in small_symbols(p, z, eps)
            return z
        delta /= 4
    raise BudgetExceeded(f"could not shorten symbol {alpha} of {p} below eps={eps}")


# ---------------------------------------------------------------------------
# connections between neighbouring permutations


@dataclass(frozen=True)
class ConnectionWitness:
    mechanism: str  # "induction" | "half-turn"
    move: Move
    eps: Fraction
    source: GenPerm
    source_zeta: SuspensionDatum
    source_symbol: int
    target: GenPerm
    target_zeta: SuspensionDatum
    target_symbol: int
    relabel: tuple[tuple[int, int], ...]
    note: str = ""

    def as_json(self) -> dict:
        return {
            "mechanism": self.mechanism,
            "move": self.move.value,
            "eps": fmt_q(self.eps),
            "source": perm_key(self.source),
            "source_zeta": self.source_zeta.as_json(),
            "source_symbol": self.source_symbol,
            "target": perm_key(self.target),
            "target_zeta": self.target_zeta.as_json(),
            "target_symbol": self.target_symbol,
            "relabel": [list(pair) for pair in self.relabel],
            "note": self.note,
        }


def _certify_side(p: GenPerm, z: SuspensionDatum, symbol: int, eps: Fraction, what: str) -> None:
    bad = check_suspension(p, z)
    if bad:
        raise VerificationFailure(f"{what}: {bad[0]}")
    if not is_embedded(p, z):
        raise VerificationFailure(f"{what}: not embedded")
    if symbol not in small_symbols(p, z, eps):
        raise VerificationFailure(f"{what}: symbol {symbol} is not a short regular symbol")


def verify_connection(w: ConnectionWitness) -> None:
    """Replay a connection certificate; raises VerificationFailure on any mismatch."""
    _certify_side(w.source, w.source_zeta, w.source_symbol, w.eps, "source")
    _certify_side(w.target, w.target_zeta, w.target_symbol, w.eps, "target")
    f = dict(w.relabel)
    if w.mechanism == "induction":
        q, z2, mv, f2 = induct(w.source, w.source_zeta)
        if (q, z2, mv, f2) != (w.target, w.target_zeta, w.move, f):
            raise VerificationFailure("induction replay does not reproduce the target")
        if z2[w.target_symbol] != w.source_zeta[w.source_symbol]:
            raise VerificationFailure("short symbol was not transported unchanged")
    elif w.mechanism == "half-turn":
        rotated = act(w.source, w.source_zeta, Rot180())
        q, f2 = reduce(s_prime(w.source))
        flipped = SuspensionDatum(tuple(-v for v in rotated.zeta)).relabeled(f2)
        if (q, flipped, f2) != (w.target, w.target_zeta, f):
            raise VerificationFailure("half-turn replay does not reproduce the target")
    else:
        raise VerificationFailure(f"unknown mechanism {w.mechanism!r}")
    if area(w.source, w.source_zeta) != area(w.target, w.target_zeta):
        raise VerificationFailure("area changed across the connection")


def rauzy_connect(p: GenPerm, move: Move | str, eps, seeds: int = 8) -> ConnectionWitness:
    """One surface in D(p, eps) and in D(R(p), eps), related by an induction step."""
    move = Move(move)
    if move is Move.S:
        raise ValueError("use s_connect for the S move")
    eps = Fraction(eps)
    if not is_irreducible(p):
        raise Reducible(f"{p} is reducible")
    target = apply_move(p, move)  # MoveUndefined propagates
    alpha = shrinking_symbol(p, move)
    if alpha not in regular_symbols(p):
        raise NotRegular(f"moved symbol {alpha} is not regular in {p}")
    order = "<" if move is Move.R1 else ">"
    for seed in range(seeds):
        z = shrink_witness(p, alpha, eps, order=order, seed=seed)
        q, z2, mv, f = induct(p, z)
        if mv is not move or q != target:
            raise VerificationFailure(f"induction from {p} took {mv}, expected {move}")
        beta = f[alpha]
        if beta not in regular_symbols(q):
            raise VerificationFailure(f"transported symbol {beta} is not regular in {q}")
        if not is_embedded(q, z2):
            continue
        w = ConnectionWitness(
            "induction", move, eps, p, z, alpha, q, z2, beta, tuple(sorted(f.items()))
        )
        verify_connection(w)
        return w
    raise EmbeddingBudgetExceeded(f"no embedded image for {move} at {p} after {seeds} seeds")


def s_connect(p: GenPerm, eps) -> ConnectionWitness:
    """One surface in D(p, eps) whose half-turn lies in D(s(p), eps)."""
    eps = Fraction(eps)
    if not is_irreducible(p):
        raise Reducible(f"{p} is reducible")
    witness_suspension(p, WitnessConstraints(zero_im_sum=True), embed=False)  # gate
    reg = regular_symbols(p)
    ends = [a for a in dict.fromkeys((p.top[-1], p.bottom[-1])) if a in reg]
    last_err: RauzyError | None = None
    for alpha in ends + sorted(reg - set(ends)):
        try:
            z = shrink_witness(p, alpha, eps, zero_im_sum=True)
        except (InfeasibleConstraints, BudgetExceeded) as exc:
            last_err = exc
            continue
        q, z2, f = half_turn(p, z)
        w = ConnectionWitness(
            "half-turn",
            Move.S,
            eps,
            p,
            z,
            alpha,
            q,
            z2,
            f[alpha],
            tuple(sorted(f.items())),
            ROTATION_NOTE if is_abelian(p) else "",
        )
        verify_connection(w)
        return w
    raise InfeasibleConstraints(f"no zero-sum witness with a short regular symbol for {p}: {last_err}")


# ---------------------------------------------------------------------------
# paths inside D(p, eps)


@dataclass(frozen=True)
class Sample:
    segment: str  # "rise" | "cross" | "fall"
    t: Fraction
    symbol: int
    embedded: bool


@dataclass(frozen=True)
class PathLeg:
    """rise: start + tN e_B;  cross: (1-t) start + t end + N e_B;  fall: end + (1-t)N e_B.

    ``e_B`` adds one to the real part of every shift symbol.
    """

    start: SuspensionDatum
    end: SuspensionDatum
    start_symbol: int
    end_symbol: int
    case: str  # "both-lines" | "one-per-line"
    shift: tuple[int, ...]
    N: int
    samples: tuple[Sample, ...]

    def point(self, segment: str, t: Fraction) -> SuspensionDatum:
        if segment == "rise":
            base, amount = self.start, t * self.N
        elif segment == "cross":
            base, amount = combine(self.start, self.end, t), Fraction(self.N)
        elif segment == "fall":
            base, amount = self.end, (1 - t) * self.N
        else:
            raise ValueError(segment)
        zeta = list(base.zeta)
        for b in self.shift:
            zeta[b - 1] = zeta[b - 1] + Vec(amount, 0)
        return SuspensionDatum(tuple(zeta))

    def as_json(self) -> dict:
        return {
            "case": self.case,
            "shift": list(self.shift),
            "N": self.N,
            "start_symbol": self.start_symbol,
            "end_symbol": self.end_symbol,
            "samples": len(self.samples),
            "embedded_samples": sum(s.embedded for s in self.samples),
        }


@dataclass(frozen=True)
class PathWitness:
    perm: GenPerm
    eps: Fraction
    legs: tuple[PathLeg, ...]
    intermediate: SuspensionDatum | None = None
    note: str = field(
        default="membership certified at rational samples only; area from the exact shoelace form"
    )

    @property
    def endpoints(self) -> tuple[SuspensionDatum, SuspensionDatum]:
        return self.legs[0].start, self.legs[-1].end

    def as_json(self) -> dict:
        return {
            "perm": perm_key(self.perm),
            "eps": fmt_q(self.eps),
            "legs": [leg.as_json() for leg in self.legs],
            "intermediate": None if self.intermediate is None else self.intermediate.as_json(),
            "note": self.note,
        }


def choose_shift(p: GenPerm, a: int, b: int) -> tuple[str, tuple[int, ...]] | None:
    """Shift symbols avoiding the short symbols ``a`` and ``b``, if any."""
    avoid = {a, b}
    both = sorted(p.both_lines() - avoid)
    if both:
        return "both-lines", (both[0],)
    top = sorted(p.top_only() - avoid)
    bot = sorted(p.bottom_only() - avoid)
    if top and bot:
        return "one-per-line", (top[0], bot[0])
    return None


def _sample_ts(samples: int) -> list[Fraction]:
    return [Fraction(i, samples - 1) for i in range(samples)]


def _build_leg(p, z1, a1, z2, a2, eps, samples, n_budget) -> PathLeg:
    case, shift = choose_shift(p, a1, a2)
    ts = _sample_ts(samples)
    N = 1
    while N <= n_budget:
        leg = PathLeg(z1, z2, a1, a2, case, shift, N, ())
        recs = []
        for seg in ("rise", "cross", "fall"):
            for t in ts:
                pt = leg.point(seg, t)
                if check_suspension(p, pt):
                    raise VerificationFailure(f"{seg} sample t={t} left the suspension cone")
                hits = small_symbols(p, pt, eps, require_embedded=False)
                if not hits:
                    break
                recs.append(Sample(seg, t, hits[0], is_embedded(p, pt)))
            else:
                continue
            break
        else:
            return PathLeg(z1, z2, a1, a2, case, shift, N, tuple(recs))
        N *= 2
    raise BudgetExceeded(f"shift N exceeded {n_budget} for a path in D({p})")


def verify_path(w: PathWitness) -> None:
    p, eps = w.perm, w.eps
    for i, leg in enumerate(w.legs):
        if choose_shift(p, leg.start_symbol, leg.end_symbol) != (leg.case, leg.shift):
            raise VerificationFailure(f"leg {i}: shift symbols do not avoid the short symbols")
        for z, a in ((leg.start, leg.start_symbol), (leg.end, leg.end_symbol)):
            if check_suspension(p, z) or not is_embedded(p, z) or a not in small_symbols(p, z, eps):
                raise VerificationFailure(f"leg {i}: endpoint not in D")
        if i and leg.start != w.legs[i - 1].end:
            raise VerificationFailure(f"leg {i} does not start where leg {i - 1} ends")
        for s in leg.samples:
            pt = leg.point(s.segment, s.t)
            if check_suspension(p, pt):
                raise VerificationFailure(f"leg {i}: sample {s.segment} t={s.t} not a suspension")
            if check_suspension(p, combine(leg.start, leg.end, s.t)):
                raise VerificationFailure(f"leg {i}: unshifted combination at t={s.t} not a suspension")
            if s.symbol not in small_symbols(p, pt, eps, require_embedded=False):
                raise VerificationFailure(f"leg {i}: sample {s.segment} t={s.t} not in D")
            if is_embedded(p, pt) != s.embedded:
                raise VerificationFailure(f"leg {i}: embedded flag mismatch")
        segs = {(s.segment, s.t) for s in leg.samples}
        if len(segs) != len(leg.samples) or len({s.t for s in leg.samples}) < 3:
            raise VerificationFailure(f"leg {i}: sample grid is incomplete")


def _double_short(p: GenPerm, gammas: Sequence[int], eps: Fraction) -> SuspensionDatum | None:
    """A witness in which every symbol of ``gammas`` is short at once (best effort)."""
    for seed in range(4):
        try:
            z = witness_suspension(p, WitnessConstraints(), seed=seed)
        except (InfeasibleConstraints, EmbeddingBudgetExceeded):
            return None
        A = area(p, z)
        for k in range(-30, 31):
            lam = Fraction(2) ** k
            zz = SuspensionDatum(tuple(G(lam).apply(v) for v in z.zeta))
            if all(zz[g].abs2() < eps * eps * A for g in gammas):
                return zz
    return None


def _intermediates(p: GenPerm, eps: Fraction):
    reg = sorted(regular_symbols(p))
    for g in reg:
        try:
            yield shrink_witness(p, g, eps)
        except RauzyError:
            continue
    for pair in itertools.combinations(reg, 2):
        z = _double_short(p, pair, eps)
        if z is not None:
            yield z


def d_path(
    p: GenPerm,
    z: SuspensionDatum,
    z2: SuspensionDatum,
    eps,
    samples: int = 17,
    n_budget: int = 1 << 40,
) -> PathWitness:
    """A sampled path inside D(p, eps) from ``z`` to ``z2``.

    Direct when a shift symbol avoiding both short symbols exists (one symbol
    in both lines, or one top-only plus one bottom-only); otherwise through
    an intermediate witness whose short symbols make both legs direct.
    """
    eps = Fraction(eps)
    if samples < 3:
        raise ValueError("samples must be at least 3")
    s1 = small_symbols(p, z, eps)
    s2 = small_symbols(p, z2, eps)
    if not s1 or not s2:
        raise ValueError("both endpoints must lie in D(p, eps)")
    for a in s1:
        for b in sorted(s2, key=lambda b: b != a):
            if choose_shift(p, a, b):
                leg = _build_leg(p, z, a, z2, b, eps, samples, n_budget)
                return PathWitness(p, eps, (leg,))
    for mid in _intermediates(p, eps):
        s3 = small_symbols(p, mid, eps)
        for a, g1, g2, b in itertools.product(s1, s3, s3, s2):
            if choose_shift(p, a, g1) and choose_shift(p, g2, b):
                leg1 = _build_leg(p, z, a, mid, g1, eps, samples, n_budget)
                leg2 = _build_leg(p, mid, g2, z2, b, eps, samples, n_budget)
                return PathWitness(p, eps, (leg1, leg2), intermediate=mid)
    raise CaseUnavailable(
        f"{p}: short symbols {s1} and {s2} leave no shift symbol, and no intermediate witness "
        f"has short symbols completing both legs at eps={fmt_q(eps)}"
    )


# ---------------------------------------------------------------------------
# class-level report


@dataclass
class Report:
    representative: str
    stratum: str | None
    eps: Fraction
    samples: int
    nodes: list[str]
    edges: list[dict]
    paths: list[dict]
    connected: bool
    witness_connected: bool
    replay_failures: int

    def as_json(self) -> dict:
        return {
            "representative": self.representative,
            "stratum": self.stratum,
            "eps": fmt_q(self.eps),
            "samples": self.samples,
            "nodes": self.nodes,
            "edges": self.edges,
            "paths": self.paths,
            "verified_edges": sum(e["status"] == "verified" for e in self.edges),
            "unverified_edges": sum(e["status"] != "verified" for e in self.edges),
            "connected": self.connected,
            "witness_connected": self.witness_connected,
            "replay_failures": self.replay_failures,
        }


def _edge_work(args) -> tuple[ConnectionWitness | None, str | None, bool]:
    p, mv, eps = args
    try:
        w = s_connect(p, eps) if mv is Move.S else rauzy_connect(p, mv, eps)
    except VerificationFailure as exc:
        return None, f"VerificationFailure: {exc}", True
    except (RauzyError, AssertionError) as exc:
        return None, f"{type(exc).__name__}: {exc}", False
    try:
        verify_connection(w)
    except VerificationFailure as exc:
        return None, f"VerificationFailure: {exc}", True
    return w, None, False


def _path_work(args) -> tuple[PathWitness | None, str | None, bool]:
    p, z1, z2, eps, samples = args
    try:
        w = d_path(p, z1, z2, eps, samples)
    except VerificationFailure as exc:
        return None, f"VerificationFailure: {exc}", True
    except RauzyError as exc:
        return None, f"{type(exc).__name__}: {exc}", False
    try:
        verify_path(w)
    except VerificationFailure as exc:
        return None, f"VerificationFailure: {exc}", True
    return w, None, False


class _UF:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, u: int) -> int:
        while self.parent[u] != u:
            self.parent[u] = self.parent[self.parent[u]]
            u = self.parent[u]
        return u

    def union(self, u: int, v: int) -> None:
        ru, rv = self.find(u), self.find(v)
        if ru != rv:
            self.parent[max(ru, rv)] = min(ru, rv)

    def components(self) -> int:
        return len({self.find(u) for u in range(len(self.parent))})


def connectivity_report(c: ClassGraph, eps, samples: int = 17, jobs: int = 1) -> Report:
    """Try every class edge and join the witnesses found at each node.

    ``connected`` is about the class graph restricted to certified edges.
    ``witness_connected`` is the finer statement that all witnesses form one
    component once same-node witnesses are joined by certified paths.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not c.extended:
        raise ValueError("connectivity_report expects an extended class")
    edge_keys = sorted({(a, mv) for a, mv, _ in c.edges}, key=lambda e: (perm_key(e[0]), e[1].value))
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        mapper = map if pool is None else pool.map
        edge_results = list(mapper(_edge_work, [(a, mv, eps) for a, mv in edge_keys]))

        witnesses: list[tuple[GenPerm, SuspensionDatum]] = []
        wid: dict[tuple[GenPerm, SuspensionDatum], int] = {}

        def note(p, z):
            if (p, z) not in wid:
                wid[(p, z)] = len(witnesses)
                witnesses.append((p, z))
            return wid[(p, z)]

        edges_json, links, replay = [], [], 0
        node_index = {q: i for i, q in enumerate(c.nodes)}
        node_uf = _UF(len(c.nodes))
        for (a, mv), (w, err, failed_replay) in zip(edge_keys, edge_results):
            replay += failed_replay
            if w is None:
                target = next(b for x, m, b in c.edges if x == a and m == mv)
                edges_json.append(
                    {"source": perm_key(a), "move": mv.value, "target": perm_key(target),
                     "status": "failed", "error": err}
                )
                continue
            edges_json.append({**w.as_json(), "status": "verified"})
            node_uf.union(node_index[w.source], node_index[w.target])
            links.append((note(w.source, w.source_zeta), note(w.target, w.target_zeta)))

        per_node: dict[GenPerm, list[int]] = {}
        for i, (q, _) in enumerate(witnesses):
            per_node.setdefault(q, []).append(i)
        path_jobs, path_pairs = [], []
        for q in c.nodes:
            ids = per_node.get(q, [])
            for j in ids[1:]:
                path_jobs.append((q, witnesses[ids[0]][1], witnesses[j][1], eps, samples))
                path_pairs.append((ids[0], j))
        path_results = list(mapper(_path_work, path_jobs))
    finally:
        if pool is not None:
            pool.shutdown()

    paths_json = []
    for (i, j), (w, err, failed_replay) in zip(path_pairs, path_results):
        replay += failed_replay
        entry = {"node": perm_key(witnesses[i][0]), "from": i, "to": j}
        if w is None:
            entry.update(status="failed", error=err)
        else:
            entry.update(status="verified", path=w.as_json())
            links.append((i, j))
        paths_json.append(entry)

    wuf = _UF(max(1, len(witnesses)))
    for i, j in links:
        wuf.union(i, j)
    return Report(
        representative=perm_key(c.representative),
        stratum=None if c.stratum is None else str(c.stratum),
        eps=eps,
        samples=samples,
        nodes=[perm_key(q) for q in c.nodes],
        edges=edges_json,
        paths=paths_json,
        connected=node_uf.components() == 1,
        witness_connected=bool(witnesses) and wuf.components() == 1,
        replay_failures=replay,
    )
