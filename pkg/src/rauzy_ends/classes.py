"""Rauzy classes, extended Rauzy classes, the per-stratum census, and a
content-addressed on-disk cache of class graphs.

Cache file layout (one class per file, line oriented)::

    representative 1 2 / 2 1 extended true stratum H(0)
    node 1 2 / 2 1
    edge 1 2 / 2 1 | R0 | 1 2 / 2 1
    checksum sha256 <hex digest of every preceding line>
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CorruptCache, MoveUndefined, NodeBudgetExceeded, Reducible
from .genperm import GenPerm, Move, all_reduced, apply_move, format_perm, is_abelian, parse, reduce
from .suspension import is_irreducible
from .surface import StratumSignature, parse_stratum, stratum, vertex_count

DEFAULT_NODE_BUDGET = 10**7


def perm_key(p: GenPerm) -> str:
    return format_perm(p)


@dataclass(frozen=True)
class ClassGraph:
    nodes: tuple[GenPerm, ...]
    edges: tuple[tuple[GenPerm, Move, GenPerm], ...]
    extended: bool
    stratum: StratumSignature | None = field(default=None, compare=False)

    @property
    def representative(self) -> GenPerm:
        return self.nodes[0]

    def __len__(self) -> int:
        return len(self.nodes)

    def summary(self) -> dict:
        return {
            "representative": perm_key(self.representative),
            "size": len(self.nodes),
            "extended": self.extended,
            "stratum": None if self.stratum is None else str(self.stratum),
        }


def _canonical(nodes: Iterable[GenPerm], edges: Iterable, extended: bool, sig=None) -> ClassGraph:
    ns = tuple(sorted(set(nodes), key=perm_key))
    es = tuple(sorted(set(edges), key=lambda e: (perm_key(e[0]), e[1].value, perm_key(e[2]))))
    return ClassGraph(ns, es, extended, sig)


def _expand(args: tuple[GenPerm, bool]) -> list[tuple[Move, GenPerm]]:
    p, extended = args
    out = []
    for mv in (Move.R0, Move.R1):
        try:
            out.append((mv, apply_move(p, mv)))
        except MoveUndefined:
            pass
    if extended:
        q = apply_move(p, Move.S)
        if is_irreducible(q):  # s is forbidden when s(p) is reducible
            out.append((Move.S, q))
    return out


def _pool(jobs: int):
    return ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None


def _map(pool, fn, items: Sequence, chunksize: int = 64) -> list:
    if pool is None:
        return [fn(x) for x in items]
    return list(pool.map(fn, items, chunksize=max(1, min(chunksize, len(items) // 8 or 1))))


def rauzy_class(
    p: GenPerm,
    extended: bool = False,
    node_budget: int = DEFAULT_NODE_BUDGET,
    jobs: int = 1,
) -> ClassGraph:
    """Breadth-first closure of ``reduce(p)`` under R0, R1 (and gated S).

    Frontiers are expanded level by level, concurrently when ``jobs > 1``;
    the visited set is only touched by the coordinating process, and the
    returned graph is canonically sorted, so the result does not depend on
    the schedule.
    """
    p = reduce(p)[0]
    if not is_irreducible(p):
        raise Reducible(f"{p} is reducible")
    seen = {p}
    edges = []
    frontier = [p]
    pool = _pool(jobs)
    try:
        while frontier:
            results = _map(pool, _expand, [(q, extended) for q in frontier])
            nxt = []
            for q, outs in zip(frontier, results):
                for mv, r in outs:
                    edges.append((q, mv, r))
                    if r not in seen:
                        if len(seen) >= node_budget:
                            raise NodeBudgetExceeded(f"class of {p} exceeds {node_budget} nodes")
                        seen.add(r)
                        nxt.append(r)
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    return _canonical(seen, edges, extended)


def rauzy_class_of(text: str, extended: bool = False) -> ClassGraph:
    return rauzy_class(parse(text), extended)


# ---------------------------------------------------------------------------
# census


@dataclass(frozen=True)
class Census:
    d: int
    classes: tuple[ClassGraph, ...]  # sorted by representative
    nonconstant: tuple[str, ...]  # representatives of classes whose stratum varies
    candidates: int
    irreducible: int

    def by_stratum(self) -> dict[str, list[ClassGraph]]:
        out: dict[str, list[ClassGraph]] = {}
        for c in self.classes:
            out.setdefault(str(c.stratum), []).append(c)
        return dict(sorted(out.items()))

    def count(self, label: str | StratumSignature) -> int:
        if isinstance(label, str):
            label = parse_stratum(label)  # normalizes the order of the entries
        return len(self.by_stratum().get(str(label), []))

    def as_json(self) -> dict:
        strata = {}
        for label, cs in self.by_stratum().items():
            strata[label] = {
                "classes": len(cs),
                "sizes": [len(c) for c in cs],
                "representatives": [perm_key(c.representative) for c in cs],
            }
        return {
            "d": self.d,
            "candidates": self.candidates,
            "irreducible": self.irreducible,
            "extended_classes": len(self.classes),
            "nonconstant_stratum": list(self.nonconstant),
            "strata": strata,
        }


def _stratum_label(p: GenPerm) -> str:
    return str(stratum(p))


def _irreducible_flag(p: GenPerm) -> bool:
    return is_irreducible(p)


def _could_be(p: GenPerm, targets: Sequence[StratumSignature]) -> bool:
    ab = is_abelian(p)
    v = vertex_count(p)
    return any((t.holonomy == "abelian") == ab and len(t.orders) == v for t in targets)


def census(
    d: int,
    jobs: int = 1,
    strata: Sequence[StratumSignature] | None = None,
    all_nodes: bool = True,
    node_budget: int = DEFAULT_NODE_BUDGET,
    max_d: int = 8,
) -> Census:
    """Every extended Rauzy class of reduced irreducible tables with ``d`` symbols.

    ``strata`` restricts the run to classes that can lie in the given strata,
    using the combinatorial vertex count and holonomy as a prefilter.
    ``all_nodes`` computes the stratum of every node (to check constancy)
    instead of only the representative's.
    """
    if not 2 <= d <= max_d:
        raise ValueError(f"d must be in 2..{max_d}")
    cands = list(all_reduced(d))
    if strata:
        cands = [p for p in cands if _could_be(p, strata)]
    pool = _pool(jobs)
    try:
        flags = _map(pool, _irreducible_flag, cands, chunksize=256)
        irr = [p for p, ok in zip(cands, flags) if ok]
        irr_set = set(irr)
        moves: dict[GenPerm, list[tuple[Move, GenPerm]]] = {}
        for p in irr:
            out = []
            for mv in (Move.R0, Move.R1, Move.S):
                try:
                    q = apply_move(p, mv)
                except MoveUndefined:
                    continue
                if q in irr_set:
                    out.append((mv, q))
                elif mv is not Move.S:
                    # R0/R1 keep irreducibility, vertex count and holonomy
                    raise AssertionError(f"{mv} left the irreducible set at {p}")
            moves[p] = out

        owner: dict[GenPerm, int] = {}
        groups: list[tuple[list[GenPerm], list]] = []
        for seed in sorted(irr, key=perm_key):
            if seed in owner:
                continue
            idx = len(groups)
            owner[seed] = idx
            members, edges = [seed], []
            queue = deque([seed])
            while queue:
                q = queue.popleft()
                for mv, r in moves[q]:
                    edges.append((q, mv, r))
                    if r not in owner:
                        if len(members) >= node_budget:
                            raise NodeBudgetExceeded(f"class of {seed} exceeds {node_budget} nodes")
                        owner[r] = idx
                        members.append(r)
                        queue.append(r)
                    elif owner[r] != idx:
                        raise AssertionError(f"closure of {seed} meets the class of another seed")
            groups.append((members, edges))

        if all_nodes:
            todo = [q for members, _ in groups for q in members]
        else:
            todo = [min(members, key=perm_key) for members, _ in groups]
        labels = dict(zip(todo, _map(pool, _stratum_label, todo, chunksize=16)))
    finally:
        if pool is not None:
            pool.shutdown()

    classes, nonconstant = [], []
    for members, edges in groups:
        cg = _canonical(members, edges, True)
        seen_labels = {labels[q] for q in members if q in labels}
        if len(seen_labels) > 1:
            nonconstant.append(perm_key(cg.representative))
        cg = replace(cg, stratum=parse_stratum(labels[cg.representative]))
        classes.append(cg)
    if strata:
        wanted = {str(s) for s in strata}
        classes = [c for c in classes if str(c.stratum) in wanted]
    classes.sort(key=lambda c: perm_key(c.representative))
    return Census(d, tuple(classes), tuple(sorted(nonconstant)), len(cands), len(irr))


# ---------------------------------------------------------------------------
# cache


def cache_key(c: ClassGraph) -> str:
    rep = perm_key(c.representative).replace(" / ", "_").replace(" ", "-")
    return f"{rep}.{'ext' if c.extended else 'rc'}"


def _serialize(c: ClassGraph) -> str:
    sig = c.stratum if c.stratum is not None else stratum(c.representative)
    lines = [
        f"representative {perm_key(c.representative)} extended {str(c.extended).lower()} stratum {sig}"
    ]
    lines += [f"node {perm_key(q)}" for q in c.nodes]
    lines += [f"edge {perm_key(a)} | {mv.value} | {perm_key(b)}" for a, mv, b in c.edges]
    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode()).hexdigest()
    return body + f"checksum sha256 {digest}\n"


def persist(c: ClassGraph, directory: str | os.PathLike) -> str:
    """Write ``c`` atomically (temp file then rename); returns its key."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    key = cache_key(c)
    text = _serialize(c)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".class")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, d / f"{key}.class")
    return key


def load(key: str, directory: str | os.PathLike) -> ClassGraph:
    path = Path(directory) / f"{key}.class"
    text = path.read_text()
    body, sep, last = text.rstrip("\n").rpartition("\n")
    if not sep or not last.startswith("checksum sha256 "):
        raise CorruptCache(f"{path}: missing checksum line")
    body += "\n"
    if hashlib.sha256(body.encode()).hexdigest() != last.split()[-1]:
        raise CorruptCache(f"{path}: checksum mismatch")
    try:
        lines = body.splitlines()
        head = lines[0]
        assert head.startswith("representative ")
        rest, _, sig = head[len("representative ") :].rpartition(" stratum ")
        rep, _, ext = rest.rpartition(" extended ")
        nodes, edges = [], []
        for ln in lines[1:]:
            kind, _, payload = ln.partition(" ")
            if kind == "node":
                nodes.append(parse(payload))
            elif kind == "edge":
                a, mv, b = (s.strip() for s in payload.split("|"))
                edges.append((parse(a), Move(mv), parse(b)))
            else:
                raise ValueError(ln)
        c = _canonical(nodes, edges, ext == "true", parse_stratum(sig))
        assert perm_key(c.representative) == rep
    except Exception as exc:  # noqa: BLE001 - any parse failure means a corrupt file
        raise CorruptCache(f"{path}: {exc}") from exc
    return c
