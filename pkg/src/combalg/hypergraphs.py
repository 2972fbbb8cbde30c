"""3-uniform hypergraphs: girth, colourings into the two-element template,
robust extension of partial colourings, and a small named corpus.

The template lives on {a, 1} and admits exactly the triples with a single
``a``; a colouring of a hypergraph is a vertex map under which every edge
becomes such a triple.  These colourings are what the semiring
constructions elsewhere in the package detect equationally.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Mapping, Sequence

__all__ = [
    "Hypergraph", "parse_hypergraph", "dumps_hypergraph", "load_hypergraph",
    "girth", "TEMPLATE_VALUES", "find_hom", "all_homs", "check_hom",
    "is_robustly_satisfiable", "corpus", "corpus_names",
]

TEMPLATE_VALUES = ("a", "1")  # value order used for least solutions


@dataclass(frozen=True)
class Hypergraph:
    """``n`` vertices 0..n-1 and a tuple of sorted 3-element edges."""

    n: int
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        seen = set()
        for e in self.edges:
            if len(set(e)) != 3 or tuple(sorted(e)) != e:
                raise ValueError(f"edge {e} is not a sorted 3-set")
            if not all(0 <= v < self.n for v in e):
                raise ValueError(f"edge {e} out of range for n={self.n}")
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)

    def vertices(self) -> range:
        return range(self.n)

    def incident(self, v: int) -> list[tuple[int, int, int]]:
        return [e for e in self.edges if v in e]

    def isolated_vertices(self) -> list[int]:
        covered = {v for e in self.edges for v in e}
        return [v for v in range(self.n) if v not in covered]


def make_hypergraph(n: int, edges: Sequence[Sequence[int]]) -> Hypergraph:
    return Hypergraph(n, tuple(tuple(sorted(e)) for e in edges))


def parse_hypergraph(text: str) -> Hypergraph:
    """Format: ``n <count>`` then one ``u v w`` line per edge, 0-based.
    Blank lines and ``#`` comments are ignored."""
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("n "):
        raise ValueError("expected an 'n <count>' header")
    n = int(lines[0].split()[1])
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"edge line needs three vertices: {ln!r}")
        edges.append(tuple(int(p) for p in parts))
    return make_hypergraph(n, edges)


def dumps_hypergraph(h: Hypergraph) -> str:
    lines = [f"n {h.n}"]
    lines.extend(" ".join(str(v) for v in e) for e in h.edges)
    return "\n".join(lines) + "\n"


def load_hypergraph(path: str) -> Hypergraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_hypergraph(fh.read())


# ---------------------------------------------------------------------------
# Girth

def girth(h: Hypergraph) -> int | None:
    """Length of a shortest cycle, or None for a hyperforest.

    A cycle of length L >= 2 is a sequence of L distinct vertices and L
    distinct edges, each edge containing the vertex before and after it
    cyclically; two edges sharing two vertices already form a 2-cycle.
    Found by iterative deepening, so the reported length is minimal.
    """
    for e, f in combinations(h.edges, 2):
        if len(set(e) & set(f)) >= 2:
            return 2
    max_len = len(h.edges)
    for target in range(3, max_len + 1):
        if _has_cycle(h, target):
            return target
    return None


def _has_cycle(h: Hypergraph, length: int) -> bool:
    edges = [set(e) for e in h.edges]
    by_vertex: dict[int, list[int]] = {v: [] for v in h.vertices()}
    for i, e in enumerate(edges):
        for v in e:
            by_vertex[v].append(i)

    def extend(start: int, v: int, used_v: set[int], used_e: set[int],
               depth: int) -> bool:
        if depth == length:
            return False
        for ei in by_vertex[v]:
            if ei in used_e:
                continue
            e = edges[ei]
            if depth == length - 1:
                if start in e:
                    return True
                continue
            for nxt in e:
                if nxt not in used_v and nxt != start:
                    used_e.add(ei)
                    used_v.add(nxt)
                    if extend(start, nxt, used_v, used_e, depth + 1):
                        return True
                    used_v.discard(nxt)
                    used_e.discard(ei)
        return False

    for start in h.vertices():
        if extend(start, start, {start}, set(), 0):
            return True
    return False


# ---------------------------------------------------------------------------
# Colourings into the two-element template
#
# A colouring maps vertices to {a, 1} with exactly one a per edge.

def check_hom(h: Hypergraph, colouring: Mapping[int, str]) -> bool:
    """Validate that every edge receives exactly one ``a``."""
    for v in h.vertices():
        if colouring.get(v) not in TEMPLATE_VALUES:
            return False
    return all(
        sum(1 for v in e if colouring[v] == "a") == 1 for e in h.edges)


def _propagate(h: Hypergraph, colour: dict[int, str]) -> bool:
    """Forced-move closure; False on contradiction."""
    changed = True
    while changed:
        changed = False
        for e in h.edges:
            vals = [colour.get(v) for v in e]
            n_a = vals.count("a")
            n_open = vals.count(None)
            if n_a > 1 or (n_a == 0 and n_open == 0):
                return False
            if n_a == 1 and n_open:
                for v in e:
                    if colour.get(v) is None:
                        colour[v] = "1"
                        changed = True
            elif n_a == 0 and n_open == 1:
                for v in e:
                    if colour.get(v) is None:
                        colour[v] = "a"
                        changed = True
    return True


def find_hom(h: Hypergraph, forced: Mapping[int, str] | None = None
             ) -> dict[int, str] | None:
    """Least colouring in vertex order (value order a before 1), or None.

    ``forced`` pins some vertices beforehand; pins are validated.
    Backtracking with forced-move propagation keeps the corpus instant.
    """
    colour: dict[int, str] = {}
    if forced:
        for v, val in forced.items():
            if val not in TEMPLATE_VALUES or not 0 <= v < h.n:
                raise ValueError(f"bad forced value {val!r} for vertex {v}")
            colour[v] = val
    if not _propagate(h, colour):
        return None

    def assign(v: int, snapshot: dict[int, str]) -> dict[int, str] | None:
        if v == h.n:
            return snapshot if check_hom(h, snapshot) else None
        if v in snapshot:
            return assign(v + 1, snapshot)
        for val in TEMPLATE_VALUES:
            trial = dict(snapshot)
            trial[v] = val
            if _propagate(h, trial):
                got = assign(v + 1, trial)
                if got is not None:
                    return got
        return None

    return assign(0, colour)


def all_homs(h: Hypergraph) -> list[dict[int, str]]:
    """Every colouring, sorted by vertex-order value tuples (a before 1)."""
    out = []
    order = {val: i for i, val in enumerate(TEMPLATE_VALUES)}

    def assign(v: int, colour: dict[int, str]) -> None:
        if v == h.n:
            if check_hom(h, colour):
                out.append(dict(colour))
            return
        for val in TEMPLATE_VALUES:
            colour[v] = val
            if _propagate(h, dict(colour)):
                assign(v + 1, colour)
        del colour[v]

    assign(0, {})
    out.sort(key=lambda c: tuple(order[c[v]] for v in h.vertices()))
    return out


def is_robustly_satisfiable(
        h: Hypergraph) -> tuple[bool, tuple[int, int, str, str] | None]:
    """Can every sensible pin of two vertices extend to a colouring?

    Sensible means any pair pinned to any values except both ``a`` inside
    a common edge (that pattern contradicts "exactly one a" outright).
    Returns (True, None) or (False, (u, v, val_u, val_v)) for the first
    failing pin in scan order.
    """
    coedge = {frozenset(p) for e in h.edges for p in combinations(e, 2)}
    for u, v in combinations(h.vertices(), 2):
        for val_u in TEMPLATE_VALUES:
            for val_v in TEMPLATE_VALUES:
                if (val_u == val_v == "a"
                        and frozenset((u, v)) in coedge):
                    continue
                if find_hom(h, {u: val_u, v: val_v}) is None:
                    return False, (u, v, val_u, val_v)
    return True, None


# ---------------------------------------------------------------------------
# Corpus

def _corpus_raw() -> dict[str, tuple[int, list[tuple[int, int, int]]]]:
    k5_edges = [tuple(c) for c in combinations(range(5), 3)]
    fano = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6),
            (2, 3, 6), (2, 4, 5)]
    return {
        "edge1": (3, [(0, 1, 2)]),
        "path2": (5, [(0, 1, 2), (2, 3, 4)]),
        "path3": (7, [(0, 1, 2), (2, 3, 4), (4, 5, 6)]),
        "star3": (7, [(0, 1, 2), (0, 3, 4), (0, 5, 6)]),
        "disjoint2": (6, [(0, 1, 2), (3, 4, 5)]),
        "girth2": (4, [(0, 1, 2), (0, 1, 3)]),
        "K5_3": (5, k5_edges),
        "fano": (7, fano),
    }


def corpus_names() -> list[str]:
    return sorted(_corpus_raw())


def corpus(name: str | None = None
           ) -> Hypergraph | dict[str, Hypergraph]:
    """Named examples; with no argument, the whole family as a dict.

    edge1, path2, path3, star3 and disjoint2 are hyperforests; girth2 has
    a 2-cycle; K5_3 (all triples on five vertices) has girth 2 and no
    colouring; fano (the seven-line configuration on seven points) has
    girth 3 and no colouring.
    """
    raw = _corpus_raw()
    if name is None:
        return {k: make_hypergraph(n, es) for k, (n, es) in raw.items()}
    if name not in raw:
        raise KeyError(f"no corpus entry {name!r}; have {corpus_names()}")
    n, es = raw[name]
    return make_hypergraph(n, es)
