"""Forbidden patterns and pattern families.

Symbolic patterns (complete r-partite graphs, tight cycles) realize to
concrete :class:`Hypergraph` objects on demand. Families deduplicate their
members up to isomorphism.
"""

from __future__ import annotations

import re
from functools import cached_property
from itertools import combinations, product
from math import prod

from . import copies
from .errors import GuardError, InputError
from .hypergraph import Hypergraph

PARTITION_GUARD = 16
LOCAL_ISO_GUARD = 10


class Pattern:
    """A forbidden r-graph.

    ``kind`` is ``"complete_partite"`` (``params`` = part sizes),
    ``"tight_cycle"`` (``params`` = ``(k, r)``) or ``"general"``.
    """

    def __init__(self, kind, params=(), graph=None, name=None):
        self.kind = kind
        self.params = tuple(params)
        self._graph = graph
        self._name = name

    @classmethod
    def complete_partite(cls, *sizes):
        s = tuple(sorted(int(x) for x in sizes))
        if len(s) < 2 or s[0] < 1:
            raise InputError(f"complete partite pattern needs >= 2 positive part sizes, got {s}")
        return cls("complete_partite", s)

    @classmethod
    def tight_cycle(cls, k, r):
        k, r = int(k), int(r)
        if r < 2 or k <= r:
            raise InputError(f"tight cycle TC_{k}^{r} needs k > r >= 2")
        return cls("tight_cycle", (k, r))

    @classmethod
    def general(cls, H: Hypergraph, name=None):
        return identify(cls("general", (), copies.strip_isolated(H), name))

    @cached_property
    def realized(self) -> Hypergraph:
        if self.kind == "complete_partite":
            return complete_partite_graph(self.params)
        if self.kind == "tight_cycle":
            return tight_cycle_graph(*self.params)
        return self._graph

    @property
    def r(self) -> int:
        if self.kind == "complete_partite":
            return len(self.params)
        if self.kind == "tight_cycle":
            return self.params[1]
        return self._graph.r

    @property
    def name(self) -> str:
        if self.kind == "complete_partite":
            return "K:" + ",".join(map(str, self.params))
        if self.kind == "tight_cycle":
            return f"TC:{self.params[0]}/{self.params[1]}"
        if self._name:
            return self._name
        return f"G(r={self._graph.r},n={self._graph.n},e={self._graph.e})"

    @cached_property
    def canonical(self):
        return copies.canonical_form(self.realized)

    def __eq__(self, other):
        if not isinstance(other, Pattern):
            return NotImplemented
        return self.canonical == other.canonical

    def __hash__(self):
        return hash(self.canonical)

    def __repr__(self):
        return f"Pattern({self.name})"

    def to_dict(self):
        return {"name": self.name, "kind": self.kind, "graph": self.realized.to_dict()}


def complete_partite_graph(sizes) -> Hypergraph:
    parts, start = [], 0
    for s in sizes:
        parts.append(list(range(start, start + s)))
        start += s
    return Hypergraph(len(sizes), start, product(*parts), parts)


def tight_cycle_graph(k, r) -> Hypergraph:
    edges = {tuple(sorted((i + j) % k for j in range(r))) for i in range(k)}
    return Hypergraph(r, k, edges)


def identify(p: Pattern) -> Pattern:
    """Return a typed pattern when a general one is a K_{s..} or a tight cycle."""
    if p.kind != "general":
        return p
    G = p.realized
    if G.e == 0:
        return p
    parts = enumerate_r_partitions(G) if G.n <= PARTITION_GUARD else []
    if len(parts) == 1:
        sizes = sorted(len(x) for x in parts[0])
        if prod(sizes) == G.e:
            return Pattern.complete_partite(*sizes)
    if G.n == G.e and G.n > G.r:
        tc = Pattern.tight_cycle(G.n, G.r)
        if copies.is_isomorphic(G, tc.realized):
            return tc
    return p


def as_pattern(x) -> Pattern:
    if isinstance(x, Pattern):
        return x
    if isinstance(x, Hypergraph):
        return Pattern.general(x)
    raise InputError(f"cannot interpret {x!r} as a pattern")


class PatternFamily:
    """A finite set of patterns, no two isomorphic."""

    def __init__(self, members=(), origin="explicit"):
        seen = {}
        for m in members:
            m = as_pattern(m)
            seen.setdefault(m.canonical, m)
        self.members = tuple(seen.values())
        self.origin = origin
        rs = {m.r for m in self.members}
        if len(rs) > 1:
            raise InputError(f"family mixes uniformities {sorted(rs)}")

    @property
    def r(self):
        return self.members[0].r if self.members else None

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, item):
        return as_pattern(item).canonical in {m.canonical for m in self.members}

    def __eq__(self, other):
        if not isinstance(other, PatternFamily):
            return NotImplemented
        return {m.canonical for m in self} == {m.canonical for m in other}

    def __repr__(self):
        return f"PatternFamily([{', '.join(m.name for m in self)}], origin={self.origin!r})"

    def union(self, other, origin="explicit"):
        return PatternFamily(self.members + tuple(other), origin)

    @property
    def names(self):
        return [m.name for m in self.members]


def as_family(x) -> PatternFamily:
    if isinstance(x, PatternFamily):
        return x
    if isinstance(x, (Pattern, Hypergraph)):
        return PatternFamily([x])
    return PatternFamily(list(x))


def tight_cycle_family(r, ell) -> PatternFamily:
    """{TC_{r+1}^r, ..., TC_{ell*r}^r}."""
    return PatternFamily([Pattern.tight_cycle(k, r) for k in range(r + 1, ell * r + 1)],
                         origin=f"tight-cycle-range({r},{ell})")


# -- r-partitions ---------------------------------------------------------------

def _graph_of(F):
    if isinstance(F, Pattern):
        return copies.strip_isolated(F.realized)
    return F


def enumerate_r_partitions(F) -> list:
    """All r-partitions of V(F) making every edge rainbow, up to relabelling.

    Each partition is a tuple of ``r`` sorted vertex tuples, ordered by
    smallest vertex. Vertices are coloured in breadth-first order within each
    component, and a vertex may only open the next unused colour, so each
    partition is produced exactly once.
    """
    G = _graph_of(F)
    if G.n > PARTITION_GUARD:
        raise GuardError(f"partition enumeration limited to {PARTITION_GUARD} vertices, got {G.n}")
    r = G.r
    inc = G.incidence
    order = []
    for comp in _components(G):
        seen = {comp[0]}
        queue = [comp[0]]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for i in inc[v]:
                for u in G.edges[i]:
                    if u not in seen:
                        seen.add(u)
                        queue.append(u)
    color = [-1] * G.n
    results = []

    def free(v, c):
        for i in inc[v]:
            for u in G.edges[i]:
                if u != v and color[u] == c:
                    return False
        return True

    def rec(j, used):
        if j == len(order):
            results.append(_canon_partition(color, r))
            return
        v = order[j]
        for c in range(min(used + 1, r)):
            if free(v, c):
                color[v] = c
                rec(j + 1, max(used, c + 1))
                color[v] = -1

    rec(0, 0)
    return sorted(set(results))


def _canon_partition(colors, r):
    classes = {}
    for v, c in enumerate(colors):
        classes.setdefault(c, []).append(v)
    parts = sorted(tuple(x) for x in classes.values())
    parts += [()] * (r - len(parts))
    return tuple(parts)


def _components(G):
    parent = list(range(G.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in G.edges:
        for v in e[1:]:
            a, b = find(e[0]), find(v)
            if a != b:
                parent[a] = b
    comps = {}
    for v in range(G.n):
        comps.setdefault(find(v), []).append(v)
    return sorted(comps.values())


def is_r_partite(F) -> bool:
    return bool(enumerate_r_partitions(F))


def is_tightly_connected(F):
    """Return ``(flag, partition)``; the partition witnesses a True answer.

    Raises :class:`InputError` when ``F`` has no r-partition at all.
    """
    G = _graph_of(F)
    parts = enumerate_r_partitions(G)
    if not parts:
        raise InputError("pattern is not r-partite; tight connectivity is undefined")
    r = G.r
    linked = set()
    for e, f in combinations(G.edges, 2):
        if len(set(e) & set(f)) == r - 1:
            for u in e:
                for w in f:
                    linked.add((u, w))
                    linked.add((w, u))
    for part in parts:
        if all((u, w) in linked for U in part for u, w in combinations(U, 2)):
            return True, part
    return False, None


# -- derived families -----------------------------------------------------------

def projection_family(F) -> PatternFamily:
    """pi(F): traces of F on all but one part, over every r-partition."""
    fam = as_family(F) if not isinstance(F, Pattern) else PatternFamily([F])
    out = []
    for p in fam:
        G = _graph_of(p)
        if G.r < 3:
            raise InputError("projection family needs uniformity at least 3")
        parts = enumerate_r_partitions(G)
        if not parts:
            raise InputError(f"{p.name} is not r-partite")
        for part in parts:
            labelled = Hypergraph(G.r, G.n, G.edges, part)
            for i in range(G.r):
                keep = [j for j in range(G.r) if j != i]
                trace = labelled.restrict_to_parts(keep)
                out.append(Pattern.general(Hypergraph(trace.r, trace.n, trace.edges)))
    return PatternFamily(out, origin="projection")


def local_isomorphism_images(F) -> PatternFamily:
    """H(F): quotients of F whose quotient map is a local isomorphism."""
    fam = as_family(F) if not isinstance(F, Pattern) else PatternFamily([F])
    out = []
    for p in fam:
        G = _graph_of(p)
        if G.n > LOCAL_ISO_GUARD:
            raise GuardError(
                f"local isomorphism enumeration limited to {LOCAL_ISO_GUARD} vertices, got {G.n}")
        out.extend(_quotients(G))
    return PatternFamily(out, origin="local-iso")


def _quotients(G):
    r, n = G.r, G.n
    edges = G.edges
    tight_pairs = [(e, f) for e, f in combinations(edges, 2) if len(set(e) & set(f)) == r - 1]
    # earlier neighbours sharing an edge: merging them collapses that edge
    clash = [set() for _ in range(n)]
    for e in edges:
        for u, w in combinations(e, 2):
            clash[max(u, w)].add(min(u, w))
    block = [0] * n
    found = []

    def rec(v, nblocks):
        if v == n:
            img = {e: tuple(sorted(block[u] for u in e)) for e in edges}
            if all(img[e] != img[f] for e, f in tight_pairs):
                found.append(Hypergraph.from_edge_set(r, nblocks, img.values()))
            return
        for b in range(nblocks + 1):
            if b < nblocks and any(block[u] == b for u in clash[v]):
                continue
            block[v] = b
            rec(v + 1, max(nblocks, b + 1))

    rec(0, 0)
    return [Pattern.general(h) for h in found]


# -- naming grammar -----------------------------------------------------------

_K_RE = re.compile(r"^K:(\d+(?:,\d+)+)$")
_TC_RE = re.compile(r"^TC:(\d+)/(\d+)$")
_RANGE_RE = re.compile(r"^tcrange:(\d+),(\d+)$")


def parse_pattern(spec: str) -> Pattern:
    """Parse ``K:2,2,3``, ``TC:6/3`` or ``file:<path.json>``."""
    spec = spec.strip()
    m = _K_RE.match(spec)
    if m:
        return Pattern.complete_partite(*map(int, m.group(1).split(",")))
    m = _TC_RE.match(spec)
    if m:
        return Pattern.tight_cycle(int(m.group(1)), int(m.group(2)))
    if spec.startswith("file:"):
        path = spec[5:]
        return Pattern.general(Hypergraph.load(path), name=spec)
    raise InputError(f"unrecognised pattern {spec!r}")


def parse_family(spec: str) -> PatternFamily:
    """Parse a family: a pattern, ``pi(...)``, ``hiso(...)``, ``tcrange:r,l``,
    or several of these joined with ``+``."""
    items = _split_top(spec.strip(), "+")
    if len(items) > 1:
        fam = PatternFamily()
        for it in items:
            fam = fam.union(parse_family(it))
        return fam
    spec = items[0]
    m = _RANGE_RE.match(spec)
    if m:
        return tight_cycle_family(int(m.group(1)), int(m.group(2)))
    for prefix, fn in (("pi(", projection_family), ("hiso(", local_isomorphism_images)):
        if spec.startswith(prefix) and spec.endswith(")"):
            return fn(parse_family(spec[len(prefix):-1]))
    return PatternFamily([parse_pattern(spec)])


def _split_top(s, sep):
    out, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [x.strip() for x in out if x.strip()]


# -- copy queries over patterns and families ------------------------------------

def contains_copy(H: Hypergraph, F):
    """Witness vertex map for the first copy found, or None."""
    fam = as_family(F)
    for p in fam:
        if p.r != H.r:
            raise InputError(f"pattern {p.name} has uniformity {p.r}, host has {H.r}")
        w = copies.find_copy(H, p.realized)
        if w is not None:
            return w
    return None


def find_violation(H: Hypergraph, F):
    """``(pattern, witness)`` for the first family member found in H, else None."""
    for p in as_family(F):
        if p.r != H.r:
            raise InputError(f"pattern {p.name} has uniformity {p.r}, host has {H.r}")
        w = copies.find_copy(H, p.realized)
        if w is not None:
            return p, w
    return None


def count_copies(H: Hypergraph, F) -> int:
    fam = as_family(F)
    total = 0
    for p in fam:
        if p.r != H.r:
            raise InputError(f"pattern {p.name} has uniformity {p.r}, host has {H.r}")
        total += copies.count_copies(H, p.realized)
    return total


def list_copies(H: Hypergraph, F):
    """Yield copies of every family member as sorted tuples of edge indices."""
    for p in as_family(F):
        if p.r != H.r:
            raise InputError(f"pattern {p.name} has uniformity {p.r}, host has {H.r}")
        yield from copies.list_copies(H, p.realized)
