"""Uniform hypergraphs on dense integer vertices.

A :class:`Hypergraph` is immutable: edges are stored as sorted tuples in
lexicographic order, and every derived index (incidence lists, codegree
counts, the numpy edge array) is computed lazily and cached.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb

import numpy as np

from .errors import GuardError, InputError

_MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(seed: int, *keys: int) -> int:
    """Mix ``seed`` with a path of integer keys into a fresh 64-bit seed.

    Trial ``i`` of a run seeded with ``s`` uses ``derive_seed(s, i)``, so
    results never depend on the order in which trials are scheduled.
    """
    h = splitmix64(int(seed) & _MASK64)
    for k in keys:
        h = splitmix64(h ^ (int(k) & _MASK64))
    return h


def rng_for(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *keys))


class Hypergraph:
    """An r-uniform hypergraph on vertices ``0..n-1``.

    Parameters
    ----------
    r : int
        Uniformity, at least 2.
    n : int
        Number of vertices.
    edges : iterable of iterables
        Each edge is a set of ``r`` distinct vertex indices. Duplicates
        raise :class:`InputError`.
    partition : optional sequence of ``r`` vertex collections
        Disjoint parts covering every vertex; every edge must meet each
        part exactly once.
    """

    def __init__(self, r, n, edges=(), partition=None):
        r, n = int(r), int(n)
        if r < 2:
            raise InputError(f"uniformity must be at least 2, got {r}")
        if n < 0:
            raise InputError(f"vertex count must be nonnegative, got {n}")
        canon = []
        for e in edges:
            t = tuple(sorted(int(v) for v in e))
            if len(t) != r or len(set(t)) != r:
                raise InputError(f"edge {list(e)} does not have {r} distinct vertices")
            if t[0] < 0 or t[-1] >= n:
                raise InputError(f"edge {list(e)} has a vertex outside 0..{n - 1}")
            canon.append(t)
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise InputError(f"duplicate edge {list(a)}")
        self.r = r
        self.n = n
        self.edges = tuple(canon)
        self.partition = None
        if partition is not None:
            self.partition = _check_partition(r, n, self.edges, partition)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_edge_set(cls, r, n, edges, partition=None):
        """Like the constructor but silently drops duplicate edges."""
        return cls(r, n, {tuple(sorted(e)) for e in edges}, partition)

    # -- basic protocol -------------------------------------------------------

    def __len__(self):
        return len(self.edges)

    @property
    def e(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __contains__(self, edge):
        return tuple(sorted(edge)) in self.edge_set

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.r, self.n, self.edges, self.partition) == (
            other.r, other.n, other.edges, other.partition)

    def __hash__(self):
        return hash((self.r, self.n, self.edges, self.partition))

    def __repr__(self):
        part = "" if self.partition is None else ", partitioned"
        return f"Hypergraph(r={self.r}, n={self.n}, e={self.e}{part})"

    # -- cached indices -------------------------------------------------------

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @cached_property
    def edge_index(self) -> dict:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def edge_array(self) -> np.ndarray:
        return np.array(self.edges, dtype=np.int64).reshape(len(self.edges), self.r)

    @cached_property
    def incidence(self) -> list:
        """``incidence[v]`` lists the ids of edges containing ``v``."""
        inc = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return inc

    @cached_property
    def degrees(self) -> np.ndarray:
        if not self.edges:
            return np.zeros(self.n, dtype=np.int64)
        return np.bincount(self.edge_array.ravel(), minlength=self.n)

    @cached_property
    def codegrees(self) -> dict:
        """Map from each (r-1)-subset of an edge to its degree."""
        counts = Counter()
        for e in self.edges:
            counts.update(combinations(e, self.r - 1))
        return dict(counts)

    @cached_property
    def part_of(self):
        """Array mapping vertex to part index, or None without a partition."""
        if self.partition is None:
            return None
        out = np.empty(self.n, dtype=np.int64)
        for i, part in enumerate(self.partition):
            out[list(part)] = i
        return out

    # -- degree queries -------------------------------------------------------

    def degree(self, S) -> int:
        """Number of edges containing the vertex set ``S`` (1 <= |S| <= r-1)."""
        S = tuple(sorted(set(int(v) for v in S)))
        if not 1 <= len(S) <= self.r - 1:
            raise InputError(f"degree needs 1 <= |S| <= {self.r - 1}, got |S|={len(S)}")
        if S[0] < 0 or S[-1] >= self.n:
            raise InputError(f"vertex set {list(S)} not inside 0..{self.n - 1}")
        if len(S) == self.r - 1:
            return self.codegrees.get(S, 0)
        rest = set(S[1:])
        return sum(1 for i in self.incidence[S[0]] if rest.issubset(self.edges[i]))

    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n and self.edges else 0

    def max_codegree(self) -> int:
        return max(self.codegrees.values(), default=0)

    def degree_profile(self, k: int, base: int = 1) -> "DegreeProfile":
        if not 1 <= k <= self.r - 1:
            raise InputError(f"k must lie in [1, {self.r - 1}], got {k}")
        counts = Counter()
        for e in self.edges:
            counts.update(combinations(e, k))
        return DegreeProfile.from_counts(k, dict(counts), base)

    # -- subgraphs ------------------------------------------------------------

    def edge_subgraph(self, edges) -> "Hypergraph":
        """Subgraph on the same vertex set keeping the given edge tuples."""
        keep = sorted(set(tuple(sorted(e)) for e in edges))
        for e in keep:
            if e not in self.edge_set:
                raise InputError(f"{list(e)} is not an edge of the host")
        return _unchecked(self.r, self.n, keep, self.partition)

    def induced_subgraph(self, keep_edges) -> "Hypergraph":
        """Subgraph keeping the edges whose indices are in ``keep_edges``."""
        idx = sorted(set(int(i) for i in keep_edges))
        if idx and (idx[0] < 0 or idx[-1] >= self.e):
            raise InputError("edge index out of range")
        return _unchecked(self.r, self.n, [self.edges[i] for i in idx], self.partition)

    def mask_subgraph(self, mask) -> "Hypergraph":
        mask = np.asarray(mask, dtype=bool)
        return _unchecked(self.r, self.n, [e for e, m in zip(self.edges, mask) if m],
                          self.partition)

    def is_subgraph_of(self, other: "Hypergraph") -> bool:
        return (self.r == other.r and self.n <= other.n
                and self.edge_set <= other.edge_set)

    def restrict_to_parts(self, part_indices) -> "Hypergraph":
        """Traces of the edges on the chosen parts, relabelled onto their union."""
        return self.restrict_with_map(part_indices)[0]

    def restrict_with_map(self, part_indices):
        """Like :meth:`restrict_to_parts` but also return the vertex map.

        The returned list maps each new vertex index to its old index; new
        vertices are numbered in increasing order of the old ones.
        """
        if self.partition is None:
            raise InputError("restrict_to_parts needs a partitioned hypergraph")
        chosen = [int(i) for i in part_indices]
        if len(set(chosen)) != len(chosen) or not chosen:
            raise InputError("part indices must be distinct and nonempty")
        for i in chosen:
            if not 0 <= i < self.r:
                raise InputError(f"part index {i} out of range 0..{self.r - 1}")
        k = len(chosen)
        if k < 2:
            raise InputError("restriction must keep at least two parts")
        old = sorted(v for i in chosen for v in self.partition[i])
        new_of = {v: j for j, v in enumerate(old)}
        part_of = self.part_of
        keep = set(chosen)
        traces = set()
        for e in self.edges:
            traces.add(tuple(new_of[v] for v in e if part_of[v] in keep))
        parts = [[new_of[v] for v in self.partition[i]] for i in chosen]
        return _unchecked(k, len(old), sorted(traces), parts), old

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "n": self.n,
            "edges": [list(e) for e in self.edges],
            "partition": None if self.partition is None else [list(p) for p in self.partition],
        }

    @classmethod
    def from_dict(cls, data) -> "Hypergraph":
        try:
            return cls(data["r"], data["n"], data["edges"], data.get("partition"))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed hypergraph record: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Hypergraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Hypergraph":
        try:
            with open(path) as fh:
                return cls.from_json(fh.read())
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc


def _check_partition(r, n, edges, partition):
    parts = tuple(tuple(sorted(int(v) for v in p)) for p in partition)
    if len(parts) != r:
        raise InputError(f"partition must have {r} parts, got {len(parts)}")
    seen = [False] * n
    for p in parts:
        for v in p:
            if not 0 <= v < n:
                raise InputError(f"partition vertex {v} outside 0..{n - 1}")
            if seen[v]:
                raise InputError(f"vertex {v} appears in two parts")
            seen[v] = True
    if not all(seen):
        raise InputError("partition does not cover every vertex")
    part_of = [0] * n
    for i, p in enumerate(parts):
        for v in p:
            part_of[v] = i
    for e in edges:
        if len({part_of[v] for v in e}) != r:
            raise InputError(f"edge {list(e)} is not rainbow under the partition")
    return parts


def _unchecked(r, n, sorted_edges, partition=None):
    # Internal fast path: edges are already canonical and valid.
    h = Hypergraph.__new__(Hypergraph)
    h.r = r
    h.n = n
    h.edges = tuple(tuple(e) for e in sorted_edges)
    h.partition = (None if partition is None
                   else tuple(tuple(sorted(p)) for p in partition))
    return h


@dataclass
class DegreeProfile:
    """k-degrees of all k-sets that lie in some edge."""

    k: int
    degrees: dict
    max: int
    base: int = 1
    histogram: dict = field(default_factory=dict)

    @classmethod
    def from_counts(cls, k, degrees, base=1):
        hist = Counter()
        for d in degrees.values():
            hist[(d // base).bit_length() - 1] += 1
        return cls(k, degrees, max(degrees.values(), default=0), base, dict(sorted(hist.items())))

    def total(self) -> int:
        return sum(self.degrees.values())


# -- random hypergraphs --------------------------------------------------------

class PartiteBoundNotMet(GuardError):
    """No retry reached the r^-r e(H) edge count; ``best`` holds the best try."""

    def __init__(self, message, best, attempts):
        super().__init__(message)
        self.best = best
        self.attempts = attempts


def coloring_subgraph(H: Hypergraph, colors) -> Hypergraph:
    """Rainbow edges of ``H`` under a vertex coloring with colors 0..r-1."""
    colors = np.asarray(colors, dtype=np.int64)
    r = H.r
    if H.e:
        c = np.sort(colors[H.edge_array], axis=1)
        mask = np.all(c == np.arange(r), axis=1)
    else:
        mask = np.zeros(0, dtype=bool)
    parts = [np.flatnonzero(colors == i).tolist() for i in range(r)]
    return _unchecked(r, H.n, [e for e, m in zip(H.edges, mask) if m], parts)


def partite_threshold(H: Hypergraph) -> int:
    """ceil(r^-r e(H)), the Erdos-Kleitman guarantee."""
    return -(-H.e // H.r ** H.r)


def random_r_partite_subgraph(H: Hypergraph, seed: int, max_retries: int = 1000) -> Hypergraph:
    """Rainbow subgraph under a random r-coloring with at least r^-r e(H) edges.

    Attempt ``i`` colors the vertices with ``derive_seed(seed, i)``. The first
    attempt meeting the bound is returned; if none does within
    ``max_retries`` attempts, :class:`PartiteBoundNotMet` is raised carrying
    the best attempt.
    """
    if H.e < 1:
        raise InputError("random_r_partite_subgraph needs at least one edge")
    if max_retries < 1:
        raise InputError("max_retries must be positive")
    need = partite_threshold(H)
    best = None
    for i in range(max_retries):
        colors = rng_for(seed, i).integers(0, H.r, size=H.n)
        sub = coloring_subgraph(H, colors)
        if best is None or sub.e > best.e:
            best = sub
        if sub.e >= need:
            return sub
    raise PartiteBoundNotMet(
        f"no coloring in {max_retries} attempts kept {need} edges (best {best.e})",
        best, max_retries)


def sample_random_hypergraph(n: int, r: int, p: float, seed: int) -> Hypergraph:
    """H^r_{n,p}: each r-subset of 0..n-1 kept independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise InputError(f"p must lie in [0, 1], got {p}")
    if r < 2 or r > n:
        raise InputError(f"need 2 <= r <= n, got r={r}, n={n}")
    total = comb(n, r)
    keep = rng_for(seed).random(total) < p
    edges = [e for e, k in zip(combinations(range(n), r), keep) if k]
    return _unchecked(r, n, edges)
