"""Deterministic host and base-graph generators."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb, prod

import numpy as np

from .errors import GuardError, InputError
from .fields import field, is_prime, prime_power
from .hypergraph import Hypergraph, _unchecked

MAX_EDGES = 2_000_000


@dataclass(frozen=True)
class SizeVector:
    """Part sizes s_1 <= ... <= s_r of K_{s_1,...,s_r}."""

    s: tuple

    def __post_init__(self):
        s = tuple(int(x) for x in self.s)
        if len(s) < 2:
            raise InputError("size vector needs at least two entries")
        if any(x < 2 for x in s):
            raise InputError(f"size vector entries must be >= 2, got {s}")
        if list(s) != sorted(s):
            raise InputError(f"size vector must be nondecreasing, got {s}")
        object.__setattr__(self, "s", s)

    @classmethod
    def of(cls, s):
        return s if isinstance(s, cls) else cls(tuple(s))

    @property
    def r(self) -> int:
        return len(self.s)

    def a(self, i: int) -> int:
        """a_i = s_1 * ... * s_{i-1}, for 1 <= i <= r+1 (a_1 = 1)."""
        if not 1 <= i <= self.r + 1:
            raise InputError(f"a_i defined for 1 <= i <= {self.r + 1}")
        return prod(self.s[: i - 1])

    @property
    def a_list(self) -> tuple:
        return tuple(self.a(i) for i in range(1, self.r + 2))

    def truncate(self) -> "SizeVector":
        return SizeVector(self.s[:-1])


def _guard(edges, what):
    if edges > MAX_EDGES:
        raise GuardError(f"{what} would have {edges} edges (limit {MAX_EDGES})")


def complete_host(n: int, r: int) -> Hypergraph:
    """K_n^r."""
    if r < 2 or n < r:
        raise InputError(f"complete host needs n >= r >= 2, got n={n}, r={r}")
    _guard(comb(n, r), f"K_{n}^{r}")
    return _unchecked(r, n, combinations(range(n), r))


def complete_partite_host(sizes) -> Hypergraph:
    sizes = [int(x) for x in sizes]
    _guard(prod(sizes), f"complete partite host {sizes}")
    parts, start = [], 0
    for x in sizes:
        parts.append(range(start, start + x))
        start += x
    return _unchecked(len(sizes), start, product(*parts), [list(p) for p in parts])


def layered_host(n: int, s) -> Hypergraph:
    """The layered regular host C_n(a_2, ..., a_r).

    Level 2 is K_{N,N} with N = n^{a_2}. Level i takes n^{a_i - a_{i-1}}
    disjoint copies of level i-1 and a fresh part of n^{a_i} vertices, and
    adds the new vertex to every edge of every copy in all possible ways.
    Vertices of the copies come first (copy by copy), then the fresh part.
    """
    sv = SizeVector.of(s)
    n = int(n)
    if n < 2:
        raise InputError("layered host needs n >= 2")
    a = sv.a_list
    r = sv.r
    expected = n ** (2 * a[r - 1] + sum(a[1:r - 1])) if r >= 3 else n ** (2 * a[1])
    _guard(expected, f"layered host n={n}, s={sv.s}")
    N = n ** a[1]
    E = np.array([(u, N + w) for u in range(N) for w in range(N)], dtype=np.int64)
    parts = [list(range(N)), list(range(N, 2 * N))]
    nv = 2 * N
    for level in range(3, r + 1):
        ncopies = n ** (a[level - 1] - a[level - 2])
        fresh = n ** a[level - 1]
        blocks = [E + c * nv for c in range(ncopies)]
        E = np.concatenate(blocks)
        parts = [[v + c * nv for c in range(ncopies) for v in p] for p in parts]
        new = np.arange(ncopies * nv, ncopies * nv + fresh, dtype=np.int64)
        m = E.shape[0]
        E = np.concatenate([np.repeat(E, fresh, axis=0),
                            np.tile(new, m)[:, None]], axis=1)
        parts.append(new.tolist())
        nv = ncopies * nv + fresh
    order = np.lexsort(E.T[::-1])
    E = E[order]
    return _unchecked(r, nv, map(tuple, E.tolist()), parts)


def unbalanced_part_sizes(n: int, s) -> list:
    sv = SizeVector.of(s)
    a = sv.a_list
    return [n ** a[1]] + [n ** a[i - 1] for i in range(2, sv.r + 1)]


def unbalanced_partite_host(n: int, s) -> Hypergraph:
    """Complete r-partite host with parts n^{a_2}, n^{a_2}, n^{a_3}, ..., n^{a_r}."""
    if int(n) < 1:
        raise InputError("n must be positive")
    return complete_partite_host(unbalanced_part_sizes(int(n), s))


# -- incidence geometries -------------------------------------------------------

PG_MAX_Q = 64


def _check_plane_order(q):
    if prime_power(q) is None or q > PG_MAX_Q:
        raise InputError(f"projective planes supported for prime powers q <= {PG_MAX_Q}, got {q}")


@lru_cache(maxsize=32)
def _plane(q):
    F = field(q)
    pts = F.normalized_points(3)
    inc = F.dot(pts, pts) == 0  # lines use the same coordinates as points
    return pts, inc


def projective_plane_incidence(q: int) -> Hypergraph:
    """Point-line incidence graph of PG(2, q).

    Points are vertices ``0..N-1`` and lines ``N..2N-1`` (N = q^2+q+1), both
    in lexicographic order of their normalized homogeneous coordinates.
    """
    _check_plane_order(q)
    pts, inc = _plane(q)
    N = len(pts)
    P, L = np.nonzero(inc)
    edges = sorted(zip(P.tolist(), (L + N).tolist()))
    return _unchecked(2, 2 * N, edges, [range(N), range(N, 2 * N)])


def trimmed_plane_incidence(q: int, m: int) -> Hypergraph:
    """Induced subgraph of PG(2,q) incidence on m lines and m points.

    Lines are taken in reverse lexicographic order; points are the m with the
    most incidences among the chosen lines (ties to the smaller index).
    Vertices ``0..m-1`` are points, ``m..2m-1`` lines. When the plane has
    fewer than m points the graph is padded with isolated vertices.
    """
    _check_plane_order(q)
    pts, inc = _plane(q)
    N = len(pts)
    k = min(m, N)
    lines = np.arange(N - 1, N - 1 - k, -1)
    sub = inc[:, lines]
    score = sub.sum(axis=1)
    points = np.sort(np.lexsort((np.arange(N), -score))[:k])
    block = sub[points]
    P, L = np.nonzero(block)
    edges = sorted(zip(P.tolist(), (L + m).tolist()))
    return _unchecked(2, 2 * m, edges, [range(m), range(m, 2 * m)])


def _symplectic(F, X, Y):
    a = F.mul[X[:, 0][:, None], Y[:, 1][None, :]]
    b = F.mul[X[:, 1][:, None], Y[:, 0][None, :]]
    c = F.mul[X[:, 2][:, None], Y[:, 3][None, :]]
    d = F.mul[X[:, 3][:, None], Y[:, 2][None, :]]
    return F.add[F.add[a, F.neg[b]], F.add[c, F.neg[d]]]


GQ_MAX_Q = 9


@lru_cache(maxsize=16)
def _quadrangle(q):
    F = field(q)
    pts = F.normalized_points(4)
    index = {tuple(v): i for i, v in enumerate(pts.tolist())}
    perp = _symplectic(F, pts, pts) == 0
    lines = set()
    for i in range(len(pts)):
        for j in np.flatnonzero(perp[i]):
            if j <= i:
                continue
            P, Q = pts[i], pts[j]
            members = {i, int(j)}
            for b in range(q):
                v = F.add[P, F.mul[b, Q]]
                lead = next(x for x in v.tolist() if x)
                v = F.mul[F.inv[lead], v]
                members.add(index[tuple(v.tolist())])
            lines.add(tuple(sorted(members)))
    return len(pts), sorted(lines)


def generalized_quadrangle_incidence(q: int) -> Hypergraph:
    """Incidence graph of the symplectic quadrangle W(3, q).

    Points are all points of PG(3,q) (vertices ``0..N-1``); lines are the
    totally isotropic lines of the form x1y2 - x2y1 + x3y4 - x4y3, sorted by
    their point sets (vertices ``N..2N-1``).
    """
    if prime_power(q) is None or q > GQ_MAX_Q:
        raise InputError(f"generalized quadrangle supported for prime powers q <= {GQ_MAX_Q}, got {q}")
    N, lines = _quadrangle(q)
    edges = sorted((p, N + j) for j, ln in enumerate(lines) for p in ln)
    return _unchecked(2, N + len(lines), edges, [range(N), range(N, N + len(lines))])


def trimmed_quadrangle_incidence(q: int, m: int) -> Hypergraph:
    """Induced subgraph of W(3,q) incidence on m lines and the m best-covered points."""
    G = generalized_quadrangle_incidence(q)
    N = G.n // 2
    k = min(m, N)
    inc = np.zeros((N, N), dtype=bool)
    for p, l in G.edges:
        inc[p, l - N] = True
    lines = np.arange(k)
    sub = inc[:, lines]
    score = sub.sum(axis=1)
    points = np.sort(np.lexsort((np.arange(N), -score))[:k])
    P, L = np.nonzero(sub[points])
    edges = sorted(zip(P.tolist(), (L + m).tolist()))
    return _unchecked(2, 2 * m, edges, [range(m), range(m, 2 * m)])


def tight_cycle_free_host(G: Hypergraph, r: int, m: int) -> Hypergraph:
    """Lift a bipartite graph to an r-partite r-graph.

    Keeps V(G) as parts 1 and 2, appends r-2 new parts of size m, and takes
    every r-set meeting each part once whose trace on parts 1 and 2 is an
    edge of G.
    """
    if G.r != 2 or G.partition is None:
        raise InputError("tight_cycle_free_host needs a bipartite graph with a stored bipartition")
    if r < 2:
        raise InputError("r must be at least 2")
    if r == 2:
        return G
    if m < 1:
        raise InputError("extra part size must be positive")
    _guard(G.e * m ** (r - 2), "lifted host")
    extra = [list(range(G.n + i * m, G.n + (i + 1) * m)) for i in range(r - 2)]
    edges = [tuple(e) + rest for e in G.edges for rest in product(*extra)]
    parts = [list(G.partition[0]), list(G.partition[1])] + extra
    return _unchecked(r, G.n + (r - 2) * m, sorted(edges), parts)


# -- girth ----------------------------------------------------------------------

def girth(G: Hypergraph, stop_at=None):
    """Length of a shortest cycle of a graph, or ``None`` for a forest.

    BFS from every vertex; a non-tree edge between depths d1, d2 closes a
    closed walk of length d1 + d2 + 1 whose minimum over all roots is the
    girth. ``stop_at`` ends the search early once a cycle at most that
    long is found.
    """
    if G.r != 2:
        raise InputError("girth is defined here for graphs (r = 2)")
    adj = [[] for _ in range(G.n)]
    for u, v in G.edges:
        adj[u].append(v)
        adj[v].append(u)
    best = None
    for s in range(G.n):
        if not adj[s]:
            continue
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    c = dist[u] + dist[w] + 1
                    if best is None or c < best:
                        best = c
        if stop_at is not None and best is not None and best <= stop_at:
            return best
    return best


def pair_codegree_max(G: Hypergraph) -> int:
    """Largest number of common neighbours of two vertices on the same side
    of a bipartite graph; at most 1 means C4-free."""
    if G.partition is None:
        raise InputError("needs a bipartition")
    A = np.zeros((len(G.partition[0]), len(G.partition[1])), dtype=np.int64)
    li = {v: i for i, v in enumerate(G.partition[0])}
    ri = {v: i for i, v in enumerate(G.partition[1])}
    for u, v in G.edges:
        if u in li:
            A[li[u], ri[v]] = 1
        else:
            A[li[v], ri[u]] = 1
    M = A @ A.T
    np.fill_diagonal(M, 0)
    return int(M.max()) if M.size else 0


def bipartite_c4_count(G: Hypergraph) -> int:
    """Number of 4-cycles in a bipartite graph: sum over same-side pairs of
    C(common neighbours, 2), taken on one side."""
    if G.r != 2 or G.partition is None:
        raise InputError("needs a bipartite graph with a stored bipartition")
    right = set(G.partition[1])
    nbrs = {}
    for u, v in G.edges:
        a, b = (u, v) if v in right else (v, u)
        nbrs.setdefault(b, []).append(a)
    codes = []
    for lst in nbrs.values():
        x = np.array(sorted(lst), dtype=np.int64)
        i, j = np.triu_indices(len(x), 1)
        codes.append(x[i] * G.n + x[j])
    if not codes:
        return 0
    _, counts = np.unique(np.concatenate(codes), return_counts=True)
    return int((counts * (counts - 1) // 2).sum())


def bipartite_c6_count(G: Hypergraph) -> int:
    """Number of 6-cycles in a bipartite graph with no 4-cycle.

    With pair codegrees at most 1, a 6-cycle is a triangle in the left-side
    "shares a neighbour" graph whose three witnesses differ; triangles whose
    witnesses coincide are the triples inside one neighbourhood.
    """
    if G.r != 2 or G.partition is None:
        raise InputError("needs a bipartite graph with a stored bipartition")
    left, right = G.partition
    li = {v: i for i, v in enumerate(left)}
    ri = {v: i for i, v in enumerate(right)}
    B = np.zeros((len(left), len(right)), dtype=np.int64)
    for u, v in G.edges:
        a, b = (u, v) if u in li else (v, u)
        B[li[a], ri[b]] = 1
    M = B @ B.T
    np.fill_diagonal(M, 0)
    if M.max(initial=0) > 1:
        raise InputError("graph contains a 4-cycle")
    tri = int(np.einsum("ij,jk,ki->", M, M, M)) // 6
    d = B.sum(axis=0)
    return tri - int((d * (d - 1) * (d - 2) // 6).sum())


def heawood_graph() -> Hypergraph:
    return projective_plane_incidence(2)


def tutte_coxeter_graph() -> Hypergraph:
    return generalized_quadrangle_incidence(2)
