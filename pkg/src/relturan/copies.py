"""Canonical labelling and subgraph (copy) search for small patterns.

A copy of ``F`` in ``H`` is a set of ``e(F)`` edges of ``H`` that, together
with the vertices they span, forms a hypergraph isomorphic to ``F`` with
its isolated vertices removed. Copies are counted as unordered edge sets.

The search maps the edges of ``F`` one at a time onto edges of ``H``. Edges
of ``F`` are ordered so that each one shares as many vertices as possible
with those already placed (heaviest-degree edge first), which turns most
steps into a codegree lookup. A vertex of ``F`` may only be sent to a host
vertex of at least the same degree.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

from .hypergraph import Hypergraph


# -- canonical form -----------------------------------------------------------

def _refine(H, colors):
    inc = H.incidence
    edges = H.edges
    while True:
        sigs = []
        for v in range(H.n):
            nb = sorted(tuple(sorted(colors[u] for u in edges[i] if u != v)) for i in inc[v])
            sigs.append((colors[v], tuple(nb)))
        order = {s: j for j, s in enumerate(sorted(set(sigs)))}
        new = [order[s] for s in sigs]
        if len(order) == len(set(colors)):
            return new
        colors = new


def _certificate(H, colors):
    edges = tuple(sorted(tuple(sorted(colors[v] for v in e)) for e in H.edges))
    return edges


def canonical_form(H: Hypergraph) -> tuple:
    """Isomorphism-invariant key: equal iff the hypergraphs are isomorphic.

    Colour refinement followed by exhaustive individualisation of the first
    non-singleton cell; the lexicographically least relabelled edge list over
    all leaves is the certificate.
    """
    if H.n == 0:
        return (H.r, 0, ())
    best = None
    stack = [_refine(H, [0] * H.n)]
    while stack:
        colors = stack.pop()
        cells = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            cert = _certificate(H, colors)
            if best is None or cert < best:
                best = cert
            continue
        for v in target:
            # individualised vertex gets its own colour just below its old cell
            split = [2 * c + 1 for c in colors]
            split[v] -= 1
            stack.append(_refine(H, _compress(split)))
    return (H.r, H.n, best)


def _compress(colors):
    order = {c: j for j, c in enumerate(sorted(set(colors)))}
    return [order[c] for c in colors]


def is_isomorphic(A: Hypergraph, B: Hypergraph) -> bool:
    if (A.r, A.n, A.e) != (B.r, B.n, B.e):
        return False
    return canonical_form(A) == canonical_form(B)


def strip_isolated(F: Hypergraph) -> Hypergraph:
    used = sorted({v for e in F.edges for v in e})
    if len(used) == F.n:
        return F
    new_of = {v: i for i, v in enumerate(used)}
    return Hypergraph(F.r, len(used), [[new_of[v] for v in e] for e in F.edges])


# -- search plan ----------------------------------------------------------------

class _Plan:
    """Edge order for mapping a pattern, with per-step known/new vertices."""

    def __init__(self, F: Hypergraph):
        F = strip_isolated(F)
        self.F = F
        deg = [0] * F.n
        for e in F.edges:
            for v in e:
                deg[v] += 1
        self.deg = deg
        remaining = list(range(F.e))
        placed = set()
        steps = []
        while remaining:
            def key(i):
                e = F.edges[i]
                return (sum(v in placed for v in e), sum(deg[v] for v in e), -i)
            i = max(remaining, key=key)
            remaining.remove(i)
            e = F.edges[i]
            known = tuple(v for v in e if v in placed)
            new = tuple(v for v in e if v not in placed)
            placed.update(e)
            steps.append((known, new))
        self.steps = steps


@lru_cache(maxsize=256)
def _plan(F: Hypergraph) -> _Plan:
    return _Plan(F)


def _embeddings(H: Hypergraph, F: Hypergraph):
    """Yield injective vertex maps (as dicts) sending every edge of F to H."""
    plan = _plan(F)
    F = plan.F
    if F.e == 0 or F.e > H.e or F.r != H.r or F.n > H.n:
        return
    r = H.r
    edges = H.edges
    edge_set = H.edge_set
    inc = H.incidence
    hdeg = [len(x) for x in inc]
    fdeg = plan.deg
    steps = plan.steps
    nsteps = len(steps)
    phi = {}
    used = set()
    codeg_index = _codegree_index(H)

    def candidates(known):
        k = len(known)
        imgs = [phi[v] for v in known]
        if k == 0:
            return edges
        if k == r - 1:
            return codeg_index.get(tuple(sorted(imgs)), ())
        if k == 1:
            return [edges[i] for i in inc[imgs[0]]]
        pivot = min(imgs, key=lambda w: hdeg[w])
        others = [w for w in imgs if w != pivot]
        out = []
        for i in inc[pivot]:
            e = edges[i]
            if all(w in e for w in others):
                out.append(e)
        return out

    def rec(depth):
        if depth == nsteps:
            yield phi
            return
        known, new = steps[depth]
        if not new:
            if tuple(sorted(phi[v] for v in known)) in edge_set:
                yield from rec(depth + 1)
            return
        imgs = {phi[v] for v in known}
        for e in candidates(known):
            free = [w for w in e if w not in imgs]
            if any(w in used for w in free):
                continue
            for perm in permutations(free):
                ok = True
                for u, w in zip(new, perm):
                    if hdeg[w] < fdeg[u]:
                        ok = False
                        break
                if not ok:
                    continue
                for u, w in zip(new, perm):
                    phi[u] = w
                    used.add(w)
                yield from rec(depth + 1)
                for u, w in zip(new, perm):
                    del phi[u]
                    used.discard(w)

    yield from rec(0)


_CODEG_CACHE_ATTR = "_codegree_edges"


def _codegree_index(H: Hypergraph) -> dict:
    idx = H.__dict__.get(_CODEG_CACHE_ATTR)
    if idx is None:
        idx = {}
        r = H.r
        for e in H.edges:
            for j in range(r):
                idx.setdefault(e[:j] + e[j + 1:], []).append(e)
        H.__dict__[_CODEG_CACHE_ATTR] = idx
    return idx


@lru_cache(maxsize=256)
def automorphism_count(F: Hypergraph) -> int:
    F = strip_isolated(F)
    return sum(1 for _ in _embeddings(F, F))


def find_copy(H: Hypergraph, F: Hypergraph):
    """Return one embedding (pattern vertex -> host vertex) or None.

    Pattern vertices refer to ``F`` with isolated vertices removed and
    relabelled in increasing order.
    """
    for phi in _embeddings(H, F):
        return dict(phi)
    return None


def count_embeddings(H: Hypergraph, F: Hypergraph) -> int:
    return sum(1 for _ in _embeddings(H, F))


def count_copies(H: Hypergraph, F: Hypergraph) -> int:
    """Number of distinct edge subsets of H forming a copy of F."""
    emb = count_embeddings(H, F)
    if emb == 0:
        return 0
    aut = automorphism_count(F)
    assert emb % aut == 0
    return emb // aut


def list_copies(H: Hypergraph, F: Hypergraph):
    """Yield each copy once, as a sorted tuple of host edge indices."""
    plan = _plan(F)
    Fs = plan.F
    index = H.edge_index
    seen = set()
    for phi in _embeddings(H, F):
        ids = tuple(sorted(index[tuple(sorted(phi[v] for v in e))] for e in Fs.edges))
        if ids not in seen:
            seen.add(ids)
            yield ids
