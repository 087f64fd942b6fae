"""Constructive extraction of large F-free subgraphs.

Four procedures live here:

* :func:`random_hom_extract` maps the host at random onto a target graph
  ``J`` and keeps the edges that land on edges of ``J`` without colliding
  with a neighbouring edge (two edges sharing r-1 vertices).
* :func:`codegree_split_extract` groups the edges of a partite host by the
  codegree of their trace on all but one part, solves an (r-1)-uniform
  problem on the best dyadic codegree class, and lifts the answer back.
* :func:`recursive_extract` and :func:`tight_cycle_extract` combine the two
  according to whether most edges have low or high codegree.
* :func:`first_moment_deletion` deletes one edge from every copy.

Every report's ``result`` is a subgraph of the input host.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, perm

import numpy as np
from scipy.optimize import brentq

from . import copies as _copies
from .constructions import (
    SizeVector, complete_partite_host, generalized_quadrangle_incidence, girth,
    pair_codegree_max, tight_cycle_free_host, trimmed_plane_incidence,
    trimmed_quadrangle_incidence, GQ_MAX_Q, PG_MAX_Q,
)
from .errors import CertificateViolation, GuardError, InputError
from .fields import prime_powers
from .hypergraph import (
    Hypergraph, _unchecked, derive_seed, random_r_partite_subgraph, rng_for,
    sample_random_hypergraph,
)
from .patterns import (
    Pattern, PatternFamily, as_family, enumerate_r_partitions, find_violation,
    list_copies, local_isomorphism_images, projection_family, tight_cycle_family,
)

VERIFY_EDGES = 20_000
TARGET_SEARCH_EDGES = 600
MAX_COPIES = 1_000_000


@dataclass
class ExtractionReport:
    """An extracted subgraph with the record of how it was obtained."""

    result: Hypergraph
    algorithm: str
    seed: int
    trials: int
    yields: list
    guarantee: Fraction | None = None
    details: dict = field(default_factory=dict)

    @property
    def best(self) -> int:
        return self.result.e

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "seed": self.seed,
            "trials": self.trials,
            "yields": list(self.yields),
            "best": self.result.e,
            "guarantee": None if self.guarantee is None else str(self.guarantee),
            "details": _jsonable(self.details),
            "result": self.result.to_dict(),
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, ExtractionReport):
        d = x.to_dict()
        d.pop("result")
        return d
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


def _empty_like(H: Hypergraph) -> Hypergraph:
    return _unchecked(H.r, H.n, [], H.partition)


def verify_free(H: Hypergraph, family, limit=VERIFY_EDGES) -> bool:
    """Search H for every family member; raise on a hit.

    Returns False (unverified) when H has more than ``limit`` edges.
    """
    if H.e > limit:
        return False
    hit = find_violation(H, family)
    if hit is not None:
        p, w = hit
        raise CertificateViolation(f"result contains {p.name}", witness=w)
    return True


# -- random homomorphism -------------------------------------------------------

def _row_codes(rows, base):
    powers = base ** np.arange(rows.shape[1] - 1, -1, -1, dtype=np.int64)
    return rows @ powers


def hom_keep_mask(H: Hypergraph, J: Hypergraph, chi) -> np.ndarray:
    """Edges of H kept under the vertex map ``chi: V(H) -> V(J)``.

    An edge e is kept when chi(e) is an edge of J and no other edge f with
    |e & f| = r-1 has chi(f) = chi(e).
    """
    r, t = H.r, J.n
    if H.e == 0 or J.e == 0:
        return np.zeros(H.e, dtype=bool)
    chi = np.asarray(chi, dtype=np.int64)
    E = H.edge_array
    img = np.sort(chi[E], axis=1)
    distinct = np.all(np.diff(img, axis=1) > 0, axis=1)
    if t ** r < 2 ** 62:
        codes = _row_codes(img, t)
        jcodes = np.sort(_row_codes(J.edge_array, t))
        pos = np.searchsorted(jcodes, codes)
        pos[pos == len(jcodes)] = 0
        on_edge = distinct & (jcodes[pos] == codes)
    else:
        on_edge = distinct & np.array([tuple(row) in J.edge_set for row in img.tolist()])
        codes = np.unique(img, axis=0, return_inverse=True)[1].ravel()
    keep = on_edge.copy()
    idx = np.flatnonzero(on_edge)
    if idx.size > 1:
        sub = E[idx]
        # all (image, (r-1)-subset) keys at once: the shared vertices of two
        # neighbouring edges need not sit in the same column
        key = np.concatenate([np.column_stack([codes[idx], np.delete(sub, j, axis=1)])
                              for j in range(r)])
        owner = np.tile(idx, r)
        _, inv, counts = np.unique(key, axis=0, return_inverse=True, return_counts=True)
        keep[owner[counts[inv.ravel()] > 1]] = False
    return keep


def hom_guarantee(H: Hypergraph, J: Hypergraph):
    """The expectation lower bound r! e(J) t^-r e(H) / 2, or None when
    t < 2 r^2 D(H)."""
    r, t = H.r, J.n
    if t == 0 or t < 2 * r * r * H.max_codegree():
        return None
    return Fraction(factorial(r) * J.e * H.e, 2 * t ** r)


def random_hom_extract(H: Hypergraph, J: Hypergraph, family=None, trials: int = 1,
                       seed: int = 0, verify: bool = False) -> ExtractionReport:
    """Best of ``trials`` random maps V(H) -> V(J); trial i uses derive_seed(seed, i).

    The result is free of every member of ``family`` whenever J contains no
    local-isomorphism image of a member.
    """
    if J.r != H.r:
        raise InputError(f"target uniformity {J.r} differs from host uniformity {H.r}")
    if trials < 1:
        raise InputError("trials must be at least 1")
    yields = []
    best_mask, best_trial = None, 0
    for i in range(trials):
        if J.n == 0:
            mask = np.zeros(H.e, dtype=bool)
        else:
            chi = rng_for(seed, i).integers(0, J.n, size=H.n)
            mask = hom_keep_mask(H, J, chi)
        y = int(mask.sum())
        yields.append(y)
        if best_mask is None or y > yields[best_trial]:
            best_mask, best_trial = mask, i
    result = H.mask_subgraph(best_mask)
    details = {"t": J.n, "target_edges": J.e, "host_codegree": H.max_codegree(),
               "best_trial": best_trial, "mean_yield": float(np.mean(yields))}
    if verify and family is not None:
        details["verified"] = verify_free(result, family)
    return ExtractionReport(result, "rhom", seed, trials, yields, hom_guarantee(H, J), details)


# -- target graphs ---------------------------------------------------------------

def _needed_level(p: Pattern):
    """Girth level l such that a lifted base of girth > 2l avoids H(p).

    0 means any r-partite target works; None means no algebraic argument.
    """
    r = p.r
    if p.kind == "complete_partite":
        return 2 if min(p.params) >= 2 else None
    if p.kind == "tight_cycle":
        k = p.params[0]
        return k // r if k % r == 0 else 0
    G = _copies.strip_isolated(p.realized)
    try:
        if not enumerate_r_partitions(G):
            return 0
    except GuardError:
        return None
    if _copies.find_copy(G, Pattern.complete_partite(*([2] * r)).realized) is not None:
        return 2
    return None


def _fit_bipartite(G: Hypergraph, m: int) -> Hypergraph:
    # first m vertices of each side, induced; pad with isolated vertices
    left, right = G.partition
    left, right = list(left)[:m], list(right)[:m]
    li = {v: i for i, v in enumerate(left)}
    ri = {v: i + m for i, v in enumerate(right)}
    edges = []
    for u, v in G.edges:
        if u in li and v in ri:
            edges.append((li[u], ri[v]))
        elif v in li and u in ri:
            edges.append((li[v], ri[u]))
    return _unchecked(2, 2 * m, sorted(edges), [range(m), range(m, 2 * m)])


@lru_cache(maxsize=64)
def girth_base(level: int, m: int) -> Hypergraph:
    """Bipartite graph with m + m vertices and girth > 2*level (level 2 or 3).

    Level 2 trims a projective plane, level 3 a generalized quadrangle; the
    order q giving the most edges after trimming is used.
    """
    if level <= 2:
        candidates = [q for q in prime_powers(2, PG_MAX_Q) if q * q + q + 1 <= 4 * m] or [2]
        candidates = [q for q in candidates if 3 * (q * q + q + 1) >= m] or candidates[-1:]
        build = trimmed_plane_incidence
    elif level == 3:
        qs = [q for q in prime_powers(2, GQ_MAX_Q)]
        candidates = [q for q in qs if (q + 1) * (q * q + 1) <= 4 * m] or [2]
        build = trimmed_quadrangle_incidence
    else:
        raise GuardError(f"no built-in base graph of girth > {2 * level}")
    best = None
    for q in candidates:
        G = build(q, m)
        if best is None or G.e > best.e:
            best = G
    return best


@dataclass
class TargetInfo:
    strategy: str
    t: int
    edges: int
    verified: str
    level: int | None = None

    def to_dict(self):
        return dict(self.__dict__)


def _family_key(fam):
    return frozenset(p.canonical for p in fam)


def build_target(family, D: int, seed: int = 0, base_graph: Hypergraph | None = None):
    """Return ``(J, info)``: a target on t = 2 r^2 D vertices free of H(family)."""
    fam = as_family(family)
    if D < 1:
        raise InputError("D must be at least 1")
    if not len(fam):
        raise InputError("empty family")
    return _build_target_cached(_FamilyBox(fam), int(D), int(seed), base_graph)


class _FamilyBox:
    # hashable wrapper so targets can be cached per family
    def __init__(self, fam):
        self.fam = fam
        self.key = _family_key(fam)

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return self.key == other.key


@lru_cache(maxsize=128)
def _build_target_cached(box, D, seed, base_graph):
    fam = box.fam
    r = fam.r
    t = 2 * r * r * D
    m = t // r
    levels = [_needed_level(p) for p in fam]
    try:
        hfam = local_isomorphism_images(fam)
    except GuardError:
        hfam = None

    if None not in levels:
        level = max(levels)
        if level == 0:
            J = complete_partite_host([m] * r)
            strategy, verified = "complete-partite", "r-partite"
        else:
            if base_graph is not None:
                base = _fit_bipartite(base_graph, m)
                strategy = "user-base"
            else:
                if level > 3:
                    raise GuardError(
                        f"tight cycles up to length {level}*r need a user-supplied base graph")
                base = girth_base(level, m)
                strategy = "plane" if level == 2 else "quadrangle"
            J = tight_cycle_free_host(base, r, m) if r >= 3 else base
            verified = _verify_base(base, level)
        if hfam is not None and J.e <= TARGET_SEARCH_EDGES:
            # J is r-partite, so only r-partite images can occur in it
            verify_free(J, PatternFamily([p for p in hfam if _is_partite_pattern(p)]),
                        limit=TARGET_SEARCH_EDGES)
            verified = "search"
        return J, TargetInfo(strategy, t, J.e, verified, level)

    if hfam is None:
        raise GuardError("family too large for local-isomorphism enumeration and no "
                         "algebraic target applies")
    from .oracle import exact_relative_turan  # circular import
    if comb(t, r) <= 40:
        res = exact_relative_turan(_complete(t, r), hfam)
        J = res.witness
        return J, TargetInfo("exact", t, J.e, "exact")
    J = probabilistic_extremal(t, r, hfam, seed)
    return J, TargetInfo("probabilistic", t, J.e, "deletion")


def _complete(t, r):
    from .constructions import complete_host
    return complete_host(t, r)


def _verify_base(base, level):
    if level <= 2:
        if pair_codegree_max(base) > 1:
            raise CertificateViolation("base graph contains a 4-cycle")
        return "base-c4"
    if base.e <= 50_000:
        g = girth(base, stop_at=2 * level)
        if g is not None and g <= 2 * level:
            raise CertificateViolation(f"base graph has girth {g} <= {2 * level}")
        return "base-girth"
    return "trusted"


def build_target_J(family, D: int, seed: int = 0, base_graph=None) -> Hypergraph:
    """H(family)-free r-graph on t = 2 r^2 D vertices."""
    return build_target(family, D, seed, base_graph)[0]


# -- codegree splitting ----------------------------------------------------------

def _trace_codegrees(H: Hypergraph, drop: int):
    """For each edge, its trace without the vertex in part ``drop`` and the
    trace's codegree in H."""
    E = H.edge_array
    parts = H.part_of[E]
    order = np.argsort(parts, axis=1, kind="stable")
    by_part = np.take_along_axis(E, order, axis=1)
    trace = np.delete(by_part, drop, axis=1)
    trace = np.sort(trace, axis=1)
    _, inv, counts = np.unique(trace, axis=0, return_inverse=True, return_counts=True)
    return trace, counts[inv.ravel()]


def codegree_split_extract(H: Hypergraph, D: int, family, recurse, seed: int = 0,
                           trials: int = 1) -> ExtractionReport:
    """Split on a dropped part and a dyadic codegree class, solve, and lift.

    ``recurse(G, pi_family, seed)`` must return an F'-free subgraph (or a
    report whose ``result`` is one) of the (r-1)-graph ``G``, where F' is the
    projection family of the r-partite members of ``family``. ``G`` lives on
    the union of the kept parts, relabelled in increasing vertex order.
    """
    if H.partition is None:
        raise InputError("codegree splitting needs a partitioned host")
    r = H.r
    if r < 3:
        raise InputError("codegree splitting needs r >= 3")
    if D < 1:
        raise InputError("D must be at least 1")
    if trials < 1:
        raise InputError("trials must be at least 1")
    fam = as_family(family)
    details = {"D": D}
    if H.e == 0:
        details["diagnostic"] = "empty host"
        return ExtractionReport(_empty_like(H), "split", seed, trials, [0] * trials, None, details)

    class_sizes, traces = [], []
    for i in range(r):
        tr, cod = _trace_codegrees(H, i)
        traces.append((tr, cod))
        class_sizes.append(int((cod >= D).sum()))
    drop = int(np.argmax(class_sizes))
    details["class_sizes"] = class_sizes
    details["dropped_part"] = drop
    if class_sizes[drop] == 0:
        details["diagnostic"] = "no trace reaches codegree D; use the low-codegree branch"
        return ExtractionReport(_empty_like(H), "split", seed, trials, [0] * trials, None, details)

    tr, cod = traces[drop]
    inE = cod >= D
    bucket = np.full(H.e, -1, dtype=np.int64)
    # bucket K holds codegrees in [2^K D, 2^(K+1) D); integer bit_length avoids log2 rounding
    bucket[inE] = [(int(c) // D).bit_length() - 1 for c in cod[inE]]
    nb = int(bucket.max()) + 1
    per_bucket = [int((bucket == k).sum()) for k in range(nb)]
    K = int(np.argmax(per_bucket))
    details["bucket_edges"] = per_bucket
    details["K"] = K

    kept_parts = [j for j in range(r) if j != drop]
    _, old_of_new = H.restrict_with_map(kept_parts)
    new_of = {v: j for j, v in enumerate(old_of_new)}
    in_K = bucket == K
    gk_edges = sorted({tuple(new_of[v] for v in row) for row in tr[in_K].tolist()})
    parts = [[new_of[v] for v in H.partition[j]] for j in kept_parts]
    G_K = _unchecked(r - 1, len(old_of_new), gk_edges, parts)
    details["G_K_edges"] = G_K.e

    partite = [p for p in fam if _is_partite_pattern(p)]
    try:
        pi_fam = projection_family(PatternFamily(partite)) if partite else PatternFamily()
    except GuardError:
        pi_fam = None
    details["projection_family"] = None if pi_fam is None else pi_fam.names

    trace_rows = [tuple(row) for row in tr.tolist()]
    yields, best, best_G, best_sub = [], None, None, None
    for i in range(trials):
        if partite:
            sub = recurse(G_K, pi_fam, derive_seed(seed, i))
            G = sub.result if isinstance(sub, ExtractionReport) else sub
        else:
            sub, G = None, G_K
        chosen = {tuple(old_of_new[v] for v in e) for e in G.edges}
        mask = np.fromiter((in_K[j] and trace_rows[j] in chosen for j in range(H.e)),
                           dtype=bool, count=H.e)
        y = int(mask.sum())
        yields.append(y)
        if best is None or y > yields[best[0]]:
            best, best_G, best_sub = (i, mask), G, sub
    result = H.mask_subgraph(best[1])
    bound = (2 ** K) * D * best_G.e
    details.update({"G_edges": best_G.e, "lift_bound": bound, "best_trial": best[0]})
    if isinstance(best_sub, ExtractionReport):
        details["inner"] = best_sub
    if result.e < bound:
        raise AssertionError("lift bound violated")
    return ExtractionReport(result, "split", seed, trials, yields, Fraction(bound), details)


def _is_partite_pattern(p):
    if p.kind == "complete_partite":
        return True
    if p.kind == "tight_cycle":
        return p.params[0] % p.params[1] == 0
    try:
        return bool(enumerate_r_partitions(p.realized))
    except GuardError:
        return True


# -- combined recursions -----------------------------------------------------------

def ceil_root_power(x: int, num: int, den: int) -> int:
    """Smallest integer D >= 1 with D**den >= x**num, i.e. ceil(x^(num/den))."""
    if x <= 1:
        return 1
    target = x ** num
    D = max(1, int(round(x ** (num / den))))
    while D ** den < target:
        D += 1
    while D > 1 and (D - 1) ** den >= target:
        D -= 1
    return D


def _partite(H, seed):
    if H.partition is not None:
        return H, "given"
    return random_r_partite_subgraph(H, derive_seed(seed, 0x5EED)), "random"


def _high_mask(H: Hypergraph, D: int) -> np.ndarray:
    """Edges containing an (r-1)-set of codegree at least D."""
    E = H.edge_array
    high = np.zeros(H.e, dtype=bool)
    if H.e == 0:
        return high
    keys = np.concatenate([np.delete(E, j, axis=1) for j in range(H.r)])
    owner = np.tile(np.arange(H.e), H.r)
    _, inv, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    high[owner[counts[inv.ravel()] >= D]] = True
    return high


def _two_branch(H, seed, trials, D, family, low_family, inner, algorithm, verify,
                base_graph=None, partite_note=None):
    high = _high_mask(H, D)
    n_low = int((~high).sum())
    details = {"D": D, "partite_edges": H.e, "low_edges": n_low, "partite": partite_note}
    if 2 * n_low >= H.e:
        low = H.mask_subgraph(~high)
        J, info = build_target(low_family, D, seed, base_graph)
        rep = random_hom_extract(low, J, None, trials, derive_seed(seed, 1))
        details.update({"branch": "low", "discarded_high": H.e - n_low,
                        "target": info.to_dict()})
        details.update(rep.details)
        report = ExtractionReport(rep.result, algorithm, seed, trials, rep.yields,
                                  rep.guarantee, details)
    else:
        rep = codegree_split_extract(H, D, family, inner, derive_seed(seed, 2), trials)
        details.update({"branch": "high"})
        details.update(rep.details)
        report = ExtractionReport(rep.result, algorithm, seed, trials, rep.yields,
                                  rep.guarantee, details)
    if verify:
        report.details["verified"] = verify_free(report.result, family)
    return report


def recursive_extract(H: Hypergraph, s, seed: int = 0, trials: int = 1,
                      verify: bool = True) -> ExtractionReport:
    """K_{s_1,...,s_r}-free subgraph by the low/high codegree recursion.

    r = 2 applies the random homomorphism directly with D the maximum
    degree. For r >= 3 the host is first made r-partite (reusing a stored
    partition), D = ceil(Delta^(a_r / (a_2 + ... + a_r))), and the branch
    holding at least half of the edges is processed.
    """
    sv = SizeVector.of(s)
    if H.r != sv.r:
        raise InputError(f"host uniformity {H.r} differs from |s| = {sv.r}")
    fam = PatternFamily([Pattern.complete_partite(*sv.s)])
    if H.e == 0:
        return ExtractionReport(H, "recursive", seed, trials, [0] * trials, None, {})
    if sv.r == 2:
        D = max(1, H.max_codegree())
        J, info = build_target(fam, D, seed)
        rep = random_hom_extract(H, J, None, trials, derive_seed(seed, 1))
        rep.algorithm = "recursive"
        rep.seed = seed
        rep.details.update({"branch": "base", "D": D, "target": info.to_dict()})
        if verify:
            rep.details["verified"] = verify_free(rep.result, fam)
        return rep
    Hp, note = _partite(H, seed)
    a = sv.a_list
    delta = Hp.max_degree()
    D = ceil_root_power(delta, a[sv.r - 1], sum(a[1:sv.r]))
    inner_s = sv.truncate()

    def inner(G, _pi_family, sd):
        return recursive_extract(G, inner_s, sd, 1, verify=False)

    return _two_branch(Hp, seed, trials, D, fam, fam, inner, "recursive", verify,
                       partite_note=note)


def tight_cycle_extract(H: Hypergraph, ell: int, seed: int = 0, trials: int = 1,
                        base_graph: Hypergraph | None = None,
                        verify: bool = True) -> ExtractionReport:
    """Subgraph free of TC_{r+1}^r, ..., TC_{ell*r}^r.

    Same skeleton as :func:`recursive_extract` with D = ceil(Delta^(1/(r-1)));
    the low branch targets a lifted base graph of girth > 2*ell, and the high
    branch recurses on (r-1)-uniform tight cycles. ``ell`` = 5 needs
    ``base_graph``.
    """
    r = H.r
    if ell not in (2, 3, 5):
        raise InputError("ell must be 2, 3 or 5")
    if ell == 5 and base_graph is None:
        raise GuardError("ell = 5 requires a user-supplied base graph of girth > 10")
    fam = tight_cycle_family(r, ell)
    if H.e == 0:
        return ExtractionReport(H, "tc", seed, trials, [0] * trials, None, {})
    if r == 2:
        D = max(1, H.max_codegree())
        J, info = build_target(fam, D, seed, base_graph)
        rep = random_hom_extract(H, J, None, trials, derive_seed(seed, 1))
        rep.algorithm = "tc"
        rep.seed = seed
        rep.details.update({"branch": "base", "D": D, "target": info.to_dict()})
        if verify:
            rep.details["verified"] = verify_free(rep.result, fam)
        return rep
    Hp, note = _partite(H, seed)
    D = ceil_root_power(Hp.max_degree(), 1, r - 1)

    def inner(G, _pi_family, sd):
        return tight_cycle_extract(G, ell, sd, 1, base_graph, verify=False)

    return _two_branch(Hp, seed, trials, D, fam, fam, inner, "tc", verify, base_graph, note)


# -- deletion ----------------------------------------------------------------------

def first_moment_deletion(H: Hypergraph, family, seed: int = 0,
                          max_copies: int = MAX_COPIES) -> ExtractionReport:
    """Delete one seed-chosen edge from every copy still intact.

    Copies are visited in a seeded random order; a single pass suffices
    because every copy in a subgraph of H is a copy in H.
    """
    fam = as_family(family)
    found = []
    for c in list_copies(H, fam):
        found.append(c)
        if len(found) > max_copies:
            raise GuardError(f"more than {max_copies} copies; deletion refused")
    rng = rng_for(seed)
    alive = np.ones(H.e, dtype=bool)
    deleted = 0
    for j in rng.permutation(len(found)):
        c = found[j]
        if all(alive[i] for i in c):
            alive[c[int(rng.integers(len(c)))]] = False
            deleted += 1
    result = H.mask_subgraph(alive)
    details = {"copies": len(found), "deleted": deleted}
    return ExtractionReport(result, "del", seed, 1, [result.e], None, details)


def copies_in_complete(n: int, F: Hypergraph) -> int:
    """Number of copies of F in K_n^r."""
    F = _copies.strip_isolated(F)
    if F.n > n:
        return 0
    return perm(n, F.n) // _copies.automorphism_count(F)


def first_moment_p(n: int, r: int, family) -> float:
    """p with E[#copies] = E[#edges] / 2 in H^r_{n,p} (capped at 1)."""
    fam = as_family(family)
    counts = [(copies_in_complete(n, p.realized), p.realized.e) for p in fam]
    half = comb(n, r) / 2

    def excess(p):
        return sum(c * p ** (e - 1) for c, e in counts) - half

    if excess(1.0) <= 0:
        return 1.0
    if excess(0.0) >= 0:
        return 0.0
    return brentq(excess, 0.0, 1.0, xtol=1e-12)


def probabilistic_extremal(n: int, r: int, family, seed: int = 0,
                           max_copies: int = MAX_COPIES) -> Hypergraph:
    """Sample H^r_{n,p} at the first-moment p and delete an edge per copy."""
    fam = as_family(family)
    p = first_moment_p(n, r, fam)
    expected = sum(copies_in_complete(n, m.realized) * p ** m.realized.e for m in fam)
    if expected > max_copies:
        raise GuardError(f"expected {expected:.3g} copies exceeds {max_copies}")
    H = sample_random_hypergraph(n, r, p, derive_seed(seed, 0))
    return first_moment_deletion(H, fam, derive_seed(seed, 1), max_copies).result


# -- generic recursion helper ----------------------------------------------------

def exact_recurse(G: Hypergraph, family, seed: int = 0):
    """Extremal pi(F)-free subgraph by exact search, falling back to deletion."""
    from .oracle import exact_relative_turan
    from .errors import BudgetExceeded
    try:
        return exact_relative_turan(G, family).witness
    except BudgetExceeded:
        return first_moment_deletion(G, family, seed).result


def check_certificate(host: Hypergraph, sub: Hypergraph, family) -> bool:
    """Raise :class:`CertificateViolation` unless ``sub`` is a family-free
    subgraph of ``host``; returns True otherwise."""
    if sub.r != host.r or not sub.is_subgraph_of(host):
        raise CertificateViolation("claimed subgraph is not contained in the host")
    hit = find_violation(sub, family)
    if hit is not None:
        p, w = hit
        raise CertificateViolation(f"subgraph contains {p.name}", witness=w)
    return True
