"""Exact small-instance answers, exponent formulas and exponent fitting.

``exact_relative_turan`` computes ex(H, F) as e(H) minus a minimum set of
edges meeting every copy of a family member. ``brute_force_relative_turan``
is a deliberately naive cross-check that shares no search code with it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import comb, factorial, prod

import numpy as np

from .constructions import SizeVector
from .errors import BudgetExceeded, GuardError, InputError
from .hypergraph import Hypergraph
from .patterns import as_family, count_copies, list_copies
from . import copies as _copies

BUDGET_EDGES = 40
BUDGET_COPIES = 1_000_000
BUDGET_NODES = 5_000_000


# -- exact value ------------------------------------------------------------------

@dataclass
class ExactResult:
    value: int
    witness: Hypergraph
    hitting_set: tuple
    copies: int
    nodes: int

    def to_dict(self) -> dict:
        return {"value": self.value, "copies": self.copies, "nodes": self.nodes,
                "hitting_set": list(self.hitting_set), "witness": self.witness.to_dict()}


def _bits(x):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _minimal(masks):
    # drop duplicates and supersets of other copies; they are hit for free
    masks = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    kept = []
    for m in masks:
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


def _most_frequent(masks, allowed):
    counts = {}
    for m in masks:
        for b in _bits(m & allowed):
            counts[b] = counts.get(b, 0) + 1
    return max(counts, key=lambda b: (counts[b], -b)) if counts else None


def _greedy_cover(masks):
    chosen = 0
    rest = list(masks)
    while rest:
        b = _most_frequent(rest, -1)
        chosen |= 1 << b
        rest = [m for m in rest if not m >> b & 1]
    return chosen


def _packing(masks):
    # greedily pick pairwise disjoint copies, smallest first
    used, count = 0, 0
    for m in sorted(masks, key=lambda m: bin(m).count("1")):
        if not m & used:
            used |= m
            count += 1
    return count


def min_hitting_set(masks, max_nodes=BUDGET_NODES):
    """Minimum set of bits meeting every mask; returns (mask, nodes).

    Branch and bound on the smallest remaining mask: try each of its bits in
    order of frequency, forbidding the bits already tried, so every hitting
    set is reached once. The bound is a greedy disjoint packing.
    """
    masks = _minimal(masks)
    if not masks:
        return 0, 0
    best = [_greedy_cover(masks)]
    best_size = [bin(best[0]).count("1")]
    nodes = [0]

    def rec(rest, chosen, size):
        nodes[0] += 1
        if nodes[0] > max_nodes:
            raise BudgetExceeded("branch-and-bound node budget exhausted")
        if not rest:
            if size < best_size[0]:
                best[0], best_size[0] = chosen, size
            return
        if size + _packing(rest) >= best_size[0]:
            return
        pivot = min(rest, key=lambda m: bin(m).count("1"))
        freq = {}
        for m in rest:
            for b in _bits(m & pivot):
                freq[b] = freq.get(b, 0) + 1
        forbidden = 0
        for b in sorted(freq, key=lambda b: (-freq[b], b)):
            bit = 1 << b
            nxt = []
            for m in rest:
                if m & bit:
                    continue
                m &= ~forbidden
                if not m:
                    break
                nxt.append(m)
            else:
                rec(nxt, chosen | bit, size + 1)
            forbidden |= bit

    try:
        rec(masks, 0, 0)
    except BudgetExceeded as exc:
        exc.lower = _packing(masks)
        exc.upper = best_size[0]
        raise
    return best[0], nodes[0]


def exact_relative_turan(H: Hypergraph, family, budget_edges: int = BUDGET_EDGES,
                         budget_copies: int = BUDGET_COPIES,
                         budget_nodes: int = BUDGET_NODES) -> ExactResult:
    """ex(H, family) with an extremal family-free subgraph as witness.

    Raises :class:`BudgetExceeded` (carrying bounds on ex) when a budget is
    hit. The search is sequential, so the witness is deterministic.
    """
    fam = as_family(family)
    if fam.r is not None and fam.r != H.r:
        raise InputError(f"pattern uniformity {fam.r} differs from host uniformity {H.r}")
    if H.e > budget_edges:
        raise BudgetExceeded(f"host has {H.e} edges (budget {budget_edges})", 0, H.e)
    masks = []
    for c in list_copies(H, fam):
        masks.append(sum(1 << i for i in c))
        if len(masks) > budget_copies:
            raise BudgetExceeded(f"more than {budget_copies} copies", 0, H.e)
    try:
        hit, nodes = min_hitting_set(masks, budget_nodes)
    except BudgetExceeded as exc:
        lo, hi = exc.lower, exc.upper
        raise BudgetExceeded(str(exc), lower=H.e - hi, upper=H.e - lo) from None
    hs = tuple(_bits(hit))
    keep = np.ones(H.e, dtype=bool)
    keep[list(hs)] = False
    witness = H.mask_subgraph(keep)
    return ExactResult(H.e - len(hs), witness, hs, len(masks), nodes)


# -- naive cross-check --------------------------------------------------------------

def _naive_iso(edges_a, edges_b):
    """Isomorphism of two small edge lists by trying every vertex bijection."""
    va = sorted({v for e in edges_a for v in e})
    vb = sorted({v for e in edges_b for v in e})
    if len(va) != len(vb) or len(edges_a) != len(edges_b):
        return False
    target = {frozenset(e) for e in edges_b}
    for img in permutations(vb):
        m = dict(zip(va, img))
        if all(frozenset(m[v] for v in e) in target for e in edges_a):
            return True
    return False


def brute_force_relative_turan(H: Hypergraph, family, max_edges: int = 14) -> int:
    """ex(H, family) by enumerating edge subsets; for e(H) <= ``max_edges``."""
    fam = as_family(family)
    if H.e > max_edges:
        raise GuardError(f"brute force limited to {max_edges} edges")
    edges = list(H.edges)
    bad = []
    for p in fam:
        F = [e for e in p.realized.edges]
        for sub in combinations(range(len(edges)), len(F)):
            if _naive_iso([edges[i] for i in sub], F):
                bad.append(sum(1 << i for i in sub))
    for size in range(len(edges), -1, -1):
        for sub in combinations(range(len(edges)), size):
            m = sum(1 << i for i in sub)
            if not any(b & m == b for b in bad):
                return size
    return 0


# -- exponents ------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentProfile:
    s: SizeVector
    alpha: Fraction
    beta: Fraction
    beta1: Fraction
    beta2: Fraction

    @property
    def a(self) -> tuple:
        return self.s.a_list

    def as_tuple(self) -> tuple:
        return (self.alpha, self.beta, self.beta1, self.beta2)

    def to_dict(self) -> dict:
        return {"s": list(self.s.s), "a": list(self.a),
                **{k: str(v) for k, v in zip(("alpha", "beta", "beta1", "beta2"),
                                              self.as_tuple())}}

    @classmethod
    def from_dict(cls, d) -> "ExponentProfile":
        return cls(SizeVector(tuple(d["s"])), *(Fraction(d[k]) for k in
                                                 ("alpha", "beta", "beta1", "beta2")))


def exponents(s) -> ExponentProfile:
    """alpha = 1/((r-1) a_r), beta = 1/(a_2+...+a_r), and the random-host
    regime boundaries beta1, beta2, all as exact fractions."""
    sv = SizeVector.of(s)
    r = sv.r
    a = sv.a_list  # a[i-1] = a_i
    ar, ar1 = a[r - 1], a[r]
    alpha = Fraction(1, (r - 1) * ar)
    beta = Fraction(1, sum(a[1:r]))
    beta1 = Fraction(sum(sv.s) - r, ar1 - 1)
    beta2 = Fraction(ar * (sum(sv.s[:-1]) - r) + 1, (ar - 1) * (ar1 - 1))
    return ExponentProfile(sv, alpha, beta, beta1, beta2)


def alpha_recursion(s, alpha2=1) -> Fraction:
    """alpha_i = 4^{s_i} alpha_{i-1}^{s_i} s_i! for i = 3..r, from alpha_2."""
    sv = SizeVector.of(s)
    alpha = Fraction(alpha2)
    if alpha < 1:
        raise InputError("alpha2 must be at least 1")
    for si in sv.s[2:]:
        alpha = 4 ** si * alpha ** si * factorial(si)
    return Fraction(alpha)


# -- supersaturation --------------------------------------------------------------------

def complete_partite_copy_count(part_sizes, s) -> int:
    """Copies of K_s in the complete partite graph with the given part sizes."""
    total = 0
    for order in set(permutations(s)):
        total += prod(comb(n, k) for n, k in zip(part_sizes, order))
    return total


def supersaturation_check(host: Hypergraph, sub: Hypergraph, s, alpha2=1, n=None) -> dict:
    """Compare the K_s count in ``sub`` with the supersaturation prediction.

    ``host`` is an unbalanced partite host (parts n^{a_2}, n^{a_2}, n^{a_3}, ...).
    The constant alpha_r is built from ``alpha2`` by the recursion; since the
    true base constant is not known, the output is flagged illustrative.
    """
    sv = SizeVector.of(s)
    if host.partition is None or len(host.partition) != sv.r:
        raise InputError("host must be partitioned into r parts")
    if not sub.is_subgraph_of(host):
        raise InputError("subgraph is not contained in the host")
    sizes = [len(p) for p in host.partition]
    a = sv.a_list
    if n is None:
        n = round(sizes[0] ** (1 / a[1]))
    expected = [n ** a[1]] + [n ** a[i - 1] for i in range(2, sv.r + 1)]
    if sizes != expected:
        raise InputError(f"host part sizes {sizes} do not match n={n}: {expected}")
    alpha_r = alpha_recursion(sv, alpha2)
    m = sub.e
    from .patterns import Pattern
    copies = count_copies(sub, Pattern.complete_partite(*sv.s)) if m else 0
    threshold = alpha_r * Fraction(prod(sizes), n)
    predicted = (Fraction(m) ** a[sv.r] / alpha_r
                 * prod(Fraction(x) ** (si - a[sv.r]) for x, si in zip(sizes, sv.s)))
    return {
        "n": n, "part_sizes": sizes, "m": m, "copy_count": copies,
        "alpha_r": str(alpha_r), "alpha2": str(Fraction(alpha2)),
        "threshold_bound": str(threshold), "above_threshold": m >= threshold,
        "predicted_count": str(predicted), "predicted_count_float": float(predicted),
        "illustrative": True,
    }


# -- fitting ---------------------------------------------------------------------------

@dataclass
class FitResult:
    slope: float
    intercept: float
    max_residual: float
    points: list = field(default_factory=list)

    def to_dict(self):
        return {"slope": self.slope, "intercept": self.intercept,
                "max_residual": self.max_residual, "points": [list(p) for p in self.points]}


def exponent_fit(points) -> FitResult:
    """Least-squares slope of log(host_edges / extracted) against log(delta)."""
    pts = [(float(d), float(h), float(x)) for d, h, x in points]
    if len(pts) < 3:
        raise InputError("need at least three points")
    deltas = [p[0] for p in pts]
    if len(set(deltas)) != len(deltas):
        raise InputError("delta values must be distinct")
    if any(d <= 0 or h <= 0 or x <= 0 for d, h, x in pts):
        raise InputError("delta, host edges and extracted edges must be positive")
    xs = np.log(deltas)
    ys = np.log([h / x for _, h, x in pts])
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    return FitResult(float(slope), float(intercept), float(np.max(np.abs(resid))), pts)
