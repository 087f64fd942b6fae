from itertools import combinations

from hypothesis import given, settings, strategies as st

from relturan.copies import (
    automorphism_count, canonical_form, count_copies, find_copy, is_isomorphic, list_copies,
)
from relturan.hypergraph import Hypergraph
from relturan.patterns import Pattern

from oracles import naive_copies

SMALL_PATTERNS = [
    Pattern.complete_partite(2, 2),
    Pattern.tight_cycle(3, 2),
    Pattern.tight_cycle(5, 2),
    Pattern.complete_partite(1, 3),
    Pattern.tight_cycle(4, 3),
    Pattern.tight_cycle(5, 3),
    Pattern.complete_partite(1, 1, 2),
    Pattern.complete_partite(1, 2, 2),
]


@st.composite
def small_instance(draw):
    p = draw(st.sampled_from(SMALL_PATTERNS))
    r = p.r
    n = draw(st.integers(r + 1, 7))
    pool = list(combinations(range(n), r))
    edges = draw(st.lists(st.sampled_from(pool), unique=True, max_size=12))
    return Hypergraph(r, n, edges), p


@given(small_instance())
@settings(max_examples=150, deadline=None)
def test_count_matches_subset_enumeration(inst):
    H, p = inst
    naive = naive_copies(list(H.edges), list(p.realized.edges))
    assert count_copies(H, p.realized) == len(naive)
    assert set(map(frozenset, list_copies(H, p.realized))) == set(naive)
    assert (find_copy(H, p.realized) is None) == (not naive)


def test_witness_is_an_embedding():
    H = Hypergraph(2, 5, combinations(range(5), 2))
    F = Pattern.tight_cycle(4, 2).realized
    phi = find_copy(H, F)
    assert len(set(phi.values())) == F.n
    for e in F.edges:
        assert tuple(sorted(phi[v] for v in e)) in H.edge_set


def test_automorphism_counts():
    assert automorphism_count(Pattern.complete_partite(2, 2).realized) == 8
    assert automorphism_count(Pattern.complete_partite(2, 3).realized) == 12
    assert automorphism_count(Pattern.complete_partite(2, 2, 2).realized) == 48
    assert automorphism_count(Pattern.tight_cycle(6, 3).realized) == 12
    assert automorphism_count(Pattern.tight_cycle(4, 3).realized) == 24  # K_4^3


def test_known_counts():
    K5 = Hypergraph(2, 5, combinations(range(5), 2))
    assert count_copies(K5, Pattern.tight_cycle(3, 2).realized) == 10
    assert count_copies(K5, Pattern.tight_cycle(4, 2).realized) == 15
    K33 = Hypergraph(2, 6, [(i, j) for i in range(3) for j in range(3, 6)])
    assert count_copies(K33, Pattern.complete_partite(2, 2).realized) == 9


@st.composite
def relabelled(draw):
    r = draw(st.sampled_from([2, 3]))
    n = draw(st.integers(r, 7))
    pool = list(combinations(range(n), r))
    edges = draw(st.lists(st.sampled_from(pool), unique=True, max_size=10))
    perm = draw(st.permutations(range(n)))
    H = Hypergraph(r, n, edges)
    return H, Hypergraph(r, n, [[perm[v] for v in e] for e in edges])


@given(relabelled())
@settings(max_examples=150, deadline=None)
def test_canonical_form_is_invariant(pair):
    A, B = pair
    assert canonical_form(A) == canonical_form(B)
    assert is_isomorphic(A, B)


def test_canonical_form_separates():
    C6 = Pattern.tight_cycle(6, 2).realized
    two_triangles = Hypergraph(2, 6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert canonical_form(C6) != canonical_form(two_triangles)
    # both 3-regular on 6 vertices, so colour refinement alone cannot separate them
    assert not is_isomorphic(Pattern.complete_partite(3, 3).realized,
                             Hypergraph(2, 6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3),
                                               (0, 3), (1, 4), (2, 5)]))
