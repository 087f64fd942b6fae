"""Finite fields GF(p^k) as lookup tables.

Elements are the integers ``0..q-1``; for ``k > 1`` an element's base-p
digits are the coefficients of a polynomial reduced modulo a fixed monic
irreducible polynomial (the lexicographically first one of degree k).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from .errors import InputError

MAX_ORDER = 256


def prime_power(q: int):
    """Return ``(p, k)`` with ``q = p**k``, or None if q is not a prime power."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, m = 0, q
    while m % p == 0:
        m //= p
        k += 1
    return (p, k) if m == 1 else None


def is_prime(q: int) -> bool:
    pk = prime_power(q)
    return pk is not None and pk[1] == 1


def prime_powers(lo: int, hi: int):
    return [q for q in range(max(lo, 2), hi + 1) if prime_power(q)]


def _polymod(a, m, p):
    a = list(a)
    while len(a) >= len(m):
        c = a[-1]
        if c:
            shift = len(a) - len(m)
            for i, mc in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mc) % p
        a.pop()
    return a


def _irreducible(p, k):
    # monic polynomials, coefficients low degree first
    for coeffs in product(range(p), repeat=k):
        poly = list(coeffs) + [1]
        if coeffs[0] == 0:
            continue
        reducible = False
        for d in range(1, k // 2 + 1):
            for dc in product(range(p), repeat=d):
                div = list(dc) + [1]
                if not any(_polymod(poly, div, p)):
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            return poly
    raise AssertionError("no irreducible polynomial found")


class GF:
    """Addition and multiplication tables for the field of order q."""

    def __init__(self, q: int):
        pk = prime_power(q)
        if pk is None:
            raise InputError(f"{q} is not a prime power")
        if q > MAX_ORDER:
            raise InputError(f"field order {q} exceeds supported maximum {MAX_ORDER}")
        self.q = q
        self.p, self.k = pk
        p, k = pk
        if k == 1:
            x = np.arange(q)
            self.add = (x[:, None] + x[None, :]) % q
            self.mul = (x[:, None] * x[None, :]) % q
        else:
            mod = _irreducible(p, k)
            digits = [[(a // p ** i) % p for i in range(k)] for a in range(q)]

            def enc(ds):
                return sum(int(d) * p ** i for i, d in enumerate(ds))

            self.add = np.array([[enc([(x + y) % p for x, y in zip(da, db)]) for db in digits]
                                 for da in digits])
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(a, q):
                    prodc = [0] * (2 * k - 1)
                    for i, x in enumerate(digits[a]):
                        if x:
                            for j, y in enumerate(digits[b]):
                                prodc[i + j] = (prodc[i + j] + x * y) % p
                    red = _polymod(prodc, mod, p)
                    red += [0] * (k - len(red))
                    mul[a, b] = mul[b, a] = enc(red)
            self.mul = mul
        self.add = np.asarray(self.add, dtype=np.int64)
        self.mul = np.asarray(self.mul, dtype=np.int64)
        self.neg = np.argmin(self.add, axis=1)
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv[a] = int(np.flatnonzero(self.mul[a] == 1)[0])

    def dot(self, A, B):
        """Field inner products of the rows of A with the rows of B (matrix)."""
        A = np.asarray(A)
        B = np.asarray(B)
        out = self.mul[A[:, 0][:, None], B[:, 0][None, :]]
        for j in range(1, A.shape[1]):
            out = self.add[out, self.mul[A[:, j][:, None], B[:, j][None, :]]]
        return out

    def normalized_points(self, dim: int) -> np.ndarray:
        """Projective points of PG(dim-1, q): vectors whose first nonzero entry is 1,
        in lexicographic order."""
        pts = [v for v in product(range(self.q), repeat=dim)
               if any(v) and next(x for x in v if x) == 1]
        return np.array(pts, dtype=np.int64)


@lru_cache(maxsize=64)
def field(q: int) -> GF:
    return GF(q)
