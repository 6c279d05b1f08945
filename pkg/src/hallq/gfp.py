"""Exact linear algebra over prime fields F_p.

Matrices are numpy int64 arrays with entries in [0, p).  The row-reduction
kernel comes from the compiled extension when available; set
HALLQ_PURE_PYTHON=1 to force the numpy fallback.
"""

import itertools
import os
from functools import lru_cache

import numpy as np

from .config import GL_ORBIT_LIMIT, SUPPORTED_PRIMES
from .errors import CapacityError, ValidationError

if os.environ.get("HALLQ_PURE_PYTHON"):
    from . import _gfp_py as _backend
else:
    try:
        from . import _gfp_cy as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _gfp_py as _backend

BACKEND = _backend.BACKEND


def check_prime(p: int) -> None:
    if p not in SUPPORTED_PRIMES:
        raise ValidationError(f"unsupported prime {p}; supported: {SUPPORTED_PRIMES}")


def asmat(entries, p: int) -> np.ndarray:
    """Normalize to a C-contiguous int64 matrix with entries reduced mod p."""
    a = np.ascontiguousarray(np.asarray(entries, dtype=np.int64) % p)
    if a.ndim != 2:
        raise ValidationError(f"expected a matrix, got ndim={a.ndim}")
    return a


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def row_reduce(m, p: int):
    """Unique RREF of `m` together with its rank."""
    a = asmat(m, p).copy()
    pivots = _backend.rref_inplace(a, p)
    return a, len(pivots)


def rref_with_pivots(m, p: int):
    a = asmat(m, p).copy()
    pivots = _backend.rref_inplace(a, p)
    return a, pivots


def rank(m, p: int) -> int:
    return row_reduce(m, p)[1]


def batch_full_rank(mats: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask: which square matrices in the stack are invertible."""
    k, n, n2 = mats.shape
    if n != n2:
        raise ValidationError("batch_full_rank expects square matrices")
    if n == 0:
        return np.ones(k, dtype=bool)
    ranks = _backend.batch_rank(np.ascontiguousarray(mats, dtype=np.int64), p)
    return ranks == n


def nullspace(m, p: int) -> np.ndarray:
    """Basis of the right null space, one vector per row, in RREF."""
    a, pivots = rref_with_pivots(m, p)
    n = a.shape[1]
    piv_set = set(pivots)
    free = [j for j in range(n) if j not in piv_set]
    if not free:
        return np.zeros((0, n), dtype=np.int64)
    basis = np.zeros((len(free), n), dtype=np.int64)
    for bi, f in enumerate(free):
        basis[bi, f] = 1
        for row, pc in enumerate(pivots):
            basis[bi, pc] = (-int(a[row, f])) % p
    out, _ = row_reduce(basis, p)
    return out


def solve(a, b, p: int):
    """One solution x of a @ x = b (vector), or None when inconsistent."""
    a = asmat(a, p)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1) % p
    aug = np.concatenate([a, b], axis=1)
    r, pivots = rref_with_pivots(aug, p)
    n = a.shape[1]
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = r[row, n]
    return x


def inverse(m, p: int) -> np.ndarray:
    """Inverse of a square matrix; raises ValidationError when singular."""
    a = asmat(m, p)
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValidationError("inverse of a non-square matrix")
    aug = np.concatenate([a, eye(n)], axis=1)
    r, pivots = rref_with_pivots(aug, p)
    if pivots != list(range(n)):
        raise ValidationError("matrix is singular")
    return np.ascontiguousarray(r[:, n:])


def kernel_basis(m, p: int) -> "Subspace":
    """Null space of `m` as a canonical subspace of F_p^cols."""
    a = asmat(m, p)
    return Subspace(a.shape[1], nullspace(a, p), p)


class Subspace:
    """A subspace of F_p^n, canonically represented by an RREF basis (rows)."""

    __slots__ = ("ambient_dim", "basis", "p", "_key")

    def __init__(self, ambient_dim: int, basis, p: int, reduced: bool = True):
        b = asmat(basis, p) if not isinstance(basis, np.ndarray) else basis % p
        b = np.ascontiguousarray(b, dtype=np.int64)
        if b.ndim != 2 or b.shape[1] != ambient_dim:
            raise ValidationError("basis shape does not match ambient dimension")
        if not reduced:
            b, r = row_reduce(b, p)
            b = b[:r]
        self.ambient_dim = ambient_dim
        self.basis = b
        self.p = p
        self._key = (ambient_dim, p, b.astype(np.uint8).tobytes())

    @classmethod
    def from_vectors(cls, vectors, n: int, p: int) -> "Subspace":
        if len(vectors) == 0:
            return cls(n, np.zeros((0, n), dtype=np.int64), p)
        stacked = np.vstack([np.asarray(v, dtype=np.int64).reshape(1, -1) for v in vectors])
        r, rk = row_reduce(stacked, p)
        return cls(n, r[:rk], p)

    @classmethod
    def full(cls, n: int, p: int) -> "Subspace":
        return cls(n, eye(n), p)

    @classmethod
    def zero(cls, n: int, p: int) -> "Subspace":
        return cls(n, np.zeros((0, n), dtype=np.int64), p)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def pivots(self):
        return [int(np.argmax(row != 0)) for row in self.basis]

    def contains_vector(self, v) -> bool:
        if self.dim == 0:
            return not np.any(np.asarray(v) % self.p)
        stacked = np.vstack([self.basis, np.asarray(v, dtype=np.int64).reshape(1, -1)])
        return rank(stacked, self.p) == self.dim

    def contains_space(self, other: "Subspace") -> bool:
        if other.dim == 0:
            return True
        stacked = np.vstack([self.basis, other.basis])
        return rank(stacked, self.p) == self.dim

    def coordinates(self, v) -> np.ndarray:
        """Coordinates of v in the RREF basis (entries at pivot positions)."""
        v = np.asarray(v, dtype=np.int64) % self.p
        return v[self.pivots()] if self.dim else np.zeros(0, dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.p})"


def gaussian_binomial(n: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of F_p^n, by the product formula."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (k - i) - 1
    return num // den


def enumerate_subspaces(n: int, k: int, p: int, cap: int = 10**6):
    """All k-dimensional subspaces of F_p^n, canonical RREF, lexicographic order."""
    check_prime(p)
    if not 0 <= k <= n:
        raise ValidationError(f"need 0 <= k <= n, got k={k}, n={n}")
    count = gaussian_binomial(n, k, p)
    if count > cap:
        raise CapacityError(f"{count} subspaces exceeds cap {cap}", size=count, cap=cap)
    if k == 0:
        return [Subspace.zero(n, p)]
    out = []
    for pivots in itertools.combinations(range(n), k):
        free_positions = [
            (i, j)
            for i in range(k)
            for j in range(pivots[i] + 1, n)
            if j not in pivots
        ]
        base = np.zeros((k, n), dtype=np.int64)
        for i, c in enumerate(pivots):
            base[i, c] = 1
        for filling in itertools.product(range(p), repeat=len(free_positions)):
            b = base.copy()
            for (i, j), val in zip(free_positions, filling):
                b[i, j] = val
            out.append(Subspace(n, b, p))
    out.sort(key=lambda s: (s.dim, s.basis.astype(np.uint8).tobytes()))
    return out


def all_subspaces(n: int, p: int, cap: int = 10**6):
    """All subspaces of F_p^n of every dimension, grouped 0..n, flat list."""
    total = sum(gaussian_binomial(n, k, p) for k in range(n + 1))
    if total > cap:
        raise CapacityError(f"{total} subspaces exceeds cap {cap}", size=total, cap=cap)
    out = []
    for k in range(n + 1):
        out.extend(enumerate_subspaces(n, k, p, cap=cap))
    return out


@lru_cache(maxsize=None)
def gl_order(n: int, p: int) -> int:
    order = 1
    for i in range(n):
        order *= p**n - p**i
    return order


@lru_cache(maxsize=None)
def gl_group(n: int, p: int):
    """All invertible n x n matrices over F_p with their inverses.

    Returns (G, Ginv) stacked as (|GL|, n, n) arrays.  Guarded by
    GL_ORBIT_LIMIT since |GL| grows like p^(n^2).
    """
    order = gl_order(n, p)
    if order > GL_ORBIT_LIMIT:
        raise CapacityError(f"|GL({n},{p})| = {order} exceeds orbit limit",
                            size=order, cap=GL_ORBIT_LIMIT)
    if n == 0:
        g = np.zeros((1, 0, 0), dtype=np.int64)
        return g, g.copy()
    total = p ** (n * n)
    mats = np.array(
        [np.array(digits, dtype=np.int64).reshape(n, n)
         for digits in itertools.product(range(p), repeat=n * n)],
        dtype=np.int64,
    )
    invertible = batch_full_rank(mats, p)
    g = np.ascontiguousarray(mats[invertible])
    ginv = np.stack([inverse(m, p) for m in g])
    assert g.shape[0] == order, (g.shape[0], order, total)
    return g, ginv
