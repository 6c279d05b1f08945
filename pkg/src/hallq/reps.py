"""Representations of a quiver over F_p.

Covers Hom/End spaces, isomorphism testing, Fitting/Krull-Schmidt
decomposition, Loewy data (radical/socle/top), nilpotency, uniseriality,
projectives/injectives on acyclic quivers, and bounded enumeration of
isomorphism classes with exact deduplication.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import gfp
from .config import DEFAULT_ENUMERATION_CAP, DEFAULT_SCAN_CAP, GL_ORBIT_LIMIT
from .errors import CapacityError, UnsupportedCategoryError, ValidationError
from .gfp import Subspace
from .quiver import Quiver

_SCAN_CHUNK = 4096


class Representation:
    """A vector space per vertex and a matrix per arrow, over F_p.

    Immutable after construction; matrix for arrow a has shape
    dims[target] x dims[source].
    """

    __slots__ = ("quiver", "p", "dims", "maps", "_key", "_total")

    def __init__(self, quiver: Quiver, p: int, dims, maps):
        gfp.check_prime(p)
        self.quiver = quiver
        self.p = p
        self.dims = {v: int(dims.get(v, 0)) for v in quiver.vertices}
        if any(d < 0 for d in self.dims.values()):
            raise ValidationError("negative dimension")
        mm = {}
        for a in quiver.arrows:
            shape = (self.dims[a.tgt], self.dims[a.src])
            m = maps.get(a.label)
            if m is None or 0 in shape:
                # empty matrices round-trip through JSON as [] or [[], ...]
                m = gfp.zeros(*shape)
            else:
                m = gfp.asmat(m, p)
                if m.shape != shape:
                    raise ValidationError(
                        f"arrow {a.label!r}: expected shape {shape}, got {m.shape}")
            m.setflags(write=False)
            mm[a.label] = m
        self.maps = mm
        self._key = None
        self._total = sum(self.dims.values())

    @property
    def total_dim(self) -> int:
        return self._total

    def dim_vector(self) -> tuple:
        return tuple(self.dims[v] for v in self.quiver.vertices)

    def map(self, label: str) -> np.ndarray:
        return self.maps[label]

    def cache_key(self) -> tuple:
        if self._key is None:
            blob = b"".join(self.maps[a.label].astype(np.uint8).tobytes()
                            for a in self.quiver.arrows)
            self._key = (self.quiver.canonical_bytes(), self.p,
                         self.dim_vector(), blob)
        return self._key

    def __eq__(self, other):
        return (isinstance(other, Representation)
                and self.cache_key() == other.cache_key())

    def __hash__(self):
        return hash(self.cache_key())

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.name,
            "p": self.p,
            "dims": {v: self.dims[v] for v in self.quiver.vertices},
            "maps": {a.label: self.maps[a.label].tolist() for a in self.quiver.arrows},
        }

    @classmethod
    def from_json(cls, data: dict, quiver: Quiver) -> "Representation":
        if data.get("quiver") not in (None, quiver.name):
            raise ValidationError(
                f"module is over quiver {data['quiver']!r}, expected {quiver.name!r}")
        return cls(quiver, int(data["p"]), data["dims"], data["maps"])

    def __repr__(self):
        return f"Rep(dims={self.dim_vector()}, p={self.p}, q={self.quiver.name})"


def zero_rep(q: Quiver, p: int) -> Representation:
    return Representation(q, p, {}, {})


def simple(q: Quiver, p: int, vertex: str) -> Representation:
    return Representation(q, p, {vertex: 1}, {})


def direct_sum(ms) -> Representation:
    """Blockwise direct sum; dims add, arrow matrices block-diagonal."""
    ms = list(ms)
    if not ms:
        raise ValidationError("direct_sum of an empty list needs a quiver; "
                              "use zero_rep")
    q, p = ms[0].quiver, ms[0].p
    for m in ms[1:]:
        if m.quiver != q or m.p != p:
            raise ValidationError("direct_sum: quiver/field mismatch")
    dims = {v: sum(m.dims[v] for m in ms) for v in q.vertices}
    maps = {}
    for a in q.arrows:
        blocks = [m.maps[a.label] for m in ms]
        out = gfp.zeros(dims[a.tgt], dims[a.src])
        r = c = 0
        for b in blocks:
            out[r:r + b.shape[0], c:c + b.shape[1]] = b
            r += b.shape[0]
            c += b.shape[1]
        maps[a.label] = out
    return Representation(q, p, dims, maps)


def dual(m: Representation, opposite_quiver: Quiver | None = None) -> Representation:
    """Transport to the opposite quiver by transposing every arrow matrix."""
    qop = opposite_quiver if opposite_quiver is not None else m.quiver.opposite()
    return Representation(qop, m.p, m.dims,
                          {lab: mat.T for lab, mat in m.maps.items()})


def extend_by_zero(m: Representation, big: Quiver) -> Representation:
    """Regard a representation of a subquiver as one of `big` (zeros elsewhere)."""
    sub_labels = {a.label for a in m.quiver.arrows}
    for v in m.quiver.vertices:
        if v not in big.vertices:
            raise ValidationError(f"vertex {v!r} not in the larger quiver")
    return Representation(big, m.p, dict(m.dims),
                          {lab: m.maps[lab] for lab in sub_labels})


# ---------------------------------------------------------------------------
# sub/quotient machinery


@dataclass
class SubQuot:
    """A subrepresentation with its inclusion and the induced quotient."""

    sub: Representation
    inclusions: dict          # vertex -> matrix (ambient_dim x sub_dim), columns = basis
    quot: Representation
    projections: dict         # vertex -> matrix (quot_dim x ambient_dim)
    subspaces: dict           # vertex -> Subspace


def _closed_under_arrows(m: Representation, spaces: dict) -> bool:
    for a in m.quiver.arrows:
        s = spaces[a.src]
        if s.dim == 0:
            continue
        img = gfp.matmul(m.maps[a.label], s.basis.T, m.p).T
        t = spaces[a.tgt]
        stacked = np.vstack([t.basis, img]) if t.dim else img
        if gfp.rank(stacked, m.p) != t.dim:
            return False
    return True


def sub_quotient(m: Representation, spaces: dict) -> SubQuot:
    """Restrict `m` to an arrow-closed family of subspaces; build the quotient too."""
    p = m.p
    q = m.quiver
    sub_dims, quot_dims, incl, proj = {}, {}, {}, {}
    for v in q.vertices:
        s = spaces[v]
        sub_dims[v] = s.dim
        quot_dims[v] = m.dims[v] - s.dim
        incl[v] = np.ascontiguousarray(s.basis.T)
        pivots = set(s.pivots())
        nonpiv = [j for j in range(m.dims[v]) if j not in pivots]
        # projection: kill the subspace part, read off non-pivot coordinates
        pr = gfp.zeros(len(nonpiv), m.dims[v])
        for i, j in enumerate(nonpiv):
            pr[i, j] = 1
        if s.dim:
            # first subtract pivot-coordinate multiples of the basis rows:
            # x - sum(x[pc] * basis_row) vanishes on all pivot positions
            corr2 = gfp.eye(m.dims[v])
            for row, pc in enumerate(s.pivots()):
                corr2[:, pc] = (corr2[:, pc] - s.basis[row]) % p
            pr = gfp.matmul(pr, corr2, p)
        proj[v] = pr
    sub_maps, quot_maps = {}, {}
    for a in q.arrows:
        s_src, s_tgt = spaces[a.src], spaces[a.tgt]
        img = gfp.matmul(m.maps[a.label], incl[a.src], p)   # ambient_tgt x sub_src
        # coordinates in the RREF basis of the target = rows at pivot positions
        sub_maps[a.label] = img[s_tgt.pivots(), :] if s_tgt.dim else gfp.zeros(0, s_src.dim)
        quot_maps[a.label] = gfp.matmul(proj[a.tgt], m.maps[a.label], p)
        # the quotient map factors through the projection on the source side
        lift = gfp.zeros(m.dims[a.src], quot_dims[a.src])
        pivots = set(s_src.pivots())
        nonpiv = [j for j in range(m.dims[a.src]) if j not in pivots]
        for i, j in enumerate(nonpiv):
            lift[j, i] = 1
        quot_maps[a.label] = gfp.matmul(quot_maps[a.label], lift, p)
    sub = Representation(q, p, sub_dims, sub_maps)
    quot = Representation(q, p, quot_dims, quot_maps)
    return SubQuot(sub, incl, quot, proj, dict(spaces))


# ---------------------------------------------------------------------------
# Hom spaces


@dataclass
class HomSpace:
    source: Representation
    target: Representation
    basis: list               # list of dict vertex -> matrix (tgt_dim x src_dim)

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _hom_system(m: Representation, n: Representation):
    """Matrix of the intertwiner equations phi_t(a) M_a - N_a phi_s(a) = 0.

    Unknowns: entries of phi_v (n.dims[v] x m.dims[v]) in vertex order,
    row-major.  Returns (system matrix, offsets, unknown count).
    """
    q, p = m.quiver, m.p
    offsets, pos = {}, 0
    for v in q.vertices:
        offsets[v] = pos
        pos += n.dims[v] * m.dims[v]
    nunk = pos
    rows = []
    for a in q.arrows:
        src, tgt = a.src, a.tgt
        ma, na = m.maps[a.label], n.maps[a.label]
        # equation block: n.dims[tgt] x m.dims[src] equations
        for i in range(n.dims[tgt]):
            for j in range(m.dims[src]):
                row = np.zeros(nunk, dtype=np.int64)
                # (phi_tgt @ ma)[i, j] = sum_k phi_tgt[i, k] * ma[k, j]
                base = offsets[tgt]
                mt = m.dims[tgt]
                for k in range(mt):
                    row[base + i * mt + k] = ma[k, j]
                # (na @ phi_src)[i, j] = sum_k na[i, k] * phi_src[k, j]
                base = offsets[src]
                ms = m.dims[src]
                for k in range(n.dims[src]):
                    row[base + k * ms + j] = (row[base + k * ms + j] - na[i, k]) % p
                rows.append(row)
    sys = np.vstack(rows) if rows else np.zeros((0, nunk), dtype=np.int64)
    return sys % p, offsets, nunk


def _unflatten(vec: np.ndarray, m: Representation, n: Representation, offsets) -> dict:
    out = {}
    for v in m.quiver.vertices:
        r, c = n.dims[v], m.dims[v]
        base = offsets[v]
        out[v] = np.ascontiguousarray(vec[base:base + r * c].reshape(r, c))
    return out


def hom_space(m: Representation, n: Representation) -> HomSpace:
    """Basis of Hom(m, n) as vertex-indexed matrix tuples."""
    if m.quiver != n.quiver or m.p != n.p:
        raise ValidationError("hom_space: quiver/field mismatch")
    sys, offsets, nunk = _hom_system(m, n)
    if nunk == 0:
        return HomSpace(m, n, [])
    null = gfp.nullspace(sys, m.p)
    basis = [_unflatten(vec, m, n, offsets) for vec in null]
    return HomSpace(m, n, basis)


def hom_dim(m: Representation, n: Representation) -> int:
    sys, _, nunk = _hom_system(m, n)
    return nunk - gfp.rank(sys, m.p)


def end_basis(m: Representation) -> list:
    return hom_space(m, m).basis


def apply_hom(phi: dict, psi: dict, p: int) -> dict:
    """Compose two vertex-indexed maps: (phi after psi)."""
    return {v: gfp.matmul(phi[v], psi[v], p) for v in phi}


def _coeff_chunks(d: int, p: int, skip_zero: bool = True, chunk: int = _SCAN_CHUNK):
    """Yield coefficient rows (k, d) covering all of F_p^d in lex order."""
    total = p ** d
    start = 1 if skip_zero else 0
    powers = p ** np.arange(d, dtype=np.int64)
    for lo in range(start, total, chunk):
        hi = min(lo + chunk, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        yield (idx[:, None] // powers[None, :]) % p


def _find_invertible_combo(basis: list, m: Representation, n: Representation,
                           cap: int = DEFAULT_SCAN_CAP):
    """Search Hom(m, n) for an element invertible at every vertex.

    Exhaustive when p^dim <= cap; returns the element or None (definitive).
    Raises CapacityError beyond the cap.
    """
    p = m.p
    d = len(basis)
    if d == 0:
        return None
    if p ** d > cap:
        raise CapacityError(f"iso search over p^{d} = {p**d} elements exceeds cap",
                            size=p**d, cap=cap)
    verts = [v for v in m.quiver.vertices if m.dims[v] > 0]
    stacks = {v: np.stack([b[v] for b in basis]) for v in verts}
    for coeffs in _coeff_chunks(d, p):
        ok = np.ones(coeffs.shape[0], dtype=bool)
        for v in verts:
            mats = np.tensordot(coeffs, stacks[v], axes=(1, 0)) % p
            ok &= gfp.batch_full_rank(mats, p)
            if not ok.any():
                break
        if ok.any():
            sel = int(np.nonzero(ok)[0][0])
            c = coeffs[sel]
            return {v: np.tensordot(c, stacks[v], axes=(0, 0)) % p for v in verts} | {
                v: gfp.zeros(n.dims[v], m.dims[v])
                for v in m.quiver.vertices if m.dims[v] == 0
            }
    return None


# ---------------------------------------------------------------------------
# invariant fingerprints (cheap iso invariants, used for bucketing)


def _path_words(q: Quiver, max_len: int = 3):
    """Composable arrow-label sequences up to the given length."""
    words = [[a.label] for a in q.arrows]
    out = list(words)
    by_src = {}
    for a in q.arrows:
        by_src.setdefault(a.src, []).append(a)
    arrow = {a.label: a for a in q.arrows}
    for _ in range(max_len - 1):
        nxt = []
        for w in words:
            head = arrow[w[-1]]
            for a in by_src.get(head.tgt, []):
                nxt.append(w + [a.label])
        out.extend(nxt)
        words = nxt
    return out


_WORD_CACHE: dict = {}


def _words_for(q: Quiver, max_len: int = 3):
    key = (q.canonical_bytes(), max_len)
    if key not in _WORD_CACHE:
        _WORD_CACHE[key] = _path_words(q, max_len)
    return _WORD_CACHE[key]


def fingerprint(m: Representation) -> tuple:
    """Iso-invariant tuple: dim vector, path-word rank profile, dim End."""
    key = ("fp",) + m.cache_key()
    cached = _FP_CACHE.get(key)
    if cached is not None:
        return cached
    q, p = m.quiver, m.p
    ranks = []
    for w in _words_for(q):
        mat = m.maps[w[0]]
        for lab in w[1:]:
            mat = gfp.matmul(m.maps[lab], mat, p)
        ranks.append(int(gfp.rank(mat, p)))
    fp = (m.dim_vector(), tuple(ranks), hom_dim(m, m))
    _FP_CACHE[key] = fp
    return fp


_FP_CACHE: dict = {}


# ---------------------------------------------------------------------------
# isomorphism testing


def is_isomorphic(m: Representation, n: Representation,
                  cap: int = DEFAULT_SCAN_CAP) -> bool:
    """Decide whether an invertible intertwiner exists."""
    if m.quiver != n.quiver or m.p != n.p:
        raise ValidationError("is_isomorphic: quiver/field mismatch")
    if m.dim_vector() != n.dim_vector():
        return False
    if m.cache_key() == n.cache_key():
        return True
    if m.total_dim == 0:
        return True
    if fingerprint(m) != fingerprint(n):
        return False
    hom = hom_space(m, n)
    d = hom.dimension
    if d == 0:
        return False
    p = m.p
    if p ** d <= min(cap, 1 << 16):
        return _find_invertible_combo(hom.basis, m, n, cap=cap) is not None
    # large Hom space: fall back to Krull-Schmidt summand matching
    dm = decompose(m, cap=cap)
    dn = decompose(n, cap=cap)
    return _same_summand_multiset(dm, dn, cap=cap)


def _same_summand_multiset(dm: "DecompositionReport", dn: "DecompositionReport",
                           cap: int) -> bool:
    if dm.s != dn.s:
        return False
    remaining = [(rep, mult) for rep, mult in dn.summands]
    for rep_m, mult_m in dm.summands:
        found = False
        for i, (rep_n, mult_n) in enumerate(remaining):
            if mult_n == mult_m and rep_m.dim_vector() == rep_n.dim_vector() \
                    and is_isomorphic(rep_m, rep_n, cap=cap):
                remaining.pop(i)
                found = True
                break
        if not found:
            return False
    return not remaining


# ---------------------------------------------------------------------------
# Fitting / Krull-Schmidt


def _endo_power(phi: dict, k: int, p: int) -> dict:
    out = {}
    for v, mat in phi.items():
        n = mat.shape[0]
        if n == 0:
            out[v] = mat
            continue
        acc = gfp.eye(n)
        base = mat.copy()
        e = k
        while e > 0:
            if e & 1:
                acc = gfp.matmul(acc, base, p)
            base = gfp.matmul(base, base, p)
            e >>= 1
        out[v] = acc
    return out


def _is_nilpotent_endo(phi: dict, total: int, p: int) -> bool:
    power = _endo_power(phi, max(total, 1), p)
    return all(not mat.any() for mat in power.values())


def _is_invertible_endo(phi: dict, p: int) -> bool:
    for mat in phi.values():
        n = mat.shape[0]
        if n and gfp.rank(mat, p) != n:
            return False
    return True


def fitting_split(m: Representation, phi: dict):
    """Fitting decomposition along an endomorphism.

    Returns (kernel part, image part) of phi^total_dim when both are nonzero,
    else None.
    """
    p = m.p
    total = m.total_dim
    if total == 0:
        return None
    power = _endo_power(phi, total, p)
    ker_spaces, im_spaces = {}, {}
    kdim = idim = 0
    for v in m.quiver.vertices:
        mat = power[v]
        ker_spaces[v] = gfp.kernel_basis(mat, p) if mat.shape[1] else Subspace.zero(0, p)
        im_spaces[v] = Subspace(mat.shape[0], mat.T, p, reduced=False)
        kdim += ker_spaces[v].dim
        idim += im_spaces[v].dim
    if kdim == 0 or idim == 0:
        return None
    ker_part = sub_quotient(m, ker_spaces).sub
    im_part = sub_quotient(m, im_spaces).sub
    return ker_part, im_part


@dataclass
class DecompositionReport:
    summands: list            # list of (indecomposable representative, multiplicity)
    s: int                    # number of indecomposable direct summands

    def multiset(self):
        return self.summands


_DECOMP_CACHE: dict = {}


def _indec_factors(m: Representation, cap: int) -> list:
    """Recursive Fitting splitting; returns the list of indecomposable pieces."""
    if m.total_dim == 0:
        return []
    basis = end_basis(m)
    for phi in basis:
        split = fitting_split(m, phi)
        if split is not None:
            a, b = split
            return _indec_factors(a, cap) + _indec_factors(b, cap)
    # No basis element splits; certify indecomposability by exhaustive scan
    # of End(m): every element must be nilpotent or invertible.
    p = m.p
    d = len(basis)
    if p ** d > cap:
        raise CapacityError(
            f"indecomposability scan over p^{d} elements exceeds cap {cap}",
            size=p**d, cap=cap)
    total = m.total_dim
    verts = [v for v in m.quiver.vertices if m.dims[v] > 0]
    stacks = {v: np.stack([b[v] for b in basis]) for v in verts}
    for coeffs in _coeff_chunks(d, p):
        mats = {v: np.tensordot(coeffs, stacks[v], axes=(1, 0)) % p for v in verts}
        invertible = np.ones(coeffs.shape[0], dtype=bool)
        for v in verts:
            invertible &= gfp.batch_full_rank(mats[v], p)
        # batched nilpotency: square ceil(log2(total))+1 times
        nil = {v: mats[v] for v in verts}
        steps = max(1, int(np.ceil(np.log2(max(total, 2)))) + 1)
        for _ in range(steps):
            nil = {v: np.matmul(nil[v], nil[v]) % p for v in verts}
        nilpotent = np.ones(coeffs.shape[0], dtype=bool)
        for v in verts:
            nilpotent &= ~nil[v].reshape(coeffs.shape[0], -1).any(axis=1)
        bad = ~(invertible | nilpotent)
        if bad.any():
            sel = int(np.nonzero(bad)[0][0])
            phi = {v: np.ascontiguousarray(mats[v][sel]) for v in verts}
            for v in m.quiver.vertices:
                if m.dims[v] == 0:
                    phi[v] = gfp.zeros(0, 0)
            split = fitting_split(m, phi)
            assert split is not None, "non-unit non-nilpotent endomorphism must split"
            a, b = split
            return _indec_factors(a, cap) + _indec_factors(b, cap)
    return [m]


def decompose(m: Representation, cap: int = DEFAULT_SCAN_CAP) -> DecompositionReport:
    """Full Krull-Schmidt decomposition with certified-indecomposable factors."""
    key = m.cache_key()
    cached = _DECOMP_CACHE.get(key)
    if cached is not None:
        return cached
    factors = _indec_factors(m, cap)
    factors.sort(key=lambda r: (r.total_dim, r.dim_vector(), r.cache_key()[3]))
    grouped: list = []
    for f in factors:
        for i, (rep, mult) in enumerate(grouped):
            if rep.dim_vector() == f.dim_vector() and is_isomorphic(rep, f, cap=cap):
                grouped[i] = (rep, mult + 1)
                break
        else:
            grouped.append((f, 1))
    report = DecompositionReport(grouped, len(factors))
    _DECOMP_CACHE[key] = report
    return report


def s_of(m: Representation, cap: int = DEFAULT_SCAN_CAP) -> int:
    """Number of indecomposable direct summands."""
    return decompose(m, cap=cap).s


# ---------------------------------------------------------------------------
# nilpotency, Loewy structure


def _arrow_block_ops(m: Representation):
    """Each arrow as an operator on the total space (block (tgt, src))."""
    q = m.quiver
    total = m.total_dim
    offs, pos = {}, 0
    for v in q.vertices:
        offs[v] = pos
        pos += m.dims[v]
    ops = []
    for a in q.arrows:
        op = gfp.zeros(total, total)
        mat = m.maps[a.label]
        op[offs[a.tgt]:offs[a.tgt] + m.dims[a.tgt],
           offs[a.src]:offs[a.src] + m.dims[a.src]] = mat
        ops.append(op)
    return ops


def is_nilpotent(m: Representation) -> bool:
    """True iff every path of length >= total_dim acts as zero.

    Checked via the span of operator words in the arrow maps, which is exact
    even with parallel arrows or several loops.
    """
    total = m.total_dim
    if total == 0:
        return True
    ops = [op for op in _arrow_block_ops(m) if op.any()]
    if not ops:
        return True
    p = m.p
    layer = [op for op in ops]
    for _ in range(total):
        stacked = np.vstack([w.reshape(1, -1) for w in layer])
        red, rk = gfp.row_reduce(stacked, p)
        if rk == 0:
            return True
        layer = []
        for row in red[:rk]:
            w = row.reshape(total, total)
            for op in ops:
                prod = gfp.matmul(w, op, p)
                if prod.any():
                    layer.append(prod)
        if not layer:
            return True
    return False


def _require_loewy_ok(m: Representation):
    if not m.quiver.is_acyclic() and not is_nilpotent(m):
        raise UnsupportedCategoryError(
            "radical/socle need an acyclic quiver or a nilpotent representation")


@dataclass
class LoewyData:
    radical: Representation
    radical_inclusion: dict
    socle: Representation
    socle_inclusion: dict
    top: Representation
    top_projection: dict


def radical_spaces(m: Representation) -> dict:
    q, p = m.quiver, m.p
    out = {}
    for v in q.vertices:
        incoming = [m.maps[a.label].T for a in q.arrows_into(v)]
        if incoming:
            stacked = np.vstack(incoming)
            out[v] = Subspace(m.dims[v], stacked, p, reduced=False)
        else:
            out[v] = Subspace.zero(m.dims[v], p)
    return out


def socle_spaces(m: Representation) -> dict:
    q, p = m.quiver, m.p
    out = {}
    for v in q.vertices:
        outgoing = [m.maps[a.label] for a in q.arrows_from(v)]
        if outgoing:
            stacked = np.vstack(outgoing)
            out[v] = gfp.kernel_basis(stacked, p)
        else:
            out[v] = Subspace.full(m.dims[v], p)
    return out


def loewy_data(m: Representation) -> LoewyData:
    """Radical, socle (with inclusions) and top of a module."""
    _require_loewy_ok(m)
    rad = sub_quotient(m, radical_spaces(m))
    soc = sub_quotient(m, socle_spaces(m))
    return LoewyData(rad.sub, rad.inclusions, soc.sub, soc.inclusions,
                     rad.quot, rad.projections)


def radical_layers(m: Representation) -> list:
    """Total dimensions of rad^k m / rad^{k+1} m, top layer first."""
    _require_loewy_ok(m)
    layers = []
    cur = m
    while cur.total_dim > 0:
        rad = sub_quotient(cur, radical_spaces(cur))
        layers.append(cur.total_dim - rad.sub.total_dim)
        if rad.sub.total_dim == cur.total_dim:
            raise UnsupportedCategoryError("radical series does not terminate")
        cur = rad.sub
    return layers


def is_uniserial(m: Representation) -> bool:
    """True iff every radical layer has total dimension <= 1."""
    return all(d <= 1 for d in radical_layers(m))


# ---------------------------------------------------------------------------
# projectives and injectives (acyclic quivers)


def _paths_from(q: Quiver, start: str):
    """All paths starting at `start` as (endpoint, label tuple), BFS order."""
    out = [(start, ())]
    frontier = [(start, ())]
    while frontier:
        nxt = []
        for v, w in frontier:
            for a in sorted(q.arrows_from(v), key=lambda a: a.label):
                nxt.append((a.tgt, w + (a.label,)))
        out.extend(nxt)
        frontier = nxt
        if len(out) > 10**6:
            raise CapacityError("path explosion; quiver is probably cyclic")
    return out


def projective(q: Quiver, p: int, vertex: str) -> Representation:
    """Indecomposable projective P(vertex): basis = paths starting there."""
    if not q.is_acyclic():
        raise UnsupportedCategoryError("projectives need an acyclic quiver "
                                       "(kQ is infinite-dimensional otherwise)")
    paths = _paths_from(q, vertex)
    by_vertex: dict = {v: [] for v in q.vertices}
    for endpoint, w in paths:
        by_vertex[endpoint].append(w)
    index = {}
    for v in q.vertices:
        by_vertex[v].sort(key=lambda w: (len(w), w))
        for i, w in enumerate(by_vertex[v]):
            index[w] = i
    dims = {v: len(by_vertex[v]) for v in q.vertices}
    maps = {}
    for a in q.arrows:
        mat = gfp.zeros(dims[a.tgt], dims[a.src])
        for w in by_vertex[a.src]:
            mat[index[w + (a.label,)], index[w]] = 1
        maps[a.label] = mat
    return Representation(q, p, dims, maps)


def injective(q: Quiver, p: int, vertex: str) -> Representation:
    """Indecomposable injective I(vertex): dual of the opposite projective."""
    qop = q.opposite()
    pop = projective(qop, p, vertex)
    return dual(pop, q)


def proj_inj(q: Quiver, p: int, vertex: str):
    return projective(q, p, vertex), injective(q, p, vertex)


# ---------------------------------------------------------------------------
# enumeration of isomorphism classes


def _arrow_shapes(q: Quiver, d: dict):
    return [(d[a.tgt], d[a.src]) for a in q.arrows]


def _raw_total(q: Quiver, d: dict, p: int) -> int:
    return p ** sum(r * c for r, c in _arrow_shapes(q, d))


def _decode_raw(q: Quiver, d: dict, p: int, idx: int):
    maps = {}
    for a in q.arrows:
        r, c = d[a.tgt], d[a.src]
        n = r * c
        block = np.empty(n, dtype=np.int64)
        for i in range(n - 1, -1, -1):
            block[i] = idx % p
            idx //= p
        maps[a.label] = block.reshape(r, c)
    return maps


def _tuple_bytes(maps: dict, q: Quiver) -> bytes:
    return b"".join(maps[a.label].astype(np.uint8).tobytes() for a in q.arrows)


def _orbit_mark(m: Representation, seen: set):
    """Mark the whole GL-orbit of m as seen (conjugation at every vertex)."""
    q, p = m.quiver, m.p
    active = [v for v in q.vertices if m.dims[v] > 0]
    groups = [gfp.gl_group(m.dims[v], p) for v in active]
    if len(active) == 1:
        v = active[0]
        g, ginv = groups[0]
        per_arrow = []
        for a in q.arrows:
            mat = m.maps[a.label]
            if a.src == v and a.tgt == v:
                orb = np.matmul(np.matmul(g, mat), ginv) % p
            elif a.tgt == v:
                orb = np.matmul(g, np.broadcast_to(mat, (g.shape[0],) + mat.shape)) % p
            elif a.src == v:
                orb = np.matmul(np.broadcast_to(mat, (g.shape[0],) + mat.shape), ginv) % p
            else:
                orb = np.broadcast_to(mat, (g.shape[0],) + mat.shape)
            per_arrow.append(np.ascontiguousarray(orb).astype(np.uint8))
        k = g.shape[0]
        flats = [o.reshape(k, -1) for o in per_arrow]
        blob = np.concatenate(flats, axis=1) if flats else np.zeros((k, 0), np.uint8)
        for row in blob:
            seen.add(row.tobytes())
        return
    # several active vertices: iterate the product of the (small) GL groups
    idx_of = {v: i for i, v in enumerate(active)}
    for choice in itertools.product(*[range(g[0].shape[0]) for g in groups]):
        maps = {}
        for a in q.arrows:
            mat = m.maps[a.label]
            if a.tgt in idx_of:
                g = groups[idx_of[a.tgt]][0][choice[idx_of[a.tgt]]]
                mat = gfp.matmul(g, mat, p)
            if a.src in idx_of:
                ginv = groups[idx_of[a.src]][1][choice[idx_of[a.src]]]
                mat = gfp.matmul(mat, ginv, p)
            maps[a.label] = mat
        seen.add(_tuple_bytes(maps, q))


def _gl_product_order(q: Quiver, d: dict, p: int) -> int:
    order = 1
    for v in q.vertices:
        if d[v] > 0:
            order *= gfp.gl_order(d[v], p)
    return order


def enumerate_reps(q: Quiver, d, p: int, nilpotent_only: bool = False,
                   cap: int = DEFAULT_ENUMERATION_CAP,
                   scan_cap: int = DEFAULT_SCAN_CAP) -> list:
    """One representative per isomorphism class with the given dimension vector.

    Representatives are the lexicographically least matrix tuples of their
    orbits; the returned order is deterministic (lexicographic).
    """
    gfp.check_prime(p)
    if isinstance(d, (list, tuple)):
        d = {v: int(x) for v, x in zip(q.vertices, d)}
    else:
        d = {v: int(d.get(v, 0)) for v in q.vertices}
    raw = _raw_total(q, d, p)
    if raw > cap:
        raise CapacityError(f"{raw} raw matrix tuples exceed cap {cap}",
                            size=raw, cap=cap)
    if _gl_product_order(q, d, p) <= GL_ORBIT_LIMIT:
        return _enumerate_by_orbits(q, d, p, nilpotent_only, raw)
    return _enumerate_by_iso_tests(q, d, p, nilpotent_only, raw, scan_cap)


def _enumerate_by_orbits(q, d, p, nilpotent_only, raw):
    seen: set = set()
    classes = []
    for idx in range(raw):
        maps = _decode_raw(q, d, p, idx)
        key = _tuple_bytes(maps, q)
        if key in seen:
            continue
        rep = Representation(q, p, d, maps)
        _orbit_mark(rep, seen)
        if nilpotent_only and not is_nilpotent(rep):
            continue
        classes.append(rep)
    return classes


def _enumerate_by_iso_tests(q, d, p, nilpotent_only, raw, scan_cap):
    buckets: dict = {}
    classes = []
    for idx in range(raw):
        maps = _decode_raw(q, d, p, idx)
        rep = Representation(q, p, d, maps)
        if nilpotent_only and not is_nilpotent(rep):
            continue
        fp = fingerprint(rep)
        bucket = buckets.setdefault(fp, [])
        if any(is_isomorphic(rep, other, cap=scan_cap) for other in bucket):
            continue
        bucket.append(rep)
        classes.append(rep)
    return classes


def _dim_vectors(nv: int, total: int):
    """All compositions of `total` into nv nonnegative parts, lex order."""
    if nv == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _dim_vectors(nv - 1, total - first):
            yield (first,) + rest


def enumerate_all_reps(q: Quiver, max_total_dim: int, p: int,
                       nilpotent_only: bool = False,
                       cap: int = DEFAULT_ENUMERATION_CAP,
                       include_zero: bool = False) -> list:
    """All iso classes with 1 <= total dim <= bound (0 included on request)."""
    out = []
    if include_zero:
        out.append(zero_rep(q, p))
    nv = len(q.vertices)
    for total in range(1, max_total_dim + 1):
        for vec in _dim_vectors(nv, total):
            out.extend(enumerate_reps(q, vec, p, nilpotent_only, cap=cap))
    return out


def enumerate_indecomposables(q: Quiver, max_total_dim: int, p: int,
                              nilpotent_only: bool = False,
                              cap: int = DEFAULT_ENUMERATION_CAP,
                              scan_cap: int = DEFAULT_SCAN_CAP) -> list:
    """All indecomposable classes with total dim <= bound."""
    return [m for m in enumerate_all_reps(q, max_total_dim, p, nilpotent_only, cap=cap)
            if decompose(m, cap=scan_cap).s == 1]
