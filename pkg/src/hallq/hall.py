"""Exact Hall products over F_p.

Structure constants count submodules by exhaustive enumeration of
arrow-closed subspace families; extensions are enumerated as cocycle
classes.  Everything is certified by construction: each count comes with
the submodule family that realizes it on request.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import gfp, reps
from .config import DEFAULT_ENUMERATION_CAP, DEFAULT_SCAN_CAP, RunConfig
from .errors import CapacityError, UnsupportedCategoryError, ValidationError
from .gfp import Subspace
from .laurent import LaurentPoly
from .quiver import Quiver
from .reps import Representation


class IsoRegistry:
    """Stable names for isomorphism classes.

    The first representative registered for a class becomes its canonical
    module; keys are deterministic given registration order.
    """

    def __init__(self, scan_cap: int = DEFAULT_SCAN_CAP):
        self.scan_cap = scan_cap
        self._buckets: dict = {}       # fingerprint -> list of (key, rep)
        self._by_key: dict = {}
        self._exact: dict = {}         # rep cache_key -> class key

    def key_of(self, m: Representation) -> str:
        exact = self._exact.get(m.cache_key())
        if exact is not None:
            return exact
        fp = reps.fingerprint(m)
        bucket = self._buckets.setdefault(fp, [])
        for key, rep in bucket:
            if reps.is_isomorphic(m, rep, cap=self.scan_cap):
                self._exact[m.cache_key()] = key
                return key
        key = f"M{len(self._by_key)}:{'x'.join(map(str, m.dim_vector()))}"
        bucket.append((key, m))
        self._by_key[key] = m
        self._exact[m.cache_key()] = key
        return key

    def module(self, key: str) -> Representation:
        return self._by_key[key]

    def __len__(self):
        return len(self._by_key)


@dataclass
class Context:
    """A quiver with a field and shared caches for Hall computations."""

    quiver: Quiver
    p: int
    registry: IsoRegistry = field(default_factory=IsoRegistry)
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    scan_cap: int = DEFAULT_SCAN_CAP

    @classmethod
    def from_config(cls, quiver: Quiver, cfg: RunConfig) -> "Context":
        return cls(quiver, cfg.p, IsoRegistry(cfg.scan_cap),
                   cfg.enumeration_cap, cfg.scan_cap)


# ---------------------------------------------------------------------------
# submodule enumeration


def _closure_ok(x: Representation, spaces: dict) -> bool:
    for a in x.quiver.arrows:
        s = spaces[a.src]
        if s.dim == 0:
            continue
        img = gfp.matmul(x.maps[a.label], s.basis.T, x.p).T
        t = spaces[a.tgt]
        if t.dim < s.dim and img.any() and gfp.rank(img, x.p) > t.dim:
            return False
        stacked = np.vstack([t.basis, img]) if t.dim else img
        if gfp.rank(stacked, x.p) != t.dim:
            return False
    return True


def subreps(x: Representation, dim_vector=None,
            cap: int = DEFAULT_ENUMERATION_CAP):
    """All arrow-closed families of subspaces of `x`.

    Restricted to a fixed dimension vector when given.  Yields dicts
    vertex -> Subspace.
    """
    q, p = x.quiver, x.p
    verts = list(q.vertices)
    if dim_vector is not None:
        ranges = [[int(k)] for k in dim_vector]
        if any(k[0] > x.dims[v] or k[0] < 0 for k, v in zip(ranges, verts)):
            return
    else:
        ranges = [list(range(x.dims[v] + 1)) for v in verts]
    per_vertex = {}
    total = 1
    for v, ks in zip(verts, ranges):
        per_vertex[v] = {k: gfp.enumerate_subspaces(x.dims[v], k, p, cap=cap)
                         for k in ks}
        total *= sum(len(per_vertex[v][k]) for k in ks)
        if total > cap:
            raise CapacityError(f"submodule search space {total} exceeds cap {cap}",
                                size=total, cap=cap)
    choices = [[s for k in ranges[i] for s in per_vertex[v][k]]
               for i, v in enumerate(verts)]
    for combo in itertools.product(*choices):
        spaces = dict(zip(verts, combo))
        if _closure_ok(x, spaces):
            yield spaces


def hall_number(x: Representation, m: Representation, n: Representation,
                cap: int = DEFAULT_ENUMERATION_CAP,
                scan_cap: int = DEFAULT_SCAN_CAP,
                want_witness: bool = False):
    """Count submodules U of x with U iso n and x/U iso m.

    Returns the count, or (count, witness subspace family) on request.
    """
    if (np.array(x.dim_vector()) != np.array(m.dim_vector()) + np.array(n.dim_vector())).any():
        return (0, None) if want_witness else 0
    count = 0
    witness = None
    for spaces in subreps(x, n.dim_vector(), cap=cap):
        sq = reps.sub_quotient(x, spaces)
        if reps.is_isomorphic(sq.sub, n, cap=scan_cap) \
                and reps.is_isomorphic(sq.quot, m, cap=scan_cap):
            count += 1
            if witness is None:
                witness = spaces
    return (count, witness) if want_witness else count


# ---------------------------------------------------------------------------
# extensions (middle terms)


def _ext_cocycle_space(m: Representation, n: Representation):
    """Unknowns are the blocks phi_a : M_src -> N_tgt, one per arrow.

    A cocycle family glues to X_a = [[N_a, phi_a], [0, M_a]]; every middle
    term of an extension of M by N arises this way.
    """
    offsets, pos = {}, 0
    for a in m.quiver.arrows:
        offsets[a.label] = pos
        pos += n.dims[a.tgt] * m.dims[a.src]
    return offsets, pos


def middle_terms(m: Representation, n: Representation, registry: IsoRegistry,
                 cap: int = DEFAULT_ENUMERATION_CAP):
    """Distinct iso classes of extensions 0 -> n -> X -> m -> 0.

    Returns a list of registry keys (always contains the direct sum).
    """
    if m.quiver != n.quiver or m.p != n.p:
        raise ValidationError("middle_terms: quiver/field mismatch")
    q, p = m.quiver, m.p
    offsets, nunk = _ext_cocycle_space(m, n)
    total = p ** nunk
    if total > cap:
        raise CapacityError(f"{total} extension cocycles exceed cap {cap}",
                            size=total, cap=cap)
    dims = {v: m.dims[v] + n.dims[v] for v in q.vertices}
    seen = set()
    out = []
    for idx in range(total):
        vec = np.empty(nunk, dtype=np.int64)
        rem = idx
        for i in range(nunk - 1, -1, -1):
            vec[i] = rem % p
            rem //= p
        maps = {}
        for a in q.arrows:
            r, c = n.dims[a.tgt], m.dims[a.src]
            base = offsets[a.label]
            phi = vec[base:base + r * c].reshape(r, c)
            blk = gfp.zeros(dims[a.tgt], dims[a.src])
            blk[:n.dims[a.tgt], :n.dims[a.src]] = n.maps[a.label]
            blk[:n.dims[a.tgt], n.dims[a.src]:] = phi
            blk[n.dims[a.tgt]:, n.dims[a.src]:] = m.maps[a.label]
            maps[a.label] = blk
        x = Representation(q, p, dims, maps)
        key = registry.key_of(x)
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


# ---------------------------------------------------------------------------
# Euler form


def euler_form_dims(q: Quiver, d, e) -> int:
    """<d, e> = sum_i d_i e_i - sum_a d_{src(a)} e_{tgt(a)}."""
    d = {v: int(x) for v, x in zip(q.vertices, d)} if not isinstance(d, dict) else d
    e = {v: int(x) for v, x in zip(q.vertices, e)} if not isinstance(e, dict) else e
    val = sum(d[v] * e[v] for v in q.vertices)
    val -= sum(d[a.src] * e[a.tgt] for a in q.arrows)
    return val


def ext_dim(m: Representation, n: Representation) -> int:
    """dim Ext^1(m, n) for a hereditary category: hom - <dim m, dim n>."""
    _require_hereditary(m)
    _require_hereditary(n)
    return reps.hom_dim(m, n) - euler_form_dims(m.quiver, m.dim_vector(),
                                                n.dim_vector())


def _require_hereditary(m: Representation):
    if not m.quiver.is_acyclic() and not reps.is_nilpotent(m):
        raise UnsupportedCategoryError(
            "Euler form applies to acyclic quivers or nilpotent modules only")


def euler_form(m: Representation, n: Representation) -> int:
    """<[m], [n]> = dim Hom(m, n) - dim Ext^1(m, n)."""
    _require_hereditary(m)
    _require_hereditary(n)
    return euler_form_dims(m.quiver, m.dim_vector(), n.dim_vector())


# ---------------------------------------------------------------------------
# Hall elements and products


@dataclass
class HallElement:
    """A finite Laurent-coefficient combination of iso classes."""

    context: Context
    terms: dict                # class key -> LaurentPoly

    @classmethod
    def zero(cls, ctx: Context) -> "HallElement":
        return cls(ctx, {})

    @classmethod
    def basis(cls, ctx: Context, m: Representation) -> "HallElement":
        return cls(ctx, {ctx.registry.key_of(m): LaurentPoly.one()})

    def is_zero(self) -> bool:
        return not self.terms

    def add_term(self, key: str, coeff: LaurentPoly):
        cur = self.terms.get(key, LaurentPoly.zero())
        new = cur + coeff
        if new == LaurentPoly.zero():
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def __add__(self, other: "HallElement") -> "HallElement":
        out = HallElement(self.context, dict(self.terms))
        for k, c in other.terms.items():
            out.add_term(k, c)
        return out

    def scale(self, coeff: LaurentPoly) -> "HallElement":
        out = HallElement(self.context, {})
        for k, c in self.terms.items():
            out.add_term(k, c * coeff)
        return out

    def sorted_terms(self):
        reg = self.context.registry
        def sort_key(item):
            mod = reg.module(item[0])
            return (mod.total_dim, mod.dim_vector(), item[0])
        return sorted(self.terms.items(), key=sort_key)

    def to_json(self) -> dict:
        reg = self.context.registry
        return {
            "context": {"quiver": self.context.quiver.name, "p": self.context.p},
            "terms": [
                {"key": k, "module": reg.module(k).to_json(), "coeff": c.to_json()}
                for k, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict, ctx: Context) -> "HallElement":
        out = cls.zero(ctx)
        for t in data["terms"]:
            mod = Representation.from_json(t["module"], ctx.quiver)
            out.add_term(ctx.registry.key_of(mod), LaurentPoly.from_json(t["coeff"]))
        return out

    def __repr__(self):
        items = ", ".join(f"({c})[{k}]" for k, c in self.sorted_terms())
        return f"HallElement({items or '0'})"


def hall_product(ctx: Context, m: Representation, n: Representation,
                 twist: bool = False) -> HallElement:
    """[m] * [n] = sum_X F^X_{m,n} [X], optionally twisted by v^<m,n>."""
    if m.quiver != ctx.quiver or n.quiver != ctx.quiver or m.p != ctx.p or n.p != ctx.p:
        raise ValidationError("hall_product: module outside this context")
    out = HallElement.zero(ctx)
    for key in middle_terms(m, n, ctx.registry, cap=ctx.enumeration_cap):
        x = ctx.registry.module(key)
        cnt = hall_number(x, m, n, cap=ctx.enumeration_cap, scan_cap=ctx.scan_cap)
        if cnt:
            out.add_term(key, LaurentPoly.const(cnt))
    if twist:
        e = euler_form_dims(ctx.quiver, m.dim_vector(), n.dim_vector())
        out = out.scale(LaurentPoly.v(e))
    return out


def twisted_product(ctx: Context, m: Representation, n: Representation) -> HallElement:
    return hall_product(ctx, m, n, twist=True)


def element_product(a: HallElement, b: HallElement, twist: bool = False) -> HallElement:
    """Bilinear extension of the basis product (used for associativity checks)."""
    ctx = a.context
    out = HallElement.zero(ctx)
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            prod = hall_product(ctx, ctx.registry.module(ka),
                                ctx.registry.module(kb), twist=twist)
            for k, c in prod.scale(ca * cb).terms.items():
                out.add_term(k, c)
    return out
