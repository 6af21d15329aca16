"""Directed Dynkin quivers and their hom combinatorics.

This is the combinatorial side of the comparison: simples of a hereditary
path algebra, tensor products for several factors, and the mutation action
on Euler matrices.  Everything here is small and exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exactmat import charpoly, det_int, identity_matrix, mat_inverse_rat, mat_mul, mat_transpose


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    name: str
    vertices: tuple
    arrows: tuple  # (source, target) pairs, 0-based

    @property
    def rank(self):
        return len(self.vertices)

    def arrow_count(self, src, dst):
        return sum(1 for a, b in self.arrows if a == src and b == dst)


_TYPE_RE = re.compile(r"^([AD])(\d+)$")


def dynkin_quiver(qtype):
    """Directed quiver of type A_m (m >= 1) or D_n (n >= 4).

    Arrows point toward lower-index vertices along the tail; in type D the
    branch vertex v3 sources into both v1 and v2.  D3 is rejected: renumber
    it as A3.
    """
    if hasattr(qtype, "kind"):  # polyforms.Atom; both D orientations share a quiver
        kind = "A" if qtype.kind == "A" else "D"
        rank = qtype.param
    else:
        m = _TYPE_RE.match(str(qtype).strip())
        if not m:
            raise QuiverError(f"cannot parse quiver type: {qtype!r}")
        kind, rank = m.group(1), int(m.group(2))
        rank = int(rank)
    if kind == "A":
        if rank < 1:
            raise QuiverError("type A needs rank at least 1")
        vertices = tuple(f"v{i+1}" for i in range(rank))
        arrows = tuple((i + 1, i) for i in range(rank - 1))
        return Quiver(f"A{rank}", vertices, arrows)
    if rank == 3:
        raise QuiverError("D3 coincides with A3; request the A3 quiver instead")
    if rank < 3:
        raise QuiverError("type D needs rank at least 4")
    vertices = tuple(f"v{i+1}" for i in range(rank))
    arrows = ((2, 0), (2, 1)) + tuple((i + 1, i) for i in range(2, rank - 1))
    return Quiver(f"D{rank}", vertices, arrows)


def simple_hom_dims(q, i, j, k):
    """dim Hom(S_i, S_j[k]) between simples of the path algebra.

    Hereditary, so only k in {0, 1} contribute: identity at k = 0 and, at
    k = 1, the number of arrows j -> i.  Vertices are 0-based.
    """
    rank = q.rank
    if not (0 <= i < rank and 0 <= j < rank):
        raise QuiverError("vertex out of range")
    if k == 0:
        return 1 if i == j else 0
    if k == 1:
        return q.arrow_count(j, i)
    return 0


@dataclass
class BigradedTable:
    """Hom dimensions between tuple-indexed objects, graded by shift."""

    objects: list
    dims: dict = field(default_factory=dict)  # (i, j, k) -> positive int

    def dim(self, i, j, k):
        return self.dims.get((i, j, k), 0)

    def total(self):
        return sum(self.dims.values())

    def entries(self):
        """Sorted nonzero entries as (i, j, k, dim) index tuples."""
        return sorted((i, j, k, d) for (i, j, k), d in self.dims.items())

    def restrict_window(self, window):
        kept = {key: d for key, d in self.dims.items() if abs(key[2]) <= window}
        return BigradedTable(list(self.objects), kept)

    def __eq__(self, other):
        if not isinstance(other, BigradedTable):
            return NotImplemented
        return self.objects == other.objects and self.dims == other.dims


def _as_quiver(item):
    if isinstance(item, Quiver):
        return item
    return dynkin_quiver(item)


def tensor_model(types):
    """Tensor product of the simple-object tables of several quivers.

    Objects are tuples of vertices, one per factor, in product order with
    the last factor varying fastest; dimensions convolve over the shift.
    """
    quivers = [_as_quiver(t) for t in types]
    if not quivers:
        raise QuiverError("tensor model needs at least one factor")

    def tuples(qs):
        if not qs:
            yield ()
            return
        for head in range(qs[0].rank):
            for tail in tuples(qs[1:]):
                yield (head,) + tail

    objects = list(tuples(quivers))
    index = {obj: n for n, obj in enumerate(objects)}
    # per-factor sparse tables: (i, j) -> {k: dim}
    factor = []
    for q in quivers:
        tbl = {}
        for i in range(q.rank):
            for j in range(q.rank):
                ks = {}
                for k in (0, 1):
                    d = simple_hom_dims(q, i, j, k)
                    if d:
                        ks[k] = d
                if ks:
                    tbl[(i, j)] = ks
        factor.append(tbl)

    dims = {}
    for src in objects:
        for dst in objects:
            conv = {0: 1}
            dead = False
            for t, tbl in enumerate(factor):
                ks = tbl.get((src[t], dst[t]))
                if not ks:
                    dead = True
                    break
                nxt = {}
                for k1, d1 in conv.items():
                    for k2, d2 in ks.items():
                        nxt[k1 + k2] = nxt.get(k1 + k2, 0) + d1 * d2
                conv = nxt
            if dead:
                continue
            si, di = index[src], index[dst]
            for k, d in conv.items():
                dims[(si, di, k)] = d
    labels = [tuple(quivers[t].vertices[v] for t, v in enumerate(obj)) for obj in objects]
    return BigradedTable(labels, dims)


def euler_matrix(q):
    """E with E[i][j] = delta_ij - (number of arrows i -> j)."""
    e = identity_matrix(q.rank)
    for a, b in q.arrows:
        e[a][b] -= 1
    return e


def coxeter_polynomial(e):
    """Characteristic polynomial of the Coxeter matrix -E^-T E.

    Returns integer coefficients, leading term first.
    """
    n = len(e)
    if n == 0:
        return [1]
    inv_t = mat_inverse_rat(mat_transpose(e))
    cox = [[-x for x in row] for row in mat_mul(inv_t, e)]
    coeffs = charpoly(cox)
    out = []
    for c in coeffs:
        c = Fraction(c)
        if c.denominator != 1:
            raise QuiverError("Coxeter polynomial is not integral; E is not unimodular")
        out.append(int(c))
    return out


def mutate_collection(e, position, direction):
    """Braid mutation of an Euler matrix at an adjacent slot pair.

    `position` is 1-based with 1 <= position < rank, acting on slots
    (position, position + 1).  The transvection coefficient is the
    below-diagonal entry of the slot block, which is the only one that can
    be nonzero for collections listed in exceptional order under this
    matrix convention; left and right are mutually inverse there.
    """
    n = len(e)
    if not 1 <= position < n:
        raise QuiverError("mutation position out of range")
    if direction not in ("left", "right"):
        raise QuiverError(f"unknown mutation direction: {direction!r}")
    p = position - 1
    q = position
    a = e[q][p]
    f = identity_matrix(n)
    if direction == "left":
        f[p][p] = -a
        f[p][q] = 1
        f[q][p] = 1
        f[q][q] = 0
    else:
        f[p][p] = 0
        f[p][q] = 1
        f[q][p] = 1
        f[q][q] = -a
    return mat_mul(mat_mul(f, e), mat_transpose(f))


def quiver_to_json(q):
    return {
        "name": q.name,
        "vertices": list(q.vertices),
        "arrows": [[q.vertices[a], q.vertices[b]] for a, b in q.arrows],
    }
