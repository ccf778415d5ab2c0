"""Finite posets, functor coefficients, and nerve homology.

A circle covered by finitely many arcs gives a poset of pieces ordered by
inclusion; tensor powers of an algebra over the components of each piece
give a functor on that poset, and the homology of its nerve recovers the
circle computation one level at a time.  Everything here is finite and
exact.
"""

from __future__ import annotations

import itertools

from .algebra import GradedAlgebra
from .chains import (
    BettiTable,
    ChainComplex,
    ChainError,
    DoubleComplex,
    _t_blocks,
)
from .loday import _Push, _add_into, _rank_tuple, _weights, loday_complex
from .matrix import SMat
from .simplicial import disjoint_union, point

__all__ = [
    "PosetError",
    "Poset",
    "PosetFunctor",
    "PosetChainFunctor",
    "cyclic_cech_poset",
    "constant_functor",
    "arc_functor",
    "arc_chain_functor",
    "nerve_complex",
    "nerve_double_complex",
    "poset_homology",
    "EdgeMap",
    "edge_map",
    "poset_to_json",
    "poset_from_json",
]


class PosetError(ValueError):
    pass


class Poset:
    """Finite poset with cached covering relation and component labels.

    ``le`` holds all related pairs (a, b) with a <= b, reflexive and
    transitively closed; ``components`` counts the pieces of each object;
    ``comp_maps`` records, for geometric posets, where each piece of the
    smaller object lands inside the bigger one.  ``window``, when set by a
    model constructor, bounds the homological degrees in which the nerve is
    trusted to reproduce the space the poset stands in for.
    """

    __slots__ = ("objects", "le", "components", "comp_maps", "window", "_covers")

    def __init__(self, objects, le, components, comp_maps=None, window=None):
        self.objects = tuple(objects)
        self.le = frozenset(le)
        self.components = dict(components)
        self.comp_maps = None if comp_maps is None else dict(comp_maps)
        self.window = window
        self._covers = None
        self._check()

    def _check(self):
        seen = set(self.objects)
        if len(seen) != len(self.objects):
            raise PosetError("duplicate object names")
        for a, b in self.le:
            if a not in seen or b not in seen:
                raise PosetError(f"relation mentions unknown object ({a}, {b})")
        for a in self.objects:
            if (a, a) not in self.le:
                raise PosetError(f"relation is not reflexive at {a}")
            if a not in self.components:
                raise PosetError(f"object {a} has no component count")
        for a, b in self.le:
            if a != b and (b, a) in self.le:
                raise PosetError(f"relation is not antisymmetric on ({a}, {b})")
        for a, b in self.le:
            for c in self.objects:
                if (b, c) in self.le and (a, c) not in self.le:
                    raise PosetError(
                        f"relation is not transitive through ({a}, {b}, {c})"
                    )

    def less(self, a, b) -> bool:
        return a != b and (a, b) in self.le

    @property
    def covers(self):
        """Pairs (a, b) with a < b and nothing strictly between."""
        if self._covers is None:
            out = []
            for a, b in sorted(self.le):
                if a == b:
                    continue
                if any(self.less(a, c) and self.less(c, b) for c in self.objects):
                    continue
                out.append((a, b))
            self._covers = tuple(out)
        return self._covers

    def chains(self, p: int):
        """All strict chains x_0 < ... < x_p, in lexicographic object order."""
        order = {x: i for i, x in enumerate(self.objects)}
        out = []

        def grow(chain):
            if len(chain) == p + 1:
                out.append(tuple(chain))
                return
            for x in self.objects:
                if self.less(chain[-1], x):
                    chain.append(x)
                    grow(chain)
                    chain.pop()

        for x in self.objects:
            grow([x])
        out.sort(key=lambda ch: tuple(order[x] for x in ch))
        return out

    def longest_chain(self) -> int:
        best = {x: 0 for x in self.objects}
        # objects sorted topologically by number of predecessors
        rank = {
            x: sum(1 for y in self.objects if self.less(y, x)) for x in self.objects
        }
        for x in sorted(self.objects, key=lambda v: rank[v]):
            for y in self.objects:
                if self.less(y, x):
                    best[x] = max(best[x], best[y] + 1)
        return max(best.values(), default=0)


class PosetFunctor:
    """Graded vector spaces on objects, linear maps on related pairs.

    ``spaces`` maps each object to a list of (name, t) generators and
    ``maps`` each strictly related pair to an SMat; identity pairs are
    implicit.
    """

    __slots__ = ("poset", "field", "spaces", "maps")

    def __init__(self, poset: Poset, field, spaces: dict, maps: dict):
        self.poset = poset
        self.field = field
        self.spaces = {x: tuple(v) for x, v in spaces.items()}
        self.maps = dict(maps)

    def dim(self, x) -> int:
        return len(self.spaces[x])

    def validate(self) -> "PosetFunctor":
        P = self.poset
        for x in P.objects:
            if x not in self.spaces:
                raise PosetError(f"no space assigned to {x}")
        for a, b in P.le:
            if a == b:
                continue
            m = self.maps.get((a, b))
            if m is None:
                raise PosetError(f"no map assigned to ({a}, {b})")
            if (m.nrows, m.ncols) != (self.dim(b), self.dim(a)):
                raise PosetError(f"map at ({a}, {b}) has the wrong shape")
            src = self.spaces[a]
            tgt = self.spaces[b]
            for j, col in enumerate(m.cols):
                for i, v in col.items():
                    if v != self.field.zero and tgt[i][1] != src[j][1]:
                        raise PosetError(f"map at ({a}, {b}) mixes internal degrees")
        for a in P.objects:
            for b in P.objects:
                if not P.less(a, b):
                    continue
                for c in P.objects:
                    if not P.less(b, c):
                        continue
                    left = self.maps[(a, c)]
                    right = self.maps[(b, c)] @ self.maps[(a, b)]
                    if left != right:
                        raise PosetError(
                            f"functoriality fails on the triple ({a}, {b}, {c})"
                        )
        return self


def _runs(segs, total):
    """Maximal circular runs of a segment set, each as a consecutive tuple.

    Runs are listed by their starting segment in increasing order, with the
    wrap-around run (if any) starting at its true first segment.
    """
    segs = set(segs)
    runs = []
    seen = set()
    for s in sorted(segs):
        if s in seen:
            continue
        start = s
        while (start - 1) % total in segs and (start - 1) % total != s:
            start = (start - 1) % total
        run = [start]
        seen.add(start)
        while (run[-1] + 1) % total in segs and (run[-1] + 1) % total != start:
            nxt = (run[-1] + 1) % total
            run.append(nxt)
            seen.add(nxt)
        runs.append(tuple(run))
    runs.sort(key=lambda r: r[0])
    return tuple(runs)


def cyclic_cech_poset(m: int) -> Poset:
    """Finite stand-in for the circle's poset of disk unions.

    Mark m + 1 points on the circle.  An object is any disjoint union of
    open arcs whose endpoints are marked points, short of the full circle;
    objects are ordered by inclusion and labeled with their ordered
    component lists.  The maximal objects are the m + 1 complements of a
    single marked point, every multiple overlap of them is present down to
    the common refinement with m + 1 pieces, and that depth makes the
    nerve with tensor-power coefficients reproduce the circle computation
    through homological degree m - 1; the poset records the bound in
    ``window``.  Internally the circle is cut into 2(m + 1) segments,
    odd ones standing for the marked points.
    """
    if m < 2:
        raise PosetError(f"need at least two marked points, got {m}")
    total = 2 * (m + 1)
    sets = {}
    for size in range(1, total):
        for sub in itertools.combinations(range(total), size):
            runs = _runs(sub, total)
            # arcs run from one marked point to another: even ends only
            if any(r[0] % 2 or r[-1] % 2 for r in runs):
                continue
            name = "|".join(
                f"{r[0]}-{r[-1]}" if len(r) > 1 else str(r[0]) for r in runs
            )
            sets[name] = frozenset(sub)
    names = sorted(sets, key=lambda nm: (len(_runs(sets[nm], total)), nm))
    le = set()
    for a in names:
        for b in names:
            if sets[a] <= sets[b]:
                le.add((a, b))
    geometry = {nm: _runs(sets[nm], total) for nm in names}
    components = {nm: len(geometry[nm]) for nm in names}
    comp_maps = {}
    for a, b in le:
        if a == b:
            continue
        tp = []
        for run in geometry[a]:
            tp.append(
                next(
                    k
                    for k, big in enumerate(geometry[b])
                    if set(run) <= set(big)
                )
            )
        comp_maps[(a, b)] = tuple(tp)
    return Poset(names, le, components, comp_maps, window=m - 1)


def constant_functor(P: Poset, field, dims_t=((0, 1),)) -> PosetFunctor:
    """The same graded space everywhere, with identity maps."""
    gens = []
    for t, d in dims_t:
        gens.extend((f"c{t}.{k}", t) for k in range(d))
    n = len(gens)
    spaces = {x: list(gens) for x in P.objects}
    maps = {}
    ident = SMat.from_entries(n, n, field, [(i, i, field.one) for i in range(n)])
    for a, b in P.le:
        if a != b:
            maps[(a, b)] = ident
    return PosetFunctor(P, field, spaces, maps).validate()


def arc_functor(A: GradedAlgebra, P: Poset) -> PosetFunctor:
    """Tensor powers of A over the components of each object.

    Inclusions multiply the components that collide and insert units on
    components that appear fresh; signs follow the same reordering rule as
    every other tensor pushforward here.
    """
    if not A.commutative:
        raise PosetError("tensor-power coefficients need a commutative algebra")
    if P.comp_maps is None:
        raise PosetError("poset has no component labels")
    field = A.field
    dA = A.dim
    spaces = {}
    for x in P.objects:
        c = P.components[x]
        spaces[x] = [
            (phi, sum(A.degrees[i] for i in phi))
            for phi in itertools.product(range(dA), repeat=c)
        ]
    maps = {}
    for a, b in P.le:
        if a == b:
            continue
        tp = P.comp_maps[(a, b)]
        push = _Push(A, list(tp), P.components[b])
        wt = _weights(dA, P.components[b])
        mat = SMat(len(spaces[b]), len(spaces[a]), field)
        for j, (phi, _t) in enumerate(spaces[a]):
            for tup, c in push.column(phi).items():
                mat.add_at(_rank_tuple(tup, wt), j, c)
        maps[(a, b)] = mat
    return PosetFunctor(P, field, spaces, maps).validate()


def nerve_complex(I: Poset, F: PosetFunctor) -> ChainComplex:
    """Strict chains of the poset with coefficients at the chain's start.

    Level p sums F(x_0) over chains x_0 < ... < x_p; the first face pushes
    along F(x_0 <= x_1), the others drop an object.  Chains above the
    longest one vanish, so the complex is exact at its top.
    """
    F.validate()
    field = F.field
    ell = I.longest_chain()
    levels = []
    offsets = []
    for p in range(ell + 1):
        lv = []
        offs = {}
        for ch in I.chains(p):
            offs[ch] = len(lv)
            lv.extend(((ch, nm), t) for nm, t in F.spaces[ch[0]])
        levels.append(lv)
        offsets.append(offs)
    diffs: list = [None]
    for p in range(1, ell + 1):
        d = SMat(len(levels[p - 1]), len(levels[p]), field)
        for ch, base in offsets[p].items():
            n0 = F.dim(ch[0])
            tail = ch[1:]
            m0 = F.maps[(ch[0], ch[1])]
            tbase = offsets[p - 1][tail]
            for j in range(n0):
                for i, v in m0.cols[j].items():
                    d.add_at(tbase + i, base + j, v)
            for drop in range(1, p + 1):
                sub = ch[:drop] + ch[drop + 1 :]
                tbase = offsets[p - 1][sub]
                sign = field.one if drop % 2 == 0 else -field.one
                for j in range(n0):
                    d.add_at(tbase + j, base + j, sign)
        diffs.append(d)
    return ChainComplex(field, levels, diffs, exact_top=True)


def poset_homology(I: Poset, F: PosetFunctor, s_max: int | None = None) -> BettiTable:
    """Homology of the nerve with functor coefficients."""
    return nerve_complex(I, F).homology(s_max, provenance="poset")


class EdgeMap:
    """The class map from coefficients at a minimal object into H_0.

    ``matrix`` sends F(x0) coordinates to coordinates on the canonical
    H_0 basis; ``iso`` is set when the map is bijective in every internal
    degree and nothing survives above level zero inside the poset's
    trusted window, i.e. when the whole nerve collapses onto its edge.
    """

    __slots__ = ("matrix", "iso", "src_dims", "h0_dims")

    def __init__(self, matrix, iso, src_dims, h0_dims):
        self.matrix = matrix
        self.iso = bool(iso)
        self.src_dims = dict(src_dims)
        self.h0_dims = dict(h0_dims)


def edge_map(I: Poset, F: PosetFunctor, x0) -> EdgeMap:
    """Place a coefficient at the one-object chain (x0) and read its class."""
    if x0 not in I.objects:
        raise PosetError(f"object {x0!r} is not in the poset")
    if I.components.get(x0) != 1:
        raise PosetError(f"object {x0!r} is not a single component")
    F.validate()
    field = F.field
    ch = field.char
    C = nerve_complex(I, F)
    dim0 = C.level_dim(0)
    # quotient of level 0 by the image of d_1, in echelon coordinates
    rel_cols = C.diffs[1].cols if C.top >= 1 else []
    rel = SMat.from_entries(
        len(rel_cols),
        dim0,
        field,
        [(r, i, v) for r, col in enumerate(rel_cols) for i, v in col.items()],
    )
    pivots, rrows = rel.rref()
    pivot_set = set(pivots)
    free = [i for i in range(dim0) if i not in pivot_set]
    pos = {i: k for k, i in enumerate(free)}
    pi: list = [None] * dim0
    for i in free:
        pi[i] = {pos[i]: field.one}
    for i, row in zip(pivots, rrows):
        out = {}
        for f, v in row.items():
            if f == i:
                continue
            nv = -v
            if ch:
                nv %= ch
            if nv != 0:
                out[pos[f]] = nv
        pi[i] = out
    # locate the block of the chain (x0,)
    offset = next(
        p for p, ((chain, _nm), _t) in enumerate(C.levels[0]) if chain == (x0,)
    )
    mat = SMat(len(free), F.dim(x0), field)
    for j in range(F.dim(x0)):
        for k, v in pi[offset + j].items():
            mat.add_at(k, j, v)
    src_dims: dict = {}
    for _nm, t in F.spaces[x0]:
        src_dims[t] = src_dims.get(t, 0) + 1
    h0_dims: dict = {}
    for i in free:
        t = C.levels[0][i][1]
        h0_dims[t] = h0_dims.get(t, 0) + 1
    iso = src_dims == h0_dims
    if iso:
        blocks_src = _t_blocks(list(F.spaces[x0]))
        blocks_tgt = _t_blocks([C.levels[0][i] for i in free])
        for t, js in blocks_src.items():
            if mat.restrict(blocks_tgt.get(t, []), js).rank() != len(js):
                iso = False
                break
    if iso:
        w = C.s_valid if I.window is None else min(I.window, C.s_valid)
        table = C.homology(w, provenance="poset")
        iso = all(s == 0 for s, _t in table.entries)
    return EdgeMap(mat, iso, src_dims, h0_dims)


class PosetChainFunctor:
    """Chain complexes on objects, chain maps on related pairs."""

    __slots__ = ("poset", "field", "complexes", "maps")

    def __init__(self, poset: Poset, field, complexes: dict, maps: dict):
        self.poset = poset
        self.field = field
        self.complexes = dict(complexes)
        self.maps = dict(maps)

    def validate(self) -> "PosetChainFunctor":
        P = self.poset
        for x in P.objects:
            if x not in self.complexes:
                raise PosetError(f"no complex assigned to {x}")
        for a, b in P.le:
            if a == b:
                continue
            mats = self.maps.get((a, b))
            if mats is None:
                raise PosetError(f"no chain map assigned to ({a}, {b})")
            ca, cb = self.complexes[a], self.complexes[b]
            for q, m in enumerate(mats):
                if (m.nrows, m.ncols) != (cb.level_dim(q), ca.level_dim(q)):
                    raise PosetError(f"chain map at ({a}, {b}) level {q} wrong shape")
                if q >= 1:
                    left = cb.diffs[q] @ m
                    right = mats[q - 1] @ ca.diffs[q]
                    if left != right:
                        raise PosetError(
                            f"chain map at ({a}, {b}) does not commute at level {q}"
                        )
        for a in P.objects:
            for b in P.objects:
                if not P.less(a, b):
                    continue
                for c in P.objects:
                    if not P.less(b, c):
                        continue
                    for q in range(len(self.maps[(a, c)])):
                        left = self.maps[(a, c)][q]
                        right = self.maps[(b, c)][q] @ self.maps[(a, b)][q]
                        if left != right:
                            raise PosetError(
                                f"functoriality fails on ({a}, {b}, {c}) at level {q}"
                            )
        return self


def arc_chain_functor(A: GradedAlgebra, P: Poset, q_top: int) -> PosetChainFunctor:
    """Tensor-power chain columns over each object's components.

    Each object carries the chain model of its components as a discrete
    space, truncated at q_top; related pairs push along the component
    maps level by level.
    """
    if not A.commutative:
        raise PosetError("tensor-power coefficients need a commutative algebra")
    if P.comp_maps is None:
        raise PosetError("poset has no component labels")
    field = A.field
    dA = A.dim
    complexes = {}
    for x in P.objects:
        c = P.components[x]
        space = disjoint_union(*[point() for _ in range(c)])
        complexes[x] = loday_complex(A, space, q_top).complex
    maps = {}
    for a, b in P.le:
        if a == b:
            continue
        tp = list(P.comp_maps[(a, b)])
        ca, cb = complexes[a], complexes[b]
        push = _Push(A, tp, P.components[b])
        wt = _weights(dA, P.components[b])
        mats = []
        for q in range(q_top + 1):
            m = SMat(cb.level_dim(q), ca.level_dim(q), field)
            for j, (phi, _t) in enumerate(ca.levels[q]):
                for tup, c in push.column(phi).items():
                    m.add_at(_rank_tuple(tup, wt), j, c)
            mats.append(m)
        maps[(a, b)] = mats
    return PosetChainFunctor(P, field, complexes, maps).validate()


def nerve_double_complex(I: Poset, Fc: PosetChainFunctor) -> DoubleComplex:
    """Nerve faces across, internal differentials down.

    Columns are complete (chains stop at the longest one), rows stop at
    the truncation of the assigned complexes, so the trusted window is
    one short of that truncation.
    """
    Fc.validate()
    field = Fc.field
    ell = I.longest_chain()
    gens: dict = {}
    offsets: dict = {}
    q_tops = []
    for p in range(ell + 1):
        for ch in I.chains(p):
            C0 = Fc.complexes[ch[0]]
            q_tops.append(C0.top)
            for q in range(C0.top + 1):
                lv = gens.setdefault((p, q), [])
                offsets[(p, q, ch)] = len(lv)
                lv.extend(((ch, nm), t) for nm, t in C0.levels[q])
    d_h: dict = {}
    d_v: dict = {}
    for (p, q), lv in sorted(gens.items()):
        if q >= 1:
            m = SMat(len(gens.get((p, q - 1), ())), len(lv), field)
            for ch in I.chains(p):
                C0 = Fc.complexes[ch[0]]
                if q > C0.top:
                    continue
                base = offsets[(p, q, ch)]
                tbase = offsets[(p, q - 1, ch)]
                for j, col in enumerate(C0.diffs[q].cols):
                    for i, v in col.items():
                        m.add_at(tbase + i, base + j, v)
            d_v[(p, q)] = m
        if p >= 1:
            m = SMat(len(gens.get((p - 1, q), ())), len(lv), field)
            for ch in I.chains(p):
                C0 = Fc.complexes[ch[0]]
                if q > C0.top:
                    continue
                base = offsets[(p, q, ch)]
                tail = ch[1:]
                if (p - 1, q, tail) in offsets:
                    tbase = offsets[(p - 1, q, tail)]
                    mq = Fc.maps[(ch[0], ch[1])][q]
                    for j, col in enumerate(mq.cols):
                        for i, v in col.items():
                            m.add_at(tbase + i, base + j, v)
                for drop in range(1, p + 1):
                    sub = ch[:drop] + ch[drop + 1 :]
                    if (p - 1, q, sub) not in offsets:
                        continue
                    tbase = offsets[(p - 1, q, sub)]
                    sign = field.one if drop % 2 == 0 else -field.one
                    for j in range(C0.level_dim(q)):
                        m.add_at(tbase + j, base + j, sign)
            d_h[(p, q)] = m
    q_valid = {p: min(q_tops) - 1 for p in range(ell + 1)}
    D = DoubleComplex.from_commuting(
        field, gens, d_h, d_v, p_exact=True, q_valid=q_valid
    )
    D.validate()
    return D


def poset_to_json(P: Poset) -> dict:
    return {
        "objects": [
            {"name": x, "components": P.components[x]} for x in P.objects
        ],
        "relations": sorted([a, b] for a, b in P.le if a != b),
    }


def poset_from_json(obj: dict) -> Poset:
    """Poset from its file form; component maps are not part of the file."""
    try:
        objects = [o["name"] for o in obj["objects"]]
        components = {o["name"]: int(o["components"]) for o in obj["objects"]}
        rels = [(a, b) for a, b in obj["relations"]]
    except (KeyError, TypeError, ValueError) as e:
        raise PosetError(f"malformed poset file: {e}")
    le = set((x, x) for x in objects) | set(rels)
    # close transitively so hand-written files only need the generators
    changed = True
    while changed:
        changed = False
        for a, b in list(le):
            for c, d in list(le):
                if b == c and (a, d) not in le:
                    le.add((a, d))
                    changed = True
    return Poset(objects, le, components, None)
