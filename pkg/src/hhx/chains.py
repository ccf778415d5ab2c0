"""Bigraded chain complexes with exact sparse linear algebra.

A complex lives in homological degrees 0..top; every generator carries an
internal degree t which all differentials preserve, so homology splits
into (s, t) blocks.  Levels beyond the construction window are unknown,
which the validity bound s_valid makes explicit: homology is only handed
out for s <= s_valid, and every construction (cones, tensors, total
complexes) propagates the bound.

Double complexes are stored with anticommuting differentials; the page
extraction below works with the column filtration directly, one internal
degree at a time.
"""

from __future__ import annotations

from .fields import Field
from .matrix import SMat

__all__ = [
    "ChainError",
    "BettiTable",
    "ChainComplex",
    "ChainMap",
    "homology",
    "cone",
    "is_quasi_iso",
    "tensor_complexes",
    "DoubleComplex",
    "total_complex",
    "SpectralSequencePage",
    "sseq_pages",
    "e_infinity",
    "transpose_double",
]


class ChainError(ValueError):
    pass


class BettiTable:
    """Dimensions of homology indexed by (s, t), with a validity bound."""

    __slots__ = ("entries", "s_valid", "provenance")

    def __init__(self, entries: dict, s_valid: int, provenance: str):
        self.entries = {k: v for k, v in entries.items() if v}
        for (s, t), v in self.entries.items():
            if v < 0:
                raise ChainError(f"negative dimension at ({s}, {t})")
            if s > s_valid:
                raise ChainError(f"entry at s={s} beyond validity bound {s_valid}")
            del t
        self.s_valid = s_valid
        self.provenance = provenance

    def dim(self, s: int, t: int) -> int:
        return self.entries.get((s, t), 0)

    def total(self, s: int) -> int:
        return sum(v for (a, _), v in self.entries.items() if a == s)

    def t_range(self):
        return sorted({t for (_, t) in self.entries})

    def window_equal(self, other: "BettiTable", s_max: int | None = None) -> bool:
        """Entrywise equality for s <= s_max (default: the joint valid range)."""
        if s_max is None:
            s_max = min(self.s_valid, other.s_valid)
        if s_max > min(self.s_valid, other.s_valid):
            raise ChainError("comparison window exceeds a validity bound")
        a = {k: v for k, v in self.entries.items() if k[0] <= s_max}
        b = {k: v for k, v in other.entries.items() if k[0] <= s_max}
        return a == b

    def convolve(self, other: "BettiTable") -> "BettiTable":
        """Kunneth product: graded convolution over both gradings."""
        out: dict = {}
        bound = min(self.s_valid, other.s_valid)
        for (s1, t1), v1 in self.entries.items():
            for (s2, t2), v2 in other.entries.items():
                if s1 + s2 <= bound:
                    key = (s1 + s2, t1 + t2)
                    out[key] = out.get(key, 0) + v1 * v2
        return BettiTable(out, bound, "convolution")

    def to_json(self) -> dict:
        return {
            "provenance": self.provenance,
            "s_valid": self.s_valid,
            "entries": [
                {"s": s, "t": t, "dim": v}
                for (s, t), v in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BettiTable":
        if not isinstance(obj, dict) or {"provenance", "s_valid", "entries"} - set(obj):
            raise ChainError("betti table file lacks provenance/s_valid/entries")
        entries = {}
        for e in obj["entries"]:
            entries[(e["s"], e["t"])] = e["dim"]
        return cls(entries, obj["s_valid"], obj["provenance"])

    def render(self) -> str:
        """Small human-readable table: rows s descending, columns t."""
        if not self.entries:
            return f"(empty, s_valid={self.s_valid})"
        ss = sorted({s for (s, _) in self.entries})
        ts = self.t_range()
        head = "s\\t " + " ".join(f"{t:>4}" for t in ts)
        lines = [head]
        for s in reversed(range(0, max(ss) + 1)):
            row = [f"{self.dim(s, t):>4}" if self.dim(s, t) else "   ." for t in ts]
            lines.append(f"{s:>3} " + " ".join(row))
        return "\n".join(lines)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def __repr__(self):
        return f"BettiTable({dict(sorted(self.entries.items()))}, s_valid={self.s_valid})"


def _t_blocks(gens) -> dict:
    out: dict = {}
    for i, (_, t) in enumerate(gens):
        out.setdefault(t, []).append(i)
    return out


class ChainComplex:
    """Levels of (name, t) generators with differentials d_s: s -> s-1.

    diffs[0] is None; diffs[s] has shape len(levels[s-1]) x len(levels[s]).
    exact_top means the complex genuinely stops at the top level, so every
    degree is trusted; otherwise s_valid defaults to top - 1.
    """

    __slots__ = ("field", "levels", "diffs", "s_valid", "exact_top")

    def __init__(self, field: Field, levels, diffs, s_valid=None, exact_top=False):
        self.field = field
        self.levels = [tuple(lv) for lv in levels]
        self.diffs = list(diffs)
        if len(self.diffs) != len(self.levels):
            raise ChainError("need one differential slot per level")
        self.exact_top = bool(exact_top)
        top = len(self.levels) - 1
        if self.exact_top:
            self.s_valid = top
        elif s_valid is None:
            self.s_valid = top - 1
        else:
            if s_valid > top:
                raise ChainError(f"s_valid {s_valid} beyond top level {top}")
            self.s_valid = s_valid
        self._check_shapes()

    @property
    def top(self) -> int:
        return len(self.levels) - 1

    def level_dim(self, s: int) -> int:
        return len(self.levels[s]) if 0 <= s <= self.top else 0

    def _check_shapes(self):
        if self.top < 0:
            raise ChainError("a complex needs at least one level")
        if self.diffs[0] is not None:
            raise ChainError("diffs[0] must be None")
        for s in range(1, self.top + 1):
            d = self.diffs[s]
            if (d.nrows, d.ncols) != (self.level_dim(s - 1), self.level_dim(s)):
                raise ChainError(
                    f"differential at level {s} has shape {d.nrows}x{d.ncols}, "
                    f"expected {self.level_dim(s - 1)}x{self.level_dim(s)}"
                )
            if d.field != self.field:
                raise ChainError(f"differential at level {s} is over the wrong field")

    def validate(self):
        """d^2 = 0 and internal-degree preservation, checked exactly."""
        for s in range(2, self.top + 1):
            if not (self.diffs[s - 1] @ self.diffs[s]).is_zero():
                raise ChainError(f"d^2 != 0 between levels {s} and {s - 2}")
        for s in range(1, self.top + 1):
            src = self.levels[s]
            tgt = self.levels[s - 1]
            for j, col in enumerate(self.diffs[s].cols):
                for i, v in col.items():
                    if v != self.field.zero and tgt[i][1] != src[j][1]:
                        raise ChainError(
                            f"differential at level {s} mixes internal degrees: "
                            f"generator {src[j][0]!r} (t={src[j][1]}) hits "
                            f"{tgt[i][0]!r} (t={tgt[i][1]})"
                        )
        return self

    def homology(self, s_max: int | None = None, provenance: str = "chain") -> BettiTable:
        """Betti table for s <= s_max, refusing windows beyond s_valid."""
        if s_max is None:
            s_max = self.s_valid
        if s_max > self.s_valid:
            raise ChainError(
                f"homology requested to s={s_max} but trusted only to {self.s_valid}"
            )
        if s_max < 0:
            return BettiTable({}, s_max, provenance)
        blocks = [_t_blocks(lv) for lv in self.levels]
        out = {}
        for s in range(0, s_max + 1):
            for t, idx in blocks[s].items():
                dim = len(idx)
                r_out = 0
                if s >= 1:
                    rows = blocks[s - 1].get(t, [])
                    r_out = self.diffs[s].restrict(rows, idx).rank()
                r_in = 0
                if s + 1 <= self.top:
                    cols_up = blocks[s + 1].get(t, [])
                    if cols_up:
                        r_in = self.diffs[s + 1].restrict(idx, cols_up).rank()
                h = dim - r_out - r_in
                if h:
                    out[(s, t)] = h
        return BettiTable(out, s_max, provenance)

    def __repr__(self):
        dims = "/".join(str(self.level_dim(s)) for s in range(self.top + 1))
        return f"ChainComplex(dims={dims}, s_valid={self.s_valid})"


def homology(C: ChainComplex, s_max: int | None = None) -> BettiTable:
    return C.homology(s_max)


class ChainMap:
    """Level matrices f_s commuting with d and preserving t."""

    __slots__ = ("source", "target", "mats")

    def __init__(self, source: ChainComplex, target: ChainComplex, mats):
        if source.field != target.field:
            raise ChainError("chain map needs a common field")
        if len(mats) != source.top + 1 or source.top != target.top:
            raise ChainError("chain map needs one matrix per level on both sides")
        self.source = source
        self.target = target
        self.mats = list(mats)
        for s, m in enumerate(self.mats):
            if (m.nrows, m.ncols) != (target.level_dim(s), source.level_dim(s)):
                raise ChainError(f"level {s} matrix has the wrong shape")
        self._validate()

    def _validate(self):
        field = self.source.field
        for s in range(0, self.source.top + 1):
            src = self.source.levels[s]
            tgt = self.target.levels[s]
            for j, col in enumerate(self.mats[s].cols):
                for i, v in col.items():
                    if v != field.zero and tgt[i][1] != src[j][1]:
                        raise ChainError(
                            f"chain map mixes internal degrees at level {s}"
                        )
        for s in range(1, self.source.top + 1):
            left = self.target.diffs[s] @ self.mats[s]
            right = self.mats[s - 1] @ self.source.diffs[s]
            if left != right:
                raise ChainError(f"chain map does not commute with d at level {s}")


def cone(f: ChainMap) -> ChainComplex:
    """Mapping cone: level s = target_s + source_{s-1}, d = [[d_tgt, f], [0, -d_src]]."""
    src, tgt = f.source, f.target
    field = src.field
    top = max(src.top + 1, tgt.top)
    levels = []
    for s in range(top + 1):
        gens = [(("tgt", name), t) for name, t in (tgt.levels[s] if s <= tgt.top else ())]
        if 1 <= s <= src.top + 1:
            gens += [(("src", name), t) for name, t in src.levels[s - 1]]
        levels.append(gens)
    diffs: list = [None]
    for s in range(1, top + 1):
        nt = tgt.level_dim(s)
        ns = src.level_dim(s - 1)
        mt = tgt.level_dim(s - 1)
        ms = src.level_dim(s - 2) if s >= 2 else 0
        d = SMat(mt + ms, nt + ns, field)
        if s <= tgt.top:
            for j, col in enumerate(tgt.diffs[s].cols):
                for i, v in col.items():
                    d.add_at(i, j, v)
        for j, col in enumerate(f.mats[s - 1].cols):
            for i, v in col.items():
                d.add_at(i, nt + j, v)
        if s >= 2 and s - 1 <= src.top:
            for j, col in enumerate(src.diffs[s - 1].cols):
                for i, v in col.items():
                    d.add_at(mt + i, nt + j, -v)
        diffs.append(d)
    exact = src.exact_top and tgt.exact_top
    s_valid = top if exact else min(src.s_valid + 1, tgt.s_valid)
    return ChainComplex(field, levels, diffs, s_valid=s_valid, exact_top=exact)


def is_quasi_iso(f: ChainMap, s_max: int) -> bool:
    """True when the mapping cone is exact through degree s_max."""
    C = cone(f)
    if s_max > C.s_valid:
        raise ChainError(
            f"quasi-isomorphism check to s={s_max} exceeds trusted range {C.s_valid}"
        )
    table = C.homology(s_max)
    return not table.entries


def tensor_complexes(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    """Graded tensor product with d(x@y) = dx@y + (-1)^a x@dy."""
    if C.field != D.field:
        raise ChainError("tensor factors must share a field")
    field = C.field
    top = C.top + D.top
    levels = []
    offsets: list[dict] = []
    for s in range(top + 1):
        gens = []
        offs = {}
        for a in range(max(0, s - D.top), min(s, C.top) + 1):
            b = s - a
            offs[a] = len(gens)
            for cn, ct in C.levels[a]:
                for dn, dt in D.levels[b]:
                    gens.append(((a, b, cn, dn), ct + dt))
        levels.append(gens)
        offsets.append(offs)
    diffs: list = [None]
    for s in range(1, top + 1):
        d = SMat(len(levels[s - 1]), len(levels[s]), field)
        for a in range(max(0, s - D.top), min(s, C.top) + 1):
            b = s - a
            base = offsets[s][a]
            nD = D.level_dim(b)
            # dC @ id
            if a >= 1:
                tgt_base = offsets[s - 1][a - 1]
                for jc, col in enumerate(C.diffs[a].cols):
                    for ic, v in col.items():
                        for jd in range(nD):
                            d.add_at(
                                tgt_base + ic * nD + jd, base + jc * nD + jd, v
                            )
            # (-1)^a id @ dD
            if b >= 1:
                tgt_base = offsets[s - 1][a]
                nDm = D.level_dim(b - 1)
                sign = field(-1) if a % 2 else field.one
                for jd, col in enumerate(D.diffs[b].cols):
                    for idd, v in col.items():
                        sv = sign * v
                        for jc in range(C.level_dim(a)):
                            d.add_at(
                                tgt_base + jc * nDm + idd, base + jc * nD + jd, sv
                            )
        diffs.append(d)
    exact = C.exact_top and D.exact_top
    if exact:
        return ChainComplex(field, levels, diffs, exact_top=True)
    bounds = []
    if not C.exact_top:
        bounds.append(C.s_valid)
    if not D.exact_top:
        bounds.append(D.s_valid)
    return ChainComplex(field, levels, diffs, s_valid=min(bounds))


# ------------------------------------------------------------- double side


class DoubleComplex:
    """Anticommuting bigraded complex, columns indexed by p, rows by q.

    gens[(p, q)] lists (name, t); d_h[(p, q)] maps to (p-1, q) and
    d_v[(p, q)] to (p, q-1), with d_h d_v + d_v d_h = 0 as stored.
    Validity: p_exact means no column truncation on the right; q_valid[p]
    bounds the trustworthy internal levels of column p (None = exact).
    """

    __slots__ = ("field", "gens", "d_h", "d_v", "p_exact", "q_valid")

    def __init__(self, field, gens, d_h, d_v, p_exact=True, q_valid=None):
        self.field = field
        self.gens = {k: tuple(v) for k, v in gens.items() if v}
        self.d_h = d_h
        self.d_v = d_v
        self.p_exact = bool(p_exact)
        self.q_valid = dict(q_valid or {})

    @classmethod
    def from_commuting(cls, field, gens, d_h, d_v, p_exact=True, q_valid=None):
        """Build from commuting squares; the vertical maps at column p get
        multiplied by (-1)^p so squares anticommute."""
        twisted = {}
        for (p, q), m in d_v.items():
            twisted[(p, q)] = m.scale(field(-1)) if p % 2 else m
        return cls(field, gens, d_h, twisted, p_exact=p_exact, q_valid=q_valid)

    def dim(self, p: int, q: int) -> int:
        return len(self.gens.get((p, q), ()))

    @property
    def p_range(self):
        return sorted({p for (p, _) in self.gens})

    @property
    def q_range(self):
        return sorted({q for (_, q) in self.gens})

    def _mat(self, table, p, q, tp, tq) -> SMat:
        m = table.get((p, q))
        if m is None:
            return SMat(self.dim(tp, tq), self.dim(p, q), self.field)
        return m

    def h(self, p, q) -> SMat:
        return self._mat(self.d_h, p, q, p - 1, q)

    def v(self, p, q) -> SMat:
        return self._mat(self.d_v, p, q, p, q - 1)

    def validate(self):
        for (p, q) in self.gens:
            hm = self.h(p, q)
            vm = self.v(p, q)
            if (hm.nrows, hm.ncols) != (self.dim(p - 1, q), self.dim(p, q)):
                raise ChainError(f"horizontal map at ({p}, {q}) has the wrong shape")
            if (vm.nrows, vm.ncols) != (self.dim(p, q - 1), self.dim(p, q)):
                raise ChainError(f"vertical map at ({p}, {q}) has the wrong shape")
            if not (self.h(p - 1, q) @ hm).is_zero():
                raise ChainError(f"d_h^2 != 0 at ({p}, {q})")
            if not (self.v(p, q - 1) @ vm).is_zero():
                raise ChainError(f"d_v^2 != 0 at ({p}, {q})")
            anti = (self.h(p, q - 1) @ vm) + (self.v(p - 1, q) @ hm)
            if not anti.is_zero():
                raise ChainError(f"squares do not anticommute at ({p}, {q})")
            for table, which in ((self.d_h, "horizontal"), (self.d_v, "vertical")):
                m = table.get((p, q))
                if m is None:
                    continue
                tgt = (
                    self.gens.get((p - 1, q), ())
                    if which == "horizontal"
                    else self.gens.get((p, q - 1), ())
                )
                src = self.gens[(p, q)]
                for j, col in enumerate(m.cols):
                    for i, val in col.items():
                        if val != self.field.zero and tgt[i][1] != src[j][1]:
                            raise ChainError(
                                f"{which} map at ({p}, {q}) mixes internal degrees"
                            )
        return self

    def s_bound(self):
        """(s_valid, exact) for anything totalized out of this data."""
        bounds = []
        if not self.p_exact:
            bounds.append(max(self.p_range, default=0) - 1)
        for p, qv in self.q_valid.items():
            if qv is not None:
                bounds.append(qv)
            del p
        if not bounds:
            top = max((p + q for (p, q) in self.gens), default=0)
            return top, True
        return min(bounds), False


def total_complex(D: DoubleComplex) -> ChainComplex:
    """Levels n = sum of blocks (p, q) with p + q = n, blocks by ascending p."""
    field = D.field
    keys = sorted(D.gens)
    if not keys:
        return ChainComplex(field, [()], [None], exact_top=True)
    top = max(p + q for (p, q) in keys)
    levels = []
    offsets: list[dict] = []
    for n in range(top + 1):
        gens = []
        offs = {}
        for (p, q) in keys:
            if p + q == n:
                offs[(p, q)] = len(gens)
                gens.extend(((p, q, name), t) for name, t in D.gens[(p, q)])
        levels.append(gens)
        offsets.append(offs)
    diffs: list = [None]
    for n in range(1, top + 1):
        d = SMat(len(levels[n - 1]), len(levels[n]), field)
        for (p, q), base in offsets[n].items():
            hm = D.h(p, q)
            if (p - 1, q) in offsets[n - 1]:
                tb = offsets[n - 1][(p - 1, q)]
                for j, col in enumerate(hm.cols):
                    for i, v in col.items():
                        d.add_at(tb + i, base + j, v)
            vm = D.v(p, q)
            if (p, q - 1) in offsets[n - 1]:
                tb = offsets[n - 1][(p, q - 1)]
                for j, col in enumerate(vm.cols):
                    for i, v in col.items():
                        d.add_at(tb + i, base + j, v)
        diffs.append(d)
    s_valid, exact = D.s_bound()
    if exact:
        return ChainComplex(field, levels, diffs, exact_top=True)
    return ChainComplex(field, levels, diffs, s_valid=min(s_valid, top - 1))


class SpectralSequencePage:
    """One page: dimensions and differentials per (p, q, t), plus trust data.

    d_r at (p, q, t) maps chosen representatives to the representatives at
    (p - r, q + r - 1, t); entries outside the trusted total range are
    omitted entirely.
    """

    __slots__ = ("r", "entries", "d", "n_valid")

    def __init__(self, r, entries, d, n_valid):
        self.r = r
        self.entries = {k: v for k, v in entries.items() if v}
        self.d = d
        self.n_valid = n_valid

    def dim(self, p: int, q: int) -> int:
        return sum(v for (pp, qq, _), v in self.entries.items() if (pp, qq) == (p, q))

    def total(self, n: int) -> int:
        return sum(v for (p, q, _), v in self.entries.items() if p + q == n)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "n_valid": self.n_valid,
            "entries": [
                {"p": p, "q": q, "t": t, "dim": v}
                for (p, q, t), v in sorted(self.entries.items())
            ],
        }

    def __repr__(self):
        return f"SpectralSequencePage(r={self.r}, entries={dict(sorted(self.entries.items()))})"


def _filtration_data(D: DoubleComplex, t: int):
    """Per total degree n: ordered coords [(p, q, i)] (ascending p) restricted
    to internal degree t, plus the total differential between those levels."""
    keys = sorted(D.gens)
    if not keys:
        return [], []
    top = max(p + q for (p, q) in keys)
    coords = []
    for n in range(top + 1):
        here = []
        for (p, q) in keys:
            if p + q != n:
                continue
            for i, (_, tt) in enumerate(D.gens[(p, q)]):
                if tt == t:
                    here.append((p, q, i))
        here.sort()
        coords.append(here)
    index = [{c: k for k, c in enumerate(cs)} for cs in coords]
    mats = [None]
    for n in range(1, top + 1):
        m = SMat(len(coords[n - 1]), len(coords[n]), D.field)
        for k, (p, q, i) in enumerate(coords[n]):
            for tbl, tgt in ((D.d_h, (p - 1, q)), (D.d_v, (p, q - 1))):
                mm = tbl.get((p, q))
                if mm is None or tgt not in D.gens:
                    continue
                col = mm.cols[i]
                for ii, v in col.items():
                    dest = index[n - 1].get((tgt[0], tgt[1], ii))
                    if dest is not None:
                        m.add_at(dest, k, v)
        mats.append(m)
    return coords, mats


def _span_basis(vectors, nrows, field):
    """Column span as an SMat whose columns are the given sparse vectors."""
    return SMat(nrows, len(vectors), field, [dict(v) for v in vectors])


def _cycle_space(coords, mats, n, p, r, field):
    """Basis of {x in F_p level n : Dx in F_{p-r}}, as sparse dicts."""
    if n >= len(coords):
        return []
    cols = [k for k, (pp, _, _) in enumerate(coords[n]) if pp <= p]
    if not cols:
        return []
    if n == 0 or not coords[n - 1]:
        kernel_of = SMat(0, len(cols), field)
    else:
        rows = [k for k, (pp, _, _) in enumerate(coords[n - 1]) if pp > p - r]
        kernel_of = mats[n].restrict(rows, cols)
    out = []
    for v in kernel_of.nullspace():
        out.append({cols[j]: val for j, val in v.items()})
    return out


def _proj_rank(vectors, coords_n, p, field):
    """Rank of the span projected to coordinates with filtration exactly >= p."""
    if not vectors:
        return 0
    keep = {k for k, (pp, _, _) in enumerate(coords_n) if pp >= p}
    m = SMat(len(coords_n), len(vectors), field, [dict(v) for v in vectors])
    rows = sorted(keep)
    return m.restrict(rows, list(range(len(vectors)))).rank()


def sseq_pages(D: DoubleComplex, r_max: int) -> list:
    """Pages E^0..E^{r_max} of the column filtration, split by internal t.

    Dimensions come from the standard subquotient description
    E^r_p = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1}) computed through
    projections to the p-block; differentials act on representative bases.
    Entries with p + q beyond the trusted total range are refused (omitted).
    """
    field = D.field
    n_valid, exact = D.s_bound()
    keys = sorted(D.gens)
    if not keys:
        return [SpectralSequencePage(r, {}, {}, 0) for r in range(r_max + 1)]
    top = max(p + q for (p, q) in keys)
    if exact:
        n_valid = top
    ts = sorted({t for gs in D.gens.values() for (_, t) in gs})
    pages = [
        SpectralSequencePage(r, {}, {}, n_valid) for r in range(r_max + 1)
    ]
    for t in ts:
        coords, mats = _filtration_data(D, t)
        for r in range(r_max + 1):
            for (p, q) in keys:
                n = p + q
                if n > n_valid:
                    continue
                z_here = _cycle_space(coords, mats, n, p, r, field)
                if not z_here:
                    continue
                boundaries = []
                if n + 1 < len(coords):
                    z_up = _cycle_space(coords, mats, n + 1, p + r - 1, r - 1, field)
                    for v in z_up:
                        img = mats[n + 1].mul_vec(v)
                        if img:
                            boundaries.append(img)
                rank_z = _proj_rank(z_here, coords[n], p, field)
                rank_b = _proj_rank(boundaries, coords[n], p, field)
                dim = rank_z - rank_b
                if dim:
                    pages[r].entries[(p, q, t)] = dim
        # differentials on representatives
        for r in range(r_max + 1):
            _attach_differentials(pages[r], D, coords, mats, t, r, field, n_valid)
    return pages


def _representatives(coords, mats, n, p, r, field):
    """Representative vectors whose p-projections descend to a basis of E^r."""
    z_here = _cycle_space(coords, mats, n, p, r, field)
    if not z_here:
        return []
    boundaries = []
    if n + 1 < len(coords):
        for v in _cycle_space(coords, mats, n + 1, p + r - 1, r - 1, field):
            img = mats[n + 1].mul_vec(v)
            if img:
                boundaries.append(img)
    keep = [k for k, (pp, _, _) in enumerate(coords[n]) if pp >= p]
    nb = len(boundaries)
    stacked = SMat(
        len(coords[n]),
        nb + len(z_here),
        field,
        [dict(v) for v in boundaries] + [dict(v) for v in z_here],
    )
    proj = stacked.restrict(keep, list(range(nb + len(z_here))))
    pivots, _ = proj.rref()
    return [z_here[j - nb] for j in pivots if j >= nb]


def _attach_differentials(page, D, coords, mats, t, r, field, n_valid):
    for (p, q, tt), dim_src in list(page.entries.items()):
        if tt != t:
            continue
        n = p + q
        tp, tq = p - r, q + r - 1
        if (tp, tq, t) not in page.entries:
            if dim_src and tp >= 0 and n - 1 <= n_valid:
                # target is zero: record the zero matrix for shape fidelity
                page.d[(p, q, t)] = SMat(0, dim_src, field)
            continue
        reps = _representatives(coords, mats, n, p, r, field)
        tgt_reps = _representatives(coords, mats, n - 1, tp, r, field)
        tgt_bound = []
        if n < len(coords):
            for v in _cycle_space(coords, mats, n, tp + r - 1, r - 1, field):
                img = mats[n].mul_vec(v)
                if img:
                    tgt_bound.append(img)
        keep = [k for k, (pp, _, _) in enumerate(coords[n - 1]) if pp >= tp]
        nrep = len(tgt_reps)
        solver = SMat(
            len(coords[n - 1]),
            nrep + len(tgt_bound),
            field,
            [dict(v) for v in tgt_reps] + [dict(v) for v in tgt_bound],
        ).restrict(keep, list(range(nrep + len(tgt_bound))))
        out = SMat(nrep, len(reps), field)
        keep_idx = {k: i for i, k in enumerate(keep)}
        for j, rep in enumerate(reps):
            img = mats[n].mul_vec(rep)
            b = {}
            for k, v in img.items():
                ii = keep_idx.get(k)
                if ii is not None:
                    b[ii] = v
            sol = solver.solve(b)
            if sol is None:
                raise ChainError("page differential left its own page")
            for i, v in sol.items():
                if i < nrep and v != field.zero:
                    out.add_at(i, j, v)
        page.d[(p, q, t)] = out


def transpose_double(D: DoubleComplex, p_exact=True, q_valid=None) -> DoubleComplex:
    """Swap the two directions; anticommutation is preserved verbatim."""
    gens = {(q, p): v for (p, q), v in D.gens.items()}
    d_h = {(q, p): m for (p, q), m in D.d_v.items()}
    d_v = {(q, p): m for (p, q), m in D.d_h.items()}
    return DoubleComplex(D.field, gens, d_h, d_v, p_exact=p_exact, q_valid=q_valid)


def e_infinity(D: DoubleComplex):
    """(page, r_stab): the first page past every possible differential."""
    keys = sorted(D.gens)
    if not keys:
        return SpectralSequencePage(0, {}, {}, 0), 0
    p_span = max(p for (p, _) in keys) + 1
    q_span = max(q for (_, q) in keys) + 1
    r_stab = max(p_span, q_span) + 1
    return sseq_pages(D, r_stab)[r_stab], r_stab
