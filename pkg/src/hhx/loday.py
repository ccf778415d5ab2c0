"""Chain models built from tensor powers of an algebra over a space.

For a commutative graded algebra A and a finite space X, level n is spanned
by functions from the n-simplices of X to the basis of A.  A face map of X
regroups tensor factors and multiplies the ones that collide; the
alternating sum of these gives the differential, and homology is higher
Hochschild homology of A over X.  An optional base turns every tensor
product into one over a subalgebra.
"""

from __future__ import annotations

import itertools

from .algebra import AlgebraError, AlgebraMap, GradedAlgebra
from .chains import BettiTable, ChainComplex, ChainMap
from .fields import Field
from .matrix import SMat
from .simplicial import SimplicialMap, SimplicialSet

__all__ = [
    "LodayComplex",
    "loday_complex",
    "normalize",
    "hh",
    "induced_map",
    "shuffle_product",
    "cyclic_bar_oracle",
    "oracle_hh",
]


def _weights(d: int, m: int) -> list[int]:
    # big-endian: first factor is the most significant digit
    return [d ** (m - 1 - k) for k in range(m)]


def _rank_tuple(phi, wt) -> int:
    g = 0
    for i, w in zip(phi, wt):
        g += i * w
    return g


def _unrank(g: int, d: int, m: int) -> tuple:
    out = [0] * m
    for k in range(m - 1, -1, -1):
        out[k] = g % d
        g //= d
    return tuple(out)


def _add_into(acc: dict, key, c, ch: int) -> None:
    nv = acc.get(key, 0) + c
    if ch:
        nv %= ch
    if nv == 0:
        acc.pop(key, None)
    else:
        acc[key] = nv


class _Push:
    """Linear map A^(x)m -> A^(x)m' induced by a map of position sets.

    tp[k] is the target position of source position k.  Each target fiber
    multiplies in source order, empty fibers receive the unit, and moving
    odd factors past each other while regrouping contributes the usual
    sign.
    """

    __slots__ = ("A", "tp", "fibers", "odd", "pairs")

    def __init__(self, A: GradedAlgebra, tp, m_tgt: int):
        self.A = A
        self.tp = list(tp)
        self.fibers = [[] for _ in range(m_tgt)]
        for k, p in enumerate(self.tp):
            self.fibers[p].append(k)
        self.odd = [d % 2 == 1 for d in A.degrees]
        if any(self.odd):
            m = len(self.tp)
            self.pairs = [
                (k, l)
                for k in range(m)
                for l in range(k + 1, m)
                if self.tp[k] > self.tp[l]
            ]
        else:
            self.pairs = None

    def column(self, phi) -> dict:
        """Image of a basis function, keyed by target tuple."""
        A = self.A
        ch = A.field.char
        sign = 1
        if self.pairs is not None:
            flips = 0
            for k, l in self.pairs:
                if self.odd[phi[k]] and self.odd[phi[l]]:
                    flips += 1
            if flips % 2:
                sign = -1
        parts = []
        for fib in self.fibers:
            exp = A.product_chain(phi[k] for k in fib)
            if not exp:
                return {}
            parts.append(list(exp.items()))
        out: dict = {}
        for combo in itertools.product(*parts):
            psi = tuple(i for i, _ in combo)
            c = sign
            for _, cv in combo:
                c = c * cv
            _add_into(out, psi, c, ch)
        return out


def _to_level(vec, wt, pi, ch) -> dict:
    """Rewrite a tuple-keyed vector in level coordinates, through pi if given."""
    out: dict = {}
    for psi, c in vec.items():
        g = _rank_tuple(psi, wt)
        if pi is None:
            _add_into(out, g, c, ch)
        else:
            for pos, cc in pi[g].items():
                _add_into(out, pos, c * cc, ch)
    return out


def _base_action(A: GradedAlgebra, base: AlgebraMap):
    """act[tau][i] = sparse expansion of (base of e_tau) * e_i."""
    T = base.source
    act = []
    for tau in range(T.dim):
        t_img = base.apply(T.basis_vector(tau))
        row = []
        for i in range(A.dim):
            prod = A.multiply(t_img, A.basis_vector(i))
            row.append({k: v for k, v in enumerate(prod) if v != A.field.zero})
        act.append(row)
    return act


def _module_basis(A: GradedAlgebra, base: AlgebraMap) -> list[dict]:
    """Free basis of A over the base subalgebra, certified by rank.

    Candidate generators are basis elements and two-element sums; at each
    step the candidate whose base-span grows the running span the most is
    kept, and the growth must be a full copy of the base.  A successful run
    proves freeness (the evaluation map is onto and the dimensions match);
    failure means not free, or free in a way this search cannot see, which
    does not happen for the shipped algebras.
    """
    field = A.field
    T = base.source
    dT = T.dim
    if A.dim % dT:
        raise AlgebraError(
            f"algebra is not free over the base: dimension {A.dim} is not a "
            f"multiple of the base dimension {dT}"
        )
    act = _base_action(A, base)
    one = field.one
    cands: list[dict] = [{i: one} for i in range(A.dim)]
    cands += [
        {i: one, j: one} for i in range(A.dim) for j in range(i + 1, A.dim)
    ]
    ch = field.char

    def spans(cand: dict) -> list[dict]:
        cols = []
        for tau in range(dT):
            col: dict = {}
            for i, ci in cand.items():
                for k, v in act[tau][i].items():
                    _add_into(col, k, ci * v, ch)
            cols.append(col)
        return cols

    cols: list[dict] = []
    rank = 0
    chosen: list[dict] = []
    while rank < A.dim:
        best = None
        best_growth = 0
        best_cols = None
        for cand in cands:
            tc = spans(cand)
            grown = SMat(A.dim, len(cols) + dT, field, cols + tc).rank()
            if grown - rank > best_growth:
                best, best_growth, best_cols = cand, grown - rank, tc
                if best_growth == dT:
                    break
        if best_growth < dT:
            raise AlgebraError(
                "algebra is not free over the base: no generator spans a "
                "full copy of the base over the current span"
            )
        cols += best_cols
        rank += dT
        chosen.append(best)
    return chosen


def _relative_quotient(A: GradedAlgebra, base: AlgebraMap, m: int):
    """Identify base actions on consecutive factors of A^(x)m.

    Returns (free, pi): free lists the surviving global indices, pi rewrites
    any global index as {position in free: coeff}.  pi is None when there is
    nothing to quotient.
    """
    dA = A.dim
    if m < 2:
        return list(range(dA ** m)), None
    field = A.field
    ch = field.char
    T = base.source
    act = _base_action(A, base)
    wt = _weights(dA, m)
    rows = []
    for phi in itertools.product(range(dA), repeat=m):
        g = _rank_tuple(phi, wt)
        for j in range(m - 1):
            for tau in range(T.dim):
                row: dict = {}
                for k, c in act[tau][phi[j]].items():
                    _add_into(row, g + (k - phi[j]) * wt[j], c, ch)
                for k, c in act[tau][phi[j + 1]].items():
                    _add_into(row, g + (k - phi[j + 1]) * wt[j + 1], -c, ch)
                if row:
                    rows.append(row)
    rel = SMat.from_entries(
        len(rows),
        dA ** m,
        field,
        [(r, c, v) for r, row in enumerate(rows) for c, v in row.items()],
    )
    pivots, rrows = rel.rref()
    pivot_set = set(pivots)
    free = [c for c in range(dA ** m) if c not in pivot_set]
    pos = {c: p for p, c in enumerate(free)}
    pi: list[dict] = [None] * (dA ** m)
    for c in free:
        pi[c] = {pos[c]: field.one}
    for c, row in zip(pivots, rrows):
        out = {}
        for f, v in row.items():
            if f == c:
                continue
            nv = -v
            if ch:
                nv %= ch
            if nv != 0:
                out[pos[f]] = nv
        pi[c] = out
    return free, pi


def _check_base(A: GradedAlgebra, base) -> None:
    if not isinstance(base, AlgebraMap):
        raise AlgebraError("base must be an algebra map into the coefficients")
    if base.target != A:
        raise AlgebraError("base map target differs from the coefficient algebra")
    if not base.source.commutative:
        raise AlgebraError("base algebra must be commutative")
    _module_basis(A, base)


class LodayComplex:
    """Tensor-power chain model of an algebra over a space.

    complex holds the levels and differentials; the rest is the data needed
    to normalize, induce maps, and multiply chains.
    """

    __slots__ = ("complex", "algebra", "space", "top", "base", "simps", "quots", "_norm")

    def __init__(self, complex: ChainComplex, algebra, space, top, base, simps, quots):
        self.complex = complex
        self.algebra = algebra
        self.space = space
        self.top = top
        self.base = base
        self.simps = simps
        self.quots = quots
        self._norm = None

    def level_pi(self, n: int):
        q = self.quots[n] if self.quots is not None else None
        return q[1] if q is not None else None

    def normalized_data(self):
        """(normalized complex, free coords per level, projections per level).

        The degenerate part of each level is the span of all degeneracy
        images; the quotient is taken in canonical echelon coordinates, so
        two runs agree basis-for-basis.
        """
        if self._norm is not None:
            return self._norm
        A = self.algebra
        X = self.space
        field: Field = A.field
        ch = field.char
        dA = A.dim
        C = self.complex
        frees: list[list[int]] = [list(range(len(C.levels[0])))]
        pis: list = [None]
        nlevels = [list(C.levels[0])]
        for n in range(1, self.top + 1):
            dim_n = len(C.levels[n])
            tindex = {s: k for k, s in enumerate(self.simps[n])}
            wt = _weights(dA, len(self.simps[n]))
            pi_q = self.level_pi(n)
            rows = []
            for j in range(n):
                tp = [tindex[X.degenerate(s, j)] for s in self.simps[n - 1]]
                push = _Push(A, tp, len(self.simps[n]))
                for phi, _ in C.levels[n - 1]:
                    img = _to_level(push.column(phi), wt, pi_q, ch)
                    if img:
                        rows.append(img)
            rel = SMat.from_entries(
                len(rows),
                dim_n,
                field,
                [(r, c, v) for r, row in enumerate(rows) for c, v in row.items()],
            )
            pivots, rrows = rel.rref()
            pivot_set = set(pivots)
            free = [c for c in range(dim_n) if c not in pivot_set]
            pos = {c: p for p, c in enumerate(free)}
            pi: list = [None] * dim_n
            for c in free:
                pi[c] = {pos[c]: field.one}
            for c, row in zip(pivots, rrows):
                out = {}
                for f, v in row.items():
                    if f == c:
                        continue
                    nv = -v
                    if ch:
                        nv %= ch
                    if nv != 0:
                        out[pos[f]] = nv
                pi[c] = out
            frees.append(free)
            pis.append(pi)
            nlevels.append([C.levels[n][c] for c in free])
        ndiffs: list = [None]
        for n in range(1, self.top + 1):
            pi_prev = pis[n - 1]
            cols = []
            for c in frees[n]:
                dcol = C.diffs[n].cols[c]
                if pi_prev is None:
                    acc = {k: v for k, v in dcol.items()}
                else:
                    acc = {}
                    for k, v in dcol.items():
                        for p, cc in pi_prev[k].items():
                            _add_into(acc, p, v * cc, ch)
                cols.append(acc)
            ndiffs.append(SMat(len(nlevels[n - 1]), len(frees[n]), field, cols))
        self._norm = (ChainComplex(field, nlevels, ndiffs), frees, pis)
        return self._norm


def loday_complex(
    A: GradedAlgebra, X: SimplicialSet, N: int, base: AlgebraMap | None = None
) -> LodayComplex:
    """Levels 0..N of the tensor-power model; homology trusted to N - 1."""
    if not A.commutative:
        raise AlgebraError(
            "tensor-power chains need a commutative algebra; use the cyclic "
            "oracle for associative ones"
        )
    if N < 1:
        raise ValueError(f"level bound must be at least 1, got {N}")
    if base is not None:
        _check_base(A, base)
    field = A.field
    ch = field.char
    dA = A.dim
    simps = [X.level(n) for n in range(N + 1)]
    quots = None
    if base is not None:
        quots = [_relative_quotient(A, base, len(simps[n])) for n in range(N + 1)]
    levels = []
    for n in range(N + 1):
        m = len(simps[n])
        if quots is None:
            names = list(itertools.product(range(dA), repeat=m))
        else:
            names = [_unrank(g, dA, m) for g in quots[n][0]]
        levels.append(
            [(phi, sum(A.degrees[i] for i in phi)) for phi in names]
        )
    diffs: list = [None]
    for n in range(1, N + 1):
        tindex = {s: k for k, s in enumerate(simps[n - 1])}
        wt = _weights(dA, len(simps[n - 1]))
        pi_prev = quots[n - 1][1] if quots is not None else None
        pushes = [
            _Push(A, [tindex[X.face(s, i)] for s in simps[n]], len(simps[n - 1]))
            for i in range(n + 1)
        ]
        cols = []
        for phi, _ in levels[n]:
            acc: dict = {}
            for i, push in enumerate(pushes):
                img = _to_level(push.column(phi), wt, pi_prev, ch)
                if i % 2:
                    for k, v in img.items():
                        _add_into(acc, k, -v, ch)
                else:
                    for k, v in img.items():
                        _add_into(acc, k, v, ch)
            cols.append(acc)
        diffs.append(SMat(len(levels[n - 1]), len(levels[n]), field, cols))
    C = ChainComplex(field, levels, diffs)
    return LodayComplex(C, A, X, N, base, simps, quots)


def normalize(L) -> ChainComplex:
    """Quotient by the degenerate part; a bare complex passes through."""
    if isinstance(L, ChainComplex):
        return L
    return L.normalized_data()[0]


def hh(
    A: GradedAlgebra,
    X: SimplicialSet,
    s_max: int,
    base: AlgebraMap | None = None,
) -> BettiTable:
    """Higher Hochschild homology of A over X up to level s_max."""
    if s_max < 0:
        raise ValueError(f"s_max must be at least 0, got {s_max}")
    L = loday_complex(A, X, s_max + 1, base)
    return normalize(L).homology(s_max, provenance="loday")


def induced_map(
    f: SimplicialMap, A: GradedAlgebra, N: int, normalized: bool = True
) -> ChainMap:
    """Chain map of tensor-power models along a map of spaces."""
    LX = loday_complex(A, f.source, N)
    LY = loday_complex(A, f.target, N)
    field = A.field
    ch = field.char
    dA = A.dim
    CX, freesX, _ = LX.normalized_data() if normalized else (LX.complex, None, None)
    CY, freesY, pisY = LY.normalized_data() if normalized else (LY.complex, None, None)
    mats = []
    for n in range(N + 1):
        tgt_level = LY.simps[n]
        tindex = {s: k for k, s in enumerate(tgt_level)}
        wt = _weights(dA, len(tgt_level))
        push = _Push(A, [tindex[f.apply(s)] for s in LX.simps[n]], len(tgt_level))
        if normalized:
            pi = pisY[n]
            cols = []
            for c in freesX[n]:
                phi = LX.complex.levels[n][c][0]
                cols.append(_to_level(push.column(phi), wt, pi, ch))
            mats.append(SMat(len(CY.levels[n]), len(CX.levels[n]), field, cols))
        else:
            cols = [
                _to_level(push.column(phi), wt, None, ch)
                for phi, _ in LX.complex.levels[n]
            ]
            mats.append(SMat(len(CY.levels[n]), len(CX.levels[n]), field, cols))
    return ChainMap(CX, CY, mats)


def _shuffle_sign(mu, nu) -> int:
    inv = 0
    for a in mu:
        for b in nu:
            if a > b:
                inv += 1
    return -1 if inv % 2 else 1


def _pointwise_product(A: GradedAlgebra, phi, psi) -> dict:
    """Slotwise product of two level functions, with the crossing sign."""
    ch = A.field.char
    sign = 1
    odd = [d % 2 == 1 for d in A.degrees]
    if any(odd):
        flips = 0
        m = len(phi)
        for x in range(m):
            if not odd[psi[x]]:
                continue
            for y in range(x + 1, m):
                if odd[phi[y]]:
                    flips += 1
        if flips % 2:
            sign = -1
    parts = []
    for x in range(len(phi)):
        exp = A.mul_basis(phi[x], psi[x])
        if not exp:
            return {}
        parts.append(list(exp.items()))
    out: dict = {}
    for combo in itertools.product(*parts):
        row = tuple(i for i, _ in combo)
        c = sign
        for _, cv in combo:
            c = c * cv
        _add_into(out, row, c, ch)
    return out


def _degeneracy_push(L: LodayComplex, level: int, js) -> _Push:
    """Composite degeneracy positions map, innermost first."""
    X = L.space
    src = L.simps[level]
    tgt = L.simps[level + len(js)]
    tindex = {s: k for k, s in enumerate(tgt)}
    tp = []
    for s in src:
        t = s
        for j in js:
            t = X.degenerate(t, j)
        tp.append(tindex[t])
    return _Push(L.algebra, tp, len(tgt))


def _shuffle_chain(L: LodayComplex, z1, z2) -> dict:
    """Chain-level shuffle product on normalized coordinates.

    Carries the extra sign (-1)^(s2 * t1) on top of the shuffle signs, so
    that both the Leibniz rule and commutativity read off the total degree
    s + t.
    """
    s1, v1 = z1
    s2, v2 = z2
    A = L.algebra
    field = A.field
    ch = field.char
    dA = A.dim
    C, frees, pis = L.normalized_data()
    top = s1 + s2
    wt = _weights(dA, len(L.simps[top]))
    pi = pis[top] if top >= 1 else None
    out: dict = {}
    for mu_set in itertools.combinations(range(s1 + s2), s1):
        mu = list(mu_set)
        nu = [k for k in range(s1 + s2) if k not in mu_set]
        eps = _shuffle_sign(mu, nu)
        pu = _degeneracy_push(L, s1, nu)
        pv = _degeneracy_push(L, s2, mu)
        left: dict = {}
        for c, a in v1.items():
            phi, t1 = C.levels[s1][c]
            if (s2 * t1) % 2:
                a = -a
            for tup, cv in pu.column(phi).items():
                _add_into(left, tup, a * cv, ch)
        right: dict = {}
        for c, a in v2.items():
            phi = C.levels[s2][c][0]
            for tup, cv in pv.column(phi).items():
                _add_into(right, tup, a * cv, ch)
        for phi, ca in left.items():
            for psi, cb in right.items():
                cc = ca * cb * eps
                for tup, cv in _pointwise_product(A, phi, psi).items():
                    for p, cp in _to_level({tup: cv}, wt, pi, ch).items():
                        _add_into(out, p, cc * cp, ch)
    return out


def shuffle_product(A: GradedAlgebra, X: SimplicialSet, z1, z2):
    """Product of two cycles in the normalized model, as (level, vector).

    Each argument is (s, vector) with the vector a sparse dict over the
    normalized basis at level s.  Rejects chains that are not cycles.
    """
    s1, v1 = z1
    s2, v2 = z2
    L = loday_complex(A, X, s1 + s2 + 1)
    C = normalize(L)
    for s, v, which in [(s1, v1, "first"), (s2, v2, "second")]:
        for c in v:
            if not 0 <= c < len(C.levels[s]):
                raise ValueError(f"{which} argument has a coordinate out of range")
        if s >= 1 and C.diffs[s].mul_vec(dict(v)):
            raise ValueError(f"{which} argument is not a cycle at level {s}")
    return s1 + s2, _shuffle_chain(L, (s1, dict(v1)), (s2, dict(v2)))


def cyclic_bar_oracle(A: GradedAlgebra, N: int) -> ChainComplex:
    """Cyclic tensor-power complex on slots 0..n, built without any space.

    Independent of the simplicial machinery on purpose; works for any
    associative algebra.  The wrap-around face multiplies the last factor
    onto the first and pays the sign for carrying it past the rest.
    """
    if N < 1:
        raise ValueError(f"level bound must be at least 1, got {N}")
    field = A.field
    ch = field.char
    dA = A.dim
    levels = []
    for n in range(N + 1):
        levels.append(
            [
                (phi, sum(A.degrees[i] for i in phi))
                for phi in itertools.product(range(dA), repeat=n + 1)
            ]
        )
    diffs: list = [None]
    for n in range(1, N + 1):
        wt = _weights(dA, n)
        cols = []
        for phi, _ in levels[n]:
            acc: dict = {}
            for i in range(n):
                sign = -1 if i % 2 else 1
                for k, c in A.mul_basis(phi[i], phi[i + 1]).items():
                    psi = phi[:i] + (k,) + phi[i + 2:]
                    _add_into(acc, _rank_tuple(psi, wt), sign * c, ch)
            wrap = n + A.degrees[phi[n]] * sum(A.degrees[phi[i]] for i in range(n))
            sign = -1 if wrap % 2 else 1
            for k, c in A.mul_basis(phi[n], phi[0]).items():
                psi = (k,) + phi[1:n]
                _add_into(acc, _rank_tuple(psi, wt), sign * c, ch)
            cols.append(acc)
        diffs.append(SMat(dA ** n, dA ** (n + 1), field, cols))
    return ChainComplex(field, levels, diffs)


def oracle_hh(A: GradedAlgebra, s_max: int) -> BettiTable:
    """Homology of the cyclic complex up to s_max, tagged as the oracle path."""
    if s_max < 0:
        raise ValueError(f"s_max must be at least 0, got {s_max}")
    return cyclic_bar_oracle(A, s_max + 1).homology(s_max, provenance="oracle")
