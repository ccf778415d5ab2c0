"""Two-sided bar constructions over chain-level algebra models.

The pieces here glue the tensor-power machinery to resolutions: a model is
a chain complex with a compatible product, a module is its coefficients
concentrated in chain degree zero, and the two-sided bar of a pair of
modules produces a double complex whose total homology is the payoff.
"""

from __future__ import annotations

import itertools

from .algebra import GradedAlgebra, tensor_algebras
from .chains import (
    BettiTable,
    ChainComplex,
    ChainError,
    DoubleComplex,
    total_complex,
)
from .loday import _add_into, _rank_tuple, _shuffle_chain, _weights, loday_complex
from .matrix import SMat
from .simplicial import sphere_min

__all__ = [
    "DGAlgebraModel",
    "DGModule",
    "algebra_model",
    "loday_model",
    "augmentation_module",
    "circle_bar",
    "two_sided_bar",
    "hh_via_suspension",
]


class DGAlgebraModel:
    """A chain complex carrying a chain-level product and a unit cycle.

    ``mul(p, i, q, j)`` expands the product of the i-th level-p and j-th
    level-q basis elements in level p + q coordinates; it is only defined
    while p + q stays inside the stored range.  ``unit`` is a sparse
    level-zero vector acting as a two-sided identity.  Signs follow total
    degree, chain level plus internal degree.
    """

    __slots__ = ("complex", "unit", "commutative", "_mul", "_cache")

    def __init__(self, complex: ChainComplex, mul, unit: dict, commutative: bool):
        self.complex = complex
        self.unit = dict(unit)
        self.commutative = bool(commutative)
        self._mul = mul
        self._cache: dict = {}

    @property
    def field(self):
        return self.complex.field

    def mul(self, p: int, i: int, q: int, j: int) -> dict:
        if p + q > self.complex.top:
            raise ChainError(
                f"product at levels ({p}, {q}) falls outside the stored range"
            )
        key = (p, i, q, j)
        out = self._cache.get(key)
        if out is None:
            out = self._mul(p, i, q, j)
            self._cache[key] = out
        return out

    def validate(self) -> "DGAlgebraModel":
        """Unit identity, Leibniz in total degree, and commutativity if flagged."""
        C = self.complex
        field = C.field
        ch = field.char
        one = field.one
        for p in range(C.top + 1):
            for i in range(C.level_dim(p)):
                for other, swap in ((self.unit, False), (self.unit, True)):
                    acc: dict = {}
                    for u, cu in other.items():
                        prod = self.mul(p, i, 0, u) if swap else self.mul(0, u, p, i)
                        for k, c in prod.items():
                            _add_into(acc, k, cu * c, ch)
                    if acc != {i: one}:
                        side = "right" if swap else "left"
                        raise ChainError(
                            f"unit fails on the {side} at level {p}, index {i}"
                        )
        for p in range(C.top + 1):
            for q in range(C.top + 1 - p):
                n = p + q
                if n == 0:
                    continue
                d_n = C.diffs[n]
                for i in range(C.level_dim(p)):
                    t_i = C.levels[p][i][1]
                    x_odd = (p + t_i) % 2
                    for j in range(C.level_dim(q)):
                        lhs: dict = {}
                        for k, c in self.mul(p, i, q, j).items():
                            for r, v in d_n.cols[k].items():
                                _add_into(lhs, r, c * v, ch)
                        rhs: dict = {}
                        if p >= 1:
                            for i2, c in C.diffs[p].cols[i].items():
                                for k, v in self.mul(p - 1, i2, q, j).items():
                                    _add_into(rhs, k, c * v, ch)
                        if q >= 1:
                            for j2, c in C.diffs[q].cols[j].items():
                                cc = -c if x_odd else c
                                for k, v in self.mul(p, i, q - 1, j2).items():
                                    _add_into(rhs, k, cc * v, ch)
                        if lhs != rhs:
                            raise ChainError(
                                f"Leibniz fails at levels ({p}, {q}), "
                                f"indices ({i}, {j})"
                            )
        if self.commutative:
            for p in range(C.top + 1):
                for q in range(p, C.top + 1 - p):
                    for i in range(C.level_dim(p)):
                        t_i = C.levels[p][i][1]
                        for j in range(C.level_dim(q)):
                            t_j = C.levels[q][j][1]
                            flip = ((p + t_i) * (q + t_j)) % 2
                            ba = self.mul(q, j, p, i)
                            if flip:
                                ba = {k: (-v) % ch if ch else -v for k, v in ba.items()}
                            if self.mul(p, i, q, j) != ba:
                                raise ChainError(
                                    f"commutativity fails at levels ({p}, {q})"
                                )
        return self


class DGModule:
    """Coefficients concentrated in chain degree zero, acted on by a model.

    ``gens`` lists (name, internal degree) pairs and ``act`` maps pairs
    (generator index, level-zero basis index) to sparse expansions over the
    generators.  ``side`` records whether the action is written m.b or b.n,
    which fixes the composition order checked by validate.
    """

    __slots__ = ("model", "gens", "act", "side")

    def __init__(self, model: DGAlgebraModel, gens, act: dict, side: str):
        if side not in ("right", "left"):
            raise ChainError(f"unknown module side {side!r}")
        self.model = model
        self.gens = tuple(gens)
        self.act = dict(act)
        self.side = side

    def validate(self) -> "DGModule":
        B = self.model
        field = B.field
        ch = field.char
        one = field.one
        dim0 = B.complex.level_dim(0)
        nm = len(self.gens)
        for i in range(nm):
            acc: dict = {}
            for u, cu in B.unit.items():
                for k, c in self.act.get((i, u), {}).items():
                    _add_into(acc, k, cu * c, ch)
            if acc != {i: one}:
                raise ChainError("module action does not respect the unit")
        for u in range(dim0):
            for v in range(dim0):
                prod = B.mul(0, u, 0, v)
                for i in range(nm):
                    via: dict = {}
                    for w, cw in prod.items():
                        for k, c in self.act.get((i, w), {}).items():
                            _add_into(via, k, cw * c, ch)
                    # apply one factor after the other, in the order the
                    # side dictates: (m.u).v against m.(uv), or u.(v.n)
                    # against (uv).n
                    first, second = (u, v) if self.side == "right" else (v, u)
                    steps: dict = {}
                    for k, c in self.act.get((i, first), {}).items():
                        for k2, c2 in self.act.get((k, second), {}).items():
                            _add_into(steps, k2, c * c2, ch)
                    if steps != via:
                        raise ChainError("module action fails associativity")
        if B.complex.top >= 1:
            d1 = B.complex.diffs[1]
            for j in range(d1.ncols):
                col = d1.cols[j]
                for i in range(nm):
                    acc = {}
                    for u, cu in col.items():
                        for k, c in self.act.get((i, u), {}).items():
                            _add_into(acc, k, cu * c, ch)
                    if acc:
                        raise ChainError(
                            "module action does not kill level-one boundaries"
                        )
        return self


def algebra_model(A: GradedAlgebra) -> DGAlgebraModel:
    """A graded algebra viewed as a one-level chain model."""
    field = A.field
    levels = [list(zip(A.names, A.degrees))]
    C = ChainComplex(field, levels, [None], exact_top=True)

    def mul(p, i, q, j, _A=A):
        return dict(_A.mul_basis(i, j))

    unit = {i: c for i, c in enumerate(A.unit) if c != field.zero}
    return DGAlgebraModel(C, mul, unit, A.commutative)


def loday_model(
    A: GradedAlgebra, X, q_top: int, validate: bool = True
) -> DGAlgebraModel:
    """Normalized tensor-power model of a space with the shuffle product.

    Products are stored up to level q_top, so anything consuming the model
    should stay inside that window.  A discrete space gives a model that is
    exact on the nose: every positive normalized level vanishes.
    """
    L = loday_complex(A, X, q_top)
    C, _frees, _pis = L.normalized_data()
    if all(C.level_dim(s) == 0 for s in range(1, C.top + 1)):
        C = ChainComplex(C.field, C.levels, C.diffs, exact_top=True)
    field = A.field
    ch = field.char
    one = field.one

    def mul(p, i, q, j, _L=L):
        return _shuffle_chain(_L, (p, {i: one}), (q, {j: one}))

    nverts = len(L.simps[0])
    wt0 = _weights(A.dim, nverts)
    sup = [(i, c) for i, c in enumerate(A.unit) if c != field.zero]
    unit: dict = {}
    for combo in itertools.product(sup, repeat=nverts):
        v = one
        for _, c in combo:
            v = v * c
        if ch:
            v %= ch
        key = _rank_tuple(tuple(i for i, _ in combo), wt0)
        _add_into(unit, key, v, ch)
    model = DGAlgebraModel(C, mul, unit, True)
    if validate:
        model.validate()
    return model


def augmentation_module(B: DGAlgebraModel, A: GradedAlgebra, side: str) -> DGModule:
    """A as coefficients of a model, acted on by multiplying out level zero.

    Needs the level-zero basis to be named by tuples of basis indices of A,
    which is what loday_model produces.
    """
    gens = list(zip(A.names, A.degrees))
    act: dict = {}
    for j, (phi, _t) in enumerate(B.complex.levels[0]):
        if not isinstance(phi, tuple):
            raise ChainError("level-zero names must be index tuples")
        for i in range(A.dim):
            word = (i, *phi) if side == "right" else (*phi, i)
            vec = A.product_chain(word)
            if vec:
                act[(i, j)] = vec
    return DGModule(B, gens, act, side)


def two_sided_bar(
    M: DGModule, B: DGAlgebraModel, N: DGModule, p_max: int
) -> DoubleComplex:
    """Double complex M (x) B^p (x) N: bar faces across, inner differential down.

    Columns stop at p_max and the inner grading stops at the stored top of
    the model, so the trustworthy total window is min(p_max - 1, window of
    B).  Module actions get their unit, associativity, and boundary checks
    here before anything is built.
    """
    if p_max < 1:
        raise ChainError(f"column bound must be at least 1, got {p_max}")
    if M.model is not B or N.model is not B:
        raise ChainError("modules must be defined over the given model")
    if M.side != "right" or N.side != "left":
        raise ChainError("need a right module on the left and a left module on the right")
    M.validate()
    N.validate()
    field = B.field
    ch = field.char
    C = B.complex
    q_top = C.top
    flat = [(q, j) for q in range(q_top + 1) for j in range(C.level_dim(q))]
    tB = {(q, j): C.levels[q][j][1] for (q, j) in flat}
    gens: dict = {}
    index: dict = {}
    for p in range(p_max + 1):
        for i_m in range(len(M.gens)):
            t_m = M.gens[i_m][1]
            for word in itertools.product(flat, repeat=p):
                q = sum(w[0] for w in word)
                if q > q_top:
                    continue
                for k_n in range(len(N.gens)):
                    t = t_m + sum(tB[w] for w in word) + N.gens[k_n][1]
                    name = (i_m, word, k_n)
                    bucket = gens.setdefault((p, q), [])
                    index.setdefault((p, q), {})[name] = len(bucket)
                    bucket.append((name, t))
    d_h: dict = {}
    d_v: dict = {}
    for (p, q), bucket in sorted(gens.items()):
        if q >= 1 and (p, q - 1) in gens:
            rows = index[(p, q - 1)]
            m = SMat(len(gens[(p, q - 1)]), len(bucket), field)
            for cpos, (name, _t) in enumerate(bucket):
                i_m, word, k_n = name
                pref = M.gens[i_m][1]
                for l, (ql, jl) in enumerate(word):
                    if ql >= 1:
                        neg = pref % 2 == 1
                        for j2, c in C.diffs[ql].cols[jl].items():
                            w2 = word[:l] + ((ql - 1, j2),) + word[l + 1 :]
                            v = -c if neg else c
                            if ch:
                                v %= ch
                            m.add_at(rows[(i_m, w2, k_n)], cpos, v)
                    pref += ql + tB[(ql, jl)]
            d_v[(p, q)] = m
        if p >= 1:
            rows = index.get((p - 1, q), {})
            m = SMat(len(gens.get((p - 1, q), ())), len(bucket), field)
            for cpos, (name, _t) in enumerate(bucket):
                i_m, word, k_n = name
                q1, j1 = word[0]
                if q1 == 0:
                    for i2, c in M.act.get((i_m, j1), {}).items():
                        m.add_at(rows[(i2, word[1:], k_n)], cpos, c)
                for f in range(1, p):
                    qa, ja = word[f - 1]
                    qb, jb = word[f]
                    prod = B.mul(qa, ja, qb, jb)
                    if not prod:
                        continue
                    neg = f % 2 == 1
                    for j2, c in prod.items():
                        w2 = word[: f - 1] + ((qa + qb, j2),) + word[f + 1 :]
                        v = -c if neg else c
                        if ch:
                            v %= ch
                        m.add_at(rows[(i_m, w2, k_n)], cpos, v)
                qp, jp = word[p - 1]
                if qp == 0:
                    neg = p % 2 == 1
                    for k2, c in N.act.get((k_n, jp), {}).items():
                        v = -c if neg else c
                        if ch:
                            v %= ch
                        m.add_at(rows[(i_m, word[: p - 1], k2)], cpos, v)
            d_h[(p, q)] = m
    qv = None if C.exact_top else C.s_valid
    q_valid = {p: qv for p in range(p_max + 1)}
    D = DoubleComplex.from_commuting(
        field, gens, d_h, d_v, p_exact=False, q_valid=q_valid
    )
    D.validate()
    return D


def circle_bar(A: GradedAlgebra, p_max: int, validate: bool = True) -> DoubleComplex:
    """Two-sided bar of A over A (x) A.

    The total complex carries the homology of A over the circle; columns
    run to p_max, so totalization is trusted for s <= p_max - 1.
    """
    if not A.commutative:
        raise ChainError("the two-sided bar over A (x) A needs a commutative algebra")
    E = tensor_algebras(A, A)
    B = algebra_model(E)
    if validate:
        B.validate()
    dA = A.dim
    gens = list(zip(A.names, A.degrees))
    act_r: dict = {}
    act_l: dict = {}
    for a in range(dA):
        for b in range(dA):
            jE = a * dA + b
            for i in range(dA):
                vr = A.product_chain((i, a, b))
                if vr:
                    act_r[(i, jE)] = vr
                vl = A.product_chain((a, b, i))
                if vl:
                    act_l[(i, jE)] = vl
    M = DGModule(B, gens, act_r, "right")
    N = DGModule(B, gens, act_l, "left")
    return two_sided_bar(M, B, N, p_max)


def hh_via_suspension(
    A: GradedAlgebra, d: int, s_max: int, validate: bool = True
) -> BettiTable:
    """Homology over the d-sphere through the two-sided bar construction.

    The base model is A (x) A when d = 1; above that it is the normalized
    model of the (d-1)-sphere with the shuffle product, truncated to the
    window the requested range needs.
    """
    if d < 1:
        raise ChainError(f"sphere dimension must be at least 1, got {d}")
    if s_max < 0:
        raise ChainError(f"window bound must be nonnegative, got {s_max}")
    if d == 1:
        D = circle_bar(A, s_max + 1, validate=validate)
    else:
        B = loday_model(A, sphere_min(d - 1), s_max + 1, validate=validate)
        M = augmentation_module(B, A, "right")
        N = augmentation_module(B, A, "left")
        D = two_sided_bar(M, B, N, s_max + 1)
    T = total_complex(D)
    if not T.exact_top and s_max > T.s_valid:
        raise ChainError(f"bar window exhausted: achievable s_valid is {T.s_valid}")
    return T.homology(s_max, provenance="bar-suspension")
