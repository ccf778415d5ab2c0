"""Named small algebras used by the test battery and shipped as JSON files.

Every constructor takes a field (default: rationals) where that makes
sense; the field-specific ones are fixed.
"""

from __future__ import annotations

from .algebra import AlgebraMap, GradedAlgebra, make_algebra
from .fields import GF, QQ, Field
from .matrix import SMat

__all__ = [
    "ground",
    "dual_numbers",
    "split_pair",
    "split_triple",
    "gf4",
    "exterior_line",
    "mat2",
    "dual_square",
    "dual_into_square",
    "dual_pair",
    "pair_into_dual_pair",
]


def ground(field: Field = QQ) -> GradedAlgebra:
    """The field itself, as a one-dimensional algebra."""
    return make_algebra(field, [("1", 0)], [1], [[[1]]], True)


def dual_numbers(field: Field = QQ) -> GradedAlgebra:
    """k[x]/(x^2) with x in degree zero."""
    z, o = 0, 1
    return make_algebra(
        field,
        [("1", 0), ("x", 0)],
        [o, z],
        [[[o, z], [z, o]], [[z, o], [z, z]]],
        True,
    )


def split_pair(field: Field = QQ) -> GradedAlgebra:
    """k x k on orthogonal idempotents."""
    z, o = 0, 1
    return make_algebra(
        field,
        [("e1", 0), ("e2", 0)],
        [o, o],
        [[[o, z], [z, z]], [[z, z], [z, o]]],
        True,
    )


def split_triple(field: Field = QQ) -> GradedAlgebra:
    """k x k x k on orthogonal idempotents."""
    z, o = 0, 1
    basis = [("e1", 0), ("e2", 0), ("e3", 0)]
    table = [
        [
            [o if i == j == k else z for k in range(3)]
            for j in range(3)
        ]
        for i in range(3)
    ]
    return make_algebra(field, basis, [o, o, o], table, True)


def gf4() -> GradedAlgebra:
    """The field with four elements as an algebra over GF(2): w^2 = w + 1."""
    f2 = GF(2)
    return make_algebra(
        f2,
        [("1", 0), ("w", 0)],
        [1, 0],
        [[[1, 0], [0, 1]], [[0, 1], [1, 1]]],
        True,
    )


def exterior_line(field: Field = QQ) -> GradedAlgebra:
    """Exterior algebra on one degree-one generator."""
    z, o = 0, 1
    return make_algebra(
        field,
        [("1", 0), ("x", 1)],
        [o, z],
        [[[o, z], [z, o]], [[z, o], [z, z]]],
        True,
    )


def mat2(field: Field = QQ) -> GradedAlgebra:
    """2x2 matrices on the elementary-matrix basis, not commutative."""
    z = 0
    names = ["E11", "E12", "E21", "E22"]
    pos = {(1, 1): 0, (1, 2): 1, (2, 1): 2, (2, 2): 3}
    table = []
    for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)]:
        row = []
        for (c, d) in [(1, 1), (1, 2), (2, 1), (2, 2)]:
            vec = [z] * 4
            if b == c:
                vec[pos[(a, d)]] = 1
            row.append(vec)
        table.append(row)
    unit = [1, z, z, 1]
    return make_algebra(field, [(n, 0) for n in names], unit, table, False)


def dual_square(field: Field = QQ) -> GradedAlgebra:
    """k[x]/(x^2) tensor k[y]/(y^2), written on the monomial basis."""
    z, o = 0, 1
    names = [("1", 0), ("x", 0), ("y", 0), ("xy", 0)]
    # exponent vectors for (x, y)
    exps = [(0, 0), (1, 0), (0, 1), (1, 1)]
    idx = {e: i for i, e in enumerate(exps)}
    table = []
    for ea in exps:
        row = []
        for eb in exps:
            vec = [z] * 4
            prod = (ea[0] + eb[0], ea[1] + eb[1])
            if prod[0] < 2 and prod[1] < 2:
                vec[idx[prod]] = o
            row.append(vec)
        table.append(row)
    return make_algebra(field, names, [o, z, z, z], table, True)


def dual_into_square(field: Field = QQ) -> AlgebraMap:
    """The base-change map k[x]/(x^2) -> k[x]/(x^2) (x) k[y]/(y^2), x -> x."""
    src = dual_numbers(field)
    tgt = dual_square(field)
    m = SMat(4, 2, field)
    m.add_at(0, 0, field.one)
    m.add_at(1, 1, field.one)
    return AlgebraMap(src, tgt, m)


def dual_pair(field: Field = QQ) -> GradedAlgebra:
    """The product (k[x]/(x^2)) x (k[x]/(x^2)), componentwise multiplication.

    Basis e1, x1, e2, x2 with e1 + e2 the unit and xi the nilpotent in
    component i.
    """
    z, o = 0, 1
    names = [("e1", 0), ("x1", 0), ("e2", 0), ("x2", 0)]
    # component c, exponent k for each basis slot
    slots = [(0, 0), (0, 1), (1, 0), (1, 1)]
    idx = {s: i for i, s in enumerate(slots)}
    table = []
    for (ca, ka) in slots:
        row = []
        for (cb, kb) in slots:
            vec = [z] * 4
            if ca == cb and ka + kb < 2:
                vec[idx[(ca, ka + kb)]] = o
            row.append(vec)
        table.append(row)
    return make_algebra(field, names, [o, z, o, z], table, True)


def pair_into_dual_pair(field: Field = QQ) -> AlgebraMap:
    """The unit map k x k -> (k[x]/(x^2)) x (k[x]/(x^2)), ei -> ei."""
    src = split_pair(field)
    tgt = dual_pair(field)
    m = SMat(4, 2, field)
    m.add_at(0, 0, field.one)
    m.add_at(2, 1, field.one)
    return AlgebraMap(src, tgt, m)
