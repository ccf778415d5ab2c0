"""Cobar cochains: identity collapse, cohomology, center detection."""

from fractions import Fraction

import pytest

from hhx.algebra import center, is_etale, tensor_algebras
from hhx.catalog import (
    dual_numbers,
    exterior_line,
    gf4,
    ground,
    mat2,
    split_pair,
    split_triple,
)
from hhx.chains import ChainError
from hhx.cobar import (
    AModule,
    cobar,
    cobar_complex,
    envelope_bimodule,
    hochschild_cohomology,
    regular_module,
)


def profile(A):
    out = {}
    for d in A.degrees:
        out[d] = out.get(d, 0) + 1
    return out


# ---------------------------------------------------------- modules


def test_regular_module_validates():
    regular_module(dual_numbers()).validate()
    regular_module(mat2()).validate()


def test_bad_action_caught():
    A = dual_numbers()
    act = {(i, j): {0: A.field.one} for i in range(A.dim) for j in range(A.dim)}
    M = AModule(A, [(i, A.degrees[i]) for i in range(A.dim)], act)
    with pytest.raises(ChainError):
        M.validate()


def test_wrong_algebra_rejected():
    M = regular_module(dual_numbers())
    with pytest.raises(ChainError, match="different|given algebra"):
        cobar_complex(M, split_pair(), M, 2)


def test_level_bound_checked():
    M = regular_module(ground())
    with pytest.raises(ChainError, match="at least 1"):
        cobar_complex(M, ground(), M, 0)


def test_cohomology_trust_window():
    A = dual_numbers()
    M = regular_module(A)
    C = cobar_complex(M, A, M, 2)
    with pytest.raises(ChainError, match="trusted only"):
        C.cohomology(2, provenance="cobar")


# ------------------------------------------------ identity collapse


@pytest.mark.parametrize(
    "make",
    [dual_numbers, split_pair, exterior_line],
    ids=["dual", "QxQ", "exterior"],
)
def test_identity_collapse(make):
    A = make()
    M = regular_module(A)
    table = cobar(M, A, M, 3)
    assert table.entries == {(0, t): d for t, d in profile(A).items()}


def test_identity_collapse_noncommutative():
    A = mat2()
    M = regular_module(A)
    assert cobar(M, A, M, 3).entries == {(0, 0): 4}


# ------------------------------------------- Hochschild cohomology


def periodic_oracle_dims(n_top):
    """Cohomology of Q[x]/x2 from its two-periodic free resolution.

    Dualizing the resolution gives the two-periodic cochain complex
    A -0-> A -2x-> A -0-> A ...; ranks are computed here directly.
    """
    zero = [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(0)]]
    twox = [[Fraction(0), Fraction(0)], [Fraction(2), Fraction(0)]]

    def rank(mat):
        m = [row[:] for row in mat]
        r = 0
        for c in range(2):
            piv = next((i for i in range(r, 2) if m[i][c]), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            for i in range(2):
                if i != r and m[i][c]:
                    f = m[i][c] / m[r][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            r += 1
        return r

    maps = [zero if n % 2 == 0 else twox for n in range(n_top + 1)]
    dims = []
    for n in range(n_top + 1):
        incoming = 0 if n == 0 else rank(maps[n - 1])
        dims.append(2 - rank(maps[n]) - incoming)
    return dims


def test_dual_numbers_cohomology_periodic():
    want = periodic_oracle_dims(3)
    assert want == [2, 1, 1, 1]
    table = hochschild_cohomology(dual_numbers(), 4)
    assert table.entries == {(n, 0): d for n, d in enumerate(want)}


def test_matrix_algebra_cohomology_trivial():
    assert hochschild_cohomology(mat2(), 3).entries == {(0, 0): 1}


@pytest.mark.parametrize(
    "make, dim",
    [(split_pair, 2), (split_triple, 3), (gf4, 2)],
    ids=["QxQ", "Q3", "F4"],
)
def test_etale_concentrated(make, dim):
    A = make()
    assert is_etale(A)
    table = hochschild_cohomology(A, 3)
    assert table.entries == {(0, 0): dim}


def test_ground_cohomology():
    assert hochschild_cohomology(ground(), 3).entries == {(0, 0): 1}


def test_exterior_cohomology_polynomial_pattern():
    # odd generator in internal degree 1: cohomology is the algebra times
    # a polynomial class in bidegree (1, -1), two classes per level
    table = hochschild_cohomology(exterior_line(), 3)
    want = {}
    for n in range(3):
        want[(n, -n)] = 1
        want[(n, -n + 1)] = 1
    assert table.entries == want


@pytest.mark.parametrize(
    "make",
    [ground, dual_numbers, split_pair, split_triple, gf4, exterior_line, mat2],
    ids=["Q", "dual", "QxQ", "Q3", "F4", "exterior", "mat2"],
)
def test_level_zero_is_center(make):
    A = make()
    table = hochschild_cohomology(A, 2)
    got = {t: d for (n, t), d in table.entries.items() if n == 0}
    cent = {}
    for vec in center(A):
        t = next(A.degrees[i] for i, c in enumerate(vec) if c)
        cent[t] = cent.get(t, 0) + 1
    assert got == cent


def test_custom_module_roundtrip():
    A = dual_numbers()
    _E, reg = envelope_bimodule(A)
    table = hochschild_cohomology(A, 3, module=reg)
    assert table.entries == hochschild_cohomology(A, 3).entries


def test_envelope_mismatch_rejected():
    A = dual_numbers()
    _E, reg = envelope_bimodule(split_pair())
    with pytest.raises(ChainError):
        hochschild_cohomology(A, 2, module=reg)


def test_provenance():
    t1 = hochschild_cohomology(dual_numbers(), 2)
    assert t1.provenance == "hochschild-cohomology"
    A = ground()
    M = regular_module(A)
    assert cobar(M, A, M, 2).provenance == "cobar"


def test_deterministic():
    a = hochschild_cohomology(exterior_line(), 3).entries
    b = hochschild_cohomology(exterior_line(), 3).entries
    assert repr(sorted(a.items())) == repr(sorted(b.items()))
