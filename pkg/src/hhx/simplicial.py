"""Finite simplicial sets presented by their non-degenerate cells.

A space is a list of cells; each cell of dimension d > 0 lists its d+1
faces, which may be degenerate.  Every simplex, degenerate or not, has a
unique normal form (word, base): base is a non-degenerate cell and word is
a strictly decreasing tuple of degeneracy indices, read left to right as
s_{w0} s_{w1} ... applied to the base.

Face and degeneracy operators act on normal forms through the usual
rewrite rules; levels are enumerated in a fixed order so downstream chain
groups have reproducible bases.
"""

from __future__ import annotations

from itertools import combinations

__all__ = [
    "SimplicialError",
    "Simp",
    "Cell",
    "SimplicialSet",
    "SimplicialMap",
    "make_space",
    "space_from_json",
    "space_to_json",
    "parse_space",
    "point",
    "interval",
    "circle_min",
    "circle_subdiv",
    "sphere_min",
    "simplex_space",
    "boundary_space",
    "disjoint_union",
    "fold_map",
    "simplicial_chains",
]


class SimplicialError(ValueError):
    pass


class Simp:
    """A normal-form simplex: degeneracy word over a non-degenerate base."""

    __slots__ = ("word", "base")

    def __init__(self, word: tuple, base: str):
        self.word = tuple(word)
        self.base = base

    def __eq__(self, other):
        return (
            isinstance(other, Simp)
            and self.word == other.word
            and self.base == other.base
        )

    def __hash__(self):
        return hash((self.word, self.base))

    def __repr__(self):
        if not self.word:
            return f"Simp({self.base})"
        ops = ".".join(f"s{i}" for i in self.word)
        return f"Simp({ops}.{self.base})"

    @property
    def degenerate(self) -> bool:
        return bool(self.word)


class Cell:
    __slots__ = ("name", "dim", "faces")

    def __init__(self, name: str, dim: int, faces: tuple):
        self.name = name
        self.dim = dim
        self.faces = faces  # tuple of Simp, length dim + 1 (empty for dim 0)

    def __repr__(self):
        return f"Cell({self.name}, dim={self.dim})"


def _apply_s(word: tuple, j: int) -> tuple:
    """Normalize s_j applied to an existing strictly decreasing word.

    Uses s_j s_i = s_{i+1} s_j for j <= i: push j right past larger entries,
    bumping each one it passes.
    """
    out = []
    k = 0
    n = len(word)
    while k < n and word[k] >= j:
        out.append(word[k] + 1)
        k += 1
    out.append(j)
    out.extend(word[k:])
    return tuple(out)


class SimplicialSet:
    """A finite simplicial set with named non-degenerate cells."""

    def __init__(self, cells: list[Cell]):
        self.cells = {c.name: c for c in cells}
        if len(self.cells) != len(cells):
            raise SimplicialError("cell names must be distinct")
        self.max_dim = max((c.dim for c in cells), default=-1)
        self._levels: dict[int, list[Simp]] = {}

    def cell(self, name: str) -> Cell:
        try:
            return self.cells[name]
        except KeyError:
            raise SimplicialError(f"no cell named {name!r}") from None

    def dim_of(self, s: Simp) -> int:
        return self.cells[s.base].dim + len(s.word)

    def face(self, s: Simp, i: int) -> Simp:
        """The i-th face, computed on normal forms.

        d_i s_j = s_{j-1} d_i (i < j), identity (i in {j, j+1}),
        s_j d_{i-1} (i > j + 1); on a non-degenerate base it reads off the
        stored face and renormalizes.
        """
        n = self.dim_of(s)
        if not 0 <= i <= n:
            raise SimplicialError(f"face index {i} out of range for dimension {n}")
        word, base = s.word, s.base
        for pos, j in enumerate(word):
            if i < j:
                # d_i passes left of s_j, lowering it
                new_word = word[:pos] + (j - 1,) + word[pos + 1 :]
                word = new_word
            elif i <= j + 1:
                # cancellation: drop this degeneracy, done
                return Simp(word[:pos] + word[pos + 1 :], base)
            else:
                i -= 1
        # un-degenerate simplex: use the stored boundary
        cell = self.cells[base]
        if cell.dim == 0:
            raise SimplicialError("vertex has no faces")
        f = cell.faces[i]
        out_word, out_base = f.word, f.base
        for j in reversed(word):
            out_word = _apply_s(out_word, j)
        # word entries were produced against the original level; reapplying
        # on the lower level keeps strict decrease by construction
        return Simp(out_word, out_base)

    def degenerate(self, s: Simp, j: int) -> Simp:
        n = self.dim_of(s)
        if not 0 <= j <= n:
            raise SimplicialError(f"degeneracy index {j} out of range for dimension {n}")
        return Simp(_apply_s(s.word, j), s.base)

    def level(self, n: int) -> list[Simp]:
        """All n-simplices, sorted: bases by (dim, name), words lex.

        Words over a dim-k base are the strictly decreasing (n-k)-element
        subsets of {0, ..., n-1}, written in decreasing order.
        """
        if n < 0:
            raise SimplicialError("negative level")
        got = self._levels.get(n)
        if got is not None:
            return got
        out = []
        for c in sorted(self.cells.values(), key=lambda c: (c.dim, c.name)):
            if c.dim > n:
                continue
            need = n - c.dim
            for subset in combinations(range(n), need):
                out.append(Simp(tuple(reversed(subset)), c.name))
        # reversed-subset tuples arrive in lex order of the underlying subsets;
        # resort words lexicographically for the documented order
        out.sort(key=lambda s: (self.cells[s.base].dim, s.base, s.word))
        self._levels[n] = out
        return out

    def validate(self) -> None:
        """Check the simplicial identities d_i d_j = d_{j-1} d_i (i < j).

        Face indices stored on cells are checked for dimension coherence
        first; the identity is then verified on every cell of dimension
        at least two.
        """
        for c in self.cells.values():
            if c.dim == 0:
                if c.faces:
                    raise SimplicialError(f"vertex {c.name} lists faces")
                continue
            if len(c.faces) != c.dim + 1:
                raise SimplicialError(
                    f"cell {c.name} has {len(c.faces)} faces, expected {c.dim + 1}"
                )
            for i, f in enumerate(c.faces):
                if f.base not in self.cells:
                    raise SimplicialError(
                        f"face {i} of {c.name} refers to unknown cell {f.base!r}"
                    )
                if self.dim_of(f) != c.dim - 1:
                    raise SimplicialError(
                        f"face {i} of {c.name} has dimension {self.dim_of(f)}, "
                        f"expected {c.dim - 1}"
                    )
                if list(f.word) != sorted(f.word, reverse=True) or len(set(f.word)) != len(
                    f.word
                ):
                    raise SimplicialError(
                        f"face {i} of {c.name} has a non-canonical degeneracy word"
                    )
                if f.word and f.word[0] >= c.dim - 1:
                    # outermost s_j into dimension m needs j <= m - 1
                    raise SimplicialError(
                        f"face {i} of {c.name} has degeneracy index out of range"
                    )
        for c in self.cells.values():
            if c.dim < 2:
                continue
            s = Simp((), c.name)
            for j in range(1, c.dim + 1):
                for i in range(j):
                    left = self.face(self.face(s, j), i)
                    right = self.face(self.face(s, i), j - 1)
                    if left != right:
                        raise SimplicialError(
                            f"simplicial identity fails on {c.name}: "
                            f"d_{i} d_{j} != d_{j - 1} d_{i}"
                        )

    def __repr__(self):
        counts = {}
        for c in self.cells.values():
            counts[c.dim] = counts.get(c.dim, 0) + 1
        desc = ", ".join(f"{counts[d]}x{d}" for d in sorted(counts))
        return f"SimplicialSet({desc})"


def make_space(cells) -> SimplicialSet:
    """Build a simplicial set from (name, dim, faces) triples and validate.

    faces entries are (word, base) pairs or Simp; vertices pass ().
    """
    built = []
    for name, dim, faces in cells:
        fs = []
        for f in faces:
            if isinstance(f, Simp):
                fs.append(f)
            else:
                word, base = f
                fs.append(Simp(tuple(word), base))
        built.append(Cell(name, dim, tuple(fs)))
    X = SimplicialSet(built)
    X.validate()
    return X


# ------------------------------------------------------------------ builtins


def point() -> SimplicialSet:
    return make_space([("pt", 0, [])])


def interval() -> SimplicialSet:
    return make_space(
        [
            ("0", 0, []),
            ("1", 0, []),
            ("e", 1, [((), "1"), ((), "0")]),
        ]
    )


def circle_min() -> SimplicialSet:
    """One vertex, one edge with both ends glued."""
    return make_space(
        [
            ("v", 0, []),
            ("e", 1, [((), "v"), ((), "v")]),
        ]
    )


def circle_subdiv(m: int) -> SimplicialSet:
    """The m-gon: m vertices, m edges, edge e_i from v_i to v_{i+1 mod m}."""
    if m < 1:
        raise SimplicialError("subdivision needs at least one edge")
    cells = [(f"v{i}", 0, []) for i in range(m)]
    for i in range(m):
        cells.append(
            (f"e{i}", 1, [((), f"v{(i + 1) % m}"), ((), f"v{i}")])
        )
    return make_space(cells)


def sphere_min(d: int) -> SimplicialSet:
    """One vertex and one d-cell, all faces maximally degenerate."""
    if d < 1:
        raise SimplicialError("sphere dimension must be at least 1")
    collapsed = Simp(tuple(reversed(range(d - 1))), "v")
    return make_space(
        [
            ("v", 0, []),
            ("c", d, [collapsed] * (d + 1)),
        ]
    )


def simplex_space(n: int) -> SimplicialSet:
    """The standard n-simplex with cells named by vertex subsets."""
    if n < 0:
        raise SimplicialError("negative simplex dimension")
    if n > 9:
        raise SimplicialError("simplex dimension capped at 9 (digit cell names)")
    cells = []
    verts = range(n + 1)
    for k in range(n + 1):
        for sub in combinations(verts, k + 1):
            name = "".join(str(v) for v in sub)
            if k == 0:
                cells.append((name, 0, []))
            else:
                faces = []
                for i in range(k + 1):
                    sm = sub[:i] + sub[i + 1 :]
                    faces.append(((), "".join(str(v) for v in sm)))
                cells.append((name, k, faces))
    return make_space(cells)


def boundary_space(n: int) -> SimplicialSet:
    """Boundary of the n-simplex: all proper faces."""
    if n < 1:
        raise SimplicialError("boundary needs dimension at least 1")
    full = simplex_space(n)
    top = "".join(str(v) for v in range(n + 1))
    cells = []
    for c in full.cells.values():
        if c.name == top:
            continue
        cells.append((c.name, c.dim, [(f.word, f.base) for f in c.faces]))
    return make_space(cells)


def disjoint_union(*spaces: SimplicialSet) -> SimplicialSet:
    """Disjoint union; cell names gain a positional prefix "0.", "1.", ..."""
    if not spaces:
        raise SimplicialError("empty union")
    cells = []
    for k, X in enumerate(spaces):
        for c in X.cells.values():
            faces = [(f.word, f"{k}.{f.base}") for f in c.faces]
            cells.append((f"{k}.{c.name}", c.dim, faces))
    return make_space(cells)


# ------------------------------------------------------------------ maps


class SimplicialMap:
    """A map of simplicial sets given on non-degenerate cells.

    assignment sends each source cell name to a target simplex of the same
    dimension (possibly degenerate); validation checks compatibility with
    every face operator.
    """

    def __init__(self, source: SimplicialSet, target: SimplicialSet, assignment: dict):
        self.source = source
        self.target = target
        self.assignment = {}
        for name, c in source.cells.items():
            if name not in assignment:
                raise SimplicialError(f"no image given for cell {name!r}")
            img = assignment[name]
            if not isinstance(img, Simp):
                img = Simp(tuple(img[0]), img[1])
            if img.base not in target.cells:
                raise SimplicialError(
                    f"image of {name!r} uses unknown cell {img.base!r}"
                )
            if target.dim_of(img) != c.dim:
                raise SimplicialError(
                    f"image of {name!r} has dimension {target.dim_of(img)}, "
                    f"expected {c.dim}"
                )
            self.assignment[name] = img
        extra = set(assignment) - set(source.cells)
        if extra:
            raise SimplicialError(f"assignment names unknown cells: {sorted(extra)}")
        self._check_faces()

    def _check_faces(self):
        for name, c in self.source.cells.items():
            if c.dim == 0:
                continue
            s = Simp((), name)
            for i in range(c.dim + 1):
                want = self.apply(self.source.face(s, i))
                got = self.target.face(self.apply(s), i)
                if want != got:
                    raise SimplicialError(
                        f"map does not commute with d_{i} on cell {name!r}"
                    )

    def apply(self, s: Simp) -> Simp:
        img = self.assignment[s.base]
        word, base = img.word, img.base
        for j in reversed(s.word):
            word = _apply_s(word, j)
        return Simp(word, base)


def fold_map(X: SimplicialSet, copies: int) -> SimplicialMap:
    """The fold from a disjoint union of copies of X back onto X."""
    U = disjoint_union(*([X] * copies))
    assignment = {}
    for name in U.cells:
        k, base = name.split(".", 1)
        del k
        assignment[name] = Simp((), base)
    return SimplicialMap(U, X, assignment)


# ------------------------------------------------------------------ parsing


def space_to_json(X: SimplicialSet) -> dict:
    cells = []
    for c in sorted(X.cells.values(), key=lambda c: (c.dim, c.name)):
        cells.append(
            {
                "dim": c.dim,
                "name": c.name,
                "faces": [
                    {"base": f.base, "word": list(f.word)} for f in c.faces
                ],
            }
        )
    return {"cells": cells}


def space_from_json(obj: dict) -> SimplicialSet:
    if not isinstance(obj, dict) or "cells" not in obj:
        raise SimplicialError("space file must hold an object with a cells list")
    cells = []
    for entry in obj["cells"]:
        if not isinstance(entry, dict) or {"dim", "name", "faces"} - set(entry):
            raise SimplicialError(f"bad cell entry {entry!r}")
        faces = []
        for f in entry["faces"]:
            if not isinstance(f, dict) or {"base", "word"} - set(f):
                raise SimplicialError(f"bad face entry {f!r} in cell {entry['name']!r}")
            faces.append((tuple(f["word"]), f["base"]))
        cells.append((entry["name"], entry["dim"], faces))
    return make_space(cells)


_BUILTIN_SPACES = {
    "point": point,
    "interval": interval,
    "circle": circle_min,
}


def parse_space(text: str) -> SimplicialSet:
    """Descriptor syntax: point, interval, circle, circle:min, circle:m,
    sphere:d, simplex:n, boundary:n, union:a+b, or union(a,b,...)."""
    text = text.strip()
    if text.startswith("union(") and text.endswith(")"):
        inner = text[len("union(") : -1]
        parts = []
        depth = 0
        cur = []
        for ch in inner:
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "," and depth == 0:
                parts.append("".join(cur))
                cur = []
            else:
                cur.append(ch)
        parts.append("".join(cur))
        if any(not p.strip() for p in parts):
            raise SimplicialError(f"bad union descriptor {text!r}")
        return disjoint_union(*[parse_space(p) for p in parts])
    if ":" in text:
        head, _, arg = text.partition(":")
        head = head.strip()
        if head == "circle" and arg.strip() == "min":
            return circle_min()
        if head == "union":
            parts = arg.split("+")
            if any(not p.strip() for p in parts) or len(parts) < 2:
                raise SimplicialError(f"bad union descriptor {text!r}")
            return disjoint_union(*[parse_space(p) for p in parts])
        try:
            k = int(arg)
        except ValueError:
            raise SimplicialError(f"bad numeric argument in {text!r}") from None
        if head == "circle":
            return circle_subdiv(k)
        if head == "sphere":
            return sphere_min(k)
        if head == "simplex":
            return simplex_space(k)
        if head == "boundary":
            return boundary_space(k)
        raise SimplicialError(f"unknown space descriptor {text!r}")
    fn = _BUILTIN_SPACES.get(text)
    if fn is None:
        raise SimplicialError(f"unknown space descriptor {text!r}")
    return fn()


def simplicial_chains(X: SimplicialSet, field):
    """Ordinary normalized chains on the cell basis, as level data.

    Returns (levels, diffs): levels[n] lists cell names of dimension n and
    diffs[n] maps level n to level n - 1 with alternating signs, degenerate
    faces dropped.
    """
    from .matrix import SMat

    top = X.max_dim
    levels = []
    for n in range(top + 1):
        levels.append(
            [c.name for c in sorted(X.cells.values(), key=lambda c: (c.dim, c.name)) if c.dim == n]
        )
    index = [{name: i for i, name in enumerate(lv)} for lv in levels]
    diffs = [None]
    for n in range(1, top + 1):
        m = SMat(len(levels[n - 1]), len(levels[n]), field)
        for j, name in enumerate(levels[n]):
            for i in range(n + 1):
                f = X.face(Simp((), name), i)
                if f.degenerate:
                    continue
                m.add_at(index[n - 1][f.base], j, field(-1) if i % 2 else field.one)
        diffs.append(m)
    return levels, diffs
