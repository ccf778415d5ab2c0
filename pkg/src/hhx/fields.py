"""Exact coefficient fields.

Two kinds of scalars are supported: arbitrary-precision rationals and prime
fields F_p with p < 2**31.  Field elements are plain Python objects (Fraction
for the rationals, int in [0, p) for F_p) so that downstream sparse linear
algebra can stay close to the machine representation.  Every operation is
exact; floats are rejected everywhere.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = ["Field", "QQ", "GF", "FieldError", "parse_field", "field_to_json"]

_MAX_PRIME = 2**31


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    # deterministic Miller-Rabin, exact for n < 3,317,044,064,679,887,385,961,981
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Common interface for the two scalar types.

    Concrete instances are the singleton ``QQ`` and ``GF(p)``.  Elements are
    not wrapped; the field object knows how to coerce, invert, parse and
    serialize them.
    """

    char: int

    def __call__(self, value):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def show(self, a) -> str:
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def is_zero(self, a) -> bool:
        return a == self.zero


class _Rationals(Field):
    char = 0

    def __call__(self, value):
        if isinstance(value, float):
            raise FieldError("floats are not exact; use Fraction or a string")
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return self.parse(value)
        raise FieldError(f"cannot coerce {value!r} into Q")

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / Fraction(a)

    def parse(self, text: str):
        text = text.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"bad rational literal {text!r}") from exc

    def show(self, a) -> str:
        a = Fraction(a)
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, _Rationals)

    def __hash__(self):
        return hash("QQ")


class _PrimeField(Field):
    def __init__(self, p: int):
        if not isinstance(p, int) or not _is_prime(p):
            raise FieldError(f"{p!r} is not prime")
        if p >= _MAX_PRIME:
            raise FieldError(f"prime {p} too large (need p < 2**31)")
        self.p = p
        self.char = p

    def __call__(self, value):
        if isinstance(value, float):
            raise FieldError("floats are not exact; use ints or strings")
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise FieldError(
                    f"denominator {value.denominator} not invertible mod {self.p}"
                )
            return value.numerator * pow(den, self.p - 2, self.p) % self.p
        if isinstance(value, str):
            return self.parse(value)
        raise FieldError(f"cannot coerce {value!r} into F_{self.p}")

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def parse(self, text: str):
        # rational literals reduce mod p so shared input files work over any field
        try:
            return self(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"bad scalar literal {text!r} for F_{self.p}") from exc

    def show(self, a) -> str:
        return str(a % self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, _PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = _Rationals()

_gf_cache: dict[int, _PrimeField] = {}


def GF(p: int) -> _PrimeField:
    """The prime field F_p.  Instances are cached so GF(p) is GF(p)."""
    if p not in _gf_cache:
        _gf_cache[p] = _PrimeField(p)
    return _gf_cache[p]


def parse_field(spec) -> Field:
    """Decode a field from its JSON form: the string "Q" or {"Fp": p}.

    The command-line form "Fp:<p>" is accepted as well.
    """
    if spec == "Q":
        return QQ
    if isinstance(spec, str) and spec.startswith("Fp:"):
        try:
            return GF(int(spec[3:]))
        except ValueError as exc:
            raise FieldError(f"bad field spec {spec!r}") from exc
    if isinstance(spec, dict) and set(spec) == {"Fp"}:
        p = spec["Fp"]
        if not isinstance(p, int):
            raise FieldError(f"bad prime {p!r} in field spec")
        return GF(p)
    raise FieldError(f"unrecognized field spec {spec!r}")


def field_to_json(field: Field):
    if field == QQ:
        return "Q"
    return {"Fp": field.p}
