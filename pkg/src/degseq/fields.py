"""Exact coefficient fields: the rationals Q and prime fields F_p.

Field objects carry the arithmetic; elements stay unboxed (Fraction for Q,
plain ints in [0, p) for F_p).  Polynomials hold millions of coefficients in
the large runs, so element wrappers would be pure overhead.
"""

from __future__ import annotations

from fractions import Fraction

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Rationals:
    """The rational field Q.  Elements are Fraction values; Fraction already
    guarantees lowest terms and positive denominator."""

    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def coerce(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into Q")

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        if not a:
            raise ZeroDivisionError("inverse of zero in Q")
        return 1 / a

    @staticmethod
    def format(a) -> str:
        return str(a)

    def __repr__(self):
        return "Q"

    def __reduce__(self):  # keep the singleton under pickling
        return (Rationals, ())


QQ = Rationals()


class PrimeField:
    """F_p for prime p.  Elements are plain ints in [0, p)."""

    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise ValueError(f"prime field order must be prime, got {p!r}")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1

    def coerce(self, value) -> int:
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {value} vanishes mod {self.p}")
            return value.numerator * pow(den, -1, self.p) % self.p
        raise TypeError(f"cannot coerce {value!r} into F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.p}")
        return pow(a, -1, self.p)

    @staticmethod
    def format(a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"F{self.p}"


_gf_cache: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    field = _gf_cache.get(p)
    if field is None:
        field = _gf_cache[p] = PrimeField(p)
    return field


def parse_field(text: str):
    """Field spec used by the CLI and the map parser: "Q" or "F<p>" / "F_<p>"."""
    t = text.strip()
    if t == "Q":
        return QQ
    if t.startswith("F"):
        digits = t[1:].lstrip("_")
        if digits.isdigit():
            return GF(int(digits))
    raise ValueError(f"unrecognized field {text!r}: expected 'Q' or 'F<p>' with p prime")
