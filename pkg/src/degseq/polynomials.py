"""Sparse multivariate polynomials with exact field coefficients.

A Polynomial is an immutable dict of exponent tuples to nonzero
coefficients, tagged with its field and variable count.  The canonical term
order is graded lexicographic (total degree first, then exponent tuple,
descending), which fixes leading terms, text rendering, and map
canonicalization.

The zero polynomial has degree NEG_INF (a float minus-infinity marker) so
degree comparisons behave; everything else reports plain ints.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .budget import check_terms

NEG_INF = float("-inf")


def grlex_key(exponents: tuple[int, ...]):
    return (sum(exponents), exponents)


class Polynomial:
    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field, nvars: int, terms: dict, *, _clean: bool = False):
        if nvars < 0:
            raise ValueError("variable count must be nonnegative")
        if not _clean:
            cleaned = {}
            for exps, coeff in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != nvars:
                    raise ValueError(f"exponent tuple {exps} does not match {nvars} variables")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                coeff = field.coerce(coeff)
                if coeff != field.zero:
                    if exps in cleaned:
                        raise ValueError(f"duplicate monomial {exps}")
                    cleaned[exps] = coeff
            terms = cleaned
        self.field = field
        self.nvars = nvars
        self.terms = terms
        self._hash = None

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, field, nvars: int) -> "Polynomial":
        return cls(field, nvars, {}, _clean=True)

    @classmethod
    def constant(cls, field, nvars: int, value) -> "Polynomial":
        value = field.coerce(value)
        if value == field.zero:
            return cls.zero(field, nvars)
        return cls(field, nvars, {(0,) * nvars: value}, _clean=True)

    @classmethod
    def one(cls, field, nvars: int) -> "Polynomial":
        return cls.constant(field, nvars, 1)

    @classmethod
    def variable(cls, field, nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} variables")
        exps = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(field, nvars, {exps: field.one}, _clean=True)

    @classmethod
    def monomial(cls, field, nvars: int, exps: Sequence[int], coeff=1) -> "Polynomial":
        return cls(field, nvars, {tuple(exps): coeff})

    # ---- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def total_degree(self):
        """Max total degree; NEG_INF for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def sorted_terms(self) -> list[tuple[tuple[int, ...], object]]:
        """Terms in canonical (descending graded-lex) order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading(self) -> tuple[tuple[int, ...], object]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self.terms, key=grlex_key)
        return exps, self.terms[exps]

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    # ---- equality / hashing -------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.field == other.field
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.nvars, frozenset(self.terms.items())))
        return self._hash

    # ---- arithmetic ----------------------------------------------------

    def _require_compatible(self, other: "Polynomial"):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")
        if self.nvars != other.nvars:
            raise ValueError(f"arity mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._require_compatible(other)
        zero = self.field.zero
        add = self.field.add
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            s = add(out.get(exps, zero), coeff)
            if s == zero:
                out.pop(exps, None)
            else:
                out[exps] = s
        check_terms(len(out))
        return Polynomial(self.field, self.nvars, out, _clean=True)

    def __neg__(self) -> "Polynomial":
        neg = self.field.neg
        return Polynomial(
            self.field, self.nvars, {e: neg(c) for e, c in self.terms.items()}, _clean=True
        )

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, value) -> "Polynomial":
        value = self.field.coerce(value)
        if value == self.field.zero:
            return Polynomial.zero(self.field, self.nvars)
        mul = self.field.mul
        return Polynomial(
            self.field, self.nvars, {e: mul(c, value) for e, c in self.terms.items()}, _clean=True
        )

    def shift(self, exps: Sequence[int]) -> "Polynomial":
        """Multiply by the monomial with the given exponents (coefficient 1)."""
        offs = tuple(exps)
        if len(offs) != self.nvars or any(e < 0 for e in offs):
            raise ValueError(f"bad monomial exponents {offs}")
        if not any(offs):
            return self
        out = {tuple(a + b for a, b in zip(e, offs)): c for e, c in self.terms.items()}
        return Polynomial(self.field, self.nvars, out, _clean=True)

    # products up to this many coefficient multiplications stay on the dict
    # path; larger ones go through the packed big-integer engine
    _DICT_MUL_CUTOFF = 65536

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._require_compatible(other)
        if not self.terms or not other.terms:
            return Polynomial.zero(self.field, self.nvars)
        if len(self.terms) == 1:
            (exps, coeff), = self.terms.items()
            return other.shift(exps) if coeff == self.field.one else other.scale(coeff).shift(exps)
        if len(other.terms) == 1:
            return other.__mul__(self)
        if len(self.terms) * len(other.terms) > self._DICT_MUL_CUTOFF:
            from . import multiply

            return multiply.poly_mul_large(self, other)
        return self._mul_dict(other)

    def _mul_dict(self, other: "Polynomial") -> "Polynomial":
        zero = self.field.zero
        mul = self.field.mul
        add = self.field.add
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        for eb, cb in b.items():
            for ea, ca in a.items():
                exps = tuple(x + y for x, y in zip(ea, eb))
                prod = mul(ca, cb)
                cur = out.get(exps)
                if cur is None:
                    if prod != zero:
                        out[exps] = prod
                else:
                    s = add(cur, prod)
                    if s == zero:
                        del out[exps]
                    else:
                        out[exps] = s
        check_terms(len(out))
        return Polynomial(self.field, self.nvars, out, _clean=True)

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Polynomial.one(self.field, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def monic(self) -> "Polynomial":
        """Scale so the graded-lex leading coefficient is 1."""
        if not self.terms:
            raise ValueError("cannot normalize the zero polynomial")
        _, lead = self.leading()
        if lead == self.field.one:
            return self
        return self.scale(self.field.inv(lead))

    def derivative(self, index: int) -> "Polynomial":
        if not 0 <= index < self.nvars:
            raise ValueError(f"variable index {index} out of range")
        field = self.field
        out: dict = {}
        for exps, coeff in self.terms.items():
            k = exps[index]
            if k == 0:
                continue
            c = field.mul(coeff, field.coerce(k))
            if c == field.zero:
                continue  # characteristic divides the exponent
            e = list(exps)
            e[index] = k - 1
            out[tuple(e)] = c
        return Polynomial(field, self.nvars, out, _clean=True)

    # ---- substitution ---------------------------------------------------

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Evaluate at polynomial arguments (the composition substrate)."""
        if len(images) != self.nvars:
            raise ValueError(f"expected {self.nvars} images, got {len(images)}")
        if not self.terms:
            if not images:
                return self
            return Polynomial.zero(images[0].field, images[0].nvars)
        if not images:  # constant polynomial in zero variables
            return self
        field = images[0].field
        tvars = images[0].nvars
        for im in images:
            if im.field != field or im.nvars != tvars:
                raise ValueError("images must share one field and arity")
        if field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {field}")

        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            got = powers.get((i, k))
            if got is None:
                got = powers[(i, k)] = images[i] ** k
            return got

        total = Polynomial.zero(field, tvars)
        for exps, coeff in self.terms.items():
            term = Polynomial.constant(field, tvars, coeff)
            for i, k in enumerate(exps):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def evaluate(self, point: Sequence) -> object:
        """Evaluate at field elements (used by tests and the Jacobian hint)."""
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates")
        field = self.field
        values = [field.coerce(v) for v in point]
        acc = field.zero
        for exps, coeff in self.terms.items():
            term = coeff
            for v, k in zip(values, exps):
                for _ in range(k):
                    term = field.mul(term, v)
            acc = field.add(acc, term)
        return acc

    # ---- division -------------------------------------------------------

    def divide_exact(self, divisor: "Polynomial") -> "Polynomial":
        """Exact quotient self / divisor; raises ValueError when not exact."""
        self._require_compatible(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        field = self.field
        if divisor.is_monomial():
            (dexps, dcoeff), = divisor.terms.items()
            inv = field.inv(dcoeff)
            out = {}
            for exps, coeff in self.terms.items():
                q = tuple(a - b for a, b in zip(exps, dexps))
                if any(e < 0 for e in q):
                    raise ValueError("not an exact division (monomial mismatch)")
                out[q] = field.mul(coeff, inv)
            return Polynomial(field, self.nvars, out, _clean=True)

        lead_exps, lead_coeff = divisor.leading()
        lead_inv = field.inv(lead_coeff)
        remainder = self
        quotient: dict = {}
        while remainder.terms:
            rexps, rcoeff = remainder.leading()
            q = tuple(a - b for a, b in zip(rexps, lead_exps))
            if any(e < 0 for e in q):
                raise ValueError("not an exact division (leading term mismatch)")
            c = field.mul(rcoeff, lead_inv)
            quotient[q] = c
            remainder = remainder - divisor.scale(c).shift(q)
        return Polynomial(field, self.nvars, quotient, _clean=True)

    def divisible_by(self, divisor: "Polynomial") -> bool:
        try:
            self.divide_exact(divisor)
            return True
        except (ValueError, ZeroDivisionError):
            return False

    # ---- rendering --------------------------------------------------------

    def to_text(self, variables: Sequence[str] | None = None) -> str:
        """Render in the grammar the parser accepts (explicit '*', '^')."""
        if variables is None:
            variables = [f"x{i}" for i in range(self.nvars)]
        if len(variables) != self.nvars:
            raise ValueError("variable name count mismatch")
        if not self.terms:
            return "0"
        field = self.field
        chunks: list[str] = []
        for exps, coeff in self.sorted_terms():
            negative = field.characteristic == 0 and coeff < 0
            mag = -coeff if negative else coeff
            factors = [
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(variables, exps)
                if k
            ]
            if not factors:
                body = field.format(mag)
            elif mag == field.one:
                body = "*".join(factors)
            else:
                body = "*".join([field.format(mag)] + factors)
            if not chunks:
                chunks.append(f"-{body}" if negative else body)
            else:
                chunks.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(chunks)

    def __repr__(self):
        text = self.to_text()
        if len(text) > 120:
            text = f"<{len(self.terms)} terms, degree {self.total_degree()}>"
        return f"Polynomial({self.field}, {text})"


def poly_sum(polys: Iterable[Polynomial], field, nvars: int) -> Polynomial:
    total = Polynomial.zero(field, nvars)
    for p in polys:
        total = total + p
    return total
