"""Exact univariate polynomial arithmetic over the rationals.

Polynomials are stored sparsely (degree -> nonzero Fraction).  The zero
polynomial is the empty map and its degree is the sentinel ``NEG_INF`` so
that degree comparisons never collide with genuine (possibly negative)
degrees elsewhere in the package.

All values are immutable after construction; every operation returns a new
polynomial.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import DivisionByZeroPoly, InvalidParameter, ZeroPolynomial

Rational = Fraction

NEG_INF = float("-inf")

_Scalar = Union[int, Fraction]


def _as_fraction(value: _Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise InvalidParameter(f"not a rational scalar: {value!r}")


class RatPoly:
    """Sparse polynomial with ``Fraction`` coefficients and degrees >= 0."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, _Scalar] | None = None):
        clean: dict[int, Fraction] = {}
        if coeffs:
            for deg, c in coeffs.items():
                if not isinstance(deg, int) or deg < 0:
                    raise InvalidParameter(f"invalid degree {deg!r}")
                frac = _as_fraction(c)
                if frac != 0:
                    clean[deg] = frac
        self._coeffs = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "RatPoly":
        return cls()

    @classmethod
    def one(cls) -> "RatPoly":
        return cls({0: 1})

    @classmethod
    def constant(cls, value: _Scalar) -> "RatPoly":
        return cls({0: _as_fraction(value)})

    @classmethod
    def x(cls) -> "RatPoly":
        return cls({1: 1})

    @classmethod
    def monomial(cls, degree: int, coeff: _Scalar = 1) -> "RatPoly":
        return cls({degree: _as_fraction(coeff)})

    @classmethod
    def from_ascending(cls, coeffs: Iterable[_Scalar]) -> "RatPoly":
        """Build from an ascending coefficient list (constant term first)."""
        return cls({i: _as_fraction(c) for i, c in enumerate(coeffs)})

    @classmethod
    def from_text(cls, text: str) -> "RatPoly":
        """Parse the ascending comma-separated coefficient format.

        ``"1, 0, 1"`` is x^2 + 1; entries may be integers or "num/den".
        """
        parts = [p.strip() for p in text.split(",")]
        if parts == [""]:
            raise InvalidParameter("empty polynomial text")
        try:
            return cls.from_ascending(Fraction(p) for p in parts)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParameter(f"bad polynomial text {text!r}: {exc}") from exc

    @classmethod
    def from_json(cls, data: str | Mapping) -> "RatPoly":
        """Parse the JSON form ``{"coeffs": {"0": "1", "2": "1"}}``."""
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, Mapping) or "coeffs" not in data:
            raise InvalidParameter("polynomial JSON must contain a 'coeffs' map")
        try:
            return cls({int(k): Fraction(str(v)) for k, v in data["coeffs"].items()})
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParameter(f"bad polynomial JSON: {exc}") from exc

    # -- queries ------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def degree(self) -> int | float:
        """Maximum stored degree; NEG_INF for the zero polynomial."""
        return max(self._coeffs) if self._coeffs else NEG_INF

    def coeff(self, degree: int) -> Fraction:
        return self._coeffs.get(degree, Fraction(0))

    def leading_coefficient(self) -> Fraction:
        if not self._coeffs:
            return Fraction(0)
        return self._coeffs[max(self._coeffs)]

    def is_constant(self) -> bool:
        return self.degree() <= 0

    def monic(self) -> "RatPoly":
        lc = self.leading_coefficient()
        if lc == 0:
            raise ZeroPolynomial("cannot make the zero polynomial monic")
        return self * (1 / lc)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "RatPoly | int | Fraction") -> "RatPoly":
        other = self._coerce(other)
        out = dict(self._coeffs)
        for deg, c in other._coeffs.items():
            s = out.get(deg, Fraction(0)) + c
            if s:
                out[deg] = s
            else:
                out.pop(deg, None)
        return RatPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "RatPoly":
        return RatPoly({deg: -c for deg, c in self._coeffs.items()})

    def __sub__(self, other: "RatPoly | int | Fraction") -> "RatPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: "RatPoly | int | Fraction") -> "RatPoly":
        return self._coerce(other) - self

    def __mul__(self, other: "RatPoly | int | Fraction") -> "RatPoly":
        if isinstance(other, (int, Fraction)):
            scalar = _as_fraction(other)
            if scalar == 0:
                return RatPoly.zero()
            return RatPoly({deg: c * scalar for deg, c in self._coeffs.items()})
        other = self._coerce(other)
        out: dict[int, Fraction] = {}
        for d1, c1 in self._coeffs.items():
            for d2, c2 in other._coeffs.items():
                deg = d1 + d2
                s = out.get(deg, Fraction(0)) + c1 * c2
                if s:
                    out[deg] = s
                else:
                    out.pop(deg, None)
        return RatPoly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "RatPoly") -> tuple["RatPoly", "RatPoly"]:
        return poly_divmod(self, other)

    def __floordiv__(self, other: "RatPoly") -> "RatPoly":
        return poly_divmod(self, other)[0]

    def __mod__(self, other: "RatPoly") -> "RatPoly":
        return poly_divmod(self, other)[1]

    def __pow__(self, exponent: int) -> "RatPoly":
        if not isinstance(exponent, int) or exponent < 0:
            raise InvalidParameter("polynomial powers must be non-negative integers")
        result = RatPoly.one()
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    @staticmethod
    def _coerce(value: "RatPoly | int | Fraction") -> "RatPoly":
        if isinstance(value, RatPoly):
            return value
        return RatPoly.constant(value)

    # -- identity -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatPoly.constant(other)
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    # -- transforms ---------------------------------------------------

    def substitute_power(self, d: int) -> "RatPoly":
        return poly_substitute_power(self, d)

    def derivative(self) -> "RatPoly":
        return poly_derivative(self)

    def eval_at(self, value: _Scalar) -> Fraction:
        """Exact evaluation at a rational point (sparse powering)."""
        point = _as_fraction(value)
        total = Fraction(0)
        for deg, c in self._coeffs.items():
            total += c * point**deg
        return total

    def shift_degrees(self, offset: int) -> "RatPoly":
        """Multiply by x^offset (offset >= 0 keeps degrees valid)."""
        if offset < 0 and self._coeffs and min(self._coeffs) + offset < 0:
            raise InvalidParameter("degree shift would create negative degrees")
        return RatPoly({deg + offset: c for deg, c in self._coeffs.items()})

    # -- rendering ----------------------------------------------------

    def to_text(self) -> str:
        """Ascending comma-separated coefficient list ("1, 0, 1" for x^2+1)."""
        if not self._coeffs:
            return "0"
        top = max(self._coeffs)
        return ", ".join(str(self.coeff(k)) for k in range(top + 1))

    def to_json_dict(self) -> dict:
        return {"coeffs": {str(deg): str(c) for deg, c in sorted(self._coeffs.items())}}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def __repr__(self) -> str:
        return f"RatPoly({self!s})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        terms = []
        for deg in sorted(self._coeffs, reverse=True):
            c = self._coeffs[deg]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if deg == 0:
                body = str(mag)
            else:
                var = "x" if deg == 1 else f"x^{deg}"
                body = var if mag == 1 else f"{mag}*{var}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


@dataclass(frozen=True)
class IntPolyWithContent:
    """An exactly factored polynomial: original = scale * primitive.

    ``primitive`` has integer coefficients with content 1 and a positive
    leading coefficient; ``scale`` carries the extracted rational factor.
    """

    primitive: RatPoly
    scale: Fraction

    def reconstruct(self) -> RatPoly:
        return self.primitive * self.scale

    def int_coeffs(self) -> dict[int, int]:
        return {deg: int(c) for deg, c in self.primitive.coeffs.items()}


def poly_divmod(a: RatPoly, b: RatPoly) -> tuple[RatPoly, RatPoly]:
    """Euclidean division: a = q*b + r with deg r < deg b."""
    if b.is_zero():
        raise DivisionByZeroPoly("polynomial division by zero")
    if a.is_zero():
        return RatPoly.zero(), RatPoly.zero()
    deg_b = b.degree()
    lc_b = b.leading_coefficient()
    rem = dict(a._coeffs)
    quo: dict[int, Fraction] = {}
    while rem:
        deg_r = max(rem)
        if deg_r < deg_b:
            break
        factor = rem[deg_r] / lc_b
        shift = deg_r - deg_b
        quo[shift] = factor
        for deg, c in b._coeffs.items():
            target = deg + shift
            s = rem.get(target, Fraction(0)) - factor * c
            if s:
                rem[target] = s
            else:
                rem.pop(target, None)
    return RatPoly(quo), RatPoly(rem)


def poly_substitute_power(q: RatPoly, d: int) -> RatPoly:
    """Return q(x^d): every degree is multiplied by d."""
    if not isinstance(d, int) or d < 1:
        raise InvalidParameter(f"substitution power must be a positive integer, got {d!r}")
    return RatPoly({deg * d: c for deg, c in q.coeffs.items()})


def poly_derivative(q: RatPoly) -> RatPoly:
    return RatPoly({deg - 1: c * deg for deg, c in q.coeffs.items() if deg >= 1})


def poly_normalize_integer(q: RatPoly) -> IntPolyWithContent:
    """Split q into (scale, primitive integer polynomial with lc > 0)."""
    if q.is_zero():
        raise ZeroPolynomial("cannot normalize the zero polynomial")
    coeffs = q.coeffs
    denom_lcm = 1
    for c in coeffs.values():
        denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
    ints = {deg: int(c * denom_lcm) for deg, c in coeffs.items()}
    content = 0
    for v in ints.values():
        content = math.gcd(content, abs(v))
    sign = 1 if ints[max(ints)] > 0 else -1
    divisor = sign * content
    primitive = RatPoly({deg: v // divisor for deg, v in ints.items()})
    scale = Fraction(divisor, denom_lcm)
    return IntPolyWithContent(primitive=primitive, scale=scale)


def poly_eval_mod(q: RatPoly | IntPolyWithContent | Mapping[int, int], r: int, m: int) -> int:
    """Evaluate an integer-coefficient polynomial at r modulo m.

    Uses sparse evaluation with modular powering so that substituted
    high-degree polynomials (degree in the thousands, few terms) stay cheap.
    Accepts an IntPolyWithContent (its primitive part is used), a RatPoly
    that must already have integer coefficients, or a plain degree->int map.
    """
    if m < 1:
        raise InvalidParameter(f"modulus must be >= 1, got {m}")
    if isinstance(q, IntPolyWithContent):
        items = q.int_coeffs().items()
    elif isinstance(q, RatPoly):
        items = []
        for deg, c in q.coeffs.items():
            if c.denominator != 1:
                raise InvalidParameter(
                    "poly_eval_mod needs integer coefficients; "
                    "normalize with poly_normalize_integer first"
                )
            items.append((deg, int(c)))
    else:
        items = list(q.items())
    total = 0
    for deg, c in items:
        total = (total + c * pow(r, deg, m)) % m
    return total % m


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """Monic greatest common divisor (Euclid with monic normalization)."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()
