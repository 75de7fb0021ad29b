"""Exact truncated Laurent series in x^{-1} with precision-floor tracking.

A ``TruncatedLaurentSeries`` stores finitely many exact coefficients for all
degrees >= ``floor``; degrees below the floor are unknown, not zero.  Every
operation computes the deepest floor at which its result is still exact:

* add/sub: ``max`` of the floors;
* multiply by an exactly-known Laurent polynomial b: floor + top-degree(b);
* multiply two truncated series a, b: ``max(F_a + ||b||, F_b + ||a||)``;
* divide by an exactly-known polynomial with leading degree e: floor - e
  (division by a positive-degree polynomial *deepens* knowledge);
* divide by a truncated series v with leading degree e:
  ``max(F_u - e, F_v + ||u|| - 2e)``;
* substitute x -> x^d: floor becomes d * floor (intermediate degrees that are
  not multiples of d are exactly zero, hence known).

The family generators produce the infinite products

    f_d(x) = prod_{t>=0} (1 - x^{-d^t})

and the companions g_d = x^{-(d-1)} f_d, h_d = x^{-1} f_d,
u_d = (1 - x^{-1}) f_d, exactly down to any requested floor: factors with
d^t > -floor cannot touch degrees >= floor, so the product is finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .errors import (
    DivisionByZeroPoly,
    InsufficientPrecision,
    InvalidParameter,
    MismatchAt,
    ZERO_SO_FAR,
    ZeroSoFarDivision,
)
from .polys import RatPoly, Rational

_Scalar = Union[int, Fraction]

FAMILY_KINDS = ("F", "G", "H", "U")


@dataclass(frozen=True)
class SeriesFamily:
    """Selects one of the four studied series: F = f_d, G = x^{-(d-1)} f_d,
    H = x^{-1} f_d, U = (1 - x^{-1}) f_d, at a given precision floor."""

    d: int
    kind: str
    floor: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d < 2:
            raise InvalidParameter(f"family parameter d must be an integer >= 2, got {self.d!r}")
        if self.kind not in FAMILY_KINDS:
            raise InvalidParameter(f"family kind must be one of {FAMILY_KINDS}, got {self.kind!r}")
        if not isinstance(self.floor, int) or self.floor > 0:
            raise InvalidParameter(f"floor must be an integer <= 0, got {self.floor!r}")


class TruncatedLaurentSeries:
    """Finitely many exact coefficients of a Laurent series in x^{-1}.

    ``fraction`` optionally records an exact rational-function provenance
    (p, q) with series == p/q; consumers (the continued-fraction expander)
    use it to terminate exactly on rational inputs.
    """

    __slots__ = ("_coeffs", "_floor", "_fraction")

    def __init__(
        self,
        coeffs: Mapping[int, _Scalar],
        floor: int,
        fraction: tuple[RatPoly, RatPoly] | None = None,
    ):
        if not isinstance(floor, int):
            raise InvalidParameter(f"floor must be an integer, got {floor!r}")
        clean: dict[int, Fraction] = {}
        for deg, c in coeffs.items():
            if not isinstance(deg, int):
                raise InvalidParameter(f"invalid degree {deg!r}")
            if deg < floor:
                raise InvalidParameter(f"stored degree {deg} below floor {floor}")
            frac = c if isinstance(c, Fraction) else Fraction(c)
            if frac != 0:
                clean[deg] = frac
        self._coeffs = clean
        self._floor = floor
        self._fraction = fraction

    # -- queries ------------------------------------------------------

    @property
    def floor(self) -> int:
        return self._floor

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    @property
    def fraction(self) -> tuple[RatPoly, RatPoly] | None:
        return self._fraction

    def degree(self):
        """Largest degree with a nonzero coefficient, or ZERO_SO_FAR when all
        known coefficients vanish (true degree may hide below the floor)."""
        return max(self._coeffs) if self._coeffs else ZERO_SO_FAR

    def coeff(self, degree: int) -> Fraction:
        if degree < self._floor:
            raise InsufficientPrecision(
                f"coefficient at degree {degree} is below the floor {self._floor}"
            )
        return self._coeffs.get(degree, Fraction(0))

    def is_zero_so_far(self) -> bool:
        return not self._coeffs

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "TruncatedLaurentSeries") -> "TruncatedLaurentSeries":
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        floor = max(self._floor, other._floor)
        out: dict[int, Fraction] = {}
        for deg, c in self._coeffs.items():
            if deg >= floor:
                out[deg] = c
        for deg, c in other._coeffs.items():
            if deg < floor:
                continue
            s = out.get(deg, Fraction(0)) + c
            if s:
                out[deg] = s
            else:
                out.pop(deg, None)
        return TruncatedLaurentSeries(out, floor)

    def __sub__(self, other: "TruncatedLaurentSeries") -> "TruncatedLaurentSeries":
        return self + other.negate()

    def negate(self) -> "TruncatedLaurentSeries":
        frac = None
        if self._fraction is not None:
            frac = (-self._fraction[0], self._fraction[1])
        return TruncatedLaurentSeries(
            {deg: -c for deg, c in self._coeffs.items()}, self._floor, frac
        )

    def scale(self, factor: _Scalar) -> "TruncatedLaurentSeries":
        factor = factor if isinstance(factor, Fraction) else Fraction(factor)
        if factor == 0:
            return TruncatedLaurentSeries({}, self._floor)
        frac = None
        if self._fraction is not None:
            frac = (self._fraction[0] * factor, self._fraction[1])
        return TruncatedLaurentSeries(
            {deg: c * factor for deg, c in self._coeffs.items()}, self._floor, frac
        )

    def mul_laurent(self, poly: Mapping[int, _Scalar]) -> "TruncatedLaurentSeries":
        """Multiply by an exactly-known Laurent polynomial (degree -> coeff).

        The result floor is floor + max degree of the polynomial: the unknown
        tail (degrees <= floor-1) shifted up by the top monomial is the first
        contamination.
        """
        terms = {d: (c if isinstance(c, Fraction) else Fraction(c)) for d, c in poly.items() if c}
        if not terms:
            return TruncatedLaurentSeries({}, self._floor)
        top = max(terms)
        floor = self._floor + top
        out: dict[int, Fraction] = {}
        for d1, c1 in self._coeffs.items():
            for d2, c2 in terms.items():
                deg = d1 + d2
                if deg < floor:
                    continue
                s = out.get(deg, Fraction(0)) + c1 * c2
                if s:
                    out[deg] = s
                else:
                    out.pop(deg, None)
        return TruncatedLaurentSeries(out, floor)

    def mul_poly(self, poly: RatPoly) -> "TruncatedLaurentSeries":
        return self.mul_laurent(poly.coeffs)

    def mul_series(self, other: "TruncatedLaurentSeries") -> "TruncatedLaurentSeries":
        """Multiply two truncated series; floor = max(F_a + ||b||, F_b + ||a||)."""
        deg_a = self.degree()
        deg_b = other.degree()
        if deg_a is ZERO_SO_FAR or deg_b is ZERO_SO_FAR:
            # A factor with no known nonzero coefficient: the product is not
            # known to be nonzero anywhere above the combined floor.
            floor = max(
                self._floor + (deg_b if deg_b is not ZERO_SO_FAR else other._floor),
                other._floor + (deg_a if deg_a is not ZERO_SO_FAR else self._floor),
            )
            return TruncatedLaurentSeries({}, floor)
        floor = max(self._floor + deg_b, other._floor + deg_a)
        out: dict[int, Fraction] = {}
        for d1, c1 in self._coeffs.items():
            for d2, c2 in other._coeffs.items():
                deg = d1 + d2
                if deg < floor:
                    continue
                s = out.get(deg, Fraction(0)) + c1 * c2
                if s:
                    out[deg] = s
                else:
                    out.pop(deg, None)
        return TruncatedLaurentSeries(out, floor)

    def shift(self, offset: int) -> "TruncatedLaurentSeries":
        """Multiply by x^offset (exact monomial: floor moves by offset)."""
        frac = None
        if self._fraction is not None:
            p, q = self._fraction
            if offset >= 0:
                frac = (p.shift_degrees(offset), q)
            else:
                frac = (p, q.shift_degrees(-offset))
        return TruncatedLaurentSeries(
            {deg + offset: c for deg, c in self._coeffs.items()}, self._floor + offset, frac
        )

    def truncate(self, new_floor: int) -> "TruncatedLaurentSeries":
        """Forget coefficients below new_floor (which must be >= floor)."""
        if new_floor < self._floor:
            raise InvalidParameter(
                f"cannot deepen a truncation: floor {self._floor}, requested {new_floor}"
            )
        return TruncatedLaurentSeries(
            {deg: c for deg, c in self._coeffs.items() if deg >= new_floor},
            new_floor,
            self._fraction,
        )

    def substitute_power(self, d: int) -> "TruncatedLaurentSeries":
        """Return the series with x replaced by x^d; floor becomes d*floor."""
        if not isinstance(d, int) or d < 1:
            raise InvalidParameter(f"substitution power must be a positive integer, got {d!r}")
        frac = None
        if self._fraction is not None:
            p, q = self._fraction
            frac = (p.substitute_power(d), q.substitute_power(d))
        return TruncatedLaurentSeries(
            {deg * d: c for deg, c in self._coeffs.items()}, self._floor * d, frac
        )

    def div_exact_poly(self, divisor: RatPoly) -> "TruncatedLaurentSeries":
        """Divide by an exactly-known nonzero polynomial.

        With divisor leading degree e, the result is exact down to floor - e:
        the unknown tail delta contributes delta/divisor, of degree
        <= (floor - 1) - e.
        """
        if divisor.is_zero():
            raise DivisionByZeroPoly("series division by the zero polynomial")
        e = int(divisor.degree())
        floor = self._floor - e
        out = _laurent_long_division(self._coeffs, divisor.coeffs, floor)
        frac = None
        if self._fraction is not None:
            p, q = self._fraction
            frac = (p, q * divisor)
        return TruncatedLaurentSeries(out, floor, frac)

    def div_series(self, other: "TruncatedLaurentSeries") -> "TruncatedLaurentSeries":
        """Divide by another truncated series (leading degree e = ||v||).

        Result floor: max(F_u - e, F_v + ||u|| - 2e); raises
        ZeroSoFarDivision when the divisor has no known nonzero coefficient.
        """
        deg_v = other.degree()
        if deg_v is ZERO_SO_FAR:
            raise ZeroSoFarDivision(
                "divisor is indistinguishable from zero at its current floor"
            )
        e = deg_v
        deg_u = self.degree()
        if deg_u is ZERO_SO_FAR:
            floor = max(self._floor - e, other._floor + self._floor - 2 * e)
            return TruncatedLaurentSeries({}, floor)
        floor = max(self._floor - e, other._floor + deg_u - 2 * e)
        out = _laurent_long_division(self._coeffs, other._coeffs, floor)
        return TruncatedLaurentSeries(out, floor)

    # -- identity -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        return self._floor == other._floor and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._floor, frozenset(self._coeffs.items())))

    # -- construction from exact fractions ------------------------------

    @classmethod
    def from_fraction(cls, p: RatPoly, q: RatPoly, floor: int) -> "TruncatedLaurentSeries":
        """Expand the rational function p/q as a Laurent series down to floor.

        The result carries (p, q) as exact provenance.
        """
        if q.is_zero():
            raise DivisionByZeroPoly("fraction with zero denominator")
        coeffs = _laurent_long_division(p.coeffs, q.coeffs, floor)
        return cls(coeffs, floor, fraction=(p, q))

    @classmethod
    def from_polynomial(cls, p: RatPoly, floor: int) -> "TruncatedLaurentSeries":
        return cls.from_fraction(p, RatPoly.one(), floor)

    # -- rendering ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "floor": self._floor,
            "coeffs": {str(deg): str(c) for deg, c in sorted(self._coeffs.items(), reverse=True)},
        }

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"TruncatedLaurentSeries(floor={self._floor}, terms={len(self._coeffs)})"

    def __str__(self) -> str:
        if not self._coeffs:
            return f"0 (down to x^{self._floor})"
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
        return out + f"  (exact down to x^{self._floor})"


def _laurent_long_division(
    num: Mapping[int, Fraction],
    den: Mapping[int, Fraction],
    stop_floor: int,
) -> dict[int, Fraction]:
    """Top-down long division of coefficient maps, producing all quotient
    coefficients at degrees >= stop_floor.  Inputs may have negative degrees.
    """
    den_terms = {d: c for d, c in den.items() if c}
    if not den_terms:
        raise DivisionByZeroPoly("division by zero coefficient map")
    e = max(den_terms)
    lc = den_terms[e]
    rem = {d: c for d, c in num.items() if c}
    out: dict[int, Fraction] = {}
    while rem:
        top = max(rem)
        k = top - e
        if k < stop_floor:
            break
        factor = rem[top] / lc
        out[k] = factor
        for d, c in den_terms.items():
            target = d + k
            s = rem.get(target, Fraction(0)) - factor * c
            if s:
                rem[target] = s
            else:
                rem.pop(target, None)
        # Degrees that can no longer influence quotient terms >= stop_floor
        # are discarded to keep the remainder small.
        cutoff = stop_floor + e
        for d in [d for d in rem if d < cutoff]:
            del rem[d]
    return {d: c for d, c in out.items() if c}


def _truncated_product(factors: list[dict[int, Fraction]], floor: int) -> dict[int, Fraction]:
    """Multiply Laurent polynomials whose top degree is 0, pruning below floor.

    Pruning is sound: every factor has top degree 0, so degrees < floor can
    never contribute to result degrees >= floor.
    """
    acc: dict[int, Fraction] = {0: Fraction(1)}
    for f in factors:
        nxt: dict[int, Fraction] = {}
        for d1, c1 in acc.items():
            for d2, c2 in f.items():
                deg = d1 + d2
                if deg < floor:
                    continue
                s = nxt.get(deg, Fraction(0)) + c1 * c2
                if s:
                    nxt[deg] = s
                else:
                    nxt.pop(deg, None)
        acc = nxt
    return acc


def generate_series(family: SeriesFamily) -> TruncatedLaurentSeries:
    """Generate f_d / g_d / h_d / u_d exactly down to the family's floor."""
    d, kind, floor = family.d, family.kind, family.floor
    if kind == "F":
        return _generate_f(d, floor)
    if kind == "G":
        return _generate_f(d, floor + (d - 1)).shift(-(d - 1))
    if kind == "H":
        return _generate_f(d, floor + 1).shift(-1)
    if kind == "U":
        return _generate_f(d, floor).mul_laurent({0: 1, -1: -1})
    raise InvalidParameter(f"unknown family kind {kind!r}")  # pragma: no cover


def generate(d: int, kind: str, floor: int) -> TruncatedLaurentSeries:
    """Convenience wrapper building the SeriesFamily inline."""
    return generate_series(SeriesFamily(d=d, kind=kind, floor=floor))


def _generate_f(d: int, floor: int) -> TruncatedLaurentSeries:
    if d < 2:
        raise InvalidParameter(f"d must be >= 2, got {d}")
    if floor > 0:
        raise InvalidParameter(f"floor must be <= 0, got {floor}")
    factors = []
    power = 1
    while power <= -floor:
        factors.append({0: Fraction(1), -power: Fraction(-1)})
        power *= d
    coeffs = _truncated_product(factors, floor)
    return TruncatedLaurentSeries(coeffs, floor)


def partial_product(d: int, k: int) -> tuple[RatPoly, RatPoly]:
    """The finite product r_k = prod_{t=0}^{k} (1 - x^{-d^t}) as an exact
    polynomial fraction (numerator, denominator = x^{degree sum})."""
    if d < 2 or k < 0:
        raise InvalidParameter("need d >= 2 and k >= 0")
    total = sum(d**t for t in range(k + 1))
    num = RatPoly.one()
    for t in range(k + 1):
        num = num * (RatPoly.monomial(d**t) - 1)
    # Each factor (1 - x^{-d^t}) was written as (x^{d^t} - 1)/x^{d^t}.
    return num, RatPoly.monomial(total)


def series_degree(u: TruncatedLaurentSeries):
    """Largest known nonzero degree, or the ZERO_SO_FAR marker."""
    return u.degree()


def rate_of_approximation(u: TruncatedLaurentSeries, p: RatPoly, q: RatPoly) -> int:
    """The c with ||u - p/q|| = -2||q|| - c, for the fraction exactly as given
    (q is NOT reduced against p first; the degree of q as supplied enters)."""
    if q.is_zero():
        raise DivisionByZeroPoly("rate of approximation needs a nonzero denominator")
    approx = TruncatedLaurentSeries.from_fraction(p, q, u.floor)
    diff = u - approx
    deg = diff.degree()
    if deg is ZERO_SO_FAR:
        raise InsufficientPrecision(
            f"u - p/q vanishes above the floor {diff.floor}; regenerate u deeper"
        )
    return -deg - 2 * int(q.degree())


@dataclass(frozen=True)
class FunctionalEquationReport:
    """Outcome of the self-similarity checks for f_d and g_d."""

    d: int
    verified_floor: int
    checked_degrees: int
    identities: tuple[str, ...] = field(default=("f-selfsimilar", "g-selfsimilar"))


def verify_functional_equations(d: int, floor: int) -> FunctionalEquationReport:
    """Check the defining self-similarity of the family exactly, coefficient
    by coefficient, for every degree >= floor:

        f_d(x^d) * (x - 1) == x * f_d(x)
        g_d(x^d) * x^{d^2 - 2d} * (x - 1) == g_d(x)

    Both sides are computed independently from truncated generators; any
    mismatch raises MismatchAt with the largest offending degree.
    """
    if d < 2:
        raise InvalidParameter(f"d must be >= 2, got {d}")
    if floor > -d:
        raise InvalidParameter(f"floor must be <= -d, got {floor}")

    checked = 0

    # f-identity, multiplied out to avoid any division: floors stay exact.
    f = generate(d, "F", floor - 1)
    lhs = f.substitute_power(d).mul_laurent({1: 1, 0: -1})  # f(x^d) * (x - 1)
    rhs = f.shift(1)  # x * f(x)
    checked += _compare_series(lhs, rhs, floor)

    # g-identity: g(x^d) * x^{d^2-2d} * (x-1) == g(x).
    g = generate(d, "G", floor)
    shift = d * d - 2 * d
    lhs_g = g.substitute_power(d).shift(shift).mul_laurent({1: 1, 0: -1})
    checked += _compare_series(lhs_g, g, floor)

    return FunctionalEquationReport(d=d, verified_floor=floor, checked_degrees=checked)


def _compare_series(a: TruncatedLaurentSeries, b: TruncatedLaurentSeries, floor: int) -> int:
    if a.floor > floor or b.floor > floor:
        raise InsufficientPrecision(
            f"comparison floor {floor} deeper than computed floors {a.floor}, {b.floor}"
        )
    top_a = a.degree()
    top_b = b.degree()
    top = max(
        top_a if top_a is not ZERO_SO_FAR else floor,
        top_b if top_b is not ZERO_SO_FAR else floor,
        0,
    )
    mismatches = [k for k in range(floor, top + 1) if a.coeff(k) != b.coeff(k)]
    if mismatches:
        raise MismatchAt(max(mismatches))
    return top - floor + 1
