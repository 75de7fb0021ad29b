"""Continued fractions of Laurent series by the Euclidean algorithm.

This module is the package's independent oracle: it knows nothing about the
structure theory of the generated families and derives every partial quotient
directly from series coefficients.

Exactness contract.  For a series known down to ``floor``, a computed
convergent p_i/q_i is certified to be a convergent of the *true* series
whenever 2*deg(q_i) <= -floor:

    the truncation U and the true series u differ by a tail of degree
    <= floor - 1, so ||u - p_i/q_i|| <= max(-deg q_i - deg q_{i+1}, floor-1)
    < -2 deg q_i, which characterizes convergents; symmetrically every true
    convergent with 2*deg q <= -floor is a convergent of U, so the two
    quotient sequences agree on the whole certified prefix.

Quotients past the certified prefix are never emitted: the expander raises
InsufficientPrecision and the caller regenerates the series with a deeper
floor.  Series carrying exact rational provenance (p, q) bypass truncation
entirely and terminate exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InsufficientPrecision,
    InvalidParameter,
    ZERO_SO_FAR,
)
from .laurent import TruncatedLaurentSeries, generate, rate_of_approximation
from .polys import RatPoly, poly_divmod


@dataclass(frozen=True)
class Convergent:
    """One convergent p/q, sign-normalized so that q's leading coefficient is
    positive; ``rate`` is the degree of the next partial quotient when that
    quotient is known, else None."""

    index: int
    p: RatPoly
    q: RatPoly
    rate: int | None

    def to_json_dict(self) -> dict:
        return {
            "n": self.index,
            "p": self.p.to_json_dict(),
            "q": self.q.to_json_dict(),
            "rate": self.rate,
        }


class CFExpansion:
    """Partial quotients a_0..a_M and the two convergent chains.

    ``raw_p``/``raw_q`` follow the plain recurrence

        p_{n+1} = a_{n+1} p_n + p_{n-1},   q_{n+1} = a_{n+1} q_n + q_{n-1}

    with seeds p_{-1}=1, q_{-1}=0, p_0=a_0, q_0=1 (no rescaling; the monic
    view needs the raw leading coefficients).  ``convergents`` is the
    sign-normalized public view.
    """

    def __init__(self, partial_quotients: list[RatPoly], terminated: bool):
        if not partial_quotients:
            raise InvalidParameter("a continued fraction needs at least a_0")
        for i, a in enumerate(partial_quotients):
            if i >= 1 and (a.is_zero() or a.degree() < 1):
                raise InvalidParameter(
                    f"partial quotient a_{i} must have degree >= 1, got {a}"
                )
        self.partial_quotients = list(partial_quotients)
        self.terminated = terminated
        self.raw_p: list[RatPoly] = []
        self.raw_q: list[RatPoly] = []
        p_prev, q_prev = RatPoly.one(), RatPoly.zero()
        p_cur, q_cur = partial_quotients[0], RatPoly.one()
        self.raw_p.append(p_cur)
        self.raw_q.append(q_cur)
        for a in partial_quotients[1:]:
            p_cur, p_prev = a * p_cur + p_prev, p_cur
            q_cur, q_prev = a * q_cur + q_prev, q_cur
            self.raw_p.append(p_cur)
            self.raw_q.append(q_cur)
        # Degree bookkeeping: deg q_{n+1} = sum of deg a_1..a_{n+1}.
        total = 0
        for i, a in enumerate(self.partial_quotients):
            if i == 0:
                continue
            total += int(a.degree())
            assert int(self.raw_q[i].degree()) == total, "degree bookkeeping broken"
        self.convergents: list[Convergent] = []
        for i, (p, q) in enumerate(zip(self.raw_p, self.raw_q)):
            sign = 1 if q.leading_coefficient() > 0 else -1
            rate = None
            if i + 1 < len(self.partial_quotients):
                rate = int(self.partial_quotients[i + 1].degree())
            self.convergents.append(Convergent(index=i, p=p * sign, q=q * sign, rate=rate))

    def __len__(self) -> int:
        return len(self.partial_quotients)

    @property
    def last_index(self) -> int:
        return len(self.partial_quotients) - 1

    def leading_coeff(self, n: int) -> Fraction:
        """rho_n = leading coefficient of the raw q_n; rho_{-1} = 0."""
        if n == -1:
            return Fraction(0)
        return self.raw_q[n].leading_coefficient()

    def determinant(self, n: int) -> RatPoly:
        """p_n q_{n-1} - p_{n-1} q_n on the raw chain (should be (-1)^n)."""
        if n == 0:
            # p_0 q_{-1} - p_{-1} q_0 with q_{-1} = 0, p_{-1} = 1, q_0 = 1.
            return -self.raw_q[0]
        return self.raw_p[n] * self.raw_q[n - 1] - self.raw_p[n - 1] * self.raw_q[n]

    def to_json_dict(self, monic: "MonicCF | None" = None) -> dict:
        data = {
            "a": [a.to_json_dict() for a in self.partial_quotients],
            "convergents": [c.to_json_dict() for c in self.convergents],
        }
        if monic is not None:
            data["betas"] = [str(monic.beta(n)) for n in range(2, monic.max_index + 1)]
        return data


def cf_expand(u: TruncatedLaurentSeries, n: int) -> CFExpansion:
    """Expand u as a continued fraction with partial quotients a_0..a_n.

    Rational-provenance input terminates exactly (possibly before a_n);
    truncated input emits only quotients certified by 2*deg(q_i) <= -floor
    and raises InsufficientPrecision if a_n is not reachable.
    """
    if not isinstance(n, int) or n < 0:
        raise InvalidParameter(f"quotient count must be an integer >= 0, got {n!r}")
    if u.fraction is not None:
        return _cf_expand_exact(*u.fraction, n)
    return _cf_expand_truncated(u, n)


def _euclid_chain(num: RatPoly, den: RatPoly, n: int, certify_degree: int | None):
    """Shared Euclid loop.  Emits quotients of num/den; when certify_degree is
    given, stops before any quotient whose denominator-chain degree g_i would
    violate 2*g_i <= certify_degree.  Returns (quotients, terminated)."""
    quotients: list[RatPoly] = []
    a0, rem = poly_divmod(num, den)
    quotients.append(a0)
    x_cur, y_cur = den, rem
    q_prev, q_cur = RatPoly.zero(), RatPoly.one()
    while len(quotients) <= n and not y_cur.is_zero():
        a, rem = poly_divmod(x_cur, y_cur)
        q_next = a * q_cur + q_prev
        if certify_degree is not None and 2 * int(q_next.degree()) > certify_degree:
            return quotients, False
        quotients.append(a)
        q_prev, q_cur = q_cur, q_next
        x_cur, y_cur = y_cur, rem
    return quotients, y_cur.is_zero()


def _cf_expand_exact(p: RatPoly, q: RatPoly, n: int) -> CFExpansion:
    quotients, terminated = _euclid_chain(p, q, n, certify_degree=None)
    return CFExpansion(quotients, terminated=terminated)


def _cf_expand_truncated(u: TruncatedLaurentSeries, n: int) -> CFExpansion:
    floor = u.floor
    # Shift every known coefficient up into an honest polynomial pair:
    # u = N / x^{-floor} with N collecting degrees floor..top.
    num = RatPoly({deg - floor: c for deg, c in u.coeffs.items()})
    den = RatPoly.monomial(-floor)
    quotients, exhausted = _euclid_chain(num, den, n, certify_degree=-floor)
    if len(quotients) <= n:
        # Either a quotient failed certification or the truncation's Euclid
        # ran dry; in both cases the true series is not pinned down: a tail
        # below the floor could alter or extend the expansion.
        raise InsufficientPrecision(
            f"only {len(quotients) - 1} partial quotients certified at floor {floor}; "
            f"requested {n} - regenerate with a deeper floor"
        )
    return CFExpansion(quotients, terminated=False)


@dataclass(frozen=True)
class MonicCF:
    """Monic re-normalization of an expansion.

    With rho_n the leading coefficient of the raw q_n (rho_{-1} = 0):

        qhat_n    = q_n / rho_n                    (monic denominators)
        ahat_{n+1} = a_{n+1} rho_n / rho_{n+1}      (monic quotients)
        beta_{n+1} = rho_{n-1} / rho_{n+1}

    and the monic recurrence qhat_{n+1} = ahat_{n+1} qhat_n + beta_{n+1}
    qhat_{n-1} holds exactly (verified at construction), with the seed
    conventions qhat_{-1} = 0, qhat_0 = 1 and hence beta_1 = 0.
    """

    max_index: int
    _betas: dict[int, Fraction]
    _monic_quotients: dict[int, RatPoly]
    _monic_denominators: dict[int, RatPoly]
    _leading_coeffs: dict[int, Fraction]

    def beta(self, n: int) -> Fraction:
        if n not in self._betas:
            raise InvalidParameter(f"beta_{n} not available (have 1..{self.max_index})")
        return self._betas[n]

    def monic_quotient(self, n: int) -> RatPoly:
        if n not in self._monic_quotients:
            raise InvalidParameter(f"monic quotient {n} not available")
        return self._monic_quotients[n]

    def monic_denominator(self, n: int) -> RatPoly:
        if n not in self._monic_denominators:
            raise InvalidParameter(f"monic denominator {n} not available")
        return self._monic_denominators[n]

    def leading_coeff(self, n: int) -> Fraction:
        if n not in self._leading_coeffs:
            raise InvalidParameter(f"leading coefficient {n} not available")
        return self._leading_coeffs[n]

    def betas_from_2(self) -> list[Fraction]:
        return [self._betas[n] for n in range(2, self.max_index + 1)]


def monic_normalize(cf: CFExpansion) -> MonicCF:
    """Build the monic view and verify its recurrence reconstructs every
    monic denominator exactly."""
    m = cf.last_index
    if m < 1:
        raise InvalidParameter("monic normalization needs at least two convergents")
    rho = {n: cf.leading_coeff(n) for n in range(-1, m + 1)}
    qhat = {-1: RatPoly.zero(), 0: RatPoly.one()}
    for i in range(1, m + 1):
        qhat[i] = cf.raw_q[i] * (1 / rho[i])
    ahat = {}
    betas = {}
    for i in range(1, m + 1):
        ahat[i] = cf.partial_quotients[i] * (rho[i - 1] / rho[i])
        betas[i] = rho[i - 2] / rho[i]
    for i in range(1, m + 1):
        rebuilt = ahat[i] * qhat[i - 1] + betas[i] * qhat[i - 2]
        assert rebuilt == qhat[i], f"monic recurrence failed to rebuild qhat_{i}"
    return MonicCF(
        max_index=m,
        _betas=betas,
        _monic_quotients=ahat,
        _monic_denominators=qhat,
        _leading_coeffs=rho,
    )


def convergent_soundness(u: TruncatedLaurentSeries, cf: CFExpansion) -> list[int]:
    """Measure the rate of approximation of every convergent against u and
    assert it equals the degree of the next partial quotient (and is >= 1).
    Returns the list of measured rates."""
    rates: list[int] = []
    for conv in cf.convergents:
        if conv.rate is None:
            break
        measured = rate_of_approximation(u, conv.p, conv.q)
        assert measured == conv.rate, (
            f"convergent {conv.index}: measured rate {measured} != deg a_{conv.index + 1} "
            f"= {conv.rate}"
        )
        assert measured >= 1, f"convergent {conv.index} has nonpositive rate {measured}"
        rates.append(measured)
    return rates


DEPTH_CAP_DEFAULT = 2000

_series_cache: dict[tuple[int, str], TruncatedLaurentSeries] = {}


def default_floor(d: int, n: int) -> int:
    """Default generation floor for an n-quotient expansion: denominator
    degrees grow by about d per two quotients, certification needs twice the
    final degree, plus guard margin."""
    return -(2 * n * d + 16)


def family_series(d: int, kind: str, floor: int) -> TruncatedLaurentSeries:
    """Cached family generation; reuses any previously generated series that
    is at least as deep (a deeper floor only certifies more)."""
    key = (d, kind)
    cached = _series_cache.get(key)
    if cached is None or cached.floor > floor:
        cached = generate(d, kind, floor)
        _series_cache[key] = cached
    return cached


def expand_family(
    d: int,
    kind: str,
    n: int,
    floor: int | None = None,
    depth_cap: int = DEPTH_CAP_DEFAULT,
) -> tuple[CFExpansion, TruncatedLaurentSeries]:
    """Expand one of the built-in families to n quotients, doubling the
    generation depth on InsufficientPrecision up to depth_cap."""
    depth = -(floor if floor is not None else default_floor(d, n))
    if depth <= 0:
        raise InvalidParameter(f"floor must be negative, got {-depth}")
    last_error: InsufficientPrecision | None = None
    while depth <= depth_cap:
        series = family_series(d, kind, -depth)
        try:
            return cf_expand(series, n), series
        except InsufficientPrecision as exc:
            last_error = exc
            depth *= 2
    raise InsufficientPrecision(
        f"depth cap {depth_cap} reached for {kind}_{d} with n={n}: {last_error}"
    )
