"""Structural facts about the continued fractions of the generated families.

Everything here is *checked against the Euclidean oracle* in contfrac rather
than assumed: convergent transports between the companion series, the
parity classification of g_d convergents, the rigid quotient shape for
d in {2, 3} with its beta parameters, the closed beta recurrence for d = 2,
the d = 3 coefficient identities, and the well-approximability witnesses for
d >= 4.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    ClassificationFailure,
    IdentityFailure,
    InvalidParameter,
    RateViolation,
    ShapeViolation,
    ZeroDenominator,
)
from .contfrac import (
    CFExpansion,
    Convergent,
    MonicCF,
    cf_expand,
    expand_family,
    monic_normalize,
)
from .laurent import TruncatedLaurentSeries, generate, partial_product, rate_of_approximation
from .polys import RatPoly, poly_divmod, poly_substitute_power


def ones_polynomial(d: int) -> RatPoly:
    """1 + x + ... + x^{d-1} (the degree-(d-1) all-ones polynomial)."""
    if d < 1:
        raise InvalidParameter(f"need d >= 1, got {d}")
    return RatPoly.from_ascending([1] * d)


X_MINUS_1 = RatPoly.from_ascending([-1, 1])


def _is_multiple(numerator: RatPoly, divisor: RatPoly) -> bool:
    if numerator.is_zero():
        return True
    _, rem = poly_divmod(numerator, divisor)
    return rem.is_zero()


def _undo_power(p: RatPoly, d: int) -> RatPoly | None:
    """Inverse of substituting x -> x^d, or None if p is not a polynomial in x^d."""
    out: dict[int, Fraction] = {}
    for deg, c in p.coeffs.items():
        if deg % d != 0:
            return None
        out[deg // d] = c
    return RatPoly(out)


# ---------------------------------------------------------------------------
# convergent transports between the companion series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransportedConvergent:
    """A convergent of h_d or u_d pushed forward to an approximant of g_d."""

    source: Convergent
    origin: str  # "H" or "U"
    result_p: RatPoly
    result_q: RatPoly
    claimed_rate_lower_bound: int
    exact_rate_condition: bool
    measured_rate: int


def transport(
    d: int,
    origin: str,
    conv: Convergent,
    g_series: TruncatedLaurentSeries | None = None,
) -> TransportedConvergent:
    """Push a convergent p/q of h_d (origin "H") or u_d (origin "U") forward
    to an approximant of g_d and measure its actual rate.

    origin H: (x-1) p(x^d) / q(x^d), rate >= c*d - 1,
              equality iff (x-1) does not divide q;
    origin U: p(x^d) / ((1+x+...+x^{d-1}) q(x^d)), rate >= d(c-1) + 1,
              equality iff (x-1) does not divide p;

    where c is the source convergent's rate.  A measured rate below the bound
    raises RateViolation; a wrong equality/strictness pattern does too.
    """
    if conv.rate is None:
        raise InvalidParameter("transport needs a source convergent with a known rate")
    c = conv.rate
    if origin == "H":
        result_p = X_MINUS_1 * poly_substitute_power(conv.p, d)
        result_q = poly_substitute_power(conv.q, d)
        bound = c * d - 1
        exact_cond = not _is_multiple(conv.q, X_MINUS_1)
    elif origin == "U":
        result_p = poly_substitute_power(conv.p, d)
        result_q = ones_polynomial(d) * poly_substitute_power(conv.q, d)
        bound = d * (c - 1) + 1
        exact_cond = not _is_multiple(conv.p, X_MINUS_1)
    else:
        raise InvalidParameter(f"origin must be 'H' or 'U', got {origin!r}")

    if g_series is None:
        g_series = generate(d, "G", -(2 * abs(int(result_q.degree())) + bound + 8))
    measured = rate_of_approximation(g_series, result_p, result_q)
    if measured < bound:
        raise RateViolation(
            f"transported {origin}-convergent {conv.index}: rate {measured} < bound {bound}"
        )
    if exact_cond and measured != bound:
        raise RateViolation(
            f"transported {origin}-convergent {conv.index}: expected exact rate {bound}, "
            f"measured {measured}"
        )
    if not exact_cond and measured == bound:
        raise RateViolation(
            f"transported {origin}-convergent {conv.index}: rate should exceed {bound}"
        )
    return TransportedConvergent(
        source=conv,
        origin=origin,
        result_p=result_p,
        result_q=result_q,
        claimed_rate_lower_bound=bound,
        exact_rate_condition=exact_cond,
        measured_rate=measured,
    )


def companion_map(
    d: int,
    direction: str,
    p: RatPoly,
    q: RatPoly,
    c: int,
    target_series: TruncatedLaurentSeries | None = None,
) -> tuple[RatPoly, RatPoly, int]:
    """Move an approximant between the companion pair u_d = (x-1) h_d.

    direction "U->H": p/q approximates u_d with rate c; returns
    (p, (x-1) q), an approximant of h_d with rate >= c - 1.
    direction "H->U": p/q approximates h_d with rate c; returns
    ((x-1) p, q), an approximant of u_d with rate >= c - 1.

    Returns (new_p, new_q, measured_rate); RateViolation if the measured
    rate falls below c - 1.
    """
    if direction == "U->H":
        new_p, new_q, kind = p, X_MINUS_1 * q, "H"
    elif direction == "H->U":
        new_p, new_q, kind = X_MINUS_1 * p, q, "U"
    else:
        raise InvalidParameter(f"direction must be 'U->H' or 'H->U', got {direction!r}")
    if target_series is None:
        target_series = generate(d, kind, -(2 * int(new_q.degree()) + abs(c) + 8))
    measured = rate_of_approximation(target_series, new_p, new_q)
    if measured < c - 1:
        raise RateViolation(
            f"companion map {direction}: measured rate {measured} < {c - 1}"
        )
    return new_p, new_q, measured


# ---------------------------------------------------------------------------
# parity classification of g_d convergents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassifiedConvergent:
    """Where a g_d convergent comes from: substitution of an h_d convergent
    (even index, origin H) or of a u_d convergent (odd index, origin U)."""

    index: int
    origin: str
    source_index: int
    source: Convergent


def classify_convergent(
    d: int,
    conv: Convergent,
    h_expansion: CFExpansion,
    u_expansion: CFExpansion,
) -> ClassifiedConvergent:
    """Decompose a convergent p_m/q_m of g_d according to its parity.

    Even m: q_m must be a polynomial in x^d, (x-1) must divide p_m, and
    (p_m/(x-1), q_m) with the substitution undone must equal an h_d
    convergent whose denominator is coprime to x-1.

    Odd m: q_m must be divisible by 1+x+...+x^{d-1} with a quotient that is
    a polynomial in x^d, p_m a polynomial in x^d, and the undone pair must
    equal a u_d convergent whose numerator is coprime to x-1.

    Raises ClassificationFailure(m) when any step fails.
    """
    m = conv.index
    p_m, q_m = conv.p, conv.q

    def fail(reason: str) -> ClassificationFailure:
        return ClassificationFailure(m, f"convergent {m} of g_{d}: {reason}")

    if m % 2 == 0:
        inner_q = _undo_power(q_m, d)
        if inner_q is None:
            raise fail("denominator is not a polynomial in x^d")
        if not _is_multiple(p_m, X_MINUS_1):
            raise fail("numerator is not divisible by x-1")
        reduced_p, _ = poly_divmod(p_m, X_MINUS_1)
        inner_p = _undo_power(reduced_p, d)
        if inner_p is None:
            raise fail("numerator/(x-1) is not a polynomial in x^d")
        source_exp, origin = h_expansion, "H"
    else:
        quot, rem = poly_divmod(q_m, ones_polynomial(d))
        if not rem.is_zero():
            raise fail("denominator is not divisible by 1+x+...+x^{d-1}")
        inner_q = _undo_power(quot, d)
        if inner_q is None:
            raise fail("denominator quotient is not a polynomial in x^d")
        inner_p = _undo_power(p_m, d)
        if inner_p is None:
            raise fail("numerator is not a polynomial in x^d")
        source_exp, origin = u_expansion, "U"

    target_deg = int(inner_q.degree()) if not inner_q.is_zero() else 0
    source = None
    for cand in source_exp.convergents:
        if int(cand.q.degree()) == target_deg:
            source = cand
            break
    if source is None:
        raise fail(
            f"no source convergent of degree {target_deg} within the supplied expansion"
        )
    # Same fraction up to a scalar: cross-multiplication must be proportional.
    if inner_p * source.q != inner_q * source.p:
        raise fail(f"undone pair does not match source convergent {source.index}")
    if origin == "H" and _is_multiple(source.q, X_MINUS_1):
        raise fail("source h-convergent denominator divisible by x-1")
    if origin == "U" and _is_multiple(source.p, X_MINUS_1):
        raise fail("source u-convergent numerator divisible by x-1")
    return ClassifiedConvergent(index=m, origin=origin, source_index=source.index, source=source)


def classify_all(d: int, m_max: int) -> list[ClassifiedConvergent]:
    """Classify every convergent of g_d up to index m_max."""
    g_exp, _ = expand_family(d, "G", m_max)
    depth = m_max // 2 + 2
    h_exp, _ = expand_family(d, "H", depth)
    u_exp, _ = expand_family(d, "U", depth)
    return [
        classify_convergent(d, conv, h_exp, u_exp)
        for conv in g_exp.convergents[: m_max + 1]
    ]


# ---------------------------------------------------------------------------
# rigid quotient shape and beta extraction (d in {2, 3})
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BetaSequence:
    """Beta parameters of the two-term monic recurrence

        qhat_{2k+1} = (1+x+...+x^{d-1}) qhat_{2k}   + beta_{2k+1} qhat_{2k-1}
        qhat_{2k+2} = (x-1)             qhat_{2k+1} + beta_{2k+2} qhat_{2k}

    For d = 3, ``sub_leading_a[m]`` and ``sub_sub_leading_b[m]`` are the
    second- and third-highest coefficients of the cube-collapsed form of
    qhat_m (coefficient of y^{k-1} and y^{k-2} where k = m // 2, after
    writing qhat_{2k} = s(x^3) and qhat_{2k+1} = (x^2+x+1) s(x^3)); indices
    outside s's support are 0.

    ``betas[1] = 0`` by the seed convention rho_{-1} = 0 / qhat_{-1} = 0.
    """

    d: int
    betas: dict[int, Fraction]
    sub_leading_a: dict[int, Fraction] = field(default_factory=dict)
    sub_sub_leading_b: dict[int, Fraction] = field(default_factory=dict)
    expansion: CFExpansion | None = None
    monic: MonicCF | None = None

    @property
    def max_index(self) -> int:
        return max(self.betas)

    def beta(self, n: int) -> Fraction:
        if n == 0:
            # Only ever used multiplied by beta_1 = 0; any finite value works,
            # 0 keeps the seed row of every identity exact.
            return Fraction(0)
        if n not in self.betas:
            raise InvalidParameter(f"beta_{n} not computed (have up to {self.max_index})")
        return self.betas[n]

    def a_coeff(self, m: int) -> Fraction:
        if self.d != 3:
            raise InvalidParameter("sub-leading coefficients are a d=3 construction")
        return self.sub_leading_a.get(m, Fraction(0))

    def b_coeff(self, m: int) -> Fraction:
        if self.d != 3:
            raise InvalidParameter("sub-sub-leading coefficients are a d=3 construction")
        return self.sub_sub_leading_b.get(m, Fraction(0))


def _collapse_cubes(qhat: RatPoly, m: int) -> RatPoly:
    """Write qhat_m (d=3) as s(x^3) for even m or (x^2+x+1) s(x^3) for odd m
    and return s; ShapeViolation if the form does not hold."""
    if m % 2 == 0:
        body = qhat
    else:
        body, rem = poly_divmod(qhat, ones_polynomial(3))
        if not rem.is_zero():
            raise ShapeViolation(m, f"qhat_{m} is not divisible by x^2+x+1")
    s = _undo_power(body, 3)
    if s is None:
        raise ShapeViolation(m, f"qhat_{m} does not collapse to a polynomial in x^3")
    return s


def beta_sequence(d: int, n: int) -> BetaSequence:
    """Extract beta_1..beta_n for g_d by exact remainder elimination.

    Independently of the leading-coefficient formula in monic_normalize,
    each beta is obtained by subtracting the asserted quotient shape
    (1+x+...+x^{d-1} at odd steps, x-1 at even steps) times the previous
    monic denominator and requiring the difference to be an *exact* scalar
    multiple of the denominator two steps back.  Both derivations must agree.

    ShapeViolation(i) reports the first index whose quotient departs from
    the rigid pattern — expected for every d >= 4.
    """
    if d < 2:
        raise InvalidParameter(f"need d >= 2, got {d}")
    if n < 2:
        raise InvalidParameter(f"need at least two quotients, got n={n}")
    cf, _ = expand_family(d, "G", n)
    monic = monic_normalize(cf)
    odd_shape = ones_polynomial(d)

    qhat = {-1: RatPoly.zero(), 0: RatPoly.one()}
    for i in range(1, n + 1):
        qhat[i] = monic.monic_denominator(i)

    betas: dict[int, Fraction] = {}
    for i in range(1, n + 1):
        shape = odd_shape if i % 2 == 1 else X_MINUS_1
        if monic.monic_quotient(i) != shape:
            raise ShapeViolation(i, f"monic quotient {i} is {monic.monic_quotient(i)}, not {shape}")
        diff = qhat[i] - shape * qhat[i - 1]
        prev = qhat[i - 2]
        if diff.is_zero():
            beta = Fraction(0)
        elif prev.is_zero():
            raise ShapeViolation(i, f"nonzero remainder against qhat_{i-2} = 0")
        else:
            if diff.degree() != prev.degree():
                raise ShapeViolation(i, f"remainder at step {i} has degree {diff.degree()}")
            beta = diff.leading_coefficient() / prev.leading_coefficient()
            if diff != prev * beta:
                raise ShapeViolation(i, f"remainder at step {i} is not a scalar multiple")
        if beta != monic.beta(i):
            raise ShapeViolation(
                i, f"beta_{i} mismatch: elimination {beta}, leading-coefficient {monic.beta(i)}"
            )
        betas[i] = beta

    a_coeffs: dict[int, Fraction] = {}
    b_coeffs: dict[int, Fraction] = {}
    if d == 3:
        for m in range(1, n + 1):
            s = _collapse_cubes(qhat[m], m)
            k = m // 2
            a_coeffs[m] = s.coeff(k - 1) if k >= 1 else Fraction(0)
            b_coeffs[m] = s.coeff(k - 2) if k >= 2 else Fraction(0)

    return BetaSequence(
        d=d,
        betas=betas,
        sub_leading_a=a_coeffs,
        sub_sub_leading_b=b_coeffs,
        expansion=cf,
        monic=monic,
    )


def beta_closed_form(n: int) -> dict[int, Fraction]:
    """The d=2 closed recurrence: seeds beta_2=2, beta_3=-1, beta_4=1, then

        beta_{2k+1} = -beta_{k+1} / beta_{2k}
        beta_{2k+2} = 1 + (-1)^k - beta_{2k+1}        (k >= 2)

    Returns {2: ..., ..., n: ...}; ZeroDenominator if some beta_{2k} = 0
    (never observed)."""
    if n < 4:
        raise InvalidParameter(f"need n >= 4, got {n}")
    betas: dict[int, Fraction] = {2: Fraction(2), 3: Fraction(-1), 4: Fraction(1)}
    k = 2
    while 2 * k + 1 <= n:
        if betas[2 * k] == 0:
            raise ZeroDenominator(f"beta_{2 * k} = 0 blocks the closed recurrence")
        betas[2 * k + 1] = -betas[k + 1] / betas[2 * k]
        if 2 * k + 2 <= n:
            betas[2 * k + 2] = 1 + (-1) ** k - betas[2 * k + 1]
        k += 1
    return {i: betas[i] for i in range(2, n + 1)}


# ---------------------------------------------------------------------------
# named identity checks
# ---------------------------------------------------------------------------


IDENTITY_NAMES = ("funceq", "lemma5", "prop2", "prop_sum3", "prop_bk", "theorem1", "bzz")


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    d: int
    k_range: tuple[int, int]
    status: str
    failures: list

    def to_json_dict(self) -> dict:
        return {
            "identity": self.identity,
            "d": self.d,
            "range": list(self.k_range),
            "status": self.status,
            "failures": self.failures,
        }


def verify_identity(
    name: str,
    d: int,
    k_range: tuple[int, int],
    strict: bool = False,
) -> IdentityReport:
    """Check one named identity exactly over k_range (inclusive).

    Identity tokens (fixed CLI vocabulary):
      funceq    — family self-similarity under x -> x^d (k_range = floor range);
      lemma5    — d=3: qhat_{6k} = qhat_{2k}(x^3) and the matching numerator
                  collapse phat_{6k} = x^3 (x-1) phat_{2k}(x^3);
      prop2     — d=3: beta_{6k+6} beta_{6k+4} beta_{6k+2} = beta_{2k+2};
      prop_sum3 — d=3: sum_{i=1..6} beta_{6k+i} = 3;
      prop_bk   — d=3: sum_{j-i>1} beta_{6k+i} beta_{6k+j} = 3 + beta_{6k} beta_{6k+1};
      theorem1  — every g_d convergent classifies (even -> H, odd -> U);
      bzz       — d=2: the closed beta recurrence matches the oracle betas.

    Returns a report with status "pass"/"fail" and the failing k values;
    raises IdentityFailure instead when strict=True.
    """
    lo, hi = k_range
    if lo > hi:
        raise InvalidParameter(f"empty range {k_range}")
    failures: list = []

    if name == "funceq":
        from .laurent import verify_functional_equations
        from .errors import MismatchAt

        floor = -abs(hi) if hi != 0 else -abs(lo)
        try:
            verify_functional_equations(d, min(floor, -d))
        except MismatchAt as exc:
            failures.append({"degree": exc.degree})
    elif name == "bzz":
        if d != 2:
            raise InvalidParameter("the closed beta recurrence is a d=2 statement")
        n = max(hi, 4)
        oracle = beta_sequence(2, n)
        closed = beta_closed_form(n)
        for i in range(max(lo, 2), n + 1):
            if closed[i] != oracle.beta(i):
                failures.append({"k": i, "closed": str(closed[i]), "oracle": str(oracle.beta(i))})
    elif name == "theorem1":
        for cls in classify_all(d, hi):
            expected = "H" if cls.index % 2 == 0 else "U"
            if cls.origin != expected:
                failures.append({"m": cls.index, "origin": cls.origin})
    elif name in ("lemma5", "prop2", "prop_sum3", "prop_bk"):
        if d != 3:
            raise InvalidParameter(f"identity {name} is a d=3 statement")
        failures = _verify_d3_identity(name, lo, hi)
    else:
        raise InvalidParameter(f"unknown identity {name!r} (choose from {IDENTITY_NAMES})")

    status = "pass" if not failures else "fail"
    if strict and failures:
        raise IdentityFailure(f"{name} failed at {failures[:3]}")
    return IdentityReport(identity=name, d=d, k_range=(lo, hi), status=status, failures=failures)


def _verify_d3_identity(name: str, lo: int, hi: int) -> list:
    failures: list = []
    if name == "lemma5":
        depth = 6 * hi + 2
        seq = beta_sequence(3, depth)
        cf = seq.expansion
        for k in range(max(lo, 1), hi + 1):
            rho6, rho2 = cf.leading_coeff(6 * k), cf.leading_coeff(2 * k)
            q6 = cf.raw_q[6 * k] * (1 / rho6)
            q2 = cf.raw_q[2 * k] * (1 / rho2)
            p6 = cf.raw_p[6 * k] * (1 / rho6)
            p2 = cf.raw_p[2 * k] * (1 / rho2)
            if q6 != poly_substitute_power(q2, 3):
                failures.append({"k": k, "part": "denominator"})
                continue
            expected_p = RatPoly.monomial(3) * X_MINUS_1 * poly_substitute_power(p2, 3)
            if p6 != expected_p:
                failures.append({"k": k, "part": "numerator"})
        return failures

    depth = 6 * hi + 6
    seq = beta_sequence(3, depth)
    for k in range(max(lo, 0), hi + 1):
        if name == "prop2":
            lhs = seq.beta(6 * k + 6) * seq.beta(6 * k + 4) * seq.beta(6 * k + 2)
            rhs = seq.beta(2 * k + 2)
        elif name == "prop_sum3":
            lhs = sum(seq.beta(6 * k + i) for i in range(1, 7))
            rhs = Fraction(3)
        else:  # prop_bk
            lhs = Fraction(0)
            for i in range(1, 7):
                for j in range(i + 2, 7):
                    lhs += seq.beta(6 * k + i) * seq.beta(6 * k + j)
            rhs = 3 + seq.beta(6 * k) * seq.beta(6 * k + 1)
        if lhs != rhs:
            failures.append({"k": k, "lhs": str(lhs), "rhs": str(rhs)})
    return failures


# ---------------------------------------------------------------------------
# d >= 4: explicit well-approximability witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WellApproxReport:
    d: int
    k_max: int
    rates: list[int]
    first_large_quotient_index: int
    first_large_quotient_degree: int


def well_approx_rate(d: int, k: int) -> int:
    """Predicted rate of the truncated product r_k against f_d:
    d^{k+1} - 2 (d^{k+1} - 1)/(d - 1)."""
    return d ** (k + 1) - 2 * (d ** (k + 1) - 1) // (d - 1)


def well_approx_report(d: int, k_max: int, scan_depth: int = 40) -> WellApproxReport:
    """Witness that f_d (d >= 4) admits approximations far better than any
    badly-approximable series allows.

    For each k <= k_max the finite product r_k = prod_{t<=k} (1 - x^{-d^t}),
    written over the denominator x^{(d^{k+1}-1)/(d-1)}, is measured against
    f_d; the rate must equal d^{k+1} - 2(d^{k+1}-1)/(d-1) and grow strictly.
    Also scans the g_d expansion for its first partial quotient of degree
    >= d (the trigger that rules out the rigid d in {2,3} shape).
    """
    if d < 4:
        raise InvalidParameter(f"well-approximability witnesses need d >= 4, got {d}")
    if k_max < 1:
        raise InvalidParameter(f"need k_max >= 1, got {k_max}")
    f = generate(d, "F", -(d ** (k_max + 1) + 8))
    rates: list[int] = []
    prev = None
    for k in range(0, k_max + 1):
        num, den = partial_product(d, k)
        measured = rate_of_approximation(f, num, den)
        predicted = well_approx_rate(d, k)
        if measured != predicted:
            raise RateViolation(
                f"r_{k} against f_{d}: measured rate {measured}, predicted {predicted}"
            )
        if prev is not None and measured <= prev:
            raise RateViolation(f"rates not strictly increasing at k={k}")
        rates.append(measured)
        prev = measured

    cf, _ = expand_family(d, "G", scan_depth)
    first_idx = first_deg = -1
    for i, a in enumerate(cf.partial_quotients):
        if i >= 1 and int(a.degree()) >= d:
            first_idx, first_deg = i, int(a.degree())
            break
    if first_idx < 0:
        raise RateViolation(
            f"no partial quotient of degree >= {d} within depth {scan_depth}"
        )
    return WellApproxReport(
        d=d,
        k_max=k_max,
        rates=rates,
        first_large_quotient_index=first_idx,
        first_large_quotient_degree=first_deg,
    )


def first_shape_violation(d: int, scan_depth: int = 40) -> int:
    """Index of the first quotient of g_d departing from the rigid shape
    (diagnostic for d >= 4; raises InvalidParameter when no violation occurs
    within scan_depth)."""
    try:
        beta_sequence(d, scan_depth)
    except ShapeViolation as exc:
        return exc.index
    raise InvalidParameter(f"no shape violation for d={d} within depth {scan_depth}")
