"""Number-theoretic certification that f_d(a) is not badly approximable.

The certificate is a witness tuple (a, d, p, n0, t, residue) satisfying four
conditions, checked here entirely with modular arithmetic:

  c1  p is an odd prime (p >= 5 when d = 3), p does not divide a, and
      p divides a^{d^{n0}} - 1 exactly once;
  c2  the multiplicative order of d modulo p^2 is p times its order modulo
      p (the base is the radix d — 2 or 3 — never the evaluated integer a);
  c3  t is even when d = 3, and the integer-primitive denominator q_t of
      the t-th convergent of g_d vanishes at a^{d^{n0}} modulo p^2;
  c4  q_t'(1) is nonzero modulo p.

Under these, the root lifts to every power p^m (Newton iteration, c4 makes
the derivative a unit) and the powers a^{d^n} revisit the lifted root, so
q_t(a^{d^n}) picks up arbitrarily large p-power factors; the demo routine
exhibits the lift and the revisit explicitly.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import isprime, primerange
from sympy.ntheory import n_order

from .errors import (
    HypothesisFailed,
    InvalidParameter,
    NotCoprime,
    NotFound,
    ScaleNotInvertible,
    SearchExhausted,
)
from .contfrac import expand_family, monic_normalize
from .polys import (
    IntPolyWithContent,
    RatPoly,
    poly_derivative,
    poly_eval_mod,
    poly_normalize_integer,
)

import math


# ---------------------------------------------------------------------------
# multiplicative orders and growth conditions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaOrder:
    """Multiplicative order of ``base`` modulo prime^power."""

    base: int
    prime: int
    power: int
    order: int


def mult_order(a: int, m: int) -> int:
    """Least e >= 1 with a^e = 1 (mod m)."""
    if m < 2:
        raise InvalidParameter(f"modulus must be >= 2, got {m}")
    if math.gcd(a, m) != 1:
        raise NotCoprime(f"gcd({a}, {m}) != 1")
    return int(n_order(a, m))


def gamma_growth(a: int, p: int) -> bool:
    """True iff the order of a modulo p^2 is p times its order modulo p."""
    if not isprime(p) or p == 2:
        raise InvalidParameter(f"need an odd prime, got {p}")
    return mult_order(a, p * p) == p * mult_order(a, p)


def fermat_quotient_nonzero(a: int, p: int) -> bool:
    """True iff a^{p-1} is not 1 modulo p^2.

    When true, the order of a mod p^2 cannot divide p-1, forcing the
    p-fold order growth; that implication is asserted as a cross-check.
    """
    if not isprime(p) or p == 2:
        raise InvalidParameter(f"need an odd prime, got {p}")
    if a % p == 0:
        raise NotCoprime(f"{p} divides {a}")
    nonzero = pow(a, p - 1, p * p) != 1
    if nonzero:
        assert gamma_growth(a, p), f"order growth should follow for a={a}, p={p}"
    return nonzero


def wieferich_scan(a: int, bound: int) -> list[int]:
    """All odd primes p <= bound, not dividing a, with a^{p-1} = 1 mod p^2
    (the rare primes for which the growth condition fails at base a)."""
    if bound < 3:
        raise InvalidParameter(f"bound must be >= 3, got {bound}")
    hits = []
    for p in primerange(3, bound + 1):
        p = int(p)
        if a % p == 0:
            continue
        if pow(a, p - 1, p * p) == 1:
            hits.append(p)
    return hits


def exact_divisibility(p: int, n_value: int) -> bool:
    """True iff p divides n_value but p^2 does not."""
    if n_value == 0:
        raise InvalidParameter("exact divisibility is undefined for 0")
    return n_value % p == 0 and n_value % (p * p) != 0


def power_tower_residue(a: int, d: int, n0: int, modulus: int) -> int:
    """a^{d^{n0}} mod modulus by n0 successive d-th powerings (never forms
    the giant integer)."""
    if n0 < 0:
        raise InvalidParameter(f"n0 must be >= 0, got {n0}")
    x = a % modulus
    for _ in range(n0):
        x = pow(x, d, modulus)
    return x


def exact_divisibility_tower(a: int, d: int, n0: int, p: int) -> bool:
    """Exact divisibility p || a^{d^{n0}} - 1 checked at modulus p^2 only."""
    r = power_tower_residue(a, d, n0, p * p)
    return r % p == 1 and r != 1


def order_growth_check(a: int, p: int, m_max: int) -> list[GammaOrder]:
    """Verify |order of a mod p^{m+1}| = p^m * |order mod p| for m <= m_max.

    Requires the base growth condition; HypothesisFailed otherwise.
    """
    if m_max < 1:
        raise InvalidParameter(f"need m_max >= 1, got {m_max}")
    if not gamma_growth(a, p):
        raise HypothesisFailed(f"order of {a} mod {p}^2 does not grow p-fold")
    base_order = mult_order(a, p)
    out = [GammaOrder(base=a, prime=p, power=1, order=base_order)]
    for m in range(1, m_max + 1):
        order = mult_order(a, p ** (m + 1))
        expected = base_order * p**m
        if order != expected:
            raise HypothesisFailed(
                f"order of {a} mod {p}^{m + 1} is {order}, expected {expected}"
            )
        out.append(GammaOrder(base=a, prime=p, power=m + 1, order=order))
    return out


# ---------------------------------------------------------------------------
# convergent denominators of g_d in integer-primitive form
# ---------------------------------------------------------------------------

_denominator_cache: dict[int, list[IntPolyWithContent]] = {}


def convergent_denominators(d: int, t_max: int) -> list[IntPolyWithContent]:
    """Integer-primitive monic-normalized denominators q_0..q_{t_max} of g_d."""
    cached = _denominator_cache.get(d)
    if cached is None or len(cached) <= t_max:
        cf, _ = expand_family(d, "G", t_max)
        monic = monic_normalize(cf)
        cached = [poly_normalize_integer(monic.monic_denominator(t)) if t > 0
                  else poly_normalize_integer(RatPoly.one())
                  for t in range(t_max + 1)]
        _denominator_cache[d] = cached
    return cached[: t_max + 1]


def _require_unit_scale(qt: IntPolyWithContent, p: int, t: int) -> None:
    scale = qt.scale
    if scale.numerator % p == 0 or scale.denominator % p == 0:
        raise ScaleNotInvertible(
            f"normalization scale {scale} of q_{t} is not a unit at p={p}"
        )


# ---------------------------------------------------------------------------
# the four-condition certificate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionCheck:
    """Verdicts c1..c4 with the modular evidence behind them."""

    a: int
    d: int
    p: int
    n0: int
    t: int
    verdicts: dict[str, bool]
    residue: int  # a^{d^{n0}} mod p^2
    qt_value: int  # q_t(residue) mod p^2
    qt_derivative_at_1: int  # q_t'(1) mod p
    qt: IntPolyWithContent

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())


@dataclass(frozen=True)
class BadApproxWitness:
    """A full certificate that f_d(a) is not badly approximable."""

    a: int
    d: int
    p: int
    n0: int
    t: int
    residue: int
    conditions: dict[str, bool]
    qt: IntPolyWithContent

    def to_json_dict(self) -> dict:
        coeffs = self.qt.int_coeffs()
        top = max(coeffs) if coeffs else 0
        ascending = ",".join(str(coeffs.get(k, 0)) for k in range(top + 1))
        return {
            "a": self.a,
            "d": self.d,
            "p": self.p,
            "n0": self.n0,
            "t": self.t,
            "residue": self.residue,
            "conditions": dict(self.conditions),
            "qt": ascending,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "BadApproxWitness":
        qt_poly = RatPoly.from_text(data["qt"])
        return cls(
            a=int(data["a"]),
            d=int(data["d"]),
            p=int(data["p"]),
            n0=int(data["n0"]),
            t=int(data["t"]),
            residue=int(data["residue"]),
            conditions={k: bool(v) for k, v in data["conditions"].items()},
            qt=poly_normalize_integer(qt_poly),
        )


def check_conditions(
    a: int, d: int, p: int, n0: int, t: int, qt: IntPolyWithContent
) -> ConditionCheck:
    """Evaluate the four witness conditions for the given parameters.

    ``qt`` must be the integer-primitive denominator of the t-th convergent
    of g_d; a normalization scale sharing a factor with p raises
    ScaleNotInvertible (the polynomial cannot be reduced mod p)."""
    if d not in (2, 3):
        raise InvalidParameter(f"certificates exist for d in {{2, 3}}, got {d}")
    if n0 < 1 or t < 1:
        raise InvalidParameter("need n0 >= 1 and t >= 1")
    _require_unit_scale(qt, p, t)
    p2 = p * p

    prime_ok = bool(isprime(p)) and (p >= 5 if d == 3 else p % 2 == 1)
    coprime_ok = a % p != 0 if prime_ok else False
    residue = power_tower_residue(a, d, n0, p2)
    c1 = prime_ok and coprime_ok and residue % p == 1 and residue != 1

    try:
        c2 = gamma_growth(d, p) if prime_ok else False
    except (NotCoprime, InvalidParameter):
        c2 = False

    qt_value = poly_eval_mod(qt, residue, p2)
    parity_ok = (t % 2 == 0) if d == 3 else True
    c3 = parity_ok and qt_value == 0

    deriv = poly_derivative(qt.primitive)
    qt_derivative_at_1 = poly_eval_mod(deriv, 1, p) if not deriv.is_zero() else 0
    c4 = qt_derivative_at_1 != 0

    return ConditionCheck(
        a=a,
        d=d,
        p=p,
        n0=n0,
        t=t,
        verdicts={"c1": c1, "c2": c2, "c3": c3, "c4": c4},
        residue=residue,
        qt_value=qt_value,
        qt_derivative_at_1=qt_derivative_at_1,
        qt=qt,
    )


def witness_from_check(check: ConditionCheck) -> BadApproxWitness:
    if not check.passed:
        raise InvalidParameter(f"conditions not all satisfied: {check.verdicts}")
    return BadApproxWitness(
        a=check.a,
        d=check.d,
        p=check.p,
        n0=check.n0,
        t=check.t,
        residue=check.residue,
        conditions=dict(check.verdicts),
        qt=check.qt,
    )


def revalidate_witness(w: BadApproxWitness) -> ConditionCheck:
    """Re-run every condition from scratch, including recomputing q_t from
    the continued-fraction oracle and comparing it with the stored one."""
    qt_fresh = convergent_denominators(w.d, w.t)[w.t]
    if qt_fresh.primitive != w.qt.primitive:
        raise InvalidParameter(
            f"stored q_{w.t} does not match the freshly computed denominator"
        )
    check = check_conditions(w.a, w.d, w.p, w.n0, w.t, qt_fresh)
    if not check.passed:
        raise InvalidParameter(f"witness fails revalidation: {check.verdicts}")
    if check.residue != w.residue:
        raise InvalidParameter(
            f"stored residue {w.residue} != recomputed {check.residue}"
        )
    return check


# ---------------------------------------------------------------------------
# the search
# ---------------------------------------------------------------------------


@dataclass
class SearchDiagnostics:
    primes_considered: int = 0
    primes_rejected_growth: int = 0
    primes_rejected_divides_a: int = 0
    admissible_pairs: int = 0
    evaluations: int = 0
    scale_skips: int = 0
    roots_without_c4: int = 0

    def summary(self) -> dict:
        return dict(self.__dict__)


def _search_one_prime(
    a: int,
    d: int,
    p: int,
    n0_bound: int,
    t_bound: int,
    denominators: list[IntPolyWithContent],
    diag: SearchDiagnostics,
) -> BadApproxWitness | None:
    """Scan (n0, t) lexicographically for one prime; None if nothing passes."""
    p2 = p * p
    t_values = [t for t in range(1, t_bound + 1) if d == 2 or t % 2 == 0]

    # Per-t data independent of n0: unit-scale flag and q_t'(1) mod p.
    usable: list[tuple[int, dict[int, int]]] = []
    for t in t_values:
        qt = denominators[t]
        try:
            _require_unit_scale(qt, p, t)
        except ScaleNotInvertible:
            diag.scale_skips += 1
            continue
        deriv = poly_derivative(qt.primitive)
        d_at_1 = poly_eval_mod(deriv, 1, p) if not deriv.is_zero() else 0
        usable.append((t, qt.int_coeffs(), d_at_1))

    max_deg = 0
    for _, coeffs, _ in usable:
        if coeffs:
            max_deg = max(max_deg, max(coeffs))

    residue = a % p2
    for n0 in range(1, n0_bound + 1):
        residue = pow(residue, d, p2)
        if residue % p != 1 or residue == 1:
            continue  # p does not divide a^{d^{n0}} - 1 exactly once
        diag.admissible_pairs += 1
        powers = [1] * (max_deg + 1)
        for k in range(1, max_deg + 1):
            powers[k] = powers[k - 1] * residue % p2
        for t, coeffs, d_at_1 in usable:
            diag.evaluations += 1
            value = 0
            for deg, c in coeffs.items():
                value += c * powers[deg]
            if value % p2 != 0:
                continue
            if d_at_1 == 0:
                diag.roots_without_c4 += 1
                continue
            check = check_conditions(a, d, p, n0, t, denominators[t])
            if check.passed:
                return witness_from_check(check)
            diag.roots_without_c4 += 1
    return None


def witness_search(
    a: int,
    d: int,
    p_bound: int,
    n0_bound: int,
    t_bound: int,
    threads: int = 1,
) -> BadApproxWitness:
    """Find the lexicographically-first witness (ordered by p, then n0, then
    t) within the given bounds; NotFound carries the scan diagnostics.

    The result is independent of ``threads``: primes are scanned as
    independent units and reduced to the smallest p that yields a witness.
    """
    if a < 2 or d not in (2, 3):
        raise InvalidParameter(f"need a >= 2 and d in {{2, 3}}, got a={a}, d={d}")
    if p_bound < 3 or n0_bound < 1 or t_bound < 1:
        raise InvalidParameter("all search bounds must be positive (p_bound >= 3)")
    denominators = convergent_denominators(d, t_bound)
    diag = SearchDiagnostics()

    candidates: list[int] = []
    for p in primerange(3 if d == 2 else 5, p_bound + 1):
        p = int(p)
        diag.primes_considered += 1
        if a % p == 0:
            diag.primes_rejected_divides_a += 1
            continue
        try:
            if not gamma_growth(d, p):
                diag.primes_rejected_growth += 1
                continue
        except NotCoprime:
            diag.primes_rejected_growth += 1
            continue
        candidates.append(p)

    def run(p: int) -> BadApproxWitness | None:
        return _search_one_prime(a, d, p, n0_bound, t_bound, denominators, diag)

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, candidates))
        for result in results:  # candidates are ascending: first hit is smallest p
            if result is not None:
                return result
    else:
        for p in candidates:
            result = run(p)
            if result is not None:
                return result
    raise NotFound(
        f"no witness for a={a}, d={d} within p<={p_bound}, n0<={n0_bound}, "
        f"t<={t_bound}; diagnostics: {diag.summary()}"
    )


# ---------------------------------------------------------------------------
# Hensel lifting demo: divisibility by arbitrary p-powers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HenselDemo:
    """Evidence that p^m divides q_t(a^{d^n}) for an explicitly found n."""

    m: int
    n: int
    lifted_root: int
    exponent_residue: int  # a^{d^n} mod p^m
    evaluation: int  # q_t(a^{d^n}) mod p^m (must be 0)


def hensel_divisibility_demo(
    w: BadApproxWitness, m: int, cap: int | None = None
) -> HenselDemo:
    """Lift the witness root from mod p^2 to mod p^m (Newton steps; condition
    c4 makes q_t' a unit at the root), then search n in [n0, n0 + cap] with
    a^{d^n} = lifted root (mod p^m) and confirm q_t vanishes there mod p^m.
    """
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    p = w.p
    if cap is None:
        cap = 4 * p ** (m - 1)
    coeffs = w.qt.int_coeffs()
    deriv = poly_derivative(w.qt.primitive)

    # Newton lift: root mod p^k -> root mod p^{k+1}.
    root = w.residue % (p * p)
    modulus = p * p
    while modulus < p**m:
        modulus *= p
        value = poly_eval_mod(coeffs, root, modulus)
        dval = poly_eval_mod(deriv, root, p)
        inv = pow(dval, -1, modulus)
        root = (root - value * inv) % modulus
    pm = p**m
    root %= pm
    assert poly_eval_mod(coeffs, root, pm) == 0, "Newton lift failed"

    x = power_tower_residue(w.a, w.d, w.n0, pm)
    for n in range(w.n0, w.n0 + cap + 1):
        if x == root:
            evaluation = poly_eval_mod(coeffs, x, pm)
            assert evaluation == 0
            return HenselDemo(
                m=m, n=n, lifted_root=root, exponent_residue=x, evaluation=evaluation
            )
        x = pow(x, w.d, pm)
    raise SearchExhausted(
        f"no exponent within cap {cap} reaches the lifted root mod {p}^{m}"
    )


# ---------------------------------------------------------------------------
# survey table: first witnesses per squaring-orbit of the 1-units (d = 2)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitRow:
    """One orbit of the nontrivial 1-units mod p^2 under x -> x^d.

    ``t`` and ``residue`` give the first convergent denominator with a root
    in the orbit (t = None when none exists within the scanned bound);
    ``a_classes`` lists the +/- compressed residues a mod p^2 covered by this
    orbit (a and -a reach the same squaring orbit)."""

    p: int
    t: int | None
    residue: int | None
    orbit: tuple[int, ...]
    a_classes: tuple[int, ...]


def orbit_table(
    primes: list[int], t_bound: int, d: int = 2, include_missing: bool = False
) -> list[OrbitRow]:
    """For each prime, decompose the 1-units 1+cp (c != 0) mod p^2 into
    orbits of the d-th-powering map and record the first q_t (t <= t_bound,
    with q_t'(1) a unit mod p) having a root in each orbit."""
    denominators = convergent_denominators(d, t_bound)
    t_values = [t for t in range(1, t_bound + 1) if d == 2 or t % 2 == 0]
    rows: list[OrbitRow] = []
    for p in primes:
        p = int(p)
        if not isprime(p) or p == 2 or (d == 3 and p < 5):
            raise InvalidParameter(f"table rows need valid primes for d={d}, got {p}")
        p2 = p * p
        usable = []
        for t in t_values:
            qt = denominators[t]
            try:
                _require_unit_scale(qt, p, t)
            except ScaleNotInvertible:
                continue
            deriv = poly_derivative(qt.primitive)
            if poly_eval_mod(deriv, 1, p) == 0:
                continue
            usable.append((t, qt.int_coeffs()))

        seen: set[int] = set()
        units = [1 + c * p for c in range(1, p)]
        for start in units:
            if start in seen:
                continue
            orbit = []
            x = start
            while x not in seen:
                seen.add(x)
                orbit.append(x)
                x = pow(x, d, p2)
            orbit_sorted = tuple(sorted(orbit))
            hit_t = hit_residue = None
            for t, coeffs in usable:
                roots = [e for e in orbit_sorted if poly_eval_mod(coeffs, e, p2) == 0]
                if roots:
                    hit_t, hit_residue = t, min(roots)
                    break
            classes = tuple(sorted(min(e, p2 - e) for e in orbit_sorted))
            if hit_t is not None or include_missing:
                rows.append(
                    OrbitRow(
                        p=p,
                        t=hit_t,
                        residue=hit_residue,
                        orbit=orbit_sorted,
                        a_classes=classes,
                    )
                )
    rows.sort(key=lambda r: (r.p, r.t if r.t is not None else 10**9))
    return rows


def enumerate_orbit_hits(p: int, t_bound: int, d: int = 2) -> list[tuple[int, int]]:
    """Every certified (t, residue) pair for a prime: t <= t_bound with
    q_t'(1) a unit mod p and residue a nontrivial 1-unit root of q_t mod p^2.

    Unlike ``orbit_table`` (which keeps only the first hit per orbit), this
    lists all hits, so any externally quoted pair can be checked for
    membership even when an earlier t serves the same orbit."""
    p = int(p)
    if not isprime(p) or p == 2 or (d == 3 and p < 5):
        raise InvalidParameter(f"orbit hits need a valid prime for d={d}, got {p}")
    p2 = p * p
    denominators = convergent_denominators(d, t_bound)
    t_values = [t for t in range(1, t_bound + 1) if d == 2 or t % 2 == 0]
    units = [1 + c * p for c in range(1, p)]
    hits: list[tuple[int, int]] = []
    for t in t_values:
        qt = denominators[t]
        try:
            _require_unit_scale(qt, p, t)
        except ScaleNotInvertible:
            continue
        deriv = poly_derivative(qt.primitive)
        if poly_eval_mod(deriv, 1, p) == 0:
            continue
        coeffs = qt.int_coeffs()
        for e in units:
            if poly_eval_mod(coeffs, e, p2) == 0:
                hits.append((t, e))
    return hits


def orbit_table_csv(rows: list[OrbitRow]) -> str:
    """CSV rendering: p, t, residue, a_classes (+/- compressed)."""
    lines = ["p,t,residue,a_classes"]
    for r in rows:
        classes = " ".join(f"+-{c}" for c in r.a_classes)
        lines.append(
            f"{r.p},{r.t if r.t is not None else ''},"
            f"{r.residue if r.residue is not None else ''},{classes}"
        )
    return "\n".join(lines) + "\n"
