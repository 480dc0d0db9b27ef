"""Pólya groups of quadratic fields: closed formula, classification, direct computation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import parallel
from .abelian import closure
from .arith import factor, is_prime, is_squarefree
from .errors import InputError, ResourceLimitError
from .forms import (
    ClassGroupStructure,
    QuadField,
    field_from_d,
    form_class_group,
    ramified_prime_class,
    ramified_primes,
    unit_norm,
)


def _as_field(K):
    return K if isinstance(K, QuadField) else field_from_d(K)


def formula_exponent(K: QuadField) -> int:
    """Unclamped exponent e with |Po(K)| = 2**e."""
    r = len(ramified_primes(K))
    if K.is_real and unit_norm(K.d) == 1:
        return r - 2
    return r - 1


def polya_order_formula(K: QuadField) -> int:
    """|Po(K)| from the ramified-prime count and the sign of the fundamental unit.

    The exponent is clamped at 0; :func:`formula_exponent` exposes the raw value.
    """
    K = _as_field(K)
    return 2 ** max(formula_exponent(K), 0)


def h1_order(K: QuadField) -> int:
    """|H^1(Gal, units)| forced by exactness: 2^r_K / |Po(K)|."""
    K = _as_field(K)
    return 2 ** len(ramified_primes(K)) // polya_order_formula(K)


def polya_group_direct(K: QuadField, bound=None) -> ClassGroupStructure:
    """Subgroup of the ordinary class group generated by the ramified-prime classes.

    Split and inert primes q contribute principal ideals Π_q (q itself, or
    the product of conjugate primes), so only ramified primes are used.
    """
    K = _as_field(K)
    G = form_class_group(K.disc, False, bound)
    gens = [G.index(ramified_prime_class(K, p)) for p in ramified_primes(K)]
    sub = closure(gens, G.mul, 0)
    divisors, sub_gens = G.group(sub).structure()
    return ClassGroupStructure(len(sub), divisors, [G.reps[g] for g in sub_gens])


@dataclass(frozen=True)
class Classification:
    is_polya: bool
    case: Optional[str]
    unit_norm: Optional[int] = None


def is_polya_quadratic(d: int) -> Classification:
    """Decide whether Q(sqrt(d)) is a Pólya field by matching the five known shapes.

    Cases: (1) d = p odd prime; (2) d = 2p with p ≡ 3 (mod 4), or p ≡ 1 (mod 4)
    and unit norm +1; (3) d = pq with p ≡ q ≡ 3 (mod 4), or p ≡ q ≡ 1 (mod 4)
    and unit norm +1; (4) d in {-1, -2, 2}; (5) d = -p with p ≡ 3 (mod 4).
    Unit norms come from the continued-fraction oracle.
    """
    if d in (0, 1) or not is_squarefree(d):
        raise InputError(f"d must be squarefree and not 0 or 1, got {d}")
    if d in (-1, -2, 2):
        return Classification(True, "4")
    if d < 0:
        p = -d
        if is_prime(p) and p % 4 == 3:
            return Classification(True, "5")
        return Classification(False, None)
    primes = factor(d).primes()
    if len(primes) == 1:
        return Classification(True, "1")  # d odd prime; d = 2 handled above
    if len(primes) != 2:
        return Classification(False, None)
    p, q = primes
    if p == 2:
        if q % 4 == 3:
            return Classification(True, "2")
        n = unit_norm(d)
        return Classification(n == 1, "2" if n == 1 else None, n)
    if p % 4 == 3 and q % 4 == 3:
        return Classification(True, "3")
    if p % 4 == 1 and q % 4 == 1:
        n = unit_norm(d)
        return Classification(n == 1, "3" if n == 1 else None, n)
    return Classification(False, None)


@dataclass
class PolyaReportQuad:
    d: int
    disc: int
    ramified_primes: list[int]
    r_K: int
    unit_norm: Optional[int]
    order_formula: int
    order_direct: Optional[int]
    structure: Optional[list[int]]
    is_polya: bool
    case: Optional[str]
    h1_order: int
    clamped: bool
    class_number: Optional[int]
    narrow_class_number: Optional[int]

    def to_dict(self):
        return dict(self.__dict__)


def polya_report(d: int, bound=None) -> PolyaReportQuad:
    K = field_from_d(d)
    primes = ramified_primes(K)
    exponent = formula_exponent(K)
    order = 2 ** max(exponent, 0)
    cls = is_polya_quadratic(K.d)
    try:
        direct = polya_group_direct(K, bound)
        h = len(form_class_group(K.disc, False, bound))
        h_plus = len(form_class_group(K.disc, True, bound))
    except ResourceLimitError:
        direct, h, h_plus = None, None, None
    return PolyaReportQuad(
        d=K.d,
        disc=K.disc,
        ramified_primes=primes,
        r_K=len(primes),
        unit_norm=unit_norm(K.d) if K.is_real else None,
        order_formula=order,
        order_direct=None if direct is None else direct.order,
        structure=None if direct is None else direct.elementary_divisors,
        is_polya=order == 1,
        case=cls.case,
        h1_order=2 ** len(primes) // order,
        clamped=exponent < 0,
        class_number=h,
        narrow_class_number=h_plus,
    )


@dataclass
class RangeReport:
    d_min: int
    d_max: int
    checked: int = 0
    skipped: list[int] = field(default_factory=list)
    violations: list[dict] = field(default_factory=list)
    clamp_events: list[int] = field(default_factory=list)

    def merge(self, other: "RangeReport") -> "RangeReport":
        return RangeReport(
            min(self.d_min, other.d_min),
            max(self.d_max, other.d_max),
            self.checked + other.checked,
            sorted(self.skipped + other.skipped),
            sorted(self.violations + other.violations, key=lambda v: (v["d"], v["check"])),
            sorted(self.clamp_events + other.clamp_events),
        )

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        return {
            "d_min": self.d_min,
            "d_max": self.d_max,
            "checked": self.checked,
            "skipped": self.skipped,
            "violations": self.violations,
            "clamp_events": self.clamp_events,
            "ok": self.ok,
        }


def check_field(d, bound=None):
    """Every cross-check for one squarefree d; returns (violations, clamped)."""
    K = field_from_d(d)
    r = len(ramified_primes(K))
    exponent = formula_exponent(K)
    order = 2 ** max(exponent, 0)
    found = []

    def fail(check, **detail):
        found.append({"d": d, "check": check, **detail})

    direct = polya_group_direct(K, bound)
    if direct.order != order:
        fail("formula_vs_direct", formula=order, direct=direct.order)
    if any(e != 2 for e in direct.elementary_divisors):
        fail("elementary_2_group", divisors=direct.elementary_divisors)
    h = len(form_class_group(K.disc, False, bound))
    if h % direct.order:
        fail("po_divides_h", h=h, po=direct.order)
    if is_polya_quadratic(d).is_polya != (order == 1):
        fail("classification", formula=order)
    h1 = 2**r // order
    if h1 * order != 2**r or h1 not in (2, 4):
        fail("exact_sequence", h1=h1)
    if (h1 == 4) != (K.is_real and unit_norm(d) == 1):
        fail("h1_characterization", h1=h1)
    narrow_rank = form_class_group(K.disc, True, bound).group().two_rank()
    if narrow_rank != r - 1:
        fail("genus_two_rank", two_rank=narrow_rank, r_K=r)
    if exponent < 0 and direct.order != 1:
        fail("clamp_mismatch", direct=direct.order)
    return found, exponent < 0


def _sweep_chunk(args):
    lo, hi, bound = args
    rep = RangeReport(lo, hi)
    for d in range(lo, hi + 1):
        if d in (0, 1) or not is_squarefree(d):
            continue
        try:
            found, clamped = check_field(d, bound)
        except ResourceLimitError:
            rep.skipped.append(d)
            continue
        rep.checked += 1
        rep.violations += found
        if clamped:
            rep.clamp_events.append(d)
    return rep


def verify_range(d_min: int, d_max: int, oracle_bound=None, jobs=1) -> RangeReport:
    """Cross-validate formula, classification, exact sequence and genus theory on a range."""
    if d_min > d_max:
        return RangeReport(d_min, d_max)
    pieces = parallel.chunks(d_min, d_max, 64)
    reports = parallel.run(_sweep_chunk, [(a, b, oracle_bound) for a, b in pieces], jobs)
    total = RangeReport(d_min, d_max)
    for rep in reports:
        total = total.merge(rep)
    return total
