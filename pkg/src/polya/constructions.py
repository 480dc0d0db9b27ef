"""CRT constructions of consecutive quadratic fields with large class numbers or Pólya groups.

For k consecutive integers d+1, ..., d+k we pick k disjoint rows of n+2
odd primes above k and solve X ≡ -i + p (mod p^2) for every prime p in
row i. Then each prime of row i divides d+i exactly once, so the field
Q(sqrt(d+i)) has at least n+2 ramified odd primes and genus theory gives
2^n | h(d+i). With every prime ≡ 3 (mod 4), the fundamental unit has norm
+1 and |Po| = 2^(r-2) >= 2^n.

Certificates are plain data; :func:`verify_certificate` re-derives every
claimed fact from the numbers alone.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

from . import config, parallel
from .arith import Congruence, crt, factor, is_prime, is_square, primes_above, squarefree_part
from .errors import CertificateError, InputError, ResourceLimitError
from .forms import class_number, field_from_d, unit_norm
from .quadratic import polya_group_direct, polya_order_formula

CLASS_NUMBER = "CLASS_NUMBER"
POLYA = "POLYA"
VARIANTS = (CLASS_NUMBER, POLYA)


def _check_variant(variant):
    if variant not in VARIANTS:
        raise InputError(f"variant must be one of {VARIANTS}, got {variant!r}")


def exponent_for(M) -> int:
    """Least n >= 1 with 2^n > M (M < 1 is clamped to n = 1)."""
    if not M > 0:
        raise InputError(f"M must be positive, got {M}")
    n = 1
    while 2**n <= M:
        n += 1
    return n


def _same_field(a: int, b: int) -> bool:
    """Q(sqrt a) = Q(sqrt b) for nonzero a, b, via the perfect-square test on a*b."""
    return a * b > 0 and is_square(a * b)


# ---------------------------------------------------------------------------
# consecutive fields


@dataclass
class ConstructionCertificate:
    k: int
    M: float
    n: int
    variant: str
    prime_grid: list[list[int]]
    d: int
    modulus: int
    checks: list[dict] = field(default_factory=list)
    lift: int = 0

    kind = "consecutive"

    @property
    def fields(self):
        return [self.d + i for i in range(1, self.k + 1)]

    def congruences(self):
        return [Congruence(-i + p, p * p)
                for i, row in enumerate(self.prime_grid, start=1) for p in row]

    def to_dict(self):
        return {
            "kind": self.kind,
            "k": self.k,
            "M": self.M,
            "n": self.n,
            "variant": self.variant,
            "prime_grid": [list(r) for r in self.prime_grid],
            "d": self.d,
            "modulus": self.modulus,
            "lift": self.lift,
            "checks": self.checks,
        }

    @classmethod
    def from_dict(cls, data):
        if data.get("kind", cls.kind) != cls.kind:
            raise InputError(f"not a consecutive-fields certificate: kind {data.get('kind')!r}")
        try:
            return cls(
                k=int(data["k"]),
                M=data["M"],
                n=int(data["n"]),
                variant=data["variant"],
                prime_grid=[[int(p) for p in row] for row in data["prime_grid"]],
                d=int(data["d"]),
                modulus=int(data["modulus"]),
                checks=list(data.get("checks", [])),
                lift=int(data.get("lift", 0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed certificate: {exc}") from exc


def _grid(k, n, variant, after):
    lo = max(k, 2, after)
    src = primes_above(lo, 3, 4) if variant == POLYA else primes_above(lo)
    return [[next(src) for _ in range(n + 2)] for _ in range(k)]


def _build(k, M, variant, after=0, avoid=()):
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    _check_variant(variant)
    n = exponent_for(M)
    grid = _grid(k, n, variant, after)
    modulus = math.prod(p * p for row in grid for p in row)
    if modulus.bit_length() > config.MAX_MODULUS_BITS:
        raise ResourceLimitError(
            f"CRT modulus has {modulus.bit_length()} bits, above the {config.MAX_MODULUS_BITS}-bit cap")
    cert = ConstructionCertificate(k, M, n, variant, grid, 0, modulus)
    base = crt(cert.congruences()).residue
    lift = 0
    # Least representative whose fields avoid every field in ``avoid``.
    while any(_same_field(base + lift * modulus + i, a)
              for i in range(1, k + 1) for a in avoid):
        lift += 1
    cert.d = base + lift * modulus
    cert.lift = lift
    cert.checks = _structural_checks(cert)
    report = verify_certificate(cert, oracle_budget=0)
    if not report.ok:  # pragma: no cover - would mean a broken CRT step
        raise CertificateError(report.failures)
    return cert


def _structural_checks(cert):
    out = []
    guarantee = "2^n | h" if cert.variant == CLASS_NUMBER else "|Po| >= 2^n"
    for i, row in enumerate(cert.prime_grid, start=1):
        out.append({
            "i": i,
            "value": cert.d + i,
            "exact_divisors": list(row),
            "odd_ramified_lower_bound": len(row),
            "guarantee": guarantee,
            "bound": 2**cert.n,
        })
    return out


def construct_consecutive(k: int, M, variant: str = CLASS_NUMBER) -> ConstructionCertificate:
    """k consecutive distinct real quadratic fields Q(sqrt(d+i)) with 2^n | h (or |Po| >= 2^n), 2^n > M.

    Deterministic: smallest admissible primes, least nonnegative CRT solution.
    """
    return _build(k, M, variant)


@dataclass
class VerificationReport:
    ok: bool
    failures: list[str]
    structural: list[dict]
    oracle: list[dict]
    oracle_status: str

    def to_dict(self):
        return dict(self.__dict__)


def _verify_consecutive(cert: ConstructionCertificate, budget):
    fails = []
    structural = []

    def check(name, cond, **detail):
        structural.append({"check": name, "passed": bool(cond), **detail})
        if not cond:
            fails.append(f"{name}: {detail}" if detail else name)
        return cond

    k, n, grid = cert.k, cert.n, cert.prime_grid
    check("variant", cert.variant in VARIANTS, variant=cert.variant)
    check("k_positive", k >= 1, k=k)
    check("row_count", len(grid) == k, rows=len(grid))
    check("n_minimal", cert.M > 0 and n == exponent_for(cert.M), n=n, M=cert.M)
    flat = [p for row in grid for p in row]
    check("rows_have_n_plus_2_primes", all(len(row) == n + 2 for row in grid))
    check("grid_disjoint", len(set(flat)) == len(flat))
    check("primes_odd_above_k", all(p > max(k, 2) and is_prime(p) for p in flat))
    if cert.variant == POLYA:
        check("primes_3_mod_4", all(p % 4 == 3 for p in flat))
    check("modulus", cert.modulus == math.prod(p * p for p in flat), modulus=cert.modulus)
    check("d_nonnegative", cert.d >= 0, d=cert.d)
    check("lift", cert.modulus > 0 and cert.d // cert.modulus == cert.lift, lift=cert.lift)
    for i, row in enumerate(grid, start=1):
        v = cert.d + i
        for p in row:
            check("crt_congruence", (cert.d - (-i + p)) % (p * p) == 0, i=i, p=p)
            check("exact_divisibility", v % p == 0 and v % (p * p) != 0, i=i, p=p)
        others = [p for r, other in enumerate(grid, start=1) if r != i for p in other]
        bad = [p for p in others if v % p == 0]
        check("foreign_nondivisibility", not bad, i=i, primes=bad)
        # Every exact divisor survives in the squarefree part; no full factoring needed.
        odd_in_sqf = sum(1 for p in row if p % 2 and v % p == 0 and v % (p * p))
        check("odd_primes_in_squarefree_part", odd_in_sqf >= n + 2, i=i, count=odd_in_sqf)
    vals = cert.fields
    for a, b in itertools.combinations(range(len(vals)), 2):
        check("fields_distinct", not _same_field(vals[a], vals[b]), i=a + 1, j=b + 1)
    check("recorded_checks", cert.checks == _structural_checks(cert))

    oracle = []
    if fails:
        status = "skipped"
    elif budget <= 0 or cert.modulus > budget:
        status = "skipped"
    else:
        status = "passed"
        for i, v in enumerate(vals, start=1):
            rec = _oracle_field(v, n, cert.variant)
            oracle.append({"i": i, **rec})
            if not rec["passed"]:
                status = "failed"
                fails.append(f"oracle: field {i} (d+i = {v}): {rec}")
    return VerificationReport(not fails, fails, structural, oracle, status)


def _oracle_field(value, n, variant):
    s = squarefree_part(value)
    K = field_from_d(s)
    need = 2**n
    if variant == CLASS_NUMBER:
        h = class_number(K)
        return {"squarefree_part": s, "class_number": h, "passed": h % need == 0}
    norm = unit_norm(s)
    po = polya_group_direct(K).order
    return {
        "squarefree_part": s,
        "unit_norm": norm,
        "po_order": po,
        "po_formula": polya_order_formula(K),
        "passed": norm == 1 and po >= need and po == polya_order_formula(K),
    }


def verify_certificate(cert, oracle_budget: Optional[int] = None) -> VerificationReport:
    """Re-check a certificate from scratch; the oracle runs when the modulus is within budget.

    ``oracle_budget`` defaults to ``config.CERT_ORACLE_BUDGET``; 0 disables the oracle.
    """
    budget = config.CERT_ORACLE_BUDGET if oracle_budget is None else oracle_budget
    if isinstance(cert, dict):
        cert = certificate_from_dict(cert)
    if isinstance(cert, MultiplicativeCertificate):
        return _verify_multiplicative(cert, budget)
    return _verify_consecutive(cert, budget)


def certificate_from_dict(data):
    kind = data.get("kind", ConstructionCertificate.kind)
    if kind == MultiplicativeCertificate.kind:
        return MultiplicativeCertificate.from_dict(data)
    return ConstructionCertificate.from_dict(data)


def iterate_tuples(k: int, M, count: int, variant: str = CLASS_NUMBER) -> list[ConstructionCertificate]:
    """Certificates with fresh prime grids and rising targets; no field repeats across them.

    Round j+1 targets M' = 2^n_j, the bound certified in round j, and uses
    primes above every prime used so far. If a CRT solution would reproduce
    an earlier field, the next representative modulo the modulus is taken.
    """
    if count < 1:
        raise InputError(f"count must be >= 1, got {count}")
    certs = [construct_consecutive(k, M, variant)]
    while len(certs) < count:
        prev = certs[-1]
        after = max(p for c in certs for row in c.prime_grid for p in row)
        seen = [v for c in certs for v in c.fields]
        certs.append(_build(k, 2**prev.n, variant, after=after, avoid=seen))
    return certs


# ---------------------------------------------------------------------------
# multiplicative family jd


@dataclass
class MultiplicativeCertificate:
    k: int
    M: float
    t: int
    variant: str
    primes: list[int]
    d: int
    fields: list[dict] = field(default_factory=list)
    coincident: list[list[int]] = field(default_factory=list)

    kind = "multiplicative"

    def to_dict(self):
        return {
            "kind": self.kind,
            "k": self.k,
            "M": self.M,
            "t": self.t,
            "variant": self.variant,
            "primes": list(self.primes),
            "d": self.d,
            "fields": self.fields,
            "coincident": self.coincident,
        }

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(int(data["k"]), data["M"], int(data["t"]), data["variant"],
                       [int(p) for p in data["primes"]], int(data["d"]),
                       list(data.get("fields", [])), [list(c) for c in data.get("coincident", [])])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed certificate: {exc}") from exc


def _mult_fields(k, d):
    out, coincident = [], []
    for j in range(1, k + 1):
        out.append({"j": j, "squarefree_part": squarefree_part(j) * d})
    for a, b in itertools.combinations(out, 2):
        if a["squarefree_part"] == b["squarefree_part"]:
            coincident.append([a["j"], b["j"]])
    return out, coincident


def construct_multiplicative(k: int, M, variant: str = CLASS_NUMBER) -> MultiplicativeCertificate:
    """d = product of the t+2 smallest primes above k, so 2^t | h(jd) (or |Po| >= 2^t) for j <= k.

    Fields Q(sqrt(jd)) and Q(sqrt(j'd)) coincide when j/j' is a square;
    such pairs are listed in ``coincident`` rather than hidden.
    """
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    _check_variant(variant)
    t = exponent_for(M)
    src = primes_above(k, 3, 4) if variant == POLYA else primes_above(k)
    primes = [next(src) for _ in range(t + 2)]
    d = math.prod(primes)
    fields, coincident = _mult_fields(k, d)
    cert = MultiplicativeCertificate(k, M, t, variant, primes, d, fields, coincident)
    report = verify_certificate(cert, oracle_budget=0)
    if not report.ok:  # pragma: no cover
        raise CertificateError(report.failures)
    return cert


def _verify_multiplicative(cert: MultiplicativeCertificate, budget):
    fails, structural = [], []

    def check(name, cond, **detail):
        structural.append({"check": name, "passed": bool(cond), **detail})
        if not cond:
            fails.append(f"{name}: {detail}" if detail else name)

    check("variant", cert.variant in VARIANTS, variant=cert.variant)
    check("t_minimal", cert.M > 0 and cert.t == exponent_for(cert.M), t=cert.t)
    check("prime_count", len(cert.primes) == cert.t + 2, count=len(cert.primes))
    check("primes_distinct_above_k",
          len(set(cert.primes)) == len(cert.primes)
          and all(is_prime(p) and p > cert.k for p in cert.primes))
    if cert.variant == POLYA:
        check("primes_3_mod_4", all(p % 4 == 3 for p in cert.primes))
    check("d_is_product", cert.d == math.prod(cert.primes), d=cert.d)
    expected, coincident = _mult_fields(cert.k, cert.d) if cert.k >= 1 else ([], [])
    check("fields", cert.fields == expected)
    check("coincident_pairs", cert.coincident == coincident)
    for rec in expected:
        s = rec["squarefree_part"]
        count = sum(1 for p in cert.primes if s % p == 0 and s % (p * p))
        check("primes_in_squarefree_part", count >= cert.t + 2, j=rec["j"], count=count)

    oracle = []
    if fails or budget <= 0 or cert.d * cert.k > budget:
        status = "skipped"
    else:
        status = "passed"
        for rec in expected:
            res = _oracle_field(rec["squarefree_part"], cert.t, cert.variant)
            oracle.append({"j": rec["j"], **res})
            if not res["passed"]:
                status = "failed"
                fails.append(f"oracle: j = {rec['j']}: {res}")
    return VerificationReport(not fails, fails, structural, oracle, status)


# ---------------------------------------------------------------------------
# exploratory scans


@dataclass(frozen=True)
class ScanRecord:
    d: int
    left_field: int
    right_field: int
    left_value: int
    right_value: int

    @property
    def gap(self):
        return abs(self.left_value - self.right_value)

    def to_dict(self):
        return {
            "d": self.d,
            "left_field": self.left_field,
            "right_field": self.right_field,
            "left_value": self.left_value,
            "right_value": self.right_value,
            "gap": self.gap,
        }


@dataclass
class ScanResult:
    kind: str
    d_min: int
    d_max: int
    convention: str
    min_gap: Optional[int] = None
    records: list[ScanRecord] = field(default_factory=list)
    scanned: int = 0
    skipped: list[int] = field(default_factory=list)

    def merge(self, other):
        """Associative merge of results on adjacent subranges."""
        gaps = [g for g in (self.min_gap, other.min_gap) if g is not None]
        best = min(gaps) if gaps else None
        recs = [r for r in self.records + other.records if r.gap == best]
        return ScanResult(self.kind, min(self.d_min, other.d_min), max(self.d_max, other.d_max),
                          self.convention, best, sorted(recs, key=lambda r: r.d),
                          self.scanned + other.scanned, sorted(self.skipped + other.skipped))

    def to_dict(self):
        return {
            "kind": self.kind,
            "d_min": self.d_min,
            "d_max": self.d_max,
            "convention": self.convention,
            "min_gap": self.min_gap,
            "records": [r.to_dict() for r in self.records],
            "scanned": self.scanned,
            "skipped": self.skipped,
        }


SQUAREFREE_PART = "squarefree_part"
SQUAREFREE_ONLY = "squarefree_only"


def _class_value(s, bound):
    return class_number(field_from_d(s), bound=bound)


def _polya_value(s, bound):
    return polya_order_formula(field_from_d(s))


_VALUES = {"class-gap": _class_value, "polya-gap": _polya_value}


def _scan_chunk(args):
    kind, lo, hi, convention, bound = args
    value = _VALUES[kind]
    res = ScanResult(kind, lo, hi, convention)
    cache = {}

    def val(s):
        if s not in cache:
            cache[s] = value(s, bound)
        return cache[s]

    for d in range(lo, hi + 1):
        if d in (-1, 0):
            continue
        left, right = squarefree_part(d), squarefree_part(d + 1)
        if left == 1 or right == 1:
            continue
        if convention == SQUAREFREE_ONLY and (left != d or right != d + 1):
            continue
        try:
            rec = ScanRecord(d, left, right, val(left), val(right))
        except ResourceLimitError:
            res.skipped.append(d)
            continue
        res.scanned += 1
        if res.min_gap is None or rec.gap < res.min_gap:
            res.min_gap, res.records = rec.gap, [rec]
        elif rec.gap == res.min_gap:
            res.records.append(rec)
    return res


def _scan(kind, d_min, d_max, convention, jobs, bound):
    if convention not in (SQUAREFREE_PART, SQUAREFREE_ONLY):
        raise InputError(f"unknown convention {convention!r}")
    total = ScanResult(kind, d_min, d_max, convention)
    pieces = parallel.chunks(d_min, d_max, 64)
    for part in parallel.run(_scan_chunk, [(kind, a, b, convention, bound) for a, b in pieces],
                             jobs):
        total = total.merge(part)
    total.d_min, total.d_max = d_min, d_max
    return total


def scan_class_gap(d_min: int, d_max: int, convention: str = SQUAREFREE_PART, jobs: int = 1,
                   bound=None) -> ScanResult:
    """Least |h(d+1) - h(d)| over d in [d_min, d_max] and every pair attaining it.

    h(d) is the class number of Q(sqrt(sqf(d))); pairs where either side is a
    square are skipped. With SQUAREFREE_ONLY, only pairs with d and d+1 both
    squarefree are scanned.
    """
    return _scan("class-gap", d_min, d_max, convention, jobs, bound)


def scan_polya_gap(d_min: int, d_max: int, convention: str = SQUAREFREE_PART, jobs: int = 1,
                   bound=None) -> ScanResult:
    """As :func:`scan_class_gap`, with |Po| from the closed formula."""
    return _scan("polya-gap", d_min, d_max, convention, jobs, bound)


def _odd_chunk(args):
    lo, hi, k = args
    out = []
    for m in range(lo, hi + 1):
        if len(factor(squarefree_part(m))) == k and len(factor(squarefree_part(m + 1))) == k:
            out.append((m, m + 1))
    return out


def scan_odd_exponent_pairs(limit: int, k: int, jobs: int = 1) -> list[tuple[int, int]]:
    """All (m, m+1) with 1 <= m <= limit whose squarefree parts each have exactly k prime divisors."""
    if limit < 2:
        raise InputError(f"limit must be >= 2, got {limit}")
    if k < 0:
        raise InputError(f"k must be >= 0, got {k}")
    parts = parallel.run(_odd_chunk, [(a, b, k) for a, b in parallel.chunks(1, limit, 64)], jobs)
    return [pair for part in parts for pair in part]


@dataclass
class FermatResult:
    n: int
    left: int
    right: int
    right_is_prime: bool
    left_squarefree: int
    right_squarefree: int
    left_omega: int
    right_omega: int
    right_factors: list
    pair: Optional[tuple[int, int]]
    one_prime_each: bool

    def to_dict(self):
        d = dict(self.__dict__)
        d["pair"] = list(self.pair) if self.pair else None
        return d


def fermat_pair(n: int) -> FermatResult:
    """Inspect (2^(2^n), 2^(2^n) + 1); the pair is returned iff the right entry is prime.

    For n >= 1 the left entry is a square, so its squarefree part is 1 with no
    prime divisors; ``one_prime_each`` reports this rather than hiding it.
    """
    if not 0 <= n <= config.FERMAT_CAP:
        raise InputError(f"n must lie in [0, {config.FERMAT_CAP}], got {n}")
    left = 2 ** (2**n)
    right = left + 1
    fac = factor(right)
    prime = len(fac) == 1 and fac.exponent(right) == 1
    ls, rs = squarefree_part(left), squarefree_part(right)
    lw, rw = len(factor(ls)), len(factor(rs))
    return FermatResult(n, left, right, prime, ls, rs, lw, rw, [list(pe) for pe in fac],
                        (left, right) if prime else None, lw == 1 and rw == 1)
