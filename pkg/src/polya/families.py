"""Pólya criteria for non-quadratic Galois fields, as hypothesis-checked claims.

Each theorem is a row in a registry: the field shape it applies to, an
ordered list of conditions, and the conclusion it licenses. Evaluating a
row yields a :class:`TheoremClaim` recording every condition with its
verdict and how it was decided, so a consumer can discount claims that
rest on caller assertions.

Verdicts are tri-state: True, False, or None (not decided; either skipped
after an earlier failure or unresolved by a bounded search).
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from . import config, parallel
from .arith import factor, is_cube_free, is_prime, jacobi, next_prime, omega, squarefree_part
from .errors import InputError
from .forms import unit_norm
from .quadratic import is_polya_quadratic

POLYA = "POLYA"
NOT_POLYA = "NOT_POLYA"
PO_IS_Z2 = "PO_IS_Z2"
PO_ORDER = "PO_ORDER"
NOT_APPLICABLE = "NOT_APPLICABLE"
UNKNOWN = "UNKNOWN_WITHIN_BOUND"

# evaluation methods recorded on each hypothesis
CONGRUENCE = "congruence"
LEGENDRE = "legendre_symbol"
UNIT_ORACLE = "unit_norm_oracle"
CALLER = "caller_assertion"
PRIMALITY = "primality"
ARITHMETIC = "arithmetic"
NORM_SEARCH = "norm_search"
QUAD_CLASS = "quadratic_classification"
RAMIFICATION = "ramification"


@dataclass(frozen=True)
class Hypothesis:
    text: str
    satisfied: Optional[bool]
    method: str

    def to_dict(self):
        return {"text": self.text, "satisfied": self.satisfied, "method": self.method}


@dataclass(frozen=True)
class TheoremClaim:
    theorem_id: str
    field: str
    hypotheses: tuple[Hypothesis, ...]
    conclusion: str
    po_order: Optional[int] = None
    details: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def applicable(self):
        return self.conclusion not in (NOT_APPLICABLE, UNKNOWN)

    def implied_orders(self):
        """Set-like predicate on |Po| implied by the conclusion, or None if no information."""
        if self.conclusion == POLYA:
            return lambda n: n == 1
        if self.conclusion == PO_IS_Z2:
            return lambda n: n == 2
        if self.conclusion == PO_ORDER:
            return lambda n: n == self.po_order
        if self.conclusion == NOT_POLYA:
            return lambda n: n > 1
        return None

    def to_dict(self):
        return {
            "theorem_id": self.theorem_id,
            "field": self.field,
            "hypotheses": [h.to_dict() for h in self.hypotheses],
            "conclusion": self.conclusion,
            "po_order": self.po_order,
            "details": self.details,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            data["theorem_id"],
            data["field"],
            tuple(Hypothesis(**h) for h in data["hypotheses"]),
            data["conclusion"],
            data.get("po_order"),
            dict(data.get("details") or {}),
        )


def compatible(c1: TheoremClaim, c2: TheoremClaim) -> bool:
    """False when two applicable claims force disjoint Pólya-group orders."""
    f1, f2 = c1.implied_orders(), c2.implied_orders()
    if f1 is None or f2 is None:
        return True
    for k1 in (c1.po_order, 1, 2):
        if k1 is not None and f1(k1) and f2(k1):
            return True
    # NOT_POLYA vs PO_ORDER(n>1), etc.: probe the other side's witness values
    probes = {1, 2, 3, 4, 5}
    for c in (c1, c2):
        if c.po_order:
            probes.add(c.po_order)
    return any(f1(n) and f2(n) for n in probes)


# ---------------------------------------------------------------------------
# registry machinery


@dataclass(frozen=True)
class Condition:
    text: str
    method: str
    test: Callable[[dict], bool]


@dataclass(frozen=True)
class Theorem:
    theorem_id: str
    shape: str
    conditions: tuple[Condition, ...]
    conclusion: str
    po_order: Optional[int] = None
    # optional override: ctx -> (conclusion, extra hypotheses, details)
    conclude: Optional[Callable] = None


def evaluate(theorem: Theorem, ctx: dict) -> TheoremClaim:
    hyps = []
    ok = True
    for cond in theorem.conditions:
        if not ok:
            hyps.append(Hypothesis(cond.text, None, cond.method))
            continue
        verdict = bool(cond.test(ctx))
        hyps.append(Hypothesis(cond.text, verdict, cond.method))
        ok = verdict
    conclusion, po_order, details = theorem.conclusion, theorem.po_order, {}
    if ok and theorem.conclude is not None:
        conclusion, extra, details = theorem.conclude(ctx)
        hyps += extra
    if not ok:
        conclusion, po_order = NOT_APPLICABLE, None
    return TheoremClaim(theorem.theorem_id, ctx["field"], tuple(hyps), conclusion, po_order, details)


def _c(text, method, test):
    return Condition(text, method, test)


def _mod(var, m, residues):
    residues = (residues,) if isinstance(residues, int) else tuple(residues)
    label = " or ".join(str(r) for r in residues)
    return _c(f"{var} ≡ {label} (mod {m})", CONGRUENCE, lambda ctx: ctx[var] % m in residues)


def _leg(top, bottom, value):
    return _c(f"({top}/{bottom}) = {value:+d}", LEGENDRE,
              lambda ctx: jacobi(ctx[top], ctx[bottom]) == value)


@functools.lru_cache(maxsize=1 << 16)
def _quad_polya(d):
    return is_polya_quadratic(d).is_polya


def _subfields(m, n):
    # m, n squarefree, so m*n / gcd(m, n)^2 is the squarefree part of m*n
    return frozenset((m, n, m * n // math.gcd(m, n) ** 2))


def _field_label(subfields):
    m, n = sorted(subfields, key=lambda d: (abs(d), d))[:2]
    return f"Q(sqrt({m}), sqrt({n}))"


# ---------------------------------------------------------------------------
# biquadratic theorems

SHAPES = {
    "p_qr": "Q(sqrt(p), sqrt(qr))",
    "p_2q": "Q(sqrt(p), sqrt(2q))",
    "mp_mq": "Q(sqrt(-p), sqrt(-q))",
    "2_pq": "Q(sqrt(2), sqrt(pq))",
    "pair": "Q(sqrt(m), sqrt(n))",
}

_EXCEPTIONAL_TEXT = "field is Q(sqrt(-2), sqrt(p)) with p ≡ 3 (mod 4) prime, or Q(sqrt(-1), sqrt(2q)) with q odd prime"


def _exceptional(subfields):
    for s in subfields:
        if s > 0 and is_prime(s) and s % 4 == 3 and -2 in subfields:
            return True
        if s > 0 and s % 2 == 0 and is_prime(s // 2) and s // 2 > 2 and -1 in subfields:
            return True
    return False


def _leriche_pair_conclusion(ctx):
    exc = _exceptional(ctx["subfields"])
    if exc:
        return NOT_POLYA, [Hypothesis(_EXCEPTIONAL_TEXT, True, ARITHMETIC)], {"exception": True}
    return POLYA, [Hypothesis("field is not one of the two exceptional families", True, ARITHMETIC)], {}


def _p2q_pattern(ctx):
    p, q = ctx["p"] % 8, ctx["q"] % 8
    return (p == 7 and q in (1, 7)) or (p == 3 and q in (1, 3))


@functools.lru_cache(maxsize=1 << 16)
def _ram(d):
    disc = d if d % 4 == 1 else 4 * d
    return frozenset(factor(disc).primes())


THEOREMS: tuple[Theorem, ...] = (
    Theorem("RAJAEI_A", "p_qr", (
        _mod("p", 4, 3), _mod("q", 4, 1), _mod("r", 8, 1),
        _leg("q", "r", -1), _leg("p", "r", 1)), PO_IS_Z2, 2),
    Theorem("RAJAEI_B", "p_qr", (
        _mod("p", 4, 1), _mod("q", 4, 1), _mod("r", 4, 1),
        _leg("p", "r", 1), _leg("q", "r", -1),
        _c("fundamental unit of Q(sqrt(pqr)) has norm +1", UNIT_ORACLE,
           lambda ctx: unit_norm(ctx["p"] * ctx["q"] * ctx["r"]) == 1)), PO_IS_Z2, 2),
    Theorem("RAJAEI_C", "p_qr", (
        _mod("p", 4, 3), _mod("q", 4, 3), _mod("r", 8, 5)), POLYA, 1),
    Theorem("RAJAEI_D", "p_qr", (
        _mod("p", 4, 3), _mod("q", 4, 1), _mod("r", 8, 5),
        _leg("p", "r", 1), _leg("p", "q", -1)), POLYA, 1),
    Theorem("AUTHORS_1", "p_qr", (
        _mod("p", 4, 3), _mod("q", 8, 1), _mod("r", 8, 1), _leg("q", "r", -1)), PO_IS_Z2, 2),
    Theorem("AUTHORS_2", "p_qr", (
        _mod("p", 4, 3), _mod("q", 4, 3), _mod("r", 8, 1),
        _leg("p", "r", 1), _leg("q", "r", -1)), PO_IS_Z2, 2),
    Theorem("RAJAEI_JNT_2_4", "p_2q", (_mod("p", 8, 3), _mod("q", 8, 3)), POLYA, 1),
    Theorem("LERICHE_5_1", "p_2q", (
        _c("p and q are odd", CONGRUENCE, lambda ctx: ctx["p"] % 2 == 1 and ctx["q"] % 2 == 1),
        # p = q gives Q(sqrt 2, sqrt p), which can be Pólya outside the congruence pattern
        _c("p ≠ q", ARITHMETIC, lambda ctx: ctx["p"] != ctx["q"]),
        _c("Q(sqrt(2q)) is not a Pólya field", QUAD_CLASS, lambda ctx: not _quad_polya(2 * ctx["q"])),
        _c("neither p ≡ 7 (mod 8) with q ≡ ±1 (mod 8) nor p ≡ 3 (mod 8) with q ≡ 1, 3 (mod 8)",
           CONGRUENCE, lambda ctx: not _p2q_pattern(ctx))), NOT_POLYA),
    Theorem("RAJAEI_JNT_3_3", "mp_mq", (
        _mod("p", 4, 1), _mod("q", 4, 3), _leg("q", "p", -1)), POLYA, 1),
    Theorem("AUTHORS_3", "2_pq", (
        _mod("p", 4, 1), _mod("q", 4, 1), _leg("p", "q", -1)), PO_IS_Z2, 2),
    Theorem("LERICHE_5_1", "pair", (
        _c("Q(sqrt(m)) is a Pólya field", QUAD_CLASS, lambda ctx: _quad_polya(ctx["m"])),
        _c("Q(sqrt(n)) is a Pólya field", QUAD_CLASS, lambda ctx: _quad_polya(ctx["n"]))),
        POLYA, conclude=_leriche_pair_conclusion),
    Theorem("ZANTEMA_3_4", "pair", (
        _c("Q(sqrt(m)) is a Pólya field", QUAD_CLASS, lambda ctx: _quad_polya(ctx["m"])),
        _c("Q(sqrt(n)) is a Pólya field", QUAD_CLASS, lambda ctx: _quad_polya(ctx["n"])),
        _c("gcd(e1(p), e2(p)) = 1 for every prime p", RAMIFICATION,
           lambda ctx: not (_ram(ctx["m"]) & _ram(ctx["n"])))), POLYA, 1),
)


@functools.lru_cache(maxsize=4096)
def _require_prime(name, value):
    if not is_prime(value) or value < 2:
        raise InputError(f"{name} = {value} must be a prime")


def biquadratic_context(shape: str, args: Sequence[int]) -> dict:
    """Validate arguments for a shape and return the evaluation context."""
    if shape not in SHAPES:
        raise InputError(f"unknown shape {shape!r}; expected one of {sorted(SHAPES)}")
    args = [int(a) for a in args]
    if shape == "pair":
        if len(args) != 2:
            raise InputError("shape 'pair' takes (m, n)")
        m, n = args
        for name, v in (("m", m), ("n", n)):
            if v in (0, 1) or squarefree_part(v) != v:
                raise InputError(f"{name} = {v} must be squarefree and not 0 or 1")
        if m == n:
            raise InputError("m and n must define distinct quadratic fields")
        ctx = {"m": m, "n": n}
        subs = _subfields(m, n)
    elif shape == "p_qr":
        if len(args) != 3:
            raise InputError("shape 'p_qr' takes (p, q, r)")
        for name, v in zip("pqr", args):
            _require_prime(name, v)
            if v == 2:
                raise InputError(f"{name} must be odd")
        if len(set(args)) != 3:
            raise InputError("p, q, r must be distinct")
        p, q, r = args
        ctx = {"p": p, "q": q, "r": r}
        subs = _subfields(p, q * r)
    else:
        if len(args) != 2:
            raise InputError(f"shape {shape!r} takes (p, q)")
        for name, v in zip("pq", args):
            _require_prime(name, v)
        p, q = args
        ctx = {"p": p, "q": q}
        if shape == "p_2q":
            if q == 2:
                raise InputError("q must be odd: q = 2 makes 2q a square")
            subs = _subfields(p, 2 * q)
        elif shape == "mp_mq":
            if p == q:
                raise InputError("p and q must be distinct")
            subs = _subfields(-p, -q)
        else:
            if p == q:
                raise InputError("p and q must be distinct")
            subs = _subfields(2, p * q)
    if len(subs) != 3 or 1 in subs:
        raise InputError(f"{args} does not define a biquadratic field")
    ctx["subfields"] = subs
    ctx["field"] = _field_label(subs)
    return ctx


def classify_biquadratic(shape: str, args: Sequence[int]) -> list[TheoremClaim]:
    """One claim per registered theorem for the shape; conclusions are mutually consistent."""
    ctx = biquadratic_context(shape, args)
    return [evaluate(t, ctx) for t in THEOREMS if t.shape == shape]


def compositum_claims(subfields) -> list[TheoremClaim]:
    """Pair theorems applied to every pair of quadratic subfields of a biquadratic field."""
    out = []
    for m, n in itertools.combinations(sorted(subfields), 2):
        out += classify_biquadratic("pair", (m, n))
    return out


def conflicts(claims: Sequence[TheoremClaim]):
    """Pairs of applicable claims whose conclusions cannot both hold."""
    live = [c for c in claims if c.applicable]
    return [(a, b) for a, b in itertools.combinations(live, 2) if not compatible(a, b)]


def _prime_tuples(shape, first, primes):
    odd = [q for q in primes if q > 2]
    if shape == "p_qr":
        return [(first, q, r) for q in odd for r in odd if len({first, q, r}) == 3]
    if shape == "p_2q":
        return [(first, q) for q in odd]
    return [(first, q) for q in primes if q != first]


def _sweep_chunk(args):
    shape, first, primes = args
    fields = {}
    for t in _prime_tuples(shape, first, primes):
        claims = [c for c in classify_biquadratic(shape, t) if c.applicable]
        if claims:
            key = biquadratic_context(shape, t)["subfields"]
            fields.setdefault(key, []).extend((shape, t, c) for c in claims)
    out = []
    for key, tagged in fields.items():
        pair = [("pair", None, c) for c in compositum_claims(key) if c.applicable]
        claims = [c for _, _, c in tagged] + [c for _, _, c in pair]
        bad = conflicts(claims)
        p2q = []
        for sh, t, c in tagged:
            if sh == "p_2q" and c.conclusion == POLYA and not _p2q_pattern({"p": t[0], "q": t[1]}):
                p2q.append(list(t))
        out.append({
            "field": sorted(key),
            "claims": sorted({(c.theorem_id, c.conclusion) for c in claims}),
            "conflicts": sorted({tuple(sorted((a.theorem_id, b.theorem_id))) for a, b in bad}),
            "p2q_violations": p2q,
        })
    return shape, first, out


def sweep_biquadratic(prime_bound: int, shapes=("p_qr", "p_2q", "mp_mq", "2_pq"), jobs: int = 1) -> dict:
    """Evaluate every prime-shaped theorem on all tuples of primes below ``prime_bound``.

    Claims are grouped by field (its set of quadratic subfields), joined with
    the (m, n)-pair theorems on that field, and checked pairwise for
    incompatible conclusions.
    """
    primes = []
    p = 1
    while (p := next_prime(p)) < prime_bound:
        primes.append(p)
    work = []
    for shape in shapes:
        if shape not in SHAPES or shape == "pair":
            raise InputError(f"unknown prime shape {shape!r}")
        firsts = [q for q in primes if q > 2] if shape == "p_qr" else primes
        work += [(shape, f, primes) for f in firsts]
    fields, conflicting, p2q = 0, [], []
    counts: dict = {}
    for shape, first, recs in parallel.run(_sweep_chunk, work, jobs):
        for rec in recs:
            fields += 1
            for tid, concl in rec["claims"]:
                counts[f"{tid}:{concl}"] = counts.get(f"{tid}:{concl}", 0) + 1
            if rec["conflicts"]:
                conflicting.append({"shape": shape, "field": rec["field"], "conflicts": rec["conflicts"]})
            p2q += rec["p2q_violations"]
    return {
        "prime_bound": prime_bound,
        "shapes": list(shapes),
        "fields_with_claims": fields,
        "claim_counts": dict(sorted(counts.items())),
        "conflicts": conflicting,
        "p2q_necessary_condition_violations": p2q,
    }


def zantema_compositum(e1: dict, e2: dict, k1_polya: bool, k2_polya: bool) -> TheoremClaim:
    """Compositum of two Galois Pólya fields with coprime ramification is Pólya."""
    support = sorted(set(e1) | set(e2))
    shared = [p for p in support if math.gcd(e1.get(p, 1), e2.get(p, 1)) != 1]
    hyps = (
        Hypothesis("K1 is a Pólya field", bool(k1_polya), CALLER),
        Hypothesis("K2 is a Pólya field", bool(k2_polya), CALLER),
        Hypothesis("gcd(e1(p), e2(p)) = 1 for every prime p", not shared, RAMIFICATION),
    )
    ok = all(h.satisfied for h in hyps)
    return TheoremClaim("ZANTEMA_3_4", "K1K2", hyps, POLYA if ok else NOT_APPLICABLE,
                        1 if ok else None, {"shared_primes": shared})


# ---------------------------------------------------------------------------
# cyclic fields of prime degree

MINPOLY_3X1 = "MINPOLY_3X1"


def cyclic_cubic_is_polya(params) -> TheoremClaim:
    """Cyclic cubic Pólya test: X^3 - 3X + 1, or X^3 - 3pX - pu with p = (u^2 + 27w^2)/4 prime.

    ``params`` is MINPOLY_3X1, (u, w), or (p, u, w) where p is checked against u, w.
    """
    if params == MINPOLY_3X1:
        return TheoremClaim("LERICHE_3_2", "Q(α), α^3 - 3α + 1 = 0",
                            (Hypothesis("minimal polynomial is X^3 - 3X + 1", True, ARITHMETIC),),
                            POLYA, 1, {"minimal_polynomial": [1, -3, 1]})
    params = tuple(int(x) for x in params)
    if len(params) == 2:
        claimed_p, (u, w) = None, params
    elif len(params) == 3:
        claimed_p, u, w = params
    else:
        raise InputError("cubic parameters are MINPOLY_3X1, (u, w) or (p, u, w)")
    num = u * u + 27 * w * w
    p = num // 4 if num % 4 == 0 else None
    checks = [
        ("u^2 + 27w^2 ≡ 0 (mod 4)", lambda: num % 4 == 0, ARITHMETIC),
        (f"p = (u^2 + 27w^2)/4 = {p} is prime", lambda: is_prime(p), PRIMALITY),
        ("w >= 1", lambda: w >= 1, ARITHMETIC),
        ("u ≡ 2 (mod 3)", lambda: u % 3 == 2, CONGRUENCE),
    ]
    if claimed_p is not None:
        checks.insert(0, (f"supplied p = {claimed_p} equals (u^2 + 27w^2)/4",
                          lambda: 4 * claimed_p == num, ARITHMETIC))
    hyps, ok = [], True
    for text, test, method in checks:
        verdict = bool(test()) if ok else None
        hyps.append(Hypothesis(text, verdict, method))
        ok = ok and bool(verdict)
    details = {"u": u, "w": w, "p": p}
    if ok:
        details["minimal_polynomial"] = [1, 0, -3 * p, -p * u]
    label = f"Q(α), α^3 - 3pα - pu = 0 with (u, w) = ({u}, {w})"
    return TheoremClaim("LERICHE_3_2", label, tuple(hyps), POLYA if ok else NOT_APPLICABLE,
                        1 if ok else None, details)


def cyclic_order_formula(ell: int, r: int) -> int:
    """|Po(K)| = ell^(r - 1) for a cyclic field of prime degree ell in {3, 5} with r ramified primes."""
    if ell not in (3, 5):
        raise InputError(f"ell must be 3 or 5, got {ell}")
    if r < 1:
        raise InputError(f"a cyclic field of degree {ell} has at least one ramified prime, got r = {r}")
    return ell ** (r - 1)


def cyclic_prime_degree_claim(ell: int, r: int) -> TheoremClaim:
    order = cyclic_order_formula(ell, r)
    tid = "QUINTIC_CYCLIC" if ell == 5 else "LERICHE_3_2"
    hyps = (Hypothesis(f"K/Q cyclic of degree {ell}", True, CALLER),
            Hypothesis(f"{r} ramified prime(s)", True, CALLER))
    return TheoremClaim(tid, f"cyclic degree-{ell} field", hyps,
                        POLYA if order == 1 else PO_ORDER, order, {"ell": ell, "r": r})


# ---------------------------------------------------------------------------
# cyclic quartic fields Q(sqrt(A(D + B sqrt(D))))


def cyclic_quartic_classify(A: int, B: int, C: int, D: int,
                            unit_norm_flag: Optional[bool] = None) -> TheoremClaim:
    """Pólya test for the cyclic quartic field Q(sqrt(A(D + B sqrt(D)))).

    ``unit_norm_flag`` asserts (True) or denies (False) that every unit of
    K has norm +1; cases needing it are UNKNOWN_WITHIN_BOUND when it is None.
    """
    if A % 2 == 0 or A == 0 or squarefree_part(A) != A:
        raise InputError(f"A = {A} must be odd and squarefree")
    if B <= 0 or C <= 0:
        raise InputError("B and C must be positive")
    if D != B * B + C * C:
        raise InputError(f"D = {D} is not B^2 + C^2 = {B * B + C * C}")
    if squarefree_part(D) != D:
        raise InputError(f"D = {D} must be squarefree")
    if math.gcd(A, D) != 1:
        raise InputError(f"gcd(A, D) = {math.gcd(A, D)} must be 1")

    D_prime_1mod4 = is_prime(D) and D % 4 == 1
    q_odd_prime = A > 2 and is_prime(A)
    unit_hyp_text = "every unit of K has norm +1"

    def unit_status():
        if unit_norm_flag is None:
            return None
        return bool(unit_norm_flag)

    # (label, shape predicate, shape text, needs unit hypothesis)
    cases = [
        ("1", D == 2 and A in (1, -1), "K = Q(sqrt(±(2 + sqrt 2)))", False),
        ("2", D == 2 and q_odd_prime, "K = Q(sqrt(q(2 + sqrt 2))), q odd prime", True),
        ("3", A == 1 and D_prime_1mod4 and B % 4 == 0,
         "K = Q(sqrt(p + B sqrt p)), p ≡ 1 (mod 4) prime, B ≡ 0 (mod 4)", False),
        ("4", A == -1 and D_prime_1mod4 and B % 4 == 2,
         "K = Q(sqrt(-(p + B sqrt p))), p ≡ 1 (mod 4) prime, B ≡ 2 (mod 4)", False),
        ("5", A == 1 and D % 4 == 1 and B % 4 != 0,
         "K = Q(sqrt(p + B sqrt p)), p ≡ 1 (mod 4), B ≢ 0 (mod 4)", True),
        ("6", q_odd_prime and D_prime_1mod4 and (A + B) % 4 == 1,
         "K = Q(sqrt(q(p + B sqrt p))), p ≡ 1 (mod 4) prime, q odd prime, q + B ≡ 1 (mod 4)", True),
    ]
    exclusions, unknowns = [], []
    for label, shape_ok, text, needs_unit in cases:
        if not shape_ok:
            exclusions.append(Hypothesis(f"case ({label}) excluded: shape {text} fails", True, CONGRUENCE))
            continue
        shape_h = Hypothesis(f"case ({label}): {text}", True, CONGRUENCE)
        if not needs_unit:
            return TheoremClaim("LERICHE_4_4", _quartic_label(A, B, D), (shape_h,), POLYA, 1,
                                {"case": label})
        status = unit_status()
        if status:
            return TheoremClaim("LERICHE_4_4", _quartic_label(A, B, D),
                                (shape_h, Hypothesis(unit_hyp_text, True, CALLER)), POLYA, 1,
                                {"case": label, "unit_norm": "caller-asserted"})
        if status is None:
            unknowns += [shape_h, Hypothesis(unit_hyp_text, None, CALLER)]
        else:
            exclusions.append(Hypothesis(f"case ({label}) excluded: {unit_hyp_text} denied by caller",
                                         True, CALLER))
    label = _quartic_label(A, B, D)
    if unknowns:
        return TheoremClaim("LERICHE_4_4", label, tuple(exclusions + unknowns), UNKNOWN, None,
                            {"case": None})
    return TheoremClaim("LERICHE_4_4", label, tuple(exclusions), NOT_POLYA, None, {"case": None})


def _quartic_label(A, B, D):
    return f"Q(sqrt({A}*({D} + {B}*sqrt({D}))))"


# ---------------------------------------------------------------------------
# sextic fields Q(omega, cbrt(m))


def cube_decomposition(m: int) -> tuple[int, int]:
    """(a, b) squarefree and coprime with m = a * b^2."""
    a = b = 1
    for p, e in factor(m):
        if e == 1:
            a *= p
        elif e == 2:
            b *= p
        else:
            raise InputError(f"m = {m} is not cube-free")
    return a, b


def pure_cubic_norm(a: int, b: int, x: int, y: int, z: int) -> int:
    """Norm of x + y*cbrt(a b^2) + z*cbrt(a^2 b) from Q(cbrt(a b^2)) to Q."""
    return x**3 + a * b * b * y**3 + a * a * b * z**3 - 3 * a * b * x * y * z


def _shell(s):
    if s == 0:
        yield 0, 0, 0
        return
    rng = sorted(range(-s, s + 1), key=lambda v: (abs(v), v < 0))
    for x in rng:
        for y in rng:
            if abs(x) == s or abs(y) == s:
                yield from ((x, y, z) for z in rng)
            else:
                yield x, y, -s
                yield x, y, s


def find_norm_witness(a, b, target, bound):
    """Smallest-box (x, y, z) with |N| = target, searching |x|, |y|, |z| <= bound."""
    for s in range(bound + 1):
        for x, y, z in _shell(s):
            if abs(pure_cubic_norm(a, b, x, y, z)) == target:
                return x, y, z
    return None


def sextic_required_primes(m: int) -> tuple[list[int], bool]:
    a, b = cube_decomposition(m)
    congruent = (a * a - b * b) % 9 == 0
    base = m if congruent else 3 * m
    return factor(base).primes(), congruent


def sextic_pure_cubic(m: int, search_bound: int = config.SEXTIC_SEARCH_BOUND) -> TheoremClaim:
    """Pólya test for Q(omega, cbrt(m)) by bounded search for elements of norm ±p.

    A found witness proves its norm condition; an exhausted search proves
    nothing, so the verdict is POLYA or UNKNOWN_WITHIN_BOUND, never a negative.
    """
    if m < 2 or not is_cube_free(m):
        raise InputError(f"m = {m} must be a cube-free integer >= 2")
    a, b = cube_decomposition(m)
    primes, congruent = sextic_required_primes(m)
    hyps = [Hypothesis(f"a^2 {'≡' if congruent else '≢'} b^2 (mod 9) with m = a b^2, a = {a}, b = {b}",
                       True, CONGRUENCE)]
    witnesses = {}
    for p in primes:
        w = find_norm_witness(a, b, p, search_bound)
        text = f"some α in Q(cbrt({m})) has norm ±{p}"
        if w is None:
            hyps.append(Hypothesis(text + f" (none with coordinates <= {search_bound})", None, NORM_SEARCH))
        else:
            witnesses[p] = list(w)
            hyps.append(Hypothesis(text + f": x + y cbrt(ab^2) + z cbrt(a^2 b) with (x, y, z) = {w}",
                                   True, NORM_SEARCH))
    found_all = len(witnesses) == len(primes)
    details = {"m": m, "a": a, "b": b, "required_primes": primes,
               "witnesses": {str(p): w for p, w in witnesses.items()}, "search_bound": search_bound}
    return TheoremClaim("LERICHE_6_2", f"Q(omega, cbrt({m}))", tuple(hyps),
                        POLYA if found_all else UNKNOWN, 1 if found_all else None, details)


# ---------------------------------------------------------------------------
# Lehmer quintics


def lehmer_m(n: int) -> int:
    return n**4 + 5 * n**3 + 15 * n**2 + 25 * n + 25


def lehmer_polynomial(n: int) -> list[int]:
    """Coefficients (descending) of Lehmer's quintic f_n, with + before the linear term."""
    return [
        1,
        n * n,
        -(2 * n**3 + 6 * n**2 + 10 * n + 10),
        n**4 + 5 * n**3 + 11 * n**2 + 15 * n + 5,
        n**3 + 4 * n**2 + 10 * n + 10,
        1,
    ]


@dataclass
class LehmerReport:
    n: int
    m_n: int
    cube_free: bool
    omega_m: int
    po_rank: Optional[int]
    is_polya: Optional[bool]
    m_is_prime: bool
    factorization: list

    def claim(self) -> TheoremClaim:
        hyps = (Hypothesis(f"m_n = {self.m_n} is cube-free", self.cube_free, ARITHMETIC),)
        if not self.cube_free:
            return TheoremClaim("PPP_1_4", f"K_{self.n}", hyps, NOT_APPLICABLE)
        order = 5**self.po_rank
        return TheoremClaim("PPP_1_4", f"K_{self.n}", hyps, POLYA if order == 1 else PO_ORDER,
                            order, {"po_rank": self.po_rank})

    def to_dict(self):
        return dict(self.__dict__)


def lehmer_quintic(n: int) -> LehmerReport:
    """Pólya data of the Lehmer quintic field K_n through m_n = n^4 + 5n^3 + 15n^2 + 25n + 25."""
    m = lehmer_m(n)
    fac = factor(m)
    cube_free = all(e < 3 for _, e in fac)
    w = len(fac)
    prime = is_prime(m)
    return LehmerReport(
        n=n,
        m_n=m,
        cube_free=cube_free,
        omega_m=w,
        po_rank=w - 1 if cube_free else None,
        is_polya=(prime or m == 25) if cube_free else None,
        m_is_prime=prime,
        factorization=[list(pe) for pe in fac],
    )


__all__ = [
    "Hypothesis", "TheoremClaim", "THEOREMS", "classify_biquadratic", "compositum_claims",
    "conflicts", "zantema_compositum", "cyclic_cubic_is_polya", "cyclic_order_formula",
    "cyclic_quartic_classify", "sextic_pure_cubic", "lehmer_quintic", "omega",
]
