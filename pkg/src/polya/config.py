"""Tunable work bounds.

Every bound here raises :class:`polya.errors.ResourceLimitError` when
exceeded instead of degrading silently.
"""

import os

# Miller-Rabin with the first 13 prime bases is exact below this value.
DETERMINISTIC_PRIME_LIMIT = 3_317_044_064_679_887_385_961_981
# Extra pseudo-random rounds above the limit; error probability <= 4**-rounds.
PROBABILISTIC_ROUNDS = 40

TRIAL_DIVISION_BOUND = 10_000
RHO_ITERATION_CAP = 2_000_000
# Largest input factor() accepts at all (about 19 decimal digits, plus headroom).
FACTOR_DIGIT_LIMIT = 40

ORACLE_BOUND_ENV = "POLYA_ORACLE_BOUND"
_DEFAULT_ORACLE_BOUND = 10**9


def default_oracle_bound():
    """Largest |discriminant| the form enumerator accepts (env-overridable)."""
    raw = os.environ.get(ORACLE_BOUND_ENV)
    if raw is None:
        return _DEFAULT_ORACLE_BOUND
    return int(raw)


SEXTIC_SEARCH_BOUND = 50
FERMAT_CAP = 5
# Constructions refuse to build a CRT modulus longer than this.
MAX_MODULUS_BITS = 8192
# verify_certificate runs the class-group oracle only when the CRT modulus is at most this.
CERT_ORACLE_BUDGET = 10**8
