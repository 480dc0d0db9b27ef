class PolyaError(Exception):
    """Base class for errors raised by this package."""


class InputError(PolyaError, ValueError):
    """An argument violates an operation's precondition."""


class ResourceLimitError(PolyaError):
    """A configured work bound was exceeded; retry with smaller inputs or a larger bound."""


class CRTError(InputError):
    """Congruence moduli are not pairwise coprime."""

    def __init__(self, i, j, gcd):
        self.pair = (i, j)
        self.gcd = gcd
        super().__init__(f"moduli at positions {i} and {j} share the factor {gcd}")


class CertificateError(PolyaError):
    """A construction certificate failed re-verification."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures) or "certificate rejected")
