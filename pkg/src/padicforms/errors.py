"""Exception types shared across the library.

The split matters for the CLI exit codes: configuration problems are
``ConfigError`` (exit 2), failed mathematical verifications are
``VerificationError`` (exit 1), and precision exhaustion is
``PrecisionError`` (a computation that cannot be completed honestly at
the requested modulus / q-precision).
"""


class PrecisionError(ArithmeticError):
    """Requested result is not determined at the available precision."""


class VerificationError(RuntimeError):
    """An internal mathematical consistency check failed."""


class ConfigError(ValueError):
    """Invalid job configuration (bad flags, unsatisfiable preconditions)."""
