"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` which the CLI prints
alongside the message.
"""


class GreenbergError(Exception):
    code = "error"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details


class NotPrime(GreenbergError):
    code = "not_prime"


class Reducible(GreenbergError):
    code = "reducible"


class DegreeTooLarge(GreenbergError):
    code = "degree_too_large"


class BaseMismatch(GreenbergError):
    code = "base_mismatch"


class SizeGuard(GreenbergError):
    code = "size_guard"


class RingMismatch(GreenbergError):
    code = "ring_mismatch"


class NotDivisible(GreenbergError):
    code = "not_divisible"


class MissingVariable(GreenbergError):
    code = "missing_variable"


class CoefficientLiftUndefined(GreenbergError):
    code = "coefficient_lift_undefined"


class ExponentOverflow(GreenbergError):
    code = "exponent_overflow"


class LengthMismatch(GreenbergError):
    code = "length_mismatch"


class NotEisenstein(GreenbergError):
    code = "not_eisenstein"


class GradingViolation(GreenbergError):
    code = "grading_violation"


class CarrierMismatch(GreenbergError):
    code = "carrier_mismatch"


class DegreeTooHigh(GreenbergError):
    code = "degree_too_high"


class LevelMismatch(GreenbergError):
    code = "level_mismatch"


class NotPrimeField(GreenbergError):
    code = "not_prime_field"


class IdentityNotOnScheme(GreenbergError):
    code = "identity_not_on_scheme"


class NotAnExtension(GreenbergError):
    code = "not_an_extension"


class NotPrimeFieldBase(GreenbergError):
    code = "not_prime_field_base"


class DecompositionFailure(GreenbergError):
    code = "decomposition_failure"


class PatternMismatch(GreenbergError):
    code = "pattern_mismatch"


class CoefficientNotInBasisSpan(GreenbergError):
    code = "coefficient_not_in_basis_span"


class ParseError(GreenbergError):
    """Malformed input file; ``line``/``column`` point at the offending spot."""

    code = "parse_error"

    def __init__(self, message, line=None, column=None, **details):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message, line=line, column=column, **details)
        self.line = line
        self.column = column
