"""Exception types shared across the package.

The CLI maps ValidationError to exit code 1 and NumericalError to exit
code 2; library code raises nothing else on contract violations.
"""


class ValidationError(ValueError):
    """Invalid input: bad configuration, precondition violation, malformed data."""


class NumericalError(RuntimeError):
    """Numerical failure: tolerance not met, unstable step, unresolvable fit."""
