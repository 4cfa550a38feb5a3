"""Log-Beta evaluation via the log-gamma function."""

import math


class DomainError(ValueError):
    pass


def log_beta(a: float, b: float) -> float:
    """ln B(a,b) = ln G(a) + ln G(b) - ln G(a+b) for a, b > 0.

    The arguments are sorted before evaluation so log_beta(a, b) and
    log_beta(b, a) run the identical floating-point path.
    """
    if not (a > 0.0 and b > 0.0) or math.isnan(a) or math.isnan(b):
        raise DomainError(f"log_beta requires positive arguments, got ({a}, {b})")
    lo, hi = (a, b) if a <= b else (b, a)
    return math.lgamma(lo) + math.lgamma(hi) - math.lgamma(lo + hi)


def beta(a: float, b: float) -> float:
    return math.exp(log_beta(a, b))
