from scipy import special

from .errors import DomainError


def hurwitz_zeta(s, a=1.0):
    """``sum_{n>=0} (n + a)^(-s)`` for ``s > 1``, ``a > 0``."""
    s, a = float(s), float(a)
    if not s > 1.0:
        raise DomainError(f"zeta(s) needs s > 1, got {s}")
    if a <= 0:
        raise DomainError("a must be positive")
    return float(special.zeta(s, a))


def zeta(s):
    """Riemann zeta function for real ``s > 1``."""
    return hurwitz_zeta(s, 1.0)
