"""Regularized incomplete beta function and the F / Student t tails built on it."""
import math

FPMIN = 1e-300
CF_EPS = 1e-15
CF_MAX_ITER = 10000


class StatDomainError(ValueError):
    """Raised when a statistical function is called outside its domain."""
    pass


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for I_x(a, b), modified Lentz evaluation."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_EPS:
            return h
    raise StatDomainError(f"Incomplete beta did not converge for a={a}, b={b}, x={x}")


def incomplete_beta(x: float, a: float, b: float) -> float:
    """
    Regularized incomplete beta I_x(a, b).

    The continued fraction converges fastest below x = (a + 1)/(a + b + 2);
    above it the reflection I_x(a, b) = 1 - I_(1-x)(b, a) is used.

    Raises:
        StatDomainError: x outside [0, 1] or a, b not positive.
    """
    if not (0.0 <= x <= 1.0) or math.isnan(x):
        raise StatDomainError(f"x must lie in [0, 1], got {x}")
    if a <= 0 or b <= 0:
        raise StatDomainError(f"a and b must be positive, got a={a}, b={b}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def f_sf(f_stat: float, df1: float, df2: float) -> float:
    """Upper tail P(F > f_stat) of the F(df1, df2) distribution."""
    if df1 <= 0 or df2 <= 0:
        raise StatDomainError(f"Degrees of freedom must be positive, got ({df1}, {df2})")
    if math.isinf(f_stat):
        return 0.0
    if f_stat <= 0:
        return 1.0
    return incomplete_beta(df2 / (df2 + df1 * f_stat), df2 / 2.0, df1 / 2.0)


def t_two_sided(t_stat: float, df: float) -> float:
    """Two-sided p-value of a Student t statistic."""
    if df <= 0:
        raise StatDomainError(f"Degrees of freedom must be positive, got {df}")
    if math.isinf(t_stat):
        return 0.0
    return incomplete_beta(df / (df + t_stat * t_stat), df / 2.0, 0.5)
