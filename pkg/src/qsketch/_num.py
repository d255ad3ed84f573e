import math


def ceil_tol(x, rel=1e-12):
    """``ceil(x)`` that ignores floating-point fuzz just above an integer."""
    return math.ceil(x - abs(x) * rel)


def ceil_log2(n):
    if n < 1:
        raise ValueError("n must be positive")
    return (n - 1).bit_length()
