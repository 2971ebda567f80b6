"""Query-count budgets of the algorithms, with exact comparison helpers.

Most budgets contain ``log2`` of a rational, so ``queries <= bound`` is decided
with integer arithmetic (``2**queries`` against a power of the ratio) rather
than with floats.
"""

from __future__ import annotations

import math
from fractions import Fraction


def floor_log2_ratio(num: int, den: int) -> int:
    """floor(log2(num / den)) for num >= den >= 1."""
    if den < 1 or num < den:
        raise ValueError("need num >= den >= 1")
    return (num // den).bit_length() - 1


def within_coef_log2(queries: int, coef: int, num: int, den: int, extra: int = 0) -> bool:
    """Exactly decide ``queries <= coef * log2(num/den) + extra`` (bound clamped at ``extra``)."""
    slack = queries - extra
    if slack <= 0:
        return True
    if num <= den or coef == 0:
        return False
    return (1 << slack) * den**coef <= num**coef


def within_two_log2_plus(queries: int, count: int, extra: int) -> bool:
    """Exactly decide ``queries <= 2*log2(count) + extra``."""
    slack = queries - extra
    if slack <= 0:
        return True
    return (1 << slack) <= count * count


# --- sorting ---------------------------------------------------------------


def mergesort_recursion_bound(n: int, w: int) -> float:
    return max(0.0, 2 * w * n * math.log2(n / w)) if n else 0.0


def mergesort_recursion_ok(queries: int, n: int, w: int) -> bool:
    return within_coef_log2(queries, 2 * w * n, n, w)


def mergesort_total_bound(n: int, w: int) -> float:
    return mergesort_recursion_bound(n, w) + 2 * w * n


def chainmerge_bound(q: int, n: int) -> int:
    return 2 * q * n


def bininsert_bound(n: int, w: int, c: int = 4) -> float:
    return c * w * math.log2(n) * n if n > 1 else 0.0


def entropy_bound(count: int, n: int, w: int) -> float:
    return 2 * math.log2(count) + 4 * w * n


def entropy_ok(queries: int, count: int, n: int, w: int) -> bool:
    return within_two_log2_plus(queries, count, 4 * w * n)


def weighted_search_ok(queries: int, total: int, part: int) -> bool:
    return queries <= 2 * (1 + floor_log2_ratio(total, part))


def unknown_width_bound(n: int, bounds_tried) -> float:
    return sum(mergesort_total_bound(n, min(b, n)) for b in bounds_tried)


# --- selection -------------------------------------------------------------


def minimals_det_bound(n: int, w: int) -> int:
    return w * n


def minimals_rand_expectation(n: int, w: int) -> float:
    """Expected-query budget of randomized minimal finding (natural log)."""
    return (w + 1) * n / 2 + (w * w - w) / 2 * (math.log(n) - math.log(w))


def kselect_det_bound(n: int, w: int, k: int) -> float:
    return 8 * w * n * math.log2(2 * k)


def kselect_det_ok(queries: int, n: int, w: int, k: int) -> bool:
    return within_coef_log2(queries, 8 * w * n, 2 * k, 1)


def kselect_rand_expectation(n: int, w: int, k: int) -> float:
    return w * n + 16 * k * w * w * math.log2(n) * math.log2(2 * k)


def ternary_weight_envelope(n: int, w: int) -> float:
    return 4 * n * (math.log2(n) + w)


def heights_envelope(n: int, w: int) -> float:
    return 4 * w * n * math.log2(n) if n > 1 else 0.0


def as_fraction(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)
