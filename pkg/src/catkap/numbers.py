"""Small number-theory helpers: primality, trial factoring, element orders."""

from __future__ import annotations

# Deterministic Miller-Rabin witness set for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 1 << 22


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Factor n by trial division; the leftover cofactor must be prime.

    Raises ValueError when a composite cofactor resists the trial bound,
    which keeps desk-scale inputs honest instead of silently mis-factoring.
    """
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n and d < _TRIAL_LIMIT:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if not is_probable_prime(n):
            raise ValueError(f"composite cofactor {n} resists trial division")
        factors[n] = factors.get(n, 0) + 1
    return factors


def element_order(x, one, mul, group_order_factors: dict[int, int]) -> int:
    """Exact order of x in a finite group of factored order.

    mul(a, b) is the group operation; the order of the full group is
    the product of the given prime powers.
    """
    def power(base, k):
        r, b = one, base
        while k:
            if k & 1:
                r = mul(r, b)
            b = mul(b, b)
            k >>= 1
        return r

    order = 1
    for p, e in group_order_factors.items():
        order *= p ** e
    for p in group_order_factors:
        while order % p == 0 and power(x, order // p) == one:
            order //= p
    return order


def order_by_iteration(x, one, mul, cap: int) -> int | None:
    """Order of x by repeated multiplication; None once the cap is passed."""
    acc, k = x, 1
    while acc != one:
        acc = mul(acc, x)
        k += 1
        if k > cap:
            return None
    return k
