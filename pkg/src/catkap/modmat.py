"""Dense matrix arithmetic over Z_m on nested tuples.

Sizes stay at desk scale (<= 4x4), so plain Python loops are fine and
arbitrary-precision ints rule out overflow at 31-bit moduli.
"""

from __future__ import annotations

from collections.abc import Sequence

Matrix = tuple[tuple[int, ...], ...]


def freeze(rows: Sequence[Sequence[int]], m: int | None = None) -> Matrix:
    if m is None:
        return tuple(tuple(int(v) for v in row) for row in rows)
    return tuple(tuple(int(v) % m for v in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def is_square(a: Matrix) -> bool:
    return all(len(row) == len(a) for row in a)


def mat_mul(a: Matrix, b: Matrix, m: int) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) % m for j in range(n))
        for i in range(n)
    )


def mat_pow(a: Matrix, k: int, m: int) -> Matrix:
    if k < 0:
        return mat_pow(inverse(a, m), -k, m)
    r = identity(len(a))
    x = a
    while k:
        if k & 1:
            r = mat_mul(r, x, m)
        x = mat_mul(x, x, m)
        k >>= 1
    return r


def inverse(a: Matrix, m: int) -> Matrix:
    """Gauss-Jordan inverse mod a prime m; ValueError if singular."""
    n = len(a)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] % m), None)
        if pivot is None:
            raise ValueError("matrix is singular mod %d" % m)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv_p = pow(aug[col][col], -1, m)
        aug[col] = [v * inv_p % m for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(v - f * w) % m for v, w in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def is_invertible(a: Matrix, m: int) -> bool:
    try:
        inverse(a, m)
        return True
    except ValueError:
        return False


def random_invertible(d: int, m: int, rng) -> Matrix:
    while True:
        cand = tuple(tuple(rng.randrange(m) for _ in range(d)) for _ in range(d))
        if is_invertible(cand, m):
            return cand
