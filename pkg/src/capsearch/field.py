"""Exact arithmetic in the prime field F_q = {0, 1, ..., q-1}.

Only prime q is supported; elements are plain integers reduced mod q.
Inverses go through the extended Euclidean algorithm (deterministic cost,
no overflow concerns for q up to 2**31 - 1).
"""

from __future__ import annotations

MAX_Q = 2**31 - 1


class FieldError(Exception):
    pass


class NotPrime(FieldError):
    pass


class TooSmall(FieldError):
    pass


class DivisionByZero(FieldError):
    pass


class FieldMismatch(FieldError):
    pass


def is_prime(n: int) -> bool:
    """Trial division; fine for the supported range (n <= 2**31 - 1)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b)."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        quot = old_r // r
        old_r, r = r, old_r - quot * r
        old_s, s = s, old_s - quot * s
        old_t, t = t, old_t - quot * t
    return old_r, old_s, old_t


class Field:
    """Handle for F_q; immutable and safe to share between workers."""

    __slots__ = ("q",)

    def __init__(self, q: int):
        if q < 2:
            raise TooSmall(f"field order must be >= 2, got {q}")
        if q > MAX_Q:
            raise FieldError(f"field order {q} exceeds supported maximum {MAX_Q}")
        if not is_prime(q):
            raise NotPrime(f"{q} is not prime")
        self.q = q

    def __repr__(self):
        return f"Field(q={self.q})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self):
        return hash(("Field", self.q))

    def _check(self, *elems: int) -> None:
        for a in elems:
            if not 0 <= a < self.q:
                raise FieldMismatch(f"{a} is not an element of F_{self.q}")

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        return (a + b) % self.q

    def sub(self, a: int, b: int) -> int:
        self._check(a, b)
        return (a - b) % self.q

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        return (a * b) % self.q

    def neg(self, a: int) -> int:
        self._check(a)
        return (-a) % self.q

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise DivisionByZero("0 has no multiplicative inverse")
        g, x, _ = xgcd(a, self.q)
        assert g == 1
        return x % self.q

    def inverse_table(self) -> list[int]:
        """inv[a] for all a; inv[0] = 0 as a harmless placeholder."""
        table = [0] * self.q
        for a in range(1, self.q):
            table[a] = self.inv(a)
        return table
