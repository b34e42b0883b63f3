"""Arithmetic in GF(p^l) with subfield, roots-of-unity and trace helpers.

Elements are plain ints: the polynomial-basis coefficient vector
(c_0, ..., c_{l-1}) is stored as sum(c_i * p**i).  The modulus is the
smallest monic irreducible polynomial of degree l, ordering candidates by
the same integer encoding of their lower coefficients.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 2 ** 20
TABLE_ORDER = 2 ** 16
DENSE_TABLE_ORDER = 1024


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# dense polynomials over GF(p), lowest degree first, no trailing zeros

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pmulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, m, p)


def _ppowmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(a, m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, v in enumerate(a):
        out[i] = v
    for i, v in enumerate(b):
        out[i] = (out[i] - v) % p
    return _trim(out)


def _is_irreducible(f: list[int], p: int) -> bool:
    # Rabin's test
    n = len(f) - 1
    if n == 1:
        return True
    x = [0, 1]
    if _psub(_ppowmod(x, p ** n, f, p), x, p):
        return False
    for r in prime_factors(n):
        g = _pgcd(f, _psub(_ppowmod(x, p ** (n // r), f, p), x, p), p)
        if len(g) != 1:
            return False
    return True


def _find_modulus(p: int, l: int) -> tuple[int, ...]:
    for code in range(p ** l):
        low = [(code // p ** i) % p for i in range(l)]
        f = low + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise FieldError(f"no irreducible polynomial of degree {l} over GF({p})")


class FieldSpec:
    """The finite field GF(p^l) on integer-encoded elements."""

    def __init__(self, p: int, l: int):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if not 1 <= l <= 16:
            raise FieldError(f"extension degree {l} outside 1..16")
        if p ** l > MAX_ORDER:
            raise FieldError(f"field order {p}^{l} exceeds the size budget {MAX_ORDER}")
        self.p = p
        self.l = l
        self.q = p ** l
        self.modulus = _find_modulus(p, l)
        self._digit_weights = np.array([p ** i for i in range(l)], dtype=np.int64)
        self.primitive = self._find_primitive()
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        if self.q <= TABLE_ORDER:
            self._build_log_tables()
        self._add_t: np.ndarray | None = None
        self._mul_t: np.ndarray | None = None

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.l})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and (self.p, self.l) == (other.p, other.l)

    def __hash__(self) -> int:
        return hash((self.p, self.l))

    # representation

    def coeffs(self, x: int) -> tuple[int, ...]:
        self._check(x)
        return tuple((x // self.p ** i) % self.p for i in range(self.l))

    def from_coeffs(self, c: Sequence[int]) -> int:
        if len(c) > self.l:
            raise FieldError("too many coefficients")
        return sum((int(v) % self.p) * self.p ** i for i, v in enumerate(c))

    def _check(self, x: int) -> None:
        if not 0 <= x < self.q:
            raise FieldError(f"{x} is not an element of {self!r}")

    def elements(self) -> range:
        return range(self.q)

    # slow polynomial arithmetic, used to build tables and above TABLE_ORDER

    def _poly(self, x: int) -> list[int]:
        return _trim([(x // self.p ** i) % self.p for i in range(self.l)])

    def _polymul(self, x: int, y: int) -> int:
        return self.from_coeffs(_pmulmod(self._poly(x), self._poly(y), list(self.modulus), self.p))

    def _polypow(self, x: int, e: int) -> int:
        return self.from_coeffs(_ppowmod(self._poly(x), e, list(self.modulus), self.p))

    def _find_primitive(self) -> int:
        if self.q == 2:
            return 1
        factors = prime_factors(self.q - 1)
        for g in range(1, self.q):
            if all(self._polypow(g, (self.q - 1) // r) != 1 for r in factors):
                return g
        raise FieldError("no primitive element")  # unreachable for a field

    def _build_log_tables(self) -> None:
        q = self.q
        exp = np.zeros(2 * (q - 1) + 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        g = self._poly(self.primitive)
        m = list(self.modulus)
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self.from_coeffs(_pmulmod(self._poly(x), g, m, self.p))
        exp[q - 1:2 * (q - 1)] = exp[: q - 1]
        exp[2 * (q - 1)] = exp[0]
        self._exp, self._log = exp, log

    # scalar operations

    def add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        if self.l == 1:
            return (x + y) % self.p
        return self.from_coeffs([a + b for a, b in zip(self.coeffs(x), self.coeffs(y))])

    def neg(self, x: int) -> int:
        if self.p == 2:
            return x
        if self.l == 1:
            return (-x) % self.p
        return self.from_coeffs([-a for a in self.coeffs(x)])

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        if self._log is not None:
            return int(self._exp[self._log[x] + self._log[y]])
        return self._polymul(x, y)

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._log is not None:
            return int(self._exp[(self.q - 1 - self._log[x]) % (self.q - 1)])
        return self._polypow(x, self.q - 2)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(x), -e)
        if x == 0:
            return 1 if e == 0 else 0
        if self._log is not None:
            return int(self._exp[(self._log[x] * e) % (self.q - 1)])
        return self._polypow(x, e)

    def order(self, x: int) -> int:
        if x == 0:
            raise FieldError("zero has no multiplicative order")
        n = self.q - 1
        for r in prime_factors(self.q - 1):
            while n % r == 0 and self.pow(x, n // r) == 1:
                n //= r
        return n

    def frobenius(self, x: int, times: int = 1) -> int:
        return self.pow(x, self.p ** times)

    # vectorised operations on integer arrays

    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Dense addition and multiplication tables (only for q <= 1024)."""
        if self.q > DENSE_TABLE_ORDER:
            raise FieldError(f"dense tables are limited to q <= {DENSE_TABLE_ORDER}")
        if self._add_t is None:
            a = np.arange(self.q, dtype=np.int64)
            self._add_t = self.vadd(a[:, None], a[None, :]).astype(np.int32)
            self._mul_t = self.vmul(a[:, None], a[None, :]).astype(np.int32)
        return self._add_t, self._mul_t

    def has_tables(self) -> bool:
        return self.q <= DENSE_TABLE_ORDER

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.l == 1:
            return (a + b) % self.p
        if self._add_t is not None:
            return self._add_t[a, b].astype(np.int64)
        da = (a[..., None] // self._digit_weights) % self.p
        db = (b[..., None] // self._digit_weights) % self.p
        return (((da + db) % self.p) * self._digit_weights).sum(axis=-1)

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        if self.l == 1:
            return (-a) % self.p
        d = (a[..., None] // self._digit_weights) % self.p
        return (((-d) % self.p) * self._digit_weights).sum(axis=-1)

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.l == 1:
            return (a * b) % self.p
        if self._mul_t is not None:
            return self._mul_t[a, b].astype(np.int64)
        if self._log is None:
            f = np.vectorize(self._polymul, otypes=[np.int64])
            return f(a, b)
        la, lb = self._log[a], self._log[b]
        out = self._exp[np.where(la < 0, 0, la) + np.where(lb < 0, 0, lb)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if self._log is None:
            return np.vectorize(self.inv, otypes=[np.int64])(a)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self._log is None:
            return np.vectorize(lambda x: self.pow(int(x), e), otypes=[np.int64])(a)
        if e == 0:
            return np.ones_like(a)
        la = self._log[a]
        out = self._exp[(np.where(la < 0, 0, la) * e) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def vcoeffs(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._digit_weights) % self.p

    def vfrom_coeffs(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=np.int64) % self.p
        return (c * self._digit_weights).sum(axis=-1)


@lru_cache(maxsize=None)
def field_new(p: int, l: int) -> FieldSpec:
    return FieldSpec(p, l)


def field_of_order(q: int) -> FieldSpec:
    for p in prime_factors(q)[:1]:
        l = 0
        n = q
        while n % p == 0:
            n //= p
            l += 1
        if n == 1:
            return field_new(p, l)
    raise FieldError(f"{q} is not a prime power")


def prime_power(q: int) -> tuple[int, int]:
    F = field_of_order(q)
    return F.p, F.l


def primitive_element(F: FieldSpec) -> int:
    return F.primitive


def roots_of_unity(F: FieldSpec, t: int) -> list[int]:
    if t < 1 or (F.q - 1) % t:
        raise FieldError(f"{t} does not divide q-1 = {F.q - 1}")
    step = (F.q - 1) // t
    return [F.pow(F.primitive, step * s) for s in range(t)]


def _check_subfield(F: FieldSpec, h: int) -> None:
    if h < 1 or F.l % h:
        raise FieldError(f"h = {h} does not divide l = {F.l}")


def subfield_elements(F: FieldSpec, h: int) -> list[int]:
    _check_subfield(F, h)
    return [0] + roots_of_unity(F, F.p ** h - 1)


def subfield_basis(F: FieldSpec, h: int) -> list[int]:
    """A GF(p)-basis of GF(p^h) inside F: powers of a generator of its unit group."""
    _check_subfield(F, h)
    gamma = F.pow(F.primitive, (F.q - 1) // (F.p ** h - 1))
    return [F.pow(gamma, i) for i in range(h)]


def relative_basis(F: FieldSpec, h: int) -> list[int]:
    """A GF(p^h)-basis of F: 1, g, ..., g^(l/h - 1) for the primitive g."""
    _check_subfield(F, h)
    return [F.pow(F.primitive, i) for i in range(F.l // h)]


def trace(F: FieldSpec, h: int, x: int) -> int:
    _check_subfield(F, h)
    F._check(x)
    total = 0
    y = x
    for _ in range(F.l // h):
        total = F.add(total, y)
        y = F.frobenius(y, h)
    return total


def is_in_subfield(F: FieldSpec, h: int, x: int) -> bool:
    _check_subfield(F, h)
    return F.frobenius(x, h) == x


def vec_trace(F: FieldSpec, h: int, v: Iterable[int]) -> tuple[int, ...]:
    _check_subfield(F, h)
    arr = np.asarray(list(v), dtype=np.int64)
    return tuple(int(x) for x in vtrace(F, h, arr))


def vtrace(F: FieldSpec, h: int, a) -> np.ndarray:
    _check_subfield(F, h)
    a = np.asarray(a, dtype=np.int64)
    total = np.zeros_like(a)
    y = a
    for _ in range(F.l // h):
        total = F.vadd(total, y)
        y = F.vpow(y, F.p ** h)
    return total


def vin_subfield(F: FieldSpec, h: int, a) -> np.ndarray:
    _check_subfield(F, h)
    a = np.asarray(a, dtype=np.int64)
    return F.vpow(a, F.p ** h) == a
