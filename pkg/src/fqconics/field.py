"""Exact arithmetic in F_q (q odd) and in the quadratic extension F_q[z]/(z^2 - g).

Elements are plain ints. An element of F_q with k > 1 is the integer
``sum(c_j * p**j)`` built from its little-endian coefficient tuple over F_p,
so the integer order is the canonical order used everywhere (smallest
non-square, canonical square roots, norm-one ordering). An element
``alpha + beta*z`` of the extension is the integer ``alpha + beta*q``.
"""

from __future__ import annotations

import functools
from typing import Iterable, Iterator, Sequence

import numpy as np

DEFAULT_BUDGET = 1000


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, k) with q = p**k, or raise FieldError."""
    if q < 2:
        raise FieldError(f"q={q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise FieldError(f"q={q} is not a prime power")
    return p, k


def _factor_primes(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p as little-endian int lists (table construction only)

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pmulmod(a: Sequence[int], b: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, m, p)


def _monic_polys(p: int, deg: int) -> Iterator[tuple[int, ...]]:
    """Monic polynomials of a given degree, lower coefficients in index order."""
    for idx in range(p**deg):
        coeffs = []
        for _ in range(deg):
            coeffs.append(idx % p)
            idx //= p
        yield tuple(coeffs) + (1,)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for cand in _monic_polys(p, d):
            if not _pmod(list(poly), cand, p):
                return False
    return True


class FieldCtx:
    """The finite field F_q, q = p**k with p odd.

    Immutable after construction; build it with :func:`make_field`.
    """

    def __init__(self, p: int, k: int, modulus: Sequence[int]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(modulus)
        self.order = self.q
        self.zero = 0
        self.one = 1
        self._prime = k == 1
        if not self._prime:
            self._build_tables()

    def _build_tables(self) -> None:
        p, q = self.p, self.q
        self._digits = [self.to_coeffs(x) for x in range(q)]
        self._neg = [self.from_coeffs([(-c) % p for c in d]) for d in self._digits]
        gen = None
        for cand in range(2, q):
            if self._is_primitive(cand):
                gen = cand
                break
        if gen is None:  # pragma: no cover - F_q^* is cyclic
            raise FieldError("no primitive element found")
        self.generator = gen
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        cur = [1]
        g_poly = list(self._digits[gen])
        for i in range(q - 1):
            v = self.from_coeffs(cur)
            exp[i] = exp[i + q - 1] = v
            log[v] = i
            cur = _pmulmod(cur, g_poly, self.modulus, p)
        self._exp, self._log = exp, log
        # zech[i] = log(1 + gen**i), or -1 when 1 + gen**i = 0
        zech = [-1] * (q - 1)
        for i in range(q - 1):
            d = list(self._digits[exp[i]])
            d[0] = (d[0] + 1) % p
            s = self.from_coeffs(d)
            zech[i] = log[s] if s else -1
        self._zech = zech

    def _is_primitive(self, x: int) -> bool:
        poly = list(self.to_coeffs(x))
        n = self.q - 1

        def pw(e: int) -> list[int]:
            acc, base = [1], poly
            while e:
                if e & 1:
                    acc = _pmulmod(acc, base, self.modulus, self.p)
                base = _pmulmod(base, base, self.modulus, self.p)
                e >>= 1
            return acc

        return pw(n) == [1] and all(pw(n // r) != [1] for r in _factor_primes(n))

    # -- encoding

    def to_coeffs(self, x: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            out.append(x % self.p)
            x //= self.p
        return tuple(out)

    def from_coeffs(self, coeffs: Iterable[int]) -> int:
        x, scale = 0, 1
        for c in coeffs:
            x += (c % self.p) * scale
            scale *= self.p
        return x

    def encode(self, x: int):
        """JSON encoding: int for prime fields, coefficient list otherwise."""
        return x if self._prime else list(self.to_coeffs(x))

    def decode(self, obj) -> int:
        if self._prime:
            if isinstance(obj, bool) or not isinstance(obj, int) or not 0 <= obj < self.p:
                raise FieldError(f"invalid element {obj!r} for F_{self.q}")
            return obj
        if not isinstance(obj, list) or len(obj) != self.k or any(
            isinstance(c, bool) or not isinstance(c, int) or not 0 <= c < self.p for c in obj
        ):
            raise FieldError(f"invalid element {obj!r} for F_{self.q}")
        return self.from_coeffs(obj)

    def format(self, x: int) -> str:
        if self._prime:
            return str(x)
        return "[" + ",".join(str(c) for c in self.to_coeffs(x)) + "]"

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def from_int(self, n: int) -> int:
        return n % self.p

    # -- arithmetic

    def add(self, a: int, b: int) -> int:
        if self._prime:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % (self.q - 1)]
        return 0 if z < 0 else self._exp[la + z]

    def neg(self, a: int) -> int:
        if self._prime:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        if self._prime:
            return (a - b) % self.p
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if self._prime:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._prime:
            return pow(a, -1, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self._prime:
            return pow(a, e, self.p)
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[self._log[a] * e % (self.q - 1)]

    def sum(self, values: Iterable[int]) -> int:
        if self._prime:
            return sum(values) % self.p
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    def convolve(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        """Coefficient list of the product of two dense polynomials."""
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        if self._prime:
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            p = self.p
            return [c % p for c in out]
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = self.add(out[i + j], self.mul(x, y))
        return out

    # -- squares

    def is_square(self, x: int) -> bool:
        return x == 0 or self.pow(x, (self.q - 1) // 2) == 1

    @functools.cached_property
    def _sqrt_table(self) -> dict[int, int]:
        table: dict[int, int] = {}
        for x in range(self.q):
            table.setdefault(self.mul(x, x), x)
        return table

    def sqrt(self, x: int) -> int | None:
        """Canonical (smallest) square root, or None for a non-square."""
        return self._sqrt_table.get(x)

    # -- vectorised row operations for exact elimination

    @functools.cached_property
    def _np_tables(self):
        q = self.q
        digits = np.array([self.to_coeffs(x) for x in range(q)], dtype=np.int64)
        weights = self.p ** np.arange(self.k, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % self.p) @ weights
        neg = np.array(self._neg, dtype=np.int64)
        log = np.array(self._log, dtype=np.int64)
        exp = np.array(self._exp, dtype=np.int64)
        return add, neg, log, exp

    def vec_scale(self, row: np.ndarray, c: int) -> np.ndarray:
        if self._prime:
            return row * c % self.p
        if c == 0:
            return np.zeros_like(row)
        _, _, log, exp = self._np_tables
        out = exp[log[row] + self._log[c]]
        out[row == 0] = 0
        return out

    def vec_sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self._prime:
            return (a - b) % self.p
        add, neg, _, _ = self._np_tables
        return add[a, neg[b]]

    # -- identity

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldCtx) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self) -> int:
        return hash(("F", self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"FieldCtx(q={self.q})"


@functools.lru_cache(maxsize=None)
def make_field(p: int, k: int = 1, budget: int = DEFAULT_BUDGET) -> FieldCtx:
    """F_{p^k} with the lexicographically smallest monic irreducible modulus."""
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if p == 2:
        raise FieldError("even characteristic is not supported")
    if k < 1:
        raise FieldError(f"extension degree k={k} must be positive")
    if p**k > budget:
        raise FieldError(f"q={p**k} exceeds the magnitude budget {budget}")
    if k == 1:
        return FieldCtx(p, 1, (0, 1))
    for cand in _monic_polys(p, k):
        if is_irreducible(cand, p):
            return FieldCtx(p, k, cand)
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")  # pragma: no cover


def field_for_order(q: int, budget: int = DEFAULT_BUDGET) -> FieldCtx:
    if q % 2 == 0:
        raise FieldError("even q is not supported")
    p, k = prime_power(q)
    return make_field(p, k, budget)


def find_nonsquare(F: FieldCtx) -> int:
    """Smallest g in F_q^* with g^((q-1)/2) = -1."""
    minus_one = F.neg(1)
    half = (F.q - 1) // 2
    for g in F.units():
        if F.pow(g, half) == minus_one:
            return g
    raise FieldError("no non-square found")  # pragma: no cover


class ExtFieldCtx:
    """F_{q^2} = F_q[z]/(z^2 - g) for a non-square g.

    Same duck-typed interface as :class:`FieldCtx`; ``alpha + beta*z`` is
    stored as ``alpha + beta*q``.
    """

    def __init__(self, base: FieldCtx, g: int):
        self.base = base
        self.g = g
        self.q = base.q
        self.p = base.p
        self.order = base.q**2
        self.zero = 0
        self.one = 1
        self.z = base.q

    def pack(self, alpha: int, beta: int) -> int:
        return alpha + beta * self.q

    def unpack(self, x: int) -> tuple[int, int]:
        return x % self.q, x // self.q

    def lift(self, a: int) -> int:
        return a

    def is_base(self, x: int) -> bool:
        return x < self.q

    def elements(self) -> range:
        return range(self.order)

    def units(self) -> range:
        return range(1, self.order)

    def from_int(self, n: int) -> int:
        return self.base.from_int(n)

    def encode(self, x: int):
        a, b = self.unpack(x)
        return [self.base.encode(a), self.base.encode(b)]

    def decode(self, obj) -> int:
        if not isinstance(obj, list) or len(obj) != 2:
            raise FieldError(f"invalid element {obj!r} for F_{self.q}^2")
        return self.pack(self.base.decode(obj[0]), self.base.decode(obj[1]))

    def format(self, x: int) -> str:
        a, b = self.unpack(x)
        return f"({self.base.format(a)},{self.base.format(b)})"

    def add(self, x: int, y: int) -> int:
        F, q = self.base, self.q
        return F.add(x % q, y % q) + F.add(x // q, y // q) * q

    def neg(self, x: int) -> int:
        F, q = self.base, self.q
        return F.neg(x % q) + F.neg(x // q) * q

    def sub(self, x: int, y: int) -> int:
        F, q = self.base, self.q
        return F.sub(x % q, y % q) + F.sub(x // q, y // q) * q

    def mul(self, x: int, y: int) -> int:
        F, q = self.base, self.q
        a, b = x % q, x // q
        c, d = y % q, y // q
        if b == 0 and d == 0:
            return F.mul(a, c)
        re = F.add(F.mul(a, c), F.mul(F.mul(b, d), self.g))
        im = F.add(F.mul(a, d), F.mul(b, c))
        return re + im * q

    def norm(self, x: int) -> int:
        """x * x^q = alpha^2 - g beta^2, an element of F_q."""
        F = self.base
        a, b = self.unpack(x)
        return F.sub(F.mul(a, a), F.mul(self.g, F.mul(b, b)))

    def conj(self, x: int) -> int:
        a, b = self.unpack(x)
        return self.pack(a, self.base.neg(b))

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        F = self.base
        n_inv = F.inv(self.norm(x))
        a, b = self.unpack(x)
        return self.pack(F.mul(a, n_inv), F.neg(F.mul(b, n_inv)))

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(x), -e)
        acc = 1
        while e:
            if e & 1:
                acc = self.mul(acc, x)
            x = self.mul(x, x)
            e >>= 1
        return acc

    def frobenius(self, x: int) -> int:
        return self.conj(x)

    def sum(self, values: Iterable[int]) -> int:
        acc = 0
        for v in values:
            acc = self.add(acc, v)
        return acc

    def convolve(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = self.add(out[i + j], self.mul(x, y))
        return out

    # row operations for the solver; elementwise, extension rows are short
    def vec_scale(self, row: np.ndarray, c: int) -> np.ndarray:
        return np.array([self.mul(int(x), c) for x in row], dtype=np.int64)

    def vec_sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.array([self.sub(int(x), int(y)) for x, y in zip(a, b)], dtype=np.int64)

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtFieldCtx) and (self.base, self.g) == (other.base, other.g)

    def __hash__(self) -> int:
        return hash(("E", self.base, self.g))

    def __repr__(self) -> str:
        return f"ExtFieldCtx(q={self.q}, g={self.base.format(self.g)})"


@functools.lru_cache(maxsize=None)
def quadratic_extension(F: FieldCtx, g: int) -> ExtFieldCtx:
    if g == 0 or F.is_square(g):
        raise FieldError(f"g={F.format(g)} is a square in F_{F.q}")
    return ExtFieldCtx(F, g)


@functools.lru_cache(maxsize=None)
def norm_one_subgroup(E: ExtFieldCtx) -> tuple[int, ...]:
    """All t with t^(q+1) = 1, in canonical order."""
    return tuple(t for t in E.units() if E.norm(t) == 1)
