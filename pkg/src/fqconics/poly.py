"""Sparse multivariate, dense univariate and Laurent polynomials over F_q / F_{q^2}.

Coefficients are field elements (ints) interpreted by the owning field
context. Exponent vectors are tuples; the canonical term order is graded
lex: total degree ascending, then larger powers of earlier variables first.
"""

from __future__ import annotations

import functools
import math
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

DEGREE_BUDGET = 64

R = TypeVar("R")


class _Infinite:
    """Multiplicity of the zero polynomial. Compares above every integer."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "INFINITE"

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("INFINITE")

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __sub__(self, other):
        return self

    def __add__(self, other):
        return self

    __radd__ = __add__


INFINITE = _Infinite()


@functools.lru_cache(maxsize=None)
def binom_mod(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k) % p


def glex_key(exp: Sequence[int]) -> tuple:
    return (sum(exp), tuple(-e for e in exp))


@functools.lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of n variables with total degree <= d, graded lex."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], left: int) -> None:
        if len(prefix) == n - 1:
            for last in range(left + 1):
                out.append(prefix + (last,))
            return
        for e in range(left + 1):
            rec(prefix + (e,), left - e)

    if n == 0:
        return ((),)
    rec((), d)
    return tuple(sorted(out, key=glex_key))


@functools.lru_cache(maxsize=None)
def indices_of_weight(n: int, w: int) -> tuple[tuple[int, ...], ...]:
    return tuple(e for e in monomials(n, w) if sum(e) == w)


def horner_substitute(
    terms: Mapping[tuple[int, ...], int],
    values: Sequence[R],
    const: Callable[[int], R],
) -> R | None:
    """Evaluate sum c_e * prod values[j]**e_j with one Horner pass per variable.

    ``values`` may be any ring elements supporting ``+`` and ``*``; returns
    None when ``terms`` is empty.
    """
    n = len(values)
    powers: list[dict[int, R]] = [{1: v} for v in values]

    def power(j: int, e: int) -> R:
        cache = powers[j]
        if e not in cache:
            half = power(j, e // 2)
            sq = half * half
            cache[e] = sq * values[j] if e % 2 else sq
        return cache[e]

    def rec(items: list[tuple[tuple[int, ...], int]], j: int) -> R:
        if j == n:
            return const(items[0][1])
        buckets: dict[int, list] = {}
        for exp, c in items:
            buckets.setdefault(exp[j], []).append((exp, c))
        acc = None
        prev = 0
        for e in sorted(buckets, reverse=True):
            sub = rec(buckets[e], j + 1)
            acc = sub if acc is None else acc * power(j, prev - e) + sub
            prev = e
        if prev:
            acc = acc * power(j, prev)
        return acc

    items = list(terms.items())
    if not items:
        return None
    return rec(items, 0)


class MultiPoly:
    """Immutable sparse polynomial in n variables; no stored zero coefficients."""

    __slots__ = ("field", "n", "terms", "_degree")

    def __init__(self, field, n: int, terms: Mapping[tuple[int, ...], int] | None = None):
        if n < 1:
            raise ValueError("a polynomial needs at least one variable")
        clean: dict[tuple[int, ...], int] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} for n={n}")
            if c:
                clean[exp] = c
        self.field = field
        self.n = n
        self.terms = clean
        self._degree = max((sum(e) for e in clean), default=-1)

    @classmethod
    def constant(cls, field, n: int, c: int) -> "MultiPoly":
        return cls(field, n, {(0,) * n: c})

    @classmethod
    def variable(cls, field, n: int, i: int) -> "MultiPoly":
        exp = [0] * n
        exp[i] = 1
        return cls(field, n, {tuple(exp): 1})

    @classmethod
    def linear(cls, field, coeffs: Sequence[int], const: int = 0) -> "MultiPoly":
        """const + sum coeffs[i] * x_i."""
        n = len(coeffs)
        terms = {(0,) * n: const}
        for i, c in enumerate(coeffs):
            exp = [0] * n
            exp[i] = 1
            terms[tuple(exp)] = c
        return cls(field, n, terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return self._degree

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms.items(), key=lambda kv: glex_key(kv[0]))

    def coeff(self, exp: Sequence[int]) -> int:
        return self.terms.get(tuple(exp), 0)

    # -- ring operations

    def _check(self, other: "MultiPoly") -> None:
        if other.field != self.field or other.n != self.n:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = F.add(out.get(e, 0), c)
        return MultiPoly(F, self.n, out)

    def __neg__(self) -> "MultiPoly":
        F = self.field
        return MultiPoly(F, self.n, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        F = self.field
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = F.add(out.get(e, 0), F.mul(c1, c2))
        return MultiPoly(F, self.n, out)

    def __pow__(self, k: int) -> "MultiPoly":
        acc = MultiPoly.constant(self.field, self.n, 1)
        for _ in range(k):
            acc = acc * self
        return acc

    def scale(self, c: int) -> "MultiPoly":
        F = self.field
        return MultiPoly(F, self.n, {e: F.mul(c, v) for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.field == other.field
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.field, self.n, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, c in reversed(self.sorted_terms()):
            mono = "*".join(
                f"x{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(exp) if e
            )
            coeff = self.field.format(c)
            parts.append(mono if coeff == "1" and mono else (f"{coeff}*{mono}" if mono else coeff))
        return " + ".join(parts)

    # -- evaluation and structure

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.n:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.n}")
        F = self.field
        pows: list[list[int]] = []
        top = max(self._degree, 0)
        for x in point:
            row = [1]
            for _ in range(top):
                row.append(F.mul(row[-1], x))
            pows.append(row)
        acc = 0
        for exp, c in self.terms.items():
            v = c
            for j, e in enumerate(exp):
                if e:
                    v = F.mul(v, pows[j][e])
            acc = F.add(acc, v)
        return acc

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly(self.field, self.n, {e: c for e, c in self.terms.items() if sum(e) == d})

    def leading_form(self) -> "MultiPoly":
        """The homogeneous part of top degree (f_d with d = deg f)."""
        return self.homogeneous_part(self._degree)

    def hasse_derivative(self, index: Sequence[int]) -> "MultiPoly":
        """Coefficient of y^index in f(x + y)."""
        index = tuple(index)
        if len(index) != self.n:
            raise ValueError(f"derivative index has length {len(index)}, expected {self.n}")
        F, p = self.field, self.field.p
        out: dict[tuple[int, ...], int] = {}
        for exp, c in self.terms.items():
            if any(e < i for e, i in zip(exp, index)):
                continue
            b = 1
            for e, i in zip(exp, index):
                b = b * binom_mod(e, i, p) % p
                if not b:
                    break
            if b:
                out[tuple(e - i for e, i in zip(exp, index))] = F.mul(F.from_int(b), c)
        return MultiPoly(F, self.n, out)

    def hasse_at(self, index: Sequence[int], point: Sequence[int], pows=None) -> int:
        """f^(index)(point) without materialising the derivative."""
        F, p = self.field, self.field.p
        if pows is None:
            pows = _power_table(F, point, max(self._degree, 0))
        acc = 0
        for exp, c in self.terms.items():
            b = 1
            for e, i in zip(exp, index):
                if e < i:
                    b = 0
                    break
                b = b * binom_mod(e, i, p) % p
                if not b:
                    break
            if not b:
                continue
            v = F.mul(F.from_int(b), c)
            for j, (e, i) in enumerate(zip(exp, index)):
                if e > i:
                    v = F.mul(v, pows[j][e - i])
            acc = F.add(acc, v)
        return acc

    def multiplicity_at(self, point: Sequence[int]):
        """Largest M with every Hasse derivative of weight < M vanishing at point.

        Returns INFINITE for the zero polynomial.
        """
        if len(point) != self.n:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.n}")
        if not self.terms:
            return INFINITE
        pows = _power_table(self.field, point, self._degree)
        for w in range(self._degree + 1):
            for index in indices_of_weight(self.n, w):
                if self.hasse_at(index, point, pows):
                    return w
        raise AssertionError("nonzero polynomial with all Hasse derivatives zero")  # pragma: no cover

    def compose(self, gs: Sequence["MultiPoly"]) -> "MultiPoly":
        """f(g_1, ..., g_n) for polynomials g_j in a common ring."""
        if len(gs) != self.n:
            raise ValueError(f"need {self.n} substitutions, got {len(gs)}")
        m = gs[0].n
        out = horner_substitute(self.terms, gs, lambda c: MultiPoly.constant(self.field, m, c))
        return out if out is not None else MultiPoly(self.field, m)

    def to_unipoly(self) -> "UniPoly":
        if self.n != 1:
            raise ValueError("only univariate polynomials convert")
        coeffs = [0] * (self._degree + 1)
        for (e,), c in self.terms.items():
            coeffs[e] = c
        return UniPoly(self.field, coeffs)


def _power_table(F, point: Sequence[int], top: int) -> list[list[int]]:
    out = []
    for x in point:
        row = [1]
        for _ in range(top):
            row.append(F.mul(row[-1], x))
        out.append(row)
    return out


def evaluate(f: MultiPoly, x: Sequence[int]) -> int:
    return f.evaluate(x)


def homogeneous_part(f: MultiPoly, d: int) -> MultiPoly:
    return f.homogeneous_part(d)


def hasse_derivative(f: MultiPoly, index: Sequence[int]) -> MultiPoly:
    return f.hasse_derivative(index)


def multiplicity_at(f, a):
    """Mult(f, a) for a MultiPoly (point) or UniPoly (scalar)."""
    return f.multiplicity_at(a)


class UniPoly:
    """Dense univariate polynomial, coefficients little-endian."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs: Iterable[int] = ()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: "UniPoly") -> "UniPoly":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(F, [F.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(F, [F.sub(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        return UniPoly(self.field, self.field.convolve(self.coeffs, other.coeffs))

    def scale(self, c: int) -> "UniPoly":
        return UniPoly(self.field, [self.field.mul(c, v) for v in self.coeffs])

    def shift(self, k: int) -> "UniPoly":
        return UniPoly(self.field, (0,) * k + self.coeffs) if self.coeffs else self

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def __repr__(self) -> str:
        fmt = self.field.format
        return "UniPoly(" + ", ".join(fmt(c) for c in self.coeffs) + ")"

    def __call__(self, t: int) -> int:
        return self.evaluate(t)

    def evaluate(self, t: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, t), c)
        return acc

    def hasse_derivative(self, j: int) -> "UniPoly":
        F, p = self.field, self.field.p
        return UniPoly(
            F, [F.mul(F.from_int(binom_mod(k, j, p)), c) for k, c in enumerate(self.coeffs) if k >= j]
        )

    def multiplicity_at(self, t: int):
        if not self.coeffs:
            return INFINITE
        for j in range(len(self.coeffs)):
            if self.hasse_derivative(j).evaluate(t):
                return j
        raise AssertionError("nonzero polynomial with all Hasse derivatives zero")  # pragma: no cover

    def to_multipoly(self) -> MultiPoly:
        return MultiPoly(self.field, 1, {(i,): c for i, c in enumerate(self.coeffs)})

    @classmethod
    def interpolate(cls, field, points: Sequence[tuple[int, int]]) -> "UniPoly":
        """Lagrange interpolant of degree < len(points) through (t, value) pairs."""
        F = field
        xs = [t for t, _ in points]
        if len(set(xs)) != len(xs):
            raise ValueError("interpolation nodes must be distinct")
        # master = prod (t - x_i)
        master = [1]
        for x in xs:
            master = F.convolve(master, [F.neg(x), 1])
        out = [0] * len(points)
        for x, y in points:
            if not y:
                continue
            # synthetic division of master by (t - x)
            quo = [0] * (len(master) - 1)
            carry = 0
            for k in range(len(master) - 1, 0, -1):
                carry = F.add(master[k], F.mul(carry, x))
                quo[k - 1] = carry
            denom = UniPoly(F, quo).evaluate(x)
            scale = F.div(y, denom)
            for k, v in enumerate(quo):
                out[k] = F.add(out[k], F.mul(scale, v))
        return cls(F, out)


class LaurentPoly:
    """Finite Laurent series sum_{e=low}^{high} c_e t^e."""

    __slots__ = ("field", "low", "coeffs")

    def __init__(self, field, low: int, coeffs: Iterable[int]):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        start = 0
        while start < len(c) and not c[start]:
            start += 1
        self.field = field
        self.low = low + start if c else 0
        self.coeffs = tuple(c[start:])

    @classmethod
    def monomial(cls, field, c: int, e: int) -> "LaurentPoly":
        return cls(field, e, [c])

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, e: int) -> int:
        i = e - self.low
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        F = self.field
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        return LaurentPoly(F, lo, [F.add(self.coeff(e), other.coeff(e)) for e in range(lo, hi + 1)])

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.coeffs or not other.coeffs:
            return LaurentPoly(self.field, 0, [])
        return LaurentPoly(self.field, self.low + other.low, self.field.convolve(self.coeffs, other.coeffs))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.field == other.field
            and (self.low, self.coeffs) == (other.low, other.coeffs)
        )

    def __repr__(self) -> str:
        return f"LaurentPoly(low={self.low}, coeffs={self.coeffs})"

    def evaluate(self, t: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, t), c)
        return F.mul(acc, F.pow(t, self.low)) if self.low else acc

    def to_unipoly(self, shift: int = 0) -> UniPoly:
        """t^shift times this series, which must then be a polynomial."""
        if self.coeffs and self.low + shift < 0:
            raise ValueError(f"shift {shift} leaves a negative power t^{self.low + shift}")
        if not self.coeffs:
            return UniPoly(self.field, [])
        return UniPoly(self.field, (0,) * (self.low + shift) + self.coeffs)
