"""
Truncated power series over a prime field

A TruncatedSeries of order n keeps the coefficients of t^0 .. t^(n-1);
arithmetic never looks at anything beyond that.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple, Union

from apps.core.exceptions import BadSpecializationError, FieldMismatchError, ValidationError

from .field import FieldElement, PrimeField


@lru_cache(maxsize=64)
def inverse_table(p: int, n: int) -> Tuple[int, ...]:
    """
    Inverses of 1..n-1 mod p (index 0 unused)
    """
    if n > p:
        raise ValidationError(f"Truncation order {n} needs a prime larger than {n}, got {p}")
    table = [0, 1]
    for k in range(2, n):
        # inv(k) = -(p // k) * inv(p % k)
        table.append(-(p // k) * table[p % k] % p)
    return tuple(table[:max(n, 1)])


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: Tuple[FieldElement, ...]
    field: PrimeField

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @classmethod
    def from_coefficients(cls, field: PrimeField, values: Iterable[int]) -> 'TruncatedSeries':
        return cls(tuple(v % field.p for v in values), field)

    @classmethod
    def constant(cls, field: PrimeField, value: FieldElement, order: int) -> 'TruncatedSeries':
        return cls((value % field.p,) + (0,) * (order - 1), field)

    @classmethod
    def zero(cls, field: PrimeField, order: int) -> 'TruncatedSeries':
        return cls((0,) * order, field)

    @classmethod
    def one(cls, field: PrimeField, order: int) -> 'TruncatedSeries':
        return cls.constant(field, 1, order)

    def is_constant(self) -> bool:
        return not any(self.coeffs[1:])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def truncate(self, order: int) -> 'TruncatedSeries':
        if order >= self.order:
            return TruncatedSeries(self.coeffs + (0,) * (order - self.order), self.field)
        return TruncatedSeries(self.coeffs[:order], self.field)

    def check_compatible(self, other: 'TruncatedSeries') -> None:
        if self.field.p != other.field.p:
            raise FieldMismatchError(f"Series over Z_{self.field.p} and Z_{other.field.p} do not mix")
        if self.order != other.order:
            raise FieldMismatchError(f"Series of order {self.order} and {other.order} do not mix")

    def scale(self, factor: FieldElement) -> 'TruncatedSeries':
        p = self.field.p
        return TruncatedSeries(tuple(c * factor % p for c in self.coeffs), self.field)

    def __add__(self, other: 'TruncatedSeries') -> 'TruncatedSeries':
        self.check_compatible(other)
        p = self.field.p
        return TruncatedSeries(tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)), self.field)

    def __sub__(self, other: 'TruncatedSeries') -> 'TruncatedSeries':
        self.check_compatible(other)
        p = self.field.p
        return TruncatedSeries(tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs)), self.field)

    def __neg__(self) -> 'TruncatedSeries':
        p = self.field.p
        return TruncatedSeries(tuple(-a % p for a in self.coeffs), self.field)

    def __mul__(self, other: Union['TruncatedSeries', int]) -> 'TruncatedSeries':
        if isinstance(other, int):
            return self.scale(other)
        return series_mul(self, other)

    def __truediv__(self, other: 'TruncatedSeries') -> 'TruncatedSeries':
        return series_mul(self, series_inv(other))

    def __pow__(self, exponent: int) -> 'TruncatedSeries':
        if exponent < 0:
            return series_inv(self) ** (-exponent)
        result = TruncatedSeries.one(self.field, self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = series_mul(result, base)
            exponent >>= 1
            if exponent:
                base = series_mul(base, base)
        return result


def convolve(a: Sequence[int], b: Sequence[int], n: int, p: int) -> List[int]:
    """
    First n coefficients of a*b mod p, schoolbook
    """
    support = [(j, bj) for j, bj in enumerate(b[:n]) if bj]
    out = [0] * n
    for i, ai in enumerate(a[:n]):
        if not ai:
            continue
        limit = n - i
        for j, bj in support:
            if j >= limit:
                break
            out[i + j] += ai * bj
    return [c % p for c in out]


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """
    Product truncated at the common order
    """
    a.check_compatible(b)
    if b.is_constant():
        return a.scale(b.coeffs[0])
    if a.is_constant():
        return b.scale(a.coeffs[0])
    return TruncatedSeries(tuple(convolve(a.coeffs, b.coeffs, a.order, a.field.p)), a.field)


def series_inv(a: TruncatedSeries) -> TruncatedSeries:
    """
    Multiplicative inverse mod t^order; needs a unit constant term
    """
    p = a.field.p
    if a.coeffs[0] % p == 0:
        raise BadSpecializationError("Series with zero constant term is not invertible")
    a0_inv = pow(a.coeffs[0], -1, p)
    if a.is_constant():
        return TruncatedSeries.constant(a.field, a0_inv, a.order)
    coeffs = a.coeffs
    out = [a0_inv]
    for k in range(1, a.order):
        acc = 0
        for i in range(1, k + 1):
            if coeffs[i]:
                acc += coeffs[i] * out[k - i]
        out.append(-acc * a0_inv % p)
    return TruncatedSeries(tuple(out), a.field)


def series_integrate(a: TruncatedSeries) -> TruncatedSeries:
    """
    Antiderivative with zero constant term; the top input coefficient drops out
    """
    p = a.field.p
    inverses = inverse_table(p, a.order)
    coeffs = [0] + [a.coeffs[k] * inverses[k + 1] % p for k in range(a.order - 1)]
    return TruncatedSeries(tuple(coeffs), a.field)


def series_derivative(a: TruncatedSeries) -> TruncatedSeries:
    """
    Term-wise derivative, padded with a zero top coefficient
    """
    p = a.field.p
    coeffs = [(k + 1) * a.coeffs[k + 1] % p for k in range(a.order - 1)] + [0]
    return TruncatedSeries(tuple(coeffs), a.field)
