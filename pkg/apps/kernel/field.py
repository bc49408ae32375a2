"""
Prime field arithmetic

Field elements are plain ints kept in [0, p); the PrimeField instance is the
shared context that knows the modulus.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from sympy import isprime, nextprime, prevprime

from apps.core.exceptions import BadSpecializationError, ValidationError

# Largest prime below 2**62: products of two elements stay under 2**124
DEFAULT_PRIME = 2**62 - 57

FieldElement = int


@dataclass(frozen=True)
class PrimeField:
    """
    Z_p for a prime p
    """
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.p < 3 or not isprime(self.p):
            raise ValidationError(f"Modulus {self.p} is not an odd prime")

    def element(self, value: Union[int, Fraction]) -> FieldElement:
        """
        Reduce an integer or an exact rational into the field
        """
        if isinstance(value, Fraction):
            if value.denominator == 1:
                return value.numerator % self.p
            return (value.numerator % self.p) * self.inv(value.denominator % self.p) % self.p
        return value % self.p

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return (a + b) % self.p

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return (a - b) % self.p

    def neg(self, a: FieldElement) -> FieldElement:
        return -a % self.p

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return a * b % self.p

    def inv(self, a: FieldElement) -> FieldElement:
        a %= self.p
        if a == 0:
            raise BadSpecializationError("Division by zero in Z_p")
        return pow(a, -1, self.p)

    def div(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return a * self.inv(b) % self.p

    def power(self, a: FieldElement, exponent: int) -> FieldElement:
        if exponent < 0:
            return pow(self.inv(a), -exponent, self.p)
        return pow(a, exponent, self.p)

    def factorial(self, k: int) -> FieldElement:
        result = 1
        for i in range(2, k + 1):
            result = result * i % self.p
        return result

    def is_zero(self, a: FieldElement) -> bool:
        return a % self.p == 0


def confirmation_prime(p: int, *, above: int = 2) -> int:
    """
    A second odd prime for repeating a rank check

    The prime just below p, or the one just above when that would not
    exceed `above`.
    """
    if p > 5:
        candidate = prevprime(p)
        if candidate > max(above, 2):
            return candidate
    return nextprime(max(p, above))
