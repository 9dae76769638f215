"""Exact coefficient rings.

Ships integers, rationals and integers mod n, each a commutative unital
*-ring with the trivial involution.  The interface is small on purpose:
a ring with a nontrivial involution only has to override ``star``.
All arithmetic is exact; no floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction


class Ring:
    """Operations on raw coefficient values (int, Fraction, ...)."""

    name = "ring"

    def coerce(self, value):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def star(self, a):
        # trivial involution; override for rings with a real one
        return a

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def show(self, a) -> str:
        return str(a)

    def __repr__(self):
        return self.name


class IntegerRing(Ring):
    name = "Z"

    def coerce(self, value):
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, Fraction) and value.denominator == 1:
                return int(value)
            raise TypeError(f"not an integer coefficient: {value!r}")
        return value

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b


class RationalRing(Ring):
    name = "Q"

    def coerce(self, value):
        return Fraction(value)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def show(self, a) -> str:
        return str(a)


class ModularRing(Ring):
    """Integers mod n, represented by canonical representatives 0..n-1."""

    def __init__(self, modulus: int):
        if modulus < 2:
            raise ValueError("modulus must be at least 2")
        self.modulus = modulus
        self.name = f"Z/{modulus}"

    def coerce(self, value):
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise TypeError(f"not reducible mod {self.modulus}: {value!r}")
            value = int(value)
        if not isinstance(value, int):
            raise TypeError(f"not an integer coefficient: {value!r}")
        return value % self.modulus

    def zero(self):
        return 0

    def one(self):
        return 1 % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def __eq__(self, other):
        return isinstance(other, ModularRing) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("ModularRing", self.modulus))


ZZ = IntegerRing()
QQ = RationalRing()


def ring_by_name(name: str) -> Ring:
    """Resolve a ring from a CLI-style name: 'int', 'rat' or 'mod:<n>'."""
    if name in ("int", "z", "Z"):
        return ZZ
    if name in ("rat", "q", "Q"):
        return QQ
    if name.startswith("mod:"):
        return ModularRing(int(name[4:]))
    raise ValueError(f"unknown ring {name!r} (expected int, rat or mod:<n>)")
