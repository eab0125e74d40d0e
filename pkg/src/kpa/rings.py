"""Commutative coefficient rings.

Elements are plain Python values: ``int`` for the integers, the residue
rings and the prime fields, :class:`fractions.Fraction` for the rationals,
and :class:`Laurent` for Laurent polynomials.  All arithmetic goes through
a :class:`Ring` object obtained from :func:`ring_ops`.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

from .errors import InvalidRingSpec, ParseError

VAR_NAMES = ("x", "y")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class RingSpec:
    kind: str
    modulus: int | None = None
    base: "RingSpec | None" = None
    nvars: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "mod":
            if self.modulus is None or self.modulus < 2:
                raise InvalidRingSpec(f"IntegersMod requires n >= 2, got {self.modulus}")
        elif self.kind == "gf":
            if self.modulus is None or not _is_prime(self.modulus):
                raise InvalidRingSpec(f"PrimeField requires a prime, got {self.modulus}")
        elif self.kind == "laurent":
            if self.base is None or self.base.kind not in ("int", "rat"):
                raise InvalidRingSpec("LaurentPoly base must be Integers or Rationals")
            if self.nvars not in (1, 2):
                raise InvalidRingSpec(f"LaurentPoly supports 1 or 2 variables, got {self.nvars}")
        elif self.kind not in ("int", "rat"):
            raise InvalidRingSpec(f"unknown ring kind {self.kind!r}")

    @classmethod
    def integers(cls) -> RingSpec:
        return cls("int")

    @classmethod
    def integers_mod(cls, n: int) -> RingSpec:
        return cls("mod", modulus=n)

    @classmethod
    def rationals(cls) -> RingSpec:
        return cls("rat")

    @classmethod
    def prime_field(cls, p: int) -> RingSpec:
        return cls("gf", modulus=p)

    @classmethod
    def laurent(cls, base: RingSpec | None = None, nvars: int = 2) -> RingSpec:
        return cls("laurent", base=base or cls.integers(), nvars=nvars)

    @property
    def is_field(self) -> bool:
        if self.kind in ("rat", "gf"):
            return True
        if self.kind == "mod":
            return _is_prime(self.modulus)
        return False

    @classmethod
    def parse(cls, text: str) -> RingSpec:
        """Parse a CLI ring selector: int, mod:<n>, rat, gf:<p>, laurent:<1|2>[:rat]."""
        t = text.strip()
        try:
            if t == "int":
                return cls.integers()
            if t == "rat":
                return cls.rationals()
            if t.startswith("mod:"):
                return cls.integers_mod(int(t[4:]))
            if t.startswith("gf:"):
                return cls.prime_field(int(t[3:]))
            if t.startswith("laurent:"):
                parts = t.split(":")
                base = cls.parse(parts[2]) if len(parts) > 2 else cls.integers()
                return cls.laurent(base, int(parts[1]))
        except ValueError as exc:
            raise InvalidRingSpec(f"bad ring selector {text!r}") from exc
        raise InvalidRingSpec(f"bad ring selector {text!r}")

    def __str__(self) -> str:
        if self.kind in ("int", "rat"):
            return self.kind
        if self.kind in ("mod", "gf"):
            return f"{self.kind}:{self.modulus}"
        suffix = "" if self.base.kind == "int" else f":{self.base}"
        return f"laurent:{self.nvars}{suffix}"


class Laurent:
    """Immutable Laurent polynomial: exponent vector -> nonzero base coefficient."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict[tuple[int, ...], Any]):
        self.terms = tuple(sorted((e, c) for e, c in terms.items() if c != 0))
        self._hash = hash(self.terms)

    def as_dict(self) -> dict[tuple[int, ...], Any]:
        return dict(self.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Laurent) and self.terms == other.terms

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Laurent({dict(self.terms)!r})"


class Ring:
    """Arithmetic for one :class:`RingSpec`."""

    def __init__(self, spec: RingSpec):
        self.spec = spec

    # the defaults below suit Python numbers; subclasses override as needed
    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        return n

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        return a * b

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero())

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def divides(self, a, b) -> bool:
        """True iff ``b`` lies in the principal ideal generated by ``a``."""
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def fmt(self, a) -> str:
        return str(a)

    def random_element(self, rng: random.Random, bound: int = 9):
        return self.from_int(rng.randint(-bound, bound))

    @property
    def is_field(self) -> bool:
        return self.spec.is_field

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Ring) and other.spec == self.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __repr__(self) -> str:
        return f"<Ring {self.spec}>"


def _parse_int(text: str) -> int:
    t = text.strip()
    if not re.fullmatch(r"[+-]?\d+", t):
        raise ParseError(f"not an integer literal: {text!r}")
    return int(t)


class Integers(Ring):
    def is_unit(self, a) -> bool:
        return a in (1, -1)

    def inverse(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit in Z")
        return a

    def divides(self, a, b) -> bool:
        if a == 0:
            return b == 0
        return b % a == 0

    def parse(self, text: str):
        return _parse_int(text)


class IntegersMod(Ring):
    def __init__(self, spec: RingSpec):
        super().__init__(spec)
        self.n = spec.modulus

    def from_int(self, n: int):
        return n % self.n

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def is_unit(self, a) -> bool:
        return math.gcd(a, self.n) == 1

    def inverse(self, a):
        return pow(a, -1, self.n)

    def divides(self, a, b) -> bool:
        # (a) = (gcd(a, n)) in Z/n
        return b % math.gcd(a, self.n) == 0

    def parse(self, text: str):
        t = text.strip()
        if "/" in t:
            num, den = t.split("/", 1)
            return self.mul(self.from_int(_parse_int(num)), self.inverse(self.from_int(_parse_int(den))))
        return self.from_int(_parse_int(t))

    def random_element(self, rng: random.Random, bound: int = 9):
        return rng.randrange(self.n)


class Rationals(Ring):
    def from_int(self, n: int):
        return Fraction(n)

    def is_unit(self, a) -> bool:
        return a != 0

    def inverse(self, a):
        return 1 / Fraction(a)

    def divides(self, a, b) -> bool:
        return a != 0 or b == 0

    def parse(self, text: str):
        t = text.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", t):
            raise ParseError(f"not a rational literal: {text!r}")
        return Fraction(t)

    def random_element(self, rng: random.Random, bound: int = 9):
        return Fraction(rng.randint(-bound, bound), rng.randint(1, 4))


class PrimeField(IntegersMod):
    def divides(self, a, b) -> bool:
        return a % self.n != 0 or b % self.n == 0


class LaurentRing(Ring):
    """R[x, x^-1] or R[x, x^-1, y, y^-1] over R = Z or Q."""

    def __init__(self, spec: RingSpec):
        super().__init__(spec)
        self.base = ring_ops(spec.base)
        self.nvars = spec.nvars
        self.names = VAR_NAMES[: self.nvars]

    def from_int(self, n: int):
        return self.const(self.base.from_int(n))

    def const(self, c) -> Laurent:
        return Laurent({(0,) * self.nvars: c})

    def monomial(self, exps, c=None) -> Laurent:
        return Laurent({tuple(exps): self.base.one() if c is None else c})

    def gen(self, i: int, power: int = 1) -> Laurent:
        e = [0] * self.nvars
        e[i] = power
        return self.monomial(e)

    def add(self, a, b):
        out = a.as_dict()
        for e, c in b.terms:
            out[e] = out.get(e, 0) + c
        return Laurent(out)

    def neg(self, a):
        return Laurent({e: -c for e, c in a.terms})

    def mul(self, a, b):
        out: dict[tuple[int, ...], Any] = {}
        for e1, c1 in a.terms:
            for e2, c2 in b.terms:
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Laurent(out)

    def is_zero(self, a) -> bool:
        return not a.terms

    def is_unit(self, a) -> bool:
        return len(a.terms) == 1 and self.base.is_unit(a.terms[0][1])

    def inverse(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{self.fmt(a)} is not a unit")
        (e, c), = a.terms
        return Laurent({tuple(-x for x in e): self.base.inverse(c)})

    def divides(self, a, b) -> bool:
        if self.is_zero(a):
            return self.is_zero(b)
        if self.is_zero(b) or self.is_unit(a):
            return True
        import sympy

        gens = sympy.symbols(self.names)

        def to_poly(p: Laurent):
            # shift to a polynomial not divisible by any variable
            low = [min(e[i] for e, _ in p.terms) for i in range(self.nvars)]
            expr = sum(
                sympy.Rational(c) * sympy.Mul(*[g ** (e[i] - low[i]) for i, g in enumerate(gens)])
                for e, c in p.terms
            )
            return sympy.Poly(expr, *gens, domain="QQ")

        q, r = sympy.div(to_poly(b), to_poly(a))
        if not r.is_zero:
            return False
        if self.base.spec.kind == "int":
            return all(c.q == 1 for c in q.coeffs())
        return True

    def fmt(self, a) -> str:
        if not a.terms:
            return "0"
        pieces = []
        for e, c in sorted(a.terms, reverse=True):
            mono = "*".join(
                (n if k == 1 else f"{n}^{k}") for n, k in zip(self.names, e) if k != 0
            )
            if not mono:
                pieces.append(str(c))
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{c}*{mono}")
        return " + ".join(pieces).replace("+ -", "- ")

    def parse(self, text: str):
        """Parse a single product of base constants and powers, e.g. ``3*x^-1*y^2``."""
        t = text.replace(" ", "")
        if not t:
            raise ParseError("empty Laurent literal")
        sign = 1
        if t[0] in "+-":
            sign = -1 if t[0] == "-" else 1
            t = t[1:]
        result = self.from_int(sign)
        for factor in t.split("*"):
            m = re.fullmatch(r"([a-z])(?:\^([+-]?\d+))?", factor)
            if m:
                if m.group(1) not in self.names:
                    raise ParseError(f"unknown variable {m.group(1)!r}")
                power = int(m.group(2)) if m.group(2) else 1
                result = self.mul(result, self.gen(self.names.index(m.group(1)), power))
            else:
                result = self.mul(result, self.const(self.base.parse(factor)))
        return result

    def random_element(self, rng: random.Random, bound: int = 9):
        out = {}
        for _ in range(rng.randint(0, 3)):
            e = tuple(rng.randint(-2, 2) for _ in range(self.nvars))
            out[e] = self.base.random_element(rng, bound)
        return Laurent(out)


@lru_cache(maxsize=None)
def ring_ops(spec: RingSpec) -> Ring:
    """Return the arithmetic object for ``spec``."""
    cls = {
        "int": Integers,
        "mod": IntegersMod,
        "rat": Rationals,
        "gf": PrimeField,
        "laurent": LaurentRing,
    }[spec.kind]
    return cls(spec)


def get_ring(selector: str | RingSpec | Ring) -> Ring:
    if isinstance(selector, Ring):
        return selector
    if isinstance(selector, str):
        selector = RingSpec.parse(selector)
    return ring_ops(selector)
