"""Exact doubly graded supercommutative polynomials on E = T*ΠA.

Four generator families live over a base of dimension ``n`` and a fibre of
rank ``r``:

======== ======= ========== ======
family   symbol  bidegree   parity
======== ======= ========== ======
BASE     x_i     (0, 0)     even
FIBRE    ξ_a     (0, 1)     odd
COFIBRE  θ_a     (1, 0)     odd
MOMENTUM p_i     (1, 1)     even
======== ======= ========== ======

A monomial stores the exponents of the even generators (x_1..x_n, p_1..p_n)
and a bitmask of the odd generators present.  Odd slots are ordered
ξ_1 < ... < ξ_r < θ_1 < ... < θ_r; a product is brought to canonical form by
sorting odd factors and recording the sign of the sorting permutation.
Coefficients are :class:`fractions.Fraction`, so all arithmetic is exact.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

__all__ = [
    "Family",
    "Generator",
    "GeneratorSpace",
    "Monomial",
    "Bidegree",
    "SuperPoly",
    "BigBracketError",
    "StructuralError",
    "DegreeError",
    "PreconditionError",
    "normalize_monomial",
    "partial_derivative",
    "right_derivative",
    "project_bidegree",
    "split_bidegrees",
    "describe_bidegrees",
    "substitute",
]


class BigBracketError(Exception):
    """Base class for all errors raised by the package."""


class StructuralError(BigBracketError):
    """Malformed input: foreign generator, index out of range, space mismatch."""


class PreconditionError(BigBracketError):
    """An operation was called outside its domain."""


class DegreeError(PreconditionError):
    """An argument does not have the bidegree an operation requires."""


class Family(enum.Enum):
    BASE = "x"
    FIBRE = "xi"
    COFIBRE = "th"
    MOMENTUM = "p"

    @property
    def bidegree(self) -> "Bidegree":
        return _FAMILY_BIDEGREE[self]

    @property
    def is_odd(self) -> bool:
        return self in (Family.FIBRE, Family.COFIBRE)


class Bidegree(NamedTuple):
    horizontal: int
    vertical: int

    @property
    def weight(self) -> int:
        return self.horizontal + self.vertical

    def __add__(self, other):  # type: ignore[override]
        return Bidegree(self.horizontal + other[0], self.vertical + other[1])

    def __sub__(self, other):
        return Bidegree(self.horizontal - other[0], self.vertical - other[1])

    def __str__(self) -> str:
        return f"({self.horizontal},{self.vertical})"


_FAMILY_BIDEGREE = {
    Family.BASE: Bidegree(0, 0),
    Family.FIBRE: Bidegree(0, 1),
    Family.COFIBRE: Bidegree(1, 0),
    Family.MOMENTUM: Bidegree(1, 1),
}


class Generator(NamedTuple):
    family: Family
    index: int  # 1-based

    @property
    def is_odd(self) -> bool:
        return self.family.is_odd

    @property
    def bidegree(self) -> Bidegree:
        return self.family.bidegree

    def __str__(self) -> str:
        return f"{self.family.value}{self.index}"


class Monomial(NamedTuple):
    """Canonical monomial.

    ``even`` holds exponents of x_1..x_n followed by p_1..p_n; ``odd`` is a
    bitmask over the odd slots (ξ_a at bit a-1, θ_a at bit r+a-1).
    """

    even: Tuple[int, ...]
    odd: int


@dataclass(frozen=True)
class GeneratorSpace:
    base_dim: int
    fibre_rank: int

    def __post_init__(self):
        if self.base_dim < 0 or self.fibre_rank < 0:
            raise StructuralError("dimensions must be nonnegative")

    @property
    def n(self) -> int:
        return self.base_dim

    @property
    def r(self) -> int:
        return self.fibre_rank

    # generator constructors -------------------------------------------------
    def x(self, i: int) -> "SuperPoly":
        return SuperPoly.generator(self, Generator(Family.BASE, i))

    def xi(self, a: int) -> "SuperPoly":
        return SuperPoly.generator(self, Generator(Family.FIBRE, a))

    def th(self, a: int) -> "SuperPoly":
        return SuperPoly.generator(self, Generator(Family.COFIBRE, a))

    def p(self, i: int) -> "SuperPoly":
        return SuperPoly.generator(self, Generator(Family.MOMENTUM, i))

    def zero(self) -> "SuperPoly":
        return SuperPoly(self, {})

    def one(self) -> "SuperPoly":
        return SuperPoly.constant(self, 1)

    def generators(self) -> Iterator[Generator]:
        for i in range(1, self.n + 1):
            yield Generator(Family.BASE, i)
        for a in range(1, self.r + 1):
            yield Generator(Family.FIBRE, a)
        for a in range(1, self.r + 1):
            yield Generator(Family.COFIBRE, a)
        for i in range(1, self.n + 1):
            yield Generator(Family.MOMENTUM, i)

    # slot bookkeeping -------------------------------------------------------
    def check(self, g: Generator) -> None:
        bound = self.r if g.family.is_odd else self.n
        if not 1 <= g.index <= bound:
            raise StructuralError(f"generator {g} out of range for space (n={self.n}, r={self.r})")

    def even_slot(self, g: Generator) -> int:
        self.check(g)
        if g.family is Family.BASE:
            return g.index - 1
        return self.n + g.index - 1

    def odd_slot(self, g: Generator) -> int:
        self.check(g)
        if g.family is Family.FIBRE:
            return g.index - 1
        return self.r + g.index - 1

    def odd_generator(self, slot: int) -> Generator:
        if slot < self.r:
            return Generator(Family.FIBRE, slot + 1)
        return Generator(Family.COFIBRE, slot - self.r + 1)

    def even_generator(self, slot: int) -> Generator:
        if slot < self.n:
            return Generator(Family.BASE, slot + 1)
        return Generator(Family.MOMENTUM, slot - self.n + 1)

    def unit_monomial(self) -> Monomial:
        return Monomial((0,) * (2 * self.n), 0)

    def monomial_bidegree(self, m: Monomial) -> Bidegree:
        p = sum(m.even[self.n:])
        low = (1 << self.r) - 1
        nxi = (m.odd & low).bit_count()
        nth = (m.odd >> self.r).bit_count()
        return Bidegree(p + nth, p + nxi)

    def monomial_factors(self, m: Monomial) -> list:
        """Generators of ``m`` in printing order: x, ξ, θ, p."""
        out = []
        for s in range(self.n):
            out.extend([Generator(Family.BASE, s + 1)] * m.even[s])
        bits = m.odd
        s = 0
        while bits:
            if bits & 1:
                out.append(self.odd_generator(s))
            bits >>= 1
            s += 1
        for s in range(self.n):
            out.extend([Generator(Family.MOMENTUM, s + 1)] * m.even[self.n + s])
        return out


def _sign_of_merge(a: int, b: int) -> int:
    """Sign of reordering the odd word (a-factors)(b-factors) into sorted order."""
    inversions = 0
    bits = b
    while bits:
        low = bits & -bits
        inversions += (a >> low.bit_length()).bit_count()
        bits ^= low
    return -1 if inversions & 1 else 1


def _mono_mul(m1: Monomial, m2: Monomial) -> Tuple[Optional[Monomial], int]:
    if m1.odd & m2.odd:
        return None, 0
    sign = _sign_of_merge(m1.odd, m2.odd) if (m1.odd and m2.odd) else 1
    even = tuple(e1 + e2 for e1, e2 in zip(m1.even, m2.even))
    return Monomial(even, m1.odd | m2.odd), sign


def normalize_monomial(space: GeneratorSpace, factors: Sequence[Generator]) -> Tuple[Monomial, int]:
    """Canonical form of a product of generators, with its Koszul sign.

    A repeated odd generator gives ``(unit monomial, 0)``.
    """
    even = [0] * (2 * space.n)
    word = []
    for g in factors:
        if g.family.is_odd:
            word.append(space.odd_slot(g))
        else:
            even[space.even_slot(g)] += 1
    if len(set(word)) != len(word):
        return space.unit_monomial(), 0
    # parity of the sorting permutation = parity of the inversion count
    inversions = sum(1 for i in range(len(word)) for j in range(i + 1, len(word)) if word[i] > word[j])
    mask = 0
    for s in word:
        mask |= 1 << s
    return Monomial(tuple(even), mask), -1 if inversions & 1 else 1


Scalar = Union[int, Fraction]


class SuperPoly:
    """Element of the supercommutative algebra of functions on E.

    Immutable; ``terms`` maps canonical monomials to nonzero Fractions.
    """

    __slots__ = ("space", "terms", "_hash")

    def __init__(self, space: GeneratorSpace, terms: Mapping[Monomial, Fraction]):
        self.space = space
        self.terms: Dict[Monomial, Fraction] = {m: c for m, c in terms.items() if c}
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def constant(cls, space: GeneratorSpace, c: Scalar) -> "SuperPoly":
        return cls(space, {space.unit_monomial(): Fraction(c)})

    @classmethod
    def generator(cls, space: GeneratorSpace, g: Generator) -> "SuperPoly":
        m, s = normalize_monomial(space, [g])
        return cls(space, {m: Fraction(s)})

    @classmethod
    def from_factors(cls, space: GeneratorSpace, factors: Sequence[Generator], coeff: Scalar = 1) -> "SuperPoly":
        m, s = normalize_monomial(space, factors)
        return cls(space, {m: Fraction(coeff) * s})

    # inspection -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def bidegrees(self) -> set:
        return {self.space.monomial_bidegree(m) for m in self.terms}

    def bidegree(self) -> Optional[Bidegree]:
        """The common bidegree of a bihomogeneous element (None for zero)."""
        degs = self.bidegrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise DegreeError(f"element is not bihomogeneous: bidegrees {sorted(degs)}")
        return degs.pop()

    def is_bihomogeneous(self, d: Tuple[int, int]) -> bool:
        return all(self.space.monomial_bidegree(m) == d for m in self.terms)

    def parity(self) -> Optional[int]:
        """0 or 1 for parity-homogeneous elements, None for zero."""
        ps = {m.odd.bit_count() & 1 for m in self.terms}
        if not ps:
            return None
        if len(ps) > 1:
            raise DegreeError("element is not parity-homogeneous")
        return ps.pop()

    def max_weight(self) -> int:
        return max((self.space.monomial_bidegree(m).weight for m in self.terms), default=0)

    def constant_term(self) -> Fraction:
        return self.terms.get(self.space.unit_monomial(), Fraction(0))

    def is_constant(self) -> bool:
        unit = self.space.unit_monomial()
        return all(m == unit for m in self.terms)

    def coefficient(self, factors: Sequence[Generator]) -> Fraction:
        """Coefficient of the given product of generators (sign-adjusted)."""
        m, s = normalize_monomial(self.space, factors)
        if s == 0:
            return Fraction(0)
        return self.terms.get(m, Fraction(0)) * s

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other) -> "SuperPoly":
        if isinstance(other, SuperPoly):
            if other.space != self.space:
                raise StructuralError(f"mismatched spaces {self.space} and {other.space}")
            return other
        if isinstance(other, (int, Rational)):
            return SuperPoly.constant(self.space, Fraction(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return SuperPoly(self.space, terms)

    __radd__ = __add__

    def __neg__(self):
        return SuperPoly(self.space, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "SuperPoly":
        c = Fraction(c)
        if not c:
            return SuperPoly(self.space, {})
        return SuperPoly(self.space, {m: c * k for m, k in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, SuperPoly):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self.space.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Rational)) and not isinstance(other, SuperPoly):
            other = SuperPoly.constant(self.space, other)
        if not isinstance(other, SuperPoly):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        from .frontend.printer import print_expression

        return f"SuperPoly({print_expression(self)!r})"


def mul(F: SuperPoly, G: SuperPoly) -> SuperPoly:
    """Supercommutative product in canonical form."""
    if F.space != G.space:
        raise StructuralError(f"mismatched spaces {F.space} and {G.space}")
    terms: Dict[Monomial, Fraction] = {}
    for m1, c1 in F.terms.items():
        for m2, c2 in G.terms.items():
            m, s = _mono_mul(m1, m2)
            if s:
                terms[m] = terms.get(m, 0) + s * c1 * c2
    return SuperPoly(F.space, terms)


def _derivative(F: SuperPoly, g: Generator, left: bool) -> SuperPoly:
    space = F.space
    terms: Dict[Monomial, Fraction] = {}
    if g.family.is_odd:
        s = space.odd_slot(g)
        bit = 1 << s
        for m, c in F.terms.items():
            if not m.odd & bit:
                continue
            if left:
                passed = (m.odd & (bit - 1)).bit_count()
            else:
                passed = (m.odd >> (s + 1)).bit_count()
            mm = Monomial(m.even, m.odd ^ bit)
            terms[mm] = terms.get(mm, 0) + (-c if passed & 1 else c)
    else:
        s = space.even_slot(g)
        for m, c in F.terms.items():
            e = m.even[s]
            if not e:
                continue
            even = list(m.even)
            even[s] -= 1
            mm = Monomial(tuple(even), m.odd)
            terms[mm] = terms.get(mm, 0) + e * c
    return SuperPoly(space, terms)


def partial_derivative(F: SuperPoly, g: Generator) -> SuperPoly:
    """Left derivative: ∂(g·G)/∂g = G, with a Koszul sign for each odd factor passed."""
    return _derivative(F, g, left=True)


def right_derivative(F: SuperPoly, g: Generator) -> SuperPoly:
    """Right derivative: ∂(G·g)/∂g = G."""
    return _derivative(F, g, left=False)


def project_bidegree(F: SuperPoly, d: Tuple[int, int]) -> SuperPoly:
    d = Bidegree(*d)
    sp = F.space
    return SuperPoly(sp, {m: c for m, c in F.terms.items() if sp.monomial_bidegree(m) == d})


def split_bidegrees(F: SuperPoly) -> Dict[Bidegree, SuperPoly]:
    sp = F.space
    parts: Dict[Bidegree, Dict[Monomial, Fraction]] = {}
    for m, c in F.terms.items():
        parts.setdefault(sp.monomial_bidegree(m), {})[m] = c
    return {d: SuperPoly(sp, t) for d, t in parts.items()}


def describe_bidegrees(F: SuperPoly) -> str:
    """Short text such as ``(1,2), (3,0)`` for error messages."""
    return ", ".join(map(str, sorted(F.bidegrees()))) or "zero"


def substitute(F: SuperPoly, images: Mapping[Generator, SuperPoly]) -> SuperPoly:
    """Apply the algebra homomorphism sending each listed generator to its image.

    Generators not listed are fixed.  Images of odd generators must be odd (and
    of even generators even) for the map to be a homomorphism; this is the
    caller's responsibility.
    """
    space = F.space
    cache: Dict[Tuple[Generator, int], SuperPoly] = {}

    def power(g: Generator, k: int) -> SuperPoly:
        key = (g, k)
        if key not in cache:
            img = images.get(g)
            if img is None:
                img = SuperPoly.generator(space, g)
            cache[key] = img ** k
        return cache[key]

    out = space.zero()
    for m, c in F.terms.items():
        term = SuperPoly.constant(space, c)
        # odd factors in canonical order, then evens (which commute with everything)
        bits, s = m.odd, 0
        while bits:
            if bits & 1:
                term = term * power(space.odd_generator(s), 1)
            bits >>= 1
            s += 1
        for slot, e in enumerate(m.even):
            if e:
                term = term * power(space.even_generator(slot), e)
        out = out + term
    return out


def sum_polys(space: GeneratorSpace, polys: Iterable[SuperPoly]) -> SuperPoly:
    terms: Dict[Monomial, Fraction] = {}
    for P in polys:
        for m, c in P.terms.items():
            terms[m] = terms.get(m, 0) + c
    return SuperPoly(space, terms)
