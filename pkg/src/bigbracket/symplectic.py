"""Canonical even symplectic structure on E: the big bracket and its flows.

The bracket is fixed on generators by ``{p_i, x_j} = δ_ij`` and
``{θ_a, ξ_b} = δ_ab`` (all other pairs vanish) and extended as a graded
biderivation.  It is even, of bidegree (-1,-1), and obeys

* antisymmetry  ``{F,G} = -(-1)^{|F||G|} {G,F}``
* Leibniz       ``{F,GH} = {F,G}H + (-1)^{|F||G|} G{F,H}``
* Jacobi        ``{F,{G,H}} = {{F,G},H} + (-1)^{|F||G|} {G,{F,H}}``

In Darboux form, with right derivatives on the left factor and left
derivatives on the right factor::

    {F,G} = Σ_i  F∂/∂p_i · ∂G/∂x_i  -  F∂/∂x_i · ∂G/∂p_i
          + Σ_a  F∂/∂θ_a · ∂G/∂ξ_a  +  F∂/∂ξ_a · ∂G/∂θ_a
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

from .supercore import (
    Family,
    Generator,
    PreconditionError,
    StructuralError,
    SuperPoly,
    mul,
    partial_derivative,
    right_derivative,
    substitute,
    sum_polys,
)

__all__ = [
    "NonNilpotentError",
    "poisson_bracket",
    "bracket_by_leibniz",
    "exp_flow",
    "HamiltonianFlow",
    "legendre",
    "hamiltonian_vector_field",
]


class NonNilpotentError(PreconditionError):
    """The exponential series of an adjoint action did not terminate."""


def _same_space(F: SuperPoly, G: SuperPoly) -> None:
    if F.space != G.space:
        raise StructuralError(f"mismatched spaces {F.space} and {G.space}")


def _present(F: SuperPoly, family: Family) -> set:
    sp = F.space
    out = set()
    for m in F.terms:
        if family.is_odd:
            bits = m.odd
            s = 0
            while bits:
                if bits & 1:
                    g = sp.odd_generator(s)
                    if g.family is family:
                        out.add(g.index)
                bits >>= 1
                s += 1
        else:
            off = 0 if family is Family.BASE else sp.n
            for i in range(sp.n):
                if m.even[off + i]:
                    out.add(i + 1)
    return out


def poisson_bracket(F: SuperPoly, G: SuperPoly) -> SuperPoly:
    """The big bracket ``{F, G}``."""
    _same_space(F, G)
    if not F or not G:
        return F.space.zero()
    sp = F.space
    pieces = []
    # {p_i, x_i} = 1 and {x_i, p_i} = -1
    for i in _present(F, Family.MOMENTUM) & _present(G, Family.BASE):
        pieces.append(mul(right_derivative(F, Generator(Family.MOMENTUM, i)),
                          partial_derivative(G, Generator(Family.BASE, i))))
    for i in _present(F, Family.BASE) & _present(G, Family.MOMENTUM):
        pieces.append(-mul(right_derivative(F, Generator(Family.BASE, i)),
                           partial_derivative(G, Generator(Family.MOMENTUM, i))))
    # {θ_a, ξ_a} = {ξ_a, θ_a} = 1
    for a in _present(F, Family.COFIBRE) & _present(G, Family.FIBRE):
        pieces.append(mul(right_derivative(F, Generator(Family.COFIBRE, a)),
                          partial_derivative(G, Generator(Family.FIBRE, a))))
    for a in _present(F, Family.FIBRE) & _present(G, Family.COFIBRE):
        pieces.append(mul(right_derivative(F, Generator(Family.FIBRE, a)),
                          partial_derivative(G, Generator(Family.COFIBRE, a))))
    return sum_polys(sp, pieces)


# -- independent route: recursive Leibniz expansion from the generator table --

def _generator_bracket(g: Generator, h: Generator) -> int:
    if g.index != h.index:
        return 0
    table = {
        (Family.MOMENTUM, Family.BASE): 1,
        (Family.BASE, Family.MOMENTUM): -1,
        (Family.COFIBRE, Family.FIBRE): 1,
        (Family.FIBRE, Family.COFIBRE): 1,
    }
    return table.get((g.family, h.family), 0)


def _gen_with_word(sp, g: Generator, word: list) -> SuperPoly:
    # {g, h_1 ... h_l} = Σ_j (-1)^{|g|(|h_1|+...+|h_{j-1}|)} h_1..{g,h_j}..h_l
    out = sp.zero()
    passed = 0
    for j, h in enumerate(word):
        c = _generator_bracket(g, h)
        if c:
            sign = -1 if (g.is_odd and passed & 1) else 1
            out = out + SuperPoly.from_factors(sp, word[:j] + word[j + 1:], sign * c)
        if h.is_odd:
            passed += 1
    return out


def _word_with_word(sp, left: list, right: list) -> SuperPoly:
    if not left:
        return sp.zero()
    rest = left[1:]
    g = left[0]
    B = SuperPoly.from_factors(sp, rest)
    nb = sum(1 for h in rest if h.is_odd) & 1
    ng = sum(1 for h in right if h.is_odd) & 1
    # {gB, G} = g{B,G} + (-1)^{|B||G|} {g,G} B
    first = SuperPoly.generator(sp, g) * _word_with_word(sp, rest, right)
    second = _gen_with_word(sp, g, right) * B
    return first + (-second if nb & ng else second)


def bracket_by_leibniz(F: SuperPoly, G: SuperPoly) -> SuperPoly:
    """Second, derivative-free implementation of the big bracket (test oracle)."""
    _same_space(F, G)
    sp = F.space
    out = sp.zero()
    for m1, c1 in F.terms.items():
        # monomial_factors lists odd generators in canonical order: word == monomial
        w1 = sp.monomial_factors(m1)
        for m2, c2 in G.terms.items():
            w2 = sp.monomial_factors(m2)
            out = out + _word_with_word(sp, w1, w2).scale(c1 * c2)
    return out


# -- flows ------------------------------------------------------------------

def hamiltonian_vector_field(H: SuperPoly):
    """``X_H = {H, ·}`` as a callable."""
    return lambda F: poisson_bracket(H, F)


def exp_flow(H: SuperPoly, F: SuperPoly, max_terms: Optional[int] = None) -> SuperPoly:
    """Pullback of F under the time-1 flow of X_H: ``Σ_k X_H^k F / k!``.

    The series must terminate within (max total weight of F) + 1 applications,
    which it does whenever X_H strictly lowers one grading component, e.g. for
    H of bidegree (0,2) or (2,0).  Otherwise :class:`NonNilpotentError`.
    """
    _same_space(H, F)
    if not H or not F:
        return F
    if H.parity() != 0:
        raise PreconditionError("flow Hamiltonian must be even")
    cap = F.max_weight() + 1 if max_terms is None else max_terms
    result = F
    term = F
    for k in range(1, cap + 1):
        term = poisson_bracket(H, term).scale(Fraction(1, k))
        if not term:
            return result
        result = result + term
    raise NonNilpotentError(f"exp(X_H) series did not terminate after {cap} terms")


@dataclass(frozen=True)
class HamiltonianFlow:
    """Time-1 flow of X_H (``direction=-1`` gives the inverse flow)."""

    hamiltonian: SuperPoly
    direction: int = 1

    def __post_init__(self):
        if self.direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")

    def pullback(self, F: SuperPoly) -> SuperPoly:
        H = self.hamiltonian if self.direction == 1 else -self.hamiltonian
        return exp_flow(H, F)

    __call__ = pullback

    def inverse(self) -> "HamiltonianFlow":
        return HamiltonianFlow(self.hamiltonian, -self.direction)


def legendre(F: SuperPoly) -> SuperPoly:
    """Swap ξ_a and θ_a for every a; an involutive Poisson automorphism."""
    sp = F.space
    images: Dict[Generator, SuperPoly] = {}
    for a in range(1, sp.r + 1):
        images[Generator(Family.FIBRE, a)] = sp.th(a)
        images[Generator(Family.COFIBRE, a)] = sp.xi(a)
    return substitute(F, images)
