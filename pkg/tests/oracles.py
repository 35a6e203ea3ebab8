"""Reference implementations for the test suite.

Everything here works on "word polynomials": dicts from a canonical tuple of
generator keys to Fraction.  A key is ``(family, index)`` with family one of
``"x", "xi", "th", "p"``.  Nothing in this module calls the package's
product, derivative, bracket, flow or substitution code; the only contact
point is ``words`` which reads the monomials of a SuperPoly.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Iterable, Tuple

from bigbracket import SuperPoly

Key = Tuple[str, int]
Word = Tuple[Key, ...]
WPoly = Dict[Word, Fraction]

ODD = ("xi", "th")
_RANK = {"x": 0, "xi": 1, "th": 2, "p": 3}


def is_odd(k: Key) -> bool:
    return k[0] in ODD


def sort_key(k: Key):
    return (_RANK[k[0]], k[1])


def canon(word: Iterable[Key]) -> Tuple[int, Word]:
    """Bubble-sort a word, tracking the Koszul sign; sign 0 if an odd repeats."""
    w = list(word)
    sign = 1
    for i in range(len(w)):
        for j in range(len(w) - 1 - i):
            a, b = w[j], w[j + 1]
            if sort_key(a) > sort_key(b):
                w[j], w[j + 1] = b, a
                if is_odd(a) and is_odd(b):
                    sign = -sign
    for a, b in zip(w, w[1:]):
        if a == b and is_odd(a):
            return 0, ()
    return sign, tuple(w)


def clean(P: WPoly) -> WPoly:
    return {w: c for w, c in P.items() if c}


def add(*polys: WPoly) -> WPoly:
    out: WPoly = {}
    for P in polys:
        for w, c in P.items():
            out[w] = out.get(w, Fraction(0)) + c
    return clean(out)


def scale(P: WPoly, c) -> WPoly:
    return clean({w: Fraction(c) * v for w, v in P.items()})


def sub(P: WPoly, Q: WPoly) -> WPoly:
    return add(P, scale(Q, -1))


def mul(P: WPoly, Q: WPoly) -> WPoly:
    out: WPoly = {}
    for (w1, c1), (w2, c2) in itertools.product(P.items(), Q.items()):
        s, w = canon(w1 + w2)
        if s:
            out[w] = out.get(w, Fraction(0)) + s * c1 * c2
    return clean(out)


def gen(family: str, index: int) -> WPoly:
    return {((family, index),): Fraction(1)}


def const(c) -> WPoly:
    return clean({(): Fraction(c)})


def words(F: SuperPoly) -> WPoly:
    sp = F.space
    return {tuple((g.family.value, g.index) for g in sp.monomial_factors(m)): c
            for m, c in F.terms.items()}


def parity(w: Word) -> int:
    return sum(is_odd(k) for k in w) % 2


# -- derivatives and the canonical bracket -----------------------------------

def _remove(w: Word, i: int) -> Word:
    return w[:i] + w[i + 1:]


def left_derivative(P: WPoly, g: Key) -> WPoly:
    out: WPoly = {}
    for w, c in P.items():
        for i, k in enumerate(w):
            if k != g:
                continue
            s = (-1) ** sum(is_odd(u) for u in w[:i]) if is_odd(g) else 1
            rest = _remove(w, i)
            out[rest] = out.get(rest, Fraction(0)) + s * c
            if is_odd(g):
                break
    return clean(out)


def right_derivative(P: WPoly, g: Key) -> WPoly:
    out: WPoly = {}
    for w, c in P.items():
        for i, k in enumerate(w):
            if k != g:
                continue
            s = (-1) ** sum(is_odd(u) for u in w[i + 1:]) if is_odd(g) else 1
            rest = _remove(w, i)
            out[rest] = out.get(rest, Fraction(0)) + s * c
            if is_odd(g):
                break
    return clean(out)


def _generator_bracket(a: Key, b: Key) -> int:
    if a[1] != b[1]:
        return 0
    table = {("p", "x"): 1, ("x", "p"): -1, ("th", "xi"): 1, ("xi", "th"): 1}
    return table.get((a[0], b[0]), 0)


def bracket(P: WPoly, Q: WPoly) -> WPoly:
    """Expand {A, B} on words: move a_i to the right end of A and b_j to the
    left end of B, then contract the pair."""
    out: WPoly = {}
    for (w1, c1), (w2, c2) in itertools.product(P.items(), Q.items()):
        for i, a in enumerate(w1):
            s1 = (-1) ** (is_odd(a) * sum(is_odd(u) for u in w1[i + 1:]))
            for j, b in enumerate(w2):
                g = _generator_bracket(a, b)
                if not g:
                    continue
                s2 = (-1) ** (is_odd(b) * sum(is_odd(u) for u in w2[:j]))
                s, w = canon(_remove(w1, i) + _remove(w2, j))
                if s:
                    out[w] = out.get(w, Fraction(0)) + s * s1 * s2 * g * c1 * c2
    return clean(out)


# -- classical calculus on multivectors and forms ------------------------------

def schouten(P: WPoly, Q: WPoly, n: int) -> WPoly:
    """Schouten bracket with θ_i read as ∂/∂x_i:
    [P,Q] = Σ P∂/∂θ_i · ∂Q/∂x_i − P∂/∂x_i · ∂Q/∂θ_i."""
    terms = []
    for i in range(1, n + 1):
        terms.append(mul(right_derivative(P, ("th", i)), left_derivative(Q, ("x", i))))
        terms.append(scale(mul(right_derivative(P, ("x", i)), left_derivative(Q, ("th", i))), -1))
    return add(*terms)


def de_rham(F: WPoly, n: int) -> WPoly:
    """Exterior derivative of a form in (x, ξ): d = Σ ξ_i ∂/∂x_i."""
    return add(*(mul(gen("xi", i), left_derivative(F, ("x", i))) for i in range(1, n + 1)))


def vector_field_action(X: WPoly, f: WPoly, n: int) -> WPoly:
    """X(f) for X = Σ X^i θ_i and f a function of x."""
    return add(*(mul(left_derivative(X, ("th", i)), left_derivative(f, ("x", i)))
                 for i in range(1, n + 1)))


# -- coefficient matrices ---------------------------------------------------------

def coefficient_matrix(P: WPoly, family: str, r: int):
    """Antisymmetric coefficient matrix M with P = ½ Σ M_ab g_a g_b, entries
    word polynomials in x."""
    M = [[{} for _ in range(r)] for _ in range(r)]
    for w, c in P.items():
        odd = [k for k in w if is_odd(k)]
        assert len(odd) == 2 and all(k[0] == family for k in odd), w
        a, b = odd[0][1], odd[1][1]
        base = tuple(k for k in w if not is_odd(k))
        M[a - 1][b - 1] = add(M[a - 1][b - 1], {base: c})
        M[b - 1][a - 1] = add(M[b - 1][a - 1], {base: -c})
    return M


def translate(P: WPoly, family: str, images: Dict[int, WPoly]) -> WPoly:
    """Substitute ``family_a -> images[a]`` in every word (left to right)."""
    out: WPoly = {}
    for w, c in P.items():
        acc = const(c)
        for k in w:
            factor = images.get(k[1], gen(*k)) if k[0] == family else gen(*k)
            acc = mul(acc, factor)
        out = add(out, acc)
    return out


def count(w: Word, family: str) -> int:
    return sum(1 for k in w if k[0] == family)


def project_count(P: WPoly, family: str, k: int) -> WPoly:
    return {w: c for w, c in P.items() if count(w, family) == k}


def bivector_contraction(phi: WPoly, pi: WPoly, r: int, k: int) -> WPoly:
    """∧^k π̃ φ by index contraction: ξ_c ↦ ξ_c − Σ_b π^{cb} θ_b, keep k θ's."""
    P = coefficient_matrix(pi, "th", r)
    images = {c: add(gen("xi", c), *(scale(mul(P[c - 1][b - 1], gen("th", b)), -1)
                                     for b in range(1, r + 1)))
              for c in range(1, r + 1)}
    return project_count(translate(phi, "xi", images), "th", k)


def form_contraction(psi: WPoly, omega: WPoly, r: int, k: int) -> WPoly:
    """∧^k ω̃ ψ: θ_c ↦ θ_c − Σ_b ω_cb ξ_b, keep k ξ's."""
    W = coefficient_matrix(omega, "xi", r)
    images = {c: add(gen("th", c), *(scale(mul(W[c - 1][b - 1], gen("xi", b)), -1)
                                     for b in range(1, r + 1)))
              for c in range(1, r + 1)}
    return project_count(translate(psi, "th", images), "xi", k)


# -- sl(2) ---------------------------------------------------------------------------

# basis order (h, e, f) = (1, 2, 3)
SL2_BRACKETS = {(1, 2): {2: 2}, (1, 3): {3: -2}, (2, 3): {1: 1}}


def sl2_bracket(a: int, b: int) -> Dict[int, int]:
    if a == b:
        return {}
    if (a, b) in SL2_BRACKETS:
        return dict(SL2_BRACKETS[(a, b)])
    return {k: -v for k, v in SL2_BRACKETS[(b, a)].items()}


def sl2_bracket_vec(u: Dict[int, int], v: Dict[int, int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for a, ca in u.items():
        for b, cb in v.items():
            for k, ck in sl2_bracket(a, b).items():
                out[k] = out.get(k, 0) + ca * cb * ck
    return {k: c for k, c in out.items() if c}
