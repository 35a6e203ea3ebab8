"""Twisting cubic Hamiltonians by 2-forms ω and bivectors π.

A twist is the time-1 flow of X_w = {w, ·} for w of bidegree (0,2) or
(2,0).  Two independent routes are provided: :func:`twist` runs the
exponential series and :func:`closed_form_twist` assembles each component
from contractions, Schouten-type brackets and linear Hamiltonians.

Tilde powers follow one convention throughout: ``∧^k π̃φ`` is the part of
``exp(X_π) φ`` that has absorbed exactly k copies of π, i.e. X_π^k φ / k!.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, NamedTuple

from .structures import (
    PHI,
    PSI,
    CheckReport,
    StructureTheta,
    decompose_cubic,
    derived_bracket,
)
from .supercore import (
    Bidegree,
    describe_bidegrees,
    DegreeError,
    Family,
    Generator,
    PreconditionError,
    SuperPoly,
    project_bidegree,
    substitute,
    sum_polys,
)
from .symplectic import exp_flow
from .symplectic import poisson_bracket as pb

__all__ = [
    "TwistKind",
    "TwistInput",
    "twist",
    "closed_form_twist",
    "contraction_powers",
    "linear_hamiltonian",
    "mc_residual",
    "TwoWay",
    "TwistedCalculus",
    "twisted_calculus",
    "twisted_jacobi_check",
]

FORM = Bidegree(0, 2)
BIVECTOR = Bidegree(2, 0)


class TwistKind(str, enum.Enum):
    BY_FORM = "by_form"
    BY_BIVECTOR = "by_bivector"


@dataclass(frozen=True)
class TwistInput:
    kind: TwistKind
    generator: SuperPoly

    def __post_init__(self):
        want = FORM if self.kind is TwistKind.BY_FORM else BIVECTOR
        if not self.generator.is_bihomogeneous(want):
            raise DegreeError(f"{self.kind.value} twist needs bidegree {want}, "
                              f"got {describe_bidegrees(self.generator)}")

    @classmethod
    def form(cls, omega: SuperPoly) -> "TwistInput":
        return cls(TwistKind.BY_FORM, omega)

    @classmethod
    def bivector(cls, pi: SuperPoly) -> "TwistInput":
        return cls(TwistKind.BY_BIVECTOR, pi)

    @property
    def space(self):
        return self.generator.space

    @property
    def is_form(self) -> bool:
        return self.kind is TwistKind.BY_FORM

    def __neg__(self) -> "TwistInput":
        return TwistInput(self.kind, -self.generator)

    def scale(self, c) -> "TwistInput":
        return TwistInput(self.kind, self.generator.scale(c))


def twist(T: StructureTheta, w: TwistInput) -> StructureTheta:
    """Θ_w = exp(X_w) Θ, re-split into components."""
    if w.space != T.space:
        raise PreconditionError("twist datum and Θ live in different spaces")
    return decompose_cubic(exp_flow(w.generator, T.total))


# -- contractions -----------------------------------------------------------

def _translation(w: TwistInput) -> Dict[Generator, SuperPoly]:
    """Coordinate images ξ_c ↦ ξ_c - π^{cb}θ_b, or θ_c ↦ θ_c - ω_cb ξ_b."""
    from .gauge import tilde_of

    sp = w.space
    M = tilde_of(w)
    moved, target = (Family.COFIBRE, sp.xi) if w.is_form else (Family.FIBRE, sp.th)
    images = {}
    for c in range(1, sp.r + 1):
        shift = sum_polys(sp, (M[c - 1][b - 1] * target(b) for b in range(1, sp.r + 1)))
        base = sp.th(c) if w.is_form else sp.xi(c)
        images[Generator(moved, c)] = base - shift
    return images


def contraction_powers(carrier: SuperPoly, w: TwistInput, k: int, method: str = "flow") -> SuperPoly:
    """∧^k w̃ applied to φ (bivector twist) or to ψ (form twist).

    ``method="flow"`` computes X_w^k(carrier)/k!; ``method="matrix"``
    substitutes the tilde-matrix translation into k slots of the carrier.
    """
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2 or 3")
    want = PSI if w.is_form else PHI
    if not carrier.is_bihomogeneous(want):
        raise DegreeError(f"carrier must have bidegree {want} for a {w.kind.value} twist")
    if method == "flow":
        out = carrier
        for j in range(1, k + 1):
            out = pb(w.generator, out).scale(Fraction(1, j))
        return out
    if method == "matrix":
        shift = Bidegree(3 - k, k) if w.is_form else Bidegree(k, 3 - k)
        return project_bidegree(substitute(carrier, _translation(w)), shift)
    raise ValueError(f"unknown method {method!r}")


def linear_hamiltonian(space, vector_field: Callable[[SuperPoly], SuperPoly], over: str) -> SuperPoly:
    """h_v for a vector field v on ΠA (``over="A"``) or on ΠA* (``over="A*"``).

    v is sampled on coordinates only: h_v = Σ v(x_i) p_i + Σ v(y_a) y*_a with
    (y, y*) = (ξ, θ) over ΠA and (θ, ξ) over ΠA*.
    """
    if over == "A":
        fibre, conj = space.xi, space.th
    elif over == "A*":
        fibre, conj = space.th, space.xi
    else:
        raise ValueError("over must be 'A' or 'A*'")
    parts = [vector_field(space.x(i)) * space.p(i) for i in range(1, space.n + 1)]
    parts += [vector_field(fibre(a)) * conj(a) for a in range(1, space.r + 1)]
    return sum_polys(space, parts)


def closed_form_twist(T: StructureTheta, w: TwistInput) -> StructureTheta:
    """Component formulas for Θ_w, built without running the series."""
    mu, ga, ph, ps = T.mu, T.gamma, T.phi, T.psi
    sp = T.space
    W = w.generator
    half = Fraction(1, 2)

    def tilde(carrier, k):
        return contraction_powers(carrier, w, k, method="matrix") if carrier else sp.zero()

    if w.is_form:
        # h_{[ω,·]_γ}: the derived bracket of ω with coordinates on ΠA
        h = linear_hamiltonian(sp, lambda f: derived_bracket(W, ga, f), over="A")
        return StructureTheta(
            mu=mu + h + tilde(ps, 2),
            gamma=ga + tilde(ps, 1),
            phi=ph - pb(mu, W) - derived_bracket(W, ga, W).scale(half) + tilde(ps, 3),
            psi=ps,
        )
    h = linear_hamiltonian(sp, lambda f: derived_bracket(W, mu, f), over="A*")
    return StructureTheta(
        mu=mu + tilde(ph, 1),
        gamma=ga + h + tilde(ph, 2),
        phi=ph,
        psi=ps - pb(ga, W) - derived_bracket(W, mu, W).scale(half) + tilde(ph, 3),
    )


def mc_residual(w: TwistInput, T: StructureTheta) -> SuperPoly:
    """LHS - RHS of the twisted Maurer-Cartan equation for w.

    For π: d_γπ + ½[π,π]_μ - ∧³π̃φ (needs ψ = 0); equals -ψ_π.
    For ω: d_μω + ½[ω,ω]_γ - ∧³ω̃ψ (needs φ = 0); equals -φ_ω.
    """
    W = w.generator
    half = Fraction(1, 2)
    if w.is_form:
        if T.phi:
            raise PreconditionError("the 2-form Maurer-Cartan equation needs phi = 0")
        cubic = contraction_powers(T.psi, w, 3) if T.psi else T.space.zero()
        return pb(T.mu, W) + derived_bracket(W, T.gamma, W).scale(half) - cubic
    if T.psi:
        raise PreconditionError("the bivector Maurer-Cartan equation needs psi = 0")
    cubic = contraction_powers(T.phi, w, 3) if T.phi else T.space.zero()
    return pb(T.gamma, W) + derived_bracket(W, T.mu, W).scale(half) - cubic


# -- twisted differentials and brackets --------------------------------------

def _label(F: SuperPoly) -> str:
    from .frontend.printer import print_expression
    return print_expression(F)


class TwoWay(NamedTuple):
    formula: SuperPoly
    derived: SuperPoly

    @property
    def agree(self) -> bool:
        return self.formula == self.derived

    @property
    def value(self) -> SuperPoly:
        if not self.agree:
            raise AssertionError(f"twisted calculus mismatch: {self.formula!r} != {self.derived!r}")
        return self.derived


def _koszul(a: SuperPoly, b: SuperPoly, w: SuperPoly, diff: SuperPoly) -> SuperPoly:
    """L_{w̃a} b - L_{w̃b} a - d(w(a,b)), with L_u = ι_u d + d ι_u and ι_u = {u,·}."""
    def lie(u, F):
        return pb(u, pb(diff, F)) + pb(diff, pb(u, F))

    sharp_a = pb(a, w)
    sharp_b = pb(b, w)
    return lie(sharp_a, b) - lie(sharp_b, a) - pb(diff, pb(sharp_a, b))


class TwistedCalculus:
    """Differentials d_{μ_w}, d_{γ_w} and brackets [·,·]_{μ_w}, [·,·]_{γ_w}.

    Each evaluator returns a :class:`TwoWay`: ``formula`` from the
    deformation formulas, ``derived`` from the twisted Θ itself.
    """

    def __init__(self, T: StructureTheta, w: TwistInput):
        if w.is_form and T.phi:
            raise PreconditionError("2-form twisted calculus needs phi = 0")
        if not w.is_form and T.psi:
            raise PreconditionError("bivector twisted calculus needs psi = 0")
        self.base = T
        self.w = w
        self.twisted = twist(T, w)
        sp = T.space
        carrier = T.psi if w.is_form else T.phi
        self.tilde = {k: contraction_powers(carrier, w, k, method="matrix") if carrier else sp.zero()
                      for k in (1, 2)}

    def d_mu(self, F: SuperPoly) -> TwoWay:
        T, W = self.base, self.w.generator
        if self.w.is_form:
            formula = pb(T.mu, F) + derived_bracket(W, T.gamma, F) + pb(self.tilde[2], F)
        else:
            formula = pb(T.mu, F) + pb(self.tilde[1], F)
        return TwoWay(formula, pb(self.twisted.mu, F))

    def d_gamma(self, F: SuperPoly) -> TwoWay:
        T, W = self.base, self.w.generator
        if self.w.is_form:
            formula = pb(T.gamma, F) + pb(self.tilde[1], F)
        else:
            formula = pb(T.gamma, F) + derived_bracket(W, T.mu, F) + pb(self.tilde[2], F)
        return TwoWay(formula, pb(self.twisted.gamma, F))

    def bracket_mu(self, X: SuperPoly, Y: SuperPoly) -> TwoWay:
        """[X,Y]_{μ_w} on multivector fields."""
        T, W = self.base, self.w.generator
        formula = derived_bracket(X, T.mu, Y)
        if self.w.is_form:
            formula = formula + _koszul(X, Y, W, T.gamma) + derived_bracket(X, self.tilde[2], Y)
        else:
            formula = formula + derived_bracket(X, self.tilde[1], Y)
        return TwoWay(formula, derived_bracket(X, self.twisted.mu, Y))

    def bracket_gamma(self, a: SuperPoly, b: SuperPoly) -> TwoWay:
        """[α,β]_{γ_w} on forms."""
        T, W = self.base, self.w.generator
        formula = derived_bracket(a, T.gamma, b)
        if self.w.is_form:
            formula = formula + derived_bracket(a, self.tilde[1], b)
        else:
            formula = formula + _koszul(a, b, W, T.mu) + derived_bracket(a, self.tilde[2], b)
        return TwoWay(formula, derived_bracket(a, self.twisted.gamma, b))

    def check(self) -> CheckReport:
        """Compare both routes on coordinate functions, θ_a, ξ_a and their pairs."""
        sp = self.base.space
        funcs = [sp.x(i) for i in range(1, sp.n + 1)]
        secs = [sp.th(a) for a in range(1, sp.r + 1)]
        forms = [sp.xi(a) for a in range(1, sp.r + 1)]
        details = {}

        def record(name, tw):
            details[name] = tw.formula - tw.derived

        for F in funcs + secs + forms:
            record(f"d_mu[{_label(F)}]", self.d_mu(F))
            record(f"d_gamma[{_label(F)}]", self.d_gamma(F))
        for X, Y in itertools.combinations_with_replacement(funcs + secs, 2):
            record(f"bracket_mu[{_label(X)},{_label(Y)}]", self.bracket_mu(X, Y))
        for a, b in itertools.combinations_with_replacement(funcs + forms, 2):
            record(f"bracket_gamma[{_label(a)},{_label(b)}]", self.bracket_gamma(a, b))
        return CheckReport.from_residuals({}, details=details)


def twisted_calculus(T: StructureTheta, w: TwistInput) -> TwistedCalculus:
    return TwistedCalculus(T, w)


def twisted_jacobi_check(pi: SuperPoly, T: StructureTheta) -> CheckReport:
    """{{f,g},h} + cyclic = φ(X_f,X_g,X_h) on coordinate triples.

    Here {f,g} = [[f,π],g]_μ, X_f = [f,π]_μ and φ(X,Y,Z) = l₃(X,Y,Z).
    """
    sp = T.space

    def br(f, g):
        return derived_bracket(derived_bracket(f, T.mu, pi), T.mu, g)

    details = {}
    funcs = [sp.x(i) for i in range(1, sp.n + 1)]
    for f, g, h in itertools.combinations(funcs, 3):
        lhs = br(br(f, g), h) + br(br(g, h), f) + br(br(h, f), g)
        Xf, Xg, Xh = (derived_bracket(u, T.mu, pi) for u in (f, g, h))
        rhs = -pb(Xf, pb(Xg, pb(Xh, T.phi)))
        details[f"jacobi[{_label(f)},{_label(g)},{_label(h)}]"] = lhs - rhs
    return CheckReport.from_residuals({}, details=details)
