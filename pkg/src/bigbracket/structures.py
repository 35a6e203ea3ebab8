"""Cubic Hamiltonians Θ = μ + γ + φ + ψ and the structures they encode.

Multivector fields (sections of ∧A) are functions of (x, θ); differential
forms (sections of ∧A*) are functions of (x, ξ).  Everything is a
:class:`SuperPoly`; pullback notation is suppressed throughout.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Union

from .supercore import (
    Bidegree,
    describe_bidegrees,
    DegreeError,
    GeneratorSpace,
    PreconditionError,
    StructuralError,
    SuperPoly,
    split_bidegrees,
)
from .symplectic import poisson_bracket as pb

__all__ = [
    "MU",
    "GAMMA",
    "PHI",
    "PSI",
    "Classification",
    "StructureTheta",
    "CheckReport",
    "decompose_cubic",
    "master_residual",
    "classify",
    "derived_bracket",
    "differential_of",
    "koszul_bracket",
    "LInfinityBrackets",
    "linfty_brackets",
    "quasi_gerstenhaber_check",
    "mc_structure_equation",
    "derham",
]

MU = Bidegree(1, 2)
GAMMA = Bidegree(2, 1)
PHI = Bidegree(0, 3)
PSI = Bidegree(3, 0)
_DROP = Bidegree(1, 1)


class Classification(str, enum.Enum):
    NONE = "none"
    LIE_ALGEBROID_A = "lie_algebroid_A"
    LIE_ALGEBROID_ASTAR = "lie_algebroid_Astar"
    LIE_BIALGEBROID = "lie_bialgebroid"
    QUASI_A = "quasi_lie_bialgebroid_A"
    QUASI_ASTAR = "quasi_lie_bialgebroid_Astar"
    PROTO = "proto_bialgebroid"

    def __str__(self) -> str:
        return self.value


def _require(F: SuperPoly, d: Bidegree, what: str) -> None:
    if not F.is_bihomogeneous(d):
        raise DegreeError(f"{what} must have bidegree {d}, got {describe_bidegrees(F)}")


@dataclass(frozen=True)
class StructureTheta:
    mu: SuperPoly
    gamma: SuperPoly
    phi: SuperPoly
    psi: SuperPoly

    def __post_init__(self):
        sp = self.mu.space
        for name, F, d in self.named():
            if F.space != sp:
                raise StructuralError("components live in different spaces")
            _require(F, d, name)

    def named(self):
        return (("mu", self.mu, MU), ("gamma", self.gamma, GAMMA),
                ("phi", self.phi, PHI), ("psi", self.psi, PSI))

    @classmethod
    def build(cls, space: GeneratorSpace, mu=None, gamma=None, phi=None, psi=None) -> "StructureTheta":
        z = space.zero()
        return cls(mu if mu is not None else z, gamma if gamma is not None else z,
                   phi if phi is not None else z, psi if psi is not None else z)

    @property
    def space(self) -> GeneratorSpace:
        return self.mu.space

    @property
    def total(self) -> SuperPoly:
        return self.mu + self.gamma + self.phi + self.psi

    def replace(self, **changes) -> "StructureTheta":
        parts = dict(mu=self.mu, gamma=self.gamma, phi=self.phi, psi=self.psi)
        parts.update(changes)
        return StructureTheta(**parts)


@dataclass
class CheckReport:
    """Verdict plus residual polynomials.

    ``residuals`` are keyed by the bidegree they live in.  ``details`` holds
    named residuals for checks whose natural keys are relations rather than
    bidegrees.  The verdict is true iff every residual vanishes.
    """

    verdict: bool
    residuals: Dict[Bidegree, SuperPoly]
    classification: Optional[Classification] = None
    details: Dict[str, SuperPoly] = field(default_factory=dict)

    @classmethod
    def from_residuals(cls, residuals, classification=None, details=None) -> "CheckReport":
        details = details or {}
        ok = all(not R for R in residuals.values()) and all(not R for R in details.values())
        return cls(ok, dict(residuals), classification, dict(details))


def _theta(T: Union[StructureTheta, SuperPoly]) -> SuperPoly:
    return T.total if isinstance(T, StructureTheta) else T


def derham(space: GeneratorSpace) -> SuperPoly:
    """μ = Σ_i ξ_i p_i, the Hamiltonian of the de Rham vector field (needs n = r)."""
    if space.n != space.r:
        raise PreconditionError("derham requires base dimension == fibre rank")
    out = space.zero()
    for i in range(1, space.n + 1):
        out = out + space.xi(i) * space.p(i)
    return out


def decompose_cubic(T: SuperPoly) -> StructureTheta:
    """Split a total-weight-3 element into its (μ, γ, φ, ψ) components."""
    parts = split_bidegrees(T)
    bad = [d for d in parts if d.weight != 3]
    if bad:
        raise DegreeError(f"not cubic: components of bidegree {sorted(bad)}")
    z = T.space.zero()
    return StructureTheta(parts.get(MU, z), parts.get(GAMMA, z), parts.get(PHI, z), parts.get(PSI, z))


def _master_equations(T: StructureTheta):
    mu, ga, ph, ps = T.mu, T.gamma, T.phi, T.psi
    half = Fraction(1, 2)
    return [
        (MU + MU - _DROP, pb(mu, mu).scale(half) + pb(ga, ph)),
        (GAMMA + GAMMA - _DROP, pb(ga, ga).scale(half) + pb(mu, ps)),
        (MU + GAMMA - _DROP, pb(mu, ga) + pb(ph, ps)),
        (MU + PHI - _DROP, pb(mu, ph)),
        (GAMMA + PSI - _DROP, pb(ga, ps)),
    ]


def master_residual(T: StructureTheta) -> CheckReport:
    """Bidegree components of ½{Θ,Θ}: the five proto-bialgebroid equations."""
    residuals = {d: R for d, R in _master_equations(T)}
    return CheckReport.from_residuals(residuals)


def classify(T: StructureTheta) -> CheckReport:
    """Name the strongest structure Θ defines."""
    report = master_residual(T)
    C = Classification
    if report.verdict:
        if not T.phi and not T.psi:
            kind = C.LIE_BIALGEBROID
        elif not T.psi:
            kind = C.QUASI_A
        elif not T.phi:
            kind = C.QUASI_ASTAR
        else:
            kind = C.PROTO
    # a zero component is a Lie algebroid only vacuously; it names nothing
    elif T.mu and not pb(T.mu, T.mu):
        kind = C.LIE_ALGEBROID_A
    elif T.gamma and not pb(T.gamma, T.gamma):
        kind = C.LIE_ALGEBROID_ASTAR
    else:
        kind = C.NONE
    report.classification = kind
    return report


def derived_bracket(X: SuperPoly, T: Union[StructureTheta, SuperPoly], Y: SuperPoly) -> SuperPoly:
    """``{{X, Θ}, Y}``."""
    return pb(pb(X, _theta(T)), Y)


def differential_of(T: Union[StructureTheta, SuperPoly], F: SuperPoly, component: str = "theta") -> SuperPoly:
    """``{H, F}`` with H the full Θ (``"theta"``), μ (``"mu"``) or γ (``"gamma"``)."""
    if component == "theta":
        H = _theta(T)
    elif component in ("mu", "gamma", "phi", "psi"):
        if not isinstance(T, StructureTheta):
            raise PreconditionError("component selection needs a StructureTheta")
        H = getattr(T, component)
    else:
        raise ValueError(f"unknown component {component!r}")
    return pb(H, F)


def contract(X: SuperPoly, F: SuperPoly) -> SuperPoly:
    """ι_X F for a multivector X (functions of x, θ) acting on a form F."""
    return pb(X, F)


def lie_derivative(X: SuperPoly, F: SuperPoly, mu: SuperPoly) -> SuperPoly:
    """L^μ_X = ι_X d_μ + d_μ ι_X."""
    return pb(X, pb(mu, F)) + pb(mu, pb(X, F))


def koszul_bracket(alpha: SuperPoly, beta: SuperPoly, pi: SuperPoly, mu: SuperPoly) -> SuperPoly:
    """[α,β]_{μ,π} = L^μ_{π̃α}β − L^μ_{π̃β}α − d_μ(π(α,β)) for 1-forms α, β."""
    _require(alpha, Bidegree(0, 1), "alpha")
    _require(beta, Bidegree(0, 1), "beta")
    _require(pi, Bidegree(2, 0), "pi")
    _require(mu, MU, "mu")
    sharp_a = pb(alpha, pi)  # π̃α
    sharp_b = pb(beta, pi)
    pairing = pb(sharp_a, beta)  # π(α, β)
    return lie_derivative(sharp_a, beta, mu) - lie_derivative(sharp_b, alpha, mu) - pb(mu, pairing)


@dataclass(frozen=True)
class LInfinityBrackets:
    """l₁ = d_γ, l₂ = [·,·]_μ and l₃ = −{·,{·,{·,φ}}} on multivector fields."""

    theta: StructureTheta

    def l1(self, F: SuperPoly) -> SuperPoly:
        return pb(self.theta.gamma, F)

    def l2(self, F: SuperPoly, G: SuperPoly) -> SuperPoly:
        return pb(pb(F, self.theta.mu), G)

    def l3(self, F: SuperPoly, G: SuperPoly, H: SuperPoly) -> SuperPoly:
        return -pb(F, pb(G, pb(H, self.theta.phi)))


def linfty_brackets(T: StructureTheta) -> LInfinityBrackets:
    return LInfinityBrackets(T)


def _label(F: SuperPoly) -> str:
    from .frontend.printer import print_expression
    return print_expression(F)


def quasi_gerstenhaber_check(T: StructureTheta) -> CheckReport:
    """The relations unravelling {Θ,Θ} = 0 for ψ = 0.

    Evaluated on the basis sections θ_a and test functions x_i; every defect
    is tensorial (or a derivation), so this suffices and the verdict agrees
    with the master equation.  In bracket form, with ``l2 = [·,·]_μ``,
    ``l1 = d_γ``, ``l3`` as in :class:`LInfinityBrackets` and
    ``φ(X,Y) = {Y,{X,φ}}``::

        l1 l1 F = 0                                      (differential)
        l1[X,Y] = [l1X,Y] + (-1)^{|X|+1} [X,l1Y]         (derivation)
        [[X,Y],f] = [X,[Y,f]] - [Y,[X,f]] + {{φ(X,Y),γ},f}
        ΣJ(X,Y,Z) = l1 l3(X,Y,Z) - l3(l1X,Y,Z) + l3(X,l1Y,Z) - l3(X,Y,l1Z)

    and the coherence combination of l2 and l3 over four sections, whose
    value is exactly ``{W,{Z,{Y,{X,{μ,φ}}}}}``.
    """
    if T.psi:
        raise PreconditionError("quasi-Gerstenhaber relations need psi = 0")
    sp = T.space
    L = linfty_brackets(T)
    l1, l2, l3 = L.l1, L.l2, L.l3
    secs = [sp.th(a) for a in range(1, sp.r + 1)]
    funcs = [sp.x(i) for i in range(1, sp.n + 1)]
    details: Dict[str, SuperPoly] = {}

    for F in funcs + secs:
        details[f"differential[{_label(F)}]"] = l1(l1(F))

    for X, Y in itertools.combinations_with_replacement(funcs + secs, 2):
        sign = -1 if X.parity() == 0 else 1
        defect = l1(l2(X, Y)) - l2(l1(X), Y) - sign * l2(X, l1(Y))
        details[f"derivation[{_label(X)},{_label(Y)}]"] = defect

    for X, Y in itertools.combinations(secs, 2):
        phi_xy = pb(Y, pb(X, T.phi))
        for f in funcs:
            lhs = l2(l2(X, Y), f)
            rhs = l2(X, l2(Y, f)) - l2(Y, l2(X, f)) + pb(pb(phi_xy, T.gamma), f)
            details[f"anchor[{_label(X)},{_label(Y)};{_label(f)}]"] = lhs - rhs

    for X, Y, Z in itertools.combinations(secs, 3):
        lhs = l2(l2(X, Y), Z) + l2(l2(Y, Z), X) + l2(l2(Z, X), Y)
        rhs = l1(l3(X, Y, Z)) - l3(l1(X), Y, Z) + l3(X, l1(Y), Z) - l3(X, Y, l1(Z))
        details[f"jacobiator[{_label(X)},{_label(Y)},{_label(Z)}]"] = lhs - rhs

    for X, Y, Z, W in itertools.combinations(secs, 4):
        first = l2(l3(X, Y, Z), W) - l2(l3(X, Y, W), Z) + l2(l3(X, Z, W), Y) - l2(l3(Y, Z, W), X)
        second = (l3(l2(X, Y), Z, W) - l3(l2(X, Z), Y, W) + l3(l2(X, W), Y, Z)
                  + l3(l2(Y, Z), X, W) - l3(l2(Y, W), X, Z) + l3(l2(Z, W), X, Y))
        names = ",".join(_label(s) for s in (X, Y, Z, W))
        details[f"coherence[{names}]"] = first - second

    return CheckReport.from_residuals({}, details=details)


def mc_structure_equation(pi: SuperPoly, T: StructureTheta) -> SuperPoly:
    """dπ + ½[π,π] + ⅙[π,π,π] in the L∞ algebra of multivector fields."""
    _require(pi, Bidegree(2, 0), "pi")
    if T.psi:
        raise PreconditionError("the L-infinity structure needs psi = 0")
    L = linfty_brackets(T)
    return L.l1(pi) + L.l2(pi, pi).scale(Fraction(1, 2)) + L.l3(pi, pi, pi).scale(Fraction(1, 6))
