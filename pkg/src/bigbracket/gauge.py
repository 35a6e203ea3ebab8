"""Quadratic Hamiltonians, tilde matrices, τ-actions and gauge checks.

Matrices are indexed from 0 and hold coefficient-ring elements (SuperPolys
in x only).  Under ω = ½ω_ab ξ_aξ_b and π = ½π^{ab} θ_aθ_b the tilde matrix of
ω is (ω_ab) and that of π is (π^{ab}); composites such as T(π,ω) = 1 + π̃ω̃ are
ordinary matrix products.

A constant invertible g ∈ GL(r) acts on functions by the pullback
ξ ↦ g^{-1}ξ, θ ↦ g^t θ, the canonical lift of the bundle automorphism g.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence

from .structures import CheckReport, StructureTheta, decompose_cubic, derham
from .supercore import (
    Bidegree,
    describe_bidegrees,
    DegreeError,
    Family,
    Generator,
    PreconditionError,
    SuperPoly,
    split_bidegrees,
    substitute,
    sum_polys,
)
from .symplectic import exp_flow
from .symplectic import poisson_bracket as pb
from .twisting import TwistInput, TwistKind, mc_residual, twist

__all__ = [
    "DomainError",
    "QuadraticHamiltonian",
    "TildeMatrix",
    "tilde_of",
    "endo_hamiltonian",
    "endo_matrix",
    "Transition",
    "transition",
    "tau_actions",
    "infinitesimal_action",
    "gauge_pullback",
    "factorization_check",
    "GaugeResult",
    "gauge_equivalence",
    "gauge_equivalence_check",
]


class DomainError(PreconditionError):
    """A local group operation was requested outside its domain."""


FORM, ENDO, BIVECTOR = Bidegree(0, 2), Bidegree(1, 1), Bidegree(2, 0)


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """An element of C² = C^{0,2} ⊕ C^{1,1} ⊕ C^{2,0}."""

    form_part: SuperPoly
    endo_part: SuperPoly
    bivector_part: SuperPoly

    def __post_init__(self):
        for F, d in ((self.form_part, FORM), (self.endo_part, ENDO), (self.bivector_part, BIVECTOR)):
            if not F.is_bihomogeneous(d):
                raise DegreeError(f"part must have bidegree {d}, got {describe_bidegrees(F)}")

    @classmethod
    def split(cls, H: SuperPoly) -> "QuadraticHamiltonian":
        parts = split_bidegrees(H)
        bad = [d for d in parts if d.weight != 2]
        if bad:
            raise DegreeError(f"not quadratic: components {sorted(bad)}")
        z = H.space.zero()
        return cls(parts.get(FORM, z), parts.get(ENDO, z), parts.get(BIVECTOR, z))

    @property
    def total(self) -> SuperPoly:
        return self.form_part + self.endo_part + self.bivector_part

    def bracket(self, other: "QuadraticHamiltonian") -> "QuadraticHamiltonian":
        return QuadraticHamiltonian.split(pb(self.total, other.total))


class TildeMatrix:
    """Square matrix over the coefficient ring, tagged with its variance.

    ``variance`` is ``"form"`` (A → A*), ``"bivector"`` (A* → A) or
    ``"endo"`` for composites.
    """

    __slots__ = ("space", "rows", "variance")

    def __init__(self, space, rows: Sequence[Sequence], variance: str = "endo"):
        if variance not in ("form", "bivector", "endo"):
            raise ValueError(f"unknown variance {variance!r}")
        r = len(rows)
        if any(len(row) != r for row in rows):
            raise ValueError("matrix must be square")
        self.space = space
        self.rows = tuple(tuple(_ring(space, e) for e in row) for row in rows)
        self.variance = variance
        if variance != "endo" and not self.is_antisymmetric():
            raise ValueError(f"{variance} matrix must be antisymmetric")

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    @classmethod
    def identity(cls, space, r: Optional[int] = None) -> "TildeMatrix":
        r = space.r if r is None else r
        return cls(space, [[1 if i == j else 0 for j in range(r)] for i in range(r)])

    def _new(self, rows, variance="endo"):
        return TildeMatrix(self.space, rows, variance)

    def __add__(self, other: "TildeMatrix") -> "TildeMatrix":
        var = self.variance if self.variance == other.variance else "endo"
        return self._new([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], var)

    def __neg__(self) -> "TildeMatrix":
        return self._new([[-a for a in row] for row in self.rows], self.variance)

    def __sub__(self, other: "TildeMatrix") -> "TildeMatrix":
        return self + (-other)

    def __matmul__(self, other: "TildeMatrix") -> "TildeMatrix":
        cols = list(zip(*other.rows))
        return self._new([[sum_polys(self.space, (a * b for a, b in zip(row, col))) for col in cols]
                          for row in self.rows])

    def scale(self, c) -> "TildeMatrix":
        return self._new([[a.scale(c) for a in row] for row in self.rows], self.variance)

    def transpose(self) -> "TildeMatrix":
        return self._new([list(col) for col in zip(*self.rows)])

    def as_endo(self) -> "TildeMatrix":
        return self._new(self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, TildeMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(repr(e) for e in row) for row in self.rows)
        return f"TildeMatrix[{self.variance}]({body})"

    def is_antisymmetric(self) -> bool:
        n = self.size
        return all(self.rows[i][j] == -self.rows[j][i] for i in range(n) for j in range(n))

    def is_constant(self) -> bool:
        return all(e.is_constant() for row in self.rows for e in row)

    def _minor(self, i: int, j: int) -> "TildeMatrix":
        return self._new([row[:j] + row[j + 1:] for k, row in enumerate(self.rows) if k != i])

    def det(self) -> SuperPoly:
        """Cofactor expansion along the first row; fine for the ranks used here."""
        n = self.size
        if n == 0:
            return self.space.one()
        if n == 1:
            return self.rows[0][0]
        terms = []
        for j, a in enumerate(self.rows[0]):
            if a:
                c = a * self._minor(0, j).det()
                terms.append(-c if j % 2 else c)
        return sum_polys(self.space, terms)

    def adjugate(self) -> "TildeMatrix":
        n = self.size
        if n == 1:
            return self._new([[1]])
        cof = [[self._minor(i, j).det().scale(-1 if (i + j) % 2 else 1) for j in range(n)] for i in range(n)]
        return self._new([list(col) for col in zip(*cof)])

    def is_invertible(self) -> bool:
        """Invertible over the polynomial ring: det is a nonzero constant."""
        d = self.det()
        return d.is_constant() and d.constant_term() != 0

    def inverse(self) -> "TildeMatrix":
        d = self.det()
        if not (d.is_constant() and d.constant_term() != 0):
            raise DomainError("matrix is not invertible over the coefficient ring")
        return self.adjugate().scale(Fraction(1) / d.constant_term())

    def evaluate_at(self, point: Sequence) -> List[List[Fraction]]:
        """Numeric values at x = point (exploration only)."""
        sp = self.space
        images = {Generator(Family.BASE, i + 1): SuperPoly.constant(sp, Fraction(v)) for i, v in enumerate(point)}
        return [[substitute(e, images).constant_term() for e in row] for row in self.rows]

    def to_twist(self) -> TwistInput:
        """Reassemble ½M_ab y_a y_b with y = ξ (form) or θ (bivector)."""
        if self.variance == "endo":
            raise ValueError("only form or bivector matrices reassemble to twist data")
        sp = self.space
        gen = sp.xi if self.variance == "form" else sp.th
        terms = [self.rows[a][b] * gen(a + 1) * gen(b + 1)
                 for a, b in itertools.combinations(range(self.size), 2) if self.rows[a][b]]
        element = sum_polys(sp, terms)
        return TwistInput.form(element) if self.variance == "form" else TwistInput.bivector(element)


def _ring(space, e) -> SuperPoly:
    if isinstance(e, SuperPoly):
        if any(m.odd or any(e_ for e_ in m.even[space.n:]) for m in e.terms):
            raise ValueError("tilde-matrix entries must be functions of x only")
        return e
    return SuperPoly.constant(space, e)


def tilde_of(w: TwistInput) -> TildeMatrix:
    """ω_ab (or π^{ab}) read off as the coefficient of the ordered pair a<b."""
    sp = w.space
    r = sp.r
    rows = [[sp.zero() for _ in range(r)] for _ in range(r)]
    by_pair = {}
    for m, c in w.generator.terms.items():
        odd = [g for g in sp.monomial_factors(m) if g.is_odd]
        a, b = odd[0].index - 1, odd[1].index - 1
        coeff = SuperPoly(sp, {m._replace(odd=0): c})
        by_pair[(a, b)] = by_pair.get((a, b), sp.zero()) + coeff
    for (a, b), v in by_pair.items():
        rows[a][b] = v
        rows[b][a] = -v
    return TildeMatrix(sp, rows, "form" if w.is_form else "bivector")


def endo_hamiltonian(M: TildeMatrix) -> SuperPoly:
    """The (1,1) Hamiltonian Σ M_ab θ_a ξ_b; its flow is the pullback by exp(M)."""
    sp = M.space
    return sum_polys(sp, (M[a][b] * sp.th(a + 1) * sp.xi(b + 1)
                          for a in range(M.size) for b in range(M.size) if M[a][b]))


def endo_matrix(F: SuperPoly) -> TildeMatrix:
    """Inverse of :func:`endo_hamiltonian` on bidegree (1,1) elements without p."""
    sp = F.space
    if not F.is_bihomogeneous(ENDO):
        raise DegreeError("endomorphism part must have bidegree (1,1)")
    rows = [[sp.zero() for _ in range(sp.r)] for _ in range(sp.r)]
    for m, c in F.terms.items():
        odd = [g for g in sp.monomial_factors(m) if g.is_odd]
        if len(odd) != 2:
            raise DegreeError("endomorphism part must not involve momenta")
        xi, th = odd  # canonical order puts ξ first: ξ_b θ_a = -θ_a ξ_b
        coeff = SuperPoly(sp, {m._replace(odd=0): -c})
        rows[th.index - 1][xi.index - 1] = rows[th.index - 1][xi.index - 1] + coeff
    return TildeMatrix(sp, rows)


class Transition(NamedTuple):
    matrix: TildeMatrix
    invertible: bool
    inverse: Optional[TildeMatrix]


def _check_kinds(pi: TwistInput, omega: TwistInput) -> None:
    if pi.kind is not TwistKind.BY_BIVECTOR or omega.kind is not TwistKind.BY_FORM:
        raise PreconditionError("expected a bivector and a 2-form")
    if pi.space != omega.space:
        raise PreconditionError("bivector and 2-form live in different spaces")


def transition(pi: TwistInput, omega: TwistInput) -> Transition:
    """T(π,ω) = 1 + π̃ω̃ with its ring-level inverse when it exists."""
    _check_kinds(pi, omega)
    P, W = tilde_of(pi), tilde_of(omega)
    T = TildeMatrix.identity(pi.space) + P @ W
    if T.is_invertible():
        return Transition(T, True, T.inverse())
    return Transition(T, False, None)


def tau_actions(pi: TwistInput, omega: TwistInput):
    """(τ_π ω, τ_ω π) with tilde matrices ω̃(1+π̃ω̃)^{-1} and π̃(1+ω̃π̃)^{-1}."""
    tr = transition(pi, omega)
    if not tr.invertible:
        raise DomainError("1 + π̃ω̃ is not invertible; the τ-action is undefined here")
    P, W = tilde_of(pi), tilde_of(omega)
    # (1+ω̃π̃) = (1+π̃ω̃)^t for antisymmetric π̃, ω̃
    inv_t = tr.inverse.transpose()
    tpo = TildeMatrix(pi.space, (W @ tr.inverse).rows, "form")
    top = TildeMatrix(pi.space, (P @ inv_t).rows, "bivector")
    return tpo.to_twist(), top.to_twist()


def infinitesimal_action(pi: TwistInput, omega: TwistInput) -> TwistInput:
    """δ_ω π, the bivector with tilde matrix -π̃ω̃π̃."""
    _check_kinds(pi, omega)
    P, W = tilde_of(pi), tilde_of(omega)
    return TildeMatrix(pi.space, (-(P @ W @ P)).rows, "bivector").to_twist()


def gauge_pullback(g: TildeMatrix, F: SuperPoly) -> SuperPoly:
    """Pullback of F by a constant g ∈ GL(r): ξ ↦ g^{-1}ξ, θ ↦ g^t θ."""
    if not g.is_constant():
        raise PreconditionError("gauge pullback needs a constant matrix")
    sp = F.space
    ginv = g.inverse()
    images = {}
    for c in range(1, sp.r + 1):
        images[Generator(Family.FIBRE, c)] = sum_polys(
            sp, (ginv[c - 1][d - 1] * sp.xi(d) for d in range(1, sp.r + 1)))
        images[Generator(Family.COFIBRE, c)] = sum_polys(
            sp, (g[d - 1][c - 1] * sp.th(d) for d in range(1, sp.r + 1)))
    return substitute(F, images)


def _require_constant(*ws: TwistInput) -> None:
    for w in ws:
        if not tilde_of(w).is_constant():
            raise PreconditionError("this check needs constant-coefficient π and ω")


def _difference_report(lhs: StructureTheta, rhs: StructureTheta, details=None) -> CheckReport:
    # one residual per component of Θ, zero or not
    residuals = {d: a - b for (_, a, d), (_, b, _) in zip(lhs.named(), rhs.named())}
    return CheckReport.from_residuals(residuals, details=details)


def factorization_check(pi: TwistInput, omega: TwistInput) -> CheckReport:
    """F*_ω F*_π = F*_{τ_ωπ} F*_{T^{-1}} F*_{τ_πω} on every generator.

    Operators compose right to left, so this is the pullback form of the
    group identity πω = τ_πω · T^{-1}(π,ω) · τ_ωπ.
    """
    _check_kinds(pi, omega)
    _require_constant(pi, omega)
    tr = transition(pi, omega)
    if not tr.invertible:
        raise DomainError("1 + π̃ω̃ is not invertible")
    t_po, t_op = tau_actions(pi, omega)
    sp = pi.space
    details = {}
    for g in sp.generators():
        G = SuperPoly.generator(sp, g)
        lhs = exp_flow(omega.generator, exp_flow(pi.generator, G))
        rhs = exp_flow(t_op.generator, gauge_pullback(tr.inverse, exp_flow(t_po.generator, G)))
        details[str(g)] = lhs - rhs
    return CheckReport.from_residuals({}, details=details)


@dataclass
class GaugeResult:
    report: CheckReport
    lhs: StructureTheta
    rhs: StructureTheta
    transformed_pi: TwistInput
    mc_before: SuperPoly
    mc_after: SuperPoly


def gauge_equivalence(pi: TwistInput, omega: TwistInput, phi: SuperPoly) -> GaugeResult:
    """Both sides of Θ_{φ-dω, τ_{-ω}π} = Φ*Θ_{φ,π}, plus the Maurer-Cartan transfer.

    Φ* = F*_{T^{-1}(-π,ω)} F*_{τ_{-π}ω} and μ is the de Rham Hamiltonian.
    """
    _check_kinds(pi, omega)
    _require_constant(pi, omega)
    sp = pi.space
    mu = derham(sp)
    base = StructureTheta.build(sp, mu=mu, phi=phi)
    tr = transition(-pi, omega)
    if not tr.invertible:
        raise DomainError("1 - π̃ω̃ is not invertible")
    new_pi = tau_actions(pi, -omega)[1]
    new_omega = tau_actions(-pi, omega)[0]

    shifted = twist(base, omega)  # μ + (φ - dω)
    lhs = twist(shifted, new_pi)
    theta_phi_pi = twist(base, pi)
    rhs = decompose_cubic(gauge_pullback(tr.inverse, exp_flow(new_omega.generator, theta_phi_pi.total)))

    mc_before = mc_residual(pi, base)
    mc_after = mc_residual(new_pi, shifted)
    details = {}
    if not mc_before:
        details["mc_transferred"] = mc_after
    report = _difference_report(lhs, rhs, details)
    return GaugeResult(report, lhs, rhs, new_pi, mc_before, mc_after)


def gauge_equivalence_check(pi: TwistInput, omega: TwistInput, phi: SuperPoly) -> CheckReport:
    return gauge_equivalence(pi, omega, phi).report
