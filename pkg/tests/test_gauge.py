"""Tilde matrices, transitions, τ-actions and the gauge identities."""
import random
from fractions import Fraction

import pytest
import sympy

from strategies import random_constant_bihomogeneous

from bigbracket import GeneratorSpace, exp_flow, poisson_bracket as pb
from bigbracket.gauge import (
    DomainError,
    QuadraticHamiltonian,
    TildeMatrix,
    endo_hamiltonian,
    endo_matrix,
    factorization_check,
    gauge_equivalence,
    gauge_equivalence_check,
    gauge_pullback,
    infinitesimal_action,
    tau_actions,
    tilde_of,
    transition,
)
from bigbracket.structures import StructureTheta, derham
from bigbracket.supercore import DegreeError, PreconditionError
from bigbracket.twisting import TwistInput, mc_residual, twist

S2 = GeneratorSpace(2, 2)
S3 = GeneratorSpace(3, 3)


def as_sympy(M):
    return sympy.Matrix([[sympy.Rational(e.constant_term()) for e in row] for row in M.rows])


def constant_pair(sp, rng):
    pi = TwistInput.bivector(random_constant_bihomogeneous(sp, rng, (2, 0), terms=3, coeff=3))
    omega = TwistInput.form(random_constant_bihomogeneous(sp, rng, (0, 2), terms=3, coeff=3))
    return pi, omega


class TestTildeMatrix:
    def test_read_off(self):
        W = tilde_of(TwistInput.form(S2.xi(1) * S2.xi(2)))
        assert W.variance == "form"
        assert W[0][1] == 1 and W[1][0] == -1 and W[0][0] == 0
        P = tilde_of(TwistInput.bivector(S3.x(1) * S3.th(1) * S3.th(2)))
        assert P[0][1] == S3.x(1) and P[1][0] == -S3.x(1)
        assert not P.is_constant()

    def test_round_trip(self):
        rng = random.Random(21)
        for _ in range(30):
            sp = GeneratorSpace(rng.randint(0, 2), rng.randint(2, 4))
            pi, omega = constant_pair(sp, rng)
            assert tilde_of(pi).to_twist() == pi
            assert tilde_of(omega).to_twist() == omega

    def test_validation(self):
        with pytest.raises(ValueError):
            TildeMatrix(S2, [[0, 1], [1, 0]], "form")
        with pytest.raises(ValueError):
            TildeMatrix(S2, [[0, 1]], "endo")
        with pytest.raises(ValueError):
            TildeMatrix(S2, [[S2.xi(1), 0], [0, 0]])
        with pytest.raises(ValueError):
            TildeMatrix(S2, [[1]], "twisted")
        with pytest.raises(ValueError):
            TildeMatrix.identity(S2).to_twist()

    def test_algebra_against_sympy(self):
        rng = random.Random(22)
        for _ in range(20):
            r = rng.randint(1, 4)
            rows = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(r)]
            M = TildeMatrix(GeneratorSpace(1, r), rows)
            ref = sympy.Matrix(rows)
            assert sympy.Rational(M.det().constant_term()) == ref.det()
            assert as_sympy(M.adjugate()) == ref.adjugate()
            assert as_sympy(M @ M.transpose()) == ref * ref.T
            if ref.det() != 0:
                assert M.is_invertible()
                assert as_sympy(M.inverse()) == ref.inv()
            else:
                with pytest.raises(DomainError):
                    M.inverse()

    def test_evaluate(self):
        P = tilde_of(TwistInput.bivector(S3.x(1) * S3.th(1) * S3.th(2)))
        assert P.evaluate_at([2, 0, 0])[0][1] == 2


class TestTransition:
    def test_rank_two_closed_forms(self):
        # π = p θ1θ2, ω = w ξ1ξ2: π̃ω̃ = -pw·1
        p, w = 3, 5
        pi = TwistInput.bivector(p * S2.th(1) * S2.th(2))
        omega = TwistInput.form(w * S2.xi(1) * S2.xi(2))
        tr = transition(pi, omega)
        assert tr.matrix.det() == (1 - p * w) ** 2
        tpo, top = tau_actions(pi, omega)
        assert top.generator == Fraction(p, 1 - p * w) * S2.th(1) * S2.th(2)
        assert tpo.generator == Fraction(w, 1 - p * w) * S2.xi(1) * S2.xi(2)
        assert infinitesimal_action(pi, omega).generator == p * p * w * S2.th(1) * S2.th(2)

    def test_singular_point(self):
        pi = TwistInput.bivector(S2.th(1) * S2.th(2))
        omega = TwistInput.form(S2.xi(1) * S2.xi(2))
        tr = transition(pi, omega)
        assert tr.matrix.det() == 0 and not tr.invertible and tr.inverse is None
        with pytest.raises(DomainError):
            tau_actions(pi, omega)
        with pytest.raises(DomainError):
            factorization_check(pi, omega)

    def test_nonconstant_det(self):
        pi = TwistInput.bivector(S3.x(1) * S3.th(1) * S3.th(2))
        omega = TwistInput.form(S3.xi(1) * S3.xi(2))
        tr = transition(pi, omega)
        assert tr.matrix.det() == (1 - S3.x(1)) ** 2
        assert not tr.invertible
        with pytest.raises(DomainError):
            tau_actions(pi, omega)

    def test_zero_form(self):
        rng = random.Random(23)
        pi, _ = constant_pair(S3, rng)
        zero = TwistInput.form(S3.zero())
        tr = transition(pi, zero)
        assert tr.matrix == TildeMatrix.identity(S3)
        assert tau_actions(pi, zero)[1] == pi

    def test_kind_checks(self):
        w = TwistInput.form(S2.xi(1) * S2.xi(2))
        with pytest.raises(PreconditionError):
            transition(w, w)
        with pytest.raises(PreconditionError):
            transition(TwistInput.bivector(S3.th(1) * S3.th(2)), w)


class TestQuadratic:
    def test_split_and_total(self):
        H = S3.xi(1) * S3.xi(2) + S3.th(1) * S3.xi(3) + S3.x(1) * S3.th(2) * S3.th(3)
        Q = QuadraticHamiltonian.split(H)
        assert Q.form_part == S3.xi(1) * S3.xi(2)
        assert Q.endo_part == S3.th(1) * S3.xi(3)
        assert Q.bivector_part == S3.x(1) * S3.th(2) * S3.th(3)
        assert Q.total == H
        with pytest.raises(DegreeError):
            QuadraticHamiltonian.split(H + S3.xi(1))
        with pytest.raises(DegreeError):
            QuadraticHamiltonian(S3.th(1) * S3.th(2), S3.zero(), S3.zero())

    def test_pi_omega_bracket_is_endo(self):
        rng = random.Random(24)
        for _ in range(20):
            sp = GeneratorSpace(rng.randint(0, 2), rng.randint(2, 4))
            pi, omega = constant_pair(sp, rng)
            assert pb(pi.generator, omega.generator) == endo_hamiltonian(tilde_of(pi) @ tilde_of(omega))
            assert pb(omega.generator, omega.generator) == 0
            assert pb(pi.generator, pi.generator) == 0
            Q = QuadraticHamiltonian.split(pi.generator).bracket(QuadraticHamiltonian.split(omega.generator))
            assert Q.form_part == 0 and Q.bivector_part == 0

    def test_endo_matrix_inverts(self):
        M = TildeMatrix(S3, [[1, 0, 2], [0, -1, 0], [3, 0, 0]])
        assert endo_matrix(endo_hamiltonian(M)) == M
        with pytest.raises(DegreeError):
            endo_matrix(S3.xi(1) * S3.xi(2))
        with pytest.raises(DegreeError):
            endo_matrix(S3.p(1))


class TestPullback:
    def test_exp_of_nilpotent(self):
        # N nilpotent: exp(N) = 1 + N + N²/2, and the flow of h_N pulls back by it
        N = TildeMatrix(S3, [[0, 2, 1], [0, 0, 3], [0, 0, 0]])
        g = TildeMatrix.identity(S3) + N + (N @ N).scale(Fraction(1, 2))
        H = endo_hamiltonian(N)
        for F in (S3.xi(1), S3.xi(3), S3.th(1), S3.th(2) * S3.xi(3), S3.x(1) * S3.p(2)):
            # an endomorphism flow is nilpotent through N, not through weight
            assert gauge_pullback(g, F) == exp_flow(H, F, max_terms=6)

    def test_homomorphism(self):
        g = TildeMatrix(S2, [[2, 1], [1, 1]])
        h = TildeMatrix(S2, [[1, 3], [0, 1]])
        F = S2.xi(1) * S2.th(2) + S2.xi(2) * S2.p(1)
        assert gauge_pullback(g, gauge_pullback(h, F)) == gauge_pullback(g @ h, F)
        # ξ and θ transform contragrediently, so the pairing survives
        pairing = S2.xi(1) * S2.th(1) + S2.xi(2) * S2.th(2)
        assert gauge_pullback(g, pairing) == pairing

    def test_needs_constant(self):
        g = TildeMatrix(S3, [[1, S3.x(1), 0], [0, 1, 0], [0, 0, 1]])
        with pytest.raises(PreconditionError):
            gauge_pullback(g, S3.xi(1))


class TestFactorization:
    def test_fixed_example(self):
        pi = TwistInput.bivector(S2.th(1) * S2.th(2))
        omega = TwistInput.form(-S2.xi(1) * S2.xi(2))
        report = factorization_check(pi, omega)
        assert report.verdict and set(report.details) == {str(g) for g in S2.generators()}

    def test_needs_constant(self):
        pi = TwistInput.bivector(S3.x(1) * S3.th(1) * S3.th(2))
        omega = TwistInput.form(S3.xi(1) * S3.xi(3))
        with pytest.raises(PreconditionError):
            factorization_check(pi, omega)


class TestGaugeEquivalence:
    def test_r3_rank2(self):
        pi = TwistInput.bivector(S3.th(1) * S3.th(2))
        omega = TwistInput.form(S3.xi(1) * S3.xi(2) + 2 * S3.xi(2) * S3.xi(3))
        phi = S3.x(1) * S3.xi(1) * S3.xi(2) * S3.xi(3)
        res = gauge_equivalence(pi, omega, phi)
        assert res.report.verdict
        assert {str(d) for d in res.report.residuals} == {"(0,3)", "(1,2)", "(2,1)", "(3,0)"}
        assert res.mc_before == 0 and res.mc_after == 0
        assert gauge_equivalence_check(pi, omega, phi).verdict

    def test_random_poisson_pairs(self):
        rng = random.Random(25)
        for _ in range(15):
            n = rng.randint(2, 3)
            sp = GeneratorSpace(n, n)
            pi, omega = constant_pair(sp, rng)
            if not transition(-pi, omega).invertible:
                continue
            res = gauge_equivalence(pi, omega, sp.zero())
            assert res.report.verdict and res.mc_after == 0

    def test_closed_form_stays_mc(self):
        # for a Poisson π and a constant ω the form τ_{-π}ω solves MC again
        pi = TwistInput.bivector(S3.th(1) * S3.th(2) + 2 * S3.th(2) * S3.th(3))
        omega = TwistInput.form(S3.xi(1) * S3.xi(3) - S3.xi(2) * S3.xi(3))
        T = StructureTheta.build(S3, mu=derham(S3))
        assert mc_residual(pi, T) == 0
        new_omega = tau_actions(-pi, omega)[0]
        assert mc_residual(new_omega, twist(T, pi)) == 0

    def test_domain(self):
        pi = TwistInput.bivector(S2.th(1) * S2.th(2))
        omega = TwistInput.form(-S2.xi(1) * S2.xi(2))
        with pytest.raises(DomainError):
            gauge_equivalence(pi, omega, S2.zero())
