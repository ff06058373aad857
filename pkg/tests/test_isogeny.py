import pytest

from qcurve.errors import KernelError, NotSquareError, OffCurveError
from qcurve.families import build_family_curve, epsilon_p
from qcurve.fields import Fp2
from qcurve.isogeny import (
    OddKernel,
    TwoTorsionKernel,
    division_polynomial,
    poly_eval,
    post_twist,
    velu_quotient,
)
from qcurve.weierstrass import INFINITY, Curve, Point, curve_points, random_point

from conftest import ctx_for


def d2_family(p, s):
    """The degree-2 family curve and its order-2 quotient, untwisted."""
    fam = build_family_curve(2, ctx_for(p), s)
    quotient = velu_quotient(fam.curve, TwoTorsionKernel(fam.ctx.elem(4)))
    return fam, quotient


def d3_family(p, s):
    fam = build_family_curve(3, ctx_for(p), s)
    ctx = fam.ctx
    quotient = velu_quotient(fam.curve, OddKernel((ctx.one(), ctx.elem(-3))))
    return fam, quotient


class TestDivisionPolynomial:
    @pytest.mark.parametrize("d", [3, 5, 7])
    def test_roots_are_torsion_abscissas(self, d):
        curve = Curve(ctx_for(7).elem(1), ctx_for(7).elem(4))
        ctx = curve.ctx
        psi = division_polynomial(curve, d)
        torsion_x = {
            (P.x.a, P.x.b)
            for P in curve_points(curve)
            if not P.is_infinity and curve.mul(d, P).is_infinity
        }
        for a in range(7):
            for b in range(7):
                x = Fp2(ctx, a, b)
                if not poly_eval(psi, x):
                    P = curve.lift_x(x)
                    if P is not None:
                        assert (a, b) in torsion_x
        for key in torsion_x:
            assert not poly_eval(psi, Fp2(ctx, *key))


class TestVeluCodomain:
    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    def test_degree2_quotient_is_twisted_conjugate(self, p):
        # E/<(4,0)> equals the conjugate curve twisted by sqrt(-2):
        # coefficients (4*conj(A), -8*conj(B)).
        for s in range(p):
            fam, quotient = d2_family(p, s)
            conj = fam.curve.conjugate()
            assert quotient.codomain == Curve(4 * conj.A, -8 * conj.B)

    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    def test_degree3_quotient_is_twisted_conjugate(self, p):
        # E/S with S cut out by x - 3 equals the conjugate twisted by
        # sqrt(-3): coefficients (9*conj(A), -27*conj(B)).
        for s in range(p):
            fam, quotient = d3_family(p, s)
            conj = fam.curve.conjugate()
            assert quotient.codomain == Curve(9 * conj.A, -27 * conj.B)

    @pytest.mark.parametrize("p", [5, 11, 13])
    def test_post_twist_lands_on_conjugate(self, p):
        fam, quotient = d2_family(p, 1)
        phi = post_twist(quotient, -(fam.ctx.one() / 2))
        assert phi.codomain == fam.curve.conjugate()

    def test_normalized_leading_behavior(self):
        for d, p, s in ((2, 11, 1), (3, 11, 1), (5, 11, 2), (7, 11, 1)):
            fam = build_family_curve(d, ctx_for(p), s)
            phi = fam.phi
            assert len(phi.num) - 1 == d
            assert len(phi.den) - 1 == d - 1
            assert phi.num[-1] == phi.den[-1]


class TestEval:
    def test_infinity_and_kernel_map_to_infinity(self):
        fam, quotient = d2_family(11, 3)
        assert quotient(INFINITY).is_infinity
        kernel_point = fam.curve.point(fam.ctx.elem(4), fam.ctx.zero())
        assert quotient(kernel_point).is_infinity
        fam3, quotient3 = d3_family(11, 3)
        sigma_c = fam3.constant.conjugate()
        for y in (sigma_c, -sigma_c):
            P = fam3.curve.point(fam3.ctx.elem(3), y)
            assert quotient3(P).is_infinity

    def test_off_curve_rejected(self):
        fam, quotient = d2_family(11, 3)
        with pytest.raises(OffCurveError):
            quotient(Point(fam.ctx.elem(1), fam.ctx.elem(1)))

    @pytest.mark.parametrize("p", [5, 7])
    def test_homomorphism_exhaustive(self, p):
        fam, quotient = d2_family(p, 1)
        pts = curve_points(fam.curve)
        for P in pts:
            for Q in pts:
                lhs = quotient(fam.curve.add(P, Q))
                rhs = quotient.codomain.add(quotient(P), quotient(Q))
                assert lhs == rhs

    def test_degree_to_one_fibers(self):
        fam, quotient = d2_family(7, 1)
        fibers = {}
        for P in curve_points(fam.curve):
            img = quotient(P)
            key = "inf" if img.is_infinity else (img.x.a, img.x.b, img.y.a, img.y.b)
            fibers[key] = fibers.get(key, 0) + 1
        assert all(size == 2 for size in fibers.values())

    @pytest.mark.parametrize("dps", [(2, 13, 5), (3, 13, 4), (5, 11, 3), (7, 13, 2)])
    def test_conjugate_composition_is_multiplication_by_eps_d(self, dps):
        d, p, s = dps
        fam = build_family_curve(d, ctx_for(p), s)
        eps = epsilon_p(d, p)
        sigma_phi = fam.phi.conjugate()
        for P in curve_points(fam.curve):
            assert sigma_phi(fam.phi(P)) == fam.curve.mul(eps * d, P)


class TestKernelValidation:
    def test_rejects_non_torsion_alpha(self):
        fam, _ = d2_family(11, 3)
        ctx = fam.ctx
        alpha = ctx.elem(5)
        assert alpha * alpha * alpha + fam.curve.A * alpha + fam.curve.B
        with pytest.raises(KernelError):
            velu_quotient(fam.curve, TwoTorsionKernel(alpha))

    def test_rejects_polynomial_outside_torsion(self):
        fam, _ = d3_family(11, 3)
        ctx = fam.ctx
        with pytest.raises(KernelError):
            velu_quotient(fam.curve, OddKernel((ctx.one(), ctx.elem(-5))))

    def test_rejects_zero_leading_coefficient(self):
        fam, _ = d3_family(11, 3)
        ctx = fam.ctx
        with pytest.raises(KernelError):
            velu_quotient(fam.curve, OddKernel((ctx.zero(), ctx.elem(-3))))

    def test_rejects_unsupported_degree(self):
        fam, _ = d3_family(11, 3)
        ctx = fam.ctx
        with pytest.raises(KernelError):
            velu_quotient(fam.curve, OddKernel((ctx.one(),) + (ctx.zero(),) * 4))


class TestPostTwist:
    def test_unit_twist_changes_nothing_up_to_sign(self):
        fam, quotient = d2_family(11, 2)
        same = post_twist(quotient, fam.ctx.one())
        assert same.codomain == quotient.codomain
        for seed in range(3):
            P = random_point(fam.curve, seed)
            img, img2 = quotient(P), same(P)
            assert img2 in (img, quotient.codomain.neg(img))

    def test_twist_then_untwist_is_plus_minus_identity(self):
        fam, quotient = d2_family(11, 2)
        lam2 = fam.ctx.elem(3, 1)
        if not lam2.is_square():
            lam2 = lam2 * fam.ctx.nonsquare()
        twisted = post_twist(quotient, lam2)
        back = post_twist(twisted, lam2.inverse())
        assert back.codomain == quotient.codomain
        for seed in range(3):
            P = random_point(fam.curve, seed)
            img, img2 = quotient(P), back(P)
            assert img2 in (img, quotient.codomain.neg(img))

    def test_nonsquare_twist_rejected(self):
        fam, quotient = d2_family(11, 2)
        with pytest.raises(NotSquareError):
            post_twist(quotient, fam.ctx.nonsquare())

    def test_composition_law_of_scales(self):
        fam, quotient = d2_family(11, 2)
        a = fam.ctx.elem(2)
        b = fam.ctx.elem(5)
        once = post_twist(post_twist(quotient, a), b)
        joint = post_twist(quotient, a * b)
        assert once.codomain == joint.codomain
        for seed in range(3):
            P = random_point(fam.curve, seed)
            img, img2 = once(P), joint(P)
            assert img2 in (img, once.codomain.neg(img))
