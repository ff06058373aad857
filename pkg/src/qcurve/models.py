"""Montgomery, twisted Edwards, and Doche-Icart-Kohel models of the family
curves, the x-only ladder, and the endomorphism on the (X:Z)-line.

A model that only exists on the quadratic twist is reported as None; callers
sweeping parameters use that as a filter rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateParameterError, DomainError, MapPoleError
from .families import FamilyCurve
from .fields import Fp2
from .weierstrass import Point

WPair = tuple[Fp2, Fp2]


@dataclass(frozen=True)
class MontgomeryCurve:
    """B*Y^2*Z = X*(X^2 + A*X*Z + Z^2) with B^2 = 2*C and A = 12/B."""

    A: Fp2
    B: Fp2
    family: FamilyCurve


@dataclass(frozen=True)
class XZPoint:
    """The (X : Z) line of a Montgomery curve; (1 : 0) is infinity."""

    X: Fp2
    Z: Fp2

    def __post_init__(self):
        if not self.X and not self.Z:
            raise DomainError("(0 : 0) is not a projective point")

    def __eq__(self, other):
        if not isinstance(other, XZPoint):
            return NotImplemented
        return self.X * other.Z == other.X * self.Z

    def __hash__(self):
        raise TypeError("XZPoint equality is projective; hash unsupported")


@dataclass(frozen=True)
class EdwardsCurve:
    """a*x1^2 + x2^2 = 1 + d*x1^2*x2^2 with a = 12 + 2*B, d = 12 - 2*B."""

    a: Fp2
    d: Fp2
    bm: Fp2
    family: FamilyCurve


@dataclass(frozen=True)
class DikCurve:
    """Doubling model v^2 = u*(u^2 + D*u + 16*D) for the degree-2 family, or
    tripling model v^2 = u^3 + 3*D*(u + 1)^2 for the degree-3 family."""

    variant: str  # "doubling" or "tripling"
    coeff: Fp2
    alpha: Fp2
    alpha32: Fp2
    family: FamilyCurve


def to_montgomery(fam: FamilyCurve) -> MontgomeryCurve | None:
    """The Montgomery model, which exists iff 2*C is a square in F_{p^2};
    None signals that only the quadratic twist has one."""
    if fam.d != 2:
        raise DomainError("Montgomery model applies to the degree-2 family")
    b = (2 * fam.constant).sqrt()
    if b is None:
        return None
    a = 12 / b
    if a * a == 4:
        raise DegenerateParameterError("singular Montgomery model")
    return MontgomeryCurve(a, b, fam)


def montgomery_point(m: MontgomeryCurve, P: Point) -> WPair:
    """(x, y) -> ((x - 4)/B, y/B^2) on the affine Montgomery chart."""
    if P.is_infinity:
        raise MapPoleError("affine Montgomery chart does not contain infinity")
    return (P.x - 4) / m.B, P.y / (m.B * m.B)


def montgomery_to_weierstrass(m: MontgomeryCurve, uv: WPair) -> Point:
    u, v = uv
    return Point(m.B * u + 4, m.B * m.B * v)


def montgomery_contains(m: MontgomeryCurve, uv: WPair) -> bool:
    u, v = uv
    return m.B * v * v == u * (u * u + m.A * u + 1)


def to_xz(m: MontgomeryCurve, P: Point) -> XZPoint:
    ctx = m.B.ctx
    if P.is_infinity:
        return XZPoint(ctx.one(), ctx.zero())
    return XZPoint(P.x - 4, m.B)


def ladder(k: int, x: XZPoint, m: MontgomeryCurve) -> XZPoint:
    """x([k]P) from x(P) by the standard differential ladder."""
    ctx = m.B.ctx
    one, zero = ctx.one(), ctx.zero()
    k = abs(k)
    if not x.Z or k == 0:
        return XZPoint(one, zero)
    if not x.X:
        # (0, 0) has order 2; the differential formulas degenerate there.
        return x if k & 1 else XZPoint(one, zero)
    a24 = (m.A + 2) / 4

    def dbl(q: XZPoint) -> XZPoint:
        t1 = (q.X + q.Z) ** 2
        t2 = (q.X - q.Z) ** 2
        t3 = t1 - t2
        return XZPoint(t1 * t2, t3 * (t2 + a24 * t3))

    def dadd(q1: XZPoint, q2: XZPoint, diff: XZPoint) -> XZPoint:
        t1 = (q1.X + q1.Z) * (q2.X - q2.Z)
        t2 = (q1.X - q1.Z) * (q2.X + q2.Z)
        return XZPoint(diff.Z * (t1 + t2) ** 2, diff.X * (t1 - t2) ** 2)

    r0, r1 = x, dbl(x)
    for i in range(k.bit_length() - 2, -1, -1):
        if (k >> i) & 1:
            r0, r1 = dadd(r0, r1, x), dbl(r1)
        else:
            r0, r1 = dbl(r0), dadd(r0, r1, x)
    return r0


def psi_montgomery(x: XZPoint, m: MontgomeryCurve) -> XZPoint:
    """The endomorphism on the (X:Z)-line:
    (X : Z) -> (X^2p + A^p X^p Z^p + Z^2p : -2 A^(p-1) X^p Z^p)."""
    xp = x.X.conjugate()
    zp = x.Z.conjugate()
    ap = m.A.conjugate()
    t = xp * zp
    return XZPoint(xp * xp + ap * t + zp * zp, -2 * (ap / m.A) * t)


def to_edwards(fam: FamilyCurve) -> EdwardsCurve | None:
    """The twisted Edwards model; exists under the same square condition as
    the Montgomery model."""
    m = to_montgomery(fam)
    if m is None:
        return None
    a = 12 + 2 * m.B
    d = 12 - 2 * m.B
    if a == d or not a or not d:
        raise DegenerateParameterError("degenerate Edwards coefficients")
    return EdwardsCurve(a, d, m.B, fam)


def edwards_point(e: EdwardsCurve, P: Point) -> WPair:
    """(x, y) -> ((x-4)/y, (x-4-B)/(x-4+B)); infinity maps to the Edwards
    identity (0, 1), the other exceptional points are rejected by name."""
    ctx = e.bm.ctx
    if P.is_infinity:
        return ctx.zero(), ctx.one()
    if not P.y:
        raise MapPoleError(f"Edwards map undefined at two-torsion point {P}")
    w = P.x - 4
    den = w + e.bm
    if not den:
        raise MapPoleError(f"Edwards map undefined at x = 4 - B point {P}")
    return w / P.y, (w - e.bm) / den


def edwards_contains(e: EdwardsCurve, q: WPair) -> bool:
    x1, x2 = q
    s1, s2 = x1 * x1, x2 * x2
    return e.a * s1 + s2 == 1 + e.d * s1 * s2


def edwards_add(e: EdwardsCurve, q1: WPair, q2: WPair) -> WPair:
    x1, y1 = q1
    x2, y2 = q2
    t = e.d * x1 * x2 * y1 * y2
    return (x1 * y2 + y1 * x2) / (1 + t), (y1 * y2 - e.a * x1 * x2) / (1 - t)


DIK_DOUBLING = "doubling"
DIK_TRIPLING = "tripling"


def to_dik(fam: FamilyCurve, variant: str) -> DikCurve | None:
    """The Doche-Icart-Kohel model; None when the scaling factor alpha is a
    nonsquare, in which case the model is isomorphic to the quadratic twist."""
    ctx = fam.ctx
    if variant == DIK_DOUBLING:
        if fam.d != 2:
            raise DomainError("doubling model applies to the degree-2 family")
        alpha = 96 / fam.constant
        coeff = 1152 / fam.constant
    elif variant == DIK_TRIPLING:
        if fam.d != 3:
            raise DomainError("tripling model applies to the degree-3 family")
        cp = fam.constant.conjugate()
        alpha = 3 / cp
        coeff = 9 / cp
    else:
        raise DomainError(f"unknown model variant {variant!r}")
    root = alpha.sqrt()
    if root is None:
        return None
    return DikCurve(variant, coeff, alpha, alpha * root, fam)


def _dik_shift(dk: DikCurve) -> int:
    return 4 if dk.variant == DIK_DOUBLING else 3


def dik_point(dk: DikCurve, P: Point) -> WPair:
    """(x, y) -> (alpha*(x - x0), alpha^(3/2)*y) with x0 the kernel abscissa."""
    if P.is_infinity:
        raise MapPoleError("affine model chart does not contain infinity")
    return dk.alpha * (P.x - _dik_shift(dk)), dk.alpha32 * P.y


def dik_to_weierstrass(dk: DikCurve, uv: WPair) -> Point:
    u, v = uv
    return Point(u / dk.alpha + _dik_shift(dk), v / dk.alpha32)


def _dik_cubic(dk: DikCurve) -> tuple[Fp2, Fp2, Fp2]:
    """Coefficients (c2, c4, c6) of v^2 = u^3 + c2 u^2 + c4 u + c6."""
    k = dk.coeff
    if dk.variant == DIK_DOUBLING:
        return k, 16 * k, k.ctx.zero()
    return 3 * k, 6 * k, 3 * k


def dik_contains(dk: DikCurve, uv: WPair) -> bool:
    c2, c4, c6 = _dik_cubic(dk)
    u, v = uv
    return v * v == ((u + c2) * u + c4) * u + c6


def dik_add(dk: DikCurve, q1: WPair | None, q2: WPair | None) -> WPair | None:
    """Chord-and-tangent addition on the model cubic; None is the identity."""
    if q1 is None:
        return q2
    if q2 is None:
        return q1
    c2, c4, _ = _dik_cubic(dk)
    u1, v1 = q1
    u2, v2 = q2
    if u1 == u2:
        if v1 != v2 or not v1:
            return None
        lam = (3 * u1 * u1 + 2 * c2 * u1 + c4) / (2 * v1)
    else:
        lam = (v2 - v1) / (u2 - u1)
    u3 = lam * lam - c2 - u1 - u2
    return u3, lam * (u1 - u3) - v1
