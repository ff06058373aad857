"""The four one-parameter curve families over F_{p^2} carrying a fast
endomorphism.

Each family member E admits a degree-d isogeny phi onto its Galois-conjugate
curve (d in {2, 3, 5, 7}); composing phi with coordinate conjugation gives
an endomorphism psi of degree d*p whose square is [eps*d] times Frobenius.
The degenerate case d = 1 (a curve defined over F_p, phi the identity)
recovers the subfield-Frobenius endomorphism on the quadratic twist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegenerateParameterError,
    DomainError,
    ResidueClassError,
    SupersingularError,
    TraceError,
)
from .fields import FieldCtx, Fp2, legendre
from .isogeny import (
    Isogeny,
    OddKernel,
    TwoTorsionKernel,
    identity_isogeny,
    post_twist,
    velu_quotient,
)
from .weierstrass import INFINITY, ORACLE_MAX_P, Curve, Point, curve_points, random_point

FAMILY_DEGREES = (2, 3, 5, 7)


@dataclass(frozen=True)
class FamilyCurve:
    """A family member: the curve, its parameter, the family constant, and
    the isogeny phi onto the conjugate curve."""

    d: int
    s: int | None
    curve: Curve
    constant: Fp2 | None
    phi: Isogeny

    @property
    def ctx(self) -> FieldCtx:
        return self.curve.ctx

    def conjugate_curve(self) -> Curve:
        return self.phi.codomain


def epsilon_p(d: int, p: int) -> int:
    """The sign eps with psi^2 = [eps*d] * Frobenius.

    For d in {2, 3, 7} this is -legendre(-d, p):
      d=2: +1 iff p = 5, 7 (mod 8); d=3: +1 iff p = 2 (mod 3);
      d=7: +1 iff p = 3, 5, 6 (mod 7).
    For d=5 the isogeny is rational over F_p(sqrt(-1)) itself, so the sign
    is +1 for every valid p (p = 3 mod 4).  d=1 is the subfield case, +1.
    """
    if d == 1:
        return 1
    if d not in FAMILY_DEGREES:
        raise DomainError(f"no family of degree {d}")
    if d == 5:
        if p % 4 != 3:
            raise ResidueClassError("degree-5 family requires p = 3 (mod 4)")
        return 1
    return -legendre(-d % p, p)


def _build_d2(ctx: FieldCtx, s: int):
    C = ctx.elem(9, 9 * s)
    A = 2 * (C - 24)
    B = -8 * (C - 16)
    kernel = TwoTorsionKernel(ctx.elem(4))
    lam2 = -(ctx.one() / 2)
    return A, B, C, kernel, (lam2,)


def _build_d3(ctx: FieldCtx, s: int):
    C = ctx.elem(2, 2 * s)
    A = -3 * (2 * C + 1)
    B = C * C + 10 * C - 2
    kernel = OddKernel((ctx.one(), ctx.elem(-3)))
    lam2 = -(ctx.one() / 3)
    return A, B, C, kernel, (lam2,)


def _build_d5(ctx: FieldCtx, s: int):
    p = ctx.p
    if s == 0 or (11 * s - 2) % p == 0:
        raise DegenerateParameterError("degree-5 family excludes s in {0, 2/11}")
    u = (11 * s - 2) % p
    A = ctx.elem(3 * (6 * s * s + 6 * s - 1), -20 * s * (s - 1)) * (-27 * s * u)
    B = ctx.elem(13 * s * s + 59 * s - 9, -2 * (s - 1) * (20 * s + 9)) * (54 * s * s * u * u)
    f0 = ctx.elem(1, 2)
    c = ctx.elem(2, -1) * (3 * s * u)
    tail = ctx.elem(1, s)
    kernel = OddKernel((f0, -2 * f0 * c, f0 * c * c + 81 * s * u * tail * tail))
    # The twisting factor is selected by the codomain test below; the first
    # candidate, 1/(1+2i)^2, is the one that lands on the conjugate curve.
    w = ctx.elem(1, 2)
    five = ctx.elem(5)
    candidates = ((w * w).inverse(), (five / w) ** 2, five / w)
    return A, B, None, kernel, candidates


def _build_d7(ctx: FieldCtx, s: int):
    p = ctx.p
    w = s * s * ctx.delta % p
    c0 = 7 * (27 + w) % p
    if c0 == 0:
        raise DegenerateParameterError("degree-7 family excludes s^2 = -27/delta")
    C = ctx.elem(c0)
    A = -3 * C * ctx.elem(85 + 15 * w, 96 * s)
    B = 14 * C * ctx.elem(9 * (3 * w * w + 130 * w + 171), 16 * (9 * w + 163) * s)
    g = ctx.elem(1, -s)
    h = ctx.elem(27, s)
    k = 16 * g * g * C
    kernel = OddKernel(
        (ctx.one(), -3 * C, 3 * C * C - 3 * k, -(C * C * C) + 3 * k * C - 4 * k * g * h)
    )
    lam2 = -(ctx.one() / 7)
    return A, B, C, kernel, (lam2,)


_BUILDERS = {2: _build_d2, 3: _build_d3, 5: _build_d5, 7: _build_d7}

_MIN_P = {2: 3, 3: 3, 5: 5, 7: 7}


def build_family_curve(d: int, ctx: FieldCtx, s: int) -> FamilyCurve:
    """Construct the degree-d family member with parameter s, together with
    its isogeny onto the conjugate curve."""
    if d not in FAMILY_DEGREES:
        raise DomainError(f"no family of degree {d}")
    p = ctx.p
    if p <= _MIN_P[d]:
        raise ResidueClassError(f"degree-{d} family requires p > {_MIN_P[d]}")
    if d == 5:
        if p % 4 != 3:
            raise ResidueClassError("degree-5 family requires p = 3 (mod 4)")
        if ctx.delta != p - 1:
            raise ResidueClassError("degree-5 family requires delta = -1")
    s %= p
    A, B, C, kernel, lam2s = _BUILDERS[d](ctx, s)
    try:
        curve = Curve(A, B)
    except DegenerateParameterError as exc:
        raise DegenerateParameterError(f"s={s} gives a singular curve") from exc
    quotient = velu_quotient(curve, kernel)
    conj = curve.conjugate()
    for lam2 in lam2s:
        phi = post_twist(quotient, lam2)
        if phi.codomain == conj:
            return FamilyCurve(d, s, curve, C, phi)
    raise DegenerateParameterError(
        f"no twisting factor lands the degree-{d} quotient on the conjugate curve"
    )


def gls_endo(ctx: FieldCtx, a0: int, b0: int, twisted: bool = False) -> "Endo":
    """The degenerate d=1 construction: a curve with subfield coefficients,
    phi the identity, psi plain coordinate conjugation.

    psi fixes the F_p-rational points; the interesting endomorphism is the
    twisted psi', whose square is [-1] on the rational points of the twist.
    """
    A = ctx.elem(a0)
    B = ctx.elem(b0)
    if A.b or B.b:
        raise DomainError("coefficients must lie in the base field F_p")
    curve = Curve(A, B)
    family = FamilyCurve(1, None, curve, None, identity_isogeny(curve))
    return Endo(family, twisted=twisted)


class Endo:
    """The endomorphism psi = (p-power map) o phi of a family curve, or its
    twisted counterpart psi' acting on the quadratic twist.

    psi' is evaluated without leaving F_{p^2}: conjugating the twist
    isomorphism through the p-power map leaves rational functions whose
    coefficients are the conjugates of phi's, scaled by powers of
    nu = mu^((1-p)/2) where mu is the canonical nonsquare.
    """

    __slots__ = ("family", "twisted", "eps", "curve", "_conj_phi", "_mu", "_mu_conj", "_nu3")

    def __init__(self, family: FamilyCurve, twisted: bool = False):
        self.family = family
        self.twisted = twisted
        ctx = family.ctx
        self.eps = epsilon_p(family.d, ctx.p)
        if not twisted:
            self.curve = family.curve
            self._conj_phi = None
            self._mu = self._mu_conj = self._nu3 = None
        else:
            mu = ctx.nonsquare()
            base = family.curve
            mu2 = mu * mu
            self.curve = Curve(mu2 * base.A, mu2 * mu * base.B)
            self._conj_phi = family.phi.conjugate()
            self._mu = mu
            self._mu_conj = mu.conjugate()
            nu = mu.inverse() ** ((ctx.p - 1) // 2)
            self._nu3 = nu * nu * nu

    @property
    def d(self) -> int:
        return self.family.d

    def __call__(self, P: Point) -> Point:
        if P.is_infinity:
            return INFINITY
        if not self.twisted:
            img = self.family.phi(P)
            if img.is_infinity:
                return INFINITY
            return Point(img.x.conjugate(), img.y.conjugate())
        if not self.curve.is_on(P):
            raise DomainError("point is not on the twisted curve")
        xt = P.x.conjugate() / self._mu_conj
        maps = self._conj_phi.raw_maps(xt)
        if maps is None:
            return INFINITY
        u, du = maps
        return Point(self._mu * u, self._nu3 * P.y.conjugate() * du)

    def __repr__(self):
        kind = "psi'" if self.twisted else "psi"
        return f"Endo({kind}, d={self.d}, eps={self.eps})"


def determine_r(endo: Endo, trace: int) -> int:
    """The integer r with d*r^2 = 2p + eps*trace and [r]psi = [p] + eps*pi
    (minus eps*pi on the twist); the sign is fixed by evaluating on points.

    The p^2-power Frobenius pi is the identity on rational points, so the
    verification reduces to [r]psi(P) = [p + eps]P (or [p - eps]P twisted).
    """
    p = endo.family.ctx.p
    d = endo.d
    eps = endo.eps
    if abs(trace) > 2 * p:
        raise TraceError("trace violates the Hasse bound")
    v = 2 * p + eps * trace
    if v % d:
        raise TraceError("trace inconsistent with family: 2p + eps*t not divisible by d")
    q, rem = _isqrt_exact(v // d)
    if rem:
        raise TraceError("trace inconsistent with family: (2p + eps*t)/d is not a square")
    target = p + eps if not endo.twisted else p - eps
    curve = endo.curve

    # The wrong sign still holds on a proper subgroup (the rational part of
    # ker [2r]psi), so tiny groups are decided exhaustively; at large p the
    # chance that several hash-derived points all lie in that subgroup is
    # negligible.
    if p <= ORACLE_MAX_P:
        points = curve_points(curve)
    else:
        points = [random_point(curve, seed) for seed in range(8)]

    def holds(r: int) -> bool:
        return all(curve.mul(r, endo(P)) == curve.mul(target, P) for P in points)

    if q == 0:
        if holds(0):
            return 0
        raise TraceError("r = 0 but the curve is not supersingular")
    for r in (q, -q):
        if holds(r):
            return r
    raise TraceError("neither sign of r satisfies the endomorphism relation")


def _isqrt_exact(n: int) -> tuple[int, int]:
    r = math.isqrt(n)
    return r, n - r * r


def group_orders(endo: Endo, r: int) -> tuple[int, int]:
    """(#E(F_{p^2}), #E'(F_{p^2})) from the eps/d/r data; the sum is always
    2(p^2 + 1)."""
    p = endo.family.ctx.p
    d, eps = endo.d, endo.eps
    base = (p + eps) ** 2 - eps * d * r * r
    twist = (p - eps) ** 2 + eps * d * r * r
    return base, twist


def eigenvalue(endo: Endo, r: int, order: int) -> int:
    """The eigenvalue of psi (or psi') on a stable cyclic subgroup of the
    given order: (p + eps)/r, respectively (p - eps)/r, mod order."""
    if r == 0:
        raise SupersingularError("supersingular curve has no eigenvalue decomposition")
    if math.gcd(r, order) != 1:
        raise DomainError("gcd(r, N) != 1: eigenvalue undefined")
    p = endo.family.ctx.p
    num = p + endo.eps if not endo.twisted else p - endo.eps
    return num * pow(r, -1, order) % order


def subfield_order(ctx: FieldCtx, a0: int, b0: int) -> int:
    """#E(F_p) for a curve with subfield coefficients, by enumeration."""
    p = ctx.p
    if p > 512:
        raise DomainError("subfield enumeration is for small primes only")
    a0 %= p
    b0 %= p
    squares: dict[int, int] = {}
    for y in range(p):
        squares[y * y % p] = squares.get(y * y % p, 0) + 1
    count = 1
    for x in range(p):
        rhs = (x * x * x + a0 * x + b0) % p
        count += squares.get(rhs, 0)
    return count
