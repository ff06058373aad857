"""Scalar decomposition machinery: reduced bases for the decomposition
lattice, exact two-dimensional decomposition, and interleaved double-and-add.

All arithmetic here is exact integer/rational arithmetic.  The lattice of
decompositions of zero is L = <(N, 0), (-lambda, 1)>; a decomposition of m
is any (a, b) with a + b*lambda = m (mod N), i.e. an element of the coset
(m, 0) + L.  A basis is reduced when, under the infinity norm,
||b1|| <= ||b2|| <= ||b1 - b2|| <= ||b1 + b2||.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

from .errors import DomainError, StructureError
from .weierstrass import INFINITY, Curve, Point

Vec = tuple[int, int]

PRIME_ORDER = "prime_order"
COFACTOR2_D2 = "cofactor2_d2"
COFACTOR4_D2 = "cofactor4_d2"
COFACTOR3_D3 = "cofactor3_d3"

BASIS_VARIANTS = (PRIME_ORDER, COFACTOR2_D2, COFACTOR4_D2, COFACTOR3_D3)


def infnorm(v: Vec) -> int:
    return max(abs(v[0]), abs(v[1]))


def _add(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1])


def _sub(u: Vec, v: Vec) -> Vec:
    return (u[0] - v[0], u[1] - v[1])


def _neg(v: Vec) -> Vec:
    return (-v[0], -v[1])


def _scale(v: Vec, k: Fraction | int) -> Vec:
    x, y = v[0] * k, v[1] * k
    if isinstance(k, Fraction):
        if x.denominator != 1 or y.denominator != 1:
            raise StructureError("basis combination is not integral")
        return (int(x), int(y))
    return (x, y)


def det2(u: Vec, v: Vec) -> int:
    return u[0] * v[1] - u[1] * v[0]


def is_reduced(b1: Vec, b2: Vec) -> bool:
    return (
        infnorm(b1) <= infnorm(b2) <= infnorm(_sub(b1, b2)) <= infnorm(_add(b1, b2))
    )


def sublattice_basis(p: int, eps: int, d: int, r: int) -> tuple[Vec, Vec]:
    """Generators e1 = (p + eps, -r), e2 = (-eps*d*r, p + eps) of the index-
    (#E/N) sublattice of decompositions; determinant (p+eps)^2 - eps*d*r^2 = #E."""
    return (p + eps, -r), (-eps * d * r, p + eps)


def lagrange_reduce(v1: Vec, v2: Vec) -> tuple[Vec, Vec]:
    """Gauss-Lagrange reduction under the infinity norm.

    Repeatedly shortens the longer vector by the best integer multiple of
    the shorter one; the result is ordered and sign-normalised so that
    ||b1|| <= ||b2|| <= ||b1 - b2|| <= ||b1 + b2||.
    """
    if det2(v1, v2) == 0:
        raise DomainError("vectors are linearly dependent")
    u, v = v1, v2
    if infnorm(u) > infnorm(v):
        u, v = v, u
    while True:
        best = v
        for q in _reduction_candidates(u, v):
            if q == 0:
                continue
            cand = _sub(v, _scale(u, q))
            if infnorm(cand) < infnorm(best):
                best = cand
        if best == v:
            break
        v = best
        if infnorm(u) > infnorm(v):
            u, v = v, u
    if infnorm(_sub(u, v)) > infnorm(_add(u, v)):
        v = _neg(v)
    if not is_reduced(u, v):
        raise StructureError("reduction failed to satisfy the ordering")
    return u, v


def _reduction_candidates(u: Vec, v: Vec):
    """Integer multiples q worth testing when shortening v by q*u: the
    per-coordinate minimisers and the crossings of the two |v_i - q*u_i|
    graphs (the max of two V-shapes is minimised at one of these).
    q = +-1 is always included; at termination that is what forces
    ||v|| <= ||v - u|| and ||v|| <= ||v + u||."""
    cands = {-1, 1}

    def around(x: Fraction):
        f = floor(x)
        cands.update((f - 1, f, f + 1, f + 2))

    for i in (0, 1):
        if u[i]:
            around(Fraction(v[i], u[i]))
    for sgn in (1, -1):
        du = u[0] + sgn * u[1]
        if du:
            around(Fraction(v[0] + sgn * v[1], du))
    return cands


@dataclass(frozen=True)
class GlvBasis:
    """A reduced basis of the decomposition lattice for (N, lambda)."""

    b1: Vec
    b2: Vec
    order: int
    eigenvalue: int

    def __post_init__(self):
        n = self.order
        lam = self.eigenvalue
        for v in (self.b1, self.b2):
            if (v[0] + lam * v[1]) % n:
                raise StructureError(f"{v} is not in the decomposition lattice")
        if abs(det2(self.b1, self.b2)) != n:
            raise StructureError("basis determinant does not equal the subgroup order")
        if not is_reduced(self.b1, self.b2):
            raise StructureError("basis does not satisfy the reduction ordering")

    @property
    def bitlength(self) -> int:
        return ceil_log2(infnorm(self.b2))


def ceil_log2(n: int) -> int:
    if n < 1:
        raise DomainError("ceil_log2 of a nonpositive number")
    return (n - 1).bit_length()


def cofactor_basis(
    variant: str,
    p: int,
    eps: int,
    d: int,
    r: int,
    order: int,
    eigenvalue: int,
) -> GlvBasis:
    """A reduced basis of L for the given cofactor structure.

    prime_order: the sublattice generators themselves (N = #E);
    cofactor2_d2: Z/2 x Z/N with N odd, needs r odd;
    cofactor4_d2: (Z/2)^2 x Z/N with N odd, needs r even;
    cofactor3_d3: Z/3 x Z/N with 3 coprime to N, needs 3 | p + eps, 3 != r mod 3.

    At toy primes the stated arrangement can fail the reduction ordering; in
    that case it is Gauss-reduced, which preserves the lattice.
    """
    e1, e2 = sublattice_basis(p, eps, d, r)
    half = Fraction(1, 2)
    third = Fraction(1, 3)
    if variant == PRIME_ORDER:
        if eps == -1:
            b1, b2 = e1, e2
        elif r >= 0:
            b1, b2 = _add(e1, e2), e1
        else:
            b1, b2 = _sub(e1, e2), e1
    elif variant == COFACTOR2_D2:
        if d != 2:
            raise StructureError("cofactor-2 basis applies to the degree-2 family")
        if order % 2 == 0 or r % 2 == 0:
            raise StructureError("group structure inconsistent with variant: need N and r odd")
        h = _scale(e2, half)
        b1 = _neg(h)
        b2 = _add(e1, h) if eps * r >= 0 else _sub(e1, h)
    elif variant == COFACTOR4_D2:
        if d != 2:
            raise StructureError("cofactor-4 basis applies to the degree-2 family")
        if order % 2 == 0 or r % 2:
            raise StructureError("group structure inconsistent with variant: need N odd, r even")
        if eps == 1:
            b1 = _scale(_add(e1, e2) if r >= 0 else _sub(e1, e2), half)
            b2 = _scale(e2 if r >= 0 else _neg(e2), half)
        else:
            b1 = _scale(e1, half)
            b2 = _scale(e2 if r >= 0 else _neg(e2), half)
    elif variant == COFACTOR3_D3:
        if d != 3:
            raise StructureError("cofactor-3 basis applies to the degree-3 family")
        if order % 3 == 0 or (p + eps) % 3 or r % 3 == 0:
            raise StructureError(
                "group structure inconsistent with variant: need 3 | p+eps, 3 coprime to N and r"
            )
        b1 = _scale(e2, third)
        t = _scale(e2, Fraction(2, 3))
        b2 = _add(e1, t) if eps * r >= 0 else _sub(e1, t)
    else:
        raise DomainError(f"unknown basis variant {variant!r}")
    if not is_reduced(b1, b2):
        b1, b2 = lagrange_reduce(b1, b2)
    return GlvBasis(b1, b2, order, eigenvalue)


def reduced_lattice_basis(order: int, eigenvalue: int) -> GlvBasis:
    """Fallback: Gauss-reduce the defining generators (N, 0), (-lambda, 1)."""
    b1, b2 = lagrange_reduce((order, 0), (-eigenvalue, 1))
    return GlvBasis(b1, b2, order, eigenvalue)


@dataclass(frozen=True)
class Decomposition:
    a: int
    b: int

    @property
    def norm(self) -> int:
        return max(abs(self.a), abs(self.b))

    @property
    def bitlength(self) -> int:
        return self.norm.bit_length()


def decompose(m: int, basis: GlvBasis) -> Decomposition:
    """The shortest decomposition of m: solve alpha*b1 + beta*b2 = (m, 0)
    exactly, take the nearest lattice vector among the four floor/ceiling
    combinations, and subtract.

    Requires a reduced basis; the output norm is minimal over the whole
    coset and at most ||b2||.
    """
    b1, b2 = basis.b1, basis.b2
    if not is_reduced(b1, b2):
        raise StructureError("decompose requires a reduced basis")
    det = det2(b1, b2)
    alpha = Fraction(m * b2[1], det)
    beta = Fraction(-m * b1[1], det)
    best = None
    for qa in (floor(alpha), ceil(alpha)):
        for qb in (floor(beta), ceil(beta)):
            c = (qa * b1[0] + qb * b2[0], qa * b1[1] + qb * b2[1])
            cand = (m - c[0], -c[1])
            if best is None or infnorm(cand) < infnorm(best):
                best = cand
    a, b = best
    if (a + b * basis.eigenvalue - m) % basis.order:
        raise StructureError("decomposition failed its defining congruence")
    return Decomposition(a, b)


def multiexp2(a: int, b: int, P: Point, psiP: Point, curve: Curve) -> Point:
    """[a]P + [b]psiP by interleaved double-and-add with the joint table
    {0, P, psiP, P + psiP}; the loop length is the bitlength of max(|a|, |b|)."""
    if not curve.is_on(P) or not curve.is_on(psiP):
        raise DomainError("multiexponentiation operand is not on the curve")
    if a < 0:
        a, P = -a, curve.neg(P)
    if b < 0:
        b, psiP = -b, curve.neg(psiP)
    table = (INFINITY, P, psiP, curve._add(P, psiP))
    acc = INFINITY
    for i in range(max(a.bit_length(), b.bit_length()) - 1, -1, -1):
        acc = curve._add(acc, acc)
        idx = ((a >> i) & 1) | (((b >> i) & 1) << 1)
        if idx:
            acc = curve._add(acc, table[idx])
    return acc
