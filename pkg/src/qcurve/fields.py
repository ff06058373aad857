"""Arithmetic in F_p and F_{p^2} = F_p(sqrt(D)) for prime moduli up to 128 bits.

The quadratic extension is realised concretely: an element is a pair (a, b)
standing for a + b*sqrt(D), where D is a fixed quadratic nonresidue mod p.
Values are immutable and every operation returns a fresh object, so contexts
and elements may be shared freely between threads.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

from .errors import DomainError, NotInertError, NotPrimeError

MAX_MODULUS_BITS = 128
MR_ROUNDS = 64

# Fixed seed so the Miller-Rabin bases (and hence "probable prime" verdicts)
# are reproducible across runs.
_MR_SEED = 0x9E3779B97F4A7C15

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int, rounds: int = MR_ROUNDS) -> bool:
    """Miller-Rabin with a fixed pseudo-random base schedule."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = random.Random(_MR_SEED)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def legendre(n: int, p: int) -> int:
    """Legendre symbol (n|p) by Euler's criterion.

    The caller guarantees p is an odd prime; context construction validates
    primality once so per-call checks stay cheap.
    """
    if p < 3 or p % 2 == 0:
        raise NotPrimeError(f"modulus {p} is not an odd prime")
    r = pow(n % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def sqrt_mod_prime(n: int, p: int) -> int | None:
    """A square root of n mod p (odd prime), or None for a nonresidue.

    Deterministic: Tonelli-Shanks with the smallest nonresidue as generator.
    """
    n %= p
    if n == 0:
        return 0
    if legendre(n, p) != 1:
        return None
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    # Tonelli-Shanks.
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m = s
    c = pow(z, q, p)
    t = pow(n, q, p)
    r = pow(n, (q + 1) // 2, p)
    while t != 1:
        t2 = t
        i = 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return r


@dataclass(frozen=True)
class FieldCtx:
    """The field F_{p^2} = F_p(sqrt(delta)): prime modulus plus nonresidue.

    ``fast_reduce`` enables a fold-high-bits reduction when p is a Mersenne
    prime; disabling it routes everything through generic remainders, which
    must give identical results.
    """

    p: int
    delta: int
    fast_reduce: bool = field(default=True, compare=False)

    def __post_init__(self):
        p = self.p
        if not isinstance(p, int) or p <= 3:
            raise DomainError(f"modulus must be a prime greater than 3, got {p}")
        if p.bit_length() > MAX_MODULUS_BITS:
            raise DomainError(f"modulus exceeds {MAX_MODULUS_BITS} bits")
        if not is_probable_prime(p):
            raise NotPrimeError(f"modulus {p} failed {MR_ROUNDS}-round Miller-Rabin")
        object.__setattr__(self, "delta", self.delta % p)
        if legendre(self.delta, p) != -1:
            raise NotInertError(f"delta={self.delta} is a square mod {p}")
        bits = p.bit_length()
        mersenne = bits if (self.fast_reduce and p == (1 << bits) - 1) else 0
        object.__setattr__(self, "_mersenne_bits", mersenne)
        object.__setattr__(self, "_nonsquare_cache", None)

    def reduce(self, x: int) -> int:
        k = self._mersenne_bits
        if k and x >= 0:
            p = self.p
            while x > p:
                x = (x >> k) + (x & p)
            return x if x < p else 0
        return x % self.p

    def elem(self, a: int | Fp2, b: int = 0) -> "Fp2":
        if isinstance(a, Fp2):
            if b:
                raise DomainError("cannot combine an element with an extra part")
            return self.coerce(a)
        return Fp2(self, a, b)

    def coerce(self, x: "Fp2") -> "Fp2":
        if x.ctx is self or (x.ctx.p == self.p and x.ctx.delta == self.delta):
            return x
        raise DomainError("element belongs to a different field")

    def zero(self) -> "Fp2":
        return Fp2(self, 0, 0)

    def one(self) -> "Fp2":
        return Fp2(self, 1, 0)

    def sqrt_delta(self) -> "Fp2":
        return Fp2(self, 0, 1)

    def nonsquare(self) -> "Fp2":
        """The canonical nonsquare of F_{p^2}: the first nonsquare in the
        ordering (0+1i), (1+1i), (2+1i), ..., continuing through (a+bi) rows."""
        cached = self._nonsquare_cache
        if cached is not None:
            return cached
        for b in range(1, self.p):
            for a in range(self.p):
                cand = Fp2(self, a, b)
                if not cand.is_square():
                    object.__setattr__(self, "_nonsquare_cache", cand)
                    return cand
        raise DomainError("no nonsquare found")  # unreachable for p > 3


class Fp2:
    """An element a + b*sqrt(delta) of F_{p^2}, with 0 <= a, b < p."""

    __slots__ = ("a", "b", "ctx")

    def __init__(self, ctx: FieldCtx, a: int, b: int = 0):
        self.ctx = ctx
        self.a = a % ctx.p
        self.b = b % ctx.p

    def _pair(self, other) -> tuple[int, int]:
        if isinstance(other, Fp2):
            o = self.ctx.coerce(other)
            return o.a, o.b
        if isinstance(other, int):
            return other % self.ctx.p, 0
        return NotImplemented, None

    def __add__(self, other):
        oa, ob = self._pair(other)
        if oa is NotImplemented:
            return NotImplemented
        r = self.ctx.reduce
        return Fp2(self.ctx, r(self.a + oa), r(self.b + ob))

    __radd__ = __add__

    def __sub__(self, other):
        oa, ob = self._pair(other)
        if oa is NotImplemented:
            return NotImplemented
        p = self.ctx.p
        return Fp2(self.ctx, self.a - oa + p, self.b - ob + p)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self):
        p = self.ctx.p
        return Fp2(self.ctx, p - self.a if self.a else 0, p - self.b if self.b else 0)

    def __mul__(self, other):
        oa, ob = self._pair(other)
        if oa is NotImplemented:
            return NotImplemented
        ctx = self.ctx
        r = ctx.reduce
        a1, b1 = self.a, self.b
        t1 = a1 * oa
        t2 = b1 * ob
        na = r(t1 + ctx.delta * r(t2))
        nb = r((a1 + b1) * (oa + ob) - t1 - t2)
        return Fp2(ctx, na, nb)

    __rmul__ = __mul__

    def inverse(self) -> "Fp2":
        ctx = self.ctx
        p = ctx.p
        r = ctx.reduce
        n = r(self.a * self.a + (p - ctx.delta) * r(self.b * self.b))
        if n == 0:
            raise ZeroDivisionError("inverse of zero in F_{p^2}")
        ni = pow(n, -1, p)
        return Fp2(ctx, r(self.a * ni), r((p - self.b) * ni) if self.b else 0)

    def __truediv__(self, other):
        oa, ob = self._pair(other)
        if oa is NotImplemented:
            return NotImplemented
        return self * Fp2(self.ctx, oa, ob).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self
        if e < 0:
            base = self.inverse()
            e = -e
        acc = Fp2(self.ctx, 1, 0)
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, Fp2):
            return (
                self.a == other.a
                and self.b == other.b
                and self.ctx.p == other.ctx.p
                and self.ctx.delta == other.ctx.delta
            )
        if isinstance(other, int):
            return self.b == 0 and self.a == other % self.ctx.p
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.ctx.p, self.ctx.delta))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def conjugate(self) -> "Fp2":
        """The p-power map a + b*sqrt(D) -> a - b*sqrt(D); equals x**p."""
        p = self.ctx.p
        return Fp2(self.ctx, self.a, p - self.b if self.b else 0)

    def norm(self) -> int:
        """a^2 - D*b^2 in F_p, the norm down to the base field."""
        ctx = self.ctx
        r = ctx.reduce
        return r(self.a * self.a + (ctx.p - ctx.delta) * r(self.b * self.b))

    def is_square(self) -> bool:
        """True iff the element has a square root in F_{p^2}.

        Nonzero x is a square exactly when its norm is a square in F_p.
        """
        if not self:
            return True
        return legendre(self.norm(), self.ctx.p) == 1

    def sqrt(self) -> "Fp2 | None":
        """The canonical square root, or None for a nonsquare.

        Canonical means the root whose (a, b) pair is lexicographically
        smallest among the two candidates, compared as integers.
        """
        ctx = self.ctx
        p = ctx.p
        if not self:
            return ctx.zero()
        if self.b == 0:
            u = sqrt_mod_prime(self.a, p)
            if u is not None:
                return _canonical_root(Fp2(ctx, u, 0))
            # a is a nonresidue, so a/delta is a residue and the root is v*sqrt(D).
            v = sqrt_mod_prime(self.a * pow(ctx.delta, -1, p) % p, p)
            return _canonical_root(Fp2(ctx, 0, v))
        n = self.norm()
        if legendre(n, p) != 1:
            return None
        m = sqrt_mod_prime(n, p)
        half = pow(2, -1, p)
        u2 = (self.a + m) * half % p
        if legendre(u2, p) != 1:
            u2 = (self.a - m) * half % p
        u = sqrt_mod_prime(u2, p)
        v = self.b * pow(2 * u % p, -1, p) % p
        return _canonical_root(Fp2(ctx, u, v))

    def __str__(self):
        return format_fp2(self)

    def __repr__(self):
        return f"Fp2({self.a}+{self.b}*i mod {self.ctx.p})"


def _canonical_root(r: Fp2) -> Fp2:
    s = -r
    return r if (r.a, r.b) <= (s.a, s.b) else s


def frobenius(x: Fp2) -> Fp2:
    return x.conjugate()


def format_fp2(x: Fp2) -> str:
    return f"{x.a}+{x.b}*i"


_FP2_RE = re.compile(r"^([+-]?\d+)(?:([+-]\d+)\*i)?$")


def parse_fp2(ctx: FieldCtx, text: str) -> Fp2:
    """Parse "a+b*i" (or a bare "a") into a field element."""
    m = _FP2_RE.match(text.replace(" ", ""))
    if not m:
        raise DomainError(f"cannot parse field element {text!r}")
    a = int(m.group(1))
    b = int(m.group(2)) if m.group(2) else 0
    return Fp2(ctx, a, b)
