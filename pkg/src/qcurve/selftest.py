"""The self-test battery behind ``qcurve selftest``: small-prime invariant
checks for every module plus the two 128-bit example verifications.

Each check raises on failure; the CLI turns that into a named fail record.
"""

from __future__ import annotations

import random

from . import cmtables
from .families import Endo, build_family_curve, determine_r, eigenvalue, epsilon_p, gls_endo, group_orders, subfield_order
from .fields import FieldCtx, Fp2, is_probable_prime, legendre
from .glv import (
    COFACTOR2_D2,
    cofactor_basis,
    decompose,
    infnorm,
    multiexp2,
    reduced_lattice_basis,
)
from .models import (
    DIK_DOUBLING,
    dik_add,
    dik_point,
    edwards_add,
    edwards_point,
    ladder,
    psi_montgomery,
    to_dik,
    to_edwards,
    to_montgomery,
    to_xz,
)
from .weierstrass import Curve, curve_points, oracle_order, oracle_trace, random_point

MERSENNE_127 = 2**127 - 1

EXAMPLE_D2 = dict(s=28106, trace=-272082382382015736940757543628153813996)
EXAMPLE_D5 = dict(s=7930, trace=160084314926568661653252069280514036151)
EXAMPLE_D3_S = 10400


def _ctx(p: int) -> FieldCtx:
    if p % 4 == 3:
        return FieldCtx(p, p - 1)
    d = 2
    while legendre(d, p) != -1:
        d += 1
    return FieldCtx(p, d)


def _assert(cond, msg):
    if not cond:
        raise AssertionError(msg)


def check_field_axioms():
    ctx = _ctx(13)
    elems = [Fp2(ctx, a, b) for a in range(13) for b in range(13)]
    for x in elems:
        if x:
            _assert(x ** (13**2 - 1) == 1, f"x^(p^2-1) != 1 for {x}")
            _assert(x * x.inverse() == 1, f"x * x^-1 != 1 for {x}")
        _assert(x.conjugate().conjugate() == x, "conjugation is not an involution")
    rng = random.Random(1)
    big = FieldCtx(MERSENNE_127, -1)
    slow = FieldCtx(MERSENNE_127, -1, fast_reduce=False)
    for _ in range(32):
        a, b = rng.randrange(big.p), rng.randrange(big.p)
        c, d = rng.randrange(big.p), rng.randrange(big.p)
        x, y = Fp2(big, a, b), Fp2(big, c, d)
        xs, ys = Fp2(slow, a, b), Fp2(slow, c, d)
        prod = x * y
        _assert((prod.a, prod.b) == ((xs * ys).a, (xs * ys).b), "mersenne reduction mismatch")
        _assert(x.conjugate() * y.conjugate() == (x * y).conjugate(), "frobenius not a homomorphism")
        root = (x * x).sqrt()
        _assert(root is not None and root * root == x * x, "sqrt of a square failed")
    return "p=13 exhaustive, p=2^127-1 randomised"


def check_group_law():
    ctx = _ctx(5)
    curve = Curve(ctx.elem(1), ctx.elem(3))
    pts = curve_points(curve)
    rng = random.Random(2)
    for P in pts:
        _assert(curve.add(P, curve.neg(P)).is_infinity, "P + (-P) != 0")
    for _ in range(2000):
        P, Q, R = (pts[rng.randrange(len(pts))] for _ in range(3))
        _assert(
            curve.add(curve.add(P, Q), R) == curve.add(P, curve.add(Q, R)),
            "associativity failed",
        )
    n = oracle_order(curve)
    for P in pts:
        _assert(curve.mul(n, P).is_infinity, "[#E]P != 0")
    return f"{len(pts)} points over F_25"


def check_twist_counts():
    for p in (5, 7, 11, 13):
        ctx = _ctx(p)
        curve = Curve(ctx.elem(2), ctx.elem(3, 1))
        twist, _ = curve.quadratic_twist()
        _assert(
            oracle_order(curve) + oracle_order(twist) == 2 * (p**2 + 1),
            f"order sum wrong at p={p}",
        )
        _assert(oracle_trace(twist) == -oracle_trace(curve), f"twist trace at p={p}")
        _assert(twist.j_invariant() == curve.j_invariant(), "twist changed j")
    return "p in {5,7,11,13}"


def check_conjugate_composition():
    for d, p in ((2, 13), (3, 13), (5, 11), (7, 13)):
        ctx = _ctx(p)
        fam = build_family_curve(d, ctx, 1)
        eps = epsilon_p(d, p)
        sigma_phi = fam.phi.conjugate()
        for P in curve_points(fam.curve):
            _assert(
                sigma_phi(fam.phi(P)) == fam.curve.mul(eps * d, P),
                f"conjugate composition != [eps*d] for d={d}",
            )
    return "all degrees"


def check_family_identities():
    for d, p in ((2, 11), (3, 11), (5, 11), (7, 11)):
        ctx = _ctx(p)
        for s in (1, 2):
            try:
                fam = build_family_curve(d, ctx, s)
            except Exception:
                continue
            endo = Endo(fam)
            eps = endo.eps
            t = oracle_trace(fam.curve)
            r = determine_r(endo, t)
            n_curve, n_twist = group_orders(endo, r)
            _assert(n_curve == oracle_order(fam.curve), f"order formula d={d} s={s}")
            _assert(n_curve + n_twist == 2 * (p**2 + 1), "order sum")
            for P in curve_points(fam.curve):
                pP = endo(P)
                _assert(endo(pP) == fam.curve.mul(eps * d, P), f"psi^2 d={d} s={s}")
                _assert(fam.curve.mul(r, pP) == fam.curve.mul(p + eps, P), f"[r]psi d={d} s={s}")
    return "p=11, s in {1,2}"


def check_models():
    ctx = _ctx(7)
    for s in range(7):
        fam = build_family_curve(2, ctx, s)
        mont = to_montgomery(fam)
        if mont is None:
            continue
        endo = Endo(fam)
        pts = curve_points(fam.curve)
        n = len(pts)
        rng = random.Random(3)
        for P in pts:
            _assert(
                psi_montgomery(to_xz(mont, P), mont) == to_xz(mont, endo(P)),
                "x-line endomorphism mismatch",
            )
        for _ in range(24):
            P = pts[rng.randrange(n)]
            k = rng.randrange(2 * n)
            _assert(
                ladder(k, to_xz(mont, P), mont) == to_xz(mont, fam.curve.mul(k, P)),
                "ladder mismatch",
            )
        ed = to_edwards(fam)
        for _ in range(12):
            P, Q = pts[rng.randrange(n)], pts[rng.randrange(n)]
            try:
                ep, eq = edwards_point(ed, P), edwards_point(ed, Q)
                es = edwards_point(ed, fam.curve.add(P, Q))
            except Exception:
                continue
            _assert(edwards_add(ed, ep, eq) == es, "Edwards addition mismatch")
        dik = to_dik(fam, DIK_DOUBLING)
        if dik is not None:
            affine = [P for P in pts if not P.is_infinity]
            for _ in range(12):
                P, Q = affine[rng.randrange(len(affine))], affine[rng.randrange(len(affine))]
                lhs = dik_add(dik, dik_point(dik, P), dik_point(dik, Q))
                S = fam.curve.add(P, Q)
                rhs = None if S.is_infinity else dik_point(dik, S)
                _assert(lhs == rhs, "model addition mismatch")
        return f"p=7 s={s}"
    raise AssertionError("no Montgomery-representable parameter found")


def check_decompose_minimality():
    ctx = _ctx(13)
    fam = build_family_curve(2, ctx, 1)
    endo = Endo(fam)
    r = determine_r(endo, oracle_trace(fam.curve))
    n_curve, _ = group_orders(endo, r)
    n = n_curve >> 2
    _assert(n_curve == 4 * n and n % 2, "unexpected structure for the fixture curve")
    lam = eigenvalue(endo, r, n)
    basis = reduced_lattice_basis(n, lam)
    radius = infnorm(basis.b2)
    for m in range(n):
        dec = decompose(m, basis)
        best = min(
            max(abs(a), abs(b))
            for b in range(-radius, radius + 1)
            for a0 in [(m - b * lam) % n]
            for a in (a0, a0 - n)
            if abs(a) <= radius
        )
        _assert(dec.norm == best, f"not minimal at m={m}")
        _assert(dec.norm <= radius, "norm above ||b2||")
    return f"all {n} scalars"


def check_j_count():
    # p = 13 is excluded: there 13 | 65 degenerates the collision polynomial
    # and two of the exceptional j-invariants coincide mod p, so the clean
    # p / p-1 count does not hold.  The acceptance suite records that case.
    for p in (11, 17, 19):
        ctx = _ctx(p)
        js = {build_family_curve(2, ctx, s).curve.j_invariant() for s in range(p)}
        want = p if legendre(-7, p) == 1 else p - 1
        _assert(len(js) == want, f"j count {len(js)} != {want} at p={p}")
    return "p in {11,17,19}"


def check_cm_detection():
    for d, p in ((2, 13), (3, 13), (5, 11), (7, 13)):
        ctx = _ctx(p)
        for s in range(p):
            try:
                fam = build_family_curve(d, ctx, s)
            except Exception:
                continue
            expected = any(
                cmtables.fiber_matches(f, ctx, s) for f in cmtables.cm_fibers(d)
            )
            got = cmtables.detect_cm(fam) is not None
            _assert(got == expected, f"detection mismatch d={d} p={p} s={s}")
    return "exhaustive sweeps"


def check_cm_tables():
    count1, count2 = len(cmtables.TABLE1), len(cmtables.TABLE2)
    _assert((count1, count2) == (13, 29), "table row counts changed")
    checked = 0
    for d, fibers in cmtables.FIBERS.items():
        for fib in fibers:
            if not fib.constructible:
                continue
            hits = 0
            p = 11
            while hits < 3 and p < 400:
                p = _next_valid_prime(p, d)
                ctx = _ctx(p)
                s = cmtables.fiber_parameter(fib, ctx)
                if s is None:
                    continue
                try:
                    fam = build_family_curve(d, ctx, s)
                except Exception:
                    continue
                j = fam.curve.j_invariant()
                _assert(
                    j in cmtables.cm_j_candidates(fib.disc, ctx),
                    f"fiber j mismatch: d={d} disc={fib.disc} p={p}",
                )
                hits += 1
                checked += 1
            _assert(hits == 3, f"could not realise fiber {fib.disc} of d={d} at 3 primes")
    return f"{checked} fiber reductions"


def _next_valid_prime(p: int, d: int) -> int:
    while True:
        p += 2
        if not is_probable_prime(p):
            continue
        if d == 5 and p % 4 != 3:
            continue
        if d == 7 and p <= 7:
            continue
        return p


def check_gls():
    ctx = _ctx(11)
    endo = gls_endo(ctx, 3, 5)
    twisted = gls_endo(ctx, 3, 5, twisted=True)
    for P in curve_points(twisted.curve):
        _assert(twisted(twisted(P)) == twisted.curve.neg(P), "(psi')^2 != -pi")
    fixed = sum(
        1
        for P in curve_points(endo.curve)
        if P.is_infinity or endo(P) == P
    )
    t0 = 11 + 1 - subfield_order(ctx, 3, 5)
    _assert(fixed == 11 + 1 - t0, "fixed subgroup order mismatch")
    _assert(t0 * t0 - 2 * 11 == oracle_trace(endo.curve), "trace relation t0^2 - 2p")
    return "p=11"


def check_example_degree2():
    ctx = FieldCtx(MERSENNE_127, -1)
    fam = build_family_curve(2, ctx, EXAMPLE_D2["s"])
    endo = Endo(fam)
    _assert(endo.eps == 1, "eps != 1")
    r = determine_r(endo, EXAMPLE_D2["trace"])
    n_curve, n_twist = group_orders(endo, r)
    n, n2 = n_curve // 2, n_twist // 2
    _assert(n_curve == 2 * n and n_twist == 2 * n2, "orders not twice an integer")
    _assert(is_probable_prime(n) and is_probable_prime(n2), "halves not prime")
    _assert(n.bit_length() == 253 and n2.bit_length() == 253, "wrong bit sizes")
    lam = eigenvalue(endo, r, n)
    _assert(lam * lam % n == 2, "lambda^2 != 2")
    P = fam.curve.mul(2, random_point(fam.curve, 0))
    _assert(endo(P) == fam.curve.mul(lam, P), "psi != [lambda]")
    basis = cofactor_basis(COFACTOR2_D2, ctx.p, 1, 2, r, n, lam)
    rng = random.Random(4)
    for _ in range(20):
        dec = decompose(rng.randrange(n), basis)
        _assert(dec.norm < 2**127, "decomposition too long")
    m = rng.randrange(n)
    dec = decompose(m, basis)
    _assert(
        multiexp2(dec.a, dec.b, P, endo(P), fam.curve) == fam.curve.mul(m, P),
        "multiexp mismatch",
    )
    return "128-bit twist-secure instance"


def check_example_degree5():
    ctx = FieldCtx(MERSENNE_127, -1)
    fam = build_family_curve(5, ctx, EXAMPLE_D5["s"])
    endo = Endo(fam)
    r = determine_r(endo, EXAMPLE_D5["trace"])
    n_curve, n_twist = group_orders(endo, r)
    _assert(is_probable_prime(n_curve) and is_probable_prime(n_twist), "orders not prime")
    _assert(n_curve.bit_length() == 254 and n_twist.bit_length() == 254, "wrong bit sizes")
    lam = eigenvalue(endo, r, n_curve)
    _assert(lam * lam % n_curve == 5, "lambda^2 != 5")
    P = random_point(fam.curve, 0)
    _assert(endo(P) == fam.curve.mul(lam, P), "psi != [lambda]")
    return "prime-order curve and twist"


def check_example_degree3():
    ctx = FieldCtx(MERSENNE_127, -1)
    fam = build_family_curve(3, ctx, EXAMPLE_D3_S)
    _assert(fam.phi.codomain == fam.curve.conjugate(), "codomain != conjugate curve")
    endo = Endo(fam)
    _assert(endo.eps == -1, "eps != -1")
    for seed in range(5):
        P = random_point(fam.curve, seed)
        _assert(endo(endo(P)) == fam.curve.mul(-3, P), "psi^2 != [-3]")
    return "conjugate codomain bit-exact"


def all_checks():
    return [
        ("field_axioms", check_field_axioms),
        ("group_law", check_group_law),
        ("twist_counts", check_twist_counts),
        ("conjugate_composition", check_conjugate_composition),
        ("family_identities", check_family_identities),
        ("models", check_models),
        ("decompose_minimality", check_decompose_minimality),
        ("j_count", check_j_count),
        ("cm_detection", check_cm_detection),
        ("cm_tables", check_cm_tables),
        ("gls_case", check_gls),
        ("example_degree2", check_example_degree2),
        ("example_degree5", check_example_degree5),
        ("example_degree3", check_example_degree3),
    ]
