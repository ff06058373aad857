#!/usr/bin/env python3
"""Sweep the family parameter over a small prime field with the exhaustive
point-count oracle and report the cofactor profile of every curve/twist
pair, marking the twist-secure ones and the exceptional CM parameters.

Usage: python scripts/search_small.py [--d 2] [--p 13]
"""

import argparse

from qcurve.cmtables import detect_cm
from qcurve.errors import DomainError
from qcurve.families import Endo, build_family_curve, determine_r, group_orders
from qcurve.fields import FieldCtx, is_probable_prime, legendre
from qcurve.weierstrass import oracle_trace


def smallest_nonsquare(p):
    if p % 4 == 3:
        return p - 1
    d = 2
    while legendre(d, p) != -1:
        d += 1
    return d


def largest_prime_cofactor(n):
    c = 1
    while n % 2 == 0:
        n //= 2
        c *= 2
    while n % 3 == 0:
        n //= 3
        c *= 3
    return (c, n) if is_probable_prime(n) or n == 1 else (None, n)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--d", type=int, default=2, choices=(2, 3, 5, 7))
    parser.add_argument("--p", type=int, default=13)
    args = parser.parse_args()

    ctx = FieldCtx(args.p, smallest_nonsquare(args.p))
    print(f"d = {args.d}, p = {args.p}, delta = {ctx.delta}")
    print(f"{'s':>4} {'#E':>6} {'#twist':>6} {'trace':>6} {'r':>4}  profile")
    secure = []
    for s in range(args.p):
        try:
            fam = build_family_curve(args.d, ctx, s)
        except DomainError:
            continue
        endo = Endo(fam)
        trace = oracle_trace(fam.curve)
        r = determine_r(endo, trace)
        n_curve, n_twist = group_orders(endo, r)
        c1, q1 = largest_prime_cofactor(n_curve)
        c2, q2 = largest_prime_cofactor(n_twist)
        tags = []
        if c1 is not None and c2 is not None and q1 > 1 and q2 > 1:
            tags.append(f"{c1}*prime / {c2}*prime")
            secure.append((s, c1, c2))
        if r == 0:
            tags.append("supersingular")
        disc = detect_cm(fam)
        if disc:
            tags.append(f"CM -{disc[0]}*{disc[1]}^2")
        print(f"{s:>4} {n_curve:>6} {n_twist:>6} {trace:>6} {r:>4}  {'; '.join(tags)}")
    print(f"\n{len(secure)} parameters give near-prime curve/twist pairs")


if __name__ == "__main__":
    main()
