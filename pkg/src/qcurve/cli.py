"""Command-line front end: curve construction and inspection, scalar
decomposition, small-prime search, table dumps, and a self-test battery.

Output is one structured record per line, either key=value pairs or JSON
(--json); big integers are decimal strings and field elements print as
"a+b*i".  Exit codes: 0 ok, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import json
import shlex
import sys

from . import selftest as _selftest_mod
from .cmtables import FIBERS, TABLE1, TABLE2, detect_cm
from .errors import DomainError, OracleGuardError, StructureError, SupersingularError
from .families import Endo, build_family_curve, determine_r, eigenvalue, group_orders
from .fields import FieldCtx, format_fp2, is_probable_prime
from .glv import (
    COFACTOR2_D2,
    COFACTOR3_D3,
    COFACTOR4_D2,
    PRIME_ORDER,
    ceil_log2,
    cofactor_basis,
    decompose,
    infnorm,
    multiexp2,
    reduced_lattice_basis,
)
from .weierstrass import ORACLE_MAX_P, oracle_trace, random_point

TRIAL_DIVISION_BOUND = 1 << 20


def _emit(record: dict, json_mode: bool, stream=None):
    stream = stream or sys.stdout
    if json_mode:
        stream.write(json.dumps(record, separators=(",", ":")) + "\n")
    else:
        parts = []
        for k, v in record.items():
            text = str(v)
            if any(c.isspace() for c in text):
                text = shlex.quote(text)
            parts.append(f"{k}={text}")
        stream.write(" ".join(parts) + "\n")
    stream.flush()


def _error_code(exc: Exception) -> str:
    name = type(exc).__name__
    if name.endswith("Error"):
        name = name[: -len("Error")]
    out = []
    for ch in name:
        if ch.isupper() and out:
            out.append("_")
        out.append(ch.lower())
    return "".join(out)


def trial_factor(n: int, bound: int = TRIAL_DIVISION_BOUND) -> tuple[list[tuple[int, int]], int]:
    """Trial division up to the bound; returns (factors, remainder).

    The remainder is 1 when n splits completely; a remainder whose least
    factor provably exceeds the bound is left for Miller-Rabin.
    """
    factors = []
    q = 2
    while q <= bound and q * q <= n:
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            factors.append((q, e))
        q += 1 if q == 2 else 2
    if n > 1 and q * q > n:
        factors.append((n, 1))  # proven prime by the exhausted range
        n = 1
    return factors, n


def factor_string(n: int) -> str:
    """Cofactor factorisation for reports: trial division to 2^20 plus a
    Miller-Rabin verdict on the remainder."""
    if n == 1:
        return "1"
    factors, rest = trial_factor(n)
    parts = [f"{q}^{e}" if e > 1 else str(q) for q, e in factors]
    if rest > 1:
        tag = "probable_prime" if is_probable_prime(rest) else "composite"
        parts.append(f"{rest}({tag})")
    return "*".join(parts)


def _field_ctx(args) -> FieldCtx:
    return FieldCtx(args.p, args.delta)


def _resolve_trace(fam, supplied: int | None) -> int | None:
    """Trace from the flag, the oracle, or both (cross-checked)."""
    oracle_t = None
    if fam.ctx.p <= ORACLE_MAX_P:
        oracle_t = oracle_trace(fam.curve)
    if supplied is not None:
        if oracle_t is not None and oracle_t != supplied:
            raise DomainError(
                f"supplied trace {supplied} contradicts the oracle trace {oracle_t}"
            )
        return supplied
    return oracle_t


def choose_subgroup(fam, endo, r: int, order: int):
    """(variant, N): the basis variant matching the group structure, or
    (None, N) for the generic reduced-lattice fallback."""
    if r == 0:
        raise SupersingularError("supersingular curve: no scalar decomposition")
    if fam.d == 2:
        k = (order & -order).bit_length() - 1
        odd = order >> k
        if k == 1:
            return COFACTOR2_D2, odd
        if k == 2 and fam.constant.is_square():
            return COFACTOR4_D2, odd
    elif fam.d == 3:
        if order % 3 == 0 and (order // 3) % 3:
            return COFACTOR3_D3, order // 3
    elif is_probable_prime(order):
        return PRIME_ORDER, order
    factors, rest = trial_factor(order)
    if rest > 1:
        n = rest
    else:
        q, e = max(factors)
        if e > 1:
            raise StructureError("no dominant cyclic subgroup for decomposition")
        n = q
    if (order // n) % n == 0:
        raise StructureError("ambiguous subgroup structure")
    return None, n


def _basis_for(variant, p, eps, d, r, n, lam):
    if variant is None:
        return reduced_lattice_basis(n, lam)
    return cofactor_basis(variant, p, eps, d, r, n, lam)


def _variant_bound_bits(variant, p, eps, r, basis) -> int:
    if variant == PRIME_ORDER:
        return ceil_log2(p + eps)
    if variant == COFACTOR2_D2:
        return ceil_log2(p + eps - abs(r))
    if variant == COFACTOR4_D2:
        return ceil_log2(p + eps) - 1
    if variant == COFACTOR3_D3:
        return ceil_log2(p + eps - 2 * abs(r))
    return basis.bitlength


def _analyze(args):
    """Shared construction pipeline for info/decompose."""
    ctx = _field_ctx(args)
    fam = build_family_curve(args.d, ctx, args.s)
    endo = Endo(fam)
    record = {
        "command": None,
        "p": ctx.p,
        "delta": ctx.delta,
        "d": args.d,
        "s": fam.s,
        "A": format_fp2(fam.curve.A),
        "B": format_fp2(fam.curve.B),
        "j": format_fp2(fam.curve.j_invariant()),
        "eps": endo.eps,
    }
    disc = detect_cm(fam)
    record["cm_fiber"] = f"-{disc[0]}*{disc[1]}^2" if disc else "none"
    trace = _resolve_trace(fam, args.trace)
    if trace is None:
        return fam, endo, record, None
    r = determine_r(endo, trace)
    n_curve, n_twist = group_orders(endo, r)
    record.update(
        trace=trace,
        r=r,
        order=n_curve,
        twist_order=n_twist,
        order_factors=factor_string(n_curve),
        twist_order_factors=factor_string(n_twist),
    )
    try:
        variant, n_sub = choose_subgroup(fam, endo, r, n_curve)
    except SupersingularError:
        record["supersingular"] = "true"
        return fam, endo, record, None
    lam = eigenvalue(endo, r, n_sub)
    basis = _basis_for(variant, ctx.p, endo.eps, fam.d, r, n_sub, lam)
    record.update(
        subgroup_order=n_sub,
        **{"lambda": lam},
        basis_variant=variant or "reduced_lattice",
        b1=f"({basis.b1[0]},{basis.b1[1]})",
        b2=f"({basis.b2[0]},{basis.b2[1]})",
        basis_bitlength=basis.bitlength,
        bound_bitlength=_variant_bound_bits(variant, ctx.p, endo.eps, r, basis),
    )
    return fam, endo, record, (r, n_sub, lam, basis, variant)


def cmd_info(args) -> int:
    fam, endo, record, _ = _analyze(args)
    record["command"] = "info"
    record["status"] = "ok"
    _emit(record, args.json)
    return 0


def _subgroup_point(fam, endo, n_curve, n_sub, seed):
    curve = fam.curve
    for s in range(seed, seed + 64):
        P = curve.mul(n_curve // n_sub, random_point(curve, s))
        if not P.is_infinity:
            return P
    raise DomainError("could not find a point of the subgroup order")


def cmd_decompose(args) -> int:
    if args.m is None:
        raise DomainError("decompose requires --m")
    fam, endo, record, data = _analyze(args)
    if data is None:
        if record.get("supersingular"):
            raise SupersingularError("supersingular curve: no scalar decomposition")
        raise DomainError("decompose requires a trace (supply --trace or use p <= 64)")
    r, n_sub, lam, basis, variant = data
    record["command"] = "decompose"
    m = args.m % n_sub
    dec = decompose(m, basis)
    record.update(m=m, a=dec.a, b=dec.b, norm=dec.norm, norm_bitlength=dec.bitlength)
    p = fam.ctx.p
    if p <= ORACLE_MAX_P:
        n_curve = record["order"]
        P = _subgroup_point(fam, endo, n_curve, n_sub, args.seed)
        ok = multiexp2(dec.a, dec.b, P, endo(P), fam.curve) == fam.curve.mul(m, P)
        record["multiexp_check"] = "ok" if ok else "FAIL"
        if args.exhaustive:
            record["exhaustive_minimal"] = _exhaustive_minimality(basis, n_sub, lam)
    _emit_status(record, args.json)
    return 0 if record.get("multiexp_check", "ok") == "ok" else 1


def _exhaustive_minimality(basis, n, lam) -> str:
    radius = infnorm(basis.b2)
    for m in range(n):
        dec = decompose(m, basis)
        best = None
        for b in range(-radius, radius + 1):
            a0 = (m - b * lam) % n
            for a in (a0, a0 - n):
                if abs(a) <= radius:
                    cand = max(abs(a), abs(b))
                    if best is None or cand < best:
                        best = cand
        if dec.norm != best:
            return f"FAIL at m={m}"
    return f"all {n} scalars minimal"


def _emit_status(record, json_mode):
    failed = any("FAIL" in str(v) for v in record.values())
    record["status"] = "error" if failed else "ok"
    _emit(record, json_mode)


def cmd_search(args) -> int:
    ctx = _field_ctx(args)
    p = ctx.p
    if p > ORACLE_MAX_P:
        raise OracleGuardError(f"search sweeps require p <= {ORACLE_MAX_P}")
    emitted = 0
    for s in range(p):
        try:
            fam = build_family_curve(args.d, ctx, s)
        except DomainError:
            continue
        endo = Endo(fam)
        trace = oracle_trace(fam.curve)
        r = determine_r(endo, trace)
        n_curve, n_twist = group_orders(endo, r)
        if not _cofactor_ok(n_curve, args.cofactor):
            continue
        if not _cofactor_ok(n_twist, args.twist_cofactor):
            continue
        record = {
            "command": "search",
            "p": p,
            "d": args.d,
            "s": s,
            "trace": trace,
            "r": r,
            "eps": endo.eps,
            "order": n_curve,
            "twist_order": n_twist,
            "order_factors": factor_string(n_curve),
            "twist_order_factors": factor_string(n_twist),
            "j": format_fp2(fam.curve.j_invariant()),
            "status": "ok",
        }
        disc = detect_cm(fam)
        record["cm_fiber"] = f"-{disc[0]}*{disc[1]}^2" if disc else "none"
        _emit(record, args.json)
        emitted += 1
    _emit({"command": "search", "records": emitted, "status": "ok"}, args.json)
    return 0


def _cofactor_ok(order: int, cofactor: int | None) -> bool:
    if cofactor is None:
        return True
    return order % cofactor == 0 and is_probable_prime(order // cofactor)


def cmd_tables(args) -> int:
    for d, fibers in sorted(FIBERS.items()):
        for fib in fibers:
            record = {"command": "tables", "kind": "fiber", "d": d}
            if not fib.constructible:
                record["parameter"] = "infinity"
            elif fib.sign_free:
                record["parameter"] = f"+-({fib.coeff})*sqrt({fib.radicand})"
            else:
                record["parameter"] = f"s={fib.coeff}"
            record["disc"] = f"-{fib.disc[0]}*{fib.disc[1]}^2"
            _emit(record, args.json)
    for (d0, f), j in sorted(TABLE1.items()):
        _emit(
            {"command": "tables", "kind": "class_number_1", "disc": f"-{d0}*{f}^2", "j": j},
            args.json,
        )
    for (d0, f), (pref, c0, c1, rad) in sorted(TABLE2.items()):
        _emit(
            {
                "command": "tables",
                "kind": "class_number_2",
                "disc": f"-{d0}*{f}^2",
                "j": f"({pref})*({c0}+-{c1}*sqrt({rad}))",
            },
            args.json,
        )
    return 0


def cmd_selftest(args) -> int:
    failures = 0
    for name, fn in _selftest_mod.all_checks():
        try:
            detail = fn()
            record = {"command": "selftest", "check": name, "status": "pass"}
            if detail:
                record["detail"] = detail
        except Exception as exc:  # noqa: BLE001 - every failure becomes a record
            failures += 1
            record = {
                "command": "selftest",
                "check": name,
                "status": "fail",
                "error": _error_code(exc),
                "message": str(exc),
            }
        _emit(record, args.json)
    _emit(
        {"command": "selftest", "failures": failures, "status": "ok" if not failures else "error"},
        args.json,
    )
    return 0 if not failures else 1


def _add_common(sub, *, need_s=True):
    sub.add_argument("--p", type=int, required=True, help="prime modulus")
    sub.add_argument("--delta", type=int, required=True, help="nonsquare mod p (signed ok)")
    sub.add_argument("--d", type=int, required=True, choices=(2, 3, 5, 7), help="family degree")
    if need_s:
        sub.add_argument("--s", type=int, required=True, help="family parameter")
    sub.add_argument("--seed", type=int, default=0, help="seed for derived points")
    sub.add_argument("--json", action="store_true", help="JSON records instead of key=value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcurve",
        description="curves over F_{p^2} with fast endomorphisms and scalar decompositions",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    info = subs.add_parser("info", help="construct a family curve and report its data")
    _add_common(info)
    info.add_argument("--trace", type=int, help="Frobenius trace over F_{p^2} (signed)")
    info.set_defaults(fn=cmd_info)

    dec = subs.add_parser("decompose", help="decompose a scalar for the endomorphism")
    _add_common(dec)
    dec.add_argument("--trace", type=int, help="Frobenius trace over F_{p^2} (signed)")
    dec.add_argument("--m", type=int, required=True, help="scalar to decompose")
    dec.add_argument("--exhaustive", action="store_true", help="verify minimality for all m")
    dec.set_defaults(fn=cmd_decompose)

    search = subs.add_parser("search", help="sweep s over F_p with the exhaustive oracle")
    _add_common(search, need_s=False)
    search.add_argument("--cofactor", type=int, help="require order = cofactor * prime")
    search.add_argument("--twist-cofactor", type=int, help="same for the twist order")
    search.set_defaults(fn=cmd_search)

    tables = subs.add_parser("tables", help="dump the CM fiber and j-invariant tables")
    tables.add_argument("--json", action="store_true")
    tables.set_defaults(fn=cmd_tables)

    st = subs.add_parser("selftest", help="run the invariant suite and example checks")
    st.add_argument("--json", action="store_true")
    st.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BrokenPipeError:
        # Downstream closed the pipe (e.g. | head); suppress the shutdown noise.
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except DomainError as exc:
        _emit(
            {
                "command": args.command,
                "status": "error",
                "error": _error_code(exc),
                "message": str(exc),
            },
            getattr(args, "json", False),
        )
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
