"""Command-line front end: moments, verifications, exact sequences.

Every command prints one machine-readable envelope per result (JSON object
per line, keys sorted) or an aligned table with --text.  Results are cached
under $BESSELMOMENTS_CACHE (default: the platform cache directory), one
file per key with atomic write-rename, so concurrent invocations never see
torn entries.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 precision/convergence failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from mpmath import mp, mpf

from . import __version__
from .hilbert import PV_FUNCTION_IDS, PVQuery, hilbert_image, hilbert_pv
from .precision import DomainError, PrecisionContext, PrecisionError
from .quadrature import MomentSpec, moment
from .sequences import (
    alpha,
    alpha_m,
    beta_m,
    broadhurst_roberts,
    crandall,
    domb,
    rogers_check,
)
from .sumrules import SumRuleSpec, SumRuleSpecError, crandall_numeric, verify_sum_rule

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_INVALID = 2
EXIT_PRECISION = 3

ENVELOPE_FIELDS = (
    "cache_hit",
    "command",
    "elapsed_ms",
    "error_bound",
    "inputs",
    "precision_digits",
    "value",
)


def format_value(x, digits: int) -> str:
    """Deterministic decimal rendering with `digits` significant digits."""
    with mp.workdps(digits + 10):
        return mp.nstr(mpf(x), digits)


def format_bound(x) -> str:
    with mp.workdps(15):
        x = mpf(x)
        return "0" if x == 0 else mp.nstr(x, 3)


def cache_dir() -> str:
    env = os.environ.get("BESSELMOMENTS_CACHE")
    if env:
        return env
    if sys.platform == "win32":
        base = os.environ.get("LOCALAPPDATA", os.path.expanduser("~"))
    else:
        base = os.environ.get("XDG_CACHE_HOME", os.path.expanduser("~/.cache"))
    return os.path.join(base, "besselmoments")


def _cache_key(command: str, inputs: Dict, digits: int) -> str:
    blob = json.dumps(
        {"command": command, "digits": digits, "inputs": inputs}, sort_keys=True
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_read(key: str) -> Optional[Dict]:
    path = os.path.join(cache_dir(), key + ".json")
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError):
        return None


def cache_write(key: str, payload: Dict) -> None:
    d = cache_dir()
    os.makedirs(d, exist_ok=True)
    path = os.path.join(d, key + ".json")
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, sort_keys=True)
        os.replace(tmp, path)
    except OSError:
        try:
            os.unlink(tmp)
        except OSError:
            pass


def make_envelope(
    command: str,
    inputs: Dict,
    digits: int,
    compute: Callable[[], Tuple[str, str]],
    use_cache: bool,
) -> Dict:
    """Run `compute` (or serve a cached result) and build the envelope."""
    key = _cache_key(command, inputs, digits)
    if use_cache:
        hit = cache_read(key)
        if hit is not None and hit.get("precision_digits", 0) >= digits:
            env = {k: hit[k] for k in ENVELOPE_FIELDS if k in hit}
            env["cache_hit"] = True
            env["elapsed_ms"] = 0
            return env
    t0 = time.monotonic()
    value, bound = compute()
    elapsed = int((time.monotonic() - t0) * 1000)
    env = {
        "cache_hit": False,
        "command": command,
        "elapsed_ms": elapsed,
        "error_bound": bound,
        "inputs": inputs,
        "precision_digits": digits,
        "value": value,
    }
    if use_cache:
        payload = dict(env)
        payload["created_at"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        cache_write(key, payload)
    return env


def emit(envelopes: List[Dict], as_text: bool) -> None:
    if as_text:
        wid = max((len(e["command"]) for e in envelopes), default=0)
        for e in envelopes:
            print(
                f"{e['command']:<{wid}}  value={e['value']}  "
                f"err<={e['error_bound']}  {e['elapsed_ms']}ms"
                f"{'  (cached)' if e['cache_hit'] else ''}"
            )
    else:
        for e in envelopes:
            print(json.dumps(e, sort_keys=True))


def envelope_passes(env: Dict) -> bool:
    """A verification envelope passes iff |value| <= error_bound."""
    with mp.workdps(40):
        return abs(mpf(env["value"])) <= mpf(env["error_bound"])


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_moment(args) -> int:
    digits = args.digits
    ctx = PrecisionContext(digits)
    spec = MomentSpec(args.a, args.b, args.c, args.pi_power).check_convergent()
    inputs = {
        "a": args.a,
        "b": args.b,
        "c": args.c,
        "max_level": args.max_level,
        "pi_power": args.pi_power,
        "split": args.split,
    }

    def compute():
        res = moment(spec, ctx, split=args.split, max_level=args.max_level)
        return format_value(res.value.value, digits), format_bound(res.value.err)

    env = make_envelope("moment", inputs, digits, compute, not args.no_cache)
    emit([env], args.text)
    return EXIT_OK


def _verify_one(selector: List[str], args, ctx: PrecisionContext) -> Dict:
    digits = args.digits
    kind = selector[0]
    if kind in ("Z", "Y"):
        n, k = int(selector[1]), int(selector[2])
        spec = SumRuleSpec(kind, n, k)
        inputs = {"family": kind, "fused": args.fused, "k": k, "n": n}

        def compute():
            rep = verify_sum_rule(spec, ctx, fused=args.fused, max_level=args.max_level)
            return (
                format_value(rep.value.value, digits),
                format_bound(rep.value.err),
            )

        return make_envelope(f"verify {kind} {n} {k}", inputs, digits, compute, not args.no_cache)

    if kind == "crandall":
        n = int(selector[1])
        exact = crandall(n)
        inputs = {"exact": str(exact), "fused": args.fused, "n": n}

        def compute():
            num = crandall_numeric(n, ctx, fused=args.fused)
            with ctx.workdps():
                resid = num.value - exact
            return format_value(resid, digits), format_bound(num.err)

        return make_envelope(f"verify crandall {n}", inputs, digits, compute, not args.no_cache)

    if kind == "hilbert":
        fid, xs = selector[1], selector[2]
        x = Fraction(xs)
        inputs = {"function_id": fid, "x": str(x)}

        def compute():
            pv = hilbert_pv(PVQuery(fid, x), ctx, max_level=args.max_level)
            image = hilbert_image(fid, x, ctx)
            with ctx.workdps():
                resid = pv.value - image.value
                bound = pv.err + image.err
            return format_value(resid, digits), format_bound(bound)

        return make_envelope(f"verify hilbert {fid} {xs}", inputs, digits, compute, not args.no_cache)

    if kind == "rogers":
        u = Fraction(selector[1])
        trunc = args.rogers_terms
        inputs = {"trunc": trunc, "u": str(u)}

        def compute():
            diff = rogers_check(u, trunc, ctx)
            return format_value(diff.value, digits), format_bound(diff.err)

        return make_envelope(f"verify rogers {u}", inputs, digits, compute, not args.no_cache)

    raise DomainError(f"unknown verify selector {kind!r}")


def _all_selectors(max_weight: int) -> List[List[str]]:
    out: List[List[str]] = []
    for n in range(2, max_weight // 2 + 1):
        for k in range(1, n // 2 + 1):
            out.append(["Z", str(n), str(k)])
    for n in range(3, max_weight // 2 + 1):
        for k in range(1, (n - 1) // 2 + 1):
            out.append(["Y", str(n), str(k)])
    out += [["crandall", "1"], ["crandall", "2"]]
    out += [["hilbert", fid, "1"] for fid in PV_FUNCTION_IDS]
    out += [["rogers", "1/16"]]
    return out


def cmd_verify(args) -> int:
    ctx = PrecisionContext(args.digits)
    sel = args.selector
    if not sel:
        raise DomainError("verify needs a selector (Z n k | Y n k | crandall n | "
                          "hilbert fn x | rogers u | all)")
    if sel[0] == "all":
        selectors = _all_selectors(args.max_weight)
    else:
        selectors = [sel]
    envelopes = [_verify_one(s, args, ctx) for s in selectors]
    emit(envelopes, args.text)
    return EXIT_OK if all(envelope_passes(e) for e in envelopes) else EXIT_VERIFY_FAIL


_SEQUENCES: Dict[str, Callable] = {
    "domb": lambda n, m: domb(n),
    "alpha": lambda n, m: alpha(n),
    "crandall": lambda n, m: crandall(n),
    "alpha_m": lambda n, m: alpha_m(m, n),
    "beta_m": lambda n, m: beta_m(m, n),
    "br": lambda n, m: broadhurst_roberts(m, n),
}


def _parse_range(text: str) -> Tuple[int, int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    v = int(text)
    return v, v


def cmd_sequence(args) -> int:
    fn = _SEQUENCES.get(args.name)
    if fn is None:
        raise DomainError(f"unknown sequence {args.name!r}; "
                          f"choose from {sorted(_SEQUENCES)}")
    lo, hi = _parse_range(args.range)
    if hi < lo or lo < 0:
        raise DomainError(f"bad range {args.range!r}")
    envelopes = []
    for n in range(lo, hi + 1):
        inputs = {"m": args.m, "n": n, "name": args.name}

        def compute(n=n):
            val = fn(n, args.m)
            text = str(val) if not isinstance(val, Fraction) else f"{val.numerator}/{val.denominator}"
            return text, "0"

        envelopes.append(
            make_envelope(f"sequence {args.name} {n}", inputs, args.digits, compute, not args.no_cache)
        )
    emit(envelopes, args.text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="besselmoments",
        description="Arbitrary-precision Bessel moments, sum-rule verification, "
                    "and exact moment-adjacent integer sequences.",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--digits", type=int, default=50,
                        help="target decimal digits (default 50)")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="text", action="store_false", default=False,
                         help="one JSON envelope per line (default)")
        fmt.add_argument("--text", dest="text", action="store_true",
                         help="human-readable table")
        sp.add_argument("--no-cache", action="store_true",
                        help="bypass the result cache")
        sp.add_argument("--max-level", type=int, default=12,
                        help="quadrature refinement level cap (default 12)")

    mp_ = sub.add_parser("moment", help="compute pi^p * IKM(a,b;c)")
    mp_.add_argument("a", type=int)
    mp_.add_argument("b", type=int)
    mp_.add_argument("c", type=int)
    mp_.add_argument("--pi-power", type=int, default=0)
    mp_.add_argument("--split", type=float, default=1.0,
                     help="domain split point between the DE maps")
    common(mp_)
    mp_.set_defaults(func=cmd_moment)

    vp = sub.add_parser("verify", help="verify a sum rule or identity")
    vp.add_argument("selector", nargs="*",
                    help="Z n k | Y n k | crandall n | hilbert fn x | rogers u | all")
    vp.add_argument("--fused", action="store_true",
                    help="integrate sum rules as one fused integrand")
    vp.add_argument("--max-weight", type=int, default=8,
                    help="with 'all': largest 2n for the Z/Y families")
    vp.add_argument("--rogers-terms", type=int, default=150,
                    help="truncation order of the exact series side")
    common(vp)
    vp.set_defaults(func=cmd_verify)

    qp = sub.add_parser("sequence", help="exact integer/rational sequences")
    qp.add_argument("name", help="domb | alpha | crandall | alpha_m | beta_m | br")
    qp.add_argument("range", help="index or lo..hi")
    qp.add_argument("--m", type=int, default=1,
                    help="order m for alpha_m/beta_m, M for br")
    common(qp)
    qp.set_defaults(func=cmd_sequence)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; normalize other codes
        return EXIT_INVALID if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except (DomainError, SumRuleSpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PrecisionError as exc:
        print(f"precision failure: {exc}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
