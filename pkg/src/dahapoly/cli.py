"""Command-line front end.

Output is deterministic for a fixed configuration: polynomial terms come out in a fixed
monomial order, reduced words are chosen by a fixed rule and worker results are
collected in submission order.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import repstructure, suites
from .errors import ParameterError, PoleError, PreconditionError
from .koornwinder import (
    MEMO_ENV, chi0_direct, chi0_recurrence, chi0_star, chi0_star_closed, compute_E,
    duality_sides, set_memo_capacity,
)
from .modified import ModPoly, arrow, build_along, build_basis_element, check_generalized_eigen
from .params import FAMILY_KINDS, Family, ParamScalar, format_laurent, spec_factors, spec_from_string
from .polyrep import XLaurent
from .weights import Weight, box, quotient_data

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class SessionConfig:
    n: int = 2
    spec: str | None = None
    format: str | None = None
    window: int | None = None
    memo_capacity: int | None = None
    threads: int = 1
    seed: int = 0

    def validate(self):
        if self.n < 2:
            raise ParameterError("rank n must be at least 2")
        if self.threads < 1:
            raise ParameterError("thread count must be positive")
        if self.window is not None and self.window < 0:
            raise ParameterError("window must be nonnegative")

    def pool(self):
        """Ordered map over a worker pool of the configured size."""
        if self.threads == 1:
            return lambda fn, items: [fn(x) for x in items]

        def run(fn, items):
            with ThreadPoolExecutor(max_workers=self.threads) as ex:
                return list(ex.map(fn, items))
        return run


_CONFIG_KEYS = {"n": int, "spec": str, "format": str, "window": int, "memo_capacity": int,
                "threads": int, "seed": int}


def read_config(path):
    """Parse ``key = value`` lines; blank lines and ``#`` comments are ignored."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            key = key.strip().replace("-", "_")
            if not sep or key not in _CONFIG_KEYS:
                raise ParameterError(f"{path}:{lineno}: unrecognized entry {line!r}")
            try:
                values[key] = _CONFIG_KEYS[key](val.strip())
            except ValueError:
                raise ParameterError(f"{path}:{lineno}: bad value for {key}") from None
    return values


def _weight(text):
    try:
        return Weight(tuple(int(x) for x in text.split(",")))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _word(text):
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated indices, got {text!r}") from None


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def _dump(obj):
    return json.dumps(obj, separators=(",", ": "), default=_json_default)


def _json_default(obj):
    if isinstance(obj, (ParamScalar, XLaurent)):
        return obj.to_json()
    if isinstance(obj, Weight):
        return list(obj)
    return str(obj)


def _emit(out, payload, pretty, fmt):
    if fmt == "json":
        out.write(_dump(payload) + "\n")
    else:
        out.write(pretty + ("" if pretty.endswith("\n") else "\n"))


def _scalar_text(c):
    if c.den.nterms() == 1 and str(format_laurent(c.den)) == "1":
        return format_laurent(c.num)
    return f"({format_laurent(c.num)}) / ({format_laurent(c.den)})"


def _table(rows):
    return "\n".join("  ".join(str(x) for x in row) for row in rows)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _check_rank(lam, cfg):
    if lam.n != cfg.n:
        raise ParameterError(f"weight {list(lam)} has {lam.n} entries but n = {cfg.n}")


def _spec(cfg, default=None, n=None):
    text = cfg.spec or default
    if not text:
        raise ParameterError("a specialization is required (--spec kind:key=value,...)")
    return spec_from_string(text, n or cfg.n)


def cmd_koornwinder_E(args, cfg, out):
    _check_rank(args.lam, cfg)
    p = compute_E(args.lam, dual=args.dual)
    payload = {"lambda": list(p.lam), "dual": p.dual, "poly": p.body.to_json()}
    _emit(out, payload, p.body.pretty(), cfg.format or "pretty")
    return EXIT_OK


def cmd_koornwinder_chi0(args, cfg, out):
    _check_rank(args.lam, cfg)
    values = {"walk": chi0_star(args.lam), "recurrence": chi0_recurrence(args.lam)}
    if args.lam.is_dominant():
        values["closed"] = chi0_star_closed(args.lam)
    if args.direct:
        values["direct"] = chi0_direct(args.lam)
    first = values["recurrence"]
    agree = all(v == first for v in values.values())
    payload = {"lambda": list(args.lam), "agree": agree,
               "value": first.to_json(), "routes": sorted(values)}
    pretty = f"{_scalar_text(first)}\nroutes agree: {agree} ({', '.join(sorted(values))})"
    _emit(out, payload, pretty, cfg.format or "pretty")
    return EXIT_OK if agree else EXIT_FAIL


def cmd_koornwinder_duality(args, cfg, out):
    _check_rank(args.lam, cfg)
    _check_rank(args.mu, cfg)
    left, right = duality_sides(args.lam, args.mu)
    ok = left == right
    payload = {"lambda": list(args.lam), "mu": list(args.mu), "holds": ok}
    _emit(out, payload, f"duality holds: {ok}", cfg.format or "pretty")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_koornwinder_check(args, cfg, out):
    lams = [args.lam] if args.lam is not None else box(cfg.n, cfg.window or 1)
    for lam in lams:
        _check_rank(lam, cfg)

    def row(lam):
        p = compute_E(lam)
        return {"lambda": list(lam), "monic": p.is_monic(), "triangular": p.is_triangular(),
                "eigenvector": p.is_eigenvector()}
    rows = cfg.pool()(row, lams)
    ok = all(r["monic"] and r["triangular"] and r["eigenvector"] for r in rows)
    pretty = _table([(r["lambda"], r["monic"], r["triangular"], r["eigenvector"]) for r in rows])
    _emit(out, {"ok": ok, "rows": rows}, pretty, cfg.format or "pretty")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_modified_build(args, cfg, out):
    _check_rank(args.lam, cfg)
    s = _spec(cfg)
    if args.word is not None:
        start = args.start or Weight((0,) * cfg.n)
        p, steps = build_along(args.word, cfg.n, s, start=start)
        if p.lam != args.lam:
            raise PreconditionError(f"word {list(args.word)} ends at {list(p.lam)}, not {list(args.lam)}")
    else:
        p = build_basis_element(args.lam, s)
        steps = None
    payload = p.to_json()
    payload["specializable"] = p.is_specializable()
    if steps is not None:
        payload["steps"] = [{"case": st.case, "multiplier": st.multiplier.to_json()} for st in steps]
    if args.check_eigen:
        payload["generalized_eigen"] = check_generalized_eigen(p)
    if args.emit == "poly":
        body = p.expand()
        payload["poly"] = body.to_json()
        pretty = body.pretty()
    else:
        lines = [f"lambda {list(p.lam)}  word {list(p.word)}"]
        lines += [f"  {m}  {list(mu)}" for m, mu in p.mt] or ["  (no correction terms)"]
        pretty = "\n".join(lines)
    _emit(out, payload, pretty, cfg.format or "pretty")
    return EXIT_FAIL if args.check_eigen and not payload["generalized_eigen"] else EXIT_OK


def cmd_modified_arrow(args, cfg, out):
    _check_rank(args.lam, cfg)
    s = _spec(cfg)
    src = ModPoly.plain(args.lam, s) if args.plain else build_basis_element(args.lam, s)
    res = arrow(args.i, src, args.bound)
    payload = res.to_json()
    if res.exists:
        pretty = (f"{list(src.lam)} -> {list(res.target.lam)} via s{args.i} "
                  f"[{res.rule}] mt={res.target.mt_json()}")
    else:
        pretty = f"no arrow from {list(src.lam)} via s{args.i}: {res.reason}"
    _emit(out, payload, pretty, cfg.format or "pretty")
    return EXIT_OK


def cmd_structure_wheel_check(args, cfg, out):
    s = _spec(cfg)
    w = repstructure.WheelSpec.from_spec(s, m=args.m)
    if args.lam is not None:
        _check_rank(args.lam, cfg)
        lams = [args.lam]
    else:
        lams = box(cfg.n, cfg.window if cfg.window is not None else 1)

    def row(lam):
        try:
            f = build_basis_element(lam, s).expand()
        except PoleError:
            return {"lambda": list(lam), "error": "pole"}
        item = {"lambda": list(lam), "admissible": repstructure.sharp(lam, w) == 0,
                "wheel": repstructure.wheel_check(f, w)}
        if args.direct and w.m == 1:
            item["wheel_direct"] = repstructure.wheel_check_direct(f, w)
        return item
    rows = cfg.pool()(row, lams)
    consistent = all(r.get("wheel") == r.get("admissible") and r.get("wheel_direct", r.get("wheel")) == r.get("wheel")
                     for r in rows if "error" not in r)
    pretty = _table([(r["lambda"], r.get("admissible"), r.get("wheel"), r.get("wheel_direct", "")) for r in rows])
    _emit(out, {"spec": s.to_json(), "consistent": consistent, "rows": rows}, pretty, cfg.format or "json")
    return EXIT_OK if consistent else EXIT_FAIL


def cmd_structure_basis(args, cfg, out):
    bound = cfg.window if cfg.window is not None else 2
    case = args.case
    if case == "tq":
        s = _spec(cfg, "tq:k=1,r=2,branch=0")
        w = repstructure.WheelSpec.from_spec(s)
        lams = repstructure.admissible_basis(cfg.n, bound, w.cycle, w.qpower)
        rows = [{"lambda": list(lam), "zeta_chi0": repstructure.wheel_zeta(lam, w)} for lam in lams]
    elif case in repstructure.GRID_CASES:
        s = _spec(cfg, f"{case}:i=1,r=2,sign=+")
        if s.family.kind != case:
            raise ParameterError(f"--spec family {s.family.kind} does not match --case {case}")
        rows = [{"lambda": list(lam), "inside": inside, "zeta": z}
                for lam, inside, z in repstructure.grid_zeta_certificates(s, bound, args.rule)
                if inside]
    else:
        s = _spec(cfg, f"tq:k=-1,r={args.r},branch=0")
        fam = s.family
        groups = {}
        for lam in box(cfg.n, bound):
            groups.setdefault(quotient_data(lam, fam.r).quot, []).append(list(lam))
        rows = [{"quot": list(q), "std": list(quotient_data(Weight(q), fam.r).std), "weights": lams}
                for q, lams in sorted(groups.items())]
    pretty = _table([tuple(r.values()) for r in rows])
    _emit(out, {"case": case, "spec": s.to_json(), "window": bound, "rows": rows}, pretty,
          cfg.format or "json")
    return EXIT_OK


def cmd_structure_lattice(args, cfg, out):
    s = _spec(cfg, f"tq:k=-1,r={args.r},branch={args.branch}")
    if args.lam is not None:
        _check_rank(args.lam, cfg)
        report = repstructure.quotient_report(args.lam, s, with_path=not args.no_path)
        ok = all(row["consistent"] for row in report["steps"]) and all(
            leg["two_way"] for leg in report.get("legs", []))
        pretty = "\n".join([f"quot {report['quot']}  std {report['std']}  fiber {report['fiber']}"]
                           + [f"s{r['i']}: {r['class']} {r['target']} quot {r['quot']}" for r in report["steps"]])
        _emit(out, report, pretty, cfg.format or "json")
        return EXIT_OK if ok else EXIT_FAIL
    bound = cfg.window if cfg.window is not None else 2
    rows = cfg.pool()(lambda lam: repstructure.quotient_report(lam, s, with_path=False), box(cfg.n, bound))
    ok = all(row["consistent"] for rep in rows for row in rep["steps"])
    pretty = _table([(r["lambda"], r["quot"], r["std"]) for r in rows])
    _emit(out, {"spec": s.to_json(), "window": bound, "consistent": ok, "reports": rows}, pretty,
          cfg.format or "json")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_structure_certify(args, cfg, out):
    cert = repstructure.certify(args.chain, n=cfg.n, r=args.r, max_depth=args.max_depth)
    lines = [f"chain {cert.name}: {'ok' if cert.ok else 'FAILED ' + cert.failure}"]
    for step in cert.steps[1:]:
        lines.append(f"  s{step['i']} [{step['rule']}, {step['link']}] -> {step['node']['lambda']} "
                     f"mt={step['node']['mt']} zeta(c)={step['multiplier_zeta']}")
    _emit(out, cert.to_json(), "\n".join(lines), cfg.format or "json")
    return EXIT_OK if cert.ok else EXIT_FAIL


def cmd_verify(args, cfg, out):
    numbers = None
    if args.target != "all":
        try:
            numbers = [int(x) for x in args.target.split(",")]
        except ValueError:
            raise ParameterError("verify target is 'all' or a comma list of criterion numbers") from None
        bad = [k for k in numbers if k not in suites.CRITERIA]
        if bad:
            raise ParameterError(f"no criterion {bad[0]}; criteria are 1..{len(suites.CRITERIA)}")
    results = suites.run_criteria(numbers, args.level, cfg.seed, cfg.pool())
    ok = all(r.ok for r in results)
    payload = {"level": args.level, "seed": cfg.seed, "ok": ok, "criteria": [r.to_json() for r in results]}
    _emit(out, payload, "\n".join(r.line() for r in results), cfg.format or "pretty")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_params(args, cfg, out):
    if cfg.spec:
        s = _spec(cfg)
        mono, _ = s.family.target()
        payload = {"spec": s.to_json(), "minimal": format_laurent(s.minimal)}
        _emit(out, payload, f"{s!r}\nminimal polynomial: {payload['minimal']}", cfg.format or "pretty")
        return EXIT_OK
    rows = []
    for fam in _catalog(cfg.n):
        try:
            factors = spec_factors(fam)
        except ParameterError:
            continue
        for s in factors:
            rows.append({"family": fam.label(), "branch": s.branch, "v": list(s.v),
                         "omega": f"e^(2 pi i {s.power}/{s.order})"})
    pretty = _table([(r["family"], r["branch"], r["v"], r["omega"]) for r in rows])
    _emit(out, {"n": cfg.n, "factors": rows}, pretty, cfg.format or "pretty")
    return EXIT_OK


def _catalog(n, r_max=3):
    for kind in FAMILY_KINDS:
        for r in range(2, r_max + 1):
            if kind in ("tq", "aa"):
                top = n if kind == "tq" else 2 * n - 2
                for k in range(-1, top):
                    yield Family(kind, r, k=k, n=n)
            else:
                for i in range(1, n + 1):
                    for sign in (1, -1):
                        yield Family(kind, r, i=i, sign=sign, n=n)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=argparse.SUPPRESS, help="rank (at least 2)")
    common.add_argument("--spec", default=argparse.SUPPRESS,
                        help="specialization, e.g. tq:k=1,r=2,branch=0 or ab:i=1,r=2,sign=+")
    common.add_argument("--format", choices=("json", "pretty"), default=argparse.SUPPRESS)
    common.add_argument("--window", type=int, default=argparse.SUPPRESS,
                        help="bound on |lambda_i| for window sweeps")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--memo-capacity", dest="memo_capacity", type=int, default=argparse.SUPPRESS)
    common.add_argument("--config", default=argparse.SUPPRESS, help="file of key = value settings")

    parser = argparse.ArgumentParser(prog="dahapoly", parents=[common],
                                     description="Polynomial representation of the rank-n DAHA of type (C^vee_n, C_n).")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(group, name, func, help_text):
        p = group.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    kw = sub.add_parser("koornwinder", parents=[common], help="nonsymmetric Koornwinder polynomials")
    ksub = kw.add_subparsers(dest="action", required=True)
    p = add(ksub, "E", cmd_koornwinder_E, "print E_lambda")
    p.add_argument("--lambda", dest="lam", type=_weight, required=True)
    p.add_argument("--dual", action="store_true", help="use dual parameters")
    p = add(ksub, "chi0", cmd_koornwinder_chi0, "evaluation at the trivial weight, by every route")
    p.add_argument("--lambda", dest="lam", type=_weight, required=True)
    p.add_argument("--direct", action="store_true", help="also evaluate the computed polynomial")
    p = add(ksub, "duality", cmd_koornwinder_duality, "check the duality of evaluations")
    p.add_argument("--lambda", dest="lam", type=_weight, required=True)
    p.add_argument("--mu", type=_weight, required=True)
    p = add(ksub, "check", cmd_koornwinder_check, "monic, triangular and eigenvector checks")
    p.add_argument("--lambda", dest="lam", type=_weight, default=None)

    md = sub.add_parser("modified", parents=[common], help="modified polynomials at s = 0")
    msub = md.add_subparsers(dest="action", required=True)
    p = add(msub, "build", cmd_modified_build, "build a modified polynomial")
    p.add_argument("--lambda", dest="lam", type=_weight, required=True)
    p.add_argument("--word", type=_word, default=None,
                   help="indices applied in order from --start (default: a fixed reduced word)")
    p.add_argument("--start", type=_weight, default=None)
    p.add_argument("--emit", choices=("mt", "poly"), default="mt")
    p.add_argument("--check-eigen", dest="check_eigen", action="store_true")
    p = add(msub, "arrow", cmd_modified_arrow, "decide an arrow out of a modified polynomial")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=_weight, required=True)
    p.add_argument("--bound", type=int, default=None, help="fiber search window")
    p.add_argument("--plain", action="store_true", help="start from the uncorrected polynomial")

    st = sub.add_parser("structure", parents=[common], help="subrepresentation structure")
    ssub = st.add_subparsers(dest="action", required=True)
    p = add(ssub, "wheel-check", cmd_structure_wheel_check, "wheel condition on basis elements")
    p.add_argument("--lambda", dest="lam", type=_weight, default=None)
    p.add_argument("--m", type=int, default=1, help="number of disjoint wheels")
    p.add_argument("--direct", action="store_true", help="cross-check by wheel substitution")
    p = add(ssub, "basis", cmd_structure_basis, "labels of a distinguished subrepresentation")
    p.add_argument("--case", choices=("tq", "ab", "ac", "ad", "q"), required=True)
    p.add_argument("--rule", choices=("sign", "threshold"), default="sign")
    p.add_argument("--r", type=int, default=4)
    p = add(ssub, "lattice", cmd_structure_lattice, "quotient data when q is a root of unity")
    p.add_argument("--r", type=int, default=4, help="q is a primitive (r-1)-th root of unity")
    p.add_argument("--branch", type=int, default=0)
    p.add_argument("--lambda", dest="lam", type=_weight, default=None)
    p.add_argument("--no-path", dest="no_path", action="store_true")
    p = add(ssub, "certify", cmd_structure_certify, "replay an arrow chain")
    p.add_argument("--chain", choices=sorted(repstructure.CHAINS), required=True)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--max-depth", dest="max_depth", type=int, default=6)

    p = add(sub, "verify", cmd_verify, "run acceptance criteria")
    p.add_argument("target", nargs="?", default="all", help="'all' or a comma list such as 1,4,9")
    p.add_argument("--level", choices=suites.LEVELS, default="quick")

    p = add(sub, "params", cmd_params, "show a specialization or list the catalog")
    return parser


def make_config(ns):
    values = {}
    if getattr(ns, "config", None):
        values.update(read_config(ns.config))
    for key in _CONFIG_KEYS:
        if hasattr(ns, key):
            values[key] = getattr(ns, key)
    if "memo_capacity" not in values and os.environ.get(MEMO_ENV):
        values["memo_capacity"] = int(os.environ[MEMO_ENV])
    cfg = SessionConfig(**values)
    if cfg.format not in (None, "json", "pretty"):
        raise ParameterError(f"unknown format {cfg.format!r}")
    cfg.validate()
    return cfg


_WEIGHT_FLAGS = ("--lambda", "--mu", "--start")


def _glue_negative_values(argv):
    """Turn ``--lambda -3,0`` into ``--lambda=-3,0`` so argparse does not read a flag."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _WEIGHT_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2].isdigit():
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = make_config(ns)
        if cfg.memo_capacity is not None:
            set_memo_capacity(cfg.memo_capacity)
        return ns.func(ns, cfg, out)
    except (ParameterError, PreconditionError) as exc:
        err.write(f"dahapoly: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        err.write(f"dahapoly: error: {exc}\n")
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
