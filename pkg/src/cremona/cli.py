"""Command-line front end.

Exit status is 0 when every check of the invoked command passes, 1 when
some check fails and 2 on usage errors (bad arguments, unknown names,
sizes over a cap).  Reports are deterministic for a fixed ``--seed``;
wall-clock timing is only included with ``--timing``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Sequence

from . import __version__
from .cumulants import (
    CumulantError,
    l_cumulant_map,
    linearization_check,
    multi_segre_cumulant_map,
    multi_segre_linearization_check,
)
from .maps import MapError, apply_to_parametrization, check_inverse, is_triangular
from .polycore import LIMITS, PolyError
from .posets import POSET_KINDS, PosetError, mobius_sum_check, poset_by_name
from .showcase import EXAMPLES, run_example
from .varieties import (
    FAMILIES,
    LINEARIZE_METHODS,
    CatalogError,
    catalog,
    catalog_entry,
    ghprs_relations,
    linearize,
    membership_check,
    pull_back_equation,
    secant_defect,
    secant_parametrization,
    tangential_parametrization,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: list[str]
    checks: list[tuple[str, bool]] = field(default_factory=list)
    artifacts: dict[str, object] = field(default_factory=dict)
    notices: list[str] = field(default_factory=list)
    timing: float | None = None

    def check(self, name: str, ok: bool) -> None:
        self.checks.append((name, bool(ok)))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def to_dict(self) -> dict:
        d = {
            "command": self.command,
            "passed": self.passed,
            "status": [{"check": n, "passed": ok} for n, ok in self.checks],
            "artifacts": self.artifacts,
        }
        if self.notices:
            d["notices"] = self.notices
        if self.timing is not None:
            d["timing_seconds"] = round(self.timing, 3)
        return d

    def to_text(self) -> str:
        lines = ["$ cremona " + " ".join(self.command)]
        for note in self.notices:
            lines.append(f"note: {note}")
        for key, val in self.artifacts.items():
            lines.append(f"{key}:")
            lines.extend("  " + ln for ln in _render(val))
        for n, ok in self.checks:
            lines.append(f"[{'pass' if ok else 'FAIL'}] {n}")
        lines.append("result: " + ("pass" if self.passed else "FAIL"))
        if self.timing is not None:
            lines.append(f"time: {self.timing:.3f}s")
        return "\n".join(lines)


def _render(val) -> list[str]:
    if isinstance(val, dict):
        out = []
        for k, v in val.items():
            sub = _render(v)
            if len(sub) == 1 and not isinstance(v, (dict, list)):
                out.append(f"{k}: {sub[0]}")
            else:
                out.append(f"{k}:")
                out.extend("  " + s for s in sub)
        return out
    if isinstance(val, list):
        out = []
        for v in val:
            if isinstance(v, list) and all(not isinstance(x, (list, dict)) for x in v):
                out.append(" -> ".join(str(x) for x in v) if len(v) == 2 else ", ".join(str(x) for x in v))
            else:
                out.extend(_render(v))
        return out or ["(none)"]
    return [str(val)]


# ---------------------------------------------------------------------------
# commands


def _entry(name: str):
    try:
        return catalog_entry(name)
    except CatalogError as exc:
        raise UsageError(str(exc)) from None


def _entry_summary(e) -> dict:
    d = {
        "ambient_dim": e.ambient_dim,
        "dim": e.dim,
        "chart": e.param.chart,
        "equations": len(e.equations),
    }
    if e.family == "grass2":
        d["equation_kind"] = "three-term Plücker relations"
    for k, v in e.related.items():
        d[f"{k}_equations"] = len(v)
    return d


def cmd_catalog(args, rep: Report) -> None:
    flt = args.filter
    if flt is None:
        fams = {}
        for fam, (_, argspec, desc) in FAMILIES.items():
            fams[fam] = f"{fam}{':' + argspec if argspec else ''}  {desc}"
        rep.artifacts["families"] = fams
        rep.artifacts["entries"] = {e.name: _entry_summary(e) for e in catalog()}
        return
    if flt in FAMILIES and FAMILIES[flt][1]:
        _, argspec, desc = FAMILIES[flt]
        rep.artifacts["family"] = {"name": flt, "arguments": argspec, "description": desc}
        return
    e = _entry(flt)
    rep.artifacts["entry"] = {"name": e.name, **_entry_summary(e)}
    rep.artifacts["parametrization"] = e.param.to_dict()["coords"]
    rep.artifacts["equations"] = [q.to_text() for q in e.equations]
    for k, v in e.related.items():
        rep.artifacts[f"{k} equations"] = [q.to_text() for q in v]
    rep.check("implicit equations vanish on the parametrization", all(membership_check(e.param, q) for q in e.equations))


def cmd_linearize(args, rep: Report) -> None:
    e = _entry(args.entry)
    method = args.method
    if method.startswith("cumulant:") and not e.hypercube and not (
        e.family == "segre-multi" and method == "cumulant:full"
    ):
        raise UsageError(f"cumulant linearization needs subset coordinates x_I; {e.name} has none")
    try:
        pair = linearize(e, method)
    except CatalogError as exc:
        raise UsageError(str(exc)) from None
    rep.check("inverse after forward is the identity (both ways)", check_inverse(pair.forward, pair.inverse))
    hp = pair.with_fundamental_factor()
    rep.check(f"deg Phi = delta*delta' - 1 = {hp.delta * hp.delta_prime - 1}", hp.degree_law_holds())
    rep.artifacts["pair"] = hp.to_dict()
    img = apply_to_parametrization(pair.forward, e.param)
    zero = [v.name for v, f in img.coords if f.is_zero]
    rep.artifacts["image_zero_coordinates"] = zero
    if method == "ghprs":
        rels = ghprs_relations(e)
        rep.check("image lies in the linear space y_ij - y_ik + y_jk = 0", all(membership_check(img, q) for q in rels))
    else:
        rep.check("image is the coordinate subspace of the linear image", zero == [v.name for v in e.linear_image])


def cmd_verify_example(args, rep: Report) -> None:
    if args.name not in EXAMPLES:
        raise UsageError(f"unknown example {args.name!r}; registry: {', '.join(EXAMPLES)}")
    opts = {}
    if args.n is not None:
        opts["n"] = args.n
    try:
        r = run_example(args.name, **opts)
    except (CatalogError, CumulantError) as exc:
        raise UsageError(str(exc)) from None
    rep.artifacts["title"] = r.title
    if r.artifacts:
        rep.artifacts["artifacts"] = r.artifacts
    for c in r.checks:
        rep.check(c.name, c.passed)


def cmd_poset(args, rep: Report) -> None:
    try:
        P = poset_by_name(args.kind, args.n)
    except PosetError as exc:
        raise UsageError(str(exc)) from None
    top = P.one
    rep.artifacts["elements"] = len(P)
    rep.artifacts["mobius_to_top"] = [[str(p), P.mobius(p, top)] for p in P.elements]
    rep.artifacts["mu(0,1)"] = P.mobius(P.zero, top)
    if args.check_mobius_sum:
        if len(P) < 2:
            rep.notices.append("single-element poset: the vanishing mu-sum check is skipped")
        else:
            s = mobius_sum_check(P)
            rep.artifacts["mu_sum"] = s
            rep.check("sum of mu(pi, 1) over the poset is 0", s == 0)


def cmd_cumulant(args, rep: Report) -> None:
    try:
        if args.shape:
            shape = tuple(int(a) for a in args.shape.split(","))
            pair = multi_segre_cumulant_map(shape)
            rep.check("linearizes the Segre variety", multi_segre_linearization_check(pair, shape))
        else:
            if args.kind is None or args.n is None:
                raise UsageError("cumulant needs KIND and N (or --shape)")
            pair = l_cumulant_map(poset_by_name(args.kind, args.n))
            rep.check("linearizes Sigma_n onto y_I = 0 for |I| >= 2", linearization_check(pair, args.n))
    except (CumulantError, PosetError, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(str(exc)) from None
    rep.check("triangular", is_triangular(pair.forward)[0])
    rep.check("inverse after forward is the identity (both ways)", check_inverse(pair.forward, pair.inverse))
    rep.artifacts["forward"] = pair.forward.to_dict()["coords"]
    rep.artifacts["inverse"] = pair.inverse.to_dict()["coords"]


def _maybe_transform(e, param, args):
    if not args.transform:
        return param, None
    pair = linearize(e, args.method)
    return apply_to_parametrization(pair.forward, param), pair


def cmd_secant(args, rep: Report) -> None:
    e = _entry(args.entry)
    if args.k < 0:
        raise UsageError("k must be nonnegative")
    sec = secant_parametrization(e, args.k)
    out, pair = _maybe_transform(e, sec, args)
    rep.artifacts["parametrization"] = out.to_dict()
    eqs = e.related.get("secant", ()) if args.k == 1 else ()
    for q in eqs:
        if pair is None:
            rep.check(f"{q.to_text()} vanishes", membership_check(out, q))
        else:
            moved = pull_back_equation(q, pair)
            rep.artifacts.setdefault("transformed equations", []).append(moved.to_text())
            rep.check(f"{moved.to_text()} vanishes", membership_check(out, moved.num))


def cmd_tangent(args, rep: Report) -> None:
    e = _entry(args.entry)
    tan = tangential_parametrization(e)
    out, pair = _maybe_transform(e, tan, args)
    rep.artifacts["parametrization"] = out.to_dict()
    for q in e.related.get("tangential", ()):
        if pair is None:
            rep.check(f"{q.to_text()} vanishes", membership_check(out, q))
        else:
            moved = pull_back_equation(q, pair)
            rep.artifacts.setdefault("transformed equations", []).append(moved.to_text())
            rep.check(f"{moved.to_text()} vanishes", membership_check(out, moved.num))


def cmd_defect(args, rep: Report) -> None:
    e = _entry(args.entry)
    if args.k < 1:
        raise UsageError("k must be at least 1")
    d = secant_defect(e, args.k, samples=args.samples, seed=args.seed)
    r, n = e.ambient_dim, e.dim
    expected = min(r, n * (args.k + 1) + args.k)
    rep.artifacts["expected_dim"] = expected
    rep.artifacts["generic rank (probabilistic)"] = expected - d
    rep.artifacts["defect"] = d
    rep.artifacts["samples"] = args.samples
    rep.artifacts["seed"] = args.seed
    rep.check("defect is nonnegative", d >= 0)


# ---------------------------------------------------------------------------
# parser


def _globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--json", action="store_true", default=d(False), help="emit the JSON report")
    p.add_argument("--seed", type=int, default=d(0), help="seed for sampled ranks (default 0)")
    p.add_argument("--max-degree", type=int, default=d(None), help="raise the polynomial degree guard")
    p.add_argument("--max-vars", type=int, default=d(None), help="cap the variable registry; lifts family size caps")
    p.add_argument("--timing", action="store_true", default=d(False), help="include wall-clock time")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cremona", description="Exact Cremona transformations and linearizations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _globals(common, suppress=True)

    p = sub.add_parser("catalog", parents=[common], help="list catalog entries")
    p.add_argument("filter", nargs="?", help="family name or entry such as grass2:6")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("linearize", parents=[common], help="build and verify a linearizing Cremona")
    p.add_argument("entry")
    p.add_argument("method", nargs="?", default="triangular", help=" | ".join(LINEARIZE_METHODS))
    p.set_defaults(func=cmd_linearize)

    p = sub.add_parser("verify-example", parents=[common], help="reproduce a worked example")
    p.add_argument("name", help=" | ".join(EXAMPLES))
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=cmd_verify_example)

    p = sub.add_parser("poset", parents=[common], help="partition poset and Möbius values")
    p.add_argument("kind", help=" | ".join(POSET_KINDS))
    p.add_argument("n", type=int)
    p.add_argument("--check-mobius-sum", action="store_true")
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("cumulant", parents=[common], help="cumulant Cremona of a poset or a Segre shape")
    p.add_argument("kind", nargs="?", help=" | ".join(POSET_KINDS))
    p.add_argument("n", nargs="?", type=int)
    p.add_argument("--shape", help="multi-Segre shape r1,...,rk")
    p.set_defaults(func=cmd_cumulant)

    for name, func, hlp in (("secant", cmd_secant, "secant parametrization"), ("tangent", cmd_tangent, "tangential parametrization")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.add_argument("entry")
        if name == "secant":
            p.add_argument("--k", type=int, default=1)
        p.add_argument("--transform", action="store_true", help="push through the linearizing Cremona")
        p.add_argument("--method", default="triangular")
        p.set_defaults(func=func)

    p = sub.add_parser("defect", parents=[common], help="k-defect from a sampled Jacobian rank")
    p.add_argument("entry")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--samples", type=int, default=5)
    p.set_defaults(func=cmd_defect)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    saved = (LIMITS.max_degree, LIMITS.max_vars)
    if args.max_degree is not None:
        if args.max_degree > LIMITS.max_degree:
            print(f"WARNING: degree guard raised to {args.max_degree}; computations may blow up", file=sys.stderr)
        LIMITS.max_degree = args.max_degree
    if args.max_vars is not None:
        print(
            f"WARNING: family size caps lifted, registry capped at {args.max_vars} variables; "
            "exact arithmetic may be very slow",
            file=sys.stderr,
        )
        LIMITS.max_vars = args.max_vars
    rep = Report(argv)
    start = time.perf_counter()
    try:
        args.func(args, rep)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CatalogError, PosetError, CumulantError, MapError, PolyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        LIMITS.max_degree, LIMITS.max_vars = saved
    if args.timing:
        rep.timing = time.perf_counter() - start
    if args.json:
        print(json.dumps(rep.to_dict(), indent=2, ensure_ascii=False))
    else:
        print(rep.to_text())
    return EXIT_OK if rep.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
