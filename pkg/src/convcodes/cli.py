"""Command-line surface for batch computation.

Commands
--------
invariants FILE          structural invariants of a code file
freedist FILE            free distance (certified stage bound when it applies)
mds FILE                 free distance vs the generalized Singleton bound
lift FILE --ext-degree S free distance before/after an alphabet enlargement
cgc build SPEC           build the code of a Goppa spec file
cgc scan SPEC            sweep the spec's lambda family over its domain
cgc extend SPEC --point a,b   extension certificate for one new point
cgc eligible SPEC        all certified extension points

Every command is deterministic given its file and flags.  Output is
line-oriented `key: value`; `--porcelain` pins the stable machine-readable
key set and suppresses advisory notes.

Exit codes: 0 success, 1 assertion/mismatch, 2 input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import distance
from .cgc import (
    CgcFamily,
    cgc_spec_from_text,
    parse_condition,
    parse_scan_domain,
)
from .code import (
    classification_params,
    code_from_text,
    code_to_text,
    lift_code,
    singleton_bound,
)
from .distance import (
    DEFAULT_CAP,
    free_distance,
    free_distance_oracle,
    row_distance_sequence,
)
from .errors import CodesError, ParseError, TooLarge
from .extend import check_extension, eligible_points
from .gf import MAX_ORDER, extension_of

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_CAP = 3

MIN_CAP = 10**3


@dataclass(frozen=True)
class RunConfig:
    """Validated knobs shared by the commands."""

    cap: int = DEFAULT_CAP
    workers: int = 1
    porcelain: bool = False

    def __post_init__(self):
        if self.cap < MIN_CAP:
            raise ParseError(f"--cap must be >= {MIN_CAP}")
        if self.workers < 1:
            raise ParseError("--workers must be >= 1")


def _emit(out, key, value):
    if isinstance(value, bool):
        value = "true" if value else "false"
    print(f"{key}: {value}", file=out)


def _fmt_tuple(values) -> str:
    return ",".join(str(v) for v in values)


def _fmt_point(pt) -> str:
    return f"({pt[0]}, {pt[1]})"


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _load_code(path: str):
    return code_from_text(_read(path))


def _sorted_lams(lams):
    return sorted(lams, key=lambda lam: tuple(x.code for x in lam))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_invariants(args, cfg: RunConfig, out) -> int:
    c = _load_code(args.file)
    cp = classification_params(c)
    _emit(out, "field", c.field.spec_string())
    _emit(out, "shape", f"{c.k} x {c.n}")
    _emit(out, "n", c.n)
    _emit(out, "k", c.k)
    _emit(out, "delta", c.delta)
    _emit(out, "memory", c.memory)
    _emit(out, "forney", _fmt_tuple(c.forney))
    _emit(out, "column_degrees", _fmt_tuple(c.column_degrees))
    _emit(out, "kappa", cp.kappa)
    _emit(out, "mu_g", cp.mu_g)
    _emit(out, "singleton", singleton_bound(c))
    return EXIT_OK


def cmd_freedist(args, cfg: RunConfig, out) -> int:
    c = _load_code(args.file)
    if args.oracle:
        nu, mu = distance.c0_code(c, cap=cfg.cap)
        hyp = nu == c.k * (c.delta + 1)
        lc = distance.l_of_c(c, mu)
        last = args.max_stage
        if last is None:
            last = lc + 2 if hyp else distance.DEFAULT_ORACLE_STAGE
        rd = row_distance_sequence(c, last, engine="enum", cap=cfg.cap)
        dfree = min(rd)
        sb = singleton_bound(c)
        method = "oracle"
        stabilized = hyp or (
            len(rd) > c.delta + 1 and len(set(rd[-(c.delta + 2) :])) == 1
        )
    else:
        prof = free_distance(c, max_stage=args.max_stage, engine=args.engine, cap=cfg.cap)
        nu, mu, hyp, lc = prof.nu, prof.mu, prof.hypothesis_ok, prof.l_of_c
        rd, dfree, sb = prof.row_distances, prof.dfree, prof.singleton
        method, stabilized = prof.method, prof.stabilized
    _emit(out, "n", c.n)
    _emit(out, "k", c.k)
    _emit(out, "delta", c.delta)
    _emit(out, "nu", nu)
    _emit(out, "mu", mu)
    _emit(out, "hypothesis", hyp)
    _emit(out, "l_of_c", lc)
    _emit(out, "row_distances", _fmt_tuple(rd))
    _emit(out, "dfree", dfree)
    _emit(out, "singleton", sb)
    _emit(out, "mds", dfree == sb)
    _emit(out, "method", method)
    _emit(out, "certified", method == "theorem" or (args.oracle and hyp))
    if not cfg.porcelain and method == "oracle" and not hyp:
        note = (
            "note: stacked-matrix rank is not maximal; dfree is an upper "
            "bound, exact whenever the row-distance tail is stable for "
            f"{c.delta + 1} stages ({'stable' if stabilized else 'NOT stable'})"
        )
        print(note, file=out)
    return EXIT_OK


def cmd_mds(args, cfg: RunConfig, out) -> int:
    c = _load_code(args.file)
    prof = free_distance(c, cap=cfg.cap)
    _emit(out, "dfree", prof.dfree)
    _emit(out, "singleton", prof.singleton)
    _emit(out, "mds", prof.is_mds)
    return EXIT_OK


def cmd_lift(args, cfg: RunConfig, out) -> int:
    c = _load_code(args.file)
    s = args.ext_degree
    if s < 2:
        raise ParseError("--ext-degree must be >= 2")
    if c.field.q**s > MAX_ORDER:
        raise TooLarge(f"target field order {c.field.q}^{s} exceeds 2^16")
    emb = extension_of(c.field, s)
    lifted = lift_code(c, emb)
    before = free_distance(c, cap=cfg.cap).dfree
    after = free_distance(lifted, cap=cfg.cap).dfree
    _emit(out, "base_field", c.field.spec_string())
    _emit(out, "ext_field", lifted.field.spec_string())
    _emit(out, "dfree_before", before)
    _emit(out, "dfree_after", after)
    _emit(out, "equal", before == after)
    return EXIT_OK if before == after else EXIT_MISMATCH


def cmd_cgc_build(args, cfg: RunConfig, out) -> int:
    spec, _ = cgc_spec_from_text(_read(args.spec))
    from .cgc import build

    code = build(spec)
    text = code_to_text(code)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    print(text, end="", file=out)
    return EXIT_OK


def cmd_cgc_scan(args, cfg: RunConfig, out) -> int:
    spec, scan_directive = cgc_spec_from_text(_read(args.spec))
    if args.domain:
        scan_directive = args.domain
    domain = parse_scan_domain(spec, scan_directive)
    fam = CgcFamily.from_spec(spec)
    predicted = None
    if args.predict:
        predicted = [
            parse_condition(spec.field, spec.delta + 1, chunk)
            for chunk in args.predict.split(";")
            if chunk.strip()
        ]
    rep = fam.scan(
        domain=domain,
        predicted=predicted,
        workers=cfg.workers,
        max_stage=args.max_stage or distance.DEFAULT_ORACLE_STAGE,
        cap=cfg.cap,
    )
    n_mds, n_non, n_exc = rep.counts()
    _emit(out, "family", rep.description)
    _emit(out, "bound", rep.bound)
    _emit(out, "total", rep.total)
    _emit(out, "mds", n_mds)
    _emit(out, "non_mds", n_non)
    _emit(out, "excluded", n_exc)
    if args.list:
        for lam in _sorted_lams(rep.non_mds_set):
            _emit(out, "non_mds_lambda", _fmt_tuple(lam))
    if predicted is not None:
        _emit(out, "matched_equations", rep.matched_equations)
        for cond, okflag in zip(predicted, rep.condition_matched):
            _emit(out, "condition_subset", f"{cond.text} -> {'true' if okflag else 'false'}")
        for lam in _sorted_lams(rep.mismatches):
            _emit(out, "mismatch", _fmt_tuple(lam))
        if rep.mismatches:
            return EXIT_MISMATCH
    return EXIT_OK


def cmd_cgc_extend(args, cfg: RunConfig, out) -> int:
    spec, _ = cgc_spec_from_text(_read(args.spec))
    try:
        a_txt, b_txt = args.point.split(",")
    except ValueError:
        raise ParseError("--point expects 'a,b'") from None
    point = (spec.field.parse(a_txt), spec.field.parse(b_txt))
    rep = check_extension(spec, point, cap=cfg.cap)
    _emit(out, "point", _fmt_point(rep.new_point))
    _emit(out, "F", _fmt_tuple(rep.F))
    _emit(out, "base_dfree", rep.base_profile.dfree)
    _emit(out, "l_base", rep.l_base)
    _emit(out, "l_ext", rep.l_ext)
    _emit(out, "k0", rep.k0)
    _emit(out, "f_rank_ok", rep.f_rank_ok)
    _emit(out, "f_distance", rep.f_distance)
    _emit(out, "dfree_lower_bound", rep.dfree_lower_bound)
    _emit(out, "h", _fmt_tuple(rep.h))
    _emit(out, "h_indices_checked", _fmt_tuple(rep.h_indices_checked))
    for name, ok in rep.conditions.items():
        _emit(out, f"condition_{name}", ok)
    _emit(out, "certified_mds", rep.certified_mds)
    _emit(out, "route", rep.route or "none")
    _emit(out, "extended_dfree", rep.extended_profile.dfree)
    _emit(out, "extended_mds", rep.extended_profile.is_mds)
    _emit(out, "ext_stacked_distance_ge_3", rep.ext_stacked_distance_ge_3)
    _emit(out, "l_growth_ok", rep.l_growth_ok)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(code_to_text(rep.extended))
    return EXIT_OK


def cmd_cgc_eligible(args, cfg: RunConfig, out) -> int:
    spec, _ = cgc_spec_from_text(_read(args.spec))
    res = eligible_points(spec, cap=cfg.cap, workers=cfg.workers)
    pts = sorted(res["eligible"], key=lambda p: (p[0].code, p[1].code))
    _emit(out, "eligible_count", len(pts))
    if res["diagnostic"]:
        _emit(out, "diagnostic", res["diagnostic"])
    for pt in pts:
        _emit(out, "eligible", _fmt_point(pt))
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--cap", type=int, default=DEFAULT_CAP,
                   help="enumeration step cap (default 1e8)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--porcelain", action="store_true",
                   help="stable machine-readable output only")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="convcodes",
        description="Exact invariants of convolutional codes over small fields",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="structural invariants of a code file")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("freedist", help="free distance of a code file")
    p.add_argument("file")
    p.add_argument("--oracle", action="store_true",
                   help="direct enumeration oracle instead of the staged method")
    p.add_argument("--max-stage", type=int, default=None)
    p.add_argument("--engine", choices=["auto", "enum", "trellis"], default="auto")
    _add_common(p)
    p.set_defaults(fn=cmd_freedist)

    p = sub.add_parser("mds", help="compare the free distance to the Singleton bound")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(fn=cmd_mds)

    p = sub.add_parser("lift", help="free distance before/after field enlargement")
    p.add_argument("file")
    p.add_argument("--ext-degree", type=int, required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_lift)

    pc = sub.add_parser("cgc", help="Goppa-style constructions on the projective line")
    csub = pc.add_subparsers(dest="subcommand", required=True)

    p = csub.add_parser("build", help="build the code of a spec file")
    p.add_argument("spec")
    p.add_argument("-o", "--output", default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_cgc_build)

    p = csub.add_parser("scan", help="sweep the lambda family of a spec file")
    p.add_argument("spec")
    p.add_argument("--predict", default=None,
                   help="`;`-separated polynomial conditions in l0..l<delta>")
    p.add_argument("--domain", default=None,
                   help="override the spec's scan directive (all | top-nonzero | list)")
    p.add_argument("--list", action="store_true", help="list non-MDS tuples")
    p.add_argument("--max-stage", type=int, default=None)
    _add_common(p)
    p.set_defaults(fn=cmd_cgc_scan)

    p = csub.add_parser("extend", help="extension certificate for one new point")
    p.add_argument("spec")
    p.add_argument("--point", required=True, help="new point as 'a,b'")
    p.add_argument("-o", "--output", default=None,
                   help="write the extended code file here")
    _add_common(p)
    p.set_defaults(fn=cmd_cgc_extend)

    p = csub.add_parser("eligible", help="all certified extension points")
    p.add_argument("spec")
    _add_common(p)
    p.set_defaults(fn=cmd_cgc_eligible)

    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = RunConfig(cap=args.cap, workers=args.workers, porcelain=args.porcelain)
        return args.fn(args, cfg, out)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except CodesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
