"""Command-line surface: one command per construction, JSON reports out.

Every command reads presentation files, prints a deterministic report on
standard output, and exits 0 on success, 1 on a mathematical failure
(inconsistent input, failed certification, ...), 2 on a usage error.
`deform` is the exception to the report rule: it prints a presentation
file so its output can be fed straight back in.
"""

import argparse
import json
import sys
from typing import List, Optional, Sequence, Tuple

from . import files
from . import presentation as pc
from . import subgroups as sg
from .bilinear import SeriesError, bilinearize
from .deformation import DeformError, abdef, adapt_basis, \
    enumerate_deformations
from .morphisms import HomError, hom_from_images, image_index, \
    invariant_report, is_inverse_pair, spot_check
from .presentation import PcPresentation, PresentationError
from .refined import refined_series
from .scalars import (
    ScalarRing,
    ScalarRingError,
    multiplication_pairing,
    pairing_of,
    prime_decomposition_zero,
    scalar_ring,
)
from .series import key_subgroups


def _print_json(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _rows(s: sg.Subgroup) -> List[List[int]]:
    return [list(r) for r in s.rows]


def _enc(periods) -> List[int]:
    return [0 if e is None else e for e in periods]


def _ring_summary(ring: ScalarRing) -> dict:
    return {
        "rank": len(ring.periods),
        "periods": _enc(ring.periods),
        "order": ring.order(),
        "unit": list(ring.unit),
        "commutative": ring.is_commutative,
    }


def _parse_d(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",")) if text else ()
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"{text!r} is not a comma-separated integer list")


def _parse_c(text: str) -> Tuple[Tuple[int, ...], ...]:
    try:
        if not text:
            return ()
        return tuple(
            tuple(int(v) for v in row.split(","))
            for row in text.split(";"))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"{text!r} is not a semicolon-separated matrix")


def _cmd_check(args) -> int:
    p = files.load(args.file, check=False)
    report = pc.consistency_check(p)
    _print_json({
        "command": "check",
        "name": p.name,
        "rank": p.m,
        "consistent": report.ok,
        "failures": [
            {"kind": f.kind, "j": f.j, "i": f.i, "k": f.k,
             "lhs": list(f.lhs), "rhs": list(f.rhs)}
            for f in report.failures],
    })
    return 0 if report.ok else 1


def _cmd_analyze(args) -> int:
    p = files.load(args.file)
    ks = key_subgroups(p)
    _print_json({
        "command": "analyze",
        "name": p.name,
        "rank": p.m,
        "hirsch": sum(1 for e in p.periods if e is None),
        "class": len(sg.lower_central_series(p)) - 1,
        "center": _rows(ks.center),
        "derived": _rows(ks.derived),
        "derived_isolator": _rows(ks.derived_isolator),
        "torsion": _rows(ks.torsion),
        "m_subgroup": _rows(ks.m_sub),
        "n_subgroup": _rows(ks.n_sub),
        "free_complement": _rows(ks.g0),
        "mn_invariants": _enc(ks.mn.periods),
        "n": ks.n,
        "p": ks.p,
        "e": ks.e,
        "regular": ks.regular,
        "tame": ks.tame,
    })
    return 0


def _series_arg(p: PcPresentation, kind: str):
    if kind == "upper":
        return list(reversed(sg.upper_central_series(p)))
    return None  # bilinearize defaults to the lower central series


def _cmd_series(args) -> int:
    p = files.load(args.file)
    if args.kind == "lower":
        terms = sg.lower_central_series(p)
        _print_json({
            "command": "series", "kind": "lower", "name": p.name,
            "terms": [_rows(t) for t in terms]})
        return 0
    if args.kind == "upper":
        terms = list(reversed(sg.upper_central_series(p)))
        _print_json({
            "command": "series", "kind": "upper", "name": p.name,
            "terms": [_rows(t) for t in terms]})
        return 0
    rs = refined_series(p)
    _print_json({
        "command": "series",
        "kind": "refined",
        "name": p.name,
        "upper_chain": [
            {"label": label, "rows": _rows(term)}
            for label, term in rs.upper_chain],
        "left_chain": [
            {"label": label, "rows": _rows(term)}
            for label, term in rs.left_chain],
        "gap_section": _enc(rs.gap_section.periods),
        "base_ring": _ring_summary(rs.base_ring),
        "ring": _ring_summary(rs.ring),
        "actions": [
            {"chain": a.chain, "top": a.top, "bottom": a.bottom,
             "kind": a.kind,
             "section": _enc(a.section.periods),
             "matrices": (None if a.matrices is None
                          else [[list(row) for row in m]
                                for m in a.matrices])}
            for a in rs.actions],
    })
    return 0


def _cmd_scalars(args) -> int:
    p = files.load(args.file)
    series = _series_arg(p, args.series)
    b = bilinearize(p, series)
    ring = scalar_ring(pairing_of(b))
    rs = refined_series(p, series)
    _print_json({
        "command": "scalars",
        "series": args.series,
        "name": p.name,
        "left": _enc(b.left.periods),
        "right": [_enc(r.periods) for r in b.right],
        "out": [_enc(o.periods) for o in b.out],
        "tables": [[[list(cell) for cell in row] for row in t]
                   for t in b.tables],
        "left_nondegenerate": b.left_nondegenerate(),
        "right_nondegenerate": b.right_nondegenerate(),
        "full": b.full(),
        "pairing_ring": _ring_summary(ring),
        "refined_ring": _ring_summary(rs.ring),
    })
    return 0


def _cmd_adapt(args) -> int:
    p = files.load(args.file)
    a = adapt_basis(p)
    _print_json({
        "command": "adapt",
        "name": p.name,
        "i0": a.i0, "i1": a.i1, "i2": a.i2,
        "n": a.n, "p": a.p, "e": a.e,
        "presentation": files.presentation_to_dict(a.pres),
        "new_in_old": [list(x) for x in a.new_in_old],
    })
    return 0


def _cmd_deform(args) -> int:
    p = files.load(args.file)
    a = adapt_basis(p)
    out = abdef(a, args.d, args.c)
    named = PcPresentation(
        name=f"{p.name} deformed",
        periods=out.pres.periods,
        powers=out.pres.powers,
        commutators=out.pres.commutators)
    sys.stdout.write(files.emit(named))
    return 0


def _cmd_enumerate(args) -> int:
    p = files.load(args.file)
    a = adapt_basis(p)
    survey = enumerate_deformations(a)
    _print_json({
        "command": "enumerate",
        "name": p.name,
        "bound": survey.bound,
        "count": len(survey.classes),
        "classes": [
            {"moduli": list(cls.moduli),
             "components": [list(c) for c in cls.components],
             "d": list(d),
             "c": [list(row) for row in c]}
            for cls, d, c in survey.representatives],
    })
    return 0


def _load_hom(src_path: str, dst_path: str, map_path: str):
    src = files.load(src_path)
    dst = files.load(dst_path)
    with open(map_path, "r", encoding="utf-8") as fh:
        words = files.parse_hom_map(fh.read(), src.m)
    images = tuple(pc.normal_form(dst, w) for w in words)
    return src, dst, hom_from_images(src, dst, images)


def _cmd_hom(args) -> int:
    try:
        src, dst, h = _load_hom(args.source, args.target, args.map)
    except HomError as exc:
        _print_json({
            "command": "hom",
            "certified": False,
            "reason": str(exc),
            "relation": list(exc.relation) if exc.relation else None,
        })
        return 1
    sub, idx = image_index(h)
    payload = {
        "command": "hom",
        "source": src.name,
        "target": dst.name,
        "certified": True,
        "image_index": idx,
        "image_rows": _rows(sub),
    }
    code = 0
    if args.verify:
        ok = spot_check(h)
        payload["spot_check"] = ok
        if not ok:
            code = 1
    _print_json(payload)
    return code


def _cmd_inverse_pair(args) -> int:
    try:
        _, _, fwd = _load_hom(args.source, args.target, args.forward)
        _, _, bwd = _load_hom(args.target, args.source, args.backward)
    except HomError as exc:
        _print_json({
            "command": "inverse-pair",
            "certified": False,
            "reason": str(exc),
        })
        return 1
    ok = is_inverse_pair(fwd, bwd)
    _print_json({
        "command": "inverse-pair",
        "certified": True,
        "inverse_pair": ok,
    })
    return 0 if ok else 1


def _cmd_invariants(args) -> int:
    p = files.load(args.file)
    r = invariant_report(p)
    # no name field: equivalent groups must print byte-identical reports
    _print_json({
        "command": "invariants",
        "hirsch": r.hirsch,
        "class": r.nilpotency_class,
        "ab_invariants": _enc(r.ab_invariants),
        "mn_order": r.mn_order,
        "p": r.p,
        "n": r.n,
        "e": r.e,
        "regular": r.regular,
        "tame": r.tame,
    })
    return 0


def _cmd_primes(args) -> int:
    ring = scalar_ring(multiplication_pairing(args.zmod))
    factors = prime_decomposition_zero(ring)
    _print_json({
        "command": "primes",
        "modulus": args.zmod,
        "ring_periods": _enc(ring.periods),
        "factors": [
            sorted(list(v) for v in ideal) for ideal in factors],
    })
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilpc",
        description="Exact computation with polycyclic presentations of "
                    "finitely generated nilpotent groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, *, file_arg=True):
        cmd = sub.add_parser(name, help=help_text)
        if file_arg:
            cmd.add_argument("file", help="presentation file")
        cmd.set_defaults(handler=handler)
        return cmd

    add("check", _cmd_check, "validate and consistency-check a presentation")
    add("analyze", _cmd_analyze, "key subgroups and adapted markers")

    cmd = add("series", _cmd_series, "central series and refinements")
    cmd.add_argument("--kind", choices=("lower", "upper", "refined"),
                     default="lower")

    cmd = add("scalars", _cmd_scalars,
              "bilinearized pairing and its scalar rings")
    cmd.add_argument("--series", choices=("lower", "upper"), default="lower")

    add("adapt", _cmd_adapt, "rewrite on a basis adapted to M >= N >= Is(G')")

    cmd = add("deform", _cmd_deform,
              "deform the finite-section power tails; prints a file")
    cmd.add_argument("--d", type=_parse_d, required=True,
                     help="comma-separated multipliers")
    cmd.add_argument("--c", type=_parse_c, required=True,
                     help="semicolon-separated matrix rows")

    add("enumerate", _cmd_enumerate,
        "survey deformation classes over unit multipliers")

    cmd = sub.add_parser("hom", help="certify a generator-image map")
    cmd.add_argument("source")
    cmd.add_argument("target")
    cmd.add_argument("--map", required=True, help="image word file")
    cmd.add_argument("--verify", action="store_true",
                     help="also spot-check 200 random pairs")
    cmd.set_defaults(handler=_cmd_hom)

    cmd = sub.add_parser("inverse-pair",
                         help="certify a two-sided isomorphism witness")
    cmd.add_argument("source")
    cmd.add_argument("target")
    cmd.add_argument("--forward", required=True)
    cmd.add_argument("--backward", required=True)
    cmd.set_defaults(handler=_cmd_inverse_pair)

    add("invariants", _cmd_invariants,
        "basis-independent profile of the group")

    cmd = sub.add_parser("primes",
                         help="factor the zero ideal of a finite ring")
    cmd.add_argument("--zmod", type=int, required=True,
                     help="modulus of the multiplication ring")
    cmd.set_defaults(handler=_cmd_primes)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (files.FileFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PresentationError, DeformError, HomError, SeriesError,
            ScalarRingError, sg.SubgroupError) as exc:
        _print_json({"command": args.command, "error": str(exc)})
        return 1


if __name__ == "__main__":
    sys.exit(main())
