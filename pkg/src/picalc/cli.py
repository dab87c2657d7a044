"""Command-line front end.

Exit status: 0 when the command succeeds or the checked property holds,
1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import abelian, builder, freeprod, moves, picture, relative
from .presentation import (
    Presentation,
    PresentationParseError,
    RcViolated,
    check_rc,
    check_small_cancellation,
    pieces,
    stars_disjoint,
)
from .words import WordError, format_word, parse_word


class InputError(Exception):
    pass


class Result:
    """A verdict plus the text lines and the JSON object reporting it."""

    def __init__(self, code: int, lines: Sequence[str], data: dict):
        self.code = code
        self.lines = list(lines)
        self.data = data


def _w(word) -> str:
    return format_word(word) or "1"


def _load_presentation(path: str) -> Presentation:
    try:
        return Presentation.load(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load_picture(path: str) -> picture.Picture:
    try:
        return picture.Picture.load(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
    except picture.PictureError as exc:
        raise InputError(f"{path}: {exc}") from None


def _picture_presentation(args, pic: picture.Picture) -> Presentation:
    if args.presentation:
        return _load_presentation(args.presentation)
    if pic.presentation_ref:
        ref = Path(args.picture).parent / pic.presentation_ref
        if ref.exists():
            return _load_presentation(str(ref))
    raise InputError(f"{args.picture}: no presentation given and presentation_ref does not resolve")


def _parse_factor(spec: str) -> freeprod.FactorGroup:
    """``Z:b`` (infinite cyclic), ``Zn:g`` (cyclic of order n), or a table file."""
    head, sep, name = spec.partition(":")
    if sep and head == "Z":
        return freeprod.InfiniteCyclic(name)
    if sep and head.startswith("Z") and head[1:].isdigit():
        n = int(head[1:])
        return freeprod.FiniteGroup.cyclic(n, ["1", name] + [f"{name}{k}" for k in range(2, n)])
    try:
        return freeprod.FiniteGroup.load(spec)
    except OSError as exc:
        raise InputError(f"{spec}: {exc.strerror}") from None


def _free_product(specs: Sequence[str]) -> freeprod.FreeProduct:
    if not specs:
        raise InputError("at least one --factor is required")
    return freeprod.FreeProduct([_parse_factor(s) for s in specs])


# -- commands ------------------------------------------------------------------


def cmd_check_rc(args) -> Result:
    P = _load_presentation(args.presentation)
    report = check_rc(P)
    if report.holds:
        return Result(0, ["RC holds"], {"command": "check-rc", "holds": True, "violations": []})
    viol = [{"kind": v.kind, "indices": list(v.indices)} for v in report.violations]
    return Result(
        1,
        ["RC violated"] + [f"  {v}" for v in report.violations],
        {"command": "check-rc", "holds": False, "violations": viol},
    )


def cmd_check_c(args) -> Result:
    P = _load_presentation(args.presentation)
    rep = check_small_cancellation(P, args.p)
    counts = [None if math.isinf(c) else int(c) for c in rep.counts]
    lines = [f"C({args.p}) {'holds' if rep.holds else 'fails'}"]
    for i, c in enumerate(counts):
        lines.append(f"  relator {i} ({P.relators[i]}): {'no piece decomposition' if c is None else f'{c} pieces'}")
    return Result(
        0 if rep.holds else 1,
        lines,
        {"command": "check-c", "p": args.p, "holds": rep.holds, "min_pieces": counts, "failing": rep.failing},
    )


def cmd_pieces(args) -> Result:
    P = _load_presentation(args.presentation)
    found = pieces(P)
    words = sorted(found, key=lambda w: (len(w), w))
    return Result(0, [str(w) for w in words], {"command": "pieces", "pieces": [str(w) for w in words]})


def cmd_stars_disjoint(args) -> Result:
    P1, P2 = _load_presentation(args.first), _load_presentation(args.second)
    common = stars_disjoint(P1.relators, P2.relators)
    if common is None:
        return Result(0, ["disjoint"], {"command": "stars-disjoint", "disjoint": True, "witness": None})
    return Result(
        1,
        [f"not disjoint: {common}"],
        {"command": "stars-disjoint", "disjoint": False, "witness": str(common)},
    )


def cmd_snf(args) -> Result:
    try:
        A = abelian.load_matrix(args.matrix)
    except OSError as exc:
        raise InputError(f"{args.matrix}: {exc.strerror}") from None
    except ValueError as exc:
        raise InputError(f"{args.matrix}: {exc}") from None
    res = abelian.smith_normal_form(A)
    fmt = lambda M: [" ".join(map(str, r)) for r in M]  # noqa: E731
    lines = ["diagonal: " + " ".join(map(str, res.diagonal)), "U:"] + fmt(res.U) + ["D:"] + fmt(res.D) + ["V:"] + fmt(res.V)
    return Result(
        0,
        lines,
        {
            "command": "snf",
            "diagonal": list(res.diagonal),
            "U": [list(r) for r in res.U],
            "D": [list(r) for r in res.D],
            "V": [list(r) for r in res.V],
        },
    )


def cmd_abelianization(args) -> Result:
    P = _load_presentation(args.presentation)
    inv = abelian.abelianization(P)
    return Result(
        0,
        [str(inv), f"rank {inv.rank}", f"torsion {list(inv.torsion)}"],
        {"command": "abelianization", "rank": inv.rank, "torsion": list(inv.torsion)},
    )


def cmd_witness(args) -> Result:
    P = _load_presentation(args.presentation)
    try:
        w = parse_word(args.word, P.alphabet)
    except WordError as exc:
        raise InputError(f"--word: {exc}") from None
    verdict = builder.witness_search(w, P, args.max_factors, args.max_conj, jobs=args.jobs)
    data: dict = {"command": "witness", "word": _w(w)}
    if isinstance(verdict, builder.Found):
        cert = json.loads(builder.certificate_to_json(verdict.certificate))
        data.update(verdict="Found", certificate=cert)
        lines = [f"Found: {len(cert)} factor(s)"] + [
            f"  ({c}) r{i}^{s:+d} ({c})^-1" if c else f"  r{i}^{s:+d}" for c, i, s in cert
        ]
        return Result(0, lines, data)
    if isinstance(verdict, builder.RefutedByAbelianization):
        data.update(verdict="RefutedByAbelianization", reason=verdict.reason)
        return Result(1, [f"RefutedByAbelianization: {verdict.reason}"], data)
    data.update(verdict="NotFoundWithin", max_factors=verdict.max_factors, max_conj=verdict.max_conjugator_len)
    return Result(
        1, [f"NotFoundWithin: max factors {verdict.max_factors}, max conjugator length {verdict.max_conjugator_len}"], data
    )


def cmd_picture_validate(args) -> Result:
    pic = _load_picture(args.picture)
    P = _picture_presentation(args, pic)
    rep = picture.validate(pic, P)
    findings = [{"kind": f.kind, "message": f.message} for f in rep.findings]
    lines = ["valid"] if rep.valid else ["invalid"] + [f"  {f}" for f in rep.findings]
    return Result(0 if rep.valid else 1, lines, {"command": "picture-validate", "valid": rep.valid, "findings": findings})


def cmd_picture_boundary(args) -> Result:
    pic = _load_picture(args.picture)
    w = picture.boundary_label(pic)
    return Result(
        0,
        [str(w) if w else "(empty)"],
        {"command": "picture-boundary", "label": str(w), "spherical": picture.is_spherical(pic)},
    )


def cmd_picture_dipoles(args) -> Result:
    pic = _load_picture(args.picture)
    P = _picture_presentation(args, pic)
    dips = picture.find_dipoles(pic, P)
    folds = picture.find_folding_pairs(pic, P)
    to_c = picture._corner_json
    data = {
        "command": "picture-dipoles",
        "dipoles": [{"arc": d.arc, "c1": to_c(d.c1), "c2": to_c(d.c2)} for d in dips],
        "folding_pairs": [[u, v] for u, v, _ in folds],
    }
    lines = [f"arc {d.arc}: {d.c1} / {d.c2}" for d in dips] or ["no dipoles"]
    lines += [f"folding pair {u} {v}" for u, v, _ in folds]
    return Result(0, lines, data)


def cmd_picture_reduce(args) -> Result:
    pic = _load_picture(args.picture)
    P = _picture_presentation(args, pic)
    try:
        result, trace, emptied = moves.reduce_spherical(pic, moves.build_xset(P), P, args.budget)
    except picture.NotSpherical as exc:
        raise InputError(f"{args.picture}: {exc}") from None
    if args.trace_out:
        Path(args.trace_out).write_text(moves.moves_to_json(trace) + "\n", encoding="utf-8")
    data = {
        "command": "picture-reduce",
        "emptied": emptied,
        "steps": len(trace),
        "trace": [moves.move_to_json(m) for m in trace],
        "remaining_vertices": len(result.vertices),
    }
    lines = [f"{'emptied' if emptied else 'not emptied'} after {len(trace)} move(s)"]
    lines += [f"  {m}" for m in trace]
    return Result(0 if emptied else 1, lines, data)


def cmd_picture_replay(args) -> Result:
    pic = _load_picture(args.picture)
    P = _picture_presentation(args, pic)
    try:
        trace = moves.moves_from_json(Path(args.trace).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"{args.trace}: {exc.strerror}") from None
    X = moves.build_xset(P)
    for i, m in enumerate(trace):
        try:
            pic = moves.apply(pic, m, P, X)
        except picture.PictureError as exc:
            return Result(1, [f"move {i} ({m}) failed: {exc}"], {"command": "picture-replay", "ok": False, "failed_at": i})
    if args.output:
        Path(args.output).write_text(pic.dumps() + "\n", encoding="utf-8")
    return Result(
        0,
        [f"replayed {len(trace)} move(s); {len(pic.vertices)} vertices remain"],
        {"command": "picture-replay", "ok": True, "picture": pic.to_json()},
    )


def cmd_glue(args) -> Result:
    p1, p2 = _load_picture(args.first), _load_picture(args.second)
    P1 = _load_presentation(args.presentation) if args.presentation else None
    P2 = _load_presentation(args.presentation2) if args.presentation2 else None
    glued = builder.glue(p1, p2, P1, P2 if P2 is not None else None)
    if args.output:
        Path(args.output).write_text(glued.dumps() + "\n", encoding="utf-8")
    return Result(
        0,
        [f"spherical picture with {len(glued.vertices)} vertices and {len(glued.arcs)} arcs"],
        {"command": "glue", "picture": glued.to_json()},
    )


def cmd_fp_order(args) -> Result:
    H = _free_product(args.factor)
    e = H.parse(args.element)
    res = H.torsion(e)
    data: dict = {"command": "fp-order", "element": H.format(e)}
    if isinstance(res, freeprod.Infinite):
        data["order"] = None
        return Result(0, ["infinite order"], data)
    data.update(order=res.order, conjugator=H.format(res.conjugator), factor_element=H.format(res.element))
    return Result(
        0,
        [f"order {res.order}", f"conjugate into a factor by {H.format(res.conjugator)}: {H.format(res.element)}"],
        data,
    )


def cmd_rel_orientable(args) -> Result:
    H = _free_product(args.factor)
    R = [relative.parse_relative_word(r, H) for r in args.relator]
    v = relative.check_orientable(R, H)
    if v is None:
        return Result(0, ["orientable"], {"command": "rel-orientable", "orientable": True})
    msg = f"{v.kind}: relator {v.relator}" + (f" against relator {v.other}" if v.other is not None else "")
    return Result(
        1,
        ["not orientable", f"  {msg}"],
        {"command": "rel-orientable", "orientable": False, "violation": {"kind": v.kind, "relator": v.relator, "other": v.other}},
    )


def cmd_augment(args) -> Result:
    H = _free_product(args.factor)
    u = H.parse(args.element)
    w = relative.augment(u, H)
    text = relative.format_relative_word(w, H)
    return Result(0, [text], {"command": "augment", "relative_word": text})


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="picalc", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        p.set_defaults(fn=fn)
        return p

    def pic_cmd(name: str, fn: Callable, help: str) -> argparse.ArgumentParser:
        p = add(name, fn, help)
        p.add_argument("picture")
        p.add_argument("-P", "--presentation", help="presentation file (default: presentation_ref)")
        return p

    add("check-rc", cmd_check_rc, "check condition RC").add_argument("presentation")
    p = add("check-c", cmd_check_c, "check the small cancellation condition C(p)")
    p.add_argument("presentation")
    p.add_argument("-p", type=int, default=6)
    add("pieces", cmd_pieces, "list pieces").add_argument("presentation")
    p = add("stars-disjoint", cmd_stars_disjoint, "test whether two symmetrized relator sets are disjoint")
    p.add_argument("first")
    p.add_argument("second")
    add("snf", cmd_snf, "Smith normal form of an integer matrix").add_argument("matrix")
    add("abelianization", cmd_abelianization, "abelian invariants").add_argument("presentation")
    p = add("witness", cmd_witness, "search for a normal-closure certificate")
    p.add_argument("presentation")
    p.add_argument("--word", required=True)
    p.add_argument("--max-factors", type=int, default=3)
    p.add_argument("--max-conj", type=int, default=2)
    p.add_argument("--jobs", type=int, default=1)
    pic_cmd("picture-validate", cmd_picture_validate, "validate a picture")
    p = add("picture-boundary", cmd_picture_boundary, "print the boundary label")
    p.add_argument("picture")
    pic_cmd("picture-dipoles", cmd_picture_dipoles, "list dipoles and folding pairs")
    p = pic_cmd("picture-reduce", cmd_picture_reduce, "greedily reduce a spherical picture")
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--trace-out")
    p = pic_cmd("picture-replay", cmd_picture_replay, "replay a move trace")
    p.add_argument("trace")
    p.add_argument("-o", "--output")
    p = add("glue", cmd_glue, "glue two pictures with equal boundary labels")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("-P", "--presentation")
    p.add_argument("--presentation2")
    p.add_argument("-o", "--output")
    p = add("fp-order", cmd_fp_order, "order of a free-product element")
    p.add_argument("--factor", action="append", default=[], help="Z:name, Zn:name, or a table file")
    p.add_argument("--element", required=True)
    p = add("rel-orientable", cmd_rel_orientable, "orientability of relative relators")
    p.add_argument("--factor", action="append", default=[])
    p.add_argument("--relator", action="append", default=[], required=True)
    p = add("augment", cmd_augment, "augment a free-product word")
    p.add_argument("--factor", action="append", default=[])
    p.add_argument("--element", required=True)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    as_json = args.format == "json"
    try:
        res = args.fn(args)
    except (
        InputError,
        PresentationParseError,
        WordError,
        RcViolated,
        picture.PictureError,
        freeprod.NonGroupTable,
        freeprod.NotNormalForm,
        relative.SyllableLengthTooSmall,
        abelian.DimensionMismatch,
        ValueError,
    ) as exc:
        if as_json:
            report = {"command": args.command, "error": type(exc).__name__, "message": str(exc), "exit_code": 2}
            print(json.dumps(report, sort_keys=True), file=out)
        else:
            print(f"error: {exc}", file=err)
        return 2
    if as_json:
        res.data["exit_code"] = res.code
        print(json.dumps(res.data, sort_keys=True), file=out)
    else:
        for line in res.lines:
            print(line, file=out)
    return res.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
