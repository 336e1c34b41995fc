"""Command-line interface.

Machine-readable ``key=value`` lines go to stdout and a human summary to
stderr.  Exit status: 0 ok/found, 1 verified false or nothing found,
2 usage or parse error.
"""
from __future__ import annotations

import argparse
import hashlib
import logging
import sys
from pathlib import Path

from . import bounds, constructions, search
from .codes import (SignMatrixFamily, check_linearity, decode_hex_family, identity_extension_check,
                    verify_flat_biangular_family, weight_distribution)
from .errors import MuwmError, ParseError
from .formats import parse_matrix_records, serialize_matrices, serialize_matrix
from .structure import block_structure
from .wmatrix import MUWSet, UnitWeighingMatrix, verify_mutually_unbiased, verify_unbiased, verify_weighing

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2


def _out(**kv):
    print(" ".join(f"{k}={_fmt(v)}" for k, v in kv.items()))


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (tuple, list)):
        return ",".join(_fmt(x) for x in v)
    if isinstance(v, str) and " " in v:
        return '"' + v.replace('"', "'") + '"'
    return str(v).replace(" ", "")


def _say(msg: str):
    print(msg, file=sys.stderr)


def _read_matrices(paths) -> list[UnitWeighingMatrix]:
    mats = []
    for p in paths:
        mats.extend(parse_matrix_records(Path(p).read_text()))
    return mats


def _report_verdict(v, label: str) -> int:
    _out(ok=v.ok, where=v.where, reason=v.reason or None)
    _say(f"{label}: {'ok' if v else 'FAILED: ' + v.reason}")
    return EXIT_OK if v else EXIT_FALSE


def cmd_verify(args) -> int:
    mats = _read_matrices(args.files)
    if not mats:
        raise ParseError("no matrices found")
    if len(mats) == 1:
        return _report_verdict(verify_weighing(mats[0]), "weighing")
    return _report_verdict(verify_mutually_unbiased(mats), f"{len(mats)} matrices mutually unbiased")


def cmd_unbiased(args) -> int:
    H = _read_matrices([args.first])
    K = _read_matrices([args.second])
    if len(H) != 1 or len(K) != 1:
        raise ParseError("each file must hold exactly one matrix")
    return _report_verdict(verify_unbiased(H[0], K[0]), "unbiased pair")


def cmd_blocks(args) -> int:
    for i, W in enumerate(_read_matrices([args.file])):
        v = verify_weighing(W)
        if not v:
            return _report_verdict(v, f"matrix {i}")
        _out(index=i, sizes=block_structure(W).sizes)
    return EXIT_OK


def cmd_bound(args) -> int:
    setting = bounds.REAL if args.real else bounds.COMPLEX
    r = bounds.muw_upper_bound(args.n, args.w, setting)
    _out(n=r.n, w=r.w, setting=r.setting, absolute=r.absolute_bound, special=r.special_bound,
         weight_specific=r.weight_specific, effective=r.effective)
    _say(f"UW({r.n},{r.w}) {setting}: at most {r.effective} mutually unbiased matrices")
    return EXIT_OK


def cmd_table1(args) -> int:
    if (args.n is None) != (args.w is None):
        raise ParseError("give both --n and --w, or neither")
    rows = ([bounds.table1_report(args.n, args.w, args.reproduce)] if args.n is not None
            else bounds.comparison_rows(args.reproduce) + [bounds.table1_report(8, 4, args.reproduce)])
    for r in rows:
        _out(n=r.n, w=r.w, setting=r.setting, closed_form=r.closed_form, smallest=r.smallest,
             largest=r.largest_known, root=r.root_of_unity, reproduced=r.reproduced)
    return EXIT_OK


def _write_set(s: MUWSet, out: Path, extra: dict) -> None:
    out.mkdir(parents=True, exist_ok=True)
    lines = [f"{k}={_fmt(v)}" for k, v in extra.items()]
    for i, W in enumerate(s):
        name = f"member_{i:03d}.txt"
        data = serialize_matrix(W).encode()
        (out / name).write_bytes(data)
        lines.append(f"file={name} sha256={hashlib.sha256(data).hexdigest()}")
    (out / "manifest.txt").write_text("\n".join(lines) + "\n")


def cmd_search(args) -> int:
    cfg = search.SearchConfig(args.n, args.w, args.m, max_set_goal=args.goal,
                              node_budget=args.budget, symmetry=args.symmetry,
                              jobs=args.jobs, seed=args.seed)
    res = search.search_max_muw(cfg)
    info = dict(n=cfg.n, p=cfg.p, m=cfg.m, size=res.size, exhaustive=res.exhaustive,
                nodes=res.nodes_visited, bound=res.bound, seconds=f"{res.wall_time:.3f}")
    _out(**info)
    if args.out:
        _write_set(res.best_set, Path(args.out), info)
    elif res.size:
        sys.stdout.write(serialize_matrices(res.best_set))
    _say(f"found {res.size} mutually unbiased UW({cfg.n},{cfg.p}) over {cfg.m}th roots"
         f" ({'exhaustive' if res.exhaustive else 'budget hit'})")
    return EXIT_OK if res.size else EXIT_FALSE


def _construct(args):
    fam = args.family
    if fam == "prime":
        return constructions.prime_muhm(args.n)
    if fam == "weight3":
        return constructions.weight3_tight_family(args.n)
    if fam == "weight2":
        return constructions.weight2_pair(args.n)
    if fam == "canonical":
        if not args.name:
            raise ParseError("--family canonical needs --name")
        return MUWSet([constructions.canonical(args.name)])
    if fam == "direct-sum":
        sets = [constructions.load_dataset(k) for k in args.datasets]
        return constructions.direct_sum_sets(sets)
    raise ParseError(f"unknown family {fam}")


def cmd_construct(args) -> int:
    s = _construct(args)
    text = serialize_matrices(s)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    _say(f"{len(s)} matrices of order {s.n}, weight {s.p}, over {s.m}th roots")
    return EXIT_OK


def cmd_dataset(args) -> int:
    text = constructions.read_dataset_text(args.name)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _family(args):
    if args.file:
        return decode_hex_family(Path(args.file).read_text(), args.c)
    fam = constructions.load_dataset(args.name)
    if not isinstance(fam, SignMatrixFamily):
        raise ParseError(f"dataset {args.name} is not a sign-matrix family")
    return fam if args.c is None else fam.with_c(args.c)


def cmd_codes_verify(args) -> int:
    fam = _family(args)
    flat = verify_flat_biangular_family(fam)
    lin = check_linearity(fam)
    ext = identity_extension_check(fam)
    wd = weight_distribution(fam)
    _out(order=fam.order, count=len(fam), c=fam.c, flat_biangular=flat.ok, linear=lin.ok,
         identity=ext.detail.get("status"), identity_value=ext.detail.get("value"),
         weights=[f"{w}:{k}" for w, k in wd.items()])
    if not flat:
        _say(f"family check failed: {flat.reason} at {flat.where}")
    if not lin:
        _say(f"linearity failed: {lin.reason}")
    return EXIT_OK if (flat and lin) else EXIT_FALSE


def cmd_hex_decode(args) -> int:
    fam = decode_hex_family(Path(args.file).read_text(), args.c)
    mats = [UnitWeighingMatrix.from_signs(M) for M in fam]
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, W in enumerate(mats):
            (out / f"member_{i:03d}.txt").write_text(serialize_matrix(W))
    else:
        sys.stdout.write(serialize_matrices(mats))
    _out(order=fam.order, count=len(fam))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="muwm", description="Mutually unbiased weighing matrices.")
    ap.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="weighing check (one matrix) or mutual unbiasedness (several)")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("unbiased", help="check a pair of matrices")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_unbiased)

    p = sub.add_parser("blocks", help="block structure of each matrix in a file")
    p.add_argument("file")
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("bound", help="upper bound on set size")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--real", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("table1", help="bounds versus known sets, one line per (n, w)")
    p.add_argument("--n", type=int)
    p.add_argument("--w", type=int)
    p.add_argument("--reproduce", action="store_true", help="rebuild example sizes from data")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("search", help="search for a large mutually unbiased set")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--budget", type=int, default=search.DEFAULT_BUDGET)
    p.add_argument("--goal", type=int)
    p.add_argument("--symmetry", choices=search.SYMMETRY_MODES, default="canonical")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, help="visiting order of first-member classes only")
    p.add_argument("--out", help="directory for member files and manifest")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("construct", help="emit a construction as matrix records")
    p.add_argument("--family", required=True,
                   choices=["prime", "weight3", "weight2", "canonical", "direct-sum"])
    p.add_argument("--n", type=int)
    p.add_argument("--name")
    p.add_argument("--datasets", nargs="+", default=[])
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("dataset", help="dump a bundled dataset")
    p.add_argument("--name", required=True, choices=list(constructions.DATASETS))
    p.add_argument("--out")
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("codes-verify", help="checks on a +-1 Hadamard family")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--name", choices=["H8", "H32"])
    g.add_argument("--file")
    p.add_argument("--c", type=int)
    p.set_defaults(func=cmd_codes_verify)

    p = sub.add_parser("hex-decode", help="hex family file to matrix records")
    p.add_argument("file")
    p.add_argument("--c", type=int)
    p.add_argument("--out", help="directory, one file per member")
    p.set_defaults(func=cmd_hex_decode)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(name)s: %(message)s")
    if getattr(args, "family", None) in ("prime", "weight3", "weight2") and args.n is None:
        ap.error(f"--family {args.family} needs --n")
    try:
        return args.func(args)
    except (MuwmError, OSError) as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
