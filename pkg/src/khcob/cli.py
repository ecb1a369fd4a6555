"""The ``kh`` command line tool.

Results go to stdout, as text or as one JSON document with ``--json``.
Errors go to stderr as a JSON record.  Exit status 0 means success, 1 a
failed computation and 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import __version__
from .errors import InputError, KhError

log = logging.getLogger("khcob")


def _grading(text):
    try:
        h, q = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected h,q such as 0,1; got {text!r}") from None
    return h, q


def _common(p, suppress):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--json", action="store_true", default=d or False,
                   help="machine-readable output")
    p.add_argument("--dump-matrix", action="store_true", default=d or False,
                   help="include the dense matrices behind the result")
    p.add_argument("--verbose", "-v", action="store_true", default=d or False,
                   help="progress messages on stderr")
    p.add_argument("--simplify-depth", type=int, metavar="N", default=d or 3,
                   help="R3 search depth when simplifying diagrams (default 3)")
    p.add_argument("--max-generators", type=int, metavar="N", default=d or None,
                   help="refuse homology computations larger than this (0: no limit)")


def build_parser():
    ap = argparse.ArgumentParser(prog="kh", description="Khovanov homology and cobordism maps.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common(ap, suppress=False)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", help="Khovanov homology of a diagram")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--pd", help="PD code text, or a .pd file")
    src.add_argument("--braid", help="braid word such as 1,1,1")
    src.add_argument("--knot", help="fixture name such as 4_1")
    p.add_argument("--grading", type=_grading, help="one bigrading h,q (default: all)")
    p.add_argument("--generators", action="store_true", help="print generating cycles")
    _common(p, suppress=True)

    p = sub.add_parser("movie", help="movie files")
    msub = p.add_subparsers(dest="movie_command", required=True)
    r = msub.add_parser("run", help="build a movie and report on it")
    r.add_argument("file")
    r.add_argument("--matrix", nargs=2, type=int, metavar=("H", "Q"),
                   help="induced map on Kh^{H,Q} of the start")
    r.add_argument("--kj", action="store_true", help="Khovanov-Jacobsson class")
    _common(r, suppress=True)

    p = sub.add_parser("compare", help="compare the classes of two movies")
    p.add_argument("file1")
    p.add_argument("file2")
    _common(p, suppress=True)

    p = sub.add_parser("seifert", help="map induced by a Seifert surface")
    p.add_argument("names", nargs="+", metavar="NAME",
                   help="fixture names or .pd files; 'all' for every fixture")
    p.add_argument("--mirror", action="store_true", help="use the mirror surface")
    p.add_argument("--both", action="store_true", help="report the surface and its mirror")
    _common(p, suppress=True)

    p = sub.add_parser("ribbon", help="compare ribbon disk movies pairwise")
    p.add_argument("files", nargs="+")
    p.add_argument("--no-mirror", action="store_true",
                   help="do not use the mirror disks to separate classes")
    _common(p, suppress=True)
    return ap


# ------------------------------------------------------------ commands
def cmd_homology(args):
    from .homology import kh, kh_table, poincare
    from .io import diagram_from_braid, diagram_from_pd, knot_diagram
    from .state import differential_matrix

    if args.pd:
        d = diagram_from_pd(args.pd)
    elif args.braid:
        d = diagram_from_braid(args.braid)
    else:
        d = knot_diagram(args.knot)
    info = {"crossings": d.n_crossings, "n_plus": d.n_plus, "n_minus": d.n_minus}
    if args.grading is None:
        table = kh_table(d)
        out = dict(info, table=[{"h": h, "q": q, "summands": s} for (h, q), s in sorted(table.items())])
        text = poincare(table)
        return out, text
    h, q = args.grading
    pres = kh(d, h, q)
    out = dict(info, grading=[h, q], summands=list(pres.summands),
               free_rank=pres.free_rank, torsion=pres.torsion)
    lines = [f"Kh^{{{h},{q}}} = {_group_text(pres.summands)}"]
    if args.generators:
        out["generators"] = [[list(k) + [v] for k, v in sorted(g.terms.items())]
                             for g in pres.generators]
        for i, g in enumerate(pres.generators):
            lines.append(f"generator {i} (order {pres.summands[i] or 'inf'}):")
            lines.append("  " + g.format().replace("\n", "\n  "))
    if args.dump_matrix:
        out["d_in"] = differential_matrix(d, (h - 1, q)).dense()
        out["d_out"] = differential_matrix(d, (h, q)).dense()
        lines.append(f"d_in: {out['d_in']}")
        lines.append(f"d_out: {out['d_out']}")
    return out, "\n".join(lines)


def _group_text(summands):
    if not summands:
        return "0"
    return " + ".join("Z" if s == 0 else f"Z/{s}" for s in summands)


def cmd_movie(args):
    from .io import read_movie

    m = read_movie(args.file)
    out = {"moves": len(m), "chi": m.chi(),
           "start_crossings": m.start.n_crossings, "end_crossings": m.end.n_crossings,
           "start_empty": not m.start.vertices, "end_empty": not m.end.vertices}
    lines = [f"{len(m)} moves, chi {m.chi()}, "
             f"{m.start.n_crossings} -> {m.end.n_crossings} crossings"]
    if args.matrix:
        h, q = args.matrix
        M = m.induced_matrix(h, q)
        out["matrix"] = {"source": [h, q], "target": [h, q + m.chi()],
                         "rows": M.rows, "cols": M.cols, "dense": M.dense()}
        lines.append(f"Kh^{{{h},{q}}} -> Kh^{{{h},{q + m.chi()}}}: {M.dense()}")
    if args.kj:
        k = m.kj_class()
        out["kj"] = k.as_dict()
        lines.append(f"KJ class: {k.direction}, grading {k.grading}, "
                     f"{len(k.element.terms)} terms")
        if args.verbose:
            lines.append(k.element.format())
    return out, "\n".join(lines)


def cmd_compare(args):
    from .cobordism import compare_movies
    from .io import read_movie

    v = compare_movies(read_movie(args.file1), read_movie(args.file2))
    return v.as_dict(), f"{v.verdict} ({v.certificate})"


def cmd_seifert(args):
    from .apps.seifert import seifert_result
    from .fixtures import list_knots
    from .io import knot_diagram

    names = list_knots() if args.names == ["all"] else args.names
    modes = (False, True) if args.both else (args.mirror,)
    results, lines, failed = [], [], None
    for name in names:
        d = knot_diagram(name)
        for mir in modes:
            t0 = time.time()
            try:
                r = seifert_result(name, d, mir, depth=args.simplify_depth)
            except KhError as exc:
                if len(names) * len(modes) == 1:
                    raise
                failed = failed or exc
                results.append({"knot": name, "mirror": mir, **exc.record()})
                lines.append(f"{name}{' mirror' if mir else ''}: error {exc}")
                continue
            log.info("%s%s done in %.2fs", name, " (mirror)" if mir else "", time.time() - t0)
            rec = r.as_dict()
            if args.dump_matrix:
                rec["raw"] = r.raw
            results.append(rec)
            lines.append(f"{name}{' mirror' if mir else ''}: chi {r.chi}, "
                         f"k={r.k}, entries [{r.cell()}], gcd {r.gcd}")
    out = results[0] if len(results) == 1 else results
    return out, "\n".join(lines), (1 if failed else 0)


def cmd_ribbon(args):
    from .apps.ribbon import ribbon_compare
    from .io import read_movie

    movies = [read_movie(f) for f in args.files]
    rep = ribbon_compare(movies, args.files, mirrors=not args.no_mirror)
    lines = [f"{len(movies)} disks, {rep.classes} distinct classes"]
    for i, row in enumerate(rep.verdicts):
        lines.append(f"{args.files[i]}: {row}")
    if rep.mirror_verdicts is not None:
        lines.append("mirrors:")
        for i, row in enumerate(rep.mirror_verdicts):
            lines.append(f"{args.files[i]}: {row}")
    return rep.as_dict(), "\n".join(lines), (1 if rep.errors else 0)


COMMANDS = {"homology": cmd_homology, "movie": cmd_movie, "compare": cmd_compare,
            "seifert": cmd_seifert, "ribbon": cmd_ribbon}


def _emit_error(rec):
    print(json.dumps(rec), file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    from . import homology

    saved = homology.MAX_GENERATORS
    if args.max_generators is not None:
        homology.MAX_GENERATORS = args.max_generators
    try:
        res = COMMANDS[args.command](args)
    except KhError as exc:
        _emit_error(exc.record())
        return exc.exit_status
    except (OSError, ValueError) as exc:
        _emit_error(InputError(str(exc)).record())
        return 2
    except Exception as exc:  # keep the structured-record promise
        _emit_error({"error": "internal", "message": f"{type(exc).__name__}: {exc}"})
        return 1
    finally:
        homology.MAX_GENERATORS = saved
    out, text, status = (res + (0,))[:3]
    if args.json:
        print(json.dumps(out))
    else:
        print(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
