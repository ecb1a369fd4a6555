"""Search band moves on a knot fixture for ribbon disks and write movie fixtures.

A candidate band starts at an edge, may put half twists in with R1 moves,
may push a finger across up to ``--fingers`` strands with R2 moves, and ends
in a saddle.  It is kept when the saddle leaves a two-component link with
linking number 0 and the unlink's Jones polynomial, and the movie then
simplifies to crossingless circles.  The first disk found and its image
under every flip symmetry of the diagram are written out.

Run from the repository root, e.g.
    python tools/find_ribbon_disks.py 6_1 --fingers 1
"""

import argparse
import json
import sys
from math import comb
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from khcob.apps import ribbon_compare  # noqa: E402
from khcob.cobordism import Movie  # noqa: E402
from khcob.diagram import diagram_symmetries  # noqa: E402
from khcob.errors import KhError  # noqa: E402
from khcob.fixtures import MOVIES, knot_path, load_knot, read_pd_file  # noqa: E402
from khcob.moves import Move  # noqa: E402
from khcob.state import n_loops  # noqa: E402

UNLINK_EULER = {2: 1, 0: 2, -2: 1}


def euler(d):
    out = {}
    n = d.n_crossings
    for mask in range(2 ** n):
        bits = tuple((mask >> p) & 1 for p in range(n))
        m = n_loops(d, bits)
        h = sum(bits) - d.n_minus
        for vp in range(m + 1):
            q = 2 * vp - m + h + d.n_plus - d.n_minus
            out[q] = out.get(q, 0) + (-1 if h % 2 else 1) * comb(m, vp)
    return {k: v for k, v in out.items() if v}


def looks_unlinked(e):
    comps = e.components()
    if len(comps) != 2:
        return False
    which = {s: k for k, c in enumerate(comps) for s in c}
    if sum(e.sign(c) for c in e.crossings if which[(c, 0)] != which[(c, 1)]):
        return False
    return euler(e) == UNLINK_EULER


def bands(m, tip, fingers):
    """Yield movies ending in a saddle from ``tip``."""
    e = m.end
    for side in (tip, e.opposite(tip)):
        for t in e.face_of(side):
            if t in (tip, e.opposite(tip)):
                continue
            try:
                yield m.then(Move("saddle", at=(tip, t)))
            except KhError:
                pass
            if not fingers:
                continue
            for over in (True, False):
                try:
                    m2 = m.then(Move("r2_up", at=(tip, t), over=over))
                except KhError:
                    continue
                p = m2._prepared[-1]
                x1, x2 = p.info["crossings"]
                par = 1 if over else 0
                for s in ((x1, i) for i in range(4)):
                    if p.post.opposite(s)[0] == x2 and (s[1] - par) % 2 == 0:
                        yield from bands(m2, s, fingers - 1)


def first_disk(d, fingers, twists=(0, 1, -1)):
    for s in d.all_slots():
        for tw in twists:
            m, tip = Movie(d), s
            try:
                for _ in range(abs(tw)):
                    m = m.then(Move("r1_up", at=(tip,), sign="+" if tw > 0 else "-"))
                    p = m._prepared[-1]
                    tip = (p.info["crossing"], p.info["k"])
            except KhError:
                continue
            for cand in bands(m, tip, fingers):
                if not looks_unlinked(cand.end):
                    continue
                try:
                    disk = cand.finish()
                except KhError:
                    continue
                if disk.chi() == 1:
                    return disk
    return None


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("knot")
    ap.add_argument("--fingers", type=int, default=1)
    ap.add_argument("--out", default=str(MOVIES))
    args = ap.parse_args()
    d = load_knot(args.knot)
    disk = first_disk(d, args.fingers)
    if disk is None:
        sys.exit(f"no disk found for {args.knot}")
    pd = read_pd_file(knot_path(args.knot))[0]
    movies = [disk] + [disk.transport(s) for s in diagram_symmetries(d) if s.kind == "flip"][:1]
    out = Path(args.out)
    names = []
    for tag, mv in zip("ab", movies):
        obj = {"start": {"pd": [list(t) for t in pd]}, "moves": [x.to_json() for x in mv.moves]}
        name = f"{args.knot}_disk_{tag}"
        (out / f"{name}.movie.json").write_text(json.dumps(obj, indent=1) + "\n")
        names.append(name)
    rep = ribbon_compare(movies, names)
    print(json.dumps(rep.as_dict()))


if __name__ == "__main__":
    main()
