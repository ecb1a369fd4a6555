"""Regenerate the knot fixtures under src/khcob/fixtures/knots.

Each knot up to seven crossings is two-bridge.  It is built as a plat closure
from its continued fraction and checked against an independent record:
crossing count, determinant and the genus of Seifert's algorithm.  Chirality convention:
  * knots with nonzero Rasmussen invariant are stored with s >= 0, read off
    Kh^{0,*} as the mean of its two q-degrees;
  * 6_1 (s = 0, not amphichiral) is stored with the Jones polynomial of the
    KnotInfo diagram, given below.
8_20 is not two-bridge; it comes from a 3-braid word.

Run from the repository root:  python tools/make_knot_fixtures.py
"""

import json
import sys
from math import comb
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from khcob.diagram import (  # noqa: E402
    format_pd_text, from_braid_closure, from_pd_code, mirror_diagram, rational_knot)
from khcob.homology import kh  # noqa: E402
from khcob.state import n_loops, supported_gradings  # noqa: E402

OUT = ROOT / "src" / "khcob" / "fixtures" / "knots"

# name: (continued fraction, determinant, genus)
TWO_BRIDGE = {
    "3_1": ([3], 3, 1),
    "4_1": ([2, 2], 5, 1),
    "5_1": ([5], 5, 2),
    "5_2": ([3, 2], 7, 1),
    "6_1": ([4, 2], 9, 1),
    "6_2": ([3, 1, 2], 11, 2),
    "6_3": ([2, 1, 1, 2], 13, 2),
    "7_1": ([7], 7, 3),
    "7_2": ([5, 2], 11, 1),
    "7_3": ([4, 3], 13, 2),
    "7_4": ([3, 1, 3], 15, 1),
    "7_5": ([3, 2, 2], 17, 2),
    "7_6": ([2, 2, 1, 2], 19, 2),
    "7_7": ([2, 1, 1, 1, 2], 21, 2),
}

# Jones polynomial of the KnotInfo 6_1 diagram, {power of t: coefficient}
JONES_6_1 = {-2: 1, -1: -1, 0: 2, 1: -2, 2: 1, 3: -1, 4: 1}

# 8_20 as the closure of a 3-braid: determinant 9, genus 2, but Seifert's
# algorithm on this non-alternating diagram gives genus 3
BRAIDS = {"8_20": ([1, 1, 1, -2, -1, -1, -1, -2], 9, 3)}
MINIMAL_GENUS = {"8_20": 2}
# Jones polynomial of 8_20 up to mirror image
JONES_8_20 = {-5: -1, -4: 1, -3: -1, -2: 2, -1: -1, 0: 2, 1: -1}


def jones(d):
    """Jones polynomial from the state sum, as {power of t: coefficient}."""
    n = d.n_crossings
    euler = {}
    for mask in range(2 ** n):
        bits = tuple((mask >> p) & 1 for p in range(n))
        m = n_loops(d, bits)
        h = sum(bits) - d.n_minus
        for vp in range(m + 1):
            q = 2 * vp - m + h + d.n_plus - d.n_minus
            euler[q] = euler.get(q, 0) + (-1 if h % 2 else 1) * comb(m, vp)
    # divide by q + 1/q, then t = q^2
    v = {}
    while any(euler.values()):
        top = max(k for k, c in euler.items() if c)
        c = euler[top]
        v[top - 1] = c
        euler[top] -= c
        euler[top - 2] = euler.get(top - 2, 0) - c
    return {k // 2: c for k, c in v.items() if c}


def determinant(d):
    return abs(sum(c * (-1 if k % 2 else 1) for k, c in jones(d).items()))


def seifert_genus(d):
    """Genus of the surface from Seifert's algorithm, from the circle count."""
    seen, circles = set(), 0
    for s in d.all_slots():
        if s in seen or not d.out[s]:
            continue
        t = s
        while True:
            seen.add(t)
            u = d.opposite(t)
            seen.add(u)
            if d.is_crossing(u[0]):
                v, i = u
                t = next(c for c in ((v, (i + 1) % 4), (v, (i - 1) % 4)) if d.out[c])
            else:
                t = d.through(u)
            if t == s:
                break
        circles += 1
    return (1 - (circles - d.n_crossings)) // 2, circles


def s_invariant(d):
    qs = [q for (h, q) in supported_gradings(d) if h == 0 and kh(d, h, q).summands]
    return (min(qs) + max(qs)) // 2


def record(name, d, det_expected, genus_expected, source):
    assert len(d.components()) == 1, name
    assert determinant(d) == det_expected, (name, determinant(d))
    genus, circles = seifert_genus(d)
    assert genus == genus_expected, (name, genus)
    s = s_invariant(d)
    chirality = "s >= 0"
    if s < 0:
        d = mirror_diagram(d)
        s = -s
    if name == "8_20":
        mirrored = {-k: c for k, c in jones(d).items()}
        assert JONES_8_20 in (jones(d), mirrored), (name, jones(d))
    if name == "6_1":
        chirality = "KnotInfo Jones polynomial"
        if jones(d) != JONES_6_1:
            d = mirror_diagram(d)
        assert jones(d) == JONES_6_1
    pd = d.to_pd_code()
    back = from_pd_code(pd)
    assert back.to_pd_code() == pd and jones(back) == jones(d), name
    meta = {"name": name, "crossings": d.n_crossings, "determinant": det_expected,
            "genus": MINIMAL_GENUS.get(name, genus), "seifert_genus": genus,
            "seifert_circles": circles, "writhe": d.n_plus - d.n_minus,
            "s": s, "source": source, "chirality": chirality,
            "jones": {str(k): v for k, v in sorted(jones(d).items())}}
    return pd, meta


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    index = {}
    jobs = [(n, rational_knot(cf), det, g, f"two-bridge {cf}")
            for n, (cf, det, g) in TWO_BRIDGE.items()]
    jobs += [(n, from_braid_closure(w), det, g, f"braid {w}")
             for n, (w, det, g) in BRAIDS.items()]
    for name, d, det, g, source in jobs:
        pd, meta = record(name, d, det, g, source)
        lines = [f"# {k}: {json.dumps(v)}" for k, v in meta.items()]
        (OUT / f"{name}.pd").write_text("\n".join(lines) + "\n" + format_pd_text(pd) + "\n")
        index[name] = meta
        print(name, meta["writhe"], meta["s"], meta["genus"])
    (OUT / "index.json").write_text(json.dumps(index, indent=1) + "\n")


if __name__ == "__main__":
    main()
