"""Write the two T(4,6) annulus movies to src/khcob/fixtures/movies.

The link is the closure of (s1 s2 s3)^6.  Its two components are (2,3) torus
knots; reversing one of them gives n+ = 6 and n- = 12.  Each annulus is a
saddle at one crossing followed by simplification.
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from khcob.cobordism import Movie, compare_movies, start_diagram  # noqa: E402
from khcob.fixtures import MOVIES  # noqa: E402
from khcob.moves import Move  # noqa: E402

START = {"start": {"braid": [1, 2, 3] * 6}, "orient": [["c0", 0], ["c0", 1]]}
SADDLES = {"t46_a0": (("c0", 0), ("c0", 3)), "t46_a1": (("c3", 0), ("c3", 3))}


def main():
    L = start_diagram(START)
    movies = {}
    for name, (a, b) in SADDLES.items():
        m = Movie(L).then(Move("saddle", at=(a, b))).finish()
        movies[name] = m
        obj = dict(START, moves=[mv.to_json() for mv in m.moves])
        (MOVIES / f"{name}.movie.json").write_text(json.dumps(obj, indent=1) + "\n")
        print(name, len(m), "moves, chi", m.chi())
    print(compare_movies(movies["t46_a0"], movies["t46_a1"]).as_dict())


if __name__ == "__main__":
    main()
