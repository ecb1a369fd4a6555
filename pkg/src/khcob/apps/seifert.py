"""Cobordism maps of Seifert surfaces built by Seifert's algorithm."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

from ..algebra import gcd_list
from ..cobordism import Movie
from ..diagram import Diagram, mirror_diagram
from ..errors import KhError, Unoriented
from ..moves import Move


@dataclass
class SeifertResult:
    knot: str
    entries: List[int] = field(default_factory=list)
    gcd: int = 0
    chi: Optional[int] = None
    raw: List[int] = field(default_factory=list)
    mirror: bool = False
    error: Optional[dict] = None

    @property
    def k(self) -> int:
        return len(self.entries)

    def cell(self) -> str:
        """Table-style cell: empty for k=0, else the reduced row."""
        return " ".join(str(e) for e in self.entries)

    def as_dict(self):
        out = {"knot": self.knot, "mirror": self.mirror, "entries": self.entries,
               "gcd": self.gcd, "k": self.k, "chi": self.chi}
        if self.error:
            out["error"] = self.error
        return out


def _band_corner(d: Diagram, c):
    # adjacent slots, the first incoming and the second outgoing; prefer a
    # corner whose two slots lie on different edges
    corners = [((c, i), (c, (i + 1) % 4)) for i in range(4)
               if not d.out[(c, i)] and d.out[(c, (i + 1) % 4)]]
    if not corners:
        raise Unoriented(f"crossing {c} has no coherent corner")
    corners.sort(key=lambda ab: d.opposite(ab[0]) == ab[1])
    return corners[0]


def seifert_movie(d: Diagram, **finish_opts) -> Movie:
    """Movie L -> empty for the surface of Seifert's algorithm on ``d``.

    Every crossing gets one saddle cutting its half-twisted band, which leaves
    a kink that an R1 move removes.  The remaining Seifert circles are capped.
    """
    m = Movie(d)
    for c in list(d.crossings):
        a, b = _band_corner(m.end, c)
        if m.end.opposite(a) == b:
            # a lobe edge: mark it so the saddle sees two edges
            m = m.then(Move("add_strand", at=(a,)))
        m = m.then(Move("saddle", at=(a, b)), Move("r1_down", at=((c, 0),)))
    return m.finish(**finish_opts)


def reduced_row(values) -> List[int]:
    """A 1xk row up to change of basis: its gcd followed by zeros."""
    values = list(values)
    if not values:
        return []
    return [gcd_list(values)] + [0] * (len(values) - 1)


def seifert_result(name: str, d: Diagram, mirror: bool = False, depth: int = 3) -> SeifertResult:
    if mirror:
        d = mirror_diagram(d)
    movie = seifert_movie(d, depth=depth)
    chi = movie.chi()
    M = movie.induced_matrix(0, -chi)
    raw = [M.entries.get((0, j), 0) for j in range(M.cols)] if M.rows else [0] * M.cols
    return SeifertResult(name, reduced_row(raw), gcd_list(raw), chi, raw, mirror)


def seifert_table(knots, mirrors: bool = False, loader=None, workers: int = 1):
    """Results for each named fixture, in input order.

    With ``mirrors`` every knot contributes a second row for the mirror
    surface.  Failures are recorded on the row and do not stop the run.
    """
    if loader is None:
        from ..fixtures import load_knot as loader
    jobs = [(name, False) for name in knots]
    if mirrors:
        jobs = [(name, mir) for name in knots for mir in (False, True)]

    def run(job):
        name, mir = job
        try:
            return seifert_result(name, loader(name), mir)
        except KhError as exc:
            return SeifertResult(name, mirror=mir, error=exc.record())

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(run, jobs))
    return [run(j) for j in jobs]
