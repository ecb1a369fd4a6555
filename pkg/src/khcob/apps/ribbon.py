"""Pairwise comparison of ribbon-disk movies by their Khovanov-Jacobsson classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from ..cobordism import Movie, compare_movies
from ..errors import KhError


@dataclass
class RibbonReport:
    names: List[str]
    verdicts: List[List[Optional[str]]]
    classes: int
    errors: List[dict] = field(default_factory=list)
    mirror_verdicts: Optional[List[List[Optional[str]]]] = None

    def as_dict(self):
        out = {"names": self.names, "verdicts": self.verdicts, "classes": self.classes}
        if self.mirror_verdicts is not None:
            out["mirror_verdicts"] = self.mirror_verdicts
        if self.errors:
            out["errors"] = self.errors
        return out


def _matrix(movies, errors):
    n = len(movies)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        out[i][i] = "equal"
        for j in range(i + 1, n):
            try:
                v = compare_movies(movies[i], movies[j]).verdict
            except KhError as exc:
                errors.append({"pair": [i, j], **exc.record()})
                v = None
            out[i][j] = out[j][i] = v
    return out


def _same(v):
    return v in ("equal", "negatives")


def _count_classes(verdicts, mirror_verdicts=None):
    # union-find; with mirrors, two disks share a class only when the disks
    # and their mirrors both agree up to sign
    n = len(verdicts)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if _same(verdicts[i][j]) and (mirror_verdicts is None
                                          or _same(mirror_verdicts[i][j])):
                parent[find(i)] = find(j)
    return len({find(i) for i in range(n)})


def ribbon_compare(movies, names=None, mirrors: bool = True) -> RibbonReport:
    """Compare every pair of disk movies and count the classes they fall into.

    Disks count as distinguished when their classes differ up to sign, or,
    with ``mirrors``, when the classes of their mirror disks do.
    """
    movies = [m if isinstance(m, Movie) else Movie.from_json(m) for m in movies]
    names = list(names) if names else [f"disk{i}" for i in range(len(movies))]
    errors: List[dict] = []
    verdicts = _matrix(movies, errors)
    mv = _matrix([m.mirror() for m in movies], errors) if mirrors else None
    return RibbonReport(names, verdicts, _count_classes(verdicts, mv), errors, mv)
