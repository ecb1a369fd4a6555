"""Khovanov homology of a diagram and comparison of classes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebra import HomologyPresentation, IntegerMatrix, homology_with_generators, in_image
from .diagram import Diagram
from .errors import ComputationTooLarge, DifferentDiagram, GradingMismatch
from .state import (
    ChainElement,
    count_generators,
    differential,
    differential_matrix,
    generators,
    grading_of,
    is_outside,
    reorder_onto,
    supported_gradings,
    vector_of,
)


#: Largest total size of the three chain groups around one bigrading that
#: ``kh`` accepts; the dense Smith form beyond this is impractical.
MAX_GENERATORS = 6000


def kh(d: Diagram, h: int, q: int, limit: Optional[int] = None) -> HomologyPresentation:
    """Kh^{h,q}(D) with generators as chain elements."""
    limit = MAX_GENERATORS if limit is None else limit
    if limit:
        size = sum(count_generators(d, k, q) for k in (h - 1, h, h + 1))
        if size > limit:
            raise ComputationTooLarge(
                f"Kh^{{{h},{q}}} needs {size} generators (limit {limit})")
    basis = generators(d, h, q)
    d_in = differential_matrix(d, (h - 1, q))
    d_out = differential_matrix(d, (h, q))
    pres = homology_with_generators(d_in, d_out, (d, basis))
    pres.grading = (h, q)
    return pres


def kh_table(d: Diagram, with_zero=False):
    """Every nonzero Kh^{h,q}(D) as ``{(h, q): summands}``."""
    out = {}
    for g in supported_gradings(d):
        pres = kh(d, *g)
        if pres.summands or with_zero:
            out[g] = list(pres.summands)
    return out


def poincare(table) -> str:
    """Compact text form such as ``q^1 t^0 + Z/2 q^7 t^3``."""
    parts = []
    for (h, q), summ in sorted(table.items()):
        free = sum(1 for s in summ if s == 0)
        if free:
            parts.append(f"{free if free > 1 else ''}q^{q}t^{h}")
        for s in summ:
            if s > 1:
                parts.append(f"Z/{s}·q^{q}t^{h}")
    return " + ".join(parts) if parts else "0"


def homogeneous_grading(c: ChainElement):
    gs = c.gradings()
    if len(gs) > 1:
        raise GradingMismatch(f"element spans several gradings {sorted(gs)}")
    return next(iter(gs)) if gs else None


@dataclass
class Verdict:
    verdict: str
    certificate: str
    witness: Optional[tuple] = None

    def as_dict(self):
        out = {"verdict": self.verdict, "certificate": self.certificate}
        if self.witness is not None:
            out["witness"] = repr(self.witness)
        return out


def class_equal_up_to_sign(a: ChainElement, b: ChainElement,
                           d_in: Optional[IntegerMatrix] = None) -> Verdict:
    """Decide whether [a] = [b], [a] = -[b], or neither, for cycles a, b."""
    d = a.diagram
    if b.diagram is not d:
        if not d.same_graph(b.diagram):
            raise DifferentDiagram("classes live on different diagrams")
        b = reorder_onto(b, d)
    ga, gb = homogeneous_grading(a), homogeneous_grading(b)
    if ga is not None and gb is not None and ga != gb:
        raise GradingMismatch(f"gradings {ga} and {gb} differ")
    g = ga or gb
    diff, tot = a - b, a + b
    if diff.is_zero():
        return Verdict("equal", "identical")
    if tot.is_zero():
        return Verdict("negatives", "identical")
    if g is None:
        return Verdict("distinct", "zero")
    ok_d, wd = is_outside(diff)
    ok_s, ws = is_outside(tot)
    if ok_d and ok_s:
        return Verdict("distinct", "outside-image", (wd, ws))
    h, q = g
    basis = generators(d, h, q)
    index = {k: i for i, k in enumerate(basis)}
    if d_in is None:
        d_in = differential_matrix(d, (h - 1, q))
    if not ok_d and in_image(d_in, vector_of(diff, index))[0]:
        return Verdict("equal", "in-image")
    if not ok_s and in_image(d_in, vector_of(tot, index))[0]:
        return Verdict("negatives", "in-image")
    return Verdict("distinct", "not-in-image")


def is_cycle(c: ChainElement) -> bool:
    return differential(c).is_zero()
