"""Smoothings, labelled smoothings, chain elements and the Khovanov differential.

A generator is keyed by ``(bits, labels)``: ``bits`` is a tuple of 0/1 indexed
by crossing position and ``labels`` holds ``"1"`` or ``"x"`` per loop in the
canonical loop order (loops sorted by their minimal slot).
"""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .diagram import Diagram
from .errors import AlreadySmoothedOne, BadPermutation, DifferentDiagram

ONE = "1"
X = "x"

_MERGE = {(ONE, ONE): ONE, (ONE, X): X, (X, ONE): X}


class Loop:
    """A loop of a smoothing: its slots in traversal order."""

    __slots__ = ("slots",)

    def __init__(self, slots):
        self.slots = tuple(slots)

    def __eq__(self, other):
        return isinstance(other, Loop) and self.slots == other.slots

    def __hash__(self):
        return hash(self.slots)

    def __len__(self):
        return len(self.slots)

    def __repr__(self):
        return f"Loop({list(self.slots)})"

    @property
    def crossings(self):
        return sorted({v for v, _ in self.slots}, key=str)


def trace_loops(d: Diagram, bits: Sequence[int]):
    """Canonically ordered loops of the smoothing ``bits``."""
    bits = tuple(bits)
    _, loops = d.loops(bits)
    return [Loop(d.slot_at(k) for k in lp) for lp in loops]


def n_loops(d: Diagram, bits) -> int:
    return len(d.loops(tuple(bits))[1])


# ---------------------------------------------------------------- gradings
def grading_of(d: Diagram, key):
    bits, labels = key
    h = sum(bits) - d.n_minus
    v_plus = sum(1 for lab in labels if lab == ONE)
    q = v_plus - (len(labels) - v_plus) + h + d.n_plus - d.n_minus
    return (h, q)


def grading(d: Diagram, key):
    return grading_of(d, key)


# ---------------------------------------------------------------- elements
class ChainElement:
    """A finite integer combination of labelled smoothings on one diagram.

    Terms are stored in a dict keyed by generator, so the element is always
    simplified: keys are distinct and no coefficient is zero.
    """

    __slots__ = ("diagram", "terms")

    def __init__(self, diagram: Diagram, terms=None):
        self.diagram = diagram
        if terms is None:
            self.terms = {}
        elif isinstance(terms, dict):
            self.terms = {k: v for k, v in terms.items() if v}
        else:
            acc = {}
            for k, v in terms:
                acc[k] = acc.get(k, 0) + v
            self.terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def generator(cls, d: Diagram, key, coefficient=1):
        return cls(d, {(tuple(key[0]), tuple(key[1])): coefficient})

    @classmethod
    def unit(cls, d: Diagram):
        """The generator 1 of the empty diagram's chain group."""
        if d.vertices:
            raise DifferentDiagram("the unit lives on the empty diagram")
        return cls(d, {((), ()): 1})

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def _same(self, other):
        if other.diagram is not self.diagram and not (other.diagram == self.diagram):
            raise DifferentDiagram("chain elements live on different diagrams")

    def __add__(self, other):
        self._same(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return ChainElement(self.diagram, acc)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ChainElement(self.diagram, {k: -v for k, v in self.terms.items()})

    def __mul__(self, n):
        return ChainElement(self.diagram, {k: n * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, ChainElement)
            and self.terms == other.terms
            and (self.diagram is other.diagram or self.diagram == other.diagram)
        )

    def on(self, d: Diagram):
        """The same terms viewed on an equal diagram object."""
        return ChainElement(d, self.terms)

    def gradings(self):
        return {grading_of(self.diagram, k) for k in self.terms}

    def simplify(self):
        return self

    def integer(self) -> int:
        """Value of an element of the empty diagram's chain group."""
        if self.diagram.vertices:
            raise DifferentDiagram("not an element of the empty diagram")
        return self.terms.get(((), ()), 0)

    def format(self) -> str:
        return "\n".join(format_term(k, v) for k, v in self) or "0"

    def __repr__(self):
        return f"ChainElement({len(self.terms)} terms)"


def format_term(key, coef) -> str:
    bits, labels = key
    return f"{coef} * [{''.join(map(str, bits))} | {','.join(labels)}]"


# ------------------------------------------------------------ saddle maps
def _transition(d: Diagram, bits, p):
    """Loop bookkeeping for flipping crossing ``p`` from 0 to 1."""
    cache = d.cache.setdefault("trans", {})
    got = cache.get((bits, p))
    if got is not None:
        return got
    new_bits = bits[:p] + (1,) + bits[p + 1:]
    lo, loops = d.loops(bits)
    lo2, loops2 = d.loops(new_bits)
    a, b = lo[4 * p], lo[4 * p + 2]
    c1, c2 = lo2[4 * p], lo2[4 * p + 1]
    others = tuple((j, lo2[loops[j][0]]) for j in range(len(loops)) if j != a and j != b)
    got = (new_bits, a, b, c1, c2, others, len(loops2))
    if len(cache) < 500000:
        cache[(bits, p)] = got
    return got


def saddle_terms(d: Diagram, key, p):
    """Unsigned saddle at crossing position ``p`` as a list of (key, coef)."""
    bits, labels = key
    if bits[p] != 0:
        raise AlreadySmoothedOne(f"crossing {p} is already 1-smoothed")
    new_bits, a, b, c1, c2, others, m = _transition(d, bits, p)
    new = [None] * m
    for j, t in others:
        new[t] = labels[j]
    if a != b:
        lab = _MERGE.get((labels[a], labels[b]))
        if lab is None:
            return []
        new[c1] = lab
        return [((new_bits, tuple(new)), 1)]
    if labels[a] == X:
        new[c1] = X
        new[c2] = X
        return [((new_bits, tuple(new)), 1)]
    out = []
    for l1, l2 in ((ONE, X), (X, ONE)):
        new[c1] = l1
        new[c2] = l2
        out.append(((new_bits, tuple(new)), 1))
    return out


def saddle_map(d: Diagram, key, p) -> ChainElement:
    return ChainElement(d, saddle_terms(d, key, p))


def signed_saddle_terms(d: Diagram, key, p):
    sign = -1 if sum(key[0][:p]) % 2 else 1
    return [(k, sign * v) for k, v in saddle_terms(d, key, p)]


def differential_terms(d: Diagram, key):
    bits = key[0]
    out = []
    ones = 0
    for p, b in enumerate(bits):
        if b:
            ones += 1
            continue
        sign = -1 if ones % 2 else 1
        for k, v in saddle_terms(d, key, p):
            out.append((k, sign * v))
    return out


def differential(c: ChainElement) -> ChainElement:
    acc = {}
    d = c.diagram
    for key, coef in c.terms.items():
        for k, v in differential_terms(d, key):
            acc[k] = acc.get(k, 0) + coef * v
    return ChainElement(d, acc)


# ---------------------------------------------------------- enumeration
def generators(d: Diagram, h: int, q: int):
    """All generators in bigrading (h, q), in canonical order."""
    n = d.n_crossings
    weight = h + d.n_minus
    if weight < 0 or weight > n:
        return []
    t = q - h - d.n_plus + d.n_minus
    out = []
    for ones in combinations(range(n), weight):
        bits = [0] * n
        for p in ones:
            bits[p] = 1
        bits = tuple(bits)
        m = n_loops(d, bits)
        if (m + t) % 2:
            continue
        v_plus = (m + t) // 2
        if not 0 <= v_plus <= m:
            continue
        for xs in combinations(range(m), m - v_plus):
            labels = [ONE] * m
            for j in xs:
                labels[j] = X
            out.append((bits, tuple(labels)))
    out.sort()
    return out


def count_generators(d: Diagram, h: int, q: int) -> int:
    """Size of the chain group in bigrading (h, q), without listing it."""
    n = d.n_crossings
    weight = h + d.n_minus
    if weight < 0 or weight > n:
        return 0
    t = q - h - d.n_plus + d.n_minus
    total = 0
    for ones in combinations(range(n), weight):
        bits = [0] * n
        for p in ones:
            bits[p] = 1
        m = n_loops(d, tuple(bits))
        if (m + t) % 2 == 0 and 0 <= (m + t) // 2 <= m:
            total += comb(m, (m + t) // 2)
    return total


def all_generators(d: Diagram):
    n = d.n_crossings
    out = []
    for mask in range(2 ** n):
        bits = tuple((mask >> (n - 1 - p)) & 1 for p in range(n))
        m = n_loops(d, bits)
        for lm in range(2 ** m):
            out.append((bits, tuple(X if (lm >> j) & 1 else ONE for j in range(m))))
    return out


def supported_gradings(d: Diagram):
    """Every (h, q) carrying at least one generator."""
    n = d.n_crossings
    seen = set()
    for mask in range(2 ** n):
        bits = tuple((mask >> (n - 1 - p)) & 1 for p in range(n))
        m = n_loops(d, bits)
        h = sum(bits) - d.n_minus
        for v_plus in range(m + 1):
            seen.add((h, 2 * v_plus - m + h + d.n_plus - d.n_minus))
    return sorted(seen)


def differential_matrix(d: Diagram, g):
    """Matrix of d from (h, q) to (h+1, q) in canonical generator order."""
    from .algebra import IntegerMatrix

    h, q = g
    cols = generators(d, h, q)
    rows = generators(d, h + 1, q)
    row_of = {k: i for i, k in enumerate(rows)}
    entries = {}
    for j, key in enumerate(cols):
        for k, v in differential_terms(d, key):
            i = row_of[k]
            entries[(i, j)] = entries.get((i, j), 0) + v
    return IntegerMatrix(len(rows), len(cols), entries)


def vector_of(c: ChainElement, basis_index):
    """Coordinates of c in a generator basis (dict key -> index)."""
    vec = [0] * len(basis_index)
    for k, v in c.terms.items():
        vec[basis_index[k]] += v
    return vec


def element_of(d: Diagram, basis, vec) -> ChainElement:
    return ChainElement(d, {basis[i]: v for i, v in enumerate(vec) if v})


# ------------------------------------------------------------- reordering
def _check_perm(pi, n):
    pi = tuple(int(x) for x in pi)
    if sorted(pi) != list(range(n)):
        raise BadPermutation(f"{pi} is not a permutation of {n} positions")
    return pi


def reorder_sign(sigma, pi) -> int:
    """Sign of the reorder isomorphism on the smoothing ``sigma``.

    ``pi[i]`` is the old position of the crossing placed at new position i.
    The sign counts pairs of 1-smoothed crossings whose relative order flips.
    """
    sigma = tuple(sigma)
    pi = _check_perm(pi, len(sigma))
    inv = [0] * len(pi)
    for new, old in enumerate(pi):
        inv[old] = new
    ones = [j for j, b in enumerate(sigma) if b]
    flips = 0
    for a in range(len(ones)):
        for b in range(a + 1, len(ones)):
            if inv[ones[a]] > inv[ones[b]]:
                flips += 1
    return -1 if flips % 2 else 1


def _relabel_same_graph(d_old: Diagram, d_new: Diagram, bits_old, bits_new, labels):
    lo_new, _ = d_new.loops(bits_new)
    _, loops_old = d_old.loops(bits_old)
    new = [None] * len(loops_old)
    for j, lp in enumerate(loops_old):
        s = d_old.slot_at(lp[0])
        new[lo_new[d_new.slot_index(s)]] = labels[j]
    return tuple(new)


def apply_reorder(c: ChainElement, pi) -> ChainElement:
    """Move crossing ``pi[i]`` (old position) to new position i."""
    d = c.diagram
    pi = _check_perm(pi, d.n_crossings)
    d_new = d.with_order([d.crossings[p] for p in pi])
    return reorder_onto(c, d_new)


def reorder_onto(c: ChainElement, d_new: Diagram) -> ChainElement:
    """Transport onto a diagram with the same graph and another enumeration."""
    d = c.diagram
    if not d.same_graph(d_new):
        raise DifferentDiagram("target diagram is not a reordering")
    if d_new.crossings == d.crossings and d_new.strands == d.strands:
        return ChainElement(d_new, c.terms)
    pi = [d.position(x) for x in d_new.crossings]
    acc = {}
    for (bits, labels), coef in c.terms.items():
        new_bits = tuple(bits[p] for p in pi)
        sign = reorder_sign(bits, pi)
        new_labels = _relabel_same_graph(d, d_new, bits, new_bits, labels)
        k = (new_bits, new_labels)
        acc[k] = acc.get(k, 0) + sign * coef
    return ChainElement(d_new, acc)


# --------------------------------------------------------- certificates
def is_outside(c: ChainElement):
    """Return ``(True, witness_key)`` if some term certifies that c is not a
    boundary: every 1-smoothed crossing of the term sits between two distinct
    loops that are both labelled 1."""
    d = c.diagram
    for key, coef in sorted(c.terms.items()):
        bits, labels = key
        lo, _ = d.loops(bits)
        ok = True
        for p, b in enumerate(bits):
            if b:
                la, lb = lo[4 * p], lo[4 * p + 1]
                if la == lb or labels[la] != ONE or labels[lb] != ONE:
                    ok = False
                    break
        if ok:
            return True, key
    return False, None


def is_cycle_certificate(c: ChainElement) -> bool:
    """True if every 0-smoothed crossing of every term sits between two
    distinct x-labelled loops, so each saddle is an x-x merge."""
    d = c.diagram
    for key in c.terms:
        bits, labels = key
        lo, _ = d.loops(bits)
        for p, b in enumerate(bits):
            if not b:
                la, lb = lo[4 * p], lo[4 * p + 2]
                if la == lb or labels[la] != X or labels[lb] != X:
                    return False
    return True
