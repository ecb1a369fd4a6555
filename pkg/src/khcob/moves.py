"""Elementary moves and the chain maps they induce.

Each move is handled in two halves.  The geometric half checks the locus and
produces the new diagram.  The algebraic half maps chain elements.
:func:`prepare` bundles both: it returns the pre-move diagram (reordered so
the crossings involved sit last, as the sign conventions require), the
post-move diagram, and the chain map between them.

The Reidemeister maps come from Gaussian elimination on the local cube:

* R1 removes an acyclic pair (the kink circle labelled by the unit on one side).
* R2 removes two pairs in sequence.  That yields a retraction ``F``, an
  inclusion ``G`` and a homotopy ``h`` with ``G F - 1 = d h + h d``.
* R3 resolves the crossing not on the top strand.  Both diagrams then become
  mapping cones of R2-type complexes, and the R2 data reduces each cone to
  the same smaller cone.  The composite of one reduction with the other
  inclusion is the R3 map.

Every map is checked exhaustively against the differential in the tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

from .diagram import CROSSING, STRAND, Builder, Diagram, mirror_diagram, mirror_slot
from .errors import (
    BadSlot,
    LastVertexOnComponent,
    LoopHasCrossings,
    MoveError,
    NotABigon,
    NotAKink,
    NotATriangle,
    SameEdge,
    SameEdgeConflict,
    UnsupportedConfiguration,
)
from .state import ONE, X, ChainElement, reorder_onto, saddle_terms, signed_saddle_terms

KINDS = (
    "birth", "death", "saddle", "r1_down", "r1_up", "r2_down", "r2_up", "r3",
    "fuse", "add_strand",
)

_MERGE = {(ONE, ONE): ONE, (ONE, X): X, (X, ONE): X}


# ====================================================================== Move
@dataclass(frozen=True)
class Move:
    """A located elementary move.

    ``at`` lists slots.  The remaining fields carry variant data.

    * ``sign`` and ``side`` belong to r1_up.
    * ``ids`` names the vertices a move creates.
    * ``over``, ``turns`` and ``flips`` pin down the exact local wiring, so that
      the inverse of a removal rebuilds the same diagram.
    """

    kind: str
    at: tuple = ()
    sign: Optional[str] = None
    side: Optional[str] = None
    ids: tuple = ()
    over: Optional[bool] = None
    turns: tuple = ()
    flips: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MoveError(f"unknown move kind {self.kind!r}")
        object.__setattr__(self, "at", tuple((s[0], int(s[1])) for s in self.at))
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "turns", tuple(int(t) for t in self.turns))
        object.__setattr__(self, "flips", tuple(bool(f) for f in self.flips))

    def to_json(self) -> dict:
        out = {"kind": self.kind, "at": [[s[0], s[1]] for s in self.at]}
        if self.sign is not None:
            out["sign"] = self.sign
        if self.side is not None:
            out["side"] = self.side
        if self.ids:
            out["ids"] = list(self.ids)
        if self.over is not None:
            out["over"] = self.over
        if self.turns:
            out["turns"] = list(self.turns)
        if self.flips:
            out["flips"] = list(self.flips)
        return out

    @classmethod
    def from_json(cls, obj) -> "Move":
        if isinstance(obj, str):
            obj = json.loads(obj)
        try:
            kind = obj["kind"]
        except (KeyError, TypeError):
            raise MoveError(f"move record without a kind: {obj!r}") from None
        extra = set(obj) - {"kind", "at", "sign", "side", "ids", "over", "turns", "flips"}
        if extra:
            raise MoveError(f"unknown move fields {sorted(extra)}")
        try:
            at = tuple((s[0], int(s[1])) for s in obj.get("at", ()))
        except (TypeError, ValueError, IndexError):
            raise MoveError(f"malformed locus {obj.get('at')!r}") from None
        sign = obj.get("sign")
        if sign is not None and sign not in ("+", "-"):
            raise MoveError(f"sign must be '+' or '-', got {sign!r}")
        side = obj.get("side")
        if side is not None and side not in ("left", "right"):
            raise MoveError(f"side must be 'left' or 'right', got {side!r}")
        return cls(kind=kind, at=at, sign=sign, side=side, ids=tuple(obj.get("ids", ())),
                   over=obj.get("over"), turns=tuple(obj.get("turns", ())),
                   flips=tuple(obj.get("flips", ())))

    def __str__(self):
        return json.dumps(self.to_json())


@dataclass
class Prepared:
    """Geometry and algebra of one move on one diagram."""

    move: Move
    pre: Diagram
    post: Diagram
    chain: Callable[[ChainElement], ChainElement]
    canonical: Move
    chi: int = 0
    info: dict = field(default_factory=dict)

    def apply(self, c: ChainElement) -> ChainElement:
        return self.chain(reorder_onto(c, self.pre))


# ================================================================= transport
class Transport:
    """Carries loop labels from states of one diagram to states of another.

    ``amap`` sends anchor slots of the source to slots of the target.  A source
    loop goes to the target loop through the image of any of its anchors.
    """

    def __init__(self, src: Diagram, tgt: Diagram, amap):
        self.src = src
        self.tgt = tgt
        self.pairs = tuple(
            (src.slot_index(s), tgt.slot_index(t)) for s, t in sorted(
                amap.items(), key=lambda kv: src.slot_index(kv[0]))
        )
        self._cache = {}

    def loop_map(self, b1, b2):
        key = (b1, b2)
        got = self._cache.get(key)
        if got is None:
            lo1, loops1 = self.src.loops(b1)
            lo2, loops2 = self.tgt.loops(b2)
            m = [-1] * len(loops1)
            for i1, i2 in self.pairs:
                j = lo1[i1]
                if m[j] < 0:
                    m[j] = lo2[i2]
            got = (tuple(m), len(loops2), lo2)
            self._cache[key] = got
        return got

    def labels(self, b1, labels, b2, fixed=None, drop=()):
        """Target labels; ``fixed`` maps target slots to labels for loops that
        have no source, ``drop`` lists source loops that disappear."""
        m, n2, lo2 = self.loop_map(b1, b2)
        new = [None] * n2
        for j, t in enumerate(m):
            if j in drop:
                continue
            if t < 0:
                raise MoveError("internal error: unanchored loop in transport")
            if new[t] is not None:
                raise MoveError("internal error: two loops carried onto one")
            new[t] = labels[j]
        if fixed:
            for s, lab in fixed.items():
                t = lo2[self.tgt.slot_index(s)]
                if new[t] is not None:
                    raise MoveError("internal error: fixed loop already labelled")
                new[t] = lab
        if any(v is None for v in new):
            raise MoveError("internal error: target loop left unlabelled")
        return tuple(new)


def _identity_amap(d: Diagram, exclude=()):
    ex = set(exclude)
    return {s: s for s in d.all_slots() if s not in ex}


def _accumulate(acc, terms, coef):
    for k, v in terms:
        acc[k] = acc.get(k, 0) + coef * v


# ============================================================ helpers: walks
def _walk(d: Diagram, s):
    """Follow the edge from ``s`` through strand vertices.  Returns the first
    crossing slot reached and the strand vertices passed."""
    passed = []
    t = d.opposite(s)
    while not d.is_crossing(t[0]):
        passed.append(t[0])
        if t[0] == s[0] and not d.is_crossing(s[0]):
            break
        t = d.opposite(d.through(t))
        if len(passed) > len(d.vertices):
            break
    return t, passed


def _excise(d: Diagram, removed, internal):
    """Delete the vertices ``removed`` and splice the strands through them.

    Returns ``(builder, amap)``.  ``amap`` sends every surviving slot to itself
    and every non-internal removed slot to a slot on the same strand in the
    result.  Strands that never leave the region become loose circles.
    """
    removed = set(removed)
    internal = set(internal)
    b = d.builder()
    amap = {}
    covered = set()
    new_edges = []
    for s in d.all_slots():
        if s[0] in removed or s in covered:
            continue
        t = d.opposite(s)
        if t[0] not in removed:
            continue
        trail = []
        while True:
            u = d.through(t)
            trail += [t, u]
            w = d.opposite(u)
            if w[0] not in removed:
                break
            t = w
        new_edges.append((s, w))
        covered.update((s, w))
        covered.update(trail)
        for r in trail:
            if r not in internal:
                amap[r] = s
    loose = []
    for s in d.all_slots():
        if s[0] not in removed or s in covered:
            continue
        cyc = []
        t = s
        while True:
            u = d.through(t)
            cyc += [t, u]
            t = d.opposite(u)
            if t == s:
                break
        covered.update(cyc)
        loose.append(cyc)
    for v in removed:
        b.remove_vertex(v)
    for s, w in new_edges:
        b.connect(s, w)
    taken = set()
    for cyc in loose:
        vid = d.fresh_id("s", taken)
        taken.add(vid)
        b.add_vertex(vid, STRAND)
        b.connect((vid, 0), (vid, 1))
        b.hint[(vid, 1)] = True
        for r in cyc:
            if r not in internal:
                amap[r] = (vid, 0)
    for s in d.all_slots():
        if s[0] not in removed:
            amap[s] = s
    return b, amap


def _bits_with(bits, updates):
    b = list(bits)
    for p, v in updates.items():
        b[p] = v
    return tuple(b)


# ================================================================ R2 algebra
class BigonData:
    """Gaussian elimination data for a bigon between crossings at positions
    ``px`` and ``py`` of a diagram.

    ``internal`` is the set of slots on the bigon side (the two inner edges,
    plus anything locally joined to them).  Bits outside px, py are left alone,
    which lets the same data serve the R3 construction with one more crossing
    held at a fixed resolution.
    """

    def __init__(self, d: Diagram, px: int, py: int, internal, probe_bits):
        self.d = d
        self.px, self.py = px, py
        self.internal = frozenset(d.slot_index(s) for s in internal)
        amap = _identity_amap(d, exclude=internal)
        self.local = Transport(d, d, amap)
        # classify the two mixed states with a local circle test
        self.O = self.E = None
        for loc in ((1, 0), (0, 1)):
            bits = _bits_with(probe_bits, {px: loc[0], py: loc[1]})
            if self._circle(bits) is not None:
                if self.O is not None:
                    raise NotABigon("both mixed resolutions carry a circle")
                self.O = loc
        if self.O is None:
            raise NotABigon("no mixed resolution carries a local circle")
        self.E = (1 - self.O[0], 1 - self.O[1])
        # position flipped by 00 -> O and 00 -> E
        self.p_O = px if self.O[0] else py
        self.p_E = px if self.E[0] else py

    def local_state(self, bits):
        return (bits[self.px], bits[self.py])

    def _circle(self, bits):
        _, loops = self.d.loops(bits)
        for j, lp in enumerate(loops):
            if all(k in self.internal for k in lp):
                return j
        return None

    def _set(self, bits, loc):
        return _bits_with(bits, {self.px: loc[0], self.py: loc[1]})

    @staticmethod
    def _sign_before(bits, p):
        return -1 if sum(bits[:p]) % 2 else 1

    def drop_circle_to_00(self, key):
        """O-state generator with its circle removed, moved to the 00 state."""
        bits, labels = key
        j = self._circle(bits)
        b00 = self._set(bits, (0, 0))
        return (b00, self.local.labels(bits, labels, b00, drop=(j,))), labels[j]

    def add_circle_to_O(self, key, label):
        """11-state generator moved to the O state with a new circle."""
        bits, labels = key
        bO = self._set(bits, self.O)
        lo, loops = self.d.loops(bO)
        j = self._circle(bO)
        slot = self.d.slot_at(loops[j][0])
        return (bO, self.local.labels(bits, labels, bO, fixed={slot: label}))

    def F(self, key):
        """Retraction onto the E-state.  Returns terms in the E state of d."""
        loc = self.local_state(key[0])
        if loc == self.E:
            return [(key, 1)]
        if loc != self.O:
            return []
        k00, lab = self.drop_circle_to_00(key)
        if lab != X:
            return []
        eps_O = self._sign_before(k00[0], self.p_O)
        return [(k, -eps_O * v) for k, v in signed_saddle_terms(self.d, k00, self.p_E)]

    def G(self, key):
        """Inclusion of an E-state generator."""
        out = [(key, 1)]
        bits = key[0]
        p = self.px if bits[self.px] == 0 else self.py
        bO = self._set(bits, self.O)
        p_O2 = self.px if bO[self.px] == 0 else self.py
        s_O2 = self._sign_before(bO, p_O2)
        for k, v in signed_saddle_terms(self.d, key, p):
            out.append((self.add_circle_to_O(k, ONE), -s_O2 * v))
        return out

    def h(self, key):
        """Homotopy with G F - 1 = d h + h d on the bigon complex."""
        loc = self.local_state(key[0])
        if loc == self.O:
            k00, lab = self.drop_circle_to_00(key)
            if lab != X:
                return []
            return [(k00, HOMOTOPY_SIGN * self._sign_before(k00[0], self.p_O))]
        if loc == (1, 1):
            bO = self._set(key[0], self.O)
            p_O2 = self.px if bO[self.px] == 0 else self.py
            s_O2 = self._sign_before(bO, p_O2)
            return [(self.add_circle_to_O(key, ONE), HOMOTOPY_SIGN * s_O2)]
        return []


#: Global sign making ``G F - 1 = d h + h d``; fixed by the exhaustive test.
HOMOTOPY_SIGN = -1


def _map_terms(func, c: ChainElement, target: Diagram):
    acc = {}
    for key, coef in c.terms.items():
        _accumulate(acc, func(key), coef)
    return ChainElement(target, acc)


# ============================================================ move handlers
def _fresh(d, prefix, given, k, taken=()):
    ids = list(given)
    taken = set(taken) | set(ids)
    while len(ids) < k:
        vid = d.fresh_id(prefix, taken)
        ids.append(vid)
        taken.add(vid)
    for v in ids:
        if v in dict(d.vertices):
            raise BadSlot(f"vertex id {v!r} already in use")
    return ids


def _prep_birth(d: Diagram, m: Move) -> Prepared:
    ids = _fresh(d, "s", m.ids, max(1, len(m.ids)))
    flips = list(m.flips) + [False] * (len(ids) - len(m.flips))
    b = d.builder()
    for v in ids:
        b.add_vertex(v, STRAND)
    n = len(ids)
    for k in range(n):
        v, w = ids[k], ids[(k + 1) % n]
        exit_slot = (v, 0 if flips[k] else 1)
        entry_slot = (w, 1 if flips[(k + 1) % n] else 0)
        b.connect(exit_slot, entry_slot)
        b.hint[exit_slot] = True
    post = b.build()
    slot = (ids[0], 0)
    tr = Transport(d, post, _identity_amap(d))

    def chain(c):
        acc = {}
        for (bits, labels), coef in c.terms.items():
            new = tr.labels(bits, labels, bits, fixed={slot: ONE})
            acc[(bits, new)] = acc.get((bits, new), 0) + coef
        return ChainElement(post, acc)

    canon = _canonical_birth(post, ids)
    return Prepared(m, d, post, chain, canon, chi=1)


def _circle_chain(d: Diagram, comp_vertices, start_vertex):
    """Describe a crossingless circle as (ids, flips) starting at
    ``start_vertex`` and following its orientation."""
    s = (start_vertex, 0) if d.out[(start_vertex, 1)] else (start_vertex, 1)
    # s is the entry slot of start_vertex
    ids, flips = [], []
    t = s
    while True:
        v = t[0]
        ids.append(v)
        flips.append(t[1] == 1)
        u = d.through(t)
        t = d.opposite(u)
        if t == s:
            break
    return tuple(ids), tuple(flips)


def _canonical_birth(post: Diagram, ids):
    start = min(ids, key=str)
    cid, cflips = _circle_chain(post, ids, start)
    return Move("birth", ids=cid, flips=cflips)


def _prep_death(d: Diagram, m: Move) -> Prepared:
    if len(m.at) != 1:
        raise MoveError("death takes one slot")
    at = d.check_slot(m.at[0])
    comp = d._component_slots(at)
    verts = sorted({s[0] for s in comp}, key=str)
    if any(d.is_crossing(v) for v in verts):
        raise LoopHasCrossings(f"the loop through {at!r} has crossings")
    b = d.builder()
    for v in verts:
        b.remove_vertex(v)
    post = b.build()
    k_at = d.slot_index(at)
    tr = Transport(d, post, {s: s for s in post.all_slots()})

    def chain(c):
        acc = {}
        for (bits, labels), coef in c.terms.items():
            lo, _ = d.loops(bits)
            j = lo[k_at]
            if labels[j] == ONE:
                continue
            new = tr.labels(bits, labels, bits, drop=(j,))
            acc[(bits, new)] = acc.get((bits, new), 0) + coef
        return ChainElement(post, acc)

    canon = Move("death", at=((verts[0], 0),))
    ids, flips = _circle_chain(d, verts, verts[0])
    return Prepared(m, d, post, chain, canon, chi=1,
                    info={"inverse": Move("birth", ids=ids, flips=flips)})


def _same_graph_piece(d: Diagram, v, w):
    return any(v in comp and w in comp for comp in d.graph_components())


def _prep_saddle(d: Diagram, m: Move) -> Prepared:
    if len(m.at) != 2:
        raise MoveError("saddle takes two slots")
    a, b = (d.check_slot(s) for s in m.at)
    if a == b:
        raise SameEdgeConflict("saddle endpoints coincide")
    a2, b2 = d.opposite(a), d.opposite(b)
    if b == a2:
        raise SameEdgeConflict("both saddle slots lie on the same edge")
    if _same_graph_piece(d, a[0], b[0]):
        # the band must sit in a face that runs along both edges
        if b2 not in d.face_of(a) and b not in d.face_of(a2):
            raise SameEdgeConflict(
                "saddle slots share no face; use the opposite end of one edge")
    bl = d.builder()
    bl.connect(a, b)
    bl.connect(a2, b2)
    post = bl.build(check=False)
    if not post.is_planar():
        raise SameEdgeConflict(
            "saddle does not embed in the plane; use the opposite end of one edge")
    ka, kb, ka2 = d.slot_index(a), d.slot_index(b), d.slot_index(a2)
    pa, pa2 = post.slot_index(a), post.slot_index(a2)
    tr = Transport(d, post, _identity_amap(d))

    def one(key):
        bits, labels = key
        lo, loops = d.loops(bits)
        lo2, loops2 = post.loops(bits)
        A, B = lo[ka], lo[kb]
        m_, n2, _ = tr.loop_map(bits, bits)
        new = [None] * n2
        for j, t in enumerate(m_):
            if j != A and j != B:
                new[t] = labels[j]
        if A != B:
            lab = _MERGE.get((labels[A], labels[B]))
            if lab is None:
                return []
            new[lo2[pa]] = lab
            return [((bits, tuple(new)), 1)]
        c1, c2 = lo2[pa], lo2[pa2]
        if labels[A] == X:
            new[c1] = new[c2] = X
            return [((bits, tuple(new)), 1)]
        out = []
        for l1, l2 in ((ONE, X), (X, ONE)):
            new[c1], new[c2] = l1, l2
            out.append(((bits, tuple(new)), 1))
        return out

    coherent = d.out[a] != d.out[b]
    return Prepared(m, d, post, lambda c: _map_terms(one, c, post), Move("saddle", at=(a, b)),
                    chi=-1, info={"coherent": coherent, "inverse": Move("saddle", at=(a, a2))})


# ------------------------------------------------------------------- R1
def _find_kink(d: Diagram, x):
    """Kink loops at crossing x: list of (k, strand vertices on the loop)."""
    found = []
    for k in range(4):
        t, passed = _walk(d, (x, k))
        if t == (x, (k + 1) % 4):
            found.append((k, passed))
    return found


def _prep_r1_down(d0: Diagram, m: Move) -> Prepared:
    if len(m.at) != 1:
        raise MoveError("r1_down takes one slot")
    at = d0.check_slot(m.at[0])
    x = at[0]
    if not d0.is_crossing(x):
        raise NotAKink(f"{x!r} is not a crossing")
    kinks = _find_kink(d0, x)
    if not kinks:
        raise NotAKink(f"crossing {x!r} has no kink loop")
    choice = next((kv for kv in kinks if at[1] in (kv[0], (kv[0] + 1) % 4)), kinks[0])
    k, passed = choice
    d = d0.with_order([c for c in d0.crossings if c != x] + [x])
    n = d.n_crossings
    p = n - 1
    beta = 0 if k % 2 == 0 else 1
    internal = {(x, k), (x, (k + 1) % 4)} | {(v, i) for v in passed for i in (0, 1)}
    bl, amap = _excise(d, [x] + passed, internal)
    post = bl.build()
    tr = Transport(d, post, amap)
    k_circ = d.slot_index((x, k))
    k_arc = d.slot_index((x, (k + 2) % 4))

    def one(key):
        bits, labels = key
        if bits[p] != beta:
            return []
        lo, _ = d.loops(bits)
        j = lo[k_circ]
        arc = lo[k_arc]
        nb = bits[:p]
        if beta == 0:
            if labels[j] != X:
                return []
            return [((nb, tr.labels(bits, labels, nb, drop=(j,))), 1)]
        if labels[j] == ONE:
            return [((nb, tr.labels(bits, labels, nb, drop=(j,))), 1)]
        if labels[arc] == X:
            return []
        lab = list(labels)
        lab[arc] = X
        return [((nb, tr.labels(bits, tuple(lab), nb, drop=(j,))), -1)]

    canon = Move("r1_down", at=((x, k),))
    return Prepared(m, d, post, lambda c: _map_terms(one, c, post), canon,
                    info={"crossing": x, "k": k, "sign": d.sign(x)})


def _r1_k(sign, turn):
    return ((0 if sign == "+" else 1) + turn) % 4


def _prep_r1_up(d: Diagram, m: Move) -> Prepared:
    if len(m.at) != 1:
        raise MoveError("r1_up takes one slot")
    at = d.check_slot(m.at[0])
    sign = m.sign or "+"
    side = m.side or "left"
    turn = m.turns[0] if m.turns else 0
    if turn not in (0, 2):
        raise MoveError("r1_up turn must be 0 or 2")
    k = _r1_k(sign, turn)
    (x,) = _fresh(d, "c", m.ids, 1)
    at2 = d.opposite(at)
    bl = d.builder()
    bl.add_vertex(x, CROSSING)
    bl.connect((x, k), (x, (k + 1) % 4))
    if side == "left":
        bl.connect(at, (x, (k + 2) % 4))
        bl.connect((x, (k + 3) % 4), at2)
        port = at
    else:
        bl.connect(at, (x, (k + 3) % 4))
        bl.connect((x, (k + 2) % 4), at2)
        port = at2
    post = bl.build()
    n = post.n_crossings
    beta = 0 if k % 2 == 0 else 1
    tr = Transport(d, post, _identity_amap(d))
    circ = (x, k)
    k_arc = post.slot_index((x, (k + 2) % 4))

    def one(key):
        bits, labels = key
        nb = bits + (beta,)
        if beta == 1:
            return [((nb, tr.labels(bits, labels, nb, fixed={circ: ONE})), 1)]
        out = [((nb, tr.labels(bits, labels, nb, fixed={circ: X})), 1)]
        lo, _ = d.loops(bits)
        # the arc loop is the one through the port slot
        j = lo[d.slot_index(at)]
        if labels[j] == ONE:
            lab = list(labels)
            lab[j] = X
            out.append(((nb, tr.labels(bits, tuple(lab), nb, fixed={circ: ONE})), -1))
        return out

    canon = Move("r1_up", at=(port,), sign=sign, side="left", ids=(x,),
                 turns=(turn,) if turn else ())
    return Prepared(m, d, post, lambda c: _map_terms(one, c, post), canon,
                    info={"crossing": x, "k": k})


# ------------------------------------------------------------------- R2
def _bigon_at(d: Diagram, a, b):
    """Validate an R2 locus.  Returns (X, Y, internal slots, strand vertices)."""
    Xc = a[0]
    if b[0] != Xc or not d.is_crossing(Xc):
        raise NotABigon("both slots must belong to one crossing")
    if (b[1] - a[1]) % 4 not in (1, 3):
        raise NotABigon("bigon slots must be adjacent")
    ta, pa = _walk(d, a)
    tb, pb = _walk(d, b)
    Yc = ta[0]
    if tb[0] != Yc or Yc == Xc:
        raise NotABigon("opposite ends do not meet at a second crossing")
    if (tb[1] - ta[1]) % 4 not in (1, 3):
        raise NotABigon("opposite slots are not adjacent")
    if a[1] % 2 != ta[1] % 2 or b[1] % 2 != tb[1] % 2:
        raise NotABigon("strands alternate over and under; not an R2 bigon")
    internal = {a, b, ta, tb} | {(v, i) for v in pa + pb for i in (0, 1)}
    # the two edges must bound a face
    faces_ok = False
    for s in (a, b, ta, tb):
        face = d.face_of(s)
        if {v for v, _ in face} <= {Xc, Yc} | set(pa) | set(pb) and len(face) == 2 + len(pa) + len(pb):
            faces_ok = True
    if not faces_ok:
        raise NotABigon("the two edges do not bound an empty bigon")
    return Xc, Yc, internal, pa + pb


def _canonical_r2_slots(d, Xc, Yc, internal):
    first = min((Xc, Yc), key=str)
    slots = sorted([s for s in internal if s[0] == first], key=lambda s: s[1])
    i, j = slots[0][1], slots[1][1]
    if (j - i) % 4 == 1:
        return ((first, i), (first, j))
    return ((first, j), (first, i))


def _prep_r2_down(d0: Diagram, m: Move) -> Prepared:
    if len(m.at) != 2:
        raise MoveError("r2_down takes two slots")
    a, b = (d0.check_slot(s) for s in m.at)
    Xc, Yc, internal, passed = _bigon_at(d0, a, b)
    d = d0.with_order([c for c in d0.crossings if c not in (Xc, Yc)] + [Xc, Yc])
    n = d.n_crossings
    bd = BigonData(d, n - 2, n - 1, internal, (0,) * n)
    bl, amap = _excise(d, [Xc, Yc] + passed, internal)
    post = bl.build()
    tr = Transport(d, post, amap)

    def one(key):
        out = []
        for (bits, labels), v in bd.F(key):
            nb = bits[: n - 2]
            out.append(((nb, tr.labels(bits, labels, nb)), v))
        return out

    canon = Move("r2_down", at=_canonical_r2_slots(d, Xc, Yc, internal))
    return Prepared(m, d, post, lambda c: _map_terms(one, c, post), canon,
                    info={"crossings": (Xc, Yc)})


_R2_LAYOUT = {
    # layout slot roles at the first and second new crossing
    "x1": {"A_ext": 3, "A_int": 1, "B_ext": 0, "B_int": 2},
    "x2": {"A_ext": 3, "A_int": 1, "B_ext": 2, "B_int": 0},
}


def _r2_up_geometry(d: Diagram, a, b):
    a = d.check_slot(a)
    b0 = d.check_slot(b)
    a2 = d.opposite(a)
    if b0 in (a, a2):
        raise SameEdge("both r2_up slots lie on the same edge")
    face = d.face_of(a)
    if d.opposite(b0) in face:
        b = b0
    elif b0 in face:
        b = d.opposite(b0)
    elif not any(a[0] in g and b0[0] in g for g in d.graph_components()):
        # separate pieces of a split diagram can be pushed into a common face
        b = b0
    else:
        raise MoveError("the second edge does not border the face right of the first")
    return a, a2, b, d.opposite(b)


def _prep_r2_up(d: Diagram, m: Move, retry: bool = True) -> Prepared:
    if len(m.at) != 2:
        raise MoveError("r2_up takes two slots")
    a, a2, b, b2 = _r2_up_geometry(d, *m.at)
    over = True if m.over is None else bool(m.over)
    turns = tuple(m.turns) if m.turns else (0, 0)
    if len(turns) != 2 or any(t not in (0, 2) for t in turns):
        raise MoveError("r2_up turns must be two values in {0, 2}")
    x1, x2 = _fresh(d, "c", m.ids, 2)
    shift = 0 if over else 1

    def sl(x, t, L):
        return (x, (L + shift + t) % 4)

    t1, t2 = turns
    bl = d.builder()
    bl.add_vertex(x1, CROSSING)
    bl.add_vertex(x2, CROSSING)
    bl.connect(a, sl(x1, t1, 3))
    bl.connect(sl(x1, t1, 1), sl(x2, t2, 1))
    bl.connect(sl(x2, t2, 3), a2)
    bl.connect(b, sl(x1, t1, 0))
    bl.connect(sl(x1, t1, 2), sl(x2, t2, 0))
    bl.connect(sl(x2, t2, 2), b2)
    post = bl.build()
    if not post.is_planar():
        if retry and m.at[1] == b:
            # split pieces: the finger meets the other edge from its far side
            return _prep_r2_up(d, replace(m, at=(m.at[0], d.opposite(b))), False)
        raise MoveError("internal error: r2_up produced a non-planar diagram")
    n = post.n_crossings
    internal = {sl(x1, t1, 1), sl(x2, t2, 1), sl(x1, t1, 2), sl(x2, t2, 0)}
    bd = BigonData(post, n - 2, n - 1, internal, (0,) * n)
    tr = Transport(d, post, _identity_amap(d))

    def one(key):
        bits, labels = key
        nb = bits + bd.E
        e = (nb, tr.labels(bits, labels, nb))
        return bd.G(e)

    canon = _canonical_r2_up(d, post, x1, x2)
    return Prepared(m, d, post, lambda c: _map_terms(one, c, post), canon,
                    info={"crossings": (x1, x2)})


def _r2_up_candidates(pre: Diagram, post: Diagram, Xc, Yc):
    """All r2_up descriptions (over strand first) that rebuild ``post``."""
    out = []
    for x1, x2 in ((Xc, Yc), (Yc, Xc)):
        for t1 in (0, 2):
            for t2 in (0, 2):
                a = post.opposite((x1, (3 + t1) % 4))
                b = post.opposite((x1, (0 + t1) % 4))
                if not (pre.has_slot(a) and pre.has_slot(b)):
                    continue
                if a[0] in (Xc, Yc) or b[0] in (Xc, Yc):
                    continue
                mv = Move("r2_up", at=(a, b), ids=(x1, x2), turns=(t1, t2))
                try:
                    got = _prep_r2_up_geometry_only(pre, mv)
                except MoveError:
                    continue
                if got.same_graph(post):
                    out.append(mv)
    return out


def _prep_r2_up_geometry_only(d, m):
    a, a2, b, b2 = _r2_up_geometry(d, *m.at)
    x1, x2 = m.ids
    t1, t2 = m.turns if m.turns else (0, 0)
    shift = 0 if (m.over is None or m.over) else 1

    def sl(x, t, L):
        return (x, (L + shift + t) % 4)

    bl = d.builder()
    bl.add_vertex(x1, CROSSING)
    bl.add_vertex(x2, CROSSING)
    bl.connect(a, sl(x1, t1, 3))
    bl.connect(sl(x1, t1, 1), sl(x2, t2, 1))
    bl.connect(sl(x2, t2, 3), a2)
    bl.connect(b, sl(x1, t1, 0))
    bl.connect(sl(x1, t1, 2), sl(x2, t2, 0))
    bl.connect(sl(x2, t2, 2), b2)
    return bl.build(check=False)


def _canonical_r2_up(pre, post, x1, x2):
    cands = _r2_up_candidates(pre, post, x1, x2)
    if not cands:
        return None
    return min(cands, key=lambda mv: (str(mv.ids), mv.turns, str(mv.at)))


# ------------------------------------------------------------------- R3
def _triangle(d: Diagram, s):
    face = d.face_of(s)
    verts = [v for v, _ in face]
    if len(face) != 3 or len(set(verts)) != 3 or not all(d.is_crossing(v) for v in verts):
        raise NotATriangle("the face right of the given slot is not a crossing triangle")
    return face


def _triangle_roles(d: Diagram, face):
    """Name the triangle's crossings a, b, c and its internal/external slots."""
    edges = []
    for s in face:
        t = d.opposite(s)
        edges.append((s, t))
    kinds = []
    for s, t in edges:
        o1, o2 = s[1] % 2 == 1, t[1] % 2 == 1
        kinds.append("T" if o1 and o2 else ("B" if not o1 and not o2 else "M"))
    if sorted(kinds) != ["B", "M", "T"]:
        raise UnsupportedConfiguration(
            "alternating triangle: no strand passes over both of its crossings")
    e = dict(zip(kinds, edges))
    sT, tT = e["T"]
    sM, tM = e["M"]
    sB, tB = e["B"]
    # a is the T-crossing that meets the middle edge
    if sT[0] in (sM[0], tM[0]):
        a_int_T, b_int_T = sT, tT
    else:
        a_int_T, b_int_T = tT, sT
    a = a_int_T[0]
    b = b_int_T[0]
    a_int_M = sM if sM[0] == a else tM
    c_int_M = tM if sM[0] == a else sM
    b_int_B = sB if sB[0] == b else tB
    c_int_B = tB if sB[0] == b else sB
    c = c_int_M[0]
    strands = [(a_int_T, b_int_T), (a_int_M, c_int_M), (b_int_B, c_int_B)]
    return a, b, c, strands


def _r3_rewire(d: Diagram, strands):
    def ext(s):
        return (s[0], (s[1] + 2) % 4)

    repl = {}
    internal_new = []
    region = set()
    for xi, yi in strands:
        xe, ye = ext(xi), ext(yi)
        repl[xe] = yi
        repl[ye] = xi
        internal_new.append((xe, ye))
        region.update([xi, yi, xe, ye])
    bl = d.builder()
    new_adj = {s: t for s, t in d.adjacency.items() if s not in region and t not in region}
    for s in region:
        pass
    for xe, ye in internal_new:
        new_adj[xe] = ye
        new_adj[ye] = xe
    for u in repl:
        w = d.opposite(u)
        ru = repl[u]
        rw = repl.get(w, w)
        new_adj[ru] = rw
        new_adj[rw] = ru
    bl.adj = new_adj
    return bl, repl, region


def r3_post(d: Diagram, s):
    """Geometry only: the diagram after an R3 move on the triangle right of
    slot ``s`` (used by the simplifier's search)."""
    face = _triangle(d, s)
    a, b, c, strands = _triangle_roles(d, face)
    bl, _, _ = _r3_rewire(d, strands)
    return bl.build(check=False)


def r3_triangles(d: Diagram):
    """One slot per triangle face that admits an R3 move."""
    out = []
    for f in d.faces():
        if len(f) != 3:
            continue
        verts = {v for v, _ in f}
        if len(verts) != 3 or not all(d.is_crossing(v) for v in verts):
            continue
        try:
            _triangle_roles(d, f)
        except MoveError:
            continue
        out.append(min(f, key=lambda s: (str(s[0]), s[1])))
    return out


def find_reduction(d: Diagram):
    """A crossing-reducing move (r1_down first, then r2_down), or None."""
    for x in d.crossings:
        kinks = _find_kink(d, x)
        if kinks:
            k, passed = kinks[0]
            if not passed:
                return Move("r1_down", at=((x, k),))
    for x in d.crossings:
        for i in range(4):
            try:
                Xc, Yc, internal, passed = _bigon_at(d, (x, i), (x, (i + 1) % 4))
            except NotABigon:
                continue
            if not passed:
                return Move("r2_down", at=((x, i), (x, (i + 1) % 4)))
    return None


def _prep_r3(d0: Diagram, m: Move) -> Prepared:
    at = m.at
    if len(at) == 1:
        s = d0.check_slot(at[0])
        face = _triangle(d0, s)
    elif len(at) == 3:
        verts = {d0.check_slot(s)[0] for s in at}
        cands = []
        for f in d0.faces():
            if len(f) == 3 and {v for v, _ in f} == verts:
                cands.append(f)
        if len(cands) != 1:
            raise NotATriangle("the three slots do not pick out a unique triangle face")
        face = cands[0]
    else:
        raise MoveError("r3 takes one slot (or three)")
    face = _triangle(d0, face[0])
    a, b, c, strands = _triangle_roles(d0, face)
    d = d0.with_order([x for x in d0.crossings if x not in (a, b, c)] + [a, b, c])
    n = d.n_crossings
    pa, pb, pc = n - 3, n - 2, n - 1
    bl, repl, region = _r3_rewire(d, strands)
    post = bl.build()
    if not post.is_planar():
        raise MoveError("internal error: r3 produced a non-planar diagram")
    (aiT, biT), (aiM, ciM), (biB, ciB) = strands
    internal = {aiT, biT, aiM, ciM, biB, ciB}
    # the resolution of c that joins its two internal slots
    pair0 = {frozenset((0, 1)), frozenset((2, 3))}
    beta = 0 if frozenset((ciM[1], ciB[1])) in pair0 else 1

    def ext(s):
        return (s[0], (s[1] + 2) % 4)

    internal_post = {ext(s) for s in internal}
    beta_post = 0 if frozenset((ext(ciM)[1], ext(ciB)[1])) in pair0 else 1
    if beta_post != beta:
        raise MoveError("internal error: bigon side changed under r3")
    probe = (0,) * (n - 1) + (beta,)
    B = BigonData(d, pa, pb, internal, probe)
    Bp = BigonData(post, pa, pb, internal_post, probe)
    amap = _identity_amap(d, exclude=region)
    for u, r in repl.items():
        amap[u] = r
    iso = Transport(d, post, amap)

    # Away from the bigon the isotopy may trade the roles of a and b; the
    # local pairing of the six ports decides.
    xb = {pa: 1, pb: 0, pc: 1 - beta}
    xs = {pa: 0, pb: 1, pc: 1 - beta}
    ports = sorted(repl, key=str)
    here = _port_pairing(d, xb, internal, ports)
    if here == _port_pairing(post, xb, internal_post, [repl[u] for u in ports]):
        swap = False
    elif here == _port_pairing(post, xs, internal_post, [repl[u] for u in ports]):
        swap = True
    else:
        raise MoveError("internal error: r3 sides do not match")

    def T_same(key):  # isotopy on the side away from the bigon
        bits, labels = key
        if swap:
            nb = _bits_with(bits, {pa: bits[pb], pb: bits[pa]})
            return (nb, iso.labels(bits, labels, nb))
        return (bits, iso.labels(bits, labels, bits))

    def s_same(bits):
        return -1 if swap and bits[pa] and bits[pb] else 1

    def T_E(key):
        bits, labels = key
        nb = _bits_with(bits, {pa: Bp.E[0], pb: Bp.E[1]})
        return (nb, iso.labels(bits, labels, nb))

    def mu(dd, terms):
        out = []
        for k, v in terms:
            if k[0][pc] == 0:
                out.extend((kk, v * vv) for kk, vv in signed_saddle_terms(dd, k, pc))
        return out

    def collect(terms):
        acc = {}
        for k, v in terms:
            acc[k] = acc.get(k, 0) + v
        return {k: v for k, v in acc.items() if v}

    J = _r3_sign(d, post, B, Bp, beta, pc, mu, T_same, s_same, T_E, collect)

    def one(key):
        bits = key[0]
        out = []
        if bits[pc] == beta:
            for k, v in B.F(key):
                for kk, vv in Bp.G(T_E(k)):
                    out.append((kk, J * v * vv))
            if beta == 0:
                for k, v in mu(d, B.h(key)):
                    out.append((T_same(k), v * s_same(k[0])))
        else:
            tk = T_same(key)
            sk = s_same(bits)
            out.append((tk, sk))
            if beta == 1:
                for k, v in mu(post, [(tk, sk)]):
                    out.extend((kk, v * vv) for kk, vv in Bp.h(k))
        return out

    canon_at = min(face, key=lambda s: (str(s[0]), s[1]))
    return Prepared(m, d, post, lambda c_: _map_terms(one, c_, post),
                    Move("r3", at=(canon_at,)),
                    info={"crossings": (a, b, c), "beta": beta, "J": J})


def _port_pairing(d: Diagram, local_bits, internal, ports):
    """How the smoothing given by ``local_bits`` (position -> bit) joins the
    ports inside a region, as a set of index pairs into ``ports``."""
    index = {u: k for k, u in enumerate(ports)}
    pairs = set()
    for u in ports:
        s = u
        while True:
            b = local_bits[d.position(s[0])]
            t = (s[0], s[1] ^ 1 if b == 0 else 3 - s[1])
            if t in index:
                break
            s = d.opposite(t)
        pairs.add(frozenset((index[u], index[t])))
    return pairs


def _r3_sign(d, post, B, Bp, beta, pc, mu, T_same, s_same, T_E, collect):
    """Sign identifying the two reduced cones, found on a probe generator."""
    n = d.n_crossings
    pa, pb = pc - 2, pc - 1
    if beta == 0:
        bits = _bits_with((0,) * n, {pa: B.E[0], pb: B.E[1], pc: 0})
        m = len(d.loops(bits)[1])
        e = (bits, (ONE,) * m)
        lhs = collect((T_same(k), v * s_same(k[0])) for k, v in mu(d, B.G(e)))
        rhs = collect(mu(post, Bp.G(T_E(e))))
    else:
        lhs = rhs = {}
        for loc in ((0, 0), (0, 1), (1, 0), (1, 1)):
            bits = _bits_with((0,) * n, {pa: loc[0], pb: loc[1], pc: 0})
            m = len(d.loops(bits)[1])
            for lm in range(2 ** m):
                labels = tuple(X if (lm >> j) & 1 else ONE for j in range(m))
                x = (bits, labels)
                lhs = collect((T_E(k), v * vv) for kk, vv in mu(d, [(x, 1)])
                              for k, v in B.F(kk))
                rhs = collect((k, v * vv) for kk, vv in mu(post, [(T_same(x), s_same(bits))])
                              for k, v in Bp.F(kk))
                if lhs:
                    break
            if lhs:
                break
    if not lhs:
        raise MoveError("internal error: r3 probe vanished")
    if rhs == lhs:
        return 1
    if rhs == {k: -v for k, v in lhs.items()}:
        return -1
    raise MoveError("internal error: reduced cones do not match up to sign")


# ------------------------------------------------------------ fuse / add
def _prep_fuse(d: Diagram, m: Move) -> Prepared:
    if len(m.at) != 1:
        raise MoveError("fuse takes one slot")
    v = d.check_slot(m.at[0])[0]
    if d.is_crossing(v):
        raise MoveError(f"{v!r} is a crossing")
    p, q = d.opposite((v, 0)), d.opposite((v, 1))
    if p == (v, 1):
        raise LastVertexOnComponent(f"{v!r} is the only vertex on its loop")
    bl = d.builder()
    bl.remove_vertex(v)
    bl.connect(p, q)
    post = bl.build()
    amap = {s: s for s in post.all_slots()}
    amap[(v, 0)] = p
    amap[(v, 1)] = q
    tr = Transport(d, post, amap)

    def chain(c):
        acc = {}
        for (bits, labels), coef in c.terms.items():
            k = (bits, tr.labels(bits, labels, bits))
            acc[k] = acc.get(k, 0) + coef
        return ChainElement(post, acc)

    return Prepared(m, d, post, chain, Move("fuse", at=((v, 0),)),
                    info={"inverse": Move("add_strand", at=(p,), ids=(v,))})


def _prep_add_strand(d: Diagram, m: Move) -> Prepared:
    if len(m.at) != 1:
        raise MoveError("add_strand takes one slot")
    p = d.check_slot(m.at[0])
    (v,) = _fresh(d, "s", m.ids, 1)
    q = d.opposite(p)
    bl = d.builder()
    bl.add_vertex(v, STRAND)
    bl.connect(p, (v, 0))
    bl.connect((v, 1), q)
    post = bl.build()
    tr = Transport(d, post, _identity_amap(d))

    def chain(c):
        acc = {}
        for (bits, labels), coef in c.terms.items():
            k = (bits, tr.labels(bits, labels, bits))
            acc[k] = acc.get(k, 0) + coef
        return ChainElement(post, acc)

    return Prepared(m, d, post, chain, Move("add_strand", at=(p,), ids=(v,)),
                    info={"inverse": Move("fuse", at=((v, 0),))})


_HANDLERS = {
    "birth": _prep_birth,
    "death": _prep_death,
    "saddle": _prep_saddle,
    "r1_down": _prep_r1_down,
    "r1_up": _prep_r1_up,
    "r2_down": _prep_r2_down,
    "r2_up": _prep_r2_up,
    "r3": _prep_r3,
    "fuse": _prep_fuse,
    "add_strand": _prep_add_strand,
}


def prepare(d: Diagram, m: Move) -> Prepared:
    if isinstance(m, dict):
        m = Move.from_json(m)
    try:
        return _HANDLERS[m.kind](d, m)
    except (KeyError, IndexError, TypeError) as exc:
        raise MoveError(f"bad locus for {m.kind}: {exc!r}") from None


def validate_move(d: Diagram, m: Move):
    prepare(d, m)
    return "ok"


def apply_move(c: ChainElement, m: Move) -> ChainElement:
    return prepare(c.diagram, m).apply(c)


def apply_birth(c: ChainElement, ids=()) -> ChainElement:
    return apply_move(c, Move("birth", ids=tuple(ids)))


def apply_death(c: ChainElement, at) -> ChainElement:
    return apply_move(c, Move("death", at=(at,)))


def apply_saddle(c: ChainElement, a, b) -> ChainElement:
    return apply_move(c, Move("saddle", at=(a, b)))


def apply_r1_down(c: ChainElement, at) -> ChainElement:
    return apply_move(c, Move("r1_down", at=(at,)))


def apply_r1_up(c: ChainElement, at, sign="+", side="left") -> ChainElement:
    return apply_move(c, Move("r1_up", at=(at,), sign=sign, side=side))


def apply_r2_down(c: ChainElement, a, b) -> ChainElement:
    return apply_move(c, Move("r2_down", at=(a, b)))


def apply_r2_up(c: ChainElement, a, b) -> ChainElement:
    return apply_move(c, Move("r2_up", at=(a, b)))


def apply_r3(c: ChainElement, *slots) -> ChainElement:
    return apply_move(c, Move("r3", at=tuple(slots)))


# ============================================================== inverses
def inverse_move(pre: Diagram, prepared: Prepared) -> Move:
    """The move on ``prepared.post`` that undoes ``prepared``."""
    m = prepared.canonical
    kind = m.kind
    post = prepared.post
    if "inverse" in prepared.info:
        return prepared.info["inverse"]
    if kind == "birth":
        return Move("death", at=((min(m.ids, key=str), 0),))
    if kind == "r1_up":
        return Move("r1_down", at=((prepared.info["crossing"], prepared.info["k"]),))
    if kind == "r1_down":
        x, k = prepared.info["crossing"], prepared.info["k"]
        d = prepared.pre
        sign = "+" if k % 2 == 0 else "-"
        turn = (k - (0 if sign == "+" else 1)) % 4
        port = d.opposite((x, (k + 2) % 4))
        if not post.has_slot(port) or port[0] == x:
            port = _walk_to_post(d, post, (x, (k + 2) % 4))
        mv = Move("r1_up", at=(port,), sign=sign, side="left", ids=(x,),
                  turns=(turn,) if turn else ())
        return mv
    if kind == "r2_up":
        x1, x2 = prepared.info["crossings"]
        return rebuild_r2_down(post, x1, x2, prepared.pre)
    if kind == "r2_down":
        Xc, Yc = prepared.info["crossings"]
        cands = _r2_up_candidates(post, prepared.pre, Xc, Yc)
        if cands:
            return min(cands, key=lambda mv: (str(mv.ids), mv.turns, str(mv.at)))
        return _loose_r2_up(prepared)
    if kind == "r3":
        a, b, c = prepared.info["crossings"]
        for f in post.faces():
            if len(f) == 3 and {v for v, _ in f} == {a, b, c}:
                mv = Move("r3", at=(min(f, key=lambda s: (str(s[0]), s[1])),))
                try:
                    back = prepare(post, mv).post
                except MoveError:
                    continue
                if back.same_graph(prepared.pre):
                    return mv
        raise MoveError("internal error: r3 has no inverse triangle")
    raise MoveError(f"no inverse for {kind}")


def rebuild_r2_down(d: Diagram, x1, x2, target: Optional[Diagram] = None):
    """The r2_down removing x1 and x2.  Two crossings can bound two bigons;
    with ``target`` the one that gives back that diagram is chosen."""
    found = []
    for i in range(4):
        for j in ((i + 1) % 4, (i + 3) % 4):
            try:
                Xc, Yc, internal, _ = _bigon_at(d, (x1, i), (x1, j))
            except NotABigon:
                continue
            if Yc == x2:
                mv = Move("r2_down", at=_canonical_r2_slots(d, Xc, Yc, internal))
                if mv not in found:
                    found.append(mv)
    if not found:
        raise MoveError("internal error: r2_up left no bigon")
    if target is not None and len(found) > 1:
        for mv in found:
            if prepare(d, mv).post.same_graph(target):
                return mv
    return found[0]


def _walk_to_post(d, post, s):
    t = d.opposite(s)
    return t if post.has_slot(t) else next(iter(post.strands and [(post.strands[-1], 0)]))


def _loose_r2_up(prepared):  # pragma: no cover - degenerate closed bigons
    raise MoveError("cannot invert an r2_down whose strands close up inside the bigon")


# ================================================================ mirror
def mirror_move(d: Diagram, m: Move) -> Move:
    """Re-address a move for the mirror of its pre-move diagram.

    Up moves are rebuilt as inverses of the mirrored down move, so the
    handedness of twists and fingers never has to be translated by hand.
    """
    if m.kind in ("r1_up", "r2_up"):
        P = prepare(d, m)
        down = mirror_move(P.post, inverse_move(d, P))
        Q = prepare(mirror_diagram(P.post), down)
        return inverse_move(Q.pre, Q)
    at = tuple(mirror_slot(d, s) if d.has_slot(s) else s for s in m.at)
    return replace(m, at=at)
