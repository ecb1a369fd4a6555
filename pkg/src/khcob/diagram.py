"""Link diagrams as graphs with 4-valent crossings and 2-valent strand vertices.

A slot is a pair ``(vertex_id, index)``.  Crossing slots run counterclockwise
0..3 and slots 0, 2 carry the understrand.  Strand vertices have slots 0, 1.
The adjacency is a fixed-point-free involution on slots; an edge is the pair
``{s, opposite(s)}``.

Orientation is stored per slot: ``out[s]`` is True when the strand leaves the
vertex through ``s``.  Every diagram carries an orientation; constructors pick
a default one and :func:`orient` replaces it.

Diagrams are immutable.  Editing goes through :class:`Builder`, which copies.
"""

from __future__ import annotations

import re
from itertools import count
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadSlot,
    InconsistentOrientation,
    LastVertexOnComponent,
    MalformedPD,
    NotPlanar,
)

Slot = tuple  # (vertex id, index)

CROSSING = 4
STRAND = 2


def through(slot: Slot, degree: int) -> Slot:
    """The slot on the other side of the vertex along the same strand."""
    v, i = slot
    return (v, (i + 2) % 4) if degree == CROSSING else (v, 1 - i)


class Diagram:
    """An immutable link diagram.

    ``vertices`` is an ordered sequence of ``(id, degree)``; the order of the
    crossings in it is the enumeration used by every sign computation.
    """

    __slots__ = (
        "_verts", "_deg", "_adj", "_out", "crossings", "strands", "_pos",
        "_vpos", "_index", "_slots", "_opp", "_loop_cache", "_signs",
        "_hash", "cache",
    )

    def __init__(self, vertices, adj, out=None, orient_hint=None, check=True):
        self._verts = tuple((v, int(d)) for v, d in vertices)
        self._deg = dict(self._verts)
        if len(self._deg) != len(self._verts):
            raise BadSlot("duplicate vertex id")
        self._adj = dict(adj)
        self.crossings = tuple(v for v, d in self._verts if d == CROSSING)
        self.strands = tuple(v for v, d in self._verts if d == STRAND)
        self._pos = {c: i for i, c in enumerate(self.crossings)}
        self._vpos = {v: i for i, (v, _) in enumerate(self._verts)}
        if check:
            self._validate()
        self._build_index()
        self._loop_cache = {}
        self._hash = None
        self.cache = {}
        if out is not None:
            self._out = dict(out)
            self._check_orientation()
        else:
            self._out = self._propagate(orient_hint or {}, strict=False)
        self._signs = None

    # ------------------------------------------------------------------ basics
    def _validate(self):
        for v, d in self._verts:
            if d not in (CROSSING, STRAND):
                raise BadSlot(f"vertex {v!r} has degree {d}")
            for i in range(d):
                s = (v, i)
                if s not in self._adj:
                    raise BadSlot(f"slot {s!r} is unconnected")
        for s, t in self._adj.items():
            if t not in self._adj or self._adj[t] != s or s == t:
                raise BadSlot(f"adjacency is not an involution at {s!r}")
            if s[0] not in self._deg or not 0 <= s[1] < self._deg[s[0]]:
                raise BadSlot(f"unknown slot {s!r}")

    def _build_index(self):
        slots = []
        for c in self.crossings:
            slots.extend((c, i) for i in range(4))
        for v in self.strands:
            slots.extend(((v, 0), (v, 1)))
        self._slots = tuple(slots)
        self._index = {s: k for k, s in enumerate(slots)}
        self._opp = tuple(self._index[self._adj[s]] for s in slots)

    @property
    def vertices(self):
        return self._verts

    @property
    def adjacency(self) -> Mapping:
        return self._adj

    @property
    def out(self) -> Mapping:
        return self._out

    def degree(self, v) -> int:
        try:
            return self._deg[v]
        except KeyError:
            raise BadSlot(f"unknown vertex {v!r}") from None

    def is_crossing(self, v) -> bool:
        return self._deg.get(v) == CROSSING

    def has_slot(self, s) -> bool:
        return s in self._adj

    def check_slot(self, s) -> Slot:
        s = (s[0], int(s[1]))
        if s not in self._adj:
            raise BadSlot(f"slot {s!r} is not in the diagram")
        return s

    def opposite(self, s: Slot) -> Slot:
        return self._adj[s]

    def next(self, s: Slot) -> Slot:
        v, i = s
        return (v, (i + 1) % self._deg[v])

    def through(self, s: Slot) -> Slot:
        return through(s, self._deg[s[0]])

    def position(self, c) -> int:
        return self._pos[c]

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def all_slots(self):
        return self._slots

    def slot_key(self, s):
        """Total order on slots: crossings by position, then strand vertices."""
        v, i = s
        if v in self._pos:
            return (0, self._pos[v], i)
        return (1, self._vpos[v], i)

    def __eq__(self, other):
        return (
            isinstance(other, Diagram)
            and self._verts == other._verts
            and self._adj == other._adj
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._verts, frozenset(self._adj.items())))
        return self._hash

    def same_graph(self, other) -> bool:
        """Equal up to the order of the vertex list."""
        return dict(self._verts) == dict(other._verts) and self._adj == other._adj

    def __repr__(self):
        return (
            f"Diagram({len(self.crossings)} crossings, {len(self.strands)} strand "
            f"vertices, n+={self.n_plus}, n-={self.n_minus})"
        )

    # ------------------------------------------------------------- orientation
    def _component_slots(self, start):
        """Slots of the link component through ``start``, in traversal order."""
        seq = []
        s = start
        while True:
            seq.append(s)
            t = self.through(s)
            seq.append(t)
            s = self._adj[t]
            if s == start:
                return seq

    def components(self):
        """Link components as lists of slots, ordered by their minimal slot."""
        seen = set()
        comps = []
        for s in self._slots:
            if s not in seen:
                comp = self._component_slots(s)
                seen.update(comp)
                comps.append(comp)
        return comps

    def _propagate(self, hint, strict):
        out = {}
        for comp in self.components():
            seeds = [(s, hint[s]) for s in comp if s in hint]
            if seeds:
                s0, val = seeds[0]
            else:
                s0, val = comp[0], True
            # walk the component from s0 in the direction ``val`` prescribes
            s = s0 if val else self.through(s0)
            while True:
                out[s] = True
                t = self._adj[s]
                out[t] = False
                u = self.through(t)
                out[u] = True
                s = u
                if s == (s0 if val else self.through(s0)):
                    break
            if strict:
                for s, val in seeds:
                    if out[s] != val:
                        raise InconsistentOrientation(
                            f"seed {s!r} contradicts another seed on its component")
        return out

    def _check_orientation(self):
        for s in self._slots:
            if s not in self._out:
                raise InconsistentOrientation(f"slot {s!r} has no direction")
            if self._out[s] == self._out[self._adj[s]]:
                raise InconsistentOrientation(f"edge at {s!r} is not directed")
            if self._out[s] == self._out[self.through(s)]:
                raise InconsistentOrientation(f"strand through {s!r} is not directed")

    def sign(self, c) -> int:
        """+1 or -1; positive when the over strand enters just clockwise of the
        under strand's entry."""
        if self._signs is None:
            self._signs = {x: self._sign(x) for x in self.crossings}
        return self._signs[c]

    def _sign(self, c):
        out = self._out
        j = 0 if not out[(c, 0)] else 2
        k = 1 if not out[(c, 1)] else 3
        return 1 if k == (j - 1) % 4 else -1

    @property
    def n_plus(self) -> int:
        return sum(1 for c in self.crossings if self.sign(c) > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for c in self.crossings if self.sign(c) < 0)

    # ------------------------------------------------------------------ faces
    def face_next(self, s: Slot) -> Slot:
        v, i = self._adj[s]
        return (v, (i + 1) % self._deg[v])

    def faces(self):
        """Faces as cycles of slots; slot s stands for the edge leaving s."""
        seen = set()
        faces = []
        for s in self._slots:
            if s in seen:
                continue
            face = []
            t = s
            while t not in seen:
                seen.add(t)
                face.append(t)
                t = self.face_next(t)
            faces.append(face)
        return faces

    def face_of(self, s: Slot):
        face = [s]
        t = self.face_next(s)
        while t != s:
            face.append(t)
            t = self.face_next(t)
        return face

    def graph_components(self):
        """Connected components of the underlying graph, as vertex sets."""
        parent = {v: v for v, _ in self._verts}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, t in self._adj.items():
            a, b = find(s[0]), find(t[0])
            if a != b:
                parent[a] = b
        groups = {}
        for v, _ in self._verts:
            groups.setdefault(find(v), set()).add(v)
        return list(groups.values())

    def is_planar(self) -> bool:
        """Euler characteristic 2 for every connected component."""
        faces = self.faces()
        for comp in self.graph_components():
            nv = len(comp)
            ne = sum(self._deg[v] for v in comp) // 2
            nf = sum(1 for f in faces if f[0][0] in comp)
            if nv - ne + nf != 2:
                return False
        return True

    def check_planar(self):
        if not self.is_planar():
            raise NotPlanar("diagram does not embed in the sphere")
        return self

    # ------------------------------------------------------------------ loops
    def loops(self, bits):
        """Loops of the smoothing ``bits`` (a tuple indexed by crossing position).

        Returns ``(loop_of, loops)``: ``loop_of[k]`` is the loop number of the
        k-th slot in :meth:`all_slots` order and ``loops`` lists slot indices
        per loop.  Loops are numbered by their minimal slot, which is the
        canonical loop order.
        """
        got = self._loop_cache.get(bits)
        if got is not None:
            return got
        n4 = 4 * len(self.crossings)
        opp = self._opp
        total = len(self._slots)
        loop_of = [-1] * total
        loops = []
        for s in range(total):
            if loop_of[s] >= 0:
                continue
            idx = len(loops)
            members = []
            cur = s
            while True:
                loop_of[cur] = idx
                members.append(cur)
                if cur < n4:
                    p, i = divmod(cur, 4)
                    t = 4 * p + ((i ^ 1) if bits[p] == 0 else (3 - i))
                else:
                    t = n4 + ((cur - n4) ^ 1)
                loop_of[t] = idx
                members.append(t)
                cur = opp[t]
                if cur == s:
                    break
            loops.append(tuple(members))
        got = (tuple(loop_of), tuple(loops))
        if len(self._loop_cache) < 200000:
            self._loop_cache[bits] = got
        return got

    def slot_index(self, s) -> int:
        return self._index[s]

    def slot_at(self, k) -> Slot:
        return self._slots[k]

    # ---------------------------------------------------------------- editing
    def builder(self) -> "Builder":
        return Builder(self)

    def with_order(self, order: Sequence) -> "Diagram":
        """Same graph with the crossings enumerated in ``order``."""
        if sorted(map(str, order)) != sorted(map(str, self.crossings)) or len(order) != len(
            self.crossings
        ):
            raise BadSlot("order must list every crossing once")
        verts = [(c, CROSSING) for c in order] + [(v, STRAND) for v in self.strands]
        return Diagram(verts, self._adj, out=self._out, check=False)

    def fresh_id(self, prefix: str, taken=()) -> str:
        used = set(self._deg) | set(taken)
        for k in count(len(self._verts)):
            cand = f"{prefix}{k}"
            if cand not in used:
                return cand

    # ----------------------------------------------------------- serialization
    def to_data(self) -> dict:
        edges = []
        for s in self._slots:
            t = self._adj[s]
            if self._index[s] < self._index[t]:
                edges.append([[s[0], s[1]], [t[0], t[1]]])
        return {
            "vertices": [[v, d] for v, d in self._verts],
            "edges": edges,
            "out": sorted([[s[0], s[1]] for s in self._slots if self._out[s]],
                          key=lambda x: self._index[(x[0], x[1])]),
        }

    @classmethod
    def from_data(cls, data) -> "Diagram":
        try:
            verts = [(v, int(d)) for v, d in data["vertices"]]
            adj = {}
            for (a, b) in data["edges"]:
                sa, sb = (a[0], int(a[1])), (b[0], int(b[1]))
                adj[sa] = sb
                adj[sb] = sa
        except (KeyError, TypeError, ValueError) as exc:
            raise BadSlot(f"malformed diagram data: {exc}") from None
        d = cls(verts, adj)
        if data.get("out"):
            d = orient(d, [(v, int(i)) for v, i in data["out"]])
        return d

    def to_pd_code(self):
        """PD tuples in enumeration order, edge labels following the orientation.

        Only defined without strand vertices on crossing components; strand
        vertices are skipped over.
        """
        if any(all(not self.is_crossing(s[0]) for s in comp) for comp in self.components()):
            raise MalformedPD("crossingless components have no PD code")
        label = {}
        nxt = 1
        for comp in self.components():
            # start on an outgoing crossing slot
            start = next(s for s in comp if self.is_crossing(s[0]) and self._out[s])
            s = start
            while True:
                t = self._adj[s]
                while not self.is_crossing(t[0]):
                    t = self._adj[self.through(t)]
                label[s] = label[t] = nxt
                nxt += 1
                s = self.through(t)
                if s == start:
                    break
        # PD entry 0 is the incoming understrand; a half turn keeps the smoothings
        rot = {c: 2 if self._out[(c, 0)] else 0 for c in self.crossings}
        return [tuple(label[(c, (i + rot[c]) % 4)] for i in range(4)) for c in self.crossings]


class Builder:
    """Mutable scratch copy of a diagram used by the move implementations."""

    def __init__(self, d: Diagram):
        self.verts = list(d.vertices)
        self.adj = dict(d.adjacency)
        self.hint = dict(d.out)
        self._src = d

    def add_vertex(self, v, degree):
        if any(v == w for w, _ in self.verts):
            raise BadSlot(f"vertex id {v!r} already in use")
        self.verts.append((v, degree))

    def remove_vertex(self, v):
        deg = dict(self.verts)[v]
        self.verts = [(w, d) for w, d in self.verts if w != v]
        for i in range(deg):
            s = (v, i)
            t = self.adj.pop(s, None)
            if t is not None and self.adj.get(t) == s:
                del self.adj[t]
            self.hint.pop(s, None)

    def connect(self, a, b):
        self.adj[a] = b
        self.adj[b] = a

    def set_order(self, order):
        deg = dict(self.verts)
        strands = [(v, d) for v, d in self.verts if d == STRAND]
        self.verts = [(c, deg[c]) for c in order] + strands

    def build(self, check=True) -> Diagram:
        return Diagram(self.verts, self.adj, orient_hint=self.hint, check=check)


# ------------------------------------------------------------------ ingestion
def from_pd_code(pd) -> Diagram:
    """Diagram from PD tuples; entry 0 is the incoming understrand and entries
    run counterclockwise.  Crossing ids are ``c0, c1, ...`` in input order."""
    pd = [tuple(t) for t in pd]
    if not pd:
        raise MalformedPD("empty PD code; crossingless unknots need a birth")
    where = {}
    for k, tup in enumerate(pd):
        if len(tup) != 4:
            raise MalformedPD(f"tuple {k} has {len(tup)} entries")
        for i, lab in enumerate(tup):
            where.setdefault(lab, []).append((f"c{k}", i))
    adj = {}
    for lab, slots in where.items():
        if len(slots) != 2:
            raise MalformedPD(f"edge label {lab!r} occurs {len(slots)} times")
        a, b = slots
        if a == b:
            raise MalformedPD(f"edge label {lab!r} is a self-loop on one slot")
        adj[a] = b
        adj[b] = a
    verts = [(f"c{k}", CROSSING) for k in range(len(pd))]
    d = Diagram(verts, adj)
    # slot 0 is incoming, so slot 2 is outgoing
    seeds = {(f"c{k}", 2): True for k in range(len(pd))}
    # components that never pass under: follow the edge labels
    covered = set()
    for comp in d.components():
        if any(s in seeds for s in comp):
            covered.update(comp)
    for k, tup in enumerate(pd):
        c = f"c{k}"
        if (c, 1) in covered:
            continue
        b, e = tup[1], tup[3]
        if b == e + 1 or (abs(b - e) != 1 and b < e):
            seeds[(c, 1)] = True
        else:
            seeds[(c, 3)] = True
        covered.update(d._component_slots((c, 1)))
    try:
        return orient(d, list(seeds))
    except InconsistentOrientation as exc:
        raise MalformedPD(f"PD entries do not follow the orientation convention: {exc}") from None


def from_braid_closure(word: Sequence[int]) -> Diagram:
    """Diagram of the closed braid.  Generator ``k`` crosses strands k-1, k
    (0-based); positive generators give positive crossings."""
    word = [int(a) for a in word]
    if any(a == 0 for a in word):
        raise MalformedPD("braid generators must be nonzero")
    n = max((abs(a) for a in word), default=0) + 1
    adj = {}
    top_first = [None] * n
    current = [None] * n
    seeds = []
    verts = []
    for k, a in enumerate(word):
        c = f"c{k}"
        verts.append((c, CROSSING))
        j0, j1 = abs(a) - 1, abs(a)
        if a > 0:
            t0, t1, b0, b1 = 0, 3, 1, 2
        else:
            t0, t1, b0, b1 = 1, 0, 2, 3
        for j, t in ((j0, t0), (j1, t1)):
            if current[j] is None:
                top_first[j] = (c, t)
            else:
                adj[current[j]] = (c, t)
                adj[(c, t)] = current[j]
        current[j0], current[j1] = (c, b0), (c, b1)
        seeds.extend([(c, b0), (c, b1)])
    for j in range(n):
        if current[j] is None:
            v = f"s{j}"
            verts.append((v, STRAND))
            adj[(v, 0)] = (v, 1)
            adj[(v, 1)] = (v, 0)
            seeds.append((v, 1))
        else:
            adj[current[j]] = top_first[j]
            adj[top_first[j]] = current[j]
    d = Diagram(verts, adj)
    return orient(d, seeds)


def from_plat(word: Sequence[int], width: int = 4) -> Diagram:
    """Plat closure of a braid on ``width`` (even) strands: neighbouring
    positions are capped off in pairs at the top and at the bottom."""
    word = [int(a) for a in word]
    if width % 2 or width < 2 or any(a == 0 or abs(a) >= width for a in word):
        raise MalformedPD("plat closure needs an even width and generators below it")
    adj = {}
    verts = []
    top = [None] * width
    current = [None] * width
    for j in range(width):
        v = f"p{j}"
        verts.append((v, STRAND))
        top[j] = (v, 0)
        current[j] = (v, 1)
    for k, a in enumerate(word):
        c = f"c{k}"
        verts.insert(k, (c, CROSSING))
        j0, j1 = abs(a) - 1, abs(a)
        if a > 0:
            t0, t1, b0, b1 = 0, 3, 1, 2
        else:
            t0, t1, b0, b1 = 1, 0, 2, 3
        for j, t in ((j0, t0), (j1, t1)):
            adj[current[j]] = (c, t)
            adj[(c, t)] = current[j]
        current[j0], current[j1] = (c, b0), (c, b1)
    for j in range(0, width, 2):
        for row in (top, current):
            adj[row[j]] = row[j + 1]
            adj[row[j + 1]] = row[j]
    d = Diagram(verts, adj)
    # drop the bookkeeping vertices
    for j in range(width):
        v = f"p{j}"
        if d.opposite((v, 0)) != (v, 1):
            d = fuse(d, v)
    return d


def rational_knot(conway: Sequence[int]) -> Diagram:
    """Two-bridge link with Conway notation ``conway`` as an alternating 4-plat."""
    terms = [int(a) for a in conway]
    if len(terms) % 2 == 0:
        terms = terms[:-1] + [terms[-1] - 1, 1]
    word = []
    for i, a in enumerate(terms):
        word += [2] * a if i % 2 == 0 else [-1] * a
    return from_plat(word)


def unknot(vid="s0") -> Diagram:
    return Diagram([(vid, STRAND)], {(vid, 0): (vid, 1), (vid, 1): (vid, 0)})


def empty() -> Diagram:
    return Diagram([], {})


def orient(d: Diagram, seeds: Iterable[Slot]) -> Diagram:
    """Orient so the strand leaves its vertex through every seed slot.

    Components without a seed keep their current direction.
    """
    hint = {}
    for s in seeds:
        s = d.check_slot(s)
        if s in hint and not hint[s]:
            raise InconsistentOrientation(f"slot {s!r} seeded both ways")
        hint[s] = True
        t = d.opposite(s)
        if hint.get(t):
            raise InconsistentOrientation(f"edge at {s!r} seeded both ways")
        hint[t] = False
    seeded = {s for s in hint}
    for comp in d.components():
        if not any(s in seeded for s in comp):
            hint[comp[0]] = d.out[comp[0]]
    out = d._propagate(hint, strict=True)
    return Diagram(d.vertices, d.adjacency, out=out, check=False)


def _mirror_shift(d: Diagram, v) -> int:
    # Rotate so the old overstrand slot that shares slot 0's direction becomes
    # slot 0.  This keeps mirroring an involution on slot labels.
    k = 1 if d.out[(v, 1)] == d.out[(v, 0)] else 3
    return k


def mirror_diagram(d: Diagram) -> Diagram:
    """Swap over and under everywhere by rotating every crossing's slot labels
    by one step (direction chosen from the orientation)."""
    shift = {c: _mirror_shift(d, c) for c in d.crossings}

    def f(s):
        v, i = s
        return (v, (i - shift[v]) % 4) if v in shift else s

    adj = {f(s): f(t) for s, t in d.adjacency.items()}
    out = {f(s): val for s, val in d.out.items()}
    return Diagram(d.vertices, adj, out=out, check=False)


def mirror_slot(d: Diagram, s: Slot) -> Slot:
    v, i = s
    if d.is_crossing(v):
        return (v, (i - _mirror_shift(d, v)) % 4)
    return (v, i)


def fuse(d: Diagram, v) -> Diagram:
    if d.degree(v) != STRAND:
        raise BadSlot(f"{v!r} is not a strand vertex")
    p, q = d.opposite((v, 0)), d.opposite((v, 1))
    if p == (v, 1):
        raise LastVertexOnComponent(f"{v!r} is the only vertex on its loop")
    b = d.builder()
    b.remove_vertex(v)
    b.connect(p, q)
    return b.build(check=False)


# ------------------------------------------------------------- text formats
_PD_TUPLE = re.compile(r"[\(\[]\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*[\)\]]")


def parse_pd_text(text: str):
    """Accept ``PD[(1,4,2,5),...]``, ``X[1,4,2,5] ...`` or a JSON list."""
    body = text.strip()
    if not body:
        raise MalformedPD("empty PD text")
    tuples = [tuple(int(x) for x in m.groups()) for m in _PD_TUPLE.finditer(body)]
    leftovers = _PD_TUPLE.sub("", body)
    leftovers = re.sub(r"PD|X|[\[\]\(\),\s]", "", leftovers)
    if leftovers or not tuples:
        raise MalformedPD(f"cannot parse PD text {text!r}")
    return tuples


def format_pd_text(pd) -> str:
    return "PD[" + ",".join("(" + ",".join(str(x) for x in t) + ")" for t in pd) + "]"


def parse_braid_text(text: str):
    try:
        word = [int(x) for x in text.replace(" ", "").strip("[]").split(",") if x]
    except ValueError:
        raise MalformedPD(f"cannot parse braid word {text!r}") from None
    return word


# ------------------------------------------------------------- symmetries
class Symmetry:
    """A relabelling of crossing slots that maps a diagram onto itself.

    ``kind`` is ``"rot"`` for a motion of the plane (slot order kept, a crossing
    turned by an even step) or ``"flip"`` for turning the diagram over (slot
    order reversed, over and under exchanged).  Both are symmetries of the
    link in the 3-sphere.  Vertices outside ``cmap`` keep their id; on a flip
    their crossing slots are read in reverse.
    """

    def __init__(self, kind: str, cmap):
        if kind not in ("rot", "flip"):
            raise ValueError(f"unknown symmetry kind {kind!r}")
        self.kind = kind
        self.cmap = dict(cmap)

    def slot(self, d: "Diagram", s: Slot) -> Slot:
        v, i = s
        if not d.is_crossing(v):
            return s
        w, r = self.cmap.get(v, (v, 0 if self.kind == "rot" else 1))
        return (w, (i + r) % 4) if self.kind == "rot" else (w, (r - i) % 4)

    def image(self, d: "Diagram") -> "Diagram":
        f = lambda s: self.slot(d, s)  # noqa: E731
        verts = [(self.cmap[v][0] if v in self.cmap else v, deg) for v, deg in d.vertices]
        if len({v for v, _ in verts}) != len(verts):
            raise BadSlot("symmetry image would merge two vertex ids")
        adj = {f(s): f(t) for s, t in d.adjacency.items()}
        out = {f(s): val for s, val in d.out.items()}
        return Diagram(verts, adj, out=out, check=False)

    def to_json(self):
        return {"kind": self.kind, "map": {str(c): list(t) for c, t in self.cmap.items()}}

    def __repr__(self):
        return f"Symmetry({self.kind}, {self.cmap})"


def diagram_symmetries(d: Diagram):
    """All symmetries of a diagram whose vertices are crossings, identity first."""
    xs = list(d.crossings)
    if not xs or any(not d.is_crossing(v) for v, _ in d.vertices):
        raise BadSlot("symmetries are computed on diagrams without strand vertices")
    found = []
    for kind, steps in (("rot", (0, 2)), ("flip", (1, 3))):
        for tgt in xs:
            for r in steps:
                cmap = {xs[0]: (tgt, r)}
                stack = [xs[0]]
                ok = True
                while stack and ok:
                    c = stack.pop()
                    c2, rc = cmap[c]
                    for i in range(4):
                        j = (i + rc) % 4 if kind == "rot" else (rc - i) % 4
                        y, k = d.opposite((c, i))
                        y2, k2 = d.opposite((c2, j))
                        need = (k2 - k) % 4 if kind == "rot" else (k2 + k) % 4
                        if need not in steps or cmap.get(y, (y2, need)) != (y2, need):
                            ok = False
                            break
                        if y not in cmap:
                            cmap[y] = (y2, need)
                            stack.append(y)
                if ok and len({t[0] for t in cmap.values()}) == len(xs) == len(cmap):
                    found.append(Symmetry(kind, cmap))
    return found
