"""Movies of cobordisms and the maps they induce."""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import IntegerMatrix
from .diagram import Diagram, empty, from_braid_closure, from_pd_code, mirror_diagram, orient
from .errors import (
    BoundaryMismatch,
    DifferentDiagram,
    KhError,
    MoveError,
    MovieError,
    NoEmptyEnd,
    SimplificationFailed,
    TargetExpressionFailed,
)
from .homology import Verdict, class_equal_up_to_sign, kh
from .moves import (
    Move,
    Prepared,
    _bigon_at,
    find_reduction,
    inverse_move,
    mirror_move,
    prepare,
    r3_post,
    r3_triangles,
)
from .state import ChainElement, differential, grading_of, reorder_onto, vector_of

_CHI = {"birth": 1, "death": 1, "saddle": -1}


class Movie:
    """A start diagram and a list of elementary moves.

    Moves are validated and stored in canonical form when the movie is built.
    Methods that add moves return a new movie and leave this one untouched.
    """

    def __init__(self, start: Diagram, moves: Sequence = (), source: Optional[dict] = None,
                 _prepared=None):
        self.start = start
        self.source = source
        if _prepared is not None:
            self._prepared = list(_prepared)
        else:
            self._prepared = []
            d = start
            for i, mv in enumerate(moves):
                if isinstance(mv, dict):
                    mv = Move.from_json(mv)
                try:
                    p = prepare(d, mv)
                except KhError as exc:
                    raise MovieError(i, exc) from None
                self._prepared.append(p)
                d = p.post

    # ------------------------------------------------------------ basics
    @property
    def moves(self):
        return [p.canonical or p.move for p in self._prepared]

    @property
    def stages(self):
        return [self.start] + [p.post for p in self._prepared]

    @property
    def end(self) -> Diagram:
        return self._prepared[-1].post if self._prepared else self.start

    def __len__(self):
        return len(self._prepared)

    def __repr__(self):
        return f"Movie({len(self)} moves, chi={self.chi()})"

    def __str__(self):
        lines = [f"start: {self.start!r}"]
        lines += [f"  {i}: {mv}" for i, mv in enumerate(self.moves)]
        return "\n".join(lines)

    def chi(self) -> int:
        return sum(_CHI.get(p.move.kind, 0) for p in self._prepared)

    def then(self, *moves) -> "Movie":
        prepared = list(self._prepared)
        d = self.end
        for mv in moves:
            if isinstance(mv, dict):
                mv = Move.from_json(mv)
            try:
                p = prepare(d, mv)
            except KhError as exc:
                raise MovieError(len(prepared), exc) from None
            prepared.append(p)
            d = p.post
        return Movie(self.start, source=self.source, _prepared=prepared)

    # surface builders
    def morse_birth(self, ids=()):
        return self.then(Move("birth", ids=tuple(ids)))

    def morse_death(self, at):
        return self.then(Move("death", at=(at,)))

    def morse_saddle(self, a, b):
        return self.then(Move("saddle", at=(a, b)))

    def reidemeister_1(self, at):
        return self.then(Move("r1_down", at=(at,)))

    def reidemeister_1_up(self, at, positive=True, side="left"):
        return self.then(Move("r1_up", at=(at,), sign="+" if positive else "-", side=side))

    def reidemeister_2(self, a, b):
        return self.then(Move("r2_down", at=(a, b)))

    def reidemeister_2_up(self, a, b, over=True):
        return self.then(Move("r2_up", at=(a, b), over=over))

    def reidemeister_3(self, *slots):
        return self.then(Move("r3", at=tuple(slots)))

    def fuse(self, v):
        return self.then(Move("fuse", at=((v, 0),)))

    # ------------------------------------------------------- propagation
    def propagate(self, c: ChainElement, target: Optional[Diagram] = None) -> ChainElement:
        """Apply the chain map of the whole movie to ``c`` (an element on the
        start diagram); optionally reorder onto ``target`` at the end."""
        if not c.diagram.same_graph(self.start):
            raise DifferentDiagram("element does not live on the movie's start")
        for i, p in enumerate(self._prepared):
            try:
                c = p.apply(c)
            except KhError as exc:
                raise MovieError(i, exc) from None
        if target is not None:
            c = reorder_onto(c, target)
        return c

    map = propagate

    # --------------------------------------------------- reverse / mirror
    def reverse(self) -> "Movie":
        inv = []
        for p in reversed(self._prepared):
            inv.append(inverse_move(p.pre, p))
        return Movie(self.end, inv)

    def mirror(self) -> "Movie":
        start = mirror_diagram(self.start)
        prepared = []
        d = start
        for i, p in enumerate(self._prepared):
            mv = p.canonical or p.move
            target = mirror_diagram(p.post)
            try:
                mv2 = mirror_move(self.stages[i], mv)
                q = prepare(d, mv2)
            except KhError as exc:
                raise MovieError(i, exc) from None
            if not q.post.same_graph(target):
                raise MovieError(i, MoveError("mirrored move does not reproduce the mirror stage"))
            prepared.append(q)
            d = q.post
        return Movie(start, _prepared=prepared)

    def transport(self, sym) -> "Movie":
        """The movie carried along a symmetry of its start diagram.

        Down moves, saddles and R3 moves are re-addressed slot by slot; up
        moves are rebuilt as inverses of the re-addressed down move, so that
        handedness conventions never need translating.
        """
        if not sym.image(self.start).same_graph(self.start):
            raise MoveError("the symmetry does not preserve the start diagram")
        d = self.start
        prepared = []
        for i, p in enumerate(self._prepared):
            mv = p.canonical or p.move
            target = sym.image(p.post)
            if mv.kind in ("r1_up", "r2_up"):
                down = _readdress(p.post, inverse_move(p.pre, p), sym)
                q = prepare(target, down)
                mv2 = inverse_move(q.pre, q)
            else:
                mv2 = _readdress(self.stages[i], mv, sym)
            try:
                q = prepare(d, mv2)
            except KhError as exc:
                raise MovieError(i, exc) from None
            if not q.post.same_graph(target):
                raise MovieError(i, MoveError("transported move misses the image stage"))
            prepared.append(q)
            d = q.post
        return Movie(self.start, source=self.source, _prepared=prepared)

    # ------------------------------------------------------------ macros
    def band_move(self, half_twists: int, start, *path):
        """Band from ``start`` along ``path``: items ``(slot, over)`` are
        crossed with an R2 finger move, the last item is the end slot."""
        if not path:
            raise MoveError("band_move needs an end slot")
        *cross, end_slot = path
        m = self
        a = tuple(start)
        for _ in range(abs(int(half_twists))):
            m = m.then(Move("r1_up", at=(a,), sign="+" if half_twists > 0 else "-", side="left"))
            p = m._prepared[-1]
            a = (p.info["crossing"], p.info["k"])
        for item in cross:
            slot, over = item
            m = m.then(Move("r2_up", at=(a, tuple(slot)), over=bool(over)))
            p = m._prepared[-1]
            x1, x2 = p.info["crossings"]
            d = p.post
            # the finger tip is the new edge between x1 and x2 on a's strand
            a = next(s for s in ((x1, i) for i in range(4))
                     if d.opposite(s)[0] == x2 and (s[1] - _over_parity(over)) % 2 == 0)
        end_slot = tuple(end_slot)
        try:
            return m.then(Move("saddle", at=(a, end_slot)))
        except MovieError:
            return m.then(Move("saddle", at=(m.end.opposite(a), end_slot)))

    def finish(self, depth: int = 3, seed: int = 0, walk: int = 300) -> "Movie":
        """Simplify the end diagram to crossingless circles and cap them off."""
        return _finish(self, depth, seed, walk)

    # --------------------------------------------------------- classes
    def kj_class(self) -> "KJClass":
        if not self.start.vertices:
            c = self.propagate(ChainElement.unit(self.start))
            direction = "forward"
            on = self.end
        elif not self.end.vertices:
            rev = self.reverse()
            c = rev.propagate(ChainElement.unit(rev.start))
            c = align(c, self.start)
            direction = "reverse"
            on = self.start
        else:
            raise NoEmptyEnd("neither end of the movie is the empty link")
        if not differential(c).is_zero():
            raise KhError("internal error: KJ chain is not a cycle")
        gs = c.gradings()
        g = next(iter(gs)) if len(gs) == 1 else None
        return KJClass(c, direction, g)

    KJ_class = kj_class

    def induced_matrix(self, h: int, q: int) -> IntegerMatrix:
        """Kh^{h,q}(start) -> Kh^{h,q+chi}(end) in the generator bases."""
        src = kh(self.start, h, q)
        q2 = q + self.chi()
        if not self.end.vertices:
            tgt = None
            rows = 1 if (h, q2) == (0, 0) else 0
        else:
            tgt = kh(self.end, h, q2)
            rows = len(tgt.summands)
        entries = {}
        for j, z in enumerate(src.generators):
            w = self.propagate(z)
            if tgt is None:
                val = w.integer() if rows else 0
                if val:
                    entries[(0, j)] = val
                continue
            w = align(w, tgt.generators[0].diagram if tgt.generators else self.end)
            index = {k: i for i, k in enumerate(tgt.basis)}
            try:
                coords = tgt.coordinates(vector_of(w, index))
            except (KhError, KeyError) as exc:
                raise TargetExpressionFailed(str(exc)) from None
            for i, v in enumerate(coords):
                if v:
                    entries[(i, j)] = v
        return normalize_sign(IntegerMatrix(rows, len(src.summands), entries))

    matrix = induced_matrix

    # ------------------------------------------------------ serialization
    def to_json(self) -> dict:
        out = {}
        if self.source:
            out["start"] = self.source.get("start")
            if self.source.get("orient"):
                out["orient"] = self.source["orient"]
        else:
            out["start"] = {"diagram": self.start.to_data()}
        out["moves"] = [mv.to_json() for mv in self.moves]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, obj) -> "Movie":
        if isinstance(obj, str):
            obj = json.loads(obj)
        start = start_diagram(obj)
        return cls(start, obj.get("moves", ()),
                   source={"start": obj.get("start"), "orient": obj.get("orient")})


def _readdress(d: Diagram, mv: Move, sym) -> Move:
    from dataclasses import replace

    at = mv.at
    if mv.kind == "r3" and sym.kind == "flip":
        # the triangle sits right of the slot; turning over puts it on the left
        at = tuple(d.opposite(s) for s in at)
    return replace(mv, at=tuple(sym.slot(d, s) if d.has_slot(s) else s for s in at))


def _over_parity(over):
    # the finger strand passes over the R2 crossings on odd slots
    return 1 if over else 0


def start_diagram(obj) -> Diagram:
    desc = obj.get("start")
    if desc is None:
        raise MoveError("movie file has no start")
    if "pd" in desc:
        d = from_pd_code(desc["pd"])
    elif "braid" in desc:
        d = from_braid_closure(desc["braid"])
    elif "diagram" in desc:
        d = Diagram.from_data(desc["diagram"])
    elif "empty" in desc or desc == {}:
        d = empty()
    else:
        raise MoveError(f"unknown start description {sorted(desc)}")
    seeds = obj.get("orient")
    if seeds:
        d = orient(d, [tuple(s) for s in seeds])
    return d


def normalize_sign(M: IntegerMatrix) -> IntegerMatrix:
    """Flip the global sign so the first nonzero entry (row-major) is positive."""
    if not M.entries:
        return M
    first = min(M.entries)
    if M.entries[first] < 0:
        return IntegerMatrix(M.rows, M.cols, {k: -v for k, v in M.entries.items()})
    return M


@dataclass
class KJClass:
    element: ChainElement
    direction: str
    grading: Optional[tuple]

    def as_dict(self):
        return {"direction": self.direction,
                "grading": list(self.grading) if self.grading else None,
                "terms": len(self.element.terms)}


# ----------------------------------------------------------- alignment
def normal_form_moves(d: Diagram):
    """Fuse moves that leave exactly one strand vertex per crossingless circle
    and none elsewhere."""
    moves = []
    cur = d
    while True:
        mv = None
        for comp in cur.components():
            verts = [v for v in dict.fromkeys(s[0] for s in comp)]
            strands = [v for v in verts if not cur.is_crossing(v)]
            has_cross = len(strands) < len(verts)
            extra = strands if has_cross else strands[1:]
            if extra:
                mv = Move("fuse", at=((extra[0], 0),))
                break
        if mv is None:
            return moves, cur
        moves.append(mv)
        cur = prepare(cur, mv).post


def align(c: ChainElement, target: Diagram) -> ChainElement:
    """Carry ``c`` onto ``target`` when both diagrams present the same link
    diagram, up to strand vertices and crossing enumeration."""
    if c.diagram.same_graph(target):
        return reorder_onto(c, target)
    m1, _ = normal_form_moves(c.diagram)
    c1 = Movie(c.diagram, m1).propagate(c)
    m2, t2 = normal_form_moves(target)
    back = Movie(target, m2)
    c2 = rekey(c1, back.end)
    # return onto the target by undoing its normalization
    return back.reverse().propagate(c2, target=target) if m2 else reorder_onto(c2, target)


def replace_link(c: ChainElement, target: Diagram, vertex_map=None, flipping=False) -> ChainElement:
    """Re-key ``c`` onto an isomorphic diagram.

    ``vertex_map`` sends crossing ids of c's diagram to crossing ids of
    ``target`` (identity by default).  With ``flipping`` a crossing may be read
    from its other understrand end, i.e. its slot labels rotated by two.
    """
    return rekey(c, target, vertex_map, flipping)


def rekey(c: ChainElement, target: Diagram, vertex_map=None, flipping=False) -> ChainElement:
    src = c.diagram
    vm = dict(vertex_map or {})
    for x in src.crossings:
        vm.setdefault(x, x)
    if sorted(map(str, vm.values())) != sorted(map(str, target.crossings)):
        raise DifferentDiagram("crossing sets do not correspond")
    rot = {}
    rots = (0, 2) if flipping else (0,)

    def img(s, r):
        v, i = s
        if src.is_crossing(v):
            return (vm[v], (i + r[v]) % 4)
        return None

    # propagate rotations along edges between crossings
    for x0 in src.crossings:
        if x0 in rot:
            continue
        for r0 in rots:
            trial = dict(rot)
            trial[x0] = r0
            queue = [x0]
            ok = True
            while queue and ok:
                x = queue.pop()
                for i in range(4):
                    s = (x, i)
                    t = src.opposite(s)
                    while not src.is_crossing(t[0]):
                        t = src.opposite(src.through(t))
                    y = t[0]
                    si = (vm[x], (i + trial[x]) % 4)
                    tt = target.opposite(si)
                    while not target.is_crossing(tt[0]):
                        tt = target.opposite(target.through(tt))
                    if tt[0] != vm[y]:
                        ok = False
                        break
                    need = (tt[1] - t[1]) % 4
                    if y in trial:
                        if trial[y] != need:
                            ok = False
                            break
                    elif need in rots:
                        trial[y] = need
                        queue.append(y)
                    else:
                        ok = False
                        break
            if ok:
                rot = trial
                break
        else:
            raise DifferentDiagram("diagrams are not isomorphic under the given map")
    src_loose = [comp for comp in src.components() if not any(src.is_crossing(s[0]) for s in comp)]
    tgt_loose = [comp for comp in target.components()
                 if not any(target.is_crossing(s[0]) for s in comp)]
    if len(src_loose) != len(tgt_loose):
        raise DifferentDiagram("different numbers of crossingless circles")
    smap = {}
    for x in src.crossings:
        for i in range(4):
            smap[(x, i)] = (vm[x], (i + rot[x]) % 4)
    for a, b in zip(src_loose, tgt_loose):
        smap[a[0]] = b[0]
    order = [next(x for x in src.crossings if vm[x] == y) for y in target.crossings]
    pos = [src.position(x) for x in order]
    from .state import reorder_sign

    acc = {}
    for (bits, labels), coef in c.terms.items():
        nb = tuple(bits[p] for p in pos)
        sign = reorder_sign(bits, pos)
        lo_t, loops_t = target.loops(nb)
        _, loops_s = src.loops(bits)
        new = [None] * len(loops_t)
        for j, lp in enumerate(loops_s):
            s = next((src.slot_at(k) for k in lp if src.slot_at(k) in smap), None)
            if s is None:
                raise DifferentDiagram("loop without a corresponding slot")
            new[lo_t[target.slot_index(smap[s])]] = labels[j]
        if any(v is None for v in new):
            raise DifferentDiagram("state loops do not correspond")
        k = (nb, tuple(new))
        acc[k] = acc.get(k, 0) + sign * coef
    return ChainElement(target, acc)


def compare_movies(m0: Movie, m1: Movie) -> Verdict:
    k0, k1 = m0.kj_class(), m1.kj_class()
    d0, d1 = k0.element.diagram, k1.element.diagram
    if not d0.vertices and not d1.vertices:
        a, b = k0.element.integer(), k1.element.integer()
        if a == b:
            return Verdict("equal", "integer")
        return Verdict("negatives" if a == -b else "distinct", "integer")
    try:
        e1 = align(k1.element, d0)
    except KhError as exc:
        raise BoundaryMismatch(f"movies bound different diagrams: {exc}") from None
    return class_equal_up_to_sign(k0.element, e1)


compare = class_equal_up_to_sign


# ------------------------------------------------------------- finish
def _state_key(d: Diagram):
    return frozenset(d.adjacency.items())


def _r3_search(d: Diagram, depth: int):
    """Shortest list of R3 slots after which a reduction exists."""
    start = _state_key(d)
    queue = deque([(d, [])])
    seen = {start}
    while queue:
        cur, path = queue.popleft()
        if len(path) >= depth:
            continue
        for s in r3_triangles(cur):
            try:
                nxt = r3_post(cur, s)
            except MoveError:
                continue
            key = _state_key(nxt)
            if key in seen:
                continue
            seen.add(key)
            np_ = path + [s]
            if find_reduction(nxt) is not None:
                return np_
            queue.append((nxt, np_))
    return None


def _marked(d: Diagram, red: Move):
    """``red`` preceded by strand vertices on edges that would otherwise close
    up into unnamed circles, which keeps the movie reversible."""
    if red.kind != "r2_down":
        return [red]
    X, Y, internal, _ = _bigon_at(d, *red.at)
    pair = {X, Y}
    pre = []
    for x in (X, Y):
        for i in range(4):
            t = d.opposite((x, i))
            if (x, i) not in internal and t[0] in pair and (x, i) < t:
                pre.append(Move("add_strand", at=((x, i),)))
    return pre + [red] if pre else [red]


def _finish(movie: Movie, depth: int, seed: int, walk: int) -> Movie:
    rng = random.Random(seed)
    m = movie
    stalls = 0
    while True:
        d = m.end
        fuses, _ = normal_form_moves(d)
        if fuses:
            m = m.then(*fuses)
            continue
        red = find_reduction(d)
        if red is not None:
            m = m.then(*_marked(d, red))
            continue
        if not d.crossings:
            deaths = []
            cur = d
            for comp in cur.components():
                deaths.append(Move("death", at=(comp[0],)))
            return m.then(*deaths)
        path = _r3_search(d, depth)
        if path:
            for s in path:
                m = m.then(Move("r3", at=(s,)))
            continue
        # random walk through R3 moves, like a level simplification
        cur = m
        found = False
        for _ in range(walk):
            tris = r3_triangles(cur.end)
            if not tris:
                break
            cur = cur.then(Move("r3", at=(rng.choice(tris),)))
            if find_reduction(cur.end) is not None or _r3_search(cur.end, 1):
                found = True
                break
        if found:
            m = cur
            stalls += 1
            continue
        raise SimplificationFailed(
            "could not simplify the end diagram",
            {"crossings": len(d.crossings), "moves": len(m), "triangles": len(r3_triangles(d))},
        )
