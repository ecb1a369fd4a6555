"""Property checks shared by the unit suites and the acceptance report.

Each check returns a list of failures so callers can both assert on it and
report it.  Results are cached because the acceptance report reuses them.
"""

import random
from functools import lru_cache

from chainmaps import commutes, try_prepare, with_inverse
from khcob.algebra import IntegerMatrix, in_image, smith_normal_form
from khcob.diagram import from_braid_closure, from_pd_code, mirror_diagram, rational_knot, unknot
from khcob.errors import UnsupportedConfiguration
from khcob.moves import Move, inverse_move, prepare
from khcob.state import (
    ChainElement,
    ONE,
    all_generators,
    apply_reorder,
    differential,
    differential_matrix,
    generators,
    grading_of,
    is_cycle_certificate,
    is_outside,
    reorder_sign,
    supported_gradings,
    vector_of,
)
from randdiag import random_diagrams

_U2 = prepare(unknot(), Move("add_strand", at=(("s0", 0),))).post

LOCI = {
    "unknot": unknot(),
    "unknot2": _U2,
    "two_circles": prepare(_U2, Move("birth")).post,
    "kinked": from_pd_code([(1, 4, 2, 1), (2, 4, 3, 3)]),
    "hopf": from_braid_closure([1, 1]),
    "trefoil": from_braid_closure([1, 1, 1]),
    "figure8": rational_knot([2, 2]),
    "b1m2": from_braid_closure([1, -2, 1, -2]),
}
R3_LOCI = {
    "b121": from_braid_closure([1, 2, 1]),
    "b12m1": from_braid_closure([1, 2, -1]),
    "bm1m2m1": from_braid_closure([-1, -2, -1]),
    "b12122": from_braid_closure([1, 2, 1, 2, 2]),
    "b12m12": from_braid_closure([1, 2, -1, 2]),
    "b12132": from_braid_closure([1, 2, 1, 3, 2]),
    "b1m2m1m2": from_braid_closure([1, -2, -1, -2]),
}
R2_NAMES = ("unknot2", "two_circles", "kinked", "hopf", "trefoil")


def r1_moves(d):
    for s in d.all_slots():
        for sign in "+-":
            for side in ("left", "right"):
                yield Move("r1_up", at=(s,), sign=sign, side=side)


def r2_moves(d):
    slots = d.all_slots()
    for a in slots:
        for b in slots:
            for over in (True, False):
                yield Move("r2_up", at=(a, b), over=over)


def move_cases(kind, name):
    """``(prepared, expected q shift)`` for every locus of ``kind`` on a fixture."""
    if kind in ("r1", "r2"):
        d = LOCI[name]
        gen = r1_moves(d) if kind == "r1" else r2_moves(d)
        out = []
        for m in gen:
            P = try_prepare(d, m)
            if P is not None:
                out += [(Q, 0) for Q in with_inverse(P)]
        return out
    if kind == "r3":
        d = R3_LOCI[name]
        out = []
        for face in d.faces():
            if len(face) != 3:
                continue
            try:
                P = prepare(d, Move("r3", at=(face[0],)))
            except UnsupportedConfiguration:
                continue
            out += [(Q, 0) for Q in with_inverse(P)]
        return out
    d = LOCI[name]
    if kind == "saddle":
        slots = d.all_slots()
        out = []
        for a in slots:
            for b in slots:
                P = try_prepare(d, Move("saddle", at=(a, b)))
                if P is not None:
                    # an incoherent saddle re-orients, so only a constant shift
                    out.append((P, -1 if P.info["coherent"] else None))
        return out
    if kind == "birth_death":
        born = prepare(d, Move("birth"))
        return [(born, 1), (prepare(born.post, inverse_move(d, born)), 1)]
    if kind == "strand":
        grown = [prepare(d, Move("add_strand", at=(s,))) for s in d.all_slots()]
        return [(P, 0) for P in grown] + [(prepare(P.post, inverse_move(P.pre, P)), 0) for P in grown]
    raise ValueError(kind)


def move_plan():
    plan = [("r1", n) for n in LOCI] + [("r2", n) for n in R2_NAMES]
    plan += [("r3", n) for n in R3_LOCI]
    plan += [(k, n) for k in ("saddle", "birth_death", "strand") for n in LOCI]
    return plan


@lru_cache(maxsize=None)
def move_failures(kind, name):
    cases = move_cases(kind, name)
    return len(cases), [str(P.canonical) for P, shift in cases if commutes(P, shift)]


def all_move_failures():
    total, fails = 0, []
    for kind, name in move_plan():
        n, bad = move_failures(kind, name)
        total += n
        fails += [f"{kind}/{name}: {b}" for b in bad]
    return total, fails


# ------------------------------------------------------------ d squared
@lru_cache(maxsize=None)
def d_squared_failures(count=200, max_crossings=8):
    bad = []
    for i, d in enumerate(random_diagrams(count, max_crossings)):
        for h, q in supported_gradings(d):
            A = differential_matrix(d, (h, q))
            B = differential_matrix(d, (h + 1, q))
            if A.rows and B.cols and (B @ A).entries:
                bad.append((i, h, q))
    return bad


@lru_cache(maxsize=None)
def d_grading_failures(count=60, max_crossings=6):
    bad = []
    for i, d in enumerate(random_diagrams(count, max_crossings, seed=7)):
        for g in all_generators(d):
            h, q = grading_of(d, g)
            for k in differential(ChainElement(d, {g: 1})).terms:
                if grading_of(d, k) != (h + 1, q):
                    bad.append((i, g, k))
    return bad


# -------------------------------------------------------------- reorder
def example_reorder():
    """The three-crossing example: Φ(α110 + α101 + α011) for π = (1 3 2)."""
    d = from_braid_closure([1, 1, 1])
    terms = {}
    for bits in ((1, 1, 0), (1, 0, 1), (0, 1, 1)):
        k = len(d.loops(bits)[1])
        terms[(bits, (ONE,) * k)] = 1
    image = apply_reorder(ChainElement(d, terms), [0, 2, 1])
    return {bits: coef for (bits, _labels), coef in image.terms.items()}


@lru_cache(maxsize=None)
def reorder_failures(count=40, seed=3):
    rng = random.Random(seed)
    bad = []
    for i, d in enumerate(random_diagrams(count, 5, seed=11)):
        n = d.n_crossings
        pi = list(range(n))
        rng.shuffle(pi)
        inv = [0] * n
        for new, old in enumerate(pi):
            inv[old] = new
        for g in all_generators(d):
            c = ChainElement(d, {g: 1})
            phi = apply_reorder(c, pi)
            back = apply_reorder(phi, inv)
            if back.terms != c.terms:
                bad.append((i, "inverse", g))
            if apply_reorder(differential(c), pi) != differential(phi):
                bad.append((i, "intertwine", g))
    return bad


# ------------------------------------------------------------------ SNF
def _det(rows):
    from sympy import Matrix

    return int(Matrix(rows).det()) if rows else 1


@lru_cache(maxsize=None)
def snf_failures(count=500, seed=5):
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    rng = random.Random(seed)
    bad = []
    for i in range(count):
        r, c = rng.randint(1, 10), rng.randint(1, 10)
        zero_bias = rng.random()
        rows = [[0 if rng.random() < zero_bias else rng.randint(-9, 9) for _ in range(c)]
                for _ in range(r)]
        A = IntegerMatrix.from_dense(rows)
        s = smith_normal_form(A)
        problems = []
        if (s.U @ s.S @ s.V) != A:
            problems.append("product")
        if abs(_det(s.U.dense())) != 1 or abs(_det(s.V.dense())) != 1:
            problems.append("unimodular")
        if any(i2 != j2 for (i2, j2) in s.S.entries):
            problems.append("diagonal")
        nz = [x for x in s.diag if x]
        if nz != s.diag[: len(nz)] or any(x < 0 for x in nz):
            problems.append("order")
        if any(nz[k + 1] % nz[k] for k in range(len(nz) - 1)):
            problems.append("divisibility")
        ref = sympy_snf(Matrix(rows), domain=ZZ)
        ref_diag = sorted(abs(int(ref[k, k])) for k in range(min(r, c)) if ref[k, k])
        if sorted(nz) != ref_diag:
            problems.append("invariant factors")
        if problems:
            bad.append((i, rows, problems))
    return bad


# ------------------------------------------------------------ certificates
def small_diagrams():
    from khcob.fixtures import load_knot

    named = [load_knot(k) for k in ("3_1", "4_1", "5_1", "5_2")]
    named += [mirror_diagram(d) for d in named]
    named += [from_braid_closure(w) for w in ([1, 1], [1, -1], [1, 1, 1, 1], [1, -2, 1, -2],
                                              [1, 2, 1, 2], [1, 1, 2, -1, 2], [-1, -1, -2, 1, -2])]
    named += [rational_knot([2, 1, 2]), rational_knot([3, 2])]
    named += random_diagrams(45, 5, seed=99)
    return [d for d in named if d.n_crossings <= 5]


@lru_cache(maxsize=None)
def certificate_failures(seed=13):
    """Counterexamples to the two certificate implications, plus how often
    each certificate actually fired (so a vacuous pass is visible)."""
    rng = random.Random(seed)
    bad = []
    fired = {"cycle": 0, "outside": 0, "boundaries": 0}
    for di, d in enumerate(small_diagrams()):
        for h, q in supported_gradings(d):
            basis = generators(d, h, q)
            if not basis:
                continue
            index = {k: i for i, k in enumerate(basis)}
            d_in = differential_matrix(d, (h - 1, q))
            snf = smith_normal_form(d_in) if d_in.cols and d_in.rows else None
            samples = [ChainElement(d, {g: 1}) for g in basis]
            for _ in range(6):
                pick = rng.sample(basis, min(len(basis), rng.randint(1, 4)))
                samples.append(ChainElement(d, {g: rng.choice([-2, -1, 1, 3]) for g in pick}))
            for x in generators(d, h - 1, q):
                samples.append(differential(ChainElement(d, {x: 1})))
                fired["boundaries"] += 1
            for c in samples:
                if c.is_zero():
                    continue
                if is_cycle_certificate(c):
                    fired["cycle"] += 1
                    if not differential(c).is_zero():
                        bad.append((di, h, q, "cycle", c.format()))
                ok, _ = is_outside(c)
                if ok:
                    fired["outside"] += 1
                    vec = vector_of(c, index)
                    if d_in.cols and in_image(d_in, vec, snf)[0]:
                        bad.append((di, h, q, "outside", c.format()))
    return bad, fired
