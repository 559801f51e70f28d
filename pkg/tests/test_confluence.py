import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubecoh.ars import Branching, Path, Zigzag, branchings, reduce_zigzag, zigzag_end
from cubecoh.cells import MINUS, PLUS, Conn, Eps, Square, Vertex, boundary, compose, face, is_thin, word, word_zigzag
from cubecoh.contraction import Contraction, fill_square
from cubecoh.errors import DifferentSources
from cubecoh.normal import Verdict, equal, squares_verdict, validate_square
from cubecoh.polygraph import generate, longest_path
from cubecoh.sampling import random_system, random_zigzag

from conftest import confluence_for


def _p(R, start, *names):
    return R.path(start, *names)


def _path_of(c):
    w = word(c)
    assert all(fwd for _, fwd in w.steps)
    return tuple(a.name for a, _ in w.steps)


@pytest.fixture(scope="module")
def K(golden_local):
    return confluence_for(golden_local)


def _random(seed):
    rng = random.Random(seed)
    R = random_system(rng)
    while not R.edges:
        R = random_system(rng)
    return rng, R


def test_local_filler_is_generator(K, golden):
    f1, f2 = _p(golden, "x", "f1"), _p(golden, "x", "f2")
    c = K.newman_extend(Branching("x", (f1, f2)))
    assert c is K.table.lookup((f1, f2))
    assert _path_of(face(c, 1, PLUS)) == ("g1",)
    assert _path_of(face(c, 2, PLUS)) == ("g2",)


def test_diagonal_filler(K, golden):
    f = _p(golden, "x", "f2")
    c = K.newman_extend(Branching("x", (f, f)))
    ctx = K.ctx
    want = compose(1, Conn(1, MINUS, ctx.edge("f2")), Conn(1, PLUS, ctx.edge("g2")))
    assert equal(c, want) is Verdict.EQUAL
    assert _path_of(face(c, 1, MINUS)) == ("f2",) and _path_of(face(c, 2, MINUS)) == ("f2",)
    assert _path_of(face(c, 1, PLUS)) == ("g2",) and _path_of(face(c, 2, PLUS)) == ("g2",)


def test_empty_leg_filler(K, golden):
    c = K.newman_extend(Branching("x", (Path("x"), _p(golden, "x", "f2"))))
    B = boundary(c)
    assert _path_of(B.face(1, MINUS)) == ("f2",)
    assert _path_of(B.face(2, MINUS)) == ()
    assert _path_of(B.face(1, PLUS)) == ("f1", "g1")
    assert _path_of(B.face(2, PLUS)) == ("g2",)
    assert validate_square(B)


def test_long_legs_close_at_normal_form(K, golden):
    f, g = _p(golden, "x", "f1", "g1"), _p(golden, "x", "f2", "g2")
    c = K.newman_extend(Branching("x", (f, g)))
    assert _path_of(face(c, 1, MINUS)) == ("f2", "g2")
    assert _path_of(face(c, 2, MINUS)) == ("f1", "g1")
    assert _path_of(face(c, 1, PLUS)) == () and _path_of(face(c, 2, PLUS)) == ()
    assert validate_square(boundary(c))


def test_mismatched_sources(K, golden):
    with pytest.raises(DifferentSources):
        K.newman_extend(Branching("x", (_p(golden, "x", "f1"), _p(golden, "y1", "g1"))))


def test_residuals(K, golden):
    f1, f2, f3 = (_p(golden, "x", n) for n in ("f1", "f2", "f3"))
    assert K.residual(f1, f2) == _p(golden, "y2", "g2")
    assert K.residual(f3, f3) == _p(golden, "y3", "g3")
    assert K.residual(K.residual(f1, f2), K.residual(f3, f2)) == Path("z")


def test_golden_cube_law(K, golden):
    (b,) = branchings(golden, 3, "local")
    rep = K.check_cube_law(b)
    assert rep.holds
    assert rep.instances and all(lhs == rhs == Path("z") for _, lhs, rhs in rep.instances)
    assert rep.face_route[0] == rep.face_route[1]


def test_golden_three_filler(K, golden):
    legs = tuple(_p(golden, "x", n) for n in ("f1", "f2", "f3"))
    c = K.fill_3_branching(Branching("x", legs))
    assert c is K.table.lookup(legs)
    assert face(c, 3, MINUS) is K.table.lookup(legs[:2])


def test_repeated_legs_fill_thin(K, golden):
    f = _p(golden, "x", "f2")
    c = K.fill_3_branching(Branching("x", (f, f, f)))
    assert is_thin(c)
    assert validate_square(boundary(c))
    assert K.check_cube_law(Branching("x", (f, f, _p(golden, "x", "f1")))).holds


def test_church_rosser_examples(K, golden):
    ctx = K.ctx
    fwd = K.church_rosser(Zigzag("x", (("f1", True), ("g1", True))))
    assert equal(face(fwd, 2, MINUS), ctx.sigma_path("x")) is Verdict.EQUAL
    assert _path_of(face(fwd, 1, PLUS)) == ()
    empty = K.church_rosser(reduce_zigzag(Zigzag("x", (("f1", True), ("f1", False)))))
    assert is_thin(empty)
    peak = K.church_rosser(Zigzag("y1", (("f1", False), ("f2", True))))
    B = boundary(peak)
    assert validate_square(B)
    assert word_zigzag(word(B.face(1, MINUS))) == Zigzag("y1", (("f1", False), ("f2", True)))


def test_squier_witnesses(K, golden_local):
    e = K.ctx.edge
    S = Square(1, ((e("f3"), e("g2")), (e("f2"), e("g3"))))
    W = K.squier_witness(S)
    assert squares_verdict(boundary(W), S) is Verdict.EQUAL
    F = fill_square(Contraction(golden_local), S)
    assert squares_verdict(boundary(W), boundary(F.B)) is Verdict.EQUAL
    z = Vertex("z")
    flat = Square(1, ((Eps(1, z), Eps(1, z)), (Eps(1, z), Eps(1, z))))
    assert is_thin(K.squier_witness(flat))
    peak = K.ctx.zigzag(Zigzag("y1", (("f1", False), ("f2", True))))
    S2 = Square(1, ((peak, Eps(1, z)), (e("g1"), e("g2"))))
    assert validate_square(S2)
    assert squares_verdict(boundary(K.squier_witness(S2)), S2) is Verdict.EQUAL


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_newman_matches_generators(data):
    rng, R = _random(data.draw(st.integers(0, 10**6)))
    K = confluence_for(generate(R, 4, "local"))
    P = generate(R, 2, "paths")
    for b in branchings(R, 2, "all", longest_path(R)):
        c = K.newman_extend(b)
        assert validate_square(boundary(c))
        assert squares_verdict(boundary(c), boundary(P.lookup(b.legs))) is Verdict.EQUAL
        sig = K.strategy.sigma_path
        assert _path_of(face(c, 1, PLUS)) == sig[R.end(b.legs[0])].steps
        assert _path_of(face(c, 2, PLUS)) == sig[R.end(b.legs[1])].steps


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_cube_law_on_random_systems(data):
    rng, R = _random(data.draw(st.integers(0, 10**6)))
    K = confluence_for(generate(R, 4, "local"))
    for b in branchings(R, 3, "local"):
        rep = K.check_cube_law(b)
        assert rep.holds, rep.failures
        if rep.face_route is not None:
            assert rep.face_route[0] == rep.face_route[1]


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_church_rosser_shape(data):
    rng, R = _random(data.draw(st.integers(0, 10**6)))
    K = confluence_for(generate(R, 4, "local"))
    for _ in range(5):
        v = rng.choice(R.vertices)
        z = reduce_zigzag(random_zigzag(rng, R, v, rng.randint(0, 6)))
        B = boundary(K.church_rosser(z))
        assert validate_square(B)
        assert word_zigzag(word(B.face(1, MINUS))) == z
        assert equal(B.face(2, MINUS), K.ctx.sigma_path(v)) is Verdict.EQUAL
        assert equal(B.face(2, PLUS), K.ctx.sigma_path(zigzag_end(R, z))) is Verdict.EQUAL
        assert _path_of(B.face(1, PLUS)) == ()


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_three_fillers_validate(data):
    rng, R = _random(data.draw(st.integers(0, 10**6)))
    K = confluence_for(generate(R, 4, "local"))
    for b in branchings(R, 3, "all", 2)[:8]:
        assert validate_square(boundary(K.fill_3_branching(b)))
