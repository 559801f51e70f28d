import random

from hypothesis import given, settings
from hypothesis import strategies as st

from cubecoh.ars import Path
from cubecoh.axioms import ROWS, holds, run_suite
from cubecoh.cells import MINUS, PLUS, Conn, Eps, Inv, Transp, compose


@settings(max_examples=10, deadline=None)
@given(st.data())
def test_rows_hold_on_random_cells(data):
    rep = run_suite(random.Random(data.draw(st.integers(0, 10**6))), systems=2, cells_per_system=12)
    assert rep.ok, rep.failures[:3]


def test_every_row_is_instantiated():
    rep = run_suite(random.Random(0), systems=6, cells_per_system=12)
    assert rep.ok
    assert len(rep.by_row) >= len(ROWS)


def test_corrected_rows_on_golden(golden_local):
    e = golden_local.ctx.edge
    A = golden_local.lookup((Path("x", ("f1",)), Path("x", ("f2",))))
    # eps_i eps_j = eps_{j+1} eps_i for i <= j
    assert holds(Eps(1, Eps(1, e("f1"))), Eps(2, Eps(1, e("f1"))))
    # R_i Gamma_i^- f composes in direction i
    rhs = compose(1, Eps(2, Inv(1, A)), Conn(1, PLUS, A))
    assert holds(Inv(1, Conn(1, MINUS, A)), rhs)
    # T_i Gamma_j^a f = Gamma_j^a T_i f only for j far from i; the adjacent case is a braid
    assert holds(Transp(2, Conn(2, PLUS, A)), Conn(2, PLUS, A))
