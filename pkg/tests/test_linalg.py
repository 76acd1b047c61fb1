from mondcert.coeffs import QQ
from mondcert.linalg import Echelon, nullspace, rank


def test_rank_and_membership():
    e = Echelon()
    assert e.insert({0: QQ(1), 2: QQ(2)})
    assert e.insert({1: QQ(1), 2: QQ(1)})
    assert not e.insert({0: QQ(2), 1: QQ(3), 2: QQ(7)})
    assert e.rank == 2
    assert e.contains({0: QQ(1), 1: QQ(-1), 2: QQ(1)})
    assert not e.contains({2: QQ(1)})
    assert e.pivot_columns() == {0, 1}


def test_reduce_returns_normal_form():
    e = Echelon()
    e.insert({0: QQ(1), 1: QQ(1)})
    assert e.reduce({0: QQ(1)}) == {1: QQ(-1)}


def test_rank_function_and_nullspace():
    assert rank([{0: QQ(1)}, {0: QQ(2)}, {1: QQ(1)}]) == 2
    ns = nullspace([[1, 2, 3], [2, 4, 6]])
    assert len(ns) == 2
    for v in ns:
        assert sum(a * b for a, b in zip([1, 2, 3], v)) == 0
