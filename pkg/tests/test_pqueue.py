import hypothesis.strategies as st
import pytest
from hypothesis import given

from dcs.pqueue import BACKENDS, LazyHeapPQ, SegmentTreePQ, make_pq


@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_pop_order_breaks_ties_by_id(backend):
    pq = make_pq([2.0, 1.0, 1.0, 0.5], backend)
    assert [pq.pop()[0] for _ in range(4)] == [3, 1, 2, 0]
    assert len(pq) == 0


@pytest.mark.parametrize("backend", sorted(BACKENDS))
def test_update_and_remove(backend):
    pq = make_pq([3.0, 2.0, 1.0], backend)
    pq.update(0, -1.0)
    pq.remove(2)
    assert pq.min() == (0, -1.0)
    assert len(pq) == 2


def test_unknown_backend():
    with pytest.raises(ValueError):
        make_pq([1.0], "fibonacci")


ops = st.lists(
    st.tuples(st.sampled_from(["pop", "update", "remove"]), st.integers(0, 9), st.integers(-5, 5)),
    max_size=40,
)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=10), ops)
def test_backends_agree(keys, script):
    a = SegmentTreePQ([float(k) for k in keys])
    b = LazyHeapPQ([float(k) for k in keys])
    alive = set(range(len(keys)))
    for op, i, k in script:
        i %= len(keys)
        if op == "pop":
            if not alive:
                continue
            got = a.pop()
            assert got == b.pop()
            alive.discard(got[0])
        elif i in alive:
            if op == "update":
                a.update(i, float(k))
                b.update(i, float(k))
            else:
                a.remove(i)
                b.remove(i)
                alive.discard(i)
        assert len(a) == len(b) == len(alive)
