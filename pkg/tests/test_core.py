import pytest
from hypothesis import given
from hypothesis import strategies as st

from powersched.core import (
    DisjointIntervalSet,
    Instance,
    Interval,
    Job,
    TriviallyInfeasibleError,
    deficiency,
    energy,
    forced_volume_interval,
    forced_volume_set,
    total_volume,
)

C1 = [Interval(0, 1), Interval(4, 6), Interval(7, 8)]


def test_interval_basics():
    iv = Interval(2, 5)
    assert iv.length == 3
    assert iv.overlaps(Interval(5, 7))  # touching counts as overlap
    assert not iv.overlaps(Interval(6, 7))
    assert iv.covers_slot(2) and iv.covers_slot(4) and not iv.covers_slot(5)
    assert Interval(0, 9).strictly_contains(iv)
    assert not Interval(2, 9).strictly_contains(iv)
    with pytest.raises(ValueError):
        Interval(3, 3)


def test_total_volume_gap(gap_instance):
    assert total_volume(gap_instance, 0, 8) == 5
    assert total_volume(gap_instance, 2, 4) == 1
    assert total_volume(gap_instance, 1, 7) == 3
    with pytest.raises(ValueError):
        total_volume(gap_instance, 0, 9)


def test_total_volume_empty():
    inst = Instance.build([], machines=1, wakeup=0, horizon=5)
    assert total_volume(inst, 0, 5) == 0


def test_forced_volume_worked_example():
    job = Job(0, 2, 6, 3)
    assert forced_volume_interval(job, 0, 3) == 0
    assert forced_volume_interval(job, 5, 8) == 0
    assert forced_volume_set(job, [Interval(0, 3), Interval(5, 8)]) == 1


def test_forced_volume_whole_window():
    job = Job(0, 3, 7, 2)
    assert forced_volume_interval(job, 2, 8) == 2
    assert forced_volume_set(job, []) == 0
    assert forced_volume_set(Job(0, 0, 4, 4), [Interval(1, 2)]) == 1


@given(
    r=st.integers(0, 10),
    length=st.integers(1, 10),
    p=st.integers(0, 10),
    a=st.integers(0, 25),
    b=st.integers(0, 25),
)
def test_forced_volume_closed_forms(r, length, p, a, b):
    d = r + length
    p = min(p, length)
    job = Job(0, r, d, p)
    if a >= b:
        return
    fv = forced_volume_interval(job, a, b)
    if r < a < d < b:
        assert fv == max(0, r + p - a)
    if r <= a < b <= d:
        assert fv == max(0, p - (a - r) - (d - b))


@st.composite
def _disjoint_sets(draw):
    starts = draw(st.lists(st.integers(0, 30), min_size=0, max_size=5,
                           unique=True))
    out = []
    prev_end = -1
    for s in sorted(starts):
        if s <= prev_end:
            continue
        e = draw(st.integers(s + 1, s + 4))
        out.append(Interval(s, e))
        prev_end = e
    return out


@given(
    r=st.integers(0, 20),
    length=st.integers(1, 12),
    p=st.integers(1, 12),
    q=_disjoint_sets(),
)
def test_forced_volume_superadditive(r, length, p, q):
    job = Job(0, r, r + length, min(p, length))
    if len(q) < 2:
        return
    cut = len(q) // 2
    q1, q2 = q[:cut], q[cut:]
    assert (forced_volume_set(job, q1) + forced_volume_set(job, q2)
            <= forced_volume_set(job, q))


def test_deficiency_gap_witness(gap_instance):
    assert deficiency(gap_instance, C1, [Interval(0, 8)]) == 1
    assert deficiency(gap_instance, C1, []) == 0
    full = [Interval(0, 8)]
    assert deficiency(gap_instance, full, [Interval(0, 8)]) == 0


def test_deficiency_monotone_in_supply(gap_instance):
    q = [Interval(0, 8)]
    base = deficiency(gap_instance, C1, q)
    grown = deficiency(gap_instance, C1 + [Interval(2, 3)], q)
    wider = deficiency(gap_instance,
                       [Interval(0, 1), Interval(3, 6), Interval(7, 8)], q)
    assert grown <= base
    assert wider <= base


def test_energy_values():
    assert energy([Interval(0, 1), Interval(3, 6), Interval(7, 8)], 1) == 8
    assert energy([], 5) == 0
    assert energy([Interval(0, 5)], 3) == 8


@given(
    left=st.lists(st.tuples(st.integers(0, 20), st.integers(1, 5)),
                  max_size=4),
    right=st.lists(st.tuples(st.integers(0, 20), st.integers(1, 5)),
                   max_size=4),
    q=st.integers(0, 4),
)
def test_energy_additive(left, right, q):
    a = [Interval(s, s + l) for s, l in left]
    b = [Interval(s, s + l) for s, l in right]
    assert energy(a + b, q) == energy(a, q) + energy(b, q)


def test_build_normalizes_and_validates():
    inst = Instance.build([(3, 6, 2), (5, 9, 1), (4, 7, 0)],
                          machines=2, wakeup=1)
    assert inst.offset == 3
    assert inst.horizon == 6
    assert [(j.release, j.deadline) for j in inst.jobs] == [(0, 3), (2, 6)]
    assert inst.total_ptime == 3
    # zero-length job dropped but ids preserved
    assert [j.id for j in inst.jobs] == [0, 1]

    with pytest.raises(TriviallyInfeasibleError):
        Instance.build([(0, 2, 3)], machines=1, wakeup=0)
    with pytest.raises(ValueError):
        Instance.build([(4, 4, 1)], machines=1, wakeup=0)


def test_disjoint_interval_set():
    ds = DisjointIntervalSet.from_slots([0, 1, 3, 6, 7])
    assert [str(iv) for iv in ds] == ["[0,2]", "[3,4]", "[6,8]"]
    assert ds.total_length() == 5
    with pytest.raises(ValueError):
        DisjointIntervalSet.from_intervals([Interval(0, 2), Interval(2, 4)])


def test_interval_multiset():
    from powersched.core import IntervalMultiset
    from powersched.rational import as_rat

    ms = IntervalMultiset.from_weighted(
        [(Interval(0, 4), as_rat("3/2")), (Interval(2, 6), as_rat("1/2")),
         (Interval(8, 9), 0)]
    )
    assert len(ms.entries) == 2  # zero weights dropped
    assert ms.coverage(2) == 2
    assert ms.coverage(7) == 0
    assert not ms.is_integral()
    ms.check_overlap_bound(2, 9)
    with pytest.raises(ValueError):
        ms.check_overlap_bound(1, 9)
    with pytest.raises(ValueError):
        ms.intervals()

    unit = IntervalMultiset.from_intervals([Interval(0, 2), Interval(0, 2)])
    assert unit.is_integral()
    assert unit.intervals() == [Interval(0, 2), Interval(0, 2)]
    assert energy(unit, 3) == 10
    gap = Instance.build(
        [(0, 1, 1), (1, 7, 1), (2, 4, 1), (4, 6, 1), (7, 8, 1)],
        machines=1, wakeup=1,
    )
    assert deficiency(gap, IntervalMultiset.from_intervals(C1),
                      [Interval(0, 8)]) == 1


def test_forced_volume_set_rejects_overlapping_pieces():
    job = Job(0, 0, 6, 3)
    with pytest.raises(ValueError):
        forced_volume_set(job, [Interval(0, 3), Interval(2, 5)])
