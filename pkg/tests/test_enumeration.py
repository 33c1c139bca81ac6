import pytest
from hypothesis import given
from hypothesis import strategies as st

from qrun import enumeration as en
from qrun.enumeration import Overpartition
from qrun.series import euler_inverse

# the seven overlined lower 2-run overpartitions of 7
WITNESSES_7 = [
    "4' + 3'",
    "4 + 2' + 1'",
    "3' + 2 + 2'",
    "3 + 2' + 1 + 1'",
    "2 + 2 + 2' + 1'",
    "2 + 2' + 1 + 1 + 1'",
    "2' + 1 + 1 + 1 + 1 + 1'",
]

# op(n), overpartition counts
OP = [1, 2, 4, 8, 14, 24, 40, 64, 100, 154, 232]


def test_overpartition_counts():
    assert [sum(1 for _ in en.enumerate_overpartitions(n)) for n in range(11)] == OP


def test_enumeration_has_no_duplicates():
    ops = list(en.enumerate_overpartitions(12))
    assert len(ops) == len(set(ops))
    assert all(o.size == 12 for o in ops)


def test_enumeration_limit():
    with pytest.raises(ValueError):
        next(en.enumerate_overpartitions(en.MAX_ENUMERATION_SIZE + 1))


def test_example_size_seven():
    assert en.count_lower(7, 2) == 22
    found = {lam for lam in en.enumerate_overpartitions(7) if en.is_lower_k_run(lam, 2) and lam.num_overlined}
    assert found == {Overpartition.parse(s) for s in WITNESSES_7}


def test_parse_roundtrip_and_combining_marks():
    for s in WITNESSES_7:
        assert str(Overpartition.parse(s)) == s
    assert Overpartition.parse("0") == Overpartition()
    assert Overpartition.parse("4̄ + 3̅") == Overpartition.parse("4' + 3'")


@pytest.mark.parametrize("bad", ["3 + 3'' ", "2' + 2'", "-1", "x", "1 + + 2"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        Overpartition.parse(bad)


def test_run_predicates_on_small_cases():
    assert en.is_lower_k_run(Overpartition.parse("1'"), 1)
    assert not en.is_lower_k_run(Overpartition.parse("2' + 1'"), 1)
    assert en.is_lower_k_run(Overpartition.parse("2' + 1'"), 2)
    # part j below a run breaks the lower condition but not the upper one
    assert not en.is_lower_k_run(Overpartition.parse("2' + 1"), 1)
    assert en.is_upper_k_run(Overpartition.parse("2' + 1"), 1)
    # part j+k+1 above a run breaks the upper condition only
    assert en.is_lower_k_run(Overpartition.parse("2 + 1'"), 1)
    assert not en.is_upper_k_run(Overpartition.parse("2 + 1'"), 1)
    # plain partitions belong to every class
    assert all(en.is_lower_k_run(Overpartition.parse("3 + 1"), k) for k in range(1, 5))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_lower_upper_bijection(k):
    for n in range(13):
        ops = list(en.enumerate_overpartitions(n))
        lower = [lam for lam in ops if en.is_lower_k_run(lam, k)]
        upper = {lam for lam in ops if en.is_upper_k_run(lam, k)}
        images = {en.lower_to_upper(lam, k) for lam in lower}
        assert images == upper
        for lam in lower:
            mu = en.lower_to_upper(lam, k)
            assert (mu.size, mu.num_parts, mu.num_overlined) == (lam.size, lam.num_parts, lam.num_overlined)
            assert en.upper_to_lower(mu, k) == lam


def test_shift_rejects_wrong_class():
    with pytest.raises(en.NotLowerKRun):
        en.lower_to_upper(Overpartition.parse("2' + 1"), 1)
    with pytest.raises(en.NotUpperKRun):
        en.upper_to_lower(Overpartition.parse("2 + 1'"), 1)


def test_conjugation_example():
    lam = Overpartition.parse("6' + 4' + 1 + 1 + 1'")
    assert en.conjugate(lam) == Overpartition.parse("5' + 2 + 2 + 2' + 1 + 1'")


@given(st.integers(0, 14).flatmap(lambda n: st.sampled_from(list(en.enumerate_overpartitions(n)))))
def test_conjugation_properties(lam):
    mu = en.conjugate(lam)
    assert en.conjugate(mu) == lam
    assert mu.size == lam.size
    assert mu.num_overlined == lam.num_overlined
    assert mu.num_parts == (lam.entries[0][0] if lam.entries else 0)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_mono_injection_in_n(k):
    for n in range(12):
        upper = [lam for lam in en.enumerate_overpartitions(n) if en.is_upper_k_run(lam, k)]
        images = [en.mono_inject_n(lam, k) for lam in upper]
        assert len(set(images)) == len(images)
        assert all(en.is_upper_k_run(mu, k) and mu.size == n + 1 for mu in images)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_mono_injection_in_k(k):
    for n in range(13):
        src = [lam for lam in en.enumerate_overpartitions(n) if en.is_lower_k_run(lam, k + 1)]
        images = [en.mono_inject_k(lam, k) for lam in src]
        assert len(set(images)) == len(images)
        assert all(en.is_lower_k_run(mu, k) and mu.size == n for mu in images)


def test_counts_monotone():
    for k in range(1, 4):
        counts = [en.count_lower(n, k) for n in range(16)]
        assert counts == sorted(counts)
        assert all(en.count_lower(n, k) >= en.count_lower(n, k + 1) for n in range(16))


def test_large_k_gives_partitions():
    p = euler_inverse(20)
    for n in range(15):
        assert en.count_lower(n, n + 1) == p[n]
        assert en.count_no_k_sequence(n, n + 1) == p[n]


def test_by_parts_sums_to_total():
    for n in range(12):
        assert sum(en.count_lower_by_parts(n, l, 2) for l in range(n + 1)) == en.count_lower(n, 2)


def test_k_sequences():
    assert en.has_k_sequence((3, 2, 2), 2)
    assert not en.has_k_sequence((4, 2, 2), 2)
    assert en.count_no_k_sequence(5, 2) == 4  # 5, 4+1, 3+1+1, 1^5


def test_k_must_be_positive():
    with pytest.raises(ValueError):
        en.is_lower_k_run(Overpartition(), 0)
