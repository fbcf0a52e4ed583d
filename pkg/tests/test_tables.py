import pytest

from capsearch import tables
from capsearch.field import is_prime
from capsearch.tables import DataCorrupt, UnknownQ, compare, load_table, min_series


def test_row_counts():
    assert len(load_table(3, "L")) == 636
    assert len(load_table(3, "G")) == 521
    assert len(load_table(4, "L")) == 217  # source omits 1069 and 1327
    assert len(load_table(4, "G")) == 90


def test_spot_anchors():
    assert load_table(3, "L").sizes()[7001] == 43831
    assert load_table(3, "L").sizes()[8009] == 50515
    assert load_table(3, "G").sizes()[61] == 229
    assert load_table(3, "G").sizes()[4289] == 25225
    assert load_table(4, "L").sizes()[1409] == 337667
    assert load_table(4, "G").sizes()[17] == 254
    assert load_table(4, "G").sizes()[463] == 56057


def test_prime_set_composition():
    t = load_table(4, "G")
    qs = [q for q, _ in t.entries]
    assert qs == sorted(q for q in range(2, 464) if is_prime(q))
    t3 = load_table(3, "L")
    qs3 = {q for q, _ in t3.entries}
    assert {5003, 6007, 7001, 8009} <= qs3
    assert max(q for q in qs3 if q <= 4673) == 4673 or 4673 in qs3


def test_first_row_values():
    first = dict(load_table(3, "L").entries[:6])
    assert first == {2: 8, 3: 8, 5: 16, 7: 23, 11: 37, 13: 49}


def test_min_series():
    m = min_series(3).sizes()
    L = load_table(3, "L").sizes()
    G = load_table(3, "G").sizes()
    assert m[7] == G[7] == 17
    assert m[8009] == L[8009] == 50515
    assert all(m[q] <= L[q] for q in m)


def test_unknown_series():
    with pytest.raises(tables.TableError):
        load_table(5, "L")


def test_compare_exact_and_delta():
    ref = load_table(3, "L").sizes()
    computed = [(q, ref[q]) for q in (2, 3, 5, 7, 11, 13)]
    report = compare(computed, 3, "L")
    assert report.exact and not report.mismatches

    report2 = compare([(5, 17)], 3, "L")
    assert not report2.exact
    assert report2.entries[0].delta == +1

    report3 = compare([(7, 18)], 3, "G")
    assert report3.entries[0].delta == +1  # informational for greedy

    with pytest.raises(UnknownQ):
        compare([(4, 10)], 3, "L")


def test_corruption_detected(monkeypatch):
    real = tables._data_bytes

    def tampered(filename):
        data = real(filename)
        if filename == "t2G_pg4.csv":
            return data.replace(b"17,254", b"17,253")
        return data

    monkeypatch.setattr(tables, "_data_bytes", tampered)
    load_table.cache_clear()
    tables._manifest.cache_clear()
    try:
        with pytest.raises(DataCorrupt):
            load_table(4, "G")
    finally:
        monkeypatch.undo()
        load_table.cache_clear()
        tables._manifest.cache_clear()
