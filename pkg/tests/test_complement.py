"""Full complements: construction, verification, census, search, JSON."""

import json
from fractions import Fraction

import pytest

from mubkit.complement import (
    Complement,
    average_purity,
    complement_distribution,
    dumps,
    enumerate_lagrangians,
    field_spread,
    from_json_dict,
    lagrangian_count,
    loads,
    purity_census,
    search_spreads,
    to_json_dict,
    verify_spread,
)
from mubkit.errors import CensusViolationError, GuardExceededError, MubkitError
from mubkit.groups import CompatGroup
from mubkit.zplinalg import SystemParams, rank

FIELD_CASES = [(2, 2), (2, 3), (2, 4), (2, 5), (2, 7), (2, 9),
               (3, 2), (3, 3), (3, 4), (3, 5),
               (5, 2), (5, 3), (5, 4), (7, 2), (7, 3),
               (11, 2), (13, 2), (23, 2)]


@pytest.mark.parametrize("p,n", FIELD_CASES)
def test_field_spread_verifies(p, n):
    comp = field_spread(SystemParams(p, n))
    assert len(comp.classes) == p ** n + 1
    report = verify_spread(comp)
    assert report.ok, [c for c in report.checks if not c.passed]


def test_field_spread_guard():
    with pytest.raises(GuardExceededError):
        field_spread(SystemParams(2, 10))
    with pytest.raises(GuardExceededError):
        field_spread(SystemParams(5, 5))


@pytest.mark.parametrize("p,n", [(2, 4), (3, 3), (5, 2)])
def test_field_spread_graph_classes(p, n):
    """Non-vertical classes are graphs [I | S] with S symmetric, and the
    difference of any two gram matrices is invertible."""
    comp = field_spread(SystemParams(p, n))
    grams = []
    for cls in comp.classes:
        rows = cls.matrix
        left = tuple(row[:n] for row in rows)
        if all(not any(r) for r in left):
            continue  # the vertical class
        assert left == tuple(tuple(1 if c == i else 0 for c in range(n))
                             for i in range(n))
        s = tuple(row[n:] for row in rows)
        assert s == tuple(zip(*s)), "gram matrix must be symmetric"
        grams.append(s)
    assert len(grams) == p ** n
    for i in range(len(grams)):
        for j in range(i + 1, len(grams)):
            diff = [[(a - b) % p for a, b in zip(ra, rb)]
                    for ra, rb in zip(grams[i], grams[j])]
            assert rank(diff, p) == n


def test_classes_sorted_canonically():
    comp = field_spread(SystemParams(3, 2))
    keys = [tuple(v for row in cls.matrix for v in row) for cls in comp.classes]
    assert keys == sorted(keys)


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4)])
def test_census_and_average_purity(p, n):
    comp = field_spread(SystemParams(p, n))
    census = purity_census(comp)
    assert census.pure == (p + 1,) * n
    assert census.entangled == (p ** n - p,) * n
    assert census.identity_tally == (p ** (2 * n - 2) - 1,) * n
    for q in range(n):
        assert average_purity(comp, q) == Fraction(p + 1, p ** n + 1)


def test_census_violation_detected():
    comp = field_spread(SystemParams(2, 2))
    # duplicating a product class inflates its qupits' pure counts
    mats = [cls.matrix for cls in comp.classes]
    assert mats[0] != mats[1]
    broken = Complement(comp.params,
                        tuple(CompatGroup(comp.params, m) for m in [mats[0]] + mats[:-1]))
    with pytest.raises(CensusViolationError):
        purity_census(broken)


def test_verify_spread_reports_failures():
    comp = field_spread(SystemParams(2, 2))
    report = verify_spread(Complement(comp.params, comp.classes[:-1]))
    names = {c.name: c.passed for c in report.checks}
    assert not report.ok
    assert names["class count"] is False
    assert names["exact cover"] is False
    # duplicated class: disjointness must fail
    dup = Complement(comp.params, comp.classes[:1] + comp.classes[: len(comp.classes) - 1])
    names = {c.name: c.passed for c in verify_spread(dup).checks}
    assert names["pairwise disjoint"] is False
    # non Lagrangian class: replace one matrix with a non isotropic one
    bad = (( (1, 0, 0, 0), (0, 0, 1, 0) ),) + tuple(c.matrix for c in comp.classes[1:])
    broken = Complement(comp.params, tuple(CompatGroup(comp.params, m) for m in bad))
    names = {c.name: c.passed for c in verify_spread(broken).checks}
    assert names["classes Lagrangian"] is False


def test_distribution_n2_rigidity():
    for p in (2, 3, 5, 7):
        comp = field_spread(SystemParams(p, 2))
        dist = complement_distribution(comp)
        assert dist.counts == {"PI": p + 1, "B": p * p - p}


def test_distribution_field_goldens():
    got = complement_distribution(field_spread(SystemParams(2, 3))).counts
    assert got == {"PI": 2, "SB": 3, "G3": 4}
    got = complement_distribution(field_spread(SystemParams(3, 3))).counts
    assert got == {"PI": 2, "SB": 6, "G3": 20}
    got = complement_distribution(field_spread(SystemParams(2, 4))).counts
    assert got == {"PI": 2, "S2B": 1, "SG3": 2, "BB": 2, "C4": 10}
    got = complement_distribution(field_spread(SystemParams(3, 4))).counts
    assert got == {"PI": 2, "S2B": 2, "SG3": 4, "BB": 4, "C4": 56, "P4": 14}


# ---------------------------------------------------------------------------
# Lagrangian enumeration


@pytest.mark.parametrize("p,n,count", [(2, 2, 15), (3, 2, 40), (2, 3, 135),
                                       (3, 3, 1120), (2, 4, 2295)])
def test_enumerate_lagrangians_counts(p, n, count):
    assert lagrangian_count(SystemParams(p, n)) == count
    mats = enumerate_lagrangians(SystemParams(p, n))
    assert len(mats) == count
    assert len(set(mats)) == count
    keys = [tuple(v for row in m for v in row) for m in mats]
    assert keys == sorted(keys)


def test_enumerated_lagrangians_are_lagrangian():
    p, n = 3, 2
    for m in enumerate_lagrangians(SystemParams(p, n)):
        assert rank(m, p) == n
        for i in range(n):
            for j in range(n):
                f = sum(m[i][k] * m[j][n + k] - m[i][n + k] * m[j][k]
                        for k in range(n)) % p
                assert f == 0


def test_enumerate_guard():
    with pytest.raises(GuardExceededError):
        enumerate_lagrangians(SystemParams(5, 4))
    with pytest.raises(GuardExceededError):
        enumerate_lagrangians(SystemParams(2, 3), guard=100)


# ---------------------------------------------------------------------------
# spread search


def test_search_modes_agree_at_2_2():
    params = SystemParams(2, 2)
    chain = list(search_spreads(params, symmetry_breaking=True))
    vector = list(search_spreads(params, symmetry_breaking=False))
    assert len(chain) == len(vector) == 6
    as_set = lambda comps: {tuple(c.matrix for c in comp.classes) for comp in comps}
    assert as_set(chain) == as_set(vector)
    for comp in chain:
        assert verify_spread(comp).ok
        assert complement_distribution(comp).counts == {"PI": 3, "B": 2}
    # the chain mode emits the lexicographically smallest spread first
    first_key = tuple(v for cls in chain[0].classes for row in cls.matrix for v in row)
    keys = sorted(tuple(v for cls in comp.classes for row in cls.matrix for v in row)
                  for comp in chain)
    assert first_key == keys[0]


def test_search_limit():
    params = SystemParams(2, 2)
    assert len(list(search_spreads(params, limit=1))) == 1
    assert len(list(search_spreads(params, limit=4))) == 4


def test_search_filter():
    params = SystemParams(2, 3)
    hits = list(search_spreads(params, limit=1, symmetry_breaking=False,
                               dist_filter={"PI": 0, "G3": 0}))
    assert len(hits) == 1
    comp = hits[0]
    assert verify_spread(comp).ok
    assert complement_distribution(comp).counts == {"SB": 9}
    hits = list(search_spreads(params, limit=1, symmetry_breaking=False,
                               dist_filter={"SB": 0}))
    assert complement_distribution(hits[0]).counts == {"PI": 3, "G3": 6}


def test_search_guard():
    gen = search_spreads(SystemParams(5, 4))
    with pytest.raises(GuardExceededError):
        next(gen)


# ---------------------------------------------------------------------------
# serialization


def test_json_round_trip_byte_stable():
    comp = field_spread(SystemParams(3, 2))
    text = dumps(comp)
    again = loads(text)
    assert dumps(again) == text
    assert again.params == comp.params
    assert tuple(c.matrix for c in again.classes) == tuple(c.matrix for c in comp.classes)


def test_json_schema_shape():
    comp = field_spread(SystemParams(2, 2))
    doc = to_json_dict(comp)
    assert set(doc) == {"p", "n", "classes"}
    assert doc["p"] == 2 and doc["n"] == 2
    assert len(doc["classes"]) == 5
    gen = doc["classes"][0]["gens"][0]
    assert set(gen) == {"x", "z"}
    assert len(gen["x"]) == len(gen["z"]) == 2
    assert from_json_dict(json.loads(json.dumps(doc))).params == comp.params


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("p"),
    lambda d: d.update(p="three"),
    lambda d: d.update(p=4),
    lambda d: d["classes"][0]["gens"][0]["x"].append(0),
    lambda d: d["classes"][0]["gens"][0].update(x=[0, 9]),
    lambda d: d["classes"][0]["gens"].pop(),
    lambda d: d.update(classes=17),
])
def test_malformed_documents_rejected(mutate):
    doc = to_json_dict(field_spread(SystemParams(2, 2)))
    mutate(doc)
    with pytest.raises(MubkitError):
        from_json_dict(doc)


def test_malformed_json_text():
    with pytest.raises(MubkitError):
        loads("{not json")
