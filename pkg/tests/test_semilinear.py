import random
from math import lcm

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocaobs import (AP, FALSE, TRUE, ParseError, Rel, UpSet, guard_eval, guard_to_upset,
                    parse_guard, parse_rel, rel_eval, upset_bool, upset_to_guard)
from ocaobs.errors import CapacityError
from ocaobs.generators import random_guard, random_rel
from ocaobs.semilinear import Not


def test_guard_eval_examples():
    assert guard_eval(AP(1, 2), 5)
    assert guard_eval(AP(3, 0), 3)
    assert not guard_eval(AP(3, 0), 4)
    assert not any(guard_eval(Not(AP(0, 1)), x) for x in range(50))
    assert all(guard_eval(TRUE, x) for x in range(50))


def test_even_numbers():
    assert guard_to_upset(AP(0, 2)) == UpSet(0, 2, (True, False))


def test_multiples_of_six():
    u = guard_to_upset(AP(0, 2) & AP(0, 3))
    assert all((x in u) == (x % 6 == 0) for x in range(101))


def test_complement_of_positive():
    assert ~guard_to_upset(AP(1, 1)) == UpSet.of([0])


def test_parity_split_is_empty():
    assert (guard_to_upset(AP(0, 2)) & guard_to_upset(AP(1, 2))).is_empty()


def test_rel_eval_examples():
    assert rel_eval(Rel("ndiff", 1, 0), 3, 2)
    assert rel_eval(Rel("x'", 1, 1), 0, 2)
    assert not rel_eval(Rel("diff", 0, 1), 5, 3)


def test_canonical_form():
    u = UpSet.make(5, 4, [0, 0, 1, 0, 1, 0, 1, 0, 1])
    assert (u.threshold, u.period) == (1, 2)


def test_period_capacity():
    with pytest.raises(CapacityError):
        UpSet.make(0, 10**6 + 1, [0] * (10**6 + 1))


def test_upset_to_guard_empty():
    assert upset_to_guard(UpSet.empty()) == FALSE


def test_parse_guard():
    g = parse_guard("ap(0,2) & !(ap(3,0) | ap(1,1))")
    assert [x for x in range(6) if guard_eval(g, x)] == [0]


def test_parse_rel_sugar():
    assert parse_rel("x' = x - 1") == Rel("ndiff", 1, 0)
    assert parse_rel("x' = x + 2") == Rel("diff", 2, 0)
    assert parse_rel("x' >= 1") == Rel("x'", 1, 1)
    assert parse_rel("x' = 3") == Rel("x'", 3, 0)
    assert parse_rel("diff in ap(0,2)") == Rel("diff", 0, 2)


def test_parse_errors_have_columns():
    with pytest.raises(ParseError) as err:
        parse_guard("ap(1,2) & ")
    assert err.value.col > 0
    with pytest.raises(ParseError):
        parse_rel("y in ap(0,1)")


def test_str_round_trip():
    rng = random.Random(2)
    for _ in range(100):
        g = random_guard(rng)
        assert parse_guard(str(g)) == g
        r = random_rel(rng)
        assert parse_rel(str(r)) == r


guards = st.integers(0, 10**6).map(lambda s: random_guard(random.Random(s), 3))


def random_upset(seed):
    rng = random.Random(seed)
    t, d = rng.randint(0, 5), rng.randint(1, 5)
    return UpSet.make(t, d, [rng.random() < 0.5 for _ in range(t + d)])


upsets = st.integers(0, 10**6).map(random_upset)


@settings(max_examples=500, deadline=None)
@given(guards)
def test_guard_upset_round_trip(g):
    u = guard_to_upset(g)
    back = upset_to_guard(u)
    for x in range(201):
        assert guard_eval(g, x) == (x in u) == guard_eval(back, x)


@settings(max_examples=300, deadline=None)
@given(upsets, upsets)
def test_canonical_equality_is_pointwise(u1, u2):
    bound = u1.threshold + u2.threshold + lcm(u1.period, u2.period)
    pointwise = all((x in u1) == (x in u2) for x in range(bound + 1))
    assert (u1 == u2) == pointwise


@settings(max_examples=300, deadline=None)
@given(upsets, upsets)
def test_boolean_identities(u1, u2):
    assert ~~u1 == u1
    assert ~(u1 | u2) == (~u1 & ~u2)
    assert ~(u1 & u2) == (~u1 | ~u2)
    assert (u1 | ~u1).is_full()
    assert upset_bool("union", u1, u2) == u1 | u2
    for x in range(60):
        assert (x in u1 | u2) == (x in u1 or x in u2)
        assert (x in u1 & u2) == (x in u1 and x in u2)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6))
def test_rel_eval_matches_definition(seed):
    rng = random.Random(seed)
    term = rng.choice(["x", "x'", "diff", "ndiff"])
    c, d = rng.randint(0, 4), rng.randint(0, 3)
    r = Rel(term, c, d)
    for x in range(12):
        for y in range(12):
            v = {"x": x, "x'": y, "diff": y - x, "ndiff": x - y}[term]
            want = v >= c and (v == c if d == 0 else (v - c) % d == 0)
            assert rel_eval(r, x, y) == want
