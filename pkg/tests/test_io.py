import json
import math

import jsonschema
import numpy as np
import pytest
from hypothesis import given, strategies as st

from ncdist import io
from ncdist.causet import Diamond, sprinkle
from ncdist.errors import InvalidInput
from ncdist.krein import fundamental_symmetry
from ncdist.order import random_poset
from ncdist.spectral import build_circle_triple, connes_distance, FiniteSpectralTriple


def test_dumps_formatting():
    text = io.dumps({"a": 1, "b": 0.1, "c": [math.inf, math.nan], "d": True, "e": np.float64(2.0)})
    assert text == '{"a": 1, "b": 0.10000000000000001, "c": [null, null], "d": true, "e": 2.0}\n'
    with pytest.raises(TypeError):
        io.dumps({"x": object()})


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip(x):
    assert json.loads(io.dumps([x]))[0] == x


def test_csv_lf():
    text = io.csv_text(["a", "b"], [(1, 0.5), (2, "x")])
    assert text == "a,b\n1,0.5\n2,x\n"


def test_triple_round_trip():
    t = build_circle_triple(6)
    d = io.triple_to_dict(t)
    jsonschema.validate(d, io.load_schema("triple"))
    t2 = io.triple_from_dict(json.loads(io.dumps(d)))
    np.testing.assert_array_equal(t.dirac, t2.dirac)
    with pytest.raises(InvalidInput):
        io.triple_from_dict({"n": 2, "dirac": [[0, 0]]})


def test_causet_round_trip():
    cs = sprinkle(Diamond(1.0), 40, seed=1)
    d = io.causet_to_dict(cs)
    jsonschema.validate(d, io.load_schema("causal_set"))
    cs2 = io.causet_from_dict(json.loads(io.dumps(d)))
    assert cs2.events == cs.events
    np.testing.assert_array_equal(cs2.relation, cs.relation)


def test_causet_rejects_bad_relations():
    ev = [{"id": 0, "t": 0, "x": 0}, {"id": 1, "t": 1, "x": 0}]
    with pytest.raises(InvalidInput):
        io.causet_from_dict({"events": ev, "relations": [[0, 1], [1, 0]]})
    with pytest.raises(InvalidInput):
        io.causet_from_dict({"events": ev, "relations": [[0, 7]]})
    with pytest.raises(InvalidInput):
        io.causet_from_dict({"events": ev + ev[:1]})


def test_poset_round_trip():
    p = random_poset(6, 2)
    d = io.poset_to_dict(p)
    jsonschema.validate(d, io.load_schema("poset"))
    np.testing.assert_array_equal(io.poset_from_dict(d).leq, p.leq)


def test_krein_round_trip():
    g = np.array([[2.0, 1.0], [1.0, -1.0]])
    s = fundamental_symmetry(g)
    d = io.krein_to_dict(s)
    jsonschema.validate(d, io.load_schema("krein_space"))
    np.testing.assert_array_equal(io.krein_from_dict(d).gram, s.gram)
    d["signature"] = [2, 0]
    with pytest.raises(InvalidInput):
        io.krein_from_dict(d)


def test_distance_result_schema():
    t = FiniteSpectralTriple(np.diag([1.0, 2.0]) + 0j)
    for p, q in [(0, 1), (0, 0)]:
        d = json.loads(io.dumps(connes_distance(t, p, q).to_dict()))
        jsonschema.validate(d, io.load_schema("distance_result"))


def test_weights_from_dict():
    cs = sprinkle(Diamond(1.0), 3, seed=0)
    w = io.weights_from_dict(cs, {"weights": [[0, 1, 2.5]]})
    assert w[0, 1] == 2.5 and np.isnan(w[1, 0])
    with pytest.raises(InvalidInput):
        io.weights_from_dict(cs, {"weights": [[0, 9, 1.0]]})
