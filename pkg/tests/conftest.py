import pytest

from latmc.lattice import builtin_lattice
from latmc.models import Predicate, load_model

# the two-state model used throughout the spec examples:
# p holds at s1 only, s0 can stay or move to s1, s1 loops
MODEL_A = {
    "lattice": {"kind": "builtin", "name": "bool2"},
    "states": ["s0", "s1"],
    "atoms": {"p": {"s1": "1"}, "q": {"s0": "1"}},
    "coalgebra": {"kind": "powerset",
                  "succ": {"s0": ["s0", "s1"], "s1": ["s1"]}},
}

CYCLE2 = {
    "lattice": {"kind": "builtin", "name": "bool2"},
    "states": ["s0", "s1"],
    "atoms": {"p": {"s1": "1"}},
    "coalgebra": {"kind": "powerset",
                  "succ": {"s0": ["s1"], "s1": ["s0"]}},
}

DEAD_END = {
    "lattice": {"kind": "builtin", "name": "bool2"},
    "states": ["s0", "s1"],
    "atoms": {"p": {"s0": "1"}},
    "coalgebra": {"kind": "powerset", "succ": {"s0": ["s1"], "s1": []}},
}


@pytest.fixture
def bool2():
    return builtin_lattice("bool2")


@pytest.fixture
def chain3():
    return builtin_lattice("chain3")


@pytest.fixture
def model_a():
    return load_model(dict(MODEL_A))


@pytest.fixture
def model_a_affine():
    doc = dict(MODEL_A)
    doc["coalgebra"] = {"kind": "nonempty-powerset",
                        "succ": {"s0": ["s0", "s1"], "s1": ["s1"]}}
    return load_model(doc)


@pytest.fixture
def cycle2():
    return load_model(dict(CYCLE2))


@pytest.fixture
def dead_end():
    return load_model(dict(DEAD_END))


def pred(m, mapping, default="0"):
    return Predicate.from_dict(m.lattice, m.states, mapping,
                               default=m.lattice.elem(default).index)


def names(p):
    return p.to_json()
