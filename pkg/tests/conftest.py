import itertools
import os

import pytest

from wvcount.decomp import NiceTD
from wvcount.model import WVI, bits
from wvcount.parser import parse_program
from wvcount.semantics import is_plausible

HERE = os.path.dirname(__file__)
RUNNING_PATH = os.path.join(HERE, "..", "instances", "running.elp")

RUNNING_TEXT = open(RUNNING_PATH, "r", encoding="utf-8").read()

# The plain core of the running example (first three rules).
PLAIN_TEXT = "a | b.\nc :- -d.\nd :- -c.\n"


@pytest.fixture
def running():
    return parse_program(RUNNING_TEXT)


@pytest.fixture
def plain_core():
    return parse_program(PLAIN_TEXT)


def running_nice_td(program):
    """The worked nice decomposition of the running example's epistemic
    primal graph: one branch introduces b, a, c and removes a, b; the
    other introduces d, c and removes d; both join on {c}."""
    t = program.atoms
    a, b, c, d = (t.id(x) for x in "abcd")

    def v(atom):
        return (atom, "e")

    bags = {
        1: set(), 2: {v(b)}, 3: {v(a), v(b)}, 4: {v(a), v(b), v(c)},
        5: {v(b), v(c)}, 6: {v(c)},
        7: set(), 8: {v(d)}, 9: {v(c), v(d)}, 10: {v(c)},
        11: {v(c)}, 12: set(),
    }
    children = {1: (), 2: (1,), 3: (2,), 4: (3,), 5: (4,), 6: (5,),
                7: (), 8: (7,), 9: (8,), 10: (9,), 11: (6, 10), 12: (11,)}
    kind = {1: "leaf", 2: "intr", 3: "intr", 4: "intr", 5: "rem", 6: "rem",
            7: "leaf", 8: "intr", 9: "intr", 10: "rem", 11: "join", 12: "rem"}
    action = {2: v(b), 3: v(a), 4: v(c), 5: v(a), 6: v(b),
              8: v(d), 9: v(c), 10: v(d), 12: v(c)}
    return NiceTD(bags, children, 12, kind, action)


def wvi_from_names(table, names):
    """Build a WVI from decided literal names, e.g. ["a", "-b"]."""
    t = f = dom = 0
    for name in names:
        positive = not name.startswith("-")
        atom = table.id(name.lstrip("-"))
        dom |= 1 << atom
        if positive:
            t |= 1 << atom
        else:
            f |= 1 << atom
    return WVI(dom, t, f)


def brute_plausible_count(program):
    """Independent plausibility oracle: try all 3^k guesses directly."""
    eats = program.eats_mask
    atoms = sorted(bits(eats))
    count = 0
    for choice in itertools.product((None, True, False), repeat=len(atoms)):
        t = f = 0
        for atom, val in zip(atoms, choice):
            if val is True:
                t |= 1 << atom
            elif val is False:
                f |= 1 << atom
        if is_plausible(WVI(eats, t, f), program):
            count += 1
    return count


def brute_cnf_models(num_vars, clauses):
    """Independent model counter for DIMACS-style clause lists."""
    count = 0
    for assignment in range(1 << num_vars):
        ok = True
        for clause in clauses:
            if not any(
                ((assignment >> (abs(l) - 1)) & 1) == (1 if l > 0 else 0)
                for l in clause
            ):
                ok = False
                break
        if ok:
            count += 1
    return count
