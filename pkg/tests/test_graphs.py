import pytest

from wvcount.bench import gen_random_elp
from wvcount.decomp import TreeDecomposition, build_td, make_nice
from wvcount.errors import WvcountError
from wvcount.graphs import (
    assign_compatible_sets,
    bag_programs,
    epistemic_primal_graph,
    nested_primal_graph,
    primal_graph,
)
from wvcount.model import bits, mask_of
from wvcount.parser import parse_program
from wvcount.semantics import classify_atoms


def edge_names(program, graph):
    t = program.atoms
    return {
        frozenset(((t.name(u[0]), u[1]), (t.name(v[0]), v[1])))
        for u, v in graph.edges()
    }


def e_edges(program, graph):
    t = program.atoms
    return {frozenset((t.name(u[0]), t.name(v[0]))) for u, v in graph.edges()}


def mask_by_names(program, names):
    return mask_of(program.atoms.id(n) for n in names)


def example_td(program):
    """The worked three-node decomposition of the nested primal graph for
    the abstraction {b, c, d}: bags {b,c}, {c,d} under a {c} root."""
    t = program.atoms

    def v(name):
        return (t.id(name), "e")

    return TreeDecomposition(
        {1: {v("b"), v("c")}, 2: {v("c"), v("d")}, 3: {v("c")}},
        {1: (), 2: (), 3: (1, 2)},
        3,
    )


# ---------------------------------------------------------------------------
# primal graph


def test_primal_graph_running(running):
    g = primal_graph(running)
    assert len(g.vertices) == 8  # four atoms, objective and epistemic twins
    edges = edge_names(running, g)
    expected = {
        # objective co-occurrence
        (("a", "a"), ("b", "a")),
        (("c", "a"), ("d", "a")),
        # rules mixing objective and epistemic occurrences
        (("a", "a"), ("b", "e")),
        (("b", "a"), ("a", "e")),
        (("c", "a"), ("d", "e")),
        (("d", "a"), ("c", "e")),
        # purely-epistemic co-occurrence
        (("a", "e"), ("c", "e")),
        (("a", "e"), ("b", "e")),
        (("b", "e"), ("c", "e")),
        (("c", "e"), ("d", "e")),
        # objective/epistemic twins
        (("a", "a"), ("a", "e")),
        (("b", "a"), ("b", "e")),
        (("c", "a"), ("c", "e")),
        (("d", "a"), ("d", "e")),
    }
    assert edges == {frozenset(e) for e in expected}


def test_primal_graph_empty():
    assert primal_graph(parse_program("")).vertices == []


def test_primal_graph_adds_objective_twin():
    prog = parse_program("a :- -K b.")
    g = primal_graph(prog)
    t = prog.atoms
    assert set(g.vertices) == {
        (t.id("a"), "a"), (t.id("b"), "e"), (t.id("b"), "a")
    }
    assert edge_names(prog, g) == {
        frozenset(((("a", "a")), ("b", "e"))),
        frozenset(((("b", "a")), ("b", "e"))),
    }


# ---------------------------------------------------------------------------
# epistemic primal graph


def test_epistemic_primal_running(running):
    g = epistemic_primal_graph(running)
    assert e_edges(running, g) == {
        frozenset("ab"), frozenset("ac"), frozenset("bc"), frozenset("cd")
    }


def test_epistemic_primal_no_pure_rules():
    prog = parse_program("a :- -K b.\nb.")
    g = epistemic_primal_graph(prog)
    assert len(g.vertices) == 1 and not g.edges()


def test_epistemic_primal_of_cnf_clause():
    from wvcount.semantics import cnf_to_elp

    prog = cnf_to_elp(3, [[1, 2, 3]])
    g = epistemic_primal_graph(prog)
    assert e_edges(prog, g) == {
        frozenset(("x1", "x2")), frozenset(("x1", "x3")), frozenset(("x2", "x3"))
    }


# ---------------------------------------------------------------------------
# nested primal graph


def test_nested_primal_bcd(running):
    mask = mask_by_names(running, ["b", "c", "d"])
    g = nested_primal_graph(running, mask)
    assert e_edges(running, g) == {frozenset("bc"), frozenset("cd")}


def test_nested_primal_empty_abstraction(running):
    g = nested_primal_graph(running, 0)
    assert g.vertices == [] and not g.edges()


def test_nested_primal_full_abstraction(running):
    mask = classify_atoms(running).eats_mask
    g = nested_primal_graph(running, mask)
    epi = e_edges(running, epistemic_primal_graph(running))
    assert epi <= e_edges(running, g)
    # paths through objective vertices also connect a-b and c-d
    assert frozenset("ab") in e_edges(running, g)
    assert frozenset("cd") in e_edges(running, g)


def test_nested_supergraph_of_epistemic_on_random_programs():
    for seed in range(25):
        prog = gen_random_elp(6, 3, 8, seed)
        mask = classify_atoms(prog).eats_mask
        nested = e_edges(prog, nested_primal_graph(prog, mask))
        epi = e_edges(prog, epistemic_primal_graph(prog))
        assert epi <= nested


def test_nested_rejects_non_epistemic_abstraction(running):
    with pytest.raises(WvcountError):
        nested_primal_graph(running, 1 << 30 | 1)


def test_graphs_simple_and_symmetric(running):
    for g in (
        primal_graph(running),
        epistemic_primal_graph(running),
        nested_primal_graph(running, classify_atoms(running).eats_mask),
    ):
        for u, nbrs in g.adj.items():
            assert u not in nbrs
            for v in nbrs:
                assert u in g.adj[v]


# ---------------------------------------------------------------------------
# compatible sets and bag programs


def test_compat_assignment_example(running):
    t = running.atoms
    mask = mask_by_names(running, ["b", "c", "d"])
    td = example_td(running)
    asg = assign_compatible_sets(running, mask, td)
    comps = [tuple(t.name(a) for a in comp) for comp in asg.components]
    assert comps == [("a", "b"), ("c", "d")]
    assert asg.owner == {0: 1, 1: 2}
    assert asg.nested_bag_atoms == {
        1: mask_by_names(running, ["a", "b"]),
        2: mask_by_names(running, ["c", "d"]),
    }


def test_compat_full_abstraction_components(running):
    mask = classify_atoms(running).eats_mask
    td = TreeDecomposition({0: {(a, "e") for a in bits(mask)}}, {0: ()}, 0)
    asg = assign_compatible_sets(running, mask, td)
    comps = [tuple(running.atoms.name(a) for a in c) for c in asg.components]
    assert comps == [("a", "b"), ("c", "d")]


def test_compat_plain_connected_program_single_component():
    prog = parse_program("a | b.\nc :- b.\n")
    td = TreeDecomposition({0: set()}, {0: ()}, 0)
    asg = assign_compatible_sets(prog, 0, td)
    assert asg.components == [tuple(range(3))]
    assert asg.owner == {0: 0}


def test_compat_plain_disconnected_parts(plain_core):
    td = TreeDecomposition({0: set()}, {0: ()}, 0)
    asg = assign_compatible_sets(plain_core, 0, td)
    assert [len(c) for c in asg.components] == [2, 2]
    assert asg.nested_bag_atoms == {0: plain_core.ats_mask}


def test_bag_programs_example(running):
    mask = mask_by_names(running, ["b", "c", "d"])
    td = example_td(running)
    asg = assign_compatible_sets(running, mask, td)

    def indices(rules):
        return [running.rules.index(r) + 1 for r in rules]

    pe1, nested1 = bag_programs(running, mask, asg, td, 1)
    pe2, nested2 = bag_programs(running, mask, asg, td, 2)
    pe3, nested3 = bag_programs(running, mask, asg, td, 3)
    assert indices(nested1) == [1, 4, 5, 8, 9, 10, 11]
    assert indices(nested2) == [2, 3, 6, 7, 12]
    assert nested3 == []
    assert indices(pe1) == [9]
    assert indices(pe2) == [12]
    assert pe3 == []


def test_bag_programs_epistemic_td(running):
    # bags {a,b,c} and {c,d} of the epistemic primal graph carry the
    # purely-epistemic rules r8..r11 and r12 respectively
    t = running.atoms

    def v(name):
        return (t.id(name), "e")

    td = TreeDecomposition(
        {1: {v("a"), v("b"), v("c")}, 2: {v("c"), v("d")}, 3: set()},
        {1: (), 2: (), 3: (1, 2)},
        3,
    )
    mask = classify_atoms(running).eats_mask
    asg = assign_compatible_sets(running, mask, td)
    pe1, _ = bag_programs(running, mask, asg, td, 1)
    pe2, _ = bag_programs(running, mask, asg, td, 2)
    pe3, _ = bag_programs(running, mask, asg, td, 3)
    assert [running.rules.index(r) + 1 for r in pe1] == [8, 9, 10, 11]
    assert [running.rules.index(r) + 1 for r in pe2] == [12]
    assert pe3 == []


def test_unique_owner_for_objective_rules():
    for seed in range(25):
        prog = gen_random_elp(7, 3, 9, seed)
        mask = classify_atoms(prog).eats_mask
        nice = make_nice(build_td(nested_primal_graph(prog, mask)))
        asg = assign_compatible_sets(prog, mask, nice)
        membership = []
        for t in nice.postorder():
            _, nested = bag_programs(prog, mask, asg, nice, t)
            membership.append({id(r) for r in nested if r.aats_mask})
        for r in prog.rules:
            if r.aats_mask:
                assert sum(1 for s in membership if id(r) in s) == 1
        # atoms outside the abstraction land in exactly one component
        covered = 0
        for comp in asg.components:
            comp_mask = mask_of(comp)
            assert covered & comp_mask == 0
            covered |= comp_mask
        assert covered & ~mask == prog.ats_mask & ~mask


def test_compat_owner_is_introduce_node_on_nice_tds(running):
    mask = classify_atoms(running).eats_mask
    nice = make_nice(build_td(nested_primal_graph(running, mask)))
    asg = assign_compatible_sets(running, mask, nice)
    for owner in asg.owner.values():
        assert nice.kind[owner] == "intr"


def test_dot_export(running):
    dot = epistemic_primal_graph(running).to_dot(running.atoms, name="epi")
    assert dot.startswith("graph epi {")
    assert '"a^e" -- "b^e";' in dot
    dot2 = primal_graph(running).to_dot(running.atoms)
    assert '"a^a" [label="a^a", shape=circle, style=filled];' in dot2
