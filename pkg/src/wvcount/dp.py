"""Table algorithms and nested dynamic programming drivers.

Counting runs over nice tree decompositions of graph abstractions.  Rows
pair a partial world view interpretation over the bag's epistemic atoms
with one counter (plus a second, query-side counter for probability
runs).  Introduce nodes guess a third truth value, check the bag's
purely-epistemic rules, and verify the rules delegated to the node by a
recursive call; remove nodes project and sum; join nodes match rows and
multiply.  Recursion bottoms out in direct answer-set checks or a base
solver, steered by width and depth thresholds that change routing but
never results.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .decomp import NiceTD, build_td, make_nice
from .errors import NoWorldViews
from .graphs import (
    assign_compatible_sets,
    epistemic_primal_graph,
    nested_primal_graph,
    primal_graph,
)
from .model import EMPTY_WVI, Epistemic, Literal, Program, Rule, WVI, bits, mask_of
from .semantics import (
    classify_atoms,
    epistemic_reduct,
    with_query_constraints,
    with_wvi_constraints,
)


@dataclass
class Thresholds:
    """Routing thresholds and brute-force caps.

    ``hybrid``: primal width at which the whole subproblem goes to the
    base solver; ``abstr``: width at which an abstraction is chosen before
    decomposing; ``depth``: nesting depth at which recursion stops and the
    base solver takes over.  Thresholds steer routing only; every route
    returns the same count.
    """

    hybrid: int = 45
    abstr: int = 8
    depth: int = 1
    answer_cap: int = 24
    wv_cap: int = 12
    abstraction_budget: int = 256

    def __post_init__(self):
        if not (self.hybrid >= self.abstr >= 0):
            raise ValueError("need hybrid >= abstr >= 0")
        if self.depth < 0:
            raise ValueError("depth threshold must be nonnegative")


@dataclass
class RunStats:
    """Observability record for one counting run."""

    primal_width: int = -1
    dp_width: int = -1
    dp_nodes: int = 0
    eats_size: int = 0
    abstraction_size: int = -1
    backend_calls: int = 0
    nested_calls: int = 0
    max_depth: int = 0

    def merge(self, other: "RunStats"):
        self.backend_calls += other.backend_calls
        self.nested_calls += other.nested_calls
        self.max_depth = max(self.max_depth, other.max_depth)


@dataclass
class _Ctx:
    thresholds: Thresholds
    backend: object
    heuristic: str
    seed: int
    stats: RunStats
    jobs: int = 1

    def task_copy(self) -> "_Ctx":
        return replace(self, stats=RunStats(), jobs=1)


def _element_true(el: Epistemic, tmask: int, fmask: int) -> bool:
    bit = 1 << el.literal.atom
    holds = (tmask & bit) if el.literal.positive else (fmask & bit)
    value = not holds
    if el.negated:
        value = not value
    return value


def _rows_ok(check_rules, tmask, fmask) -> bool:
    """No purely-epistemic rule reduces to a violated constraint."""
    for r in check_rules:
        if all(_element_true(el, tmask, fmask) for el in r.body):
            return False
    return True


# ---------------------------------------------------------------------------
# Plausible-WVI counting (tables over the epistemic primal graph)


def plausible_tables(program: Program, nice: NiceTD):
    """Run the plausible-counting table algorithm; returns node -> table.

    Tables map (true_mask, false_mask) row keys to counters.  At an
    introduce node only rules completed by the introduced atom need
    checking; earlier rows already satisfy the rest of the bag program.
    """
    info = classify_atoms(program)
    pe_by_atom: dict[int, list[Rule]] = {}
    for idx in info.purely_epistemic:
        r = program.rules[idx]
        for a in bits(r.eats_mask):
            pe_by_atom.setdefault(a, []).append(r)
    tables = {}
    for t in nice.postorder():
        kind = nice.kind[t]
        if kind == "leaf":
            tables[t] = {(0, 0): 1}
        elif kind == "intr":
            atom = nice.action[t][0]
            bit = 1 << atom
            bag_mask = mask_of(a for a, _tag in nice.bags[t])
            checks = [
                r for r in pe_by_atom.get(atom, ()) if r.eats_mask & ~bag_mask == 0
            ]
            out = {}
            for (tm, fm), c in tables[nice.children[t][0]].items():
                for nt, nf in ((tm, fm), (tm | bit, fm), (tm, fm | bit)):
                    if _rows_ok(checks, nt, nf):
                        out[(nt, nf)] = c
            tables[t] = out
        elif kind == "rem":
            atom = nice.action[t][0]
            keep = ~(1 << atom)
            out = {}
            for (tm, fm), c in tables[nice.children[t][0]].items():
                key = (tm & keep, fm & keep)
                out[key] = out.get(key, 0) + c
            tables[t] = out
        else:  # join
            left, right = (tables[c] for c in nice.children[t])
            tables[t] = {
                key: c1 * right[key] for key, c1 in left.items() if key in right
            }
    return tables


def count_plausible(program: Program, heuristic: str = "min-fill", seed: int = 0) -> int:
    """Number of plausible WVIs, by dynamic programming over a tree
    decomposition of the epistemic primal graph."""
    if any(r.ats_mask == 0 for r in program.rules):
        return 0  # a bare falsity constraint admits nothing
    info = classify_atoms(program)
    if info.eats_mask == 0:
        return 1
    nice = make_nice(build_td(epistemic_primal_graph(program), heuristic, seed))
    root_table = plausible_tables(program, nice)[nice.root]
    return sum(root_table.values())


# ---------------------------------------------------------------------------
# Abstraction choice


def choose_abstraction(
    a_mask: int,
    program: Program,
    target_width: int,
    budget: int = 256,
    seed: int = 0,
    heuristic: str = "min-fill",
) -> int:
    """Shrink the abstraction until its nested graph decomposes below the
    width target, greedily dropping the atom whose removal leaves the
    fewest edges, then greedily re-adding atoms that still fit.  The
    budget bounds candidate evaluations, keeping the search deterministic.
    """
    if a_mask == 0:
        return 0

    def width_of(mask):
        return build_td(nested_primal_graph(program, mask), heuristic, seed).width

    steps = 0
    cur = a_mask
    while cur.bit_count() > 1 and steps <= budget and width_of(cur) >= target_width:
        best_key = None
        best = cur
        for atom in bits(cur):
            cand = cur & ~(1 << atom)
            key = (nested_primal_graph(program, cand).edge_count(), atom)
            steps += 1
            if best_key is None or key < best_key:
                best_key, best = key, cand
        cur = best
    for atom in bits(a_mask & ~cur):
        if steps > budget:
            break
        cand = cur | (1 << atom)
        steps += 1
        if width_of(cand) < target_width:
            cur = cand
    return cur


# ---------------------------------------------------------------------------
# Nested counting


@dataclass
class _NodeData:
    bag_mask: int = 0
    checks: tuple = ()
    nested: tuple = ()  # rules verified by recursion at this node
    owned_mask: int = 0  # the node's nested bag atoms (owned components)
    query_extra: tuple = ()  # query constraints resolved at this node


def _prepare_nodes(program, a_mask, nice, query: Optional[WVI]):
    """Attach bag programs, delegated rules, and query constraints to the
    introduce nodes of a nice decomposition."""
    asg = assign_compatible_sets(program, a_mask, nice)
    comp_of_atom = {}
    for idx, atoms in enumerate(asg.components):
        for a in atoms:
            comp_of_atom[a] = idx
    nested_by_node: dict[int, list[Rule]] = {}
    for r in program.rules:
        anchor = r.aats_mask | (r.eats_mask & ~a_mask)
        if anchor == 0:
            continue  # lives entirely on bag atoms; plausibility checks cover it
        owner = asg.owner[comp_of_atom[next(bits(anchor))]]
        nested_by_node.setdefault(owner, []).append(r)
    pe_by_atom: dict[int, list[Rule]] = {}
    for r in program.rules:
        if r.purely_epistemic and r.eats_mask & ~a_mask == 0:
            for a in bits(r.eats_mask):
                pe_by_atom.setdefault(a, []).append(r)
    query_by_atom: dict[int, list[Rule]] = {}
    query_by_node: dict[int, list[Rule]] = {}
    if query is not None:
        for lit in query.decided_literals():
            if lit.positive:
                constraint = Rule((), (Epistemic(False, lit),))
            else:
                constraint = Rule((), (Epistemic(True, Literal(lit.atom, True)),))
            if a_mask & (1 << lit.atom):
                query_by_atom.setdefault(lit.atom, []).append(constraint)
            else:
                owner = asg.owner[comp_of_atom[lit.atom]]
                query_by_node.setdefault(owner, []).append(constraint)
    data = {}
    for t in nice.postorder():
        if nice.kind[t] != "intr":
            continue
        atom = nice.action[t][0]
        bag_mask = mask_of(a for a, _tag in nice.bags[t])
        data[t] = _NodeData(
            bag_mask=bag_mask,
            checks=tuple(
                r for r in pe_by_atom.get(atom, ()) if r.eats_mask & ~bag_mask == 0
            ),
            nested=tuple(nested_by_node.get(t, ())),
            owned_mask=asg.nested_bag_atoms.get(t, 0),
            query_extra=tuple(
                query_by_node.get(t, []) + query_by_atom.get(atom, [])
            ),
        )
    return data


def _verify_assumption(program: Program, assumption: WVI, ctx: _Ctx) -> int:
    """Base case: no epistemic decisions left.

    With every assumed atom decided, the single candidate world view is
    checked against the answer sets directly (existence plus agreement);
    undecided assumed atoms additionally require genuinely mixed answer
    sets, which the world-view existence check covers.
    """
    ctx.stats.backend_calls += 1
    if assumption.undecided == 0:
        ok = ctx.backend.as_exists(program) and ctx.backend.as_forbid_all(
            program, assumption
        )
    else:
        ok = ctx.backend.wv_exists(program, assumption)
    return 1 if ok else 0


def _nested_verify(depth, base_rules, extra, table, wvi, assumption, ctx):
    sub = epistemic_reduct(Program(table, base_rules + extra), wvi)
    if not sub.rules and assumption.domain == 0:
        return 1
    # An empty reduct still needs its assumption checked: literals whose
    # defining rules dropped out are underivable, so e.g. an assumed-true
    # atom must fail here rather than slip through.
    ctx.stats.nested_calls += 1
    return _nested_count(depth + 1, sub, assumption, ctx)


def _run_tables(depth, program, a_mask, assumption, query, ctx):
    """Dynamic programming over a nice decomposition of the nested primal
    graph; returns total count and, when a query is given, query count."""
    nice = make_nice(build_td(nested_primal_graph(program, a_mask), ctx.heuristic, ctx.seed))
    if depth == 0:
        ctx.stats.dp_width = nice.width
        ctx.stats.dp_nodes = nice.node_count
    data = _prepare_nodes(program, a_mask, nice, query)
    with_q = query is not None
    tables = {}
    for t in nice.postorder():
        kind = nice.kind[t]
        if kind == "leaf":
            tables[t] = {(0, 0): (1, 1)}
        elif kind == "intr":
            tables[t] = _intr_table(
                depth, program, data[t], nice.action[t][0],
                tables[nice.children[t][0]], assumption, with_q, ctx,
            )
        elif kind == "rem":
            keep = ~(1 << nice.action[t][0])
            out = {}
            for (tm, fm), (c, q) in tables[nice.children[t][0]].items():
                key = (tm & keep, fm & keep)
                oc, oq = out.get(key, (0, 0))
                out[key] = (oc + c, oq + q)
            tables[t] = out
        else:  # join
            left, right = (tables[c] for c in nice.children[t])
            out = {}
            for key, (c1, q1) in left.items():
                if key in right:
                    c2, q2 = right[key]
                    out[key] = (c1 * c2, q1 * q2)
            tables[t] = out
    root = tables[nice.root]
    total_c = sum(c for c, _q in root.values())
    total_q = sum(q for _c, q in root.values())
    return total_c, total_q


def _intr_table(depth, program, nd, atom, child, assumption, with_q, ctx):
    bit = 1 << atom
    guesses = []
    for (tm, fm), (c, q) in child.items():
        for nt, nf in ((tm, fm), (tm | bit, fm), (tm, fm | bit)):
            if _rows_ok(nd.checks, nt, nf):
                guesses.append(((nt, nf), c, q))

    def evaluate(entry, task_ctx):
        (nt, nf), c, q = entry
        wvi = WVI(nd.bag_mask, nt, nf)
        # The node answers for every atom it owns: decided ones must be
        # known in the nested world views, undecided ones genuinely open.
        sub_assumption = assumption.union(wvi).restrict(nd.owned_mask)
        mult = 1
        if nd.nested or sub_assumption.domain:
            mult = _nested_verify(
                depth, nd.nested, (), program.atoms, wvi, sub_assumption, task_ctx
            )
        c2 = c * mult
        if c2 == 0:
            return None
        if not with_q:
            return ((nt, nf), (c2, c2))
        if nd.query_extra:
            qmult = _nested_verify(
                depth, nd.nested, nd.query_extra, program.atoms, wvi,
                sub_assumption, task_ctx,
            )
        else:
            qmult = mult
        return ((nt, nf), (c2, q * qmult))

    if ctx.jobs > 1 and depth == 0 and nd.nested:
        task_ctxs = [ctx.task_copy() for _ in guesses]
        with ThreadPoolExecutor(max_workers=ctx.jobs) as pool:
            results = list(pool.map(evaluate, guesses, task_ctxs))
        for tc in task_ctxs:
            ctx.stats.merge(tc.stats)
    else:
        results = [evaluate(g, ctx) for g in guesses]
    return {key: val for item in results if item is not None for key, val in [item]}


def _nested_count(depth: int, program: Program, assumption: WVI, ctx: _Ctx) -> int:
    """Count the world views of ``program`` that agree exactly with the
    assumption on its domain."""
    ctx.stats.max_depth = max(ctx.stats.max_depth, depth)
    if any(r.ats_mask == 0 for r in program.rules):
        return 0  # a reduct left a bare falsity constraint: no answer sets
    info = classify_atoms(program)
    overlap = assumption.domain & info.eats_mask
    if overlap:
        # Assumptions about epistemic atoms fold into the program as
        # pinning constraints; the tables then only ever see assumptions
        # over objective atoms.
        program = with_wvi_constraints(program, assumption.restrict(overlap))
        assumption = assumption.restrict(~overlap)
    assert assumption.domain & info.eats_mask == 0
    # Assumed atoms no rule mentions anymore are underivable: a truth or
    # openness claim on them fails outright, a falsity claim is free.
    gone = assumption.domain & ~info.ats_mask
    if gone:
        if (assumption.true | assumption.undecided) & gone:
            return 0
        assumption = assumption.restrict(info.ats_mask)
    if info.eats_mask == 0:
        return _verify_assumption(program, assumption, ctx)
    thr = ctx.thresholds
    primal_td = build_td(primal_graph(program), ctx.heuristic, ctx.seed)
    if depth == 0:
        ctx.stats.primal_width = primal_td.width
        ctx.stats.eats_size = info.eats_mask.bit_count()
    if primal_td.width >= thr.hybrid or depth >= thr.depth:
        ctx.stats.backend_calls += 1
        return ctx.backend.count_wv(program, assumption)
    a_mask = info.eats_mask
    if primal_td.width >= thr.abstr:
        a_mask = choose_abstraction(
            a_mask, program, thr.abstr, thr.abstraction_budget, ctx.seed, ctx.heuristic
        )
    if depth == 0:
        ctx.stats.abstraction_size = a_mask.bit_count()
    total, _ = _run_tables(depth, program, a_mask, assumption, None, ctx)
    return total


def _make_ctx(thresholds, backend, heuristic, seed, stats, jobs):
    from .backends import InternalBackend

    thresholds = thresholds or Thresholds()
    if backend is None:
        backend = InternalBackend(thresholds.answer_cap, thresholds.wv_cap)
    return _Ctx(thresholds, backend, heuristic, seed, stats or RunStats(), jobs)


def count_world_views(
    program: Program,
    query: Optional[WVI] = None,
    thresholds: Optional[Thresholds] = None,
    backend=None,
    heuristic: str = "min-fill",
    seed: int = 0,
    jobs: int = 1,
    stats: Optional[RunStats] = None,
    assumption: WVI = EMPTY_WVI,
) -> int:
    """Number of world views agreeing with the query's decided literals.

    Queries fold into the program as epistemic constraints (positive
    literals must be known, negative ones must not be known true), after
    which the count is an unconditional world-view count.  An assumption
    WVI restricts the count to world views matching it exactly on its
    domain, undecidedness included.
    """
    ctx = _make_ctx(thresholds, backend, heuristic, seed, stats, jobs)
    target = program
    if query is not None and query.domain:
        target = with_query_constraints(program, query)
    return _nested_count(0, target, assumption, ctx)


def acceptance_probability(
    program: Program,
    query: WVI,
    thresholds: Optional[Thresholds] = None,
    backend=None,
    heuristic: str = "min-fill",
    seed: int = 0,
    jobs: int = 1,
    stats: Optional[RunStats] = None,
    assumption: WVI = EMPTY_WVI,
) -> Fraction:
    """Probability that a world view agrees with the query, as an exact
    fraction; both counters come from a single table pass."""
    ctx = _make_ctx(thresholds, backend, heuristic, seed, stats, jobs)
    ctx.stats.max_depth = 0
    info = classify_atoms(program)
    overlap = assumption.domain & info.eats_mask
    if overlap:
        program = with_wvi_constraints(program, assumption.restrict(overlap))
        assumption = assumption.restrict(~overlap)
    thr = ctx.thresholds
    if info.eats_mask == 0:
        c = _verify_assumption(program, assumption, ctx)
        if c == 0:
            raise NoWorldViews("program has no world views")
        ctx.stats.backend_calls += 1
        q = ctx.backend.count_wv(with_query_constraints(program, query), assumption)
        return Fraction(q, c)
    primal_td = build_td(primal_graph(program), ctx.heuristic, ctx.seed)
    ctx.stats.primal_width = primal_td.width
    ctx.stats.eats_size = info.eats_mask.bit_count()
    if primal_td.width >= thr.hybrid or 0 >= thr.depth:
        ctx.stats.backend_calls += 2
        c = ctx.backend.count_wv(program, assumption)
        if c == 0:
            raise NoWorldViews("program has no world views")
        q = ctx.backend.count_wv(with_query_constraints(program, query), assumption)
        return Fraction(q, c)
    a_mask = info.eats_mask
    if primal_td.width >= thr.abstr:
        a_mask = choose_abstraction(
            a_mask, program, thr.abstr, thr.abstraction_budget, ctx.seed, ctx.heuristic
        )
    ctx.stats.abstraction_size = a_mask.bit_count()
    total_c, total_q = _run_tables(0, program, a_mask, assumption, query, ctx)
    if total_c == 0:
        raise NoWorldViews("program has no world views")
    return Fraction(total_q, total_c)
