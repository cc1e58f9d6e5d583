"""ELP semantics: reducts, answer sets, world views, and brute-force oracles.

The enumerative functions here are deliberately simple.  They serve as the
base-case solver of the nested dynamic programming engine and as ground
truth in tests, guarded by explicit size caps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import kernel
from .errors import BruteForceCapExceeded, NoWorldViews, NotPlainError
from .model import (
    EMPTY_WVI,
    Epistemic,
    Literal,
    Objective,
    Program,
    Rule,
    WVI,
    bits,
)


@dataclass(frozen=True)
class ProgramAtoms:
    """Atom classification of a program plus its purely-epistemic rules."""

    ats_mask: int
    eats_mask: int
    aats_mask: int
    purely_epistemic: tuple[int, ...]  # rule indices


def classify_atoms(program: Program) -> ProgramAtoms:
    ats = eats = aats = 0
    pure = []
    for idx, r in enumerate(program.rules):
        ats |= r.ats_mask
        eats |= r.eats_mask
        aats |= r.aats_mask
        if r.purely_epistemic:
            pure.append(idx)
    return ProgramAtoms(ats, eats, aats, tuple(pure))


def gl_reduct(program: Program, interpretation: int) -> Program:
    """Gelfond-Lifschitz reduct of a plain program under an interpretation mask."""
    if not program.is_plain:
        raise NotPlainError("GL reduct is defined for plain programs only")
    rules = []
    for r in program.rules:
        if r.neg_mask & interpretation:
            continue
        body = tuple(el for el in r.body if el.literal.positive)
        rules.append(Rule(r.head, body))
    return program.with_rules(rules)


def _compile_masks(rules, atom_list):
    remap = {atom: i for i, atom in enumerate(atom_list)}

    def local(mask):
        out = 0
        for a in bits(mask):
            out |= 1 << remap[a]
        return out

    heads = [local(r.head_mask) for r in rules]
    bpos = [local(r.pos_mask) for r in rules]
    bneg = [local(r.neg_mask) for r in rules]
    return heads, bpos, bneg


def _answer_sets_whole(program: Program) -> list[int]:
    """Single enumeration over all atoms, without component splitting."""
    if any(r.ats_mask == 0 for r in program.rules):
        return []  # a bare constraint has no model
    atom_list = sorted(bits(program.ats_mask))
    heads, bpos, bneg = _compile_masks(program.rules, atom_list)
    local_sets = kernel.answer_sets_masks(heads, bpos, bneg, len(atom_list))
    out = []
    for m in local_sets:
        g = 0
        for i in bits(m):
            g |= 1 << atom_list[i]
        out.append(g)
    out.sort()
    return out


def _components(program: Program):
    """Partition rules by atom connectivity; returns (atom_mask, rules) pairs."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for r in program.rules:
        atoms = list(bits(r.ats_mask))
        for a in atoms:
            parent.setdefault(a, a)
        for a in atoms[1:]:
            union(atoms[0], a)
    groups: dict[int, list[Rule]] = {}
    masks: dict[int, int] = {}
    for r in program.rules:
        root = find(next(bits(r.ats_mask)))
        groups.setdefault(root, []).append(r)
        masks[root] = masks.get(root, 0) | r.ats_mask
    return [(masks[k], groups[k]) for k in sorted(masks, key=lambda k: masks[k] & -masks[k])]


def answer_sets(program: Program, cap: int = 24) -> list[int]:
    """All answer sets of a plain program, as sorted interpretation masks.

    Disconnected parts of the program are enumerated separately and
    recombined; answer sets of a disjoint union are exactly the unions of
    per-part answer sets.  The cap bounds the total atom count.
    """
    if not program.is_plain:
        raise NotPlainError("answer sets are defined for plain programs only")
    n = program.ats_mask.bit_count()
    if n > cap:
        raise BruteForceCapExceeded(
            "answer-set enumeration over %d atoms exceeds cap %d" % (n, cap)
        )
    if any(r.ats_mask == 0 for r in program.rules):
        return []
    if not program.rules:
        return [0]
    result = [0]
    for mask, rules in _components(program):
        part = _answer_sets_whole(Program(program.atoms, tuple(rules)))
        if not part:
            return []
        result = [base | extra for base in result for extra in part]
    result.sort()
    return result


def epistemic_reduct(program: Program, wvi: WVI) -> Program:
    """Replace epistemic literals over the WVI's domain by their truth value.

    ``not l`` turns false when ``l`` is decided in the WVI and true
    otherwise; an outer classical negation flips that.  True elements drop
    from the body, false ones drop the whole rule.  Epistemic literals
    over atoms outside the domain are kept verbatim.
    """
    rules = []
    for r in program.rules:
        body = []
        dead = False
        for el in r.body:
            if isinstance(el, Epistemic) and (wvi.domain >> el.literal.atom) & 1:
                value = not wvi.holds(el.literal)
                if el.negated:
                    value = not value
                if value:
                    continue
                dead = True
                break
            body.append(el)
        if not dead:
            rules.append(Rule(r.head, tuple(body)))
    return program.with_rules(rules)


def with_wvi_constraints(program: Program, wvi: WVI) -> Program:
    """Adjoin constraints pinning a WVI: decided literals must be known,
    undecided domain atoms must stay possible both ways."""
    extra = []
    for lit in wvi.decided_literals():
        extra.append(Rule((), (Epistemic(False, lit),)))
    for atom in bits(wvi.undecided):
        extra.append(Rule((), (Epistemic(True, Literal(atom, False)),)))
        extra.append(Rule((), (Epistemic(True, Literal(atom, True)),)))
    return program.extended(extra)


def with_query_constraints(program: Program, query: WVI) -> Program:
    """Adjoin query constraints: positive literals must be known true,
    negative ones must not be known true (undecided is acceptable)."""
    extra = []
    for lit in query.decided_literals():
        if lit.positive:
            extra.append(Rule((), (Epistemic(False, lit),)))
        else:
            extra.append(Rule((), (Epistemic(True, Literal(lit.atom, True)),)))
    return program.extended(extra)


def check_compatibility(wvi: WVI, answer_set_masks) -> bool:
    """Compatibility of a WVI with a set of interpretations.

    Requires: the set is nonempty; true atoms occur in every member;
    false atoms in none; undecided domain atoms in some but not all.
    """
    sets = list(answer_set_masks)
    if not sets:
        return False
    and_mask = or_mask = sets[0]
    for m in sets[1:]:
        and_mask &= m
        or_mask |= m
    if wvi.true & ~and_mask:
        return False
    if wvi.false & or_mask:
        return False
    if wvi.undecided & ~(or_mask & ~and_mask):
        return False
    return True


def is_plausible(wvi: WVI, program: Program) -> bool:
    """True iff no purely-epistemic rule survives the reduct as a violated
    constraint.  The WVI must cover all epistemic atoms of the program."""
    for r in program.rules:
        if not r.purely_epistemic:
            continue
        if r.eats_mask & ~wvi.domain:
            raise ValueError("WVI domain must cover the epistemic atoms")
        violated = True
        for el in r.body:
            value = not wvi.holds(el.literal)
            if el.negated:
                value = not value
            if not value:
                violated = False
                break
        if violated:
            return False
    return True


def enumerate_world_views(
    program: Program, eats_cap: int = 12, atoms_cap: int = 24
) -> list[WVI]:
    """All world views of a program, by exhausting the 3^k guesses over its
    epistemic atoms.  Each guess extends uniquely to a WVI over all atoms
    via the answer sets of its epistemic reduct.

    The guess domain covers every epistemic atom, so a rule either dies in
    the reduct or keeps exactly its plain residue; rule survival compiles
    to four mask tests and answer sets are cached per survivor set.
    """
    info = classify_atoms(program)
    eats_list = sorted(bits(info.eats_mask))
    if len(eats_list) > eats_cap:
        raise BruteForceCapExceeded(
            "world-view enumeration over %d epistemic atoms exceeds cap %d"
            % (len(eats_list), eats_cap)
        )
    plain_rules = []
    ep_rules = []  # (kill_t, kill_f, need_t, need_f, residue)
    for r in program.rules:
        if r.eats_mask == 0:
            plain_rules.append(r)
            continue
        kill_t = kill_f = need_t = need_f = 0
        for el in r.body:
            if not isinstance(el, Epistemic):
                continue
            bit = 1 << el.literal.atom
            if el.negated:  # "- not l" is false unless l is decided
                if el.literal.positive:
                    need_t |= bit
                else:
                    need_f |= bit
            else:  # "not l" is false exactly when l is decided
                if el.literal.positive:
                    kill_t |= bit
                else:
                    kill_f |= bit
        residue = Rule(r.head, tuple(el for el in r.body if isinstance(el, Objective)))
        ep_rules.append((kill_t, kill_f, need_t, need_f, residue))
    rest = info.ats_mask & ~info.eats_mask
    cache: dict[int, list[int]] = {}
    out = []
    for choice in itertools.product((None, True, False), repeat=len(eats_list)):
        t = f = 0
        for atom, v in zip(eats_list, choice):
            if v is True:
                t |= 1 << atom
            elif v is False:
                f |= 1 << atom
        alive = 0
        bit = 1
        for kill_t, kill_f, need_t, need_f, _res in ep_rules:
            if not (t & kill_t or f & kill_f or need_t & ~t or need_f & ~f):
                alive |= bit
            bit <<= 1
        sets = cache.get(alive)
        if sets is None:
            kept = list(plain_rules)
            picked = alive
            for entry in ep_rules:
                if picked & 1:
                    kept.append(entry[4])
                picked >>= 1
            sets = answer_sets(Program(program.atoms, tuple(kept)), cap=atoms_cap)
            cache[alive] = sets
        if not sets:
            continue
        and_mask = or_mask = sets[0]
        for m in sets[1:]:
            and_mask &= m
            or_mask |= m
        full = WVI(info.ats_mask, t | (and_mask & rest), f | (rest & ~or_mask))
        if check_compatibility(full, sets):
            out.append(full)
    return out


def query_agrees(query: WVI, world_view: WVI) -> bool:
    """Query agreement: positive query atoms known true, negative ones not
    known true (they may be known false or undecided)."""
    return (query.true & ~world_view.true) == 0 and (query.false & world_view.true) == 0


def count_world_views_bruteforce(
    program: Program, query: WVI = EMPTY_WVI, eats_cap: int = 12, atoms_cap: int = 24
) -> int:
    wvs = enumerate_world_views(program, eats_cap, atoms_cap)
    return sum(1 for w in wvs if query_agrees(query, w))


def probability_bruteforce(
    program: Program, query: WVI = EMPTY_WVI, eats_cap: int = 12, atoms_cap: int = 24
) -> Fraction:
    wvs = enumerate_world_views(program, eats_cap, atoms_cap)
    total = len(wvs)
    if total == 0:
        raise NoWorldViews("program has no world views")
    matching = sum(1 for w in wvs if query_agrees(query, w))
    return Fraction(matching, total)


def cnf_to_elp(num_vars: int, clauses) -> Program:
    """Encode model counting of a 3-CNF as plausible-WVI counting.

    Variables become atoms ``x1..xn``; every variable contributes a
    constraint forcing it to be decided, every clause one forbidding all
    three literals to be unknown.  Clauses are DIMACS-style signed ints.
    """
    from .model import AtomTable

    table = AtomTable("x%d" % (i + 1) for i in range(num_vars))
    rules = []
    for v in range(num_vars):
        rules.append(
            Rule(
                (),
                (
                    Epistemic(False, Literal(v, True)),
                    Epistemic(False, Literal(v, False)),
                ),
            )
        )
    for clause in clauses:
        if len(clause) > 3:
            raise ValueError("clause with more than 3 literals")
        body = tuple(
            Epistemic(False, Literal(abs(l) - 1, l > 0)) for l in clause
        )
        rules.append(Rule((), body))
    return Program(table, tuple(rules))
