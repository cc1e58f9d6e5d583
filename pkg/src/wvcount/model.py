"""Core data model for ground epistemic logic programs.

Atoms are interned into dense integer ids, and atom sets are bitmasks over
those ids.  Masks keep reducts, compatibility checks and the dynamic
programming tables cheap even for instances with a few thousand atoms.
All model values are immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of a mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


class AtomTable:
    """Interning table mapping atom names to dense ids in first-occurrence order."""

    def __init__(self, names: Iterable[str] = ()):
        self.names: list[str] = []
        self.ids: dict[str, int] = {}
        for n in names:
            self.intern(n)

    def intern(self, name: str) -> int:
        idx = self.ids.get(name)
        if idx is None:
            idx = len(self.names)
            self.names.append(name)
            self.ids[name] = idx
        return idx

    def id(self, name: str) -> int:
        try:
            return self.ids[name]
        except KeyError:
            raise KeyError("unknown atom %r" % name) from None

    def name(self, idx: int) -> str:
        return self.names[idx]

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return name in self.ids

    def mask_to_names(self, mask: int) -> list[str]:
        return [self.names[i] for i in bits(mask)]


@dataclass(frozen=True, order=True)
class Literal:
    """An atom or its (classical) negation."""

    atom: int
    positive: bool = True

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def text(self, table: AtomTable) -> str:
        name = table.name(self.atom)
        return name if self.positive else "-" + name


@dataclass(frozen=True)
class Objective:
    """A plain body literal: positive atoms go to B+, negated ones to B-."""

    literal: Literal


@dataclass(frozen=True)
class Epistemic:
    """An epistemic body element.

    ``negated=False`` is the epistemic negation of ``literal`` itself
    ("not l"); ``negated=True`` is its classical complement ("- not l").
    The K/M surface forms desugar onto these two shapes.
    """

    negated: bool
    literal: Literal


BodyElement = Union[Objective, Epistemic]


@dataclass(frozen=True)
class Rule:
    """One ELP rule: disjunctive head plus a list of body elements.

    Head atoms are positive.  Within a single rule an atom is either
    objective or epistemic, never both; this keeps the per-rule split into
    epistemic atoms (``eats_mask``) and objective atoms (``aats_mask``)
    well defined.
    """

    head: tuple[int, ...]
    body: tuple[BodyElement, ...]

    head_mask: int = field(init=False, repr=False, compare=False, default=0)
    pos_mask: int = field(init=False, repr=False, compare=False, default=0)
    neg_mask: int = field(init=False, repr=False, compare=False, default=0)
    eats_mask: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(sorted(set(self.head))))
        object.__setattr__(self, "body", tuple(self.body))
        head_mask = mask_of(self.head)
        pos = neg = eats = 0
        for el in self.body:
            if isinstance(el, Objective):
                if el.literal.positive:
                    pos |= 1 << el.literal.atom
                else:
                    neg |= 1 << el.literal.atom
            else:
                eats |= 1 << el.literal.atom
        if (head_mask | pos | neg) & eats:
            raise ValueError(
                "atom used both objectively and epistemically in one rule"
            )
        object.__setattr__(self, "head_mask", head_mask)
        object.__setattr__(self, "pos_mask", pos)
        object.__setattr__(self, "neg_mask", neg)
        object.__setattr__(self, "eats_mask", eats)

    @property
    def ats_mask(self) -> int:
        return self.head_mask | self.pos_mask | self.neg_mask | self.eats_mask

    @property
    def aats_mask(self) -> int:
        return self.head_mask | self.pos_mask | self.neg_mask

    @property
    def purely_epistemic(self) -> bool:
        return self.aats_mask == 0

    @property
    def is_plain(self) -> bool:
        return self.eats_mask == 0


@dataclass(frozen=True, eq=False)
class Program:
    """A set of ELP rules over a shared atom table.

    Specializes to a plain program when no epistemic element occurs.
    Derived programs (reducts, adjunctions) share the atom table; atom
    sets are always computed from the current rules, not the table.
    """

    atoms: AtomTable
    rules: tuple[Rule, ...]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    @property
    def ats_mask(self) -> int:
        m = 0
        for r in self.rules:
            m |= r.ats_mask
        return m

    @property
    def eats_mask(self) -> int:
        m = 0
        for r in self.rules:
            m |= r.eats_mask
        return m

    @property
    def aats_mask(self) -> int:
        m = 0
        for r in self.rules:
            m |= r.aats_mask
        return m

    @property
    def is_plain(self) -> bool:
        return self.eats_mask == 0

    def with_rules(self, rules: Iterable[Rule]) -> "Program":
        return Program(self.atoms, tuple(rules))

    def extended(self, extra: Iterable[Rule]) -> "Program":
        return Program(self.atoms, self.rules + tuple(extra))


@dataclass(frozen=True)
class WVI:
    """A world view interpretation: a three-valued partial assignment.

    ``domain`` is the atom set the interpretation speaks about; ``true``
    and ``false`` are the decided literals.  A domain atom that is neither
    true nor false is undecided ("possible"), which is distinct from an
    atom outside the domain.
    """

    domain: int
    true: int = 0
    false: int = 0

    def __post_init__(self):
        if self.true & self.false:
            raise ValueError("inconsistent WVI: atom decided both ways")
        if (self.true | self.false) & ~self.domain:
            raise ValueError("decided literal outside WVI domain")

    @property
    def decided(self) -> int:
        return self.true | self.false

    @property
    def undecided(self) -> int:
        return self.domain & ~self.decided

    @property
    def fully_decided(self) -> bool:
        return self.undecided == 0

    def holds(self, lit: Literal) -> bool:
        bit = 1 << lit.atom
        return bool((self.true if lit.positive else self.false) & bit)

    def value(self, atom: int) -> Optional[bool]:
        bit = 1 << atom
        if self.true & bit:
            return True
        if self.false & bit:
            return False
        return None

    def assign(self, atom: int, value: Optional[bool]) -> "WVI":
        bit = 1 << atom
        t, f = self.true & ~bit, self.false & ~bit
        if value is True:
            t |= bit
        elif value is False:
            f |= bit
        return WVI(self.domain | bit, t, f)

    def restrict(self, mask: int) -> "WVI":
        return WVI(self.domain & mask, self.true & mask, self.false & mask)

    def union(self, other: "WVI") -> "WVI":
        """Combine two WVIs; raises on a conflicting decision."""
        if (self.true & other.false) or (self.false & other.true):
            raise ValueError("conflicting WVIs")
        return WVI(
            self.domain | other.domain,
            self.true | other.true,
            self.false | other.false,
        )

    def decided_literals(self) -> Iterator[Literal]:
        for atom in bits(self.decided):
            yield Literal(atom, bool(self.true & (1 << atom)))

    def text(self, table: AtomTable) -> str:
        """Decided literals in atom-id order, e.g. ``a -b -c d``."""
        return " ".join(l.text(table) for l in self.decided_literals())

    @staticmethod
    def from_literals(literals: Iterable[Literal], domain: int = 0) -> "WVI":
        t = f = 0
        for lit in literals:
            bit = 1 << lit.atom
            if lit.positive:
                t |= bit
            else:
                f |= bit
            domain |= bit
        return WVI(domain, t, f)


EMPTY_WVI = WVI(0, 0, 0)
