"""Finite relational structures, cycle-graph generators and automorphisms.

A structure has an ordered non-empty domain of named elements, named
relations of fixed arity, and named constants.  Structures are treated
as immutable after construction.  The model file format is line based::

    domain: a b c
    rel E/2: (a,b) (b,a)
    const c0 = a

Blank lines and ``#`` comments are ignored; element names must match
``[A-Za-z0-9_]+``.
"""

from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .report import COUNTEREXAMPLE, HOLDS, PropertyReport, Witness

_ELEMENT_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class Relation(NamedTuple):
    arity: int
    tuples: frozenset[tuple[str, ...]]


@dataclass
class Structure:
    domain: tuple[str, ...]
    relations: dict[str, Relation] = field(default_factory=dict)
    constants: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.domain = tuple(self.domain)
        if not self.domain:
            raise ValueError("domain must be non-empty")
        if len(set(self.domain)) != len(self.domain):
            raise ValueError("domain elements must be distinct")
        elems = set(self.domain)
        normalized = {}
        for name, rel in self.relations.items():
            arity, tuples = rel
            tuples = frozenset(tuple(t) for t in tuples)
            for t in tuples:
                if len(t) != arity:
                    raise ValueError(f"relation {name!r}: tuple {t} does not match arity {arity}")
                if not set(t) <= elems:
                    raise ValueError(f"relation {name!r}: tuple {t} mentions unknown elements")
            normalized[name] = Relation(arity, tuples)
        self.relations = normalized
        for name, value in self.constants.items():
            if value not in elems:
                raise ValueError(f"constant {name!r} maps to unknown element {value!r}")

    def with_relation(self, name: str, arity: int,
                      tuples: Iterable[tuple[str, ...]]) -> "Structure":
        relations = dict(self.relations)
        relations[name] = Relation(arity, frozenset(tuples))
        return Structure(self.domain, relations, dict(self.constants))

    def describe(self) -> str:
        rels = " ".join(f"{n}/{r.arity}" for n, r in sorted(self.relations.items()))
        return f"|M|={len(self.domain)}" + (f" {rels}" if rels else "")


# ---------------------------------------------------------------------------
# graph generators

def gen_cycle(length: int, symmetric: bool = True, prefix: str = "v",
              offset: int = 0) -> Structure:
    """Cycle graph on `length` vertices with a binary edge relation E."""
    if length < 2:
        raise ValueError("cycle length must be at least 2")
    names = tuple(f"{prefix}{offset + i}" for i in range(length))
    edges = set()
    for i in range(length):
        a, b = names[i], names[(i + 1) % length]
        edges.add((a, b))
        if symmetric:
            edges.add((b, a))
    return Structure(names, {"E": Relation(2, frozenset(edges))})


def gen_two_cycles(n: int) -> Structure:
    """Disjoint union of two symmetric cycles, each of length 2**(n+1)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    half = 2 ** (n + 1)
    first = gen_cycle(half, symmetric=True)
    second = gen_cycle(half, symmetric=True, offset=half)
    domain = first.domain + second.domain
    edges = first.relations["E"].tuples | second.relations["E"].tuples
    return Structure(domain, {"E": Relation(2, edges)})


def gen_single_cycle(n: int) -> Structure:
    """One symmetric cycle of length 2**(n+2); same domain size as gen_two_cycles(n)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return gen_cycle(2 ** (n + 2), symmetric=True)


def is_connected(structure: Structure, rel: str = "E") -> bool:
    """Whether the undirected closure of a binary relation spans the domain."""
    relation = structure.relations.get(rel)
    if relation is None:
        raise ValueError(f"unknown relation {rel!r}")
    if relation.arity != 2:
        raise ValueError(f"relation {rel!r} is not binary")
    adjacency: dict[str, set[str]] = {v: set() for v in structure.domain}
    for a, b in relation.tuples:
        adjacency[a].add(b)
        adjacency[b].add(a)
    seen = {structure.domain[0]}
    frontier = [structure.domain[0]]
    while frontier:
        node = frontier.pop()
        for nxt in adjacency[node]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen) == len(structure.domain)


# ---------------------------------------------------------------------------
# permutations and automorphisms

@dataclass(frozen=True)
class Permutation:
    domain: tuple[str, ...]
    images: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.domain) != sorted(self.images) or len(self.domain) != len(self.images):
            raise ValueError("not a permutation of the domain")

    @classmethod
    def identity(cls, domain: Sequence[str]) -> "Permutation":
        return cls(tuple(domain), tuple(domain))

    def __call__(self, element: str) -> str:
        return self.images[self.domain.index(element)]

    def apply_row(self, row: tuple[str, ...]) -> tuple[str, ...]:
        return tuple(self(x) for x in row)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(x) == self(other(x))."""
        return Permutation(self.domain, tuple(self(other(d)) for d in self.domain))

    def inverse(self) -> "Permutation":
        back = {img: dom for dom, img in zip(self.domain, self.images)}
        return Permutation(self.domain, tuple(back[d] for d in self.domain))

    def is_identity(self) -> bool:
        return self.domain == self.images

    def __str__(self) -> str:
        return " ".join(f"{a}->{b}" for a, b in zip(self.domain, self.images))


def is_automorphism(structure: Structure, perm: Permutation) -> bool:
    if tuple(perm.domain) != structure.domain:
        return False
    for value in structure.constants.values():
        if perm(value) != value:
            return False
    # forward preservation of a finite relation under a bijection implies equality
    for rel in structure.relations.values():
        for t in rel.tuples:
            if perm.apply_row(t) not in rel.tuples:
                return False
    return True


def automorphisms(structure: Structure, max_domain: int = 8) -> list[Permutation]:
    """All automorphisms, in lexicographic image order (identity first)."""
    n = len(structure.domain)
    if n > max_domain:
        raise ValueError(f"domain too large for factorial search ({n} > {max_domain})")
    found = []
    for images in itertools.permutations(structure.domain):
        perm = Permutation(structure.domain, images)
        if is_automorphism(structure, perm):
            found.append(perm)
    return found


def check_magma_hypothesis(structure: Structure,
                           perms: Sequence[Permutation]) -> PropertyReport:
    """Check that perms form a unitary magma of automorphisms in which,
    for every ordered pair of distinct points, some member fixes the
    first and moves the second."""
    for perm in perms:
        if not is_automorphism(structure, perm):
            raise ValueError(f"not an automorphism: {perm}")
    universe = f"structure {structure.describe()}, |F|={len(perms)}"
    pool = set(perms)
    if not any(p.is_identity() for p in perms):
        return PropertyReport("magma-hypothesis", COUNTEREXAMPLE, universe,
                              "identity map missing",
                              Witness(structure=structure, note="no identity"))
    for f in perms:
        for g in perms:
            if f.compose(g) not in pool:
                return PropertyReport(
                    "magma-hypothesis", COUNTEREXAMPLE, universe,
                    f"not closed under composition: ({f}) after ({g})",
                    Witness(structure=structure, note=f"composition of {f} after {g}"))
    for m1 in structure.domain:
        for m2 in structure.domain:
            if m1 == m2:
                continue
            if not any(p(m1) == m1 and p(m2) != m2 for p in perms):
                return PropertyReport(
                    "magma-hypothesis", COUNTEREXAMPLE, universe,
                    f"no member fixes {m1} while moving {m2}",
                    Witness(structure=structure, note=f"pair ({m1}, {m2})"))
    return PropertyReport("magma-hypothesis", HOLDS, universe)


# ---------------------------------------------------------------------------
# model files

def parse_model(text: str) -> Structure:
    domain: tuple[str, ...] | None = None
    relations: dict[str, Relation] = {}
    constants: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("domain:"):
            names = line[len("domain:"):].split()
            for name in names:
                if not _ELEMENT_RE.match(name):
                    raise ValueError(f"line {lineno}: bad element name {name!r}")
            domain = tuple(names)
        elif line.startswith("rel "):
            head, _, rest = line[len("rel "):].partition(":")
            name, _, arity_text = head.strip().partition("/")
            if not name or not arity_text.isdigit():
                raise ValueError(f"line {lineno}: expected 'rel NAME/ARITY: ...'")
            arity = int(arity_text)
            tuples = set()
            for group in re.findall(r"\(([^()]*)\)", rest):
                entries = tuple(e.strip() for e in group.split(",")) if group.strip() else ()
                if len(entries) != arity:
                    raise ValueError(f"line {lineno}: tuple ({group}) does not have arity {arity}")
                tuples.add(entries)
            leftovers = re.sub(r"\([^()]*\)", "", rest).strip()
            if leftovers:
                raise ValueError(f"line {lineno}: unexpected text {leftovers!r}")
            relations[name.strip()] = Relation(arity, frozenset(tuples))
        elif line.startswith("const "):
            name, _, value = line[len("const "):].partition("=")
            name, value = name.strip(), value.strip()
            if not name or not value:
                raise ValueError(f"line {lineno}: expected 'const NAME = ELEMENT'")
            constants[name] = value
        else:
            raise ValueError(f"line {lineno}: unrecognized line {line!r}")
    if domain is None:
        raise ValueError("model file has no 'domain:' line")
    structure = Structure(domain, relations, constants)
    if len(structure.domain) == 1:
        warnings.warn("one-element domain: anonymity atoms are unsatisfiable on "
                      "non-empty teams there", stacklevel=2)
    return structure


def render_model(structure: Structure) -> str:
    lines = ["domain: " + " ".join(structure.domain)]
    for name in sorted(structure.relations):
        rel = structure.relations[name]
        body = " ".join("(" + ",".join(t) + ")" for t in sorted(rel.tuples))
        lines.append(f"rel {name}/{rel.arity}:" + (f" {body}" if body else ""))
    for name in sorted(structure.constants):
        lines.append(f"const {name} = {structure.constants[name]}")
    return "\n".join(lines) + "\n"
