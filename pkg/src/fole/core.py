"""Finite foundations: type domains, signatures, tuples, and their morphisms.

Value atoms are plain strings compared by equality.  A tuple over a signature
is a Python tuple of atoms aligned with the signature's attribute order.
All values here are immutable after construction; every operation is a pure
function of its inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import InfomorphismViolation, SortMismatch, UnknownSort

Row = tuple  # tuple of value atoms, aligned with a Signature's attrs


@dataclass(frozen=True)
class Signature:
    """An ordered list of named attributes, each with a sort.

    Equality is order-sensitive: signatures are indexed families, not sets.
    """

    attrs: tuple[str, ...]
    sorts: tuple[str, ...]

    def __post_init__(self):
        if len(self.attrs) != len(self.sorts):
            raise ValueError("attrs and sorts must have equal length")
        if len(set(self.attrs)) != len(self.attrs):
            raise ValueError(f"duplicate attribute names in {self.attrs}")

    @staticmethod
    def of(pairs: Iterable[tuple[str, str]]) -> "Signature":
        pairs = list(pairs)
        return Signature(tuple(a for a, _ in pairs), tuple(s for _, s in pairs))

    def pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple(zip(self.attrs, self.sorts))

    def sort_of(self, attr: str) -> str:
        return self.sorts[self.position(attr)]

    def position(self, attr: str) -> int:
        return self.attrs.index(attr)

    def __len__(self) -> int:
        return len(self.attrs)

    def __str__(self) -> str:
        return "(" + ",".join(f"{a}:{s}" for a, s in self.pairs()) + ")"


@dataclass
class TypeDomain:
    """Sort-indexed finite value extents.

    The global value set is the union of the extents; extent enumeration
    order is insertion order and is significant for tuple enumeration.
    """

    sorts: tuple[str, ...]
    extents: dict[str, tuple[str, ...]]

    def __post_init__(self):
        self.sorts = tuple(self.sorts)
        self.extents = {x: tuple(vs) for x, vs in self.extents.items()}
        for x in self.sorts:
            self.extents.setdefault(x, ())
        for x in self.extents:
            if x not in self.sorts:
                raise UnknownSort(x)

    def extent(self, sort: str) -> tuple[str, ...]:
        if sort not in self.extents:
            raise UnknownSort(sort)
        return self.extents[sort]

    def values(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for x in self.sorts:
            for v in self.extents[x]:
                seen.setdefault(v)
        return tuple(seen)

    def intent(self, value: str) -> frozenset[str]:
        return frozenset(x for x in self.sorts if value in self.extents[x])


@dataclass(frozen=True)
class ClassificationReport:
    separated: bool
    extensional: bool
    disjoint: bool
    partitioned: bool
    pseudo_partitioned: bool
    special_instance: Optional[str] = None

    def __post_init__(self):
        assert not self.partitioned or self.disjoint
        assert not self.pseudo_partitioned or self.disjoint


def classify(td: TypeDomain) -> ClassificationReport:
    """Compute the classification flags by exhaustive extent comparison."""
    values = td.values()
    intents = {y: td.intent(y) for y in values}

    separated = all(
        intents[y] != intents[z]
        for y, z in itertools.combinations(values, 2)
    )
    ext = {x: frozenset(td.extents[x]) for x in td.sorts}
    extensional = all(
        ext[x] != ext[z] for x, z in itertools.combinations(td.sorts, 2)
    )
    disjoint = all(
        not (ext[x] & ext[z]) for x, z in itertools.combinations(td.sorts, 2)
    )
    unclassified = [y for y in values if not intents[y]]
    # The value universe is the union of extents, so unclassified values can
    # only arise if callers hand-construct a domain with a detached value;
    # with the stock constructor the list is always empty.
    partitioned = disjoint and not unclassified
    pseudo = disjoint and len(unclassified) == 1
    return ClassificationReport(
        separated=separated,
        extensional=extensional,
        disjoint=disjoint,
        partitioned=partitioned,
        pseudo_partitioned=pseudo,
        special_instance=unclassified[0] if pseudo else None,
    )


@dataclass(frozen=True)
class SignatureMorphism:
    """A sort-preserving reindexing from ``source`` attrs into ``target`` attrs."""

    source: Signature
    target: Signature
    mapping: tuple[tuple[str, str], ...]  # (source attr, target attr), in source order

    @staticmethod
    def of(source: Signature, target: Signature,
           mapping: Mapping[str, str]) -> "SignatureMorphism":
        return SignatureMorphism(
            source, target, tuple((a, mapping[a]) for a in source.attrs)
        )

    @staticmethod
    def identity(sig: Signature) -> "SignatureMorphism":
        return SignatureMorphism.of(sig, sig, {a: a for a in sig.attrs})

    @property
    def map(self) -> dict[str, str]:
        return dict(self.mapping)

    def apply(self, attr: str) -> str:
        for a, b in self.mapping:
            if a == attr:
                return b
        raise KeyError(attr)

    def then(self, other: "SignatureMorphism") -> "SignatureMorphism":
        """Diagrammatic composition: self then other."""
        if self.target != other.source:
            raise ValueError("morphisms are not composable")
        om = other.map
        return SignatureMorphism(
            self.source, other.target,
            tuple((a, om[b]) for a, b in self.mapping),
        )


def check_signature_morphism(h: SignatureMorphism) -> None:
    """Raise SortMismatch at the first index where sort preservation fails."""
    tgt = h.target
    for a, b in h.mapping:
        if b not in tgt.attrs:
            raise SortMismatch(a, "<target attribute>", b)
        if h.source.sort_of(a) != tgt.sort_of(b):
            raise SortMismatch(a, tgt.sort_of(b), h.source.sort_of(a))
    for a in h.source.attrs:
        if a not in dict(h.mapping):
            raise SortMismatch(a, "<mapped>", "<missing>")


def is_well_sorted(values: Row, sig: Signature, td: TypeDomain) -> bool:
    if len(values) != len(sig):
        return False
    return all(v in td.extent(s) for v, s in zip(values, sig.sorts))


def enumerate_tuples(sig: Signature, td: TypeDomain) -> list[Row]:
    """All well-sorted tuples over ``sig``, in lexicographic extent order."""
    extents = [td.extent(s) for s in sig.sorts]
    return [tuple(vs) for vs in itertools.product(*extents)]


def tuple_along(h: SignatureMorphism, values: Row) -> Row:
    """Precompose a tuple over ``h.target`` into one over ``h.source``."""
    tgt = h.target
    return tuple(values[tgt.position(b)] for _, b in h.mapping)


@dataclass(frozen=True)
class TypeDomainMorphism:
    """An infomorphism between type domains: sorts forward, values backward.

    ``sort_map`` sends source-domain sorts to target-domain sorts;
    ``value_map`` sends target-domain values to source-domain values.
    """

    sort_map: tuple[tuple[str, str], ...]
    value_map: tuple[tuple[str, str], ...]

    @staticmethod
    def of(sort_map: Mapping[str, str],
           value_map: Mapping[str, str]) -> "TypeDomainMorphism":
        return TypeDomainMorphism(tuple(sort_map.items()), tuple(value_map.items()))

    @staticmethod
    def identity(td: TypeDomain) -> "TypeDomainMorphism":
        return TypeDomainMorphism.of(
            {x: x for x in td.sorts}, {y: y for y in td.values()}
        )

    @property
    def f(self) -> dict[str, str]:
        return dict(self.sort_map)

    @property
    def g(self) -> dict[str, str]:
        return dict(self.value_map)

    def map_sort(self, sort: str) -> str:
        return self.f[sort]

    def map_value(self, value: str) -> str:
        return self.g[value]

    def map_row(self, values: Row) -> Row:
        g = self.g
        return tuple(g[v] for v in values)


def check_type_domain_morphism(m: TypeDomainMorphism,
                               a2: TypeDomain, a1: TypeDomain) -> None:
    """Check the infomorphism biconditional for every (sort, value) pair.

    ``m`` goes from ``a2`` to ``a1``: sorts of ``a2`` map into sorts of
    ``a1`` and values of ``a1`` map back into values of ``a2``.
    """
    f, g = m.f, m.g
    for x2 in a2.sorts:
        if x2 not in f:
            raise InfomorphismViolation(x2, "<any>", "sort map not total")
        if f[x2] not in a1.sorts:
            raise UnknownSort(f[x2])
    for y1 in a1.values():
        if y1 not in g:
            raise InfomorphismViolation("<any>", y1, "value map not total")
    for x2 in a2.sorts:
        for y1 in a1.values():
            left = g[y1] in a2.extent(x2)
            right = y1 in a1.extent(f[x2])
            if left and not right:
                raise InfomorphismViolation(x2, y1, "g(y) classified but y is not")
            if right and not left:
                raise InfomorphismViolation(x2, y1, "y classified but g(y) is not")
