"""Finitely generated abelian groups given by integer presentations.

A group is Z^g modulo the column span of a relation matrix. Elements are
stored in a canonical reduced form (via the Hermite form of the relations),
so equality and hashing are structural. Homomorphisms carry a
well-definedness certificate checked at construction time.

Infinite groups (positive free rank) are first-class here; operations that
need finiteness say so and raise UnsupportedError otherwise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import InputError, UnsupportedError
from .matrices import (
    IntMatrix,
    MatrixEquationSystem,
    block_diag,
    hermite_column_form,
    hstack,
    preimage_lattice,
    smith_normal_form,
    solve_linear,
)

__all__ = [
    "FgAbGroup",
    "GroupElement",
    "Homomorphism",
    "DirectSum",
    "Simplified",
    "group_from_relations",
    "element_order",
    "kernel",
    "image",
    "cokernel",
    "direct_sum",
    "primary_component",
    "subgroup_generated",
    "hom_from_images",
    "multiplication_hom",
    "is_injective",
    "is_surjective",
    "is_isomorphism",
    "invert_isomorphism",
    "INFINITE",
]

# Additive order / group order of something with a free part.
INFINITE = math.inf


@dataclass(frozen=True)
class FgAbGroup:
    """Z^generator_count modulo the column span of ``relations``."""

    generator_count: int
    relations: IntMatrix

    def __post_init__(self):
        if self.generator_count < 0:
            raise InputError("negative generator count")
        if self.relations.rows != self.generator_count:
            raise InputError(
                f"relations have {self.relations.rows} rows, "
                f"expected {self.generator_count}"
            )

    # -- constructors ------------------------------------------------------

    @classmethod
    def free(cls, n: int) -> "FgAbGroup":
        return cls(n, IntMatrix.zeros(n, 0))

    @classmethod
    def cyclic(cls, m: int) -> "FgAbGroup":
        """Z/m for m >= 1, Z for m = 0."""
        if m < 0:
            raise InputError("cyclic order must be nonnegative")
        if m == 0:
            return cls.free(1)
        return cls(1, IntMatrix.from_rows([[m]]))

    @classmethod
    def of_orders(cls, *orders: int) -> "FgAbGroup":
        """Direct sum of cyclic groups of the given orders (0 means Z)."""
        cols = [IntMatrix.column([0] * i + [m] + [0] * (len(orders) - i - 1))
                for i, m in enumerate(orders) if m != 0]
        if not cols:
            return cls.free(len(orders))
        return cls(len(orders), hstack(*cols))

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls.free(0)

    # -- structure ---------------------------------------------------------

    @cached_property
    def snf(self):
        return smith_normal_form(self.relations)

    @cached_property
    def hermite(self):
        return hermite_column_form(self.relations)

    def _full_diagonal(self) -> tuple[int, ...]:
        """SNF diagonal padded with zeros up to generator_count."""
        diag = self.snf.diagonal
        return diag + (0,) * (self.generator_count - len(diag))

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(d for d in self.snf.diagonal if d > 1)

    @cached_property
    def free_rank(self) -> int:
        return self.generator_count - self.snf.rank

    @property
    def exponent(self) -> Union[int, float]:
        if self.free_rank:
            return INFINITE
        facts = self.invariant_factors
        return facts[-1] if facts else 1

    @property
    def order(self) -> Union[int, float]:
        if self.free_rank:
            return INFINITE
        return math.prod(self.invariant_factors)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @cached_property
    def simplified(self) -> "Simplified":
        """Isomorphic diagonal presentation with trivial summands dropped.

        Solving linear problems over the simplified presentation and
        transporting back is much cheaper than working with a raw relation
        matrix, and both transport maps here are exact mutual inverses.
        """
        g = self.generator_count
        dec = self.snf
        full = self._full_diagonal()
        keep = [i for i in range(g) if full[i] != 1]
        torsion = [full[i] for i in keep if full[i] != 0]
        # torsion indices precede free ones inside keep (zeros trail in SNF)
        rel = IntMatrix.diagonal(torsion, rows=len(keep), cols=len(torsion))
        simple = FgAbGroup(len(keep), rel)
        to_mat = dec.U.select(keep, range(g))
        from_mat = dec.U_inv.select(range(g), keep)
        return Simplified(
            group=simple,
            to_simple=Homomorphism(self, simple, to_mat),
            from_simple=Homomorphism(simple, self, from_mat),
        )

    # -- elements ----------------------------------------------------------

    def element(self, coords: Sequence[int]) -> "GroupElement":
        return GroupElement(self, tuple(int(x) for x in coords))

    @property
    def zero(self) -> "GroupElement":
        return self.element((0,) * self.generator_count)

    def generator(self, i: int) -> "GroupElement":
        if not 0 <= i < self.generator_count:
            raise InputError(f"no generator {i}")
        return self.element(tuple(int(j == i) for j in range(self.generator_count)))

    def generators(self) -> list["GroupElement"]:
        return [self.generator(i) for i in range(self.generator_count)]

    def elements(self) -> Iterator["GroupElement"]:
        """All elements, by canonical coordinates. Finite groups only."""
        if not self.is_finite:
            raise UnsupportedError("cannot enumerate an infinite group")
        h = self.hermite
        # finite <=> every row carries a pivot, so the canonical forms are
        # exactly the box of residues below the pivots
        ranges = [range(h.matrix[r, c]) for r, c in h.pivots]
        for combo in itertools.product(*ranges):
            yield GroupElement(self, tuple(combo))

    def contains_lattice_vector(self, vec: Sequence[int]) -> bool:
        """Whether an ambient integer vector lies in the relation lattice."""
        return self.hermite.contains(vec)

    def __repr__(self) -> str:
        inv = ",".join(str(d) for d in self.invariant_factors)
        parts = [f"Z/{d}" for d in self.invariant_factors]
        parts += ["Z"] * self.free_rank
        name = " + ".join(parts) if parts else "0"
        return f"FgAbGroup<{name}>"


@dataclass(frozen=True)
class GroupElement:
    """Element of an FgAbGroup in canonical reduced coordinates."""

    group: FgAbGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.generator_count:
            raise InputError(
                f"element has {len(self.coords)} coordinates, group has "
                f"{self.group.generator_count} generators"
            )
        reduced = self.group.hermite.reduce(self.coords)
        if reduced != self.coords:
            object.__setattr__(self, "coords", reduced)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._same_group(other)
        return GroupElement(self.group,
                            tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._same_group(other)
        return GroupElement(self.group,
                            tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __rmul__(self, k: int) -> "GroupElement":
        return GroupElement(self.group, tuple(k * a for a in self.coords))

    def __bool__(self) -> bool:
        return any(self.coords)

    def _same_group(self, other: "GroupElement") -> None:
        if self.group != other.group:
            raise InputError("elements of different groups")

    def order(self) -> Union[int, float]:
        dec = self.group.snf
        y = dec.U.apply(self.coords)
        full = self.group._full_diagonal()
        n = 1
        for d, yi in zip(full, y):
            if d == 0:
                if yi:
                    return INFINITE
            else:
                n = math.lcm(n, d // math.gcd(d, yi))
        return n


def element_order(x: GroupElement) -> Union[int, float]:
    """Least n > 0 with n*x = 0, or infinite."""
    return x.order()


@dataclass(frozen=True)
class Homomorphism:
    """Integer matrix on presentation generators, checked well-defined."""

    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.generator_count,
                                 self.source.generator_count):
            raise InputError(
                f"matrix is {self.matrix.rows}x{self.matrix.cols}, expected "
                f"{self.target.generator_count}x{self.source.generator_count}"
            )
        rel = self.source.relations
        herm = self.target.hermite
        for j in range(rel.cols):
            img = self.matrix.apply(rel.col(j))
            if not herm.contains(img):
                raise InputError(
                    f"not a homomorphism: relator {j} maps to {list(img)}, "
                    "which is nonzero in the target"
                )

    @classmethod
    def identity(cls, g: FgAbGroup) -> "Homomorphism":
        return cls(g, g, IntMatrix.identity(g.generator_count))

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> "Homomorphism":
        return cls(source, target,
                   IntMatrix.zeros(target.generator_count, source.generator_count))

    def __call__(self, x: GroupElement) -> GroupElement:
        if x.group != self.source:
            raise InputError("element does not belong to the source group")
        return self.target.element(self.matrix.apply(x.coords))

    def __matmul__(self, other: "Homomorphism") -> "Homomorphism":
        """Composition self ∘ other."""
        if other.target != self.source:
            raise InputError("homomorphisms do not compose")
        return Homomorphism(other.source, self.target, self.matrix @ other.matrix)

    def same_map(self, other: "Homomorphism") -> bool:
        """Equality as maps (matrices may differ by relations)."""
        if self.source != other.source or self.target != other.target:
            raise InputError("comparing maps between different groups")
        diff = self.matrix - other.matrix
        herm = self.target.hermite
        return all(herm.contains(diff.col(j)) for j in range(diff.cols))

    def is_identity(self) -> bool:
        return self.source == self.target and self.same_map(Homomorphism.identity(self.source))


def group_from_relations(g: int, relations: IntMatrix) -> FgAbGroup:
    return FgAbGroup(g, relations)


def hom_from_images(source: FgAbGroup, target: FgAbGroup,
                    images: Sequence[GroupElement]) -> Homomorphism:
    if len(images) != source.generator_count:
        raise InputError("one image per source generator required")
    cols = [list(x.coords) for x in images]
    mat = IntMatrix(target.generator_count, len(cols),
                    tuple(cols[j][i] for i in range(target.generator_count)
                          for j in range(len(cols))))
    return Homomorphism(source, target, mat)


def multiplication_hom(g: FgAbGroup, n: int) -> Homomorphism:
    return Homomorphism(g, g, IntMatrix.identity(g.generator_count).scaled(n))


# ---------------------------------------------------------------------------
# Subgroups, kernels, images, cokernels
# ---------------------------------------------------------------------------


def _lattice_subgroup(ambient: FgAbGroup, lattice: IntMatrix
                      ) -> tuple[FgAbGroup, Homomorphism]:
    """Subgroup P/L of ambient Z^g/L for a sublattice P containing L.

    ``lattice`` must be a Hermite basis whose span contains the ambient
    relation lattice; its columns become the subgroup generators.
    """
    rel = ambient.relations
    qcols = []
    for j in range(rel.cols):
        sol = solve_linear(lattice, rel.col(j))
        if sol is None:
            raise InputError("sublattice does not contain the relation lattice")
        qcols.append(sol)
    k = lattice.cols
    q = IntMatrix(k, len(qcols),
                  tuple(qcols[j][i] for i in range(k) for j in range(len(qcols))))
    sub = FgAbGroup(k, q)
    return sub, Homomorphism(sub, ambient, lattice)


def subgroup_generated(ambient: FgAbGroup, elements: Iterable[GroupElement]
                       ) -> tuple[FgAbGroup, Homomorphism]:
    """Subgroup generated by the given elements, with its inclusion."""
    cols = [IntMatrix.column(x.coords) for x in elements]
    lat = hermite_column_form(hstack(*cols, ambient.relations) if cols
                              else ambient.relations).matrix
    return _lattice_subgroup(ambient, lat)


def kernel(h: Homomorphism) -> tuple[FgAbGroup, Homomorphism]:
    """Kernel subgroup with its inclusion into the source."""
    lat = preimage_lattice(h.matrix, h.target.relations)
    return _lattice_subgroup(h.source, lat)


def image(h: Homomorphism) -> tuple[FgAbGroup, Homomorphism]:
    """Image subgroup with its inclusion into the target."""
    lat = hermite_column_form(hstack(h.matrix, h.target.relations)).matrix
    return _lattice_subgroup(h.target, lat)


def cokernel(h: Homomorphism) -> tuple[FgAbGroup, Homomorphism]:
    """Cokernel with the projection from the target."""
    coker = FgAbGroup(h.target.generator_count,
                      hstack(h.target.relations, h.matrix))
    proj = Homomorphism(h.target, coker,
                        IntMatrix.identity(h.target.generator_count))
    return coker, proj


def is_injective(h: Homomorphism) -> bool:
    k, _ = kernel(h)
    return k.is_trivial


def is_surjective(h: Homomorphism) -> bool:
    c, _ = cokernel(h)
    return c.is_trivial


def is_isomorphism(h: Homomorphism) -> bool:
    return is_injective(h) and is_surjective(h)


def invert_isomorphism(h: Homomorphism) -> Homomorphism:
    """Two-sided inverse of an isomorphism, found by one congruence solve."""
    gs, gt = h.source.generator_count, h.target.generator_count
    rs, rt = h.source.relations, h.target.relations
    sys = MatrixEquationSystem()
    sys.add_unknown("X", gs, gt)
    sys.add_unknown("Y", rs.cols, rt.cols)
    sys.add_unknown("W1", rs.cols, gs)
    sys.add_unknown("W2", rt.cols, gt)
    sys.add_equation([(None, "X", rt), (-rs, "Y", None)],
                     IntMatrix.zeros(gs, rt.cols))
    sys.add_equation([(None, "X", h.matrix), (-rs, "W1", None)],
                     IntMatrix.identity(gs))
    sys.add_equation([(h.matrix, "X", None), (-rt, "W2", None)],
                     IntMatrix.identity(gt))
    # all equations are congruences modulo the relation lattices, so for
    # finite groups the system may be solved with arithmetic modulo a
    # common exponent multiple instead of over Z (no coefficient swell)
    mod = None
    if h.source.is_finite and h.target.is_finite:
        mod = math.lcm(int(h.source.exponent), int(h.target.exponent))
    sol = sys.solve(mod=mod)
    if sol is None:
        raise InputError("homomorphism is not invertible")
    inv = Homomorphism(h.target, h.source, sol["X"])
    if not (inv @ h).is_identity() or not (h @ inv).is_identity():
        raise InputError("homomorphism is not invertible")
    return inv


# ---------------------------------------------------------------------------
# Direct sums and primary parts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DirectSum:
    group: FgAbGroup
    injections: tuple[Homomorphism, ...]
    projections: tuple[Homomorphism, ...]


def direct_sum(*summands: FgAbGroup) -> DirectSum:
    """Biproduct with canonical injections and projections."""
    total = sum(g.generator_count for g in summands)
    big = FgAbGroup(total, block_diag(*(g.relations for g in summands)))
    injections = []
    projections = []
    offset = 0
    for g in summands:
        n = g.generator_count
        inj = IntMatrix(total, n, tuple(int(i == offset + j)
                                        for i in range(total) for j in range(n)))
        proj = IntMatrix(n, total, tuple(int(offset + i == j)
                                         for i in range(n) for j in range(total)))
        injections.append(Homomorphism(g, big, inj))
        projections.append(Homomorphism(big, g, proj))
        offset += n
    return DirectSum(big, tuple(injections), tuple(projections))


def primary_component(g: FgAbGroup, p: int) -> tuple[FgAbGroup, Homomorphism]:
    """Subgroup of all elements of p-power order, with its inclusion."""
    from .arith import is_prime, vp

    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if not g.is_finite:
        raise UnsupportedError("primary component needs a finite group")
    order = int(g.order)
    if order == 1:
        return subgroup_generated(g, [])
    cofactor = order // p ** vp(order, p)
    gens = [cofactor * g.generator(i) for i in range(g.generator_count)]
    return subgroup_generated(g, gens)


@dataclass(frozen=True)
class Simplified:
    """Diagonal presentation of a group with exact transport isomorphisms.

    from_simple ∘ to_simple = id as maps; to_simple ∘ from_simple = id on
    the nose (matrix identity).
    """

    group: FgAbGroup
    to_simple: Homomorphism
    from_simple: Homomorphism
