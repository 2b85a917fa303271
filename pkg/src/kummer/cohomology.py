"""Tate cohomology of finite cyclic groups acting on abelian groups.

A module here is a finitely generated abelian group with an automorphism
sigma of finite order d. Everything is computed from the two classical
endomorphisms N = 1 + sigma + ... + sigma^(d-1) and T = sigma - 1: the
Tate groups are the subquotients ker N / im T and ker T / im N, and
cohomology of a cyclic group is 2-periodic, so these two groups are the
whole story.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from .arith import is_prime, vp
from .errors import InputError, UnsupportedError
from .groups import (
    FgAbGroup,
    GroupElement,
    Homomorphism,
    cokernel,
    hom_from_images,
    kernel,
)
from .matrices import (
    IntMatrix,
    MatrixEquationSystem,
    hstack,
    solve_integer_system,
)
from .sequences import Section, ShortExactSequence, check_exact, section_exists

__all__ = [
    "CyclicGroupModule",
    "GModuleMap",
    "GModuleSequence",
    "Subquotient",
    "TateGroups",
    "tate_cohomology",
    "is_cohomologically_trivial",
    "equivariant_section_exists",
    "tate_model",
    "regular_module",
    "reduce_mod_p",
    "norm_hom",
    "ConnectingSequence",
    "les_multiplication_by_p",
    "regular_extension_fixture",
    "chris_verify",
    "ChrisReport",
]


@dataclass(frozen=True)
class CyclicGroupModule:
    """A finitely generated abelian group with an order-d automorphism."""

    d: int
    group: FgAbGroup
    sigma: Homomorphism

    def __post_init__(self):
        if self.d < 1:
            raise InputError("the acting group must have positive order")
        if self.sigma.source != self.group or self.sigma.target != self.group:
            raise InputError("sigma must be an endomorphism of the module")
        if not self.power(self.d).is_identity():
            raise InputError(f"sigma does not have order dividing {self.d}")

    def power(self, i: int) -> Homomorphism:
        out = Homomorphism.identity(self.group)
        for _ in range(i):
            out = self.sigma @ out
        return out

    @cached_property
    def norm(self) -> Homomorphism:
        """N = 1 + sigma + ... + sigma^(d-1)."""
        g = self.group.generator_count
        acc = IntMatrix.zeros(g, g)
        power = IntMatrix.identity(g)
        for _ in range(self.d):
            acc = acc + power
            power = self.sigma.matrix @ power
        return Homomorphism(self.group, self.group, acc)

    @cached_property
    def difference(self) -> Homomorphism:
        """T = sigma - 1; N and T annihilate each other."""
        g = self.group.generator_count
        return Homomorphism(self.group, self.group,
                            self.sigma.matrix - IntMatrix.identity(g))


@dataclass(frozen=True)
class GModuleMap:
    """Homomorphism commuting with the two sigma actions."""

    source: CyclicGroupModule
    target: CyclicGroupModule
    hom: Homomorphism

    def __post_init__(self):
        if self.source.d != self.target.d:
            raise InputError("modules are over different cyclic groups")
        if (self.hom.source != self.source.group
                or self.hom.target != self.target.group):
            raise InputError("map does not match the module groups")
        if not (self.hom @ self.source.sigma).same_map(
                self.target.sigma @ self.hom):
            raise InputError("map does not commute with the group action")

    def __call__(self, x: GroupElement) -> GroupElement:
        return self.hom(x)


@dataclass(frozen=True)
class GModuleSequence:
    """Short exact sequence of modules with equivariant maps."""

    f: GModuleMap
    g: GModuleMap
    sequence: ShortExactSequence = field(init=False, compare=False)

    def __post_init__(self):
        if self.f.target != self.g.source:
            raise InputError("maps do not share the middle module")
        object.__setattr__(self, "sequence",
                           check_exact(self.f.hom, self.g.hom))

    @property
    def A(self) -> CyclicGroupModule:
        return self.f.source

    @property
    def B(self) -> CyclicGroupModule:
        return self.f.target

    @property
    def C(self) -> CyclicGroupModule:
        return self.g.target


@dataclass(frozen=True)
class Subquotient:
    """A group of the form (subgroup of ambient) / (image inside it).

    class_of sends an ambient element lying in the subgroup to its class;
    representative picks an ambient element for a class. Round trips agree
    up to the divided-out image.
    """

    group: FgAbGroup
    ambient: FgAbGroup
    include: Homomorphism
    project: Homomorphism

    def class_of(self, x: GroupElement) -> GroupElement:
        if x.group != self.ambient:
            raise InputError("element does not live in the ambient group")
        hint = (int(self.ambient.exponent)
                if self.ambient.is_finite else None)
        sol = solve_integer_system(self.include.matrix, x.coords,
                                   self.ambient.relations, mod=hint)
        if sol is None:
            raise InputError("element does not lie in the numerator subgroup")
        return self.project(self.include.source.element(sol))

    def representative(self, q: GroupElement) -> GroupElement:
        if q.group != self.group:
            raise InputError("class does not live in this subquotient")
        hint = int(self.group.exponent) if self.group.is_finite else None
        sol = solve_integer_system(self.project.matrix, q.coords,
                                   self.group.relations, mod=hint)
        assert sol is not None, "projections are onto"
        return self.include(self.project.source.element(sol))


def _corestrict(h: Homomorphism, inc: Homomorphism) -> Homomorphism:
    """Factor h through a subgroup inclusion containing its image."""
    ambient = inc.target
    hint = int(ambient.exponent) if ambient.is_finite else None
    images = []
    for gen in h.source.generators():
        sol = solve_integer_system(inc.matrix, h(gen).coords,
                                   ambient.relations, mod=hint)
        if sol is None:
            raise InputError("map does not land in the subgroup")
        images.append(inc.source.element(sol))
    return hom_from_images(h.source, inc.source, images)


def _tate_subquotient(module: CyclicGroupModule, num: Homomorphism,
                      den: Homomorphism) -> Subquotient:
    sub, inc = kernel(num)
    den_into_sub = _corestrict(den, inc)
    quo, proj = cokernel(den_into_sub)
    return Subquotient(group=quo, ambient=module.group,
                       include=inc, project=proj)


@dataclass(frozen=True)
class TateGroups:
    """The Tate cohomology of a cyclic action, in degrees -1 through 2.

    Cohomology of a finite cyclic group is 2-periodic, so degree 1 is the
    same subquotient object as degree -1 and degree 2 the same as 0.
    """

    minus_one: Subquotient
    zero: Subquotient
    one: Subquotient
    two: Subquotient


def tate_cohomology(module: CyclicGroupModule) -> TateGroups:
    """Tate groups ker N / im T (odd degrees) and ker T / im N (even)."""
    minus_one = _tate_subquotient(module, module.norm, module.difference)
    zero = _tate_subquotient(module, module.difference, module.norm)
    return TateGroups(minus_one=minus_one, zero=zero,
                      one=minus_one, two=zero)


def is_cohomologically_trivial(module: CyclicGroupModule) -> bool:
    tate = tate_cohomology(module)
    return tate.minus_one.group.is_trivial and tate.zero.group.is_trivial


def equivariant_section_exists(seq: GModuleSequence,
                               p: int) -> Optional[GModuleMap]:
    """A section of g commuting with the action, for modules killed by p.

    Solved as one congruence system mod p: the section condition, its
    well-definedness, and the commuting condition. Sound because every
    relation lattice contains p times the standard lattice.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    for module in (seq.B, seq.C):
        exp = module.group.exponent
        if exp == math.inf or int(exp) not in (1, p):
            raise UnsupportedError(
                "equivariant splitting is only decided for modules killed "
                f"by {p}")
    b_grp, c_grp = seq.B.group, seq.C.group
    gb, gc = b_grp.generator_count, c_grp.generator_count
    rb, rc = b_grp.relations, c_grp.relations
    sys = MatrixEquationSystem()
    sys.add_unknown("X", gb, gc)
    sys.add_unknown("T1", rc.cols, gc)
    sys.add_unknown("T2", rb.cols, rc.cols)
    sys.add_unknown("T3", rb.cols, gc)
    sys.add_equation([(seq.g.hom.matrix, "X", None), (rc, "T1", None)],
                     IntMatrix.identity(gc))
    sys.add_equation([(None, "X", rc), (-rb, "T2", None)],
                     IntMatrix.zeros(gb, rc.cols))
    sys.add_equation([(None, "X", seq.C.sigma.matrix),
                      (-seq.B.sigma.matrix, "X", None),
                      (rb, "T3", None)],
                     IntMatrix.zeros(gb, gc))
    sol = sys.solve(mod=p)
    if sol is None:
        return None
    s_hom = Homomorphism(c_grp, b_grp, sol["X"])
    Section(seq.sequence, s_hom)
    return GModuleMap(seq.C, seq.B, s_hom)


def tate_model(p: int) -> CyclicGroupModule:
    """The free rank-p module on 1, sigma, ..., sigma^(p-2), N/p.

    This is the subgroup of the rational group ring generated by the
    integral ring and the divided norm; its two Tate groups are both
    cyclic of order p, which makes it the standard nontrivial test module.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    grp = FgAbGroup.free(p)
    cols: list[list[int]] = []
    for j in range(p - 2):
        cols.append([1 if i == j + 1 else 0 for i in range(p)])
    cols.append([-1] * (p - 1) + [p])
    cols.append([0] * (p - 1) + [1])
    sigma = Homomorphism(grp, grp, IntMatrix(
        p, p, tuple(cols[j][i] for i in range(p) for j in range(p))))
    return CyclicGroupModule(p, grp, sigma)


def regular_module(d: int) -> CyclicGroupModule:
    """The integral group ring of a cyclic group, sigma acting by shift."""
    if d < 1:
        raise InputError("the acting group must have positive order")
    grp = FgAbGroup.free(d)
    shift = IntMatrix(d, d, tuple(1 if i == (j + 1) % d else 0
                                  for i in range(d) for j in range(d)))
    return CyclicGroupModule(d, grp, Homomorphism(grp, grp, shift))


def reduce_mod_p(module: CyclicGroupModule, p: int) -> CyclicGroupModule:
    """The quotient module M/pM with the induced action."""
    if p < 2:
        raise InputError("modulus must be at least 2")
    g = module.group.generator_count
    quo = FgAbGroup(g, hstack(module.group.relations,
                              IntMatrix.identity(g).scaled(p)))
    sigma = Homomorphism(quo, quo, module.sigma.matrix)
    return CyclicGroupModule(module.d, quo, sigma)


def norm_hom(module: CyclicGroupModule) -> Homomorphism:
    return module.norm


@dataclass(frozen=True)
class ConnectingSequence:
    """0 -> ker N/im T of M -> same of M/p -> ker T/im N of M -> 0."""

    sequence: ShortExactSequence
    left: Subquotient
    middle: Subquotient
    right: Subquotient


def les_multiplication_by_p(module: CyclicGroupModule,
                            p: int) -> ConnectingSequence:
    """The six-term sequence of multiplication by p, collapsed to three.

    Needs the acting group to have order exactly p and the module to have
    no p-torsion; then multiplication by p is injective and the degree
    -1 and 0 rows assemble into a short exact sequence connecting M and
    M/p. The connecting map divides the norm of an integral lift by p.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if module.d != p:
        raise InputError("the acting group must have order exactly p")
    simp = module.group.simplified
    for i, d_i in enumerate(module.group.invariant_factors):
        if d_i % p == 0:
            coords = [0] * simp.group.generator_count
            coords[i] = d_i // p
            witness = simp.from_simple(simp.group.element(coords))
            raise InputError(
                f"module has p-torsion: {witness!r} has order {p}")
    tate = tate_cohomology(module)
    reduced = reduce_mod_p(module, p)
    tate_bar = tate_cohomology(reduced)
    h1, h1_bar, h2 = tate.minus_one, tate_bar.minus_one, tate.zero

    j_images = []
    for gen in h1.group.generators():
        rep = h1.representative(gen)
        j_images.append(h1_bar.class_of(reduced.group.element(rep.coords)))
    j = hom_from_images(h1.group, h1_bar.group, j_images)

    delta_images = []
    for gen in h1_bar.group.generators():
        rep = h1_bar.representative(gen)
        norm_of_lift = module.norm(module.group.element(rep.coords))
        g = module.group.generator_count
        sol = solve_integer_system(IntMatrix.identity(g).scaled(p),
                                   norm_of_lift.coords,
                                   module.group.relations)
        assert sol is not None, "norm of a mod-p cocycle is divisible by p"
        y = module.group.element(sol)
        assert not module.difference(y), "divided norm lies in ker T"
        delta_images.append(h2.class_of(y))
    delta = hom_from_images(h1_bar.group, h2.group, delta_images)

    return ConnectingSequence(sequence=check_exact(j, delta),
                              left=h1, middle=h1_bar, right=h2)


def regular_extension_fixture(p: int) -> GModuleSequence:
    """The mod-p augmentation sequence 0 -> J -> F_p[G] -> F_p -> 0.

    Splits as plain groups but never equivariantly: the fixed points of
    the middle are spanned by the all-ones vector, whose augmentation is
    p = 0, so no fixed element maps to 1.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    b_grp = FgAbGroup(p, IntMatrix.identity(p).scaled(p))
    shift = IntMatrix(p, p, tuple(1 if i == (j + 1) % p else 0
                                  for i in range(p) for j in range(p)))
    b_mod = CyclicGroupModule(p, b_grp, Homomorphism(b_grp, b_grp, shift))
    c_grp = FgAbGroup.cyclic(p)
    c_mod = CyclicGroupModule(p, c_grp, Homomorphism.identity(c_grp))
    aug = Homomorphism(b_grp, c_grp, IntMatrix(1, p, (1,) * p))
    a_grp, inc = kernel(aug)
    sigma_a = _corestrict(b_mod.sigma @ inc, inc)
    a_mod = CyclicGroupModule(p, a_grp, sigma_a)
    return GModuleSequence(f=GModuleMap(a_mod, b_mod, inc),
                           g=GModuleMap(b_mod, c_mod, aug))


@dataclass(frozen=True)
class ChrisReport:
    """Everything the mod-p splitting obstruction argument needs.

    The divided-norm module has both Tate groups of order p, its mod-p
    reduction has a rank-two degree -1 group, and the augmentation fixture
    splits plainly but not equivariantly. p = 2 falls outside the odd
    hypothesis; p_odd records that.
    """

    p: int
    p_odd: bool
    h1_invariants: tuple[int, ...]
    h2_invariants: tuple[int, ...]
    h1_mod_p_invariants: tuple[int, ...]
    les_exact: bool
    equivariant_section_found: bool
    plain_section_found: bool
    inference: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return (self.h1_invariants == (self.p,)
                and self.h2_invariants == (self.p,)
                and self.h1_mod_p_invariants == (self.p, self.p)
                and self.les_exact
                and not self.equivariant_section_found
                and self.plain_section_found)

    def __bool__(self) -> bool:
        return self.valid


def chris_verify(p: int) -> ChrisReport:
    """Run the whole mod-p obstruction computation for one prime."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    model = tate_model(p)
    tate = tate_cohomology(model)
    h1_inv = tate.minus_one.group.invariant_factors
    h2_inv = tate.zero.group.invariant_factors
    les = les_multiplication_by_p(model, p)
    middle_inv = les.middle.group.invariant_factors
    fixture = regular_extension_fixture(p)
    equivariant = equivariant_section_exists(fixture, p)
    plain = section_exists(fixture.sequence)
    inference = [
        f"both Tate groups of the divided-norm module are cyclic of "
        f"order {p}",
        f"the degree -1 Tate group of its mod-{p} reduction has invariant "
        f"factors {middle_inv}, strictly larger than either end",
        "the three-term sequence of multiplication by p is exact, so the "
        "middle cannot collapse onto one end",
        f"the augmentation fixture splits as plain groups but admits no "
        f"equivariant section mod {p}",
    ]
    if p == 2:
        inference.append("p = 2 is outside the odd-order hypothesis; "
                         "reported for information only")
    return ChrisReport(
        p=p, p_odd=p != 2,
        h1_invariants=h1_inv, h2_invariants=h2_inv,
        h1_mod_p_invariants=middle_inv,
        les_exact=True,
        equivariant_section_found=equivariant is not None,
        plain_section_found=plain is not None,
        inference=tuple(inference))
