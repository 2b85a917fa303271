"""Short exact sequences: exactness, purity, splitness, duality, ranks.

The constructive heart of the package: a pure sequence over a finite middle
group splits, and the section is assembled exactly the way the classical
proof does it (cyclic decomposition of C, one same-order lift per cyclic
generator).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import singledispatch
from typing import Optional, Sequence, Union

from .arith import crt_idempotents, divisors, factorint, prime_power_parts
from .errors import InputError, NotExactError, PurityError, UnsupportedError
from .groups import (
    FgAbGroup,
    GroupElement,
    Homomorphism,
    cokernel,
    direct_sum,
    element_order,
    image,
    kernel,
)
from .matrices import (
    IntMatrix,
    MatrixEquationSystem,
    block_diag,
    hermite_column_form,
    hstack,
    lattice_intersection,
    preimage_lattice,
    solve_integer_system,
)

__all__ = [
    "ShortExactSequence",
    "Section",
    "PurityCertificate",
    "PurityWitnessSet",
    "PrueferDecomposition",
    "check_exact",
    "is_pure",
    "pure_witness",
    "pruefer_decompose",
    "assemble_section",
    "section_exists",
    "section_from_purity",
    "pontryagin_dual",
    "double_dual_iso",
    "double_dual_inverse",
    "character_pairing",
    "dualize_sequence",
    "rank_m",
    "retraction_from_section",
    "section_from_retraction",
    "split_sequence",
]


@dataclass(frozen=True)
class ShortExactSequence:
    """0 -> A -f-> B -g-> C -> 0, all three exactness conditions checked."""

    f: Homomorphism
    g: Homomorphism
    certificate: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        f, g = self.f, self.g
        if f.target != g.source:
            raise InputError("maps do not compose: f.target differs from g.source")
        checks = []
        k, k_inc = kernel(f)
        if not k.is_trivial:
            wit = k_inc(_nontrivial_element(k))
            raise NotExactError("mono", "f has nontrivial kernel", witness=wit)
        checks.append("mono")
        cok, proj = cokernel(g)
        if not cok.is_trivial:
            for i in range(g.target.generator_count):
                if proj(g.target.generator(i)):
                    raise NotExactError(
                        "epi", "g is not surjective",
                        witness=g.target.generator(i))
            raise NotExactError("epi", "g is not surjective")
        checks.append("epi")
        comp = g @ f
        for j in range(comp.matrix.cols):
            if not g.target.hermite.contains(comp.matrix.col(j)):
                raise NotExactError(
                    "complex", "g∘f is nonzero",
                    witness=g.target.element(comp.matrix.col(j)))
        checks.append("complex")
        ker_lat = preimage_lattice(g.matrix, g.target.relations)
        im_lat = hermite_column_form(hstack(f.matrix, f.target.relations)).matrix
        for j in range(ker_lat.cols):
            vec = ker_lat.col(j)
            if not im_lat == hermite_column_form(hstack(im_lat, IntMatrix.column(vec))).matrix:
                raise NotExactError(
                    "middle", "kernel of g is larger than image of f",
                    witness=f.target.element(vec))
        checks.append("middle")
        object.__setattr__(self, "certificate", tuple(checks))

    @property
    def A(self) -> FgAbGroup:
        return self.f.source

    @property
    def B(self) -> FgAbGroup:
        return self.f.target

    @property
    def C(self) -> FgAbGroup:
        return self.g.target

    def __repr__(self) -> str:
        return f"SES<{self.A!r} -> {self.B!r} -> {self.C!r}>"


def _nontrivial_element(g: FgAbGroup) -> GroupElement:
    for i in range(g.generator_count):
        x = g.generator(i)
        if x:
            return x
    raise InputError("group is trivial")


def check_exact(f: Homomorphism, g: Homomorphism) -> ShortExactSequence:
    """Validate 0 -> A -> B -> C -> 0; NotExactError names the first failure."""
    return ShortExactSequence(f, g)


@dataclass(frozen=True)
class Section:
    """Right inverse of g, verified at construction."""

    seq: ShortExactSequence
    s: Homomorphism

    def __post_init__(self):
        if self.s.source != self.seq.C or self.s.target != self.seq.B:
            raise InputError("section must map C into B")
        if not (self.seq.g @ self.s).is_identity():
            raise InputError("not a section: g∘s is not the identity")

    def __call__(self, c: GroupElement) -> GroupElement:
        return self.s(c)


# ---------------------------------------------------------------------------
# Purity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PurityCertificate:
    """Outcome of the subgroup purity test nA = A ∩ nB.

    ``scope`` says which multipliers n were compared; when B has unbounded
    exponent only a caller-supplied finite list is checked and the verdict
    is relative to that list.
    """

    pure: bool
    scope: str
    comparisons: tuple[tuple[int, bool], ...]
    failure: Optional[GroupElement] = None

    def __bool__(self) -> bool:
        return self.pure


@dataclass(frozen=True)
class PurityWitnessSet:
    """Same-order lifts for a set of representative elements of C."""

    seq: ShortExactSequence
    witnesses: tuple[tuple[GroupElement, GroupElement], ...]
    scope: str

    def __post_init__(self):
        for c, b in self.witnesses:
            if self.seq.g(b) != c:
                raise InputError("witness does not lift its target")
            if element_order(b) != element_order(c):
                raise InputError("witness has the wrong order")


def _subgroup_lattice(cols: IntMatrix, ambient: FgAbGroup) -> IntMatrix:
    return hermite_column_form(hstack(cols, ambient.relations)).matrix


def is_pure(seq: ShortExactSequence,
            moduli: Optional[Sequence[int]] = None) -> PurityCertificate:
    """Subgroup purity criterion: nA = A ∩ nB for the relevant n.

    For bounded-exponent B the divisors of exp(B) are a complete test set
    (nB and nA only depend on gcd(n, exp B)). Otherwise the caller must
    supply moduli and the certificate says so.
    """
    b_group = seq.B
    if moduli is None:
        if not b_group.is_finite:
            raise UnsupportedError(
                "purity over a middle group of unbounded exponent needs an "
                "explicit moduli list")
        ns = divisors(int(b_group.exponent))
        scope = f"all n dividing exp(B) = {int(b_group.exponent)}"
    else:
        ns = sorted(set(int(n) for n in moduli))
        if any(n < 0 for n in ns):
            raise InputError("moduli must be nonnegative")
        scope = f"the supplied moduli {ns}"
    gb = b_group.generator_count
    fa = seq.f.matrix
    a_lat = _subgroup_lattice(fa, b_group)
    comparisons = []
    failed = False
    for n in ns:
        if n == 0:
            comparisons.append((0, True))
            continue
        n_a = _subgroup_lattice(fa.scaled(n), b_group)
        n_b = _subgroup_lattice(IntMatrix.identity(gb).scaled(n), b_group)
        inter = hermite_column_form(
            hstack(lattice_intersection(a_lat, n_b), b_group.relations)).matrix
        ok = n_a == inter
        comparisons.append((n, ok))
        if not ok:
            failed = True
    witness = None
    if failed and seq.C.is_finite:
        witness = _purity_failure_witness(seq)
    return PurityCertificate(pure=not failed, scope=scope,
                             comparisons=tuple(comparisons), failure=witness)


def _purity_failure_witness(seq: ShortExactSequence) -> Optional[GroupElement]:
    """An element of C with no same-order lift (exists whenever purity fails
    over a finite C: otherwise the cyclic-generator lifts would assemble
    into a section, and split sequences are pure)."""
    dec = pruefer_decompose(seq.C)
    for i in range(dec.iso.source.generator_count):
        c = dec.iso(dec.iso.source.generator(i))
        try:
            pure_witness(seq, c)
        except PurityError:
            return c
    return None


def pure_witness(seq: ShortExactSequence, c: GroupElement) -> GroupElement:
    """A lift b of c with the same order, or PurityError carrying c."""
    if c.group != seq.C:
        raise InputError("element does not belong to C")
    m = element_order(c)
    if m == math.inf:
        raise UnsupportedError("same-order lifts are only searched for "
                               "finite-order elements")
    m = int(m)
    hint = int(seq.B.exponent) if seq.B.is_finite else None
    b0 = solve_integer_system(seq.g.matrix, c.coords, seq.C.relations,
                              mod=_lift_mod(seq))
    if b0 is None:
        raise InputError("g is not surjective onto c")  # cannot happen: g epi
    ker_g = preimage_lattice(seq.g.matrix, seq.C.relations)
    target = tuple(-m * x for x in b0)
    t = solve_integer_system(ker_g.scaled(m), target, seq.B.relations, mod=hint)
    if t is None:
        raise PurityError(f"no lift of the same order {m}", element=c)
    coords = tuple(x + y for x, y in zip(b0, ker_g.apply(t)))
    b = seq.B.element(coords)
    assert element_order(b) == m
    return b


def _lift_mod(seq: ShortExactSequence) -> Optional[int]:
    if seq.B.is_finite and seq.C.is_finite:
        return math.lcm(int(seq.B.exponent), int(seq.C.exponent))
    return None


# ---------------------------------------------------------------------------
# Cyclic decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrueferDecomposition:
    """Mutually inverse isomorphisms with a direct sum of cyclic groups."""

    orders: tuple[int, ...]
    iso: Homomorphism
    inverse: Homomorphism

    def __post_init__(self):
        if not (self.inverse @ self.iso).is_identity():
            raise InputError("decomposition maps do not invert each other")
        if not (self.iso @ self.inverse).is_identity():
            raise InputError("decomposition maps do not invert each other")


def pruefer_decompose(g: FgAbGroup, primary: bool = False) -> PrueferDecomposition:
    """Explicit cyclic decomposition of a finite group.

    Default emits the invariant-factor form (d_1 | d_2 | ...); with
    ``primary`` each factor is refined into prime-power cyclic summands via
    Chinese-remainder idempotents, primes ascending within each factor.
    """
    if not g.is_finite:
        raise UnsupportedError("cyclic decomposition needs a finite group")
    simp = g.simplified
    orders = g.invariant_factors
    iso, inverse = simp.from_simple, simp.to_simple
    if not primary or all(len(factorint(d)) <= 1 for d in orders):
        return PrueferDecomposition(orders=orders, iso=iso, inverse=inverse)
    fine_orders: list[int] = []
    iso_blocks: list[IntMatrix] = []
    inv_blocks: list[IntMatrix] = []
    for d in orders:
        parts = prime_power_parts(d)
        fine_orders.extend(parts)
        if len(parts) == 1:
            iso_blocks.append(IntMatrix.identity(1))
            inv_blocks.append(IntMatrix.identity(1))
        else:
            idem = crt_idempotents(parts)
            iso_blocks.append(IntMatrix(1, len(parts), tuple(idem)))
            inv_blocks.append(IntMatrix(len(parts), 1, (1,) * len(parts)))
    fine = FgAbGroup(len(fine_orders), IntMatrix.diagonal(fine_orders))
    refine = Homomorphism(fine, simp.group, block_diag(*iso_blocks))
    unrefine = Homomorphism(simp.group, fine, block_diag(*inv_blocks))
    return PrueferDecomposition(
        orders=tuple(fine_orders),
        iso=iso @ refine,
        inverse=unrefine @ inverse,
    )


# ---------------------------------------------------------------------------
# Splitting
# ---------------------------------------------------------------------------


def split_sequence(a: FgAbGroup, c: FgAbGroup) -> ShortExactSequence:
    """The direct-sum sequence 0 -> A -> A ⊕ C -> C -> 0."""
    ds = direct_sum(a, c)
    return check_exact(ds.injections[0], ds.projections[1])


def section_exists(seq: ShortExactSequence) -> Optional[Section]:
    """A verified section of g, or None (a proof that none exists).

    One integer congruence system in the generator images: s must be
    well-defined on C's relators and satisfy g∘s = id. Solved over the
    simplified presentations of B and C, then transported back.
    """
    simp_b, simp_c = seq.B.simplified, seq.C.simplified
    g_s = (simp_c.to_simple @ seq.g) @ simp_b.from_simple
    sb, sc = simp_b.group, simp_c.group
    rb, rc = sb.relations, sc.relations
    gb, gc = sb.generator_count, sc.generator_count
    sys = MatrixEquationSystem()
    sys.add_unknown("X", gb, gc)
    sys.add_unknown("Y", rb.cols, rc.cols)
    sys.add_unknown("W", rc.cols, gc)
    sys.add_equation([(None, "X", rc), (-rb, "Y", None)],
                     IntMatrix.zeros(gb, rc.cols))
    sys.add_equation([(g_s.matrix, "X", None), (-rc, "W", None)],
                     IntMatrix.identity(gc))
    mod = None
    if sb.is_finite and sc.is_finite:
        mod = math.lcm(int(sb.exponent), int(sc.exponent))
    sol = sys.solve(mod=mod)
    if sol is None:
        return None
    s_simple = Homomorphism(sc, sb, sol["X"])
    s = (simp_b.from_simple @ s_simple) @ simp_c.to_simple
    return Section(seq, s)


def assemble_section(seq: ShortExactSequence, dec: PrueferDecomposition,
                     lifts: Sequence[GroupElement]) -> Section:
    """Section of g from one same-order lift per cyclic generator of C.

    lifts[i] must lie over dec.iso(e_i); order equality makes the assembled
    map well-defined, and the Section constructor re-verifies g∘s = id.
    """
    k = dec.iso.source.generator_count
    if len(lifts) != k:
        raise InputError("need exactly one lift per cyclic generator")
    gb = seq.B.generator_count
    wit = IntMatrix(gb, k, tuple(lifts[j].coords[i]
                                 for i in range(gb) for j in range(k)))
    return Section(seq, Homomorphism(seq.C, seq.B, wit @ dec.inverse.matrix))


def section_from_purity(seq: ShortExactSequence) -> Section:
    """Split a pure sequence constructively.

    Decompose C into cyclic summands, take one same-order lift per cyclic
    generator, and assemble; a non-pure input surfaces as PurityError from
    the witness search.
    """
    dec = pruefer_decompose(seq.C)
    lifts = [pure_witness(seq, dec.iso(dec.iso.source.generator(i)))
             for i in range(dec.iso.source.generator_count)]
    return assemble_section(seq, dec, lifts)


def retraction_from_section(seq: ShortExactSequence, s: Section) -> Homomorphism:
    """r: B -> A with r∘f = id, via r(b) = f⁻¹(b - s(g(b)))."""
    gb = seq.B.generator_count
    proj = IntMatrix.identity(gb) - s.s.matrix @ seq.g.matrix
    hint = int(seq.B.exponent) if seq.B.is_finite else None
    cols = []
    for j in range(gb):
        sol = solve_integer_system(seq.f.matrix, proj.col(j),
                                   seq.B.relations, mod=hint)
        if sol is None:
            raise InputError("b - s(g(b)) left the image of f")  # impossible
        cols.append(sol)
    ga = seq.A.generator_count
    mat = IntMatrix(ga, gb, tuple(cols[j][i] for i in range(ga) for j in range(gb)))
    r = Homomorphism(seq.B, seq.A, mat)
    if not (r @ seq.f).is_identity():
        raise InputError("retraction verification failed")
    return r


def section_from_retraction(seq: ShortExactSequence, r: Homomorphism) -> Section:
    """s(c) = b - f(r(b)) for any preimage b of c; independent of the choice."""
    if r.source != seq.B or r.target != seq.A:
        raise InputError("retraction must map B onto A")
    if not (r @ seq.f).is_identity():
        raise InputError("not a retraction: r∘f is not the identity")
    gc = seq.C.generator_count
    hint = _lift_mod(seq)
    fr = seq.f.matrix @ r.matrix
    cols = []
    for j in range(gc):
        b = solve_integer_system(seq.g.matrix, seq.C.generator(j).coords,
                                 seq.C.relations, mod=hint)
        if b is None:
            raise InputError("g is not surjective")  # impossible for a SES
        col = tuple(x - y for x, y in zip(b, fr.apply(b)))
        cols.append(col)
    gb = seq.B.generator_count
    mat = IntMatrix(gb, gc, tuple(cols[j][i] for i in range(gb) for j in range(gc)))
    return Section(seq, Homomorphism(seq.C, seq.B, mat))


# ---------------------------------------------------------------------------
# Pontryagin duality (finite groups)
# ---------------------------------------------------------------------------


def _dual_data(g: FgAbGroup) -> tuple[tuple[int, ...], IntMatrix, IntMatrix]:
    if not g.is_finite:
        raise UnsupportedError("Pontryagin duality implemented for finite groups")
    full = g._full_diagonal()
    return full, g.snf.U, g.snf.U_inv


@singledispatch
def pontryagin_dual(obj):
    """Dual group Hom(G, Q/Z) of a finite group, or dual of a homomorphism.

    The dual group is presented on coordinates relative to the SNF basis of
    the original: a character vector (c_i) pairs with x as
    sum c_i (Ux)_i / d_i mod 1.
    """
    raise InputError(f"cannot dualize {type(obj).__name__}")


@pontryagin_dual.register
def _(g: FgAbGroup) -> FgAbGroup:
    full, _, _ = _dual_data(g)
    return FgAbGroup(g.generator_count, IntMatrix.diagonal(full))


@pontryagin_dual.register
def _(h: Homomorphism) -> Homomorphism:
    src_full, src_u, src_uinv = _dual_data(h.source)
    tgt_full, tgt_u, _ = _dual_data(h.target)
    conj = tgt_u @ h.matrix @ src_uinv
    gs, gt = h.source.generator_count, h.target.generator_count
    entries = []
    for j in range(gs):
        for i in range(gt):
            num = src_full[j] * conj[i, j]
            if num % tgt_full[i]:
                raise InputError("dual matrix is not integral; "
                                 "source map was not well-defined")
            entries.append(num // tgt_full[i])
    mat = IntMatrix(gs, gt, tuple(entries))
    return Homomorphism(pontryagin_dual(h.target), pontryagin_dual(h.source), mat)


def character_pairing(chi: GroupElement, x: GroupElement) -> Fraction:
    """Value in Q/Z of a character against a group element, in [0, 1)."""
    dual = chi.group
    g = x.group
    if dual != pontryagin_dual(g):
        raise InputError("character group does not match the element's group")
    full, u, _ = _dual_data(g)
    ux = u.apply(x.coords)
    total = Fraction(0)
    for c, y, d in zip(chi.coords, ux, full):
        total += Fraction(c * y, d)
    return total - math.floor(total)


def double_dual_iso(g: FgAbGroup) -> Homomorphism:
    """Natural evaluation isomorphism G -> dual(dual(G))."""
    _, u, _ = _dual_data(g)
    return Homomorphism(g, pontryagin_dual(pontryagin_dual(g)), u)


def double_dual_inverse(g: FgAbGroup) -> Homomorphism:
    _, _, uinv = _dual_data(g)
    return Homomorphism(pontryagin_dual(pontryagin_dual(g)), g, uinv)


def dualize_sequence(seq: ShortExactSequence) -> ShortExactSequence:
    """0 -> dual(C) -> dual(B) -> dual(A) -> 0."""
    return check_exact(pontryagin_dual(seq.g), pontryagin_dual(seq.f))


# ---------------------------------------------------------------------------
# m-rank
# ---------------------------------------------------------------------------


def rank_m(g: FgAbGroup, m: int) -> int:
    """Largest r with a subgroup isomorphic to (Z/m)^r.

    For m = p^t this counts invariant factors with p-adic valuation >= t;
    composite m takes the minimum over its prime-power parts, since a copy
    of (Z/m)^r contains (Z/p^v)^r for every part and conversely.
    """
    if m < 2:
        raise InputError("rank is defined for m >= 2")
    if not g.is_finite:
        raise UnsupportedError("rank computed for finite groups")
    facts = g.invariant_factors
    best: Optional[int] = None
    for p, t in factorint(m).items():
        cnt = 0
        for d in facts:
            v = 0
            dd = d
            while dd % p == 0:
                dd //= p
                v += 1
            if v >= t:
                cnt += 1
        best = cnt if best is None else min(best, cnt)
    assert best is not None
    return best
