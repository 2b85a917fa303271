"""Lazy level-indexed sequence families and their direct-limit behavior.

Colimit groups like B = sum of Z/p^k over all k have no finite
presentation, so nothing here materializes a limit: every query is
answered at a finite level, pushed along the connecting maps, and bounded
claims ("height at least h", "no compatible sections below depth d") carry
the probe depth in the result. The counterexample family has proven closed
forms for heights, which the certificate cross-checks against brute-force
divisibility search.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence, Union

from .arith import is_prime, vp
from .errors import (
    EvidenceError,
    InputError,
    PurityError,
    TowerInvalidError,
    UnsupportedError,
)
from .groups import (
    FgAbGroup,
    GroupElement,
    Homomorphism,
    direct_sum,
    element_order,
    is_isomorphism,
    kernel,
)
from .matrices import (
    IntMatrix,
    MatrixEquationSystem,
    block_diag,
    hstack,
    lattice_intersection,
    preimage_lattice,
    solve_integer_system,
    vstack,
)
from .sequences import (
    Section,
    ShortExactSequence,
    check_exact,
    section_exists,
    section_from_purity,
    section_from_retraction,
)
from .towers import KummerTower, LevelMaps, tower_split, validate_tower

__all__ = [
    "ColimitTower",
    "ColimitElement",
    "HeightProbe",
    "NoSectionCertificate",
    "CaseOneEvidence",
    "CaseTwoEvidence",
    "LimitSplitResult",
    "counterexample_tower",
    "stabilizing_tower",
    "divisible_tower",
    "level_sections",
    "colimit_order",
    "colimit_height",
    "section_compatibility_solvable",
    "limit_no_section_certificate",
    "limit_purity_witness",
    "direct_limit_split",
]

Position = Literal["A", "B", "C"]


class ColimitTower:
    """Levels produced on demand by callables, memoized thread-safely.

    seq_fn(k) yields the level-k sequence, maps_fn(k) the triple of maps
    from level k to k+1, for every k >= 1. The family tag drives
    family-specific shortcuts (closed-form heights, explicit sections);
    "user" towers get only the generic probes.
    """

    def __init__(self, p: int,
                 seq_fn: Callable[[int], ShortExactSequence],
                 maps_fn: Callable[[int], LevelMaps],
                 family: str = "user"):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        self.p = p
        self.family = family
        self._seq_fn = seq_fn
        self._maps_fn = maps_fn
        self._seqs: dict[int, ShortExactSequence] = {}
        self._maps: dict[int, LevelMaps] = {}
        self._lock = threading.RLock()

    def sequence(self, k: int) -> ShortExactSequence:
        if k < 1:
            raise InputError("levels are indexed from 1")
        with self._lock:
            if k not in self._seqs:
                self._seqs[k] = self._seq_fn(k)
            return self._seqs[k]

    def step(self, k: int) -> LevelMaps:
        """Maps from level k to level k+1."""
        if k < 1:
            raise InputError("levels are indexed from 1")
        with self._lock:
            if k not in self._maps:
                self._maps[k] = self._maps_fn(k)
            return self._maps[k]

    def prefix(self, n: int) -> KummerTower:
        """The first n levels as a concrete tower (shape only; validate

        separately — the counterexample family is deliberately not
        inclusion-shaped on the right)."""
        seqs = tuple(self.sequence(k) for k in range(1, n + 1))
        maps = tuple(self.step(k) for k in range(1, n))
        return KummerTower(self.p, seqs, maps)

    def group_at(self, level: int, position: Position) -> FgAbGroup:
        seq = self.sequence(level)
        return {"A": seq.A, "B": seq.B, "C": seq.C}[position]

    def element(self, level: int, position: Position,
                coords: Sequence[int]) -> "ColimitElement":
        value = self.group_at(level, position).element(tuple(coords))
        return ColimitElement(self, level, position, value).canonical()

    def __repr__(self) -> str:
        return f"ColimitTower(p={self.p}, family={self.family!r})"


@dataclass(frozen=True, eq=False)
class ColimitElement:
    """An element of a colimit column, represented at a finite level.

    (level k, x) and (level k+1, map(x)) denote the same colimit element;
    equality pushes both sides to a common level. canonical() descends to
    the smallest level that can represent the element.
    """

    tower: ColimitTower
    level: int
    position: Position
    value: GroupElement

    def __post_init__(self):
        if self.position not in ("A", "B", "C"):
            raise InputError(f"unknown column {self.position!r}")
        expected = self.tower.group_at(self.level, self.position)
        if self.value.group != expected:
            raise InputError("element does not belong to the level group")

    def _map_at(self, k: int) -> Homomorphism:
        lm = self.tower.step(k)
        return {"A": lm.alpha, "B": lm.beta, "C": lm.gamma}[self.position]

    def push(self, level: int) -> "ColimitElement":
        if level < self.level:
            raise InputError("can only push to a higher level")
        e = self
        while e.level < level:
            h = e._map_at(e.level)
            e = ColimitElement(e.tower, e.level + 1, e.position, h(e.value))
        return e

    def canonical(self) -> "ColimitElement":
        e = self
        while e.level > 1:
            h = e._map_at(e.level - 1)
            grp = e.value.group
            hint = int(grp.exponent) if grp.is_finite else None
            sol = solve_integer_system(h.matrix, e.value.coords,
                                       grp.relations, mod=hint)
            if sol is None:
                break
            e = ColimitElement(e.tower, e.level - 1, e.position,
                               h.source.element(sol))
        return e

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColimitElement):
            return NotImplemented
        if self.tower is not other.tower or self.position != other.position:
            return False
        lvl = max(self.level, other.level)
        return self.push(lvl).value == other.push(lvl).value

    def __bool__(self) -> bool:
        return bool(self.value)

    def __repr__(self) -> str:
        return (f"ColimitElement(level={self.level}, {self.position}, "
                f"{self.value.coords})")


# ---------------------------------------------------------------------------
# Built-in families
# ---------------------------------------------------------------------------


def counterexample_tower(p: int) -> ColimitTower:
    """The classical non-splitting family.

    B_n = Z/p x Z/p^2 x ... x Z/p^n with g_n(x_1..x_n) = sum p^(n-k) x_k
    into C_n = Z/p^n; the right-hand connecting map multiplies by p instead
    of including, which makes every element of the limit C infinitely
    divisible while the limit B has no infinitely divisible elements.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")

    def build(k: int) -> ShortExactSequence:
        b = FgAbGroup(k, IntMatrix.diagonal([p ** i for i in range(1, k + 1)]))
        c = FgAbGroup.cyclic(p ** k)
        g = Homomorphism(b, c, IntMatrix(
            1, k, tuple(p ** (k - i) for i in range(1, k + 1))))
        a, inc = kernel(g)
        return check_exact(inc, g)

    def maps_fn(k: int) -> LevelMaps:
        lo, hi = build(k), build(k + 1)
        psi = Homomorphism(lo.B, hi.B, vstack(
            IntMatrix.identity(k), IntMatrix.zeros(1, k)))
        eta = Homomorphism(lo.C, hi.C, IntMatrix.from_rows([[p]]))
        # phi is the restriction of psi to the kernels, solved columnwise
        cols = []
        for j in range(lo.A.generator_count):
            target = psi.matrix.apply(lo.f.matrix.col(j))
            sol = solve_integer_system(hi.f.matrix, target,
                                       hi.B.relations, mod=p ** (k + 1))
            if sol is None:
                raise InputError("psi does not preserve the kernel")
            cols.append(sol)
        ga = hi.A.generator_count
        phi = Homomorphism(lo.A, hi.A, IntMatrix(
            ga, lo.A.generator_count,
            tuple(cols[j][i] for i in range(ga)
                  for j in range(lo.A.generator_count))))
        if not (hi.f @ phi).same_map(psi @ lo.f):
            raise InputError("kernel restriction failed to commute")
        return LevelMaps(alpha=phi, beta=psi, gamma=eta)

    return ColimitTower(p, build, maps_fn, family="counterexample")


def stabilizing_tower(p: int, n0: int = 2) -> ColimitTower:
    """Split family whose C column stops growing at level n0 (case 2 shape)."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if n0 < 1:
        raise InputError("stabilization level must be at least 1")

    def build(k: int) -> ShortExactSequence:
        ds = direct_sum(FgAbGroup.cyclic(p),
                        FgAbGroup.cyclic(p ** min(k, n0)))
        return check_exact(ds.injections[0], ds.projections[1])

    def maps_fn(k: int) -> LevelMaps:
        lo, hi = build(k), build(k + 1)
        step = p if min(k + 1, n0) > min(k, n0) else 1
        gamma = Homomorphism(lo.C, hi.C, IntMatrix.from_rows([[step]]))
        alpha = Homomorphism(lo.A, hi.A, IntMatrix.identity(1))
        beta = Homomorphism(lo.B, hi.B,
                            IntMatrix.diagonal([1, step]))
        return LevelMaps(alpha=alpha, beta=beta, gamma=gamma)

    return ColimitTower(p, build, maps_fn, family="stabilizing")


def divisible_tower(p: int) -> ColimitTower:
    """Family whose A column has divisible limit Z(p^inf) (case 1 shape)."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")

    def build(k: int) -> ShortExactSequence:
        a = FgAbGroup.cyclic(p ** k)
        b = FgAbGroup.of_orders(p ** k, p)
        c = FgAbGroup.cyclic(p)
        f = Homomorphism(a, b, IntMatrix.from_rows([[1], [0]]))
        g = Homomorphism(b, c, IntMatrix.from_rows([[0, 1]]))
        return check_exact(f, g)

    def maps_fn(k: int) -> LevelMaps:
        lo, hi = build(k), build(k + 1)
        return LevelMaps(
            alpha=Homomorphism(lo.A, hi.A, IntMatrix.from_rows([[p]])),
            beta=Homomorphism(lo.B, hi.B, IntMatrix.diagonal([p, 1])),
            gamma=Homomorphism(lo.C, hi.C, IntMatrix.identity(1)),
        )

    return ColimitTower(p, build, maps_fn, family="divisible")


# ---------------------------------------------------------------------------
# Per-level queries
# ---------------------------------------------------------------------------


def level_sections(t: ColimitTower, n: int) -> Optional[Section]:
    """A section of g_n. Explicit for the counterexample family
    (the last coordinate maps onto the generator), solved generically
    otherwise."""
    seq = t.sequence(n)
    if t.family == "counterexample":
        col = IntMatrix(n, 1, (0,) * (n - 1) + (1,))
        return Section(seq, Homomorphism(seq.C, seq.B, col))
    return section_exists(seq)


def colimit_order(e: ColimitElement) -> Union[int, float]:
    """Order of the colimit element, computed at its own level."""
    return element_order(e.value)


@dataclass(frozen=True)
class HeightProbe:
    """Result of a p-divisibility probe.

    height: largest h certified; saturated: h reached the requested depth
    (the true height may be larger, or is known infinite for proven closed
    forms); exact: the value came from a closed form, not a bounded search.
    """

    height: int
    saturated: bool
    exact: bool


def _closed_form_height_b(e: ColimitElement, depth: int) -> HeightProbe:
    coords = e.value.coords
    if not any(coords):
        return HeightProbe(depth, True, True)
    h = min(vp(x, e.tower.p) for x in coords if x)
    return HeightProbe(h, h >= depth, True)


def _probe_height(e: ColimitElement, depth: int) -> HeightProbe:
    """Divisibility is preserved by pushing, so probing the top window
    level alone decides divisibility anywhere in the window."""
    top = e.push(e.level + depth)
    grp = top.value.group
    hint = int(grp.exponent) if grp.is_finite else None
    p = e.tower.p
    height = 0
    for h in range(depth, 0, -1):
        sol = solve_integer_system(
            IntMatrix.identity(grp.generator_count).scaled(p ** h),
            top.value.coords, grp.relations, mod=hint)
        if sol is not None:
            height = h
            break
    return HeightProbe(height, height >= depth, False)


def colimit_height(e: ColimitElement, depth: int) -> HeightProbe:
    """p-height of a colimit element, probed up to `depth` levels up.

    Counterexample family: closed forms (B: min valuation of the nonzero
    canonical coordinates, level-independent because the maps append
    zeros; C: every nonzero element is divisible arbitrarily far because
    the connecting map multiplies by p).
    """
    if depth < 0:
        raise InputError("depth must be nonnegative")
    if e.tower.family == "counterexample":
        if e.position == "B":
            return _closed_form_height_b(e, depth)
        if e.position == "C":
            return HeightProbe(depth, True, True)
    return _probe_height(e, depth)


# ---------------------------------------------------------------------------
# Purity of the limit sequence
# ---------------------------------------------------------------------------


def limit_purity_witness(t: ColimitTower, c: ColimitElement) -> ColimitElement:
    """Same-order preimage of c in the B column, at c's own level.

    The lift happens at level k where p^k = order(c): there every preimage
    under g_k automatically has order exactly p^k, and the connecting maps
    preserve it.
    """
    if c.position != "C" or c.tower is not t:
        raise InputError("witness requested for a non-C element")
    order = element_order(c.value)
    if order == math.inf:
        raise UnsupportedError("purity witnesses need finite order")
    order = int(order)
    if order == 1:
        return ColimitElement(t, c.level, "B", t.sequence(c.level).B.zero)
    k = vp(order, t.p)
    if t.p ** k != order or k > c.level:
        raise InputError(f"order {order} is not a p-power reachable at "
                         f"level {c.level}")
    chain = Homomorphism.identity(t.sequence(k).C)
    for j in range(k, c.level):
        chain = t.step(j).gamma @ chain
    tgt = t.sequence(c.level).C
    hint = int(tgt.exponent) if tgt.is_finite else None
    down = solve_integer_system(chain.matrix, c.value.coords,
                                tgt.relations, mod=hint)
    if down is None:
        raise PurityError("element does not come from its order level",
                          element=c.value)
    low_seq = t.sequence(k)
    hint_c = int(low_seq.C.exponent) if low_seq.C.is_finite else None
    lift = solve_integer_system(low_seq.g.matrix,
                                low_seq.C.element(down).coords,
                                low_seq.C.relations, mod=hint_c)
    assert lift is not None, "level maps are epimorphisms"
    y = ColimitElement(t, k, "B", low_seq.B.element(lift)).push(c.level)
    if element_order(y.value) != order:
        raise PurityError("level lift does not have the expected order",
                          element=c.value)
    if t.sequence(c.level).g(y.value) != c.value:
        raise PurityError("level lift does not map onto the element",
                          element=c.value)
    return y


# ---------------------------------------------------------------------------
# Non-splitting certificate for the counterexample family
# ---------------------------------------------------------------------------


def section_compatibility_solvable(t: ColimitTower, n: int) -> bool:
    """Does a pair of sections at levels n, n+1 commute with the maps?

    Solves for s_n, s_{n+1} with g∘s = id on both levels and
    s_{n+1}∘gamma_n = beta_n∘s_n, as one integer congruence system.
    """
    lo, hi = t.sequence(n), t.sequence(n + 1)
    lm = t.step(n)
    gb_lo, gc_lo = lo.B.generator_count, lo.C.generator_count
    gb_hi, gc_hi = hi.B.generator_count, hi.C.generator_count
    rb_lo, rc_lo = lo.B.relations, lo.C.relations
    rb_hi, rc_hi = hi.B.relations, hi.C.relations
    sys = MatrixEquationSystem()
    sys.add_unknown("Y", gb_lo, gc_lo)
    sys.add_unknown("X", gb_hi, gc_hi)
    sys.add_unknown("T1", rc_lo.cols, gc_lo)
    sys.add_unknown("T2", rc_hi.cols, gc_hi)
    sys.add_unknown("T3", rb_hi.cols, gc_lo)
    sys.add_unknown("WY", rb_lo.cols, rc_lo.cols)
    sys.add_unknown("WX", rb_hi.cols, rc_hi.cols)
    sys.add_equation([(lo.g.matrix, "Y", None), (rc_lo, "T1", None)],
                     IntMatrix.identity(gc_lo))
    sys.add_equation([(hi.g.matrix, "X", None), (rc_hi, "T2", None)],
                     IntMatrix.identity(gc_hi))
    sys.add_equation([(None, "X", lm.gamma.matrix),
                      (-lm.beta.matrix, "Y", None),
                      (rb_hi, "T3", None)],
                     IntMatrix.zeros(gb_hi, gc_lo))
    sys.add_equation([(None, "Y", rc_lo), (-rb_lo, "WY", None)],
                     IntMatrix.zeros(gb_lo, rc_lo.cols))
    sys.add_equation([(None, "X", rc_hi), (-rb_hi, "WX", None)],
                     IntMatrix.zeros(gb_hi, rc_hi.cols))
    mod = None
    exps = [g.exponent for g in (lo.B, lo.C, hi.B, hi.C)]
    if all(x != math.inf for x in exps):
        mod = math.lcm(*[int(x) for x in exps])
    return sys.solve(mod=mod) is not None


@dataclass(frozen=True)
class NoSectionCertificate:
    """Finite evidence that the limit sequence has no section.

    The designated order-p element of the limit C is divisible past any
    bound while every element of the limit B has finite height (closed
    form, cross-checked by exhaustive search at small levels); a section
    would transport the first property into the second. Independently, the
    per-level compatibility congruences are all unsolvable.
    """

    p: int
    depth: int
    divisibility_verified: bool
    heights_cross_checked: tuple[tuple[int, int], ...]
    compatibility: tuple[tuple[int, bool], ...]
    inference: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return (self.divisibility_verified
                and all(bad == 0 for _, bad in self.heights_cross_checked)
                and all(not solvable for _, solvable in self.compatibility))

    def __bool__(self) -> bool:
        return self.valid


def limit_no_section_certificate(t: ColimitTower,
                                 depth: int) -> NoSectionCertificate:
    if t.family != "counterexample":
        raise UnsupportedError(
            "the non-splitting certificate is defined for the "
            "counterexample family")
    if depth < 1:
        raise InputError("depth must be at least 1")
    p = t.p
    c1 = ColimitElement(t, 1, "C", t.sequence(1).C.generator(0))
    # brute-force the divisibility claim rather than citing the closed form
    pushed = c1.push(1 + depth)
    grp = pushed.value.group
    sol = solve_integer_system(
        IntMatrix.identity(grp.generator_count).scaled(p ** depth),
        pushed.value.coords, grp.relations, mod=int(grp.exponent))
    divisible = sol is not None
    cross = []
    for n in range(1, min(depth, 2) + 1):
        seq = t.sequence(n)
        bad = 0
        probe_depth = min(depth, 3)
        for x in seq.B.elements():
            e = ColimitElement(t, n, "B", x)
            closed = _closed_form_height_b(e, probe_depth)
            probe = _probe_height(e, probe_depth)
            if closed.height >= probe_depth:
                ok = probe.saturated
            else:
                ok = probe.height == closed.height and not probe.saturated
            if not ok:
                bad += 1
        cross.append((n, bad))
    compat = tuple((n, section_compatibility_solvable(t, n))
                   for n in range(1, depth + 1))
    inference = (
        f"every nonzero element of the limit C is divisible by p^h for "
        f"all h (verified here to h = {depth})",
        "every nonzero element of the limit B has finite height equal to "
        "the least valuation of its canonical coordinates",
        "a section would send an element of infinite height to an element "
        "of finite height while preserving divisibility; contradiction",
        f"independently, no pair of sections at adjacent levels commutes "
        f"with the connecting maps (checked for all levels up to {depth})",
    )
    return NoSectionCertificate(
        p=p, depth=depth, divisibility_verified=divisible,
        heights_cross_checked=tuple(cross), compatibility=compat,
        inference=inference)


# ---------------------------------------------------------------------------
# Direct-limit splitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CaseTwoEvidence:
    """The C column stabilizes: the right map at `level` is an isomorphism."""

    level: int


@dataclass(frozen=True)
class CaseOneEvidence:
    """A decomposition of the limit A column as divisible + bounded.

    pi_divisible[k-1]: A_k -> (Z/p^precision)^divisible_rank and
    pi_bounded[k-1]: A_k -> m_group form compatible cones that are jointly
    injective on every level up to `level`; f-images of the bounded-kernel
    generators must probe as divisible to `height_depth`.
    """

    level: int
    divisible_rank: int
    precision: int
    m_group: FgAbGroup
    pi_divisible: tuple[Homomorphism, ...]
    pi_bounded: tuple[Homomorphism, ...]
    height_depth: int = 3


@dataclass(frozen=True)
class LimitSplitResult:
    case: int
    level: int
    section: Section
    divisible_section: Optional[Section] = None
    bounded_section: Optional[Section] = None
    notes: tuple[str, ...] = ()


def _split_case_two(t: ColimitTower, ev: CaseTwoEvidence) -> LimitSplitResult:
    n = ev.level
    if n < 1:
        raise EvidenceError("stabilization level must be at least 1",
                            check="stabilization")
    gamma = t.step(n).gamma
    if not is_isomorphism(gamma):
        raise EvidenceError(
            f"C[p^{n + 1}] differs from C[p^{n}]: the right map at level "
            f"{n} is not an isomorphism", check="stabilization")
    prefix = t.prefix(n)
    report = validate_tower(prefix)
    if not report.valid:
        raise TowerInvalidError(
            "materialized prefix violates the tower hypotheses",
            report=report)
    s = tower_split(prefix)
    return LimitSplitResult(
        case=2, level=n, section=s,
        notes=(f"section of the level-{n} sequence reused as the limit "
               "section: all later C levels coincide",))


def _pushout(seq: ShortExactSequence, pi: Homomorphism):
    """Push the extension out along pi: A -> Q; returns (sequence, i, q)."""
    q_grp = pi.target
    gq, gb = q_grp.generator_count, seq.B.generator_count
    graph = vstack(pi.matrix, -seq.f.matrix)
    rel = hstack(block_diag(q_grp.relations, seq.B.relations), graph)
    pushed = FgAbGroup(gq + gb, rel)
    i = Homomorphism(q_grp, pushed,
                     vstack(IntMatrix.identity(gq), IntMatrix.zeros(gb, gq)))
    q = Homomorphism(seq.B, pushed,
                     vstack(IntMatrix.zeros(gq, gb), IntMatrix.identity(gb)))
    g = Homomorphism(pushed, seq.C,
                     hstack(IntMatrix.zeros(seq.C.generator_count, gq),
                            seq.g.matrix))
    return check_exact(i, g), i, q


def _split_case_one(t: ColimitTower, ev: CaseOneEvidence) -> LimitSplitResult:
    p, big_l, prec, d = t.p, ev.level, ev.precision, ev.divisible_rank
    if big_l < 1 or prec < 1 or d < 0:
        raise EvidenceError("level, precision and rank must be positive",
                            check="V1")
    if len(ev.pi_divisible) != big_l or len(ev.pi_bounded) != big_l:
        raise EvidenceError("need one projection pair per level",
                            check="V1")
    d_group = FgAbGroup(d, IntMatrix.identity(d).scaled(p ** prec))
    m_grp = ev.m_group
    if not m_grp.is_finite:
        raise EvidenceError("bounded part must be a finite group", check="V1")
    m_exp = int(m_grp.exponent)
    k0 = vp(m_exp, p) if m_exp > 1 else 0
    if p ** k0 != m_exp:
        raise EvidenceError("bounded part is not a p-group", check="V1")
    for k in range(1, big_l + 1):
        a_k = t.sequence(k).A
        pd, pm = ev.pi_divisible[k - 1], ev.pi_bounded[k - 1]
        if pd.source != a_k or pd.target != d_group:
            raise EvidenceError(
                f"divisible projection at level {k} has the wrong shape",
                check="V1")
        if pm.source != a_k or pm.target != m_grp:
            raise EvidenceError(
                f"bounded projection at level {k} has the wrong shape",
                check="V1")
    if k0 > big_l or prec < big_l:
        raise EvidenceError(
            f"window too small: need exp(M) = p^{k0} visible and precision "
            f">= {big_l}", check="V5")
    for k in range(1, big_l):
        alpha = t.step(k).alpha
        if not (ev.pi_divisible[k] @ alpha).same_map(ev.pi_divisible[k - 1]):
            raise EvidenceError(
                f"divisible projections do not form a cone at level {k}",
                check="V2")
        if not (ev.pi_bounded[k] @ alpha).same_map(ev.pi_bounded[k - 1]):
            raise EvidenceError(
                f"bounded projections do not form a cone at level {k}",
                check="V2")
    for k in range(1, big_l + 1):
        a_k = t.sequence(k).A
        ker_d = preimage_lattice(ev.pi_divisible[k - 1].matrix,
                                 d_group.relations)
        ker_m = preimage_lattice(ev.pi_bounded[k - 1].matrix,
                                 m_grp.relations)
        joint = lattice_intersection(ker_d, ker_m)
        for j in range(joint.cols):
            if not a_k.hermite.contains(joint.col(j)):
                raise EvidenceError(
                    f"projections are not jointly injective at level {k}: "
                    f"common kernel element {a_k.element(joint.col(j))!r}",
                    check="V3")
    top_seq = t.sequence(big_l)
    ker_m_top = preimage_lattice(ev.pi_bounded[big_l - 1].matrix,
                                 m_grp.relations)
    for j in range(ker_m_top.cols):
        a = top_seq.A.element(ker_m_top.col(j))
        if not a:
            continue
        image = ColimitElement(t, big_l, "B", top_seq.f(a))
        probe = colimit_height(image, ev.height_depth)
        if not probe.saturated:
            raise EvidenceError(
                f"claimed divisible-part element has finite height "
                f"{probe.height} < {ev.height_depth}: {a!r}", check="V4")
    report = validate_tower(t.prefix(big_l))
    if not report.valid:
        raise TowerInvalidError(
            "materialized prefix violates the tower hypotheses",
            report=report)

    pi_d = ev.pi_divisible[big_l - 1]
    pi_m = ev.pi_bounded[big_l - 1]
    gb = top_seq.B.generator_count
    ga = top_seq.A.generator_count
    ext = MatrixEquationSystem()
    ext.add_unknown("X", d, gb)
    ext.add_unknown("T", d_group.relations.cols, ga)
    ext.add_unknown("T2", d_group.relations.cols, top_seq.B.relations.cols)
    ext.add_equation([(None, "X", top_seq.f.matrix),
                      (d_group.relations, "T", None)], pi_d.matrix)
    ext.add_equation([(None, "X", top_seq.B.relations),
                      (d_group.relations, "T2", None)],
                     IntMatrix.zeros(d, top_seq.B.relations.cols))
    ext_sol = ext.solve(mod=p ** prec)
    if ext_sol is None:
        raise EvidenceError(
            "the divisible projection does not extend over f at this "
            "precision", check="extension")
    r_div = Homomorphism(top_seq.B, d_group, ext_sol["X"])
    assert (r_div @ top_seq.f).same_map(pi_d)

    s_div_seq, i_div, q_div = _pushout(top_seq, pi_d)
    retraction = Homomorphism(s_div_seq.B, d_group,
                              hstack(IntMatrix.identity(d), r_div.matrix))
    s_prime = section_from_retraction(s_div_seq, retraction)

    s_bnd_seq, i_bnd, q_bnd = _pushout(top_seq, pi_m)
    try:
        s_second = section_from_purity(s_bnd_seq)
    except PurityError as exc:
        raise EvidenceError(
            "the bounded pushout sequence is not pure; the decomposition "
            "evidence is false", check="bounded-split") from exc

    gc = top_seq.C.generator_count
    comb = MatrixEquationSystem()
    comb.add_unknown("X", gb, gc)
    comb.add_unknown("T1", s_div_seq.B.relations.cols, gc)
    comb.add_unknown("T2", s_bnd_seq.B.relations.cols, gc)
    comb.add_unknown("T3", top_seq.B.relations.cols, top_seq.C.relations.cols)
    comb.add_equation([(q_div.matrix, "X", None),
                       (s_div_seq.B.relations, "T1", None)],
                      s_prime.s.matrix)
    comb.add_equation([(q_bnd.matrix, "X", None),
                       (s_bnd_seq.B.relations, "T2", None)],
                      s_second.s.matrix)
    comb.add_equation([(None, "X", top_seq.C.relations),
                       (-top_seq.B.relations, "T3", None)],
                      IntMatrix.zeros(gb, top_seq.C.relations.cols))
    comb_sol = comb.solve(mod=p ** prec)
    if comb_sol is None:
        raise EvidenceError(
            "per-part sections do not glue over the pullback; evidence "
            "does not decompose A", check="combine")
    s = Section(top_seq, Homomorphism(top_seq.C, top_seq.B, comb_sol["X"]))
    return LimitSplitResult(
        case=1, level=big_l, section=s,
        divisible_section=s_prime, bounded_section=s_second,
        notes=(f"divisible part handled at precision p^{prec}, bounded "
               f"part of exponent p^{k0} split by purity",))


def direct_limit_split(t: ColimitTower,
                       evidence: Union[CaseOneEvidence, CaseTwoEvidence],
                       ) -> LimitSplitResult:
    """Split the limit sequence under one of the two supplied hypotheses.

    Case 2 (bounded C): verify stabilization, reuse a finite-level section.
    Case 1 (A = divisible + bounded): verify the supplied decomposition
    evidence (cones, joint injectivity, height saturation, window bounds),
    then split the two pushouts and glue. False evidence fails with the
    name of the violated check.
    """
    if isinstance(evidence, CaseTwoEvidence):
        return _split_case_two(t, evidence)
    if isinstance(evidence, CaseOneEvidence):
        return _split_case_one(t, evidence)
    raise InputError("evidence must describe case 1 or case 2")
