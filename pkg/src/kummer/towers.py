"""Towers of p-power torsion exact sequences and their splittings.

A tower stacks sequences 0 -> A_k -> B_k -> C[p^k] -> 0 (level k killed by
p^k) with commuting maps upward and inclusion-shaped right-hand maps. The
top sequence of a valid tower is pure, hence splits; the construction here
follows the classical lifting argument level by level. Also included: the
dual (downward) variant split through Pontryagin duality, a sigma-model
generator producing genuine towers from integer matrices, and the Chinese
remainder assembly of per-prime sections.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Mapping, Optional

from .arith import is_prime, vp
from .errors import GlueError, InputError, TowerInvalidError
from .groups import (
    FgAbGroup,
    GroupElement,
    Homomorphism,
    cokernel,
    direct_sum,
    element_order,
    invert_isomorphism,
    kernel,
)
from .matrices import (
    IntMatrix,
    SmithDecomposition,
    block_diag,
    determinant,
    hermite_column_form,
    hstack,
    preimage_lattice,
    smith_normal_form,
    solve_integer_system,
)
from .sequences import (
    PrueferDecomposition,
    PurityWitnessSet,
    Section,
    ShortExactSequence,
    assemble_section,
    check_exact,
    double_dual_inverse,
    double_dual_iso,
    dualize_sequence,
    pontryagin_dual,
    pruefer_decompose,
    section_from_retraction,
)

__all__ = [
    "LevelMaps",
    "KummerTower",
    "CoKummerTower",
    "TowerViolation",
    "TowerReport",
    "validate_tower",
    "validate_co_tower",
    "tower_purity",
    "tower_split",
    "SigmaModel",
    "sigma_kummer_tower",
    "CrtGlue",
    "crt_split",
    "dual_tower",
    "dual_of_tower",
    "dual_tower_split",
]


@dataclass(frozen=True)
class LevelMaps:
    """Triple of maps connecting adjacent tower levels (A, B, C columns)."""

    alpha: Homomorphism
    beta: Homomorphism
    gamma: Homomorphism


def _check_chain(p: int, seqs: tuple, maps: tuple, upward: bool) -> None:
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    if not seqs:
        raise InputError("tower needs at least one level")
    if len(maps) != len(seqs) - 1:
        raise InputError("need exactly one map triple per adjacent level pair")
    for i, lm in enumerate(maps):
        lo, hi = seqs[i], seqs[i + 1]
        src, tgt = (lo, hi) if upward else (hi, lo)
        for h, slot, s_grp, t_grp in (
            (lm.alpha, "alpha", src.A, tgt.A),
            (lm.beta, "beta", src.B, tgt.B),
            (lm.gamma, "gamma", src.C, tgt.C),
        ):
            if h.source != s_grp or h.target != t_grp:
                raise InputError(
                    f"{slot} map between levels {i + 1} and {i + 2} has "
                    "mismatched presentation")


@dataclass(frozen=True)
class KummerTower:
    """Levels S_1..S_n with upward maps; right maps inclusion-shaped."""

    p: int
    seqs: tuple[ShortExactSequence, ...]
    maps: tuple[LevelMaps, ...]

    def __post_init__(self):
        _check_chain(self.p, self.seqs, self.maps, upward=True)

    @property
    def n(self) -> int:
        return len(self.seqs)

    @property
    def top(self) -> ShortExactSequence:
        return self.seqs[-1]

    @property
    def shared_c(self) -> FgAbGroup:
        return self.seqs[-1].C


@dataclass(frozen=True)
class CoKummerTower:
    """Levels S_1..S_n with downward maps; left maps surjection-shaped."""

    p: int
    seqs: tuple[ShortExactSequence, ...]
    maps: tuple[LevelMaps, ...]

    def __post_init__(self):
        _check_chain(self.p, self.seqs, self.maps, upward=False)

    @property
    def n(self) -> int:
        return len(self.seqs)

    @property
    def top(self) -> ShortExactSequence:
        return self.seqs[-1]


@dataclass(frozen=True)
class TowerViolation:
    level: int
    check: str
    message: str
    witness: Optional[GroupElement] = None


@dataclass(frozen=True)
class TowerReport:
    valid: bool
    violations: tuple[TowerViolation, ...]
    levels: int

    def __bool__(self) -> bool:
        return self.valid


def _torsion_violations(p: int, level: int,
                        seq: ShortExactSequence) -> list[TowerViolation]:
    # A embeds in B and C is a quotient, so checking B covers all three.
    bound = p ** level
    out = []
    exp = seq.B.exponent
    if exp == math.inf or bound % int(exp):
        wit = None
        for i in range(seq.B.generator_count):
            o = element_order(seq.B.generator(i))
            if o == math.inf or bound % int(o):
                wit = seq.B.generator(i)
                break
        out.append(TowerViolation(
            level, "torsion", f"B_{level} is not killed by p^{level}", wit))
    return out


def _square_violations(level: int, low: ShortExactSequence,
                       high: ShortExactSequence,
                       lm: LevelMaps, upward: bool) -> list[TowerViolation]:
    if upward:
        left = (lm.beta @ low.f, high.f @ lm.alpha)
        right = (lm.gamma @ low.g, high.g @ lm.beta)
    else:
        left = (low.f @ lm.alpha, lm.beta @ high.f)
        right = (low.g @ lm.beta, lm.gamma @ high.g)
    out = []
    for name, (one, two) in (("left square", left), ("right square", right)):
        if not one.same_map(two):
            wit = None
            for j in range(one.source.generator_count):
                x = one(one.source.generator(j))
                y = two(two.source.generator(j))
                if x != y:
                    wit = x - y
                    break
            out.append(TowerViolation(
                level, "square",
                f"{name} between levels {level} and {level + 1} does not "
                "commute", wit))
    return out


def _sub_lattice(ambient: FgAbGroup, cols: IntMatrix) -> IntMatrix:
    return hermite_column_form(hstack(cols, ambient.relations)).matrix


def _inclusion_violations(p: int, level: int,
                          gamma: Homomorphism) -> list[TowerViolation]:
    """gamma must be injective with image the p^level-torsion of its target."""
    out = []
    ker, inc = kernel(gamma)
    if not ker.is_trivial:
        for i in range(ker.generator_count):
            x = ker.generator(i)
            if x:
                out.append(TowerViolation(
                    level, "inclusion",
                    f"right map out of level {level} is not injective",
                    inc(x)))
                break
    tgt = gamma.target
    im = _sub_lattice(tgt, gamma.matrix)
    tors = preimage_lattice(
        IntMatrix.identity(tgt.generator_count).scaled(p ** level),
        tgt.relations)
    if im != tors:
        tors_h = hermite_column_form(tors)
        wit = None
        im_h = hermite_column_form(im)
        for j in range(tors.cols):
            if not im_h.contains(tors.col(j)):
                wit = tgt.element(tors.col(j))
                break
        if wit is None:
            for j in range(im.cols):
                if not tors_h.contains(im.col(j)):
                    wit = tgt.element(im.col(j))
                    break
        out.append(TowerViolation(
            level, "inclusion",
            f"right map out of level {level} does not have the "
            f"p^{level}-torsion subgroup as its image", wit))
    return out


def _surjection_violations(p: int, level: int,
                           alpha: Homomorphism) -> list[TowerViolation]:
    """alpha: A_{level+1} -> A_level must be onto with kernel p^level A_{level+1}."""
    out = []
    cok, proj = cokernel(alpha)
    if not cok.is_trivial:
        wit = None
        for i in range(alpha.target.generator_count):
            if proj(alpha.target.generator(i)):
                wit = alpha.target.generator(i)
                break
        out.append(TowerViolation(
            level, "surjection",
            f"left map into level {level} is not surjective", wit))
    src = alpha.source
    ker_lat = preimage_lattice(alpha.matrix, alpha.target.relations)
    scaled = _sub_lattice(
        src, IntMatrix.identity(src.generator_count).scaled(p ** level))
    if ker_lat != scaled:
        out.append(TowerViolation(
            level, "surjection",
            f"kernel of the left map into level {level} is not "
            f"p^{level} times the source", None))
    return out


def _collect(levels: int, jobs: Optional[int],
             job: Callable[[int], list[TowerViolation]]) -> list[TowerViolation]:
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(job, range(levels)))
    else:
        chunks = [job(i) for i in range(levels)]
    return [v for chunk in chunks for v in chunk]


def validate_tower(t: KummerTower, jobs: Optional[int] = None) -> TowerReport:
    """Report every splitting-hypothesis violation with level and witness.

    Exactness per level is intrinsic (sequences validate at construction);
    checked here: p^k-torsion, both commuting squares, and that each right
    map is the canonical inclusion (injective, image = p^k-torsion).
    """
    def job(i: int) -> list[TowerViolation]:
        level = i + 1
        out = _torsion_violations(t.p, level, t.seqs[i])
        if i + 1 < t.n:
            out.extend(_square_violations(level, t.seqs[i], t.seqs[i + 1],
                                          t.maps[i], upward=True))
            out.extend(_inclusion_violations(t.p, level, t.maps[i].gamma))
        return out

    violations = _collect(t.n, jobs, job)
    return TowerReport(valid=not violations, violations=tuple(violations),
                       levels=t.n)


def validate_co_tower(t: CoKummerTower,
                      jobs: Optional[int] = None) -> TowerReport:
    """Dual-shape validation: torsion, downward squares, surjective left maps."""
    def job(i: int) -> list[TowerViolation]:
        level = i + 1
        out = _torsion_violations(t.p, level, t.seqs[i])
        if i + 1 < t.n:
            out.extend(_square_violations(level, t.seqs[i], t.seqs[i + 1],
                                          t.maps[i], upward=False))
            out.extend(_surjection_violations(t.p, level, t.maps[i].alpha))
        return out

    violations = _collect(t.n, jobs, job)
    return TowerReport(valid=not violations, violations=tuple(violations),
                       levels=t.n)


def _require_valid(t: KummerTower) -> None:
    report = validate_tower(t)
    if not report.valid:
        raise TowerInvalidError("tower violates the splitting hypotheses",
                                report=report)


def _gamma_chain(t: KummerTower, lo: int, hi: int) -> Homomorphism:
    """Composite of the right maps from level lo up to level hi (1-based)."""
    comp = Homomorphism.identity(t.seqs[lo - 1].C)
    for j in range(lo - 1, hi - 1):
        comp = t.maps[j].gamma @ comp
    return comp


def _purity_lifts(t: KummerTower) -> tuple[PrueferDecomposition,
                                           list[tuple[GroupElement, GroupElement]]]:
    top = t.top
    dec = pruefer_decompose(top.C)
    p, n = t.p, t.n
    pairs: list[tuple[GroupElement, GroupElement]] = []
    for i, d in enumerate(dec.orders):
        c = dec.iso(dec.iso.source.generator(i))
        k = vp(d, p)
        if p ** k != d:
            raise TowerInvalidError(
                f"C[p^{n}] has a cyclic factor of order {d}, not a power "
                f"of {p}", report=None)
        chain = _gamma_chain(t, k, n)
        down = solve_integer_system(chain.matrix, c.coords,
                                    top.C.relations, mod=p ** n)
        assert down is not None, "torsion element missing from inclusion image"
        level_seq = t.seqs[k - 1]
        c_low = level_seq.C.element(down)
        lift = solve_integer_system(level_seq.g.matrix, c_low.coords,
                                    level_seq.C.relations, mod=p ** k)
        assert lift is not None, "g is surjective on every level"
        # any preimage works: B_k is killed by p^k, so the order is exactly p^k
        y = level_seq.B.element(lift)
        for j in range(k - 1, n - 1):
            y = t.maps[j].beta(y)
        pairs.append((c, y))
    return dec, pairs


def tower_purity(t: KummerTower) -> PurityWitnessSet:
    """Same-order lifts in B_n for the cyclic generators of C[p^n].

    Each generator of order p^k is pulled back to level k, lifted there
    (where every preimage already has the right order), and pushed up.
    """
    _require_valid(t)
    dec, pairs = _purity_lifts(t)
    return PurityWitnessSet(seq=t.top, witnesses=tuple(pairs),
                            scope=f"cyclic generators of C[p^{t.n}]")


def tower_split(t: KummerTower) -> Section:
    """Verified section of the top sequence of a valid tower."""
    _require_valid(t)
    dec, pairs = _purity_lifts(t)
    return assemble_section(t.top, dec, [y for _, y in pairs])


# ---------------------------------------------------------------------------
# Sigma models: towers from an integer matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SigmaModel:
    """Automorphism sigma of (Z(p^inf))^r encoded by an integer matrix M.

    The fixed-point functor of sigma has derived data readable from the
    Smith form of D = M - I: the finite part of the kernel has invariant
    p-valuations e_i, the divisible corank is the number of zero diagonal
    entries. gcd(det M, p) = 1 is what makes M invertible on p-power
    torsion.
    """

    p: int
    r: int
    M: IntMatrix

    def __post_init__(self):
        if not is_prime(self.p):
            raise InputError(f"{self.p} is not prime")
        if self.M.rows != self.r or self.M.cols != self.r:
            raise InputError("M must be square of size r")
        if math.gcd(determinant(self.M), self.p) != 1:
            raise InputError(
                "sigma is not an automorphism: det(M) is divisible by p")

    @cached_property
    def difference_smith(self) -> SmithDecomposition:
        return smith_normal_form(self.M - IntMatrix.identity(self.r))

    @property
    def corank(self) -> int:
        return self.r - self.difference_smith.rank

    @property
    def valuations(self) -> tuple[int, ...]:
        return tuple(vp(d, self.p)
                     for d in self.difference_smith.diagonal if d)

    @property
    def unit_parts(self) -> tuple[int, ...]:
        return tuple(d // self.p ** vp(d, self.p)
                     for d in self.difference_smith.diagonal if d)


def sigma_kummer_tower(model: SigmaModel, n: int) -> KummerTower:
    """Build the n-level tower of sigma fixed-point sequences.

    Level k: 0 -> H0/p^k -> coker(D on (Z/p^k)^r) -> (Z/p^k)^s -> 0 where
    H0 = sum of Z/p^{e_i} and s is the corank of D = M - I. All maps between
    levels are multiplication by p. Exactness and the tower axioms are
    verified, not assumed: each level goes through check_exact and the
    result passes validate_tower.
    """
    if n < 1:
        raise InputError("towers need at least one level")
    p, r = model.p, model.r
    dec = model.difference_smith
    rank = dec.rank
    s = model.corank
    es = model.valuations
    us = model.unit_parts
    d_mat = model.M - IntMatrix.identity(r)
    f_cols = IntMatrix(r, rank, tuple(
        us[i] * dec.U_inv[row, i] for row in range(r) for i in range(rank)))
    g_rows = dec.U.select(range(rank, r), range(r))
    seqs = []
    for k in range(1, n + 1):
        a_k = FgAbGroup(rank, IntMatrix.diagonal(
            [p ** min(e, k) for e in es]))
        b_k = FgAbGroup(r, hstack(d_mat, IntMatrix.identity(r).scaled(p ** k)))
        c_k = FgAbGroup(s, IntMatrix.identity(s).scaled(p ** k))
        f_k = Homomorphism(a_k, b_k, f_cols)
        g_k = Homomorphism(b_k, c_k, g_rows)
        seqs.append(check_exact(f_k, g_k))
    maps = []
    for k in range(n - 1):
        maps.append(LevelMaps(
            alpha=Homomorphism(seqs[k].A, seqs[k + 1].A,
                               IntMatrix.identity(rank).scaled(p)),
            beta=Homomorphism(seqs[k].B, seqs[k + 1].B,
                              IntMatrix.identity(r).scaled(p)),
            gamma=Homomorphism(seqs[k].C, seqs[k + 1].C,
                               IntMatrix.identity(s).scaled(p)),
        ))
    return KummerTower(p, tuple(seqs), tuple(maps))


# ---------------------------------------------------------------------------
# Chinese remainder assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrtGlue:
    """Glue data identifying a sequence with the sum of its primary parts.

    embeddings[i] = (p, a_p, b_p, c_p) embeds the top sequence of the
    p-tower into the glued sequence; jointly the embeddings must be
    direct-sum isomorphisms on each column.
    """

    seq: ShortExactSequence
    embeddings: tuple[tuple[int, Homomorphism, Homomorphism, Homomorphism], ...]

    def for_prime(self, p: int) -> tuple[Homomorphism, Homomorphism, Homomorphism]:
        for q, a, b, c in self.embeddings:
            if q == p:
                return a, b, c
        raise GlueError(f"no embedding supplied for p={p}", component=str(p))


def crt_split(m: int, towers: Mapping[int, KummerTower],
              glue: CrtGlue) -> Section:
    """Section of an m-torsion sequence from per-prime tower sections.

    Splits each p-part with tower_split and transports the direct sum of
    the sections along the glue isomorphisms. Raises GlueError naming the
    first inconsistent component.
    """
    from .arith import factorint

    fact = factorint(m)
    if set(fact) != set(towers):
        raise GlueError(
            f"towers given for primes {sorted(towers)} but m = {m} has "
            f"primes {sorted(fact)}", component="primes")
    primes = sorted(fact)
    for p in primes:
        if towers[p].n != fact[p]:
            raise GlueError(
                f"tower for p={p} has {towers[p].n} levels, expected "
                f"v_p(m) = {fact[p]}", component=f"level:{p}")
    tops = {p: towers[p].top for p in primes}
    for p in primes:
        a_p, b_p, c_p = glue.for_prime(p)
        top = tops[p]
        if (a_p.source != top.A or b_p.source != top.B
                or c_p.source != top.C or a_p.target != glue.seq.A
                or b_p.target != glue.seq.B or c_p.target != glue.seq.C):
            raise GlueError(f"embedding for p={p} connects the wrong groups",
                            component=f"shape:{p}")
        if not (glue.seq.f @ a_p).same_map(b_p @ top.f):
            raise GlueError(f"f-square fails for p={p}",
                            component=f"f:{p}")
        if not (glue.seq.g @ b_p).same_map(c_p @ top.g):
            raise GlueError(f"g-square fails for p={p}",
                            component=f"g:{p}")
    sections = {p: tower_split(towers[p]) for p in primes}

    def joint(idx: int, target: FgAbGroup, name: str) -> Homomorphism:
        ds = direct_sum(*[getattr(tops[p], name) for p in primes])
        mats = [glue.for_prime(p)[idx].matrix for p in primes]
        return Homomorphism(ds.group, target, hstack(*mats))

    h_by_name = {"A": joint(0, glue.seq.A, "A"),
                 "B": joint(1, glue.seq.B, "B"),
                 "C": joint(2, glue.seq.C, "C")}
    inverses = {}
    for name, h in h_by_name.items():
        try:
            inverses[name] = invert_isomorphism(h)
        except InputError as exc:
            raise GlueError(
                f"glue embeddings do not form a direct-sum isomorphism on "
                f"the {name} column", component=name) from exc
    s_sum = Homomorphism(h_by_name["C"].source, h_by_name["B"].source,
                         block_diag(*[sections[p].s.matrix for p in primes]))
    return Section(glue.seq, (h_by_name["B"] @ s_sum) @ inverses["C"])


# ---------------------------------------------------------------------------
# Duality
# ---------------------------------------------------------------------------


def dual_tower(t: KummerTower) -> CoKummerTower:
    """Pontryagin-dualize a tower levelwise; maps flip direction and roles."""
    seqs = tuple(dualize_sequence(s) for s in t.seqs)
    maps = tuple(LevelMaps(alpha=pontryagin_dual(lm.gamma),
                           beta=pontryagin_dual(lm.beta),
                           gamma=pontryagin_dual(lm.alpha))
                 for lm in t.maps)
    return CoKummerTower(t.p, seqs, maps)


def dual_of_tower(t: CoKummerTower) -> KummerTower:
    """Dualize a downward tower into an upward one (finite groups only)."""
    seqs = tuple(dualize_sequence(s) for s in t.seqs)
    maps = tuple(LevelMaps(alpha=pontryagin_dual(lm.gamma),
                           beta=pontryagin_dual(lm.beta),
                           gamma=pontryagin_dual(lm.alpha))
                 for lm in t.maps)
    return KummerTower(t.p, seqs, maps)


def dual_tower_split(t: CoKummerTower) -> Section:
    """Split the top of a downward tower through its Pontryagin dual.

    The dual is an honest upward tower; its section dualizes back to a
    retraction of f_n, which converts to a section of g_n.
    """
    report = validate_co_tower(t)
    if not report.valid:
        raise TowerInvalidError("co-tower violates the dual hypotheses",
                                report=report)
    upward = dual_of_tower(t)
    s_hat = tower_split(upward)
    top = t.top
    r = (double_dual_inverse(top.A) @ pontryagin_dual(s_hat.s)) \
        @ double_dual_iso(top.B)
    return section_from_retraction(top, r)
