"""Reusable concrete inputs: split towers, glue data, limit evidence.

Tests and scripts share these so the interesting objects (the order-6
glued sequence, the doomed limit evidence, the invalid tower) are built
in exactly one place.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .arith import vp
from .colimits import CaseOneEvidence, ColimitTower
from .errors import InputError
from .groups import FgAbGroup, Homomorphism, direct_sum
from .matrices import IntMatrix, block_diag
from .sequences import ShortExactSequence, check_exact, pruefer_decompose
from .towers import CrtGlue, KummerTower, LevelMaps, SigmaModel, sigma_kummer_tower

__all__ = [
    "split_tower",
    "invalid_tower",
    "default_sigma_models",
    "random_sigma_model",
    "random_finite_group",
    "random_subgroup_sequence",
    "OrderSixFixture",
    "order_six_glued",
    "divisible_case_one_evidence",
    "doomed_divisible_evidence",
    "doomed_bounded_evidence",
]


def split_tower(p: int, n: int, a_mode: str = "growing",
                c_rank: int = 1) -> KummerTower:
    """A hand-built tower of direct sums B_k = A_k + C_k.

    a_mode picks the left column: "growing" Z/p^k, "constant" Z/p,
    "capped" Z/p^min(k,2). The right column is (Z/p^k)^c_rank with
    multiplication-by-p connecting maps, which satisfies the inclusion
    axiom on the nose.
    """
    if a_mode not in ("growing", "constant", "capped"):
        raise InputError(f"unknown a_mode {a_mode!r}")
    if c_rank < 1 or n < 1:
        raise InputError("need c_rank >= 1 and n >= 1")

    def a_order(k: int) -> int:
        if a_mode == "growing":
            return p ** k
        if a_mode == "constant":
            return p
        return p ** min(k, 2)

    seqs = []
    for k in range(1, n + 1):
        ds = direct_sum(FgAbGroup.cyclic(a_order(k)),
                        FgAbGroup.of_orders(*[p ** k] * c_rank))
        seqs.append(check_exact(ds.injections[0], ds.projections[1]))
    maps = []
    for k in range(1, n):
        lo, hi = seqs[k - 1], seqs[k]
        a_step = p if a_order(k + 1) > a_order(k) else 1
        alpha = Homomorphism(lo.A, hi.A, IntMatrix.from_rows([[a_step]]))
        gamma = Homomorphism(lo.C, hi.C,
                             IntMatrix.identity(c_rank).scaled(p))
        beta = Homomorphism(lo.B, hi.B,
                            block_diag(alpha.matrix, gamma.matrix))
        maps.append(LevelMaps(alpha=alpha, beta=beta, gamma=gamma))
    return KummerTower(p, tuple(seqs), tuple(maps))


def invalid_tower(p: int = 2) -> KummerTower:
    """Two levels whose right-hand map is zero: breaks the inclusion axiom
    (and nothing else, so validation reports exactly one violation)."""
    base = split_tower(p, 2, a_mode="constant")
    lo, hi = base.seqs
    alpha = base.maps[0].alpha
    gamma = Homomorphism(lo.C, hi.C, IntMatrix.zeros(1, 1))
    beta = Homomorphism(lo.B, hi.B, block_diag(alpha.matrix, gamma.matrix))
    return KummerTower(p, base.seqs,
                       (LevelMaps(alpha=alpha, beta=beta, gamma=gamma),))


def default_sigma_models() -> tuple[SigmaModel, ...]:
    """Small mixed bag: finite kernel, divisible corank, both, identity."""
    return (
        SigmaModel(2, 1, IntMatrix.from_rows([[3]])),
        SigmaModel(2, 2, IntMatrix.from_rows([[3, 0], [0, 1]])),
        SigmaModel(3, 2, IntMatrix.from_rows([[1, 0], [0, 4]])),
        SigmaModel(5, 2, IntMatrix.from_rows([[6, 5], [0, 1]])),
        SigmaModel(2, 1, IntMatrix.from_rows([[1]])),
    )


def random_sigma_model(rng: random.Random, p: int,
                       max_rank: int = 3) -> SigmaModel:
    """Random sigma matrix with det prime to p, by rejection sampling."""
    r = rng.randint(1, max_rank)
    while True:
        mat = IntMatrix(r, r, tuple(rng.randint(-4, 4) for _ in range(r * r)))
        try:
            return SigmaModel(p, r, mat)
        except InputError:
            continue


def random_finite_group(rng: random.Random, max_order: int = 64,
                        max_generators: int = 3) -> FgAbGroup:
    """Finite group with a non-diagonal presentation of bounded order."""
    orders = []
    budget = max_order
    for _ in range(rng.randint(1, max_generators)):
        n = rng.choice([d for d in (2, 3, 4, 5, 8, 9) if d <= budget])
        orders.append(n)
        budget //= n
        if budget < 2:
            break
    g = FgAbGroup.of_orders(*orders)
    k = g.generator_count
    # mix the presentation with a unimodular change of generators
    mix = IntMatrix.identity(k)
    for _ in range(3):
        i, j = rng.randrange(k), rng.randrange(k)
        if i == j:
            continue
        add = IntMatrix.identity(k).data
        mix = mix @ IntMatrix(k, k, tuple(
            rng.randint(-2, 2) if (a, b) == (i, j) else add[a * k + b]
            for a in range(k) for b in range(k)))
    return FgAbGroup(k, mix @ g.relations)


def random_subgroup_sequence(rng: random.Random,
                             max_order: int = 64) -> ShortExactSequence:
    """Random short exact sequence: a generated subgroup and its quotient."""
    from .groups import cokernel, subgroup_generated

    b = random_finite_group(rng, max_order)
    picks = [b.element(tuple(rng.randrange(8) for _ in
                             range(b.generator_count)))
             for _ in range(rng.randint(0, 2))]
    sub, inc = subgroup_generated(b, picks)
    quo, proj = cokernel(inc)
    return check_exact(inc, proj)


@dataclass(frozen=True)
class OrderSixFixture:
    """An order-6 sequence glued from its 2-part and 3-part towers."""

    m: int
    towers: dict[int, KummerTower]
    glue: CrtGlue


def order_six_glued() -> OrderSixFixture:
    """Direct-sum glue of the p=2 and p=3 sigma towers at level 1.

    C of the glued sequence is Z/2 + Z/3 = Z/6, small enough that sections
    can be checked by full enumeration.
    """
    t2 = sigma_kummer_tower(SigmaModel(2, 2, IntMatrix.from_rows(
        [[3, 0], [0, 1]])), 1)
    t3 = sigma_kummer_tower(SigmaModel(3, 2, IntMatrix.from_rows(
        [[4, 0], [0, 1]])), 1)
    top2, top3 = t2.top, t3.top
    ds_a = direct_sum(top2.A, top3.A)
    ds_b = direct_sum(top2.B, top3.B)
    ds_c = direct_sum(top2.C, top3.C)
    f = Homomorphism(ds_a.group, ds_b.group,
                     block_diag(top2.f.matrix, top3.f.matrix))
    g = Homomorphism(ds_b.group, ds_c.group,
                     block_diag(top2.g.matrix, top3.g.matrix))
    glued = check_exact(f, g)
    glue = CrtGlue(glued, (
        (2, ds_a.injections[0], ds_b.injections[0], ds_c.injections[0]),
        (3, ds_a.injections[1], ds_b.injections[1], ds_c.injections[1])))
    return OrderSixFixture(m=6, towers={2: t2, 3: t3}, glue=glue)


def divisible_case_one_evidence(t: ColimitTower, level: int,
                                precision: Optional[int] = None,
                                ) -> CaseOneEvidence:
    """Honest evidence for the divisible family: A_k = Z/p^k is the k-th
    layer of one divisible summand, with no bounded part."""
    p = t.p
    prec = precision if precision is not None else level + 2
    d_group = FgAbGroup(1, IntMatrix.diagonal([p ** prec]))
    triv = FgAbGroup.trivial()
    pi_d, pi_m = [], []
    for k in range(1, level + 1):
        a_k = t.sequence(k).A
        pi_d.append(Homomorphism(a_k, d_group,
                                 IntMatrix.from_rows([[p ** (prec - k)]])))
        pi_m.append(Homomorphism(a_k, triv,
                                 IntMatrix.zeros(0, a_k.generator_count)))
    return CaseOneEvidence(level=level, divisible_rank=1, precision=prec,
                           m_group=triv, pi_divisible=tuple(pi_d),
                           pi_bounded=tuple(pi_m))


def doomed_divisible_evidence(t: ColimitTower, level: int) -> CaseOneEvidence:
    """False claim that the whole A column is divisible.

    The cones are built honestly (embed the top level, compose downward),
    so every shape check passes and the rejection happens where it should:
    the claimed divisible elements have finite height.
    """
    p = t.p
    prec = level + 2
    top_a = t.sequence(level).A
    dec = pruefer_decompose(top_a)
    r = len(dec.orders)
    d_group = FgAbGroup(r, IntMatrix.identity(r).scaled(p ** prec))
    emb = IntMatrix.diagonal([p ** (prec - vp(int(n), p)) for n in dec.orders])
    pi_top = Homomorphism(dec.inverse.target, d_group, emb) @ dec.inverse
    pis = [pi_top]
    for k in range(level - 1, 0, -1):
        pis.append(pis[-1] @ t.step(k).alpha)
    pis.reverse()
    triv = FgAbGroup.trivial()
    pi_m = tuple(
        Homomorphism(t.sequence(k).A, triv,
                     IntMatrix.zeros(0, t.sequence(k).A.generator_count))
        for k in range(1, level + 1))
    return CaseOneEvidence(level=level, divisible_rank=r, precision=prec,
                           m_group=triv, pi_divisible=tuple(pis),
                           pi_bounded=pi_m)


def doomed_bounded_evidence(t: ColimitTower, level: int,
                            m_level: int = 2) -> CaseOneEvidence:
    """False claim that the A column is bounded by the small group
    A_{m_level}; joint injectivity must fail once A_k outgrows it."""
    p = t.p
    prec = level + 2
    m_group = t.sequence(m_level).A
    triv_d = FgAbGroup(0, IntMatrix.zeros(0, 0))
    top_a = t.sequence(level).A
    pi_top = Homomorphism(top_a, m_group,
                          IntMatrix.zeros(m_group.generator_count,
                                          top_a.generator_count))
    pis = [pi_top]
    for k in range(level - 1, 0, -1):
        pis.append(pis[-1] @ t.step(k).alpha)
    pis.reverse()
    pi_d = tuple(
        Homomorphism(t.sequence(k).A, triv_d,
                     IntMatrix.zeros(0, t.sequence(k).A.generator_count))
        for k in range(1, level + 1))
    return CaseOneEvidence(level=level, divisible_rank=0, precision=prec,
                           m_group=m_group, pi_divisible=pi_d,
                           pi_bounded=tuple(pis))
