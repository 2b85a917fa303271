"""Independent brute-force oracles the library is checked against.

Everything here is deliberately naive: determinant expansions over all
k x k submatrices, exhaustive element searches. Slow but obviously right,
which is the point.
"""

from __future__ import annotations

import math
from itertools import combinations, product

from kummer.groups import FgAbGroup, GroupElement, element_order
from kummer.matrices import IntMatrix
from kummer.sequences import ShortExactSequence


def naive_det(mat: IntMatrix) -> int:
    n = mat.rows
    if n == 0:
        return 1
    if n == 1:
        return mat[0, 0]
    total = 0
    sign = 1
    for j in range(n):
        minor = mat.select([i for i in range(1, n)],
                           [c for c in range(n) if c != j])
        total += sign * mat[0, j] * naive_det(minor)
        sign = -sign
    return total


def minors_gcd_diagonal(mat: IntMatrix) -> list[int]:
    """Expected Smith diagonal: d_k = gcd of k x k minors / previous gcd."""
    r = min(mat.rows, mat.cols)
    gcds = []
    for k in range(1, r + 1):
        g = 0
        for rows in combinations(range(mat.rows), k):
            for cols in combinations(range(mat.cols), k):
                g = math.gcd(g, naive_det(mat.select(list(rows),
                                                     list(cols))))
        gcds.append(g)
        if g == 0:
            break
    diagonal = []
    prev = 1
    for g in gcds:
        if g == 0:
            break
        diagonal.append(g // prev)
        prev = g
    while len(diagonal) < r:
        diagonal.append(0)
    return diagonal


def brute_same_order_lift(seq: ShortExactSequence,
                          c: GroupElement) -> bool:
    """Search all of B for a preimage of c with the same order."""
    target = element_order(c)
    for b in seq.B.elements():
        if seq.g(b) == c and element_order(b) == target:
            return True
    return False


def verify_section_on_all(seq: ShortExactSequence, s) -> bool:
    return all(seq.g(s.s(c)) == c for c in seq.C.elements())


def brute_solve_mod(mat: IntMatrix, rhs: tuple[int, ...], m: int,
                    bound: int = 6) -> bool:
    """Does mat x = rhs (mod m) have a solution? Exhaustive over (Z/m)^n."""
    n = mat.cols
    if m ** n > bound ** 6:
        raise ValueError("system too large for the brute oracle")
    for x in product(range(m), repeat=n):
        if all(sum(mat[i, j] * x[j] for j in range(n)) % m == rhs[i] % m
               for i in range(mat.rows)):
            return True
    return False
