"""Exact rational simplex for packing LPs: maximize c·y subject to A y <= b, y >= 0, b >= 0.

The slack basis is feasible at the origin, so no first phase is needed. Bland's rule
(smallest entering index, ratio ties by smallest leaving index) guarantees termination.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from ..domain.errors import InvariantViolation, check

ZERO = Fraction(0)


@dataclass(frozen=True)
class PackingSolution:
    objective: Fraction
    # y: values of the structural variables (columns of A)
    y: Tuple[Fraction, ...]
    # duals: one nonnegative value per row, an optimal solution of the covering dual
    duals: Tuple[Fraction, ...]
    pivots: int


class SimplexTableau:
    """Dictionary-form tableau; variables 0..n-1 structural, n..n+m-1 slack."""

    def __init__(
        self, A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], c: Sequence[Fraction]
    ):
        self.m = len(A)
        self.n = len(c)
        self.A: List[List[Fraction]] = [[Fraction(x) for x in row] for row in A]
        self.b: List[Fraction] = [Fraction(x) for x in b]
        self.c: List[Fraction] = [Fraction(x) for x in c]
        self.z = ZERO
        self.nb_vars = list(range(self.n))
        self.b_vars = list(range(self.n, self.n + self.m))
        self.pivots = 0
        for row in self.A:
            if len(row) != self.n:
                raise ValueError("constraint row length differs from objective length")
        if any(x < 0 for x in self.b):
            raise ValueError("packing LP needs b >= 0")

    def pivot(self, i: int, j: int) -> None:
        A, b, c = self.A, self.b, self.c
        piv = A[i][j]
        delta = c[j] / piv
        self.z += delta * b[i]
        row_i = A[i]
        for col in range(self.n):
            if row_i[col]:
                c[col] -= delta * row_i[col]
        c[j] = -delta
        for col in range(self.n):
            row_i[col] = 1 / piv if col == j else row_i[col] / piv
        b[i] /= piv
        for k in range(self.m):
            if k == i:
                continue
            row_k = A[k]
            f = row_k[j]
            if not f:
                continue
            for col in range(self.n):
                if col == j:
                    row_k[col] = -f / piv
                elif row_i[col]:
                    row_k[col] -= f * row_i[col]
            b[k] -= f * b[i]
        self.nb_vars[j], self.b_vars[i] = self.b_vars[i], self.nb_vars[j]
        self.pivots += 1

    def bland_step(self) -> str:
        entering = [(self.nb_vars[j], j) for j in range(self.n) if self.c[j] > 0]
        if not entering:
            return "optimal"
        _, j = min(entering)
        leaving = [
            (self.b[i] / self.A[i][j], self.b_vars[i], i) for i in range(self.m) if self.A[i][j] > 0
        ]
        if not leaving:
            return "unbounded"
        _, _, i = min(leaving)
        self.pivot(i, j)
        return "go_on"

    def solve(self) -> PackingSolution:
        while True:
            status = self.bland_step()
            if status == "optimal":
                break
            if status == "unbounded":
                raise InvariantViolation("bounded-packing", "packing LP is unbounded")
        y = [ZERO] * self.n
        for i, var in enumerate(self.b_vars):
            if var < self.n:
                y[var] = self.b[i]
        duals = [ZERO] * self.m
        for j, var in enumerate(self.nb_vars):
            if var >= self.n:
                duals[var - self.n] = -self.c[j]
        check(all(d >= 0 for d in duals), "dual-nonnegative")
        return PackingSolution(objective=self.z, y=tuple(y), duals=tuple(duals), pivots=self.pivots)


def solve_packing(
    A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], c: Sequence[Fraction]
) -> PackingSolution:
    """Solve max c·y, A y <= b, y >= 0 exactly and return primal and dual optima."""
    return SimplexTableau(A, b, c).solve()
