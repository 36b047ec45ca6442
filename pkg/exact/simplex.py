import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from utils.validation import CertificateError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of a phase-one solve of A x = b, x >= 0"""

    feasible: bool
    solution: Optional[List[Fraction]]
    # Phase-one dual: y^T A <= 0 columnwise and b^T y > 0 when infeasible
    dual: List[Fraction]
    pivots: int


class SimplexTableau:
    """Dense exact tableau for min sum(artificials) s.t. A x + a = b, x, a >= 0.

    Columns 0..n-1 are the original variables, n..n+m-1 the artificials.
    Pivoting follows Bland's rule so the run is finite and reproducible.
    """

    def __init__(self, A: Sequence[Sequence], b: Sequence):
        self.m = len(A)
        self.n = len(A[0]) if self.m else 0
        self.signs = [1] * self.m

        rows = []
        rhs = []
        for i in range(self.m):
            row = [Fraction(v) for v in A[i]]
            value = Fraction(b[i])
            if value < 0:
                row = [-v for v in row]
                value = -value
                self.signs[i] = -1
            artificial = [Fraction(1) if k == i else Fraction(0) for k in range(self.m)]
            rows.append(row + artificial)
            rhs.append(value)

        self.T = rows
        self.rhs = rhs
        self.basis = [self.n + i for i in range(self.m)]
        width = self.n + self.m
        # reduced costs for phase-one cost vector (0 on x, 1 on artificials)
        self.d = [
            (Fraction(1) if j >= self.n else Fraction(0)) - sum((self.T[i][j] for i in range(self.m)), Fraction(0))
            for j in range(width)
        ]
        self.pivots = 0

    def objective(self):
        return sum((self.rhs[i] for i in range(self.m) if self.basis[i] >= self.n), Fraction(0))

    def pivot(self, i, j):
        logger.debug(f"Pivot row {i} (basic {self.basis[i]}) -> column {j}")
        width = self.n + self.m
        piv = self.T[i][j]
        row = [v / piv for v in self.T[i]]
        self.T[i] = row
        self.rhs[i] = self.rhs[i] / piv

        for k in range(self.m):
            if k == i:
                continue
            factor = self.T[k][j]
            if factor == 0:
                continue
            self.T[k] = [self.T[k][l] - factor * row[l] for l in range(width)]
            self.rhs[k] -= factor * self.rhs[i]

        factor = self.d[j]
        if factor != 0:
            self.d = [self.d[l] - factor * row[l] for l in range(width)]

        self.basis[i] = j
        self.pivots += 1

    def bland_step(self):
        entering = next((j for j in range(self.n + self.m) if self.d[j] < 0), None)
        if entering is None:
            return 'optimal'

        candidates = [
            (self.rhs[i] / self.T[i][entering], self.basis[i], i)
            for i in range(self.m)
            if self.T[i][entering] > 0
        ]
        if not candidates:
            # phase-one objective is bounded below by 0
            return 'unbounded'

        _, _, row = min(candidates)
        self.pivot(row, entering)
        return 'go_on'

    def solve(self):
        while True:
            status = self.bland_step()
            if status != 'go_on':
                return status

    def primal(self):
        values = [Fraction(0)] * self.n
        for i, column in enumerate(self.basis):
            if column < self.n:
                values[column] = self.rhs[i]
        return values

    def dual(self):
        # d_{artificial i} = 1 - y_i in the sign-normalized system
        return [self.signs[i] * (1 - self.d[self.n + i]) for i in range(self.m)]


def phase_one(A: Sequence[Sequence], b: Sequence) -> FeasibilityResult:
    """Decide feasibility of {x >= 0 : A x = b} exactly"""
    tableau = SimplexTableau(A, b)
    status = tableau.solve()
    if status == 'unbounded':
        raise CertificateError("phase-one simplex reported an unbounded ray")

    feasible = tableau.objective() == 0
    logger.debug(f"Phase one finished after {tableau.pivots} pivots, feasible={feasible}")
    return FeasibilityResult(
        feasible=feasible,
        solution=tableau.primal() if feasible else None,
        dual=tableau.dual(),
        pivots=tableau.pivots,
    )


def solve_linear_system(A: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """One exact solution of A x = b (free variables set to 0), or None"""
    m = len(A)
    n = len(A[0]) if m else 0
    rows = [[Fraction(v) for v in A[i]] + [Fraction(b[i])] for i in range(m)]

    pivot_columns = []
    r = 0
    for c in range(n):
        pivot = next((k for k in range(r, m) if rows[k][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        rows[r] = [v / lead for v in rows[r]]
        for k in range(m):
            if k != r and rows[k][c] != 0:
                factor = rows[k][c]
                rows[k] = [vk - factor * vr for vk, vr in zip(rows[k], rows[r])]
        pivot_columns.append(c)
        r += 1
        if r == m:
            break

    for k in range(r, m):
        if rows[k][n] != 0:
            return None

    solution = [Fraction(0)] * n
    for k, c in enumerate(pivot_columns):
        solution[c] = rows[k][n]
    return solution
