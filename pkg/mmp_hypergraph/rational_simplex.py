from fractions import Fraction
from typing import List, Sequence, Tuple

from mmp_hypergraph.console import get_logger

logger = get_logger(__name__)


class UnboundedLPError(ArithmeticError):
    pass


class SimplexTableau:
    """Exact primal simplex for: maximize c.y subject to A y <= b, y >= 0, with b >= 0.

    Dictionary form: basic variables are b - A . nonbasic and the objective is
    value + c . nonbasic. The slack basis is the starting point, and Bland's rule
    (smallest variable index) picks both entering and leaving variables.
    """

    def __init__(self, A: Sequence[Sequence], b: Sequence, c: Sequence):
        self.m = len(A)
        self.n = len(c)
        self.A = [[Fraction(x) for x in row] for row in A]
        self.b = [Fraction(x) for x in b]
        self.c = [Fraction(x) for x in c]
        if any(x < 0 for x in self.b):
            raise ValueError("the slack basis needs a non-negative right-hand side")
        self.value = Fraction(0)
        self.nb_vars = list(range(self.n))
        self.b_vars = list(range(self.n, self.n + self.m))
        self.pivots = 0

    def pivot(self, i: int, j: int):
        piv = self.A[i][j]
        delta = self.c[j] / piv
        self.value += delta * self.b[i]
        for col in range(self.n):
            self.c[col] -= delta * self.A[i][col]
        self.c[j] = -delta
        for col in range(self.n):
            self.A[i][col] = 1 / piv if col == j else self.A[i][col] / piv
        self.b[i] /= piv
        for row in range(self.m):
            if row == i:
                continue
            f = self.A[row][j]
            if not f:
                continue
            for col in range(self.n):
                self.A[row][col] = -f / piv if col == j else self.A[row][col] - f * self.A[i][col]
            self.b[row] -= f * self.b[i]
        self.nb_vars[j], self.b_vars[i] = self.b_vars[i], self.nb_vars[j]
        self.pivots += 1

    def bland_primal_step(self) -> bool:
        """One pivot; False once the tableau is optimal."""
        entering = [j for j in range(self.n) if self.c[j] > 0]
        if not entering:
            return False
        j = min(entering, key=lambda col: self.nb_vars[col])
        rows = [i for i in range(self.m) if self.A[i][j] > 0]
        if not rows:
            raise UnboundedLPError(f"variable {self.nb_vars[j]} can grow without bound")
        i = min(rows, key=lambda row: (self.b[row] / self.A[row][j], self.b_vars[row]))
        self.pivot(i, j)
        return True

    def solve(self) -> Tuple[Fraction, List[Fraction]]:
        while self.bland_primal_step():
            pass
        solution = [Fraction(0)] * self.n
        for i, var in enumerate(self.b_vars):
            if var < self.n:
                solution[var] = self.b[i]
        logger.debug("simplex optimum %s after %d pivots", self.value, self.pivots)
        return self.value, solution
