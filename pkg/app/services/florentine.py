"""
Circular Florentine arrays: prime-order base arrays, verification, the
Construction-I extension and a small backtracking search.
"""
from math import factorial
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from sympy import isprime, primefactors

from app.core.config import settings
from app.core.decorators import log_duration
from app.core.exceptions import FlorentineArrayError, InvalidParameterError
from app.models.florentine import (
    CircularFlorentineArray,
    ExtensionPermutation,
    FlorentineVerdict,
    FlorentineViolation,
    SearchOutcome,
)

logger = structlog.get_logger()


def base_array_prime(T: int) -> CircularFlorentineArray:
    """(T-1) x T array with row m equal to ((m+1)*t mod T)."""
    if T < 2 or not isprime(T):
        raise InvalidParameterError(f"T={T} is not prime", precondition="T prime")
    t = np.arange(T)
    rows = np.array([((m + 1) * t) % T for m in range(T - 1)])
    return CircularFlorentineArray(rows)


def verify(arr) -> FlorentineVerdict:
    """
    Check both defining conditions of a circular Florentine array.

    Rows that are not permutations of Z_T are reported and skipped by the
    step check, so every clash is reported with the earliest row that owns the
    (s, t, a) triple.
    """
    rows = np.asarray(arr.rows if isinstance(arr, CircularFlorentineArray) else arr)
    if rows.ndim != 2:
        rows = np.atleast_2d(rows)
    M, T = rows.shape
    violations: List[FlorentineViolation] = []
    owner: dict[Tuple[int, int, int], int] = {}
    expected = list(range(T))

    for m in range(M):
        row = [int(v) for v in rows[m]]
        if sorted(row) != expected:
            violations.append(FlorentineViolation(kind="not_permutation", rows=[m]))
            continue
        for i in range(T):
            for a in range(1, T):
                key = (row[i], row[(i + a) % T], a)
                first = owner.setdefault(key, m)
                if first != m:
                    violations.append(
                        FlorentineViolation(
                            kind="repeated_step",
                            rows=[first, m],
                            symbols=[key[0], key[1]],
                            step=a,
                        )
                    )

    return FlorentineVerdict(valid=not violations, row_count=M, symbol_count=T, violations=violations)


def require_valid(arr: CircularFlorentineArray) -> CircularFlorentineArray:
    verdict = verify(arr)
    if not verdict.valid:
        raise FlorentineArrayError(
            "array is not a circular Florentine array",
            violation=verdict.violations[0].model_dump(),
        )
    return arr


def unique_shift_property(arr: CircularFlorentineArray, i1: int, i2: int, z: int) -> int:
    """Number of t in Z_T with pi_i1(t) == pi_i2((t + z) mod T)."""
    if i1 == i2:
        raise InvalidParameterError("rows must be distinct", precondition="i1 != i2")
    for i in (i1, i2):
        if not 0 <= i < arr.row_count:
            raise InvalidParameterError(f"row {i} out of range", precondition="row index in range")
    T = arr.symbol_count
    shifted = np.roll(arr.rows[i2], -(z % T))
    return int(np.count_nonzero(arr.rows[i1] == shifted))


def extend_construction1(F: CircularFlorentineArray, perm: ExtensionPermutation) -> CircularFlorentineArray:
    """
    Relabel the symbols of F so that row 0 becomes ``perm`` applied to F_0.

    For a base array whose row 0 is the identity this is row m' -> F_0^q(F_m'(t)).
    """
    require_valid(F)
    base0 = F.row(0)
    new0 = perm.apply(base0)
    if new0[:2] != base0[:2]:
        raise InvalidParameterError(
            "extension permutation moves one of the first two symbols", precondition="fixed prefix"
        )
    relabel = np.empty(F.symbol_count, dtype=np.int64)
    relabel[list(base0)] = new0
    return CircularFlorentineArray(relabel[F.rows])


def all_extensions(F: CircularFlorentineArray) -> List[CircularFlorentineArray]:
    """F^1 ... F^{(T-2)!-1}, ordered by extension index."""
    T = F.symbol_count
    return [extend_construction1(F, ExtensionPermutation.from_index(T, q)) for q in range(1, factorial(T - 2))]


def capacity_bounds(T: int) -> Tuple[int, int]:
    """Known (lower, upper) bounds on the largest row count of a circular Florentine array."""
    if T < 2:
        raise InvalidParameterError("T must be at least 2", precondition="T >= 2")
    if T % 2 == 0:
        return 1, 1
    if isprime(T):
        return T - 1, T - 1
    return min(primefactors(T)) - 1, T - 1


def capacity_note(T: int) -> Optional[str]:
    """Known tighter bound that is cited but not enforced."""
    if T % 18 == 15:
        return f"T = 15 mod 18: no array has more than {T - 3} rows"
    return None


def extension_count(T: int) -> int:
    """Number of distinct extended arrays Construction I yields from one base array."""
    if T < 3:
        return 0
    return factorial(T - 2) - 1


class _BudgetExhausted(Exception):
    pass


# Computer-found arrays with more rows than the smallest-prime-factor bound gives
TABULATED_ARRAYS: Dict[int, Tuple[Tuple[int, ...], ...]] = {
    15: (
        tuple(range(15)),
        (0, 7, 1, 8, 2, 12, 3, 11, 9, 4, 13, 5, 14, 6, 10),
        (0, 4, 11, 7, 10, 1, 13, 9, 5, 8, 3, 6, 2, 14, 12),
        (0, 13, 7, 2, 11, 6, 14, 10, 3, 5, 12, 9, 1, 4, 8),
    ),
}


class _StepSearch:
    """
    Row-by-row backtracking over canonical rows (each starting with symbol 0).

    ``blocked[x][q]`` counts the placed symbols of the current row that forbid
    symbol x at position q. Candidates are tried most constrained first (fewest
    open positions left), and a partial row is dropped as soon as some unplaced
    symbol has no open position.
    """

    def __init__(self, T: int, target_rows: int, budget: int):
        self.T = T
        self.target_rows = target_rows
        self.budget = budget
        self.nodes = 0
        self.used = bytearray(T * T * T)
        self.rows: List[List[int]] = []
        self.seed_count = 0

    def _index(self, s: int, t: int, a: int) -> int:
        return (s * self.T + t) * self.T + a

    def mark(self, row: Sequence[int], value: int) -> None:
        T = self.T
        for i in range(T):
            for a in range(1, T):
                self.used[self._index(row[i], row[(i + a) % T], a)] = value

    def _block(self, blocked: List[List[int]], symbol: int, position: int, free: List[bool]) -> List[Tuple[int, int]]:
        T = self.T
        changed = []
        for x in range(T):
            if not free[x]:
                continue
            for q in range(position + 1, T):
                a = q - position
                if self.used[self._index(symbol, x, a)] or self.used[self._index(x, symbol, T - a)]:
                    blocked[x][q] += 1
                    changed.append((x, q))
        return changed

    @staticmethod
    def _unblock(blocked: List[List[int]], changed: List[Tuple[int, int]]) -> None:
        for x, q in changed:
            blocked[x][q] -= 1

    def _open_positions(self, blocked: List[List[int]], symbol: int, start: int) -> int:
        return sum(1 for q in range(start, self.T) if not blocked[symbol][q])

    def _placeable(self, blocked: List[List[int]], start: int, free: List[bool]) -> bool:
        return all(
            any(not blocked[x][q] for q in range(start, self.T)) for x in range(self.T) if free[x]
        )

    def _fill_row(self, row: List[int], free: List[bool], blocked: List[List[int]]) -> bool:
        p = len(row)
        if p == self.T:
            self.mark(row, 1)
            self.rows.append(list(row))
            if len(self.rows) == self.target_rows or self._next_row():
                return True
            self.rows.pop()
            self.mark(row, 0)
            return False

        # second symbols increase from row to row; rows can be sorted that way
        low = self.rows[-1][1] + 1 if p == 1 and len(self.rows) > self.seed_count else 1
        candidates = [x for x in range(low, self.T) if free[x] and not blocked[x][p]]
        candidates.sort(key=lambda x: (self._open_positions(blocked, x, p), x))
        for symbol in candidates:
            self.nodes += 1
            if self.nodes > self.budget:
                raise _BudgetExhausted
            free[symbol] = False
            row.append(symbol)
            changed = self._block(blocked, symbol, p, free)
            if self._placeable(blocked, p + 1, free) and self._fill_row(row, free, blocked):
                return True
            self._unblock(blocked, changed)
            row.pop()
            free[symbol] = True
        return False

    def _next_row(self) -> bool:
        free = [True] * self.T
        free[0] = False
        blocked = [[0] * self.T for _ in range(self.T)]
        self._block(blocked, 0, 0, free)
        if not self._placeable(blocked, 1, free):
            return False
        return self._fill_row([0], free, blocked)

    def run(self, seed_rows: Sequence[Sequence[int]]) -> bool:
        for row in seed_rows:
            self.mark(row, 1)
            self.rows.append(list(row))
        self.seed_count = len(self.rows)
        if len(self.rows) >= self.target_rows:
            return True
        return self._next_row()


def _canonical_seed(seed_rows: Iterable[Sequence[int]], T: int) -> List[List[int]]:
    rows = [list(int(v) for v in r) for r in seed_rows]
    for r in rows:
        if len(r) != T:
            raise InvalidParameterError("seed rows must have T symbols", precondition="seed row length")
    if rows and not verify(np.array(rows)).valid:
        raise FlorentineArrayError("seed rows are not a circular Florentine array")
    # rotate every row to start with 0; circular steps are unchanged
    return [r[r.index(0):] + r[: r.index(0)] for r in rows]


@log_duration("florentine_search")
def search_small(
    T: int,
    target_rows: int,
    budget: Optional[int] = None,
    seed_rows: Optional[Sequence[Sequence[int]]] = None,
) -> SearchOutcome:
    """
    Backtracking search for a target_rows x T circular Florentine array.

    Without ``seed_rows`` row 0 is fixed to the identity and every row is
    rotated to start with 0, which loses no solutions; a not-found outcome
    with ``budget_exhausted`` false is therefore exhaustive. ``seed_rows``
    extends a given partial array instead.

    Orders listed in ``TABULATED_ARRAYS`` start from the tabulated array when
    no seed is given, and the outcome reports how many rows came from it; a
    not-found outcome then only rules out extensions of those rows.
    """
    if T < 2:
        raise InvalidParameterError("T must be at least 2", precondition="T >= 2")
    if target_rows < 1:
        raise InvalidParameterError("target_rows must be positive", precondition="target_rows >= 1")
    budget = settings.SEARCH_NODE_BUDGET if budget is None else budget

    if target_rows > T - 1:
        logger.info("Search skipped, row count exceeds T-1", T=T, target_rows=target_rows)
        return SearchOutcome(array=None, nodes_visited=0, budget_exhausted=False)

    tabulated = 0
    if seed_rows:
        seed = _canonical_seed(seed_rows, T)
    elif T in TABULATED_ARRAYS:
        seed = [list(r) for r in TABULATED_ARRAYS[T][:target_rows]]
        tabulated = len(seed)
        logger.info("Search starts from a tabulated array", T=T, rows=tabulated)
    else:
        seed = [list(range(T))]
    search = _StepSearch(T, target_rows, budget)
    try:
        found = search.run(seed)
    except _BudgetExhausted:
        logger.warning("Florentine search budget exhausted", T=T, target_rows=target_rows, budget=budget)
        return SearchOutcome(array=None, nodes_visited=search.nodes, budget_exhausted=True,
                             tabulated_rows=tabulated)

    if not found:
        logger.info("Florentine search exhausted the space", T=T, target_rows=target_rows, nodes=search.nodes)
        return SearchOutcome(array=None, nodes_visited=search.nodes, budget_exhausted=False, tabulated_rows=tabulated)

    array = CircularFlorentineArray(np.array(search.rows[:target_rows]))
    logger.info("Florentine array found", T=T, rows=target_rows, nodes=search.nodes)
    return SearchOutcome(array=array, nodes_visited=search.nodes, budget_exhausted=False, tabulated_rows=tabulated)
