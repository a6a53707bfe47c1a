"""CNF data model: DIMACS parsing, restriction semantics, random instances,
and the exact-counting oracles everything else is checked against.

Variables are 1-based (DIMACS convention) in all public interfaces. A clause
is a tuple of signed integers sorted by variable index, with no variable
repeated with the same sign. A clause containing both x and -x is tautological
and kept as-is; the empty clause is representable and marks unsatisfiability.

Assignments are tuples of 0/1 of length n; internally the fast paths pack an
assignment into an integer whose bit i holds the value of variable i+1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

Clause = tuple[int, ...]
Assignment = tuple[int, ...]

BRUTE_FORCE_VAR_LIMIT = 30
_BRUTE_CHUNK = 1 << 20


class ParseError(ValueError):
    """Malformed DIMACS input; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class GuardError(RuntimeError):
    """Instance too large for the requested desk-scale operation."""


def make_clause(literals) -> Clause:
    """Canonical clause: deduplicated, sorted by (variable, sign)."""
    seen = set()
    for lit in literals:
        lit = int(lit)
        if lit == 0:
            raise ValueError("literal 0 is reserved as the clause terminator")
        seen.add(lit)
    return tuple(sorted(seen, key=lambda l: (abs(l), l)))


def is_tautology(clause: Clause) -> bool:
    lits = set(clause)
    return any(-l in lits for l in lits)


@dataclass(frozen=True)
class CnfFormula:
    n: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("variable count must be nonnegative")
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.n:
                    raise ValueError(f"literal {lit} out of range for n={self.n}")

    @property
    def k(self) -> int:
        """Maximum clause width; 0 for the empty formula."""
        return max((len(c) for c in self.clauses), default=0)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def masks(self) -> tuple[list[int], list[int]]:
        """Per-clause (positive, negative) variable bitmasks.

        Clause c is satisfied by packed assignment x iff
        (x & pos) | (~x & neg) != 0. Tautological and empty clauses need no
        special handling under this test.
        """
        cached = self.__dict__.get("_masks")
        if cached is None:
            pos, neg = [], []
            for clause in self.clauses:
                p = nm = 0
                for lit in clause:
                    if lit > 0:
                        p |= 1 << (lit - 1)
                    else:
                        nm |= 1 << (-lit - 1)
                pos.append(p)
                neg.append(nm)
            cached = (pos, neg)
            object.__setattr__(self, "_masks", cached)
        return cached

    def mask_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """masks() as uint64 numpy arrays; requires n <= 62."""
        if self.n > 62:
            raise GuardError(f"bit-packed fast path supports n <= 62, got n={self.n}")
        pos, neg = self.masks()
        return np.array(pos, dtype=np.uint64), np.array(neg, dtype=np.uint64)


@dataclass(frozen=True)
class PartialAssignment:
    """Ordered sequence of (variable, value) pairs, all variables distinct."""

    items: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for var, val in self.items:
            if var < 1:
                raise ValueError(f"variable {var} out of range")
            if val not in (0, 1):
                raise ValueError(f"value {val} not boolean")
            if var in seen:
                raise ValueError(f"variable {var} assigned twice")
            seen.add(var)

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> "PartialAssignment":
        return cls(tuple(pairs))

    def assign(self, var: int, value: int) -> "PartialAssignment":
        """Extension alpha u (var=value); rejects an already-assigned var."""
        return PartialAssignment(self.items + ((var, value),))

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def __len__(self) -> int:
        return len(self.items)


def _as_assignment_dict(alpha) -> dict[int, int]:
    if isinstance(alpha, PartialAssignment):
        return alpha.as_dict()
    if isinstance(alpha, dict):
        pairs = tuple(alpha.items())
    else:
        pairs = tuple(alpha)
    return PartialAssignment(pairs).as_dict()


def restrict_clauses(clauses, assignment: dict[int, int]) -> list[Clause]:
    """Clause-list restriction: drop satisfied clauses, delete falsified
    literals, keep emptied clauses as the unsatisfiable marker."""
    out = []
    for clause in clauses:
        reduced = []
        satisfied = False
        for lit in clause:
            val = assignment.get(abs(lit))
            if val is None:
                reduced.append(lit)
            elif (lit > 0) == (val == 1):
                satisfied = True
                break
        if not satisfied:
            out.append(tuple(reduced))
    return out


def restrict(formula: CnfFormula, alpha) -> CnfFormula:
    """Residual formula F|_alpha over the same variable range."""
    assignment = _as_assignment_dict(alpha)
    for var in assignment:
        if var > formula.n:
            raise ValueError(f"variable {var} not in formula (n={formula.n})")
    return CnfFormula(formula.n, tuple(restrict_clauses(formula.clauses, assignment)))


def bits_to_assignment(x: int, n: int) -> Assignment:
    return tuple((x >> i) & 1 for i in range(n))


def assignment_to_bits(a) -> int:
    x = 0
    for i, v in enumerate(a):
        if v:
            x |= 1 << i
    return x


def evaluate_bits(formula: CnfFormula, x: int) -> bool:
    pos, neg = formula.masks()
    full = (1 << formula.n) - 1
    nx = ~x & full
    for p, nm in zip(pos, neg):
        if not ((x & p) | (nx & nm)):
            return False
    return True


def evaluate(formula: CnfFormula, a) -> bool:
    """True iff every clause has a satisfied literal under the total
    assignment a (sequence of 0/1, length n)."""
    if len(a) != formula.n:
        raise ValueError(f"assignment has {len(a)} values, formula has n={formula.n}")
    return evaluate_bits(formula, assignment_to_bits(a))


def random_kcnf(n: int, m: int, k: int, seed: int) -> CnfFormula:
    """m independent width-k clauses: k distinct variables drawn uniformly,
    signs fair coins. Deterministic per seed; duplicate clauses allowed."""
    if k > n:
        raise ValueError(f"clause width k={k} exceeds variable count n={n}")
    rng = random.Random(seed)
    clauses = []
    variables = range(1, n + 1)
    for _ in range(m):
        chosen = rng.sample(variables, k)
        clauses.append(make_clause(v if rng.getrandbits(1) else -v for v in chosen))
    return CnfFormula(n, tuple(clauses))


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF. Duplicate literals inside a clause are deduplicated;
    tautological clauses are retained. Errors carry line numbers."""
    n = None
    declared_m = None
    clauses: list[Clause] = []
    current: list[int] = []
    clause_start_line = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("p"):
            if n is not None:
                raise ParseError("duplicate header", lineno)
            fields = stripped.split()
            if len(fields) != 4 or fields[0] != "p" or fields[1] != "cnf":
                raise ParseError(f"malformed header {stripped!r}", lineno)
            try:
                n = int(fields[2])
                declared_m = int(fields[3])
            except ValueError:
                raise ParseError(f"malformed header {stripped!r}", lineno) from None
            if n < 0 or declared_m < 0:
                raise ParseError(f"malformed header {stripped!r}", lineno)
            continue
        if n is None:
            raise ParseError("clause data before header", lineno)
        for token in stripped.split():
            try:
                lit = int(token)
            except ValueError:
                raise ParseError(f"non-integer token {token!r}", lineno) from None
            if lit == 0:
                if len(clauses) == declared_m:
                    raise ParseError(
                        f"more clauses than the declared {declared_m}", lineno
                    )
                clauses.append(make_clause(current))
                current = []
                clause_start_line = None
            else:
                if abs(lit) > n:
                    raise ParseError(f"literal {lit} out of range (n={n})", lineno)
                if clause_start_line is None:
                    clause_start_line = lineno
                current.append(lit)

    last = len(text.splitlines())
    if n is None:
        raise ParseError("missing header", max(last, 1))
    if current:
        raise ParseError("unterminated clause at end of input", clause_start_line)
    if len(clauses) != declared_m:
        raise ParseError(
            f"got {len(clauses)} clauses, header declared {declared_m}", max(last, 1)
        )
    return CnfFormula(n, tuple(clauses))


def to_dimacs(formula: CnfFormula, comments=()) -> str:
    lines = ["c generated-by sharpcount"]
    lines.extend(f"c {c}" for c in comments)
    lines.append(f"p cnf {formula.n} {formula.m}")
    for clause in formula.clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


def brute_force_count(formula: CnfFormula) -> int:
    """|sat(F)| by sweeping all 2^n assignments (vectorized, chunked)."""
    if formula.n > BRUTE_FORCE_VAR_LIMIT:
        raise GuardError(
            f"brute force limited to n <= {BRUTE_FORCE_VAR_LIMIT}, got n={formula.n}"
        )
    total = 1 << formula.n
    pos, neg = formula.mask_arrays() if formula.n <= 62 else (None, None)
    count = 0
    for start in range(0, total, _BRUTE_CHUNK):
        xs = np.arange(start, min(start + _BRUTE_CHUNK, total), dtype=np.uint64)
        sat = np.ones(len(xs), dtype=bool)
        nxs = ~xs
        for p, nm in zip(pos, neg):
            sat &= ((xs & p) != 0) | ((nxs & nm) != 0)
        count += int(sat.sum())
    return count


def unit_propagate(clauses) -> tuple[list[Clause], dict[int, int], bool]:
    """Propagate unit clauses to fixpoint.

    Returns (residual clauses, forced assignment, conflict). Tautological
    clauses must be filtered out by the caller beforehand.
    """
    clauses = list(clauses)
    forced: dict[int, int] = {}
    while True:
        unit = next((c for c in clauses if len(c) == 1), None)
        if unit is None:
            return clauses, forced, any(len(c) == 0 for c in clauses)
        lit = unit[0]
        forced[abs(lit)] = 1 if lit > 0 else 0
        clauses = restrict_clauses(clauses, {abs(lit): forced[abs(lit)]})
        if any(len(c) == 0 for c in clauses):
            return clauses, forced, True


def _branch_variable(clauses) -> int:
    shortest = min(len(c) for c in clauses)
    return min(abs(l) for c in clauses if len(c) == shortest for l in c)


def dpll_count(formula: CnfFormula) -> int:
    """Exact #F by branching with unit propagation; a satisfied residual
    with v free variables contributes 2^v."""
    live = [c for c in formula.clauses if not is_tautology(c)]

    def go(clauses, free: int) -> int:
        clauses, forced, conflict = unit_propagate(clauses)
        if conflict:
            return 0
        free -= len(forced)
        if not clauses:
            return 1 << free
        var = _branch_variable(clauses)
        return go(restrict_clauses(clauses, {var: 0}), free - 1) + go(
            restrict_clauses(clauses, {var: 1}), free - 1
        )

    return go(live, formula.n)
