"""Upper bound on #F via random GF(2) constraints.

One random n x n system is drawn; F_nu pairs F with the first nu rows. The
scan walks nu downward from n: satisfiability of a prefix implies
satisfiability of every shorter prefix (deterministically), so the first
satisfiable F_nu fixes u = nu + 1 and the scan stops. Output U = 2^{u+3}
upper-bounds #F with constant probability, and 2^u is a 16-approximation
whenever u ended strictly above the floor mu.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .formula import CnfFormula, GuardError, evaluate_bits
from .gf2 import Gf2System, eliminate, prefix, random_system, solution_bits

_EVAL_CHUNK = 4096


@dataclass(frozen=True)
class ConstrainedFormula:
    """F together with a linear-system prefix A_nu x = b_nu."""

    formula: CnfFormula
    system: Gf2System
    nu: int

    def __post_init__(self):
        if self.system.n != self.formula.n:
            raise ValueError("system columns must match formula variables")
        if self.system.m != self.nu:
            raise ValueError("system must already be the nu-row prefix")


@dataclass(frozen=True)
class UpperResult:
    u: int
    mu: int
    n: int
    all_sat: bool
    rank_at_stop: int
    trace: tuple[tuple[int, bool], ...] = field(default_factory=tuple)

    @property
    def bound(self) -> int:
        """U = 2^{u+3}."""
        return 1 << (self.u + 3)

    def to_json(self) -> str:
        return json.dumps(
            {
                "u": self.u,
                "U": self.bound,
                "mu": self.mu,
                "n": self.n,
                "all_sat": self.all_sat,
                "rank_at_stop": self.rank_at_stop,
                "trace": [{"nu": nu, "sat": sat} for nu, sat in self.trace],
            }
        )


def is_satisfiable_constrained(constrained: ConstrainedFormula):
    """(satisfiable, witness): does some solution of the linear system
    satisfy F? Enumerates the system's solutions, stopping at the first hit."""
    echelon = eliminate(constrained.system)
    hit = _constrained_witness(constrained.formula, echelon)
    return hit is not None, hit


def _constrained_witness(formula: CnfFormula, echelon):
    if not echelon.consistent:
        return None
    if formula.n <= 62:
        pos, neg = formula.mask_arrays()
        chunk: list[int] = []
        for bits in solution_bits(echelon):
            chunk.append(bits)
            if len(chunk) == _EVAL_CHUNK:
                hit = _first_satisfying(chunk, pos, neg)
                if hit is not None:
                    return hit
                chunk.clear()
        if chunk:
            return _first_satisfying(chunk, pos, neg)
        return None
    for bits in solution_bits(echelon):
        if evaluate_bits(formula, bits):
            return bits
    return None


def _first_satisfying(chunk, pos, neg):
    xs = np.array(chunk, dtype=np.uint64)
    sat = np.ones(len(xs), dtype=bool)
    nxs = ~xs
    for p, nm in zip(pos, neg):
        sat &= ((xs & p) != 0) | ((nxs & nm) != 0)
    idx = int(np.argmax(sat))
    return int(xs[idx]) if sat[idx] else None


def upper_bound(
    formula: CnfFormula, mu: int, seed: int, enumeration_guard: int | None = None
) -> UpperResult:
    """Scan F_n, F_{n-1}, ..., F_mu downward; u is the threshold index.

    With all prefixes unsatisfiable u = mu; if even the full n-row system
    admits a satisfying solution of F, u = n with the all_sat flag set (the
    bound U = 2^{n+3} >= #F then holds unconditionally).
    """
    n = formula.n
    if not 0 <= mu <= n:
        raise ValueError(f"mu={mu} outside [0, {n}]")
    if enumeration_guard is not None and n - mu > enumeration_guard:
        raise GuardError(
            f"scan would enumerate up to 2^{n - mu} solutions "
            f"(guard 2^{enumeration_guard})"
        )
    system = random_system(n, seed)
    trace = []
    u = mu
    all_sat = False
    rank_at_stop = 0
    for nu in range(n, mu - 1, -1):
        sub = prefix(system, nu)
        echelon = eliminate(sub)
        rank_at_stop = echelon.rank
        sat = _constrained_witness(formula, echelon) is not None
        trace.append((nu, sat))
        if sat:
            if nu == n:
                u = n
                all_sat = True
            else:
                u = nu + 1
            break
    else:
        u = mu
    return UpperResult(
        u=u,
        mu=mu,
        n=n,
        all_sat=all_sat,
        rank_at_stop=rank_at_stop,
        trace=tuple(trace),
    )
