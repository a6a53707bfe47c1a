import json
import math

import pytest

from sharpcount.formula import (
    CnfFormula,
    GuardError,
    brute_force_count,
    evaluate,
    make_clause,
    random_kcnf,
)
from sharpcount.gf2 import Gf2System, prefix, random_system
from sharpcount.upper import ConstrainedFormula, is_satisfiable_constrained, upper_bound


def F(n, *clauses):
    return CnfFormula(n, tuple(make_clause(c) for c in clauses))


class TestConstrainedSat:
    def test_unsat_formula(self):
        cf = ConstrainedFormula(F(3, [1], [-1]), prefix(random_system(3, 1), 2), 2)
        sat, witness = is_satisfiable_constrained(cf)
        assert not sat and witness is None

    def test_empty_formula_consistent_system(self):
        system = Gf2System(3, (0b011,), (1,))
        cf = ConstrainedFormula(CnfFormula(3, ()), system, 1)
        sat, witness = is_satisfiable_constrained(cf)
        assert sat

    def test_witness_from_derived_solutions(self):
        # linear system solutions are (1,0,0) and (0,1,1); both satisfy F
        f = F(3, [1, 2])
        system = Gf2System(3, (0b011, 0b110), (1, 0))
        sat, witness = is_satisfiable_constrained(ConstrainedFormula(f, system, 2))
        assert sat and witness in (0b001, 0b110)

    def test_witness_satisfies_both(self):
        for seed in range(25):
            f = random_kcnf(10, 20, 3, seed)
            s = prefix(random_system(10, seed), 4)
            sat, witness = is_satisfiable_constrained(ConstrainedFormula(f, s, 4))
            if sat:
                from sharpcount.gf2 import satisfies

                assert satisfies(s, witness)
                from sharpcount.formula import evaluate_bits

                assert evaluate_bits(f, witness)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            ConstrainedFormula(F(3, [1]), random_system(4, 1), 4)


class TestUpperBound:
    def test_unsat_formula_hits_floor(self):
        result = upper_bound(F(6, [1], [-1]), 2, 7)
        assert result.u == 2 and result.bound == 32
        assert all(not sat for _, sat in result.trace)

    def test_mu_equals_n(self):
        f = CnfFormula(6, ())
        for seed in range(5):
            result = upper_bound(f, 6, seed)
            assert result.u == 6
            assert result.bound == 1 << 9

    def test_trace_is_monotone_step(self):
        for seed in range(40):
            f = random_kcnf(10, 20, 3, seed)
            result = upper_bound(f, 0, seed)
            sats = [sat for _, sat in result.trace]
            # scan stops at the first satisfiable prefix: all False then one True
            assert all(not s for s in sats[:-1])
            assert result.mu <= result.u <= result.n
            assert result.bound == 1 << (result.u + 3)

    def test_unconditional_envelope(self):
        # u = n means U = 2^{n+3} >= 2^n >= #F always
        result = upper_bound(CnfFormula(4, ()), 4, 0)
        assert result.bound >= brute_force_count(CnfFormula(4, ()))

    def test_statistical_contract_empty_formula(self):
        f = CnfFormula(12, ())  # #F = 4096, log2 = 12
        in_band = 0
        bound_ok = 0
        for seed in range(100):
            result = upper_bound(f, 0, seed)
            if result.bound >= 4096:
                bound_ok += 1
            if 9 <= result.u <= 15:
                in_band += 1
        assert bound_ok >= 60
        assert in_band >= 60

    def test_mu_validation_and_guard(self):
        with pytest.raises(ValueError):
            upper_bound(F(3, [1]), 4, 0)
        with pytest.raises(GuardError):
            upper_bound(CnfFormula(40, ()), 0, 0, enumeration_guard=26)

    def test_json_schema(self):
        payload = json.loads(upper_bound(F(4, [1]), 0, 3).to_json())
        assert set(payload) == {"u", "U", "mu", "n", "all_sat", "rank_at_stop", "trace"}
        assert payload["U"] == 2 ** (payload["u"] + 3)
