"""Shared randomized generators (seeded, deterministic).

Only decimal-representable rationals (denominators 2^a * 5^b) are ever
generated, so every random model is LP/MPS-emittable; all bounds are kept
finite so lowering never lacks a box.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import settings

import typedmilp as tm

settings.register_profile("suite", max_examples=60, deadline=None)
settings.load_profile("suite")

FAMILIES = (
    "bound",
    "conditional_bound",
    "balance",
    "set_packing",
    "set_partitioning",
    "set_covering",
    "variable_fix",
    "if_then",
    "either_or",
    "raw_row",
)

_DENOMS = (1, 1, 1, 1, 2, 2, 4, 5, 10)


def rand_rational(rng: random.Random, lo: int = -6, hi: int = 6,
                  integer_only: bool = False) -> Fraction:
    den = 1 if integer_only else rng.choice(_DENOMS)
    return Fraction(rng.randint(lo * den, hi * den), den)


def rand_expr(rng: random.Random, var_ids: list[str], max_terms: int = 3,
              with_constant: bool = True, integer_only: bool = False) -> tm.LinearExpr:
    chosen = rng.sample(var_ids, k=min(len(var_ids), rng.randint(1, max_terms)))
    pairs = []
    for var in chosen:
        coeff = rand_rational(rng, -4, 4, integer_only)
        if coeff == 0:
            coeff = Fraction(1)
        pairs.append((var, coeff))
    constant = (rand_rational(rng, -3, 3, integer_only)
                if with_constant and rng.random() < 0.5 else Fraction(0))
    return tm.LinearExpr.weighted(pairs, constant)


class InstanceBuilder:
    """Random model + one typed constraint of a requested family."""

    def __init__(self, rng: random.Random, max_box_points: int = 2000,
                 allow_continuous: bool = True, integer_data: bool = False):
        self.rng = rng
        self.max_box_points = max_box_points
        self.allow_continuous = allow_continuous
        self.integer_data = integer_data

    def _fresh_model(self) -> tm.Model:
        return tm.Model(f"random-{self.rng.randrange(10**6)}")

    def _rational(self, lo: int = -6, hi: int = 6) -> Fraction:
        return rand_rational(self.rng, lo, hi, self.integer_data)

    def _expr(self, var_ids: list[str], max_terms: int = 3) -> tm.LinearExpr:
        return rand_expr(self.rng, var_ids, max_terms, integer_only=self.integer_data)

    def _add_vars(self, model: tm.Model, n_binary: int, n_numeric: int) -> tuple[list[str], list[str]]:
        binaries = [model.binary(f"b{k}") for k in range(n_binary)]
        numerics = []
        budget = self.max_box_points // max(1, 2**n_binary)
        for k in range(n_numeric):
            # spend the remaining box budget roughly evenly over the
            # variables left, so large budgets really produce large boxes
            per_var = max(2, round(budget ** (1 / (n_numeric - k))))
            size = self.rng.randint(2, min(per_var, 150))
            lo = self.rng.randint(-4, 2)
            budget = max(1, budget // size)
            if self.allow_continuous and self.rng.random() < 0.25:
                numerics.append(model.continuous(f"y{k}", lo, lo + size - 1))
            else:
                numerics.append(model.integer(f"n{k}", lo, lo + size - 1))
        return binaries, numerics

    def build(self, family: str) -> tuple[tm.Model, tm.TypedConstraint]:
        rng = self.rng
        model = self._fresh_model()
        if family == "bound":
            _, nums = self._add_vars(model, 0, rng.randint(1, 3))
            expr = self._expr(nums)
            sense = rng.choice([tm.Sense.LE, tm.Sense.GE])
            if rng.random() < 0.5:
                bound: tm.LinearExpr | Fraction = self._rational()
            else:
                bound = self._expr(nums, max_terms=2)
            return model, tm.Bound(expr, sense, bound)
        if family == "conditional_bound":
            bins, nums = self._add_vars(model, 1, rng.randint(1, 2))
            expr = self._expr(nums)
            sense = rng.choice([tm.Sense.LE, tm.Sense.GE])
            off = rng.choice([tm.OffBehavior.FORCE_ZERO, tm.OffBehavior.FREE])
            if rng.random() < 0.5:
                bound = self._rational()
            else:
                bound = self._expr(nums, max_terms=1)
            return model, tm.ConditionalBound(expr, sense, bound, bins[0], off)
        if family == "balance":
            _, nums = self._add_vars(model, 0, rng.randint(2, 3))
            flavor = rng.choice(list(tm.BalanceFlavor))
            return model, tm.Balance(self._expr(nums), self._expr(nums), flavor)
        if family in ("set_packing", "set_partitioning", "set_covering"):
            max_members = max(2, min(14, int(math.log2(max(4, self.max_box_points)))))
            bins, _ = self._add_vars(model, rng.randint(2, max_members), 0)
            cls = {"set_packing": tm.SetPacking, "set_partitioning": tm.SetPartitioning,
                   "set_covering": tm.SetCovering}[family]
            weights = None
            if rng.random() < 0.4:
                weights = tuple(Fraction(rng.randint(1, 3)) for _ in bins)
            rhs = rng.randint(1, max(1, len(bins) - 1))
            return model, cls(members=tuple(bins), weights=weights, rhs=rhs)
        if family == "variable_fix":
            _, nums = self._add_vars(model, 0, 1)
            var = model.variable(nums[0])
            if rng.random() < 0.7:
                value = Fraction(rng.randint(math.ceil(var.lower), math.floor(var.upper)))
            else:
                value = self._rational()
            return model, tm.VariableFix(nums[0], value)
        if family == "if_then":
            max_literals = max(2, min(12, int(math.log2(max(4, self.max_box_points)))))
            bins, _ = self._add_vars(model, rng.randint(2, max_literals), 0)
            k = rng.randint(1, min(3, len(bins) - 1))
            antecedents = tuple(rng.sample(bins, k))
            m = rng.randint(1, min(3, len(bins)))
            consequents = tuple(rng.sample(bins, m))
            return model, tm.IfThen(antecedents, consequents)
        if family == "either_or":
            _, nums = self._add_vars(model, 0, rng.randint(1, 2))
            alts = tuple(
                tm.Alternative(self._expr(nums, max_terms=2),
                               rng.choice([tm.Sense.LE, tm.Sense.GE]),
                               self._rational())
                for _ in range(rng.randint(2, 3))
            )
            return model, tm.EitherOr(alts)
        if family == "raw_row":
            _, nums = self._add_vars(model, 0, rng.randint(1, 3))
            sense = rng.choice([tm.Sense.LE, tm.Sense.EQ, tm.Sense.GE])
            return model, tm.RawRow(self._expr(nums), sense, self._rational())
        raise AssertionError(family)


def random_model(rng: random.Random, max_constraints: int = 6) -> tm.Model:
    """A validated multi-constraint model with an objective."""
    model = tm.Model(f"rand-model-{rng.randrange(10**6)}")
    binaries = [model.binary(f"b{k}") for k in range(rng.randint(2, 4))]
    integers = [model.integer(f"n{k}", rng.randint(-3, 0), rng.randint(1, 5))
                for k in range(rng.randint(1, 3))]
    continuous = [model.continuous(f"y{k}", 0, rng.randint(1, 4))
                  for k in range(rng.randint(0, 2))]
    numerics = integers + continuous
    pool = binaries + numerics
    for _ in range(rng.randint(1, max_constraints)):
        kind = rng.random()
        if kind < 0.25:
            model.add_constraint(tm.Bound(
                rand_expr(rng, numerics), rng.choice([tm.Sense.LE, tm.Sense.GE]),
                rand_rational(rng), label=f"lim{rng.randrange(100)}"))
        elif kind < 0.4:
            model.add_constraint(tm.SetPacking(
                members=tuple(rng.sample(binaries, rng.randint(1, len(binaries)))),
                rhs=1, label="pick"))
        elif kind < 0.55:
            model.add_constraint(tm.Balance(
                rand_expr(rng, numerics), rand_expr(rng, numerics),
                rng.choice(list(tm.BalanceFlavor))))
        elif kind < 0.7:
            model.add_constraint(tm.ConditionalBound(
                rand_expr(rng, numerics, max_terms=2),
                rng.choice([tm.Sense.LE, tm.Sense.GE]),
                rand_rational(rng), rng.choice(binaries),
                rng.choice([tm.OffBehavior.FORCE_ZERO, tm.OffBehavior.FREE])))
        elif kind < 0.85:
            model.add_constraint(tm.IfThen(
                tuple(rng.sample(binaries, 1)),
                tuple(rng.sample(binaries, rng.randint(1, 2)))))
        else:
            model.add_constraint(tm.EitherOr((
                tm.Alternative(rand_expr(rng, pool, max_terms=2), tm.Sense.LE, rand_rational(rng)),
                tm.Alternative(rand_expr(rng, pool, max_terms=2), tm.Sense.GE, rand_rational(rng)),
            )))
    model.set_objective(
        rng.choice([tm.Direction.MIN, tm.Direction.MAX]),
        rand_expr(rng, pool, max_terms=4))
    return model


@pytest.fixture
def rng():
    return random.Random(20240811)
