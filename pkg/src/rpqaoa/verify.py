"""Cross-oracle verification suite.

Every closed-form quantity in this package has an independent route to the
same number; this module runs all of them at fixed seeds and reports one
line per check.  The pair-weight table is compared against direct numerical
quadrature of its defining integral; the depth-one probability formula is
compared against the statevector simulator; the angle-averaged closed form
is compared against Monte Carlo averaging; structural invariants
(normalisation, spin-flip symmetry, relabelling invariance, determinism)
are exercised on random instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .analytic import (
    pair_coefficients,
    rp_avg_distribution,
    single_depth_prob,
    two_level_prob,
    two_level_qmp_asymptote,
    two_level_table,
)
from .metrics import record_json_line
from .problems import CostTable, QuboInstance, build_cost_table, level_decomposition
from .qaoa_sim import (
    AngleSet,
    bitstring_probs,
    energy_distribution,
    mc_average_distribution,
    run_qaoa,
    uniform_distribution,
)
from .seeding import derive_seed, generator
from .sweep import (
    FAMILIES,
    FAMILY_MAXCUT,
    SweepConfig,
    make_instance,
    run_sweep,
)

VERIFY_SEED = 20240801


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    tolerance: float
    observed: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: observed={self.observed:.3e} tolerance={self.tolerance:.3e}"
        return text + (f" ({self.detail})" if self.detail else "")


def _wallis_moment(n: int, hb: int) -> float:
    """Quadrature oracle for the pair weight: (1/2**n)(1/pi) * beta moment."""
    value, _ = quad(
        lambda b: np.cos(b) ** (2 * (n - hb)) * np.sin(b) ** (2 * hb),
        0.0,
        np.pi,
        epsabs=1e-15,
        epsrel=1e-13,
        limit=200,
    )
    return value / np.pi / 2**n


def check_kernel_vs_integral(corrupt: bool = False) -> CheckResult:
    worst = 0.0
    for n in range(1, 11):
        coeff = np.array(pair_coefficients(n), copy=True)
        if corrupt:
            coeff[n // 2] *= 1.0 + 1e-9  # negative-control hook
        oracle = np.array([_wallis_moment(n, hb) for hb in range(n + 1)])
        worst = max(worst, float(np.max(np.abs(coeff - oracle) / oracle)))
    return CheckResult("pair_kernel_vs_quadrature", worst <= 1e-12, 1e-12, worst, "n=1..10")


def check_single_depth_vs_simulator(trials: int = 20) -> CheckResult:
    worst = 0.0
    for t in range(trials):
        rng = generator(VERIFY_SEED, 1, t)
        n = int(rng.integers(2, 7))
        inst = make_instance(FAMILIES[t % len(FAMILIES)], n, derive_seed(VERIFY_SEED, 2, t))
        table = build_cost_table(inst)
        beta1 = float(rng.uniform(0, np.pi))
        gamma1 = float(rng.uniform(0, 2 * np.pi))
        probs = bitstring_probs(run_qaoa(table, AngleSet(beta=[beta1], gamma=[gamma1])))
        formula = np.array([single_depth_prob(table, beta1, gamma1, x) for x in range(2**n)])
        worst = max(worst, float(np.max(np.abs(probs - formula))))
    return CheckResult("single_depth_vs_simulator", worst <= 1e-9, 1e-9, worst, f"{trials} trials")


def check_closed_form_vs_mc(per_family: int = 3, samples: int = 10_000) -> CheckResult:
    worst = 0.0
    for f, family in enumerate(FAMILIES):
        for i in range(per_family):
            inst = make_instance(family, 5, derive_seed(VERIFY_SEED, 3, f, i))
            table = build_cost_table(inst)
            spectrum = level_decomposition(table)
            exact = rp_avg_distribution(table, spectrum)
            mc = mc_average_distribution(table, spectrum, 1, samples, derive_seed(VERIFY_SEED, 4, f, i))
            gap = np.abs(mc.probs - exact.probs) / np.maximum(mc.stderr, 1e-300)
            worst = max(worst, float(gap.max()))
    return CheckResult(
        "closed_form_avg_vs_mc", worst <= 5.0, 5.0, worst,
        f"max |diff| in standard errors, {samples} samples",
    )


def check_two_level_closed_form() -> CheckResult:
    worst = 0.0
    for n in range(2, 9):
        table = two_level_table(n)
        spectrum = level_decomposition(table)
        dist = rp_avg_distribution(table, spectrum)
        worst = max(worst, abs(float(dist.probs[0]) - two_level_prob(n)))
    return CheckResult("two_level_closed_form", worst <= 1e-12, 1e-12, worst, "n=2..8")


def check_two_level_asymptote(n: int = 100) -> CheckResult:
    exact = two_level_prob(n) * 2**n
    gap = abs(exact - two_level_qmp_asymptote(n))
    return CheckResult("two_level_asymptote", gap <= 0.02, 0.02, gap, f"n={n}")


def check_statevector_norm(trials: int = 8) -> CheckResult:
    worst = 0.0
    for t in range(trials):
        rng = generator(VERIFY_SEED, 5, t)
        n = int(rng.integers(2, 8))
        inst = make_instance(FAMILIES[t % len(FAMILIES)], n, derive_seed(VERIFY_SEED, 6, t))
        table = build_cost_table(inst)
        p = int(rng.integers(1, 4))
        state = run_qaoa(table, AngleSet.random(p, rng))
        worst = max(worst, abs(state.norm() - 1.0))
    return CheckResult("statevector_norm", worst <= 1e-10, 1e-10, worst, f"{trials} trials")


def check_spin_flip_symmetry(trials: int = 6) -> CheckResult:
    """Zero-linear instances are invariant under flipping every spin."""
    worst = 0.0
    for t in range(trials):
        rng = generator(VERIFY_SEED, 7, t)
        n = int(rng.integers(2, 8))
        inst = make_instance(FAMILY_MAXCUT, n, derive_seed(VERIFY_SEED, 8, t))
        table = build_cost_table(inst)
        p = int(rng.integers(1, 4))
        probs = bitstring_probs(run_qaoa(table, AngleSet.random(p, rng)))
        worst = max(worst, float(np.max(np.abs(probs - probs[::-1]))))
    return CheckResult("spin_flip_symmetry", worst <= 1e-10, 1e-10, worst, f"{trials} trials")


def _permute_instance(inst: QuboInstance, perm: list[int]) -> QuboInstance:
    couplings = tuple(
        (min(perm[i], perm[j]), max(perm[i], perm[j]), s) for i, j, s in inst.couplings
    )
    linears = tuple((perm[i], s) for i, s in inst.linears)
    return QuboInstance(n=inst.n, couplings=couplings, linears=linears, kind=inst.kind)


def check_permutation_invariance(trials: int = 6) -> CheckResult:
    """Relabelling variables must leave the level distribution unchanged."""
    worst = 0.0
    for t in range(trials):
        rng = generator(VERIFY_SEED, 9, t)
        n = int(rng.integers(3, 7))
        inst = make_instance(FAMILIES[t % len(FAMILIES)], n, derive_seed(VERIFY_SEED, 10, t))
        perm = list(rng.permutation(n))
        other = _permute_instance(inst, perm)
        table_a = build_cost_table(inst)
        table_b = build_cost_table(other)
        spec_a = level_decomposition(table_a)
        spec_b = level_decomposition(table_b)
        if not np.array_equal(spec_a.values, spec_b.values) or not np.array_equal(
            spec_a.weights, spec_b.weights
        ):
            return CheckResult("permutation_invariance", False, 0.0, np.inf, "spectrum changed")
        worst = max(
            worst,
            float(
                np.max(
                    np.abs(
                        rp_avg_distribution(table_a, spec_a).probs
                        - rp_avg_distribution(table_b, spec_b).probs
                    )
                )
            ),
        )
    return CheckResult("permutation_invariance", worst <= 1e-12, 1e-12, worst, f"{trials} trials")


def check_distinct_costs_uniform() -> CheckResult:
    """A spectrum with all singleton levels must reproduce uniform sampling exactly."""
    n = 4
    table = CostTable(n=n, costs=np.arange(2**n, dtype=np.int64))
    spectrum = level_decomposition(table)
    exact = rp_avg_distribution(table, spectrum)
    uniform = uniform_distribution(spectrum)
    gap = float(np.max(np.abs(exact.probs - uniform.probs)))
    return CheckResult("distinct_costs_uniform", gap == 0.0, 0.0, gap, "exact equality")


def check_zero_angles_uniform() -> CheckResult:
    inst = make_instance(FAMILY_MAXCUT, 5, derive_seed(VERIFY_SEED, 11))
    table = build_cost_table(inst)
    spectrum = level_decomposition(table)
    probs = bitstring_probs(run_qaoa(table, AngleSet(beta=[0.0], gamma=[0.0])))
    dist = energy_distribution(probs, spectrum)
    gap = float(np.max(np.abs(dist.probs - uniform_distribution(spectrum).probs)))
    return CheckResult("zero_angles_uniform", gap <= 1e-10, 1e-10, gap, "beta=gamma=0")


def check_determinism() -> CheckResult:
    config = SweepConfig(
        source="ensemble", family=FAMILY_MAXCUT, n=5, count=4,
        method="mc_average", p=2, samples=50, master_seed=VERIFY_SEED,
    )
    lines_a = [record_json_line(r) for r in run_sweep(config)]
    lines_b = [record_json_line(r) for r in run_sweep(config)]
    mismatches = sum(a != b for a, b in zip(lines_a, lines_b)) + abs(len(lines_a) - len(lines_b))
    return CheckResult("determinism", mismatches == 0, 0.0, float(mismatches), "rerun JSONL bytes")


def run_verification(corrupt_kernel: bool = False) -> list[CheckResult]:
    """Run every check; `corrupt_kernel` is a negative-control hook for tests."""
    return [
        check_kernel_vs_integral(corrupt=corrupt_kernel),
        check_single_depth_vs_simulator(),
        check_closed_form_vs_mc(),
        check_two_level_closed_form(),
        check_two_level_asymptote(),
        check_statevector_norm(),
        check_spin_flip_symmetry(),
        check_permutation_invariance(),
        check_distinct_costs_uniform(),
        check_zero_angles_uniform(),
        check_determinism(),
    ]
