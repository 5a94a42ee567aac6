"""Checker verdicts: built-in theorems pass, doctored inputs fail with
re-verifiable witnesses, and reports merge deterministically."""

import dataclasses
import json

import pytest

from helpers import identical_agents_doc

from efxcheck.cardinal import ApproxFactor, LevelValue, build_subadditive, compare_scaled, level_sum_compare
from efxcheck.core import (
    ALL_BUNDLES,
    FULL_BUNDLE,
    N_AGENTS,
    N_ALLOCATIONS,
    allocation_from_counter,
    bundle_of,
    bundle_size,
    enumerate_allocations,
    members,
    rotate_allocation,
)
from efxcheck.ordinal import builtin_profile, is_efx, load_template
from efxcheck.verify import (
    GOLDEN_D_STAR,
    GOLDEN_D_STAR_ARGMIN_COUNT,
    GOLDEN_D_STAR_ARGMIN_COUNTER,
    GOLDEN_MIN_DEFICIT_ALL_NONEMPTY,
    Profile,
    VerdictReport,
    builtin,
    check_monotone,
    check_strict_consistency,
    check_subadditive,
    check_submodular,
    check_support_collapse,
    compute_deficit_profile,
    lemma_reports,
    profile_value_keys,
    property_reports,
    verify_cyclic_symmetry,
    verify_lemma_first_pair,
    verify_no_alpha_efx,
    verify_no_efx,
    verify_size_pattern_props,
    verify_transfer,
)


def _identical_profile() -> Profile:
    _, profile = load_template(identical_agents_doc())
    return Profile(kind="ordinal", ordinal=profile)


# --- main non-existence scans -------------------------------------------------


@pytest.mark.parametrize("kind", ["ordinal", "subadditive", "coverage"])
def test_no_efx_on_builtins(kind):
    report = verify_no_efx(builtin(kind))
    assert report.passed
    assert report.universe == report.checked == 6561
    assert dict(report.breakdown)["efx_allocations"] == 0
    assert not report.witnesses


def test_no_efx_fails_with_reverifiable_witnesses_on_identical_agents():
    report = verify_no_efx(_identical_profile(), witness_limit=5)
    assert not report.passed
    assert len(report.witnesses) == 5
    _, profile = load_template(identical_agents_doc())
    for witness in report.witnesses:
        allocation = tuple(bundle_of(goods) for goods in witness.allocation)
        assert is_efx(allocation, profile)


def test_alpha_scan_examples():
    sub = builtin("subadditive")
    assert verify_no_alpha_efx(sub, ApproxFactor.parse("9/10")).passed
    half = verify_no_alpha_efx(sub, ApproxFactor.parse("1/2"), witness_limit=3)
    assert not half.passed
    assert dict(half.breakdown)["alpha_efx_allocations"] == 5796
    at_base = verify_no_alpha_efx(sub, ApproxFactor.parse("lambda^1"))
    assert not at_base.passed
    assert dict(at_base.breakdown)["alpha_efx_allocations"] == GOLDEN_D_STAR_ARGMIN_COUNT


def test_alpha_at_base_matches_deficit_oracle():
    # an allocation satisfies the base-factor condition exactly when it
    # has no empty bundle and its worst rank deficit is at most one
    profile = builtin_profile()
    expected = sum(
        1
        for allocation in enumerate_allocations()
        if 0 not in allocation and _deficit_of(allocation, profile) <= 1
    )
    report = verify_no_alpha_efx(builtin("subadditive"), ApproxFactor.parse("lambda^1"))
    assert dict(report.breakdown)["alpha_efx_allocations"] == expected == 600


def test_alpha_witness_reverifies():
    sub = builtin("subadditive")
    alpha = ApproxFactor.parse("1/2")
    report = verify_no_alpha_efx(sub, alpha, witness_limit=2)
    payload = sub.subadditive
    for witness in report.witnesses:
        allocation = tuple(bundle_of(goods) for goods in witness.allocation)
        for i in range(N_AGENTS):
            own = payload.value(i, allocation[i])
            for j in range(N_AGENTS):
                if j == i:
                    continue
                for g in members(allocation[j]):
                    other = payload.value(i, allocation[j] ^ (1 << g))
                    assert compare_scaled(own, alpha, other)


def test_alpha_requires_subadditive_profile():
    with pytest.raises(ValueError):
        verify_no_alpha_efx(builtin("ordinal"), ApproxFactor.parse("9/10"))


def test_alpha_factor_range_is_enforced_upstream():
    for bad in ("0", "-1/2", "7/5"):
        with pytest.raises(ValueError):
            ApproxFactor.parse(bad)


def test_alpha_monotone_on_grid():
    sub = builtin("subadditive")
    grid = ["1/2", "0.85", "0.89", "0.9", "0.95", "1"]
    verdicts = [verify_no_alpha_efx(sub, ApproxFactor.parse(spec)).passed for spec in grid]
    # once the scan passes at some factor it passes at every larger one
    first_pass = verdicts.index(True)
    assert all(verdicts[first_pass:])
    assert not any(verdicts[:first_pass])


# --- deficits -----------------------------------------------------------------


def _deficit_of(allocation, profile) -> int:
    worst = 0
    for i in range(N_AGENTS):
        table = profile.rank_tables[i]
        own = table[allocation[i]]
        for j in range(N_AGENTS):
            if j == i:
                continue
            for g in members(allocation[j]):
                worst = max(worst, table[allocation[j] ^ (1 << g)] - own)
    return worst


def test_deficit_profile_matches_golden_data():
    deficit = compute_deficit_profile(builtin("ordinal"))
    assert deficit.d_star == GOLDEN_D_STAR == 1
    assert deficit.argmin_count == GOLDEN_D_STAR_ARGMIN_COUNT
    assert deficit.argmin_counters[0] == GOLDEN_D_STAR_ARGMIN_COUNTER
    assert deficit.min_deficit_all_nonempty == GOLDEN_MIN_DEFICIT_ALL_NONEMPTY
    assert deficit.alpha_star_exact() == "2^(-1/6)"
    assert deficit.alpha_star_decimal() == "0.8908987181"


def test_deficit_histogram_has_no_zero_and_counts_everything():
    deficit = compute_deficit_profile(builtin("ordinal"))
    histogram = dict(deficit.histogram)
    assert 0 not in histogram
    assert sum(histogram.values()) == N_ALLOCATIONS
    assert len(deficit.deficits) == N_ALLOCATIONS
    assert min(deficit.deficits) == deficit.d_star


def test_deficit_argmin_reverifies():
    deficit = compute_deficit_profile(builtin("ordinal"))
    profile = builtin_profile()
    for allocation in deficit.argmin_allocations():
        assert _deficit_of(allocation, profile) == deficit.d_star


def test_deficit_vector_spot_checks():
    deficit = compute_deficit_profile(builtin("ordinal"))
    profile = builtin_profile()
    # counter 0 gives every good to agent 0
    assert allocation_from_counter(0) == (FULL_BUNDLE, 0, 0)
    assert deficit.deficit_of_counter(0) == 7
    for counter in range(0, N_ALLOCATIONS, 487):
        assert deficit.deficits[counter] == _deficit_of(allocation_from_counter(counter), profile)


def test_deficit_of_degenerate_allocation_is_seven():
    assert _deficit_of((FULL_BUNDLE, 0, 0), builtin_profile()) == 7


def test_no_efx_pass_iff_d_star_positive():
    report = verify_no_efx(builtin("ordinal"))
    deficit = compute_deficit_profile(builtin("ordinal"))
    assert report.passed == (deficit.d_star >= 1)


# --- property checkers ---------------------------------------------------------


def test_property_suites_all_pass():
    for kind in ("ordinal", "subadditive", "coverage"):
        for report in property_reports(builtin(kind)):
            assert report.passed, report.claim


def test_monotone_adversarial_double_fails():
    table = tuple(bundle_size(b) % 3 for b in ALL_BUNDLES)
    report = check_monotone(table, "monotone(doctored)")
    assert not report.passed
    witness = report.witnesses[0]
    extended = bundle_of(witness.bundle_s) | (1 << witness.good_g)
    assert table[extended] < table[bundle_of(witness.bundle_s)]


def test_subadditive_adversarial_double_fails():
    # doubled exponents fall fast enough that two size-4 halves lose to
    # the full bundle
    table = tuple(None if b == 0 else 2 * (8 - bundle_size(b)) for b in ALL_BUNDLES)
    report = check_subadditive(table, "subadditive(doctored)")
    assert not report.passed
    witness = report.witnesses[0]
    s, t = bundle_of(witness.bundle_s), bundle_of(witness.bundle_t)
    values = [LevelValue.power(table[s]), LevelValue.power(table[t])]
    assert level_sum_compare(values, LevelValue.power(table[s | t])) < 0


def test_submodular_adversarial_double_fails():
    table = tuple(bundle_size(b) ** 2 for b in ALL_BUNDLES)
    report = check_submodular(table, "submodular(doctored)")
    assert not report.passed
    witness = report.witnesses[0]
    s, t, g = bundle_of(witness.bundle_s), bundle_of(witness.bundle_t), witness.good_g
    assert table[s | (1 << g)] - table[s] < table[t | (1 << g)] - table[t]


def test_submodular_counts_nested_pairs():
    report = check_submodular(builtin("coverage").coverage.value_tables[0], "submodular(coverage[0])")
    assert report.checked == 8 * 3**7


def test_strict_consistency_constant_function_fails():
    ranks = builtin_profile().rank_tables[0]
    constant = tuple(1 for _ in ALL_BUNDLES)
    report = check_strict_consistency(ranks, constant, "strict_consistency(doctored)")
    assert not report.passed
    assert report.witnesses


def test_support_collapse_pass_and_class_count():
    profile = builtin_profile()
    report = check_support_collapse(
        profile.rank_tables[0], profile.support_labels, "support_collapse(rank[0])"
    )
    assert report.passed
    assert dict(report.breakdown)["support_classes"] == 32


def test_support_collapse_adversarial_double_fails():
    profile = builtin_profile()
    table = tuple(bundle_size(b) for b in ALL_BUNDLES)  # depends on multiplicity
    report = check_support_collapse(table, profile.support_labels, "support_collapse(doctored)")
    assert not report.passed


# --- lemma checkers -------------------------------------------------------------


def test_first_pair_restriction_passes_and_xy_absent():
    report = verify_lemma_first_pair(builtin("ordinal"))
    assert report.passed
    assert report.universe == 1400  # (2,2,4), (2,4,2) and (2,3,3) classes
    labels = {
        key.removeprefix("feasible_first_pair[").removesuffix("]")
        for key in dict(report.breakdown)
    }
    assert labels <= {"Ax", "Ay", "BC", "By", "Cy"}
    assert "xy" not in labels


def test_no_feasible_ax_pair_with_sizes_2_2_4():
    # in the (2,2,4) class the first pair can never be of type Ax
    from efxcheck.ordinal import efx_feasible

    profile = builtin_profile()
    count = 0
    for allocation in enumerate_allocations():
        if tuple(bundle_size(b) for b in allocation) != (2, 2, 4):
            continue
        if profile.support_labels[allocation[0]] != "Ax":
            continue
        if efx_feasible(0, allocation, profile):
            count += 1
    assert count == 0


def test_size_pattern_propositions():
    report = verify_size_pattern_props(builtin("ordinal"))
    assert report.passed
    breakdown = dict(report.breakdown)
    assert breakdown["universe[small_first]"] == 1280
    assert breakdown["universe[(2,2,4)]"] == 420
    assert breakdown["universe[(2,3,3)]"] == 560
    assert breakdown["efx[small_first]"] == 0
    assert breakdown["efx[(2,2,4)]"] == 0
    assert breakdown["efx[(2,3,3)]"] == 0
    assert breakdown["size_triples_covered"] == 1


def test_cyclic_symmetry_builtins_and_template():
    for kind in ("ordinal", "subadditive", "coverage"):
        report = verify_cyclic_symmetry(builtin(kind))
        assert report.passed
        assert dict(report.breakdown)["efx_allocations"] == 0
    report = verify_cyclic_symmetry(_identical_profile())
    assert report.passed
    assert dict(report.breakdown)["efx_allocations"] == 5796


def test_identical_template_efx_set_closed_under_rotation():
    _, profile = load_template(identical_agents_doc())
    efx_set = {a for a in enumerate_allocations() if is_efx(a, profile)}
    assert efx_set
    for allocation in efx_set:
        assert rotate_allocation(allocation, profile.permutation) in efx_set


def test_transfer_passes_for_both_realizations():
    ordinal = builtin("ordinal")
    for kind in ("subadditive", "coverage"):
        report = verify_transfer(ordinal, builtin(kind))
        assert report.passed
        assert dict(report.breakdown)["ordinal_witness_triples"] == report.checked > 0


def test_transfer_empty_bundle_case():
    # ordinal witness against an empty bundle moves to values 0 vs positive
    sub = builtin("subadditive").subadditive
    allocation = (FULL_BUNDLE, 0, 0)
    own = sub.value(1, allocation[1])
    other = sub.value(1, allocation[0] ^ 1)
    assert own == LevelValue.zero()
    assert other > own


def test_transfer_rejects_foreign_ordinal_profile():
    foreign = _identical_profile()
    with pytest.raises(ValueError):
        verify_transfer(foreign, builtin("subadditive"))


def test_cardinal_efx_subset_of_ordinal_efx_on_template():
    _, profile = load_template(identical_agents_doc())
    ordinal = Profile(kind="ordinal", ordinal=profile)
    cardinal = Profile(kind="subadditive", ordinal=profile, subadditive=build_subadditive(profile))
    ordinal_keys = profile_value_keys(ordinal)
    cardinal_keys = profile_value_keys(cardinal)

    def efx_under(keys, allocation):
        for i in range(N_AGENTS):
            own = keys[i][allocation[i]]
            for j in range(N_AGENTS):
                if j == i:
                    continue
                for g in members(allocation[j]):
                    if keys[i][allocation[j] ^ (1 << g)] > own:
                        return False
        return True

    for allocation in enumerate_allocations():
        if efx_under(cardinal_keys, allocation):
            assert efx_under(ordinal_keys, allocation)


def test_lemma_reports_all_pass():
    for report in lemma_reports():
        assert report.passed, report.claim


# --- report plumbing -------------------------------------------------------------


def test_report_json_roundtrip():
    report = verify_no_efx(_identical_profile(), witness_limit=3)
    normalized = dataclasses.replace(report, elapsed_ms=0)
    parsed = VerdictReport.from_dict(json.loads(json.dumps(normalized.to_dict())))
    assert parsed == normalized


def test_parallel_matches_sequential():
    sequential = verify_no_efx(builtin("ordinal"), workers=1)
    parallel = verify_no_efx(builtin("ordinal"), workers=3)
    assert sequential.to_dict(deterministic=True) == parallel.to_dict(deterministic=True)

    seq_deficit = compute_deficit_profile(builtin("ordinal"), workers=1)
    par_deficit = compute_deficit_profile(builtin("ordinal"), workers=3)
    assert (seq_deficit.d_star, seq_deficit.argmin_counters, seq_deficit.argmin_count,
            seq_deficit.histogram) == (
        par_deficit.d_star, par_deficit.argmin_counters, par_deficit.argmin_count,
        par_deficit.histogram)


def test_witness_limit_respected():
    report = verify_no_efx(_identical_profile(), witness_limit=0)
    assert not report.passed
    assert report.witnesses == ()
    assert dict(report.breakdown)["efx_allocations"] == 5796


def test_zero_witness_limit_still_fails_violating_inputs():
    # a verdict must never depend on how many witnesses were kept
    doctored_monotone = tuple(bundle_size(b) % 3 for b in ALL_BUNDLES)
    assert not check_monotone(doctored_monotone, "doctored", witness_limit=0).passed
    doctored_sub = tuple(None if b == 0 else 2 * (8 - bundle_size(b)) for b in ALL_BUNDLES)
    assert not check_subadditive(doctored_sub, "doctored", witness_limit=0).passed
    doctored_submod = tuple(bundle_size(b) ** 2 for b in ALL_BUNDLES)
    assert not check_submodular(doctored_submod, "doctored", witness_limit=0).passed
    ranks = builtin_profile().rank_tables[0]
    constant = tuple(1 for _ in ALL_BUNDLES)
    assert not check_strict_consistency(ranks, constant, "doctored", witness_limit=0).passed
    report = verify_cyclic_symmetry(_identical_profile(), witness_limit=0)
    assert report.passed  # rotation symmetry genuinely holds here
    assert report.witnesses == ()


def test_every_witness_in_a_battery_reverifies():
    # Re-evaluating any reported witness standalone must reproduce its
    # violation, across claim kinds.
    identical = _identical_profile()
    sub = builtin("subadditive")
    half = ApproxFactor.parse("1/2")
    doctored_monotone = tuple(bundle_size(b) % 3 for b in ALL_BUNDLES)
    doctored_sub = tuple(None if b == 0 else 2 * (8 - bundle_size(b)) for b in ALL_BUNDLES)
    doctored_submod = tuple(bundle_size(b) ** 2 for b in ALL_BUNDLES)

    def reverify_efx(report, profile):
        keys = profile_value_keys(profile)
        for witness in report.witnesses:
            allocation = tuple(bundle_of(goods) for goods in witness.allocation)
            for i in range(N_AGENTS):
                own = keys[i][allocation[i]]
                for j in range(N_AGENTS):
                    if j == i:
                        continue
                    for g in members(allocation[j]):
                        assert keys[i][allocation[j] ^ (1 << g)] <= own

    def reverify_alpha(report, profile, alpha):
        payload = profile.subadditive
        for witness in report.witnesses:
            allocation = tuple(bundle_of(goods) for goods in witness.allocation)
            for i in range(N_AGENTS):
                own = payload.value(i, allocation[i])
                for j in range(N_AGENTS):
                    if j == i:
                        continue
                    for g in members(allocation[j]):
                        assert compare_scaled(own, alpha, payload.value(i, allocation[j] ^ (1 << g)))

    report = verify_no_efx(identical, witness_limit=8)
    reverify_efx(report, identical)

    report = verify_no_alpha_efx(sub, half, witness_limit=8)
    reverify_alpha(report, sub, half)

    report = check_monotone(doctored_monotone, "doctored", witness_limit=8)
    for witness in report.witnesses:
        s = bundle_of(witness.bundle_s)
        assert doctored_monotone[s | (1 << witness.good_g)] < doctored_monotone[s]

    report = check_subadditive(doctored_sub, "doctored", witness_limit=8)
    for witness in report.witnesses:
        s, t = bundle_of(witness.bundle_s), bundle_of(witness.bundle_t)
        values = [LevelValue.power(doctored_sub[s]), LevelValue.power(doctored_sub[t])]
        assert level_sum_compare(values, LevelValue.power(doctored_sub[s | t])) < 0

    report = check_submodular(doctored_submod, "doctored", witness_limit=8)
    for witness in report.witnesses:
        s, t, g = bundle_of(witness.bundle_s), bundle_of(witness.bundle_t), witness.good_g
        bit = 1 << g
        assert doctored_submod[s | bit] - doctored_submod[s] < doctored_submod[t | bit] - doctored_submod[t]

    constant = tuple(1 for _ in ALL_BUNDLES)
    ranks = builtin_profile().rank_tables[0]
    report = check_strict_consistency(ranks, constant, "doctored", witness_limit=8)
    for witness in report.witnesses:
        s, t = bundle_of(witness.bundle_s), bundle_of(witness.bundle_t)
        assert ranks[s] > ranks[t] and constant[s] <= constant[t]


def test_counter_order_of_witnesses():
    report = verify_no_efx(_identical_profile(), witness_limit=4)
    counters = []
    for witness in report.witnesses:
        allocation = tuple(bundle_of(goods) for goods in witness.allocation)
        from efxcheck.core import counter_of_allocation

        counters.append(counter_of_allocation(allocation))
    assert counters == sorted(counters)
    # the first witness is the first EFX allocation in counter order
    _, profile = load_template(identical_agents_doc())
    for counter in range(counters[0]):
        assert not is_efx(allocation_from_counter(counter), profile)
