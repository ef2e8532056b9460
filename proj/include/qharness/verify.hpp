// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qharness/qcore.hpp"

namespace qharness::verify {

/// One named check: the worst residual observed across a sweep and the
/// tolerance it is held to.
struct CheckResult {
    std::string name;
    double max_residual;
    double tolerance;
    bool pass;
};

struct SuiteResult {
    std::string name;
    std::vector<CheckResult> checks;

    bool passed() const;
};

struct SweepConfig {
    int sweep = 50;                      // number of random parameter draws
    std::uint64_t seed = 0x51ab5eedULL;  // sweep RNG seed
    int nodes = 80;                      // quadrature nodes
};

/// Random admissible parameters: theta in [-2,2], tau in [0,3]. The first
/// five draws of a sweep (draw_index 0..4) pin q to the boundary-adjacent
/// set {-0.99, 0, 0.5, 0.99, 1} so every sweep covers them; later draws
/// sample q uniformly. q = -1 is never drawn here (two-point kernels have
/// their own exact checks).
ProcessParams draw_params(std::mt19937_64& rng, int draw_index);

/// Ordered times 0 < s < t < u with gaps bounded away from zero.
void draw_times(std::mt19937_64& rng, double& s, double& t, double& u);

SuiteResult run_ck_suite(const SweepConfig& config);
SuiteResult run_martingale_suite(const SweepConfig& config);
SuiteResult run_harness_suite(const SweepConfig& config);
SuiteResult run_qvar_suite(const SweepConfig& config);
SuiteResult run_identities_suite(const SweepConfig& config);
SuiteResult run_binomial_suite(const SweepConfig& config);

const std::vector<std::string>& suite_names();

/// Run one suite by name; "all" is not accepted here (callers expand it).
SuiteResult run_suite(const std::string& name, const SweepConfig& config);

}  // namespace qharness::verify
