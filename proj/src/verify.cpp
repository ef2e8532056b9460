// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#include "qharness/verify.hpp"

#include <algorithm>
#include <cmath>

#include "qharness/binomial.hpp"
#include "qharness/markov.hpp"
#include "qharness/orthopoly.hpp"

namespace qharness::verify {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

CheckResult make_check(std::string name, double max_residual,
                       double tolerance) {
    const bool pass = max_residual <= tolerance;
    return CheckResult{std::move(name), max_residual, tolerance, pass};
}

double max_of(const std::vector<double>& values) {
    double out = 0.0;
    for (double v : values) out = std::max(out, v);
    return out;
}

}  // namespace

bool SuiteResult::passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

ProcessParams draw_params(std::mt19937_64& rng, int draw_index) {
    const double theta = uniform(rng, -2.0, 2.0);
    const double tau = uniform(rng, 0.0, 3.0);
    static const double boundary[] = {-0.99, 0.0, 0.5, 0.99, 1.0};
    const double q = draw_index < 5 ? boundary[draw_index]
                                    : uniform(rng, -0.95, 0.95);
    return ProcessParams(theta, tau, q);
}

void draw_times(std::mt19937_64& rng, double& s, double& t, double& u) {
    s = uniform(rng, 0.2, 1.2);
    t = s + uniform(rng, 0.2, 1.0);
    u = t + uniform(rng, 0.2, 1.0);
}

SuiteResult run_ck_suite(const SweepConfig& config) {
    std::mt19937_64 rng(config.seed);
    double worst = 0.0;
    for (int draw = 0; draw < config.sweep; ++draw) {
        const ProcessParams params = draw_params(rng, draw);
        double s, t, u;
        draw_times(rng, s, t, u);
        const double x = uniform(rng, -2.0, 2.0);
        worst = std::max(worst,
                         max_of(chapman_kolmogorov_residuals(
                             params, x, s, t, u, config.nodes, 8)));
    }
    SuiteResult out{"ck", {}};
    out.checks.push_back(
        make_check("chapman_kolmogorov_n_le_8", worst, 1e-8));
    return out;
}

SuiteResult run_martingale_suite(const SweepConfig& config) {
    std::mt19937_64 rng(config.seed);
    double worst = 0.0;
    double worst_low = 0.0;  // n = 1, 2: the exact mean/variance identities
    for (int draw = 0; draw < config.sweep; ++draw) {
        const ProcessParams params = draw_params(rng, draw);
        double s, t, u;
        draw_times(rng, s, t, u);
        const double x = uniform(rng, -2.0, 2.0);
        const auto residuals =
            martingale_projection_residuals(params, x, s, t, config.nodes, 8);
        const auto scales =
            eval_martingale_polynomials(params, s, x, 8);
        for (int n = 1; n <= 8; ++n) {
            const double scaled =
                residuals[static_cast<std::size_t>(n) - 1] /
                (1.0 + std::abs(scales[static_cast<std::size_t>(n)]));
            worst = std::max(worst, scaled);
            if (n <= 2) worst_low = std::max(worst_low, scaled);
        }
    }
    SuiteResult out{"martingale", {}};
    out.checks.push_back(make_check("projection_n_le_8", worst, 1e-8));
    out.checks.push_back(
        make_check("mean_and_variance_identities", worst_low, 1e-10));
    return out;
}

SuiteResult run_harness_suite(const SweepConfig& config) {
    std::mt19937_64 rng(config.seed);
    double worst = 0.0;
    double worst_ab = 0.0;
    for (int draw = 0; draw < config.sweep; ++draw) {
        const ProcessParams params = draw_params(rng, draw);
        double s, t, u;
        draw_times(rng, s, t, u);
        worst = std::max(worst, max_of(harness_moment_residuals(
                                    params, s, t, u, config.nodes, 6)));
        const HarnessCoefficients hc = harness_coeffs(s, t, u);
        worst_ab = std::max(worst_ab, std::abs(hc.a + hc.b - 1.0));
    }
    SuiteResult out{"harness", {}};
    out.checks.push_back(
        make_check("moment_identity_deg_le_6", worst, 1e-7));
    out.checks.push_back(make_check("a_plus_b_equals_1", worst_ab, 1e-12));
    return out;
}

SuiteResult run_qvar_suite(const SweepConfig& config) {
    std::mt19937_64 rng(config.seed);
    double worst_moments = 0.0;
    double worst_coeffs = 0.0;
    double worst_increment = 0.0;
    double worst_hankel = 0.0;  // negative part of the determinant
    for (int draw = 0; draw < config.sweep; ++draw) {
        const ProcessParams params = draw_params(rng, draw);
        double s, t, u;
        draw_times(rng, s, t, u);
        worst_moments = std::max(
            worst_moments, max_of(quadratic_variance_residuals(
                               params, s, t, u, config.nodes, 4)));

        const QuadraticVarianceCoefficients c = qv_coeffs(params, s, t, u);
        const double tests[5] = {
            std::abs(c.A + c.B + c.C - 1.0),
            std::abs(c.alpha + c.beta),
            std::abs((u - s) * c.B / c.D - (1.0 + params.q)),
            std::abs(c.A * s * s + c.B * s * u + c.C * u * u - t * t -
                     params.tau * c.D),
            std::abs(s * c.alpha + u * c.beta - params.theta * c.D)};
        for (double v : tests) worst_coeffs = std::max(worst_coeffs, v);

        const IncrementMoments inc =
            increment_moments(params, s, t, config.nodes);
        const double dt = t - s;
        const double m4_expected =
            dt * (6.0 * s + params.theta * params.theta - params.tau +
                  (2.0 + params.q) * (t + params.tau - 3.0 * s));
        worst_increment = std::max(
            worst_increment,
            std::max({std::abs(inc.m2 - dt) / std::max(1.0, dt),
                      std::abs(inc.m3 - params.theta * dt) /
                          std::max(1.0, std::abs(params.theta * dt)),
                      std::abs(inc.m4 - m4_expected) /
                          std::max(1.0, std::abs(m4_expected))}));
        worst_hankel =
            std::max(worst_hankel, -increment_hankel(inc, s, t));
    }
    SuiteResult out{"qvar", {}};
    out.checks.push_back(
        make_check("moment_identity_deg_le_4", worst_moments, 1e-7));
    out.checks.push_back(
        make_check("coefficient_relations", worst_coeffs, 1e-12));
    out.checks.push_back(
        make_check("increment_moments", worst_increment, 1e-8));
    out.checks.push_back(
        make_check("hankel_nonnegative", worst_hankel, 1e-10));
    return out;
}

SuiteResult run_identities_suite(const SweepConfig& config) {
    std::mt19937_64 rng(config.seed);
    double worst_conv = 0.0;
    double worst_expansion = 0.0;
    double worst_product = 0.0;
    for (int draw = 0; draw < config.sweep; ++draw) {
        // Degree identities hold for every q, the endpoints included.
        double theta = uniform(rng, -2.0, 2.0);
        double tau = uniform(rng, 0.0, 3.0);
        double q;
        switch (rng() % 4) {
            case 0: q = -1.0; break;
            case 1: q = 1.0; break;
            default: q = uniform(rng, -1.0, 1.0); break;
        }
        const ProcessParams params(theta, tau, q);
        double s, t, u;
        draw_times(rng, s, t, u);
        const double x = uniform(rng, -2.0, 2.0);
        const double y = uniform(rng, -2.0, 2.0);
        const double z = uniform(rng, -2.0, 2.0);
        for (int n = 1; n <= 8; ++n) {
            const auto lhs = eval_polynomials(
                PolynomialFamily::algebraic(params, x, s, u, n), z);
            const double scale =
                1.0 + std::abs(lhs[static_cast<std::size_t>(n)]);
            worst_conv = std::max(
                worst_conv,
                convolution_identity_residual(params, x, y, z, s, t, u, n) /
                    scale);
            const auto lhs2 = eval_polynomials(
                PolynomialFamily::algebraic(params, y, t, u, n), z);
            const double scale2 =
                1.0 + std::abs(lhs2[static_cast<std::size_t>(n)]);
            worst_expansion = std::max(
                worst_expansion,
                martingale_expansion_residual(params, y, z, t, u, n) /
                    scale2);
        }

        // Product law of the generating function, |q| <= 0.8, zeta well
        // inside the radius.
        const ProcessParams gen_params(theta, tau, uniform(rng, -0.8, 0.8));
        const double radius = std::min(
            {generating_function_radius(gen_params, x, y, s, t),
             generating_function_radius(gen_params, y, z, t, u),
             generating_function_radius(gen_params, x, z, s, u)});
        const double zeta = 0.3 * radius;
        const double lhs =
            generating_function(gen_params, zeta, z, x, s, u, 200);
        const double rhs =
            generating_function(gen_params, zeta, y, x, s, t, 200) *
            generating_function(gen_params, zeta, z, y, t, u, 200);
        worst_product = std::max(
            worst_product, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    SuiteResult out{"identities", {}};
    out.checks.push_back(
        make_check("convolution_identity_n_le_8", worst_conv, 1e-9));
    out.checks.push_back(
        make_check("martingale_expansion_n_le_8", worst_expansion, 1e-9));
    out.checks.push_back(
        make_check("generating_function_product", worst_product, 1e-8));
    return out;
}

SuiteResult run_binomial_suite(const SweepConfig& config) {
    (void)config;  // the chain checks are exact and need no sweep
    const std::vector<RateProfile> profiles = {
        RateProfile::constant(0.1, 5.0),
        RateProfile({0.0, 2.0, 5.0}, {0.05, 0.15}),
        RateProfile({0.0, 1.0, 3.0, 4.5}, {0.2, 0.02, 0.1}),
    };
    double worst_identities = 0.0;
    double worst_cov = 0.0;
    double worst_m_indep = 0.0;
    for (const RateProfile& profile : profiles) {
        const double s = 1.0;
        const double t = 2.0;
        const double u = 3.0;
        ChainCoefficients ref{};
        for (int m = 1; m <= 6; ++m) {
            const BinomialChain chain(m, profile);
            worst_identities = std::max(
                worst_identities,
                chain_identity_residuals(chain, s, t, u).max());

            // Covariance closed form against enumeration through the
            // two-time joint law.
            const auto P0s = chain_marginal(chain, s);
            const auto Pst = transition_matrix(chain, s, t);
            double e_s = 0.0, e_t = 0.0, e_st = 0.0;
            for (int i = 0; i <= m; ++i) {
                const double pi = P0s[static_cast<std::size_t>(i)];
                e_s += pi * i;
                for (int j = i; j <= m; ++j) {
                    const double pij =
                        pi * Pst[static_cast<std::size_t>(i)]
                                [static_cast<std::size_t>(j)];
                    e_t += pij * j;
                    e_st += pij * i * j;
                }
            }
            worst_cov = std::max(
                worst_cov, std::abs(e_st - e_s * e_t -
                                    chain_covariance(chain, s, t)));

            const ChainCoefficients fit =
                fit_chain_coefficients(chain, s, t, u);
            if (m == 1) {
                ref = fit;
            } else {
                worst_m_indep = std::max(
                    {worst_m_indep, std::abs(fit.a - ref.a),
                     std::abs(fit.b - ref.b), std::abs(fit.v - ref.v)});
            }
        }
    }
    SuiteResult out{"binomial", {}};
    out.checks.push_back(
        make_check("chain_identities_m_le_6", worst_identities, 1e-12));
    out.checks.push_back(make_check("covariance_closed_form", worst_cov, 1e-12));
    out.checks.push_back(
        make_check("coefficient_m_independence", worst_m_indep, 1e-12));
    return out;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "ck", "martingale", "harness", "qvar", "identities", "binomial"};
    return names;
}

SuiteResult run_suite(const std::string& name, const SweepConfig& config) {
    if (name == "ck") return run_ck_suite(config);
    if (name == "martingale") return run_martingale_suite(config);
    if (name == "harness") return run_harness_suite(config);
    if (name == "qvar") return run_qvar_suite(config);
    if (name == "identities") return run_identities_suite(config);
    if (name == "binomial") return run_binomial_suite(config);
    throw std::domain_error("run_suite: unknown suite '" + name + "'");
}

}  // namespace qharness::verify
