#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "qharness/markov.hpp"
#include "qharness/orthopoly.hpp"

using namespace qharness;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// Independent oracle: solve the six linear relations among the
// quadratic-variance coefficients by Gaussian elimination.
std::array<double, 6> solve_qv_system(double theta, double tau, double q,
                                      double s, double t, double u) {
    double m[6][7] = {
        // A      B      C      D        alpha beta | rhs
        {s, s, u, 1.0, 0.0, 0.0, t},
        {1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0},
        {s * s, s * u, u * u, -tau, 0.0, 0.0, t * t},
        {0.0, 0.0, 0.0, -theta, s, u, 0.0},
        {0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0},
        {0.0, u - s, 0.0, -(1.0 + q), 0.0, 0.0, 0.0},
    };
    for (int col = 0; col < 6; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 6; ++row) {
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
        }
        for (int j = 0; j < 7; ++j) std::swap(m[col][j], m[pivot][j]);
        REQUIRE(std::abs(m[col][col]) > 1e-14);
        for (int row = 0; row < 6; ++row) {
            if (row == col) continue;
            const double f = m[row][col] / m[col][col];
            for (int j = col; j < 7; ++j) m[row][j] -= f * m[col][j];
        }
    }
    std::array<double, 6> out{};
    for (int i = 0; i < 6; ++i) out[static_cast<std::size_t>(i)] = m[i][6] / m[i][i];
    return out;
}

DiscreteMeasure two_point_measure(const ProcessParams& params, double x,
                                  double s, double t) {
    return kernel_measure(
        transition_kernel(params, KernelCoordinates(x, s, t), 4));
}

}  // namespace

TEST_CASE("harness coefficients") {
    const auto mid = harness_coeffs(0.0, 1.0, 2.0);
    CHECK(mid.a == doctest::Approx(0.5));
    CHECK(mid.b == doctest::Approx(0.5));
    const auto skew = harness_coeffs(1.0, 2.0, 4.0);
    CHECK(skew.a == doctest::Approx(2.0 / 3.0));
    CHECK(skew.b == doctest::Approx(1.0 / 3.0));
    // t -> s+ pushes all weight to the past value.
    const auto tight = harness_coeffs(1.0, 1.0 + 1e-9, 2.0);
    CHECK(tight.a == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(tight.b == doctest::Approx(0.0).epsilon(1e-8));
    CHECK_THROWS_AS(harness_coeffs(2.0, 1.0, 3.0), std::domain_error);
    CHECK_THROWS_AS(harness_coeffs(1.0, 1.0, 3.0), std::domain_error);
}

TEST_CASE("quadratic-variance coefficients") {
    SUBCASE("frozen case from the linear-system oracle") {
        // q=1, tau=0, theta=0, (s,t,u)=(1,2,3): (A,B,C,D,alpha,beta) =
        // (1/4, 1/2, 1/4, 1/2, 0, 0).
        const auto oracle = solve_qv_system(0.0, 0.0, 1.0, 1.0, 2.0, 3.0);
        CHECK(oracle[0] == doctest::Approx(0.25));
        CHECK(oracle[1] == doctest::Approx(0.5));
        CHECK(oracle[2] == doctest::Approx(0.25));
        CHECK(oracle[3] == doctest::Approx(0.5));
        CHECK(oracle[4] == doctest::Approx(0.0));
        CHECK(oracle[5] == doctest::Approx(0.0));

        const ProcessParams params(0.0, 0.0, 1.0);
        const auto c = qv_coeffs(params, 1.0, 2.0, 3.0);
        CHECK(c.A == doctest::Approx(0.25));
        CHECK(c.B == doctest::Approx(0.5));
        CHECK(c.C == doctest::Approx(0.25));
        CHECK(c.D == doctest::Approx(0.5));
        CHECK(c.alpha == doctest::Approx(0.0));
        CHECK(c.beta == doctest::Approx(0.0));
    }
    SUBCASE("closed forms solve the six relations for random draws") {
        std::mt19937_64 rng(307);
        for (int trial = 0; trial < 50; ++trial) {
            const double theta = uniform(rng, -2, 2);
            const double tau = uniform(rng, 0, 3);
            const double q = trial % 6 == 0 ? 1.0 : uniform(rng, -1, 1);
            const ProcessParams params(theta, tau, q);
            const double s = uniform(rng, 0.2, 1.2);
            const double t = s + uniform(rng, 0.2, 1.0);
            const double u = t + uniform(rng, 0.2, 1.0);
            const auto c = qv_coeffs(params, s, t, u);
            const auto oracle = solve_qv_system(theta, tau, q, s, t, u);
            CHECK(c.A == doctest::Approx(oracle[0]).epsilon(1e-11));
            CHECK(c.B == doctest::Approx(oracle[1]).epsilon(1e-11));
            CHECK(c.C == doctest::Approx(oracle[2]).epsilon(1e-11));
            CHECK(c.D == doctest::Approx(oracle[3]).epsilon(1e-11));
            CHECK(c.alpha == doctest::Approx(oracle[4]).epsilon(1e-11));
            CHECK(c.beta == doctest::Approx(oracle[5]).epsilon(1e-11));

            CHECK(c.A + c.B + c.C == doctest::Approx(1.0).epsilon(1e-13));
            CHECK(c.alpha + c.beta == 0.0);
            CHECK((u - s) * c.B / c.D ==
                  doctest::Approx(1.0 + q).epsilon(1e-13));
            CHECK(c.D != 0.0);
            CHECK(c.D > 0.0);
        }
    }
}

TEST_CASE("sampling") {
    SUBCASE("deterministic per seed, path equals ensemble-of-one") {
        const ProcessParams params(0.4, 0.7, 0.3);
        const TimeGrid grid({0.5, 1.0, 2.0});
        const auto a = sample_path(params, grid, 42, 40);
        const auto b = sample_path(params, grid, 42, 40);
        CHECK(a.values == b.values);
        const auto ensemble = sample_ensemble(params, grid, 42, 1, 40, 1);
        CHECK(ensemble[0].values == a.values);
        const auto other = sample_path(params, grid, 43, 40);
        CHECK(a.values != other.values);
    }
    SUBCASE("thread count does not change the ensemble") {
        const ProcessParams params(0.0, 0.5, 0.6);
        const TimeGrid grid({0.4, 1.1});
        const auto one = sample_ensemble(params, grid, 7, 64, 40, 1);
        const auto four = sample_ensemble(params, grid, 7, 64, 40, 4);
        REQUIRE(one.size() == four.size());
        for (std::size_t i = 0; i < one.size(); ++i) {
            CHECK(one[i].values == four[i].values);
        }
    }
    SUBCASE("grid starting at zero pins X_0 = 0") {
        const ProcessParams params(0.0, 0.0, 0.5);
        const auto path = sample_path(params, TimeGrid({0.0, 1.0}), 5, 20);
        CHECK(path.values[0] == 0.0);
    }
    SUBCASE("q = -1 paths live on +-sqrt(t)") {
        const ProcessParams params(0.0, 0.0, -1.0);
        const TimeGrid grid({0.5, 1.0, 2.5});
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto path = sample_path(params, grid, seed, 8);
            for (std::size_t i = 0; i < grid.times.size(); ++i) {
                CHECK(std::abs(path.values[i]) ==
                      doctest::Approx(std::sqrt(grid.times[i])));
            }
        }
    }
    SUBCASE("ensemble mean, variance and Gaussian kurtosis at q = 1") {
        const ProcessParams params(0.0, 0.0, 1.0);
        const TimeGrid grid({0.5, 1.0});
        const int n_paths = 15000;
        const auto ensemble = sample_ensemble(params, grid, 99, n_paths, 40);
        for (std::size_t col = 0; col < grid.times.size(); ++col) {
            const double t = grid.times[col];
            double mean = 0.0, second = 0.0;
            for (const auto& path : ensemble) {
                mean += path.values[col];
                second += path.values[col] * path.values[col];
            }
            mean /= n_paths;
            second /= n_paths;
            const double sigma_mean = std::sqrt(t / n_paths);
            CHECK(std::abs(mean) <= 4.0 * sigma_mean);
            CHECK(std::abs(second - mean * mean - t) <=
                  4.0 * t * std::sqrt(2.0 / n_paths));
        }
        // Covariance estimate: E[X_s X_t] = min(s, t) = 0.5. For the Wiener
        // point Var(X_s X_t) = s^2 + s t.
        double cross = 0.0;
        for (const auto& path : ensemble) {
            cross += path.values[0] * path.values[1];
        }
        cross /= n_paths;
        CHECK(std::abs(cross - 0.5) <=
              4.0 * std::sqrt((0.25 + 0.5) / n_paths));

        // Second-step increments should be Gaussian: kurtosis -> 3.
        double m2 = 0.0, m4 = 0.0;
        for (const auto& path : ensemble) {
            const double inc = path.values[1] - path.values[0];
            m2 += inc * inc;
            m4 += inc * inc * inc * inc;
        }
        m2 /= n_paths;
        m4 /= n_paths;
        const double kurtosis = m4 / (m2 * m2);
        CHECK(std::abs(kurtosis - 3.0) <=
              4.0 * std::sqrt(24.0 / n_paths));
    }
}

TEST_CASE("joint moments reproduce the covariance structure") {
    std::mt19937_64 rng(311);
    for (int trial = 0; trial < 20; ++trial) {
        const double q = trial % 5 == 0 ? -1.0 : uniform(rng, -0.99, 1.0);
        const ProcessParams params(uniform(rng, -2, 2), uniform(rng, 0, 3), q);
        const double s = uniform(rng, 0.2, 1.2);
        const double t = s + uniform(rng, 0.2, 1.0);
        const double u = t + uniform(rng, 0.2, 1.0);
        const auto table = joint_moments(params, s, t, u, 2, 2, 2, 80);
        CHECK(table.at(0, 0, 0) == doctest::Approx(1.0));
        CHECK(table.at(1, 0, 0) == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(table.at(2, 0, 0) == doctest::Approx(s).epsilon(1e-10));
        CHECK(table.at(0, 2, 0) == doctest::Approx(t).epsilon(1e-10));
        CHECK(table.at(0, 0, 2) == doctest::Approx(u).epsilon(1e-10));
        // E[X_a X_b] = min(a, b)
        CHECK(table.at(1, 1, 0) == doctest::Approx(s).epsilon(1e-10));
        CHECK(table.at(1, 0, 1) == doctest::Approx(s).epsilon(1e-10));
        CHECK(table.at(0, 1, 1) == doctest::Approx(t).epsilon(1e-10));
    }
}

TEST_CASE("Chapman-Kolmogorov") {
    SUBCASE("n = 1 reduces to mean consistency") {
        const ProcessParams params(0.8, 1.1, 0.4);
        const auto res =
            chapman_kolmogorov_residuals(params, 0.6, 0.5, 1.0, 1.8, 40, 1);
        CHECK(res[0] <= 1e-12);
    }
    SUBCASE("random draws at N = 80") {
        std::mt19937_64 rng(313);
        for (int trial = 0; trial < 25; ++trial) {
            const ProcessParams params(uniform(rng, -2, 2),
                                       uniform(rng, 0, 3),
                                       uniform(rng, -0.99, 1.0));
            const double s = uniform(rng, 0.2, 1.2);
            const double t = s + uniform(rng, 0.2, 1.0);
            const double u = t + uniform(rng, 0.2, 1.0);
            const double x = uniform(rng, -2, 2);
            const auto res =
                chapman_kolmogorov_residuals(params, x, s, t, u, 80, 8);
            for (double r : res) CHECK(r <= 1e-8);
        }
    }
    SUBCASE("q = -1: exact 2x2 stochastic-matrix composition") {
        std::mt19937_64 rng(317);
        for (int trial = 0; trial < 20; ++trial) {
            const ProcessParams params(uniform(rng, -2, 2),
                                       uniform(rng, 0, 2), -1.0);
            const double s = uniform(rng, 0.2, 1.0);
            const double t = s + uniform(rng, 0.2, 1.0);
            const double u = t + uniform(rng, 0.2, 1.0);
            const double x = uniform(rng, -2, 2);
            const auto direct = two_point_measure(params, x, s, u);
            const auto step1 = two_point_measure(params, x, s, t);
            REQUIRE(direct.size() == 2);
            REQUIRE(step1.size() == 2);
            double composed[2] = {0.0, 0.0};
            for (int i = 0; i < 2; ++i) {
                const auto step2 = two_point_measure(
                    params, step1.nodes[static_cast<std::size_t>(i)], t, u);
                REQUIRE(step2.size() == 2);
                for (int j = 0; j < 2; ++j) {
                    CHECK(step2.nodes[static_cast<std::size_t>(j)] ==
                          doctest::Approx(
                              direct.nodes[static_cast<std::size_t>(j)])
                              .epsilon(1e-10));
                    composed[j] +=
                        step1.weights[static_cast<std::size_t>(i)] *
                        step2.weights[static_cast<std::size_t>(j)];
                }
            }
            CHECK(composed[0] ==
                  doctest::Approx(direct.weights[0]).epsilon(1e-12));
            CHECK(composed[1] ==
                  doctest::Approx(direct.weights[1]).epsilon(1e-12));
        }
    }
}

TEST_CASE("martingale projection") {
    SUBCASE("n = 1 and n = 2 are the mean and variance identities") {
        std::mt19937_64 rng(331);
        for (int trial = 0; trial < 20; ++trial) {
            const double q = trial % 5 == 0 ? -1.0 : uniform(rng, -0.99, 1.0);
            const ProcessParams params(uniform(rng, -2, 2),
                                       uniform(rng, 0, 3), q);
            const double s = uniform(rng, 0.2, 1.2);
            const double t = s + uniform(rng, 0.2, 1.5);
            const double x = uniform(rng, -2, 2);
            const auto measure = kernel_measure(
                transition_kernel(params, KernelCoordinates(x, s, t), 60));
            CHECK(moment(measure, 1) == doctest::Approx(x).epsilon(1e-11));
            CHECK(moment(measure, 2) ==
                  doctest::Approx(x * x + t - s).epsilon(1e-11));
        }
    }
    SUBCASE("residuals over random draws") {
        std::mt19937_64 rng(337);
        for (int trial = 0; trial < 25; ++trial) {
            const double q = trial % 7 == 0 ? -1.0 : uniform(rng, -0.99, 1.0);
            const ProcessParams params(uniform(rng, -2, 2),
                                       uniform(rng, 0, 3), q);
            const double s = uniform(rng, 0.2, 1.2);
            const double t = s + uniform(rng, 0.2, 1.5);
            const double x = uniform(rng, -2, 2);
            const auto res =
                martingale_projection_residuals(params, x, s, t, 80, 8);
            const auto scale = eval_martingale_polynomials(params, s, x, 8);
            for (int n = 1; n <= 8; ++n) {
                CHECK(res[static_cast<std::size_t>(n) - 1] <=
                      1e-8 * (1.0 +
                              std::abs(scale[static_cast<std::size_t>(n)])));
            }
        }
    }
}

TEST_CASE("harness and quadratic-variance moment identities") {
    std::mt19937_64 rng(347);
    for (int trial = 0; trial < 15; ++trial) {
        const double q = trial % 5 == 0 ? 1.0 : uniform(rng, -0.95, 0.95);
        const ProcessParams params(uniform(rng, -2, 2), uniform(rng, 0, 3),
                                   q);
        const double s = uniform(rng, 0.2, 1.2);
        const double t = s + uniform(rng, 0.2, 1.0);
        const double u = t + uniform(rng, 0.2, 1.0);
        for (double r : harness_moment_residuals(params, s, t, u, 80, 6)) {
            CHECK(r <= 1e-7);
        }
        for (double r :
             quadratic_variance_residuals(params, s, t, u, 80, 4)) {
            CHECK(r <= 1e-7);
        }
    }
}

TEST_CASE("Wiener bridge variance from the coefficients at q=1, theta=tau=0") {
    // Var(X_t | X_s, X_u) at the Wiener point: D = (t-s)(u-t)/(u-s).
    const ProcessParams params(0.0, 0.0, 1.0);
    const double s = 0.7, t = 1.4, u = 2.9;
    const auto c = qv_coeffs(params, s, t, u);
    CHECK(c.D == doctest::Approx((t - s) * (u - t) / (u - s)));
}

TEST_CASE("increment moments and the Hankel determinant") {
    std::mt19937_64 rng(353);
    for (int trial = 0; trial < 20; ++trial) {
        const double q = trial % 6 == 0 ? -1.0
                        : trial % 6 == 1 ? 1.0
                                         : uniform(rng, -0.95, 0.95);
        const ProcessParams params(uniform(rng, -2, 2), uniform(rng, 0, 3),
                                   q);
        const double s = trial % 4 == 0 ? 0.0 : uniform(rng, 0.2, 1.0);
        const double t = s + uniform(rng, 0.2, 1.5);
        const auto inc = increment_moments(params, s, t, 80);
        const double dt = t - s;
        CHECK(inc.m2 == doctest::Approx(dt).epsilon(1e-9));
        CHECK(inc.m3 == doctest::Approx(params.theta * dt).epsilon(1e-9));
        const double m4 =
            dt * (6.0 * s + params.theta * params.theta - params.tau +
                  (2.0 + params.q) * (t + params.tau - 3.0 * s));
        CHECK(inc.m4 == doctest::Approx(m4).epsilon(1e-9));

        const double hankel = increment_hankel(inc, s, t);
        const double expected =
            params.q * (t + params.tau - 3.0 * s) + s + t + params.tau;
        CHECK(hankel == doctest::Approx(expected).epsilon(1e-8));
        CHECK(hankel >= -1e-10);
    }
}
