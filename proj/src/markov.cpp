// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#include "qharness/markov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "qharness/orthopoly.hpp"

namespace qharness {

namespace {

// splitmix64 step; used only to spread per-path seeds.
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t path_stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t state = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    return splitmix64(state);
}

// Deterministic 53-bit uniform in [0, 1), independent of any library
// distribution implementation.
double next_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double draw_from(const DiscreteMeasure& measure, double u) {
    double cum = 0.0;
    const std::size_t n = measure.nodes.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        cum += measure.weights[i];
        if (u <= cum) {
            return measure.nodes[i];
        }
    }
    return measure.nodes[n - 1];
}

void check_time_triple(double s, double t, double u) {
    if (!(0.0 <= s && s < t && t < u)) {
        throw std::domain_error("require 0 <= s < t < u");
    }
}

// Minimal node count whose Gauss rule is exact for polynomials of the given
// degree (2N - 1 rule, plus one spare row).
int exact_nodes(int degree) { return degree / 2 + 2; }

}  // namespace

TimeGrid::TimeGrid(std::vector<double> times_) : times(std::move(times_)) {
    if (times.empty()) {
        throw std::domain_error("TimeGrid: at least one time is required");
    }
    if (times.front() < 0.0) {
        throw std::domain_error("TimeGrid: times must be >= 0");
    }
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        if (!(times[i] < times[i + 1])) {
            throw std::domain_error("TimeGrid: times must be strictly "
                                    "increasing");
        }
    }
}

HarnessCoefficients harness_coeffs(double s, double t, double u) {
    check_time_triple(s, t, u);
    return {(u - t) / (u - s), (t - s) / (u - s)};
}

QuadraticVarianceCoefficients qv_coeffs(const ProcessParams& params, double s,
                                        double t, double u) {
    check_time_triple(s, t, u);
    const double q = params.q;
    const double tau = params.tau;
    const double den = u + tau - q * s;
    QuadraticVarianceCoefficients c{};
    c.A = (u - t) * (u + tau - q * t) / ((u - s) * den);
    c.B = (1.0 + q) * (t - s) * (u - t) / ((u - s) * den);
    c.C = (t - s) * (t + tau - q * s) / ((u - s) * den);
    c.D = (u - t) * (t - s) / den;
    c.alpha = -params.theta * (u - t) * (t - s) / ((u - s) * den);
    c.beta = -c.alpha;
    return c;
}

SamplePath sample_path(const ProcessParams& params, const TimeGrid& grid,
                       std::uint64_t seed, int N) {
    std::mt19937_64 gen(path_stream_seed(seed, 0));
    SamplePath path{grid, {}, seed};
    path.values.reserve(grid.times.size());
    double x = 0.0;
    double prev = 0.0;
    for (double t : grid.times) {
        if (t == 0.0) {
            path.values.push_back(0.0);
            continue;
        }
        const auto kernel =
            transition_kernel(params, KernelCoordinates(x, prev, t), N);
        x = draw_from(kernel_measure(kernel), next_uniform(gen));
        path.values.push_back(x);
        prev = t;
    }
    return path;
}

std::vector<SamplePath> sample_ensemble(const ProcessParams& params,
                                        const TimeGrid& grid,
                                        std::uint64_t seed, int n_paths, int N,
                                        int threads) {
    if (n_paths < 1) {
        throw std::domain_error("sample_ensemble: n_paths must be >= 1");
    }
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = std::min(threads, n_paths);

    // The first positive grid time starts every path from (0, 0); build that
    // kernel once and share it across paths.
    DiscreteMeasure first;
    std::size_t first_step = 0;
    while (first_step < grid.times.size() && grid.times[first_step] == 0.0) {
        ++first_step;
    }
    if (first_step < grid.times.size()) {
        first = kernel_measure(transition_kernel(
            params, KernelCoordinates(0.0, 0.0, grid.times[first_step]), N));
    }

    std::vector<SamplePath> paths(static_cast<std::size_t>(n_paths),
                                  SamplePath{grid, {}, seed});
    auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            std::mt19937_64 gen(
                path_stream_seed(seed, static_cast<std::uint64_t>(i)));
            SamplePath& path = paths[static_cast<std::size_t>(i)];
            path.values.reserve(grid.times.size());
            double x = 0.0;
            double prev = 0.0;
            for (std::size_t j = 0; j < grid.times.size(); ++j) {
                const double t = grid.times[j];
                if (t == 0.0) {
                    path.values.push_back(0.0);
                    continue;
                }
                const double u = next_uniform(gen);
                if (j == first_step) {
                    x = draw_from(first, u);
                } else {
                    const auto kernel = transition_kernel(
                        params, KernelCoordinates(x, prev, t), N);
                    x = draw_from(kernel_measure(kernel), u);
                }
                path.values.push_back(x);
                prev = t;
            }
        }
    };

    if (threads == 1) {
        worker(0, n_paths);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        const int chunk = (n_paths + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(n_paths, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return paths;
}

double JointMomentTable::at(int i, int j, int k) const {
    if (i < 0 || i > imax || j < 0 || j > jmax || k < 0 || k > kmax) {
        throw std::domain_error("JointMomentTable: index out of range");
    }
    const std::size_t idx = (static_cast<std::size_t>(i) *
                                 static_cast<std::size_t>(jmax + 1) +
                             static_cast<std::size_t>(j)) *
                                static_cast<std::size_t>(kmax + 1) +
                            static_cast<std::size_t>(k);
    return data[idx];
}

namespace {

DiscreteMeasure level_measure(const ProcessParams& params, double x, double s,
                              double t, int nodes) {
    return gauss_measure(
        build_jacobi(params, KernelCoordinates(x, s, t), nodes));
}

// Powers 1, y, ..., y^pmax.
void fill_powers(double y, int pmax, std::vector<double>& out) {
    out[0] = 1.0;
    for (int p = 1; p <= pmax; ++p) {
        out[static_cast<std::size_t>(p)] = out[static_cast<std::size_t>(p) - 1] * y;
    }
}

}  // namespace

JointMomentTable joint_moments(const ProcessParams& params, double s, double t,
                               double u, int imax, int jmax, int kmax, int N) {
    if (imax < 0 || jmax < 0 || kmax < 0) {
        throw std::domain_error("joint_moments: negative degree");
    }
    if (!(0.0 <= s && s < t && (kmax == 0 || t < u))) {
        throw std::domain_error("joint_moments: bad time ordering");
    }
    JointMomentTable table{imax, jmax, kmax, {}};
    table.data.assign(static_cast<std::size_t>(imax + 1) *
                          static_cast<std::size_t>(jmax + 1) *
                          static_cast<std::size_t>(kmax + 1),
                      0.0);

    const int n_outer =
        s > 0.0 ? std::max(std::min(N, exact_nodes(imax + jmax + kmax)), 1) : 1;
    const int n_mid = std::max(std::min(N, exact_nodes(jmax + kmax)), 1);
    const int n_inner = std::max(std::min(N, exact_nodes(kmax)), 1);

    DiscreteMeasure outer;
    if (s > 0.0) {
        outer = level_measure(params, 0.0, 0.0, s, n_outer);
    } else {
        outer.nodes = {0.0};
        outer.weights = {1.0};
    }

    std::vector<double> ypow(static_cast<std::size_t>(imax) + 1);
    std::vector<double> zpow(static_cast<std::size_t>(jmax) + 1);
    std::vector<double> inner_mom(static_cast<std::size_t>(kmax) + 1);

    for (int a = 0; a < outer.size(); ++a) {
        const double y = outer.nodes[static_cast<std::size_t>(a)];
        const double wy = outer.weights[static_cast<std::size_t>(a)];
        fill_powers(y, imax, ypow);
        const DiscreteMeasure mid = level_measure(params, y, s, t, n_mid);
        for (int b = 0; b < mid.size(); ++b) {
            const double z = mid.nodes[static_cast<std::size_t>(b)];
            const double wz = mid.weights[static_cast<std::size_t>(b)];
            fill_powers(z, jmax, zpow);
            if (kmax == 0) {
                inner_mom[0] = 1.0;
            } else {
                const DiscreteMeasure inner =
                    level_measure(params, z, t, u, n_inner);
                for (int k = 0; k <= kmax; ++k) {
                    inner_mom[static_cast<std::size_t>(k)] = moment(inner, k);
                }
            }
            const double w = wy * wz;
            std::size_t idx = 0;
            for (int i = 0; i <= imax; ++i) {
                for (int j = 0; j <= jmax; ++j) {
                    const double base =
                        w * ypow[static_cast<std::size_t>(i)] *
                        zpow[static_cast<std::size_t>(j)];
                    for (int k = 0; k <= kmax; ++k, ++idx) {
                        table.data[idx] +=
                            base * inner_mom[static_cast<std::size_t>(k)];
                    }
                }
            }
        }
    }
    return table;
}

JointMomentTable joint_moments(const ProcessParams& params, double s, double t,
                               int imax, int jmax, int N) {
    return joint_moments(params, s, t, t + 1.0, imax, jmax, 0, N);
}

std::vector<double> chapman_kolmogorov_residuals(const ProcessParams& params,
                                                 double x, double s, double t,
                                                 double u, int N, int n_max) {
    check_time_triple(s, t, u);
    if (n_max < 1 || n_max > kMaxPolyDegree) {
        throw std::domain_error("chapman_kolmogorov_residuals: bad n_max");
    }
    const auto family = PolynomialFamily::algebraic(params, x, s, u, n_max);
    const DiscreteMeasure outer = level_measure(params, x, s, t, N);

    std::vector<double> acc(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int a = 0; a < outer.size(); ++a) {
        const double y = outer.nodes[static_cast<std::size_t>(a)];
        const double wy = outer.weights[static_cast<std::size_t>(a)];
        const DiscreteMeasure inner = level_measure(params, y, t, u, N);
        for (int b = 0; b < inner.size(); ++b) {
            const double wz = inner.weights[static_cast<std::size_t>(b)];
            const auto poly = eval_polynomials(
                family, inner.nodes[static_cast<std::size_t>(b)]);
            for (int n = 1; n <= n_max; ++n) {
                acc[static_cast<std::size_t>(n)] +=
                    wy * wz * poly[static_cast<std::size_t>(n)];
            }
        }
    }

    // ||Q_n||^2 = beta_1 ... beta_n under mu_{x,s,u}.
    const RecurrenceCoeffs rc = recurrence_coeffs(params, x, s, u, n_max);
    std::vector<double> out(static_cast<std::size_t>(n_max));
    double norm_sq = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        norm_sq *= rc.sub_at(n);
        const double norm = std::sqrt(std::max(norm_sq, 0.0));
        out[static_cast<std::size_t>(n) - 1] =
            std::abs(acc[static_cast<std::size_t>(n)]) / std::max(1.0, norm);
    }
    return out;
}

std::vector<double> martingale_projection_residuals(
    const ProcessParams& params, double x, double s, double t, int N,
    int n_max) {
    if (!(0.0 < s && s < t)) {
        throw std::domain_error(
            "martingale_projection_residuals: require 0 < s < t");
    }
    if (n_max < 1 || n_max > kMaxPolyDegree) {
        throw std::domain_error("martingale_projection_residuals: bad n_max");
    }
    const DiscreteMeasure measure = level_measure(params, x, s, t, N);
    std::vector<double> integral(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int a = 0; a < measure.size(); ++a) {
        const auto poly = eval_martingale_polynomials(
            params, t, measure.nodes[static_cast<std::size_t>(a)], n_max);
        for (int n = 0; n <= n_max; ++n) {
            integral[static_cast<std::size_t>(n)] +=
                measure.weights[static_cast<std::size_t>(a)] *
                poly[static_cast<std::size_t>(n)];
        }
    }
    const auto at_s = eval_martingale_polynomials(params, s, x, n_max);
    std::vector<double> out(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        out[static_cast<std::size_t>(n) - 1] =
            std::abs(integral[static_cast<std::size_t>(n)] -
                     at_s[static_cast<std::size_t>(n)]);
    }
    return out;
}

namespace {

double relative_residual(double lhs, double rhs, double magnitude) {
    return std::abs(lhs - rhs) / std::max(1.0, magnitude);
}

}  // namespace

std::vector<double> harness_moment_residuals(const ProcessParams& params,
                                             double s, double t, double u,
                                             int N, int degree_cap) {
    check_time_triple(s, t, u);
    if (degree_cap < 0) {
        throw std::domain_error("harness_moment_residuals: bad degree cap");
    }
    const HarnessCoefficients hc = harness_coeffs(s, t, u);
    const JointMomentTable table =
        joint_moments(params, s, t, u, degree_cap + 1, 1, degree_cap + 1, N);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>((degree_cap + 1) *
                                         (degree_cap + 2) / 2));
    for (int m = 0; m <= degree_cap; ++m) {
        for (int n = 0; m + n <= degree_cap; ++n) {
            const double lhs = table.at(m, 1, n);
            const double t1 = hc.a * table.at(m + 1, 0, n);
            const double t2 = hc.b * table.at(m, 0, n + 1);
            out.push_back(relative_residual(
                lhs, t1 + t2,
                std::abs(lhs) + std::abs(t1) + std::abs(t2)));
        }
    }
    return out;
}

std::vector<double> quadratic_variance_residuals(const ProcessParams& params,
                                                 double s, double t, double u,
                                                 int N, int degree_cap) {
    check_time_triple(s, t, u);
    if (degree_cap < 0) {
        throw std::domain_error("quadratic_variance_residuals: bad degree cap");
    }
    const QuadraticVarianceCoefficients c = qv_coeffs(params, s, t, u);
    const JointMomentTable table =
        joint_moments(params, s, t, u, degree_cap + 2, 2, degree_cap + 2, N);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>((degree_cap + 1) *
                                         (degree_cap + 2) / 2));
    for (int m = 0; m <= degree_cap; ++m) {
        for (int n = 0; m + n <= degree_cap; ++n) {
            const double lhs = table.at(m, 2, n);
            const double terms[6] = {
                c.A * table.at(m + 2, 0, n),
                c.B * table.at(m + 1, 0, n + 1),
                c.C * table.at(m, 0, n + 2),
                c.alpha * table.at(m + 1, 0, n),
                c.beta * table.at(m, 0, n + 1),
                c.D * table.at(m, 0, n)};
            double rhs = 0.0;
            double magnitude = std::abs(lhs);
            for (double term : terms) {
                rhs += term;
                magnitude += std::abs(term);
            }
            out.push_back(relative_residual(lhs, rhs, magnitude));
        }
    }
    return out;
}

IncrementMoments increment_moments(const ProcessParams& params, double s,
                                   double t, int N) {
    if (!(0.0 <= s && s < t)) {
        throw std::domain_error("increment_moments: require 0 <= s < t");
    }
    const JointMomentTable table = joint_moments(params, s, t, 4, 4, N);
    const auto m = [&](int i, int j) { return table.at(i, j, 0); };
    IncrementMoments out{};
    out.m2 = m(0, 2) - 2.0 * m(1, 1) + m(2, 0);
    out.m3 = m(0, 3) - 3.0 * m(1, 2) + 3.0 * m(2, 1) - m(3, 0);
    out.m4 = m(0, 4) - 4.0 * m(1, 3) + 6.0 * m(2, 2) - 4.0 * m(3, 1) +
             m(4, 0);
    return out;
}

double increment_hankel(const IncrementMoments& m, double s, double t) {
    const double dt = t - s;
    // m1 = 0, so det = m2 m4 - m3^2 - m2^3.
    return (m.m2 * m.m4 - m.m3 * m.m3 - m.m2 * m.m2 * m.m2) / (dt * dt);
}

}  // namespace qharness
