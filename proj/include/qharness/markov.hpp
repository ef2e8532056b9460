// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "qharness/kernels.hpp"

namespace qharness {

/// Strictly increasing observation times, times[0] >= 0.
struct TimeGrid {
    std::vector<double> times;

    explicit TimeGrid(std::vector<double> times_);

    int size() const { return static_cast<int>(times.size()); }
};

/// One sampled trajectory on a grid, starting from X_0 = 0.
struct SamplePath {
    TimeGrid grid;
    std::vector<double> values;
    std::uint64_t seed;
};

/// Bridge weights a = (u-t)/(u-s), b = (t-s)/(u-s); a + b = 1.
struct HarnessCoefficients {
    double a;
    double b;
};

/// Coefficients of the two-sided second-moment identity
///   E[X_t^2 | X_s, X_u] = A X_s^2 + B X_s X_u + C X_u^2
///                         + alpha X_s + beta X_u + D,
/// in closed form. They satisfy A+B+C = 1, alpha+beta = 0,
/// (u-s) B / D = 1+q, A s^2 + B s u + C u^2 - t^2 = tau D and
/// s alpha + u beta = theta D.
struct QuadraticVarianceCoefficients {
    double A;
    double B;
    double C;
    double D;
    double alpha;
    double beta;
};

HarnessCoefficients harness_coeffs(double s, double t, double u);

QuadraticVarianceCoefficients qv_coeffs(const ProcessParams& params, double s,
                                        double t, double u);

/// Sample one path by sequential kernel construction and inverse-CDF draws
/// (ties broken toward the lower node). Deterministic given (params, grid,
/// seed, N), independent of threading.
SamplePath sample_path(const ProcessParams& params, const TimeGrid& grid,
                       std::uint64_t seed, int N);

/// Sample n_paths paths. Path i depends only on (seed, i), so the ensemble
/// is identical for every thread count; threads <= 0 picks the hardware
/// concurrency.
std::vector<SamplePath> sample_ensemble(const ProcessParams& params,
                                        const TimeGrid& grid,
                                        std::uint64_t seed, int n_paths, int N,
                                        int threads = 0);

/// E[X_s^i X_t^j X_u^k] for i <= imax, j <= jmax, k <= kmax, computed by
/// nested Gauss quadrature along 0 -> s -> t -> u. The outer (marginal)
/// level uses N nodes; conditional levels use the minimal node count that
/// is Gauss-exact for the degrees involved. s = 0 collapses the outer level
/// to the point mass at 0.
struct JointMomentTable {
    int imax;
    int jmax;
    int kmax;
    std::vector<double> data;

    double at(int i, int j, int k) const;
};

JointMomentTable joint_moments(const ProcessParams& params, double s, double t,
                               double u, int imax, int jmax, int kmax, int N);

/// Two-time variant: E[X_s^i X_t^j].
JointMomentTable joint_moments(const ProcessParams& params, double s, double t,
                               int imax, int jmax, int N);

/// Chapman-Kolmogorov residuals |int int Q_n(z|x,s,u) mu_{y,t,u}(dz)
/// mu_{x,s,t}(dy)| / max(1, ||Q_n||) for n = 1..n_max, where
/// ||Q_n||^2 = beta_1...beta_n under the (x,s,u) recurrence. The norm floor
/// covers q = -1, where ||Q_n|| vanishes for n >= 2.
std::vector<double> chapman_kolmogorov_residuals(const ProcessParams& params,
                                                 double x, double s, double t,
                                                 double u, int N, int n_max);

/// Martingale projection residuals |int p_n(y,t) mu_{x,s,t}(dy) - p_n(x,s)|
/// for n = 1..n_max (raw, unscaled). Requires 0 < s < t.
std::vector<double> martingale_projection_residuals(
    const ProcessParams& params, double x, double s, double t, int N,
    int n_max);

/// Relative residuals of E[X_s^m X_t X_u^n] = a E[X_s^{m+1} X_u^n]
/// + b E[X_s^m X_u^{n+1}] over all m + n <= degree_cap, ordered by m then n.
std::vector<double> harness_moment_residuals(const ProcessParams& params,
                                             double s, double t, double u,
                                             int N, int degree_cap);

/// Relative residuals of the quadratic-variance moment identity
///   E[X_s^m X_t^2 X_u^n] = A E[X_s^{m+2} X_u^n] + B E[X_s^{m+1} X_u^{n+1}]
///     + C E[X_s^m X_u^{n+2}] + alpha E[X_s^{m+1} X_u^n]
///     + beta E[X_s^m X_u^{n+1}] + D E[X_s^m X_u^n]
/// over all m + n <= degree_cap.
std::vector<double> quadratic_variance_residuals(const ProcessParams& params,
                                                 double s, double t, double u,
                                                 int N, int degree_cap);

/// Central increment moments E(X_t - X_s)^k for k = 2, 3, 4, by nested
/// quadrature through the joint law of (X_s, X_t).
struct IncrementMoments {
    double m2;
    double m3;
    double m4;
};

IncrementMoments increment_moments(const ProcessParams& params, double s,
                                   double t, int N);

/// Scaled Hankel determinant of the increment moment matrix
/// [[1, m1, m2], [m1, m2, m3], [m2, m3, m4]] / (t-s)^2; equals
/// q (t + tau - 3s) + s + t + tau and is >= 0 for admissible parameters.
double increment_hankel(const IncrementMoments& m, double s, double t);

}  // namespace qharness
