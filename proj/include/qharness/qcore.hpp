// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <vector>

namespace qharness {

/// q-integer [n]_q = 1 + q + ... + q^{n-1}, with [0]_q = 0 and [n]_1 = n.
/// Evaluated through a cancellation-free form of (1 - q^n)/(1 - q).
double q_int(int n, double q);

/// q-factorial [n]_q! = [1]_q [2]_q ... [n]_q, with [0]_q! = 1.
double q_factorial(int n, double q);

/// Gaussian binomial [n choose k]_q = [n]_q! / ([n-k]_q! [k]_q!).
///
/// Computed as the product of ratios [n-j+1]_q / [j]_q for j = 1..k. At
/// q = -1 the even-index q-integers vanish in both numerator and
/// denominator; the zero factors are cancelled in pairs ([2a]_q/[2b]_q -> a/b
/// as q -> -1), so the value is finite there as well.
double q_binomial(int n, int k, double q);

/// The (theta, tau, q) triple that parameterizes the process family.
/// Validated at construction; downstream code assumes validity.
struct ProcessParams {
    double theta;  // drift-asymmetry parameter
    double tau;    // dispersion parameter, >= 0
    double q;      // in [-1, 1]

    ProcessParams(double theta_, double tau_, double q_);

    /// q = -1 collapses every kernel onto two support points.
    bool two_point() const { return q == -1.0; }
};

/// Conditioning point for a transition kernel: state x at time s, target
/// time t, with 0 <= s < t.
struct KernelCoordinates {
    double x;
    double s;
    double t;

    KernelCoordinates(double x_, double s_, double t_);
};

/// Three-term recurrence coefficients alpha_n (diagonal) and beta_n
/// (sub-diagonal), for y Q_n = Q_{n+1} + alpha_n Q_n + beta_n Q_{n-1}.
struct RecurrenceCoeffs {
    std::vector<double> diag;  // diag[n] = alpha_n, n = 0..order
    std::vector<double> sub;   // sub[n]  = beta_n,  n = 1..order (sub[0] = 0)

    int order() const { return static_cast<int>(diag.size()) - 1; }

    double diag_at(int n) const;
    double sub_at(int n) const;
};

/// Coefficients of the kernel recurrence at arbitrary real (x, s, t):
///   alpha_n = theta [n]_q + x q^n
///   beta_n  = (t - s q^{n-1} + tau [n-1]_q) [n]_q
/// No ordering constraint on (s, t); the polynomials are defined for any
/// reals, which the algebraic identity checks rely on. Positivity of beta_n
/// is only guaranteed for valid kernel coordinates.
RecurrenceCoeffs recurrence_coeffs(const ProcessParams& params, double x,
                                   double s, double t, int n_max);

/// Validated kernel recurrence for the transition law from (x, s) to t.
RecurrenceCoeffs kernel_recurrence(const ProcessParams& params,
                                   const KernelCoordinates& coords, int n_max);

/// Marginal recurrence (x = 0, s = 0):
///   alpha_n = theta [n]_q,  beta_n = (t + tau [n-1]_q) [n]_q
RecurrenceCoeffs marginal_recurrence(const ProcessParams& params, double t,
                                     int n_max);

}  // namespace qharness
