// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace qharness {

/// Piecewise-constant nonnegative rate p on [0, horizon], with the running
/// integral pi(s, t) = int_s^t p kept exact (no quadrature error).
/// Requires pi(0, horizon) < 1.
struct RateProfile {
    std::vector<double> edges;  // 0 = edges[0] < ... < edges[K] = horizon
    std::vector<double> rates;  // rates[i] on [edges[i], edges[i+1])

    RateProfile(std::vector<double> edges_, std::vector<double> rates_);

    static RateProfile constant(double rate, double horizon);

    double horizon() const { return edges.back(); }

    /// pi(a, b) for 0 <= a <= b <= horizon.
    double cumulative(double a, double b) const;
};

/// Finite Markov chain on states {0..m} counting successes of m trials
/// under the rate profile.
struct BinomialChain {
    int m;
    RateProfile rate;

    BinomialChain(int m_, RateProfile rate_);
};

/// Upper-triangular stochastic matrix
///   P(Y_t = j | Y_s = i) = C(m-i, j-i) pi(s,t)^{j-i} (1-pi(0,t))^{m-j}
///                          / (1-pi(0,s))^{m-i},
/// rows indexed by i, columns by j; rows sum to 1 exactly (binomial theorem).
std::vector<std::vector<double>> transition_matrix(const BinomialChain& chain,
                                                   double s, double t);

/// Marginal pmf of Y_t (row 0 of the transition matrix from time 0).
std::vector<double> chain_marginal(const BinomialChain& chain, double t);

/// Exhaustive-enumeration residuals of the chain identities over the exact
/// joint law of (Y_s, Y_t, Y_u):
///   harness:  E(Y_t | Y_s, Y_u) = Y_s + (pi(s,t)/pi(s,u)) (Y_u - Y_s)
///   variance: Var(Y_t | Y_s, Y_u) = pi(s,t) pi(t,u) / pi(s,u)^2 (Y_u - Y_s)
///   pmf:      conditional law of Y_t - Y_s is binomial(Y_u - Y_s,
///             pi(s,t)/pi(s,u))
///   chapman:  P(s,t) P(t,u) = P(s,u) entrywise
/// All are exact; residuals stay below 1e-12 for m <= 6.
struct ChainResiduals {
    double harness;
    double variance;
    double pmf;
    double chapman;

    double max() const;
};

ChainResiduals chain_identity_residuals(const BinomialChain& chain, double s,
                                        double t, double u);

/// Closed-form Cov(Y_s, Y_t) = m pi(0,s) (1 - pi(0,t)) for s <= t.
double chain_covariance(const BinomialChain& chain, double s, double t);

/// Weighted least-squares extraction of the identity coefficients from the
/// exact joint law: E(Y_t|Y_s,Y_u) ~ a Y_s + b Y_u and
/// Var(Y_t|Y_s,Y_u) ~ v (Y_u - Y_s). The fitted values are independent of m
/// and equal pi(t,u)/pi(s,u), pi(s,t)/pi(s,u) and
/// pi(s,t) pi(t,u)/pi(s,u)^2.
struct ChainCoefficients {
    double a;
    double b;
    double v;
};

ChainCoefficients fit_chain_coefficients(const BinomialChain& chain, double s,
                                         double t, double u);

}  // namespace qharness
