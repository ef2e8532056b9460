// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "qharness/qcore.hpp"

namespace qharness {

/// Maximum polynomial degree evaluated by this module. The monic forward
/// recurrence overflows for degrees around 50 at large |y|, so families are
/// capped here; quadrature works from the coefficients directly and is not
/// limited by this.
inline constexpr int kMaxPolyDegree = 40;

/// A finite family Q_0..Q_{n_max} of monic polynomials defined by the kernel
/// recurrence at (x, s, t). Use kernel()/marginal() for measure-facing
/// coordinates and algebraic() for identity work at arbitrary reals.
struct PolynomialFamily {
    ProcessParams params;
    double x;
    double s;
    double t;
    int n_max;

    static PolynomialFamily kernel(const ProcessParams& params,
                                   const KernelCoordinates& coords, int n_max);
    static PolynomialFamily marginal(const ProcessParams& params, double t,
                                     int n_max);
    static PolynomialFamily algebraic(const ProcessParams& params, double x,
                                      double s, double t, int n_max);

  private:
    PolynomialFamily(const ProcessParams& p, double x_, double s_, double t_,
                     int n_max_);
};

/// Evaluate Q_0(y)..Q_{n_max}(y) by the forward recurrence
/// Q_{n+1} = (y - alpha_n) Q_n - beta_n Q_{n-1}, Q_0 = 1, Q_1 = y - x.
std::vector<double> eval_polynomials(const PolynomialFamily& family, double y);

/// Martingale polynomials p_n(y, t) = Q_n(y | 0, 0, t); p_1 = y,
/// p_2 = y^2 - theta y - t. Requires t > 0.
std::vector<double> eval_martingale_polynomials(const ProcessParams& params,
                                                double t, double y, int n_max);

/// |LHS - RHS| of the convolution identity
///   Q_n(z|x,s,u) = sum_k [n k]_q Q_{n-k}(y|x,s,t) Q_k(z|y,t,u)
/// for any reals x, y, z and 0 <= s <= t <= u. The identity is exact; the
/// residual should vanish to roundoff (tolerance policy lives in the tests).
double convolution_identity_residual(const ProcessParams& params, double x,
                                     double y, double z, double s, double t,
                                     double u, int n);

/// |LHS - RHS| of the martingale-increment expansion
///   Q_n(z|y,t,u) = sum_{k>=1} [n k]_q Q_{n-k}(0|y,t,0)
///                              (p_k(z,u) - p_k(y,t)),
/// for n >= 1 and 0 < t <= u.
double martingale_expansion_residual(const ProcessParams& params, double y,
                                     double z, double t, double u, int n);

/// Cofactor polynomials B_k(x) = Q_k(0 | x, s, 0) of the expansion above;
/// B_0 = 1.
std::vector<double> expansion_cofactors(const ProcessParams& params, double x,
                                        double s, int n_max);

/// Convergence bound for the generating function: the series converges for
/// |zeta| < 1 / max{1, (|x|+|y|+|theta|+tau+t+s)/(1-|q|)^2}. Returns that
/// radius. Requires |q| < 1.
double generating_function_radius(const ProcessParams& params, double x,
                                  double y, double s, double t);

/// Truncated infinite-product generating function
///   phi(zeta, y, x, s, t) = prod_k (1 + theta zeta q^k - (1-q) x zeta q^k
///                                     + ((1-q) s + tau) zeta^2 q^{2k})
///                                / (same with x -> y, s -> t).
/// Verification aid only; requires |q| < 1 and zeta inside the radius above.
double generating_function(const ProcessParams& params, double zeta, double y,
                           double x, double s, double t, int k_terms);

}  // namespace qharness
