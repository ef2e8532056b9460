// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#include "qharness/orthopoly.hpp"

#include <cmath>
#include <cstdlib>

namespace qharness {

PolynomialFamily::PolynomialFamily(const ProcessParams& p, double x_,
                                   double s_, double t_, int n_max_)
    : params(p), x(x_), s(s_), t(t_), n_max(n_max_) {
    if (n_max < 0 || n_max > kMaxPolyDegree) {
        throw std::domain_error(
            "PolynomialFamily: n_max must lie in [0, kMaxPolyDegree]");
    }
}

PolynomialFamily PolynomialFamily::kernel(const ProcessParams& params,
                                          const KernelCoordinates& coords,
                                          int n_max) {
    return PolynomialFamily(params, coords.x, coords.s, coords.t, n_max);
}

PolynomialFamily PolynomialFamily::marginal(const ProcessParams& params,
                                            double t, int n_max) {
    if (t <= 0.0) {
        throw std::domain_error("PolynomialFamily::marginal: t must be > 0");
    }
    return PolynomialFamily(params, 0.0, 0.0, t, n_max);
}

PolynomialFamily PolynomialFamily::algebraic(const ProcessParams& params,
                                             double x, double s, double t,
                                             int n_max) {
    return PolynomialFamily(params, x, s, t, n_max);
}

std::vector<double> eval_polynomials(const PolynomialFamily& family,
                                     double y) {
    std::vector<double> out(static_cast<std::size_t>(family.n_max) + 1);
    out[0] = 1.0;
    if (family.n_max == 0) {
        return out;
    }
    const RecurrenceCoeffs rc = recurrence_coeffs(
        family.params, family.x, family.s, family.t, family.n_max);
    out[1] = y - family.x;  // y - alpha_0
    for (int n = 1; n < family.n_max; ++n) {
        out[static_cast<std::size_t>(n) + 1] =
            (y - rc.diag_at(n)) * out[static_cast<std::size_t>(n)] -
            rc.sub_at(n) * out[static_cast<std::size_t>(n) - 1];
    }
    return out;
}

std::vector<double> eval_martingale_polynomials(const ProcessParams& params,
                                                double t, double y,
                                                int n_max) {
    return eval_polynomials(PolynomialFamily::marginal(params, t, n_max), y);
}

double convolution_identity_residual(const ProcessParams& params, double x,
                                     double y, double z, double s, double t,
                                     double u, int n) {
    if (n < 0 || n > kMaxPolyDegree) {
        throw std::domain_error("convolution_identity_residual: bad degree");
    }
    if (!(0.0 <= s && s <= t && t <= u)) {
        throw std::domain_error(
            "convolution_identity_residual: require 0 <= s <= t <= u");
    }
    const auto lhs =
        eval_polynomials(PolynomialFamily::algebraic(params, x, s, u, n), z);
    const auto left =
        eval_polynomials(PolynomialFamily::algebraic(params, x, s, t, n), y);
    const auto right =
        eval_polynomials(PolynomialFamily::algebraic(params, y, t, u, n), z);
    double rhs = 0.0;
    for (int k = 0; k <= n; ++k) {
        rhs += q_binomial(n, k, params.q) *
               left[static_cast<std::size_t>(n - k)] *
               right[static_cast<std::size_t>(k)];
    }
    return std::abs(lhs[static_cast<std::size_t>(n)] - rhs);
}

double martingale_expansion_residual(const ProcessParams& params, double y,
                                     double z, double t, double u, int n) {
    if (n < 1 || n > kMaxPolyDegree) {
        throw std::domain_error("martingale_expansion_residual: bad degree");
    }
    if (!(0.0 < t && t <= u)) {
        throw std::domain_error(
            "martingale_expansion_residual: require 0 < t <= u");
    }
    const auto lhs =
        eval_polynomials(PolynomialFamily::algebraic(params, y, t, u, n), z);
    const auto cof = expansion_cofactors(params, y, t, n);
    const auto pu = eval_martingale_polynomials(params, u, z, n);
    const auto pt = eval_martingale_polynomials(params, t, y, n);
    double rhs = 0.0;
    for (int k = 1; k <= n; ++k) {
        rhs += q_binomial(n, k, params.q) *
               cof[static_cast<std::size_t>(n - k)] *
               (pu[static_cast<std::size_t>(k)] -
                pt[static_cast<std::size_t>(k)]);
    }
    return std::abs(lhs[static_cast<std::size_t>(n)] - rhs);
}

std::vector<double> expansion_cofactors(const ProcessParams& params, double x,
                                        double s, int n_max) {
    return eval_polynomials(
        PolynomialFamily::algebraic(params, x, s, 0.0, n_max), 0.0);
}

double generating_function_radius(const ProcessParams& params, double x,
                                  double y, double s, double t) {
    if (std::abs(params.q) >= 1.0) {
        throw std::domain_error(
            "generating_function_radius: requires |q| < 1");
    }
    const double om = 1.0 - std::abs(params.q);
    const double c = (std::abs(x) + std::abs(y) + std::abs(params.theta) +
                      params.tau + t + s) /
                     (om * om);
    return 1.0 / std::max(1.0, c);
}

double generating_function(const ProcessParams& params, double zeta, double y,
                           double x, double s, double t, int k_terms) {
    if (std::abs(params.q) >= 1.0) {
        throw std::domain_error("generating_function: requires |q| < 1");
    }
    if (k_terms < 1) {
        throw std::domain_error("generating_function: k_terms must be >= 1");
    }
    if (std::abs(zeta) >= generating_function_radius(params, x, y, s, t)) {
        throw std::domain_error(
            "generating_function: zeta outside the convergence radius");
    }
    const double q = params.q;
    const double cs = (1.0 - q) * s + params.tau;
    const double ct = (1.0 - q) * t + params.tau;
    double qk = 1.0;
    double out = 1.0;
    for (int k = 0; k < k_terms; ++k) {
        const double zk = zeta * qk;
        const double common = 1.0 + params.theta * zk;
        const double num = common - (1.0 - q) * x * zk + cs * zk * zk;
        const double den = common - (1.0 - q) * y * zk + ct * zk * zk;
        if (den == 0.0) {
            throw std::runtime_error(
                "generating_function: product factor has a zero denominator");
        }
        out *= num / den;
        qk *= q;
    }
    return out;
}

}  // namespace qharness
