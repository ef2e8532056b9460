// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#include "qharness/qcore.hpp"

#include <cmath>
#include <string>

namespace qharness {

double q_int(int n, double q) {
    if (n < 0) {
        throw std::domain_error("q_int: n must be >= 0");
    }
    if (n == 0) {
        return 0.0;
    }
    if (q == 1.0) {
        return static_cast<double>(n);
    }
    if (q == 0.0) {
        return 1.0;
    }
    // 1 - q^n without cancellation near |q| = 1.
    double one_minus_qn;
    if (q > 0.0) {
        one_minus_qn = -std::expm1(static_cast<double>(n) * std::log(q));
    } else if (n % 2 == 0) {
        one_minus_qn = -std::expm1(static_cast<double>(n) * std::log(-q));
    } else {
        one_minus_qn = 1.0 + std::exp(static_cast<double>(n) * std::log(-q));
    }
    return one_minus_qn / (1.0 - q);
}

double q_factorial(int n, double q) {
    if (n < 0) {
        throw std::domain_error("q_factorial: n must be >= 0");
    }
    double out = 1.0;
    for (int j = 1; j <= n; ++j) {
        out *= q_int(j, q);
    }
    return out;
}

double q_binomial(int n, int k, double q) {
    if (k < 0 || k > n) {
        throw std::domain_error("q_binomial: require 0 <= k <= n");
    }
    if (k == 0 || k == n) {
        return 1.0;
    }
    if (q != -1.0) {
        double out = 1.0;
        for (int j = 1; j <= k; ++j) {
            out *= q_int(n - j + 1, q) / q_int(j, q);
        }
        return out;
    }
    // q = -1: [m]_{-1} is 0 for even m, 1 for odd m. Cancel the zero factors
    // in pairs using lim_{q->-1} [2a]_q/[2b]_q = a/b; if the numerator has
    // more zeros than the denominator the whole product is 0.
    std::vector<int> num_halves;
    std::vector<int> den_halves;
    for (int j = 1; j <= k; ++j) {
        const int m = n - j + 1;
        if (m % 2 == 0) num_halves.push_back(m / 2);
        if (j % 2 == 0) den_halves.push_back(j / 2);
    }
    if (num_halves.size() > den_halves.size()) {
        return 0.0;
    }
    if (num_halves.size() < den_halves.size()) {
        throw std::logic_error("q_binomial: unpaired denominator zero at q=-1");
    }
    double out = 1.0;
    for (std::size_t i = 0; i < num_halves.size(); ++i) {
        out *= static_cast<double>(num_halves[i]) / den_halves[i];
    }
    return out;
}

ProcessParams::ProcessParams(double theta_, double tau_, double q_)
    : theta(theta_), tau(tau_), q(q_) {
    if (!std::isfinite(theta) || !std::isfinite(tau) || !std::isfinite(q)) {
        throw std::domain_error("ProcessParams: parameters must be finite");
    }
    if (tau < 0.0) {
        throw std::domain_error("ProcessParams: tau must be >= 0");
    }
    if (q < -1.0 || q > 1.0) {
        throw std::domain_error("ProcessParams: q must lie in [-1, 1]");
    }
}

KernelCoordinates::KernelCoordinates(double x_, double s_, double t_)
    : x(x_), s(s_), t(t_) {
    if (!std::isfinite(x) || !std::isfinite(s) || !std::isfinite(t)) {
        throw std::domain_error("KernelCoordinates: values must be finite");
    }
    if (s < 0.0 || t <= s) {
        throw std::domain_error("KernelCoordinates: require 0 <= s < t");
    }
}

double RecurrenceCoeffs::diag_at(int n) const {
    if (n < 0 || n > order()) {
        throw std::domain_error("RecurrenceCoeffs: diagonal index out of range");
    }
    return diag[static_cast<std::size_t>(n)];
}

double RecurrenceCoeffs::sub_at(int n) const {
    if (n < 1 || n > order()) {
        throw std::domain_error("RecurrenceCoeffs: sub-diagonal index out of range");
    }
    return sub[static_cast<std::size_t>(n)];
}

RecurrenceCoeffs recurrence_coeffs(const ProcessParams& params, double x,
                                   double s, double t, int n_max) {
    if (n_max < 1) {
        throw std::domain_error("recurrence_coeffs: n_max must be >= 1");
    }
    RecurrenceCoeffs rc;
    rc.diag.resize(static_cast<std::size_t>(n_max) + 1);
    rc.sub.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (int n = 0; n <= n_max; ++n) {
        rc.diag[static_cast<std::size_t>(n)] =
            params.theta * q_int(n, params.q) + x * std::pow(params.q, n);
        if (n >= 1) {
            rc.sub[static_cast<std::size_t>(n)] =
                (t - s * std::pow(params.q, n - 1) +
                 params.tau * q_int(n - 1, params.q)) *
                q_int(n, params.q);
        }
    }
    return rc;
}

RecurrenceCoeffs kernel_recurrence(const ProcessParams& params,
                                   const KernelCoordinates& coords,
                                   int n_max) {
    return recurrence_coeffs(params, coords.x, coords.s, coords.t, n_max);
}

RecurrenceCoeffs marginal_recurrence(const ProcessParams& params, double t,
                                     int n_max) {
    if (t <= 0.0) {
        throw std::domain_error("marginal_recurrence: t must be > 0");
    }
    return recurrence_coeffs(params, 0.0, 0.0, t, n_max);
}

}  // namespace qharness
