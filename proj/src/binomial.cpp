// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#include "qharness/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qharness {

namespace {

constexpr int kEnumerationCap = 12;

double binomial_coeff(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double out = 1.0;
    for (int j = 1; j <= k; ++j) {
        out *= static_cast<double>(n - j + 1) / j;
    }
    return out;
}

void check_window(const RateProfile& rate, double a, double b) {
    if (!(0.0 <= a && a <= b && b <= rate.horizon())) {
        throw std::domain_error(
            "RateProfile: times must satisfy 0 <= a <= b <= horizon");
    }
}

}  // namespace

RateProfile::RateProfile(std::vector<double> edges_,
                         std::vector<double> rates_)
    : edges(std::move(edges_)), rates(std::move(rates_)) {
    if (edges.size() < 2 || rates.size() + 1 != edges.size()) {
        throw std::domain_error("RateProfile: need K+1 edges for K rates");
    }
    if (edges.front() != 0.0) {
        throw std::domain_error("RateProfile: profile must start at 0");
    }
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i] < edges[i + 1])) {
            throw std::domain_error("RateProfile: edges must be increasing");
        }
    }
    for (double r : rates) {
        if (r < 0.0) {
            throw std::domain_error("RateProfile: rates must be >= 0");
        }
    }
    if (cumulative(0.0, horizon()) >= 1.0) {
        throw std::domain_error("RateProfile: total mass must be < 1");
    }
}

RateProfile RateProfile::constant(double rate, double horizon) {
    return RateProfile({0.0, horizon}, {rate});
}

double RateProfile::cumulative(double a, double b) const {
    if (!(0.0 <= a && a <= b && b <= horizon())) {
        throw std::domain_error("RateProfile::cumulative: bad window");
    }
    double out = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const double lo = std::max(a, edges[i]);
        const double hi = std::min(b, edges[i + 1]);
        if (hi > lo) {
            out += rates[i] * (hi - lo);
        }
    }
    return out;
}

BinomialChain::BinomialChain(int m_, RateProfile rate_)
    : m(m_), rate(std::move(rate_)) {
    if (m < 1) {
        throw std::domain_error("BinomialChain: m must be >= 1");
    }
}

std::vector<std::vector<double>> transition_matrix(const BinomialChain& chain,
                                                   double s, double t) {
    check_window(chain.rate, s, t);
    if (!(s < t)) {
        throw std::domain_error("transition_matrix: require s < t");
    }
    const double pi_st = chain.rate.cumulative(s, t);
    const double pi_0s = chain.rate.cumulative(0.0, s);
    const double pi_0t = chain.rate.cumulative(0.0, t);
    if (pi_0s >= 1.0) {
        throw std::domain_error("transition_matrix: pi(0, s) must be < 1");
    }
    const int m = chain.m;
    std::vector<std::vector<double>> P(
        static_cast<std::size_t>(m) + 1,
        std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
    for (int i = 0; i <= m; ++i) {
        for (int j = i; j <= m; ++j) {
            P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                binomial_coeff(m - i, j - i) * std::pow(pi_st, j - i) *
                std::pow(1.0 - pi_0t, m - j) /
                std::pow(1.0 - pi_0s, m - i);
        }
    }
    return P;
}

std::vector<double> chain_marginal(const BinomialChain& chain, double t) {
    return transition_matrix(chain, 0.0, t)[0];
}

double ChainResiduals::max() const {
    return std::max({harness, variance, pmf, chapman});
}

ChainResiduals chain_identity_residuals(const BinomialChain& chain, double s,
                                        double t, double u) {
    check_window(chain.rate, s, u);
    if (!(0.0 <= s && s < t && t < u)) {
        throw std::domain_error(
            "chain_identity_residuals: require 0 <= s < t < u");
    }
    const int m = chain.m;
    if (m > kEnumerationCap) {
        throw std::domain_error(
            "chain_identity_residuals: m exceeds the enumeration cap");
    }
    const double pi_0s = chain.rate.cumulative(0.0, s);
    const double pi_st = chain.rate.cumulative(s, t);
    const double pi_tu = chain.rate.cumulative(t, u);
    const double pi_su = chain.rate.cumulative(s, u);
    const double pi_0u = chain.rate.cumulative(0.0, u);
    if (pi_su <= 0.0) {
        throw std::domain_error(
            "chain_identity_residuals: rate vanishes on [s, u]");
    }

    // Exact joint law P(Y_s=i, Y_t=i+j, Y_u=i+j+k): a multinomial over the
    // four windows.
    const auto joint = [&](int i, int j, int k) {
        double out = 1.0;
        // m! / (i! j! k! (m-i-j-k)!) assembled as nested binomials.
        out *= binomial_coeff(m, i);
        out *= binomial_coeff(m - i, j);
        out *= binomial_coeff(m - i - j, k);
        out *= std::pow(pi_0s, i) * std::pow(pi_st, j) * std::pow(pi_tu, k) *
               std::pow(1.0 - pi_0u, m - i - j - k);
        return out;
    };

    ChainResiduals res{0.0, 0.0, 0.0, 0.0};

    for (int i = 0; i <= m; ++i) {
        for (int n = 0; i + n <= m; ++n) {
            // Conditioning pair Y_s = i, Y_u = i + n.
            double mass = 0.0;
            double mean = 0.0;
            double second = 0.0;
            for (int j = 0; j <= n; ++j) {
                const double p = joint(i, j, n - j);
                mass += p;
                mean += p * (i + j);
                second += p * (i + j) * (i + j);
            }
            if (mass <= 0.0) continue;
            mean /= mass;
            second /= mass;

            const double target_mean = i + pi_st / pi_su * n;
            const double target_var = pi_st * pi_tu / (pi_su * pi_su) * n;
            res.harness = std::max(res.harness, std::abs(mean - target_mean));
            res.variance = std::max(
                res.variance, std::abs(second - mean * mean - target_var));

            // Full conditional pmf against binomial(n, pi(s,t)/pi(s,u)).
            for (int j = 0; j <= n; ++j) {
                const double cond = joint(i, j, n - j) / mass;
                const double ref = binomial_coeff(n, j) *
                                   std::pow(pi_st / pi_su, j) *
                                   std::pow(pi_tu / pi_su, n - j);
                res.pmf = std::max(res.pmf, std::abs(cond - ref));
            }
        }
    }

    const auto P_st = transition_matrix(chain, s, t);
    const auto P_tu = transition_matrix(chain, t, u);
    const auto P_su = transition_matrix(chain, s, u);
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            double acc = 0.0;
            for (int k = 0; k <= m; ++k) {
                acc += P_st[static_cast<std::size_t>(i)]
                           [static_cast<std::size_t>(k)] *
                       P_tu[static_cast<std::size_t>(k)]
                           [static_cast<std::size_t>(j)];
            }
            res.chapman = std::max(
                res.chapman,
                std::abs(acc - P_su[static_cast<std::size_t>(i)]
                                   [static_cast<std::size_t>(j)]));
        }
    }
    return res;
}

double chain_covariance(const BinomialChain& chain, double s, double t) {
    check_window(chain.rate, s, t);
    return chain.m * chain.rate.cumulative(0.0, s) *
           (1.0 - chain.rate.cumulative(0.0, t));
}

ChainCoefficients fit_chain_coefficients(const BinomialChain& chain, double s,
                                         double t, double u) {
    if (!(0.0 < s && s < t && t < u)) {
        throw std::domain_error(
            "fit_chain_coefficients: require 0 < s < t < u");
    }
    const int m = chain.m;
    if (m > kEnumerationCap) {
        throw std::domain_error(
            "fit_chain_coefficients: m exceeds the enumeration cap");
    }
    const double pi_0s = chain.rate.cumulative(0.0, s);
    const double pi_st = chain.rate.cumulative(s, t);
    const double pi_tu = chain.rate.cumulative(t, u);
    const double pi_0u = chain.rate.cumulative(0.0, u);

    const auto joint = [&](int i, int j, int k) {
        return binomial_coeff(m, i) * binomial_coeff(m - i, j) *
               binomial_coeff(m - i - j, k) * std::pow(pi_0s, i) *
               std::pow(pi_st, j) * std::pow(pi_tu, k) *
               std::pow(1.0 - pi_0u, m - i - j - k);
    };

    // Weighted normal equations for E(Y_t | a, c) ~ est_a * a + est_b * c,
    // plus a one-parameter fit of the conditional variance on (c - a).
    double saa = 0.0, sac = 0.0, scc = 0.0, say = 0.0, scy = 0.0;
    double svv = 0.0, svy = 0.0;
    for (int i = 0; i <= m; ++i) {
        for (int n = 0; i + n <= m; ++n) {
            double mass = 0.0;
            double mean = 0.0;
            double second = 0.0;
            for (int j = 0; j <= n; ++j) {
                const double p = joint(i, j, n - j);
                mass += p;
                mean += p * (i + j);
                second += p * (i + j) * (i + j);
            }
            if (mass <= 0.0) continue;
            mean /= mass;
            second /= mass;
            const double a = i;
            const double c = i + n;
            saa += mass * a * a;
            sac += mass * a * c;
            scc += mass * c * c;
            say += mass * a * mean;
            scy += mass * c * mean;
            const double var = second - mean * mean;
            svv += mass * n * n;
            svy += mass * n * var;
        }
    }
    const double det = saa * scc - sac * sac;
    if (det == 0.0 || svv == 0.0) {
        throw std::runtime_error(
            "fit_chain_coefficients: degenerate normal equations");
    }
    ChainCoefficients out{};
    out.a = (say * scc - scy * sac) / det;
    out.b = (scy * saa - say * sac) / det;
    out.v = svy / svv;
    return out;
}

}  // namespace qharness
