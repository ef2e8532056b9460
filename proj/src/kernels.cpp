// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#include "qharness/kernels.hpp"

#include <cmath>
#include <numbers>

namespace qharness {

namespace {

using complex = std::complex<double>;

// sqrt(zeta^2 - edge^2) with the cut on [-edge, edge] and w ~ zeta at
// infinity; the two principal square roots make the discontinuities cancel
// off the interval.
complex sqrt_outside_cut(complex zeta, double edge) {
    return std::sqrt(zeta - edge) * std::sqrt(zeta + edge);
}

// Polynomial denominator shared by the q = 0 transform and density.
double free_denominator(double theta, double tau, double x, double s,
                        double t, double y) {
    const double dy = y - x;
    return tau * dy * dy + theta * (t - s) * dy + t * x * x + s * y * y -
           (s + t) * x * y + (t - s) * (t - s);
}

void check_free_times(double s, double t) {
    if (!(0.0 <= s && s < t)) {
        throw std::domain_error("free kernel: require 0 <= s < t");
    }
}

}  // namespace

TransitionKernel transition_kernel(const ProcessParams& params,
                                   const KernelCoordinates& coords, int N) {
    DiscreteMeasure measure = gauss_measure(build_jacobi(params, coords, N));
    if (params.two_point() && measure.size() == 2) {
        return TwoPointKernel{std::move(measure)};
    }
    return QuadratureKernel{std::move(measure)};
}

const DiscreteMeasure& kernel_measure(const TransitionKernel& kernel) {
    if (const auto* quad = std::get_if<QuadratureKernel>(&kernel)) {
        return quad->measure;
    }
    if (const auto* two = std::get_if<TwoPointKernel>(&kernel)) {
        return two->measure;
    }
    throw std::logic_error("kernel_measure: closed-form kernels carry no "
                           "sampling measure");
}

double qbrownian_density(double q, double x, double s, double t, double y,
                         int k_terms) {
    if (!(-1.0 < q && q < 1.0)) {
        throw std::domain_error(
            "qbrownian_density: requires -1 < q < 1 (atoms and the Gaussian "
            "limit live elsewhere)");
    }
    check_free_times(s, t);
    if (k_terms < 1) {
        throw std::domain_error("qbrownian_density: k_terms must be >= 1");
    }
    const double edge = 4.0 * t - (1.0 - q) * y * y;
    if (edge <= 0.0) {
        return 0.0;
    }
    double prod = 1.0;
    double qk = 1.0;
    for (int k = 0; k < k_terms; ++k) {
        const double q2k = qk * qk;
        const double num = (t - s * qk) * (1.0 - q * qk) *
                           (t * (1.0 + qk) * (1.0 + qk) -
                            (1.0 - q) * y * y * qk);
        const double den = (t - s * q2k) * (t - s * q2k) -
                           (1.0 - q) * qk * (t + s * q2k) * x * y +
                           (1.0 - q) * (s * y * y + t * x * x) * q2k;
        prod *= num / den;
        qk *= q;
    }
    return std::sqrt(1.0 - q) / (2.0 * std::numbers::pi * std::sqrt(edge)) *
           prod;
}

double qbrownian_marginal_density(double q, double t, double y, int k_terms) {
    if (t <= 0.0) {
        throw std::domain_error("qbrownian_marginal_density: t must be > 0");
    }
    if (q == 1.0) {
        return std::exp(-y * y / (2.0 * t)) /
               std::sqrt(2.0 * std::numbers::pi * t);
    }
    if (!(-1.0 < q && q < 1.0)) {
        throw std::domain_error(
            "qbrownian_marginal_density: q = -1 is purely atomic; use the "
            "transition kernel");
    }
    if (k_terms < 1) {
        throw std::domain_error(
            "qbrownian_marginal_density: k_terms must be >= 1");
    }
    const double edge = 4.0 * t - (1.0 - q) * y * y;
    if (edge <= 0.0) {
        return 0.0;
    }
    double prod = 1.0;
    double qk = 1.0;
    for (int k = 0; k < k_terms; ++k) {
        prod *= ((1.0 + qk) * (1.0 + qk) - (1.0 - q) * (y * y / t) * qk) *
                (1.0 - q * qk);
        qk *= q;
    }
    return std::sqrt(1.0 - q) / (2.0 * std::numbers::pi * std::sqrt(edge)) *
           prod;
}

std::complex<double> free_cauchy_transform(double theta, double tau, double x,
                                           double s, double t, complex z) {
    check_free_times(s, t);
    const double edge = 2.0 * std::sqrt(t + tau);
    if (z.imag() == 0.0 && z.real() >= theta - edge &&
        z.real() <= theta + edge) {
        throw std::domain_error(
            "free_cauchy_transform: z lies on the support cut");
    }
    const complex den = tau * (z - x) * (z - x) +
                        theta * (t - s) * (z - x) + t * x * x + s * z * z -
                        (s + t) * x * z + (t - s) * (t - s);
    if (den == complex(0.0, 0.0)) {
        throw std::domain_error("free_cauchy_transform: z is an atom of the "
                                "transition law");
    }
    // Numerator from rationalizing the continued fraction
    // 1/(z - x - (t-s)/phi(z)); it reproduces the atom masses as residues
    // and matches the quadrature resolvent to roundoff.
    const complex w = sqrt_outside_cut(z - theta, edge);
    complex g = 0.5 *
                (2.0 * (t + tau) * (z - x) - (t - s) * (z - theta) -
                 (t - s) * w) /
                den;
    // Branch rule: Im(z) * Im(G) <= 0. The two-factor square root already
    // satisfies it; flip the root if roundoff ever lands on the wrong side.
    if (z.imag() != 0.0 && z.imag() * g.imag() > 0.0) {
        g = 0.5 *
            (2.0 * (t + tau) * (z - x) - (t - s) * (z - theta) +
             (t - s) * w) /
            den;
    }
    return g;
}

double free_density(double theta, double tau, double x, double s, double t,
                    double y) {
    check_free_times(s, t);
    const double rad = 4.0 * (t + tau) - (y - theta) * (y - theta);
    if (rad <= 0.0) {
        return 0.0;
    }
    const double den = free_denominator(theta, tau, x, s, t, y);
    if (den <= 0.0) {
        throw std::runtime_error(
            "free_density: non-positive denominator inside the support");
    }
    return (t - s) * std::sqrt(rad) / (2.0 * std::numbers::pi * den);
}

std::vector<Atom> free_atoms(double theta, double tau, double x, double s,
                             double t) {
    check_free_times(s, t);
    std::vector<Atom> atoms;
    const auto matches = [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(b));
    };
    if (tau == 0.0 && theta != 0.0) {
        if (t < theta * theta && matches(x, -s / theta)) {
            const double mass =
                (1.0 - t / (theta * theta)) / (1.0 - s / (theta * theta));
            atoms.push_back({-t / theta, mass});
        }
        return atoms;
    }
    if (tau > 0.0 && theta * theta > 4.0 * tau) {
        const double root = std::sqrt(theta * theta - 4.0 * tau);
        const double slope = (theta > 0.0 ? -(theta - root) : -(theta + root)) /
                             (2.0 * tau);
        const double decay = (std::abs(theta) - root) / (2.0 * tau * root);
        if (matches(x, slope * s)) {
            const double numer = 1.0 - t * decay;
            if (numer > 0.0) {
                atoms.push_back({slope * t, numer / (1.0 - s * decay)});
            }
        }
    }
    return atoms;
}

ClosedFormKernel free_kernel(double theta, double tau, double x, double s,
                             double t) {
    check_free_times(s, t);
    ClosedFormKernel kernel;
    kernel.density = [=](double y) {
        return free_density(theta, tau, x, s, t, y);
    };
    kernel.atoms = free_atoms(theta, tau, x, s, t);
    const double edge = 2.0 * std::sqrt(t + tau);
    kernel.support_lo = theta - edge;
    kernel.support_hi = theta + edge;
    return kernel;
}

std::complex<double> free_r_transform(double theta, double tau, double t,
                                      complex z) {
    if (tau <= 0.0) {
        throw std::domain_error("free_r_transform: requires tau > 0");
    }
    if (t <= 0.0) {
        throw std::domain_error("free_r_transform: t must be > 0");
    }
    const complex a = 1.0 - z * theta;
    const complex w = std::sqrt(a * a - 4.0 * z * z * tau);
    return 2.0 * t * z / (a + w);
}

ClassicalLawType classify_classical_law(double theta, double tau) {
    if (tau < 0.0) {
        throw std::domain_error("classify_classical_law: tau must be >= 0");
    }
    if (tau == 0.0) {
        return theta == 0.0 ? ClassicalLawType::Wiener
                            : ClassicalLawType::PoissonType;
    }
    const double disc = theta * theta - 4.0 * tau;
    if (disc > 0.0) return ClassicalLawType::PascalType;
    if (disc == 0.0) return ClassicalLawType::GammaType;
    return ClassicalLawType::MeixnerType;
}

const char* classical_law_name(ClassicalLawType law) {
    switch (law) {
        case ClassicalLawType::Wiener: return "wiener";
        case ClassicalLawType::PoissonType: return "poisson";
        case ClassicalLawType::PascalType: return "pascal";
        case ClassicalLawType::GammaType: return "gamma";
        case ClassicalLawType::MeixnerType: return "meixner";
    }
    return "unknown";
}

namespace {

// base(v)^exponent with the branch of the logarithm tracked continuously
// along v in [0, u] from base(0) = 1; needed where the base winds around
// the origin (the Pascal mixture does for large |u|).
complex continuous_power(const std::function<complex(double)>& base, double u,
                         double exponent, double frequency) {
    const int steps =
        std::max(32, static_cast<int>(std::ceil(4.0 * std::abs(u) *
                                                (frequency + 1.0))));
    double arg = 0.0;
    complex prev(1.0, 0.0);
    for (int k = 1; k <= steps; ++k) {
        const complex cur = base(u * k / steps);
        arg += std::arg(cur / prev);
        prev = cur;
    }
    return std::exp(exponent * complex(std::log(std::abs(prev)), arg));
}

}  // namespace

std::complex<double> classical_char_function(ClassicalLawType law,
                                             double theta, double tau,
                                             double t, double u) {
    if (t <= 0.0) {
        throw std::domain_error("classical_char_function: t must be > 0");
    }
    if (classify_classical_law(theta, tau) != law) {
        throw std::domain_error(
            "classical_char_function: (theta, tau) does not classify as the "
            "requested law");
    }
    // Sign convention: the third moment is E X_t^3 = t theta, which fixes
    // the sign of u in every case (cross-checked against the quadrature
    // characteristic function).
    const complex iu(0.0, u);
    switch (law) {
        case ClassicalLawType::Wiener:
            return std::exp(complex(-t * u * u / 2.0, 0.0));
        case ClassicalLawType::PoissonType: {
            const complex expo = t / (theta * theta) *
                                     (std::exp(iu * theta) - 1.0) -
                                 iu * (t / theta);
            return std::exp(expo);
        }
        case ClassicalLawType::PascalType: {
            const double root = std::sqrt(theta * theta - 4.0 * tau);
            const double delta_plus = 0.5 * (theta + root);
            const double delta_minus = 0.5 * (theta - root);
            const double p = delta_plus / (delta_plus - delta_minus);
            const auto base = [=](double v) {
                return p * std::exp(complex(0.0, v * delta_minus)) +
                       (1.0 - p) * std::exp(complex(0.0, v * delta_plus));
            };
            return continuous_power(
                base, u, -t / tau,
                std::max(std::abs(delta_plus), std::abs(delta_minus)));
        }
        case ClassicalLawType::GammaType: {
            // Re(base) = 1, so the principal branch is already continuous.
            const complex base = 1.0 - iu * (theta / 2.0);
            return std::exp(-iu * (2.0 * t / theta)) *
                   std::pow(base, -4.0 * t / (theta * theta));
        }
        case ClassicalLawType::MeixnerType: {
            // Re(base) = cosh(...) >= 1, so the principal branch is safe.
            const double r = std::sqrt(4.0 * tau - theta * theta);
            const complex base =
                std::cosh(complex(r * u / 2.0, 0.0)) -
                complex(0.0, theta / r) * std::sinh(complex(r * u / 2.0, 0.0));
            return std::exp(-iu * (theta * t / (2.0 * tau))) *
                   std::pow(base, -t / tau);
        }
    }
    throw std::logic_error("classical_char_function: unreachable");
}

}  // namespace qharness
