// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <functional>
#include <variant>
#include <vector>

#include "qharness/quadrature.hpp"

namespace qharness {

/// Point mass of a transition law.
struct Atom {
    double location;
    double mass;  // in (0, 1]
};

/// General kernel: the N-point Gauss measure of mu_{x,s,t}.
struct QuadratureKernel {
    DiscreteMeasure measure;
};

/// q = -1 kernel: exactly two support points.
struct TwoPointKernel {
    DiscreteMeasure measure;  // two ascending nodes

    double node_minus() const { return measure.nodes[0]; }
    double node_plus() const { return measure.nodes[1]; }
    double weight_minus() const { return measure.weights[0]; }
    double weight_plus() const { return measure.weights[1]; }
};

/// Closed-form kernel: density on a support interval plus point masses.
/// Verification/output surface only; sampling always goes through the
/// discrete kernels.
struct ClosedFormKernel {
    std::function<double(double)> density;
    std::vector<Atom> atoms;
    double support_lo;
    double support_hi;
};

using TransitionKernel =
    std::variant<QuadratureKernel, TwoPointKernel, ClosedFormKernel>;

/// Build the transition kernel from (x, s) to t: TwoPoint for q = -1,
/// otherwise an N-point quadrature kernel.
TransitionKernel transition_kernel(const ProcessParams& params,
                                   const KernelCoordinates& coords, int N);

/// Discrete measure behind a quadrature or two-point kernel. Throws for
/// closed-form kernels, which carry no sampling measure.
const DiscreteMeasure& kernel_measure(const TransitionKernel& kernel);

/// Transition density of the theta = tau = 0 family for -1 < q < 1,
/// evaluated by truncating the infinite product at k_terms factors (the
/// tail is geometric in |q|). Zero outside (1-q) y^2 < 4t. The values are
/// meaningful for x inside the time-s support; other x are hypothetical.
double qbrownian_density(double q, double x, double s, double t, double y,
                         int k_terms = 200);

/// Marginal density of the same family (x = 0, s = 0). q = 1 returns the
/// Gaussian limit; q = -1 is purely atomic (+-sqrt(t) with mass 1/2, see
/// transition_kernel) and is rejected here.
double qbrownian_marginal_density(double q, double t, double y,
                                  int k_terms = 200);

/// Cauchy-Stieltjes transform of the q = 0 transition law, evaluated from
/// the closed rational-plus-root form. The square-root branch is fixed once
/// by the sign rule Im(z) * Im(G) <= 0. z must avoid the support interval
/// [theta - 2 sqrt(t+tau), theta + 2 sqrt(t+tau)] and the atoms.
std::complex<double> free_cauchy_transform(double theta, double tau, double x,
                                           double s, double t,
                                           std::complex<double> z);

/// Absolutely continuous part of the q = 0 transition law:
///   (t-s) sqrt(4(t+tau) - (y-theta)^2) / (2 pi * Pden(y)),
/// zero outside (y-theta)^2 < 4(t+tau).
double free_density(double theta, double tau, double x, double s, double t,
                    double y);

/// Point masses of the q = 0 transition law. Nonempty only in the stated
/// cases: tau = 0, theta != 0 with x = -s/theta and t < theta^2; or tau > 0,
/// theta^2 > 4 tau with x on the atom trajectory. For x off those
/// trajectories (unreachable states) the list is empty.
std::vector<Atom> free_atoms(double theta, double tau, double x, double s,
                             double t);

/// Closed-form q = 0 kernel bundling density, atoms and support interval.
ClosedFormKernel free_kernel(double theta, double tau, double x, double s,
                             double t);

/// R-series of the q = 0 marginal, tau > 0:
///   R_t(z) = t (1 - z theta - sqrt((1 - z theta)^2 - 4 z^2 tau)) / (2 z tau),
/// evaluated in the rationalized form 2 t z / ((1 - z theta) + sqrt(...)),
/// which is analytic at z = 0 with value 0. Linear in t, and satisfies
/// G(R(z) + 1/z) = z near 0.
std::complex<double> free_r_transform(double theta, double tau, double t,
                                      std::complex<double> z);

/// The five q = 1 law types, classified by (theta, tau).
enum class ClassicalLawType {
    Wiener,       // tau = 0, theta = 0
    PoissonType,  // tau = 0, theta != 0
    PascalType,   // tau > 0, theta^2 > 4 tau
    GammaType,    // tau > 0, theta^2 = 4 tau
    MeixnerType,  // theta^2 < 4 tau
};

ClassicalLawType classify_classical_law(double theta, double tau);

const char* classical_law_name(ClassicalLawType law);

/// Characteristic function E exp(i u X_t) of the q = 1 law at time t.
/// Throws if (theta, tau) does not classify as the requested law.
std::complex<double> classical_char_function(ClassicalLawType law,
                                             double theta, double tau,
                                             double t, double u);

}  // namespace qharness
