// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "qharness/qcore.hpp"

namespace qharness {

/// Symmetric tridiagonal (Jacobi) operator whose spectral measure is the
/// transition law. effective_size marks truncation at the first
/// beta_n <= 1e-14 * (t + tau + 1), which turns near-finite-support cases
/// (q at or near -1) into exact finite measures.
struct JacobiOperator {
    std::vector<double> diag;     // alpha_0 .. alpha_{N-1}
    std::vector<double> offdiag;  // sqrt(beta_1) .. sqrt(beta_{N-1})
    int effective_size;           // rows that define the measure, <= N

    int size() const { return static_cast<int>(diag.size()); }
};

/// N-point discrete measure: ascending nodes with positive weights summing
/// to 1. Node count equals the effective size of the generating operator.
struct DiscreteMeasure {
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const { return static_cast<int>(nodes.size()); }
};

/// Build the Jacobi operator for mu_{x,s,t} from the kernel recurrence.
/// Throws a runtime error if any beta_n < -1e-12 * (t + tau + 1), which is
/// impossible for admissible parameters.
JacobiOperator build_jacobi(const ProcessParams& params,
                            const KernelCoordinates& coords, int N);

/// Jacobi operator of the marginal law mu_{0,0,t}.
JacobiOperator marginal_jacobi(const ProcessParams& params, double t, int N);

/// Golub-Welsch: nodes are the eigenvalues of the (effective) operator,
/// weights the squared first components of the eigenvectors.
DiscreteMeasure gauss_measure(const JacobiOperator& op);

/// sum_i w_i y_i^k.
double moment(const DiscreteMeasure& measure, int k);

/// Moment oracle e0^T J^k e0, computed by tridiagonal mat-vec on the
/// effective block and independent of any eigen-decomposition. Exact for
/// k <= 2 * effective_size - 1.
double oracle_moment(const JacobiOperator& op, int k);

}  // namespace qharness
