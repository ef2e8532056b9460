// Copyright (c) 2026 the qharness authors.
// SPDX-License-Identifier: Apache-2.0

#include "qharness/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace qharness {

namespace {

std::string dump_operator(const JacobiOperator& op) {
    std::ostringstream os;
    os << "diag:";
    for (double a : op.diag) os << ' ' << a;
    os << " offdiag:";
    for (double b : op.offdiag) os << ' ' << b;
    os << " effective_size: " << op.effective_size;
    return os.str();
}

}  // namespace

JacobiOperator build_jacobi(const ProcessParams& params,
                            const KernelCoordinates& coords, int N) {
    if (N < 1) {
        throw std::domain_error("build_jacobi: N must be >= 1");
    }
    const double scale = coords.t + params.tau + 1.0;
    const double trunc_tol = 1e-14 * scale;
    const double neg_tol = -1e-12 * scale;

    const RecurrenceCoeffs rc =
        recurrence_coeffs(params, coords.x, coords.s, coords.t,
                          std::max(1, N - 1));
    JacobiOperator op;
    op.diag.resize(static_cast<std::size_t>(N));
    op.offdiag.resize(static_cast<std::size_t>(N) - 1);
    op.effective_size = N;
    for (int n = 0; n < N; ++n) {
        op.diag[static_cast<std::size_t>(n)] = rc.diag_at(n);
    }
    bool truncated = false;
    for (int n = 1; n < N; ++n) {
        const double beta = rc.sub_at(n);
        if (beta < neg_tol) {
            std::ostringstream os;
            os << "build_jacobi: beta_" << n << " = " << beta
               << " is negative beyond tolerance (x=" << coords.x
               << ", s=" << coords.s << ", t=" << coords.t << ")";
            throw std::runtime_error(os.str());
        }
        if (!truncated && beta <= trunc_tol) {
            op.effective_size = n;
            truncated = true;
        }
        op.offdiag[static_cast<std::size_t>(n) - 1] =
            std::sqrt(std::max(beta, 0.0));
    }
    return op;
}

JacobiOperator marginal_jacobi(const ProcessParams& params, double t, int N) {
    if (t <= 0.0) {
        throw std::domain_error("marginal_jacobi: t must be > 0");
    }
    return build_jacobi(params, KernelCoordinates(0.0, 0.0, t), N);
}

DiscreteMeasure gauss_measure(const JacobiOperator& op) {
    const int m = op.effective_size;
    if (m < 1 || m > op.size()) {
        throw std::domain_error("gauss_measure: invalid effective size");
    }
    DiscreteMeasure out;
    if (m == 1) {
        out.nodes = {op.diag[0]};
        out.weights = {1.0};
        return out;
    }
    Eigen::VectorXd diag(m);
    Eigen::VectorXd sub(m - 1);
    for (int i = 0; i < m; ++i) diag[i] = op.diag[static_cast<std::size_t>(i)];
    for (int i = 0; i + 1 < m; ++i) {
        sub[i] = op.offdiag[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("gauss_measure: eigensolver failed on " +
                                 dump_operator(op));
    }
    out.nodes.resize(static_cast<std::size_t>(m));
    out.weights.resize(static_cast<std::size_t>(m));
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        out.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()[i];
        const double w0 = solver.eigenvectors()(0, i);
        out.weights[static_cast<std::size_t>(i)] = w0 * w0;
        total += w0 * w0;
    }
    for (int i = 0; i + 1 < m; ++i) {
        if (!(out.nodes[static_cast<std::size_t>(i)] <
              out.nodes[static_cast<std::size_t>(i) + 1])) {
            throw std::runtime_error("gauss_measure: nodes not strictly "
                                     "increasing for " + dump_operator(op));
        }
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::runtime_error("gauss_measure: weights do not sum to 1 for " +
                                 dump_operator(op));
    }
    return out;
}

double moment(const DiscreteMeasure& measure, int k) {
    if (k < 0) {
        throw std::domain_error("moment: k must be >= 0");
    }
    double out = 0.0;
    for (std::size_t i = 0; i < measure.nodes.size(); ++i) {
        out += measure.weights[i] * std::pow(measure.nodes[i], k);
    }
    return out;
}

double oracle_moment(const JacobiOperator& op, int k) {
    if (k < 0) {
        throw std::domain_error("oracle_moment: k must be >= 0");
    }
    const int m = op.effective_size;
    std::vector<double> v(static_cast<std::size_t>(m), 0.0);
    std::vector<double> w(static_cast<std::size_t>(m), 0.0);
    v[0] = 1.0;
    for (int step = 0; step < k; ++step) {
        for (int i = 0; i < m; ++i) {
            double acc = op.diag[static_cast<std::size_t>(i)] *
                         v[static_cast<std::size_t>(i)];
            if (i > 0) {
                acc += op.offdiag[static_cast<std::size_t>(i) - 1] *
                       v[static_cast<std::size_t>(i) - 1];
            }
            if (i + 1 < m) {
                acc += op.offdiag[static_cast<std::size_t>(i)] *
                       v[static_cast<std::size_t>(i) + 1];
            }
            w[static_cast<std::size_t>(i)] = acc;
        }
        std::swap(v, w);
    }
    return v[0];
}

}  // namespace qharness
