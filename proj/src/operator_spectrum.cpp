#include "fracspec/operator_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "fracspec/errors.hpp"
#include "fracspec/special_fn.hpp"

namespace fracspec {

namespace {

constexpr double kDefectiveCondition = 1e12;
constexpr double kWarnCondition = 1e8;

}  // namespace

OperatorModel::OperatorModel(CMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() < 1 || matrix_.rows() != matrix_.cols()) {
        throw DomainError("operator matrix must be square with dimension >= 1");
    }
    if (!matrix_.allFinite()) {
        throw DomainError("operator matrix has non-finite entries");
    }
    Eigen::ComplexEigenSolver<CMatrix> solver(matrix_, true);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceFailure("eigenvalue iteration did not converge");
    }
    eigenvalues_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();

    Eigen::JacobiSVD<CMatrix> svd(vectors_);
    const auto& s = svd.singularValues();
    const double smallest = s(s.size() - 1);
    condition_ = smallest > 0.0 ? s(0) / smallest : std::numeric_limits<double>::infinity();

    const double scale = std::max(1.0, matrix_.norm());
    double residual = 0.0;
    for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
        residual = std::max(residual,
                            (matrix_ * vectors_.col(k) - eigenvalues_(k) * vectors_.col(k)).norm());
    }
    diagonalizable_ = condition_ < kDefectiveCondition && residual <= 1e-8 * scale;
    if (!diagonalizable_) {
        condition_ = std::numeric_limits<double>::infinity();
    }
    if (diagonalizable_) {
        vectors_inverse_ = vectors_.partialPivLu().inverse();
        if (condition_ > kWarnCondition) {
            std::ostringstream msg;
            msg << "eigenvector matrix is ill-conditioned (cond = " << condition_ << ")";
            warnings_.push_back(msg.str());
        }
    }
}

const CMatrix& OperatorModel::eigenvectors() const {
    if (!diagonalizable_) {
        throw DefectiveMatrix("matrix is not diagonalizable");
    }
    return vectors_;
}

const CMatrix& OperatorModel::eigenvectors_inverse() const {
    if (!diagonalizable_) {
        throw DefectiveMatrix("matrix is not diagonalizable");
    }
    return vectors_inverse_;
}

std::string_view to_string(BoundaryReason r) {
    return r == BoundaryReason::EigenvalueHit ? "EigenvalueHit" : "BranchPoint";
}

BoundarySpectrum sigma_set(const OperatorModel& A, FractionalOrder alpha) {
    const double a = alpha.value();
    std::vector<BoundaryPoint> points;
    bool singular = false;
    for (Eigen::Index k = 0; k < A.eigenvalues().size(); ++k) {
        const cplx mu = A.eigenvalues()(k);
        const double modulus = std::abs(mu);
        if (modulus <= 1e-14 * std::max(1.0, A.matrix().norm())) {
            singular = true;
            continue;
        }
        const double xi = std::copysign(std::pow(modulus, 1.0 / a), std::arg(mu));
        const cplx image = principal_power(cplx{0.0, xi}, a);
        if (std::abs(image - mu) <= 1e-10 * std::max(1.0, modulus)) {
            points.push_back({xi, BoundaryReason::EigenvalueHit});
        }
    }
    if (a < 1.0 || singular) {
        points.push_back({0.0, BoundaryReason::BranchPoint});
    }
    std::sort(points.begin(), points.end(),
              [](const BoundaryPoint& l, const BoundaryPoint& r) { return l.xi < r.xi; });
    std::vector<BoundaryPoint> unique;
    for (const BoundaryPoint& p : points) {
        if (!unique.empty() &&
            std::abs(unique.back().xi - p.xi) <= 1e-12 * std::max(1.0, std::abs(p.xi))) {
            continue;
        }
        unique.push_back(p);
    }
    return {std::move(unique)};
}

CMatrix fractional_resolvent(const OperatorModel& A, FractionalOrder alpha, cplx lambda) {
    const double a = alpha.value();
    const cplx power = alpha.is_integer() ? lambda : principal_power(lambda, a);
    const cplx prefactor = alpha.is_integer() ? cplx{1.0, 0.0} : principal_power(lambda, a - 1.0);
    for (Eigen::Index k = 0; k < A.eigenvalues().size(); ++k) {
        const cplx mu = A.eigenvalues()(k);
        if (std::abs(power - mu) <= 1e-12 * std::max(1.0, std::abs(mu))) {
            throw SingularMatrix("lambda^alpha coincides with an eigenvalue");
        }
    }
    const Eigen::Index d = A.dimension();
    CMatrix shifted = power * CMatrix::Identity(d, d) - A.matrix();
    return prefactor * shifted.partialPivLu().solve(CMatrix::Identity(d, d));
}

OperatorErgodicMean ergodic_mean_operator(const OperatorModel& A, FractionalOrder alpha, double zeta,
                                          const CVector& x, std::span<const double> etas,
                                          ApproachSide side) {
    if (etas.empty()) {
        throw DomainError("ergodic mean needs at least one eta value");
    }
    if (x.size() != A.dimension()) {
        throw DomainError("vector dimension does not match the operator");
    }
    std::vector<double> norms;
    CVector last;
    for (double eta : etas) {
        if (!(eta > 0.0)) {
            throw DomainError("ergodic eta values must be positive");
        }
        const double re = side == ApproachSide::Above ? eta : -eta;
        last = eta * (fractional_resolvent(A, alpha, cplx{re, zeta}) * x);
        norms.push_back(last.norm());
    }
    return {std::move(last),
            extrapolate_ergodic(std::vector<double>(etas.begin(), etas.end()), std::move(norms))};
}

}  // namespace fracspec
