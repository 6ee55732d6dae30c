#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracspec/dd_resolvent.hpp"
#include "fracspec/signal.hpp"
#include "fracspec/types.hpp"

namespace fracspec {

/// A finite-dimensional generator A with its spectral data computed once.
class OperatorModel {
public:
    explicit OperatorModel(CMatrix matrix);

    [[nodiscard]] Eigen::Index dimension() const noexcept { return matrix_.rows(); }
    [[nodiscard]] const CMatrix& matrix() const noexcept { return matrix_; }
    [[nodiscard]] const CVector& eigenvalues() const noexcept { return eigenvalues_; }
    [[nodiscard]] bool diagonalizable() const noexcept { return diagonalizable_; }
    /// 2-norm condition number of the eigenvector matrix (infinite when defective).
    [[nodiscard]] double condition() const noexcept { return condition_; }
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// Eigenvector matrix V and its inverse; DefectiveMatrix unless diagonalizable.
    [[nodiscard]] const CMatrix& eigenvectors() const;
    [[nodiscard]] const CMatrix& eigenvectors_inverse() const;

private:
    CMatrix matrix_;
    CVector eigenvalues_;
    CMatrix vectors_;
    CMatrix vectors_inverse_;
    bool diagonalizable_ = false;
    double condition_ = 0.0;
    std::vector<std::string> warnings_;
};

enum class BoundaryReason { EigenvalueHit, BranchPoint };
std::string_view to_string(BoundaryReason r);

struct BoundaryPoint {
    double xi;
    BoundaryReason reason;
};

struct BoundarySpectrum {
    /// Sorted by xi, no duplicates.
    std::vector<BoundaryPoint> points;
};

/// {ξ ∈ ℝ : (iξ)^α ∈ σ(A)} plus ξ = 0 as a branch point when α < 1, or when
/// α = 1 and A is singular.
BoundarySpectrum sigma_set(const OperatorModel& A, FractionalOrder alpha);

/// R_α(λ, A) = λ^{α−1} (λ^α I − A)^{−1}. For α = 1 this is the ordinary
/// resolvent and λ may be any point off σ(A).
CMatrix fractional_resolvent(const OperatorModel& A, FractionalOrder alpha, cplx lambda);

/// Side from which η·R_α(±η + iζ, A)x is approached.
enum class ApproachSide { Above, Below };

struct OperatorErgodicMean {
    CVector last;
    ErgodicDiagnostic diagnostic;
};

/// η·R_α(η + iζ, A)x (Above) or η·R_α(−η + iζ, A)x (Below) along `etas`.
OperatorErgodicMean ergodic_mean_operator(const OperatorModel& A, FractionalOrder alpha, double zeta,
                                          const CVector& x, std::span<const double> etas,
                                          ApproachSide side = ApproachSide::Above);

}  // namespace fracspec
