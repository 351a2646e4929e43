#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "pdop/errors.hpp"

namespace pdop {

/// Per-satellite ionospheric scintillation indices: amplitude index S4
/// (unitless) and phase index sigma_phi (radians).
struct ScintillationEntry {
    double s4{};
    double sigma_phi_rad{};
};

/// Mapping of scintillation indices to an added per-satellite variance:
/// v_i = c1 * S4_i^2 + c2 * sigma_phi_i^2. The quadratic form and the
/// default unit coefficients are a documented, configurable placeholder,
/// not a calibrated physical model.
struct ScintillationSpec {
    std::vector<ScintillationEntry> entries;
    double c1_m2 = 1.0;
    double c2_m2 = 1.0;
};

/// Fully constructed observation-error covariance model: the covariance
/// Gamma_eps itself, its precision (inverse), the weight matrix
/// W = (Gamma_eps / kappa)^-1 and the scale kappa. kappa equals gamma for
/// models built from an explicit gamma, and 1 for a user-supplied full
/// covariance.
struct CovarianceModel {
    Eigen::MatrixXd sigma_eps;  // Gamma_eps [m^2]
    Eigen::MatrixXd precision;  // Gamma_eps^-1
    Eigen::MatrixXd weight;     // W
    double kappa{};             // [m^2]

    int size() const { return static_cast<int>(sigma_eps.rows()); }
};

/// Gamma_eps = gamma * I. W = I, kappa = gamma.
CovarianceModel scaled_identity(double gamma_m2, int s);

/// Gamma_eps = gamma * I + known, with `known` symmetric PSD. kappa = gamma.
/// W comes from the matrix-inversion-lemma form when `known` is invertible
/// and from a direct factorization of Gamma_eps otherwise.
CovarianceModel composite(double gamma_m2, const Eigen::MatrixXd& known_m2);

/// Covariance supplied directly as a full SPD matrix. kappa = 1, W = precision.
CovarianceModel from_full(const Eigen::MatrixXd& sigma_m2);

/// Matrix-inversion-lemma precision of gamma * I + known:
/// gamma^-1 * (I - (gamma * known^-1 + I)^-1). Requires `known` strictly
/// positive definite; throws SingularMatrix otherwise.
Eigen::MatrixXd precision_via_lemma(double gamma_m2, const Eigen::MatrixXd& known_m2);

/// Diagonal known-component built from scintillation indices (see
/// ScintillationSpec for the mapping).
Eigen::MatrixXd scintillation_diagonal(const std::vector<ScintillationEntry>& entries,
                                       double c1_m2 = 1.0, double c2_m2 = 1.0);

/// Declarative form of a covariance model as it appears in scenario files.
/// Per-satellite data (diagonal, full matrix, scintillation entries) is
/// sized for the full candidate list and subset after elevation masking.
class CovarianceSpec {
public:
    enum class Kind {
        ScaledIdentity,
        CompositeDiagonal,
        CompositeMatrix,
        CompositeScintillation,
        FullMatrix,
    };

    /// Defaults to scaled identity with gamma = 1.
    CovarianceSpec() = default;

    static CovarianceSpec make_scaled_identity(double gamma_m2);
    static CovarianceSpec make_composite_diagonal(double gamma_m2, Eigen::VectorXd diag_m2);
    static CovarianceSpec make_composite_matrix(double gamma_m2, Eigen::MatrixXd known_m2);
    static CovarianceSpec make_composite_scintillation(double gamma_m2, ScintillationSpec scint);
    static CovarianceSpec make_full_matrix(Eigen::MatrixXd sigma_m2);

    Kind kind() const { return kind_; }

    /// gamma is meaningful for every kind except FullMatrix.
    double gamma_m2() const { return gamma_m2_; }

    /// Number of satellites implied by per-satellite data, if any.
    std::optional<int> fixed_size() const;

    /// Restrict per-satellite data to the given candidate indices.
    CovarianceSpec subset(const std::vector<int>& keep) const;

    /// Construct the dense model for s satellites. Throws DimensionMismatch
    /// when per-satellite data disagrees with s.
    CovarianceModel build(int s) const;

private:
    Kind kind_ = Kind::ScaledIdentity;
    double gamma_m2_ = 1.0;
    Eigen::VectorXd diag_m2_;
    Eigen::MatrixXd matrix_m2_;
    ScintillationSpec scint_;
};

}  // namespace pdop
