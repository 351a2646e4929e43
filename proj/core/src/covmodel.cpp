#include "pdop/covmodel.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace pdop {

namespace {

void check_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        std::ostringstream os;
        os << "gamma_m2 must be positive and finite, got " << gamma;
        throw ValidationError(os.str());
    }
}

void check_square(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch(std::string(what) + " must be square, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (m.rows() < 1) {
        throw DimensionMismatch(std::string(what) + " is empty");
    }
}

// Symmetrizes after checking the asymmetry is within 1e-10 relative.
Eigen::MatrixXd require_symmetric(const Eigen::MatrixXd& m, const char* what) {
    check_square(m, what);
    const double scale = std::max(m.norm(), 1e-300);
    if ((m - m.transpose()).norm() > 1e-10 * scale) {
        throw NotPsd(std::string(what) + " is not symmetric within 1e-10 relative");
    }
    return 0.5 * (m + m.transpose());
}

struct Spectrum {
    double min_eig{};
    double norm2{};  // largest |eigenvalue|
};

Spectrum spectrum(const Eigen::MatrixXd& sym) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    return {ev.minCoeff(), std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()))};
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& sym, const char* what) {
    Eigen::LLT<Eigen::MatrixXd> llt(sym);
    if (llt.info() != Eigen::Success) {
        throw NotPsd(std::string(what) + " is not positive definite");
    }
    const Eigen::Index s = sym.rows();
    return symmetrize(llt.solve(Eigen::MatrixXd::Identity(s, s)));
}

}  // namespace

CovarianceModel scaled_identity(double gamma_m2, int s) {
    check_gamma(gamma_m2);
    if (s < 1) {
        throw DimensionMismatch("satellite count must be >= 1, got " + std::to_string(s));
    }
    CovarianceModel m;
    m.sigma_eps = gamma_m2 * Eigen::MatrixXd::Identity(s, s);
    m.precision = (1.0 / gamma_m2) * Eigen::MatrixXd::Identity(s, s);
    m.weight = Eigen::MatrixXd::Identity(s, s);
    m.kappa = gamma_m2;
    return m;
}

CovarianceModel composite(double gamma_m2, const Eigen::MatrixXd& known_m2) {
    check_gamma(gamma_m2);
    const Eigen::MatrixXd known = require_symmetric(known_m2, "known component");
    const int s = static_cast<int>(known.rows());
    if (known.isZero(0.0)) {
        return scaled_identity(gamma_m2, s);
    }

    const Spectrum sp = spectrum(known);
    if (sp.min_eig < -1e-10 * sp.norm2) {
        std::ostringstream os;
        os << "known component has eigenvalue " << sp.min_eig << " below the PSD tolerance";
        throw NotPsd(os.str());
    }

    CovarianceModel m;
    m.kappa = gamma_m2;
    m.sigma_eps = symmetrize(gamma_m2 * Eigen::MatrixXd::Identity(s, s) + known);
    if (sp.min_eig > 1e-12 * sp.norm2) {
        // Lemma form: W = I - (gamma * known^-1 + I)^-1.
        const Eigen::MatrixXd known_inv = spd_inverse(known, "known component");
        const Eigen::MatrixXd inner =
            gamma_m2 * known_inv + Eigen::MatrixXd::Identity(s, s);
        m.weight = symmetrize(Eigen::MatrixXd::Identity(s, s) - inner.inverse());
        m.precision = m.weight / gamma_m2;
    } else {
        // known is PSD but singular; factorize Gamma_eps directly (SPD since gamma > 0).
        m.precision = spd_inverse(m.sigma_eps, "Gamma_eps");
        m.weight = gamma_m2 * m.precision;
    }
    return m;
}

CovarianceModel from_full(const Eigen::MatrixXd& sigma_m2) {
    const Eigen::MatrixXd sigma = require_symmetric(sigma_m2, "covariance matrix");
    const Spectrum sp = spectrum(sigma);
    if (!(sp.min_eig > 0.0)) {
        std::ostringstream os;
        os << "covariance matrix must be positive definite; smallest eigenvalue " << sp.min_eig;
        throw NotPsd(os.str());
    }
    CovarianceModel m;
    m.sigma_eps = sigma;
    m.precision = spd_inverse(sigma, "covariance matrix");
    m.weight = m.precision;
    m.kappa = 1.0;
    return m;
}

Eigen::MatrixXd precision_via_lemma(double gamma_m2, const Eigen::MatrixXd& known_m2) {
    check_gamma(gamma_m2);
    const Eigen::MatrixXd known = require_symmetric(known_m2, "known component");
    const Spectrum sp = spectrum(known);
    if (!(sp.min_eig > 1e-12 * sp.norm2) || sp.norm2 == 0.0) {
        std::ostringstream os;
        os << "known component is singular at tolerance 1e-12 (min eigenvalue " << sp.min_eig << ")";
        throw SingularMatrix(os.str());
    }
    const Eigen::Index s = known.rows();
    const Eigen::MatrixXd known_inv = spd_inverse(known, "known component");
    const Eigen::MatrixXd inner = gamma_m2 * known_inv + Eigen::MatrixXd::Identity(s, s);
    return symmetrize((Eigen::MatrixXd::Identity(s, s) - inner.inverse()) / gamma_m2);
}

Eigen::MatrixXd scintillation_diagonal(const std::vector<ScintillationEntry>& entries,
                                       double c1_m2, double c2_m2) {
    if (!(c1_m2 >= 0.0) || !(c2_m2 >= 0.0)) {
        throw ValidationError("scintillation coefficients must be non-negative");
    }
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(entries.size()),
                                              static_cast<Eigen::Index>(entries.size()));
    for (size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (!(e.s4 >= 0.0) || !(e.sigma_phi_rad >= 0.0)) {
            throw ValidationError("scintillation entry " + std::to_string(i) +
                                  " has a negative index");
        }
        d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
            c1_m2 * e.s4 * e.s4 + c2_m2 * e.sigma_phi_rad * e.sigma_phi_rad;
    }
    return d;
}

CovarianceSpec CovarianceSpec::make_scaled_identity(double gamma_m2) {
    check_gamma(gamma_m2);
    CovarianceSpec s;
    s.kind_ = Kind::ScaledIdentity;
    s.gamma_m2_ = gamma_m2;
    return s;
}

CovarianceSpec CovarianceSpec::make_composite_diagonal(double gamma_m2, Eigen::VectorXd diag_m2) {
    check_gamma(gamma_m2);
    for (Eigen::Index i = 0; i < diag_m2.size(); ++i) {
        if (!(diag_m2[i] >= 0.0) || !std::isfinite(diag_m2[i])) {
            throw NotPsd("diagonal_m2 entry " + std::to_string(i) + " is negative or non-finite");
        }
    }
    CovarianceSpec s;
    s.kind_ = Kind::CompositeDiagonal;
    s.gamma_m2_ = gamma_m2;
    s.diag_m2_ = std::move(diag_m2);
    return s;
}

CovarianceSpec CovarianceSpec::make_composite_matrix(double gamma_m2, Eigen::MatrixXd known_m2) {
    check_gamma(gamma_m2);
    CovarianceSpec s;
    s.kind_ = Kind::CompositeMatrix;
    s.gamma_m2_ = gamma_m2;
    s.matrix_m2_ = std::move(known_m2);
    // Validate symmetry/PSD eagerly so scenario loading reports it.
    composite(gamma_m2, s.matrix_m2_);
    return s;
}

CovarianceSpec CovarianceSpec::make_composite_scintillation(double gamma_m2, ScintillationSpec scint) {
    check_gamma(gamma_m2);
    scintillation_diagonal(scint.entries, scint.c1_m2, scint.c2_m2);  // validates
    CovarianceSpec s;
    s.kind_ = Kind::CompositeScintillation;
    s.gamma_m2_ = gamma_m2;
    s.scint_ = std::move(scint);
    return s;
}

CovarianceSpec CovarianceSpec::make_full_matrix(Eigen::MatrixXd sigma_m2) {
    CovarianceSpec s;
    s.kind_ = Kind::FullMatrix;
    s.matrix_m2_ = std::move(sigma_m2);
    from_full(s.matrix_m2_);  // validates
    return s;
}

std::optional<int> CovarianceSpec::fixed_size() const {
    switch (kind_) {
        case Kind::ScaledIdentity:
            return std::nullopt;
        case Kind::CompositeDiagonal:
            return static_cast<int>(diag_m2_.size());
        case Kind::CompositeMatrix:
        case Kind::FullMatrix:
            return static_cast<int>(matrix_m2_.rows());
        case Kind::CompositeScintillation:
            return static_cast<int>(scint_.entries.size());
    }
    return std::nullopt;
}

CovarianceSpec CovarianceSpec::subset(const std::vector<int>& keep) const {
    const auto size = fixed_size();
    if (!size) {
        return *this;  // scale-only model, nothing per-satellite
    }
    for (int idx : keep) {
        if (idx < 0 || idx >= *size) {
            throw DimensionMismatch("subset index " + std::to_string(idx) +
                                    " outside covariance dimension " + std::to_string(*size));
        }
    }
    CovarianceSpec out = *this;
    const auto k = static_cast<Eigen::Index>(keep.size());
    switch (kind_) {
        case Kind::CompositeDiagonal: {
            Eigen::VectorXd d(k);
            for (Eigen::Index i = 0; i < k; ++i) d[i] = diag_m2_[keep[static_cast<size_t>(i)]];
            out.diag_m2_ = std::move(d);
            break;
        }
        case Kind::CompositeMatrix:
        case Kind::FullMatrix: {
            Eigen::MatrixXd m(k, k);
            for (Eigen::Index i = 0; i < k; ++i) {
                for (Eigen::Index j = 0; j < k; ++j) {
                    m(i, j) = matrix_m2_(keep[static_cast<size_t>(i)], keep[static_cast<size_t>(j)]);
                }
            }
            out.matrix_m2_ = std::move(m);
            break;
        }
        case Kind::CompositeScintillation: {
            std::vector<ScintillationEntry> e;
            e.reserve(keep.size());
            for (int idx : keep) e.push_back(scint_.entries[static_cast<size_t>(idx)]);
            out.scint_.entries = std::move(e);
            break;
        }
        case Kind::ScaledIdentity:
            break;
    }
    return out;
}

CovarianceModel CovarianceSpec::build(int s) const {
    const auto size = fixed_size();
    if (size && *size != s) {
        throw DimensionMismatch("covariance model is dimensioned for " + std::to_string(*size) +
                                " satellites, need " + std::to_string(s));
    }
    switch (kind_) {
        case Kind::ScaledIdentity:
            return scaled_identity(gamma_m2_, s);
        case Kind::CompositeDiagonal:
            return composite(gamma_m2_, Eigen::MatrixXd(diag_m2_.asDiagonal()));
        case Kind::CompositeMatrix:
            return composite(gamma_m2_, matrix_m2_);
        case Kind::CompositeScintillation:
            return composite(gamma_m2_,
                             scintillation_diagonal(scint_.entries, scint_.c1_m2, scint_.c2_m2));
        case Kind::FullMatrix:
            return from_full(matrix_m2_);
    }
    throw ValidationError("unknown covariance spec kind");
}

}  // namespace pdop
