#include "mqi/core.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace mqi {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

void require_unit_norm2(double n2, const char* what) {
    if (std::abs(n2 - 1.0) > 1e-12) {
        throw std::invalid_argument(std::string(what) +
                                    " must be normalized (|norm^2 - 1| <= 1e-12)");
    }
}

}  // namespace

SystemParams::SystemParams(double gamma_, double gamma_f_, double gamma_b_)
    : gamma(gamma_), gamma_f(gamma_f_), gamma_b(gamma_b_) {
    require_finite(gamma, "gamma");
    require_finite(gamma_f, "gamma_f");
    require_finite(gamma_b, "gamma_b");
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (gamma_f < 0.0) throw std::invalid_argument("gamma_f must be >= 0");
    if (gamma_b < 0.0) throw std::invalid_argument("gamma_b must be >= 0");
}

SystemParams SystemParams::symmetric(double beta, double gamma) {
    if (!std::isfinite(beta) || beta < 0.0) {
        throw std::invalid_argument("beta must be finite and >= 0");
    }
    return SystemParams(gamma, beta * gamma, beta * gamma);
}

double SystemParams::beta() const {
    if (!is_symmetric()) {
        throw std::invalid_argument("beta() requires gamma_f == gamma_b");
    }
    if (gamma <= 0.0) {
        throw std::invalid_argument("beta() requires gamma > 0");
    }
    return gamma_f / gamma;
}

Detuning::Detuning(double v) : value(v) {
    require_finite(value, "detuning");
}

PolarizationState::PolarizationState(Cx h, Cx v) : a_h(h), a_v(v) {
    require_unit_norm2(std::norm(a_h) + std::norm(a_v), "polarization state");
}

AtomState::AtomState(Cx plus, Cx minus) : b_plus(plus), b_minus(minus) {
    require_unit_norm2(std::norm(b_plus) + std::norm(b_minus), "atom state");
}

JointState::JointState(const Eigen::Vector4cd& a) : amps(a) {
    double n2 = amps.squaredNorm();
    if (!std::isfinite(n2) || n2 > 1.0 + 1e-12) {
        throw std::invalid_argument("joint state norm^2 must be <= 1");
    }
}

JointState joint_from_parts(const AtomState& atom, const PolarizationState& photon) {
    Eigen::Vector4cd a;
    a << atom.b_plus * photon.a_h, atom.b_plus * photon.a_v,
         atom.b_minus * photon.a_h, atom.b_minus * photon.a_v;
    return JointState(a);
}

namespace {

// Reshape the 4-vector into the 2x2 coefficient matrix M(i,j) = atom_i *
// photon_j and rank-1 factorize it. The dominant singular pair gives the
// two factors; a non-negligible second singular value means entanglement.
void product_factors(const JointState& js, Eigen::Vector2cd& atom,
                     Eigen::Vector2cd& photon) {
    Eigen::Matrix2cd m;
    m << js.amps(idx_plus_h), js.amps(idx_plus_v),
         js.amps(idx_minus_h), js.amps(idx_minus_v);
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues()(1) > 1e-9) {
        throw NumericError("state is entangled; no product factorization");
    }
    atom = svd.matrixU().col(0);
    photon = svd.singularValues()(0) * svd.matrixV().col(0).conjugate();
    // push the phase convention into the photon so the atom's leading
    // nonzero amplitude is real positive
    int lead = std::abs(atom(0)) >= std::abs(atom(1)) ? 0 : 1;
    Cx ph = atom(lead) / std::abs(atom(lead));
    atom /= ph;
    photon *= ph;
}

}  // namespace

AtomState extract_atom(const JointState& js) {
    Eigen::Vector2cd a, p;
    product_factors(js, a, p);
    return AtomState(a(0), a(1));
}

PolarizationState extract_photon(const JointState& js) {
    Eigen::Vector2cd a, p;
    product_factors(js, a, p);
    double n = p.norm();
    if (n <= 0.0) throw std::invalid_argument("zero photon component");
    return PolarizationState(p(0) / n, p(1) / n);
}

GaussianSpectrum::GaussianSpectrum(double center_, double sigma_, int n_points_,
                                   double span_)
    : center(center_), sigma(sigma_), n_points(n_points_), span(span_) {
    require_finite(center, "spectrum center");
    require_finite(sigma, "spectrum sigma");
    require_finite(span, "spectrum span");
    if (sigma <= 0.0) throw std::invalid_argument("spectrum sigma must be > 0");
    if (span <= 0.0) throw std::invalid_argument("spectrum span must be > 0");
    if (n_points < 3 || n_points % 2 == 0) {
        throw std::invalid_argument("spectrum n_points must be odd and >= 3");
    }
}

std::vector<SpectralPoint> spectrum_grid(const GaussianSpectrum& s) {
    std::vector<SpectralPoint> pts(static_cast<size_t>(s.n_points));
    const double half = s.span * s.sigma;
    const double step = 2.0 * half / (s.n_points - 1);
    double total = 0.0;
    for (int j = 0; j < s.n_points; ++j) {
        double d = (s.center - half) + step * j;
        double u = (d - s.center) / s.sigma;
        double w = std::exp(-2.0 * u * u);  // |f|^2 up to normalization
        pts[static_cast<size_t>(j)] = {d, w};
        total += w;
    }
    for (auto& p : pts) p.weight /= total;
    return pts;
}

}  // namespace mqi
