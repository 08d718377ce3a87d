#include "mqi/gates.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace mqi {

JointOperator scattering_operator(const ScatteringAmplitudes& a) {
    JointOperator s;
    s.m.setZero();
    s.m(idx_plus_h, idx_plus_h) = 1.0;
    s.m(idx_minus_v, idx_minus_v) = 1.0;
    s.m(idx_plus_v, idx_plus_v) = a.t;
    s.m(idx_minus_h, idx_minus_h) = a.t;
    s.m(idx_plus_v, idx_minus_h) = a.r;
    s.m(idx_minus_h, idx_plus_v) = a.r;
    return s;
}

JointOperator swap_point_operator() {
    return scattering_operator({Cx(0, 0), Cx(-1, 0), Cx(0, 0)});
}

JointOperator entangle_point_operator(int sign) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("entangle_point_operator: sign must be +1 or -1");
    }
    const double s = static_cast<double>(sign);
    // lossless amplitudes at Delta = sign * Gamma
    const Cx t(0.5, -0.5 * s);
    const Cx r(-0.5, -0.5 * s);
    return scattering_operator({Cx(0, 0), r, t});
}

JointOperator local_swap_equivalence(const JointOperator& s) {
    Eigen::Vector4cd d;
    d << 1.0, -1.0, 1.0, -1.0;  // sigma_z on the photon factor
    JointOperator out;
    out.m = d.asDiagonal() * s.m * d.asDiagonal();
    return out;
}

double verify_sqrt_swap(const JointOperator& sg, const JointOperator& s0) {
    return (sg.m * sg.m - s0.m).cwiseAbs().maxCoeff();
}

MemoryFilter memory_filter(const ScatteringAmplitudes& a) {
    MemoryFilter f;
    f.m << a.r * a.r, Cx(0, 0),
           a.t,       Cx(1, 0);
    return f;
}

namespace {

// The three-subsystem protocols below work on flat 8-amplitude tensors
// with one atom-or-spectator qubit times a photon qubit addressed per
// step. stride_q/stride_p pick which pair of indices the 4x4 operator
// acts on; the remaining index is the spectator.
void apply_pair(std::array<Cx, 8>& psi, const Eigen::Matrix4cd& s, int stride_q,
                int stride_p, int stride_spec) {
    for (int spec = 0; spec < 2; ++spec) {
        Eigen::Vector4cd v;
        for (int q = 0; q < 2; ++q)
            for (int p = 0; p < 2; ++p)
                v(q * 2 + p) = psi[static_cast<size_t>(q * stride_q + p * stride_p +
                                                       spec * stride_spec)];
        v = s * v;
        for (int q = 0; q < 2; ++q)
            for (int p = 0; p < 2; ++p)
                psi[static_cast<size_t>(q * stride_q + p * stride_p +
                                        spec * stride_spec)] = v(q * 2 + p);
    }
}

}  // namespace

Eigen::Vector2cd MemoryTrace::coherent_readout() const {
    Eigen::Vector2cd out = Eigen::Vector2cd::Zero();
    for (const auto& b : branches) out(b.pol2) += b.amp;
    return out;
}

MemoryTrace memory_trace(const PolarizationState& photon,
                         const ScatteringAmplitudes& a_store,
                         const ScatteringAmplitudes& a_read) {
    const auto s_store = scattering_operator(a_store);
    const auto s_read = scattering_operator(a_read);

    // index = atom*4 + pol1*2 + pol2; atom starts |->, photon 2 starts |V>
    std::array<Cx, 8> psi{};
    psi[1 * 4 + 0 * 2 + 1] = photon.a_h;
    psi[1 * 4 + 1 * 2 + 1] = photon.a_v;

    apply_pair(psi, s_store.m, 4, 2, 1);  // atom with photon 1
    apply_pair(psi, s_read.m, 4, 1, 2);   // atom with photon 2

    MemoryTrace out;
    out.success_prob = 0.0;
    for (int p1 = 0; p1 < 2; ++p1) {
        for (int p2 = 0; p2 < 2; ++p2) {
            Cx amp = psi[static_cast<size_t>(1 * 4 + p1 * 2 + p2)];  // atom |->
            if (std::norm(amp) > 0.0) {
                out.branches.push_back({p1, p2, amp});
                out.success_prob += std::norm(amp);
            }
        }
    }
    return out;
}

TwoAtomDensity::TwoAtomDensity(const Eigen::Matrix4cd& rho_, double success_prob_)
    : rho(rho_), success_prob(success_prob_) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("two-atom density matrix must be Hermitian");
    }
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10) {
        throw std::invalid_argument("two-atom density matrix must have unit trace");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("two-atom density matrix must be positive semidefinite");
    }
    if (!(success_prob >= 0.0) || success_prob > 1.0 + 1e-12) {
        throw std::invalid_argument("success probability must lie in [0, 1]");
    }
    success_prob = std::min(success_prob, 1.0);
}

double concurrence(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix4cd y = Eigen::Matrix4cd::Zero();  // sigma_y (x) sigma_y
    y(0, 3) = -1.0;
    y(1, 2) = 1.0;
    y(2, 1) = 1.0;
    y(3, 0) = -1.0;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    Eigen::Vector4cd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Cx>();
    Eigen::Matrix4cd root = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();

    // The usual recipe takes eigenvalues of sqrt(rho) (Y rho* Y) sqrt(rho) and
    // then square roots them, which turns O(eps) eigenvalue noise into O(1e-8)
    // errors for a near pure state. The same quantities are the singular
    // values of B = sqrt(rho) Y sqrt(rho)*, which stay accurate to O(eps).
    Eigen::Matrix4cd b = root * y * root.conjugate();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(b);
    Eigen::Vector4d lam = svd.singularValues();  // sorted descending
    return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

namespace {

// indices of the network register: atomA*4 + atomB*2 + pol
void scatter_node_a(std::array<Cx, 8>& chi, const JointOperator& s) {
    apply_pair(chi, s.m, 4, 1, 2);
}

void scatter_node_b(std::array<Cx, 8>& chi, const JointOperator& s) {
    apply_pair(chi, s.m, 2, 1, 4);
}

}  // namespace

TwoAtomDensity remote_entanglement(const SystemParams& p_a, const SystemParams& p_b,
                                   const GaussianSpectrum& spec) {
    if (!p_a.is_symmetric() || !p_b.is_symmetric()) {
        throw std::invalid_argument("remote_entanglement requires symmetric coupling at both nodes");
    }
    const double cap_a = p_a.gamma_f;
    if (std::abs(spec.center - cap_a) > 1e-12) {
        throw std::invalid_argument(
            "spectrum must be centered on node A's entangling point (center = Gamma_A)");
    }

    const auto grid = spectrum_grid(spec);
    Eigen::Matrix4cd acc = Eigen::Matrix4cd::Zero();
    for (const auto& pt : grid) {
        const auto s_a = scattering_operator(amplitudes(p_a, Detuning(pt.detuning)));
        // node B is tuned so the spectral center sits on its resonance
        const auto s_b =
            scattering_operator(amplitudes(p_b, Detuning(pt.detuning - cap_a)));

        std::array<Cx, 8> chi{};
        chi[0 * 4 + 1 * 2 + 1] = 1.0;  // |+>_A |->_B |V>
        scatter_node_a(chi, s_a);
        scatter_node_b(chi, s_b);

        // partial trace over the photon polarization
        Eigen::Matrix<Cx, 4, 2> v;
        for (int ab = 0; ab < 4; ++ab)
            for (int pol = 0; pol < 2; ++pol)
                v(ab, pol) = chi[static_cast<size_t>(ab * 2 + pol)];
        acc += pt.weight * (v * v.adjoint());
    }

    const double succ = acc.trace().real();
    if (succ < 1e-9) {
        throw DegenerateProtocolError("herald probability below 1e-9");
    }
    return TwoAtomDensity(acc / succ, succ);
}

Eigen::Vector4cd remote_bell_target() {
    // run the protocol once with the lossless point operators; the photon
    // then stays |V> and factors out
    std::array<Cx, 8> chi{};
    chi[0 * 4 + 1 * 2 + 1] = 1.0;
    scatter_node_a(chi, entangle_point_operator(+1));
    scatter_node_b(chi, swap_point_operator());
    Eigen::Vector4cd out;
    for (int ab = 0; ab < 4; ++ab) out(ab) = chi[static_cast<size_t>(ab * 2 + 1)];
    return out;
}

double bell_fidelity(const TwoAtomDensity& d) {
    const Eigen::Vector4cd b = remote_bell_target();
    return (b.adjoint() * d.rho * b)(0, 0).real();
}

}  // namespace mqi
