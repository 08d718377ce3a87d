#include "mqi/metrics.hpp"

#include <cmath>
#include <exception>

#include <omp.h>

#include "mqi/gates.hpp"
#include "mqi/scattering.hpp"

namespace mqi {

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;

template <typename State>
std::vector<State> pauli_eigenstates() {
    const Cx one(1.0, 0.0), zero(0.0, 0.0);
    const Cx h(inv_sqrt2, 0.0);
    const Cx ih(0.0, inv_sqrt2);
    return {
        State(one, zero),  // z up
        State(zero, one),  // z down
        State(h, h),       // x up
        State(h, -h),      // x down
        State(h, ih),      // y up
        State(h, -ih),     // y down
    };
}

}  // namespace

std::vector<AtomState> atom_probe_states() { return pauli_eigenstates<AtomState>(); }

std::vector<PolarizationState> photon_probe_states() {
    return pauli_eigenstates<PolarizationState>();
}

std::vector<JointState> joint_probe_states() {
    std::vector<JointState> out;
    out.reserve(36);
    for (const auto& a : atom_probe_states())
        for (const auto& ph : photon_probe_states()) out.push_back(joint_from_parts(a, ph));
    return out;
}

namespace {

MetricsReport report_from_effective(const std::vector<Eigen::Vector4cd>& states,
                                    const Eigen::Matrix4cd& overlap_eff,
                                    const Eigen::Matrix4cd& norm_eff) {
    MetricsReport rep;
    rep.per_state.reserve(states.size());
    for (size_t i = 0; i < states.size(); ++i) {
        const auto& u = states[i];
        const Cx o = (u.adjoint() * overlap_eff * u)(0, 0);
        const double nn = (u.adjoint() * norm_eff * u)(0, 0).real();
        if (nn < 1e-12) {
            throw DegenerateScatteringError(
                "conditional norm vanished for a probe state");
        }
        const double fid = std::abs(o) / std::sqrt(nn);
        rep.per_state.push_back({static_cast<int>(i), fid, nn});
        rep.f_bar += fid;
        rep.eta_bar += nn;
    }
    rep.f_bar /= static_cast<double>(states.size());
    rep.eta_bar /= static_cast<double>(states.size());
    return rep;
}

}  // namespace

MetricsReport gate_metrics(GateKind kind, const SystemParams& p,
                           const GaussianSpectrum& spec) {
    if (!p.is_symmetric()) {
        throw std::invalid_argument("gate_metrics requires gamma_f == gamma_b");
    }
    const double cap = p.gamma_f;
    JointOperator ideal;
    if (kind == GateKind::swap_gate) {
        if (std::abs(spec.center) > 1e-12) {
            throw std::invalid_argument("swap metrics need the spectrum centered at 0");
        }
        ideal = swap_point_operator();
    } else {
        if (std::abs(std::abs(spec.center) - cap) > 1e-12 * std::max(1.0, cap)) {
            throw std::invalid_argument(
                "entangling metrics need the spectrum centered at +/-Gamma");
        }
        ideal = entangle_point_operator(spec.center >= 0.0 ? +1 : -1);
    }

    Eigen::Matrix4cd overlap_eff = Eigen::Matrix4cd::Zero();
    Eigen::Matrix4cd norm_eff = Eigen::Matrix4cd::Zero();
    for (const auto& pt : spectrum_grid(spec)) {
        const Eigen::Matrix4cd s = scattering_operator(amplitudes(p, Detuning(pt.detuning))).m;
        overlap_eff += pt.weight * (ideal.m.adjoint() * s);
        norm_eff += pt.weight * (s.adjoint() * s);
    }

    std::vector<Eigen::Vector4cd> states;
    states.reserve(36);
    for (const auto& u : joint_probe_states()) states.push_back(u.amps);
    return report_from_effective(states, overlap_eff, norm_eff);
}

MetricsReport memory_metrics(const SystemParams& p, const GaussianSpectrum& spec) {
    if (!p.is_symmetric()) {
        throw std::invalid_argument("memory_metrics requires gamma_f == gamma_b");
    }
    if (std::abs(spec.center) > 1e-12) {
        throw std::invalid_argument("memory metrics need the spectrum centered at 0");
    }

    Eigen::Matrix2cd overlap_eff = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2cd norm_eff = Eigen::Matrix2cd::Zero();
    for (const auto& pt : spectrum_grid(spec)) {
        const Eigen::Matrix2cd m = memory_filter(amplitudes(p, Detuning(pt.detuning))).m;
        overlap_eff += pt.weight * m;  // the ideal memory is the identity
        norm_eff += pt.weight * (m.adjoint() * m);
    }

    MetricsReport rep;
    const auto probes = photon_probe_states();
    rep.per_state.reserve(probes.size());
    for (size_t i = 0; i < probes.size(); ++i) {
        Eigen::Vector2cd u;
        u << probes[i].a_h, probes[i].a_v;
        const Cx o = (u.adjoint() * overlap_eff * u)(0, 0);
        const double nn = (u.adjoint() * norm_eff * u)(0, 0).real();
        if (nn < 1e-12) {
            throw DegenerateScatteringError(
                "conditional norm vanished for a probe state");
        }
        const double fid = std::abs(o) / std::sqrt(nn);
        rep.per_state.push_back({static_cast<int>(i), fid, nn});
        rep.f_bar += fid;
        rep.eta_bar += nn;
    }
    rep.f_bar /= static_cast<double>(probes.size());
    rep.eta_bar /= static_cast<double>(probes.size());
    return rep;
}

namespace {

SweepRow metrics_row(double key, double beta, double sigma, int n_points, double span) {
    const auto p = SystemParams::symmetric(beta, 1.0);
    const GaussianSpectrum at_zero(0.0, sigma, n_points, span);
    const GaussianSpectrum at_gamma_cap(p.gamma_f, sigma, n_points, span);
    const auto sw = gate_metrics(GateKind::swap_gate, p, at_zero);
    const auto en = gate_metrics(GateKind::entangle_gate, p, at_gamma_cap);
    const auto me = memory_metrics(p, at_zero);
    return {key, sw.f_bar, sw.eta_bar, en.f_bar, en.eta_bar, me.f_bar, me.eta_bar};
}

template <typename RowFn>
std::vector<SweepRow> run_sweep(size_t count, RowFn&& fn) {
    std::vector<SweepRow> rows(count);
    std::exception_ptr failure;
    const bool fan_out = omp_get_max_threads() > 1 && count > 1;
#pragma omp parallel for schedule(static) if (fan_out)
    for (long i = 0; i < static_cast<long>(count); ++i) {
        try {
            rows[static_cast<size_t>(i)] = fn(static_cast<size_t>(i));
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

}  // namespace

std::vector<SweepRow> sweep_beta(const std::vector<double>& betas, double sigma,
                                 int n_points, double span) {
    return run_sweep(betas.size(), [&](size_t i) {
        return metrics_row(betas[i], betas[i], sigma, n_points, span);
    });
}

std::vector<SweepRow> sweep_bandwidth(const std::vector<double>& sigmas, double beta,
                                      int n_points, double span) {
    return run_sweep(sigmas.size(), [&](size_t i) {
        return metrics_row(sigmas[i], beta, sigmas[i], n_points, span);
    });
}

}  // namespace mqi
