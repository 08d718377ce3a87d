// Acceptance harness: runs the numbered release criteria and prints one
// pass/fail line each. An optional argument selects a single criterion.
#include "mqi/core.hpp"
#include "mqi/dynamics.hpp"
#include "mqi/gates.hpp"
#include "mqi/metrics.hpp"
#include "mqi/scattering.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mqi;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

double max_abs(const Eigen::Matrix4cd& m) { return m.cwiseAbs().maxCoeff(); }

std::string eng(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

Eigen::Matrix4cd swap_permutation() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
    return m;
}

Eigen::Matrix4cd sqrt_swap_standard() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = m(3, 3) = 1.0;
    m(1, 1) = m(2, 2) = Cx(0.5, 0.5);
    m(1, 2) = m(2, 1) = Cx(0.5, -0.5);
    return m;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

Outcome criterion_1() {
    SystemParams p(0.0, 1.0, 1.0);
    auto s0 = scattering_operator(amplitudes(p, Detuning(0.0)));
    auto sp = scattering_operator(amplitudes(p, Detuning(1.0)));
    auto sm = scattering_operator(amplitudes(p, Detuning(-1.0)));

    double d = 0.0;
    d = std::max(d, max_abs(s0.m - swap_point_operator().m));
    d = std::max(d, max_abs(sp.m - entangle_point_operator(+1).m));
    d = std::max(d, max_abs(sm.m - entangle_point_operator(-1).m));

    double d_sq = std::max(verify_sqrt_swap(sp, s0), verify_sqrt_swap(sm, s0));
    double d_inv = max_abs(sp.m * sm.m - Eigen::Matrix4cd::Identity());

    double d_local = 0.0;
    d_local = std::max(d_local, max_abs(local_swap_equivalence(s0).m - swap_permutation()));
    d_local = std::max(d_local,
                       max_abs(local_swap_equivalence(sm).m - sqrt_swap_standard()));
    d_local = std::max(
        d_local,
        max_abs(local_swap_equivalence(sp).m - Eigen::Matrix4cd(sqrt_swap_standard().conjugate())));

    Outcome o;
    o.ok = d < 1e-15 && d_sq < 1e-12 && d_inv < 1e-12 && d_local < 1e-12;
    o.detail = "operating point defect " + eng(d) + ", square defect " + eng(d_sq) +
               ", inverse defect " + eng(d_inv) + ", local frame defect " + eng(d_local);
    return o;
}

Outcome criterion_2() {
    auto a50 = amplitudes(SystemParams::symmetric(50.0), Detuning(0.0));
    double er = std::abs(std::abs(a50.r) - 100.0 / 101.0);
    double et = std::abs(std::abs(a50.t) - 1.0 / 101.0);

    bool limits = true;
    for (double beta : {1e3, 1e6, 1e9}) {
        auto a = amplitudes(SystemParams::symmetric(beta), Detuning(0.0));
        // exact resonant values are 1/(2 beta + 1); allow rounding headroom
        limits = limits && std::abs(a.t) <= 1.0 / (2.0 * beta + 1.0) + 1e-12 &&
                 (1.0 - std::abs(a.r)) <= 1.0 / (2.0 * beta + 1.0) + 1e-12;
    }

    Outcome o;
    o.ok = er < 1e-15 && et < 1e-15 && limits;
    o.detail = "|R| error " + eng(er) + ", |T| error " + eng(et) +
               (limits ? ", asymptotic trend holds" : ", asymptotic trend BROKEN");
    return o;
}

Outcome criterion_3() {
    auto t0 = std::chrono::steady_clock::now();
    double worst_t = 0.0, worst_r = 0.0;
    int runs = 0;
    for (double beta : {10.0, 30.0, 50.0}) {
        auto p = SystemParams::symmetric(beta);
        double cap = p.gamma_f;
        for (double delta : linspace(-3.0 * cap, 3.0 * cap, 25)) {
            auto wp = WavePacket::standard(delta, 0.1 * cap);
            auto res = simulate(p, wp, default_grid(p, wp), default_dt(default_grid(p, wp)),
                                default_t_end(p, wp));
            auto num = numeric_amplitudes(res, p, wp);
            auto ana = amplitudes(p, Detuning(delta));
            worst_t = std::max(worst_t, std::abs(num.abs_t - std::abs(ana.t)));
            worst_r = std::max(worst_r, std::abs(num.abs_r - std::abs(ana.r)));
            ++runs;
        }
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Outcome o;
    o.ok = worst_t <= 1e-2 && worst_r <= 1e-2 && elapsed <= 300.0;
    std::ostringstream ss;
    ss << runs << " packet runs, max |T| error " << eng(worst_t) << ", max |R| error "
       << eng(worst_r) << ", " << eng(elapsed) << " s";
    o.detail = ss.str();
    return o;
}

Outcome criterion_4() {
    Outcome o;
    double worst = 0.0;
    {
        auto p = SystemParams::symmetric(50.0);
        auto wp = WavePacket::standard(0.0, 5.0);
        auto res = simulate(p, wp, default_grid(p, wp), default_dt(default_grid(p, wp)),
                            default_t_end(p, wp));
        worst = std::max(worst, std::abs(res.p_transmit + res.p_reflect + res.p_loss +
                                         res.residual_excitation - 1.0));
    }
    {
        auto p = SystemParams::symmetric(10.0);
        auto wp = WavePacket::standard(20.0, 1.0);
        auto res = simulate(p, wp, default_grid(p, wp), default_dt(default_grid(p, wp)),
                            default_t_end(p, wp));
        worst = std::max(worst, std::abs(res.p_transmit + res.p_reflect + res.p_loss +
                                         res.residual_excitation - 1.0));
    }
    double lossless_drift = 0.0;
    {
        SystemParams p(0.0, 50.0, 50.0);
        auto wp = WavePacket::standard(0.0, 5.0);
        auto res = simulate(p, wp, default_grid(p, wp), default_dt(default_grid(p, wp)),
                            default_t_end(p, wp));
        lossless_drift =
            std::abs(res.p_transmit + res.p_reflect + res.residual_excitation - 1.0);
        if (res.p_loss != 0.0) lossless_drift = std::max(lossless_drift, res.p_loss);
    }
    o.ok = worst <= 1e-6 && lossless_drift <= 1e-9;
    o.detail = "worst budget error " + eng(worst) + ", lossless drift " + eng(lossless_drift);
    return o;
}

Outcome criterion_5() {
    auto p = SystemParams::symmetric(50.0);
    auto en = gate_metrics(GateKind::entangle_gate, p, GaussianSpectrum(50.0, 5.0));
    auto sw = gate_metrics(GateKind::swap_gate, p, GaussianSpectrum(0.0, 5.0));
    auto mem = memory_metrics(SystemParams::symmetric(30.0), GaussianSpectrum(0.0, 5.0));

    bool ok = true;
    ok = ok && std::abs(en.f_bar - 0.9996) <= 0.005;
    ok = ok && std::abs(en.eta_bar - 0.9901) <= 0.01;
    ok = ok && std::abs(sw.f_bar - 0.9982) <= 0.005;
    ok = ok && std::abs(sw.eta_bar - 0.9810) <= 0.01;
    ok = ok && mem.f_bar >= 0.9928 - 0.005;
    ok = ok && mem.eta_bar >= 0.9345 - 0.01;

    bool shape = true;
    auto brows = sweep_beta({10.0, 20.0, 30.0, 40.0, 50.0}, 5.0);
    for (size_t i = 1; i < brows.size(); ++i) {
        shape = shape && brows[i].f_swap > brows[i - 1].f_swap &&
                brows[i].f_ent > brows[i - 1].f_ent && brows[i].f_mem > brows[i - 1].f_mem;
    }
    auto srows = sweep_bandwidth({1.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0}, 50.0);
    for (size_t i = 1; i < srows.size(); ++i) {
        shape = shape && srows[i].f_swap < srows[i - 1].f_swap &&
                srows[i].f_ent < srows[i - 1].f_ent && srows[i].f_mem < srows[i - 1].f_mem;
    }

    Outcome o;
    o.ok = ok && shape;
    std::ostringstream ss;
    ss.precision(6);
    ss << std::fixed << "F_ent " << en.f_bar << ", eta_ent " << en.eta_bar << ", F_swap "
       << sw.f_bar << ", eta_swap " << sw.eta_bar << ", F_mem(30) " << mem.f_bar
       << ", eta_mem(30) " << mem.eta_bar << (shape ? ", curve shapes hold" : ", curve shape BROKEN");
    o.detail = ss.str();
    return o;
}

Outcome criterion_6() {
    std::vector<double> sigmas;
    for (int s = 1; s <= 30; ++s) sigmas.push_back(double(s));
    auto rows = sweep_bandwidth(sigmas, 50.0);

    bool monotone = true;
    for (size_t i = 1; i < rows.size(); ++i) {
        monotone = monotone && rows[i].f_swap < rows[i - 1].f_swap &&
                   rows[i].f_ent < rows[i - 1].f_ent && rows[i].f_mem < rows[i - 1].f_mem;
    }
    const auto& w = rows[24];  // sigma = 25
    bool f_bound = w.f_mem >= 0.95 - 0.005;
    bool e_bound = w.eta_mem >= 0.92 - 0.01;

    Outcome o;
    o.ok = monotone && f_bound && e_bound;
    std::ostringstream ss;
    ss.precision(6);
    ss << std::fixed << (monotone ? "fidelities decrease monotonically" : "monotonicity BROKEN")
       << "; at sigma=25: F_mem " << w.f_mem << (f_bound ? " >= " : " BELOW bound ") << 0.945
       << ", eta_mem " << w.eta_mem << (e_bound ? " >= " : " BELOW bound ") << 0.91;
    o.detail = ss.str();
    return o;
}

Outcome criterion_7() {
    Outcome o;
    SystemParams ideal(0.0, 1.0, 1.0);
    auto [ip, im] = equal_split_detunings(ideal);
    double e_ideal = std::max(std::abs(ip.value - 1.0), std::abs(im.value + 1.0));

    auto p50 = SystemParams::symmetric(50.0);
    auto [dp, dm] = equal_split_detunings(p50);
    double analytic = std::sqrt(50.0 * 50.0 - 0.25);
    double e_strong = std::abs(dp.value - analytic);
    bool near_gamma = std::abs(dp.value - 50.0) / 50.0 <= 0.02;

    // conditional atom-photon state at the lossless split point
    auto a = amplitudes(ideal, ip);
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(idx_plus_v) = a.t;
    v(idx_minus_h) = a.r;
    v /= v.norm();
    Eigen::Matrix4cd rho = v * v.adjoint();
    double c = concurrence(rho);

    o.ok = e_ideal <= 1e-8 && e_strong <= 1e-6 && near_gamma && std::abs(c - 1.0) <= 1e-10;
    o.detail = "lossless split error " + eng(e_ideal) + ", strong coupling split error " +
               eng(e_strong) + ", conditional concurrence error " + eng(std::abs(c - 1.0));
    return o;
}

Outcome criterion_8() {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        ScatteringAmplitudes a;
        a.phi_e = Cx(0.0, 0.0);
        a.r = Cx(u(rng), u(rng)) * 0.7;
        a.t = Cx(u(rng), u(rng)) * 0.7;
        Cx h(u(rng), u(rng)), vamp(u(rng), u(rng));
        double n = std::sqrt(std::norm(h) + std::norm(vamp));
        PolarizationState in(h / n, vamp / n);
        auto tr = memory_trace(in, a, a);
        Eigen::Vector2cd direct = memory_filter(a).m * Eigen::Vector2cd(in.a_h, in.a_v);
        worst = std::max(worst, (tr.coherent_readout() - direct).cwiseAbs().maxCoeff());
    }
    Outcome o;
    o.ok = worst <= 1e-12;
    o.detail = "max readout mismatch " + eng(worst) + " over 20 random draws";
    return o;
}

Outcome criterion_9() {
    SystemParams ideal(0.0, 1.0, 1.0);
    auto pure = remote_entanglement(ideal, ideal, GaussianSpectrum(1.0, 1e-11));
    double c_ideal = concurrence(pure.rho);

    auto node = SystemParams::symmetric(50.0);
    auto res = remote_entanglement(node, node, GaussianSpectrum(50.0, 5.0));
    double c = concurrence(res.rho);

    Outcome o;
    o.ok = std::abs(c_ideal - 1.0) <= 1e-10 && c >= 0.95 &&
           std::abs(c - 0.996186072306) <= 1e-6;
    std::ostringstream ss;
    ss.precision(6);
    ss << std::fixed << "ideal concurrence error " << eng(std::abs(c_ideal - 1.0))
       << ", heralded concurrence " << c << " (success " << res.success_prob << ")";
    o.detail = ss.str();
    return o;
}

Outcome criterion_10() {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> ug(0.05, 60.0), ud(-150.0, 150.0);
    double unit_defect = 0.0;
    for (int i = 0; i < 100; ++i) {
        double g = ug(rng);
        auto s = scattering_operator(amplitudes(SystemParams(0.0, g, g), Detuning(ud(rng))));
        unit_defect = std::max(unit_defect,
                               max_abs(s.m.adjoint() * s.m - Eigen::Matrix4cd::Identity()));
    }

    std::uniform_real_distribution<double> ur(0.0, 100.0), uw(-300.0, 300.0);
    double flux_excess = 0.0;
    double fix_defect = 0.0;
    for (int i = 0; i < 1000; ++i) {
        SystemParams p(ur(rng), ur(rng), ur(rng));
        auto a = amplitudes(p, Detuning(uw(rng)));
        flux_excess = std::max(flux_excess, std::norm(a.r) + std::norm(a.t) - 1.0);
        auto s = scattering_operator(a);
        Eigen::Vector4cd ph = Eigen::Vector4cd::Unit(idx_plus_h);
        Eigen::Vector4cd mv = Eigen::Vector4cd::Unit(idx_minus_v);
        fix_defect = std::max(fix_defect, (s.m * ph - ph).cwiseAbs().maxCoeff());
        fix_defect = std::max(fix_defect, (s.m * mv - mv).cwiseAbs().maxCoeff());
    }

    Outcome o;
    o.ok = unit_defect <= 1e-12 && flux_excess <= 1e-12 && fix_defect == 0.0;
    o.detail = "unitarity defect " + eng(unit_defect) + ", flux excess " + eng(flux_excess) +
               ", fixed subspace defect " + eng(fix_defect);
    return o;
}

const char* criterion_name(int n) {
    switch (n) {
        case 1: return "ideal operating point identities";
        case 2: return "resonant response at strong coupling";
        case 3: return "packet dynamics match stationary amplitudes";
        case 4: return "probability budget closure";
        case 5: return "gate and memory quality at five linewidth bandwidth";
        case 6: return "graceful degradation with bandwidth";
        case 7: return "equal split detunings and conditional entanglement";
        case 8: return "memory trace consistency";
        case 9: return "remote entanglement concurrence";
        case 10: return "unitarity, flux bound, invariant subspace";
    }
    return "unknown";
}

Outcome run_criterion(int n) {
    switch (n) {
        case 1: return criterion_1();
        case 2: return criterion_2();
        case 3: return criterion_3();
        case 4: return criterion_4();
        case 5: return criterion_5();
        case 6: return criterion_6();
        case 7: return criterion_7();
        case 8: return criterion_8();
        case 9: return criterion_9();
        case 10: return criterion_10();
    }
    Outcome o;
    o.ok = false;
    o.detail = "no such criterion";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    if (argc > 1) {
        int n = std::atoi(argv[1]);
        if (n < 1 || n > 10) {
            std::fprintf(stderr, "usage: %s [criterion 1..10]\n", argv[0]);
            return 2;
        }
        which.push_back(n);
    } else {
        for (int n = 1; n <= 10; ++n) which.push_back(n);
    }

    bool all_ok = true;
    for (int n : which) {
        auto o = run_criterion(n);
        std::printf("[%s] criterion %2d: %s  (%s)\n", o.ok ? "PASS" : "FAIL", n,
                    criterion_name(n), o.detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && o.ok;
    }
    return all_ok ? 0 : 1;
}
