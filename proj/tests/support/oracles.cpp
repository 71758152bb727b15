#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "spaser/core/dynamics.hpp"

namespace spaser::testing {

namespace {

using Mat3 = Eigen::Matrix3cd;
using Mat9 = Eigen::Matrix<cplx, 9, 9>;

Mat9 kron(const Mat3& a, const Mat3& b) {
    Mat9 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
    return out;
}

Mat3 ket_bra(int i, int j) {
    Mat3 m = Mat3::Zero();
    m(i, j) = 1.0;
    return m;
}

}  // namespace

DensityMatrix3 lindblad_steady_state(const ModelParams& p) {
    const Mat3 id = Mat3::Identity();
    const double db = p.delta_b();
    const double da = p.drive.delta_a;
    // Level energies in the rotating frame and the drive on |3><2|.
    Mat3 h = Mat3::Zero();
    h(1, 1) = db;
    h(2, 2) = db + da;
    h(2, 1) = h(1, 2) = -p.drive.omega_a_rabi;

    const auto& g = p.gain;
    std::vector<Mat3> jumps = {std::sqrt(g.gamma21) * ket_bra(0, 1), std::sqrt(g.gamma31) * ket_bra(0, 2),
                               std::sqrt(g.gamma32) * ket_bra(1, 2), std::sqrt(g.pump_g) * ket_bra(2, 0)};
    for (int k = 0; k < 3; ++k) jumps.push_back(std::sqrt(g.gamma_ph) * ket_bra(k, k));

    // Column-major vec: vec(A X B) = (B^T kron A) vec(X).
    const cplx i{0.0, 1.0};
    Mat9 liou = -i * (kron(id, h) - kron(h.transpose(), id));
    for (const Mat3& l : jumps) {
        const Mat3 ldl = l.adjoint() * l;
        liou += kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
    }
    // Replace one equation by the trace condition.
    Eigen::Matrix<cplx, 9, 1> rhs = Eigen::Matrix<cplx, 9, 1>::Zero();
    liou.row(0).setZero();
    for (int k = 0; k < 3; ++k) liou(0, 4 * k) = 1.0;
    rhs(0) = 1.0;
    const Eigen::Matrix<cplx, 9, 1> v = liou.fullPivLu().solve(rhs);

    DensityMatrix3 rho;
    rho.rho11 = v(0).real();
    rho.rho22 = v(4).real();
    rho.rho33 = v(8).real();
    rho.rho21 = v(1);  // element (1, 0)
    rho.rho31 = v(2);
    rho.rho32 = v(5);  // element (2, 1)
    return rho;
}

cplx two_level_condition(const ModelParams& p, double nu) {
    const auto& g = p.gain;
    // Rate equations: pump 1 -> 3, then 3 -> 2 or 3 -> 1, then 2 -> 1.
    const double out3 = g.gamma31 + g.gamma32;
    const double r3_per_r1 = g.pump_g / out3;
    const double r2_per_r1 = g.gamma32 * r3_per_r1 / g.gamma21;
    const double r1 = 1.0 / (1.0 + r2_per_r1 + r3_per_r1);
    const double n21 = (r2_per_r1 - 1.0) * r1;

    const cplx gamma21{0.5 * (g.gamma21 + g.pump_g) + g.gamma_ph, g.omega21 - nu};
    const cplx gamma_n{p.plasmon.gamma_n, p.plasmon.omega_n - nu};
    const double coupling = p.plasmon.n_p * p.plasmon.omega_b_single * p.plasmon.omega_b_single;
    return coupling * n21 / (gamma_n * gamma21) - 1.0;
}

SpaserState random_state(std::mt19937_64& rng, double amp_max) {
    std::normal_distribution<double> n(0.0, 1.0);
    Mat3 a;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a(r, c) = {n(rng), n(rng)};
    Mat3 m = a * a.adjoint();
    m /= m.trace().real();
    SpaserState s;
    s.rho.rho11 = m(0, 0).real();
    s.rho.rho22 = m(1, 1).real();
    s.rho.rho33 = 1.0 - s.rho.rho11 - s.rho.rho22;
    s.rho.rho21 = m(1, 0);
    s.rho.rho31 = m(2, 0);
    s.rho.rho32 = m(2, 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    s.amplitude = std::polar(amp_max * u(rng), 2.0 * M_PI * u(rng));
    return s;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

ModelParams random_medium(std::mt19937_64& rng) {
    ModelParams p = default_model_params();
    p.gain.gamma21 = log_uniform(rng, 1e10, 1e14);
    p.gain.gamma31 = log_uniform(rng, 1e10, 1e14);
    p.gain.gamma32 = log_uniform(rng, 1e10, 1e14);
    p.gain.gamma_ph = log_uniform(rng, 1e10, 1e14);
    p.gain.pump_g = log_uniform(rng, 1e10, 1e14);
    p.drive.omega_a_rabi = std::uniform_real_distribution<double>(0.0, 5e13)(rng);
    p.drive.delta_a = 0.0;
    p.plasmon.omega_b_single = 0.0;
    return p;
}

double jacobian_fd_error(const SpaserState& state, const ModelParams& params, double floor) {
    const Jacobian analytic = jacobian(state, params);
    const ReducedVector x0 = pack_reduced(state);
    Jacobian numeric;
    // The right-hand side is quadratic, so central differences are exact up to rounding.
    for (int k = 0; k < 10; ++k) {
        const double h = 1e-3 * std::max(1.0, std::abs(x0[k]));
        ReducedVector xp = x0, xm = x0;
        xp[k] += h;
        xm[k] -= h;
        numeric.col(k) = (rhs_reduced(xp, params) - rhs_reduced(xm, params)) / (2.0 * h);
    }
    double worst = 0.0;
    for (int r = 0; r < 10; ++r) {
        const double scale = analytic.row(r).cwiseAbs().maxCoeff();
        for (int c = 0; c < 10; ++c) {
            const double ref = std::max(std::abs(analytic(r, c)), floor * scale);
            worst = std::max(worst, std::abs(numeric(r, c) - analytic(r, c)) / ref);
        }
    }
    return worst;
}

}  // namespace spaser::testing
