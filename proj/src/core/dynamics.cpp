#include "spaser/core/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "spaser/core/error.hpp"

namespace spaser {

namespace {

constexpr cplx I{0.0, 1.0};

struct Derivative {
    double d11, d22, d33;
    cplx d21, d31, d32, da;
};

Derivative evaluate(double r11, double r22, double r33, cplx r21, cplx r31, cplx r32, cplx a,
                    const ModelParams& p, const ComplexRates& rates) {
    const auto& g = p.gain;
    const double oa = p.drive.omega_a_rabi;
    const double ob1 = p.plasmon.omega_b_single;
    const cplx ob = ob1 * a;

    // i(X - conj X) = -2 Im X
    const double flow21 = -2.0 * (std::conj(ob) * r21).imag();  // |2> -> |1> stimulated
    const double flow32 = -2.0 * oa * r32.imag();                 // |3> -> |2> driven

    Derivative d;
    d.d11 = -g.pump_g * r11 + g.gamma21 * r22 + g.gamma31 * r33 + flow21;
    d.d22 = -g.gamma21 * r22 + g.gamma32 * r33 - flow21 + flow32;
    d.d33 = g.pump_g * r11 - (g.gamma31 + g.gamma32) * r33 - flow32;
    d.d21 = -rates.gamma21 * r21 + I * ob * (r11 - r22) + I * oa * r31;
    d.d31 = -rates.gamma31 * r31 + I * oa * r21 - I * ob * r32;
    d.d32 = -rates.gamma32 * r32 + I * oa * (r22 - r33) - I * std::conj(ob) * r31;
    d.da = -rates.gamma_n * a + I * p.plasmon.n_p * ob1 * r21;
    return d;
}

// Real 2x2 block of a complex function f with Wirtinger partials P = df/dz, Q = df/dz*.
void put_complex(Jacobian& j, int row, int col, cplx dz, cplx dzc, bool real_row) {
    const cplx s = dz + dzc;
    const cplx t = dz - dzc;
    j(row, col) += s.real();
    j(row, col + 1) += -t.imag();
    if (!real_row) {
        j(row + 1, col) += s.imag();
        j(row + 1, col + 1) += t.real();
    }
}

void put_real(Jacobian& j, int row, int col, cplx d, bool real_row) {
    j(row, col) += d.real();
    if (!real_row) j(row + 1, col) += d.imag();
}

}  // namespace

SpaserState equations_of_motion(const SpaserState& s, const ModelParams& params) {
    const auto& r = s.rho;
    const bool finite = std::isfinite(r.rho11) && std::isfinite(r.rho22) && std::isfinite(r.rho33) &&
                        std::isfinite(std::abs(r.rho21)) && std::isfinite(std::abs(r.rho31)) &&
                        std::isfinite(std::abs(r.rho32)) && std::isfinite(std::abs(s.amplitude));
    if (!finite) throw InvalidState("equations_of_motion: non-finite state component");
    if (std::abs(r.trace() - 1.0) > kTraceTolerance) {
        std::ostringstream os;
        os << "equations_of_motion: trace(rho) = " << r.trace() << " deviates from 1";
        throw InvalidState(os.str());
    }
    const auto d = evaluate(r.rho11, r.rho22, r.rho33, r.rho21, r.rho31, r.rho32, s.amplitude,
                            params, complex_rates(params));
    SpaserState out;
    out.rho.rho11 = d.d11;
    out.rho.rho22 = d.d22;
    out.rho.rho33 = d.d33;
    out.rho.rho21 = d.d21;
    out.rho.rho31 = d.d31;
    out.rho.rho32 = d.d32;
    out.amplitude = d.da;
    return out;
}

StateVector rhs(const StateVector& y, const ModelParams& params, const ComplexRates& rates) {
    const auto d = evaluate(y[0], y[1], y[2], {y[3], y[4]}, {y[5], y[6]}, {y[7], y[8]},
                            {y[9], y[10]}, params, rates);
    StateVector out;
    out << d.d11, d.d22, d.d33, d.d21.real(), d.d21.imag(), d.d31.real(), d.d31.imag(),
        d.d32.real(), d.d32.imag(), d.da.real(), d.da.imag();
    return out;
}

ReducedVector rhs_reduced(const ReducedVector& x, const ModelParams& params) {
    using namespace idx;
    const double r33 = 1.0 - x[r11] - x[r22];
    const auto d = evaluate(x[r11], x[r22], r33, {x[re21], x[im21]}, {x[re31], x[im31]},
                            {x[re32], x[im32]}, {x[re_a], x[im_a]}, params,
                            complex_rates(params));
    ReducedVector out;
    out << d.d11, d.d22, d.d21.real(), d.d21.imag(), d.d31.real(), d.d31.imag(), d.d32.real(),
        d.d32.imag(), d.da.real(), d.da.imag();
    return out;
}

Jacobian jacobian(const SpaserState& s, const ModelParams& p) {
    using namespace idx;
    const auto rates = complex_rates(p);
    const auto& g = p.gain;
    const double oa = p.drive.omega_a_rabi;
    const double b1 = p.plasmon.omega_b_single;
    const cplx a = s.amplitude;
    const cplx ob = b1 * a;
    const cplx r21 = s.rho.rho21, r31 = s.rho.rho31, r32 = s.rho.rho32;
    const double inv = s.rho.rho11 - s.rho.rho22;

    Jacobian j = Jacobian::Zero();

    // d rho11 (rho33 eliminated)
    j(r11, r11) += -g.pump_g - g.gamma31;
    j(r11, r22) += g.gamma21 - g.gamma31;
    put_complex(j, r11, re21, I * std::conj(ob), -I * ob, true);
    put_complex(j, r11, re_a, -I * b1 * std::conj(r21), I * b1 * r21, true);

    // d rho22
    j(r22, r11) += -g.gamma32;
    j(r22, r22) += -g.gamma21 - g.gamma32;
    put_complex(j, r22, re21, -I * std::conj(ob), I * ob, true);
    put_complex(j, r22, re_a, I * b1 * std::conj(r21), -I * b1 * r21, true);
    put_complex(j, r22, re32, I * oa, -I * oa, true);

    // d rho21
    put_real(j, re21, r11, I * ob, false);
    put_real(j, re21, r22, -I * ob, false);
    put_complex(j, re21, re21, -rates.gamma21, 0.0, false);
    put_complex(j, re21, re31, I * oa, 0.0, false);
    put_complex(j, re21, re_a, I * b1 * inv, 0.0, false);

    // d rho31
    put_complex(j, re31, re31, -rates.gamma31, 0.0, false);
    put_complex(j, re31, re21, I * oa, 0.0, false);
    put_complex(j, re31, re32, -I * ob, 0.0, false);
    put_complex(j, re31, re_a, -I * b1 * r32, 0.0, false);

    // d rho32, with rho22 - rho33 = rho11 + 2 rho22 - 1
    put_real(j, re32, r11, I * oa, false);
    put_real(j, re32, r22, 2.0 * I * oa, false);
    put_complex(j, re32, re32, -rates.gamma32, 0.0, false);
    put_complex(j, re32, re31, -I * std::conj(ob), 0.0, false);
    put_complex(j, re32, re_a, 0.0, -I * b1 * r31, false);

    // d a
    put_complex(j, re_a, re_a, -rates.gamma_n, 0.0, false);
    put_complex(j, re_a, re21, I * p.plasmon.n_p * b1, 0.0, false);

    return j;
}

ReducedVector frame_derivative(const SpaserState& s) {
    // Every detuning in Gamma21, Gamma31 and Gamma_n is (omega - nu_ref); Gamma32 has none.
    const cplx d21 = I * s.rho.rho21;
    const cplx d31 = I * s.rho.rho31;
    const cplx da = I * s.amplitude;
    ReducedVector out = ReducedVector::Zero();
    out[idx::re21] = d21.real();
    out[idx::im21] = d21.imag();
    out[idx::re31] = d31.real();
    out[idx::im31] = d31.imag();
    out[idx::re_a] = da.real();
    out[idx::im_a] = da.imag();
    return out;
}

}  // namespace spaser
