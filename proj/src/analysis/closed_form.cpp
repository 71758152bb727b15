#include "spaser/analysis/closed_form.hpp"

#include <cmath>

#include "spaser/core/dynamics.hpp"
#include "spaser/core/error.hpp"

namespace spaser::analysis {

ClosedFormInversions steady_inversions_closed_form(const ModelParams& params) {
    validate(params);
    if (params.drive.delta_a != 0.0)
        throw InvalidParams("steady_inversions_closed_form: requires drive.delta_a == 0");
    const auto& g = params.gain;
    const double gamma32 = complex_rates(params).gamma32.real();
    const double oa2 = params.drive.omega_a_rabi * params.drive.omega_a_rabi;
    const double pump = g.pump_g;

    const double m_inv =
        gamma32 * (pump * (g.gamma21 + g.gamma32) + g.gamma21 * (g.gamma31 + g.gamma32)) +
        2.0 * (2.0 * pump + g.gamma21 + g.gamma31) * oa2;
    if (m_inv == 0.0 || !std::isfinite(m_inv))
        throw DegenerateParameters("steady_inversions_closed_form: vanishing denominator");

    ClosedFormInversions out;
    out.m = 1.0 / m_inv;
    out.n21_bar = ((pump * g.gamma32 - g.gamma21 * g.gamma31 - g.gamma21 * g.gamma32) * gamma32 +
                   2.0 * (pump - g.gamma21 - g.gamma31) * oa2) *
                  out.m;
    out.n32_bar = (g.gamma21 - g.gamma32) * pump * gamma32 * out.m;
    return out;
}

DensityMatrix3 medium_state(const ModelParams& params, double amplitude) {
    validate(params);
    // At fixed plasmon amplitude the density-matrix equations are affine in rho, so one
    // Newton step from any state is exact.
    SpaserState s0;
    s0.rho = DensityMatrix3::pure(1);
    s0.amplitude = amplitude;
    const Jacobian j = jacobian(s0, params);
    const ReducedVector f = rhs_reduced(pack_reduced(s0), params);
    const Eigen::Matrix<double, 8, 8> block = j.topLeftCorner<8, 8>();
    Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(block);
    if (!lu.isInvertible())
        throw DegenerateParameters("medium_state: steady state of the gain medium is not unique");
    const Eigen::Matrix<double, 8, 1> dx = lu.solve(-f.head<8>());
    ReducedVector x = pack_reduced(s0);
    x.head<8>() += dx;
    return unpack_reduced(x).rho;
}

DensityMatrix3 background_state(const ModelParams& params) { return medium_state(params, 0.0); }

}  // namespace spaser::analysis
