#include "spaser/core/params.hpp"

#include <cmath>
#include <sstream>

#include "spaser/core/error.hpp"
#include "spaser/core/units.hpp"

namespace spaser {

namespace {

void require(bool ok, const char* field, const char* what, double value) {
    if (ok) return;
    std::ostringstream os;
    os << field << ": " << what << " (got " << value << ")";
    throw InvalidParams(os.str());
}

void require_rate(double v, const char* field) {
    require(std::isfinite(v) && v >= 0.0, field, "must be finite and >= 0", v);
}

}  // namespace

void validate(const ModelParams& p) {
    require_rate(p.gain.gamma21, "gain.gamma21");
    require_rate(p.gain.gamma31, "gain.gamma31");
    require_rate(p.gain.gamma32, "gain.gamma32");
    require_rate(p.gain.gamma_ph, "gain.gamma_ph");
    require_rate(p.gain.pump_g, "gain.pump_g");
    require(std::isfinite(p.gain.omega21) && p.gain.omega21 > 0.0, "gain.omega21", "must be > 0",
            p.gain.omega21);
    require(std::isfinite(p.gain.omega32) && p.gain.omega32 > 0.0, "gain.omega32", "must be > 0",
            p.gain.omega32);

    require(std::isfinite(p.plasmon.omega_n) && p.plasmon.omega_n > 0.0, "plasmon.omega_n",
            "must be > 0", p.plasmon.omega_n);
    require(std::isfinite(p.plasmon.gamma_n) && p.plasmon.gamma_n > 0.0, "plasmon.gamma_n",
            "must be > 0", p.plasmon.gamma_n);
    require(std::isfinite(p.plasmon.n_p) && p.plasmon.n_p >= 1.0, "plasmon.n_p", "must be >= 1",
            p.plasmon.n_p);
    require_rate(p.plasmon.omega_b_single, "plasmon.omega_b_single");

    require_rate(p.drive.omega_a_rabi, "drive.omega_a_rabi");
    require(std::isfinite(p.drive.delta_a), "drive.delta_a", "must be finite", p.drive.delta_a);

    require(std::isfinite(p.frame.nu_ref), "frame.nu_ref", "must be finite", p.frame.nu_ref);
}

std::vector<std::string> sanity_warnings(const ModelParams& p) {
    std::vector<std::string> out;
    const double nu = std::abs(p.frame.nu_ref);
    // Envelope equations need detunings far below the carrier.
    if (nu > 0.0 && (std::abs(p.delta_b()) > 1e-2 * nu || std::abs(p.delta_n()) > 1e-2 * nu)) {
        std::ostringstream os;
        os << "frame.nu_ref: detunings (delta_b=" << p.delta_b() << ", delta_n=" << p.delta_n()
           << ") are not small compared with the frame frequency " << nu;
        out.push_back(os.str());
    }
    return out;
}

ComplexRates complex_rates(const ModelParams& p) {
    const auto& g = p.gain;
    const double db = p.delta_b();
    const double da = p.drive.delta_a;
    ComplexRates r;
    r.gamma21 = {0.5 * (g.gamma21 + g.pump_g) + g.gamma_ph, db};
    r.gamma31 = {0.5 * (g.gamma31 + g.gamma32 + g.pump_g) + g.gamma_ph, da + db};
    r.gamma32 = {0.5 * (g.gamma31 + g.gamma21 + g.gamma32) + g.gamma_ph, da};
    r.gamma_n = {p.plasmon.gamma_n, p.delta_n()};
    return r;
}

ModelParams with_frame(ModelParams params, double nu_ref) {
    params.frame.nu_ref = nu_ref;
    return params;
}

ModelParams default_model_params() {
    ModelParams p;
    p.gain.gamma21 = 4e12;
    p.gain.gamma31 = 1e10;
    p.gain.gamma32 = 1e12;
    p.gain.gamma_ph = 0.0;
    p.gain.pump_g = 8e12;
    p.gain.omega21 = units::ev_to_angular(2.502);
    p.gain.omega32 = units::ev_to_angular(0.3);
    p.plasmon.omega_n = units::ev_to_angular(2.5);
    p.plasmon.gamma_n = 5.3e14;
    p.plasmon.n_p = 6e4;
    p.plasmon.omega_b_single = kCalibratedOmegaBSingle;
    p.drive.omega_a_rabi = 16e12;
    p.drive.delta_a = 0.0;
    p.frame.nu_ref = p.gain.omega21;
    return p;
}

}  // namespace spaser
