#pragma once

#include <complex>
#include <string>
#include <vector>

namespace spaser {

using cplx = std::complex<double>;

/// Three-level gain medium. Rates and frequencies in rad/s.
struct GainParams {
    double gamma21 = 0.0;   ///< population decay |2> -> |1>
    double gamma31 = 0.0;   ///< population decay |3> -> |1>
    double gamma32 = 0.0;   ///< population decay |3> -> |2>
    double gamma_ph = 0.0;  ///< pure dephasing, added to every coherence
    double pump_g = 0.0;    ///< incoherent pump |1> -> |3>
    double omega21 = 0.0;   ///< spasing transition frequency
    double omega32 = 0.0;   ///< driven transition frequency
};

/// Localized plasmon mode and its coupling to one chromophore.
struct PlasmonParams {
    double omega_n = 0.0;         ///< mode frequency, rad/s
    double gamma_n = 0.0;         ///< mode relaxation rate, rad/s
    double n_p = 1.0;             ///< number of chromophores
    double omega_b_single = 0.0;  ///< single-plasmon Rabi frequency, rad/s
};

/// Coherent drive on the |2> <-> |3> transition; the Rabi frequency is real.
struct DriveParams {
    double omega_a_rabi = 0.0;
    double delta_a = 0.0;  ///< omega32 - nu_a
};

/// Rotating frame of the spasing transition and the plasmon amplitude.
struct FrameParams {
    double nu_ref = 0.0;
};

struct ModelParams {
    GainParams gain;
    PlasmonParams plasmon;
    DriveParams drive;
    FrameParams frame;

    double delta_b() const { return gain.omega21 - frame.nu_ref; }
    double delta_n() const { return plasmon.omega_n - frame.nu_ref; }
};

/// Coherence relaxation rates including detunings, and the plasmon rate.
struct ComplexRates {
    cplx gamma21;
    cplx gamma31;
    cplx gamma32;
    cplx gamma_n;
};

/// Throws InvalidParams naming the offending field ("plasmon.gamma_n", ...).
void validate(const ModelParams& params);

/// Soft checks that do not invalidate a run (slowly-varying envelope, ...).
std::vector<std::string> sanity_warnings(const ModelParams& params);

ComplexRates complex_rates(const ModelParams& params);

/// Copy of `params` with the rotating frame moved to `nu_ref`.
ModelParams with_frame(ModelParams params, double nu_ref);

/// Defaults used throughout the toolkit. The plasmon mode (2.5 eV, linewidth
/// 5.3e14 s^-1), the 0.002 eV gain detuning and N_p = 6e4 are literature values;
/// gamma21/gamma31/gamma32/omega32 are assumptions and omega_b_single is the
/// calibrated coupling (see analysis::calibrate_coupling). The frame sits at
/// omega21; analysis::with_spasing_frame moves it to the spasing frequency.
ModelParams default_model_params();

/// Coupling produced by calibrate_coupling for default_model_params().
inline constexpr double kCalibratedOmegaBSingle = 3.1622776601683758e13;

}  // namespace spaser
