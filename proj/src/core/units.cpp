#include "spaser/core/units.hpp"

namespace spaser::units {

double ev_to_angular(double energy_ev) { return energy_ev / kHbarEvS; }

double angular_to_ev(double omega_rad_s) { return omega_rad_s * kHbarEvS; }

}  // namespace spaser::units
