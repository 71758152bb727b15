#include "spaser/core/state.hpp"

#include <stdexcept>

namespace spaser {

cplx DensityMatrix3::at(int i, int j) const {
    if (i == j) {
        switch (i) {
            case 0: return rho11;
            case 1: return rho22;
            case 2: return rho33;
        }
    }
    if (i < j) return std::conj(at(j, i));
    if (i == 1 && j == 0) return rho21;
    if (i == 2 && j == 0) return rho31;
    if (i == 2 && j == 1) return rho32;
    throw std::out_of_range("DensityMatrix3::at");
}

Eigen::Matrix3cd DensityMatrix3::full() const {
    Eigen::Matrix3cd m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = at(i, j);
    return m;
}

DensityMatrix3 DensityMatrix3::pure(int level) {
    if (level < 1 || level > 3) throw std::out_of_range("DensityMatrix3::pure: level must be 1..3");
    DensityMatrix3 r;
    r.rho11 = level == 1 ? 1.0 : 0.0;
    r.rho22 = level == 2 ? 1.0 : 0.0;
    r.rho33 = level == 3 ? 1.0 : 0.0;
    return r;
}

Observables observables(const SpaserState& s) {
    const auto& r = s.rho;
    Observables o;
    o.plasmon_number = s.plasmon_number();
    o.n21 = r.rho22 - r.rho11;
    o.n32 = r.rho33 - r.rho22;
    o.excited_minus_ground = r.rho22 + r.rho33 - r.rho11;
    o.rho21 = r.rho21;
    o.rho31 = r.rho31;
    o.rho32 = r.rho32;
    return o;
}

StateVector pack(const SpaserState& s) {
    StateVector v;
    v << s.rho.rho11, s.rho.rho22, s.rho.rho33, s.rho.rho21.real(), s.rho.rho21.imag(),
        s.rho.rho31.real(), s.rho.rho31.imag(), s.rho.rho32.real(), s.rho.rho32.imag(),
        s.amplitude.real(), s.amplitude.imag();
    return v;
}

SpaserState unpack(const StateVector& v) {
    SpaserState s;
    s.rho.rho11 = v[0];
    s.rho.rho22 = v[1];
    s.rho.rho33 = v[2];
    s.rho.rho21 = {v[3], v[4]};
    s.rho.rho31 = {v[5], v[6]};
    s.rho.rho32 = {v[7], v[8]};
    s.amplitude = {v[9], v[10]};
    return s;
}

ReducedVector pack_reduced(const SpaserState& s) {
    ReducedVector v;
    v << s.rho.rho11, s.rho.rho22, s.rho.rho21.real(), s.rho.rho21.imag(), s.rho.rho31.real(),
        s.rho.rho31.imag(), s.rho.rho32.real(), s.rho.rho32.imag(), s.amplitude.real(),
        s.amplitude.imag();
    return v;
}

SpaserState unpack_reduced(const ReducedVector& v) {
    SpaserState s;
    s.rho.rho11 = v[idx::r11];
    s.rho.rho22 = v[idx::r22];
    s.rho.rho33 = 1.0 - v[idx::r11] - v[idx::r22];
    s.rho.rho21 = {v[idx::re21], v[idx::im21]};
    s.rho.rho31 = {v[idx::re31], v[idx::im31]};
    s.rho.rho32 = {v[idx::re32], v[idx::im32]};
    s.amplitude = {v[idx::re_a], v[idx::im_a]};
    return s;
}

}  // namespace spaser
