#pragma once

#include <Eigen/Dense>

#include "spaser/core/params.hpp"

namespace spaser {

/// Density matrix of one representative chromophore in the basis |1>,|2>,|3>.
/// Only the diagonal and the lower triangle are stored, so the reconstructed
/// matrix is Hermitian exactly.
struct DensityMatrix3 {
    double rho11 = 1.0;
    double rho22 = 0.0;
    double rho33 = 0.0;
    cplx rho21{};
    cplx rho31{};
    cplx rho32{};

    double trace() const { return rho11 + rho22 + rho33; }

    /// Element (i, j), zero-based.
    cplx at(int i, int j) const;

    Eigen::Matrix3cd full() const;

    /// All population in level `level` (1, 2 or 3).
    static DensityMatrix3 pure(int level);
};

/// Gain-medium state plus the slowly varying plasmon amplitude a0n.
struct SpaserState {
    DensityMatrix3 rho;
    cplx amplitude{};

    double plasmon_number() const { return std::norm(amplitude); }
};

struct Observables {
    double plasmon_number = 0.0;
    double n21 = 0.0;                   ///< rho22 - rho11
    double n32 = 0.0;                   ///< rho33 - rho22
    double excited_minus_ground = 0.0;  ///< rho22 + rho33 - rho11
    cplx rho21{};
    cplx rho31{};
    cplx rho32{};
};

Observables observables(const SpaserState& state);

/// Real layout used by the integrator:
/// [rho11, rho22, rho33, Re rho21, Im rho21, Re rho31, Im rho31, Re rho32, Im rho32, Re a, Im a].
using StateVector = Eigen::Matrix<double, 11, 1>;

/// Trace-eliminated layout (rho33 = 1 - rho11 - rho22) used by Jacobians and solvers:
/// [rho11, rho22, Re rho21, Im rho21, Re rho31, Im rho31, Re rho32, Im rho32, Re a, Im a].
using ReducedVector = Eigen::Matrix<double, 10, 1>;

StateVector pack(const SpaserState& s);
SpaserState unpack(const StateVector& v);
ReducedVector pack_reduced(const SpaserState& s);
SpaserState unpack_reduced(const ReducedVector& v);

namespace idx {
inline constexpr int r11 = 0, r22 = 1, re21 = 2, im21 = 3, re31 = 4, im31 = 5, re32 = 6, im32 = 7,
                     re_a = 8, im_a = 9;
}

}  // namespace spaser
