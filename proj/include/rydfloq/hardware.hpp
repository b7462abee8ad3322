#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "rydfloq/basis.hpp"
#include "rydfloq/floquet.hpp"
#include "rydfloq/operators.hpp"

namespace rydfloq {

struct VdWModel {
    int L = 12;
    double omega = 1.0;
    double Rb = 1.5;
    double delta_mf = 0.09;  // in units of omega
    Boundary bc = Boundary::periodic;
};

constexpr int max_full_space_sites = 16;

double vdw_coupling(const VdWModel& m, int i, int j);

// (Omega/2) sum_i sigma^x_i + sum_{i<j} V_ij n_i n_j on all 2^L configurations.
SparseOperator build_vdw_hamiltonian(const VdWModel& m);

// Occupation count per full-space configuration.
Eigen::VectorXd full_number_diagonal(int L);

// Smooth detuning: every delta pulse of weight A becomes a normalized
// Gaussian lobe of width w; echo kicks carry `echo_weight`. The constant
// offset delta_mf is added everywhere.
class GaussianDrive {
public:
    GaussianDrive(const PulseSchedule& schedule, double w, double delta_mf, int n_cycles,
                  double echo_weight = -M_PI);

    double detuning(double t) const;
    double width() const { return w_; }
    double duration() const { return n_cycles_ * tau_; }
    double tau() const { return tau_; }

    struct Lobe {
        double center;
        double weight;
    };
    const std::vector<Lobe>& lobes() const { return lobes_; }

private:
    double tau_, w_, delta_mf_;
    int n_cycles_;
    std::vector<Lobe> lobes_;
};

struct SampledSchedule {
    std::vector<double> times;
    std::vector<double> delta_of_t;
    double w = 0.0;
    double dt = 0.0;
};

// Uniform sampling of the drive; requires dt <= w/20.
SampledSchedule sample_schedule(const GaussianDrive& drive, double dt);

enum class Integrator { midpoint, cfm4 };

std::string to_string(Integrator m);
Integrator integrator_from_string(const std::string& s);

// Time-ordered evolution under H_static - Delta(t) N from t0 to t1 with fixed
// steps of at most dt.
CVec integrate_tdse(const CVec& state, const SparseOperator& h_static, const Eigen::VectorXd& ndiag,
                    const GaussianDrive& drive, double t0, double t1, double dt,
                    Integrator method = Integrator::cfm4);

// Total population on configurations with an adjacent pair of excitations.
double blockade_violation(const CVec& psi, int L, Boundary bc);

struct WalkSettings {
    int L = 12;
    double omega = 1.0;
    double tau = 2 * M_PI / 1.3;
    // The sign matters once pulses have finite width: with -pi echoes, a
    // negative epsilon lets the pulse distortion cancel most of the hopping.
    double epsilon = 0.45;
    double Rb = 1.5;
    double w_over_tau = 0.046;
    double delta_mf = 0.09;
    int n_cycles = 30;
    double dt_over_w = 1.0 / 20;
    Integrator integrator = Integrator::cfm4;
    bool check_convergence = true;
    double convergence_tol = 1e-6;   // bound on |psi(dt) - psi(dt/2)| at the final time
    bool calibrate_delta_mf = true;  // pick the sign of delta_mf that best tracks the PXP run
    int calibration_cycles = 10;
};

// Raised when halving dt moves the final state by more than the tolerance.
class StepSizeError : public std::runtime_error {
public:
    StepSizeError(const std::string& what, double change, double dt)
        : std::runtime_error(what), change_(change), dt_(dt) {}
    double change() const { return change_; }
    double dt() const { return dt_; }

private:
    double change_, dt_;
};

struct WalkResult {
    std::vector<std::vector<double>> pxp;  // [cycle][site] <n_i>
    std::vector<std::vector<double>> vdw;
    std::vector<double> violation;         // per cycle, vdW run
    std::vector<double> pxp_number;        // total excitation number, PXP run
    double unitarity_error = 0.0;
    double dt_halving_change = -1.0;       // -1 when not checked
    double dt_used = 0.0;
    double delta_mf_used = 0.0;            // signed, units of omega
    std::vector<std::pair<double, double>> calibration;  // (delta_mf, mismatch)
};

// Mean over cycles of the L1 distance between two occupation heatmaps.
double occupation_mismatch(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b);

// Single excitation on site 0 under the drive -2 eps = gamma = 2 theta. The
// constrained delta-pulse run and the full-space run go in parallel. Throws
// StepSizeError when the dt-halving check fails.
WalkResult quantum_walk_benchmark(const WalkSettings& s);

// First cycle at which the ring-distance-d population reaches `threshold`, for
// d = 1..L/2; -1 if never.
std::vector<int> arrival_cycles(const std::vector<std::vector<double>>& occ, double threshold);

// Shape of an arrival-time profile: a ballistic front reaches every distance,
// arrives in non-decreasing order, and is well described by a line in d.
struct LightCone {
    bool complete = false;   // every distance reached
    bool monotone = false;   // arrival cycles non-decreasing in d
    double cycles_per_site = 0.0;
    double r_squared = 0.0;  // of the linear fit arrival = a + b d
    bool ballistic(double min_r2 = 0.9) const { return complete && monotone && cycles_per_site > 0 && r_squared >= min_r2; }
};

LightCone light_cone(const std::vector<int>& arrivals);

}  // namespace rydfloq
