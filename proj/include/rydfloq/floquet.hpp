#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rydfloq/basis.hpp"
#include "rydfloq/propagator.hpp"
#include "rydfloq/series.hpp"

namespace rydfloq {

enum class PulseKind { echo_pi, perturbation };

struct Pulse {
    double t;       // position within the period, in [0, tau]
    double weight;  // integrated detuning; the kick is exp(+i weight N)
    PulseKind kind;
};

struct DriveParams {
    double epsilon = 0.0;
    double gamma = 0.0;
    double theta = 0.0;
};

struct PulseSchedule {
    double omega = 1.0;
    double tau = 1.0;
    std::vector<Pulse> pulses;  // sorted by t; perturbations precede echoes at equal t
    std::optional<DriveParams> params;

    void validate() const;
    std::vector<Pulse> perturbations() const;
};

PulseSchedule build_echo_schedule(double omega, double tau, double echo_weight = M_PI);

// Echo pulses plus perturbations (tau/4, eps), (tau/2, theta), (3tau/4, eps)
// and (tau, gamma - theta). The last one closes the period.
PulseSchedule build_perturbed_schedule(double omega, double tau, double epsilon, double gamma,
                                       double theta);

// t' = ||t - tau/4| - tau/2| - tau/4 for t in [0, tau].
double effective_time(double t, double tau);

nlohmann::json schedule_to_json(const PulseSchedule& s);
PulseSchedule schedule_from_json(const nlohmann::json& j);

// Lab-frame driver: free PXP evolution between instantaneous detuning kicks.
class FloquetDriver {
public:
    FloquetDriver(const ConstrainedBasis& basis, PulseSchedule schedule,
                  Backend backend = Backend::automatic);

    const ConstrainedBasis& basis() const { return *basis_; }
    const PulseSchedule& schedule() const { return schedule_; }
    const Propagator& free_propagator() const { return free_; }
    const Eigen::VectorXd& number_diag() const { return ndiag_; }

    // Evolve from cycle-local time a to b (0 <= a <= b <= tau). Pulses with
    // a < t_j <= b fire, as do pulses at t_j = 0 when a = 0.
    CVec advance(const CVec& psi, double a, double b) const;
    CVec cycle(const CVec& psi) const { return advance(psi, 0.0, schedule_.tau); }
    CVec kick(const CVec& psi, double weight) const;

    CMat cycle_unitary() const;  // dense backend only

private:
    const ConstrainedBasis* basis_;
    PulseSchedule schedule_;
    SparseOperator pxp_;
    Propagator free_;
    Eigen::VectorXd ndiag_;
};

void require_normalized(const CVec& psi, double tol = 1e-8);

CVec propagate_cycle(const CVec& state, const FloquetDriver& driver);

struct NamedObservable {
    std::string name;
    std::function<double(const CVec&)> eval;
};

struct RunOptions {
    int snapshot_stride = 0;  // 0 disables snapshots
    std::vector<CVec>* snapshots = nullptr;
    std::function<void(int, const CVec&)> on_cycle;  // called after each recorded state
};

ObservableSeries stroboscopic_run(const CVec& state0, const FloquetDriver& driver, int n_cycles,
                                  const std::vector<NamedObservable>& observables,
                                  const RunOptions& opts = {});

// Samples at t = n tau + k tau/(S-1), k = 0..S-1, without repeating cycle
// boundaries.
ObservableSeries micromotion_run(const CVec& state0, const FloquetDriver& driver, int samples_per_cycle,
                                 int n_cycles, const std::vector<NamedObservable>& observables);

CVec basis_state(const ConstrainedBasis& basis, Config c);

}  // namespace rydfloq
