#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "eventformer/rng.hpp"
#include "eventformer/streams.hpp"

namespace eventformer {

// Multivariate Hawkes process with exponential kernels. Adjacency entries
// are kernel integrals (branching ratios):
//   phi_ej(t) = adjacency[e][j] * decay[e][j] * exp(-decay[e][j] * t)
// so the conditional intensity is
//   lambda_e(t) = baseline[e] + sum_{t_i < t} phi_e,y_i(t - t_i).
struct HawkesExpParams {
  std::vector<double> baseline;               // events per time unit, >= 0
  std::vector<std::vector<double>> decay;     // M x M, > 0 (1 / time)
  std::vector<std::vector<double>> adjacency; // M x M, >= 0
  double end_time = 0.0;

  int dim() const { return static_cast<int>(baseline.size()); }
  void validate() const;
  // Largest-magnitude eigenvalue of the adjacency matrix (power iteration,
  // tolerance 1e-10). Must be < 1 for simulation.
  double spectral_radius() const;
};

// Proximal graphical event model: each label's intensity is piecewise
// constant, selected by which parents fired inside their recency windows.
struct PGEMParams {
  std::vector<std::string> label_names;        // index -> name
  std::vector<std::vector<int>> parents;       // per label, ordered parent ids
  std::vector<std::vector<double>> windows;    // per label, per parent slot
  std::vector<std::vector<double>> lambdas;    // per label, indexed by state
  double end_time = 0.0;

  int dim() const { return static_cast<int>(label_names.size()); }
  int label_index(const std::string& name) const;
  void validate() const;
};

// Window occupancy predicate, the single place the boundary convention
// lives: an event at time s keeps its window active for queries t with
// s < t and t - s < w, so an event exactly w ago no longer counts.
inline bool window_active(double event_time, double window, double t) {
  return event_time < t && t - event_time < window;
}

// Parent-state bitmask for label e at time t (bit k = parent slot k,
// following the registry's parent order).
int pgem_parent_state(const PGEMParams& params, const EventSequence& history,
                      double t, int e);

double hawkes_intensity(const HawkesExpParams& params,
                        const EventSequence& history, double t, int e);
EventSequence simulate_hawkes(const HawkesExpParams& params, Rng& rng);
double hawkes_loglik(const HawkesExpParams& params, const EventSequence& seq,
                     std::string* diagnostic = nullptr);

double pgem_intensity(const PGEMParams& params, const EventSequence& history,
                      double t, int e);
EventSequence simulate_pgem(const PGEMParams& params, Rng& rng);
double pgem_loglik(const PGEMParams& params, const EventSequence& seq,
                   std::string* diagnostic = nullptr);

// ------------------------------------------------------------- registry

// The bundled parameter sets, shipped as a human-readable JSON document.
// data/models.json in the repo is a byte-identical copy of this string.
const std::string& registry_json_text();

std::vector<std::string> list_models(const std::string& family);

HawkesExpParams get_hawkes_model(const std::string& name);
PGEMParams get_pgem_model(const std::string& name);

using ModelParams = std::variant<HawkesExpParams, PGEMParams>;
ModelParams get_model(const std::string& family, const std::string& name);

EventSequence simulate(const ModelParams& params, Rng& rng);
double loglik(const ModelParams& params, const EventSequence& seq,
              std::string* diagnostic = nullptr);

}  // namespace eventformer
