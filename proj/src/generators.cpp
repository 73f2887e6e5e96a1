#include "eventformer/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace eventformer {

namespace {
using nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

// ----------------------------------------------------------- Hawkes-Exp

void HawkesExpParams::validate() const {
  int m = dim();
  if (m < 1) throw std::invalid_argument("hawkes: empty baseline");
  if (!(end_time > 0.0)) throw std::invalid_argument("hawkes: end_time must be > 0");
  auto check_matrix = [m](const std::vector<std::vector<double>>& a,
                          const char* what) {
    if (static_cast<int>(a.size()) != m)
      throw std::invalid_argument(std::string("hawkes: ") + what +
                                  " must be M x M");
    for (const auto& row : a)
      if (static_cast<int>(row.size()) != m)
        throw std::invalid_argument(std::string("hawkes: ") + what +
                                    " must be M x M");
  };
  check_matrix(decay, "decay");
  check_matrix(adjacency, "adjacency");
  for (double b : baseline)
    if (!(b >= 0.0) || !std::isfinite(b))
      throw std::invalid_argument("hawkes: baseline entries must be finite, >= 0");
  for (const auto& row : decay)
    for (double d : row)
      if (!(d > 0.0) || !std::isfinite(d))
        throw std::invalid_argument("hawkes: decay entries must be finite, > 0");
  for (const auto& row : adjacency)
    for (double a : row)
      if (!(a >= 0.0) || !std::isfinite(a))
        throw std::invalid_argument("hawkes: adjacency entries must be finite, >= 0");
}

double HawkesExpParams::spectral_radius() const {
  int m = dim();
  std::vector<double> v(m, 1.0 / std::sqrt(static_cast<double>(m)));
  double lambda = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    std::vector<double> w(m, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) w[i] += adjacency[i][j] * v[j];
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    double next = norm;
    for (int i = 0; i < m; ++i) v[i] = w[i] / norm;
    if (std::abs(next - lambda) <= 1e-10 * std::max(1.0, next)) return next;
    lambda = next;
  }
  return lambda;
}

double hawkes_intensity(const HawkesExpParams& params,
                        const EventSequence& history, double t, int e) {
  if (e < 0 || e >= params.dim())
    throw std::invalid_argument("hawkes_intensity: label out of range");
  if (!history.events.empty() && t < history.events.back().time)
    throw std::invalid_argument("hawkes_intensity: t precedes the last event");
  double lam = params.baseline[e];
  for (const Event& ev : history.events) {
    if (ev.time >= t) break;
    double beta = params.decay[e][ev.label];
    lam += params.adjacency[e][ev.label] * beta * std::exp(-beta * (t - ev.time));
  }
  return lam;
}

EventSequence simulate_hawkes(const HawkesExpParams& params, Rng& rng) {
  params.validate();
  double rho = params.spectral_radius();
  if (rho >= 1.0) {
    std::ostringstream os;
    os << "simulate_hawkes: adjacency spectral radius " << rho
       << " is not subcritical (< 1 required)";
    throw std::invalid_argument(os.str());
  }

  int m = params.dim();
  EventSequence seq;
  seq.horizon = params.end_time;
  seq.label_count = m;

  // Decayed excitation state: S[e][j] = sum over past events of type j of
  // exp(-decay[e][j] * (t - t_i)); lambda_e = mu_e + sum_j A[e][j] b[e][j] S[e][j].
  std::vector<std::vector<double>> excite(m, std::vector<double>(m, 0.0));
  auto intensities = [&](std::vector<double>& lam) {
    double total = 0.0;
    for (int e = 0; e < m; ++e) {
      double x = params.baseline[e];
      for (int j = 0; j < m; ++j)
        x += params.adjacency[e][j] * params.decay[e][j] * excite[e][j];
      lam[e] = x;
      total += x;
    }
    return total;
  };
  auto advance = [&](double dt) {
    for (int e = 0; e < m; ++e)
      for (int j = 0; j < m; ++j) excite[e][j] *= std::exp(-params.decay[e][j] * dt);
  };

  std::vector<double> lam(m, 0.0);
  double t = 0.0;
  double bound = intensities(lam);
  while (true) {
    if (bound <= 0.0) break;
    double dt = rng.exponential(bound);
    double proposal = t + dt;
    if (proposal > params.end_time) break;
    advance(dt);
    double total = intensities(lam);
    if (total > bound * (1.0 + 1e-12))
      throw std::logic_error("simulate_hawkes: thinning bound violated");
    if (rng.uniform() * bound <= total) {
      double u = rng.uniform() * total;
      int label = m - 1;
      double acc = 0.0;
      for (int e = 0; e < m; ++e) {
        acc += lam[e];
        if (u <= acc) {
          label = e;
          break;
        }
      }
      seq.events.push_back({proposal, label});
      for (int e = 0; e < m; ++e) excite[e][label] += 1.0;
      total = intensities(lam);
    }
    t = proposal;
    bound = total;  // intensities only decay until the next event
  }
  seq.validate();
  return seq;
}

double hawkes_loglik(const HawkesExpParams& params, const EventSequence& seq,
                     std::string* diagnostic) {
  params.validate();
  seq.validate();
  if (seq.label_count != params.dim())
    throw std::invalid_argument("hawkes_loglik: sequence M does not match params");
  int m = params.dim();
  double T = seq.horizon;

  double event_term = 0.0;
  std::vector<std::vector<double>> excite(m, std::vector<double>(m, 0.0));
  double prev = 0.0;
  for (const Event& ev : seq.events) {
    double dt = ev.time - prev;
    for (int e = 0; e < m; ++e)
      for (int j = 0; j < m; ++j) excite[e][j] *= std::exp(-params.decay[e][j] * dt);
    double lam = params.baseline[ev.label];
    for (int j = 0; j < m; ++j)
      lam += params.adjacency[ev.label][j] * params.decay[ev.label][j] *
             excite[ev.label][j];
    if (lam <= 0.0) {
      if (diagnostic) {
        std::ostringstream os;
        os << "zero intensity for label " << ev.label << " at t = " << ev.time;
        *diagnostic = os.str();
      }
      return -kInf;
    }
    event_term += std::log(lam);
    for (int e = 0; e < m; ++e) excite[e][ev.label] += 1.0;
    prev = ev.time;
  }

  // Closed-form compensator for exponential kernels.
  double compensator = 0.0;
  for (int e = 0; e < m; ++e) compensator += params.baseline[e] * T;
  for (const Event& ev : seq.events)
    for (int e = 0; e < m; ++e)
      compensator += params.adjacency[e][ev.label] *
                     (1.0 - std::exp(-params.decay[e][ev.label] * (T - ev.time)));
  return event_term - compensator;
}

// ------------------------------------------------------------------ PGEM

void PGEMParams::validate() const {
  int m = dim();
  if (m < 1) throw std::invalid_argument("pgem: no labels");
  if (!(end_time > 0.0)) throw std::invalid_argument("pgem: end_time must be > 0");
  if (static_cast<int>(parents.size()) != m ||
      static_cast<int>(windows.size()) != m ||
      static_cast<int>(lambdas.size()) != m)
    throw std::invalid_argument("pgem: per-label tables must cover all labels");
  for (int e = 0; e < m; ++e) {
    if (parents[e].size() != windows[e].size())
      throw std::invalid_argument("pgem: windows must pair with parents for " +
                                  label_names[e]);
    for (int p : parents[e])
      if (p < 0 || p >= m)
        throw std::invalid_argument("pgem: unknown parent for " + label_names[e]);
    for (double w : windows[e])
      if (!(w > 0.0))
        throw std::invalid_argument("pgem: windows must be > 0 for " +
                                    label_names[e]);
    size_t want = size_t{1} << parents[e].size();
    if (lambdas[e].size() != want)
      throw std::invalid_argument("pgem: lambdas for " + label_names[e] +
                                  " must cover every parent-state tuple");
    for (double l : lambdas[e])
      if (!(l >= 0.0) || !std::isfinite(l))
        throw std::invalid_argument("pgem: rates must be finite, >= 0");
  }
}

int PGEMParams::label_index(const std::string& name) const {
  for (int i = 0; i < dim(); ++i)
    if (label_names[i] == name) return i;
  throw std::invalid_argument("pgem: unknown label '" + name + "'");
}

int pgem_parent_state(const PGEMParams& params, const EventSequence& history,
                      double t, int e) {
  int state = 0;
  const auto& ps = params.parents[e];
  for (size_t k = 0; k < ps.size(); ++k) {
    // Most recent occurrence of parent ps[k] decides the bit.
    bool active = false;
    for (auto it = history.events.rbegin(); it != history.events.rend(); ++it) {
      if (it->label != ps[k] || it->time >= t) continue;
      active = window_active(it->time, params.windows[e][k], t);
      break;
    }
    if (active) state |= 1 << k;
  }
  return state;
}

double pgem_intensity(const PGEMParams& params, const EventSequence& history,
                      double t, int e) {
  if (e < 0 || e >= params.dim())
    throw std::invalid_argument("pgem_intensity: label out of range");
  if (t < 0.0) throw std::invalid_argument("pgem_intensity: t must be >= 0");
  return params.lambdas[e][static_cast<size_t>(
      pgem_parent_state(params, history, t, e))];
}

EventSequence simulate_pgem(const PGEMParams& params, Rng& rng) {
  params.validate();
  int m = params.dim();
  EventSequence seq;
  seq.horizon = params.end_time;
  seq.label_count = m;

  std::vector<double> last(m, -kInf);  // most recent event time per label

  // Intensity of label e on an interval (t, tc) free of change points.
  auto rate_after = [&](int e, double t) {
    int state = 0;
    const auto& ps = params.parents[e];
    for (size_t k = 0; k < ps.size(); ++k) {
      double s = last[ps[k]];
      if (s > -kInf && s <= t && s + params.windows[e][k] > t) state |= 1 << k;
    }
    return params.lambdas[e][static_cast<size_t>(state)];
  };

  double t = 0.0;
  while (t < params.end_time) {
    // Next state change: the earliest window expiry after t, or the horizon.
    double tc = params.end_time;
    for (int e = 0; e < m; ++e) {
      const auto& ps = params.parents[e];
      for (size_t k = 0; k < ps.size(); ++k) {
        double s = last[ps[k]];
        if (s == -kInf) continue;
        double expiry = s + params.windows[e][k];
        if (expiry > t && expiry < tc) tc = expiry;
      }
    }

    double total = 0.0;
    std::vector<double> lam(m, 0.0);
    for (int e = 0; e < m; ++e) {
      lam[e] = rate_after(e, t);
      total += lam[e];
    }

    if (total <= 0.0) {
      if (tc >= params.end_time) break;
      t = tc;
      continue;
    }
    double dt = rng.exponential(total);
    if (t + dt >= tc) {
      t = tc;  // memoryless: re-draw from the change point
      continue;
    }
    t += dt;
    double u = rng.uniform() * total;
    int label = m - 1;
    double acc = 0.0;
    for (int e = 0; e < m; ++e) {
      acc += lam[e];
      if (u <= acc) {
        label = e;
        break;
      }
    }
    seq.events.push_back({t, label});
    last[label] = t;
  }
  seq.validate();
  return seq;
}

double pgem_loglik(const PGEMParams& params, const EventSequence& seq,
                   std::string* diagnostic) {
  params.validate();
  seq.validate();
  if (seq.label_count != params.dim())
    throw std::invalid_argument("pgem_loglik: sequence M does not match params");
  double T = seq.horizon;

  // Change points: event times plus window expiries, clipped to [0, T].
  std::vector<double> points{0.0, T};
  for (const Event& ev : seq.events) {
    if (ev.time < T) points.push_back(ev.time);
    for (int e = 0; e < params.dim(); ++e) {
      const auto& ps = params.parents[e];
      for (size_t k = 0; k < ps.size(); ++k) {
        if (ps[k] != ev.label) continue;
        double expiry = ev.time + params.windows[e][k];
        if (expiry > 0.0 && expiry < T) points.push_back(expiry);
      }
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  // Compensator: rates are constant between consecutive change points.
  double compensator = 0.0;
  EventSequence prefix;
  prefix.horizon = seq.horizon;
  prefix.label_count = seq.label_count;
  size_t next_event = 0;
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    double lo = points[i], hi = points[i + 1];
    while (next_event < seq.events.size() && seq.events[next_event].time <= lo)
      prefix.events.push_back(seq.events[next_event++]);
    double mid = 0.5 * (lo + hi);
    for (int e = 0; e < params.dim(); ++e)
      compensator += pgem_intensity(params, prefix, mid, e) * (hi - lo);
  }

  double event_term = 0.0;
  EventSequence hist;
  hist.horizon = seq.horizon;
  hist.label_count = seq.label_count;
  for (const Event& ev : seq.events) {
    double lam = pgem_intensity(params, hist, ev.time, ev.label);
    if (lam <= 0.0) {
      if (diagnostic) {
        std::ostringstream os;
        os << "zero intensity for label " << ev.label << " at t = " << ev.time;
        *diagnostic = os.str();
      }
      return -kInf;
    }
    event_term += std::log(lam);
    hist.events.push_back(ev);
  }
  return event_term - compensator;
}

// -------------------------------------------------------------- registry

namespace {

const json& registry_json() {
  static const json parsed = json::parse(registry_json_text());
  return parsed;
}

[[noreturn]] void unknown_model(const std::string& family,
                                const std::string& name) {
  std::ostringstream os;
  os << "unknown " << family << " model '" << name << "'; available:";
  for (const std::string& n : list_models(family)) os << " " << n;
  throw std::invalid_argument(os.str());
}

// Parses a python-style tuple key like "(0, 1)" into per-slot bits.
std::vector<int> parse_state_key(const std::string& key) {
  std::vector<int> bits;
  for (char c : key) {
    if (c == '0') bits.push_back(0);
    else if (c == '1') bits.push_back(1);
  }
  return bits;
}

}  // namespace

std::vector<std::string> list_models(const std::string& family) {
  const json& reg = registry_json();
  if (!reg.contains(family))
    throw std::invalid_argument("unknown family '" + family +
                                "' (expected hawkes or pgem)");
  std::vector<std::string> names;
  for (auto it = reg.at(family).begin(); it != reg.at(family).end(); ++it)
    names.push_back(it.key());
  std::sort(names.begin(), names.end());
  return names;
}

HawkesExpParams get_hawkes_model(const std::string& name) {
  const json& reg = registry_json().at("hawkes");
  if (!reg.contains(name)) unknown_model("hawkes", name);
  const json& j = reg.at(name);
  HawkesExpParams p;
  p.baseline = j.at("baseline").get<std::vector<double>>();
  p.adjacency = j.at("adjacency").get<std::vector<std::vector<double>>>();
  const json& decay = j.at("decay");
  int m = p.dim();
  if (decay.is_number()) {
    // Scalar decay broadcasts to all pairs.
    p.decay.assign(m, std::vector<double>(m, decay.get<double>()));
  } else {
    p.decay = decay.get<std::vector<std::vector<double>>>();
  }
  p.end_time = j.at("end_time").get<double>();
  p.validate();
  return p;
}

PGEMParams get_pgem_model(const std::string& name) {
  const json& reg = registry_json().at("pgem");
  if (!reg.contains(name)) unknown_model("pgem", name);
  const json& j = reg.at(name);
  PGEMParams p;
  p.label_names = j.at("labels").get<std::vector<std::string>>();
  p.end_time = j.at("end_time").get<double>();
  int m = p.dim();
  p.parents.resize(m);
  p.windows.resize(m);
  p.lambdas.resize(m);
  for (int e = 0; e < m; ++e) {
    const std::string& lbl = p.label_names[e];
    for (const json& pn : j.at("parents").at(lbl))
      p.parents[e].push_back(p.label_index(pn.get<std::string>()));
    p.windows[e] = j.at("windows").at(lbl).get<std::vector<double>>();
    p.lambdas[e].assign(size_t{1} << p.parents[e].size(), 0.0);
    for (auto it = j.at("lambdas").at(lbl).begin();
         it != j.at("lambdas").at(lbl).end(); ++it) {
      std::vector<int> bits = parse_state_key(it.key());
      if (bits.size() != p.parents[e].size())
        throw std::runtime_error("registry: state key arity mismatch for " + lbl);
      size_t idx = 0;
      for (size_t k = 0; k < bits.size(); ++k)
        if (bits[k]) idx |= size_t{1} << k;
      p.lambdas[e][idx] = it->get<double>();
    }
  }
  p.validate();
  return p;
}

ModelParams get_model(const std::string& family, const std::string& name) {
  if (family == "hawkes") return get_hawkes_model(name);
  if (family == "pgem") return get_pgem_model(name);
  throw std::invalid_argument("unknown family '" + family +
                              "' (expected hawkes or pgem)");
}

EventSequence simulate(const ModelParams& params, Rng& rng) {
  if (std::holds_alternative<HawkesExpParams>(params))
    return simulate_hawkes(std::get<HawkesExpParams>(params), rng);
  return simulate_pgem(std::get<PGEMParams>(params), rng);
}

double loglik(const ModelParams& params, const EventSequence& seq,
              std::string* diagnostic) {
  if (std::holds_alternative<HawkesExpParams>(params))
    return hawkes_loglik(std::get<HawkesExpParams>(params), seq, diagnostic);
  return pgem_loglik(std::get<PGEMParams>(params), seq, diagnostic);
}

}  // namespace eventformer
