#include "eventformer/streams.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

namespace eventformer {

namespace {
using nlohmann::json;
}

void EventSequence::validate() const {
  if (horizon <= 0.0 || !std::isfinite(horizon))
    throw std::invalid_argument("horizon must be a positive finite real");
  if (label_count < 1) throw std::invalid_argument("label_count must be >= 1");
  double prev = -1.0;
  for (size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (!std::isfinite(e.time) || e.time < 0.0 || e.time > horizon)
      throw std::invalid_argument("event " + std::to_string(i) +
                                  ": time outside [0, T]");
    if (e.time <= prev)
      throw std::invalid_argument("event " + std::to_string(i) +
                                  ": times not strictly increasing");
    if (e.label < 0 || e.label >= label_count)
      throw std::invalid_argument("event " + std::to_string(i) +
                                  ": label outside [0, M)");
    prev = e.time;
  }
}

void AugmentedSequence::validate() const {
  if (horizon <= 0.0 || !std::isfinite(horizon))
    throw std::invalid_argument("horizon must be a positive finite real");
  if (label_count < 1) throw std::invalid_argument("label_count must be >= 1");
  double prev = -1.0;
  for (size_t i = 0; i < epochs.size(); ++i) {
    const Epoch& ep = epochs[i];
    std::string where = "epoch " + std::to_string(i) + ": ";
    if (ep.true_time <= prev)
      throw std::invalid_argument(where + "true times not strictly increasing");
    if (ep.true_time < 0.0 || ep.true_time > horizon)
      throw std::invalid_argument(where + "true time outside [0, T]");
    if (ep.is_void != ep.true_label.is_null())
      throw std::invalid_argument(where + "void flag inconsistent with label");
    if (ep.true_label.is_mask())
      throw std::invalid_argument(where + "true label may not be MASK");
    if (ep.true_label.is_real() && ep.true_label.index() >= label_count)
      throw std::invalid_argument(where + "true label outside [0, M)");
    if (ep.is_masked) {
      if (ep.observed_time != 0.0 || !ep.observed_label.is_mask())
        throw std::invalid_argument(where + "masked epoch must observe (0, MASK)");
    } else {
      if (ep.observed_time != ep.true_time || ep.observed_label != ep.true_label)
        throw std::invalid_argument(where +
                                    "unmasked epoch must observe ground truth");
    }
    prev = ep.true_time;
  }
}

EventSequence AugmentedSequence::strip() const {
  EventSequence out;
  out.horizon = horizon;
  out.label_count = label_count;
  for (const Epoch& ep : epochs)
    if (!ep.is_void) out.events.push_back({ep.true_time, ep.true_label.index()});
  return out;
}

void MaskPolicy::validate() const {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("mask fraction must be in (0, 1)");
  if (strategy == Strategy::geometric && !(mean_run_length > 1.0))
    throw std::invalid_argument("mean_run_length must be > 1");
}

MaskPolicy MaskPolicy::parse(const std::string& strategy, double fraction,
                             double mean_run_length) {
  MaskPolicy p;
  if (strategy == "independent")
    p.strategy = Strategy::independent;
  else if (strategy == "geometric")
    p.strategy = Strategy::geometric;
  else
    throw std::invalid_argument("unknown mask strategy '" + strategy +
                                "' (expected independent or geometric)");
  p.fraction = fraction;
  p.mean_run_length = mean_run_length;
  p.validate();
  return p;
}

AugmentedSequence inject_voids(const EventSequence& seq, Rng& rng,
                               int count_per_gap) {
  seq.validate();
  if (count_per_gap < 0)
    throw std::invalid_argument("count_per_gap must be >= 0");

  AugmentedSequence out;
  out.horizon = seq.horizon;
  out.label_count = seq.label_count;

  auto push_real = [&](const Event& e) {
    Epoch ep;
    ep.observed_time = ep.true_time = e.time;
    ep.observed_label = ep.true_label = EventLabel::real(e.label);
    out.epochs.push_back(ep);
  };

  if (seq.events.empty()) return out;
  push_real(seq.events[0]);
  for (size_t i = 1; i < seq.events.size(); ++i) {
    double lo = seq.events[i - 1].time;
    double hi = seq.events[i].time;
    std::vector<double> voids;
    voids.reserve(static_cast<size_t>(count_per_gap));
    for (int k = 0; k < count_per_gap; ++k) {
      // Redraw on exact collision with an endpoint or a sibling void.
      for (int attempt = 0; attempt < 100; ++attempt) {
        double t = rng.uniform(lo, hi);
        bool collides = t <= lo || t >= hi;
        for (double v : voids) collides = collides || v == t;
        if (!collides) {
          voids.push_back(t);
          break;
        }
      }
    }
    std::sort(voids.begin(), voids.end());
    for (double t : voids) {
      Epoch ep;
      ep.observed_time = ep.true_time = t;
      ep.observed_label = ep.true_label = EventLabel::null();
      ep.is_void = true;
      out.epochs.push_back(ep);
    }
    push_real(seq.events[i]);
  }
  return out;
}

AugmentedSequence apply_mask(const AugmentedSequence& aug, Rng& rng,
                             const MaskPolicy& policy) {
  policy.validate();
  for (const Epoch& ep : aug.epochs)
    if (ep.is_masked)
      throw std::invalid_argument("apply_mask: input already has mask flags");

  AugmentedSequence out = aug;
  size_t n = out.epochs.size();
  std::vector<bool> masked(n, false);

  if (policy.strategy == MaskPolicy::Strategy::independent) {
    for (size_t i = 0; i < n; ++i) masked[i] = rng.bernoulli(policy.fraction);
  } else {
    // Alternating masked/unmasked runs with geometric lengths. Mean masked
    // run = mean_run_length; the unmasked mean is sized so the stationary
    // masked share equals `fraction`.
    double f = policy.fraction;
    double p_end_mask = 1.0 / policy.mean_run_length;
    double p_end_unmask = p_end_mask * f / (1.0 - f);
    bool state = rng.bernoulli(f);
    for (size_t i = 0; i < n; ++i) {
      masked[i] = state;
      double p_switch = state ? p_end_mask : p_end_unmask;
      if (rng.bernoulli(p_switch)) state = !state;
    }
  }

  for (size_t i = 0; i < n; ++i) {
    if (!masked[i]) continue;
    out.epochs[i].is_masked = true;
    out.epochs[i].observed_time = 0.0;
    out.epochs[i].observed_label = EventLabel::mask();
  }
  return out;
}

template <typename Seq>
std::pair<std::vector<Seq>, std::vector<Seq>> split(
    const std::vector<Seq>& dataset, Rng& rng, double train_fraction) {
  if (dataset.empty()) throw std::invalid_argument("split: empty dataset");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("split: train_fraction must be in (0, 1)");
  size_t n = dataset.size();
  size_t n_train = static_cast<size_t>(
      std::ceil(train_fraction * static_cast<double>(n)));
  n_train = std::min(n_train, n);

  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  rng.shuffle(idx);
  std::vector<bool> in_train(n, false);
  for (size_t i = 0; i < n_train; ++i) in_train[idx[i]] = true;

  std::pair<std::vector<Seq>, std::vector<Seq>> out;
  for (size_t i = 0; i < n; ++i)
    (in_train[i] ? out.first : out.second).push_back(dataset[i]);
  return out;
}

template std::pair<std::vector<EventSequence>, std::vector<EventSequence>>
split(const std::vector<EventSequence>&, Rng&, double);
template std::pair<std::vector<AugmentedSequence>,
                   std::vector<AugmentedSequence>>
split(const std::vector<AugmentedSequence>&, Rng&, double);

// ------------------------------------------------------------------ JSONL

namespace {

[[noreturn]] void line_error(const std::string& path, size_t lineno,
                             const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + what);
}

json label_to_json(const EventLabel& l) {
  if (l.is_real()) return l.index();
  if (l.is_null()) return "null";
  return "mask";
}

EventLabel label_from_json(const json& j) {
  if (j.is_number_integer()) return EventLabel::real(j.get<int>());
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "null") return EventLabel::null();
    if (s == "mask") return EventLabel::mask();
  }
  throw std::runtime_error("bad label value " + j.dump());
}

}  // namespace

std::vector<EventSequence> load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<EventSequence> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      line_error(path, lineno, std::string("malformed JSON: ") + e.what());
    }
    EventSequence seq;
    try {
      seq.horizon = j.at("T").get<double>();
      seq.label_count = j.at("M").get<int>();
      for (const json& ev : j.at("events")) {
        if (!ev.is_array() || ev.size() != 2)
          throw std::runtime_error("event entries must be [t, y] pairs");
        seq.events.push_back({ev[0].get<double>(), ev[1].get<int>()});
      }
      seq.validate();
    } catch (const std::exception& e) {
      line_error(path, lineno, e.what());
    }
    out.push_back(std::move(seq));
  }
  return out;
}

void save_jsonl(const std::vector<EventSequence>& dataset,
                const std::string& path) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw std::runtime_error("cannot write " + path);
  for (const EventSequence& seq : dataset) {
    json events = json::array();
    for (const Event& e : seq.events) events.push_back({e.time, e.label});
    json j{{"T", seq.horizon}, {"M", seq.label_count}, {"events", events}};
    outf << j.dump() << "\n";
  }
}

std::vector<AugmentedSequence> load_augmented_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<AugmentedSequence> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      line_error(path, lineno, std::string("malformed JSON: ") + e.what());
    }
    AugmentedSequence aug;
    try {
      aug.horizon = j.at("T").get<double>();
      aug.label_count = j.at("M").get<int>();
      for (const json& ev : j.at("events")) {
        Epoch ep;
        ep.observed_time = ev.at("t").get<double>();
        ep.observed_label = label_from_json(ev.at("y"));
        ep.true_time = ev.at("t_true").get<double>();
        ep.true_label = label_from_json(ev.at("y_true"));
        ep.is_void = ev.at("void").get<bool>();
        ep.is_masked = ev.at("masked").get<bool>();
        aug.epochs.push_back(ep);
      }
      aug.validate();
    } catch (const std::exception& e) {
      line_error(path, lineno, e.what());
    }
    out.push_back(std::move(aug));
  }
  return out;
}

void save_augmented_jsonl(const std::vector<AugmentedSequence>& dataset,
                          const std::string& path) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw std::runtime_error("cannot write " + path);
  for (const AugmentedSequence& aug : dataset) {
    json events = json::array();
    for (const Epoch& ep : aug.epochs) {
      json e{{"t", ep.observed_time},
             {"y", label_to_json(ep.observed_label)},
             {"t_true", ep.true_time},
             {"y_true", label_to_json(ep.true_label)},
             {"void", ep.is_void},
             {"masked", ep.is_masked}};
      events.push_back(e);
    }
    json j{{"T", aug.horizon}, {"M", aug.label_count}, {"events", events}};
    outf << j.dump() << "\n";
  }
}

}  // namespace eventformer
