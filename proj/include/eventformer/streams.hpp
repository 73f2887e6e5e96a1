#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eventformer/rng.hpp"

namespace eventformer {

// A label is either a real type index in [0, M), the reserved NULL label
// marking a void epoch (no event occurred), or the reserved MASK sentinel.
class EventLabel {
 public:
  EventLabel() = default;

  static EventLabel real(int index) {
    if (index < 0) throw std::invalid_argument("real label index must be >= 0");
    return EventLabel(index);
  }
  static EventLabel null() { return EventLabel(kNull); }
  static EventLabel mask() { return EventLabel(kMask); }

  bool is_real() const { return v_ >= 0; }
  bool is_null() const { return v_ == kNull; }
  bool is_mask() const { return v_ == kMask; }

  int index() const {
    if (!is_real()) throw std::logic_error("label has no real index");
    return v_;
  }

  bool operator==(const EventLabel&) const = default;

 private:
  explicit EventLabel(int v) : v_(v) {}
  static constexpr int kNull = -1;
  static constexpr int kMask = -2;
  int v_ = kNull;
};

struct Event {
  double time = 0.0;
  int label = 0;
};

// Ordered (time, label) pairs on [0, horizon] with labels in [0, label_count).
struct EventSequence {
  std::vector<Event> events;
  double horizon = 0.0;
  int label_count = 0;

  size_t size() const { return events.size(); }
  void validate() const;  // throws std::invalid_argument on violation
};

struct Epoch {
  double observed_time = 0.0;
  EventLabel observed_label;
  double true_time = 0.0;
  EventLabel true_label;
  bool is_void = false;
  bool is_masked = false;
};

// An event sequence merged with sampled void epochs; masking replaces the
// observed view with (0, MASK) while the true_* fields keep ground truth.
struct AugmentedSequence {
  std::vector<Epoch> epochs;
  double horizon = 0.0;
  int label_count = 0;

  size_t size() const { return epochs.size(); }
  void validate() const;

  // Drops void epochs and un-masks; recovers the source sequence exactly.
  EventSequence strip() const;
};

struct MaskPolicy {
  enum class Strategy { independent, geometric };
  Strategy strategy = Strategy::independent;
  double fraction = 0.15;
  double mean_run_length = 3.0;  // geometric strategy only

  void validate() const;
  static MaskPolicy parse(const std::string& strategy, double fraction,
                          double mean_run_length);
};

// Samples `count_per_gap` void epochs uniformly inside every open interval
// between consecutive real events and merges them in time order. If a draw
// collides with a neighbor it is redrawn (up to 100 times, then skipped).
AugmentedSequence inject_voids(const EventSequence& seq, Rng& rng,
                               int count_per_gap = 1);

AugmentedSequence apply_mask(const AugmentedSequence& aug, Rng& rng,
                             const MaskPolicy& policy);

// Disjoint partition with ceil(train_fraction * n) sequences in the train
// part; original relative order is preserved within each part.
template <typename Seq>
std::pair<std::vector<Seq>, std::vector<Seq>> split(
    const std::vector<Seq>& dataset, Rng& rng, double train_fraction);

// JSON Lines I/O. One sequence per line:
//   {"T": number, "M": int, "events": [[t, y], ...]}
// Augmented files carry per-epoch objects instead of pairs:
//   {"t": t_obs, "y": int|"null"|"mask", "void": bool, "masked": bool,
//    "t_true": number, "y_true": int|"null"}
std::vector<EventSequence> load_jsonl(const std::string& path);
void save_jsonl(const std::vector<EventSequence>& dataset,
                const std::string& path);
std::vector<AugmentedSequence> load_augmented_jsonl(const std::string& path);
void save_augmented_jsonl(const std::vector<AugmentedSequence>& dataset,
                          const std::string& path);

extern template std::pair<std::vector<EventSequence>, std::vector<EventSequence>>
split(const std::vector<EventSequence>&, Rng&, double);
extern template std::pair<std::vector<AugmentedSequence>,
                          std::vector<AugmentedSequence>>
split(const std::vector<AugmentedSequence>&, Rng&, double);

}  // namespace eventformer
