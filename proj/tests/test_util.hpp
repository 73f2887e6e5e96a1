#pragma once

#include <cmath>
#include <functional>
#include <unordered_map>
#include <vector>

#include "eventformer/rng.hpp"
#include "eventformer/streams.hpp"
#include "eventformer/tensor.hpp"

namespace evtest {

using eventformer::AugmentedSequence;
using eventformer::Epoch;
using eventformer::EventLabel;
using eventformer::EventSequence;
using eventformer::Rng;
using eventformer::Tensor;

// Loss evaluator used by gradient checks: fills `grads` when non-null.
using LossFn = std::function<double(std::unordered_map<Tensor*, Tensor>*)>;

// Max mixed relative error between reverse-mode gradients and central
// finite differences over every element of every parameter.
inline double max_grad_error(const std::vector<Tensor*>& params,
                             const LossFn& loss, double h = 1e-5) {
  std::unordered_map<Tensor*, Tensor> grads;
  loss(&grads);
  double worst = 0.0;
  for (Tensor* p : params) {
    auto it = grads.find(p);
    for (int64_t i = 0; i < p->size(); ++i) {
      double keep = (*p)[i];
      (*p)[i] = keep + h;
      double fp = loss(nullptr);
      (*p)[i] = keep - h;
      double fm = loss(nullptr);
      (*p)[i] = keep;
      double fd = (fp - fm) / (2.0 * h);
      double analytic = it == grads.end() ? 0.0 : it->second[i];
      double denom = std::max({1.0, std::abs(analytic), std::abs(fd)});
      worst = std::max(worst, std::abs(analytic - fd) / denom);
    }
  }
  return worst;
}

inline Tensor random_tensor(const std::vector<int>& shape, Rng& rng,
                            double scale = 1.0) {
  Tensor t = Tensor::zeros(shape);
  for (double& x : t.data) x = rng.uniform(-scale, scale);
  return t;
}

inline EventSequence make_sequence(std::vector<std::pair<double, int>> events,
                                   double horizon, int label_count) {
  EventSequence seq;
  seq.horizon = horizon;
  seq.label_count = label_count;
  for (auto& [t, y] : events) seq.events.push_back({t, y});
  seq.validate();
  return seq;
}

inline EventSequence random_sequence(Rng& rng, int n, double horizon,
                                     int label_count) {
  std::vector<double> times;
  for (int i = 0; i < n; ++i) times.push_back(rng.uniform(0.0, horizon));
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  EventSequence seq;
  seq.horizon = horizon;
  seq.label_count = label_count;
  for (double t : times)
    seq.events.push_back({t, static_cast<int>(rng.below(
                                 static_cast<uint64_t>(label_count)))});
  seq.validate();
  return seq;
}

// Augmented sequence with all four contrastive groups populated.
inline AugmentedSequence four_group_sequence(Rng& rng, int n, double horizon,
                                             int label_count) {
  AugmentedSequence aug;
  aug.horizon = horizon;
  aug.label_count = label_count;
  double t = 0.0;
  for (int i = 0; i < n; ++i) {
    t += rng.uniform(0.01, horizon / (2.0 * n));
    Epoch ep;
    ep.true_time = t;
    ep.is_void = i % 2 == 1;
    ep.true_label = ep.is_void
                        ? EventLabel::null()
                        : EventLabel::real(static_cast<int>(rng.below(
                              static_cast<uint64_t>(label_count))));
    // Cycle masked / unmasked over both void and real epochs.
    ep.is_masked = (i / 2) % 2 == 0;
    if (ep.is_masked) {
      ep.observed_time = 0.0;
      ep.observed_label = EventLabel::mask();
    } else {
      ep.observed_time = ep.true_time;
      ep.observed_label = ep.true_label;
    }
    aug.epochs.push_back(ep);
  }
  aug.validate();
  return aug;
}

}  // namespace evtest
