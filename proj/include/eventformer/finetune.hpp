#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eventformer/checkpoint.hpp"
#include "eventformer/encoder.hpp"
#include "eventformer/streams.hpp"
#include "eventformer/tensor.hpp"

namespace eventformer {

struct FinetuneConfig {
  enum class TimeTarget { absolute, gap };

  double alpha = 0.01;
  std::vector<double> lr_candidates = {0.001, 0.002};  // dev picks the winner
  int batch_size = 32;
  int max_epochs = 100;
  int patience = 10;
  std::vector<int> hidden = {512, 512, 512};
  uint64_t seed = 0;
  TimeTarget time_target = TimeTarget::absolute;

  void validate() const;
  static TimeTarget parse_target(const std::string& s);
  static std::string target_name(TimeTarget t);
};

// Shared-trunk MLP head: d_model -> hidden... -> (M + 1); the first M
// outputs are class logits, the last is the time value.
struct FinetuneHead {
  std::vector<Tensor> weights;
  std::vector<Tensor> biases;
  int d_model = 0;
  int label_count = 0;

  static FinetuneHead init(int d_model, int label_count,
                           const std::vector<int>& hidden, Rng& rng);
  std::vector<std::pair<std::string, Tensor*>> named_parameters();
  // Plain forward for one representation row: M logits + time output.
  std::vector<double> forward(const std::vector<double>& rep) const;
};

// Causal representations of a raw sequence under frozen weights, dropout
// off: row i is the encoder output for the length-(i+1) prefix.
Tensor extract_representations(EncoderModel& model, const EventSequence& seq);

struct FinetunePair {
  std::vector<double> rep;   // H-hat_i
  double time_target = 0.0;  // t_{i+1} (or the gap, per config)
  int label_target = 0;      // y_{i+1}
};

// Pairs each event representation with the next event; the last event of a
// sequence has no target and is excluded.
std::vector<FinetunePair> make_pairs(EncoderModel& model,
                                     const std::vector<EventSequence>& data,
                                     FinetuneConfig::TimeTarget target);

struct FinetuneLogEntry {
  double lr = 0.0;
  int epoch = 0;
  double train_loss = 0.0;
  double dev_loss = 0.0;
};

struct FinetuneResult {
  FinetuneHead head;
  std::vector<FinetuneLogEntry> log;
  double chosen_lr = 0.0;
  double best_dev = 0.0;
  int best_epoch = 0;
};

FinetuneResult finetune(const std::vector<FinetunePair>& train,
                        const std::vector<FinetunePair>& dev, int d_model,
                        int label_count, const FinetuneConfig& config);

// Differentiable Eq-style loss over a batch of pairs (mean of
// CE + alpha * squared time error); exposed for oracle tests.
Var finetune_loss(Graph& g, FinetuneHead& head,
                  const std::vector<const FinetunePair*>& batch, double alpha);

struct Prediction {
  double time = 0.0;
  int label = 0;
};

// Argmax over the M class logits; the time output is clamped so the
// predicted time never precedes the end of the prefix.
Prediction predict_next(EncoderModel& model, const FinetuneHead& head,
                        const EventSequence& prefix,
                        FinetuneConfig::TimeTarget target);

struct Metrics {
  double time_rmse = 0.0;
  double type_accuracy = 0.0;
  long n_pairs = 0;
  std::string target_mode;
};

Metrics evaluate(const std::vector<Prediction>& predictions,
                 const std::vector<Prediction>& ground_truth);

Checkpoint head_to_checkpoint(FinetuneHead& head,
                              FinetuneConfig::TimeTarget target);
FinetuneHead head_from_checkpoint(const Checkpoint& ckpt,
                                  FinetuneConfig::TimeTarget* target_out = nullptr);

}  // namespace eventformer
