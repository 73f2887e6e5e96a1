#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eventformer/checkpoint.hpp"
#include "eventformer/encoder.hpp"
#include "eventformer/streams.hpp"
#include "eventformer/tensor.hpp"

namespace eventformer {

struct PretrainConfig {
  double gamma = 1.0;    // weight of the time-regression term
  double lambda = 0.01;  // weight of the contrastive term
  double omega = 1.0;    // contrastive temperature
  int batch_size = 16;
  double lr = 1e-4;
  int max_epochs = 100;
  int patience = 5;
  uint64_t seed = 0;

  void validate() const;
};

// Linear prediction heads: M + 1 classes (real labels plus NULL, since
// masked void epochs are predictable targets) and a scalar time output.
struct PretrainHeads {
  Tensor wy;  // d_model x (M + 1)
  Tensor by;  // (M + 1)
  Tensor wt;  // d_model
  Tensor bt;  // scalar

  static PretrainHeads init(int d_model, int label_count, Rng& rng);
  std::vector<std::pair<std::string, Tensor*>> named_parameters();
};

// Masked-epoch targets. Label targets map real labels to their index and
// NULL to class M; MASK is never a target. Time targets are the true
// absolute timestamps.
struct MaskedTargets {
  std::vector<int> epoch_indices;
  std::vector<int> label_targets;
  std::vector<double> time_targets;

  size_t size() const { return epoch_indices.size(); }
};

MaskedTargets masked_targets(const AugmentedSequence& aug);

struct BoundHeads {
  Var wy, by, wt, bt;
};
BoundHeads bind_heads(Graph& g, PretrainHeads& heads);

// Mean over masked epochs of CE(softmax(H_m W^y + b^y), y*) +
// gamma * (H_m w^t + b^t - t*)^2.
Var prediction_loss(Graph& g, Var h_masked, const MaskedTargets& targets,
                    const BoundHeads& heads, double gamma);

// Cosine-similarity contrast between the four group means (masked/unmasked
// x real/void):
//   [sim(mr, mv) + sim(ur, uv) - sim(mr, ur) - sim(mv, uv)] / omega,
// the exact -log(exp(a)/exp(b)) = b - a reduction of the paired form.
// When any group is empty, *skipped is set and a zero constant is returned.
Var contrastive_loss(Graph& g, Var h, const std::vector<Epoch>& epochs,
                     double omega, bool* skipped);

struct PretrainLogEntry {
  int epoch = 0;
  double train_pred = 0.0;
  double train_contr = 0.0;
  double dev_event = 0.0;
};

struct PretrainResult {
  EncoderModel model;  // best-dev checkpoint
  PretrainHeads heads;
  std::vector<PretrainLogEntry> log;
  int best_epoch = 0;
  double best_dev = 0.0;
  int epochs_run = 0;
  bool stopped_early = false;
  long zero_mask_sequences = 0;   // sequences with no masked epoch
  long skipped_contrastive = 0;   // sequence visits with an empty group
};

PretrainResult pretrain(const std::vector<AugmentedSequence>& train,
                        const std::vector<AugmentedSequence>& dev,
                        const EncoderConfig& enc_config,
                        const PretrainConfig& config);

// Checkpoint round-trip for the encoder plus pre-training heads.
Checkpoint to_checkpoint(EncoderModel& model, PretrainHeads* heads);
EncoderModel encoder_from_checkpoint(const Checkpoint& ckpt,
                                     PretrainHeads* heads_out = nullptr);

}  // namespace eventformer
