#pragma once

#include <string>
#include <utility>
#include <vector>

#include "eventformer/streams.hpp"
#include "eventformer/tensor.hpp"

namespace eventformer {

struct EncoderConfig {
  int d_model = 512;
  int n_blocks = 4;
  int n_heads = 4;
  int d_ff = 1024;
  double dropout = 0.1;
  int label_count = 0;  // M; the embedding table has M + 2 rows (NULL, MASK)
  int max_len = 4096;

  void validate() const;

  // Small profile for tests and CPU-scale experiments.
  static EncoderConfig desk_profile(int label_count);
};

// Sinusoidal encoding of integer positions: row i has
// sin(i / 10000^(2k/d)) and cos(i / 10000^(2k/d)) interleaved.
Tensor positional_encoding(int n, int d_model, int max_len);

// The same sinusoid evaluated at real-valued timestamps. Masked epochs pass
// observed_time = 0, so TE alone cannot tell two masked epochs apart; the
// positional term restores distinctness.
Tensor temporal_encoding(const std::vector<double>& times, int d_model);

// Transformer encoder with causal (past-or-self) attention. Post-norm
// residual blocks; Q/K/V/O projections are stored per head.
struct EncoderModel {
  struct Head {
    Tensor wq, wk, wv;  // d_model x d_k
    Tensor bq, bk, bv;  // d_k
    Tensor wo;          // d_k x d_model
  };
  struct Block {
    std::vector<Head> heads;
    Tensor bo;                    // d_model
    Tensor w1, b1, w2, b2;        // feed-forward
    Tensor ln1_gain, ln1_bias;    // after attention residual
    Tensor ln2_gain, ln2_bias;    // after feed-forward residual
  };

  EncoderConfig config;
  Tensor label_embedding;  // (M + 2) x d_model; rows M, M+1 = NULL, MASK
  std::vector<Block> blocks;

  static EncoderModel init(const EncoderConfig& config, Rng& rng);

  // Deterministically ordered (name, tensor) views over all parameters.
  std::vector<std::pair<std::string, Tensor*>> named_parameters();
  std::vector<Tensor*> parameters();

  int embedding_row(const EventLabel& label) const;
};

// Attention probability matrices captured during a forward pass, one
// (n x n) tensor per (block, head) in block-major order.
struct AttentionTrace {
  std::vector<Tensor> probs;
};

// X[i] = label_embedding[observed_label_i] + PE[i] + TE[observed_time_i].
Var embed(Graph& g, EncoderModel& model, const AugmentedSequence& aug);
// Fine-tuning path: raw events, all labels real, no masks.
Var embed(Graph& g, EncoderModel& model, const EventSequence& seq);

// Runs the attention blocks; H[i] depends only on X[0..i].
Var encode(Graph& g, EncoderModel& model, Var x, bool train, Rng& rng,
           AttentionTrace* trace = nullptr);

}  // namespace eventformer
