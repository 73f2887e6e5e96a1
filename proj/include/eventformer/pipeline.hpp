#pragma once

#include <optional>
#include <string>

#include "eventformer/config.hpp"

namespace eventformer {

// Command implementations shared by the CLI and the acceptance suite. Each
// consumes files plus configuration, writes its outputs along with the
// resolved config, and throws on error (the CLI maps that to exit codes).

struct SimulateOptions {
  std::string family;
  std::string model;
  int count = 0;
  std::optional<uint64_t> seed;
  std::string out;
};
void run_simulate(const SimulateOptions& opt, RunConfig config = {});

struct AugmentOptions {
  std::string in;
  std::string out;
  std::optional<std::string> mask_strategy;
  std::optional<double> fraction;
  std::optional<double> mean_run_length;
  bool no_void = false;
  std::optional<int> voids_per_gap;
  std::optional<uint64_t> seed;
};
void run_augment(const AugmentOptions& opt, RunConfig config = {});

struct PretrainOptions {
  std::string train;  // augmented + masked JSONL
  std::string out_dir;
  std::optional<uint64_t> seed;
};
void run_pretrain(const PretrainOptions& opt, RunConfig config = {});

struct FinetuneOptions {
  std::string data;  // raw JSONL
  std::string checkpoint;
  std::string out_dir;
  std::optional<uint64_t> seed;
};
void run_finetune(const FinetuneOptions& opt, RunConfig config = {});

struct EvaluateOptions {
  std::string in;  // predictions JSONL
  std::string out;
};
void run_evaluate(const EvaluateOptions& opt);

struct EmbedOptions {
  std::string data;
  std::string checkpoint;
  std::string out;
};
void run_embed(const EmbedOptions& opt);

struct LoglikOptions {
  std::string family;
  std::string model;
  std::string in;
  std::string out;
};
void run_loglik(const LoglikOptions& opt);

}  // namespace eventformer
