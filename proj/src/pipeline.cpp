#include "eventformer/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "eventformer/finetune.hpp"
#include "eventformer/generators.hpp"
#include "eventformer/pretrain.hpp"
#include "eventformer/streams.hpp"
#include "json.hpp"

namespace eventformer {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir);
}

EncoderConfig encoder_config_from(const RunConfig& cfg, int label_count) {
  EncoderConfig enc;
  enc.d_model = cfg.get_int("encoder.d_model", 512);
  enc.n_blocks = cfg.get_int("encoder.n_blocks", 4);
  enc.n_heads = cfg.get_int("encoder.n_heads", 4);
  enc.d_ff = cfg.get_int("encoder.d_ff", 1024);
  enc.dropout = cfg.get_double("encoder.dropout", 0.1);
  enc.max_len = cfg.get_int("encoder.max_len", 4096);
  enc.label_count = label_count;
  return enc;
}

void record_encoder(RunConfig& cfg, const EncoderConfig& enc) {
  cfg.set("encoder.d_model", std::to_string(enc.d_model));
  cfg.set("encoder.n_blocks", std::to_string(enc.n_blocks));
  cfg.set("encoder.n_heads", std::to_string(enc.n_heads));
  cfg.set("encoder.d_ff", std::to_string(enc.d_ff));
  cfg.set("encoder.dropout", format_double(enc.dropout));
  cfg.set("encoder.max_len", std::to_string(enc.max_len));
}

// The homogeneous-transfer guard: shared embeddings require an identical
// label vocabulary; a mismatch is a hard error, not a remapping.
void check_label_count(int data_m, int model_m, const std::string& what) {
  if (data_m != model_m)
    throw std::runtime_error(what + ": dataset declares M = " +
                             std::to_string(data_m) + " but the checkpoint was " +
                             "trained with M = " + std::to_string(model_m));
}

int dataset_label_count(const std::vector<EventSequence>& data) {
  if (data.empty()) throw std::runtime_error("dataset is empty");
  int m = data.front().label_count;
  for (const EventSequence& s : data)
    if (s.label_count != m)
      throw std::runtime_error("dataset mixes different label counts");
  return m;
}

}  // namespace

void run_simulate(const SimulateOptions& opt, RunConfig config) {
  uint64_t seed = config.resolve_seed(opt.seed);
  if (opt.count < 0) throw std::runtime_error("simulate: count must be >= 0");
  ModelParams params = get_model(opt.family, opt.model);

  Rng root(seed);
  std::vector<EventSequence> data;
  data.reserve(static_cast<size_t>(opt.count));
  for (int i = 0; i < opt.count; ++i) {
    Rng rng = root.derive("simulate", static_cast<uint64_t>(i));
    data.push_back(simulate(params, rng));
  }
  save_jsonl(data, opt.out);

  config.set("family", opt.family);
  config.set("model", opt.model);
  config.set("count", std::to_string(opt.count));
  config.set("seed", std::to_string(seed));
  config.set("out", opt.out);
  config.write(opt.out + ".config");
}

void run_augment(const AugmentOptions& opt, RunConfig config) {
  uint64_t seed = config.resolve_seed(opt.seed);
  std::string strategy =
      opt.mask_strategy.value_or(config.get_string("mask.strategy", "independent"));
  double fraction = opt.fraction.value_or(config.get_double("mask.fraction", 0.15));
  double mean_run =
      opt.mean_run_length.value_or(config.get_double("mask.mean_run_length", 3.0));
  int voids_per_gap =
      opt.no_void ? 0
                  : opt.voids_per_gap.value_or(
                        config.get_int("augment.voids_per_gap", 1));
  MaskPolicy policy = MaskPolicy::parse(strategy, fraction, mean_run);

  std::vector<EventSequence> data = load_jsonl(opt.in);
  Rng root(seed);
  std::vector<AugmentedSequence> out;
  out.reserve(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    Rng void_rng = root.derive("voids", static_cast<uint64_t>(i));
    Rng mask_rng = root.derive("mask", static_cast<uint64_t>(i));
    AugmentedSequence aug = inject_voids(data[i], void_rng, voids_per_gap);
    out.push_back(apply_mask(aug, mask_rng, policy));
  }
  save_augmented_jsonl(out, opt.out);

  config.set("in", opt.in);
  config.set("out", opt.out);
  config.set("seed", std::to_string(seed));
  config.set("mask.strategy", strategy);
  config.set("mask.fraction", format_double(fraction));
  config.set("mask.mean_run_length", format_double(mean_run));
  config.set("augment.voids_per_gap", std::to_string(voids_per_gap));
  config.set("augment.no_void", opt.no_void ? "true" : "false");
  config.write(opt.out + ".config");
}

void run_pretrain(const PretrainOptions& opt, RunConfig config) {
  uint64_t seed = config.resolve_seed(opt.seed);
  ensure_dir(opt.out_dir);

  std::vector<AugmentedSequence> data = load_augmented_jsonl(opt.train);
  if (data.empty()) throw std::runtime_error("pretrain: dataset is empty");
  int label_count = data.front().label_count;
  for (const AugmentedSequence& a : data)
    if (a.label_count != label_count)
      throw std::runtime_error("pretrain: dataset mixes different label counts");

  double train_fraction = config.get_double("pretrain.train_fraction", 0.75);
  Rng split_rng = Rng(seed).derive("split");
  auto [train, dev] = split(data, split_rng, train_fraction);
  if (dev.empty())
    throw std::runtime_error("pretrain: dev split is empty; add sequences or "
                             "lower pretrain.train_fraction");

  EncoderConfig enc = encoder_config_from(config, label_count);
  PretrainConfig pc;
  pc.gamma = config.get_double("pretrain.gamma", 1.0);
  pc.lambda = config.get_double("pretrain.lambda", 0.01);
  pc.omega = config.get_double("pretrain.omega", 1.0);
  pc.batch_size = config.get_int("pretrain.batch_size", 16);
  pc.lr = config.get_double("pretrain.lr", 1e-4);
  pc.max_epochs = config.get_int("pretrain.max_epochs", 100);
  pc.patience = config.get_int("pretrain.patience", 5);
  pc.seed = seed;

  PretrainResult result = pretrain(train, dev, enc, pc);

  Checkpoint ckpt = to_checkpoint(result.model, &result.heads);
  save_checkpoint(ckpt, opt.out_dir + "/encoder.ckpt");

  std::string log_text;
  for (const PretrainLogEntry& e : result.log) {
    json j{{"epoch", e.epoch},
           {"train_pred", e.train_pred},
           {"train_contr", e.train_contr},
           {"dev_event", e.dev_event}};
    log_text += j.dump();
    log_text += "\n";
  }
  write_text(opt.out_dir + "/pretrain_log.jsonl", log_text);

  json summary{{"best_epoch", result.best_epoch},
               {"best_dev", result.best_dev},
               {"epochs_run", result.epochs_run},
               {"stopped_early", result.stopped_early},
               {"zero_mask_sequences", result.zero_mask_sequences},
               {"skipped_contrastive", result.skipped_contrastive},
               {"train_sequences", train.size()},
               {"dev_sequences", dev.size()}};
  write_text(opt.out_dir + "/pretrain_summary.json", summary.dump(2) + "\n");

  config.set("train", opt.train);
  config.set("out_dir", opt.out_dir);
  config.set("seed", std::to_string(seed));
  record_encoder(config, enc);
  config.set("pretrain.gamma", format_double(pc.gamma));
  config.set("pretrain.lambda", format_double(pc.lambda));
  config.set("pretrain.omega", format_double(pc.omega));
  config.set("pretrain.batch_size", std::to_string(pc.batch_size));
  config.set("pretrain.lr", format_double(pc.lr));
  config.set("pretrain.max_epochs", std::to_string(pc.max_epochs));
  config.set("pretrain.patience", std::to_string(pc.patience));
  config.set("pretrain.train_fraction", format_double(train_fraction));
  config.write(opt.out_dir + "/run.config");
}

void run_finetune(const FinetuneOptions& opt, RunConfig config) {
  uint64_t seed = config.resolve_seed(opt.seed);
  ensure_dir(opt.out_dir);

  std::vector<EventSequence> data = load_jsonl(opt.data);
  int label_count = dataset_label_count(data);

  Checkpoint ckpt = load_checkpoint(opt.checkpoint);
  EncoderModel model = encoder_from_checkpoint(ckpt);
  check_label_count(label_count, model.config.label_count, "finetune");

  FinetuneConfig fc;
  fc.alpha = config.get_double("finetune.alpha", 0.01);
  fc.lr_candidates = config.get_double_list("finetune.lr_candidates", {0.001, 0.002});
  fc.batch_size = config.get_int("finetune.batch_size", 32);
  fc.max_epochs = config.get_int("finetune.max_epochs", 100);
  fc.patience = config.get_int("finetune.patience", 10);
  fc.hidden = config.get_int_list("finetune.hidden", {512, 512, 512});
  fc.time_target = FinetuneConfig::parse_target(
      config.get_string("finetune.time_target", "absolute"));
  fc.seed = seed;
  fc.validate();

  double train_fraction = config.get_double("finetune.train_fraction", 0.6);
  double dev_fraction = config.get_double("finetune.dev_fraction", 0.2);
  if (!(train_fraction > 0) || !(dev_fraction > 0) ||
      train_fraction + dev_fraction >= 1.0)
    throw std::runtime_error("finetune: train/dev/test fractions must be "
                             "positive and sum below 1");

  Rng split_rng = Rng(seed).derive("finetune_split");
  auto [train_seqs, rest] = split(data, split_rng, train_fraction);
  double dev_share = dev_fraction / (1.0 - train_fraction);
  Rng split_rng2 = Rng(seed).derive("finetune_split_dev");
  auto [dev_seqs, test_seqs] = split(rest, split_rng2, dev_share);
  if (train_seqs.empty() || dev_seqs.empty() || test_seqs.empty())
    throw std::runtime_error("finetune: a split is empty; need more sequences");

  std::vector<FinetunePair> train_pairs = make_pairs(model, train_seqs, fc.time_target);
  std::vector<FinetunePair> dev_pairs = make_pairs(model, dev_seqs, fc.time_target);
  if (train_pairs.empty() || dev_pairs.empty())
    throw std::runtime_error("finetune: no training pairs (sequences too short)");

  FinetuneResult result =
      finetune(train_pairs, dev_pairs, model.config.d_model, label_count, fc);

  // Test-split predictions, one per (prefix, next event) pair.
  std::vector<Prediction> preds, truth;
  std::string pred_text;
  for (const EventSequence& seq : test_seqs) {
    Tensor h = extract_representations(model, seq);
    int d = model.config.d_model;
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
      std::vector<double> rep(h.data.begin() + static_cast<int64_t>(i) * d,
                              h.data.begin() + static_cast<int64_t>(i + 1) * d);
      std::vector<double> out = result.head.forward(rep);
      Prediction p;
      int arg = 0;
      for (int j = 1; j < label_count; ++j)
        if (out[static_cast<size_t>(j)] > out[static_cast<size_t>(arg)]) arg = j;
      p.label = arg;
      double last_time = seq.events[i].time;
      double traw = out[static_cast<size_t>(label_count)];
      Prediction t;
      t.label = seq.events[i + 1].label;
      if (fc.time_target == FinetuneConfig::TimeTarget::absolute) {
        p.time = std::max(traw, last_time);
        t.time = seq.events[i + 1].time;
      } else {
        p.time = std::max(traw, 0.0);
        t.time = seq.events[i + 1].time - last_time;
      }
      preds.push_back(p);
      truth.push_back(t);
      json j{{"t_pred", p.time},
             {"y_pred", p.label},
             {"t_true", t.time},
             {"y_true", t.label},
             {"target_mode", FinetuneConfig::target_name(fc.time_target)}};
      pred_text += j.dump();
      pred_text += "\n";
    }
  }
  if (preds.empty())
    throw std::runtime_error("finetune: test split yields no prediction pairs");

  Metrics metrics = evaluate(preds, truth);
  metrics.target_mode = FinetuneConfig::target_name(fc.time_target);

  Checkpoint head_ckpt = head_to_checkpoint(result.head, fc.time_target);
  save_checkpoint(head_ckpt, opt.out_dir + "/head.ckpt");
  write_text(opt.out_dir + "/predictions.jsonl", pred_text);

  std::string log_text;
  for (const FinetuneLogEntry& e : result.log) {
    json j{{"lr", e.lr},
           {"epoch", e.epoch},
           {"train_loss", e.train_loss},
           {"dev_loss", e.dev_loss}};
    log_text += j.dump();
    log_text += "\n";
  }
  write_text(opt.out_dir + "/finetune_log.jsonl", log_text);

  json mj{{"time_rmse", metrics.time_rmse},
          {"type_accuracy", metrics.type_accuracy},
          {"n_pairs", metrics.n_pairs},
          {"target_mode", metrics.target_mode},
          {"chosen_lr", result.chosen_lr},
          {"best_dev", result.best_dev},
          {"best_epoch", result.best_epoch}};
  write_text(opt.out_dir + "/metrics.json", mj.dump(2) + "\n");

  config.set("data", opt.data);
  config.set("checkpoint", opt.checkpoint);
  config.set("out_dir", opt.out_dir);
  config.set("seed", std::to_string(seed));
  config.set("finetune.alpha", format_double(fc.alpha));
  {
    std::string lrs;
    for (size_t i = 0; i < fc.lr_candidates.size(); ++i) {
      if (i) lrs += ",";
      lrs += format_double(fc.lr_candidates[i]);
    }
    config.set("finetune.lr_candidates", lrs);
  }
  config.set("finetune.batch_size", std::to_string(fc.batch_size));
  config.set("finetune.max_epochs", std::to_string(fc.max_epochs));
  config.set("finetune.patience", std::to_string(fc.patience));
  {
    std::string hs;
    for (size_t i = 0; i < fc.hidden.size(); ++i) {
      if (i) hs += ",";
      hs += std::to_string(fc.hidden[i]);
    }
    config.set("finetune.hidden", hs);
  }
  config.set("finetune.time_target", FinetuneConfig::target_name(fc.time_target));
  config.set("finetune.train_fraction", format_double(train_fraction));
  config.set("finetune.dev_fraction", format_double(dev_fraction));
  config.write(opt.out_dir + "/run.config");
}

void run_evaluate(const EvaluateOptions& opt) {
  std::ifstream in(opt.in);
  if (!in) throw std::runtime_error("cannot open " + opt.in);
  std::vector<Prediction> preds, truth;
  std::string line;
  size_t lineno = 0;
  std::string target_mode = "unspecified";
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      Prediction p, t;
      p.time = j.at("t_pred").get<double>();
      p.label = j.at("y_pred").get<int>();
      t.time = j.at("t_true").get<double>();
      t.label = j.at("y_true").get<int>();
      preds.push_back(p);
      truth.push_back(t);
      if (j.contains("target_mode")) target_mode = j.at("target_mode").get<std::string>();
    } catch (const std::exception& e) {
      throw std::runtime_error(opt.in + ":" + std::to_string(lineno) + ": " +
                               e.what());
    }
  }
  Metrics metrics = evaluate(preds, truth);
  json mj{{"time_rmse", metrics.time_rmse},
          {"type_accuracy", metrics.type_accuracy},
          {"n_pairs", metrics.n_pairs},
          {"target_mode", target_mode}};
  write_text(opt.out, mj.dump(2) + "\n");

  RunConfig config;
  config.set("in", opt.in);
  config.set("out", opt.out);
  config.write(opt.out + ".config");
}

void run_embed(const EmbedOptions& opt) {
  std::vector<EventSequence> data = load_jsonl(opt.data);
  int label_count = dataset_label_count(data);
  Checkpoint ckpt = load_checkpoint(opt.checkpoint);
  EncoderModel model = encoder_from_checkpoint(ckpt);
  check_label_count(label_count, model.config.label_count, "embed");

  std::string text;
  for (const EventSequence& seq : data) {
    Tensor h = extract_representations(model, seq);
    json rows = json::array();
    for (int i = 0; i < h.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < h.cols(); ++j) row.push_back(h.at(i, j));
      rows.push_back(row);
    }
    json j{{"H", rows}};
    text += j.dump();
    text += "\n";
  }
  write_text(opt.out, text);

  RunConfig config;
  config.set("data", opt.data);
  config.set("checkpoint", opt.checkpoint);
  config.set("out", opt.out);
  config.write(opt.out + ".config");
}

void run_loglik(const LoglikOptions& opt) {
  ModelParams params = get_model(opt.family, opt.model);
  std::vector<EventSequence> data = load_jsonl(opt.in);
  std::string text;
  for (const EventSequence& seq : data) {
    std::string diag;
    double ll = loglik(params, seq, &diag);
    json j;
    if (std::isfinite(ll)) {
      j = json{{"loglik", ll}};
    } else {
      j = json{{"loglik", nullptr}, {"diagnostic", diag}};
    }
    text += j.dump();
    text += "\n";
  }
  write_text(opt.out, text);

  RunConfig config;
  config.set("family", opt.family);
  config.set("model", opt.model);
  config.set("in", opt.in);
  config.set("out", opt.out);
  config.write(opt.out + ".config");
}

}  // namespace eventformer
