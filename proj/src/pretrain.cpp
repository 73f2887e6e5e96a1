#include "eventformer/pretrain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace eventformer {

namespace {
using nlohmann::json;
}

void PretrainConfig::validate() const {
  if (gamma < 0.0 || lambda < 0.0)
    throw std::invalid_argument("pretrain config: gamma and lambda must be >= 0");
  if (!(omega > 0.0))
    throw std::invalid_argument("pretrain config: omega must be > 0");
  if (batch_size < 1 || max_epochs < 1 || patience < 1)
    throw std::invalid_argument("pretrain config: counts must be >= 1");
  if (!(lr > 0.0)) throw std::invalid_argument("pretrain config: lr must be > 0");
}

PretrainHeads PretrainHeads::init(int d_model, int label_count, Rng& rng) {
  PretrainHeads h;
  double bound = std::sqrt(6.0 / (d_model + label_count + 1));
  h.wy = Tensor::zeros({d_model, label_count + 1});
  for (double& x : h.wy.data) x = rng.uniform(-bound, bound);
  h.by = Tensor::zeros({label_count + 1});
  h.wt = Tensor::zeros({d_model});
  for (double& x : h.wt.data) x = rng.uniform(-bound, bound);
  h.bt = Tensor::zeros({1});
  return h;
}

std::vector<std::pair<std::string, Tensor*>> PretrainHeads::named_parameters() {
  return {{"head.wy", &wy}, {"head.by", &by}, {"head.wt", &wt}, {"head.bt", &bt}};
}

MaskedTargets masked_targets(const AugmentedSequence& aug) {
  MaskedTargets t;
  for (size_t i = 0; i < aug.epochs.size(); ++i) {
    const Epoch& ep = aug.epochs[i];
    if (!ep.is_masked) continue;
    t.epoch_indices.push_back(static_cast<int>(i));
    // Targets come from the true_* fields only; the observed view of a
    // masked epoch is (0, MASK) and carries no target information.
    t.label_targets.push_back(ep.true_label.is_null() ? aug.label_count
                                                      : ep.true_label.index());
    t.time_targets.push_back(ep.true_time);
  }
  return t;
}

BoundHeads bind_heads(Graph& g, PretrainHeads& heads) {
  return {g.param(heads.wy), g.param(heads.by), g.param(heads.wt),
          g.param(heads.bt)};
}

Var prediction_loss(Graph& g, Var h_masked, const MaskedTargets& targets,
                    const BoundHeads& heads, double gamma) {
  if (targets.size() == 0)
    throw std::invalid_argument("prediction_loss: no masked epochs");
  int n = g.value(h_masked).rows();
  if (n != static_cast<int>(targets.size()))
    throw std::invalid_argument("prediction_loss: target count mismatch");

  Var logits = g.add_rowvec(g.matmul(h_masked, heads.wy), heads.by);
  Var logp = g.log(g.softmax_rows(logits));
  Var ce = g.scale(g.select_cols(logp, targets.label_targets), -1.0);

  Var tpred = g.matmul(h_masked, heads.wt);  // (n)
  // Scalar bias broadcast via ones (n x 1) times the length-1 bias vector.
  Var bias = g.matmul(g.constant(Tensor::full({n, 1}, 1.0)), heads.bt);
  Var twith = g.add(tpred, bias);
  Var err = g.sub(twith, g.constant(Tensor::vector(targets.time_targets)));
  Var sq = g.mul(err, err);

  return g.mean(g.add(ce, g.scale(sq, gamma)));
}

Var contrastive_loss(Graph& g, Var h, const std::vector<Epoch>& epochs,
                     double omega, bool* skipped) {
  if (!(omega > 0.0))
    throw std::invalid_argument("contrastive_loss: omega must be > 0");
  if (static_cast<int>(epochs.size()) != g.value(h).rows())
    throw std::invalid_argument("contrastive_loss: flag count mismatch");

  std::vector<int> mr, mv, ur, uv;
  for (size_t i = 0; i < epochs.size(); ++i) {
    const Epoch& ep = epochs[i];
    auto& bucket = ep.is_masked ? (ep.is_void ? mv : mr) : (ep.is_void ? uv : ur);
    bucket.push_back(static_cast<int>(i));
  }
  if (mr.empty() || mv.empty() || ur.empty() || uv.empty()) {
    if (skipped) *skipped = true;
    return g.constant(Tensor::scalar(0.0));
  }
  if (skipped) *skipped = false;

  Var m_real = g.mean_rows(g.gather_rows(h, mr));
  Var m_void = g.mean_rows(g.gather_rows(h, mv));
  Var u_real = g.mean_rows(g.gather_rows(h, ur));
  Var u_void = g.mean_rows(g.gather_rows(h, uv));

  Var pos = g.add(g.cosine_similarity(m_real, u_real),
                  g.cosine_similarity(m_void, u_void));
  Var neg = g.add(g.cosine_similarity(m_real, m_void),
                  g.cosine_similarity(u_real, u_void));
  return g.scale(g.sub(neg, pos), 1.0 / omega);
}

namespace {

struct SequenceLoss {
  double pred = 0.0;
  double contr = 0.0;
  bool has_pred = false;
  bool contr_skipped = false;
};

// Forward pass for one sequence; returns the combined Var (pred + lambda *
// contr) and the component values.
std::pair<Var, SequenceLoss> sequence_loss(Graph& g, EncoderModel& model,
                                           PretrainHeads& heads,
                                           const AugmentedSequence& aug,
                                           const PretrainConfig& cfg,
                                           bool train, Rng& dropout_rng) {
  Var x = embed(g, model, aug);
  Var h = encode(g, model, x, train, dropout_rng);

  SequenceLoss parts;
  Var total{-1};

  MaskedTargets targets = masked_targets(aug);
  if (targets.size() > 0) {
    Var pred =
        prediction_loss(g, g.gather_rows(h, targets.epoch_indices), targets,
                        bind_heads(g, heads), cfg.gamma);
    parts.pred = g.value(pred)[0];
    parts.has_pred = true;
    total = pred;
  }

  bool skipped = false;
  Var contr = contrastive_loss(g, h, aug.epochs, cfg.omega, &skipped);
  parts.contr_skipped = skipped;
  parts.contr = g.value(contr)[0];
  if (std::abs(parts.contr) > 4.0 / cfg.omega + 1e-9)
    throw std::logic_error("contrastive loss outside its [-4/omega, 4/omega] bound");
  if (cfg.lambda != 0.0) {
    Var weighted = g.scale(contr, cfg.lambda);
    total = total.id < 0 ? weighted : g.add(total, weighted);
  }
  if (total.id < 0) total = g.constant(Tensor::scalar(0.0));
  return {total, parts};
}

}  // namespace

PretrainResult pretrain(const std::vector<AugmentedSequence>& train,
                        const std::vector<AugmentedSequence>& dev,
                        const EncoderConfig& enc_config,
                        const PretrainConfig& config) {
  config.validate();
  enc_config.validate();
  if (train.empty() || dev.empty())
    throw std::invalid_argument("pretrain: train and dev splits must be nonempty");

  Rng root(config.seed);
  Rng init_rng = root.derive("init");
  PretrainResult res;
  res.model = EncoderModel::init(enc_config, init_rng);
  res.heads =
      PretrainHeads::init(enc_config.d_model, enc_config.label_count, init_rng);

  std::vector<Tensor*> params = res.model.parameters();
  for (auto& [name, t] : res.heads.named_parameters()) params.push_back(t);
  AdamConfig adam_cfg;
  adam_cfg.lr = config.lr;
  Adam adam(params, adam_cfg);

  EncoderModel best_model = res.model;
  PretrainHeads best_heads = res.heads;
  double best_dev = std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  int since_best = 0;

  auto dev_loss = [&]() {
    Rng no_drop(0);
    double total = 0.0;
    for (const AugmentedSequence& aug : dev) {
      Graph g;
      auto [loss, parts] =
          sequence_loss(g, res.model, res.heads, aug, config, false, no_drop);
      double pred_part = parts.has_pred ? parts.pred : 0.0;
      double contr_part = parts.contr_skipped ? 0.0 : parts.contr;
      total += pred_part + config.lambda * contr_part;
    }
    return total / static_cast<double>(dev.size());
  };

  std::vector<size_t> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    Rng shuffle_rng = root.derive("shuffle", static_cast<uint64_t>(epoch));
    Rng dropout_rng = root.derive("dropout", static_cast<uint64_t>(epoch));
    shuffle_rng.shuffle(order);

    double epoch_pred = 0.0, epoch_contr = 0.0;
    long pred_count = 0, contr_count = 0;

    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(config.batch_size)) {
      size_t stop =
          std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      double inv_batch = 1.0 / static_cast<double>(stop - start);
      std::unordered_map<Tensor*, Tensor> grads;
      for (size_t bi = start; bi < stop; ++bi) {
        const AugmentedSequence& aug = train[order[bi]];
        Graph g;
        Var loss;
        SequenceLoss parts;
        try {
          std::tie(loss, parts) = sequence_loss(g, res.model, res.heads, aug,
                                                config, true, dropout_rng);
        } catch (const std::runtime_error& e) {
          // Non-finite values inside the forward pass are divergence.
          throw std::runtime_error("pretrain: diverged at epoch " +
                                   std::to_string(epoch) + ": " + e.what());
        }
        if (!std::isfinite(g.value(loss)[0]))
          throw std::runtime_error("pretrain: loss diverged at epoch " +
                                   std::to_string(epoch));
        g.backward(loss);
        g.accumulate_param_grads(grads, inv_batch);
        if (parts.has_pred) {
          epoch_pred += parts.pred;
          ++pred_count;
        } else {
          ++res.zero_mask_sequences;
        }
        if (parts.contr_skipped) {
          ++res.skipped_contrastive;
        } else {
          epoch_contr += parts.contr;
          ++contr_count;
        }
      }
      adam.step(grads);
    }

    PretrainLogEntry entry;
    entry.epoch = epoch;
    entry.train_pred = pred_count ? epoch_pred / pred_count : 0.0;
    entry.train_contr = contr_count ? epoch_contr / contr_count : 0.0;
    entry.dev_event = dev_loss();
    if (!std::isfinite(entry.dev_event))
      throw std::runtime_error("pretrain: dev loss diverged at epoch " +
                               std::to_string(epoch));
    res.log.push_back(entry);
    res.epochs_run = epoch;

    if (entry.dev_event < best_dev - 1e-6) {
      best_dev = entry.dev_event;
      best_epoch = epoch;
      best_model = res.model;
      best_heads = res.heads;
      since_best = 0;
    } else {
      ++since_best;
      if (since_best >= config.patience) {
        res.stopped_early = true;
        break;
      }
    }
  }

  res.model = std::move(best_model);
  res.heads = std::move(best_heads);
  res.best_epoch = best_epoch;
  res.best_dev = best_dev;
  return res;
}

Checkpoint to_checkpoint(EncoderModel& model, PretrainHeads* heads) {
  Checkpoint ckpt;
  json header{{"kind", "encoder"},
              {"d_model", model.config.d_model},
              {"n_blocks", model.config.n_blocks},
              {"n_heads", model.config.n_heads},
              {"d_ff", model.config.d_ff},
              {"dropout", model.config.dropout},
              {"label_count", model.config.label_count},
              {"max_len", model.config.max_len}};
  ckpt.header_json = header.dump();
  for (auto& [name, t] : model.named_parameters()) ckpt.tensors.emplace_back(name, *t);
  if (heads)
    for (auto& [name, t] : heads->named_parameters())
      ckpt.tensors.emplace_back(name, *t);
  return ckpt;
}

EncoderModel encoder_from_checkpoint(const Checkpoint& ckpt,
                                     PretrainHeads* heads_out) {
  json header = json::parse(ckpt.header_json);
  if (header.value("kind", "") != "encoder")
    throw std::runtime_error("checkpoint does not hold an encoder");
  EncoderConfig cfg;
  cfg.d_model = header.at("d_model").get<int>();
  cfg.n_blocks = header.at("n_blocks").get<int>();
  cfg.n_heads = header.at("n_heads").get<int>();
  cfg.d_ff = header.at("d_ff").get<int>();
  cfg.dropout = header.at("dropout").get<double>();
  cfg.label_count = header.at("label_count").get<int>();
  cfg.max_len = header.at("max_len").get<int>();
  Rng scratch(0);
  EncoderModel model = EncoderModel::init(cfg, scratch);
  for (auto& [name, t] : model.named_parameters()) {
    const Tensor& stored = ckpt.find(name);
    if (!stored.same_shape(*t))
      throw std::runtime_error("checkpoint tensor '" + name + "' has shape " +
                               stored.shape_str() + ", expected " + t->shape_str());
    *t = stored;
  }
  if (heads_out) {
    Rng scratch2(0);
    *heads_out = PretrainHeads::init(cfg.d_model, cfg.label_count, scratch2);
    for (auto& [name, t] : heads_out->named_parameters()) {
      const Tensor& stored = ckpt.find(name);
      if (!stored.same_shape(*t))
        throw std::runtime_error("checkpoint tensor '" + name + "' has shape " +
                                 stored.shape_str() + ", expected " +
                                 t->shape_str());
      *t = stored;
    }
  }
  return model;
}

}  // namespace eventformer
