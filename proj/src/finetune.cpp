#include "eventformer/finetune.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace eventformer {

namespace {
using nlohmann::json;
}

void FinetuneConfig::validate() const {
  if (alpha < 0.0) throw std::invalid_argument("finetune config: alpha must be >= 0");
  if (lr_candidates.empty())
    throw std::invalid_argument("finetune config: need at least one lr candidate");
  for (double lr : lr_candidates)
    if (!(lr > 0.0)) throw std::invalid_argument("finetune config: lr must be > 0");
  if (batch_size < 1 || max_epochs < 1 || patience < 1)
    throw std::invalid_argument("finetune config: counts must be >= 1");
  for (int h : hidden)
    if (h < 1) throw std::invalid_argument("finetune config: hidden dims must be >= 1");
}

FinetuneConfig::TimeTarget FinetuneConfig::parse_target(const std::string& s) {
  if (s == "absolute") return TimeTarget::absolute;
  if (s == "gap") return TimeTarget::gap;
  throw std::invalid_argument("unknown time target '" + s +
                              "' (expected absolute or gap)");
}

std::string FinetuneConfig::target_name(TimeTarget t) {
  return t == TimeTarget::absolute ? "absolute" : "gap";
}

FinetuneHead FinetuneHead::init(int d_model, int label_count,
                                const std::vector<int>& hidden, Rng& rng) {
  FinetuneHead head;
  head.d_model = d_model;
  head.label_count = label_count;
  std::vector<int> dims{d_model};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(label_count + 1);
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    double bound = std::sqrt(6.0 / (dims[l] + dims[l + 1]));
    Tensor w = Tensor::zeros({dims[l], dims[l + 1]});
    for (double& x : w.data) x = rng.uniform(-bound, bound);
    head.weights.push_back(std::move(w));
    head.biases.push_back(Tensor::zeros({dims[l + 1]}));
  }
  return head;
}

std::vector<std::pair<std::string, Tensor*>> FinetuneHead::named_parameters() {
  std::vector<std::pair<std::string, Tensor*>> out;
  for (size_t l = 0; l < weights.size(); ++l) {
    out.emplace_back("mlp.w" + std::to_string(l), &weights[l]);
    out.emplace_back("mlp.b" + std::to_string(l), &biases[l]);
  }
  return out;
}

std::vector<double> FinetuneHead::forward(const std::vector<double>& rep) const {
  if (static_cast<int>(rep.size()) != d_model)
    throw std::invalid_argument("finetune head: representation width mismatch");
  std::vector<double> x = rep;
  for (size_t l = 0; l < weights.size(); ++l) {
    const Tensor& w = weights[l];
    const Tensor& b = biases[l];
    std::vector<double> y(static_cast<size_t>(w.cols()), 0.0);
    for (int i = 0; i < w.rows(); ++i)
      for (int j = 0; j < w.cols(); ++j) y[static_cast<size_t>(j)] += x[static_cast<size_t>(i)] * w.at(i, j);
    for (int j = 0; j < w.cols(); ++j) y[static_cast<size_t>(j)] += b[j];
    if (l + 1 < weights.size())
      for (double& v : y) v = v > 0.0 ? v : 0.0;
    x = std::move(y);
  }
  return x;
}

Tensor extract_representations(EncoderModel& model, const EventSequence& seq) {
  seq.validate();
  Graph g;
  Rng no_drop(0);
  Var x = embed(g, model, seq);
  Var h = encode(g, model, x, /*train=*/false, no_drop);
  return g.value(h);
}

std::vector<FinetunePair> make_pairs(EncoderModel& model,
                                     const std::vector<EventSequence>& data,
                                     FinetuneConfig::TimeTarget target) {
  std::vector<FinetunePair> pairs;
  int d = model.config.d_model;
  for (const EventSequence& seq : data) {
    if (seq.size() < 2) continue;
    Tensor h = extract_representations(model, seq);
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
      FinetunePair p;
      p.rep.assign(h.data.begin() + static_cast<int64_t>(i) * d,
                   h.data.begin() + static_cast<int64_t>(i + 1) * d);
      const Event& next = seq.events[i + 1];
      p.time_target = target == FinetuneConfig::TimeTarget::absolute
                          ? next.time
                          : next.time - seq.events[i].time;
      p.label_target = next.label;
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

namespace {

struct BoundHead {
  std::vector<Var> weights, biases;
};

BoundHead bind_head(Graph& g, FinetuneHead& head) {
  BoundHead b;
  for (size_t l = 0; l < head.weights.size(); ++l) {
    b.weights.push_back(g.param(head.weights[l]));
    b.biases.push_back(g.param(head.biases[l]));
  }
  return b;
}

Var mlp_forward(Graph& g, const BoundHead& bound, Var x) {
  for (size_t l = 0; l < bound.weights.size(); ++l) {
    x = g.add_rowvec(g.matmul(x, bound.weights[l]), bound.biases[l]);
    if (l + 1 < bound.weights.size()) x = g.relu(x);
  }
  return x;
}

}  // namespace

Var finetune_loss(Graph& g, FinetuneHead& head,
                  const std::vector<const FinetunePair*>& batch, double alpha) {
  if (batch.empty()) throw std::invalid_argument("finetune_loss: empty batch");
  int n = static_cast<int>(batch.size());
  int d = head.d_model;
  int m = head.label_count;

  Tensor reps = Tensor::zeros({n, d});
  std::vector<int> label_targets(static_cast<size_t>(n));
  std::vector<double> time_targets(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const FinetunePair& p = *batch[static_cast<size_t>(i)];
    std::copy(p.rep.begin(), p.rep.end(),
              reps.data.begin() + static_cast<int64_t>(i) * d);
    label_targets[static_cast<size_t>(i)] = p.label_target;
    time_targets[static_cast<size_t>(i)] = p.time_target;
  }

  BoundHead bound = bind_head(g, head);
  Var out = mlp_forward(g, bound, g.constant(std::move(reps)));
  Var logits = g.slice_cols(out, 0, m);
  Var logp = g.log(g.softmax_rows(logits));
  Var ce = g.scale(g.select_cols(logp, label_targets), -1.0);

  Var tcol = g.slice_cols(out, m, m + 1);  // (n x 1)
  Var terr = g.sub(tcol, g.constant(Tensor::matrix(n, 1, std::move(time_targets))));
  Var sq = g.mul(terr, terr);

  return g.add(g.mean(ce), g.scale(g.mean(sq), alpha));
}

FinetuneResult finetune(const std::vector<FinetunePair>& train,
                        const std::vector<FinetunePair>& dev, int d_model,
                        int label_count, const FinetuneConfig& config) {
  config.validate();
  if (train.empty() || dev.empty())
    throw std::invalid_argument("finetune: train and dev pairs must be nonempty");

  Rng root(config.seed);
  FinetuneResult best;
  best.best_dev = std::numeric_limits<double>::infinity();

  for (double lr : config.lr_candidates) {
    Rng init_rng = root.derive("init");  // same init for every candidate
    FinetuneHead head =
        FinetuneHead::init(d_model, label_count, config.hidden, init_rng);
    std::vector<Tensor*> params;
    for (auto& [name, t] : head.named_parameters()) params.push_back(t);
    AdamConfig adam_cfg;
    adam_cfg.lr = lr;
    Adam adam(params, adam_cfg);

    auto dev_loss = [&]() {
      Graph g;
      std::vector<const FinetunePair*> all;
      all.reserve(dev.size());
      for (const FinetunePair& p : dev) all.push_back(&p);
      return g.value(finetune_loss(g, head, all, config.alpha))[0];
    };

    FinetuneHead cand_best_head = head;
    double cand_best_dev = std::numeric_limits<double>::infinity();
    int cand_best_epoch = 0;
    int since_best = 0;
    std::vector<FinetuneLogEntry> cand_log;

    std::vector<size_t> order(train.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
      Rng shuffle_rng = root.derive("shuffle", static_cast<uint64_t>(epoch));
      shuffle_rng.shuffle(order);
      double epoch_loss = 0.0;
      long batches = 0;
      for (size_t start = 0; start < order.size();
           start += static_cast<size_t>(config.batch_size)) {
        size_t stop = std::min(order.size(),
                               start + static_cast<size_t>(config.batch_size));
        std::vector<const FinetunePair*> batch;
        batch.reserve(stop - start);
        for (size_t i = start; i < stop; ++i) batch.push_back(&train[order[i]]);
        Graph g;
        Var loss = finetune_loss(g, head, batch, config.alpha);
        double lv = g.value(loss)[0];
        if (!std::isfinite(lv))
          throw std::runtime_error("finetune: loss diverged at epoch " +
                                   std::to_string(epoch));
        g.backward(loss);
        std::unordered_map<Tensor*, Tensor> grads;
        g.accumulate_param_grads(grads);
        adam.step(grads);
        epoch_loss += lv;
        ++batches;
      }
      FinetuneLogEntry entry;
      entry.lr = lr;
      entry.epoch = epoch;
      entry.train_loss = epoch_loss / static_cast<double>(batches);
      entry.dev_loss = dev_loss();
      cand_log.push_back(entry);
      if (entry.dev_loss < cand_best_dev - 1e-6) {
        cand_best_dev = entry.dev_loss;
        cand_best_epoch = epoch;
        cand_best_head = head;
        since_best = 0;
      } else {
        ++since_best;
        if (since_best >= config.patience) break;
      }
    }

    best.log.insert(best.log.end(), cand_log.begin(), cand_log.end());
    if (cand_best_dev < best.best_dev) {
      best.best_dev = cand_best_dev;
      best.best_epoch = cand_best_epoch;
      best.chosen_lr = lr;
      best.head = std::move(cand_best_head);
    }
  }
  return best;
}

Prediction predict_next(EncoderModel& model, const FinetuneHead& head,
                        const EventSequence& prefix,
                        FinetuneConfig::TimeTarget target) {
  if (prefix.events.empty())
    throw std::invalid_argument("predict_next: empty prefix");
  Tensor h = extract_representations(model, prefix);
  int d = model.config.d_model;
  std::vector<double> rep(
      h.data.end() - d, h.data.end());
  std::vector<double> out = head.forward(rep);

  Prediction pred;
  int m = head.label_count;
  int arg = 0;
  for (int j = 1; j < m; ++j)
    if (out[static_cast<size_t>(j)] > out[static_cast<size_t>(arg)]) arg = j;
  pred.label = arg;

  double last_time = prefix.events.back().time;
  double traw = out[static_cast<size_t>(m)];
  pred.time = target == FinetuneConfig::TimeTarget::absolute
                  ? std::max(traw, last_time)
                  : last_time + std::max(traw, 0.0);
  return pred;
}

Metrics evaluate(const std::vector<Prediction>& predictions,
                 const std::vector<Prediction>& ground_truth) {
  if (predictions.empty() || predictions.size() != ground_truth.size())
    throw std::invalid_argument("evaluate: prediction/truth pairs must align");
  double se = 0.0;
  long hits = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    double d = predictions[i].time - ground_truth[i].time;
    se += d * d;
    hits += predictions[i].label == ground_truth[i].label ? 1 : 0;
  }
  Metrics m;
  m.n_pairs = static_cast<long>(predictions.size());
  m.time_rmse = std::sqrt(se / static_cast<double>(predictions.size()));
  m.type_accuracy = static_cast<double>(hits) / static_cast<double>(predictions.size());
  return m;
}

Checkpoint head_to_checkpoint(FinetuneHead& head,
                              FinetuneConfig::TimeTarget target) {
  Checkpoint ckpt;
  json header{{"kind", "finetune_head"},
              {"d_model", head.d_model},
              {"label_count", head.label_count},
              {"time_target", FinetuneConfig::target_name(target)}};
  ckpt.header_json = header.dump();
  for (auto& [name, t] : head.named_parameters()) ckpt.tensors.emplace_back(name, *t);
  return ckpt;
}

FinetuneHead head_from_checkpoint(const Checkpoint& ckpt,
                                  FinetuneConfig::TimeTarget* target_out) {
  json header = json::parse(ckpt.header_json);
  if (header.value("kind", "") != "finetune_head")
    throw std::runtime_error("checkpoint does not hold a finetune head");
  FinetuneHead head;
  head.d_model = header.at("d_model").get<int>();
  head.label_count = header.at("label_count").get<int>();
  for (const auto& [name, t] : ckpt.tensors) {
    if (name.rfind("mlp.w", 0) == 0) head.weights.push_back(t);
    else if (name.rfind("mlp.b", 0) == 0) head.biases.push_back(t);
  }
  if (head.weights.size() != head.biases.size() || head.weights.empty())
    throw std::runtime_error("checkpoint: malformed finetune head");
  if (target_out)
    *target_out = FinetuneConfig::parse_target(
        header.at("time_target").get<std::string>());
  return head;
}

}  // namespace eventformer
