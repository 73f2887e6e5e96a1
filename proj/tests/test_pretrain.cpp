#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "eventformer/pretrain.hpp"
#include "test_util.hpp"

using namespace eventformer;
using evtest::four_group_sequence;
using evtest::random_tensor;

namespace {

EncoderConfig tiny_config(int label_count = 3) {
  EncoderConfig cfg = EncoderConfig::desk_profile(label_count);
  cfg.d_model = 16;
  cfg.d_ff = 32;
  cfg.max_len = 256;
  return cfg;
}

std::vector<AugmentedSequence> tiny_dataset(int count, int label_count,
                                            uint64_t seed) {
  std::vector<AugmentedSequence> out;
  Rng rng(seed);
  for (int i = 0; i < count; ++i)
    out.push_back(four_group_sequence(rng, 8 + static_cast<int>(rng.below(8)),
                                      10.0, label_count));
  return out;
}

// Straight-line scalar re-implementation of the masked prediction loss.
double prediction_loss_oracle(const Tensor& h, const MaskedTargets& targets,
                              const PretrainHeads& heads, double gamma) {
  int m1 = heads.by.shape[0];
  double total = 0.0;
  for (size_t i = 0; i < targets.size(); ++i) {
    std::vector<double> logits(static_cast<size_t>(m1), 0.0);
    for (int c = 0; c < m1; ++c) {
      double v = heads.by[c];
      for (int d = 0; d < h.cols(); ++d)
        v += h.at(static_cast<int>(i), d) * heads.wy.at(d, c);
      logits[static_cast<size_t>(c)] = v;
    }
    double mx = logits[0];
    for (double v : logits) mx = std::max(mx, v);
    double z = 0.0;
    for (double v : logits) z += std::exp(v - mx);
    double ce = -(logits[static_cast<size_t>(targets.label_targets[i])] - mx -
                  std::log(z));
    double tpred = heads.bt[0];
    for (int d = 0; d < h.cols(); ++d)
      tpred += h.at(static_cast<int>(i), d) * heads.wt[d];
    double terr = tpred - targets.time_targets[i];
    total += ce + gamma * terr * terr;
  }
  return total / static_cast<double>(targets.size());
}

}  // namespace

TEST_CASE("prediction loss with equal logits and gamma 0 is ln(M+1)") {
  int d = 8, m = 4;
  PretrainHeads heads;
  heads.wy = Tensor::zeros({d, m + 1});
  heads.by = Tensor::zeros({m + 1});
  heads.wt = Tensor::zeros({d});
  heads.bt = Tensor::zeros({1});

  Graph g;
  Rng rng(1);
  Var h = g.constant(random_tensor({3, d}, rng));
  MaskedTargets targets;
  targets.epoch_indices = {0, 1, 2};
  targets.label_targets = {0, 2, 4};
  targets.time_targets = {0.1, 0.2, 0.3};
  Var loss = prediction_loss(g, h, targets, bind_heads(g, heads), 0.0);
  CHECK(g.value(loss)[0] == doctest::Approx(std::log(m + 1.0)).epsilon(1e-12));
}

TEST_CASE("prediction loss vanishes as the logit margin grows") {
  int d = 4, m = 2;
  PretrainHeads heads;
  heads.wy = Tensor::zeros({d, m + 1});
  heads.by = Tensor::zeros({m + 1});
  heads.wt = Tensor::zeros({d});
  heads.bt = Tensor::zeros({1});
  heads.bt[0] = 2.5;  // perfect constant time head for these targets

  MaskedTargets targets;
  targets.epoch_indices = {0};
  targets.label_targets = {1};
  targets.time_targets = {2.5};

  double prev = 1e9;
  for (double margin : {2.0, 8.0, 32.0}) {
    heads.by[1] = margin;
    Graph g;
    Var h = g.constant(Tensor::matrix(1, d, {0.1, -0.2, 0.3, 0.4}));
    double v = g.value(prediction_loss(g, h, targets, bind_heads(g, heads), 1.0))[0];
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev <= 1e-10);
}

TEST_CASE("prediction loss matches the scalar oracle to 1e-10") {
  Rng rng(33);
  int d = 16, m = 5;
  PretrainHeads heads = PretrainHeads::init(d, m, rng);
  Tensor h = random_tensor({3, d}, rng);
  MaskedTargets targets;
  targets.epoch_indices = {0, 1, 2};
  targets.label_targets = {2, 5, 0};  // 5 = NULL class for m = 5
  targets.time_targets = {0.7, 1.9, 4.2};

  Graph g;
  Var loss = prediction_loss(g, g.constant(h), targets, bind_heads(g, heads), 1.0);
  double expected = prediction_loss_oracle(h, targets, heads, 1.0);
  CHECK(std::abs(g.value(loss)[0] - expected) <= 1e-10);
}

TEST_CASE("masked targets read only the true fields") {
  Rng rng(3);
  AugmentedSequence aug = four_group_sequence(rng, 12, 10.0, 4);
  MaskedTargets targets = masked_targets(aug);
  REQUIRE(targets.size() > 0);
  for (size_t k = 0; k < targets.size(); ++k) {
    const Epoch& ep = aug.epochs[static_cast<size_t>(targets.epoch_indices[k])];
    CHECK(ep.is_masked);
    CHECK(ep.observed_time == 0.0);          // observed view is zeroed...
    CHECK(targets.time_targets[k] == ep.true_time);  // ...targets are not
    if (ep.true_label.is_null())
      CHECK(targets.label_targets[k] == aug.label_count);
    else
      CHECK(targets.label_targets[k] == ep.true_label.index());
  }
}

TEST_CASE("contrastive loss: identical group means return exactly zero") {
  Graph g;
  // One epoch per group, all rows identical.
  Tensor h = Tensor::zeros({4, 6});
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 6; ++c) h.at(i, c) = 0.3 * (c + 1);
  std::vector<Epoch> epochs(4);
  epochs[0].is_masked = true;  epochs[0].is_void = false;
  epochs[1].is_masked = true;  epochs[1].is_void = true;
  epochs[2].is_masked = false; epochs[2].is_void = false;
  epochs[3].is_masked = false; epochs[3].is_void = true;
  bool skipped = true;
  Var loss = contrastive_loss(g, g.constant(h), epochs, 1.0, &skipped);
  CHECK_FALSE(skipped);
  CHECK(g.value(loss)[0] == 0.0);
}

TEST_CASE("contrastive loss hand case: aligned groups, orthogonal means") {
  // m_real = u_real = e1 and m_void = u_void = e2 gives (0 + 0 - 1 - 1) / w.
  Graph g;
  Tensor h = Tensor::zeros({4, 4});
  h.at(0, 0) = 1.0;  // masked real
  h.at(1, 1) = 1.0;  // masked void
  h.at(2, 0) = 1.0;  // unmasked real
  h.at(3, 1) = 1.0;  // unmasked void
  std::vector<Epoch> epochs(4);
  epochs[0].is_masked = true;  epochs[0].is_void = false;
  epochs[1].is_masked = true;  epochs[1].is_void = true;
  epochs[2].is_masked = false; epochs[2].is_void = false;
  epochs[3].is_masked = false; epochs[3].is_void = true;
  for (double omega : {1.0, 2.0, 0.5}) {
    Graph gg;
    Var loss = contrastive_loss(gg, gg.constant(h), epochs, omega, nullptr);
    CHECK(gg.value(loss)[0] == doctest::Approx(-2.0 / omega).epsilon(1e-12));
  }
}

TEST_CASE("contrastive loss stays inside [-4/w, 4/w] and matches literal Eq") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 4 + static_cast<int>(rng.below(12));
    Tensor h = random_tensor({n, 8}, rng, 2.0);
    std::vector<Epoch> epochs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      epochs[static_cast<size_t>(i)].is_masked = i % 2 == 0;
      epochs[static_cast<size_t>(i)].is_void = (i / 2) % 2 == 0;
    }
    double omega = trial % 2 ? 1.0 : 2.0;
    Graph g;
    bool skipped = false;
    Var loss = contrastive_loss(g, g.constant(h), epochs, omega, &skipped);
    REQUIRE_FALSE(skipped);
    double v = g.value(loss)[0];
    CHECK(std::abs(v) <= 4.0 / omega);

    // Literal form: -log( exp((sim(mr,ur)+sim(mv,uv))/w) /
    //                     exp((sim(mr,mv)+sim(ur,uv))/w) ).
    auto group_mean = [&](bool masked, bool is_void) {
      std::vector<double> mean(8, 0.0);
      int count = 0;
      for (int i = 0; i < n; ++i)
        if (epochs[static_cast<size_t>(i)].is_masked == masked &&
            epochs[static_cast<size_t>(i)].is_void == is_void) {
          for (int c = 0; c < 8; ++c) mean[static_cast<size_t>(c)] += h.at(i, c);
          ++count;
        }
      for (double& x : mean) x /= count;
      return mean;
    };
    auto sim = [](const std::vector<double>& a, const std::vector<double>& b) {
      double dot = 0, na = 0, nb = 0;
      for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
      }
      return dot / (std::sqrt(na) * std::sqrt(nb));
    };
    auto mr = group_mean(true, false), mv = group_mean(true, true);
    auto ur = group_mean(false, false), uv = group_mean(false, true);
    double literal = -std::log(std::exp((sim(mr, ur) + sim(mv, uv)) / omega) /
                               std::exp((sim(mr, mv) + sim(ur, uv)) / omega));
    CHECK(std::abs(v - literal) <= 1e-12);
  }
}

TEST_CASE("contrastive loss skips sequences with an empty group") {
  Graph g;
  Rng rng(1);
  Tensor h = random_tensor({3, 4}, rng);
  std::vector<Epoch> epochs(3);  // no unmasked void anywhere
  epochs[0].is_masked = true;
  epochs[1].is_masked = true;
  epochs[1].is_void = true;
  epochs[2].is_masked = false;
  bool skipped = false;
  Var loss = contrastive_loss(g, g.constant(h), epochs, 1.0, &skipped);
  CHECK(skipped);
  CHECK(g.value(loss)[0] == 0.0);
}

TEST_CASE("gradients reach the encoder through both loss terms") {
  EncoderConfig cfg = tiny_config();
  Rng rng(5);
  EncoderModel model = EncoderModel::init(cfg, rng);
  PretrainHeads heads = PretrainHeads::init(cfg.d_model, cfg.label_count, rng);
  Rng seq_rng(6);
  AugmentedSequence aug = four_group_sequence(seq_rng, 12, 10.0, cfg.label_count);

  auto embedding_grad_norm = [&](bool use_pred) {
    Graph g;
    Rng no_drop(0);
    Var h = encode(g, model, embed(g, model, aug), false, no_drop);
    Var loss;
    if (use_pred) {
      MaskedTargets targets = masked_targets(aug);
      loss = prediction_loss(g, g.gather_rows(h, targets.epoch_indices), targets,
                             bind_heads(g, heads), 1.0);
    } else {
      loss = contrastive_loss(g, h, aug.epochs, 1.0, nullptr);
    }
    g.backward(loss);
    std::unordered_map<Tensor*, Tensor> grads;
    g.accumulate_param_grads(grads);
    double norm = 0.0;
    const Tensor& ge = grads.at(&model.label_embedding);
    for (int64_t i = 0; i < ge.size(); ++i) norm += ge[i] * ge[i];
    return std::sqrt(norm);
  };
  CHECK(embedding_grad_norm(true) > 0.0);
  CHECK(embedding_grad_norm(false) > 0.0);
}

TEST_CASE("pretrain runs deterministically and tracks the best dev loss") {
  EncoderConfig cfg = tiny_config();
  std::vector<AugmentedSequence> train = tiny_dataset(6, cfg.label_count, 1);
  std::vector<AugmentedSequence> dev = tiny_dataset(3, cfg.label_count, 2);

  PretrainConfig pc;
  pc.max_epochs = 4;
  pc.batch_size = 2;
  pc.lr = 1e-3;
  pc.seed = 7;

  PretrainResult a = pretrain(train, dev, cfg, pc);
  PretrainResult b = pretrain(train, dev, cfg, pc);
  REQUIRE(a.log.size() == b.log.size());
  for (size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].train_pred == b.log[i].train_pred);
    CHECK(a.log[i].train_contr == b.log[i].train_contr);
    CHECK(a.log[i].dev_event == b.log[i].dev_event);
  }

  // Early-stopping invariant: returned dev loss is the minimum logged one.
  for (const PretrainLogEntry& e : a.log) CHECK(a.best_dev <= e.dev_event + 1e-15);
}

TEST_CASE("lambda = 0 reduces the objective to the pure prediction loss") {
  EncoderConfig cfg = tiny_config();
  std::vector<AugmentedSequence> train = tiny_dataset(4, cfg.label_count, 3);
  std::vector<AugmentedSequence> dev = tiny_dataset(2, cfg.label_count, 4);

  PretrainConfig pc;
  pc.lambda = 0.0;
  pc.max_epochs = 1;
  pc.batch_size = 2;
  pc.seed = 5;
  PretrainResult res = pretrain(train, dev, cfg, pc);
  REQUIRE(res.log.size() == 1);

  // Recompute the dev prediction loss with the returned weights; with
  // lambda = 0 the logged dev L_event must equal it exactly.
  double total = 0.0;
  for (AugmentedSequence& aug : dev) {
    Graph g;
    Rng no_drop(0);
    Var h = encode(g, res.model, embed(g, res.model, aug), false, no_drop);
    MaskedTargets targets = masked_targets(aug);
    Var loss = prediction_loss(g, g.gather_rows(h, targets.epoch_indices),
                               targets, bind_heads(g, res.heads), pc.gamma);
    total += g.value(loss)[0];
  }
  CHECK(res.log[0].dev_event == total / dev.size());
}

TEST_CASE("checkpoint round trip restores the encoder and heads") {
  EncoderConfig cfg = tiny_config();
  Rng rng(9);
  EncoderModel model = EncoderModel::init(cfg, rng);
  PretrainHeads heads = PretrainHeads::init(cfg.d_model, cfg.label_count, rng);
  Checkpoint ckpt = to_checkpoint(model, &heads);
  std::string path =
      (std::filesystem::temp_directory_path() / "evf_test_enc.ckpt").string();
  save_checkpoint(ckpt, path);
  Checkpoint loaded = load_checkpoint(path);

  // Byte-exact round trip: save the loaded copy and compare file bytes.
  std::string path2 = path + ".again";
  save_checkpoint(loaded, path2);
  {
    std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    REQUIRE(!sa.str().empty());
    CHECK(sa.str() == sb.str());
  }
  std::remove(path2.c_str());

  PretrainHeads heads2;
  EncoderModel model2 = encoder_from_checkpoint(loaded, &heads2);
  CHECK(model2.config.d_model == cfg.d_model);
  auto pa = model.named_parameters();
  auto pb = model2.named_parameters();
  REQUIRE(pa.size() == pb.size());
  for (size_t i = 0; i < pa.size(); ++i)
    for (int64_t j = 0; j < pa[i].second->size(); ++j)
      CHECK((*pa[i].second)[j] == (*pb[i].second)[j]);
  for (int64_t j = 0; j < heads.wy.size(); ++j)
    CHECK(heads.wy[j] == heads2.wy[j]);
  std::remove(path.c_str());
}
