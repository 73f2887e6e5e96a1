#include <cmath>

#include "doctest.h"
#include "eventformer/encoder.hpp"
#include "test_util.hpp"

using namespace eventformer;
using evtest::four_group_sequence;

namespace {

EncoderConfig tiny_config(int label_count = 3) {
  EncoderConfig cfg = EncoderConfig::desk_profile(label_count);
  cfg.d_model = 16;
  cfg.d_ff = 32;
  cfg.max_len = 512;
  return cfg;
}

}  // namespace

TEST_CASE("positional encoding row zero and bounds") {
  Tensor pe = positional_encoding(64, 16, 512);
  for (int k = 0; 2 * k < 16; ++k) {
    CHECK(pe.at(0, 2 * k) == 0.0);
    CHECK(pe.at(0, 2 * k + 1) == 1.0);
  }
  for (double v : pe.data) {
    CHECK(v >= -1.0);
    CHECK(v <= 1.0);
  }
  CHECK_THROWS_AS(positional_encoding(513, 16, 512), std::invalid_argument);
}

TEST_CASE("positional encoding rows are pairwise distinct up to max_len") {
  int max_len = 512;
  Tensor pe = positional_encoding(max_len, 16, max_len);
  for (int i = 0; i < max_len; ++i)
    for (int j = i + 1; j < max_len; ++j) {
      bool differ = false;
      for (int c = 0; c < 16 && !differ; ++c)
        differ = pe.at(i, c) != pe.at(j, c);
      CHECK(differ);
    }
}

TEST_CASE("temporal encoding at t = 0 matches the PE row-zero pattern") {
  Tensor te = temporal_encoding({0.0, 0.0, 1.7}, 8);
  for (int k = 0; 2 * k < 8; ++k) {
    CHECK(te.at(0, 2 * k) == 0.0);
    CHECK(te.at(0, 2 * k + 1) == 1.0);
  }
  // Two masked epochs (both t = 0) are indistinguishable under TE alone.
  for (int c = 0; c < 8; ++c) CHECK(te.at(0, c) == te.at(1, c));
  CHECK_THROWS_AS(temporal_encoding({-0.1}, 8), std::invalid_argument);
}

TEST_CASE("temporal encoding base band has derivative bounded by 1") {
  double h = 1e-6;
  for (double t : {0.0, 0.5, 3.2, 42.0}) {
    Tensor lo = temporal_encoding({t}, 8);
    Tensor hi = temporal_encoding({t + h}, 8);
    for (int c = 0; c < 2; ++c) {  // sin(t), cos(t): the base frequency pair
      double slope = (hi.at(0, c) - lo.at(0, c)) / h;
      CHECK(std::abs(slope) <= 1.0 + 1e-6);
    }
  }
}

TEST_CASE("embedding distinctness: the collision fix for masked epochs") {
  EncoderConfig cfg = tiny_config();
  Rng rng(1);
  EncoderModel model = EncoderModel::init(cfg, rng);

  Rng seq_rng(2);
  AugmentedSequence aug = four_group_sequence(seq_rng, 12, 10.0, 3);
  // Positions 0 and 4 are masked real epochs in this construction.
  REQUIRE(aug.epochs[0].is_masked);
  REQUIRE(aug.epochs[4].is_masked);

  Tensor te = temporal_encoding({aug.epochs[0].observed_time,
                                 aug.epochs[4].observed_time},
                                cfg.d_model);
  for (int c = 0; c < cfg.d_model; ++c) CHECK(te.at(0, c) == te.at(1, c));

  Graph g;
  const Tensor& x = g.value(embed(g, model, aug));
  bool differ = false;
  for (int c = 0; c < cfg.d_model && !differ; ++c)
    differ = x.at(0, c) != x.at(4, c);
  CHECK(differ);
}

TEST_CASE("PE+TE rows differ whenever position or observed time differ") {
  int d = 16;
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(rng.below(20));
    std::vector<double> times;
    double t = 0.0;
    for (int i = 0; i < n; ++i) {
      t += rng.uniform(0.0, 2.0);
      times.push_back(t);
    }
    Tensor pe = positional_encoding(n, d, 512);
    Tensor te = temporal_encoding(times, d);
    int i = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
    int j = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
    if (i == j) continue;
    bool differ = false;
    for (int c = 0; c < d && !differ; ++c)
      differ = pe.at(i, c) + te.at(i, c) != pe.at(j, c) + te.at(j, c);
    CHECK(differ);
  }
}

TEST_CASE("combined encoding scalar pre-image is strictly increasing") {
  // Integer timestamps t_1 < t_2 < ...: the proof's effective index is
  // t_i - t_1 + i, which must be strictly increasing.
  std::vector<double> times{2, 3, 7, 10, 11, 20};
  for (size_t i = 1; i < times.size(); ++i) {
    double prev = times[i - 1] - times[0] + static_cast<double>(i - 1);
    double cur = times[i] - times[0] + static_cast<double>(i);
    CHECK(cur > prev);
  }
}

TEST_CASE("embedding is a pure function of labels, times and positions") {
  EncoderConfig cfg = tiny_config(2);
  Rng rng(5);
  EncoderModel model = EncoderModel::init(cfg, rng);
  EventSequence seq = evtest::make_sequence({{1.0, 0}, {2.0, 1}}, 4.0, 2);
  EventSequence swapped = evtest::make_sequence({{1.0, 1}, {2.0, 0}}, 4.0, 2);
  Graph g;
  Tensor a = g.value(embed(g, model, seq));
  Tensor b = g.value(embed(g, model, swapped));
  bool differ = false;
  for (int64_t i = 0; i < a.size() && !differ; ++i) differ = a[i] != b[i];
  CHECK(differ);

  Graph g2;
  Tensor again = g2.value(embed(g2, model, seq));
  for (int64_t i = 0; i < a.size(); ++i) CHECK(a[i] == again[i]);
}

TEST_CASE("encoder causality: perturbing epoch j never changes H[i] for i < j") {
  EncoderConfig cfg = tiny_config();
  Rng rng(3);
  EncoderModel model = EncoderModel::init(cfg, rng);
  Rng seq_rng(4);
  AugmentedSequence aug = four_group_sequence(seq_rng, 10, 10.0, 3);

  Rng no_drop(0);
  Graph g;
  Tensor x = g.value(embed(g, model, aug));
  Var h = encode(g, model, g.constant(x), false, no_drop);
  Tensor base = g.value(h);

  for (int j : {3, 7, 9}) {
    Tensor xp = x;
    for (int c = 0; c < cfg.d_model; ++c) xp.at(j, c) += 0.37 * (c + 1);
    Graph g2;
    Rng no_drop2(0);
    Tensor out = g2.value(encode(g2, model, g2.constant(xp), false, no_drop2));
    for (int i = 0; i < j; ++i)
      for (int c = 0; c < cfg.d_model; ++c)
        CHECK(out.at(i, c) == base.at(i, c));  // exact, not approximate
    bool changed = false;
    for (int c = 0; c < cfg.d_model && !changed; ++c)
      changed = out.at(j, c) != base.at(j, c);
    CHECK(changed);
  }
}

TEST_CASE("attention rows are causal probability distributions") {
  EncoderConfig cfg = tiny_config();
  Rng rng(6);
  EncoderModel model = EncoderModel::init(cfg, rng);
  Rng seq_rng(7);
  AugmentedSequence aug = four_group_sequence(seq_rng, 9, 10.0, 3);

  Graph g;
  Rng no_drop(0);
  AttentionTrace trace;
  encode(g, model, embed(g, model, aug), false, no_drop, &trace);
  REQUIRE(trace.probs.size() ==
          static_cast<size_t>(cfg.n_blocks * cfg.n_heads));
  for (const Tensor& p : trace.probs) {
    REQUIRE(p.rows() == 9);
    for (int i = 0; i < 9; ++i) {
      double total = 0.0;
      for (int j = 0; j < 9; ++j) {
        CHECK(p.at(i, j) >= 0.0);
        if (j > i) CHECK(p.at(i, j) == 0.0);  // exactly zero future mass
        total += p.at(i, j);
      }
      CHECK(std::abs(total - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("length-1 input attends to itself and stays finite") {
  EncoderConfig cfg = tiny_config(2);
  Rng rng(8);
  EncoderModel model = EncoderModel::init(cfg, rng);
  EventSequence seq = evtest::make_sequence({{0.5, 1}}, 2.0, 2);
  Graph g;
  Rng no_drop(0);
  AttentionTrace trace;
  Var h = encode(g, model, embed(g, model, seq), false, no_drop, &trace);
  CHECK(g.value(h).rows() == 1);
  CHECK(g.value(h).all_finite());
  for (const Tensor& p : trace.probs) CHECK(p.at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("shape contract across lengths and dropout-off determinism") {
  EncoderConfig cfg = tiny_config(2);
  Rng rng(10);
  EncoderModel model = EncoderModel::init(cfg, rng);
  Rng data_rng(11);
  for (int n = 1; n <= 16; ++n) {
    EventSequence seq = evtest::random_sequence(data_rng, n, 50.0, 2);
    Graph g;
    Rng no_drop(0);
    const Tensor& h = g.value(encode(g, model, embed(g, model, seq), false, no_drop));
    CHECK(h.rows() == static_cast<int>(seq.size()));
    CHECK(h.cols() == cfg.d_model);
  }

  AugmentedSequence aug = four_group_sequence(data_rng, 8, 10.0, 2);
  auto run = [&](uint64_t seed) {
    Graph g;
    Rng drop(seed);
    return g.value(encode(g, model, embed(g, model, aug), true, drop));
  };
  Tensor a = run(42), b = run(42);
  for (int64_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("encoder config validation") {
  EncoderConfig cfg = tiny_config();
  cfg.d_model = 15;  // not divisible by heads
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config();
  cfg.label_count = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
