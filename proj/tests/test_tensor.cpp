#include <cmath>

#include "doctest.h"
#include "eventformer/tensor.hpp"
#include "test_util.hpp"

using namespace eventformer;
using evtest::max_grad_error;
using evtest::random_tensor;

TEST_CASE("elementary op values") {
  Graph g;
  Var a = g.constant(Tensor::matrix(2, 2, {1, 2, 3, 4}));
  Var b = g.constant(Tensor::matrix(2, 2, {5, 6, 7, 8}));
  CHECK(g.value(g.add(a, b)).at(1, 1) == 12.0);
  CHECK(g.value(g.sub(b, a)).at(0, 0) == 4.0);
  CHECK(g.value(g.mul(a, b)).at(0, 1) == 12.0);
  CHECK(g.value(g.matmul(a, b)).at(0, 0) == doctest::Approx(19.0));
  CHECK(g.value(g.transpose(a)).at(0, 1) == 3.0);
  CHECK(g.value(g.sum(a))[0] == 10.0);
  CHECK(g.value(g.mean(a))[0] == 2.5);
}

TEST_CASE("shape mismatch names both shapes") {
  Graph g;
  Var a = g.constant(Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6}));
  Var b = g.constant(Tensor::matrix(2, 2, {1, 2, 3, 4}));
  CHECK_THROWS_WITH_AS(g.add(a, b),
                       doctest::Contains("(2, 3)"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(g.add(a, b),
                       doctest::Contains("(2, 2)"), std::invalid_argument);
}

TEST_CASE("softmax of equal logits is uniform; rows sum to one") {
  Graph g;
  Var x = g.constant(Tensor::matrix(1, 5, {3, 3, 3, 3, 3}));
  const Tensor& y = g.value(g.softmax_rows(x));
  for (int j = 0; j < 5; ++j) CHECK(y.at(0, j) == doctest::Approx(0.2));

  Rng rng(7);
  Var r = g.constant(random_tensor({6, 9}, rng, 3.0));
  const Tensor& s = g.value(g.softmax_rows(r));
  for (int i = 0; i < 6; ++i) {
    double total = 0.0;
    for (int j = 0; j < 9; ++j) total += s.at(i, j);
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("cosine similarity of a vector with itself is 1") {
  Graph g;
  Rng rng(3);
  Var u = g.constant(random_tensor({8}, rng));
  CHECK(g.value(g.cosine_similarity(u, u))[0] == doctest::Approx(1.0));
  Var z = g.constant(Tensor::zeros({4}));
  CHECK_THROWS_AS(g.cosine_similarity(z, z), std::invalid_argument);
}

TEST_CASE("layer_norm rows have zero mean and unit variance") {
  Graph g;
  Rng rng(11);
  Var x = g.constant(random_tensor({5, 16}, rng, 4.0));
  const Tensor& y = g.value(g.layer_norm_rows(x, 1e-12));
  for (int i = 0; i < 5; ++i) {
    double m = 0.0, v = 0.0;
    for (int j = 0; j < 16; ++j) m += y.at(i, j);
    m /= 16;
    for (int j = 0; j < 16; ++j) v += (y.at(i, j) - m) * (y.at(i, j) - m);
    v /= 16;
    CHECK(std::abs(m) <= 1e-12);
    CHECK(std::abs(v - 1.0) <= 1e-9);
  }
}

TEST_CASE("non-finite forward value trips the diagnostic") {
  Graph g;
  Var zero = g.constant(Tensor::scalar(0.0));
  CHECK_THROWS_WITH_AS(g.log(zero), doctest::Contains("non-finite"),
                       std::runtime_error);
}

TEST_CASE("d/dx sum(x^2) = 2x exactly") {
  Graph g;
  Tensor storage = Tensor::matrix(2, 3, {1, -2, 3, 0.5, -0.25, 4});
  Var x = g.param(storage);
  Var loss = g.sum(g.mul(x, x));
  g.backward(loss);
  const Tensor& grad = g.grad(x);
  for (int64_t i = 0; i < storage.size(); ++i)
    CHECK(std::abs(grad[i] - 2.0 * storage[i]) <= 1e-12);
}

TEST_CASE("gradient of cosine at orthonormal inputs matches the analytic form") {
  // |u| = |v| = 1 and u . v = 0 reduce the derivative to d s / d u = v.
  Graph g;
  Tensor us = Tensor::vector({1, 0, 0, 0});
  Tensor vs = Tensor::vector({0, 1, 0, 0});
  Var u = g.param(us);
  Var v = g.param(vs);
  g.backward(g.cosine_similarity(u, v));
  for (int i = 0; i < 4; ++i) {
    CHECK(g.grad(u)[i] == doctest::Approx(vs[i]).epsilon(1e-12));
    CHECK(g.grad(v)[i] == doctest::Approx(us[i]).epsilon(1e-12));
  }
}

TEST_CASE("finite differences agree with every differentiable op") {
  Rng rng(2024);
  for (int trial = 0; trial < 8; ++trial) {
    int n = 2 + static_cast<int>(rng.below(7));  // shapes up to 8x8
    int m = 2 + static_cast<int>(rng.below(7));
    int k = 2 + static_cast<int>(rng.below(7));
    Tensor a = random_tensor({n, k}, rng);
    Tensor b = random_tensor({k, m}, rng);
    Tensor c = random_tensor({n, m}, rng);
    Tensor d = random_tensor({m}, rng);
    Tensor u = random_tensor({k}, rng);
    Tensor v = random_tensor({k}, rng);
    std::vector<int> gather = {0, n - 1, n / 2, 0};
    std::vector<int> cols;
    for (int i = 0; i < n; ++i)
      cols.push_back(static_cast<int>(rng.below(static_cast<uint64_t>(m))));

    auto loss = [&](std::unordered_map<Tensor*, Tensor>* grads) {
      Graph g;
      Var va = g.param(a);
      Var vb = g.param(b);
      Var vc = g.param(c);
      Var vd = g.param(d);
      Var vu = g.param(u);
      Var vv = g.param(v);
      Var mm = g.matmul(va, vb);                       // n x m
      Var mix = g.add_rowvec(g.add(mm, vc), vd);       // + same-shape + bias
      Var gained = g.mul_rowvec(mix, vd);
      Var sm = g.softmax_rows(gained);
      Var picked = g.select_cols(g.log(sm), cols);     // CE-style path
      Var ln = g.layer_norm_rows(g.relu(mix), 1e-5);
      Var gathered = g.gather_rows(ln, gather);
      Var sliced = g.slice_cols(g.concat_rows(ln, gathered), 0, m);
      Var cos = g.cosine_similarity(vu, vv);
      Var total = g.add(
          g.add(g.mean(sliced), g.scale(g.sum(picked), 0.25)),
          g.add(g.mean(g.mean_rows(g.mul(mix, mix))), cos));
      if (grads) {
        g.backward(total);
        g.accumulate_param_grads(*grads);
      }
      return g.value(total)[0];
    };
    double err = max_grad_error({&a, &b, &c, &d, &u, &v}, loss);
    CHECK(err <= 1e-4);
  }
}

TEST_CASE("backward is linear in the loss") {
  Rng rng(88);
  Tensor x = random_tensor({4, 4}, rng);
  auto grad_of = [&](double ca, double cb) {
    Graph g;
    Var vx = g.param(x);
    Var f = g.sum(g.mul(vx, vx));
    Var h = g.mean(g.relu(vx));
    g.backward(g.add(g.scale(f, ca), g.scale(h, cb)));
    return g.grad(vx);
  };
  Tensor gf = grad_of(1.0, 0.0);
  Tensor gh = grad_of(0.0, 1.0);
  Tensor mix = grad_of(2.5, -3.0);
  for (int64_t i = 0; i < x.size(); ++i)
    CHECK(mix[i] == doctest::Approx(2.5 * gf[i] - 3.0 * gh[i]).epsilon(1e-12));
}

TEST_CASE("dropout keeps the expectation with inverted scaling") {
  Graph g;
  Rng rng(5);
  int n = 100000;
  Var x = g.constant(Tensor::full({n}, 1.0));
  Var y = g.dropout(x, 0.3, rng, true);
  double mean = 0.0;
  for (int64_t i = 0; i < n; ++i) mean += g.value(y)[i];
  mean /= n;
  CHECK(std::abs(mean - 1.0) <= 0.01);

  // Eval mode is the identity and consumes no randomness.
  Rng before(9);
  Rng after(9);
  Var z = g.dropout(x, 0.3, before, false);
  CHECK(g.value(z)[0] == 1.0);
  CHECK(before.next_u64() == after.next_u64());
}

TEST_CASE("adam first step approximates -lr * sign(g)") {
  Tensor p = Tensor::vector({1.0, -2.0, 3.0, 0.5});
  Tensor grad = Tensor::vector({0.4, -1.3, 2.2, 0.9});
  AdamConfig cfg;
  cfg.lr = 0.05;
  Adam adam({&p}, cfg);
  Tensor before = p;
  std::unordered_map<Tensor*, Tensor> grads{{&p, grad}};
  adam.step(grads);
  for (int i = 0; i < 4; ++i) {
    double expected = before[i] - cfg.lr * (grad[i] > 0 ? 1.0 : -1.0);
    CHECK(std::abs(p[i] - expected) <= 1e-6);
  }
}

TEST_CASE("adam leaves parameters unchanged on zero gradient") {
  Tensor p = Tensor::vector({1.0, 2.0});
  Adam adam({&p}, AdamConfig{});
  std::unordered_map<Tensor*, Tensor> empty;
  adam.step(empty);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 2.0);
}

TEST_CASE("adam is bitwise deterministic across runs") {
  auto run = [] {
    Rng rng(17);
    Tensor p = evtest::random_tensor({3, 3}, rng);
    AdamConfig cfg;
    cfg.lr = 0.01;
    Adam adam({&p}, cfg);
    for (int step = 0; step < 10; ++step) {
      Graph g;
      Var vp = g.param(p);
      Var loss = g.mean(g.mul(vp, vp));
      g.backward(loss);
      std::unordered_map<Tensor*, Tensor> grads;
      g.accumulate_param_grads(grads);
      adam.step(grads);
    }
    return p;
  };
  Tensor a = run();
  Tensor b = run();
  for (int64_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("gather and concat round trip") {
  Graph g;
  Rng rng(23);
  Tensor t = random_tensor({6, 3}, rng);
  Var x = g.constant(t);
  Var top = g.gather_rows(x, {0, 1, 2});
  Var bottom = g.gather_rows(x, {3, 4, 5});
  const Tensor& back = g.value(g.concat_rows(top, bottom));
  for (int64_t i = 0; i < t.size(); ++i) CHECK(back[i] == t[i]);
}
