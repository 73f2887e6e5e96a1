#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "eventformer/rng.hpp"

namespace eventformer {

// Dense row-major tensor of 64-bit floats. Rank 1 or 2 ({n} or {r, c});
// scalars are {1}. No broadcasting beyond the explicit *_rowvec ops below.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::vector<int> s, std::vector<double> d);

  static Tensor zeros(const std::vector<int>& shape);
  static Tensor full(const std::vector<int>& shape, double value);
  static Tensor scalar(double v);
  static Tensor vector(std::vector<double> v);
  static Tensor matrix(int rows, int cols, std::vector<double> v);

  int64_t size() const;
  int ndim() const { return static_cast<int>(shape.size()); }
  int rows() const;
  int cols() const;

  double& at(int i, int j);
  double at(int i, int j) const;
  double& operator[](int64_t i) { return data[static_cast<size_t>(i)]; }
  double operator[](int64_t i) const { return data[static_cast<size_t>(i)]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
  std::string shape_str() const;
  bool all_finite() const;
};

// Node handle into a Graph. Only valid for the graph that produced it.
struct Var {
  int id = -1;
};

// Reverse-mode tape. Operations append nodes; creation order is a valid
// topological order, so backward() walks ids in reverse and accumulates
// gradients additively into each node's parents.
//
// Every forward op verifies its output is finite and throws otherwise;
// that is the divergence guard the training loops rely on.
class Graph {
 public:
  Var constant(Tensor value);
  // Leaf bound to external parameter storage; its gradient is retrievable
  // through param_grads() after backward().
  Var param(Tensor& storage);

  const Tensor& value(Var v) const;
  const Tensor& grad(Var v) const;

  // d(loss)/d(leaf) for every param leaf, keyed by the bound storage.
  // `scale` multiplies each gradient as it is accumulated into `sink`.
  void accumulate_param_grads(std::unordered_map<Tensor*, Tensor>& sink,
                              double scale = 1.0) const;

  void backward(Var loss);

  // ---- forward ops ----
  Var add(Var a, Var b);            // same shape
  Var sub(Var a, Var b);            // same shape
  Var mul(Var a, Var b);            // elementwise, same shape
  Var scale(Var a, double c);
  Var add_rowvec(Var a, Var b);     // (n x d) + (d): bias broadcast
  Var mul_rowvec(Var a, Var b);     // (n x d) * (d): gain broadcast
  Var matmul(Var a, Var b);         // (n x k)(k x m); rank-1 b treated as (k x 1) -> (n)
  Var transpose(Var a);
  Var concat_rows(Var a, Var b);
  Var gather_rows(Var a, std::vector<int> rows);
  Var slice_cols(Var a, int c0, int c1);            // columns [c0, c1)
  Var select_cols(Var a, std::vector<int> col_per_row);  // (n x m) -> (n)
  Var softmax_rows(Var a);
  Var log(Var a);
  Var relu(Var a);
  Var sum(Var a);                   // -> scalar
  Var mean(Var a);                  // -> scalar
  Var mean_rows(Var a);             // (n x d) -> (d)
  Var layer_norm_rows(Var a, double eps);
  Var dropout(Var a, double p, Rng& rng, bool train);
  Var cosine_similarity(Var u, Var v);  // rank-1 u, v -> scalar

  size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void(Graph&)> backprop;  // empty for leaves
    Tensor* param = nullptr;
    bool needs_grad = false;
  };

  Var push(Tensor value, bool needs_grad, std::function<void(Graph&)> bp,
           const char* op_name);
  Tensor& grad_mut(Var v) { return nodes_[static_cast<size_t>(v.id)].grad; }
  bool needs(Var v) const { return nodes_[static_cast<size_t>(v.id)].needs_grad; }
  void check_id(Var v) const;

  std::deque<Node> nodes_;
  bool grads_ready_ = false;
};

// Adam with bias correction (beta1 = 0.9, beta2 = 0.999, eps = 1e-8).
struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam(std::vector<Tensor*> params, AdamConfig config);

  // Applies one update; params missing from `grads` are treated as zero-grad.
  void step(const std::unordered_map<Tensor*, Tensor>& grads);

  int64_t step_count() const { return step_count_; }

 private:
  std::vector<Tensor*> params_;
  std::vector<Tensor> m_, v_;
  AdamConfig config_;
  int64_t step_count_ = 0;
};

}  // namespace eventformer
