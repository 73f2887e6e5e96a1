#include "eventformer/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace eventformer {

namespace {

int64_t shape_size(const std::vector<int>& shape) {
  int64_t n = 1;
  for (int d : shape) {
    if (d < 0) throw std::invalid_argument("negative dimension in shape");
    n *= d;
  }
  return n;
}

[[noreturn]] void shape_error(const char* op, const Tensor& a) {
  throw std::invalid_argument(std::string(op) + ": bad shape " + a.shape_str());
}

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
  throw std::invalid_argument(std::string(op) + ": incompatible shapes " +
                              a.shape_str() + " and " + b.shape_str());
}

}  // namespace

Tensor::Tensor(std::vector<int> s, std::vector<double> d)
    : shape(std::move(s)), data(std::move(d)) {
  if (shape_size(shape) != static_cast<int64_t>(data.size()))
    throw std::invalid_argument("tensor data length does not match shape");
}

Tensor Tensor::zeros(const std::vector<int>& shape) {
  Tensor t;
  t.shape = shape;
  t.data.assign(static_cast<size_t>(shape_size(shape)), 0.0);
  return t;
}

Tensor Tensor::full(const std::vector<int>& shape, double value) {
  Tensor t = zeros(shape);
  std::fill(t.data.begin(), t.data.end(), value);
  return t;
}

Tensor Tensor::scalar(double v) { return Tensor({1}, {v}); }

Tensor Tensor::vector(std::vector<double> v) {
  int n = static_cast<int>(v.size());
  return Tensor({n}, std::move(v));
}

Tensor Tensor::matrix(int rows, int cols, std::vector<double> v) {
  return Tensor({rows, cols}, std::move(v));
}

int64_t Tensor::size() const { return static_cast<int64_t>(data.size()); }

int Tensor::rows() const {
  if (ndim() != 2) throw std::logic_error("rows(): tensor is not rank 2");
  return shape[0];
}

int Tensor::cols() const {
  if (ndim() != 2) throw std::logic_error("cols(): tensor is not rank 2");
  return shape[1];
}

double& Tensor::at(int i, int j) {
  return data[static_cast<size_t>(i) * static_cast<size_t>(cols()) +
              static_cast<size_t>(j)];
}

double Tensor::at(int i, int j) const {
  return data[static_cast<size_t>(i) * static_cast<size_t>(cols()) +
              static_cast<size_t>(j)];
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ", ";
    os << shape[i];
  }
  os << ")";
  return os.str();
}

bool Tensor::all_finite() const {
  for (double x : data)
    if (!std::isfinite(x)) return false;
  return true;
}

// ---------------------------------------------------------------- Graph

void Graph::check_id(Var v) const {
  if (v.id < 0 || static_cast<size_t>(v.id) >= nodes_.size())
    throw std::logic_error("Var does not belong to this graph");
}

const Tensor& Graph::value(Var v) const {
  check_id(v);
  return nodes_[static_cast<size_t>(v.id)].value;
}

const Tensor& Graph::grad(Var v) const {
  check_id(v);
  if (!grads_ready_) throw std::logic_error("grad(): backward() has not run");
  return nodes_[static_cast<size_t>(v.id)].grad;
}

Var Graph::push(Tensor value, bool needs_grad, std::function<void(Graph&)> bp,
                const char* op_name) {
  if (!value.all_finite())
    throw std::runtime_error(std::string("non-finite value produced by ") +
                             op_name);
  Node n;
  n.value = std::move(value);
  n.backprop = std::move(bp);
  n.needs_grad = needs_grad;
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Graph::constant(Tensor value) {
  return push(std::move(value), false, nullptr, "constant");
}

Var Graph::param(Tensor& storage) {
  Var v = push(storage, true, nullptr, "param");
  nodes_.back().param = &storage;
  return v;
}

void Graph::accumulate_param_grads(std::unordered_map<Tensor*, Tensor>& sink,
                                   double scale) const {
  if (!grads_ready_)
    throw std::logic_error("accumulate_param_grads(): backward() has not run");
  for (const Node& n : nodes_) {
    if (!n.param) continue;
    auto it = sink.find(n.param);
    if (it == sink.end())
      it = sink.emplace(n.param, Tensor::zeros(n.value.shape)).first;
    for (int64_t i = 0; i < n.grad.size(); ++i) it->second[i] += scale * n.grad[i];
  }
}

void Graph::backward(Var loss) {
  check_id(loss);
  const Node& top = nodes_[static_cast<size_t>(loss.id)];
  if (top.value.size() != 1)
    throw std::invalid_argument("backward(): loss must be a scalar, got shape " +
                                top.value.shape_str());
  for (Node& n : nodes_) n.grad = Tensor::zeros(n.value.shape);
  grads_ready_ = true;
  nodes_[static_cast<size_t>(loss.id)].grad[0] = 1.0;
  for (int id = loss.id; id >= 0; --id) {
    Node& n = nodes_[static_cast<size_t>(id)];
    if (n.backprop && n.needs_grad) n.backprop(*this);
  }
}

// ---- op helpers ----

#define EVF_BINARY_SAME_SHAPE(name)                            \
  const Tensor& av = value(a);                                 \
  const Tensor& bv = value(b);                                 \
  if (!av.same_shape(bv)) shape_error(name, av, bv);

Var Graph::add(Var a, Var b) {
  EVF_BINARY_SAME_SHAPE("add")
  Tensor out = av;
  for (int64_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  bool ng = needs(a) || needs(b);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, b, res](Graph& g) {
    const Tensor& go = g.grad(res);
    if (g.needs(a))
      for (int64_t i = 0; i < go.size(); ++i) g.grad_mut(a)[i] += go[i];
    if (g.needs(b))
      for (int64_t i = 0; i < go.size(); ++i) g.grad_mut(b)[i] += go[i];
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "add");
}

Var Graph::sub(Var a, Var b) {
  EVF_BINARY_SAME_SHAPE("sub")
  Tensor out = av;
  for (int64_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  bool ng = needs(a) || needs(b);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, b, res](Graph& g) {
    const Tensor& go = g.grad(res);
    if (g.needs(a))
      for (int64_t i = 0; i < go.size(); ++i) g.grad_mut(a)[i] += go[i];
    if (g.needs(b))
      for (int64_t i = 0; i < go.size(); ++i) g.grad_mut(b)[i] -= go[i];
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "sub");
}

Var Graph::mul(Var a, Var b) {
  EVF_BINARY_SAME_SHAPE("mul")
  Tensor out = av;
  for (int64_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  bool ng = needs(a) || needs(b);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, b, res](Graph& g) {
    const Tensor& go = g.grad(res);
    const Tensor& avv = g.value(a);
    const Tensor& bvv = g.value(b);
    if (g.needs(a))
      for (int64_t i = 0; i < go.size(); ++i) g.grad_mut(a)[i] += go[i] * bvv[i];
    if (g.needs(b))
      for (int64_t i = 0; i < go.size(); ++i) g.grad_mut(b)[i] += go[i] * avv[i];
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "mul");
}

Var Graph::scale(Var a, double c) {
  Tensor out = value(a);
  for (double& x : out.data) x *= c;
  bool ng = needs(a);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, c, res](Graph& g) {
    const Tensor& go = g.grad(res);
    for (int64_t i = 0; i < go.size(); ++i) g.grad_mut(a)[i] += c * go[i];
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "scale");
}

Var Graph::add_rowvec(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  if (av.ndim() != 2 || bv.ndim() != 1 || bv.shape[0] != av.cols())
    shape_error("add_rowvec", av, bv);
  Tensor out = av;
  int n = av.rows(), d = av.cols();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) out.at(i, j) += bv[j];
  bool ng = needs(a) || needs(b);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, b, res, n, d](Graph& g) {
    const Tensor& go = g.grad(res);
    if (g.needs(a))
      for (int64_t i = 0; i < go.size(); ++i) g.grad_mut(a)[i] += go[i];
    if (g.needs(b)) {
      Tensor& gb = g.grad_mut(b);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) gb[j] += go.at(i, j);
    }
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "add_rowvec");
}

Var Graph::mul_rowvec(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  if (av.ndim() != 2 || bv.ndim() != 1 || bv.shape[0] != av.cols())
    shape_error("mul_rowvec", av, bv);
  Tensor out = av;
  int n = av.rows(), d = av.cols();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) out.at(i, j) *= bv[j];
  bool ng = needs(a) || needs(b);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, b, res, n, d](Graph& g) {
    const Tensor& go = g.grad(res);
    const Tensor& avv = g.value(a);
    const Tensor& bvv = g.value(b);
    if (g.needs(a)) {
      Tensor& ga = g.grad_mut(a);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) ga.at(i, j) += go.at(i, j) * bvv[j];
    }
    if (g.needs(b)) {
      Tensor& gb = g.grad_mut(b);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) gb[j] += go.at(i, j) * avv.at(i, j);
    }
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "mul_rowvec");
}

Var Graph::matmul(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  if (av.ndim() != 2) shape_error("matmul", av, bv);
  bool vec_rhs = bv.ndim() == 1;
  int n = av.rows(), k = av.cols();
  int m = vec_rhs ? 1 : bv.cols();
  int bk = vec_rhs ? bv.shape[0] : bv.rows();
  if (k != bk) shape_error("matmul", av, bv);
  Tensor out = vec_rhs ? Tensor::zeros({n}) : Tensor::zeros({n, m});
  for (int i = 0; i < n; ++i)
    for (int kk = 0; kk < k; ++kk) {
      double aik = av.at(i, kk);
      if (aik == 0.0) continue;
      const double* brow = &bv.data[static_cast<size_t>(kk) * m];
      double* orow = &out.data[static_cast<size_t>(i) * m];
      for (int j = 0; j < m; ++j) orow[j] += aik * brow[j];
    }
  bool ng = needs(a) || needs(b);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, b, res, n, k, m](Graph& g) {
    const Tensor& go = g.grad(res);
    const Tensor& avv = g.value(a);
    const Tensor& bvv = g.value(b);
    if (g.needs(a)) {
      Tensor& ga = g.grad_mut(a);  // dA = dC B^T
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
          double gij = go.data[static_cast<size_t>(i) * m + j];
          if (gij == 0.0) continue;
          for (int kk = 0; kk < k; ++kk)
            ga.at(i, kk) += gij * bvv.data[static_cast<size_t>(kk) * m + j];
        }
    }
    if (g.needs(b)) {
      Tensor& gb = g.grad_mut(b);  // dB = A^T dC
      for (int i = 0; i < n; ++i)
        for (int kk = 0; kk < k; ++kk) {
          double aik = avv.at(i, kk);
          if (aik == 0.0) continue;
          for (int j = 0; j < m; ++j)
            gb.data[static_cast<size_t>(kk) * m + j] +=
                aik * go.data[static_cast<size_t>(i) * m + j];
        }
    }
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "matmul");
}

Var Graph::transpose(Var a) {
  const Tensor& av = value(a);
  if (av.ndim() != 2) shape_error("transpose", av);
  int n = av.rows(), m = av.cols();
  Tensor out = Tensor::zeros({m, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) out.at(j, i) = av.at(i, j);
  bool ng = needs(a);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, res, n, m](Graph& g) {
    const Tensor& go = g.grad(res);
    Tensor& ga = g.grad_mut(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) ga.at(i, j) += go.at(j, i);
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "transpose");
}

Var Graph::concat_rows(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  if (av.ndim() != 2 || bv.ndim() != 2 || av.cols() != bv.cols())
    shape_error("concat_rows", av, bv);
  int na = av.rows(), nb = bv.rows(), d = av.cols();
  Tensor out = Tensor::zeros({na + nb, d});
  std::copy(av.data.begin(), av.data.end(), out.data.begin());
  std::copy(bv.data.begin(), bv.data.end(),
            out.data.begin() + static_cast<int64_t>(na) * d);
  bool ng = needs(a) || needs(b);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, b, res, na, nb, d](Graph& g) {
    const Tensor& go = g.grad(res);
    if (g.needs(a)) {
      Tensor& ga = g.grad_mut(a);
      for (int64_t i = 0; i < static_cast<int64_t>(na) * d; ++i) ga[i] += go[i];
    }
    if (g.needs(b)) {
      Tensor& gb = g.grad_mut(b);
      for (int64_t i = 0; i < static_cast<int64_t>(nb) * d; ++i)
        gb[i] += go[static_cast<int64_t>(na) * d + i];
    }
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "concat_rows");
}

Var Graph::gather_rows(Var a, std::vector<int> rows) {
  const Tensor& av = value(a);
  if (av.ndim() != 2) shape_error("gather_rows", av);
  int d = av.cols();
  for (int r : rows)
    if (r < 0 || r >= av.rows())
      throw std::out_of_range("gather_rows: row index " + std::to_string(r) +
                              " out of range for " + av.shape_str());
  Tensor out = Tensor::zeros({static_cast<int>(rows.size()), d});
  for (size_t i = 0; i < rows.size(); ++i)
    std::copy(av.data.begin() + static_cast<int64_t>(rows[i]) * d,
              av.data.begin() + static_cast<int64_t>(rows[i] + 1) * d,
              out.data.begin() + static_cast<int64_t>(i) * d);
  bool ng = needs(a);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, res, rows = std::move(rows), d](Graph& g) {
    const Tensor& go = g.grad(res);
    Tensor& ga = g.grad_mut(a);
    for (size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < d; ++j)
        ga.at(rows[i], j) += go.at(static_cast<int>(i), j);
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "gather_rows");
}

Var Graph::slice_cols(Var a, int c0, int c1) {
  const Tensor& av = value(a);
  if (av.ndim() != 2 || c0 < 0 || c1 > av.cols() || c0 >= c1)
    throw std::invalid_argument("slice_cols: bad range [" + std::to_string(c0) +
                                ", " + std::to_string(c1) + ") for " +
                                av.shape_str());
  int n = av.rows(), w = c1 - c0;
  Tensor out = Tensor::zeros({n, w});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < w; ++j) out.at(i, j) = av.at(i, c0 + j);
  bool ng = needs(a);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, res, c0, n, w](Graph& g) {
    const Tensor& go = g.grad(res);
    Tensor& ga = g.grad_mut(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < w; ++j) ga.at(i, c0 + j) += go.at(i, j);
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "slice_cols");
}

Var Graph::select_cols(Var a, std::vector<int> col_per_row) {
  const Tensor& av = value(a);
  if (av.ndim() != 2 || static_cast<int>(col_per_row.size()) != av.rows())
    shape_error("select_cols", av);
  for (int c : col_per_row)
    if (c < 0 || c >= av.cols())
      throw std::out_of_range("select_cols: column index " + std::to_string(c) +
                              " out of range for " + av.shape_str());
  int n = av.rows();
  Tensor out = Tensor::zeros({n});
  for (int i = 0; i < n; ++i) out[i] = av.at(i, col_per_row[i]);
  bool ng = needs(a);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, res, cols = std::move(col_per_row), n](Graph& g) {
    const Tensor& go = g.grad(res);
    Tensor& ga = g.grad_mut(a);
    for (int i = 0; i < n; ++i) ga.at(i, cols[i]) += go[i];
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "select_cols");
}

Var Graph::softmax_rows(Var a) {
  const Tensor& av = value(a);
  if (av.ndim() != 2) shape_error("softmax_rows", av);
  int n = av.rows(), m = av.cols();
  Tensor out = Tensor::zeros({n, m});
  for (int i = 0; i < n; ++i) {
    double mx = av.at(i, 0);
    for (int j = 1; j < m; ++j) mx = std::max(mx, av.at(i, j));
    double z = 0.0;
    for (int j = 0; j < m; ++j) {
      out.at(i, j) = std::exp(av.at(i, j) - mx);
      z += out.at(i, j);
    }
    for (int j = 0; j < m; ++j) out.at(i, j) /= z;
  }
  bool ng = needs(a);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, res, n, m](Graph& g) {
    const Tensor& go = g.grad(res);
    const Tensor& y = g.value(res);
    Tensor& ga = g.grad_mut(a);
    for (int i = 0; i < n; ++i) {
      double dot = 0.0;
      for (int j = 0; j < m; ++j) dot += go.at(i, j) * y.at(i, j);
      for (int j = 0; j < m; ++j)
        ga.at(i, j) += y.at(i, j) * (go.at(i, j) - dot);
    }
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "softmax_rows");
}

Var Graph::log(Var a) {
  const Tensor& av = value(a);
  Tensor out = av;
  for (double& x : out.data) x = std::log(x);
  bool ng = needs(a);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, res](Graph& g) {
    const Tensor& go = g.grad(res);
    const Tensor& avv = g.value(a);
    Tensor& ga = g.grad_mut(a);
    for (int64_t i = 0; i < go.size(); ++i) ga[i] += go[i] / avv[i];
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "log");
}

Var Graph::relu(Var a) {
  const Tensor& av = value(a);
  Tensor out = av;
  for (double& x : out.data) x = x > 0.0 ? x : 0.0;
  bool ng = needs(a);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, res](Graph& g) {
    const Tensor& go = g.grad(res);
    const Tensor& avv = g.value(a);
    Tensor& ga = g.grad_mut(a);
    for (int64_t i = 0; i < go.size(); ++i)
      if (avv[i] > 0.0) ga[i] += go[i];
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "relu");
}

Var Graph::sum(Var a) {
  const Tensor& av = value(a);
  double s = 0.0;
  for (double x : av.data) s += x;
  bool ng = needs(a);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, res](Graph& g) {
    double go = g.grad(res)[0];
    Tensor& ga = g.grad_mut(a);
    for (int64_t i = 0; i < ga.size(); ++i) ga[i] += go;
  };
  return push(Tensor::scalar(s), ng,
              ng ? std::function<void(Graph&)>(bp) : nullptr, "sum");
}

Var Graph::mean(Var a) {
  const Tensor& av = value(a);
  if (av.size() == 0) throw std::invalid_argument("mean: empty tensor");
  double s = 0.0;
  for (double x : av.data) s += x;
  double inv = 1.0 / static_cast<double>(av.size());
  bool ng = needs(a);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, res, inv](Graph& g) {
    double go = g.grad(res)[0] * inv;
    Tensor& ga = g.grad_mut(a);
    for (int64_t i = 0; i < ga.size(); ++i) ga[i] += go;
  };
  return push(Tensor::scalar(s * inv), ng,
              ng ? std::function<void(Graph&)>(bp) : nullptr, "mean");
}

Var Graph::mean_rows(Var a) {
  const Tensor& av = value(a);
  if (av.ndim() != 2 || av.rows() == 0) shape_error("mean_rows", av);
  int n = av.rows(), d = av.cols();
  Tensor out = Tensor::zeros({d});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) out[j] += av.at(i, j);
  double inv = 1.0 / n;
  for (int j = 0; j < d; ++j) out[j] *= inv;
  bool ng = needs(a);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, res, n, d, inv](Graph& g) {
    const Tensor& go = g.grad(res);
    Tensor& ga = g.grad_mut(a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) ga.at(i, j) += go[j] * inv;
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "mean_rows");
}

Var Graph::layer_norm_rows(Var a, double eps) {
  const Tensor& av = value(a);
  if (av.ndim() != 2) shape_error("layer_norm_rows", av);
  int n = av.rows(), d = av.cols();
  Tensor out = Tensor::zeros({n, d});
  std::vector<double> inv_sigma(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double m = 0.0;
    for (int j = 0; j < d; ++j) m += av.at(i, j);
    m /= d;
    double var = 0.0;
    for (int j = 0; j < d; ++j) {
      double c = av.at(i, j) - m;
      var += c * c;
    }
    var /= d;
    double is = 1.0 / std::sqrt(var + eps);
    inv_sigma[static_cast<size_t>(i)] = is;
    for (int j = 0; j < d; ++j) out.at(i, j) = (av.at(i, j) - m) * is;
  }
  bool ng = needs(a);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, res, n, d, inv_sigma = std::move(inv_sigma)](Graph& g) {
    const Tensor& go = g.grad(res);
    const Tensor& y = g.value(res);
    Tensor& ga = g.grad_mut(a);
    for (int i = 0; i < n; ++i) {
      double mean_g = 0.0, mean_gy = 0.0;
      for (int j = 0; j < d; ++j) {
        mean_g += go.at(i, j);
        mean_gy += go.at(i, j) * y.at(i, j);
      }
      mean_g /= d;
      mean_gy /= d;
      double is = inv_sigma[static_cast<size_t>(i)];
      for (int j = 0; j < d; ++j)
        ga.at(i, j) += is * (go.at(i, j) - mean_g - y.at(i, j) * mean_gy);
    }
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "layer_norm_rows");
}

Var Graph::dropout(Var a, double p, Rng& rng, bool train) {
  if (p < 0.0 || p >= 1.0)
    throw std::invalid_argument("dropout: p must be in [0, 1)");
  if (!train || p == 0.0) {
    // Identity; consumes no randomness in eval mode.
    Tensor out = value(a);
    bool ng = needs(a);
    Var res{static_cast<int>(nodes_.size())};
    auto bp = [a, res](Graph& g) {
      const Tensor& go = g.grad(res);
      Tensor& ga = g.grad_mut(a);
      for (int64_t i = 0; i < go.size(); ++i) ga[i] += go[i];
    };
    return push(std::move(out), ng,
                ng ? std::function<void(Graph&)>(bp) : nullptr, "dropout");
  }
  const Tensor& av = value(a);
  double keep_scale = 1.0 / (1.0 - p);
  std::vector<double> mask(static_cast<size_t>(av.size()));
  for (double& m : mask) m = rng.bernoulli(p) ? 0.0 : keep_scale;
  Tensor out = av;
  for (int64_t i = 0; i < out.size(); ++i) out[i] *= mask[static_cast<size_t>(i)];
  bool ng = needs(a);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [a, res, mask = std::move(mask)](Graph& g) {
    const Tensor& go = g.grad(res);
    Tensor& ga = g.grad_mut(a);
    for (int64_t i = 0; i < go.size(); ++i)
      ga[i] += go[i] * mask[static_cast<size_t>(i)];
  };
  return push(std::move(out), ng, ng ? std::function<void(Graph&)>(bp) : nullptr,
              "dropout");
}

Var Graph::cosine_similarity(Var u, Var v) {
  const Tensor& uv = value(u);
  const Tensor& vv = value(v);
  if (uv.ndim() != 1 || vv.ndim() != 1 || uv.shape != vv.shape)
    shape_error("cosine_similarity", uv, vv);
  double dot = 0.0, nu2 = 0.0, nv2 = 0.0;
  for (int64_t i = 0; i < uv.size(); ++i) {
    dot += uv[i] * vv[i];
    nu2 += uv[i] * uv[i];
    nv2 += vv[i] * vv[i];
  }
  if (nu2 == 0.0 || nv2 == 0.0)
    throw std::invalid_argument("cosine_similarity: zero-norm input");
  double nu = std::sqrt(nu2), nv = std::sqrt(nv2);
  double s = dot / (nu * nv);
  bool ng = needs(u) || needs(v);
  Var res{static_cast<int>(nodes_.size())};
  auto bp = [u, v, res, nu, nv, s](Graph& g) {
    double go = g.grad(res)[0];
    const Tensor& uvv = g.value(u);
    const Tensor& vvv = g.value(v);
    if (g.needs(u)) {
      Tensor& gu = g.grad_mut(u);
      for (int64_t i = 0; i < uvv.size(); ++i)
        gu[i] += go * (vvv[i] / (nu * nv) - s * uvv[i] / (nu * nu));
    }
    if (g.needs(v)) {
      Tensor& gv = g.grad_mut(v);
      for (int64_t i = 0; i < vvv.size(); ++i)
        gv[i] += go * (uvv[i] / (nu * nv) - s * vvv[i] / (nv * nv));
    }
  };
  return push(Tensor::scalar(s), ng,
              ng ? std::function<void(Graph&)>(bp) : nullptr,
              "cosine_similarity");
}

#undef EVF_BINARY_SAME_SHAPE

// ---------------------------------------------------------------- Adam

Adam::Adam(std::vector<Tensor*> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (Tensor* p : params_) {
    m_.push_back(Tensor::zeros(p->shape));
    v_.push_back(Tensor::zeros(p->shape));
  }
}

void Adam::step(const std::unordered_map<Tensor*, Tensor>& grads) {
  ++step_count_;
  double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_count_));
  double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_count_));
  for (size_t pi = 0; pi < params_.size(); ++pi) {
    Tensor& p = *params_[pi];
    auto it = grads.find(params_[pi]);
    const Tensor* gptr = it == grads.end() ? nullptr : &it->second;
    if (gptr && !gptr->same_shape(p))
      throw std::invalid_argument("adam_step: gradient shape " +
                                  gptr->shape_str() + " does not match " +
                                  p.shape_str());
    for (int64_t i = 0; i < p.size(); ++i) {
      double gi = gptr ? (*gptr)[i] : 0.0;
      m_[pi][i] = config_.beta1 * m_[pi][i] + (1.0 - config_.beta1) * gi;
      v_[pi][i] = config_.beta2 * v_[pi][i] + (1.0 - config_.beta2) * gi * gi;
      double mhat = m_[pi][i] / bc1;
      double vhat = v_[pi][i] / bc2;
      p[i] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
    }
  }
}

}  // namespace eventformer
