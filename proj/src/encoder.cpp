#include "eventformer/encoder.hpp"

#include <cmath>
#include <stdexcept>

namespace eventformer {

void EncoderConfig::validate() const {
  if (d_model < 1 || n_blocks < 1 || n_heads < 1 || d_ff < 1 || max_len < 1)
    throw std::invalid_argument("encoder config: all dimensions must be >= 1");
  if (d_model % n_heads != 0)
    throw std::invalid_argument("encoder config: d_model must be divisible by n_heads");
  if (d_model % 2 != 0)
    throw std::invalid_argument("encoder config: d_model must be even");
  if (label_count < 1)
    throw std::invalid_argument("encoder config: label_count must be >= 1");
  if (dropout < 0.0 || dropout >= 1.0)
    throw std::invalid_argument("encoder config: dropout must be in [0, 1)");
}

EncoderConfig EncoderConfig::desk_profile(int label_count) {
  EncoderConfig c;
  c.d_model = 32;
  c.n_blocks = 2;
  c.n_heads = 2;
  c.d_ff = 64;
  c.dropout = 0.1;
  c.label_count = label_count;
  return c;
}

namespace {

void fill_sinusoid_row(Tensor& out, int row, double pos, int d_model) {
  for (int k = 0; 2 * k < d_model; ++k) {
    double freq = std::pow(10000.0, -2.0 * k / d_model);
    out.at(row, 2 * k) = std::sin(pos * freq);
    out.at(row, 2 * k + 1) = std::cos(pos * freq);
  }
}

Tensor glorot(int fan_in, int fan_out, const std::vector<int>& shape, Rng& rng) {
  double bound = std::sqrt(6.0 / (fan_in + fan_out));
  Tensor t = Tensor::zeros(shape);
  for (double& x : t.data) x = rng.uniform(-bound, bound);
  return t;
}

}  // namespace

Tensor positional_encoding(int n, int d_model, int max_len) {
  if (n > max_len)
    throw std::invalid_argument("positional_encoding: sequence length " +
                                std::to_string(n) + " exceeds max_len " +
                                std::to_string(max_len));
  Tensor out = Tensor::zeros({n, d_model});
  for (int i = 0; i < n; ++i) fill_sinusoid_row(out, i, static_cast<double>(i), d_model);
  return out;
}

Tensor temporal_encoding(const std::vector<double>& times, int d_model) {
  for (double t : times)
    if (t < 0.0)
      throw std::invalid_argument("temporal_encoding: negative time");
  Tensor out = Tensor::zeros({static_cast<int>(times.size()), d_model});
  for (size_t i = 0; i < times.size(); ++i)
    fill_sinusoid_row(out, static_cast<int>(i), times[i], d_model);
  return out;
}

EncoderModel EncoderModel::init(const EncoderConfig& config, Rng& rng) {
  config.validate();
  EncoderModel m;
  m.config = config;
  int d = config.d_model;
  int dk = d / config.n_heads;

  m.label_embedding = Tensor::zeros({config.label_count + 2, d});
  for (double& x : m.label_embedding.data) x = rng.normal(0.0, 0.02);

  for (int b = 0; b < config.n_blocks; ++b) {
    Block blk;
    for (int h = 0; h < config.n_heads; ++h) {
      Head head;
      head.wq = glorot(d, dk, {d, dk}, rng);
      head.wk = glorot(d, dk, {d, dk}, rng);
      head.wv = glorot(d, dk, {d, dk}, rng);
      head.bq = Tensor::zeros({dk});
      head.bk = Tensor::zeros({dk});
      head.bv = Tensor::zeros({dk});
      head.wo = glorot(dk, d, {dk, d}, rng);
      blk.heads.push_back(std::move(head));
    }
    blk.bo = Tensor::zeros({d});
    blk.w1 = glorot(d, config.d_ff, {d, config.d_ff}, rng);
    blk.b1 = Tensor::zeros({config.d_ff});
    blk.w2 = glorot(config.d_ff, d, {config.d_ff, d}, rng);
    blk.b2 = Tensor::zeros({d});
    blk.ln1_gain = Tensor::full({d}, 1.0);
    blk.ln1_bias = Tensor::zeros({d});
    blk.ln2_gain = Tensor::full({d}, 1.0);
    blk.ln2_bias = Tensor::zeros({d});
    m.blocks.push_back(std::move(blk));
  }
  return m;
}

std::vector<std::pair<std::string, Tensor*>> EncoderModel::named_parameters() {
  std::vector<std::pair<std::string, Tensor*>> out;
  out.emplace_back("label_embedding", &label_embedding);
  for (size_t b = 0; b < blocks.size(); ++b) {
    std::string bp = "block" + std::to_string(b) + ".";
    Block& blk = blocks[b];
    for (size_t h = 0; h < blk.heads.size(); ++h) {
      std::string hp = bp + "head" + std::to_string(h) + ".";
      Head& head = blk.heads[h];
      out.emplace_back(hp + "wq", &head.wq);
      out.emplace_back(hp + "wk", &head.wk);
      out.emplace_back(hp + "wv", &head.wv);
      out.emplace_back(hp + "bq", &head.bq);
      out.emplace_back(hp + "bk", &head.bk);
      out.emplace_back(hp + "bv", &head.bv);
      out.emplace_back(hp + "wo", &head.wo);
    }
    out.emplace_back(bp + "bo", &blk.bo);
    out.emplace_back(bp + "w1", &blk.w1);
    out.emplace_back(bp + "b1", &blk.b1);
    out.emplace_back(bp + "w2", &blk.w2);
    out.emplace_back(bp + "b2", &blk.b2);
    out.emplace_back(bp + "ln1_gain", &blk.ln1_gain);
    out.emplace_back(bp + "ln1_bias", &blk.ln1_bias);
    out.emplace_back(bp + "ln2_gain", &blk.ln2_gain);
    out.emplace_back(bp + "ln2_bias", &blk.ln2_bias);
  }
  return out;
}

std::vector<Tensor*> EncoderModel::parameters() {
  std::vector<Tensor*> out;
  for (auto& [name, t] : named_parameters()) out.push_back(t);
  return out;
}

int EncoderModel::embedding_row(const EventLabel& label) const {
  if (label.is_real()) {
    if (label.index() >= config.label_count)
      throw std::invalid_argument("label index exceeds the embedding table");
    return label.index();
  }
  return label.is_null() ? config.label_count : config.label_count + 1;
}

namespace {

Var embed_rows(Graph& g, EncoderModel& model, const std::vector<int>& rows,
               const std::vector<double>& times) {
  int n = static_cast<int>(rows.size());
  const EncoderConfig& cfg = model.config;
  Tensor pe = positional_encoding(n, cfg.d_model, cfg.max_len);
  Tensor te = temporal_encoding(times, cfg.d_model);
  for (int64_t i = 0; i < pe.size(); ++i) pe[i] += te[i];
  Var emb = g.gather_rows(g.param(model.label_embedding), rows);
  return g.add(emb, g.constant(std::move(pe)));
}

}  // namespace

Var embed(Graph& g, EncoderModel& model, const AugmentedSequence& aug) {
  if (aug.label_count != model.config.label_count)
    throw std::invalid_argument("embed: sequence M does not match the model");
  std::vector<int> rows;
  std::vector<double> times;
  rows.reserve(aug.size());
  times.reserve(aug.size());
  for (const Epoch& ep : aug.epochs) {
    rows.push_back(model.embedding_row(ep.observed_label));
    times.push_back(ep.observed_time);
  }
  return embed_rows(g, model, rows, times);
}

Var embed(Graph& g, EncoderModel& model, const EventSequence& seq) {
  if (seq.label_count != model.config.label_count)
    throw std::invalid_argument("embed: sequence M does not match the model");
  std::vector<int> rows;
  std::vector<double> times;
  rows.reserve(seq.size());
  times.reserve(seq.size());
  for (const Event& ev : seq.events) {
    rows.push_back(ev.label);
    times.push_back(ev.time);
  }
  return embed_rows(g, model, rows, times);
}

Var encode(Graph& g, EncoderModel& model, Var x, bool train, Rng& rng,
           AttentionTrace* trace) {
  const EncoderConfig& cfg = model.config;
  int n = g.value(x).rows();
  if (g.value(x).cols() != cfg.d_model)
    throw std::invalid_argument("encode: input width does not match d_model");
  if (n > cfg.max_len)
    throw std::invalid_argument("encode: sequence length exceeds max_len");
  int dk = cfg.d_model / cfg.n_heads;
  double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(dk));
  constexpr double kMaskedLogit = -1e30;  // softmax underflows to exactly 0

  // Strictly-future entries are disallowed; self-attention stays legal so a
  // length-1 sequence is well-defined.
  Tensor mask = Tensor::zeros({n, n});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) mask.at(i, j) = kMaskedLogit;
  Var mask_c = g.constant(std::move(mask));

  for (auto& blk : model.blocks) {
    Var attn_sum{-1};
    for (auto& head : blk.heads) {
      Var q = g.add_rowvec(g.matmul(x, g.param(head.wq)), g.param(head.bq));
      Var k = g.add_rowvec(g.matmul(x, g.param(head.wk)), g.param(head.bk));
      Var v = g.add_rowvec(g.matmul(x, g.param(head.wv)), g.param(head.bv));
      Var scores = g.scale(g.matmul(q, g.transpose(k)), inv_sqrt_dk);
      Var probs = g.softmax_rows(g.add(scores, mask_c));
      if (trace) trace->probs.push_back(g.value(probs));
      probs = g.dropout(probs, cfg.dropout, rng, train);
      Var out = g.matmul(g.matmul(probs, v), g.param(head.wo));
      attn_sum = attn_sum.id < 0 ? out : g.add(attn_sum, out);
    }
    Var attn = g.add_rowvec(attn_sum, g.param(blk.bo));
    attn = g.dropout(attn, cfg.dropout, rng, train);
    Var normed = g.layer_norm_rows(g.add(x, attn), 1e-5);
    x = g.add_rowvec(g.mul_rowvec(normed, g.param(blk.ln1_gain)),
                     g.param(blk.ln1_bias));

    Var hidden = g.relu(g.add_rowvec(g.matmul(x, g.param(blk.w1)), g.param(blk.b1)));
    Var ff = g.add_rowvec(g.matmul(hidden, g.param(blk.w2)), g.param(blk.b2));
    ff = g.dropout(ff, cfg.dropout, rng, train);
    Var normed2 = g.layer_norm_rows(g.add(x, ff), 1e-5);
    x = g.add_rowvec(g.mul_rowvec(normed2, g.param(blk.ln2_gain)),
                     g.param(blk.ln2_bias));
  }
  return x;
}

}  // namespace eventformer
