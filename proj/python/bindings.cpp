#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eventformer/finetune.hpp"
#include "eventformer/generators.hpp"
#include "eventformer/pretrain.hpp"
#include "eventformer/streams.hpp"

namespace py = pybind11;
using namespace eventformer;

namespace {

// Pre-trained encoder plus heads, the unit the pipeline passes around.
struct PretrainedModel {
  EncoderModel model;
  PretrainHeads heads;
  std::vector<PretrainLogEntry> log;
  int best_epoch = 0;
  double best_dev = 0.0;
  bool stopped_early = false;

  void save(const std::string& path) {
    Checkpoint ckpt = to_checkpoint(model, &heads);
    save_checkpoint(ckpt, path);
  }

  std::vector<std::vector<double>> extract(const EventSequence& seq) {
    Tensor h = extract_representations(model, seq);
    std::vector<std::vector<double>> out;
    for (int i = 0; i < h.rows(); ++i) {
      std::vector<double> row(h.cols());
      for (int j = 0; j < h.cols(); ++j) row[static_cast<size_t>(j)] = h.at(i, j);
      out.push_back(std::move(row));
    }
    return out;
  }
};

struct FinetunedModel {
  PretrainedModel base;
  FinetuneHead head;
  FinetuneConfig::TimeTarget target = FinetuneConfig::TimeTarget::absolute;
  double chosen_lr = 0.0;
  double best_dev = 0.0;

  std::pair<double, int> predict(const EventSequence& prefix) {
    Prediction p = predict_next(base.model, head, prefix, target);
    return {p.time, p.label};
  }
};

EventSequence make_sequence(const std::vector<std::pair<double, int>>& events,
                            double horizon, int label_count) {
  EventSequence seq;
  seq.horizon = horizon;
  seq.label_count = label_count;
  for (auto& [t, y] : events) seq.events.push_back({t, y});
  seq.validate();
  return seq;
}

std::vector<std::pair<double, int>> sequence_events(const EventSequence& seq) {
  std::vector<std::pair<double, int>> out;
  for (const Event& e : seq.events) out.emplace_back(e.time, e.label);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Temporal point process pre-training toolkit (C++ core)";

  py::class_<EventSequence>(m, "EventSequence")
      .def(py::init(&make_sequence), py::arg("events"), py::arg("horizon"),
           py::arg("label_count"))
      .def_property_readonly("events", &sequence_events)
      .def_readonly("horizon", &EventSequence::horizon)
      .def_readonly("label_count", &EventSequence::label_count)
      .def("__len__", [](const EventSequence& s) { return s.size(); });

  py::class_<Epoch>(m, "Epoch")
      .def_readonly("observed_time", &Epoch::observed_time)
      .def_readonly("true_time", &Epoch::true_time)
      .def_readonly("is_void", &Epoch::is_void)
      .def_readonly("is_masked", &Epoch::is_masked)
      .def_property_readonly("true_label",
                             [](const Epoch& e) -> py::object {
                               if (e.true_label.is_real())
                                 return py::int_(e.true_label.index());
                               return py::none();
                             })
      .def_property_readonly("observed_label",
                             [](const Epoch& e) -> py::object {
                               if (e.observed_label.is_real())
                                 return py::int_(e.observed_label.index());
                               if (e.observed_label.is_null()) return py::none();
                               return py::str("mask");
                             });

  py::class_<AugmentedSequence>(m, "AugmentedSequence")
      .def_readonly("epochs", &AugmentedSequence::epochs)
      .def_readonly("horizon", &AugmentedSequence::horizon)
      .def_readonly("label_count", &AugmentedSequence::label_count)
      .def("strip", &AugmentedSequence::strip)
      .def("__len__", [](const AugmentedSequence& s) { return s.size(); });

  m.def("list_models", &list_models, py::arg("family"));
  m.def("registry_json", []() { return registry_json_text(); });

  m.def(
      "simulate",
      [](const std::string& family, const std::string& model, int count,
         uint64_t seed) {
        ModelParams params = get_model(family, model);
        Rng root(seed);
        std::vector<EventSequence> out;
        for (int i = 0; i < count; ++i) {
          Rng rng = root.derive("simulate", static_cast<uint64_t>(i));
          out.push_back(simulate(params, rng));
        }
        return out;
      },
      py::arg("family"), py::arg("model"), py::arg("count"), py::arg("seed"));

  m.def(
      "loglik",
      [](const std::string& family, const std::string& model,
         const EventSequence& seq) {
        return loglik(get_model(family, model), seq);
      },
      py::arg("family"), py::arg("model"), py::arg("seq"));

  m.def(
      "inject_voids",
      [](const EventSequence& seq, uint64_t seed, int count_per_gap) {
        Rng rng(seed);
        return inject_voids(seq, rng, count_per_gap);
      },
      py::arg("seq"), py::arg("seed"), py::arg("count_per_gap") = 1);

  m.def(
      "apply_mask",
      [](const AugmentedSequence& aug, uint64_t seed, const std::string& strategy,
         double fraction, double mean_run_length) {
        Rng rng(seed);
        return apply_mask(aug, rng,
                          MaskPolicy::parse(strategy, fraction, mean_run_length));
      },
      py::arg("aug"), py::arg("seed"), py::arg("strategy") = "independent",
      py::arg("fraction") = 0.15, py::arg("mean_run_length") = 3.0);

  m.def("load_jsonl", &load_jsonl, py::arg("path"));
  m.def("save_jsonl", &save_jsonl, py::arg("dataset"), py::arg("path"));
  m.def("load_augmented_jsonl", &load_augmented_jsonl, py::arg("path"));
  m.def("save_augmented_jsonl", &save_augmented_jsonl, py::arg("dataset"),
        py::arg("path"));

  py::class_<PretrainedModel>(m, "PretrainedModel")
      .def("save", &PretrainedModel::save, py::arg("path"))
      .def("extract", &PretrainedModel::extract, py::arg("seq"))
      .def_readonly("best_epoch", &PretrainedModel::best_epoch)
      .def_readonly("best_dev", &PretrainedModel::best_dev)
      .def_readonly("stopped_early", &PretrainedModel::stopped_early)
      .def_property_readonly("log", [](const PretrainedModel& p) {
        py::list out;
        for (const PretrainLogEntry& e : p.log) {
          py::dict d;
          d["epoch"] = e.epoch;
          d["train_pred"] = e.train_pred;
          d["train_contr"] = e.train_contr;
          d["dev_event"] = e.dev_event;
          out.append(d);
        }
        return out;
      });

  m.def(
      "pretrain",
      [](const std::vector<AugmentedSequence>& train,
         const std::vector<AugmentedSequence>& dev, int d_model, int n_blocks,
         int n_heads, int d_ff, double dropout, int max_len, double gamma,
         double lambda, double omega, int batch_size, double lr, int max_epochs,
         int patience, uint64_t seed) {
        if (train.empty())
          throw std::invalid_argument("pretrain: empty train split");
        EncoderConfig enc;
        enc.d_model = d_model;
        enc.n_blocks = n_blocks;
        enc.n_heads = n_heads;
        enc.d_ff = d_ff;
        enc.dropout = dropout;
        enc.max_len = max_len;
        enc.label_count = train.front().label_count;
        PretrainConfig pc;
        pc.gamma = gamma;
        pc.lambda = lambda;
        pc.omega = omega;
        pc.batch_size = batch_size;
        pc.lr = lr;
        pc.max_epochs = max_epochs;
        pc.patience = patience;
        pc.seed = seed;
        PretrainResult r = pretrain(train, dev, enc, pc);
        PretrainedModel out;
        out.model = std::move(r.model);
        out.heads = std::move(r.heads);
        out.log = std::move(r.log);
        out.best_epoch = r.best_epoch;
        out.best_dev = r.best_dev;
        out.stopped_early = r.stopped_early;
        return out;
      },
      py::arg("train"), py::arg("dev"), py::arg("d_model") = 32,
      py::arg("n_blocks") = 2, py::arg("n_heads") = 2, py::arg("d_ff") = 64,
      py::arg("dropout") = 0.1, py::arg("max_len") = 4096, py::arg("gamma") = 1.0,
      py::arg("lambda_") = 0.01, py::arg("omega") = 1.0,
      py::arg("batch_size") = 16, py::arg("lr") = 1e-4,
      py::arg("max_epochs") = 100, py::arg("patience") = 5, py::arg("seed") = 0);

  m.def(
      "load_pretrained",
      [](const std::string& path) {
        Checkpoint ckpt = load_checkpoint(path);
        PretrainedModel out;
        out.model = encoder_from_checkpoint(ckpt, &out.heads);
        return out;
      },
      py::arg("path"));

  py::class_<FinetunedModel>(m, "FinetunedModel")
      .def("predict", &FinetunedModel::predict, py::arg("prefix"))
      .def_readonly("chosen_lr", &FinetunedModel::chosen_lr)
      .def_readonly("best_dev", &FinetunedModel::best_dev)
      .def("save",
           [](FinetunedModel& f, const std::string& path) {
             Checkpoint ckpt = head_to_checkpoint(f.head, f.target);
             save_checkpoint(ckpt, path);
           },
           py::arg("path"));

  m.def(
      "finetune",
      [](PretrainedModel& base, const std::vector<EventSequence>& train,
         const std::vector<EventSequence>& dev, double alpha,
         std::vector<double> lr_candidates, int batch_size, int max_epochs,
         int patience, std::vector<int> hidden, const std::string& time_target,
         uint64_t seed) {
        FinetuneConfig fc;
        fc.alpha = alpha;
        fc.lr_candidates = std::move(lr_candidates);
        fc.batch_size = batch_size;
        fc.max_epochs = max_epochs;
        fc.patience = patience;
        fc.hidden = std::move(hidden);
        fc.time_target = FinetuneConfig::parse_target(time_target);
        fc.seed = seed;
        auto train_pairs = make_pairs(base.model, train, fc.time_target);
        auto dev_pairs = make_pairs(base.model, dev, fc.time_target);
        FinetuneResult r = finetune(train_pairs, dev_pairs,
                                    base.model.config.d_model,
                                    base.model.config.label_count, fc);
        FinetunedModel out;
        out.base = base;
        out.head = std::move(r.head);
        out.target = fc.time_target;
        out.chosen_lr = r.chosen_lr;
        out.best_dev = r.best_dev;
        return out;
      },
      py::arg("base"), py::arg("train"), py::arg("dev"), py::arg("alpha") = 0.01,
      py::arg("lr_candidates") = std::vector<double>{0.001, 0.002},
      py::arg("batch_size") = 32, py::arg("max_epochs") = 100,
      py::arg("patience") = 10,
      py::arg("hidden") = std::vector<int>{512, 512, 512},
      py::arg("time_target") = "absolute", py::arg("seed") = 0);

  m.def(
      "evaluate",
      [](const std::vector<std::pair<double, int>>& predictions,
         const std::vector<std::pair<double, int>>& truth) {
        std::vector<Prediction> p, t;
        for (auto& [tm, lb] : predictions) p.push_back({tm, lb});
        for (auto& [tm, lb] : truth) t.push_back({tm, lb});
        Metrics metrics = evaluate(p, t);
        py::dict d;
        d["time_rmse"] = metrics.time_rmse;
        d["type_accuracy"] = metrics.type_accuracy;
        d["n_pairs"] = metrics.n_pairs;
        return d;
      },
      py::arg("predictions"), py::arg("truth"));
}
