#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "eventformer/pipeline.hpp"

namespace {

using eventformer::RunConfig;

RunConfig load_config(const std::string& path) {
  return path.empty() ? RunConfig{} : RunConfig::from_file(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-supervised pre-training toolkit for multivariate "
               "temporal point processes"};
  app.require_subcommand(1);

  // simulate
  eventformer::SimulateOptions sim;
  uint64_t seed_value = 0;
  std::string config_path;
  auto* c_sim = app.add_subcommand("simulate", "Sample sequences from a registry model");
  c_sim->add_option("--family", sim.family, "hawkes or pgem")->required();
  c_sim->add_option("--model", sim.model, "Model name (A..F)")->required();
  c_sim->add_option("--count", sim.count, "Number of sequences")->required();
  auto* sim_seed = c_sim->add_option("--seed", seed_value, "RNG seed");
  c_sim->add_option("--out", sim.out, "Output JSONL path")->required();
  c_sim->add_option("--config", config_path, "Config file");

  // augment
  eventformer::AugmentOptions aug;
  std::string aug_mask;
  double aug_fraction = 0.0, aug_mrl = 0.0;
  int aug_voids = 0;
  auto* c_aug = app.add_subcommand("augment", "Inject void epochs and apply masking");
  c_aug->add_option("--in", aug.in, "Input JSONL")->required();
  c_aug->add_option("--out", aug.out, "Output augmented JSONL")->required();
  auto* aug_mask_opt = c_aug->add_option("--mask", aug_mask, "independent or geometric");
  auto* aug_frac_opt = c_aug->add_option("--fraction", aug_fraction, "Mask fraction");
  auto* aug_mrl_opt =
      c_aug->add_option("--mean-run-length", aug_mrl, "Geometric mean run length");
  c_aug->add_flag("--no-void", aug.no_void, "Skip void injection");
  auto* aug_voids_opt =
      c_aug->add_option("--voids-per-gap", aug_voids, "Void epochs per gap");
  auto* aug_seed = c_aug->add_option("--seed", seed_value, "RNG seed");
  c_aug->add_option("--config", config_path, "Config file");

  // pretrain
  eventformer::PretrainOptions pre;
  auto* c_pre = app.add_subcommand("pretrain", "Train the masked event model");
  c_pre->add_option("--train", pre.train, "Augmented+masked JSONL")->required();
  c_pre->add_option("--out-dir", pre.out_dir, "Output directory")->required();
  auto* pre_seed = c_pre->add_option("--seed", seed_value, "RNG seed");
  c_pre->add_option("--config", config_path, "Config file");

  // finetune
  eventformer::FinetuneOptions fin;
  auto* c_fin = app.add_subcommand("finetune",
                                   "Train the next-event head on frozen representations");
  c_fin->add_option("--data", fin.data, "Raw JSONL")->required();
  c_fin->add_option("--checkpoint", fin.checkpoint, "Encoder checkpoint")->required();
  c_fin->add_option("--out-dir", fin.out_dir, "Output directory")->required();
  auto* fin_seed = c_fin->add_option("--seed", seed_value, "RNG seed");
  c_fin->add_option("--config", config_path, "Config file");

  // evaluate
  eventformer::EvaluateOptions ev;
  auto* c_ev = app.add_subcommand("evaluate", "Score a predictions file");
  c_ev->add_option("--in", ev.in, "Predictions JSONL")->required();
  c_ev->add_option("--out", ev.out, "Metrics JSON path")->required();

  // embed
  eventformer::EmbedOptions em;
  auto* c_em = app.add_subcommand("embed", "Export per-epoch representations");
  c_em->add_option("--data", em.data, "Raw JSONL")->required();
  c_em->add_option("--checkpoint", em.checkpoint, "Encoder checkpoint")->required();
  c_em->add_option("--out", em.out, "Output JSONL")->required();

  // loglik
  eventformer::LoglikOptions ll;
  auto* c_ll = app.add_subcommand("loglik", "Exact log-likelihood under a registry model");
  c_ll->add_option("--family", ll.family, "hawkes or pgem")->required();
  c_ll->add_option("--model", ll.model, "Model name")->required();
  c_ll->add_option("--in", ll.in, "Input JSONL")->required();
  c_ll->add_option("--out", ll.out, "Output JSONL")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_sim->parsed()) {
      if (sim_seed->count()) sim.seed = seed_value;
      eventformer::run_simulate(sim, load_config(config_path));
    } else if (c_aug->parsed()) {
      if (aug_seed->count()) aug.seed = seed_value;
      if (aug_mask_opt->count()) aug.mask_strategy = aug_mask;
      if (aug_frac_opt->count()) aug.fraction = aug_fraction;
      if (aug_mrl_opt->count()) aug.mean_run_length = aug_mrl;
      if (aug_voids_opt->count()) aug.voids_per_gap = aug_voids;
      eventformer::run_augment(aug, load_config(config_path));
    } else if (c_pre->parsed()) {
      if (pre_seed->count()) pre.seed = seed_value;
      eventformer::run_pretrain(pre, load_config(config_path));
    } else if (c_fin->parsed()) {
      if (fin_seed->count()) fin.seed = seed_value;
      eventformer::run_finetune(fin, load_config(config_path));
    } else if (c_ev->parsed()) {
      eventformer::run_evaluate(ev);
    } else if (c_em->parsed()) {
      eventformer::run_embed(em);
    } else if (c_ll->parsed()) {
      eventformer::run_loglik(ll);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
