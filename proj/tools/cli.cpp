#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <optional>
#include <ostream>

#include "hiercut/error.hpp"
#include "hiercut/formats.hpp"
#include "hiercut/metrics.hpp"
#include "hiercut/synth.hpp"
#include "hiercut/trainer.hpp"
#include "hiercut/treecut.hpp"

namespace hiercut::cli {

namespace fs = std::filesystem;

namespace {

struct Paths {
  std::string tree;
  std::string emb;
  std::string samples;
  std::string params;
  std::string out;
};

struct Options {
  Paths paths;
  double lambda = 0.5;
  double beta = 0.1;
  std::vector<double> betas = kDefaultMtaBetas;
  std::size_t cuts_per_beta = kDefaultCutsPerBeta;
  std::size_t epochs = 200;
  std::size_t batch_size = 32;
  double lr = 0.02;
  double tau = kDefaultTau;
  std::optional<std::size_t> shots;
  std::uint64_t seed = 0;

  std::size_t count = 1;
  bool distinct = false;
  std::string log;
  std::string details;

  SynthConfig synth;
  std::string internal = "mean";
};

TaxonomyTree load_tree_file(const std::string& path) { return load_tree(read_file(path)); }

int cmd_validate(const Options& o, std::ostream& out) {
  const TaxonomyTree tree = load_tree_file(o.paths.tree);
  out << tree.size() << " nodes, " << tree.leaves().size() << " leaves, "
      << tree.internal_nodes().size() << " internal\n";
  out << "max depth " << tree.max_depth() << "\n";
  return 0;
}

int cmd_sample_cuts(const Options& o, std::ostream& out) {
  const TaxonomyTree tree = load_tree_file(o.paths.tree);
  const MatrixBundle bundle = build_matrices(tree);
  Rng64 rng(o.seed);
  std::vector<LabelSet> cuts;
  if (o.distinct) {
    cuts = sample_distinct(tree, bundle, o.beta, o.count, rng).cuts;
  } else {
    for (std::size_t k = 0; k < o.count; ++k) cuts.push_back(sample_treecut(tree, bundle, o.beta, rng));
  }
  const std::string listing = dump_cut_listing(cuts, tree, o.beta, o.seed);
  if (o.paths.out.empty()) {
    out << listing;
  } else {
    write_file(o.paths.out, listing);
  }
  return 0;
}

int cmd_train(const Options& o, std::ostream& out) {
  const TaxonomyTree tree = load_tree_file(o.paths.tree);
  const EmbeddingTable emb = parse_embeddings(read_file(o.paths.emb), tree);
  const SampleSet data = parse_samples(read_file(o.paths.samples), tree);

  TrainConfig config;
  config.epochs = o.epochs;
  config.batch_size = o.batch_size;
  config.base_lr = o.lr;
  config.lambda = o.lambda;
  config.beta = o.beta;
  config.seed = o.seed;
  config.tau = o.tau;
  config.shots = o.shots;

  const TrainResult result = train(config, tree, emb, data);
  write_file(o.paths.out, dump_params(result.params));
  const std::string log_path = o.log.empty() ? o.paths.out + ".log.tsv" : o.log;
  write_file(log_path, dump_train_log(result.log, config));

  const auto& recs = result.log.records;
  out << "iterations\t" << recs.size() << "\n";
  if (!recs.empty()) {
    out << "first_total\t" << format_real(recs.front().total) << "\n";
    out << "last_total\t" << format_real(recs.back().total) << "\n";
  }
  out << "params\t" << o.paths.out << "\nlog\t" << log_path << "\n";
  return 0;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const TaxonomyTree tree = load_tree_file(o.paths.tree);
  const EmbeddingTable emb = parse_embeddings(read_file(o.paths.emb), tree);
  const SampleSet data = parse_samples(read_file(o.paths.samples), tree);
  const PromptParams params = o.paths.params.empty()
                                  ? PromptParams::identity(emb.dim(), o.tau)
                                  : parse_params(read_file(o.paths.params));

  const MetricsReport report = evaluate(tree, params, emb, data, o.betas, o.cuts_per_beta, o.seed);
  const std::string text = dump_report(report);
  out << text;
  if (!o.paths.out.empty()) {
    write_file(o.paths.out, text);
    write_file(o.details.empty() ? o.paths.out + ".cuts.tsv" : o.details, dump_cut_details(report));
  }
  return 0;
}

int cmd_gen_synth(const Options& o, std::ostream& out) {
  SynthConfig cfg = o.synth;
  cfg.seed = o.seed;
  cfg.internal = o.internal == "random" ? InternalEmbedding::Random : InternalEmbedding::Mean;
  const SynthFixture fx = generate_synthetic(cfg);

  const fs::path dir(o.paths.out);
  fs::create_directories(dir);
  const std::string tag = "seed=" + std::to_string(cfg.seed) + " leaves=" + std::to_string(cfg.leaves) +
                          " depth=" + std::to_string(cfg.depth) + " noise=" + format_real(cfg.noise) + " internal=" + o.internal;
  write_file(dir / "tree.tsv", "# " + tag + "\n" + dump_tree(fx.tree));
  write_file(dir / "emb.tsv", dump_embeddings(fx.emb, fx.tree, tag));
  write_file(dir / "train.tsv", dump_samples(fx.train, fx.tree, tag));
  write_file(dir / "test.tsv", dump_samples(fx.test, fx.tree, tag));
  out << fx.tree.size() << " nodes, " << fx.tree.leaves().size() << " leaves, "
      << fx.train.size() << " train, " << fx.test.size() << " test -> " << dir.string() << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical-consistency toolkit: treecut sampling, prompt training, HCA/MTA evaluation"};
  app.require_subcommand(1);
  Options o;

  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "RNG seed")->capture_default_str(); };

  auto* validate = app.add_subcommand("validate", "Check a tree document and print its shape");
  validate->add_option("--tree", o.paths.tree, "Tree document")->required();

  auto* cuts = app.add_subcommand("sample-cuts", "Draw treecut label sets");
  cuts->add_option("--tree", o.paths.tree, "Tree document")->required();
  cuts->add_option("--beta", o.beta, "Tree dropout rate")->capture_default_str();
  cuts->add_option("--count", o.count, "Number of cuts")->capture_default_str()->check(CLI::PositiveNumber);
  cuts->add_flag("--distinct", o.distinct, "Reject repeated cuts (cap 100*count draws)");
  cuts->add_option("--out", o.paths.out, "Output file (default stdout)");
  add_seed(cuts);

  auto* tr = app.add_subcommand("train", "Train the prompt surrogate");
  tr->add_option("--tree", o.paths.tree, "Tree document")->required();
  tr->add_option("--emb", o.paths.emb, "Node embedding table")->required();
  tr->add_option("--samples", o.paths.samples, "Training samples")->required();
  tr->add_option("--out", o.paths.out, "Params output file")->required();
  tr->add_option("--log", o.log, "Train log TSV (default <out>.log.tsv)");
  tr->add_option("--lambda", o.lambda, "NCL weight")->capture_default_str();
  tr->add_option("--beta", o.beta, "Tree dropout rate")->capture_default_str();
  tr->add_option("--epochs", o.epochs, "Epochs")->capture_default_str();
  tr->add_option("--batch-size", o.batch_size, "Minibatch size")->capture_default_str();
  tr->add_option("--lr", o.lr, "Base learning rate")->capture_default_str();
  tr->add_option("--tau", o.tau, "Softmax temperature")->capture_default_str();
  tr->add_option("--shots", o.shots, "Samples per leaf (first K in file order)");
  add_seed(tr);

  auto* ev = app.add_subcommand("eval", "Leaf accuracy, HCA and MTA");
  ev->add_option("--tree", o.paths.tree, "Tree document")->required();
  ev->add_option("--emb", o.paths.emb, "Node embedding table")->required();
  ev->add_option("--samples", o.paths.samples, "Evaluation samples")->required();
  ev->add_option("--params", o.paths.params, "Trained params (default: identity prompt)");
  ev->add_option("--out", o.paths.out, "Report file");
  ev->add_option("--details", o.details, "Per-cut TSV (default <out>.cuts.tsv)");
  ev->add_option("--betas", o.betas, "Dropout rates for MTA")->delimiter(',')->capture_default_str();
  ev->add_option("--T", o.cuts_per_beta, "Distinct cuts per rate")->capture_default_str()->check(CLI::PositiveNumber);
  ev->add_option("--tau", o.tau, "Temperature for the identity prompt")->capture_default_str();
  add_seed(ev);

  auto* gen = app.add_subcommand("gen-synth", "Write a seeded synthetic fixture");
  gen->add_option("--out", o.paths.out, "Output directory")->required();
  gen->add_option("--leaves", o.synth.leaves, "Leaf count")->capture_default_str();
  gen->add_option("--depth", o.synth.depth, "Levels below the root")->capture_default_str();
  gen->add_option("--dim", o.synth.dim, "Embedding dimension")->capture_default_str();
  gen->add_option("--per-leaf", o.synth.train_per_leaf, "Training samples per leaf")->capture_default_str();
  gen->add_option("--test-per-leaf", o.synth.test_per_leaf, "Test samples per leaf")->capture_default_str();
  gen->add_option("--noise", o.synth.noise, "Gaussian noise per coordinate")->capture_default_str();
  gen->add_option("--internal", o.internal, "Internal-node embeddings: mean or random")
      ->capture_default_str()
      ->check(CLI::IsMember({"mean", "random"}));
  add_seed(gen);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "E:usage:" << e.what() << "\n";
    return 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (cuts->parsed()) return cmd_sample_cuts(o, out);
    if (tr->parsed()) return cmd_train(o, out);
    if (ev->parsed()) return cmd_eval(o, out);
    if (gen->parsed()) return cmd_gen_synth(o, out);
  } catch (const Error& e) {
    err << "E:" << to_string(e.code()) << ":" << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "E:internal:" << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace hiercut::cli
