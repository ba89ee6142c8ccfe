#include "hiercut/trainer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

#include "hiercut/error.hpp"
#include "hiercut/objectives.hpp"
#include "hiercut/rng.hpp"
#include "hiercut/treecut.hpp"

namespace hiercut {

namespace {

// Stream 0 drives treecut draws; stream epoch + 1 drives that epoch's shuffle.
constexpr std::uint64_t kCutStream = 0;

void shuffle(std::vector<std::size_t>& order, Rng64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.next_below(i)]);
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs == 0) throw Error(ErrorCode::InvalidArgument, "epochs must be positive");
  if (batch_size == 0) throw Error(ErrorCode::InvalidArgument, "batch size must be positive");
  if (!(base_lr > 0.0) || !std::isfinite(base_lr)) {
    throw Error(ErrorCode::InvalidArgument, "learning rate must be positive");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "lambda must be non-negative");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "beta must lie in [0,1]");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  if (shots && *shots == 0) throw Error(ErrorCode::InvalidArgument, "shots must be positive");
}

double cosine_lr(std::size_t step, std::size_t total_steps, double base_lr) {
  if (total_steps == 0) throw Error(ErrorCode::InvalidArgument, "total_steps must be positive");
  if (step >= total_steps) throw Error(ErrorCode::OutOfRange, "step beyond the schedule");
  // (1 + cos(pi s/T)) / 2 == sin^2(pi (T - s) / 2T); the sine form avoids the
  // cancellation in 1 + cos near the end of the schedule.
  const double rest = static_cast<double>(total_steps - step) / static_cast<double>(total_steps);
  const double s = std::sin(0.5 * std::numbers::pi * rest);
  return base_lr * s * s;
}

std::vector<std::size_t> select_shots(const SampleSet& data, std::size_t shots) {
  std::unordered_map<NodeId, std::size_t> taken;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (taken[data.leaves[i]]++ < shots) rows.push_back(i);
  }
  return rows;
}

std::uint64_t params_digest(const PromptParams& params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double x) {
    auto bits = std::bit_cast<std::uint64_t>(x);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(params.tau);
  for (Eigen::Index r = 0; r < params.A.rows(); ++r) {
    for (Eigen::Index c = 0; c < params.A.cols(); ++c) mix(params.A(r, c));
  }
  for (Eigen::Index i = 0; i < params.c.size(); ++i) mix(params.c[i]);
  return h;
}

TrainResult train(const TrainConfig& config, const TaxonomyTree& tree, const EmbeddingTable& emb,
                  const SampleSet& data) {
  config.validate();
  if (data.size() == 0) throw Error(ErrorCode::EmptyData, "no training samples");
  if (data.dim() != emb.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "sample and embedding dimensions differ");
  }
  data.validate(tree);

  std::vector<std::size_t> pool;
  if (config.shots) {
    pool = select_shots(data, *config.shots);
  } else {
    pool.resize(data.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
  }

  const MatrixBundle bundle = build_matrices(tree);
  TrainResult result{PromptParams::identity(emb.dim(), config.tau), {}};
  PromptParams& params = result.params;

  const std::size_t per_epoch = (pool.size() + config.batch_size - 1) / config.batch_size;
  const std::size_t total_steps = per_epoch * config.epochs;
  result.log.records.reserve(total_steps);

  Rng64 cut_rng(derive_seed(config.seed, kCutStream));
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> order = pool;
    Rng64 shuffle_rng(derive_seed(config.seed, epoch + 1));
    shuffle(order, shuffle_rng);

    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++step) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const SampleSet batch =
          data.subset(std::span<const std::size_t>(order).subspan(start, end - start));

      const LabelSet cut = sample_treecut(tree, bundle, config.beta, cut_rng);
      const LossValue dtl = dtl_loss_and_grad(batch, cut, params, emb, tree);
      const LossValue ncl = ncl_loss_and_grad(batch, tree, params, emb);
      const LossValue total = combine_losses(dtl, ncl, config.lambda);
      if (!std::isfinite(total.value) || !total.grad_A.allFinite() || !total.grad_c.allFinite()) {
        throw Error(ErrorCode::NonFinite, "non-finite loss at iteration " + std::to_string(step) +
                                              " (epoch " + std::to_string(epoch) + ")");
      }

      const double lr = cosine_lr(step, total_steps, config.base_lr);
      params.A -= lr * total.grad_A;
      params.c -= lr * total.grad_c;

      result.log.records.push_back({step, lr, cut.size(), dtl.value, ncl.value, total.value});
    }
  }
  result.log.params_digest = params_digest(params);
  return result;
}

}  // namespace hiercut
