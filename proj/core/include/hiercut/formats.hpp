#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hiercut/classifier.hpp"
#include "hiercut/metrics.hpp"
#include "hiercut/taxonomy.hpp"
#include "hiercut/trainer.hpp"

namespace hiercut {

// Text formats. All are UTF-8, tab-separated, '\n'-terminated. Reals are
// written in shortest round-trip form, so every file re-loads to identical
// values.
//
//   embeddings:  "#dim <d>" then "name<TAB>x1<TAB>...<TAB>xd"
//   samples:     "#dim <d>" then "id<TAB>leaf<TAB>x1<TAB>...<TAB>xd"
//   params:      "dim<TAB>d", "tau<TAB>t", "A" followed by d rows, "c<TAB>c1...cd"
//
// Lines starting with '#' after the header are comments.

std::string format_real(double x);
double parse_real(std::string_view text);

EmbeddingTable parse_embeddings(std::string_view document, const TaxonomyTree& tree);
std::string dump_embeddings(const EmbeddingTable& emb, const TaxonomyTree& tree,
                            std::string_view comment = {});

SampleSet parse_samples(std::string_view document, const TaxonomyTree& tree);
std::string dump_samples(const SampleSet& data, const TaxonomyTree& tree,
                         std::string_view comment = {});

PromptParams parse_params(std::string_view document);
std::string dump_params(const PromptParams& params);

/// Flat key<TAB>value report.
std::string dump_report(const MetricsReport& report);
/// One row per evaluated cut: beta, cut size, accuracy.
std::string dump_cut_details(const MetricsReport& report);

std::string dump_train_log(const TrainLog& log, const TrainConfig& config);

/// `# beta=<b> seed=<s>` followed by one line of tab-separated member names per cut.
std::string dump_cut_listing(const std::vector<LabelSet>& cuts, const TaxonomyTree& tree,
                             double beta, std::uint64_t seed);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace hiercut
