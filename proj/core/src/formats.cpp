#include "hiercut/formats.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "hiercut/error.hpp"

namespace hiercut {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep = '\t') {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    out.push_back(line.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

/// Splits into lines, dropping a trailing '\r' and the empty tail after a
/// final newline.
std::vector<std::string_view> lines_of(std::string_view doc) {
  std::vector<std::string_view> out = split(doc, '\n');
  if (!out.empty() && out.back().empty()) out.pop_back();
  for (auto& l : out) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  return out;
}

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

Eigen::Index parse_dim_header(const std::vector<std::string_view>& lines) {
  if (lines.empty()) throw Error(ErrorCode::EmptyDocument, "missing '#dim <d>' header");
  const std::string_view head = lines.front();
  constexpr std::string_view tag = "#dim ";
  if (head.substr(0, tag.size()) != tag) {
    throw Error(ErrorCode::Parse, where(1) + "expected '#dim <d>' header");
  }
  std::string_view num = head.substr(tag.size());
  long long d = 0;
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), d);
  if (ec != std::errc() || ptr != num.data() + num.size() || d <= 0) {
    throw Error(ErrorCode::Parse, where(1) + "bad dimension '" + std::string(num) + "'");
  }
  return static_cast<Eigen::Index>(d);
}

void append_row(std::string& out, const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  for (Eigen::Index k = 0; k < row.size(); ++k) {
    out += '\t';
    out += format_real(row[k]);
  }
}

}  // namespace

std::string format_real(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "cannot format number");
  return std::string(buf.data(), ptr);
}

double parse_real(std::string_view text) {
  double x = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw Error(ErrorCode::Parse, "bad number '" + std::string(text) + "'");
  }
  return x;
}

EmbeddingTable parse_embeddings(std::string_view document, const TaxonomyTree& tree) {
  const auto lines = lines_of(document);
  const Eigen::Index d = parse_dim_header(lines);
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(tree.size()), d);
  std::vector<bool> seen(tree.size(), false);

  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i].front() == '#') continue;
    const auto fields = split(lines[i]);
    if (static_cast<Eigen::Index>(fields.size()) != d + 1) {
      throw Error(ErrorCode::DimensionMismatch, where(i + 1) + "expected name and " +
                                                    std::to_string(d) + " values");
    }
    const auto node = tree.find(fields[0]);
    if (!node) {
      throw Error(ErrorCode::MissingLabel, where(i + 1) + "unknown node '" + std::string(fields[0]) + "'");
    }
    if (*node == tree.root()) {
      throw Error(ErrorCode::InvalidArgument, where(i + 1) + "the root takes no embedding");
    }
    if (seen[*node]) {
      throw Error(ErrorCode::DuplicateName, where(i + 1) + "second embedding for '" +
                                                std::string(fields[0]) + "'");
    }
    seen[*node] = true;
    for (Eigen::Index k = 0; k < d; ++k) {
      rows(static_cast<Eigen::Index>(*node), k) = parse_real(fields[static_cast<std::size_t>(k) + 1]);
    }
  }
  for (NodeId n = 1; n < tree.size(); ++n) {
    if (!seen[n]) throw Error(ErrorCode::MissingLabel, "no embedding for '" + tree.name(n) + "'");
  }
  return EmbeddingTable(tree, std::move(rows));
}

std::string dump_embeddings(const EmbeddingTable& emb, const TaxonomyTree& tree,
                            std::string_view comment) {
  std::string out = "#dim " + std::to_string(emb.dim()) + "\n";
  if (!comment.empty()) out += "# " + std::string(comment) + "\n";
  for (NodeId n = 1; n < tree.size(); ++n) {
    out += tree.name(n);
    append_row(out, emb.row(n));
    out += '\n';
  }
  return out;
}

SampleSet parse_samples(std::string_view document, const TaxonomyTree& tree) {
  const auto lines = lines_of(document);
  const Eigen::Index d = parse_dim_header(lines);
  SampleSet data;
  std::vector<double> values;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i].front() == '#') continue;
    const auto fields = split(lines[i]);
    if (static_cast<Eigen::Index>(fields.size()) != d + 2) {
      throw Error(ErrorCode::DimensionMismatch, where(i + 1) + "expected id, leaf and " +
                                                    std::to_string(d) + " values");
    }
    const auto leaf = tree.find(fields[1]);
    if (!leaf) {
      throw Error(ErrorCode::MissingLabel, where(i + 1) + "unknown leaf '" + std::string(fields[1]) + "'");
    }
    data.ids.emplace_back(fields[0]);
    data.leaves.push_back(*leaf);
    for (Eigen::Index k = 0; k < d; ++k) values.push_back(parse_real(fields[static_cast<std::size_t>(k) + 2]));
  }
  data.features = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Eigen::Index>(data.leaves.size()), d);
  data.validate(tree);
  return data;
}

std::string dump_samples(const SampleSet& data, const TaxonomyTree& tree, std::string_view comment) {
  std::string out = "#dim " + std::to_string(data.dim()) + "\n";
  if (!comment.empty()) out += "# " + std::string(comment) + "\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    out += data.ids[i];
    out += '\t';
    out += tree.name(data.leaves[i]);
    append_row(out, data.features.row(static_cast<Eigen::Index>(i)));
    out += '\n';
  }
  return out;
}

PromptParams parse_params(std::string_view document) {
  const auto lines = lines_of(document);
  std::size_t i = 0;
  auto next = [&]() -> std::vector<std::string_view> {
    while (i < lines.size() && (lines[i].empty() || lines[i].front() == '#')) ++i;
    if (i >= lines.size()) throw Error(ErrorCode::Parse, "params file ends early");
    return split(lines[i++]);
  };
  auto expect_key = [&](const std::vector<std::string_view>& f, std::string_view key, std::size_t n) {
    if (f.front() != key || f.size() != n) {
      throw Error(ErrorCode::Parse, where(i) + "expected '" + std::string(key) + "' record");
    }
  };

  auto f = next();
  expect_key(f, "dim", 2);
  const double dim_real = parse_real(f[1]);
  const auto d = static_cast<Eigen::Index>(dim_real);
  if (d <= 0 || static_cast<double>(d) != dim_real) throw Error(ErrorCode::Parse, "bad params dim");

  PromptParams p{Eigen::MatrixXd(d, d), Eigen::VectorXd(d), 0.0};
  f = next();
  expect_key(f, "tau", 2);
  p.tau = parse_real(f[1]);

  f = next();
  expect_key(f, "A", 1);
  for (Eigen::Index r = 0; r < d; ++r) {
    f = next();
    if (static_cast<Eigen::Index>(f.size()) != d) {
      throw Error(ErrorCode::DimensionMismatch, where(i) + "A row needs " + std::to_string(d) + " values");
    }
    for (Eigen::Index c = 0; c < d; ++c) p.A(r, c) = parse_real(f[static_cast<std::size_t>(c)]);
  }
  f = next();
  expect_key(f, "c", static_cast<std::size_t>(d) + 1);
  for (Eigen::Index k = 0; k < d; ++k) p.c[k] = parse_real(f[static_cast<std::size_t>(k) + 1]);
  p.validate();
  return p;
}

std::string dump_params(const PromptParams& params) {
  std::string out = "dim\t" + std::to_string(params.dim()) + "\n";
  out += "tau\t" + format_real(params.tau) + "\nA\n";
  for (Eigen::Index r = 0; r < params.A.rows(); ++r) {
    for (Eigen::Index c = 0; c < params.A.cols(); ++c) {
      if (c > 0) out += '\t';
      out += format_real(params.A(r, c));
    }
    out += '\n';
  }
  out += "c";
  append_row(out, params.c.transpose());
  out += '\n';
  return out;
}

std::string dump_report(const MetricsReport& report) {
  std::ostringstream out;
  out << "samples\t" << report.samples << '\n';
  out << "leaf_acc\t" << format_real(report.leaf_acc) << '\n';
  out << "hca\t" << format_real(report.hca) << '\n';
  out << "mta\t" << format_real(report.mta) << '\n';
  out << "seed\t" << report.seed << '\n';
  out << "T\t" << report.cuts_per_beta << '\n';
  out << "betas\t";
  for (std::size_t k = 0; k < report.per_beta.size(); ++k) {
    out << (k ? "," : "") << format_real(report.per_beta[k].beta);
  }
  out << '\n';
  for (const auto& b : report.per_beta) {
    out << "mta_beta_" << format_real(b.beta) << '\t' << format_real(b.mta) << '\n';
    out << "cuts_beta_" << format_real(b.beta) << '\t' << b.cuts << '\n';
  }
  out << "cuts_used\t";
  for (std::size_t k = 0; k < report.cuts.size(); ++k) out << (k ? "," : "") << report.cuts[k].cut_size;
  out << '\n';
  return out.str();
}

std::string dump_cut_details(const MetricsReport& report) {
  std::ostringstream out;
  out << "beta\tcut_size\taccuracy\n";
  for (const auto& c : report.cuts) {
    out << format_real(c.beta) << '\t' << c.cut_size << '\t' << format_real(c.accuracy) << '\n';
  }
  return out.str();
}

std::string dump_train_log(const TrainLog& log, const TrainConfig& config) {
  std::ostringstream out;
  out << "# seed=" << config.seed << " lambda=" << format_real(config.lambda)
      << " beta=" << format_real(config.beta) << " lr=" << format_real(config.base_lr)
      << " epochs=" << config.epochs << " batch_size=" << config.batch_size
      << " tau=" << format_real(config.tau);
  if (config.shots) out << " shots=" << *config.shots;
  out << '\n';
  out << "# params_digest=" << std::hex << log.params_digest << std::dec << '\n';
  out << "iteration\tlr\tcut_size\tdtl\tncl\ttotal\n";
  for (const auto& r : log.records) {
    out << r.iteration << '\t' << format_real(r.lr) << '\t' << r.cut_size << '\t'
        << format_real(r.dtl) << '\t' << format_real(r.ncl) << '\t' << format_real(r.total) << '\n';
  }
  return out.str();
}

std::string dump_cut_listing(const std::vector<LabelSet>& cuts, const TaxonomyTree& tree,
                             double beta, std::uint64_t seed) {
  std::string out = "# beta=" + format_real(beta) + " seed=" + std::to_string(seed) + "\n";
  for (const auto& cut : cuts) {
    bool first = true;
    for (NodeId m : cut.members()) {
      if (!first) out += '\t';
      out += tree.name(m);
      first = false;
    }
    out += '\n';
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

}  // namespace hiercut
