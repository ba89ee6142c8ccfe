#include "hiercut/formats.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "hiercut/error.hpp"

namespace hiercut {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::Parse;
}

TEST(Reals, ShortestRoundTrip) {
  Rng64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(rng.next_gaussian(), static_cast<int>(rng.next_below(200)) - 100);
    EXPECT_EQ(parse_real(format_real(x)), x);
  }
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(1.0), "1");
  EXPECT_EQ(parse_real("+2.5"), 2.5);
  EXPECT_EQ(parse_real("-1e-3"), -1e-3);
  EXPECT_EQ(parse_real(format_real(std::numeric_limits<double>::denorm_min())),
            std::numeric_limits<double>::denorm_min());
  for (const char* bad : {"", "1.5x", "abc", " 1", "--1"}) {
    EXPECT_EQ(code_of([&] { parse_real(bad); }), ErrorCode::Parse) << bad;
  }
}

TEST(Embeddings, RoundTrip) {
  Rng64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const auto tree = testing::random_tree(rng, 20, 8);
    const auto emb = testing::random_embeddings(tree, 1 + static_cast<Eigen::Index>(rng.next_below(7)), rng);
    const auto text = dump_embeddings(emb, tree, "note");
    const auto back = parse_embeddings(text, tree);
    EXPECT_EQ(back.rows(), emb.rows());
    EXPECT_EQ(dump_embeddings(back, tree, "note"), text);
  }
}

TEST(Embeddings, Errors) {
  const auto tree = testing::t6();
  const std::string ok_tail = "n2\t1\nn3\t1\nn4\t1\nn5\t1\nn6\t1\n";
  EXPECT_NO_THROW(parse_embeddings("#dim 1\n# c\nn1\t1\n" + ok_tail, tree));
  EXPECT_EQ(code_of([&] { parse_embeddings("", tree); }), ErrorCode::EmptyDocument);
  EXPECT_EQ(code_of([&] { parse_embeddings("dim 1\nn1\t1\n" + ok_tail, tree); }), ErrorCode::Parse);
  EXPECT_EQ(code_of([&] { parse_embeddings("#dim 1\n" + ok_tail, tree); }), ErrorCode::MissingLabel);
  EXPECT_EQ(code_of([&] { parse_embeddings("#dim 1\nzz\t1\nn1\t1\n" + ok_tail, tree); }),
            ErrorCode::MissingLabel);
  EXPECT_EQ(code_of([&] { parse_embeddings("#dim 1\nn0\t1\nn1\t1\n" + ok_tail, tree); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { parse_embeddings("#dim 1\nn1\t1\nn1\t2\n" + ok_tail, tree); }),
            ErrorCode::DuplicateName);
  EXPECT_EQ(code_of([&] { parse_embeddings("#dim 2\nn1\t1\n" + ok_tail, tree); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { parse_embeddings("#dim 1\nn1\t0\n" + ok_tail, tree); }), ErrorCode::ZeroVector);
  EXPECT_EQ(code_of([&] { parse_embeddings("#dim 1\nn1\tnan\n" + ok_tail, tree); }),
            ErrorCode::NonFinite);
}

TEST(Samples, RoundTrip) {
  Rng64 rng(23);
  const auto tree = testing::t6();
  const auto emb = testing::random_embeddings(tree, 5, rng);
  const auto data = testing::random_samples(tree, emb, 25, 0.4, rng);
  const auto text = dump_samples(data, tree, "seed=23");
  const auto back = parse_samples(text, tree);
  EXPECT_EQ(back.ids, data.ids);
  EXPECT_EQ(back.leaves, data.leaves);
  EXPECT_EQ(back.features, data.features);
  EXPECT_EQ(dump_samples(back, tree, "seed=23"), text);
}

TEST(Samples, Errors) {
  const auto tree = testing::t6();
  EXPECT_EQ(code_of([&] { parse_samples("#dim 2\na\tn3\t1\n", tree); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { parse_samples("#dim 1\na\tnope\t1\n", tree); }), ErrorCode::MissingLabel);
  EXPECT_EQ(code_of([&] { parse_samples("#dim 1\na\tn1\t1\n", tree); }), ErrorCode::NotLeaf);
  EXPECT_EQ(code_of([&] { parse_samples("#dim 1\na\tn3\tx\n", tree); }), ErrorCode::Parse);
}

TEST(Params, RoundTrip) {
  Rng64 rng(24);
  for (Eigen::Index d : {1, 2, 7}) {
    const auto p = testing::random_params(d, 0.5, 0.07 + static_cast<double>(d), rng);
    const auto text = dump_params(p);
    const auto back = parse_params(text);
    EXPECT_EQ(back.A, p.A);
    EXPECT_EQ(back.c, p.c);
    EXPECT_EQ(back.tau, p.tau);
    EXPECT_EQ(dump_params(back), text);
  }
  EXPECT_EQ(dump_params(PromptParams::identity(2, 0.5)), "dim\t2\ntau\t0.5\nA\n1\t0\n0\t1\nc\t0\t0\n");
}

TEST(Params, Errors) {
  EXPECT_EQ(code_of([] { parse_params("dim\t2\ntau\t0.5\nA\n1\t0\n"); }), ErrorCode::Parse);
  EXPECT_EQ(code_of([] { parse_params("dim\t0\ntau\t0.5\nA\nc\n"); }), ErrorCode::Parse);
  EXPECT_EQ(code_of([] { parse_params("dim\t2\ntau\t0.5\nA\n1\t0\t3\n0\t1\nc\t0\t0\n"); }),
            ErrorCode::DimensionMismatch);
  EXPECT_THROW(parse_params("dim\t1\ntau\t-1\nA\n1\nc\t0\n"), Error);
}

TEST(Tree, DumpRoundTrip) {
  Rng64 rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const auto tree = testing::random_tree(rng, 30, 15);
    const auto text = dump_tree(tree);
    EXPECT_EQ(dump_tree(load_tree(text)), text);
  }
}

TEST(Report, KeysAndDetails) {
  MetricsReport r;
  r.samples = 4;
  r.leaf_acc = 0.75;
  r.hca = 0.5;
  r.mta = 0.625;
  r.seed = 7;
  r.cuts_per_beta = 2;
  r.per_beta = {{0.1, 0.625, 2, false}};
  r.cuts = {{0.1, 4, 0.75}, {0.1, 2, 0.5}};
  EXPECT_EQ(dump_report(r),
            "samples\t4\nleaf_acc\t0.75\nhca\t0.5\nmta\t0.625\nseed\t7\nT\t2\nbetas\t0.1\n"
            "mta_beta_0.1\t0.625\ncuts_beta_0.1\t2\ncuts_used\t4,2\n");
  EXPECT_EQ(dump_cut_details(r), "beta\tcut_size\taccuracy\n0.1\t4\t0.75\n0.1\t2\t0.5\n");
}

TEST(CutListing, EchoesSeed) {
  const auto tree = testing::t6();
  const std::vector<LabelSet> cuts{LabelSet(tree, {1, 6}, LabelSetKind::Treecut)};
  EXPECT_EQ(dump_cut_listing(cuts, tree, 1.0, 99), "# beta=1 seed=99\nn1\tn6\n");
}

TEST(Files, IoErrors) {
  EXPECT_EQ(code_of([] { read_file("/nonexistent/dir/file.tsv"); }), ErrorCode::Io);
  EXPECT_EQ(code_of([] { write_file("/nonexistent/dir/file.tsv", "x"); }), ErrorCode::Io);
}

}  // namespace
}  // namespace hiercut
