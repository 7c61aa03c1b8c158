#include "gpprec/errors.hpp"
#include "gpprec/experiment.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace gpprec;

TEST(ExperimentConfig, ParsesFlags) {
  ExperimentConfig c;
  c.set("--model", "green");
  c.set("p", "20,40");
  c.set("n", "250, 1000");
  c.set("seeds", "1,2,3");
  c.set("factor", "cholesky-star");
  c.set("block_constant", "0.5");
  c.set("b", "auto");
  EXPECT_EQ(c.model, ModelKind::green);
  EXPECT_EQ(c.p, (std::vector<Index>{20, 40}));
  EXPECT_EQ(c.n, (std::vector<Index>{250, 1000}));
  EXPECT_EQ(c.seeds.size(), 3u);
  EXPECT_EQ(c.factor, FactorKind::cholesky_star);
  EXPECT_DOUBLE_EQ(c.block_constant, 0.5);
  EXPECT_FALSE(c.b.has_value());
}

TEST(ExperimentConfig, ErrorsNameTheField) {
  ExperimentConfig c;
  c.s = 0;
  try {
    c.validate();
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("s"), std::string::npos);
  }
  ExperimentConfig bad_model;
  EXPECT_THROW(bad_model.set("model", "gauss"), InvalidInput);
  EXPECT_THROW(bad_model.set("n", "12x"), InvalidInput);
  EXPECT_THROW(bad_model.set("nonsense", "1"), InvalidInput);
  ExperimentConfig scattered_lattice;
  scattered_lattice.scattered = true;
  EXPECT_THROW(scattered_lattice.validate(), InvalidInput);
}

TEST(RunGrid, TinyCaseTakesFallback) {
  ExperimentConfig c;
  c.p = {2};
  c.n = {500};
  const auto rows = run_grid(c, "estimate");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].path, "fallback_full_inverse");
  EXPECT_GT(rows[0].rel_spectral_error, 0.0);
  EXPECT_TRUE(aggregate(rows).empty());
}

TEST(RunGrid, CsvRoundTripAndDeterminism) {
  ExperimentConfig c;
  c.p = {10, 20};
  c.n = {200, 800};
  c.seeds = {1, 2};
  const auto rows = run_grid(c, "scaling-study");
  ASSERT_EQ(rows.size(), 8u);
  std::ostringstream a, b;
  write_csv(a, rows);
  write_csv(b, run_grid(c, "scaling-study"));
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  const auto back = read_csv(in);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].experiment_id, rows[i].experiment_id);
    EXPECT_EQ(back[i].rel_spectral_error, rows[i].rel_spectral_error);
  }
  const Aggregate agg = aggregate(rows);
  EXPECT_EQ(agg.medians.size(), 4u);
  EXPECT_FALSE(agg.slopes.empty());
}

TEST(RunGrid, ErrorsBecomeRows) {
  ExperimentConfig c;
  c.p = {20};
  c.n = {3};
  c.b = 4;
  const auto rows = run_grid(c, "estimate");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].error.empty());
}
