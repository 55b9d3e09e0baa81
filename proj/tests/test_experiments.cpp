#include <gtest/gtest.h>

#include <limits>
#include <set>
#include <sstream>

#include "doilab/errors.hpp"
#include "doilab/experiments.hpp"

namespace doilab {
namespace {

using nlohmann::json;

ExperimentConfig small_config() {
    return parse_config(json::parse(R"({
        "seed": 99, "dims": [2, 3], "pq_pairs": [[1, 2], [2, 2], [1.5, "inf"]], "trials": 3,
        "eps": 0.5, "tol": 0.05, "search": {"restarts": 4, "max_iter": 100, "iter_tol": 1e-9},
        "output_path": "x.csv"})"));
}

const ResultRow* find(const std::vector<ResultRow>& rows, const std::string& metric) {
    for (const ResultRow& r : rows)
        if (r.metric == metric) return &r;
    return nullptr;
}

TEST(Config, ParsesAllKeys) {
    const ExperimentConfig cfg = small_config();
    EXPECT_EQ(cfg.seed, 99U);
    EXPECT_EQ(cfg.dims, (std::vector<int>{2, 3}));
    ASSERT_EQ(cfg.pq_pairs.size(), 3U);
    EXPECT_TRUE(cfg.pq_pairs[2].second.is_infinite());
    EXPECT_EQ(cfg.pq_pairs[2].first, Exponent(1.5));
    EXPECT_EQ(cfg.trials, 3);
    EXPECT_EQ(cfg.search.restarts, 4);
    EXPECT_EQ(cfg.search.max_iter, 100);
    EXPECT_EQ(cfg.search.iter_tol, 1e-9);
    EXPECT_EQ(cfg.output_path, "x.csv");
}

TEST(Config, RejectsInvalidInput) {
    const std::vector<std::string> bad{
        R"([1, 2])",
        R"({"trials": 0})",
        R"({"dims": []})",
        R"({"dims": [0, 2]})",
        R"({"eps": 0})",
        R"({"eps": 1.5})",
        R"({"pq_pairs": [[0.5, 2]]})",
        R"({"pq_pairs": [[1, 2, 3]]})",
        R"({"pq_pairs": [["infinite", 2]]})",
        R"({"seed": -4})",
        R"({"unknown": 1})",
        R"({"search": {"restarts": 0}})",
        R"({"search": {"speed": 2}})",
        R"({"trials": "many"})",
    };
    for (const std::string& text : bad) EXPECT_THROW(parse_config(json::parse(text)), ConfigError) << text;
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Csv, RoundTripsLosslessly) {
    std::vector<ResultRow> rows{
        {"a", 4, Exponent(1.5), Exponent::infinity(), 2, "m", 0.1 + 0.2, "exact", 18446744073709551615ULL},
        {"b", 0, std::nullopt, std::nullopt, 0, "fit", -1e-300, "derived", 0},
        {"c", 8, Exponent(3.0), Exponent(1.0), 7, "r", std::numeric_limits<double>::infinity(), "flagged", 5},
        {"d", 1, Exponent(2.0), Exponent(2.0), 1, "tiny", 4.9406564584124654e-324, "lower_bound", 6},
    };
    std::stringstream ss;
    write_csv(ss, rows);
    EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), kCsvHeader);
    EXPECT_EQ(read_csv(ss), rows);
}

TEST(Csv, RejectsMalformedInput) {
    std::stringstream bad_header("a,b,c\n");
    EXPECT_THROW(read_csv(bad_header), ConfigError);
    std::stringstream short_row(std::string(kCsvHeader) + "\nx,1,2\n");
    EXPECT_THROW(read_csv(short_row), ConfigError);
}

TEST(Rows, SortedDeterministically) {
    std::vector<ResultRow> rows{
        {"b", 1, {}, {}, 0, "m", 0, "exact", 0},
        {"a", 2, Exponent(2.0), Exponent(2.0), 1, "m", 0, "exact", 0},
        {"a", 2, Exponent(1.0), Exponent(2.0), 1, "m", 0, "exact", 0},
        {"a", 1, Exponent(2.0), Exponent::infinity(), 0, "m", 0, "exact", 0},
    };
    sort_rows(rows);
    EXPECT_EQ(rows[0].n, 1);
    EXPECT_EQ(rows[1].p, Exponent(1.0));
    EXPECT_EQ(rows[2].p, Exponent(2.0));
    EXPECT_EQ(rows[3].experiment, "b");
}

TEST(Experiments, RunAllIsDeterministic) {
    const ExperimentConfig cfg = small_config();
    const ExperimentResult a = run_all(cfg);
    const ExperimentResult b = run_all(cfg);
    EXPECT_EQ(a.rows, b.rows);
    EXPECT_EQ(a.summary, b.summary);
    EXPECT_TRUE(a.violations.empty());
    std::set<std::string> experiments;
    for (const ResultRow& r : a.rows) {
        experiments.insert(r.experiment);
        EXPECT_FALSE(r.certainty.empty());
    }
    EXPECT_EQ(experiments.size(), 5U);

    ExperimentConfig other = cfg;
    other.seed = 100;
    EXPECT_NE(run_doi_identity(other).rows, a.rows);
}

TEST(Experiments, TruncationGrowthExactPairsAreFlat) {
    ExperimentConfig cfg = small_config();
    cfg.dims = {2, 4, 8};
    cfg.pq_pairs = {{Exponent(1.0), Exponent(1.0)}, {Exponent(2.0), Exponent::infinity()}};
    const ExperimentResult r = run_truncation_growth(cfg);
    for (const ResultRow& row : r.rows) {
        if (row.metric == "multiplier_norm") {
            EXPECT_EQ(row.value, 1.0);
            EXPECT_EQ(row.certainty, "exact");
        }
        if (row.metric == "fit_slope") EXPECT_EQ(row.value, 0.0);
        if (row.metric == "law_check") EXPECT_EQ(row.value, 1.0);
    }
}

TEST(Experiments, CommutatorControlsAndAdversarialRows) {
    ExperimentConfig cfg = small_config();
    cfg.dims = {4, 16};
    cfg.pq_pairs = {{Exponent(2.0), Exponent(2.0)}};
    const ExperimentResult r = run_commutator_ratios(cfg);
    double adv4 = 0, adv16 = 0;
    for (const ResultRow& row : r.rows) {
        if (row.metric == "identity_control_ratio") EXPECT_NEAR(row.value, 1.0, 1e-12);
        if (row.metric == "k_a" || row.metric == "k_b") EXPECT_LE(row.value, kConditionCap);
        if (row.metric == "adversarial_normalized_ratio") (row.n == 4 ? adv4 : adv16) = row.value;
        EXPECT_NE(row.metric, "rejection_exhausted");
    }
    EXPECT_GT(adv16, adv4);
}

TEST(Experiments, MixedNormRowsAreConsistent) {
    ExperimentConfig cfg = small_config();
    cfg.dims = {4};
    const ExperimentResult r = run_p2q2_mixed(cfg);
    ASSERT_NE(find(r.rows, "lhs"), nullptr);
    for (const ResultRow& row : r.rows) {
        if (row.metric == "lhs") {
            EXPECT_EQ(row.certainty, "exact");
            EXPECT_GE(row.value, 0.0);
        }
        if (row.metric == "mixed_norm") EXPECT_GT(row.value, 0.0);
    }
}

TEST(Experiments, PSummingAndIdentityHold) {
    ExperimentConfig cfg = small_config();
    const ExperimentResult ps = run_psumming_check(cfg);
    EXPECT_TRUE(ps.violations.empty());
    // Finite exponents above 1 in the pairs: 1.5 and 2.
    EXPECT_EQ(ps.summary["psumming-check"]["p_values"].size(), 2U);
    for (const ResultRow& row : ps.rows) {
        if (row.metric.ends_with("_satisfied")) EXPECT_EQ(row.value, 1.0);
        if (row.trial == 0 && row.metric == "abs_tightness") EXPECT_EQ(row.value, 0.0);
    }
    const ExperimentResult di = run_doi_identity(cfg);
    EXPECT_TRUE(di.violations.empty());
    EXPECT_GT(di.summary["doi-identity"]["collision_instances"].get<int>(), 0);
}

}  // namespace
}  // namespace doilab
