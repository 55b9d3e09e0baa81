#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "doilab/exponent.hpp"
#include "doilab/search_config.hpp"

namespace doilab {

struct ExperimentConfig {
    std::uint64_t seed = 0x5eedULL;
    std::vector<int> dims{2, 4, 8, 16, 32, 64, 128};
    std::vector<std::pair<Exponent, Exponent>> pq_pairs{{Exponent(2.0), Exponent(2.0)}};
    int trials = 100;
    double eps = 0.5;
    double tol = 0.05;
    SearchConfig search{};
    std::string output_path = "results.csv";
};

/// Parses the JSON config. Unknown keys, wrong types and violated
/// invariants (trials >= 1, dims nonempty and >= 1, eps in (0,1]) throw ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// One metric of one experiment cell. Rows without a norm context leave p, q empty.
struct ResultRow {
    std::string experiment;
    int n = 0;
    std::optional<Exponent> p;
    std::optional<Exponent> q;
    int trial = 0;
    std::string metric;
    double value = 0.0;
    std::string certainty;  ///< exact, lower_bound, upper_bound, derived or flagged
    std::uint64_t seed_used = 0;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline constexpr const char* kCsvHeader = "experiment,n,p,q,trial,metric,value,certainty,seed_used";

/// Order by (experiment, n, p, q, trial, metric).
void sort_rows(std::vector<ResultRow>& rows);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_csv(const std::string& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& is);
std::vector<ResultRow> read_csv(const std::string& path);

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<std::string> violations;  ///< one diagnostic dump per violated assertion
    nlohmann::json summary = nlohmann::json::object();

    void append(ExperimentResult&& other);
};

/// Multiplier-norm estimates of the standard truncation over cfg.dims for
/// each (p,q), with a least-squares fit value ≈ a·ln n + b per pair.
ExperimentResult run_truncation_growth(const ExperimentConfig& cfg);

/// ‖f(B)S − Sf(A)‖/‖BS − SA‖ normalized by K̂_A·K̂_B for f = |·| on random
/// operators with K̂ <= 4; identity controls and, for (2,2), Hilbert-type
/// adversarial instances.
ExperimentResult run_commutator_ratios(const ExperimentConfig& cfg);

/// ‖|B| − |A|‖_{2->2} against the two mixed norms of V(B − A)U⁻¹ for
/// self-adjoint A, B.
ExperimentResult run_p2q2_mixed(const ExperimentConfig& cfg);

/// The Lipschitz p-summing estimate on random instances for every finite
/// p > 1 occurring in cfg.pq_pairs. Violations are reported.
ExperimentResult run_psumming_check(const ExperimentConfig& cfg);

/// Residual of the divided-difference identity on random instances, a
/// majority of them with engineered eigenvalue collisions. Violations are reported.
ExperimentResult run_doi_identity(const ExperimentConfig& cfg);

ExperimentResult run_all(const ExperimentConfig& cfg);

/// Upper bound on K̂ used by the samplers.
inline constexpr double kConditionCap = 4.0;

}  // namespace doilab
