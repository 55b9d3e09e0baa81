#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "doilab/errors.hpp"
#include "doilab/experiments.hpp"

namespace doilab {

namespace {

using nlohmann::json;

Exponent exponent_from_json(const json& v, const char* what) {
    try {
        if (v.is_string()) return Exponent::parse(v.get<std::string>());
        if (v.is_number()) return Exponent(v.get<double>());
    } catch (const DomainError& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
    throw ConfigError(std::string(what) + ": expected a number or \"inf\"");
}

template <typename T>
T get_as(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

void parse_search(const json& j, SearchConfig& s) {
    if (!j.is_object()) throw ConfigError("config key 'search' must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "restarts") s.restarts = get_as<int>(j, "restarts");
        else if (key == "max_iter") s.max_iter = get_as<int>(j, "max_iter");
        else if (key == "iter_tol") s.iter_tol = get_as<double>(j, "iter_tol");
        else throw ConfigError("unknown key 'search." + key + "'");
    }
    if (s.restarts < 1) throw ConfigError("search.restarts must be >= 1");
    if (s.max_iter < 1) throw ConfigError("search.max_iter must be >= 1");
    if (!(s.iter_tol > 0.0)) throw ConfigError("search.iter_tol must be positive");
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <typename T>
T parse_integer(const std::string& s, int line_no) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("csv line " + std::to_string(line_no) + ": bad integer '" + s + "'");
    return v;
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "seed") {
            if (!value.is_number_unsigned()) throw ConfigError("config key 'seed' must be a nonnegative integer");
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "dims") {
            cfg.dims = get_as<std::vector<int>>(j, "dims");
        } else if (key == "pq_pairs") {
            if (!value.is_array()) throw ConfigError("config key 'pq_pairs' must be an array");
            cfg.pq_pairs.clear();
            for (const json& pair : value) {
                if (!pair.is_array() || pair.size() != 2)
                    throw ConfigError("each entry of 'pq_pairs' must be an array of two exponents");
                cfg.pq_pairs.emplace_back(exponent_from_json(pair[0], "pq_pairs"),
                                          exponent_from_json(pair[1], "pq_pairs"));
            }
        } else if (key == "trials") {
            cfg.trials = get_as<int>(j, "trials");
        } else if (key == "eps") {
            cfg.eps = get_as<double>(j, "eps");
        } else if (key == "tol") {
            cfg.tol = get_as<double>(j, "tol");
        } else if (key == "search") {
            parse_search(value, cfg.search);
        } else if (key == "output_path") {
            cfg.output_path = get_as<std::string>(j, "output_path");
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    if (cfg.dims.empty()) throw ConfigError("dims must be nonempty");
    if (std::any_of(cfg.dims.begin(), cfg.dims.end(), [](int n) { return n < 1; }))
        throw ConfigError("dims must be positive");
    if (cfg.pq_pairs.empty()) throw ConfigError("pq_pairs must be nonempty");
    if (!(cfg.eps > 0.0 && cfg.eps <= 1.0)) throw ConfigError("eps must lie in (0, 1]");
    if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
    cfg.search.seed = cfg.seed;
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

void sort_rows(std::vector<ResultRow>& rows) {
    auto exp_key = [](const std::optional<Exponent>& e) { return e ? e->value() : -1.0; };
    std::stable_sort(rows.begin(), rows.end(), [&](const ResultRow& a, const ResultRow& b) {
        return std::make_tuple(std::cref(a.experiment), a.n, exp_key(a.p), exp_key(a.q), a.trial,
                               std::cref(a.metric)) <
               std::make_tuple(std::cref(b.experiment), b.n, exp_key(b.p), exp_key(b.q), b.trial,
                               std::cref(b.metric));
    });
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << kCsvHeader << '\n';
    for (const ResultRow& r : rows) {
        os << r.experiment << ',' << r.n << ',' << (r.p ? r.p->to_string() : "") << ','
           << (r.q ? r.q->to_string() : "") << ',' << r.trial << ',' << r.metric << ','
           << format_double(r.value) << ',' << r.certainty << ',' << r.seed_used << '\n';
    }
}

void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    write_csv(out, rows);
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<ResultRow> read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) throw ConfigError("csv: missing or wrong header");
    std::vector<ResultRow> rows;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 9) throw ConfigError("csv line " + std::to_string(line_no) + ": expected 9 fields");
        ResultRow r;
        r.experiment = f[0];
        r.n = parse_integer<int>(f[1], line_no);
        if (!f[2].empty()) r.p = Exponent::parse(f[2]);
        if (!f[3].empty()) r.q = Exponent::parse(f[3]);
        r.trial = parse_integer<int>(f[4], line_no);
        r.metric = f[5];
        r.value = std::strtod(f[6].c_str(), nullptr);
        r.certainty = f[7];
        r.seed_used = parse_integer<std::uint64_t>(f[8], line_no);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ResultRow> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open csv file '" + path + "'");
    return read_csv(in);
}

void ExperimentResult::append(ExperimentResult&& other) {
    rows.insert(rows.end(), std::make_move_iterator(other.rows.begin()),
                std::make_move_iterator(other.rows.end()));
    violations.insert(violations.end(), std::make_move_iterator(other.violations.begin()),
                      std::make_move_iterator(other.violations.end()));
    for (auto& [key, value] : other.summary.items()) summary[key] = std::move(value);
}

}  // namespace doilab
