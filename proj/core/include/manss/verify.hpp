#pragma once

#include "manss/builder.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace manss::verify {

using builder::Base;
using builder::ClassicalChart;

struct CheckResult {
    std::string suite;
    std::string subject;
    bool pass = true;
    std::string detail;
    std::size_t checked = 0;
};

struct Report {
    std::vector<CheckResult> checks;
    bool ok() const;
    void add(CheckResult r) { checks.push_back(std::move(r)); }
    void merge(const Report& other);
    /// One line per check: "<suite> PASS|FAIL <subject> <detail>".
    std::string format() const;
};

struct RandomOptions {
    std::uint32_t prime = 3;
    int max_stem = 20;
    int max_cell_generators = 4;
};

/// Valid classical chart with a few cells and disjoint differentials.
ClassicalChart random_chart(std::uint64_t seed, const RandomOptions& options = {});

/// Weight-slice groups of every page computed by enumerating elements of finite groups,
/// without any graded-module reasoning. Keys: page (2, then r+1 per differential page), position, weight.
struct OracleSlices {
    std::vector<int> pages;
    std::map<std::tuple<int, int, int, int>, chart::GroupType> slices;  // (page, s, stem, u)
};
OracleSlices slice_oracle(const ClassicalChart& classical, Base base, int weight_lo, int weight_hi);

/// The symbolic builder compared with the oracle at every (page, s, stem, u).
Report oracle_equivalence(const ClassicalChart& classical, Base base, const std::string& subject);

/// Sparseness, vanishing line, torsion inertness, weight ceiling, realization, base change on every page.
Report structural_properties(const ClassicalChart& classical, const std::string& subject);

/// Stability flag and weight-0 agreement of query_pi over a grid of (stem, weight).
Report query_stability(const ClassicalChart& classical, const std::string& subject);

/// Cotor_E polynomial check, CESS collapse and algebraic Novikov reindexing on small ranges.
Report cotor_checks(std::uint32_t prime, int s_max, int t_max);

/// Counts monomials in a_0, a_1, ... (a_i of trigrade (1, 2l^i-1, l^i-1)) times tau powers.
std::uint32_t polynomial_count(std::uint32_t prime, int s, int t, int u);

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"structure", "oracle", "query", "cotor"};
    return names;
}

struct SuiteOptions {
    std::set<std::string> suites{"structure", "oracle", "query", "cotor"};
    std::uint64_t seed = 1;
    int random_charts = 100;
    RandomOptions random;
};

/// Runs the enabled suites on the given chart and on the seeded random charts.
Report run_suites(const ClassicalChart& fixture, const SuiteOptions& options);

}  // namespace manss::verify
