#pragma once

#include "manss/chart.hpp"

#include <optional>
#include <string>
#include <vector>

namespace manss::builder {

using chart::Base;
using chart::ClassicalChart;
using chart::ClassicalDifferential;
using chart::CyclicSummand;
using chart::GroupType;
using chart::MotivicChart;
using chart::Position;

/// A ground-ring torsion class created by lifting a classical differential.
struct TorsionRecord {
    Position position;
    int page = 0;
    Position source;
    std::vector<std::string> source_labels;
    std::vector<std::string> target_labels;
    /// The summand as created; nullopt when the target did not split into cyclics.
    std::optional<CyclicSummand> summand;
    std::string description;
};

struct PageState {
    MotivicChart chart;
    int page = 2;
    /// Ordered by (page, source s, source stem).
    std::vector<ClassicalDifferential> pending;
    std::vector<TorsionRecord> log;
};

MotivicChart build_e2(const ClassicalChart& classical, Base base);

/// E2 state with every classical differential pending.
PageState start(const ClassicalChart& classical, Base base);

/// Applies the pending differentials of page < to_page, in order.
/// Throws SequencingError if to_page does not move forward or a pending differential is stale,
/// and InvariantViolation if a differential touches a torsion summand.
PageState propagate(const PageState& state, int to_page);

/// Page after which every pending differential has been consumed.
int final_page(const PageState& state);

/// Throws SequencingError when differentials are still pending.
MotivicChart compute_einf(const PageState& state);

/// E2 through E-infinity in one call.
PageState run(const ClassicalChart& classical, Base base);

/// Weight-0 slice of every entry as a classical chart. Base C only.
ClassicalChart realize_weight0(const MotivicChart& chart);

/// theta -> tau^2.
MotivicChart base_change(const MotivicChart& chart);

struct PiQuery {
    int stem = 0;
    int weight = 0;
    /// (filtration, associated-graded slice group)
    std::vector<std::pair<int, GroupType>> groups;
    bool tau_stable = false;
    bool vanishing = false;
};

PiQuery query_pi(const MotivicChart& einf, int stem, int weight);
bool tau_stable_region(int stem, int weight);

/// Classical E_page computed group-wise (page nullopt = E-infinity).
ClassicalChart classical_page(const ClassicalChart& classical, std::optional<int> page);

/// Group type of every nonzero cell.
std::map<Position, GroupType> group_types(const ClassicalChart& chart);

std::string format_log(const PageState& state);

}  // namespace manss::builder
