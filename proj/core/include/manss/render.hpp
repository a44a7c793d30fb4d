#pragma once

#include "manss/chart.hpp"

#include <string>

namespace manss::render {

struct RenderOptions {
    bool weights = false;
    int max_stem = -1;        // -1: fit the chart
    int max_filtration = -1;  // -1: fit the chart
};

/// Stem horizontal, filtration vertical. Filled dot: free summand; open dot with a superscript:
/// ground-ring torsion of that order; square: non-split presentation.
std::string svg(const chart::MotivicChart& chart, const RenderOptions& options = {});

/// One row per summand.
std::string ascii(const chart::MotivicChart& chart, const RenderOptions& options = {});

/// Short description like "Z/3[tau]/(tau^2)".
std::string describe(const chart::CyclicSummand& c, const chart::MotivicChart& chart);

}  // namespace manss::render
