#include "manss/errors.hpp"

#include <fmt/format.h>

namespace manss {

namespace {

std::string summarize(const std::vector<Violation>& violations)
{
    std::string out = fmt::format("{} invariant violation(s)", violations.size());
    for (const auto& v : violations)
        out += fmt::format("; ({},{}) {}: {}", v.s, v.stem, v.rule, v.detail);
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(summarize(violations)), violations_(std::move(violations))
{
}

}  // namespace manss
