#pragma once

#include "manss/errors.hpp"
#include "manss/steenrod_dual.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace manss::chart {

using steenrod::Base;

/// An exponent in {1, 2, ...} or infinity (nullopt).
using Exponent = std::optional<int>;
inline constexpr std::nullopt_t infinite = std::nullopt;

std::string to_string(const Exponent& e);

/// Cell key (s, stem).
using Position = std::pair<int, int>;

struct Trigrade {
    int s = 0;
    int stem = 0;
    int u = 0;
    int t() const noexcept { return s + stem; }
    friend auto operator<=>(const Trigrade&, const Trigrade&) = default;
};

/// Z/l^{l_exp}[g]/(g^{tau_exp}) on a generator of weight gen_weight, g the ground generator.
/// l_exp infinite encodes Z_l, tau_exp infinite a free module over the ground ring.
struct CyclicSummand {
    Exponent l_exp = 1;
    Exponent tau_exp = infinite;
    int gen_weight = 0;
    std::string label;
    /// Set on torsion summands created by propagation; they take no further part in differentials.
    bool inert = false;

    bool torsion() const noexcept { return tau_exp.has_value(); }
    friend bool operator==(const CyclicSummand&, const CyclicSummand&) = default;
};

struct PresentedGenerator {
    int gen_weight = 0;
    std::string label;
    Exponent l_exp = 1;
    friend bool operator==(const PresentedGenerator&, const PresentedGenerator&) = default;
};

/// coeff * g^{ground_power} * generator
struct RelationTerm {
    int generator = 0;
    std::int64_t coeff = 1;
    int ground_power = 0;
    friend bool operator==(const RelationTerm&, const RelationTerm&) = default;
};

using Relation = std::vector<RelationTerm>;

/// Graded module over Z_l[g] given by homogeneous generators and relations.
/// Generators of finite l_exp carry the implicit relation l^{l_exp} x = 0.
struct PresentedEntry {
    std::vector<PresentedGenerator> generators;
    std::vector<Relation> relations;
    bool non_split = false;
    friend bool operator==(const PresentedEntry&, const PresentedEntry&) = default;
};

struct Cell {
    std::vector<CyclicSummand> summands;
    std::vector<PresentedEntry> presented;
    bool empty() const noexcept { return summands.empty() && presented.empty(); }
    friend bool operator==(const Cell&, const Cell&) = default;
};

struct ClassicalGroup {
    Exponent l_exp = 1;
    std::string label;
    std::string note;
    friend bool operator==(const ClassicalGroup&, const ClassicalGroup&) = default;
};

struct ClassicalDifferential {
    int page = 0;
    Position source;
    Position target;
    std::vector<std::string> source_labels;
    std::vector<std::string> target_labels;
    /// rows = target generators, columns = source generators
    std::vector<std::vector<std::int64_t>> matrix;
    /// Coefficient known only to be a unit.
    bool unit_unknown = false;
    std::string note;
    friend bool operator==(const ClassicalDifferential&, const ClassicalDifferential&) = default;
};

struct ClassicalChart {
    std::uint32_t prime = 3;
    std::string name;
    std::map<Position, std::vector<ClassicalGroup>> groups;
    std::vector<ClassicalDifferential> differentials;
    friend bool operator==(const ClassicalChart&, const ClassicalChart&) = default;
};

int sparseness_modulus(std::uint32_t prime);  // q = 2l - 2

struct ChartMeta {
    std::string fixture;
    std::string fixture_hash;
    std::map<std::string, std::string> options;
    friend bool operator==(const ChartMeta&, const ChartMeta&) = default;
};

struct MotivicChart {
    Base base = Base::C;
    std::uint32_t prime = 3;
    /// nullopt is E-infinity.
    std::optional<int> page = 2;
    std::map<Position, Cell> entries;
    ChartMeta meta;

    int weight_step() const noexcept { return base == Base::C ? 1 : 2; }
    friend bool operator==(const MotivicChart&, const MotivicChart&) = default;
};

std::string fnv1a_hex(const std::string& bytes);

// ---------------------------------------------------------------------------
// Classical input

/// Collects every invariant violation; an empty result means the chart is valid.
std::vector<Violation> validate_classical(const ClassicalChart& chart);

/// Parses the text format. Adds the Z_l at the origin when absent, then validates.
/// Throws ParseError, ConfigurationError (prime 2, non-prime) or ValidationError.
ClassicalChart parse_classical(const std::string& text, const std::string& name = "");
ClassicalChart load_classical(const std::string& path);
std::string write_classical(const ClassicalChart& chart);

// ---------------------------------------------------------------------------
// Motivic output

enum class Format { Json, Ascii };

std::vector<Violation> validate_motivic(const MotivicChart& chart);

std::string save_chart(const MotivicChart& chart, Format format);
/// Accepts either format.
MotivicChart load_chart(const std::string& document);

// ---------------------------------------------------------------------------
// Modules and weight slices

/// Invariant factor exponents of a finite or finitely generated abelian l-group, ascending,
/// infinite (Z_l) last.
using GroupType = std::vector<Exponent>;
std::string to_string(const GroupType& g, std::uint32_t prime);

struct NormalizedEntry {
    std::vector<CyclicSummand> summands;
    std::vector<PresentedEntry> presented;
};

/// Splits a presentation into cyclic summands where the graded structure allows; what remains is
/// kept as a reduced presentation with the non_split flag.
NormalizedEntry normalize_entry(const PresentedEntry& e, std::uint32_t prime, int weight_step = 1);

GroupType slice(const CyclicSummand& c, int weight, int weight_step);
GroupType slice(const PresentedEntry& e, int weight, int weight_step, std::uint32_t prime);
GroupType slice(const Cell& cell, int weight, int weight_step, std::uint32_t prime);

/// Largest generator weight in the cell.
std::optional<int> max_weight(const Cell& cell);

}  // namespace manss::chart
