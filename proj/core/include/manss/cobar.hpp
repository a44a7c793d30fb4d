#pragma once

#include "manss/exact_linalg.hpp"
#include "manss/steenrod_dual.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace manss::cobar {

using linalg::FlMatrix;
using linalg::Residue;
using steenrod::Algebra;
using steenrod::DualSteenrod;
using steenrod::Monomial;
using steenrod::PolyMonomial;

struct ComoduleGenerator {
    std::string name;
    int s = 1;
    int t = 0;
    int u = 0;
};

/// psi(g_j) contains coeff * hopf (x) g_target.
struct CoactionTerm {
    Monomial hopf;
    int target = 0;
    Residue coeff = 1;
};

/// Polynomial comodule algebra on the listed generators with a linear coaction on each,
/// extended multiplicatively. No generators gives the trivial comodule (the ground ring).
struct ComoduleSpec {
    std::string name;
    std::vector<ComoduleGenerator> generators;
    std::vector<std::vector<CoactionTerm>> coaction;

    static ComoduleSpec trivial();
    /// Cotor_E(H,H) = P(a_0, a_1, ...) with psi(a_n) = sum xi_{n-i}^{l^i} (x) a_i, generators with t <= t_max.
    static ComoduleSpec cotor_e(const DualSteenrod& alg, int t_max);
    /// E_0 ABP = Z/l[q_0, q_1, ...], |q_i| = (1, 2(l^i-1), l^i-1), same coaction formula.
    static ComoduleSpec novikov_graded(const DualSteenrod& alg, int t_max);

    bool is_trivial() const noexcept { return generators.empty(); }
};

/// Throws ComplexError unless the coaction is counital and coassociative on every generator.
void validate_comodule(const ComoduleSpec& spec, const DualSteenrod& alg, Algebra hopf);

/// Multiplicative extension of the generator coaction.
steenrod::CoactionExpression coaction(const ComoduleSpec& spec, const PolyMonomial& m, const DualSteenrod& alg);

struct CotorRange {
    int s_max = 2;
    int t_max = 8;
    /// Weight window; defaults per column to [t/2 - s_max (l-1), t/2].
    std::optional<int> u_lo;
    std::optional<int> u_hi;
    /// Largest chain group built before giving up.
    std::size_t max_slice = 200000;
    /// Workers for the per-column map; 0 = MANSS_WORKERS env var or hardware concurrency.
    unsigned workers = 0;
};

std::pair<int, int> weight_window(const CotorRange& range, int t, std::uint32_t prime);

/// ground power * [f_1 | ... | f_s] coeff
struct CobarChain {
    std::uint32_t ground = 0;
    std::vector<Monomial> factors;
    PolyMonomial coeff;

    friend bool operator==(const CobarChain&, const CobarChain&) = default;
    friend auto operator<=>(const CobarChain&, const CobarChain&) = default;
};

std::string to_string(const CobarChain& c, const steenrod::GroundRing& ring, const ComoduleSpec& spec);

struct ChainSlice {
    int s = 0;
    int coeff_degree = 0;
    int t = 0;
    int u = 0;
    std::vector<CobarChain> basis;
    FlMatrix d_in{0, 0, 3};   // C^{s-1} -> C^s
    FlMatrix d_out{0, 0, 3};  // C^s -> C^{s+1}
    bool edge = false;
};

struct CotorKey {
    int s = 0;
    int coeff_degree = 0;
    int t = 0;
    int u = 0;
    friend auto operator<=>(const CotorKey&, const CotorKey&) = default;
};

using LinearChain = std::vector<std::pair<CobarChain, Residue>>;

struct CotorEntry {
    std::uint32_t dim = 0;
    /// Dimension carried by each ground power (tau^n or theta^n times ground-free classes).
    std::map<std::uint32_t, std::uint32_t> by_ground_power;
    /// Set when the next chain group exceeded max_slice; dim is then an upper bound.
    bool edge = false;
    std::vector<LinearChain> representatives;
};

struct CotorTable {
    std::string description;
    Algebra hopf = Algebra::A;
    std::string coefficients;
    steenrod::GroundRing ring{steenrod::Base::C, 3};
    CotorRange range;
    std::map<CotorKey, CotorEntry> entries;

    /// True when the key lies in the stamped computed range.
    bool computed(const CotorKey& key) const { return entries.contains(key); }
    std::uint32_t dim(const CotorKey& key) const;
    std::uint32_t dim(int s, int t, int u) const { return dim({s, 0, t, u}); }
};

struct CotorOptions {
    bool representatives = false;
};

std::vector<ChainSlice> build_cobar(Algebra hopf, const ComoduleSpec& coeff, const CotorRange& range,
                                    const DualSteenrod& alg);

CotorTable cotor(Algebra hopf, const ComoduleSpec& coeff, const CotorRange& range, const DualSteenrod& alg,
                 CotorOptions options = {});

/// Cartan-Eilenberg E2: Cotor_P(H, P(a_0, a_1, ...)); key (s1, s2, t, u) with s1 + s2 <= s_max.
CotorTable cess_e2(const CotorRange& range, const DualSteenrod& alg);

/// Algebraic Novikov E1: Cotor_P(H, Z/l[q_0, q_1, ...]); key (s1, novikov degree, t_q, u).
CotorTable algnov_e1(const CotorRange& range, const DualSteenrod& alg);

/// q_i sits at internal degree 2l^i-2, a_i at 2l^i-1: t_a = t_q + (polynomial degree).
CotorKey algnov_to_cess(const CotorKey& k);
CotorKey cess_to_algnov(const CotorKey& k);

/// One line per entry: "s cdeg t u dim [edge]".
std::string format_report(const CotorTable& table);

}  // namespace manss::cobar
