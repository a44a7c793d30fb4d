#pragma once

#include "manss/exact_linalg.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace manss::steenrod {

using linalg::Residue;

enum class Base { C, R };
enum class Algebra { A, P, E };

std::string to_string(Base b);
std::string to_string(Algebra a);
Base parse_base(const std::string& s);
Algebra parse_algebra(const std::string& s);

/// Homological bidegree (topological degree t, weight u).
struct Bidegree {
    int t = 0;
    int u = 0;
    Bidegree& operator+=(const Bidegree& o)
    {
        t += o.t;
        u += o.u;
        return *this;
    }
    friend Bidegree operator+(Bidegree a, const Bidegree& b) { return a += b; }
    friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
};

/// Coefficients F_l[tau] (base C, |tau| = (0,-1)) or F_l[theta] (base R, |theta| = (0,-2)).
class GroundRing {
public:
    GroundRing(Base base, std::uint32_t prime);

    Base base() const noexcept { return base_; }
    std::uint32_t prime() const noexcept { return prime_; }
    /// Weight lowered by one power of the ground generator: 1 over C, 2 over R.
    int weight_step() const noexcept { return base_ == Base::C ? 1 : 2; }
    Bidegree generator_degree() const noexcept { return {0, -weight_step()}; }
    std::string generator_name() const { return base_ == Base::C ? "tau" : "theta"; }
    /// l^i; throws RangeError on overflow.
    std::int64_t prime_power(int i) const;

    friend bool operator==(const GroundRing&, const GroundRing&) = default;

private:
    Base base_;
    std::uint32_t prime_;
};

Bidegree xi_degree(int i, const GroundRing& ring);   // (2l^i-2, l^i-1)
Bidegree tau_degree(int i, const GroundRing& ring);  // (2l^i-1, l^i-1)

/// Exponent record xi_1^{e_1} xi_2^{e_2} ... tau_{i_1} ... tau_{i_k} times a ground power.
/// Canonical order: ground power, then xi exponents lexicographically, then the tau index set.
struct Monomial {
    std::vector<std::uint32_t> xi;  // xi[i-1] is the exponent of xi_i; no trailing zeros
    std::uint64_t tau = 0;          // bit i set iff tau_i is present
    std::uint32_t ground = 0;

    static Monomial unit() { return {}; }
    static Monomial xi_power(int i, std::uint32_t e);
    static Monomial tau_gen(int i);

    bool is_unit() const noexcept { return xi.empty() && tau == 0 && ground == 0; }
    bool ground_free() const noexcept { return ground == 0; }
    int tau_count() const noexcept;
    /// Parity of the topological degree, which equals the tau-count parity.
    bool odd() const noexcept { return tau_count() % 2 == 1; }
    std::uint32_t xi_exponent(int i) const noexcept;
    std::vector<int> tau_indices() const;
    void trim();

    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
};

Bidegree bidegree(const Monomial& m, const GroundRing& ring);
std::string to_string(const Monomial& m, const GroundRing& ring);

/// Graded-commutative product. Returns nullopt when a tau_i repeats, otherwise (sign, monomial).
std::optional<std::pair<int, Monomial>> multiply(const Monomial& a, const Monomial& b);

/// Theta -> tau^2.
Monomial base_change(const Monomial& m);

/// Formal F_l-combination of pairs of monomials, canonically ordered, no zero terms.
class TensorExpression {
public:
    using Key = std::pair<Monomial, Monomial>;

    explicit TensorExpression(Residue modulus) : modulus_(modulus) {}

    void add(const Monomial& left, const Monomial& right, std::int64_t coeff);
    Residue modulus() const noexcept { return modulus_; }
    const std::map<Key, Residue>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    Residue coefficient(const Monomial& left, const Monomial& right) const;

    /// Product in A (x) A with the Koszul sign (a(x)b)(c(x)d) = (-1)^{|b||c|} ac (x) bd.
    TensorExpression operator*(const TensorExpression& other) const;

    friend bool operator==(const TensorExpression&, const TensorExpression&) = default;

private:
    Residue modulus_;
    std::map<Key, Residue> terms_;
};

std::string to_string(const TensorExpression& e, const GroundRing& ring);

/// Three-fold tensors, used by the coassociativity checks.
using TripleKey = std::tuple<Monomial, Monomial, Monomial>;
using TripleExpression = std::map<TripleKey, Residue>;

/// Monomial in the generators a_0, a_1, ... (or q_0, q_1, ...) of a polynomial comodule algebra.
struct PolyMonomial {
    std::vector<std::uint32_t> exponents;  // no trailing zeros

    static PolyMonomial generator(int i);
    int degree() const noexcept;
    void trim();
    friend bool operator==(const PolyMonomial&, const PolyMonomial&) = default;
    friend auto operator<=>(const PolyMonomial&, const PolyMonomial&) = default;
};

/// Element of P (x) M for a polynomial comodule algebra M.
using CoactionExpression = std::map<std::pair<Monomial, PolyMonomial>, Residue>;

struct EnumerationBounds {
    int s_max = 6;
    int t_max = 64;
    int u_abs_max = 64;
};

/// Monomial bases and structure maps of A, P and E over a ground ring.
/// Thread-safe: caches are populated idempotently under a shared mutex.
class DualSteenrod {
public:
    DualSteenrod(GroundRing ring, EnumerationBounds bounds = {});

    const GroundRing& ring() const noexcept { return ring_; }
    const EnumerationBounds& bounds() const noexcept { return bounds_; }

    /// All monomials of exact bidegree (t,u), ground powers included, canonically ordered.
    std::vector<Monomial> basis(Algebra alg, Bidegree degree, std::optional<int> tau_count = std::nullopt) const;

    /// Ground-free monomials of topological degree t (every weight).
    const std::vector<Monomial>& ground_free_basis(Algebra alg, int t) const;

    /// Coproduct. Over E the quotient coproduct (all xi_i, i >= 1, sent to zero).
    TensorExpression comult(const Monomial& m, Algebra alg) const;

    /// Coproduct minus m(x)1 and 1(x)m, for ground-free m.
    TensorExpression reduced_comult(const Monomial& m, Algebra alg) const;

    Residue counit(const Monomial& m) const noexcept { return m.xi.empty() && m.tau == 0 ? 1 : 0; }

    TripleExpression coassoc_left(const Monomial& m, Algebra alg) const;   // (Delta (x) id) Delta
    TripleExpression coassoc_right(const Monomial& m, Algebra alg) const;  // (id (x) Delta) Delta

    /// psi(a_n) = sum_i xi_{n-i}^{l^i} (x) a_i.
    CoactionExpression coaction_on_cotor_e(int n) const;
    /// Multiplicative extension of the above to any monomial in the a_i.
    CoactionExpression coaction_on_cotor_e(const PolyMonomial& m) const;

    /// Trigrade (1, 2l^i-1, l^i-1) of a_i as (s, t, u).
    std::tuple<int, int, int> a_trigrade(int i) const;

private:
    void check_bounds(Bidegree degree) const;
    TensorExpression comult_uncached(const Monomial& m, Algebra alg) const;

    GroundRing ring_;
    EnumerationBounds bounds_;
    mutable std::shared_mutex mutex_;
    mutable std::map<std::pair<Algebra, int>, std::shared_ptr<const std::vector<Monomial>>> basis_cache_;
    mutable std::map<std::pair<Algebra, Monomial>, std::shared_ptr<const TensorExpression>> comult_cache_;
};

}  // namespace manss::steenrod
