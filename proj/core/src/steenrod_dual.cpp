#include "manss/steenrod_dual.hpp"

#include "manss/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <mutex>

namespace manss::steenrod {

std::string to_string(Base b)
{
    return b == Base::C ? "C" : "R";
}

std::string to_string(Algebra a)
{
    switch (a) {
    case Algebra::A:
        return "A";
    case Algebra::P:
        return "P";
    case Algebra::E:
        return "E";
    }
    return "?";
}

Base parse_base(const std::string& s)
{
    if (s == "C" || s == "c")
        return Base::C;
    if (s == "R" || s == "r")
        return Base::R;
    throw ConfigurationError(fmt::format("unknown base field '{}' (expected C or R)", s));
}

Algebra parse_algebra(const std::string& s)
{
    if (s == "A")
        return Algebra::A;
    if (s == "P")
        return Algebra::P;
    if (s == "E")
        return Algebra::E;
    throw ConfigurationError(fmt::format("unknown Hopf algebra '{}' (expected A, P or E)", s));
}

GroundRing::GroundRing(Base base, std::uint32_t prime) : base_(base), prime_(prime)
{
    linalg::require_odd_prime(prime);
}

std::int64_t GroundRing::prime_power(int i) const
{
    std::int64_t p = 1;
    for (int k = 0; k < i; ++k) {
        if (p > (std::int64_t{1} << 40))
            throw RangeError(fmt::format("{}^{} overflows the supported degree range", prime_, i));
        p *= prime_;
    }
    return p;
}

Bidegree xi_degree(int i, const GroundRing& ring)
{
    const auto p = ring.prime_power(i);
    return {static_cast<int>(2 * p - 2), static_cast<int>(p - 1)};
}

Bidegree tau_degree(int i, const GroundRing& ring)
{
    const auto p = ring.prime_power(i);
    return {static_cast<int>(2 * p - 1), static_cast<int>(p - 1)};
}

// ---------------------------------------------------------------------------

Monomial Monomial::xi_power(int i, std::uint32_t e)
{
    Monomial m;
    if (i == 0 || e == 0)
        return m;
    m.xi.assign(static_cast<std::size_t>(i), 0);
    m.xi[static_cast<std::size_t>(i - 1)] = e;
    return m;
}

Monomial Monomial::tau_gen(int i)
{
    Monomial m;
    m.tau = std::uint64_t{1} << i;
    return m;
}

int Monomial::tau_count() const noexcept
{
    return std::popcount(tau);
}

std::uint32_t Monomial::xi_exponent(int i) const noexcept
{
    return (i >= 1 && static_cast<std::size_t>(i) <= xi.size()) ? xi[static_cast<std::size_t>(i - 1)] : 0;
}

std::vector<int> Monomial::tau_indices() const
{
    std::vector<int> out;
    for (int i = 0; i < 64; ++i)
        if (tau >> i & 1)
            out.push_back(i);
    return out;
}

void Monomial::trim()
{
    while (!xi.empty() && xi.back() == 0)
        xi.pop_back();
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b)
{
    if (auto c = a.ground <=> b.ground; c != 0)
        return c;
    if (auto c = a.xi <=> b.xi; c != 0)
        return c;
    return a.tau_indices() <=> b.tau_indices();
}

Bidegree bidegree(const Monomial& m, const GroundRing& ring)
{
    Bidegree d{0, -static_cast<int>(m.ground) * ring.weight_step()};
    for (std::size_t i = 0; i < m.xi.size(); ++i) {
        const auto g = xi_degree(static_cast<int>(i + 1), ring);
        d.t += g.t * static_cast<int>(m.xi[i]);
        d.u += g.u * static_cast<int>(m.xi[i]);
    }
    for (int i : m.tau_indices())
        d += tau_degree(i, ring);
    return d;
}

std::string to_string(const Monomial& m, const GroundRing& ring)
{
    if (m.is_unit())
        return "1";
    std::vector<std::string> parts;
    if (m.ground)
        parts.push_back(m.ground == 1 ? ring.generator_name() : fmt::format("{}^{}", ring.generator_name(), m.ground));
    for (std::size_t i = 0; i < m.xi.size(); ++i) {
        if (!m.xi[i])
            continue;
        parts.push_back(m.xi[i] == 1 ? fmt::format("xi_{}", i + 1) : fmt::format("xi_{}^{}", i + 1, m.xi[i]));
    }
    for (int i : m.tau_indices())
        parts.push_back(fmt::format("tau_{}", i));
    return fmt::format("{}", fmt::join(parts, " "));
}

std::optional<std::pair<int, Monomial>> multiply(const Monomial& a, const Monomial& b)
{
    if (a.tau & b.tau)
        return std::nullopt;
    // moving each tau_j of b left past the tau_i of a with i > j
    int swaps = 0;
    for (int j : b.tau_indices())
        swaps += std::popcount(a.tau >> (j + 1));
    Monomial out;
    out.ground = a.ground + b.ground;
    out.tau = a.tau | b.tau;
    out.xi.assign(std::max(a.xi.size(), b.xi.size()), 0);
    for (std::size_t i = 0; i < out.xi.size(); ++i)
        out.xi[i] = (i < a.xi.size() ? a.xi[i] : 0) + (i < b.xi.size() ? b.xi[i] : 0);
    out.trim();
    return std::pair{swaps % 2 ? -1 : 1, std::move(out)};
}

Monomial base_change(const Monomial& m)
{
    Monomial out = m;
    out.ground = 2 * m.ground;
    return out;
}

// ---------------------------------------------------------------------------

void TensorExpression::add(const Monomial& left, const Monomial& right, std::int64_t coeff)
{
    const auto l = static_cast<std::int64_t>(modulus_);
    auto c = static_cast<Residue>(((coeff % l) + l) % l);
    if (!c)
        return;
    auto [it, inserted] = terms_.try_emplace({left, right}, c);
    if (!inserted) {
        it->second = (it->second + c) % modulus_;
        if (!it->second)
            terms_.erase(it);
    }
}

Residue TensorExpression::coefficient(const Monomial& left, const Monomial& right) const
{
    auto it = terms_.find({left, right});
    return it == terms_.end() ? 0 : it->second;
}

TensorExpression TensorExpression::operator*(const TensorExpression& other) const
{
    TensorExpression out(modulus_);
    for (const auto& [k1, c1] : terms_)
        for (const auto& [k2, c2] : other.terms_) {
            auto left = multiply(k1.first, k2.first);
            if (!left)
                continue;
            auto right = multiply(k1.second, k2.second);
            if (!right)
                continue;
            int sign = left->first * right->first;
            if (k1.second.odd() && k2.first.odd())
                sign = -sign;
            out.add(left->second, right->second,
                    sign * static_cast<std::int64_t>(std::uint64_t{c1} * c2 % modulus_));
        }
    return out;
}

std::string to_string(const TensorExpression& e, const GroundRing& ring)
{
    if (e.terms().empty())
        return "0";
    std::vector<std::string> parts;
    for (const auto& [k, c] : e.terms()) {
        auto body = fmt::format("{} (x) {}", to_string(k.first, ring), to_string(k.second, ring));
        parts.push_back(c == 1 ? body : fmt::format("{}*{}", c, body));
    }
    return fmt::format("{}", fmt::join(parts, " + "));
}

PolyMonomial PolyMonomial::generator(int i)
{
    PolyMonomial m;
    m.exponents.assign(static_cast<std::size_t>(i + 1), 0);
    m.exponents.back() = 1;
    return m;
}

int PolyMonomial::degree() const noexcept
{
    int d = 0;
    for (auto e : exponents)
        d += static_cast<int>(e);
    return d;
}

void PolyMonomial::trim()
{
    while (!exponents.empty() && exponents.back() == 0)
        exponents.pop_back();
}

// ---------------------------------------------------------------------------

DualSteenrod::DualSteenrod(GroundRing ring, EnumerationBounds bounds) : ring_(ring), bounds_(bounds) {}

void DualSteenrod::check_bounds(Bidegree degree) const
{
    if (degree.t < 0 || degree.t > bounds_.t_max || std::abs(degree.u) > bounds_.u_abs_max)
        throw RangeError(fmt::format("bidegree ({},{}) outside enumeration bounds t<={}, |u|<={}", degree.t,
                                     degree.u, bounds_.t_max, bounds_.u_abs_max));
}

namespace {

struct Generator {
    bool is_xi;
    int index;
    int t;
};

std::vector<Generator> generators_up_to(Algebra alg, int t, const GroundRing& ring)
{
    std::vector<Generator> gens;
    for (int i = 0;; ++i) {
        const auto p = ring.prime_power(i);
        if (2 * p - 2 > t)
            break;
        if (i >= 1 && alg != Algebra::E)
            gens.push_back({true, i, static_cast<int>(2 * p - 2)});
        if (2 * p - 1 <= t && alg != Algebra::P)
            gens.push_back({false, i, static_cast<int>(2 * p - 1)});
    }
    return gens;
}

void enumerate(const std::vector<Generator>& gens, std::size_t k, int remaining, Monomial& cur,
               std::vector<Monomial>& out)
{
    if (remaining == 0) {
        Monomial m = cur;
        m.trim();
        out.push_back(std::move(m));
        return;
    }
    if (k == gens.size())
        return;
    const auto& g = gens[k];
    if (g.is_xi) {
        auto& slot = cur.xi[static_cast<std::size_t>(g.index - 1)];
        for (int e = 0; e * g.t <= remaining; ++e) {
            slot = static_cast<std::uint32_t>(e);
            enumerate(gens, k + 1, remaining - e * g.t, cur, out);
        }
        slot = 0;
    }
    else {
        enumerate(gens, k + 1, remaining, cur, out);
        if (g.t <= remaining) {
            cur.tau |= std::uint64_t{1} << g.index;
            enumerate(gens, k + 1, remaining - g.t, cur, out);
            cur.tau &= ~(std::uint64_t{1} << g.index);
        }
    }
}

}  // namespace

const std::vector<Monomial>& DualSteenrod::ground_free_basis(Algebra alg, int t) const
{
    if (t < 0 || t > bounds_.t_max)
        throw RangeError(fmt::format("degree t={} outside enumeration bound t<={}", t, bounds_.t_max));
    {
        std::shared_lock lock(mutex_);
        if (auto it = basis_cache_.find({alg, t}); it != basis_cache_.end())
            return *it->second;
    }
    const auto gens = generators_up_to(alg, t, ring_);
    Monomial cur;
    int max_xi = 0;
    for (const auto& g : gens)
        if (g.is_xi)
            max_xi = std::max(max_xi, g.index);
    cur.xi.assign(static_cast<std::size_t>(max_xi), 0);
    std::vector<Monomial> out;
    enumerate(gens, 0, t, cur, out);
    std::sort(out.begin(), out.end());
    auto shared = std::make_shared<const std::vector<Monomial>>(std::move(out));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = basis_cache_.try_emplace({alg, t}, shared);
    return *it->second;
}

std::vector<Monomial> DualSteenrod::basis(Algebra alg, Bidegree degree, std::optional<int> tau_count) const
{
    check_bounds(degree);
    const int step = ring_.weight_step();
    std::vector<Monomial> out;
    for (const auto& m : ground_free_basis(alg, degree.t)) {
        if (tau_count && m.tau_count() != *tau_count)
            continue;
        const int w = bidegree(m, ring_).u;
        const int gap = w - degree.u;
        if (gap < 0 || gap % step != 0)
            continue;
        Monomial g = m;
        g.ground = static_cast<std::uint32_t>(gap / step);
        out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end());
    return out;
}

TensorExpression DualSteenrod::comult_uncached(const Monomial& m, Algebra alg) const
{
    const Residue l = ring_.prime();
    if (alg == Algebra::P && m.tau)
        throw ConfigurationError("monomial with exterior generators is not in P");
    if (alg == Algebra::E && !m.xi.empty())
        throw ConfigurationError("monomial with polynomial generators is not in E");

    TensorExpression result(l);
    {
        Monomial g;
        g.ground = m.ground;
        result.add(g, Monomial::unit(), 1);
    }
    auto keep = [alg](const Monomial& left) { return alg != Algebra::E || left.xi.empty(); };

    for (std::size_t idx = 0; idx < m.xi.size(); ++idx) {
        const int n = static_cast<int>(idx + 1);
        TensorExpression gen(l);
        for (int i = 0; i <= n; ++i) {
            auto left = Monomial::xi_power(n - i, static_cast<std::uint32_t>(ring_.prime_power(i)));
            if (keep(left))
                gen.add(left, Monomial::xi_power(i, 1), 1);
        }
        for (std::uint32_t e = 0; e < m.xi[idx]; ++e)
            result = result * gen;
    }
    for (int n : m.tau_indices()) {
        TensorExpression gen(l);
        gen.add(Monomial::tau_gen(n), Monomial::unit(), 1);
        for (int i = 0; i <= n; ++i) {
            auto left = Monomial::xi_power(n - i, static_cast<std::uint32_t>(ring_.prime_power(i)));
            if (keep(left))
                gen.add(left, Monomial::tau_gen(i), 1);
        }
        result = result * gen;
    }
    return result;
}

TensorExpression DualSteenrod::comult(const Monomial& m, Algebra alg) const
{
    {
        std::shared_lock lock(mutex_);
        if (auto it = comult_cache_.find({alg, m}); it != comult_cache_.end())
            return *it->second;
    }
    auto value = std::make_shared<const TensorExpression>(comult_uncached(m, alg));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = comult_cache_.try_emplace({alg, m}, value);
    return *it->second;
}

TensorExpression DualSteenrod::reduced_comult(const Monomial& m, Algebra alg) const
{
    if (!m.ground_free() || m.is_unit())
        throw ConfigurationError("reduced coproduct needs a ground-free positive-degree monomial");
    TensorExpression full = comult(m, alg);
    full.add(m, Monomial::unit(), -1);
    full.add(Monomial::unit(), m, -1);
    return full;
}

namespace {

void add_triple(TripleExpression& e, TripleKey key, std::int64_t c, Residue l)
{
    const auto li = static_cast<std::int64_t>(l);
    auto r = static_cast<Residue>(((c % li) + li) % li);
    if (!r)
        return;
    auto [it, inserted] = e.try_emplace(std::move(key), r);
    if (!inserted) {
        it->second = (it->second + r) % l;
        if (!it->second)
            e.erase(it);
    }
}

}  // namespace

TripleExpression DualSteenrod::coassoc_left(const Monomial& m, Algebra alg) const
{
    const Residue l = ring_.prime();
    TripleExpression out;
    const auto outer = comult(m, alg);
    for (const auto& [k, c] : outer.terms()) {
        const auto inner = comult(k.first, alg);
        for (const auto& [k2, c2] : inner.terms())
            add_triple(out, {k2.first, k2.second, k.second}, static_cast<std::int64_t>(std::uint64_t{c} * c2 % l), l);
    }
    return out;
}

TripleExpression DualSteenrod::coassoc_right(const Monomial& m, Algebra alg) const
{
    const Residue l = ring_.prime();
    TripleExpression out;
    const auto outer = comult(m, alg);
    for (const auto& [k, c] : outer.terms()) {
        const auto inner = comult(k.second, alg);
        for (const auto& [k2, c2] : inner.terms())
            add_triple(out, {k.first, k2.first, k2.second}, static_cast<std::int64_t>(std::uint64_t{c} * c2 % l), l);
    }
    return out;
}

namespace {

CoactionExpression multiply(const CoactionExpression& a, const CoactionExpression& b, Residue l)
{
    CoactionExpression out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) {
            auto h = steenrod::multiply(ka.first, kb.first);
            if (!h)
                continue;
            PolyMonomial m;
            m.exponents.assign(std::max(ka.second.exponents.size(), kb.second.exponents.size()), 0);
            for (std::size_t i = 0; i < m.exponents.size(); ++i)
                m.exponents[i] = (i < ka.second.exponents.size() ? ka.second.exponents[i] : 0) +
                                 (i < kb.second.exponents.size() ? kb.second.exponents[i] : 0);
            m.trim();
            const auto li = static_cast<std::int64_t>(l);
            std::int64_t c = static_cast<std::int64_t>(std::uint64_t{ca} * cb % l) * h->first;
            auto r = static_cast<Residue>(((c % li) + li) % li);
            auto [it, inserted] = out.try_emplace({h->second, m}, r);
            if (!inserted)
                it->second = (it->second + r) % l;
            if (!it->second)
                out.erase(it);
        }
    return out;
}

}  // namespace

CoactionExpression DualSteenrod::coaction_on_cotor_e(int n) const
{
    CoactionExpression out;
    for (int i = 0; i <= n; ++i)
        out[{Monomial::xi_power(n - i, static_cast<std::uint32_t>(ring_.prime_power(i))), PolyMonomial::generator(i)}] = 1;
    return out;
}

CoactionExpression DualSteenrod::coaction_on_cotor_e(const PolyMonomial& m) const
{
    CoactionExpression out;
    out[{Monomial::unit(), PolyMonomial{}}] = 1;
    for (std::size_t i = 0; i < m.exponents.size(); ++i) {
        const auto gen = coaction_on_cotor_e(static_cast<int>(i));
        for (std::uint32_t e = 0; e < m.exponents[i]; ++e)
            out = multiply(out, gen, ring_.prime());
    }
    return out;
}

std::tuple<int, int, int> DualSteenrod::a_trigrade(int i) const
{
    const auto d = tau_degree(i, ring_);
    return {1, d.t, d.u};
}

}  // namespace manss::steenrod
