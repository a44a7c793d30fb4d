#include "manss/errors.hpp"
#include "manss/steenrod_dual.hpp"

#include <gtest/gtest.h>

#include <cstdint>
#include <functional>
#include <vector>

using namespace manss;
using namespace manss::steenrod;

namespace {

// Count exponent vectors with sum of degrees t and the given weight, without the library enumerator.
int brute_count(Algebra alg, int l, int t, int u, int step)
{
    std::vector<std::pair<int, int>> xi_deg, tau_deg;
    std::int64_t p = 1;
    for (int i = 0; 2 * p - 2 <= t; ++i, p *= l) {
        if (i >= 1 && alg != Algebra::E)
            xi_deg.push_back({static_cast<int>(2 * p - 2), static_cast<int>(p - 1)});
        if (alg != Algebra::P && 2 * p - 1 <= t)
            tau_deg.push_back({static_cast<int>(2 * p - 1), static_cast<int>(p - 1)});
    }
    int count = 0;
    std::function<void(std::size_t, int, int)> tau_rec = [&](std::size_t k, int tt, int w) {
        if (k == tau_deg.size()) {
            if (tt == t && w >= u && (w - u) % step == 0)
                ++count;
            return;
        }
        tau_rec(k + 1, tt, w);
        tau_rec(k + 1, tt + tau_deg[k].first, w + tau_deg[k].second);
    };
    std::function<void(std::size_t, int, int)> xi_rec = [&](std::size_t k, int tt, int w) {
        if (tt > t)
            return;
        if (k == xi_deg.size()) {
            tau_rec(0, tt, w);
            return;
        }
        for (int e = 0; tt + e * xi_deg[k].first <= t; ++e)
            xi_rec(k + 1, tt + e * xi_deg[k].first, w + e * xi_deg[k].second);
    };
    xi_rec(0, 0, 0);
    return count;
}

Monomial xi(int i, std::uint32_t e = 1) { return Monomial::xi_power(i, e); }
Monomial tau(int i) { return Monomial::tau_gen(i); }

Monomial product(const Monomial& a, const Monomial& b)
{
    auto r = multiply(a, b);
    EXPECT_TRUE(r.has_value());
    return r->second;
}

}  // namespace

TEST(GroundRing, RejectsEvenPrime)
{
    EXPECT_THROW(GroundRing(Base::C, 2), ConfigurationError);
    EXPECT_THROW(GroundRing(Base::C, 9), ConfigurationError);
    EXPECT_NO_THROW(GroundRing(Base::R, 5));
}

TEST(GroundRing, GeneratorDegrees)
{
    GroundRing c(Base::C, 3);
    GroundRing r(Base::R, 3);
    EXPECT_EQ(c.weight_step(), 1);
    EXPECT_EQ(r.weight_step(), 2);
    EXPECT_EQ(xi_degree(1, c), (Bidegree{4, 2}));
    EXPECT_EQ(tau_degree(0, c), (Bidegree{1, 0}));
    EXPECT_EQ(tau_degree(2, c), (Bidegree{17, 8}));
}

TEST(Monomial, ProductSignsAndVanishing)
{
    auto t01 = multiply(tau(0), tau(1));
    auto t10 = multiply(tau(1), tau(0));
    ASSERT_TRUE(t01 && t10);
    EXPECT_EQ(t01->second, t10->second);
    EXPECT_EQ(t01->first, -t10->first);
    EXPECT_FALSE(multiply(tau(1), tau(1)).has_value());
    auto x = multiply(xi(1, 2), xi(1, 3));
    ASSERT_TRUE(x);
    EXPECT_EQ(x->second, xi(1, 5));
    EXPECT_EQ(x->first, 1);
}

class BasisCount : public ::testing::TestWithParam<std::tuple<Algebra, int, Base>> {};

TEST_P(BasisCount, MatchesBruteForce)
{
    const auto [alg, l, base] = GetParam();
    DualSteenrod a(GroundRing(base, static_cast<std::uint32_t>(l)), {6, 40, 40});
    const int step = base == Base::C ? 1 : 2;
    for (int t = 0; t <= 40; ++t)
        for (int u = -4; u <= 20; ++u)
            EXPECT_EQ(static_cast<int>(a.basis(alg, {t, u}).size()), brute_count(alg, l, t, u, step))
                << "t=" << t << " u=" << u;
}

INSTANTIATE_TEST_SUITE_P(Algebras, BasisCount,
                         ::testing::Combine(::testing::Values(Algebra::A, Algebra::P, Algebra::E),
                                            ::testing::Values(3, 5), ::testing::Values(Base::C, Base::R)));

TEST(Basis, OutOfBounds)
{
    DualSteenrod a(GroundRing(Base::C, 3), {4, 20, 20});
    EXPECT_THROW(a.basis(Algebra::A, {21, 0}), RangeError);
    EXPECT_THROW(a.ground_free_basis(Algebra::A, -1), RangeError);
}

TEST(Coproduct, Generators)
{
    DualSteenrod a(GroundRing(Base::C, 3));
    const auto one = Monomial::unit();

    TensorExpression d1(3);
    d1.add(xi(1), one, 1);
    d1.add(one, xi(1), 1);
    EXPECT_EQ(a.comult(xi(1), Algebra::A), d1);

    TensorExpression d2(3);
    d2.add(xi(2), one, 1);
    d2.add(xi(1, 3), xi(1), 1);
    d2.add(one, xi(2), 1);
    EXPECT_EQ(a.comult(xi(2), Algebra::A), d2);

    TensorExpression dt(3);
    dt.add(tau(1), one, 1);
    dt.add(xi(1), tau(0), 1);
    dt.add(one, tau(1), 1);
    EXPECT_EQ(a.comult(tau(1), Algebra::A), dt);
}

TEST(Coproduct, KoszulSign)
{
    DualSteenrod a(GroundRing(Base::C, 3));
    const auto m = product(tau(0), tau(1));
    const auto d = a.comult(m, Algebra::A);
    EXPECT_EQ(d.coefficient(tau(0), tau(1)), 1u);
    EXPECT_EQ(d.coefficient(tau(1), tau(0)), 2u);
    EXPECT_EQ(d.coefficient(product(xi(1), tau(0)), tau(0)), 1u);
}

TEST(Coproduct, QuotientDropsXi)
{
    DualSteenrod a(GroundRing(Base::C, 3));
    const auto d = a.comult(tau(1), Algebra::E);
    EXPECT_EQ(d.size(), 2u);
    EXPECT_EQ(d.coefficient(xi(1), tau(0)), 0u);
    EXPECT_THROW(a.comult(xi(1), Algebra::E), ConfigurationError);
    EXPECT_THROW(a.comult(tau(0), Algebra::P), ConfigurationError);
}

TEST(Coproduct, ReducedNeedsPositiveDegree)
{
    DualSteenrod a(GroundRing(Base::C, 3));
    EXPECT_THROW(a.reduced_comult(Monomial::unit(), Algebra::A), ConfigurationError);
    EXPECT_EQ(a.reduced_comult(xi(1), Algebra::A).size(), 0u);
}

class Coassociativity : public ::testing::TestWithParam<std::tuple<Algebra, int>> {};

TEST_P(Coassociativity, AllMonomials)
{
    const auto [alg, l] = GetParam();
    DualSteenrod a(GroundRing(Base::C, static_cast<std::uint32_t>(l)), {6, 30, 30});
    int checked = 0;
    for (int t = 0; t <= 30; ++t)
        for (const auto& m : a.ground_free_basis(alg, t)) {
            EXPECT_EQ(a.coassoc_left(m, alg), a.coassoc_right(m, alg)) << to_string(m, a.ring());
            // counit on either side recovers m
            const auto d = a.comult(m, alg);
            Residue left = 0, right = 0;
            for (const auto& [key, c] : d.terms()) {
                if (key.first == m && a.counit(key.second) == 1)
                    right = (right + c) % l;
                if (key.second == m && a.counit(key.first) == 1)
                    left = (left + c) % l;
            }
            EXPECT_EQ(left, 1u);
            EXPECT_EQ(right, 1u);
            ++checked;
        }
    EXPECT_GT(checked, 3);
}

INSTANTIATE_TEST_SUITE_P(Algebras, Coassociativity,
                         ::testing::Combine(::testing::Values(Algebra::A, Algebra::P, Algebra::E),
                                            ::testing::Values(3, 5)));

TEST(BaseChange, ThetaBecomesTauSquared)
{
    Monomial m = xi(1);
    m.ground = 3;
    const auto c = base_change(m);
    EXPECT_EQ(c.ground, 6u);
    EXPECT_EQ(c.xi, m.xi);
    GroundRing r(Base::R, 3);
    GroundRing cc(Base::C, 3);
    EXPECT_EQ(bidegree(m, r).u, 2 - 6);
    EXPECT_EQ(bidegree(c, cc).u, 2 - 6);
}

TEST(Coaction, OnCotorGenerators)
{
    DualSteenrod a(GroundRing(Base::C, 3));
    const auto psi = a.coaction_on_cotor_e(2);
    EXPECT_EQ(psi.size(), 3u);
    EXPECT_EQ(psi.at({xi(2), PolyMonomial::generator(0)}), 1u);
    EXPECT_EQ(psi.at({xi(1, 3), PolyMonomial::generator(1)}), 1u);
    EXPECT_EQ(psi.at({Monomial::unit(), PolyMonomial::generator(2)}), 1u);
    EXPECT_EQ(a.a_trigrade(1), std::make_tuple(1, 5, 2));
}
