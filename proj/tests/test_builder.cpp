#include "manss/builder.hpp"
#include "manss/render.hpp"

#include <gtest/gtest.h>

using namespace manss;
using namespace manss::builder;
using chart::Exponent;
using chart::load_classical;
using chart::parse_classical;

namespace {

std::string fixture(const std::string& name) { return std::string(MANSS_FIXTURE_DIR) + "/" + name; }

const CyclicSummand& only(const MotivicChart& c, Position p)
{
    const auto& cell = c.entries.at(p);
    EXPECT_EQ(cell.summands.size(), 1u);
    return cell.summands.at(0);
}

const std::string coupled_target = R"(schema manss-classical/1
prime 3
[groups]
2 34 x 2
7 33 y 2
[differentials]
5 2 34 -> 7 33 src x tgt y matrix 3
)";

}  // namespace

TEST(BuildE2, WeightsAreHalfTheDegree)
{
    const auto e2 = build_e2(load_classical(fixture("l3-core.chart")), Base::C);
    EXPECT_EQ(e2.page, 2);
    EXPECT_EQ(only(e2, {1, 3}).gen_weight, 2);
    EXPECT_EQ(only(e2, {1, 7}).gen_weight, 4);
    EXPECT_EQ(only(e2, {2, 10}).gen_weight, 6);
    EXPECT_EQ(only(e2, {2, 34}).gen_weight, 18);
    EXPECT_EQ(only(e2, {7, 33}).gen_weight, 20);
    const auto& origin = only(e2, {0, 0});
    EXPECT_FALSE(origin.l_exp.has_value());
    EXPECT_FALSE(origin.tau_exp.has_value());
    EXPECT_EQ(origin.gen_weight, 0);
    EXPECT_FALSE(e2.meta.fixture_hash.empty());

    const auto l5 = build_e2(load_classical(fixture("l5-alpha1.chart")), Base::C);
    EXPECT_EQ(only(l5, {1, 7}).gen_weight, 4);
}

TEST(Propagate, LiftsTheCoreDifferential)
{
    const auto c = load_classical(fixture("l3-core.chart"));
    const auto state = run(c, Base::C);
    const auto einf = compute_einf(state);
    EXPECT_FALSE(einf.page.has_value());
    EXPECT_FALSE(einf.entries.contains({2, 34}));
    const auto& t = only(einf, {7, 33});
    EXPECT_EQ(t.l_exp, Exponent{1});
    EXPECT_EQ(t.tau_exp, Exponent{2});
    EXPECT_EQ(t.gen_weight, 20);
    EXPECT_TRUE(t.inert);
    ASSERT_EQ(state.log.size(), 1u);
    EXPECT_EQ(state.log[0].position, (Position{7, 33}));
    ASSERT_TRUE(state.log[0].summand.has_value());
    EXPECT_EQ(render::describe(*state.log[0].summand, einf), "Z/3[tau]/(tau^2)");
    EXPECT_TRUE(chart::validate_motivic(einf).empty());
}

TEST(Propagate, OverTheRealsUsesTheta)
{
    const auto c = load_classical(fixture("l3-core.chart"));
    const auto einf = compute_einf(run(c, Base::R));
    EXPECT_EQ(only(einf, {7, 33}).tau_exp, Exponent{1});
    auto changed = base_change(einf);
    auto direct = compute_einf(run(c, Base::C));
    EXPECT_EQ(changed.entries, direct.entries);
    EXPECT_EQ(changed.meta.options.at("base_change"), "R->C");
}

TEST(Propagate, PagesBetweenDifferentialsAreIdentity)
{
    const auto c = load_classical(fixture("l3-core.chart"));
    const auto s2 = start(c, Base::C);
    const auto s5 = propagate(s2, 5);
    EXPECT_EQ(s5.chart.entries, s2.chart.entries);
    EXPECT_EQ(s5.pending.size(), 1u);
    const auto s6 = propagate(s5, 6);
    EXPECT_TRUE(s6.pending.empty());
    EXPECT_NE(s6.chart.entries, s2.chart.entries);
    EXPECT_EQ(final_page(s2), 6);

    const auto empty = load_classical(fixture("empty.chart"));
    const auto e = run(empty, Base::C);
    EXPECT_EQ(compute_einf(e).entries, build_e2(empty, Base::C).entries);
}

TEST(Propagate, SequencingErrors)
{
    const auto c = load_classical(fixture("l3-core.chart"));
    const auto s2 = start(c, Base::C);
    EXPECT_THROW(propagate(s2, 2), SequencingError);
    EXPECT_THROW(compute_einf(s2), SequencingError);
    const auto s6 = propagate(s2, 6);
    EXPECT_THROW(propagate(s6, 5), SequencingError);
    auto stale = s6;
    stale.pending.push_back(c.differentials[0]);
    EXPECT_THROW(propagate(stale, 9), SequencingError);
}

TEST(Propagate, DifferentialOnTorsionIsRejected)
{
    const auto c = load_classical(fixture("l3-core.chart"));
    auto state = propagate(start(c, Base::C), 6);
    chart::ClassicalDifferential d;
    d.page = 9;
    d.source = {7, 33};
    d.target = {16, 32};
    d.source_labels = {"alpha_1*beta_1^3"};
    d.target_labels = {"z"};
    d.matrix = {{1}};
    state.chart.entries[{16, 32}].summands.push_back({1, chart::infinite, 24, "z", false});
    state.pending.push_back(d);
    EXPECT_THROW(propagate(state, 10), InvariantViolation);
}

TEST(Propagate, NonSplitTarget)
{
    const auto c = parse_classical(coupled_target);
    const auto state = run(c, Base::C);
    const auto einf = compute_einf(state);
    const auto& target = einf.entries.at({7, 33});
    EXPECT_TRUE(target.summands.empty());
    ASSERT_EQ(target.presented.size(), 1u);
    EXPECT_TRUE(target.presented[0].non_split);
    EXPECT_EQ(chart::slice(target, 20, 1, 3), (GroupType{Exponent{2}}));
    EXPECT_EQ(chart::slice(target, 18, 1, 3), (GroupType{Exponent{1}}));
    const auto& source = only(einf, {2, 34});
    EXPECT_EQ(source.l_exp, Exponent{1});
    EXPECT_FALSE(source.tau_exp.has_value());
    ASSERT_EQ(state.log.size(), 1u);
    EXPECT_FALSE(state.log[0].summand.has_value());
    EXPECT_TRUE(chart::validate_motivic(einf).empty());
}

TEST(Propagate, ZeroImageChangesNothing)
{
    const auto c = parse_classical("schema manss-classical/1\nprime 3\n[groups]\n2 34 x 1\n7 33 y 1\n"
                                   "[differentials]\n5 2 34 -> 7 33 src x tgt y matrix 0\n");
    EXPECT_EQ(compute_einf(run(c, Base::C)).entries, build_e2(c, Base::C).entries);
}

TEST(Realize, WeightZeroIsClassicalEInfinity)
{
    for (const char* name : {"l3-core.chart", "empty.chart", "l5-alpha1.chart"}) {
        const auto c = load_classical(fixture(name));
        const auto einf = compute_einf(run(c, Base::C));
        EXPECT_EQ(group_types(realize_weight0(einf)), group_types(classical_page(c, std::nullopt))) << name;
    }
    const auto c = parse_classical(coupled_target);
    EXPECT_EQ(group_types(realize_weight0(compute_einf(run(c, Base::C)))),
              group_types(classical_page(c, std::nullopt)));
    EXPECT_THROW(realize_weight0(compute_einf(run(c, Base::R))), ConfigurationError);
}

TEST(ClassicalPage, CoreFixture)
{
    const auto c = load_classical(fixture("l3-core.chart"));
    const auto e5 = group_types(classical_page(c, 5));
    const auto einf = group_types(classical_page(c, std::nullopt));
    EXPECT_TRUE(e5.contains({2, 34}));
    EXPECT_FALSE(einf.contains({2, 34}));
    EXPECT_FALSE(einf.contains({7, 33}));
    EXPECT_EQ(einf.at({1, 3}), (GroupType{Exponent{1}}));
}

TEST(Query, CoreFixture)
{
    const auto einf = compute_einf(run(load_classical(fixture("l3-core.chart")), Base::C));
    auto at = [](const PiQuery& q, int s) -> GroupType {
        for (const auto& [f, g] : q.groups)
            if (f == s)
                return g;
        return {};
    };
    const auto q5 = query_pi(einf, 5, 6);
    EXPECT_TRUE(q5.groups.empty());
    const auto q0 = query_pi(einf, 0, 0);
    EXPECT_EQ(at(q0, 0), (GroupType{chart::infinite}));
    EXPECT_TRUE(q0.tau_stable);
    EXPECT_EQ(at(query_pi(einf, 33, 20), 7), (GroupType{Exponent{1}}));
    EXPECT_EQ(at(query_pi(einf, 33, 19), 7), (GroupType{Exponent{1}}));
    EXPECT_TRUE(at(query_pi(einf, 33, 18), 7).empty());
    EXPECT_FALSE(query_pi(einf, 33, 20).tau_stable);
    EXPECT_EQ(at(query_pi(einf, 3, 2), 1), (GroupType{Exponent{1}}));
    EXPECT_EQ(at(query_pi(einf, 3, -5), 1), (GroupType{Exponent{1}}));
    EXPECT_TRUE(query_pi(einf, 3, 2).tau_stable);
    EXPECT_FALSE(query_pi(einf, 3, 3).tau_stable);
}

TEST(Query, StableRegion)
{
    EXPECT_TRUE(tau_stable_region(0, 0));
    EXPECT_FALSE(tau_stable_region(0, 1));
    EXPECT_TRUE(tau_stable_region(10, 6));
    EXPECT_FALSE(tau_stable_region(10, 7));
}

TEST(Log, MentionsTheTorsion)
{
    const auto state = run(load_classical(fixture("l3-core.chart")), Base::C);
    const auto log = format_log(state);
    EXPECT_NE(log.find("Z/3[tau]/(tau^2)"), std::string::npos);
    EXPECT_NE(log.find("(7,33)"), std::string::npos);
}
