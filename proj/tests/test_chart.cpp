#include "manss/builder.hpp"
#include "manss/chart.hpp"
#include "manss/verify.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

using namespace manss;
using namespace manss::chart;

namespace {

std::string fixture(const std::string& name) { return std::string(MANSS_FIXTURE_DIR) + "/" + name; }

std::string read(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GroupType sorted(GroupType g)
{
    std::sort(g.begin(), g.end(), [](const Exponent& a, const Exponent& b) {
        if (!a || !b)
            return a.has_value() && !b.has_value();
        return *a < *b;
    });
    return g;
}

GroupType append(GroupType a, const GroupType& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return sorted(a);
}

PresentedEntry single(int w, Exponent l_exp, std::vector<Relation> rels)
{
    PresentedEntry e;
    e.generators.push_back({w, "x", l_exp});
    e.relations = std::move(rels);
    return e;
}

}  // namespace

TEST(ClassicalFormat, ParsesCoreFixture)
{
    const auto c = load_classical(fixture("l3-core.chart"));
    EXPECT_EQ(c.prime, 3u);
    EXPECT_EQ(c.name, "l3-core");
    EXPECT_EQ(c.groups.size(), 6u);
    ASSERT_TRUE(c.groups.contains({0, 0}));
    EXPECT_FALSE(c.groups.at({0, 0})[0].l_exp.has_value());
    EXPECT_EQ(c.groups.at({0, 0})[0].note, "completed on load");
    ASSERT_EQ(c.differentials.size(), 1u);
    const auto& d = c.differentials[0];
    EXPECT_EQ(d.page, 5);
    EXPECT_EQ(d.source, (Position{2, 34}));
    EXPECT_EQ(d.target, (Position{7, 33}));
    EXPECT_TRUE(d.unit_unknown);
    EXPECT_EQ(d.matrix, (std::vector<std::vector<std::int64_t>>{{1}}));
}

TEST(ClassicalFormat, EmptyFixtureHasOnlyTheOrigin)
{
    const auto c = load_classical(fixture("empty.chart"));
    ASSERT_EQ(c.groups.size(), 1u);
    EXPECT_TRUE(c.differentials.empty());
}

TEST(ClassicalFormat, CorruptFixtureNamesTheCell)
{
    try {
        load_classical(fixture("corrupt-sparseness.chart"));
        FAIL() << "expected ValidationError";
    }
    catch (const ValidationError& e) {
        ASSERT_EQ(e.violations().size(), 1u);
        EXPECT_EQ(e.violations()[0].rule, "sparseness");
        EXPECT_EQ(e.violations()[0].s, 1);
        EXPECT_EQ(e.violations()[0].stem, 5);
    }
}

TEST(ClassicalFormat, ListsEveryViolation)
{
    const std::string text = "schema manss-classical/1\nprime 3\n[groups]\n1 5 x 1\n3 1 y 1\n2 10 z inf\n";
    try {
        parse_classical(text);
        FAIL();
    }
    catch (const ValidationError& e) {
        std::vector<std::string> rules;
        for (const auto& v : e.violations())
            rules.push_back(v.rule);
        EXPECT_NE(std::find(rules.begin(), rules.end(), "sparseness"), rules.end());
        EXPECT_NE(std::find(rules.begin(), rules.end(), "vanishing-line"), rules.end());
        EXPECT_NE(std::find(rules.begin(), rules.end(), "finite-group"), rules.end());
    }
}

TEST(ClassicalFormat, RejectsPrimeTwoAndReportsLines)
{
    EXPECT_THROW(parse_classical("schema manss-classical/1\nprime 2\n"), ConfigurationError);
    EXPECT_THROW(parse_classical("schema manss-classical/1\nprime 15\n"), ConfigurationError);
    try {
        parse_classical("schema manss-classical/1\nprime 3\n[groups]\n1 3 alpha_1 one\n");
        FAIL();
    }
    catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4);
    }
    try {
        parse_classical("schema manss-classical/1\nprime 3\n[stuff]\n");
        FAIL();
    }
    catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
}

TEST(ClassicalFormat, DifferentialRules)
{
    const std::string head = "schema manss-classical/1\nprime 3\n[groups]\n1 3 a 1\n1 7 b 1\n6 6 c 1\n2 10 d 1\n";
    auto rules_of = [&](const std::string& diff) {
        std::vector<std::string> out;
        try {
            parse_classical(head + "[differentials]\n" + diff);
        }
        catch (const ValidationError& e) {
            for (const auto& v : e.violations())
                out.push_back(v.rule);
        }
        return out;
    };
    auto has = [&](const std::string& diff, const std::string& rule) {
        const auto r = rules_of(diff);
        return std::find(r.begin(), r.end(), rule) != r.end();
    };
    EXPECT_TRUE(rules_of("5 1 7 -> 6 6 src b tgt c matrix unit\n").empty());
    EXPECT_TRUE(has("3 1 7 -> 6 6 src b tgt c matrix unit\n", "page-congruence"));
    EXPECT_TRUE(has("5 1 7 -> 6 5 src b tgt c matrix unit\n", "differential-target"));
    EXPECT_TRUE(has("5 1 7 -> 6 6 src b tgt e matrix unit\n", "unknown-generator"));
    EXPECT_TRUE(has("5 1 7 -> 6 6 src b tgt c matrix 3\n", "matrix-bound"));
    EXPECT_TRUE(has("5 1 7 -> 6 6 src b tgt c matrix unit\n5 1 7 -> 6 6 src b tgt c matrix unit\n",
                    "generator-reuse"));
}

TEST(ClassicalFormat, RoundTrip)
{
    const auto c = load_classical(fixture("l3-core.chart"));
    EXPECT_EQ(parse_classical(write_classical(c)), c);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto r = verify::random_chart(seed);
        EXPECT_EQ(parse_classical(write_classical(r), r.name), r) << seed;
    }
}

TEST(MotivicFormat, JsonCellForAlphaOne)
{
    const auto c = load_classical(fixture("l3-core.chart"));
    const auto e2 = builder::build_e2(c, Base::C);
    const auto doc = nlohmann::json::parse(save_chart(e2, Format::Json));
    EXPECT_EQ(doc["meta"]["schema"], "manss-chart/1");
    EXPECT_EQ(doc["meta"]["base"], "C");
    EXPECT_EQ(doc["meta"]["page"], 2);
    bool found = false;
    for (const auto& entry : doc["entries"]) {
        if (entry["s"] == 1 && entry["stem"] == 3) {
            found = true;
            ASSERT_EQ(entry["summands"].size(), 1u);
            const auto& s = entry["summands"][0];
            EXPECT_EQ(s["l_exp"], 1);
            EXPECT_EQ(s["tau_exp_infinite"], true);
            EXPECT_EQ(s["gen_weight"], 2);
            EXPECT_EQ(s["label"], "alpha_1");
        }
    }
    EXPECT_TRUE(found);
}

TEST(MotivicFormat, EmptyChartRoundTrips)
{
    const auto e2 = builder::build_e2(load_classical(fixture("empty.chart")), Base::C);
    for (auto f : {Format::Json, Format::Ascii})
        EXPECT_EQ(load_chart(save_chart(e2, f)), e2);
}

TEST(MotivicFormat, RandomChartsRoundTrip)
{
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto c = verify::random_chart(seed);
        for (auto base : {Base::C, Base::R}) {
            const auto state = builder::run(c, base);
            const auto einf = builder::compute_einf(state);
            EXPECT_EQ(load_chart(save_chart(einf, Format::Json)), einf) << seed;
            EXPECT_EQ(load_chart(save_chart(einf, Format::Ascii)), einf) << seed;
            EXPECT_EQ(save_chart(load_chart(save_chart(einf, Format::Json)), Format::Json),
                      save_chart(einf, Format::Json));
        }
    }
}

TEST(MotivicFormat, LoaderRejectsInvalidCharts)
{
    auto e2 = builder::build_e2(load_classical(fixture("l3-core.chart")), Base::C);
    e2.entries[{1, 5}].summands.push_back({1, infinite, 3, "bad", false});
    EXPECT_FALSE(validate_motivic(e2).empty());
    EXPECT_THROW(load_chart(save_chart(e2, Format::Json)), ValidationError);
    EXPECT_THROW(load_chart("{not json"), ParseError);
}

TEST(Normalize, TauTorsionBecomesCyclic)
{
    const auto n = normalize_entry(single(20, 1, {{{0, 1, 2}}}), 3);
    ASSERT_EQ(n.summands.size(), 1u);
    EXPECT_TRUE(n.presented.empty());
    EXPECT_EQ(n.summands[0].l_exp, Exponent{1});
    EXPECT_EQ(n.summands[0].tau_exp, Exponent{2});
    EXPECT_EQ(n.summands[0].gen_weight, 20);
    EXPECT_TRUE(n.summands[0].inert);
}

TEST(Normalize, NoRelationsIsFree)
{
    const auto n = normalize_entry(single(4, 1, {}), 3);
    ASSERT_EQ(n.summands.size(), 1u);
    EXPECT_FALSE(n.summands[0].tau_exp.has_value());
    EXPECT_FALSE(n.summands[0].inert);
}

TEST(Normalize, MixedIdealStaysPresented)
{
    // Z/9[tau] x / (3 tau x): not cyclic over Z_3[tau] as a quotient by a principal monomial ideal
    const auto entry = single(6, 2, {{{0, 3, 1}}});
    const auto n = normalize_entry(entry, 3);
    EXPECT_TRUE(n.summands.empty());
    ASSERT_EQ(n.presented.size(), 1u);
    EXPECT_TRUE(n.presented[0].non_split);
    EXPECT_EQ(n.presented[0].generators[0].l_exp, Exponent{2});

    // no single cyclic summand has the same weight slices
    std::vector<GroupType> target;
    for (int w = -4; w <= 8; ++w)
        target.push_back(sorted(slice(entry, w, 1, 3)));
    EXPECT_EQ(target[10], (GroupType{Exponent{2}}));  // weight 6
    EXPECT_EQ(target[9], (GroupType{Exponent{1}}));   // weight 5
    for (Exponent a : {Exponent{1}, Exponent{2}, Exponent{3}, Exponent{}})
        for (Exponent b : {Exponent{1}, Exponent{2}, Exponent{3}, Exponent{4}, Exponent{}})
            for (int gw = 2; gw <= 8; ++gw) {
                CyclicSummand c{a, b, gw, "c", b.has_value()};
                bool same = true;
                for (int w = -4; w <= 8 && same; ++w)
                    same = sorted(slice(c, w, 1)) == target[static_cast<std::size_t>(w + 4)];
                EXPECT_FALSE(same);
            }
}

TEST(Normalize, ThetaPowersUseTheWeightStep)
{
    const auto n = normalize_entry(single(20, 1, {{{0, 1, 1}}}), 3, 2);
    ASSERT_EQ(n.summands.size(), 1u);
    EXPECT_EQ(n.summands[0].tau_exp, Exponent{1});
    EXPECT_EQ(sorted(slice(n.summands[0], 20, 2)), (GroupType{Exponent{1}}));
    EXPECT_TRUE(slice(n.summands[0], 19, 2).empty());
    EXPECT_TRUE(slice(n.summands[0], 18, 2).empty());
}

TEST(Normalize, PreservesSlicesOnRandomPresentations)
{
    std::mt19937_64 rng(7);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int trial = 0; trial < 300; ++trial) {
        PresentedEntry e;
        const int ngen = pick(1, 3);
        for (int g = 0; g < ngen; ++g) {
            const int le = pick(0, 3);
            e.generators.push_back({pick(2, 6), "g" + std::to_string(g), le == 0 ? Exponent{} : Exponent{le}});
        }
        const int nrel = pick(0, 3);
        for (int r = 0; r < nrel; ++r) {
            int low = 100;
            for (const auto& g : e.generators)
                low = std::min(low, g.gen_weight);
            const int target = low - pick(0, 2);
            Relation rel;
            for (int g = 0; g < ngen; ++g)
                if (pick(0, 1))
                    rel.push_back({g, pick(1, 8), e.generators[static_cast<std::size_t>(g)].gen_weight - target});
            if (!rel.empty())
                e.relations.push_back(rel);
        }
        const auto n = normalize_entry(e, 3);
        for (int w = -3; w <= 7; ++w) {
            GroupType parts;
            for (const auto& s : n.summands)
                parts = append(parts, slice(s, w, 1));
            for (const auto& p : n.presented)
                parts = append(parts, slice(p, w, 1, 3));
            EXPECT_EQ(sorted(parts), sorted(slice(e, w, 1, 3))) << "trial " << trial << " weight " << w;
        }
    }
}

TEST(Slice, CyclicSummands)
{
    CyclicSummand free{1, infinite, 4, "x", false};
    EXPECT_EQ(slice(free, 4, 1), (GroupType{Exponent{1}}));
    EXPECT_EQ(slice(free, -10, 1), (GroupType{Exponent{1}}));
    EXPECT_TRUE(slice(free, 5, 1).empty());
    CyclicSummand tors{2, 2, 20, "y", true};
    EXPECT_EQ(slice(tors, 19, 1), (GroupType{Exponent{2}}));
    EXPECT_TRUE(slice(tors, 18, 1).empty());
    EXPECT_EQ(to_string(GroupType{Exponent{1}, Exponent{2}, infinite}, 3), "Z/3 + Z/3^2 + Z_3");
    EXPECT_EQ(to_string(GroupType{}, 3), "0");
}
