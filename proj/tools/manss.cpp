#include "manss/builder.hpp"
#include "manss/cobar.hpp"
#include "manss/errors.hpp"
#include "manss/render.hpp"
#include "manss/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace manss;

namespace {

enum Exit { Ok = 0, Failed = 1, Usage = 2, Resource = 3, Internal = 4 };

struct Common {
    std::uint32_t prime = 0;
    std::string base = "C";
    std::string fixture;
    int max_stem = -1;
    int max_filtration = -1;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigurationError(fmt::format("cannot read {}", path));
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigurationError(fmt::format("cannot write {}", path));
    out << text;
}

chart::ClassicalChart load_fixture(const Common& c)
{
    chart::ClassicalChart chart;
    if (c.fixture.empty()) {
        chart = chart::parse_classical(fmt::format("schema manss-classical/1\nname empty\nprime {}\n",
                                                   c.prime ? c.prime : 3));
    }
    else {
        chart = chart::load_classical(c.fixture);
    }
    if (c.prime && chart.prime != c.prime)
        throw ConfigurationError(fmt::format("--prime {} does not match the fixture prime {}", c.prime, chart.prime));
    return chart;
}

std::optional<int> parse_page(const std::string& page, std::uint32_t prime)
{
    if (page == "inf" || page == "infinity")
        return std::nullopt;
    int r = 0;
    try {
        r = std::stoi(page);
    }
    catch (const std::logic_error&) {
        throw ConfigurationError(fmt::format("--page must be an integer or 'inf', got {}", page));
    }
    const int q = chart::sparseness_modulus(prime);
    if (r != 2 && (r < 2 || (r - 1) % q != 0))
        throw ConfigurationError(fmt::format("--page {} is neither 2 nor congruent to 1 mod {}", r, q));
    return r;
}

builder::PageState build_to(const chart::ClassicalChart& classical, chart::Base base, std::optional<int> page)
{
    if (!page)
        return builder::run(classical, base);
    auto st = builder::start(classical, base);
    if (*page > st.page)
        st = builder::propagate(st, *page);
    return st;
}

std::set<std::string> parse_suites(const std::string& spec)
{
    const auto& all = verify::suite_names();
    if (spec == "all")
        return {all.begin(), all.end()};
    if (spec == "none")
        return {};
    std::set<std::string> out;
    std::stringstream in(spec);
    for (std::string s; std::getline(in, s, ',');) {
        if (std::find(all.begin(), all.end(), s) == all.end())
            throw ConfigurationError(fmt::format("unknown suite '{}' (known: {})", s, fmt::join(all, ", ")));
        out.insert(s);
    }
    return out;
}

void print_violations(const ValidationError& e)
{
    for (const auto& v : e.violations())
        std::cout << fmt::format("load FAIL ({},{}) {}: {}\n", v.s, v.stem, v.rule, v.detail);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Motivic Adams-Novikov charts from classical input, and cobar Cotor computations"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--prime", common.prime, "odd prime l (must match the fixture)");
        sub->add_option("--base", common.base, "base field")->check(CLI::IsMember({"C", "R"}));
        sub->add_option("--fixture", common.fixture, "classical chart file");
        sub->add_option("--max-stem", common.max_stem, "largest stem to render or query");
        sub->add_option("--max-filtration", common.max_filtration, "largest filtration to render");
    };

    // build
    auto* build = app.add_subcommand("build", "build a motivic chart from a classical fixture");
    add_common(build);
    std::string page = "inf", out_path, render_mode = "ascii", verify_spec = "none";
    std::uint64_t seed = 1;
    int count = 100;
    bool weights = false, show_log = false;
    build->add_option("--page", page, "target page: 2, r = 1 mod 2l-2, or inf");
    build->add_option("--out", out_path, "write the chart JSON here (SVG goes next to it)");
    build->add_option("--render", render_mode, "rendering")->check(CLI::IsMember({"svg", "ascii", "none"}));
    build->add_option("--verify", verify_spec, "all, none, or a comma list of suites");
    build->add_option("--seed", seed, "seed of the randomized suites");
    build->add_option("--count", count, "number of random charts");
    build->add_flag("--weights", weights, "print generator weights beside glyphs");
    build->add_flag("--log", show_log, "print the torsion log");

    // cotor
    auto* cot = app.add_subcommand("cotor", "cobar-complex Cotor over A, P or E");
    add_common(cot);
    std::string hopf = "A", mode = "cotor";
    cobar::CotorRange range;
    std::optional<int> u_min, u_max;
    cot->add_option("--hopf", hopf, "Hopf algebra")->check(CLI::IsMember({"A", "P", "E"}));
    cot->add_option("--mode", mode, "what to compute")->check(CLI::IsMember({"cotor", "cess", "algnov"}));
    cot->add_option("--s-max", range.s_max, "largest cohomological degree");
    cot->add_option("--t-max", range.t_max, "largest internal degree");
    cot->add_option("--u-min", u_min, "smallest weight");
    cot->add_option("--u-max", u_max, "largest weight");
    cot->add_option("--max-slice", range.max_slice, "largest chain group to build");
    cot->add_option("--workers", range.workers, "worker threads (0: MANSS_WORKERS or all cores)");

    // verify
    auto* ver = app.add_subcommand("verify", "run the verification suites");
    add_common(ver);
    std::string suites = "all";
    ver->add_option("--verify", suites, "all or a comma list of suites");
    ver->add_option("--seed", seed, "seed of the randomized suites");
    ver->add_option("--count", count, "number of random charts");

    // query
    auto* query = app.add_subcommand("query", "associated-graded homotopy groups at (stem, weight)");
    add_common(query);
    std::string chart_path;
    int stem = 0, weight = 0;
    query->add_option("--chart", chart_path, "E-infinity chart (JSON or ASCII)");
    query->add_option("--stem", stem, "stem s'")->required();
    query->add_option("--weight", weight, "weight u")->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : Usage;
    }

    try {
        if (common.prime == 2)
            throw ConfigurationError("prime 2 is not supported");
        if (common.prime && !linalg::is_prime(common.prime))
            throw ConfigurationError(fmt::format("{} is not a prime", common.prime));
        const auto base = steenrod::parse_base(common.base);
        render::RenderOptions ropts{weights, common.max_stem, common.max_filtration};

        if (*build) {
            if (count < 0)
                throw ConfigurationError("--count must be non-negative");
            const auto classical = load_fixture(common);
            const auto target = parse_page(page, classical.prime);
            auto st = build_to(classical, base, target);
            st.chart.meta.options["page"] = page;
            const auto json = chart::save_chart(st.chart, chart::Format::Json);
            if (!out_path.empty())
                write_file(out_path, json);
            if (render_mode == "svg") {
                const auto image = render::svg(st.chart, ropts);
                if (out_path.empty()) {
                    std::cout << image;
                }
                else {
                    auto svg_path = out_path;
                    if (auto dot = svg_path.rfind(".json"); dot != std::string::npos && dot + 5 == svg_path.size())
                        svg_path.erase(dot);
                    write_file(svg_path + ".svg", image);
                }
            }
            else if (render_mode == "ascii") {
                std::cout << render::ascii(st.chart, ropts);
            }
            else if (out_path.empty()) {
                std::cout << json;
            }
            if (show_log)
                std::cout << builder::format_log(st);
            bool ok = true;
            if (base == chart::Base::R) {
                const auto complex = build_to(classical, chart::Base::C, target);
                const bool agree = builder::base_change(st.chart).entries == complex.chart.entries;
                std::cout << fmt::format("base-change {} R->C agrees with the C chart on even weights\n",
                                         agree ? "PASS" : "FAIL");
                ok = ok && agree;
            }
            if (const auto chosen = parse_suites(verify_spec); !chosen.empty()) {
                verify::SuiteOptions vo;
                vo.suites = chosen;
                vo.seed = seed;
                vo.random_charts = count;
                vo.random.prime = classical.prime;
                std::cout << fmt::format("seed {}\n", seed);
                const auto report = verify::run_suites(classical, vo);
                std::cout << report.format();
                ok = ok && report.ok();
            }
            return ok ? Ok : Failed;
        }

        if (*cot) {
            const std::uint32_t l = common.prime ? common.prime : 3;
            range.u_lo = u_min;
            range.u_hi = u_max;
            steenrod::DualSteenrod alg(steenrod::GroundRing(base, l),
                                       steenrod::EnumerationBounds{std::max(6, range.s_max),
                                                                   std::max(64, range.t_max + range.s_max), 64});
            cobar::CotorTable table;
            if (mode == "cess")
                table = cobar::cess_e2(range, alg);
            else if (mode == "algnov")
                table = cobar::algnov_e1(range, alg);
            else
                table = cobar::cotor(steenrod::parse_algebra(hopf), cobar::ComoduleSpec::trivial(), range, alg);
            std::cout << cobar::format_report(table);
            return Ok;
        }

        if (*ver) {
            if (count < 0)
                throw ConfigurationError("--count must be non-negative");
            std::cout << fmt::format("seed {}\n", seed);
            chart::ClassicalChart classical;
            try {
                classical = load_fixture(common);
            }
            catch (const ValidationError& e) {
                print_violations(e);
                return Failed;
            }
            verify::SuiteOptions vo;
            vo.suites = parse_suites(suites);
            vo.seed = seed;
            vo.random_charts = count;
            vo.random.prime = classical.prime;
            if (common.max_stem > 0)
                vo.random.max_stem = common.max_stem;
            const auto report = verify::run_suites(classical, vo);
            std::cout << report.format();
            return report.ok() ? Ok : Failed;
        }

        if (*query) {
            chart::MotivicChart einf;
            if (!chart_path.empty()) {
                einf = chart::load_chart(read_file(chart_path));
                if (einf.page)
                    throw ConfigurationError("query needs an E-infinity chart");
            }
            else if (!common.fixture.empty()) {
                einf = builder::run(load_fixture(common), base).chart;
            }
            else {
                std::cerr << "query needs --chart or --fixture\n";
                return Usage;
            }
            const auto q = builder::query_pi(einf, stem, weight);
            std::cout << fmt::format("stem {} weight {} tau-stable {}{}\n", stem, weight, q.tau_stable ? "yes" : "no",
                                     q.vanishing ? " (vanishes: weight > stem)" : "");
            for (const auto& [s, g] : q.groups)
                std::cout << fmt::format("  s={} {}\n", s, chart::to_string(g, einf.prime));
            if (q.groups.empty())
                std::cout << "  0\n";
            return Ok;
        }
    }
    catch (const ValidationError& e) {
        print_violations(e);
        std::cerr << e.what() << "\n";
        return Failed;
    }
    catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return Resource;
    }
    catch (const ConfigurationError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return Usage;
    }
    catch (const RangeError& e) {
        std::cerr << "range error: " << e.what() << "\n";
        return Usage;
    }
    catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return Usage;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Internal;
    }
    return Ok;
}
