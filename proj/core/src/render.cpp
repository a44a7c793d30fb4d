#include "manss/render.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>

namespace manss::render {

using chart::CyclicSummand;
using chart::MotivicChart;

namespace {

std::string superscript(int n)
{
    static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string out;
    for (char c : std::to_string(n))
        out += digits[c - '0'];
    return out;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

bool in_range(const chart::Position& p, const RenderOptions& o)
{
    return (o.max_stem < 0 || p.second <= o.max_stem) && (o.max_filtration < 0 || p.first <= o.max_filtration);
}

}  // namespace

std::string describe(const CyclicSummand& c, const MotivicChart& chart)
{
    const std::string g = chart.base == chart::Base::C ? "tau" : "theta";
    const std::string coeff =
        c.l_exp ? (*c.l_exp == 1 ? fmt::format("Z/{}", chart.prime) : fmt::format("Z/{}^{}", chart.prime, *c.l_exp))
                : fmt::format("Z_{}", chart.prime);
    if (!c.tau_exp)
        return fmt::format("{}[{}]", coeff, g);
    return fmt::format("{}[{}]/({}^{})", coeff, g, g, *c.tau_exp);
}

std::string svg(const MotivicChart& chart, const RenderOptions& options)
{
    int max_stem = 0, max_s = 0;
    for (const auto& [pos, cell] : chart.entries)
        if (in_range(pos, options)) {
            max_stem = std::max(max_stem, pos.second);
            max_s = std::max(max_s, pos.first);
        }
    if (options.max_stem >= 0)
        max_stem = options.max_stem;
    if (options.max_filtration >= 0)
        max_s = options.max_filtration;

    const int dx = 28, dy = 36, margin = 48;
    const int width = 2 * margin + (max_stem + 1) * dx;
    const int height = 2 * margin + (max_s + 1) * dy;
    auto x_of = [&](int stem) { return margin + stem * dx + dx / 2; };
    auto y_of = [&](int s) { return height - margin - s * dy - dy / 2; };
    const std::string ground = chart.base == chart::Base::C ? "τ" : "θ";

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
        "font-family=\"monospace\" font-size=\"9\">\n",
        width, height, width, height);
    out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
    out += fmt::format("<text x=\"{}\" y=\"16\" font-size=\"11\">{} l={} base={} page={}</text>\n", margin,
                       escape(chart.meta.fixture.empty() ? "chart" : chart.meta.fixture), chart.prime,
                       steenrod::to_string(chart.base), chart.page ? std::to_string(*chart.page) : "inf");
    // grid and axes
    for (int stem = 0; stem <= max_stem; ++stem) {
        const int x = x_of(stem);
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#eee\"/>\n", x, margin, x,
                           height - margin);
        if (stem % 2 == 0)
            out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", x, height - margin + 14,
                               stem);
    }
    for (int s = 0; s <= max_s; ++s) {
        const int y = y_of(s);
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#eee\"/>\n", margin, y,
                           width - margin, y);
        out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", margin - 6, y + 3, s);
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">stem</text>\n", width / 2, height - 12);
    out += fmt::format("<text x=\"14\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">s</text>\n",
                       height / 2, height / 2);

    for (const auto& [pos, cell] : chart.entries) {
        if (!in_range(pos, options))
            continue;
        const auto glyphs = cell.summands.size() + cell.presented.size();
        int k = 0;
        auto offset = [&] { return static_cast<int>((k - (static_cast<int>(glyphs) - 1) / 2.0) * 8); };
        for (const auto& c : cell.summands) {
            const int x = x_of(pos.second) + offset(), y = y_of(pos.first);
            const auto title = escape(fmt::format("({},{}) {} {} w={}", pos.first, pos.second, c.label,
                                                  describe(c, chart), c.gen_weight));
            if (c.tau_exp) {
                out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"white\" stroke=\"black\"><title>{}</title>"
                                   "</circle>\n",
                                   x, y, title);
                out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"8\">{}{}</text>\n", x + 3, y - 4, ground,
                                   superscript(*c.tau_exp));
            }
            else {
                out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"black\"><title>{}</title></circle>\n", x,
                                   y, title);
            }
            if (c.l_exp && *c.l_exp > 1)
                out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"none\" stroke=\"black\"/>\n", x, y);
            if (options.weights)
                out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"7\" fill=\"#555\">{}</text>\n", x + 3, y + 10,
                                   c.gen_weight);
            ++k;
        }
        for (const auto& p : cell.presented) {
            const int x = x_of(pos.second) + offset(), y = y_of(pos.first);
            out += fmt::format(
                "<rect x=\"{}\" y=\"{}\" width=\"6\" height=\"6\" fill=\"white\" stroke=\"black\"><title>{}</title>"
                "</rect>\n",
                x - 3, y - 3,
                escape(fmt::format("({},{}) non-split presentation on {} generator(s)", pos.first, pos.second,
                                   p.generators.size())));
            if (options.weights && !p.generators.empty())
                out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"7\" fill=\"#555\">{}</text>\n", x + 3, y + 10,
                                   p.generators.front().gen_weight);
            ++k;
        }
    }
    out += "</svg>\n";
    return out;
}

std::string ascii(const MotivicChart& chart, const RenderOptions& options)
{
    std::string out = fmt::format("# {} l={} base={} page={}\n", chart.meta.fixture.empty() ? "chart" : chart.meta.fixture,
                                  chart.prime, steenrod::to_string(chart.base),
                                  chart.page ? std::to_string(*chart.page) : "inf");
    out += fmt::format("{:>4} {:>5}  {:<28} {:>6}  {}\n", "s", "stem", "summand", "weight", "label");
    for (const auto& [pos, cell] : chart.entries) {
        if (!in_range(pos, options))
            continue;
        for (const auto& c : cell.summands)
            out += fmt::format("{:>4} {:>5}  {:<28} {:>6}  {}\n", pos.first, pos.second, describe(c, chart),
                               c.gen_weight, c.label);
        for (const auto& p : cell.presented) {
            std::vector<std::string> rels;
            const std::string g = chart.base == chart::Base::C ? "tau" : "theta";
            for (const auto& r : p.relations) {
                std::vector<std::string> terms;
                for (const auto& t : r)
                    terms.push_back(fmt::format("{}*{}^{}*x{}", t.coeff, g, t.ground_power, t.generator));
                rels.push_back(fmt::format("{}", fmt::join(terms, "+")));
            }
            out += fmt::format("{:>4} {:>5}  {:<28} {:>6}  {}\n", pos.first, pos.second,
                               fmt::format("<{} gens | {}>", p.generators.size(), fmt::join(rels, ", ")),
                               p.generators.empty() ? 0 : p.generators.front().gen_weight,
                               p.generators.empty() ? "" : p.generators.front().label);
        }
    }
    return out;
}

}  // namespace manss::render
