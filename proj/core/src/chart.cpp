#include "manss/chart.hpp"

#include "manss/exact_linalg.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace manss::chart {

using json = nlohmann::json;

std::string to_string(const Exponent& e)
{
    return e ? std::to_string(*e) : "inf";
}

int sparseness_modulus(std::uint32_t prime)
{
    return 2 * static_cast<int>(prime) - 2;
}

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

namespace {

std::int64_t ipow(std::int64_t base, int e)
{
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i)
        r *= base;
    return r;
}

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        out.push_back(trim(cur));
    return out;
}

Exponent parse_exponent(const std::string& tok, int line)
{
    if (tok == "inf")
        return infinite;
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size() || v < 1)
            throw ParseError(fmt::format("bad exponent '{}'", tok), line);
        return v;
    }
    catch (const std::logic_error&) {
        throw ParseError(fmt::format("bad exponent '{}'", tok), line);
    }
}

int parse_int(const std::string& tok, int line)
{
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size())
            throw ParseError(fmt::format("bad integer '{}'", tok), line);
        return v;
    }
    catch (const std::logic_error&) {
        throw ParseError(fmt::format("bad integer '{}'", tok), line);
    }
}

std::int64_t parse_int64(const std::string& tok, int line)
{
    try {
        std::size_t used = 0;
        const auto v = std::stoll(tok, &used);
        if (used != tok.size())
            throw ParseError(fmt::format("bad integer '{}'", tok), line);
        return v;
    }
    catch (const std::logic_error&) {
        throw ParseError(fmt::format("bad integer '{}'", tok), line);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Classical charts

std::vector<Violation> validate_classical(const ClassicalChart& chart)
{
    std::vector<Violation> out;
    auto add = [&](Position p, std::string rule, std::string detail) {
        out.push_back({p.first, p.second, std::move(rule), std::move(detail)});
    };
    if (chart.prime == 2 || !linalg::is_prime(chart.prime)) {
        add({0, 0}, "prime", fmt::format("prime {} is not an odd prime", chart.prime));
        return out;
    }
    const int q = sparseness_modulus(chart.prime);
    std::map<std::string, std::pair<Position, Exponent>> labels;
    bool origin_seen = false;
    for (const auto& [pos, groups] : chart.groups) {
        const auto [s, stem] = pos;
        if (groups.empty())
            continue;
        const bool origin = pos == Position{0, 0};
        if (s < 0)
            add(pos, "filtration", "negative filtration");
        if (stem < s)
            add(pos, "vanishing-line", fmt::format("group below the vanishing line (stem {} < s {})", stem, s));
        if ((s + stem) % q != 0)
            add(pos, "sparseness", fmt::format("t = {} is not divisible by q = {}", s + stem, q));
        int infinite_count = 0;
        for (const auto& g : groups) {
            if (!g.l_exp) {
                ++infinite_count;
                if (!origin)
                    add(pos, "finite-group", fmt::format("{} has infinite order away from the origin", g.label));
            }
            else if (*g.l_exp < 1) {
                add(pos, "order", fmt::format("{} has non-positive order exponent", g.label));
            }
            if (g.label.empty())
                add(pos, "label", "unnamed generator");
            else if (!labels.emplace(g.label, std::pair{pos, g.l_exp}).second)
                add(pos, "duplicate-label", fmt::format("generator {} is defined twice", g.label));
        }
        if (origin) {
            origin_seen = true;
            if (infinite_count != 1 || groups.size() != 1)
                add(pos, "origin", "the origin must hold exactly one Z_l");
        }
    }
    if (!origin_seen)
        add({0, 0}, "origin", "the origin must hold exactly one Z_l");

    std::set<std::string> used;
    for (const auto& d : chart.differentials) {
        const auto pos = d.source;
        if (d.page < 2 || (d.page - 1) % q != 0)
            add(pos, "page-congruence", fmt::format("d_{} is not at a page r = 1 mod {}", d.page, q));
        if (d.target != Position{d.source.first + d.page, d.source.second - 1})
            add(pos, "differential-target",
                fmt::format("d_{} from ({},{}) must land in ({},{})", d.page, d.source.first, d.source.second,
                            d.source.first + d.page, d.source.second - 1));
        if (d.source == Position{0, 0} || d.target == Position{0, 0})
            add(pos, "origin", "differentials may not involve the origin");
        std::vector<Exponent> src_orders, tgt_orders;
        auto lookup = [&](const std::string& label, Position cell, std::vector<Exponent>& orders) {
            auto it = labels.find(label);
            if (it == labels.end() || it->second.first != cell) {
                add(pos, "unknown-generator",
                    fmt::format("generator {} is not in cell ({},{})", label, cell.first, cell.second));
                orders.push_back(1);
                return;
            }
            orders.push_back(it->second.second);
            if (!used.insert(label).second)
                add(pos, "generator-reuse", fmt::format("generator {} appears in more than one differential", label));
        };
        for (const auto& l : d.source_labels)
            lookup(l, d.source, src_orders);
        for (const auto& l : d.target_labels)
            lookup(l, d.target, tgt_orders);
        if (d.source_labels.empty() || d.target_labels.empty())
            add(pos, "matrix-shape", "differential needs source and target generators");
        if (d.matrix.size() != d.target_labels.size() ||
            std::any_of(d.matrix.begin(), d.matrix.end(),
                        [&](const auto& row) { return row.size() != d.source_labels.size(); })) {
            add(pos, "matrix-shape", fmt::format("matrix must be {} x {}", d.target_labels.size(),
                                                 d.source_labels.size()));
            continue;
        }
        for (std::size_t i = 0; i < d.matrix.size(); ++i) {
            if (!tgt_orders[i])
                continue;
            const std::int64_t mod = ipow(chart.prime, *tgt_orders[i]);
            for (std::size_t j = 0; j < d.matrix[i].size(); ++j) {
                const auto c = d.matrix[i][j];
                if (c < 0 || c >= mod)
                    add(pos, "matrix-bound",
                        fmt::format("entry ({},{}) = {} outside [0, {})", i, j, c, mod));
                const std::int64_t src_order = src_orders[j] ? ipow(chart.prime, *src_orders[j]) : 0;
                if (!src_orders[j] || (static_cast<__int128>(src_order) * c) % mod != 0)
                    add(pos, "well-defined",
                        fmt::format("{} -> {} is not well defined on a group of order {}", d.source_labels[j],
                                    d.target_labels[i], to_string(src_orders[j])));
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        return std::pair{a.s, a.stem} < std::pair{b.s, b.stem};
    });
    return out;
}

ClassicalChart parse_classical(const std::string& text, const std::string& name)
{
    ClassicalChart chart;
    chart.name = name;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    enum class Section { Header, Groups, Differentials } section = Section::Header;
    bool schema_seen = false;
    bool prime_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string note;
        if (const auto hash = raw.find('#'); hash != std::string::npos) {
            note = trim(raw.substr(hash + 1));
            raw = raw.substr(0, hash);
        }
        const auto line = trim(raw);
        if (line.empty())
            continue;
        if (line == "[groups]") {
            section = Section::Groups;
            continue;
        }
        if (line == "[differentials]") {
            section = Section::Differentials;
            continue;
        }
        if (line.front() == '[')
            throw ParseError(fmt::format("unknown section {}", line), line_no);
        std::istringstream tok(line);
        std::vector<std::string> words;
        for (std::string w; tok >> w;)
            words.push_back(w);
        switch (section) {
        case Section::Header:
            if (words.size() != 2)
                throw ParseError(fmt::format("expected 'key value', got '{}'", line), line_no);
            if (words[0] == "schema") {
                if (words[1] != "manss-classical/1")
                    throw ParseError(fmt::format("unsupported schema {}", words[1]), line_no);
                schema_seen = true;
            }
            else if (words[0] == "prime") {
                const int p = parse_int(words[1], line_no);
                if (p == 2)
                    throw ConfigurationError("prime 2 is not supported");
                if (p < 2 || !linalg::is_prime(static_cast<std::uint64_t>(p)))
                    throw ConfigurationError(fmt::format("{} is not a prime", p));
                chart.prime = static_cast<std::uint32_t>(p);
                prime_seen = true;
            }
            else if (words[0] == "name") {
                chart.name = words[1];
            }
            else {
                throw ParseError(fmt::format("unknown header key {}", words[0]), line_no);
            }
            break;
        case Section::Groups: {
            if (words.size() != 4)
                throw ParseError("expected '<s> <stem> <label> <order exponent|inf>'", line_no);
            const Position pos{parse_int(words[0], line_no), parse_int(words[1], line_no)};
            chart.groups[pos].push_back({parse_exponent(words[3], line_no), words[2], note});
            break;
        }
        case Section::Differentials: {
            // <r> <s> <stem> -> <s'> <stem'> src a,b tgt c,d matrix 1,0;0,1
            if (words.size() != 12 || words[3] != "->" || words[6] != "src" || words[8] != "tgt" ||
                words[10] != "matrix")
                throw ParseError("expected '<r> <s> <stem> -> <s> <stem> src <labels> tgt <labels> matrix <rows>'",
                                 line_no);
            ClassicalDifferential d;
            d.page = parse_int(words[0], line_no);
            d.source = {parse_int(words[1], line_no), parse_int(words[2], line_no)};
            d.target = {parse_int(words[4], line_no), parse_int(words[5], line_no)};
            d.source_labels = split(words[7], ',');
            d.target_labels = split(words[9], ',');
            d.note = note;
            if (words[11] == "unit") {
                d.unit_unknown = true;
                d.matrix = {{1}};
            }
            else {
                for (const auto& row : split(words[11], ';')) {
                    std::vector<std::int64_t> r;
                    for (const auto& e : split(row, ','))
                        r.push_back(parse_int64(e, line_no));
                    d.matrix.push_back(std::move(r));
                }
            }
            chart.differentials.push_back(std::move(d));
            break;
        }
        }
    }
    if (!schema_seen)
        throw ParseError("missing 'schema manss-classical/1' header", 0);
    if (!prime_seen)
        throw ParseError("missing 'prime' header", 0);
    if (!chart.groups.contains({0, 0}) || chart.groups[{0, 0}].empty())
        chart.groups[{0, 0}] = {{infinite, "Z_l", "completed on load"}};
    if (auto v = validate_classical(chart); !v.empty())
        throw ValidationError(std::move(v));
    return chart;
}

ClassicalChart load_classical(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigurationError(fmt::format("cannot open fixture {}", path));
    std::stringstream buf;
    buf << in.rdbuf();
    auto name = path;
    if (const auto slash = name.find_last_of('/'); slash != std::string::npos)
        name = name.substr(slash + 1);
    if (const auto dot = name.find_last_of('.'); dot != std::string::npos)
        name = name.substr(0, dot);
    return parse_classical(buf.str(), name);
}

std::string write_classical(const ClassicalChart& chart)
{
    std::string out = "schema manss-classical/1\n";
    if (!chart.name.empty())
        out += fmt::format("name {}\n", chart.name);
    out += fmt::format("prime {}\n\n[groups]\n", chart.prime);
    for (const auto& [pos, groups] : chart.groups)
        for (const auto& g : groups)
            out += fmt::format("{} {} {} {}{}\n", pos.first, pos.second, g.label, to_string(g.l_exp),
                               g.note.empty() ? "" : "  # " + g.note);
    out += "\n[differentials]\n";
    for (const auto& d : chart.differentials) {
        std::string matrix;
        if (d.unit_unknown) {
            matrix = "unit";
        }
        else {
            std::vector<std::string> rows;
            for (const auto& r : d.matrix)
                rows.push_back(fmt::format("{}", fmt::join(r, ",")));
            matrix = fmt::format("{}", fmt::join(rows, ";"));
        }
        out += fmt::format("{} {} {} -> {} {} src {} tgt {} matrix {}{}\n", d.page, d.source.first, d.source.second,
                           d.target.first, d.target.second, fmt::join(d.source_labels, ","),
                           fmt::join(d.target_labels, ","), matrix, d.note.empty() ? "" : "  # " + d.note);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Motivic charts

std::optional<int> max_weight(const Cell& cell)
{
    std::optional<int> w;
    for (const auto& c : cell.summands)
        w = std::max(w.value_or(c.gen_weight), c.gen_weight);
    for (const auto& p : cell.presented)
        for (const auto& g : p.generators)
            w = std::max(w.value_or(g.gen_weight), g.gen_weight);
    return w;
}

std::vector<Violation> validate_motivic(const MotivicChart& chart)
{
    std::vector<Violation> out;
    auto add = [&](Position p, std::string rule, std::string detail) {
        out.push_back({p.first, p.second, std::move(rule), std::move(detail)});
    };
    if (chart.prime == 2 || !linalg::is_prime(chart.prime)) {
        add({0, 0}, "prime", fmt::format("prime {} is not an odd prime", chart.prime));
        return out;
    }
    const int q = sparseness_modulus(chart.prime);
    const int step = chart.weight_step();
    for (const auto& [pos, cell] : chart.entries) {
        const auto [s, stem] = pos;
        const int t = s + stem;
        if (cell.empty())
            continue;
        if (stem < s)
            add(pos, "vanishing-line", "entry below the vanishing line");
        if (t % q != 0)
            add(pos, "sparseness", fmt::format("t = {} is not divisible by q = {}", t, q));
        for (const auto& c : cell.summands) {
            if (!c.l_exp && pos != Position{0, 0})
                add(pos, "finite-group", fmt::format("{} has infinite l-order away from the origin", c.label));
            if (c.gen_weight * 2 > t)
                add(pos, "weight-bound", fmt::format("{} has weight {} > t/2 = {}", c.label, c.gen_weight, t / 2.0));
            if (!c.torsion() && c.gen_weight * 2 != t)
                add(pos, "weight-bound", fmt::format("free summand {} has weight {} != t/2", c.label, c.gen_weight));
            if (c.torsion() && !c.inert)
                add(pos, "torsion-inert", fmt::format("torsion summand {} is not marked inert", c.label));
            if (c.tau_exp && *c.tau_exp < 1)
                add(pos, "order", "non-positive ground-ring exponent");
            if (c.l_exp && *c.l_exp < 1)
                add(pos, "order", "non-positive l-exponent");
        }
        for (const auto& p : cell.presented)
            for (const auto& g : p.generators)
                if (g.gen_weight * 2 > t)
                    add(pos, "weight-bound", fmt::format("{} has weight {} > t/2", g.label, g.gen_weight));
        if (!chart.page) {
            const auto w = max_weight(cell);
            if (w && *w > stem)
                add(pos, "column-bound", fmt::format("class of weight {} contributes above u = stem = {}", *w, stem));
        }
        (void)step;
    }
    return out;
}

namespace {

json exponent_json(json& obj, const std::string& key, const Exponent& e)
{
    obj[key] = e ? *e : 0;
    obj[key + "_infinite"] = !e.has_value();
    return obj;
}

Exponent exponent_from(const json& obj, const std::string& key)
{
    if (obj.at(key + "_infinite").get<bool>())
        return infinite;
    return obj.at(key).get<int>();
}

std::string save_json(const MotivicChart& chart)
{
    json meta;
    meta["schema"] = "manss-chart/1";
    meta["base"] = steenrod::to_string(chart.base);
    meta["prime"] = chart.prime;
    meta["page"] = chart.page ? *chart.page : 0;
    meta["page_infinite"] = !chart.page.has_value();
    meta["fixture"] = chart.meta.fixture;
    meta["fixture_hash"] = chart.meta.fixture_hash;
    meta["options"] = chart.meta.options;
    json entries = json::array();
    for (const auto& [pos, cell] : chart.entries) {
        json e;
        e["s"] = pos.first;
        e["stem"] = pos.second;
        json summands = json::array();
        for (const auto& c : cell.summands) {
            json j;
            exponent_json(j, "l_exp", c.l_exp);
            exponent_json(j, "tau_exp", c.tau_exp);
            j["gen_weight"] = c.gen_weight;
            j["label"] = c.label;
            j["inert"] = c.inert;
            summands.push_back(std::move(j));
        }
        e["summands"] = std::move(summands);
        if (!cell.presented.empty()) {
            json pres = json::array();
            for (const auto& p : cell.presented) {
                json pj;
                json gens = json::array();
                for (const auto& g : p.generators) {
                    json gj;
                    gj["gen_weight"] = g.gen_weight;
                    gj["label"] = g.label;
                    exponent_json(gj, "l_exp", g.l_exp);
                    gens.push_back(std::move(gj));
                }
                json rels = json::array();
                for (const auto& r : p.relations) {
                    json rj = json::array();
                    for (const auto& term : r)
                        rj.push_back({{"generator", term.generator},
                                      {"coeff", term.coeff},
                                      {"ground_power", term.ground_power}});
                    rels.push_back(std::move(rj));
                }
                pj["generators"] = std::move(gens);
                pj["relations"] = std::move(rels);
                pj["non_split"] = p.non_split;
                pres.push_back(std::move(pj));
            }
            e["presentation"] = std::move(pres);
        }
        entries.push_back(std::move(e));
    }
    json doc;
    doc["meta"] = std::move(meta);
    doc["entries"] = std::move(entries);
    return doc.dump(2) + "\n";
}

MotivicChart load_json(const std::string& text)
{
    MotivicChart chart;
    try {
        const auto doc = json::parse(text);
        const auto& meta = doc.at("meta");
        if (meta.at("schema").get<std::string>() != "manss-chart/1")
            throw ParseError("unsupported chart schema", 0);
        chart.base = steenrod::parse_base(meta.at("base").get<std::string>());
        chart.prime = meta.at("prime").get<std::uint32_t>();
        chart.page = meta.at("page_infinite").get<bool>() ? std::nullopt : std::optional<int>(meta.at("page").get<int>());
        chart.meta.fixture = meta.at("fixture").get<std::string>();
        chart.meta.fixture_hash = meta.at("fixture_hash").get<std::string>();
        chart.meta.options = meta.at("options").get<std::map<std::string, std::string>>();
        for (const auto& e : doc.at("entries")) {
            Cell cell;
            for (const auto& j : e.at("summands"))
                cell.summands.push_back({exponent_from(j, "l_exp"), exponent_from(j, "tau_exp"),
                                         j.at("gen_weight").get<int>(), j.at("label").get<std::string>(),
                                         j.at("inert").get<bool>()});
            if (e.contains("presentation")) {
                for (const auto& pj : e.at("presentation")) {
                    PresentedEntry p;
                    for (const auto& gj : pj.at("generators"))
                        p.generators.push_back(
                            {gj.at("gen_weight").get<int>(), gj.at("label").get<std::string>(), exponent_from(gj, "l_exp")});
                    for (const auto& rj : pj.at("relations")) {
                        Relation r;
                        for (const auto& tj : rj)
                            r.push_back({tj.at("generator").get<int>(), tj.at("coeff").get<std::int64_t>(),
                                         tj.at("ground_power").get<int>()});
                        p.relations.push_back(std::move(r));
                    }
                    p.non_split = pj.at("non_split").get<bool>();
                    cell.presented.push_back(std::move(p));
                }
            }
            chart.entries[{e.at("s").get<int>(), e.at("stem").get<int>()}] = std::move(cell);
        }
    }
    catch (const json::exception& ex) {
        throw ParseError(fmt::format("malformed chart JSON: {}", ex.what()), 0);
    }
    return chart;
}

std::string save_ascii(const MotivicChart& chart)
{
    std::string out = "schema manss-chart-ascii/1\n";
    out += fmt::format("base {}\nprime {}\npage {}\n", steenrod::to_string(chart.base), chart.prime,
                       chart.page ? std::to_string(*chart.page) : "inf");
    out += fmt::format("fixture {}\nfixture_hash {}\n", chart.meta.fixture.empty() ? "-" : chart.meta.fixture,
                       chart.meta.fixture_hash.empty() ? "-" : chart.meta.fixture_hash);
    for (const auto& [k, v] : chart.meta.options)
        out += fmt::format("option {} {}\n", k, v);
    for (const auto& [pos, cell] : chart.entries) {
        for (const auto& c : cell.summands)
            out += fmt::format("cell {} {} summand {} {} {} {} {}\n", pos.first, pos.second, to_string(c.l_exp),
                               to_string(c.tau_exp), c.gen_weight, c.inert ? 1 : 0, c.label);
        for (const auto& p : cell.presented) {
            out += fmt::format("cell {} {} presented {} {} {}\n", pos.first, pos.second, p.non_split ? 1 : 0,
                               p.generators.size(), p.relations.size());
            for (const auto& g : p.generators)
                out += fmt::format("gen {} {} {}\n", g.gen_weight, to_string(g.l_exp), g.label);
            for (const auto& r : p.relations) {
                out += "rel";
                for (const auto& t : r)
                    out += fmt::format(" {}:{}:{}", t.generator, t.coeff, t.ground_power);
                out += "\n";
            }
        }
    }
    return out;
}

MotivicChart load_ascii(const std::string& text)
{
    MotivicChart chart;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto next_line = [&](std::string& l) {
        if (!std::getline(in, l))
            throw ParseError("unexpected end of chart", line_no);
        ++line_no;
    };
    // Everything after the n-th whitespace-separated token, verbatim.
    auto rest_after = [](const std::string& l, int n) {
        std::size_t pos = 0;
        for (int i = 0; i < n; ++i) {
            pos = l.find_first_not_of(' ', pos);
            pos = l.find(' ', pos);
            if (pos == std::string::npos)
                return std::string{};
        }
        return l.substr(pos + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::istringstream tok(line);
        std::vector<std::string> w;
        for (std::string x; tok >> x;)
            w.push_back(x);
        if (w[0] == "schema") {
            if (w.size() != 2 || w[1] != "manss-chart-ascii/1")
                throw ParseError("unsupported chart schema", line_no);
        }
        else if (w[0] == "base" && w.size() == 2) {
            chart.base = steenrod::parse_base(w[1]);
        }
        else if (w[0] == "prime" && w.size() == 2) {
            chart.prime = static_cast<std::uint32_t>(parse_int(w[1], line_no));
        }
        else if (w[0] == "page" && w.size() == 2) {
            chart.page = w[1] == "inf" ? std::nullopt : std::optional<int>(parse_int(w[1], line_no));
        }
        else if (w[0] == "fixture" && w.size() == 2) {
            chart.meta.fixture = w[1] == "-" ? "" : w[1];
        }
        else if (w[0] == "fixture_hash" && w.size() == 2) {
            chart.meta.fixture_hash = w[1] == "-" ? "" : w[1];
        }
        else if (w[0] == "option" && w.size() >= 2) {
            chart.meta.options[w[1]] = rest_after(line, 2);
        }
        else if (w[0] == "cell" && w.size() >= 8 && w[3] == "summand") {
            CyclicSummand c;
            c.l_exp = parse_exponent(w[4], line_no);
            c.tau_exp = parse_exponent(w[5], line_no);
            c.gen_weight = parse_int(w[6], line_no);
            c.inert = w[7] == "1";
            c.label = rest_after(line, 8);
            chart.entries[{parse_int(w[1], line_no), parse_int(w[2], line_no)}].summands.push_back(std::move(c));
        }
        else if (w[0] == "cell" && w.size() == 7 && w[3] == "presented") {
            PresentedEntry p;
            p.non_split = w[4] == "1";
            const int gens = parse_int(w[5], line_no);
            const int rels = parse_int(w[6], line_no);
            for (int i = 0; i < gens; ++i) {
                std::string gl;
                next_line(gl);
                std::istringstream gt(gl);
                std::string kw, weight, lexp;
                gt >> kw >> weight >> lexp;
                if (kw != "gen")
                    throw ParseError("expected 'gen' line", line_no);
                p.generators.push_back({parse_int(weight, line_no), rest_after(gl, 3), parse_exponent(lexp, line_no)});
            }
            for (int i = 0; i < rels; ++i) {
                std::string rl;
                next_line(rl);
                std::istringstream rt(rl);
                std::string kw;
                rt >> kw;
                if (kw != "rel")
                    throw ParseError("expected 'rel' line", line_no);
                Relation r;
                for (std::string term; rt >> term;) {
                    const auto parts = split(term, ':');
                    if (parts.size() != 3)
                        throw ParseError(fmt::format("bad relation term '{}'", term), line_no);
                    r.push_back({parse_int(parts[0], line_no), parse_int64(parts[1], line_no),
                                 parse_int(parts[2], line_no)});
                }
                p.relations.push_back(std::move(r));
            }
            chart.entries[{parse_int(w[1], line_no), parse_int(w[2], line_no)}].presented.push_back(std::move(p));
        }
        else {
            throw ParseError(fmt::format("unrecognized line '{}'", line), line_no);
        }
    }
    return chart;
}

}  // namespace

std::string save_chart(const MotivicChart& chart, Format format)
{
    if (auto v = validate_motivic(chart); !v.empty())
        throw ValidationError(std::move(v));
    return format == Format::Json ? save_json(chart) : save_ascii(chart);
}

MotivicChart load_chart(const std::string& document)
{
    const auto first = document.find_first_not_of(" \t\r\n");
    auto chart = first != std::string::npos && document[first] == '{' ? load_json(document) : load_ascii(document);
    if (auto v = validate_motivic(chart); !v.empty())
        throw ValidationError(std::move(v));
    return chart;
}

// ---------------------------------------------------------------------------
// Slices

namespace {

void sort_group(GroupType& g)
{
    std::sort(g.begin(), g.end(), [](const Exponent& a, const Exponent& b) {
        if (!a || !b)
            return a.has_value() && !b.has_value();
        return *a < *b;
    });
}

}  // namespace

std::string to_string(const GroupType& g, std::uint32_t prime)
{
    if (g.empty())
        return "0";
    std::vector<std::string> parts;
    for (const auto& e : g) {
        if (!e)
            parts.push_back(fmt::format("Z_{}", prime));
        else if (*e == 1)
            parts.push_back(fmt::format("Z/{}", prime));
        else
            parts.push_back(fmt::format("Z/{}^{}", prime, *e));
    }
    return fmt::format("{}", fmt::join(parts, " + "));
}

GroupType slice(const CyclicSummand& c, int weight, int weight_step)
{
    const int d = c.gen_weight - weight;
    if (d < 0 || d % weight_step != 0)
        return {};
    if (c.tau_exp && d / weight_step >= *c.tau_exp)
        return {};
    return {c.l_exp};
}

GroupType slice(const PresentedEntry& e, int weight, int weight_step, std::uint32_t prime)
{
    std::vector<int> index(e.generators.size(), -1);
    std::size_t n = 0;
    for (std::size_t i = 0; i < e.generators.size(); ++i) {
        const int d = e.generators[i].gen_weight - weight;
        if (d >= 0 && d % weight_step == 0)
            index[i] = static_cast<int>(n++);
    }
    if (n == 0)
        return {};
    std::vector<std::vector<linalg::BigInt>> columns;
    for (std::size_t i = 0; i < e.generators.size(); ++i) {
        if (index[i] < 0 || !e.generators[i].l_exp)
            continue;
        std::vector<linalg::BigInt> col(n, 0);
        col[static_cast<std::size_t>(index[i])] = linalg::BigInt(ipow(prime, *e.generators[i].l_exp));
        columns.push_back(std::move(col));
    }
    for (const auto& r : e.relations) {
        if (r.empty())
            continue;
        const int rel_weight = e.generators.at(static_cast<std::size_t>(r.front().generator)).gen_weight -
                               r.front().ground_power * weight_step;
        const int d = rel_weight - weight;
        if (d < 0 || d % weight_step != 0)
            continue;
        std::vector<linalg::BigInt> col(n, 0);
        for (const auto& t : r) {
            const int idx = index.at(static_cast<std::size_t>(t.generator));
            if (idx < 0)
                throw ConfigurationError("relation is not homogeneous");
            col[static_cast<std::size_t>(idx)] += t.coeff;
        }
        columns.push_back(std::move(col));
    }
    linalg::IntMatrix m(n, std::vector<linalg::BigInt>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (std::size_t i = 0; i < n; ++i)
            m[i][j] = columns[j][i];
    const auto factors = linalg::invariant_factors(m, n, columns.size());
    GroupType g;
    for (const auto& f : factors) {
        if (f == 0)
            g.push_back(infinite);
        else if (const int v = linalg::valuation(f, prime); v > 0)
            g.push_back(v);
    }
    sort_group(g);
    return g;
}

GroupType slice(const Cell& cell, int weight, int weight_step, std::uint32_t prime)
{
    GroupType g;
    for (const auto& c : cell.summands)
        for (const auto& e : slice(c, weight, weight_step))
            g.push_back(e);
    for (const auto& p : cell.presented)
        for (const auto& e : slice(p, weight, weight_step, prime))
            g.push_back(e);
    sort_group(g);
    return g;
}

// ---------------------------------------------------------------------------
// Normalization over Z_l[g]

namespace {

/// Homogeneous relation matrix with coefficients mod l^N; ground exponents are implied by weights.
class GradedMatrix {
public:
    GradedMatrix(std::uint32_t prime, int n, std::vector<int> row_weights, std::vector<int> col_weights, int step)
        : l_(prime), n_(n), modulus_(ipow(prime, n)), row_w_(std::move(row_weights)), col_w_(std::move(col_weights)),
          step_(step), c_(row_w_.size(), std::vector<std::int64_t>(col_w_.size(), 0))
    {
    }

    std::size_t rows() const { return row_w_.size(); }
    std::size_t cols() const { return col_w_.size(); }
    std::int64_t modulus() const { return modulus_; }
    std::int64_t& at(std::size_t i, std::size_t j) { return c_[i][j]; }
    std::int64_t at(std::size_t i, std::size_t j) const { return c_[i][j]; }
    int row_weight(std::size_t i) const { return row_w_[i]; }
    int col_weight(std::size_t j) const { return col_w_[j]; }
    int power(std::size_t i, std::size_t j) const { return (row_w_[i] - col_w_[j]) / step_; }

    int val(std::int64_t c) const
    {
        int v = 0;
        while (c % l_ == 0 && v < n_) {
            c /= l_;
            ++v;
        }
        return v;
    }

    bool divides(std::size_t i, std::size_t j, std::size_t k, std::size_t m) const
    {
        return val(c_[i][j]) <= val(c_[k][m]) && power(i, j) <= power(k, m);
    }

    /// q with q * c_ij = c_km (mod l^N), assuming divisibility.
    std::int64_t quotient(std::size_t i, std::size_t j, std::size_t k, std::size_t m) const
    {
        const int v = val(c_[i][j]);
        std::int64_t a = c_[i][j], b = c_[k][m];
        const std::int64_t lv = ipow(l_, v);
        a /= lv;
        b /= lv;
        return mulmod(b, inverse(a));
    }

    void row_op(std::size_t target, std::size_t source, std::int64_t q)
    {
        for (std::size_t j = 0; j < cols(); ++j)
            c_[target][j] = submod(c_[target][j], mulmod(q, c_[source][j]));
    }

    void col_op(std::size_t target, std::size_t source, std::int64_t q)
    {
        for (std::size_t i = 0; i < rows(); ++i)
            c_[i][target] = submod(c_[i][target], mulmod(q, c_[i][source]));
    }

    std::int64_t symmetric(std::int64_t c) const { return c > modulus_ / 2 ? c - modulus_ : c; }

private:
    std::int64_t mulmod(std::int64_t a, std::int64_t b) const
    {
        return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % modulus_);
    }
    std::int64_t submod(std::int64_t a, std::int64_t b) const { return ((a - b) % modulus_ + modulus_) % modulus_; }
    std::int64_t inverse(std::int64_t a) const
    {
        std::int64_t t = 0, nt = 1, r = modulus_, nr = ((a % modulus_) + modulus_) % modulus_;
        while (nr) {
            const auto q = r / nr;
            std::tie(t, nt) = std::pair{nt, t - q * nt};
            std::tie(r, nr) = std::pair{nr, r - q * nr};
        }
        return ((t % modulus_) + modulus_) % modulus_;
    }

    std::int64_t l_;
    int n_;
    std::int64_t modulus_;
    std::vector<int> row_w_;
    std::vector<int> col_w_;
    int step_;
    std::vector<std::vector<std::int64_t>> c_;
};

/// Clears column j of every row but i (row operations). Returns true if anything changed.
bool clear_column(GradedMatrix& m, std::size_t i, std::size_t j)
{
    bool changed = false;
    for (std::size_t k = 0; k < m.rows(); ++k)
        if (k != i && m.at(k, j)) {
            m.row_op(k, i, m.quotient(i, j, k, j));
            changed = true;
        }
    return changed;
}

bool clear_row(GradedMatrix& m, std::size_t i, std::size_t j)
{
    bool changed = false;
    for (std::size_t k = 0; k < m.cols(); ++k)
        if (k != j && m.at(i, k)) {
            m.col_op(k, j, m.quotient(i, j, i, k));
            changed = true;
        }
    return changed;
}

bool divides_line(const GradedMatrix& m, std::size_t i, std::size_t j, bool row, bool col)
{
    if (row)
        for (std::size_t k = 0; k < m.cols(); ++k)
            if (m.at(i, k) && !m.divides(i, j, i, k))
                return false;
    if (col)
        for (std::size_t k = 0; k < m.rows(); ++k)
            if (m.at(k, j) && !m.divides(i, j, k, j))
                return false;
    return true;
}

void reduce(GradedMatrix& m)
{
    std::vector<bool> done_row(m.rows()), done_col(m.cols());
    const std::size_t cap = 16 * (m.rows() + m.cols() + 1) * (m.rows() + m.cols() + 1);
    for (std::size_t iter = 0; iter < cap; ++iter) {
        bool progressed = false;
        // an entry dividing its whole row and column splits off
        for (std::size_t i = 0; i < m.rows() && !progressed; ++i) {
            if (done_row[i])
                continue;
            for (std::size_t j = 0; j < m.cols() && !progressed; ++j) {
                if (done_col[j] || !m.at(i, j) || !divides_line(m, i, j, true, true))
                    continue;
                clear_column(m, i, j);
                clear_row(m, i, j);
                done_row[i] = true;
                done_col[j] = true;
                progressed = true;
            }
        }
        if (progressed)
            continue;
        // otherwise clear one line using an entry that divides it
        for (std::size_t j = 0; j < m.cols() && !progressed; ++j) {
            if (done_col[j])
                continue;
            std::size_t nonzero = 0;
            for (std::size_t i = 0; i < m.rows(); ++i)
                nonzero += m.at(i, j) != 0;
            if (nonzero < 2)
                continue;
            for (std::size_t i = 0; i < m.rows() && !progressed; ++i)
                if (m.at(i, j) && divides_line(m, i, j, false, true))
                    progressed = clear_column(m, i, j);
        }
        for (std::size_t i = 0; i < m.rows() && !progressed; ++i) {
            if (done_row[i])
                continue;
            std::size_t nonzero = 0;
            for (std::size_t j = 0; j < m.cols(); ++j)
                nonzero += m.at(i, j) != 0;
            if (nonzero < 2)
                continue;
            for (std::size_t j = 0; j < m.cols() && !progressed; ++j)
                if (m.at(i, j) && divides_line(m, i, j, true, false))
                    progressed = clear_row(m, i, j);
        }
        if (!progressed)
            return;
    }
}

}  // namespace

NormalizedEntry normalize_entry(const PresentedEntry& e, std::uint32_t prime, int weight_step)
{
    const std::size_t gens = e.generators.size();
    std::vector<int> row_w;
    for (const auto& g : e.generators)
        row_w.push_back(g.gen_weight);

    struct Column {
        int weight;
        std::vector<std::pair<std::size_t, std::int64_t>> coeffs;
    };
    std::vector<Column> columns;
    int n = 1;
    for (std::size_t i = 0; i < gens; ++i)
        if (const auto& le = e.generators[i].l_exp) {
            columns.push_back({row_w[i], {{i, ipow(prime, *le)}}});
            n = std::max(n, *le + 1);
        }
    bool any_infinite = std::any_of(e.generators.begin(), e.generators.end(), [](const auto& g) { return !g.l_exp; });
    for (const auto& r : e.relations) {
        if (r.empty())
            continue;
        Column col;
        col.weight = row_w.at(static_cast<std::size_t>(r.front().generator)) - r.front().ground_power * weight_step;
        std::map<std::size_t, std::int64_t> acc;
        for (const auto& t : r) {
            const auto g = static_cast<std::size_t>(t.generator);
            if (t.ground_power < 0 || row_w.at(g) - t.ground_power * weight_step != col.weight)
                throw ConfigurationError("relation is not homogeneous");
            acc[g] += t.coeff;
        }
        for (auto [g, c] : acc)
            if (c)
                col.coeffs.push_back({g, c});
        columns.push_back(std::move(col));
    }
    if (any_infinite) {
        // Hadamard bound on the torsion exponents of every slice
        double log_bound = 0;
        for (const auto& c : columns) {
            double norm2 = 0;
            for (auto [g, x] : c.coeffs)
                norm2 += static_cast<double>(x) * static_cast<double>(x);
            if (norm2 > 0)
                log_bound += 0.5 * std::log(norm2) / std::log(static_cast<double>(prime));
        }
        n = std::max(n, static_cast<int>(std::floor(log_bound)) + 2);
    }
    if (std::log2(static_cast<double>(prime)) * n > 62)
        throw RangeError("presentation coefficients too large to normalize");

    std::vector<int> col_w;
    for (const auto& c : columns)
        col_w.push_back(c.weight);
    GradedMatrix m(prime, n, row_w, col_w, weight_step);
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (auto [g, c] : columns[j].coeffs)
            m.at(g, j) = ((c % m.modulus()) + m.modulus()) % m.modulus();
    reduce(m);

    // connected components of rows sharing a nonzero column
    std::vector<std::size_t> parent(gens);
    for (std::size_t i = 0; i < gens; ++i)
        parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t j = 0; j < m.cols(); ++j) {
        std::optional<std::size_t> first;
        for (std::size_t i = 0; i < gens; ++i)
            if (m.at(i, j)) {
                if (first)
                    parent[find(i)] = find(*first);
                else
                    first = i;
            }
    }
    std::map<std::size_t, std::vector<std::size_t>> components;
    for (std::size_t i = 0; i < gens; ++i)
        components[find(i)].push_back(i);

    NormalizedEntry out;
    if (any_infinite && std::any_of(components.begin(), components.end(),
                                    [](const auto& kv) { return kv.second.size() > 1; })) {
        // coupled rows with free generators: keep the entry as given
        PresentedEntry whole = e;
        whole.non_split = true;
        out.presented.push_back(std::move(whole));
        return out;
    }
    for (const auto& [root, rows] : components) {
        if (rows.size() == 1) {
            const auto i = rows.front();
            // minimal generators (valuation, ground power) of the monomial ideal in this row
            std::vector<std::pair<int, int>> ideal;
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (m.at(i, j))
                    ideal.push_back({m.val(m.at(i, j)), m.power(i, j)});
            std::sort(ideal.begin(), ideal.end());
            std::vector<std::pair<int, int>> minimal;
            for (auto [v, b] : ideal)
                if (std::none_of(minimal.begin(), minimal.end(),
                                 [&](const auto& x) { return x.first <= v && x.second <= b; }))
                    minimal.push_back({v, b});
            const auto& g = e.generators[i];
            if (std::any_of(minimal.begin(), minimal.end(), [](const auto& x) { return x == std::pair{0, 0}; }))
                continue;  // the generator is zero
            Exponent l_exp = infinite, tau_exp = infinite;
            bool cyclic = true;
            for (auto [v, b] : minimal) {
                if (b == 0)
                    l_exp = v;
                else if (v == 0)
                    tau_exp = b;
                else
                    cyclic = false;
            }
            if (cyclic) {
                out.summands.push_back({l_exp, tau_exp, g.gen_weight, g.label, tau_exp.has_value()});
                continue;
            }
            PresentedEntry p;
            p.generators.push_back({g.gen_weight, g.label, l_exp});
            for (auto [v, b] : minimal)
                if (b != 0)
                    p.relations.push_back({{0, ipow(prime, v), b}});
            p.non_split = true;
            out.presented.push_back(std::move(p));
            continue;
        }
        PresentedEntry p;
        std::map<std::size_t, int> local;
        for (auto i : rows) {
            local[i] = static_cast<int>(p.generators.size());
            p.generators.push_back({e.generators[i].gen_weight, e.generators[i].label, infinite});
        }
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Relation r;
            for (auto i : rows)
                if (m.at(i, j))
                    r.push_back({local[i], m.symmetric(m.at(i, j)), m.power(i, j)});
            if (!r.empty())
                p.relations.push_back(std::move(r));
        }
        for (auto i : rows)
            p.relations.push_back({{local[i], ipow(prime, n - 1), 0}});
        p.non_split = true;
        out.presented.push_back(std::move(p));
    }
    return out;
}

}  // namespace manss::chart
