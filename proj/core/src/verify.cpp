#include "manss/verify.hpp"

#include "manss/cobar.hpp"
#include "manss/errors.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <random>

namespace manss::verify {

using chart::Exponent;
using chart::GroupType;
using chart::MotivicChart;
using chart::Position;

bool Report::ok() const
{
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

void Report::merge(const Report& other)
{
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

std::string Report::format() const
{
    std::string out;
    for (const auto& c : checks)
        out += fmt::format("{} {} {}{}\n", c.suite, c.pass ? "PASS" : "FAIL", c.subject,
                           c.detail.empty() ? "" : " " + c.detail);
    return out;
}

namespace {

std::int64_t ipow(std::int64_t b, int e)
{
    std::int64_t r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Random charts

ClassicalChart random_chart(std::uint64_t seed, const RandomOptions& options)
{
    std::mt19937_64 rng(seed);
    auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const int l = static_cast<int>(options.prime);
    const int q = chart::sparseness_modulus(options.prime);

    ClassicalChart c;
    c.prime = options.prime;
    c.name = fmt::format("random-{}", seed);
    c.groups[{0, 0}] = {{chart::infinite, "Z_l", ""}};

    std::vector<Position> positions;
    for (int stem = 1; stem <= options.max_stem; ++stem)
        for (int s = 1; s <= stem; ++s)
            if ((s + stem) % q == 0)
                positions.push_back({s, stem});

    int next_label = 0;
    std::set<std::string> used;
    auto add_generator = [&](Position p) {
        auto label = fmt::format("g{}", next_label++);
        c.groups[p].push_back({uniform(1, 2), label, ""});
        return label;
    };
    const int cells = uniform(2, 6);
    for (int k = 0; k < cells; ++k) {
        const auto p = positions[static_cast<std::size_t>(uniform(0, static_cast<int>(positions.size()) - 1))];
        const int gens = uniform(1, 2);
        for (int g = 0; g < gens && static_cast<int>(c.groups[p].size()) < options.max_cell_generators; ++g)
            add_generator(p);
    }

    auto unused = [&](Position p) {
        std::vector<std::string> out;
        for (const auto& g : c.groups[p])
            if (!used.contains(g.label))
                out.push_back(g.label);
        return out;
    };
    auto order_of = [&](Position p, const std::string& label) {
        for (const auto& g : c.groups[p])
            if (g.label == label)
                return *g.l_exp;
        return 1;
    };

    const int attempts = uniform(0, 3);
    for (int a = 0; a < attempts; ++a) {
        const int r = 1 + q * uniform(1, 3);
        std::vector<Position> sources;
        for (const auto& p : positions) {
            const Position t{p.first + r, p.second - 1};
            if (t.second >= t.first && p != t)
                sources.push_back(p);
        }
        if (sources.empty())
            continue;
        // prefer cells that already hold classes
        std::vector<Position> occupied;
        for (const auto& p : sources)
            if (!unused(p).empty())
                occupied.push_back(p);
        const auto& pool = occupied.empty() || uniform(0, 3) == 0 ? sources : occupied;
        const Position src = pool[static_cast<std::size_t>(uniform(0, static_cast<int>(pool.size()) - 1))];
        const Position tgt{src.first + r, src.second - 1};
        if (unused(src).empty()) {
            if (static_cast<int>(c.groups[src].size()) >= options.max_cell_generators)
                continue;
            add_generator(src);
        }
        if (unused(tgt).empty()) {
            const int gens = uniform(1, 2);
            for (int g = 0; g < gens && static_cast<int>(c.groups[tgt].size()) < options.max_cell_generators; ++g)
                add_generator(tgt);
            if (unused(tgt).empty())
                continue;
        }
        auto pick = [&](std::vector<std::string> from) {
            std::shuffle(from.begin(), from.end(), rng);
            from.resize(static_cast<std::size_t>(uniform(1, std::min<int>(2, static_cast<int>(from.size())))));
            std::sort(from.begin(), from.end());
            return from;
        };
        chart::ClassicalDifferential d;
        d.page = r;
        d.source = src;
        d.target = tgt;
        d.source_labels = pick(unused(src));
        d.target_labels = pick(unused(tgt));
        const int mode = uniform(0, 5);
        for (const auto& y : d.target_labels) {
            const int m = order_of(tgt, y);
            std::vector<std::int64_t> row;
            for (const auto& x : d.source_labels) {
                const int n = order_of(src, x);
                const std::int64_t base = ipow(l, std::max(0, m - n));
                const std::int64_t mod = ipow(l, m);
                std::int64_t v = 0;
                if (mode == 0)
                    v = 0;  // zero image
                else if (mode == 1)
                    v = base == 1 && m > 1 ? l : base;  // image of lower order when possible
                else
                    v = base * uniform(0, static_cast<int>(mod / base) - 1);
                row.push_back(v);
            }
            d.matrix.push_back(std::move(row));
        }
        for (const auto& x : d.source_labels)
            used.insert(x);
        for (const auto& y : d.target_labels)
            used.insert(y);
        c.differentials.push_back(std::move(d));
    }
    std::erase_if(c.groups, [](const auto& kv) { return kv.second.empty(); });
    if (auto v = chart::validate_classical(c); !v.empty())
        throw InvariantViolation(fmt::format("random chart {} is invalid: {}", seed, v.front().detail));
    return c;
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

/// Finite abelian group prod Z/l^{e_i}, elements encoded in mixed radix.
struct FiniteGroup {
    std::int64_t l = 3;
    std::vector<std::int64_t> orders;
    std::int64_t size = 1;

    FiniteGroup(std::int64_t prime, const std::vector<int>& exps) : l(prime)
    {
        for (int e : exps) {
            orders.push_back(ipow(prime, e));
            size *= orders.back();
        }
    }
    std::vector<std::int64_t> decode(std::int64_t code) const
    {
        std::vector<std::int64_t> v(orders.size());
        for (std::size_t i = 0; i < orders.size(); ++i) {
            v[i] = code % orders[i];
            code /= orders[i];
        }
        return v;
    }
    std::int64_t encode(const std::vector<std::int64_t>& v) const
    {
        std::int64_t code = 0;
        for (std::size_t i = orders.size(); i-- > 0;)
            code = code * orders[i] + (((v[i] % orders[i]) + orders[i]) % orders[i]);
        return code;
    }
    std::int64_t add(std::int64_t a, std::int64_t b) const
    {
        auto x = decode(a), y = decode(b);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] += y[i];
        return encode(x);
    }
    std::int64_t scale(std::int64_t a, std::int64_t k) const
    {
        auto x = decode(a);
        for (auto& v : x)
            v *= k;
        return encode(x);
    }
};

struct SliceState {
    std::vector<char> z;
    std::vector<char> b;
};

/// Smallest subgroup containing the subgroup `set` and the elements of `extra`.
void close_under(const FiniteGroup& g, std::vector<char>& set, const std::vector<std::int64_t>& extra)
{
    for (auto y : extra) {
        if (set[static_cast<std::size_t>(y)])
            continue;
        std::vector<std::int64_t> members;
        for (std::int64_t x = 0; x < g.size; ++x)
            if (set[static_cast<std::size_t>(x)])
                members.push_back(x);
        for (auto cur = y; !set[static_cast<std::size_t>(cur)]; cur = g.add(cur, y))
            for (auto m : members)
                set[static_cast<std::size_t>(g.add(m, cur))] = 1;
    }
}

GroupType quotient_type(const FiniteGroup& g, const SliceState& st)
{
    std::int64_t b_size = 0;
    for (auto x : st.b)
        b_size += x;
    GroupType out;
    std::int64_t prev = 1;
    for (int k = 1;; ++k) {
        std::int64_t count = 0;
        const auto lk = ipow(g.l, k);
        for (std::int64_t x = 0; x < g.size; ++x)
            if (st.z[static_cast<std::size_t>(x)] && st.b[static_cast<std::size_t>(g.scale(x, lk))])
                ++count;
        const auto killed = count / b_size;
        if (killed == prev)
            break;
        int at_least_k = 0;
        for (auto ratio = killed / prev; ratio > 1; ratio /= g.l)
            ++at_least_k;
        // at_least_k summands have exponent >= k
        for (int i = 0; i < at_least_k; ++i)
            out.push_back(k);
        prev = killed;
    }
    // out lists each summand once per level it reaches; collapse to exponents
    std::map<int, int> level_count;
    for (auto& e : out)
        ++level_count[*e];
    GroupType exps;
    for (auto [k, n] : level_count) {
        const int next = level_count.contains(k + 1) ? level_count[k + 1] : 0;
        for (int i = 0; i < n - next; ++i)
            exps.push_back(k);
    }
    std::sort(exps.begin(), exps.end());
    return exps;
}

}  // namespace

OracleSlices slice_oracle(const ClassicalChart& classical, Base base, int weight_lo, int weight_hi)
{
    const int step = base == Base::C ? 1 : 2;
    const std::int64_t l = classical.prime;
    struct CellData {
        FiniteGroup group;
        std::map<std::string, std::size_t> coord;
        int weight;
        std::map<int, SliceState> slices;
    };
    std::map<Position, CellData> cells;
    for (const auto& [pos, groups] : classical.groups) {
        if (pos == Position{0, 0} || groups.empty())
            continue;
        std::vector<int> exps;
        std::map<std::string, std::size_t> coord;
        for (const auto& g : groups) {
            coord[g.label] = exps.size();
            exps.push_back(*g.l_exp);
        }
        CellData cd{FiniteGroup(l, exps), coord, (pos.first + pos.second) / 2, {}};
        for (int w = weight_lo; w <= weight_hi; ++w) {
            if (w > cd.weight || (cd.weight - w) % step != 0)
                continue;
            SliceState st;
            st.z.assign(static_cast<std::size_t>(cd.group.size), 1);
            st.b.assign(static_cast<std::size_t>(cd.group.size), 0);
            st.b[0] = 1;
            cd.slices.emplace(w, std::move(st));
        }
        cells.emplace(pos, std::move(cd));
    }

    OracleSlices out;
    auto record = [&](int page) {
        out.pages.push_back(page);
        for (const auto& [pos, cd] : cells)
            for (const auto& [w, st] : cd.slices) {
                auto type = quotient_type(cd.group, st);
                if (!type.empty())
                    out.slices[{page, pos.first, pos.second, w}] = std::move(type);
            }
    };
    record(2);

    auto diffs = classical.differentials;
    std::stable_sort(diffs.begin(), diffs.end(), [](const auto& a, const auto& b) {
        return std::tuple{a.page, a.source.first, a.source.second} < std::tuple{b.page, b.source.first, b.source.second};
    });
    for (std::size_t i = 0; i < diffs.size();) {
        const int page = diffs[i].page;
        for (; i < diffs.size() && diffs[i].page == page; ++i) {
            const auto& d = diffs[i];
            auto& x = cells.at(d.source);
            auto& y = cells.at(d.target);
            for (auto& [w, xs] : x.slices) {
                auto yit = y.slices.find(w);
                if (yit == y.slices.end())
                    continue;
                auto& ys = yit->second;
                auto phi = [&](std::int64_t code) {
                    const auto v = x.group.decode(code);
                    std::vector<std::int64_t> image(y.group.orders.size(), 0);
                    for (std::size_t r = 0; r < d.target_labels.size(); ++r)
                        for (std::size_t c = 0; c < d.source_labels.size(); ++c)
                            image[y.coord.at(d.target_labels[r])] += d.matrix[r][c] * v[x.coord.at(d.source_labels[c])];
                    return y.group.encode(image);
                };
                std::vector<std::int64_t> images;
                std::vector<char> new_z = xs.z;
                for (std::int64_t z = 0; z < x.group.size; ++z) {
                    if (!xs.z[static_cast<std::size_t>(z)])
                        continue;
                    const auto img = phi(z);
                    images.push_back(img);
                    if (!ys.b[static_cast<std::size_t>(img)])
                        new_z[static_cast<std::size_t>(z)] = 0;
                }
                std::sort(images.begin(), images.end());
                images.erase(std::unique(images.begin(), images.end()), images.end());
                close_under(y.group, ys.b, images);
                xs.z = std::move(new_z);
            }
        }
        record(page + 1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Property suites

namespace {

struct PageSequence {
    std::vector<builder::PageState> states;  // E2, E_{r+1} for each differential page, then E-infinity
};

PageSequence pages_of(const ClassicalChart& classical, Base base)
{
    PageSequence seq;
    auto st = builder::start(classical, base);
    seq.states.push_back(st);
    std::set<int> pages;
    for (const auto& d : st.pending)
        pages.insert(d.page);
    for (int r : pages) {
        st = builder::propagate(st, r + 1);
        seq.states.push_back(st);
    }
    auto last = st;
    last.chart = builder::compute_einf(st);
    seq.states.push_back(last);
    return seq;
}

std::string page_name(const MotivicChart& c)
{
    return c.page ? fmt::format("E{}", *c.page) : "Einf";
}

std::pair<int, int> weight_range(const ClassicalChart& classical)
{
    int hi = 0;
    for (const auto& [pos, g] : classical.groups)
        hi = std::max(hi, (pos.first + pos.second) / 2);
    return {-3, hi + 2};
}

class Collector {
public:
    Collector(std::string suite, std::string subject) : suite_(std::move(suite)), subject_(std::move(subject)) {}
    void fail(std::string detail)
    {
        if (failures_++ == 0)
            first_ = std::move(detail);
    }
    void count() { ++checked_; }
    CheckResult result() const
    {
        if (failures_)
            return {suite_, subject_, false, fmt::format("failures={} first: {}", failures_, first_), checked_};
        return {suite_, subject_, true, fmt::format("checked={}", checked_), checked_};
    }

private:
    std::string suite_;
    std::string subject_;
    std::size_t failures_ = 0;
    std::size_t checked_ = 0;
    std::string first_;
};

}  // namespace

Report oracle_equivalence(const ClassicalChart& classical, Base base, const std::string& subject)
{
    Collector col("oracle", fmt::format("{}/{}", subject, steenrod::to_string(base)));
    try {
        const auto [lo, hi] = weight_range(classical);
        const auto oracle = slice_oracle(classical, base, lo, hi);
        const auto seq = pages_of(classical, base);
        // states[0..pages-1] line up with oracle.pages; the last state is E-infinity = last oracle page
        for (std::size_t k = 0; k < seq.states.size(); ++k) {
            const auto& chart = seq.states[k].chart;
            const int page = oracle.pages[std::min(k, oracle.pages.size() - 1)];
            std::set<Position> positions;
            for (const auto& [pos, cell] : chart.entries)
                positions.insert(pos);
            for (const auto& [key, g] : oracle.slices)
                if (std::get<0>(key) == page)
                    positions.insert({std::get<1>(key), std::get<2>(key)});
            for (const auto& pos : positions) {
                for (int w = lo; w <= hi; ++w) {
                    col.count();
                    auto it = chart.entries.find(pos);
                    const GroupType symbolic = it == chart.entries.end()
                                                   ? GroupType{}
                                                   : chart::slice(it->second, w, chart.weight_step(), chart.prime);
                    GroupType expected;
                    if (pos == Position{0, 0}) {
                        if (w <= 0 && w % chart.weight_step() == 0)
                            expected = {chart::infinite};
                    }
                    else if (auto o = oracle.slices.find({page, pos.first, pos.second, w}); o != oracle.slices.end()) {
                        expected = o->second;
                    }
                    if (symbolic != expected)
                        col.fail(fmt::format("{} ({},{}) u={}: builder {} oracle {}", page_name(chart), pos.first,
                                             pos.second, w, chart::to_string(symbolic, chart.prime),
                                             chart::to_string(expected, chart.prime)));
                }
            }
        }
    }
    catch (const std::exception& e) {
        col.fail(e.what());
    }
    Report r;
    r.add(col.result());
    return r;
}

Report structural_properties(const ClassicalChart& classical, const std::string& subject)
{
    Collector sparse("sparseness", subject), vanish("vanishing-line", subject), inert("torsion-inertness", subject),
        ceiling("weight-ceiling", subject), realize("realization", subject), change("base-change", subject);
    const int q = chart::sparseness_modulus(classical.prime);
    Report report;
    try {
        const auto c_pages = pages_of(classical, Base::C);
        const auto r_pages = pages_of(classical, Base::R);
        for (const auto* seq : {&c_pages, &r_pages}) {
            for (const auto& st : seq->states) {
                const auto& chart = st.chart;
                for (const auto& [pos, cell] : chart.entries) {
                    sparse.count();
                    vanish.count();
                    if ((pos.first + pos.second) % q != 0)
                        sparse.fail(fmt::format("{} cell ({},{})", page_name(chart), pos.first, pos.second));
                    if (pos.second < pos.first)
                        vanish.fail(fmt::format("{} cell ({},{})", page_name(chart), pos.first, pos.second));
                }
                for (const auto& rec : st.log) {
                    inert.count();
                    if (!rec.summand)
                        continue;
                    auto it = chart.entries.find(rec.position);
                    if (it == chart.entries.end() ||
                        std::find(it->second.summands.begin(), it->second.summands.end(), *rec.summand) ==
                            it->second.summands.end())
                        inert.fail(fmt::format("{} lost the torsion class at ({},{})", page_name(chart),
                                               rec.position.first, rec.position.second));
                }
            }
            const auto& einf = seq->states.back().chart;
            for (const auto& [pos, cell] : einf.entries) {
                auto check = [&](int w) {
                    ceiling.count();
                    if (w > pos.second || (w == pos.second && pos.first != pos.second))
                        ceiling.fail(fmt::format("weight {} at ({},{})", w, pos.first, pos.second));
                };
                for (const auto& c : cell.summands)
                    check(c.gen_weight);
                for (const auto& p : cell.presented)
                    for (const auto& g : p.generators)
                        check(g.gen_weight);
            }
        }
        for (const auto& st : c_pages.states) {
            realize.count();
            const auto& chart = st.chart;
            const auto expected = builder::group_types(builder::classical_page(classical, chart.page));
            const auto got = builder::group_types(builder::realize_weight0(chart));
            if (expected != got)
                realize.fail(fmt::format("{} weight-0 slice differs from the classical page", page_name(chart)));
        }
        for (std::size_t k = 0; k < c_pages.states.size(); ++k) {
            change.count();
            const auto& cc = c_pages.states[k].chart;
            const auto rc = builder::base_change(r_pages.states.at(k).chart);
            if (rc.entries != cc.entries)
                change.fail(fmt::format("{} entries differ after theta -> tau^2", page_name(cc)));
            const auto [lo, hi] = weight_range(classical);
            std::set<Position> positions;
            for (const auto& [pos, cell] : cc.entries)
                positions.insert(pos);
            for (const auto& [pos, cell] : r_pages.states[k].chart.entries)
                positions.insert(pos);
            for (const auto& pos : positions)
                for (int w = lo - lo % 2; w <= hi; w += 2) {
                    const auto& rchart = r_pages.states[k].chart;
                    auto slice_of = [&](const MotivicChart& ch) {
                        auto it = ch.entries.find(pos);
                        return it == ch.entries.end() ? GroupType{}
                                                      : chart::slice(it->second, w, ch.weight_step(), ch.prime);
                    };
                    if (slice_of(rchart) != slice_of(cc))
                        change.fail(fmt::format("{} ({},{}) u={}: R and even C slices differ", page_name(cc),
                                                pos.first, pos.second, w));
                }
        }
    }
    catch (const std::exception& e) {
        sparse.fail(e.what());
    }
    for (const auto& c : {sparse, vanish, inert, ceiling, realize, change})
        report.add(c.result());
    return report;
}

Report query_stability(const ClassicalChart& classical, const std::string& subject)
{
    Collector col("query", subject);
    try {
        const auto einf = builder::run(classical, Base::C).chart;
        int max_stem = 0;
        for (const auto& [pos, cell] : einf.entries)
            max_stem = std::max(max_stem, pos.second);
        for (int stem = 0; stem <= max_stem + 2; ++stem) {
            const auto base = builder::query_pi(einf, stem, 0);
            for (int u = -3; u <= stem + 3; ++u) {
                col.count();
                const auto q = builder::query_pi(einf, stem, u);
                if (q.tau_stable != builder::tau_stable_region(stem, u))
                    col.fail(fmt::format("stem {} u={}: stability flag wrong", stem, u));
                if (u > stem && (!q.groups.empty() || !q.vanishing))
                    col.fail(fmt::format("stem {} u={}: nonzero above the vanishing region", stem, u));
                if (q.tau_stable && q.groups != base.groups)
                    col.fail(fmt::format("stem {} u={}: tau-stable slice differs from weight 0", stem, u));
            }
        }
    }
    catch (const std::exception& e) {
        col.fail(e.what());
    }
    Report r;
    r.add(col.result());
    return r;
}

std::uint32_t polynomial_count(std::uint32_t prime, int s, int t, int u)
{
    std::vector<std::pair<int, int>> gens;  // (t, u)
    for (std::int64_t p = 1; 2 * p - 1 <= std::max(t, 1); p *= prime)
        gens.push_back({static_cast<int>(2 * p - 1), static_cast<int>(p - 1)});
    std::uint32_t count = 0;
    auto rec = [&](auto&& self, std::size_t i, int s_left, int t_left, int weight) -> void {
        if (i == gens.size()) {
            if (s_left == 0 && t_left == 0 && weight >= u)
                ++count;
            return;
        }
        for (int e = 0; e <= s_left && e * gens[i].first <= t_left; ++e)
            self(self, i + 1, s_left - e, t_left - e * gens[i].first, weight + e * gens[i].second);
    };
    rec(rec, 0, s, t, 0);
    return count;
}

Report cotor_checks(std::uint32_t prime, int s_max, int t_max)
{
    Report report;
    const auto subject = fmt::format("l={} s<={} t<={}", prime, s_max, t_max);
    steenrod::DualSteenrod alg(steenrod::GroundRing(Base::C, prime),
                               steenrod::EnumerationBounds{std::max(6, s_max), std::max(64, t_max + s_max), 64});
    cobar::CotorRange range;
    range.s_max = s_max;
    range.t_max = t_max;

    Collector poly("cotor-e-polynomial", subject);
    try {
        const auto e = cobar::cotor(steenrod::Algebra::E, cobar::ComoduleSpec::trivial(), range, alg);
        for (const auto& [k, entry] : e.entries) {
            poly.count();
            const auto expected = polynomial_count(prime, k.s, k.t, k.u);
            if (entry.dim != expected || entry.edge)
                poly.fail(fmt::format("(s={},t={},u={}): cobar {} monomials {}", k.s, k.t, k.u, entry.dim, expected));
        }
    }
    catch (const std::exception& ex) {
        poly.fail(ex.what());
    }
    report.add(poly.result());

    Collector cess("cess-collapse", subject);
    try {
        const auto a = cobar::cotor(steenrod::Algebra::A, cobar::ComoduleSpec::trivial(), range, alg);
        const auto e2 = cobar::cess_e2(range, alg);
        for (const auto& [k, entry] : a.entries) {
            cess.count();
            std::uint32_t total = 0;
            for (int s2 = 0; s2 <= k.s; ++s2)
                total += e2.dim({k.s - s2, s2, k.t, k.u});
            if (total != entry.dim)
                cess.fail(fmt::format("(s={},t={},u={}): Cotor_A {} CESS {}", k.s, k.t, k.u, entry.dim, total));
        }
    }
    catch (const std::exception& ex) {
        cess.fail(ex.what());
    }
    report.add(cess.result());

    Collector nov("algnov-reindex", subject);
    try {
        auto wide = range;
        wide.u_lo = -s_max * static_cast<int>(prime - 1) - 1;
        wide.u_hi = (t_max + s_max) / 2;
        const auto e1 = cobar::algnov_e1(wide, alg);
        auto cess_range = wide;
        cess_range.t_max = t_max + s_max;
        const auto e2 = cobar::cess_e2(cess_range, alg);
        for (const auto& [k, entry] : e1.entries) {
            nov.count();
            const auto target = cobar::algnov_to_cess(k);
            if (!e2.computed(target) || e2.dim(target) != entry.dim)
                nov.fail(fmt::format("q-key (s1={},n={},t={},u={})", k.s, k.coeff_degree, k.t, k.u));
            if (cobar::cess_to_algnov(target) != k)
                nov.fail("index maps are not inverse");
        }
        for (const auto& [k, entry] : e2.entries) {
            const auto back = cobar::cess_to_algnov(k);
            if (back.t < 0 || back.t > t_max)
                continue;
            nov.count();
            if (!e1.computed(back) || e1.dim(back) != entry.dim)
                nov.fail(fmt::format("a-key (s1={},n={},t={},u={})", k.s, k.coeff_degree, k.t, k.u));
        }
    }
    catch (const std::exception& ex) {
        nov.fail(ex.what());
    }
    report.add(nov.result());
    return report;
}

Report run_suites(const ClassicalChart& fixture, const SuiteOptions& options)
{
    Report report;
    const auto& name = fixture.name.empty() ? std::string("fixture") : fixture.name;
    const bool structure = options.suites.contains("structure");
    const bool oracle = options.suites.contains("oracle");
    const bool query = options.suites.contains("query");
    if (structure)
        report.merge(structural_properties(fixture, name));
    if (oracle) {
        report.merge(oracle_equivalence(fixture, Base::C, name));
        report.merge(oracle_equivalence(fixture, Base::R, name));
    }
    if (query)
        report.merge(query_stability(fixture, name));

    if ((structure || oracle || query) && options.random_charts > 0) {
        const auto subject = fmt::format("random[seed={},count={}]", options.seed, options.random_charts);
        std::map<std::string, std::pair<std::size_t, std::string>> failures;  // suite -> (count, first)
        std::map<std::string, std::size_t> checked;
        std::vector<std::string> order;
        auto absorb = [&](const Report& r) {
            for (const auto& c : r.checks) {
                if (!failures.contains(c.suite))
                    order.push_back(c.suite);
                auto& f = failures[c.suite];
                checked[c.suite] += c.checked;
                if (!c.pass && f.first++ == 0)
                    f.second = c.subject + " " + c.detail;
            }
        };
        for (int i = 0; i < options.random_charts; ++i) {
            const auto seed = options.seed + static_cast<std::uint64_t>(i);
            ClassicalChart chart;
            try {
                chart = random_chart(seed, options.random);
            }
            catch (const std::exception& e) {
                Report r;
                r.add({"random-generator", fmt::format("seed={}", seed), false, e.what()});
                absorb(r);
                continue;
            }
            if (structure)
                absorb(structural_properties(chart, chart.name));
            if (oracle) {
                absorb(oracle_equivalence(chart, Base::C, chart.name));
                absorb(oracle_equivalence(chart, Base::R, chart.name));
            }
            if (query)
                absorb(query_stability(chart, chart.name));
        }
        for (const auto& suite : order) {
            const auto& [count, first] = failures[suite];
            const auto n = checked[suite];
            report.add({suite, subject, count == 0,
                        count == 0 ? fmt::format("checked={}", n) : fmt::format("failures={} first: {}", count, first),
                        n});
        }
    }
    if (options.suites.contains("cotor"))
        report.merge(cotor_checks(fixture.prime, 2, 8));
    return report;
}

}  // namespace manss::verify
