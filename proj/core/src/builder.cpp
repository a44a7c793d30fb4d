#include "manss/builder.hpp"

#include "manss/errors.hpp"
#include "manss/exact_linalg.hpp"
#include "manss/render.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>

namespace manss::builder {

using chart::Cell;
using chart::ClassicalGroup;
using chart::Exponent;
using chart::PresentedEntry;
using linalg::BigInt;

namespace {

BigInt big_pow(std::uint32_t l, int e)
{
    BigInt r = 1;
    for (int i = 0; i < e; ++i)
        r *= l;
    return r;
}

std::vector<int> exponents_of(const std::vector<BigInt>& factors, std::uint32_t l)
{
    std::vector<int> out;
    for (const auto& f : factors) {
        if (f == 0)
            throw InvariantViolation("classical differential produced an infinite group");
        out.push_back(linalg::valuation(f, l));
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct LocalMap {
    std::vector<int> src;
    std::vector<int> tgt;
    const std::vector<std::vector<std::int64_t>>* matrix;
};

bool image_zero(const LocalMap& m, std::uint32_t l)
{
    for (std::size_t i = 0; i < m.tgt.size(); ++i)
        for (std::size_t j = 0; j < m.src.size(); ++j)
            if (BigInt((*m.matrix)[i][j]) % big_pow(l, m.tgt[i]) != 0)
                return false;
    return true;
}

std::vector<int> kernel_orders(const LocalMap& m, std::uint32_t l)
{
    const std::size_t k = m.src.size(), n = m.tgt.size();
    linalg::IntMatrix a(n, std::vector<BigInt>(k + n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            a[i][j] = (*m.matrix)[i][j];
        a[i][k + i] = big_pow(l, m.tgt[i]);
    }
    std::vector<std::vector<BigInt>> big, small;
    for (const auto& v : linalg::integer_kernel(a, n, k + n))
        big.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<BigInt> e(k, 0);
        e[j] = big_pow(l, m.src[j]);
        small.push_back(e);
        big.push_back(std::move(e));
    }
    return exponents_of(linalg::lattice_quotient(big, small, k), l);
}

std::vector<int> cokernel_orders(const LocalMap& m, std::uint32_t l)
{
    const std::size_t k = m.src.size(), n = m.tgt.size();
    linalg::IntMatrix a(n, std::vector<BigInt>(n + k, 0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = big_pow(l, m.tgt[i]);
        for (std::size_t j = 0; j < k; ++j)
            a[i][n + j] = (*m.matrix)[i][j];
    }
    return exponents_of(linalg::invariant_factors(a, n, n + k), l);
}

int ground_exponent(int page, Base base)
{
    const int per = base == Base::C ? 2 : 4;
    if ((page - 1) % per != 0)
        throw InvariantViolation(fmt::format("d_{} does not lift to an integral ground-ring power", page));
    return (page - 1) / per;
}

std::string joined(const std::vector<std::string>& labels)
{
    return fmt::format("{}", fmt::join(labels, ","));
}

/// Indices of the free summands carrying the given labels; throws if any is torsion or missing.
std::vector<std::size_t> locate(const Cell& cell, const std::vector<std::string>& labels, Position pos, int page)
{
    std::vector<std::size_t> out;
    for (const auto& label : labels) {
        auto it = std::find_if(cell.summands.begin(), cell.summands.end(),
                               [&](const CyclicSummand& c) { return c.label == label; });
        if (it == cell.summands.end()) {
            for (const auto& p : cell.presented)
                for (const auto& g : p.generators)
                    if (g.label == label)
                        throw InvariantViolation(fmt::format("d_{} touches the torsion class {} at ({},{})", page,
                                                             label, pos.first, pos.second));
            throw InvariantViolation(
                fmt::format("d_{}: generator {} is not present at ({},{})", page, label, pos.first, pos.second));
        }
        if (it->torsion() || it->inert)
            throw InvariantViolation(
                fmt::format("d_{} touches the torsion class {} at ({},{})", page, label, pos.first, pos.second));
        out.push_back(static_cast<std::size_t>(it - cell.summands.begin()));
    }
    return out;
}

void remove_indices(std::vector<CyclicSummand>& v, std::vector<std::size_t> idx)
{
    std::sort(idx.rbegin(), idx.rend());
    for (auto i : idx)
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
}

void apply(PageState& st, const ClassicalDifferential& d)
{
    auto& chart = st.chart;
    const auto l = chart.prime;
    auto xs = chart.entries.find(d.source);
    auto ys = chart.entries.find(d.target);
    if (xs == chart.entries.end() || ys == chart.entries.end())
        throw InvariantViolation(fmt::format("d_{} from ({},{}) has an empty source or target", d.page,
                                             d.source.first, d.source.second));
    auto& x = xs->second;
    auto& y = ys->second;
    const auto xi = locate(x, d.source_labels, d.source, d.page);
    const auto yi = locate(y, d.target_labels, d.target, d.page);

    LocalMap m{{}, {}, &d.matrix};
    for (auto i : xi)
        m.src.push_back(*x.summands[i].l_exp);
    for (auto i : yi)
        m.tgt.push_back(*y.summands[i].l_exp);
    if (image_zero(m, l))
        return;

    const int h = ground_exponent(d.page, chart.base);
    const int gx = x.summands[xi.front()].gen_weight;
    const int gy = y.summands[yi.front()].gen_weight;
    if (gy - gx != h * chart.weight_step())
        throw InvariantViolation(fmt::format("d_{} from ({},{}) does not respect weights", d.page, d.source.first,
                                             d.source.second));

    // source: the classical kernel, still free over the ground ring
    const auto ker = kernel_orders(m, l);
    const auto ker_label = fmt::format("ker d{}({})", d.page, joined(d.source_labels));
    remove_indices(x.summands, xi);
    for (std::size_t k = 0; k < ker.size(); ++k)
        x.summands.push_back({ker[k], chart::infinite, gx,
                              ker.size() == 1 ? ker_label : fmt::format("{}#{}", ker_label, k + 1), false});

    // target: generators y_i modulo g^h * (image), normalized over the graded ring
    PresentedEntry p;
    for (auto i : yi)
        p.generators.push_back({gy, y.summands[i].label, y.summands[i].l_exp});
    for (std::size_t j = 0; j < xi.size(); ++j) {
        chart::Relation r;
        for (std::size_t i = 0; i < yi.size(); ++i)
            if (d.matrix[i][j])
                r.push_back({static_cast<int>(i), d.matrix[i][j], h});
        if (!r.empty())
            p.relations.push_back(std::move(r));
    }
    auto normalized = chart::normalize_entry(p, l, chart.weight_step());
    remove_indices(y.summands, yi);
    for (auto& c : normalized.summands) {
        if (c.torsion()) {
            c.inert = true;
            st.log.push_back({d.target, d.page, d.source, d.source_labels, d.target_labels, c,
                              fmt::format("{} on weight {}", render::describe(c, chart), c.gen_weight)});
        }
        y.summands.push_back(std::move(c));
    }
    for (auto& pe : normalized.presented) {
        st.log.push_back({d.target, d.page, d.source, d.source_labels, d.target_labels, std::nullopt,
                          fmt::format("non-split presentation on {} generator(s)", pe.generators.size())});
        y.presented.push_back(std::move(pe));
    }
    if (x.empty())
        chart.entries.erase(d.source);
    if (auto it = chart.entries.find(d.target); it != chart.entries.end() && it->second.empty())
        chart.entries.erase(it);
}

std::vector<ClassicalDifferential> ordered(std::vector<ClassicalDifferential> v)
{
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        return std::tuple{a.page, a.source.first, a.source.second} < std::tuple{b.page, b.source.first, b.source.second};
    });
    return v;
}

}  // namespace

MotivicChart build_e2(const ClassicalChart& classical, Base base)
{
    if (auto v = chart::validate_classical(classical); !v.empty())
        throw ValidationError(std::move(v));
    MotivicChart out;
    out.base = base;
    out.prime = classical.prime;
    out.page = 2;
    out.meta.fixture = classical.name;
    out.meta.fixture_hash = chart::fnv1a_hex(chart::write_classical(classical));
    out.meta.options["base"] = steenrod::to_string(base);
    for (const auto& [pos, groups] : classical.groups) {
        if (groups.empty())
            continue;
        const int t = pos.first + pos.second;
        if (t % 2 != 0)
            throw InvariantViolation(fmt::format("odd t at ({},{})", pos.first, pos.second));
        auto& cell = out.entries[pos];
        for (const auto& g : groups)
            cell.summands.push_back({g.l_exp, chart::infinite, t / 2, g.label, false});
    }
    return out;
}

PageState start(const ClassicalChart& classical, Base base)
{
    PageState st;
    st.chart = build_e2(classical, base);
    st.page = 2;
    st.pending = ordered(classical.differentials);
    return st;
}

PageState propagate(const PageState& state, int to_page)
{
    if (to_page <= state.page)
        throw SequencingError(fmt::format("cannot move from E_{} to E_{}", state.page, to_page));
    PageState st = state;
    std::vector<ClassicalDifferential> rest;
    for (const auto& d : st.pending) {
        if (d.page < state.page)
            throw SequencingError(fmt::format("d_{} is still pending on E_{}", d.page, state.page));
        if (d.page < to_page)
            apply(st, d);
        else
            rest.push_back(d);
    }
    st.pending = std::move(rest);
    st.page = to_page;
    st.chart.page = to_page;
    return st;
}

int final_page(const PageState& state)
{
    int r = state.page;
    for (const auto& d : state.pending)
        r = std::max(r, d.page + 1);
    return r;
}

MotivicChart compute_einf(const PageState& state)
{
    if (!state.pending.empty())
        throw SequencingError(fmt::format("{} differential(s) still pending at E_{}", state.pending.size(), state.page));
    MotivicChart out = state.chart;
    out.page = std::nullopt;
    return out;
}

PageState run(const ClassicalChart& classical, Base base)
{
    auto st = start(classical, base);
    const int last = final_page(st);
    if (last > st.page)
        st = propagate(st, last);
    st.chart = compute_einf(st);
    return st;
}

ClassicalChart realize_weight0(const MotivicChart& chart)
{
    if (chart.base != Base::C)
        throw ConfigurationError("weight-0 realization is defined over C only");
    ClassicalChart out;
    out.prime = chart.prime;
    out.name = chart.meta.fixture;
    for (const auto& [pos, cell] : chart.entries) {
        std::vector<ClassicalGroup> groups;
        for (const auto& c : cell.summands)
            for (const auto& e : chart::slice(c, 0, 1))
                groups.push_back({e, c.label, ""});
        for (const auto& p : cell.presented) {
            const auto g = chart::slice(p, 0, 1, chart.prime);
            for (std::size_t k = 0; k < g.size(); ++k)
                groups.push_back({g[k], fmt::format("{}#{}", p.generators.front().label, k + 1), ""});
        }
        if (!groups.empty())
            out.groups[pos] = std::move(groups);
    }
    return out;
}

MotivicChart base_change(const MotivicChart& chart)
{
    if (chart.base != Base::R)
        throw ConfigurationError("base change starts from a chart over R");
    MotivicChart out = chart;
    out.base = Base::C;
    out.meta.options["base"] = "C";
    out.meta.options["base_change"] = "R->C";
    for (auto& [pos, cell] : out.entries) {
        for (auto& c : cell.summands)
            if (c.tau_exp)
                c.tau_exp = *c.tau_exp * 2;
        for (auto& p : cell.presented)
            for (auto& r : p.relations)
                for (auto& t : r)
                    t.ground_power *= 2;
    }
    return out;
}

bool tau_stable_region(int stem, int weight)
{
    if (stem > 0)
        return 2 * weight <= stem + 2;
    return stem == 0 && weight <= 0;
}

PiQuery query_pi(const MotivicChart& einf, int stem, int weight)
{
    PiQuery q;
    q.stem = stem;
    q.weight = weight;
    q.tau_stable = tau_stable_region(stem, weight);
    if (weight > stem) {
        q.vanishing = true;
        return q;
    }
    for (const auto& [pos, cell] : einf.entries) {
        if (pos.second != stem)
            continue;
        auto g = chart::slice(cell, weight, einf.weight_step(), einf.prime);
        if (!g.empty())
            q.groups.push_back({pos.first, std::move(g)});
    }
    return q;
}

ClassicalChart classical_page(const ClassicalChart& classical, std::optional<int> page)
{
    ClassicalChart out = classical;
    out.differentials.clear();
    const auto l = classical.prime;
    for (const auto& d : ordered(classical.differentials)) {
        if (page && d.page >= *page) {
            out.differentials.push_back(d);
            continue;
        }
        auto& xs = out.groups[d.source];
        auto& ys = out.groups[d.target];
        auto find = [&](std::vector<ClassicalGroup>& gs, const std::vector<std::string>& labels) {
            std::vector<std::size_t> idx;
            for (const auto& label : labels) {
                auto it = std::find_if(gs.begin(), gs.end(), [&](const auto& g) { return g.label == label; });
                if (it == gs.end())
                    throw InvariantViolation(fmt::format("generator {} is missing from its cell", label));
                idx.push_back(static_cast<std::size_t>(it - gs.begin()));
            }
            return idx;
        };
        const auto xi = find(xs, d.source_labels);
        const auto yi = find(ys, d.target_labels);
        LocalMap m{{}, {}, &d.matrix};
        for (auto i : xi)
            m.src.push_back(*xs[i].l_exp);
        for (auto i : yi)
            m.tgt.push_back(*ys[i].l_exp);
        if (image_zero(m, l))
            continue;
        const auto ker = kernel_orders(m, l);
        const auto coker = cokernel_orders(m, l);
        auto erase = [](std::vector<ClassicalGroup>& gs, std::vector<std::size_t> idx) {
            std::sort(idx.rbegin(), idx.rend());
            for (auto i : idx)
                gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(i));
        };
        erase(xs, xi);
        erase(ys, yi);
        for (std::size_t k = 0; k < ker.size(); ++k)
            xs.push_back({ker[k], fmt::format("ker d{}({})#{}", d.page, joined(d.source_labels), k + 1), ""});
        for (std::size_t k = 0; k < coker.size(); ++k)
            ys.push_back({coker[k], fmt::format("coker d{}({})#{}", d.page, joined(d.source_labels), k + 1), ""});
    }
    for (auto it = out.groups.begin(); it != out.groups.end();)
        it = it->second.empty() ? out.groups.erase(it) : std::next(it);
    return out;
}

std::map<Position, GroupType> group_types(const ClassicalChart& chart)
{
    std::map<Position, GroupType> out;
    for (const auto& [pos, groups] : chart.groups) {
        if (groups.empty())
            continue;
        GroupType g;
        for (const auto& x : groups)
            g.push_back(x.l_exp);
        std::sort(g.begin(), g.end(), [](const Exponent& a, const Exponent& b) {
            if (!a || !b)
                return a.has_value() && !b.has_value();
            return *a < *b;
        });
        out[pos] = std::move(g);
    }
    return out;
}

std::string format_log(const PageState& state)
{
    std::string out;
    for (const auto& r : state.log)
        out += fmt::format("d_{} ({},{}) {} -> ({},{}) {}: {}\n", r.page, r.source.first, r.source.second,
                           joined(r.source_labels), r.position.first, r.position.second, joined(r.target_labels),
                           r.description);
    return out;
}

}  // namespace manss::builder
