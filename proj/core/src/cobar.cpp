#include "manss/cobar.hpp"

#include "manss/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>

namespace manss::cobar {

using steenrod::Bidegree;
using steenrod::CoactionExpression;

ComoduleSpec ComoduleSpec::trivial()
{
    return {"H", {}, {}};
}

namespace {

ComoduleSpec polynomial_comodule(const DualSteenrod& alg, int t_max, const std::string& name,
                                 const std::string& symbol, int t_shift)
{
    ComoduleSpec spec;
    spec.name = name;
    const auto& ring = alg.ring();
    for (int n = 0;; ++n) {
        const auto d = steenrod::tau_degree(n, ring);
        const int t = d.t + t_shift;
        if (n > 0 && t > t_max)
            break;
        spec.generators.push_back({fmt::format("{}_{}", symbol, n), 1, t, d.u});
        std::vector<CoactionTerm> terms;
        for (int i = 0; i <= n; ++i)
            terms.push_back({Monomial::xi_power(n - i, static_cast<std::uint32_t>(ring.prime_power(i))), i, 1});
        spec.coaction.push_back(std::move(terms));
    }
    return spec;
}

}  // namespace

ComoduleSpec ComoduleSpec::cotor_e(const DualSteenrod& alg, int t_max)
{
    return polynomial_comodule(alg, t_max, "P(a)", "a", 0);
}

ComoduleSpec ComoduleSpec::novikov_graded(const DualSteenrod& alg, int t_max)
{
    return polynomial_comodule(alg, t_max, "E0ABP", "q", -1);
}

void validate_comodule(const ComoduleSpec& spec, const DualSteenrod& alg, Algebra hopf)
{
    const Residue l = alg.ring().prime();
    if (spec.coaction.size() != spec.generators.size())
        throw ComplexError(fmt::format("comodule {}: coaction missing for some generators", spec.name));
    for (std::size_t j = 0; j < spec.generators.size(); ++j) {
        const auto& g = spec.generators[j];
        bool counit_seen = false;
        std::map<std::tuple<Monomial, Monomial, int>, Residue> left, right;
        auto add = [l](auto& map, auto key, std::uint64_t c) {
            auto r = static_cast<Residue>(c % l);
            if (!r)
                return;
            auto& slot = map[key];
            slot = (slot + r) % l;
            if (!slot)
                map.erase(key);
        };
        for (const auto& term : spec.coaction[j]) {
            if (term.hopf.tau != 0 || !term.hopf.ground_free())
                throw ComplexError(fmt::format("comodule {}: coaction on {} must use ground-free even monomials",
                                               spec.name, g.name));
            if (hopf == Algebra::E && !term.hopf.xi.empty())
                throw ComplexError(fmt::format("comodule {}: coaction leaves the Hopf algebra", spec.name));
            if (term.target < 0 || static_cast<std::size_t>(term.target) >= spec.generators.size())
                throw ComplexError(fmt::format("comodule {}: coaction target out of range", spec.name));
            const auto& tg = spec.generators[static_cast<std::size_t>(term.target)];
            const auto d = steenrod::bidegree(term.hopf, alg.ring());
            if (d.t + tg.t != g.t || d.u + tg.u != g.u)
                throw ComplexError(fmt::format("comodule {}: coaction on {} is not homogeneous", spec.name, g.name));
            if (term.hopf.is_unit()) {
                if (term.target != static_cast<int>(j) || term.coeff % l != 1 || counit_seen)
                    throw ComplexError(fmt::format("comodule {}: coaction on {} is not counital", spec.name, g.name));
                counit_seen = true;
            }
            const auto delta = alg.comult(term.hopf, hopf);
            for (const auto& [k, c] : delta.terms())
                add(left, std::tuple{k.first, k.second, term.target}, std::uint64_t{c} * term.coeff);
            for (const auto& inner : spec.coaction[static_cast<std::size_t>(term.target)])
                add(right, std::tuple{term.hopf, inner.hopf, inner.target}, std::uint64_t{term.coeff} * inner.coeff);
        }
        if (!counit_seen)
            throw ComplexError(fmt::format("comodule {}: coaction on {} is not counital", spec.name, g.name));
        if (left != right)
            throw ComplexError(fmt::format("comodule {}: coaction on {} is not coassociative", spec.name, g.name));
    }
}

CoactionExpression coaction(const ComoduleSpec& spec, const PolyMonomial& m, const DualSteenrod& alg)
{
    const Residue l = alg.ring().prime();
    CoactionExpression out;
    out[{Monomial::unit(), PolyMonomial{}}] = 1;
    for (std::size_t i = 0; i < m.exponents.size(); ++i) {
        CoactionExpression gen;
        for (const auto& term : spec.coaction.at(i))
            gen[{term.hopf, PolyMonomial::generator(term.target)}] = term.coeff % l;
        for (std::uint32_t e = 0; e < m.exponents[i]; ++e) {
            CoactionExpression next;
            for (const auto& [ka, ca] : out)
                for (const auto& [kb, cb] : gen) {
                    auto h = steenrod::multiply(ka.first, kb.first);
                    PolyMonomial pm;
                    pm.exponents.assign(std::max(ka.second.exponents.size(), kb.second.exponents.size()), 0);
                    for (std::size_t k = 0; k < pm.exponents.size(); ++k)
                        pm.exponents[k] = (k < ka.second.exponents.size() ? ka.second.exponents[k] : 0) +
                                          (k < kb.second.exponents.size() ? kb.second.exponents[k] : 0);
                    pm.trim();
                    auto& slot = next[{h->second, pm}];
                    slot = static_cast<Residue>((slot + std::uint64_t{ca} * cb) % l);
                    if (!slot)
                        next.erase({h->second, pm});
                }
            out = std::move(next);
        }
    }
    return out;
}

std::pair<int, int> weight_window(const CotorRange& range, int t, std::uint32_t prime)
{
    auto floor_div = [](int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
    const int lo = range.u_lo ? *range.u_lo : floor_div(t - 2 * range.s_max * static_cast<int>(prime - 1), 2);
    const int hi = range.u_hi ? *range.u_hi : floor_div(t, 2);
    return {lo, hi};
}

std::string to_string(const CobarChain& c, const steenrod::GroundRing& ring, const ComoduleSpec& spec)
{
    std::string body = "[";
    for (std::size_t i = 0; i < c.factors.size(); ++i) {
        if (i)
            body += "|";
        body += steenrod::to_string(c.factors[i], ring);
    }
    body += "]";
    std::vector<std::string> gens;
    for (std::size_t i = 0; i < c.coeff.exponents.size(); ++i) {
        if (!c.coeff.exponents[i])
            continue;
        const auto& name = i < spec.generators.size() ? spec.generators[i].name : fmt::format("g{}", i);
        gens.push_back(c.coeff.exponents[i] == 1 ? name : fmt::format("{}^{}", name, c.coeff.exponents[i]));
    }
    if (!gens.empty())
        body += " " + fmt::format("{}", fmt::join(gens, " "));
    if (c.ground)
        body = (c.ground == 1 ? ring.generator_name() : fmt::format("{}^{}", ring.generator_name(), c.ground)) + " " +
               body;
    return body;
}

std::uint32_t CotorTable::dim(const CotorKey& key) const
{
    auto it = entries.find(key);
    if (it == entries.end())
        throw RangeError(fmt::format("Cotor entry (s={}, c={}, t={}, u={}) outside the computed range", key.s,
                                     key.coeff_degree, key.t, key.u));
    return it->second.dim;
}

namespace {

struct TooLarge {};

/// The ground-free cobar complex at fixed (coefficient degree, t), split by weight.
class ColumnComplex {
public:
    ColumnComplex(Algebra hopf, const ComoduleSpec& coeff, const DualSteenrod& alg, int cdeg, int t, int s_top,
                  std::size_t max_slice)
        : hopf_(hopf), coeff_(coeff), alg_(alg), cdeg_(cdeg), t_(t), s_top_(s_top), max_slice_(max_slice)
    {
        min_factor_t_ = hopf == Algebra::P ? static_cast<int>(2 * alg.ring().prime() - 2) : 1;
        chains_.resize(static_cast<std::size_t>(s_top + 1));
        index_.resize(static_cast<std::size_t>(s_top + 1));
        for (int s = 0; s <= s_top; ++s) {
            try {
                enumerate_chains(s);
            }
            catch (const TooLarge&) {
                if (s < s_top)
                    throw ResourceError(fmt::format("cobar chain group C^{} at t={} (coefficient degree {}) exceeds "
                                                    "{} chains",
                                                    s, t, cdeg, max_slice),
                                        count_);
                chains_[static_cast<std::size_t>(s)].clear();
                index_[static_cast<std::size_t>(s)].clear();
                top_truncated_ = true;
            }
        }
        build_differentials();
    }

    bool top_truncated() const { return top_truncated_; }
    int s_top() const { return s_top_; }

    const std::vector<CobarChain>& chains(int s, int w) const
    {
        static const std::vector<CobarChain> empty;
        const auto& m = chains_[static_cast<std::size_t>(s)];
        auto it = m.find(w);
        return it == m.end() ? empty : it->second;
    }

    /// Weight-w block of d: C^s -> C^{s+1}; valid for s in [-1, s_top-1].
    FlMatrix block(int s, int w) const
    {
        const Residue l = alg_.ring().prime();
        const auto rows = static_cast<std::uint32_t>(s + 1 <= s_top_ ? chains(s + 1, w).size() : 0);
        const auto cols = static_cast<std::uint32_t>(s >= 0 ? chains(s, w).size() : 0);
        if (s < 0 || s >= s_top_)
            return FlMatrix::zero(rows, cols, l);
        auto it = diffs_[static_cast<std::size_t>(s)].find(w);
        if (it == diffs_[static_cast<std::size_t>(s)].end())
            return FlMatrix::zero(rows, cols, l);
        return it->second;
    }

    std::vector<int> weights(int s) const
    {
        std::vector<int> out;
        for (const auto& [w, v] : chains_[static_cast<std::size_t>(s)])
            out.push_back(w);
        return out;
    }

private:
    void enumerate_comodule(std::size_t gen, int degree_left, int t_left, PolyMonomial& cur,
                            std::vector<std::pair<PolyMonomial, int>>& out, int t_target)
    {
        if (gen == coeff_.generators.size()) {
            if (degree_left == 0 && t_left == 0) {
                PolyMonomial m = cur;
                m.trim();
                int w = 0;
                for (std::size_t i = 0; i < m.exponents.size(); ++i)
                    w += static_cast<int>(m.exponents[i]) * coeff_.generators[i].u;
                out.push_back({m, w});
            }
            return;
        }
        const auto& g = coeff_.generators[gen];
        for (int e = 0; e <= degree_left && e * g.t <= t_left; ++e) {
            cur.exponents[gen] = static_cast<std::uint32_t>(e);
            enumerate_comodule(gen + 1, degree_left - e, t_left - e * g.t, cur, out, t_target);
        }
        cur.exponents[gen] = 0;
    }

    std::vector<std::pair<PolyMonomial, int>> comodule_basis(int t_m)
    {
        std::vector<std::pair<PolyMonomial, int>> out;
        if (coeff_.is_trivial()) {
            if (cdeg_ == 0 && t_m == 0)
                out.push_back({PolyMonomial{}, 0});
            return out;
        }
        PolyMonomial cur;
        cur.exponents.assign(coeff_.generators.size(), 0);
        enumerate_comodule(0, cdeg_, t_m, cur, out, t_m);
        return out;
    }

    void enumerate_factors(int s, int remaining, std::vector<Monomial>& cur, int weight, const PolyMonomial& m,
                           int m_weight, std::map<int, std::vector<CobarChain>>& out)
    {
        if (static_cast<int>(cur.size()) == s) {
            if (remaining != 0)
                return;
            if (++count_ > max_slice_)
                throw TooLarge{};
            out[weight + m_weight].push_back(CobarChain{0, cur, m});
            return;
        }
        const int slots_left = s - static_cast<int>(cur.size());
        for (int d = min_factor_t_; d <= remaining - (slots_left - 1) * min_factor_t_; ++d) {
            for (const auto& f : alg_.ground_free_basis(hopf_, d)) {
                if (f.is_unit())
                    continue;
                cur.push_back(f);
                enumerate_factors(s, remaining - d, cur, weight + steenrod::bidegree(f, alg_.ring()).u, m, m_weight,
                                  out);
                cur.pop_back();
            }
        }
    }

    void enumerate_chains(int s)
    {
        count_ = 0;
        auto& out = chains_[static_cast<std::size_t>(s)];
        out.clear();
        for (int t_m = 0; t_m <= t_; ++t_m) {
            const int rest = t_ - t_m;
            if (s == 0 && rest != 0)
                continue;
            if (s > 0 && rest < s * min_factor_t_)
                continue;
            for (const auto& [m, w] : comodule_basis(t_m)) {
                std::vector<Monomial> cur;
                enumerate_factors(s, rest, cur, 0, m, w, out);
            }
        }
        auto& idx = index_[static_cast<std::size_t>(s)];
        idx.clear();
        for (auto& [w, list] : out) {
            std::sort(list.begin(), list.end());
            auto& m = idx[w];
            for (std::uint32_t i = 0; i < list.size(); ++i)
                m[list[i]] = i;
        }
    }

    CoactionExpression coaction_of(const PolyMonomial& m)
    {
        auto it = coaction_cache_.find(m);
        if (it != coaction_cache_.end())
            return it->second;
        return coaction_cache_[m] = coaction(coeff_, m, alg_);
    }

    void build_differentials()
    {
        const Residue l = alg_.ring().prime();
        diffs_.resize(static_cast<std::size_t>(std::max(s_top_, 0)));
        for (int s = 0; s < s_top_; ++s) {
            if (top_truncated_ && s + 1 == s_top_)
                break;
            for (const auto& [w, list] : chains_[static_cast<std::size_t>(s)]) {
                const auto& target_index = index_[static_cast<std::size_t>(s + 1)];
                auto tw = target_index.find(w);
                std::vector<linalg::Triplet> trips;
                auto emit = [&](const CobarChain& c, std::int64_t coeff, std::uint32_t col) {
                    if (tw == target_index.end())
                        throw ComplexError("cobar differential leaves its weight block");
                    auto row = tw->second.find(c);
                    if (row == tw->second.end())
                        throw ComplexError("cobar differential produced a chain outside the enumerated basis");
                    const auto li = static_cast<std::int64_t>(l);
                    trips.push_back({row->second, col, static_cast<Residue>(((coeff % li) + li) % li)});
                };
                for (std::uint32_t col = 0; col < list.size(); ++col) {
                    const auto& chain = list[col];
                    for (int i = 0; i < s; ++i) {
                        const int sign = (i + 1) % 2 ? -1 : 1;
                        const auto red = alg_.reduced_comult(chain.factors[static_cast<std::size_t>(i)], hopf_);
                        for (const auto& [k, c] : red.terms()) {
                            CobarChain next;
                            next.coeff = chain.coeff;
                            next.factors.reserve(chain.factors.size() + 1);
                            for (int j = 0; j < s; ++j) {
                                if (j == i) {
                                    next.factors.push_back(k.first);
                                    next.factors.push_back(k.second);
                                }
                                else {
                                    next.factors.push_back(chain.factors[static_cast<std::size_t>(j)]);
                                }
                            }
                            emit(next, sign * static_cast<std::int64_t>(c), col);
                        }
                    }
                    if (!coeff_.is_trivial()) {
                        const int sign = (s + 1) % 2 ? -1 : 1;
                        for (const auto& [k, c] : coaction_of(chain.coeff)) {
                            if (k.first.is_unit())
                                continue;
                            CobarChain next;
                            next.factors = chain.factors;
                            next.factors.push_back(k.first);
                            next.coeff = k.second;
                            emit(next, sign * static_cast<std::int64_t>(c), col);
                        }
                    }
                }
                const auto rows =
                    static_cast<std::uint32_t>(tw == target_index.end() ? 0 : chains(s + 1, w).size());
                diffs_[static_cast<std::size_t>(s)].emplace(
                    w, FlMatrix(rows, static_cast<std::uint32_t>(list.size()), l, std::move(trips)));
            }
        }
        // d o d = 0 on every weight block
        for (int s = 0; s + 1 < s_top_; ++s) {
            if (top_truncated_ && s + 2 == s_top_)
                break;
            for (int w : weights(s)) {
                if (!linalg::multiply(block(s + 1, w), block(s, w)).is_zero())
                    throw ComplexError(fmt::format("cobar d o d != 0 at s={}, t={}, weight {}", s, t_, w));
            }
        }
    }

    Algebra hopf_;
    const ComoduleSpec& coeff_;
    const DualSteenrod& alg_;
    int cdeg_;
    int t_;
    int s_top_;
    std::size_t max_slice_;
    int min_factor_t_ = 1;
    std::size_t count_ = 0;
    bool top_truncated_ = false;
    std::vector<std::map<int, std::vector<CobarChain>>> chains_;
    std::vector<std::map<int, std::map<CobarChain, std::uint32_t>>> index_;
    std::vector<std::map<int, FlMatrix>> diffs_;
    std::map<PolyMonomial, CoactionExpression> coaction_cache_;
};

unsigned worker_count(const CotorRange& range)
{
    if (range.workers)
        return range.workers;
    if (const char* env = std::getenv("MANSS_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0)
            return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn over [0, n) on a small pool; results are merged by the caller in index order.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn fn)
{
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                fn(i);
            }
            catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned count = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    if (count <= 1) {
        work();
    }
    else {
        std::vector<std::jthread> pool;
        for (unsigned k = 0; k < count; ++k)
            pool.emplace_back(work);
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

struct Column {
    int cdeg;
    int t;
};

std::vector<Column> columns(const ComoduleSpec& coeff, const CotorRange& range)
{
    std::vector<Column> out;
    const int max_cdeg = coeff.is_trivial() ? 0 : range.s_max;
    for (int c = 0; c <= max_cdeg; ++c)
        for (int t = 0; t <= range.t_max; ++t)
            out.push_back({c, t});
    return out;
}

void check_range(const CotorRange& range, const DualSteenrod& alg)
{
    if (range.s_max < 0 || range.t_max < 0)
        throw RangeError("cotor range must be non-negative");
    if (range.t_max > alg.bounds().t_max)
        throw RangeError(fmt::format("cotor range t<={} exceeds enumeration bound t<={}", range.t_max,
                                     alg.bounds().t_max));
    if (range.s_max > alg.bounds().s_max)
        throw RangeError(fmt::format("cotor range s<={} exceeds enumeration bound s<={}", range.s_max,
                                     alg.bounds().s_max));
}

ChainSlice assemble(const ColumnComplex& col, int s, int cdeg, int t, int u, int step, Residue l)
{
    ChainSlice slice;
    slice.s = s;
    slice.coeff_degree = cdeg;
    slice.t = t;
    slice.u = u;
    slice.edge = col.top_truncated() && s + 1 == col.s_top();

    auto collect = [&](int level) {
        std::vector<std::pair<int, std::uint32_t>> layout;  // (weight, block size) in ground-power order
        std::vector<CobarChain> basis;
        if (level < 0 || level > col.s_top())
            return std::pair{basis, layout};
        for (int w : col.weights(level)) {
            if (w < u || (w - u) % step != 0)
                continue;
            const auto& list = col.chains(level, w);
            layout.push_back({w, static_cast<std::uint32_t>(list.size())});
            for (auto c : list) {
                c.ground = static_cast<std::uint32_t>((w - u) / step);
                basis.push_back(std::move(c));
            }
        }
        return std::pair{basis, layout};
    };
    auto [prev, prev_layout] = collect(s - 1);
    auto [cur, cur_layout] = collect(s);
    auto [next, next_layout] = collect(s + 1);

    auto offsets = [](const std::vector<std::pair<int, std::uint32_t>>& layout) {
        std::map<int, std::uint32_t> off;
        std::uint32_t acc = 0;
        for (auto [w, n] : layout) {
            off[w] = acc;
            acc += n;
        }
        return off;
    };
    const auto prev_off = offsets(prev_layout), cur_off = offsets(cur_layout), next_off = offsets(next_layout);

    auto diagonal = [&](int level, const std::map<int, std::uint32_t>& src_off, std::size_t src_n,
                        const std::map<int, std::uint32_t>& dst_off, std::size_t dst_n) {
        std::vector<linalg::Triplet> trips;
        if (level >= 0 && !(slice.edge && level == s)) {
            for (auto [w, so] : src_off) {
                auto d = dst_off.find(w);
                if (d == dst_off.end())
                    continue;
                const auto b = col.block(level, w);
                for (const auto& e : b.entries())
                    trips.push_back({d->second + e.row, so + e.col, e.value});
            }
        }
        return FlMatrix(static_cast<std::uint32_t>(dst_n), static_cast<std::uint32_t>(src_n), l, std::move(trips));
    };
    slice.d_in = diagonal(s - 1, prev_off, prev.size(), cur_off, cur.size());
    slice.d_out = slice.edge ? FlMatrix::zero(0, static_cast<std::uint32_t>(cur.size()), l)
                             : diagonal(s, cur_off, cur.size(), next_off, next.size());
    slice.basis = std::move(cur);
    return slice;
}

}  // namespace

std::vector<ChainSlice> build_cobar(Algebra hopf, const ComoduleSpec& coeff, const CotorRange& range,
                                    const DualSteenrod& alg)
{
    check_range(range, alg);
    validate_comodule(coeff, alg, hopf);
    const auto cols = columns(coeff, range);
    const Residue l = alg.ring().prime();
    const int step = alg.ring().weight_step();
    std::vector<std::vector<ChainSlice>> per_column(cols.size());
    parallel_for(cols.size(), worker_count(range), [&](std::size_t i) {
        const auto [cdeg, t] = cols[i];
        const int s_top = range.s_max - cdeg + 1;
        ColumnComplex col(hopf, coeff, alg, cdeg, t, s_top, range.max_slice);
        const auto [lo, hi] = weight_window(range, t, l);
        for (int u = lo; u <= hi; ++u)
            for (int s = 0; s < s_top; ++s) {
                auto slice = assemble(col, s, cdeg, t, u, step, l);
                if (!slice.edge && !linalg::multiply(slice.d_out, slice.d_in).is_zero())
                    throw ComplexError(fmt::format("d o d != 0 on slice (s={}, t={}, u={})", s, t, u));
                per_column[i].push_back(std::move(slice));
            }
    });
    std::vector<ChainSlice> out;
    for (auto& v : per_column)
        for (auto& s : v)
            out.push_back(std::move(s));
    return out;
}

CotorTable cotor(Algebra hopf, const ComoduleSpec& coeff, const CotorRange& range, const DualSteenrod& alg,
                 CotorOptions options)
{
    check_range(range, alg);
    validate_comodule(coeff, alg, hopf);
    const auto cols = columns(coeff, range);
    const Residue l = alg.ring().prime();
    const int step = alg.ring().weight_step();

    std::vector<std::vector<std::pair<CotorKey, CotorEntry>>> per_column(cols.size());
    parallel_for(cols.size(), worker_count(range), [&](std::size_t i) {
        const auto [cdeg, t] = cols[i];
        const int s_top = range.s_max - cdeg + 1;
        ColumnComplex col(hopf, coeff, alg, cdeg, t, s_top, range.max_slice);

        // homology of each weight block, shared by every u in the window
        std::vector<std::map<int, std::uint32_t>> block_dim(static_cast<std::size_t>(s_top));
        std::vector<std::map<int, std::vector<linalg::DenseVector>>> block_reps(static_cast<std::size_t>(s_top));
        for (int s = 0; s < s_top; ++s) {
            const bool edge = col.top_truncated() && s + 1 == s_top;
            for (int w : col.weights(s)) {
                const auto d_in = col.block(s - 1, w);
                if (edge) {
                    block_dim[static_cast<std::size_t>(s)][w] =
                        static_cast<std::uint32_t>(col.chains(s, w).size()) - linalg::rank(d_in);
                    continue;
                }
                const auto d_out = col.block(s, w);
                if (options.representatives) {
                    auto reps = linalg::homology_basis(d_in, d_out);
                    block_dim[static_cast<std::size_t>(s)][w] = static_cast<std::uint32_t>(reps.size());
                    block_reps[static_cast<std::size_t>(s)][w] = std::move(reps);
                }
                else {
                    block_dim[static_cast<std::size_t>(s)][w] = linalg::homology_dim(d_in, d_out);
                }
            }
        }

        const auto [lo, hi] = weight_window(range, t, l);
        for (int u = lo; u <= hi; ++u)
            for (int s = 0; s < s_top; ++s) {
                CotorEntry e;
                e.edge = col.top_truncated() && s + 1 == s_top;
                for (auto [w, d] : block_dim[static_cast<std::size_t>(s)]) {
                    if (w < u || (w - u) % step != 0 || d == 0)
                        continue;
                    const auto n = static_cast<std::uint32_t>((w - u) / step);
                    e.by_ground_power[n] = d;
                    e.dim += d;
                    if (options.representatives) {
                        const auto& chains = col.chains(s, w);
                        for (const auto& v : block_reps[static_cast<std::size_t>(s)][w]) {
                            LinearChain lc;
                            for (std::size_t k = 0; k < v.size(); ++k)
                                if (v[k]) {
                                    auto c = chains[k];
                                    c.ground = n;
                                    lc.push_back({std::move(c), v[k]});
                                }
                            e.representatives.push_back(std::move(lc));
                        }
                    }
                }
                per_column[i].push_back({CotorKey{s, cdeg, t, u}, std::move(e)});
            }
    });

    CotorTable table;
    table.description = fmt::format("Cotor_{}(H, {})", steenrod::to_string(hopf), coeff.name);
    table.hopf = hopf;
    table.coefficients = coeff.name;
    table.ring = alg.ring();
    table.range = range;
    for (auto& v : per_column)
        for (auto& [k, e] : v)
            table.entries.emplace(k, std::move(e));
    return table;
}

CotorTable cess_e2(const CotorRange& range, const DualSteenrod& alg)
{
    auto table = cotor(Algebra::P, ComoduleSpec::cotor_e(alg, range.t_max), range, alg);
    table.description = "Cartan-Eilenberg E2 = Cotor_P(H, Cotor_E(H,H))";
    return table;
}

CotorTable algnov_e1(const CotorRange& range, const DualSteenrod& alg)
{
    auto table = cotor(Algebra::P, ComoduleSpec::novikov_graded(alg, range.t_max), range, alg);
    table.description = "algebraic Novikov E1 = Cotor_P(H, E0 ABP)";
    return table;
}

CotorKey algnov_to_cess(const CotorKey& k)
{
    return {k.s, k.coeff_degree, k.t + k.coeff_degree, k.u};
}

CotorKey cess_to_algnov(const CotorKey& k)
{
    return {k.s, k.coeff_degree, k.t - k.coeff_degree, k.u};
}

std::string format_report(const CotorTable& table)
{
    std::string out = fmt::format("# {}\n# ground ring F_{}[{}], range s<={}, t<={}\n# s\tc\tt\tu\tdim\n",
                                  table.description, table.ring.prime(), table.ring.generator_name(),
                                  table.range.s_max, table.range.t_max);
    for (const auto& [k, e] : table.entries) {
        if (e.dim == 0 && !e.edge)
            continue;
        out += fmt::format("{}\t{}\t{}\t{}\t{}{}\n", k.s, k.coeff_degree, k.t, k.u, e.dim,
                           e.edge ? "\tedge,unverified" : "");
    }
    return out;
}

}  // namespace manss::cobar
