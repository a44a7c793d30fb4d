#include "manss/exact_linalg.hpp"

#include "manss/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>

namespace manss::linalg {

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

void require_odd_prime(std::uint64_t l)
{
    if (l == 2)
        throw ConfigurationError("the prime 2 is not supported; use an odd prime");
    if (!is_prime(l))
        throw ConfigurationError(fmt::format("modulus {} is not an odd prime", l));
}

PrimeField::PrimeField(Residue l) : l_(l)
{
    require_odd_prime(l);
}

Residue PrimeField::reduce(std::int64_t x) const noexcept
{
    auto r = x % static_cast<std::int64_t>(l_);
    return static_cast<Residue>(r < 0 ? r + l_ : r);
}

Residue PrimeField::inv(Residue a) const
{
    if (a % l_ == 0)
        throw ComplexError("division by zero in F_l");
    // Fermat: a^(l-2)
    std::uint64_t result = 1, base = a % l_, e = l_ - 2;
    while (e) {
        if (e & 1)
            result = result * base % l_;
        base = base * base % l_;
        e >>= 1;
    }
    return static_cast<Residue>(result);
}

// ---------------------------------------------------------------------------

FlMatrix::FlMatrix(std::uint32_t rows, std::uint32_t cols, Residue modulus, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols), modulus_(modulus)
{
    require_odd_prime(modulus);
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    for (const auto& e : entries) {
        if (e.row >= rows || e.col >= cols)
            throw ConfigurationError(fmt::format("entry ({},{}) outside {}x{} matrix", e.row, e.col, rows, cols));
        Residue v = e.value % modulus;
        if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
            entries_.back().value = (entries_.back().value + v) % modulus;
            if (entries_.back().value == 0)
                entries_.pop_back();
        }
        else if (v != 0) {
            entries_.push_back({e.row, e.col, v});
        }
    }
}

FlMatrix FlMatrix::identity(std::uint32_t n, Residue modulus)
{
    std::vector<Triplet> t;
    t.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i)
        t.push_back({i, i, 1});
    return FlMatrix(n, n, modulus, std::move(t));
}

FlMatrix FlMatrix::from_dense(const std::vector<std::vector<std::int64_t>>& rows, Residue modulus)
{
    PrimeField f(modulus);
    const auto nrows = static_cast<std::uint32_t>(rows.size());
    const auto ncols = nrows ? static_cast<std::uint32_t>(rows.front().size()) : 0u;
    std::vector<Triplet> t;
    for (std::uint32_t i = 0; i < nrows; ++i) {
        if (rows[i].size() != ncols)
            throw ConfigurationError("ragged dense matrix");
        for (std::uint32_t j = 0; j < ncols; ++j)
            if (auto v = f.reduce(rows[i][j]))
                t.push_back({i, j, v});
    }
    return FlMatrix(nrows, ncols, modulus, std::move(t));
}

Residue FlMatrix::at(std::uint32_t r, std::uint32_t c) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), Triplet{r, c, 0},
                               [](const Triplet& a, const Triplet& b) {
                                   return std::tie(a.row, a.col) < std::tie(b.row, b.col);
                               });
    return (it != entries_.end() && it->row == r && it->col == c) ? it->value : 0;
}

std::vector<std::vector<Residue>> FlMatrix::to_dense() const
{
    std::vector<std::vector<Residue>> d(rows_, std::vector<Residue>(cols_, 0));
    for (const auto& e : entries_)
        d[e.row][e.col] = e.value;
    return d;
}

FlMatrix FlMatrix::submatrix(std::span<const std::uint32_t> row_ids, std::span<const std::uint32_t> col_ids) const
{
    std::map<std::uint32_t, std::uint32_t> rmap, cmap;
    for (std::uint32_t i = 0; i < row_ids.size(); ++i)
        rmap[row_ids[i]] = i;
    for (std::uint32_t j = 0; j < col_ids.size(); ++j)
        cmap[col_ids[j]] = j;
    std::vector<Triplet> t;
    for (const auto& e : entries_) {
        auto ri = rmap.find(e.row);
        if (ri == rmap.end())
            continue;
        auto ci = cmap.find(e.col);
        if (ci == cmap.end())
            continue;
        t.push_back({ri->second, ci->second, e.value});
    }
    return FlMatrix(static_cast<std::uint32_t>(row_ids.size()), static_cast<std::uint32_t>(col_ids.size()),
                    modulus_, std::move(t));
}

FlMatrix multiply(const FlMatrix& a, const FlMatrix& b)
{
    if (a.modulus() != b.modulus())
        throw ConfigurationError("modulus mismatch in multiply");
    if (a.cols() != b.rows())
        throw ConfigurationError(fmt::format("cannot multiply {}x{} by {}x{}", a.rows(), a.cols(), b.rows(), b.cols()));
    const PrimeField f(a.modulus());
    // index rows of b
    std::vector<std::vector<std::pair<std::uint32_t, Residue>>> brows(b.rows());
    for (const auto& e : b.entries())
        brows[e.row].push_back({e.col, e.value});
    std::map<std::pair<std::uint32_t, std::uint32_t>, Residue> acc;
    for (const auto& e : a.entries())
        for (auto [c, v] : brows[e.col]) {
            auto& slot = acc[{e.row, c}];
            slot = f.add(slot, f.mul(e.value, v));
        }
    std::vector<Triplet> t;
    for (auto [k, v] : acc)
        if (v)
            t.push_back({k.first, k.second, v});
    return FlMatrix(a.rows(), b.cols(), a.modulus(), std::move(t));
}

namespace {

/// Echelon basis grown one vector at a time; pivot rows normalized to leading 1.
class EchelonBasis {
public:
    EchelonBasis(std::uint32_t width, const PrimeField& f) : width_(width), f_(f) {}

    /// Reduces v against the basis; if nonzero, adds it and returns true.
    bool insert(DenseVector v)
    {
        for (std::size_t k = 0; k < pivots_.size(); ++k) {
            const auto pc = pivots_[k];
            if (v[pc] == 0)
                continue;
            const Residue c = v[pc];
            const auto& row = rows_[k];
            for (std::uint32_t j = pc; j < width_; ++j)
                if (row[j])
                    v[j] = f_.sub(v[j], f_.mul(c, row[j]));
        }
        std::uint32_t lead = 0;
        while (lead < width_ && v[lead] == 0)
            ++lead;
        if (lead == width_)
            return false;
        const Residue inv = f_.inv(v[lead]);
        for (std::uint32_t j = lead; j < width_; ++j)
            v[j] = f_.mul(v[j], inv);
        // keep pivots sorted so reduction sweeps columns in increasing order
        auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), lead) - pivots_.begin();
        pivots_.insert(pivots_.begin() + pos, lead);
        rows_.insert(rows_.begin() + pos, std::move(v));
        return true;
    }

    /// Clears every pivot column in all other rows.
    void back_reduce()
    {
        for (std::size_t k = pivots_.size(); k-- > 0;) {
            const auto pc = pivots_[k];
            for (std::size_t i = 0; i < k; ++i) {
                const Residue c = rows_[i][pc];
                if (!c)
                    continue;
                for (std::uint32_t j = pc; j < width_; ++j)
                    if (rows_[k][j])
                        rows_[i][j] = f_.sub(rows_[i][j], f_.mul(c, rows_[k][j]));
            }
        }
    }

    const std::vector<std::uint32_t>& pivots() const { return pivots_; }
    const std::vector<DenseVector>& rows() const { return rows_; }

private:
    std::uint32_t width_;
    const PrimeField& f_;
    std::vector<std::uint32_t> pivots_;
    std::vector<DenseVector> rows_;
};

std::vector<DenseVector> dense_rows(const FlMatrix& m)
{
    std::vector<DenseVector> rows(m.rows(), DenseVector(m.cols(), 0));
    for (const auto& e : m.entries())
        rows[e.row][e.col] = e.value;
    return rows;
}

}  // namespace

RowReduction row_reduce(const FlMatrix& m)
{
    const PrimeField f(m.modulus());
    EchelonBasis basis(m.cols(), f);
    for (auto& row : dense_rows(m)) {
        if (std::any_of(row.begin(), row.end(), [](Residue r) { return r != 0; }))
            basis.insert(std::move(row));
    }
    basis.back_reduce();

    RowReduction out;
    out.rank = static_cast<std::uint32_t>(basis.pivots().size());
    out.pivot_cols = basis.pivots();

    std::vector<bool> is_pivot(m.cols(), false);
    for (auto pc : basis.pivots())
        is_pivot[pc] = true;
    for (std::uint32_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free])
            continue;
        DenseVector v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t k = 0; k < basis.pivots().size(); ++k)
            v[basis.pivots()[k]] = f.neg(basis.rows()[k][free]);
        out.kernel.push_back(std::move(v));
    }

    std::vector<DenseVector> cols(m.cols());
    for (auto pc : out.pivot_cols)
        cols[pc].assign(m.rows(), 0);
    for (const auto& e : m.entries())
        if (is_pivot[e.col])
            cols[e.col][e.row] = e.value;
    for (auto pc : out.pivot_cols)
        out.image.push_back(std::move(cols[pc]));
    return out;
}

std::uint32_t rank(const FlMatrix& m)
{
    const PrimeField f(m.modulus());
    EchelonBasis basis(m.cols(), f);
    for (auto& row : dense_rows(m))
        basis.insert(std::move(row));
    return static_cast<std::uint32_t>(basis.pivots().size());
}

namespace {

void check_composable(const FlMatrix& d_in, const FlMatrix& d_out)
{
    if (d_in.rows() != d_out.cols())
        throw ConfigurationError(fmt::format("inner dimensions differ: d_in has {} rows, d_out has {} cols",
                                             d_in.rows(), d_out.cols()));
    if (!multiply(d_out, d_in).is_zero())
        throw ComplexError("d_out * d_in is nonzero");
}

}  // namespace

std::uint32_t homology_dim(const FlMatrix& d_in, const FlMatrix& d_out)
{
    check_composable(d_in, d_out);
    const auto cycles = d_out.cols() - rank(d_out);
    const auto boundaries = rank(d_in);
    return cycles - boundaries;
}

std::vector<DenseVector> homology_basis(const FlMatrix& d_in, const FlMatrix& d_out)
{
    check_composable(d_in, d_out);
    const PrimeField f(d_out.modulus());
    const auto kernel = row_reduce(d_out).kernel;
    const auto image = row_reduce(d_in).image;
    EchelonBasis span(d_out.cols(), f);
    for (const auto& v : image)
        span.insert(v);
    std::vector<DenseVector> reps;
    for (const auto& v : kernel)
        if (span.insert(v))
            reps.push_back(v);
    return reps;
}

// ---------------------------------------------------------------------------

IntMatrix int_identity(std::size_t n)
{
    IntMatrix m(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        m[i][i] = 1;
    return m;
}

IntMatrix int_multiply(const IntMatrix& a, const IntMatrix& b, std::size_t inner)
{
    const std::size_t rows = a.size();
    const std::size_t cols = b.empty() ? 0 : b.front().size();
    IntMatrix out(rows, std::vector<BigInt>(cols, 0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0)
                continue;
            for (std::size_t j = 0; j < cols; ++j)
                out[i][j] += a[i][k] * b[k][j];
        }
    return out;
}

SmithForm smith_decompose(const IntMatrix& a, std::size_t rows, std::size_t cols)
{
    IntMatrix d = a;
    d.resize(rows);
    for (auto& r : d)
        r.resize(cols, 0);
    SmithForm out;
    out.u = int_identity(rows);
    out.v = int_identity(cols);

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(d[i], d[j]);
        std::swap(out.u[i], out.u[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (auto& r : d)
            std::swap(r[i], r[j]);
        for (auto& r : out.v)
            std::swap(r[i], r[j]);
    };
    auto add_row = [&](std::size_t target, std::size_t src, const BigInt& q) {  // row_t += q row_s
        for (std::size_t j = 0; j < cols; ++j)
            d[target][j] += q * d[src][j];
        for (std::size_t j = 0; j < rows; ++j)
            out.u[target][j] += q * out.u[src][j];
    };
    auto add_col = [&](std::size_t target, std::size_t src, const BigInt& q) {  // col_t += q col_s
        for (std::size_t i = 0; i < rows; ++i)
            d[i][target] += q * d[i][src];
        for (std::size_t i = 0; i < cols; ++i)
            out.v[i][target] += q * out.v[i][src];
    };

    const std::size_t n = std::min(rows, cols);
    std::size_t k = 0;
    for (; k < n; ++k) {
        while (true) {
            // smallest nonzero magnitude in the trailing block
            std::size_t pi = rows, pj = cols;
            BigInt best = 0;
            for (std::size_t i = k; i < rows; ++i)
                for (std::size_t j = k; j < cols; ++j)
                    if (d[i][j] != 0 && (best == 0 || abs(d[i][j]) < best)) {
                        best = abs(d[i][j]);
                        pi = i;
                        pj = j;
                    }
            if (pi == rows)
                goto finished;
            if (pi != k)
                swap_rows(pi, k);
            if (pj != k)
                swap_cols(pj, k);

            bool clean = true;
            for (std::size_t i = k + 1; i < rows; ++i)
                if (d[i][k] != 0) {
                    BigInt q = d[i][k] / d[k][k];
                    add_row(i, k, -q);
                    if (d[i][k] != 0)
                        clean = false;
                }
            for (std::size_t j = k + 1; j < cols; ++j)
                if (d[k][j] != 0) {
                    BigInt q = d[k][j] / d[k][k];
                    add_col(j, k, -q);
                    if (d[k][j] != 0)
                        clean = false;
                }
            if (!clean)
                continue;
            // divisibility of the remaining block
            bool divides = true;
            for (std::size_t i = k + 1; i < rows && divides; ++i)
                for (std::size_t j = k + 1; j < cols; ++j)
                    if (d[i][j] % d[k][k] != 0) {
                        add_row(k, i, 1);
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        if (d[k][k] < 0) {
            for (std::size_t j = 0; j < cols; ++j)
                d[k][j] = -d[k][j];
            for (std::size_t j = 0; j < rows; ++j)
                out.u[k][j] = -out.u[k][j];
        }
    }
finished:
    out.rank = k;
    out.diagonal.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        out.diagonal[i] = d[i][i];
    return out;
}

std::vector<BigInt> invariant_factors(const IntMatrix& relations, std::size_t rows, std::size_t cols)
{
    const auto snf = smith_decompose(relations, rows, cols);
    std::vector<BigInt> finite, free;
    for (std::size_t i = 0; i < rows; ++i) {
        const BigInt d = i < snf.diagonal.size() ? snf.diagonal[i] : BigInt(0);
        if (d == 1)
            continue;
        (d == 0 ? free : finite).push_back(d);
    }
    std::sort(finite.begin(), finite.end());
    finite.insert(finite.end(), free.begin(), free.end());
    return finite;
}

FiniteAbelianPresentation make_presentation(std::size_t generators,
                                            const std::vector<std::vector<std::int64_t>>& relation_columns)
{
    FiniteAbelianPresentation p;
    p.generators = generators;
    p.relation_count = relation_columns.size();
    p.relations.assign(generators, std::vector<BigInt>(p.relation_count, 0));
    for (std::size_t j = 0; j < relation_columns.size(); ++j) {
        if (relation_columns[j].size() != generators)
            throw ConfigurationError("relation column length differs from generator count");
        for (std::size_t i = 0; i < generators; ++i)
            p.relations[i][j] = relation_columns[j][i];
    }
    p.invariant_factors = invariant_factors(p.relations, p.generators, p.relation_count);
    return p;
}

FiniteAbelianPresentation smith_normalize(const FiniteAbelianPresentation& p)
{
    FiniteAbelianPresentation out;
    out.invariant_factors = invariant_factors(p.relations, p.generators, p.relation_count);
    out.generators = out.invariant_factors.size();
    std::size_t finite = 0;
    for (const auto& f : out.invariant_factors)
        if (f != 0)
            ++finite;
    out.relation_count = finite;
    out.relations.assign(out.generators, std::vector<BigInt>(finite, 0));
    for (std::size_t i = 0; i < finite; ++i)
        out.relations[i][i] = out.invariant_factors[i];
    return out;
}

std::vector<std::vector<BigInt>> integer_kernel(const IntMatrix& a, std::size_t rows, std::size_t cols)
{
    const auto snf = smith_decompose(a, rows, cols);
    std::vector<std::vector<BigInt>> basis;
    for (std::size_t j = snf.rank; j < cols; ++j) {
        std::vector<BigInt> v(cols);
        for (std::size_t i = 0; i < cols; ++i)
            v[i] = snf.v[i][j];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<BigInt> lattice_quotient(const std::vector<std::vector<BigInt>>& big,
                                     const std::vector<std::vector<BigInt>>& small, std::size_t n)
{
    IntMatrix b(n, std::vector<BigInt>(big.size(), 0));
    for (std::size_t j = 0; j < big.size(); ++j)
        for (std::size_t i = 0; i < n; ++i)
            b[i][j] = big[j][i];
    const auto snf = smith_decompose(b, n, big.size());
    const std::size_t r = snf.rank;
    // coordinates of each small generator in the basis U^{-1} D e_i of the big lattice
    IntMatrix c(r, std::vector<BigInt>(small.size(), 0));
    for (std::size_t j = 0; j < small.size(); ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            BigInt acc = 0;
            for (std::size_t k = 0; k < n; ++k)
                acc += snf.u[i][k] * small[j][k];
            if (i < r) {
                if (acc % snf.diagonal[i] != 0)
                    throw ComplexError("lattice_quotient: sublattice not contained in lattice");
                c[i][j] = acc / snf.diagonal[i];
            }
            else if (acc != 0) {
                throw ComplexError("lattice_quotient: sublattice not contained in lattice");
            }
        }
    }
    return invariant_factors(c, r, small.size());
}

int valuation(const BigInt& x, std::uint32_t l)
{
    if (x == 0)
        throw ConfigurationError("valuation of zero");
    BigInt y = abs(x);
    int v = 0;
    while (y % l == 0) {
        y /= l;
        ++v;
    }
    return v;
}

}  // namespace manss::linalg
