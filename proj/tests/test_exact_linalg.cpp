#include "manss/errors.hpp"
#include "manss/exact_linalg.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace manss;
using namespace manss::linalg;

namespace {

// All vectors of F_l^n, for brute-force oracles.
std::vector<std::vector<Residue>> all_vectors(std::uint32_t n, Residue l)
{
    std::vector<std::vector<Residue>> out{{}};
    for (std::uint32_t i = 0; i < n; ++i) {
        std::vector<std::vector<Residue>> next;
        for (const auto& v : out)
            for (Residue x = 0; x < l; ++x) {
                auto w = v;
                w.push_back(x);
                next.push_back(std::move(w));
            }
        out = std::move(next);
    }
    return out;
}

std::vector<Residue> apply(const FlMatrix& m, const std::vector<Residue>& v)
{
    std::vector<Residue> out(m.rows(), 0);
    for (const auto& e : m.entries())
        out[e.row] = static_cast<Residue>((out[e.row] + std::uint64_t{e.value} * v[e.col]) % m.modulus());
    return out;
}

bool is_zero(const std::vector<Residue>& v)
{
    return std::all_of(v.begin(), v.end(), [](Residue x) { return x == 0; });
}

// log_l of the kernel size by enumeration.
std::uint32_t kernel_dim_by_enumeration(const FlMatrix& m)
{
    std::size_t count = 0;
    for (const auto& v : all_vectors(m.cols(), m.modulus()))
        count += is_zero(apply(m, v));
    std::uint32_t d = 0;
    while (count > 1) {
        count /= m.modulus();
        ++d;
    }
    return d;
}

FlMatrix random_matrix(std::mt19937_64& rng, std::uint32_t rows, std::uint32_t cols, Residue l, double density)
{
    std::vector<std::vector<std::int64_t>> d(rows, std::vector<std::int64_t>(cols, 0));
    std::uniform_real_distribution<double> coin(0, 1);
    std::uniform_int_distribution<int> value(1, static_cast<int>(l) - 1);
    for (auto& row : d)
        for (auto& x : row)
            if (coin(rng) < density)
                x = value(rng);
    return FlMatrix::from_dense(d, l);
}

}  // namespace

TEST(PrimeField, InverseAndReduce)
{
    PrimeField f(7);
    for (Residue a = 1; a < 7; ++a)
        EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
    EXPECT_EQ(f.reduce(-1), 6u);
    EXPECT_EQ(f.reduce(15), 1u);
}

TEST(PrimeField, RejectsEvenAndComposite)
{
    EXPECT_THROW(require_odd_prime(2), ConfigurationError);
    EXPECT_THROW(require_odd_prime(9), ConfigurationError);
    EXPECT_NO_THROW(require_odd_prime(5));
}

TEST(FlMatrix, CanonicalTripletsDropZeros)
{
    const auto m = FlMatrix(2, 2, 3, {{1, 1, 3}, {0, 1, 2}, {0, 0, 4}});
    ASSERT_EQ(m.entries().size(), 2u);
    EXPECT_EQ(m.entries()[0].row, 0u);
    EXPECT_EQ(m.entries()[0].col, 0u);
    EXPECT_EQ(m.at(0, 0), 1u);
    EXPECT_EQ(m.at(1, 1), 0u);
}

TEST(RowReduce, RankOneExample)
{
    const auto m = FlMatrix::from_dense({{1, 2}, {2, 4}}, 3);
    const auto r = row_reduce(m);
    EXPECT_EQ(r.rank, 1u);
    EXPECT_EQ(r.kernel.size(), 1u);
    EXPECT_EQ(kernel_dim_by_enumeration(m), 1u);
    for (const auto& k : r.kernel)
        EXPECT_TRUE(is_zero(apply(m, k)));
}

TEST(RowReduce, EmptyAndZeroMatrices)
{
    EXPECT_EQ(rank(FlMatrix::zero(0, 0, 3)), 0u);
    EXPECT_EQ(rank(FlMatrix::zero(3, 4, 5)), 0u);
    EXPECT_EQ(row_reduce(FlMatrix::zero(3, 4, 5)).kernel.size(), 4u);
    EXPECT_EQ(rank(FlMatrix::identity(4, 3)), 4u);
}

TEST(RowReduce, RandomMatchesEnumeration)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const Residue l = trial % 2 ? 3 : 5;
        const auto m = random_matrix(rng, 1 + trial % 5, 1 + (trial / 5) % 5, l, 0.5);
        const auto r = row_reduce(m);
        EXPECT_EQ(m.cols() - r.rank, kernel_dim_by_enumeration(m)) << "trial " << trial;
        for (const auto& k : r.kernel)
            EXPECT_TRUE(is_zero(apply(m, k)));
        EXPECT_EQ(row_reduce(m).kernel, r.kernel);
    }
}

TEST(Multiply, MatchesDenseProduct)
{
    const auto a = FlMatrix::from_dense({{1, 2, 0}, {0, 1, 1}}, 3);
    const auto b = FlMatrix::from_dense({{1, 0}, {1, 1}, {2, 2}}, 3);
    const auto c = multiply(a, b);
    EXPECT_EQ(c.to_dense(), (std::vector<std::vector<Residue>>{{0, 2}, {0, 0}}));
    EXPECT_THROW(multiply(a, a), ConfigurationError);
}

TEST(Homology, SixByFourThenFourByFive)
{
    // d_out * d_in = 0 by construction: d_in's columns lie in ker d_out.
    std::mt19937_64 rng(5);
    const Residue l = 3;
    for (int trial = 0; trial < 20; ++trial) {
        const auto d_out = random_matrix(rng, 4, 6, l, 0.6);
        const auto ker = row_reduce(d_out).kernel;
        std::vector<Triplet> t;
        for (std::uint32_t j = 0; j < 5 && !ker.empty(); ++j) {
            const auto& k = ker[j % ker.size()];
            for (std::uint32_t i = 0; i < 6; ++i)
                if (k[i] && j % 2 == 0)
                    t.push_back({i, j, k[i]});
        }
        const FlMatrix d_in(6, 5, l, t);
        ASSERT_TRUE(multiply(d_out, d_in).is_zero());
        // oracle: cycles by enumeration, boundaries by enumeration of images
        std::set<std::vector<Residue>> boundaries;
        for (const auto& v : all_vectors(5, l))
            boundaries.insert(apply(d_in, v));
        std::uint32_t z = kernel_dim_by_enumeration(d_out), b = 0;
        for (auto n = boundaries.size(); n > 1; n /= l)
            ++b;
        EXPECT_EQ(homology_dim(d_in, d_out), z - b);
        EXPECT_EQ(homology_basis(d_in, d_out).size(), z - b);
    }
}

TEST(Homology, RejectsNonComplex)
{
    const auto d = FlMatrix::identity(2, 3);
    EXPECT_THROW(homology_dim(d, d), ComplexError);
}

namespace {

// Z^2 / R Z^2 by enumerating a box of coset representatives.
bool in_lattice2(const IntMatrix& r, const std::vector<long>& x)
{
    // solve r y = x with Cramer's rule
    const BigInt d = r[0][0] * r[1][1] - r[0][1] * r[1][0];
    const BigInt y0 = BigInt(x[0]) * r[1][1] - r[0][1] * BigInt(x[1]);
    const BigInt y1 = r[0][0] * BigInt(x[1]) - BigInt(x[0]) * r[1][0];
    return y0 % d == 0 && y1 % d == 0;
}

std::vector<int> exponents_by_counting(const IntMatrix& r, std::uint32_t l)
{
    const long d = static_cast<long>(abs(r[0][0] * r[1][1] - r[0][1] * r[1][0]));
    // Z^2 / R Z^2 has d elements; the box [0,d)^2 covers each coset d times.
    std::vector<long> killed;
    for (long lk = 1; lk <= d; lk *= l) {
        long count = 0;
        for (long a = 0; a < d; ++a)
            for (long b = 0; b < d; ++b)
                count += in_lattice2(r, {a * lk, b * lk});
        killed.push_back(count / d);
    }
    std::vector<int> at_least;  // number of cyclic factors of exponent >= k
    for (std::size_t k = 1; k < killed.size(); ++k) {
        int n = 0;
        for (long q = killed[k] / killed[k - 1]; q > 1; q /= l)
            ++n;
        at_least.push_back(n);
    }
    std::vector<int> exps;
    for (std::size_t k = 0; k < at_least.size(); ++k) {
        const int next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
        for (int i = 0; i < at_least[k] - next; ++i)
            exps.push_back(static_cast<int>(k) + 1);
    }
    return exps;
}

}  // namespace

TEST(Smith, PresentationExample)
{
    // <x, y | 3x + 3y, 9y>
    const auto p = make_presentation(2, {{3, 3}, {0, 9}});
    EXPECT_EQ(p.invariant_factors, (std::vector<BigInt>{3, 9}));
    const IntMatrix r{{3, 0}, {3, 9}};
    EXPECT_EQ(exponents_by_counting(r, 3), (std::vector<int>{1, 2}));
}

TEST(Smith, NormalizeIsIdempotent)
{
    const auto p = make_presentation(3, {{2, 4, 0}, {0, 6, 6}, {1, 1, 1}});
    const auto once = smith_normalize(p);
    EXPECT_EQ(smith_normalize(once), once);
    EXPECT_EQ(once.invariant_factors, p.invariant_factors);
}

TEST(Smith, DecompositionIdentity)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> v(-9, 9);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t rows = 2 + trial % 3, cols = 1 + trial % 4;
        IntMatrix a(rows, std::vector<BigInt>(cols));
        for (auto& row : a)
            for (auto& x : row)
                x = v(rng);
        const auto s = smith_decompose(a, rows, cols);
        const auto d = int_multiply(int_multiply(s.u, a, rows), s.v, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                EXPECT_EQ(d[i][j], i == j ? s.diagonal[i] : BigInt(0));
        for (std::size_t i = 1; i < s.rank; ++i)
            EXPECT_EQ(s.diagonal[i] % s.diagonal[i - 1], 0);
    }
}

TEST(Smith, RandomTwoByTwoAgainstCounting)
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> v(-9, 9);
    int tested = 0;
    while (tested < 25) {
        IntMatrix r{{v(rng), v(rng)}, {v(rng), v(rng)}};
        const BigInt d = abs(r[0][0] * r[1][1] - r[0][1] * r[1][0]);
        // restrict to 3-groups of small order
        if (d == 0 || d > 81)
            continue;
        BigInt x = d;
        while (x % 3 == 0)
            x /= 3;
        if (x != 1)
            continue;
        ++tested;
        std::vector<int> exps;
        for (const auto& f : invariant_factors(r, 2, 2))
            exps.push_back(valuation(f, 3));
        EXPECT_EQ(exps, exponents_by_counting(r, 3));
    }
}

TEST(IntegerKernel, VectorsAreInKernel)
{
    const IntMatrix a{{1, 2, 3}, {2, 4, 6}};
    const auto k = integer_kernel(a, 2, 3);
    EXPECT_EQ(k.size(), 2u);
    for (const auto& v : k)
        for (const auto& row : a)
            EXPECT_EQ(row[0] * v[0] + row[1] * v[1] + row[2] * v[2], 0);
}

TEST(LatticeQuotient, IndexThreeSublattice)
{
    const auto f = lattice_quotient({{1, 0}, {0, 1}}, {{3, 0}, {0, 1}}, 2);
    EXPECT_EQ(f, (std::vector<BigInt>{3}));
    EXPECT_EQ(valuation(BigInt(54), 3), 3);
}
