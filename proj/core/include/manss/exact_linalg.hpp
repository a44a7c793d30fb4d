#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace manss::linalg {

using Residue = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;

bool is_prime(std::uint64_t n);

/// Throws ConfigurationError unless `l` is an odd prime.
void require_odd_prime(std::uint64_t l);

/// Arithmetic in F_l.
class PrimeField {
public:
    explicit PrimeField(Residue l);

    Residue modulus() const noexcept { return l_; }
    Residue reduce(std::int64_t x) const noexcept;
    Residue add(Residue a, Residue b) const noexcept { return (a + b) % l_; }
    Residue sub(Residue a, Residue b) const noexcept { return (a + l_ - b) % l_; }
    Residue mul(Residue a, Residue b) const noexcept
    {
        return static_cast<Residue>((std::uint64_t{a} * b) % l_);
    }
    Residue neg(Residue a) const noexcept { return a == 0 ? 0 : l_ - a; }
    Residue inv(Residue a) const;

private:
    Residue l_;
};

struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    Residue value;
    friend bool operator==(const Triplet&, const Triplet&) = default;
};

using DenseVector = std::vector<Residue>;

/// Sparse matrix over F_l in canonical (row, col) order with no stored zeros.
/// Acts on column vectors: an m x n matrix maps F_l^n -> F_l^m.
class FlMatrix {
public:
    FlMatrix(std::uint32_t rows, std::uint32_t cols, Residue modulus,
             std::vector<Triplet> entries = {});

    static FlMatrix zero(std::uint32_t rows, std::uint32_t cols, Residue modulus)
    {
        return FlMatrix(rows, cols, modulus);
    }
    static FlMatrix identity(std::uint32_t n, Residue modulus);
    static FlMatrix from_dense(const std::vector<std::vector<std::int64_t>>& rows, Residue modulus);

    std::uint32_t rows() const noexcept { return rows_; }
    std::uint32_t cols() const noexcept { return cols_; }
    Residue modulus() const noexcept { return modulus_; }
    std::span<const Triplet> entries() const noexcept { return entries_; }
    bool is_zero() const noexcept { return entries_.empty(); }

    Residue at(std::uint32_t r, std::uint32_t c) const;
    std::vector<std::vector<Residue>> to_dense() const;

    /// Restriction to the given row and column index lists (in that order).
    FlMatrix submatrix(std::span<const std::uint32_t> row_ids,
                       std::span<const std::uint32_t> col_ids) const;

    friend bool operator==(const FlMatrix&, const FlMatrix&) = default;

private:
    std::uint32_t rows_;
    std::uint32_t cols_;
    Residue modulus_;
    std::vector<Triplet> entries_;
};

/// a * b; throws ConfigurationError on dimension or modulus mismatch.
FlMatrix multiply(const FlMatrix& a, const FlMatrix& b);

struct RowReduction {
    std::uint32_t rank = 0;
    /// Basis of {x : M x = 0}, vectors of length cols().
    std::vector<DenseVector> kernel;
    /// Columns of M at the pivot positions; a basis of the column space.
    std::vector<DenseVector> image;
    std::vector<std::uint32_t> pivot_cols;
};

/// Gaussian elimination with rows inserted in index order; each reduced nonzero row
/// contributes its leading column as a pivot. Output depends only on the input.
RowReduction row_reduce(const FlMatrix& m);

std::uint32_t rank(const FlMatrix& m);

/// dim ker(d_out) - rank(d_in) for C_{-} --d_in--> C --d_out--> C_{+}.
/// Throws ComplexError if d_out * d_in != 0.
std::uint32_t homology_dim(const FlMatrix& d_in, const FlMatrix& d_out);

/// Cycle representatives of a homology basis, in the same setting as homology_dim.
std::vector<DenseVector> homology_basis(const FlMatrix& d_in, const FlMatrix& d_out);

// ---------------------------------------------------------------------------
// Integer matrices and finite abelian groups

using IntMatrix = std::vector<std::vector<BigInt>>;  // row-major

IntMatrix int_identity(std::size_t n);
IntMatrix int_multiply(const IntMatrix& a, const IntMatrix& b, std::size_t inner);

struct SmithForm {
    /// U * A * V = D with D diagonal (d_1 | d_2 | ...), d_i >= 0. U, V unimodular.
    IntMatrix u;
    IntMatrix v;
    std::vector<BigInt> diagonal;  // length min(rows, cols)
    std::size_t rank = 0;
};

SmithForm smith_decompose(const IntMatrix& a, std::size_t rows, std::size_t cols);

/// Abelian group Z^generators / (column span of relations).
struct FiniteAbelianPresentation {
    std::size_t generators = 0;
    IntMatrix relations;  // generators x relation_count; columns are relations
    std::size_t relation_count = 0;
    /// Invariant factors after normalization: ascending, each dividing the next,
    /// units dropped, 0 (infinite cyclic) last.
    std::vector<BigInt> invariant_factors;

    friend bool operator==(const FiniteAbelianPresentation&, const FiniteAbelianPresentation&) = default;
};

FiniteAbelianPresentation make_presentation(std::size_t generators,
                                            const std::vector<std::vector<std::int64_t>>& relation_columns);

/// Diagonal presentation of the same group; idempotent.
FiniteAbelianPresentation smith_normalize(const FiniteAbelianPresentation& p);

/// Invariant factors of Z^n / span(columns).
std::vector<BigInt> invariant_factors(const IntMatrix& relations, std::size_t rows, std::size_t cols);

/// Integer kernel basis of A (rows x cols), as columns vectors of length cols.
std::vector<std::vector<BigInt>> integer_kernel(const IntMatrix& a, std::size_t rows, std::size_t cols);

/// Invariant factors of big/small where both lattices in Z^n are given by generating columns
/// and small is contained in big. Units dropped, zeros kept.
std::vector<BigInt> lattice_quotient(const std::vector<std::vector<BigInt>>& big,
                                     const std::vector<std::vector<BigInt>>& small, std::size_t n);

/// l-adic valuation; x must be nonzero.
int valuation(const BigInt& x, std::uint32_t l);

}  // namespace manss::linalg
