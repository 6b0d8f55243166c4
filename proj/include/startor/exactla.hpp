#pragma once

// Exact linear algebra over Z, Q and F_p: integer matrices (dense or
// sparse triplets by size), Smith normal form with unimodular transforms,
// and cohomology of a two-map complex.  No floating point anywhere.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "startor/errors.hpp"

namespace startor {

enum class CoeffKind { Integers, Rationals, PrimeField };

class Coefficients {
public:
    static Coefficients integers() { return Coefficients(CoeffKind::Integers, 0); }
    static Coefficients rationals() { return Coefficients(CoeffKind::Rationals, 0); }
    static Coefficients prime_field(const mpz_class& p);

    CoeffKind kind() const { return kind_; }
    const mpz_class& prime() const { return p_; }
    bool is_field() const { return kind_ != CoeffKind::Integers; }
    // whether 2 is a unit in k
    bool has_invertible_two() const;

    // canonical form of a scalar: reduce into [0,p) over F_p, identity otherwise
    mpz_class canon(const mpz_class& x) const;
    bool is_zero(const mpz_class& x) const { return canon(x) == 0; }
    bool is_unit(const mpz_class& x) const;
    // multiplicative inverse (fields only; throws error on non-unit)
    mpz_class inverse(const mpz_class& x) const;

    std::string name() const;
    bool operator==(const Coefficients& o) const { return kind_ == o.kind_ && p_ == o.p_; }

private:
    Coefficients(CoeffKind k, mpz_class p) : kind_(k), p_(std::move(p)) {}
    CoeffKind kind_;
    mpz_class p_;
};

// Integer matrix with arbitrary-precision entries.  Storage is dense
// row-major below 64x64 and a sorted triplet map above.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0), dense_(true) {}
    IntMatrix(std::size_t rows, std::size_t cols);
    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_dense() const { return dense_; }

    const mpz_class& get(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const mpz_class& v);
    void add_at(std::size_t i, std::size_t j, const mpz_class& v);

    IntMatrix operator*(const IntMatrix& o) const;
    std::vector<mpz_class> apply(const std::vector<mpz_class>& v) const;  // M*v
    IntMatrix transposed() const;
    IntMatrix canon(const Coefficients& k) const;  // entrywise canonical form
    bool is_zero() const;
    bool operator==(const IntMatrix& o) const;

    std::vector<mpz_class> col(std::size_t j) const;
    std::vector<mpz_class> row(std::size_t i) const;

    // nonzero entries in deterministic (row,col) order
    void for_each_nonzero(const std::function<void(std::size_t, std::size_t, const mpz_class&)>& f) const;
    void for_each_in_row(std::size_t i, const std::function<void(std::size_t, const mpz_class&)>& f) const;

private:
    std::size_t rows_, cols_;
    bool dense_;
    std::vector<mpz_class> d_;
    std::map<std::pair<std::size_t, std::size_t>, mpz_class> s_;
};

struct SnfDecomposition {
    IntMatrix D;           // diagonal, S*M*T = D
    IntMatrix S, T;        // unimodular
    IntMatrix Sinv, Tinv;  // inverses accumulated alongside
    bool with_transforms = false;
    std::vector<mpz_class> invariant_factors;  // nonzero d_1 | d_2 | ...
    std::size_t rank() const { return invariant_factors.size(); }
};

// Smith normal form; pivoting picks the smallest-magnitude nonzero entry
// (ties broken by least fill) to limit coefficient growth.
SnfDecomposition smith_normal_form(const IntMatrix& M, bool with_transforms = true);

// rank over k (Z and Q agree; F_p by modular elimination)
std::size_t rank_over(const IntMatrix& M, const Coefficients& k);

struct GradedPiece {
    long free_rank = 0;
    std::vector<mpz_class> torsion;  // invariant factors > 1, each dividing the next
    bool trivial() const { return free_rank == 0 && torsion.empty(); }
    bool operator==(const GradedPiece& o) const = default;
    std::string str(const Coefficients& k) const;  // "Z^2+Z_2", "F_2^3", ...
};

// normalized direct sum (torsion re-chained via prime powers)
GradedPiece direct_sum(const GradedPiece& a, const GradedPiece& b);

// Cohomology ker(d_out)/im(d_in) of  k^a --d_in--> k^m --d_out--> k^c.
// d_in is m x a, d_out is c x m; requires d_out*d_in = 0 over k.
GradedPiece cohomology_at(const IntMatrix& d_in, const IntMatrix& d_out, const Coefficients& k);

// columns form a basis of ker(M) over k (saturated over Z)
IntMatrix kernel_basis(const IntMatrix& M, const Coefficients& k);

// solve M*x = v over k; nullopt when unsolvable
std::optional<std::vector<mpq_class>> solve_in_image(const IntMatrix& M,
                                                     const std::vector<mpz_class>& v,
                                                     const Coefficients& k);

// Basis-level view of ker(d_out)/im(d_in): representatives, annihilators
// and reduction of cocycles to class coordinates.  Representatives are
// read off the Smith decompositions, hence deterministic.
class CohomologyBasis {
public:
    CohomologyBasis(const IntMatrix& d_in, const IntMatrix& d_out, const Coefficients& k);

    std::size_t class_count() const { return classes_.size(); }
    // 0 for a free class, d > 1 for a torsion class
    const mpz_class& annihilator(std::size_t i) const { return classes_[i].annihilator; }
    // coordinates of the i-th representative in the middle module
    const std::vector<mpz_class>& representative(std::size_t i) const { return classes_[i].rep; }
    // class coordinates of a cocycle (throws NotACocycle if d_out*v != 0 over k);
    // torsion coordinates are canonical residues mod the annihilator
    std::vector<mpz_class> reduce(const std::vector<mpz_class>& v) const;
    GradedPiece piece() const;

private:
    struct ClassInfo {
        std::vector<mpz_class> rep;
        mpz_class annihilator;
    };
    Coefficients k_;
    std::size_t mid_;
    IntMatrix d_out_;
    SnfDecomposition snfB_;              // of d_out
    std::vector<std::size_t> ker_pos_;   // columns of T_B spanning the kernel
    SnfDecomposition snfC_;              // of d_in in kernel coordinates
    std::vector<ClassInfo> classes_;
    std::vector<std::size_t> class_src_; // index into kernel coordinate slots
};

}  // namespace startor
