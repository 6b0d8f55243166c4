#pragma once

// Rational simplicial fans and characteristic matrices: primitivity,
// ghost-vertex completion, k-regularity / k-smoothness, product fans.
// Only the combinatorics and the lattice data are kept; geometric fan
// validity (cone intersections) is the caller's responsibility.

#include <string>
#include <vector>

#include "startor/exactla.hpp"
#include "startor/simplicial.hpp"

namespace startor {

struct CharacteristicMatrix {
    IntMatrix mat;  // n rows (basis of H_1(L;Z)), one column per vertex
    std::size_t n() const { return mat.rows(); }
    std::size_t m() const { return mat.cols(); }
    std::vector<mpz_class> column(std::size_t v) const { return mat.col(v); }
    bool is_identity() const;
};

std::vector<mpz_class> primitivize(std::vector<mpz_class> v);  // throws ZeroVector

// true iff the given columns of L extend to a basis of k^n
// (all invariant factors of the submatrix are units in k and the columns
// are independent)
bool columns_extend_to_basis(const CharacteristicMatrix& L,
                             const std::vector<std::size_t>& cols, const Coefficients& k);

class Fan {
public:
    // rays must be primitive; cones are 0-based ray index sets, closed under
    // subsets implicitly; each cone's rays must be linearly independent
    Fan(std::size_t ambient_dim, std::vector<std::vector<mpz_class>> rays,
        std::vector<std::vector<std::size_t>> cones);

    std::size_t ambient_dim() const { return n_; }
    std::size_t ray_count() const { return rays_.size(); }
    const std::vector<std::vector<mpz_class>>& rays() const { return rays_; }
    const std::vector<std::vector<std::size_t>>& cones() const { return cones_; }
    std::size_t ghost_count() const { return ghost_cols_.size(); }

    // derived data: vertices named v1..vm for rays, then g1.. for ghosts
    const SimplicialComplex& complex() const { return complex_; }
    const CharacteristicMatrix& lambda() const { return lambda_; }

    // k-regularity of one cone (a face of the complex; throws ConeNotInFan)
    bool k_regular(const std::vector<std::size_t>& cone, const Coefficients& k) const;

private:
    friend Fan complete_ghosts(const Fan& f);
    friend Fan product_fan(const Fan& a, const Fan& b);
    void rebuild_derived();

    std::size_t n_;
    std::vector<std::vector<mpz_class>> rays_;
    std::vector<std::vector<std::size_t>> cones_;
    std::vector<std::vector<mpz_class>> ghost_cols_;
    SimplicialComplex complex_;
    CharacteristicMatrix lambda_;
};

// append ghost columns forming a basis of a lattice complement of
// sat(span of columns), so the induced map R^V -> R^n is onto;
// complement read off the inverse SNF transform, hence deterministic
Fan complete_ghosts(const Fan& f);

bool is_k_smooth(const Fan& f, const Coefficients& k);

// block-wise product: ambient dims add, cones are all unions, the
// characteristic matrix is block diagonal
Fan product_fan(const Fan& a, const Fan& b);

}  // namespace startor
