#pragma once

// Twisting terms q_ij, contraction operators, the twisted *-product on the
// Koszul complex, and cohomology ring structure constants.
//
// The product is computed by peeling the left factor: for
// a = alpha_{i_1} ^ ... ^ alpha_{i_k} * f with i_1 < ... < i_k,
//     a * b = f * L_{i_1}( L_{i_2}( ... L_{i_k}(b) ... ) )
// where L_i(y) = alpha_i ^ y + sum_{j <= i} q_ij * iota(x_j)(y).
// With all q_ij = 0 this is the canonical componentwise product.

#include <map>
#include <vector>

#include "startor/koszul.hpp"

namespace startor {

enum class TwistMode { Twisted, Canonical };

struct TwistingData {
    TwistMode mode = TwistMode::Twisted;
    // q[(i,j)] with 1 <= j <= i <= n: linear form sum_v coeff_v t_v,
    // stored sparsely as vertex -> coefficient; empty map = zero
    std::map<std::pair<std::size_t, std::size_t>, std::map<std::size_t, mpz_class>> q;

    const std::map<std::size_t, mpz_class>* form(std::size_t i, std::size_t j) const {
        auto it = q.find({i, j});
        return it == q.end() ? nullptr : &it->second;
    }
};

// Twisting terms of the characteristic matrix over k:
//   q_ii = sum_v x_v^i (x_v^i - 1)/2 t_v   (integer arithmetic, then into k)
//   q_ij = sum_v x_v^i x_v^j t_v           (i > j)
// Canonical mode returns all-zero terms and requires 2 invertible in k.
TwistingData twisting_terms(const CharacteristicMatrix& lambda, const Coefficients& k,
                            TwistMode mode);

// contraction iota(x_i), 1-based; k[Sigma]-linear, square zero
KoszulElement contract(std::size_t i, const KoszulElement& el, const KoszulContext& kc);

KoszulElement star_multiply(const KoszulElement& a, const KoszulElement& b,
                            const TwistingData& tw, const KoszulContext& kc);

struct CohomologyRing {
    struct Entry {
        long ta, tb;          // total degrees of the factors
        std::size_t a, b;     // basis indices within those degrees
        std::vector<mpz_class> coords;  // class coordinates in degree ta+tb
    };
    std::map<long, std::vector<TorContext::ClassInfo>> bases;  // per total degree <= D
    std::vector<Entry> constants;
    std::string coefficients;
    long max_total_degree = 0;
};

CohomologyRing ring_structure(TorContext& tor, const TwistingData& tw);

}  // namespace startor
