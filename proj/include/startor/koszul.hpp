#pragma once

// The Koszul complex K = Lambda(alpha_1..alpha_n) (x) k[Sigma] with
// differential d(alpha_i) = -sum_v x_v^i t_v, bigraded Tor tables, and
// reduction of cocycles to an SNF-adapted cohomology basis.
//
// Bigrading: a term alpha_S * m sits in bidegree (p,q) = (-|S|, 2 deg m + 2|S|),
// total (cohomological) degree q + p = 2 deg m + |S|.  The differential has
// bidegree (+1, 0), so each internal degree q is a finite complex of its own.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "startor/exactla.hpp"
#include "startor/fan.hpp"
#include "startor/simplicial.hpp"

namespace startor {

struct KoszulKey {
    std::uint64_t mask = 0;  // bit i-1 set <=> alpha_i present
    Monomial mono;
    auto operator<=>(const KoszulKey&) const = default;
};

class KoszulElement {
public:
    using TermMap = std::map<KoszulKey, mpz_class>;
    const TermMap& terms() const { return terms_; }
    TermMap& terms() { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    // total degree of a homogeneous element; nullopt for 0, throws on mixed degrees
    std::optional<long> total_degree() const;
    bool operator==(const KoszulElement&) const = default;

private:
    TermMap terms_;
};

long term_total_degree(const KoszulKey& key);
std::pair<long, long> term_bidegree(const KoszulKey& key);  // (p, q)

// Arithmetic home of Koszul elements: the complex, the characteristic
// matrix and the coefficients.  Monomials with support outside Sigma are
// dropped at every step; coefficients are kept canonical over k.
struct KoszulContext {
    SimplicialComplex sigma;
    CharacteristicMatrix lambda;
    Coefficients k;

    std::size_t n() const { return lambda.n(); }
    std::size_t m() const { return sigma.vertex_count(); }
    void validate() const;

    KoszulElement zero() const { return {}; }
    KoszulElement unit() const;
    KoszulElement alpha(std::size_t i) const;        // 1-based; throws RankMismatch
    KoszulElement monomial(const Monomial& m) const;

    void add_term(KoszulElement& el, std::uint64_t mask, const Monomial& m,
                  const mpz_class& c) const;
    KoszulElement add(const KoszulElement& a, const KoszulElement& b) const;
    KoszulElement scale(const KoszulElement& a, const mpz_class& c) const;
    KoszulElement monomial_times(const Monomial& m, const KoszulElement& a) const;

    // canonical (componentwise) product: exterior product times monomial product
    KoszulElement canonical_product(const KoszulElement& a, const KoszulElement& b) const;

    KoszulElement differential(const KoszulElement& el) const;

    std::string str(const KoszulElement& el) const;
};

struct TorTable {
    std::map<std::pair<long, long>, GradedPiece> entries;  // (p,q) -> nontrivial piece
    long max_total_degree = 0;
    std::string coefficients;

    std::map<long, GradedPiece> totals() const;  // aggregated per total degree
    bool operator==(const TorTable& o) const {
        return entries == o.entries && max_total_degree == o.max_total_degree;
    }
};

// Tor_{H^*(BL)}(k, k[Sigma]) in all bidegrees of total degree <= D, plus
// cohomology bases and cocycle reduction for those degrees.
class TorContext {
public:
    TorContext(KoszulContext kc, long max_total_degree);

    const KoszulContext& ctx() const { return kc_; }
    long max_total_degree() const { return D_; }

    const TorTable& table();

    struct ClassInfo {
        long p, q;
        KoszulElement representative;
        mpz_class annihilator;  // 0 for free classes
    };
    // basis of the degree-t cohomology, blocks ordered by q ascending
    const std::vector<ClassInfo>& basis(long t);
    // class coordinates of a cocycle of homogeneous total degree t
    // (aligned with basis(t); throws NotACocycle when d z != 0)
    std::vector<mpz_class> reduce(const KoszulElement& z, long t);
    std::vector<mpz_class> reduce(const KoszulElement& z);

    // chain module dimension per (s = exterior degree, e = monomial degree)
    std::size_t block_dim(long s, long e);

private:
    struct BlockId {
        long s, e;
        auto operator<=>(const BlockId&) const = default;
    };
    const std::vector<KoszulKey>& block_basis(long s, long e);
    const IntMatrix& block_diff(long s, long e);  // block(s,e) -> block(s-1,e+1)
    CohomologyBasis& bidegree(long s, long e);

    KoszulContext kc_;
    long D_;
    std::optional<TorTable> table_;
    std::map<BlockId, std::vector<KoszulKey>> bases_;
    std::map<BlockId, IntMatrix> diffs_;
    std::map<BlockId, std::unique_ptr<CohomologyBasis>> coh_;
    std::map<long, std::vector<ClassInfo>> degree_basis_;
};

}  // namespace startor
