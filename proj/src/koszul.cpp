#include "startor/koszul.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace startor {

long term_total_degree(const KoszulKey& key) {
    return 2 * key.mono.degree() + std::popcount(key.mask);
}

std::pair<long, long> term_bidegree(const KoszulKey& key) {
    long s = std::popcount(key.mask);
    return {-s, 2 * key.mono.degree() + 2 * s};
}

std::optional<long> KoszulElement::total_degree() const {
    std::optional<long> t;
    for (const auto& [key, c] : terms_) {
        long d = term_total_degree(key);
        if (!t)
            t = d;
        else if (*t != d)
            throw error("element is not homogeneous in total degree");
    }
    return t;
}

void KoszulContext::validate() const {
    if (lambda.m() != sigma.vertex_count())
        throw DimensionMismatch("characteristic matrix has " + std::to_string(lambda.m()) +
                                " columns for " + std::to_string(sigma.vertex_count()) +
                                " vertices");
}

KoszulElement KoszulContext::unit() const {
    KoszulElement e;
    add_term(e, 0, Monomial(m()), 1);
    return e;
}

KoszulElement KoszulContext::alpha(std::size_t i) const {
    if (i < 1 || i > n()) throw RankMismatch("alpha index out of range: " + std::to_string(i));
    KoszulElement e;
    add_term(e, std::uint64_t(1) << (i - 1), Monomial(m()), 1);
    return e;
}

KoszulElement KoszulContext::monomial(const Monomial& mo) const {
    KoszulElement e;
    add_term(e, 0, mo, 1);
    return e;
}

void KoszulContext::add_term(KoszulElement& el, std::uint64_t mask, const Monomial& mo,
                             const mpz_class& c) const {
    if (mask >> n()) throw RankMismatch("exterior index exceeds rank");
    if (!sigma.is_face(mo.support())) return;  // zero in k[Sigma]
    mpz_class v = k.canon(c);
    if (v == 0) return;
    KoszulKey key{mask, mo};
    auto& slot = el.terms()[key];
    slot = k.canon(slot + v);
    if (slot == 0) el.terms().erase(key);
}

KoszulElement KoszulContext::add(const KoszulElement& a, const KoszulElement& b) const {
    KoszulElement r = a;
    for (const auto& [key, c] : b.terms()) add_term(r, key.mask, key.mono, c);
    return r;
}

KoszulElement KoszulContext::scale(const KoszulElement& a, const mpz_class& c) const {
    KoszulElement r;
    for (const auto& [key, v] : a.terms()) add_term(r, key.mask, key.mono, v * c);
    return r;
}

KoszulElement KoszulContext::monomial_times(const Monomial& mo, const KoszulElement& a) const {
    KoszulElement r;
    for (const auto& [key, v] : a.terms()) add_term(r, key.mask, key.mono.times(mo), v);
    return r;
}

KoszulElement KoszulContext::canonical_product(const KoszulElement& a,
                                               const KoszulElement& b) const {
    KoszulElement r;
    for (const auto& [ka, ca] : a.terms()) {
        for (const auto& [kb, cb] : b.terms()) {
            if (ka.mask & kb.mask) continue;
            // sign of sorting alpha_A ^ alpha_B: count inversions between the masks
            int sign = 0;
            std::uint64_t rest = kb.mask;
            while (rest) {
                std::uint64_t bit = rest & (~rest + 1);
                sign += std::popcount(ka.mask & ~(bit - 1) & ~bit);
                rest &= rest - 1;
            }
            mpz_class c = ca * cb;
            if (sign % 2) c = -c;
            add_term(r, ka.mask | kb.mask, ka.mono.times(kb.mono), c);
        }
    }
    return r;
}

KoszulElement KoszulContext::differential(const KoszulElement& el) const {
    KoszulElement r;
    for (const auto& [key, c] : el.terms()) {
        if (key.mask >> n()) throw RankMismatch("exterior index exceeds rank");
        int pos = 0;  // 0-based position of alpha_i within the sorted subset
        for (std::size_t i = 0; i < n(); ++i) {
            std::uint64_t bit = std::uint64_t(1) << i;
            if (!(key.mask & bit)) continue;
            // d alpha_{i+1} = -sum_v Lambda[i][v] t_v, Leibniz sign (-1)^pos
            for (std::size_t v = 0; v < m(); ++v) {
                const mpz_class& lam = lambda.mat.get(i, v);
                if (lam == 0) continue;
                mpz_class coeff = -lam * c;
                if (pos % 2) coeff = -coeff;
                add_term(r, key.mask & ~bit, key.mono.times_var(v), coeff);
            }
            ++pos;
        }
    }
    return r;
}

std::string KoszulContext::str(const KoszulElement& el) const {
    if (el.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : el.terms()) {
        mpz_class coeff = c;
        if (!first) {
            os << (coeff < 0 ? " - " : " + ");
            if (coeff < 0) coeff = -coeff;
        } else if (coeff < 0) {
            os << "-";
            coeff = -coeff;
        }
        first = false;
        std::vector<std::string> parts;
        if (coeff != 1 || (key.mask == 0 && key.mono.is_one())) parts.push_back(coeff.get_str());
        for (std::size_t i = 0; i < n(); ++i)
            if (key.mask & (std::uint64_t(1) << i)) parts.push_back("a" + std::to_string(i + 1));
        if (!key.mono.is_one()) parts.push_back(key.mono.str(sigma.vertices()));
        for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "*" : "") << parts[i];
    }
    return os.str();
}

// -------------------------------------------------------------------- TorTable

std::map<long, GradedPiece> TorTable::totals() const {
    std::map<long, GradedPiece> out;
    for (const auto& [pq, piece] : entries) {
        long t = pq.first + pq.second;
        auto it = out.find(t);
        if (it == out.end())
            out[t] = piece;
        else
            it->second = direct_sum(it->second, piece);
    }
    return out;
}

// ------------------------------------------------------------------ TorContext

TorContext::TorContext(KoszulContext kc, long max_total_degree)
    : kc_(std::move(kc)), D_(max_total_degree) {
    kc_.validate();
    if (D_ < 0) throw DegreeOutOfRange("max total degree must be >= 0");
    if (kc_.n() >= 32) throw TooLarge("rank of L too large for exterior enumeration");
}

const std::vector<KoszulKey>& TorContext::block_basis(long s, long e) {
    BlockId id{s, e};
    auto it = bases_.find(id);
    if (it != bases_.end()) return it->second;
    std::vector<KoszulKey> basis;
    if (s >= 0 && e >= 0 && s <= static_cast<long>(kc_.n())) {
        auto monos = face_ring_basis(kc_.sigma, e);
        if (!monos.empty()) {
            // popcount-s masks in increasing numeric order (Gosper)
            const std::uint64_t top = std::uint64_t(1) << kc_.n();
            std::uint64_t mask = s == 0 ? 0 : (std::uint64_t(1) << s) - 1;
            for (;;) {
                for (const auto& mo : monos) basis.push_back(KoszulKey{mask, mo});
                if (s == 0) break;
                std::uint64_t u = mask & (~mask + 1);
                std::uint64_t v = mask + u;
                if (v >= top) break;
                mask = v | (((v ^ mask) / u) >> 2);
            }
            std::sort(basis.begin(), basis.end());
        }
    }
    return bases_.emplace(id, std::move(basis)).first->second;
}

std::size_t TorContext::block_dim(long s, long e) { return block_basis(s, e).size(); }

const IntMatrix& TorContext::block_diff(long s, long e) {
    BlockId id{s, e};
    auto it = diffs_.find(id);
    if (it != diffs_.end()) return it->second;
    const auto& src = block_basis(s, e);
    const auto& dst = block_basis(s - 1, e + 1);
    IntMatrix mat(dst.size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
        KoszulElement el;
        kc_.add_term(el, src[j].mask, src[j].mono, 1);
        KoszulElement d = kc_.differential(el);
        for (const auto& [key, c] : d.terms()) {
            auto pos = std::lower_bound(dst.begin(), dst.end(), key);
            if (pos == dst.end() || !(*pos == key))
                throw error("internal: differential image outside target block");
            mat.add_at(pos - dst.begin(), j, c);
        }
    }
    return diffs_.emplace(id, std::move(mat)).first->second;
}

CohomologyBasis& TorContext::bidegree(long s, long e) {
    BlockId id{s, e};
    auto it = coh_.find(id);
    if (it != coh_.end()) return *it->second;
    auto basis = std::make_unique<CohomologyBasis>(block_diff(s + 1, e - 1), block_diff(s, e),
                                                   kc_.k);
    return *coh_.emplace(id, std::move(basis)).first->second;
}

const TorTable& TorContext::table() {
    if (table_) return *table_;
    TorTable t;
    t.max_total_degree = D_;
    t.coefficients = kc_.k.name();
    for (long total = 0; total <= D_; ++total) {
        for (long s = 0; s <= std::min<long>(kc_.n(), total); ++s) {
            if ((total - s) % 2) continue;
            long e = (total - s) / 2;
            if (block_dim(s, e) == 0) continue;
            GradedPiece piece =
                cohomology_at(block_diff(s + 1, e - 1), block_diff(s, e), kc_.k);
            if (!piece.trivial()) t.entries[{-s, 2 * e + 2 * s}] = piece;
        }
    }
    table_ = std::move(t);
    return *table_;
}

const std::vector<TorContext::ClassInfo>& TorContext::basis(long t) {
    if (t < 0 || t > D_) throw DegreeOutOfRange("degree " + std::to_string(t) + " exceeds table range");
    auto it = degree_basis_.find(t);
    if (it != degree_basis_.end()) return it->second;
    std::vector<ClassInfo> out;
    // blocks by q ascending, i.e. s ascending since q = t + s
    for (long s = 0; s <= std::min<long>(kc_.n(), t); ++s) {
        if ((t - s) % 2) continue;
        long e = (t - s) / 2;
        if (block_dim(s, e) == 0) continue;
        auto& cb = bidegree(s, e);
        const auto& keys = block_basis(s, e);
        for (std::size_t i = 0; i < cb.class_count(); ++i) {
            ClassInfo ci;
            ci.p = -s;
            ci.q = 2 * e + 2 * s;
            ci.annihilator = cb.annihilator(i);
            const auto& rep = cb.representative(i);
            for (std::size_t r = 0; r < keys.size(); ++r)
                kc_.add_term(ci.representative, keys[r].mask, keys[r].mono, rep[r]);
            out.push_back(std::move(ci));
        }
    }
    return degree_basis_.emplace(t, std::move(out)).first->second;
}

std::vector<mpz_class> TorContext::reduce(const KoszulElement& z, long t) {
    if (t < 0 || t > D_) throw DegreeOutOfRange("degree " + std::to_string(t) + " exceeds table range");
    auto deg = z.total_degree();
    if (deg && *deg != t) throw error("element degree does not match requested degree");
    if (!kc_.differential(z).is_zero())
        throw NotACocycle("element is not a cocycle: d z = " +
                          kc_.str(kc_.differential(z)));
    basis(t);  // ensure per-bidegree data exists in the same order
    std::vector<mpz_class> out;
    for (long s = 0; s <= std::min<long>(kc_.n(), t); ++s) {
        if ((t - s) % 2) continue;
        long e = (t - s) / 2;
        if (block_dim(s, e) == 0) continue;
        const auto& keys = block_basis(s, e);
        std::vector<mpz_class> v(keys.size(), mpz_class(0));
        for (const auto& [key, c] : z.terms()) {
            if (std::popcount(key.mask) != s || key.mono.degree() != e) continue;
            auto pos = std::lower_bound(keys.begin(), keys.end(), key);
            v[pos - keys.begin()] = c;
        }
        auto coords = bidegree(s, e).reduce(v);
        out.insert(out.end(), coords.begin(), coords.end());
    }
    return out;
}

std::vector<mpz_class> TorContext::reduce(const KoszulElement& z) {
    auto deg = z.total_degree();
    if (!deg) throw error("cannot infer the degree of the zero element; use reduce(z, t)");
    return reduce(z, *deg);
}

}  // namespace startor
