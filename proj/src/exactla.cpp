#include "startor/exactla.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace startor {

namespace {
const mpz_class kZero = 0;
constexpr std::size_t kDenseLimit = 64 * 64;
}  // namespace

// ---------------------------------------------------------------- Coefficients

Coefficients Coefficients::prime_field(const mpz_class& p) {
    if (p <= 1 || mpz_probab_prime_p(p.get_mpz_t(), 40) == 0)
        throw error("PrimeField modulus must be prime, got " + p.get_str());
    return Coefficients(CoeffKind::PrimeField, p);
}

bool Coefficients::has_invertible_two() const {
    switch (kind_) {
        case CoeffKind::Integers: return false;
        case CoeffKind::Rationals: return true;
        case CoeffKind::PrimeField: return p_ != 2;
    }
    return false;
}

mpz_class Coefficients::canon(const mpz_class& x) const {
    if (kind_ != CoeffKind::PrimeField) return x;
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), p_.get_mpz_t());
    return r;
}

bool Coefficients::is_unit(const mpz_class& x) const {
    switch (kind_) {
        case CoeffKind::Integers: return x == 1 || x == -1;
        case CoeffKind::Rationals: return x != 0;
        case CoeffKind::PrimeField: return canon(x) != 0;
    }
    return false;
}

mpz_class Coefficients::inverse(const mpz_class& x) const {
    if (kind_ == CoeffKind::PrimeField) {
        mpz_class r, c = canon(x);
        if (c == 0 || mpz_invert(r.get_mpz_t(), c.get_mpz_t(), p_.get_mpz_t()) == 0)
            throw error("not a unit mod " + p_.get_str() + ": " + x.get_str());
        return r;
    }
    if (!is_unit(x)) throw error("not a unit: " + x.get_str());
    return x;  // +-1 over Z; over Q only +-1 is representable as an integer scalar here
}

std::string Coefficients::name() const {
    switch (kind_) {
        case CoeffKind::Integers: return "Z";
        case CoeffKind::Rationals: return "Q";
        case CoeffKind::PrimeField: return "F_" + p_.get_str();
    }
    return "?";
}

// ------------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), dense_(rows * cols <= kDenseLimit) {
    if (dense_) d_.assign(rows_ * cols_, mpz_class(0));
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
    std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw DimensionMismatch("ragged row in matrix literal");
        for (std::size_t j = 0; j < c; ++j)
            if (rows[i][j] != 0) m.set(i, j, rows[i][j]);
    }
    return m;
}

const mpz_class& IntMatrix::get(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    if (dense_) return d_[i * cols_ + j];
    auto it = s_.find({i, j});
    return it == s_.end() ? kZero : it->second;
}

void IntMatrix::set(std::size_t i, std::size_t j, const mpz_class& v) {
    assert(i < rows_ && j < cols_);
    if (dense_) {
        d_[i * cols_ + j] = v;
    } else if (v == 0) {
        s_.erase({i, j});
    } else {
        s_[{i, j}] = v;
    }
}

void IntMatrix::add_at(std::size_t i, std::size_t j, const mpz_class& v) {
    if (v == 0) return;
    if (dense_) {
        d_[i * cols_ + j] += v;
    } else {
        auto [it, fresh] = s_.try_emplace({i, j}, v);
        if (!fresh) {
            it->second += v;
            if (it->second == 0) s_.erase(it);
        }
    }
}

void IntMatrix::for_each_nonzero(
    const std::function<void(std::size_t, std::size_t, const mpz_class&)>& f) const {
    if (dense_) {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (d_[i * cols_ + j] != 0) f(i, j, d_[i * cols_ + j]);
    } else {
        for (const auto& [ij, v] : s_) f(ij.first, ij.second, v);
    }
}

void IntMatrix::for_each_in_row(std::size_t i,
                                const std::function<void(std::size_t, const mpz_class&)>& f) const {
    if (dense_) {
        for (std::size_t j = 0; j < cols_; ++j)
            if (d_[i * cols_ + j] != 0) f(j, d_[i * cols_ + j]);
    } else {
        for (auto it = s_.lower_bound({i, 0}); it != s_.end() && it->first.first == i; ++it)
            f(it->first.second, it->second);
    }
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw DimensionMismatch("matrix product shape mismatch");
    IntMatrix r(rows_, o.cols_);
    for_each_nonzero([&](std::size_t i, std::size_t k, const mpz_class& a) {
        o.for_each_in_row(k, [&](std::size_t j, const mpz_class& b) { r.add_at(i, j, a * b); });
    });
    return r;
}

std::vector<mpz_class> IntMatrix::apply(const std::vector<mpz_class>& v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix-vector shape mismatch");
    std::vector<mpz_class> r(rows_, mpz_class(0));
    for_each_nonzero([&](std::size_t i, std::size_t j, const mpz_class& a) { r[i] += a * v[j]; });
    return r;
}

IntMatrix IntMatrix::transposed() const {
    IntMatrix r(cols_, rows_);
    for_each_nonzero([&](std::size_t i, std::size_t j, const mpz_class& a) { r.set(j, i, a); });
    return r;
}

IntMatrix IntMatrix::canon(const Coefficients& k) const {
    IntMatrix r(rows_, cols_);
    for_each_nonzero([&](std::size_t i, std::size_t j, const mpz_class& a) { r.set(i, j, k.canon(a)); });
    return r;
}

bool IntMatrix::is_zero() const {
    bool z = true;
    for_each_nonzero([&](std::size_t, std::size_t, const mpz_class&) { z = false; });
    return z;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (get(i, j) != o.get(i, j)) return false;
    return true;
}

std::vector<mpz_class> IntMatrix::col(std::size_t j) const {
    std::vector<mpz_class> r(rows_);
    for (std::size_t i = 0; i < rows_; ++i) r[i] = get(i, j);
    return r;
}

std::vector<mpz_class> IntMatrix::row(std::size_t i) const {
    std::vector<mpz_class> r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = get(i, j);
    return r;
}

// --------------------------------------------------------------------- SNF

namespace {

// Sparse elimination workspace: row maps plus column support sets.
struct Work {
    std::size_t nr, nc;
    std::vector<std::map<std::size_t, mpz_class>> rows;
    std::vector<std::set<std::size_t>> colsup;

    explicit Work(const IntMatrix& M) : nr(M.rows()), nc(M.cols()), rows(nr), colsup(nc) {
        M.for_each_nonzero([&](std::size_t i, std::size_t j, const mpz_class& v) {
            rows[i][j] = v;
            colsup[j].insert(i);
        });
    }

    const mpz_class& at(std::size_t i, std::size_t j) const {
        auto it = rows[i].find(j);
        return it == rows[i].end() ? kZero : it->second;
    }
    void put(std::size_t i, std::size_t j, const mpz_class& v) {
        if (v == 0) {
            rows[i].erase(j);
            colsup[j].erase(i);
        } else {
            rows[i][j] = v;
            colsup[j].insert(i);
        }
    }
    void add(std::size_t i, std::size_t j, const mpz_class& v) {
        if (v == 0) return;
        auto [it, fresh] = rows[i].try_emplace(j, v);
        if (fresh) {
            colsup[j].insert(i);
        } else {
            it->second += v;
            if (it->second == 0) {
                rows[i].erase(it);
                colsup[j].erase(i);
            }
        }
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (auto& [j, v] : rows[a]) colsup[j].erase(a);
        for (auto& [j, v] : rows[b]) colsup[j].erase(b);
        std::swap(rows[a], rows[b]);
        for (auto& [j, v] : rows[a]) colsup[j].insert(a);
        for (auto& [j, v] : rows[b]) colsup[j].insert(b);
    }

    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        std::set<std::size_t> touched = colsup[a];
        touched.insert(colsup[b].begin(), colsup[b].end());
        for (std::size_t i : touched) {
            mpz_class va = at(i, a), vb = at(i, b);
            put(i, a, vb);
            put(i, b, va);
        }
    }

    // row_i += c * row_k
    void row_op(std::size_t i, std::size_t k, const mpz_class& c) {
        if (c == 0) return;
        std::vector<std::pair<std::size_t, mpz_class>> src(rows[k].begin(), rows[k].end());
        for (auto& [j, v] : src) add(i, j, c * v);
    }
    // col_j += c * col_l
    void col_op(std::size_t j, std::size_t l, const mpz_class& c) {
        if (c == 0) return;
        std::vector<std::size_t> src(colsup[l].begin(), colsup[l].end());
        for (std::size_t i : src) add(i, j, c * at(i, l));
    }
    void negate_row(std::size_t i) {
        for (auto& [j, v] : rows[i]) v = -v;
    }
};

// Transform accumulators (dense; only built on request).
struct Transforms {
    bool on = false;
    IntMatrix S, Sinv, T, Tinv;
    void init(std::size_t nr, std::size_t nc) {
        on = true;
        S = IntMatrix::identity(nr);
        Sinv = IntMatrix::identity(nr);
        T = IntMatrix::identity(nc);
        Tinv = IntMatrix::identity(nc);
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (!on || a == b) return;
        for (std::size_t j = 0; j < S.cols(); ++j) {
            mpz_class t = S.get(a, j); S.set(a, j, S.get(b, j)); S.set(b, j, t);
        }
        for (std::size_t i = 0; i < Sinv.rows(); ++i) {
            mpz_class t = Sinv.get(i, a); Sinv.set(i, a, Sinv.get(i, b)); Sinv.set(i, b, t);
        }
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (!on || a == b) return;
        for (std::size_t i = 0; i < T.rows(); ++i) {
            mpz_class t = T.get(i, a); T.set(i, a, T.get(i, b)); T.set(i, b, t);
        }
        for (std::size_t j = 0; j < Tinv.cols(); ++j) {
            mpz_class t = Tinv.get(a, j); Tinv.set(a, j, Tinv.get(b, j)); Tinv.set(b, j, t);
        }
    }
    void row_op(std::size_t i, std::size_t k, const mpz_class& c) {  // row_i += c*row_k
        if (!on || c == 0) return;
        for (std::size_t j = 0; j < S.cols(); ++j) S.add_at(i, j, c * S.get(k, j));
        for (std::size_t r = 0; r < Sinv.rows(); ++r) Sinv.add_at(r, k, -c * Sinv.get(r, i));
    }
    void col_op(std::size_t j, std::size_t l, const mpz_class& c) {  // col_j += c*col_l
        if (!on || c == 0) return;
        for (std::size_t i = 0; i < T.rows(); ++i) T.add_at(i, j, c * T.get(i, l));
        for (std::size_t cc = 0; cc < Tinv.cols(); ++cc) Tinv.add_at(l, cc, -c * Tinv.get(j, cc));
    }
    void negate_row(std::size_t i) {
        if (!on) return;
        for (std::size_t j = 0; j < S.cols(); ++j) S.set(i, j, -S.get(i, j));
        for (std::size_t r = 0; r < Sinv.rows(); ++r) Sinv.set(r, i, -Sinv.get(r, i));
    }
};

// nearest-integer quotient keeps remainders small during elimination
mpz_class quot_nearest(const mpz_class& a, const mpz_class& b) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_class babs = abs(b);
    if (2 * r > babs) q += 1;
    return q;
}

}  // namespace

SnfDecomposition smith_normal_form(const IntMatrix& M, bool with_transforms) {
    const std::size_t nr = M.rows(), nc = M.cols();
    Work w(M);
    Transforms tf;
    if (with_transforms) tf.init(nr, nc);

    std::size_t k = 0;
    const std::size_t kmax = std::min(nr, nc);
    while (k < kmax) {
        // pivot: smallest |value| in the remaining block, ties by least fill
        bool found = false;
        std::size_t pi = 0, pj = 0;
        mpz_class pv;
        std::size_t pfill = 0;
        for (std::size_t i = k; i < nr; ++i) {
            for (const auto& [j, v] : w.rows[i]) {
                if (j < k) continue;
                mpz_class a = abs(v);
                std::size_t fill = (w.rows[i].size() - 1) * (w.colsup[j].size() - 1);
                if (!found || a < pv || (a == pv && fill < pfill)) {
                    found = true; pi = i; pj = j; pv = a; pfill = fill;
                }
            }
        }
        if (!found) break;

        w.swap_rows(k, pi); tf.swap_rows(k, pi);
        w.swap_cols(k, pj); tf.swap_cols(k, pj);

        for (;;) {
            // clear column k
            bool again = false;
            mpz_class piv = w.at(k, k);
            std::vector<std::size_t> below(w.colsup[k].begin(), w.colsup[k].end());
            for (std::size_t i : below) {
                if (i == k) continue;
                mpz_class q = quot_nearest(w.at(i, k), piv);
                w.row_op(i, k, -q); tf.row_op(i, k, -q);
                if (w.at(i, k) != 0) {
                    // remainder is strictly smaller than the pivot: promote it
                    w.swap_rows(k, i); tf.swap_rows(k, i);
                    again = true;
                    break;
                }
            }
            if (again) continue;
            // clear row k
            piv = w.at(k, k);
            std::vector<std::size_t> right;
            for (const auto& [j, v] : w.rows[k])
                if (j != k) right.push_back(j);
            for (std::size_t j : right) {
                mpz_class q = quot_nearest(w.at(k, j), piv);
                w.col_op(j, k, -q); tf.col_op(j, k, -q);
                if (w.at(k, j) != 0) {
                    w.swap_cols(k, j); tf.swap_cols(k, j);
                    again = true;
                    break;
                }
            }
            if (again) continue;

            // divisibility: pivot must divide every remaining entry
            piv = w.at(k, k);
            bool fixed = true;
            for (std::size_t i = k + 1; i < nr && fixed; ++i) {
                for (const auto& [j, v] : w.rows[i]) {
                    if (j <= k) continue;
                    if (!mpz_divisible_p(v.get_mpz_t(), piv.get_mpz_t())) {
                        w.row_op(k, i, 1); tf.row_op(k, i, 1);
                        fixed = false;
                        break;
                    }
                }
            }
            if (fixed) break;
        }

        if (w.at(k, k) < 0) {
            w.negate_row(k); tf.negate_row(k);
        }
        ++k;
    }

    SnfDecomposition out;
    out.with_transforms = with_transforms;
    out.D = IntMatrix(nr, nc);
    for (std::size_t i = 0; i < k; ++i) {
        out.D.set(i, i, w.at(i, i));
        out.invariant_factors.push_back(w.at(i, i));
    }
    if (with_transforms) {
        out.S = std::move(tf.S);
        out.Sinv = std::move(tf.Sinv);
        out.T = std::move(tf.T);
        out.Tinv = std::move(tf.Tinv);
    }
    return out;
}

// --------------------------------------------------------------- rank, pieces

namespace {

// rank of M mod p by sparse elimination; entries stay reduced
std::size_t rank_mod_p(const IntMatrix& M, const mpz_class& p) {
    Work w(M.canon(Coefficients::prime_field(p)));
    std::size_t rank = 0;
    const std::size_t nr = w.nr, nc = w.nc;
    std::size_t k = 0;
    while (k < std::min(nr, nc)) {
        bool found = false;
        std::size_t pi = 0, pj = 0, pfill = 0;
        for (std::size_t i = k; i < nr; ++i) {
            for (const auto& [j, v] : w.rows[i]) {
                if (j < k) continue;
                std::size_t fill = (w.rows[i].size() - 1) * (w.colsup[j].size() - 1);
                if (!found || fill < pfill) { found = true; pi = i; pj = j; pfill = fill; }
            }
        }
        if (!found) break;
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);
        mpz_class inv;
        mpz_class piv = w.at(k, k);
        mpz_invert(inv.get_mpz_t(), piv.get_mpz_t(), p.get_mpz_t());
        std::vector<std::size_t> below(w.colsup[k].begin(), w.colsup[k].end());
        for (std::size_t i : below) {
            if (i == k) continue;
            mpz_class f = (w.at(i, k) * inv) % p;
            std::vector<std::pair<std::size_t, mpz_class>> src(w.rows[k].begin(), w.rows[k].end());
            for (auto& [j, v] : src) {
                mpz_class nv = (w.at(i, j) - f * v) % p;
                if (nv < 0) nv += p;
                w.put(i, j, nv);
            }
        }
        ++rank;
        ++k;
    }
    return rank;
}

}  // namespace

std::size_t rank_over(const IntMatrix& M, const Coefficients& k) {
    if (k.kind() == CoeffKind::PrimeField) return rank_mod_p(M, k.prime());
    return smith_normal_form(M, false).rank();  // rank over Z equals rank over Q
}

std::string GradedPiece::str(const Coefficients& k) const {
    if (trivial()) return "0";
    std::ostringstream os;
    std::string base = k.name();
    bool first = true;
    if (free_rank > 0) {
        os << base;
        if (free_rank > 1) os << "^" << free_rank;
        first = false;
    }
    for (const auto& d : torsion) {
        if (!first) os << "+";
        os << "Z_" << d.get_str();
        first = false;
    }
    return os.str();
}

namespace {

std::vector<std::pair<mpz_class, unsigned>> factorize_small(mpz_class n) {
    std::vector<std::pair<mpz_class, unsigned>> out;
    for (mpz_class d = 2; d * d <= n; d == 2 ? d = 3 : d += 2) {
        unsigned e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) { n /= d; ++e; }
        if (e) out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

}  // namespace

GradedPiece direct_sum(const GradedPiece& a, const GradedPiece& b) {
    GradedPiece r;
    r.free_rank = a.free_rank + b.free_rank;
    if (a.torsion.empty()) { r.torsion = b.torsion; return r; }
    if (b.torsion.empty()) { r.torsion = a.torsion; return r; }
    // rebuild the invariant-factor chain from prime powers
    std::map<mpz_class, std::vector<unsigned>> powers;  // prime -> exponents, descending
    for (const auto& list : {a.torsion, b.torsion})
        for (const auto& f : list)
            for (const auto& [p, e] : factorize_small(f)) powers[p].push_back(e);
    std::size_t chain_len = 0;
    for (auto& [p, es] : powers) {
        std::sort(es.rbegin(), es.rend());
        chain_len = std::max(chain_len, es.size());
    }
    std::vector<mpz_class> chain(chain_len, mpz_class(1));
    for (auto& [p, es] : powers)
        for (std::size_t i = 0; i < es.size(); ++i) {
            mpz_class pw;
            mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), es[i]);
            chain[i] *= pw;
        }
    // chain[0] is largest; invariant factors ascend
    std::reverse(chain.begin(), chain.end());
    r.torsion = std::move(chain);
    return r;
}

GradedPiece cohomology_at(const IntMatrix& d_in, const IntMatrix& d_out, const Coefficients& k) {
    if (d_out.cols() != d_in.rows())
        throw DimensionMismatch("cohomology_at: d_out.cols != d_in.rows");
    if (!(d_out * d_in).canon(k).is_zero())
        throw CompositionNotZero("cohomology_at: d_out * d_in != 0 over " + k.name());
    const std::size_t mid = d_in.rows();
    GradedPiece r;
    if (k.kind() == CoeffKind::Integers) {
        auto snfA = smith_normal_form(d_in, false);
        std::size_t rank_b = smith_normal_form(d_out, false).rank();
        r.free_rank = static_cast<long>(mid - rank_b - snfA.rank());
        for (const auto& d : snfA.invariant_factors)
            if (d > 1) r.torsion.push_back(d);
    } else {
        std::size_t ra = rank_over(d_in, k), rb = rank_over(d_out, k);
        r.free_rank = static_cast<long>(mid - rb - ra);
    }
    return r;
}

IntMatrix kernel_basis(const IntMatrix& M, const Coefficients& k) {
    auto snf = smith_normal_form(M.canon(k), true);
    std::vector<std::size_t> pos;
    for (std::size_t j = 0; j < M.cols(); ++j) {
        mpz_class d = j < std::min(M.rows(), M.cols()) ? snf.D.get(j, j) : mpz_class(0);
        if (k.is_zero(d)) pos.push_back(j);
    }
    IntMatrix K(M.cols(), pos.size());
    for (std::size_t c = 0; c < pos.size(); ++c)
        for (std::size_t i = 0; i < M.cols(); ++i)
            K.set(i, c, k.canon(snf.T.get(i, pos[c])));
    return K;
}

std::optional<std::vector<mpq_class>> solve_in_image(const IntMatrix& M,
                                                     const std::vector<mpz_class>& v,
                                                     const Coefficients& k) {
    if (v.size() != M.rows()) throw DimensionMismatch("solve_in_image: vector length");
    auto snf = smith_normal_form(M.canon(k), true);
    std::vector<mpz_class> sv = snf.S.apply(v);
    const std::size_t n = M.cols(), m = M.rows();
    std::vector<mpq_class> y(n, mpq_class(0));
    for (std::size_t i = 0; i < m; ++i) {
        mpz_class d = (i < std::min(m, n)) ? snf.D.get(i, i) : mpz_class(0);
        if (k.kind() == CoeffKind::PrimeField) {
            mpz_class rhs = k.canon(sv[i]);
            if (k.is_zero(d)) {
                if (rhs != 0) return std::nullopt;
            } else if (i < n) {
                y[i] = mpq_class(k.canon(rhs * k.inverse(d)));
            }
        } else if (d == 0) {
            if (sv[i] != 0) return std::nullopt;
        } else {
            if (k.kind() == CoeffKind::Integers && !mpz_divisible_p(sv[i].get_mpz_t(), d.get_mpz_t()))
                return std::nullopt;
            y[i] = mpq_class(sv[i]) / mpq_class(d);
            y[i].canonicalize();
        }
    }
    std::vector<mpq_class> x(n, mpq_class(0));
    for (std::size_t i = 0; i < n; ++i) {
        mpq_class acc = 0;
        for (std::size_t j = 0; j < n; ++j) acc += mpq_class(snf.T.get(i, j)) * y[j];
        if (k.kind() == CoeffKind::PrimeField) {
            assert(acc.get_den() == 1);
            acc = mpq_class(k.canon(acc.get_num()));
        }
        x[i] = acc;
    }
    return x;
}

// ------------------------------------------------------------ CohomologyBasis

CohomologyBasis::CohomologyBasis(const IntMatrix& d_in, const IntMatrix& d_out,
                                 const Coefficients& k)
    : k_(k), mid_(d_in.rows()), d_out_(d_out.canon(k)) {
    if (d_out.cols() != d_in.rows())
        throw DimensionMismatch("CohomologyBasis: d_out.cols != d_in.rows");
    IntMatrix A = d_in.canon(k);
    if (!(d_out_ * A).canon(k).is_zero())
        throw CompositionNotZero("CohomologyBasis: d_out * d_in != 0 over " + k.name());

    snfB_ = smith_normal_form(d_out_, true);
    for (std::size_t j = 0; j < mid_; ++j) {
        mpz_class d =
            j < std::min(d_out_.rows(), mid_) ? snfB_.D.get(j, j) : mpz_class(0);
        if (k.is_zero(d)) ker_pos_.push_back(j);
    }
    const std::size_t kdim = ker_pos_.size();

    // d_in expressed in kernel coordinates
    IntMatrix U = snfB_.Tinv * A;
    IntMatrix C(kdim, A.cols());
    for (std::size_t r = 0; r < kdim; ++r)
        for (std::size_t c = 0; c < A.cols(); ++c) C.set(r, c, k.canon(U.get(ker_pos_[r], c)));
    snfC_ = smith_normal_form(C, true);

    for (std::size_t i = 0; i < kdim; ++i) {
        mpz_class d = i < snfC_.invariant_factors.size() ? snfC_.invariant_factors[i] : mpz_class(0);
        if (!k.is_zero(d) && k.is_unit(d)) continue;  // class killed by the image
        ClassInfo ci;
        ci.annihilator = k.is_zero(d) ? mpz_class(0) : d;
        // representative: kernel basis times column i of Sinv_C
        ci.rep.assign(mid_, mpz_class(0));
        for (std::size_t r = 0; r < kdim; ++r) {
            const mpz_class& c = snfC_.Sinv.get(r, i);
            if (c == 0) continue;
            for (std::size_t row = 0; row < mid_; ++row)
                ci.rep[row] += c * snfB_.T.get(row, ker_pos_[r]);
        }
        for (auto& x : ci.rep) x = k.canon(x);
        classes_.push_back(std::move(ci));
        class_src_.push_back(i);
    }
}

std::vector<mpz_class> CohomologyBasis::reduce(const std::vector<mpz_class>& v) const {
    if (v.size() != mid_) throw DimensionMismatch("reduce: vector length");
    std::vector<mpz_class> bv = d_out_.apply(v);
    for (const auto& x : bv)
        if (!k_.is_zero(x)) throw NotACocycle("reduce: vector is not in the kernel");

    std::vector<mpz_class> u = snfB_.Tinv.apply(v);
    const std::size_t kdim = ker_pos_.size();
    std::vector<mpz_class> uk(kdim);
    {
        std::size_t r = 0;
        std::set<std::size_t> kerset(ker_pos_.begin(), ker_pos_.end());
        for (std::size_t j = 0; j < mid_; ++j) {
            if (kerset.count(j)) {
                uk[r++] = u[j];
            } else if (k_.kind() == CoeffKind::Integers && u[j] != 0) {
                throw NotACocycle("reduce: vector is not in the kernel over Z");
            } else if (k_.kind() == CoeffKind::PrimeField && !k_.is_zero(u[j])) {
                throw NotACocycle("reduce: vector is not in the kernel mod p");
            }
        }
    }
    // coordinates in the SNF-adapted kernel basis
    std::vector<mpz_class> c = snfC_.S.apply(uk);
    std::vector<mpz_class> out(classes_.size());
    for (std::size_t i = 0; i < classes_.size(); ++i) {
        const mpz_class& ann = classes_[i].annihilator;
        mpz_class val = c[class_src_[i]];
        if (ann != 0) {
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), val.get_mpz_t(), ann.get_mpz_t());
            out[i] = r;
        } else {
            out[i] = k_.canon(val);
        }
    }
    return out;
}

GradedPiece CohomologyBasis::piece() const {
    GradedPiece p;
    for (const auto& c : classes_) {
        if (c.annihilator == 0)
            ++p.free_rank;
        else
            p.torsion.push_back(c.annihilator);
    }
    return p;
}

}  // namespace startor
