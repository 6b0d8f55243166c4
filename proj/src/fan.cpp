#include "startor/fan.hpp"

#include <algorithm>
#include <set>

namespace startor {

bool CharacteristicMatrix::is_identity() const {
    if (n() != m()) return false;
    return mat == IntMatrix::identity(n());
}

std::vector<mpz_class> primitivize(std::vector<mpz_class> v) {
    mpz_class g = 0;
    for (const auto& x : v) g = gcd(g, x);
    if (g == 0) throw ZeroVector("primitivize: zero vector");
    for (auto& x : v) x /= g;
    return v;
}

bool columns_extend_to_basis(const CharacteristicMatrix& L,
                             const std::vector<std::size_t>& cols, const Coefficients& k) {
    if (cols.empty()) return true;
    IntMatrix sub(L.n(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c] >= L.m()) throw DimensionMismatch("column index out of range");
        for (std::size_t i = 0; i < L.n(); ++i) sub.set(i, c, L.mat.get(i, cols[c]));
    }
    auto snf = smith_normal_form(sub, false);
    std::size_t units = 0;
    for (const auto& d : snf.invariant_factors)
        if (k.is_unit(d)) ++units;
    return units == cols.size();
}

Fan::Fan(std::size_t ambient_dim, std::vector<std::vector<mpz_class>> rays,
         std::vector<std::vector<std::size_t>> cones)
    : n_(ambient_dim), rays_(std::move(rays)), cones_(std::move(cones)) {
    for (const auto& r : rays_) {
        if (r.size() != n_) throw DimensionMismatch("ray dimension != ambient dimension");
        mpz_class g = 0;
        for (const auto& x : r) g = gcd(g, x);
        if (g == 0) throw ZeroVector("zero ray");
        if (g != 1 && g != -1) throw error("ray is not primitive (gcd " + g.get_str() + ")");
    }
    for (const auto& c : cones_) {
        std::set<std::size_t> seen;
        for (auto i : c) {
            if (i >= rays_.size()) throw error("cone references unknown ray index");
            if (!seen.insert(i).second) throw error("repeated ray in cone");
        }
    }
    rebuild_derived();
    // rays of each cone must be linearly independent over Q
    auto q = Coefficients::rationals();
    for (const auto& c : cones_) {
        if (c.empty()) continue;
        IntMatrix sub(n_, c.size());
        for (std::size_t j = 0; j < c.size(); ++j)
            for (std::size_t i = 0; i < n_; ++i) sub.set(i, j, rays_[c[j]][i]);
        if (rank_over(sub, q) != c.size()) throw error("cone rays are linearly dependent");
    }
}

void Fan::rebuild_derived() {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < rays_.size(); ++i) names.push_back("v" + std::to_string(i + 1));
    for (std::size_t i = 0; i < ghost_cols_.size(); ++i)
        names.push_back("g" + std::to_string(i + 1));
    std::vector<std::vector<std::string>> facets;
    for (const auto& c : cones_) {
        std::vector<std::string> f;
        for (auto i : c) f.push_back(names[i]);
        facets.push_back(std::move(f));
    }
    complex_ = SimplicialComplex::from_facets(names, facets);
    IntMatrix L(n_, names.size());
    for (std::size_t j = 0; j < rays_.size(); ++j)
        for (std::size_t i = 0; i < n_; ++i) L.set(i, j, rays_[j][i]);
    for (std::size_t j = 0; j < ghost_cols_.size(); ++j)
        for (std::size_t i = 0; i < n_; ++i) L.set(i, rays_.size() + j, ghost_cols_[j][i]);
    lambda_ = CharacteristicMatrix{std::move(L)};
}

bool Fan::k_regular(const std::vector<std::size_t>& cone, const Coefficients& k) const {
    VertexSet s = 0;
    for (auto i : cone) {
        if (i >= rays_.size() + ghost_cols_.size()) throw ConeNotInFan("vertex index out of range");
        s |= VertexSet(1) << i;
    }
    if (!complex_.is_face(s)) throw ConeNotInFan("cone is not a face of the fan");
    return columns_extend_to_basis(lambda_, cone, k);
}

Fan complete_ghosts(const Fan& f) {
    IntMatrix cols(f.n_, f.rays_.size() + f.ghost_cols_.size());
    for (std::size_t j = 0; j < f.rays_.size(); ++j)
        for (std::size_t i = 0; i < f.n_; ++i) cols.set(i, j, f.rays_[j][i]);
    for (std::size_t j = 0; j < f.ghost_cols_.size(); ++j)
        for (std::size_t i = 0; i < f.n_; ++i)
            cols.set(i, f.rays_.size() + j, f.ghost_cols_[j][i]);
    auto snf = smith_normal_form(cols, true);
    Fan out = f;
    for (std::size_t j = snf.rank(); j < f.n_; ++j)
        out.ghost_cols_.push_back(snf.Sinv.col(j));
    out.rebuild_derived();
    return out;
}

bool is_k_smooth(const Fan& f, const Coefficients& k) {
    for (const auto& c : f.cones())
        if (!columns_extend_to_basis(f.lambda(), c, k)) return false;
    return true;
}

Fan product_fan(const Fan& a, const Fan& b) {
    const std::size_t n = a.n_ + b.n_;
    std::vector<std::vector<mpz_class>> rays;
    for (const auto& r : a.rays_) {
        std::vector<mpz_class> v(n, 0);
        std::copy(r.begin(), r.end(), v.begin());
        rays.push_back(std::move(v));
    }
    for (const auto& r : b.rays_) {
        std::vector<mpz_class> v(n, 0);
        std::copy(r.begin(), r.end(), v.begin() + a.n_);
        rays.push_back(std::move(v));
    }
    std::vector<std::vector<std::size_t>> cones;
    auto acones = a.cones_;
    auto bcones = b.cones_;
    if (acones.empty()) acones.push_back({});
    if (bcones.empty()) bcones.push_back({});
    std::set<std::vector<std::size_t>> seen;
    for (const auto& ca : acones)
        for (const auto& cb : bcones) {
            std::vector<std::size_t> u = ca;
            for (auto i : cb) u.push_back(i + a.rays_.size());
            std::sort(u.begin(), u.end());
            if (seen.insert(u).second) cones.push_back(u);
        }
    Fan out(n, std::move(rays), std::move(cones));
    // ghost columns carry over block-wise
    for (const auto& g : a.ghost_cols_) {
        std::vector<mpz_class> v(n, 0);
        std::copy(g.begin(), g.end(), v.begin());
        out.ghost_cols_.push_back(std::move(v));
    }
    for (const auto& g : b.ghost_cols_) {
        std::vector<mpz_class> v(n, 0);
        std::copy(g.begin(), g.end(), v.begin() + a.n_);
        out.ghost_cols_.push_back(std::move(v));
    }
    out.rebuild_derived();
    return out;
}

}  // namespace startor
