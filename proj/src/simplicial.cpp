#include "startor/simplicial.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace startor {

SimplicialComplex SimplicialComplex::from_facets(
    const std::vector<std::string>& vertices,
    const std::vector<std::vector<std::string>>& facets) {
    SimplicialComplex c;
    if (vertices.size() > 64)
        throw error("vertex set too large: " + std::to_string(vertices.size()) +
                    " (faces are stored as 64-bit sets)");
    c.vertices_ = vertices;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (!index.emplace(vertices[i], i).second)
            throw error("duplicate vertex name: " + vertices[i]);
    }
    std::vector<VertexSet> raw;
    for (const auto& f : facets) {
        VertexSet s = 0;
        for (const auto& name : f) {
            auto it = index.find(name);
            if (it == index.end()) throw UnknownVertex("unknown vertex in facet: " + name);
            s |= VertexSet(1) << it->second;
        }
        raw.push_back(s);
    }
    // subset absorption; empty facets drop out unless nothing remains
    std::sort(raw.begin(), raw.end(),
              [](VertexSet a, VertexSet b) { return std::popcount(a) > std::popcount(b); });
    for (VertexSet s : raw) {
        bool covered = false;
        for (VertexSet t : c.facets_)
            if ((s & ~t) == 0) { covered = true; break; }
        if (!covered && s != 0) c.facets_.push_back(s);
    }
    std::sort(c.facets_.begin(), c.facets_.end());
    VertexSet used = 0;
    for (VertexSet s : c.facets_) used |= s;
    VertexSet all = vertices.empty() ? 0 : (vertices.size() == 64 ? ~VertexSet(0)
                                                                  : (VertexSet(1) << vertices.size()) - 1);
    c.ghosts_ = all & ~used;
    return c;
}

std::size_t SimplicialComplex::vertex_index(const std::string& name) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i] == name) return i;
    throw UnknownVertex("unknown vertex: " + name);
}

bool SimplicialComplex::is_face(VertexSet s) const {
    if (s == 0) return true;
    for (VertexSet f : facets_)
        if ((s & ~f) == 0) return true;
    return false;
}

std::set<VertexSet> SimplicialComplex::all_faces() const {
    std::set<VertexSet> faces;
    faces.insert(0);
    for (VertexSet f : facets_) {
        for (VertexSet sub = f;; sub = (sub - 1) & f) {
            faces.insert(sub);
            if (sub == 0) break;
        }
    }
    return faces;
}

SimplicialComplex SimplicialComplex::full_subcomplex(VertexSet W) const {
    std::vector<std::string> names;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (W & (VertexSet(1) << i)) { names.push_back(vertices_[i]); keep.push_back(i); }
    std::vector<std::vector<std::string>> fac;
    for (VertexSet f : facets_) {
        VertexSet g = f & W;
        std::vector<std::string> ff;
        for (std::size_t i : keep)
            if (g & (VertexSet(1) << i)) ff.push_back(vertices_[i]);
        fac.push_back(std::move(ff));
    }
    return from_facets(names, fac);
}

SimplicialComplex SimplicialComplex::full_subcomplex(const std::vector<std::string>& W) const {
    VertexSet w = 0;
    for (const auto& name : W) w |= VertexSet(1) << vertex_index(name);
    return full_subcomplex(w);
}

SimplicialComplex join(const SimplicialComplex& a, const SimplicialComplex& b) {
    if (a.vertex_count() + b.vertex_count() > 64)
        throw error("join: combined vertex set exceeds 64");
    std::vector<std::string> names = a.vertices();
    std::set<std::string> taken(names.begin(), names.end());
    std::vector<std::string> bnames;
    for (auto name : b.vertices()) {
        while (taken.count(name)) name += "'";
        taken.insert(name);
        bnames.push_back(name);
        names.push_back(name);
    }
    auto expand = [](const SimplicialComplex& c, const std::vector<std::string>& nm) {
        std::vector<std::vector<std::string>> out;
        for (VertexSet f : c.facets()) {
            std::vector<std::string> ff;
            for (std::size_t i = 0; i < c.vertex_count(); ++i)
                if (f & (VertexSet(1) << i)) ff.push_back(nm[i]);
            out.push_back(std::move(ff));
        }
        if (out.empty()) out.push_back({});  // the {0} complex: unique facet is the empty face
        return out;
    };
    auto fa = expand(a, a.vertices());
    auto fb = expand(b, bnames);
    std::vector<std::vector<std::string>> fac;
    for (const auto& x : fa)
        for (const auto& y : fb) {
            std::vector<std::string> u = x;
            u.insert(u.end(), y.begin(), y.end());
            fac.push_back(std::move(u));
        }
    return SimplicialComplex::from_facets(names, fac);
}

std::map<long, GradedPiece> SimplicialComplex::reduced_cohomology(const Coefficients& k,
                                                                  long max_degree) const {
    // reduced cochain complex: C^j spanned by faces of cardinality j+1, C^{-1} by the empty face
    auto faces = all_faces();
    std::map<long, std::vector<VertexSet>> by_dim;
    for (VertexSet f : faces) by_dim[std::popcount(f) - 1].push_back(f);
    for (auto& [d, list] : by_dim) std::sort(list.begin(), list.end());

    auto dim_of = [&](long j) -> std::size_t {
        auto it = by_dim.find(j);
        return it == by_dim.end() ? 0 : it->second.size();
    };
    auto index_of = [&](long j, VertexSet f) -> std::size_t {
        const auto& list = by_dim.at(j);
        return std::lower_bound(list.begin(), list.end(), f) - list.begin();
    };
    // coboundary C^j -> C^{j+1}
    auto delta = [&](long j) -> IntMatrix {
        IntMatrix d(dim_of(j + 1), dim_of(j));
        auto it = by_dim.find(j + 1);
        if (it == by_dim.end() || dim_of(j) == 0) return d;
        for (VertexSet tau : it->second) {
            std::size_t row = index_of(j + 1, tau);
            long pos = 0;
            for (std::size_t v = 0; v < vertices_.size(); ++v) {
                VertexSet bit = VertexSet(1) << v;
                if (!(tau & bit)) continue;
                d.add_at(row, index_of(j, tau & ~bit), (pos % 2 == 0) ? 1 : -1);
                ++pos;
            }
        }
        return d;
    };

    std::map<long, GradedPiece> out;
    for (long j = -1; j <= max_degree; ++j) {
        if (dim_of(j) == 0) {
            out[j] = GradedPiece{};
            continue;
        }
        IntMatrix d_in = (j >= 0) ? delta(j - 1) : IntMatrix(dim_of(j), 0);
        IntMatrix d_out = delta(j);
        out[j] = cohomology_at(d_in, d_out, k);
    }
    return out;
}

long SimplicialComplex::reduced_euler_characteristic() const {
    long chi = 0;
    for (VertexSet f : all_faces()) chi += (std::popcount(f) % 2 == 0) ? -1 : 1;
    return chi;
}

bool SimplicialComplex::operator==(const SimplicialComplex& o) const {
    return vertices_ == o.vertices_ && facets_ == o.facets_;
}

// -------------------------------------------------------------------- Monomial

long Monomial::degree() const {
    long d = 0;
    for (auto e : exps) d += e;
    return d;
}

VertexSet Monomial::support() const {
    VertexSet s = 0;
    for (std::size_t i = 0; i < exps.size(); ++i)
        if (exps[i]) s |= VertexSet(1) << i;
    return s;
}

Monomial Monomial::times(const Monomial& o) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] += o.exps[i];
    return r;
}

Monomial Monomial::times_var(std::size_t v) const {
    Monomial r = *this;
    ++r.exps[v];
    return r;
}

std::string Monomial::str(const std::vector<std::string>& names) const {
    std::ostringstream os;
    bool any = false;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (!exps[i]) continue;
        if (any) os << "*";
        os << "t_" << names[i];
        if (exps[i] > 1) os << "^" << exps[i];
        any = true;
    }
    return any ? os.str() : "1";
}

std::vector<Monomial> face_ring_basis(const SimplicialComplex& sigma, long q) {
    std::vector<Monomial> out;
    if (q < 0) return out;
    const std::size_t m = sigma.vertex_count();
    Monomial cur(m);
    // graded-lex: highest exponent on the earliest vertex first
    std::function<void(std::size_t, long, VertexSet)> rec = [&](std::size_t v, long left,
                                                                VertexSet supp) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        if (v == m) return;
        for (long e = left; e >= 0; --e) {
            VertexSet s = e > 0 ? (supp | (VertexSet(1) << v)) : supp;
            if (e > 0 && !sigma.is_face(s)) continue;
            cur.exps[v] = static_cast<std::uint32_t>(e);
            rec(v + 1, left - e, s);
            cur.exps[v] = 0;
        }
    };
    rec(0, q, 0);
    return out;
}

}  // namespace startor
