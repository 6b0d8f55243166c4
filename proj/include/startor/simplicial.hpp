#pragma once

// Simplicial complexes on an ordered vertex set with ghost vertices,
// Stanley-Reisner monomial bases, full subcomplexes, joins, and reduced
// simplicial cohomology.  Faces are bitsets over the vertex index, so
// |V| <= 64; larger input is a hard error.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "startor/exactla.hpp"

namespace startor {

using VertexSet = std::uint64_t;

class SimplicialComplex {
public:
    SimplicialComplex() = default;
    static SimplicialComplex from_facets(const std::vector<std::string>& vertices,
                                         const std::vector<std::vector<std::string>>& facets);

    std::size_t vertex_count() const { return vertices_.size(); }
    const std::vector<std::string>& vertices() const { return vertices_; }
    std::size_t vertex_index(const std::string& name) const;  // throws UnknownVertex
    const std::vector<VertexSet>& facets() const { return facets_; }
    bool is_face(VertexSet s) const;
    VertexSet ghosts() const { return ghosts_; }
    std::set<VertexSet> all_faces() const;  // closure under subsets, contains 0

    SimplicialComplex full_subcomplex(VertexSet W) const;
    SimplicialComplex full_subcomplex(const std::vector<std::string>& W) const;

    std::map<long, GradedPiece> reduced_cohomology(const Coefficients& k, long max_degree) const;

    // alternating face count sum((-1)^(|s|-1)), empty face included
    long reduced_euler_characteristic() const;

    bool operator==(const SimplicialComplex& o) const;

private:
    std::vector<std::string> vertices_;
    std::vector<VertexSet> facets_;  // normalized: pairwise incomparable; may be empty ({0} complex)
    VertexSet ghosts_ = 0;
};

SimplicialComplex join(const SimplicialComplex& a, const SimplicialComplex& b);

struct Monomial {
    std::vector<std::uint32_t> exps;  // one slot per vertex, input order

    explicit Monomial(std::size_t nvertices = 0) : exps(nvertices, 0) {}
    long degree() const;  // exponent sum
    long internal_degree() const { return 2 * degree(); }
    VertexSet support() const;
    bool is_one() const { return degree() == 0; }
    Monomial times(const Monomial& o) const;
    Monomial times_var(std::size_t v) const;
    auto operator<=>(const Monomial&) const = default;
    std::string str(const std::vector<std::string>& names) const;
};

// all monomials of exponent sum q with support in sigma, graded-lex order
std::vector<Monomial> face_ring_basis(const SimplicialComplex& sigma, long q);

}  // namespace startor
