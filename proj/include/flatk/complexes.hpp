#pragma once

// Chain complexes of finitely generated free abelian groups.
//
// Degrees are homological: boundary(d) maps C_d -> C_{d-1}. A cochain
// complex C^k is stored as the chain complex with C_{-k} = C^k, so that
// cohomology(k) == homology(-k).

#include "flatk/intlin.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace flatk {

class MalformedComplex : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ChainComplex {
public:
    ChainComplex() = default;

    /// ranks[i] is the rank in degree min_degree + i; boundaries[i] is
    /// boundary(min_degree + i + 1). Checks shapes and d*d = 0.
    ChainComplex(int min_degree, std::vector<std::size_t> ranks, std::vector<IntMatrix> boundaries,
                 std::map<int, std::vector<std::string>> labels = {});

    int min_degree() const { return min_degree_; }
    int max_degree() const { return min_degree_ + static_cast<int>(ranks_.size()) - 1; }
    bool empty() const { return ranks_.empty(); }

    std::size_t rank(int d) const;
    /// boundary(d) : C_d -> C_{d-1}; zero matrix outside the stored range.
    IntMatrix boundary(int d) const;
    const std::vector<std::string>* labels(int d) const;
    std::size_t total_rank() const;
    long euler_characteristic() const;

    bool operator==(const ChainComplex& other) const;

private:
    int min_degree_ = 0;
    std::vector<std::size_t> ranks_;
    std::vector<IntMatrix> boundaries_;
    std::map<int, std::vector<std::string>> labels_;
};

/// degree -> H_d.
std::map<int, FinAbGroup> homology(const ChainComplex& C);
/// For a complex stored in cochain form: k -> H^k = H_{-k}.
std::map<int, FinAbGroup> cohomology(const ChainComplex& C);
/// Betti numbers over Z/2 (ranks of homology with Z/2 coefficients).
std::map<int, std::size_t> homology_mod2(const ChainComplex& C);
long euler_characteristic(const std::map<int, FinAbGroup>& H);

/// Hom(C, Z) with degrees negated: D_{-d} = C_d^*.
ChainComplex dualize(const ChainComplex& C);

/// Per-degree matrices for a map of graded groups of some fixed degree.
using GradedMap = std::map<int, IntMatrix>;

/// Chain equivalence source <-> target. to_target and to_source are chain
/// maps; source_homotopy h (degree +1) satisfies
///   to_source*to_target - 1 = d*h + h*d      on source,
/// and target_homotopy the analogous identity on target.
struct ChainEquivalence {
    ChainComplex source;
    ChainComplex target;
    GradedMap to_target;        // degree d: rank_t(d) x rank_s(d)
    GradedMap to_source;        // degree d: rank_s(d) x rank_t(d)
    GradedMap source_homotopy;  // degree d: rank_s(d+1) x rank_s(d)
    GradedMap target_homotopy;  // degree d: rank_t(d+1) x rank_t(d)

    /// Checks every stored identity exactly; returns a description of the
    /// first failure, or nothing.
    std::optional<std::string> verify() const;
};

/// Algebraic Morse reduction along unit-coefficient incidences.
ChainEquivalence morse_reduce(const ChainComplex& C);

/// Manifest + one sparse matrix file per boundary.
void write_complex(const std::string& directory, const ChainComplex& C);
ChainComplex read_complex(const std::string& directory);

}  // namespace flatk
