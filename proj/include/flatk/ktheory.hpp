#pragma once

// Graded K-groups of closed oriented 6-manifolds from their integral
// cohomology, and the comparisons between a space and its T-dual.
//
// For such a manifold the Atiyah-Hirzebruch spectral sequence collapses at
// E_2, so the associated graded of K^0 is H^0+H^2+H^4+H^6 and that of K^1
// is H^1+H^3+H^5. Everything here is a statement about the associated
// graded groups; the extension problems are not resolved.

#include "flatk/intlin.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace flatk {

class NotOriented : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using CohomologyTable = std::map<int, FinAbGroup>;

inline constexpr const char* kGradedCaveat = "graded comparison only";

struct GradedKGroups {
    /// Filtration quotients in degrees 0, 2, 4, 6.
    std::vector<FinAbGroup> grK0;
    /// Filtration quotients in degrees 1, 3, 5.
    std::vector<FinAbGroup> grK1;

    FinAbGroup total_k0() const;
    FinAbGroup total_k1() const;
};

/// Requires degrees 0..6 with H^0 = H^6 = Z.
GradedKGroups ahss_assemble(const CohomologyTable& H);

/// H^k of a named space (builtin, "T1".."T9", "Klein") from the invariant
/// cochain complex.
CohomologyTable cohomology_table(const std::string& space);

/// Published integral cohomology of B and the four threefolds, embedded as
/// literal data. Throws UnknownSpace for other names.
CohomologyTable reference_table(const std::string& space);

/// The T-dual pairs among the threefolds: (X04, X04), (X111, X111), (X15, X212).
const std::vector<std::pair<std::string, std::string>>& mirror_pairs();

struct MirrorReport {
    std::string space, dual;
    GradedKGroups graded_space, graded_dual;
    /// grK0(X) vs grK1(X^) and grK1(X) vs grK0(X^).
    bool k0_matches = false;
    bool k1_matches = false;
    bool pass() const { return k0_matches && k1_matches; }
    std::string caveat = kGradedCaveat;
};

MirrorReport mirror_graded_check(const std::string& space, const std::string& dual);
MirrorReport mirror_graded_check(const std::string& space, const CohomologyTable& H, const std::string& dual,
                                 const CohomologyTable& H_dual);

struct TorsionComparison {
    int degree = 0;       // on X
    int dual_degree = 0;  // on X^
    FinAbGroup torsion, dual_torsion;
    bool equal() const { return torsion == dual_torsion; }
};

/// tors H^2(X) vs tors H^3(X^), tors H^4(X) vs tors H^5(X^).
struct TorsionReport {
    std::string space, dual;
    std::vector<TorsionComparison> comparisons;
    bool pass() const;
};

TorsionReport torsion_h_check(const std::string& space, const std::string& dual);
TorsionReport torsion_h_check(const std::string& space, const CohomologyTable& H, const std::string& dual,
                              const CohomologyTable& H_dual);

}  // namespace flatk
