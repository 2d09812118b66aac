#pragma once

// Cup products on T^n / G.
//
// The quotient of the flag complex is an ordered Delta-complex, so the
// Alexander-Whitney formula computes cup products on it. Two chain maps
// relate it to the (much smaller) invariant cellular complex:
//   sd  : cellular -> flag, c -> (-1)^p sd(dc) * c   (cone on the barycenter),
//   psi : flag -> cellular, an equivariant carrier map with psi(sigma)
//         supported in the closure of the top cell of sigma.
// psi is defined on orbit representatives by psi(sigma) = h(psi(d sigma)),
// h the standard contraction of the closed cube, and transported by G.
// psi o sd = id exactly, so sd^* inverts psi^* on cohomology and
//   a u b := sd^*(psi^* a  u_AW  psi^* b)
// is the cup product computed with invariant cellular cochains.

#include "flatk/flag.hpp"
#include "flatk/intlin.hpp"
#include "flatk/torus.hpp"

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace flatk {

class MixedComplex : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Ring { Z, Z2 };
std::string to_string(Ring r);

/// Cellular chain on T^n, sorted by cell, zero coefficients removed.
using CellChain = std::vector<std::pair<CellCode, long>>;

/// Full flags c_0 < ... < c_p = c (dim c_i = i) with the signs of sd(c).
std::vector<std::pair<FlagKey, int>> subdivide(const TorusComplex& T, const FlagCodec& codec, CellCode c);

/// The carrier map psi. Memoizes on orbit representatives, so an instance
/// must not be shared between threads.
class CarrierMap {
public:
    CarrierMap(const TorusComplex& T, const SymmetryGroup& G);

    const FlagCodec& codec() const { return codec_; }
    const FlagSymmetry& symmetry() const { return symmetry_; }
    CellChain operator()(FlagKey k) const;
    /// psi on an orbit representative.
    const CellChain& on_representative(FlagKey canonical) const;

private:
    CellChain contract(CellCode top, const CellChain& z) const;

    const TorusComplex* T_;
    const SymmetryGroup* G_;
    FlagCodec codec_;
    FlagSymmetry symmetry_;
    mutable std::unordered_map<FlagKey, CellChain> cache_;
};

class F2Presentation;

/// Cohomology of T^n / G with Z or Z/2 coefficients from G-invariant
/// cellular cochains. Cochains are value vectors on the orbit
/// representatives of CellOrbits; the value on any cell x is
/// sign_of(x) * value(orbit_of(x)).
class CellularCohomology {
public:
    CellularCohomology(const TorusComplex& T, const SymmetryGroup& G, Ring ring);
    ~CellularCohomology();
    CellularCohomology(const CellularCohomology&) = delete;
    CellularCohomology& operator=(const CellularCohomology&) = delete;

    Ring ring() const { return ring_; }
    int dimension() const { return T_->dimension(); }
    const TorusComplex& torus() const { return *T_; }
    const SymmetryGroup& group_action() const { return *G_; }
    const CellOrbits& orbits() const { return orbits_; }
    const CarrierMap& carrier() const { return carrier_; }
    const ChainComplex& cochains() const { return cochains_; }

    /// H^k; with Z/2 coefficients this is (Z/2)^dim.
    const FinAbGroup& group(int k) const;
    /// Cocycle representatives of the generators of group(k).
    const std::vector<std::vector<Integer>>& generators(int k) const;
    /// Coordinates of the class of a cocycle; throws if it is not a cocycle.
    GroupElement coordinates(int k, const std::vector<Integer>& cocycle) const;
    bool is_cocycle(int k, const std::vector<Integer>& cochain) const;

    Integer evaluate(int k, const std::vector<Integer>& cochain, CellCode cell) const;
    /// (psi^* a)(sigma) for a flag sigma of degree k.
    Integer pullback(int k, const std::vector<Integer>& cochain, FlagKey sigma) const;
    /// Cochain-level cup product of invariant cochains of degrees p and q.
    std::vector<Integer> cup(int p, const std::vector<Integer>& a, int q, const std::vector<Integer>& b) const;
    /// sd^* of a function on flags of degree k.
    template <class F>
    std::vector<Integer> restrict_to_cells(int k, F&& flag_value) const
    {
        std::vector<Integer> out;
        for (auto c : orbits_.reps(k)) {
            Integer s = 0;
            for (const auto& [sigma, eps] : subdivision(c))
                s += eps * flag_value(sigma);
            out.push_back(reduce(s));
        }
        return out;
    }
    const std::vector<std::pair<FlagKey, int>>& subdivision(CellCode c) const;
    Integer reduce(const Integer& x) const;

private:
    void ensure(int k) const;

    const TorusComplex* T_;
    const SymmetryGroup* G_;
    Ring ring_;
    CellOrbits orbits_;
    ChainComplex cochains_;
    CarrierMap carrier_;
    mutable std::vector<std::unique_ptr<HomologyPresentation>> z_;
    mutable std::vector<std::unique_ptr<F2Presentation>> f2_;
    mutable std::vector<std::optional<FinAbGroup>> groups_;
    mutable std::vector<std::vector<std::vector<Integer>>> generators_;
    mutable std::unordered_map<CellCode, std::vector<std::pair<FlagKey, int>>> sd_cache_;
};

/// A cochain on the flag-complex orbits of one degree.
struct CohomologyClassRep {
    const FlagComplex* complex = nullptr;
    int degree = 0;
    Ring ring = Ring::Z;
    std::vector<Integer> values;
};

/// Exact flag coboundary (reduced mod 2 for Z/2).
std::vector<Integer> flag_coboundary(const CohomologyClassRep& a);
bool is_cocycle(const CohomologyClassRep& a);

/// Alexander-Whitney: (a u b)(c_0<...<c_{p+q}) = a(c_0..c_p) b(c_p..c_{p+q}).
CohomologyClassRep cup(const CohomologyClassRep& a, const CohomologyClassRep& b);

/// Flag-complex cohomology built on a CellularCohomology of the same space.
class FlagCohomology {
public:
    FlagCohomology(const FlagComplex& F, Ring ring);

    const FlagComplex& complex() const { return *F_; }
    const CellularCohomology& cellular() const { return cellular_; }
    const FinAbGroup& group(int k) const { return cellular_.group(k); }
    /// psi^* of the cellular generators.
    std::vector<CohomologyClassRep> basis(int k) const;
    CohomologyClassRep pullback(int k, const std::vector<Integer>& cellular_cochain) const;
    /// Coordinates of a flag cocycle, through sd^*.
    GroupElement coordinates(const CohomologyClassRep& a) const;

private:
    const FlagComplex* F_;
    CellularCohomology cellular_;
};

struct CohomologyBasis {
    FinAbGroup group;
    std::vector<CohomologyClassRep> classes;
};

CohomologyBasis cohomology_basis(const FlagComplex& F, int degree, Ring ring);

/// Matrix of H^p x H^q -> H^{p+q} on the chosen generators.
struct CupPairing {
    std::string space;
    Ring ring = Ring::Z;
    int p = 0, q = 0;
    FinAbGroup left, right, target;
    /// products[i][j] = coordinates of g_i u g'_j in target.
    std::vector<std::vector<GroupElement>> products;
};

CupPairing cup_pairing(const CellularCohomology& H, int p, int q, const BudgetClock* clock = nullptr,
                       const std::string& name = "");
/// Builtin names, "T1".."T9" and "Klein".
CupPairing cup_pairing(const std::string& space, int p, int q, Ring ring, const ResourceBudget& budget = {});

struct SplittingReport {
    std::string space;
    Ring ring = Ring::Z;
    CupPairing pairing;
    QuadraticRefinement refinement;
};

/// Existence of phi : H^2 -> H^4 with phi(c + c') - phi(c) - phi(c') = c u c'.
SplittingReport splitting_test(const std::string& space, Ring ring = Ring::Z, const ResourceBudget& budget = {});

/// Pullback along T^n -> T^n / G compared with the exterior algebra of T^n:
/// for all generators a of H^p and b of H^q, the evaluations of a u b on the
/// coordinate subtori equal the wedge product of those of a and b.
struct NaturalityReport {
    bool ok = true;
    std::size_t pairs_checked = 0;
    std::string first_failure;
};

NaturalityReport check_naturality(const CellularCohomology& H, int p, int q);

/// <a, [T_I]> for a cochain of degree |I| and the coordinate subtorus T_I.
Integer evaluate_on_subtorus(const CellularCohomology& H, int k, const std::vector<Integer>& cochain,
                             const std::vector<int>& coordinates);

}  // namespace flatk
