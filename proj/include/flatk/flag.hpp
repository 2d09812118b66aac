#pragma once

// Flag (barycentric) Delta-complex of a free quotient T^n / G.
//
// A p-simplex of the subdivision of T^n is a strictly increasing chain
// c_0 < c_1 < ... < c_p in the face poset. Per coordinate such a chain is
// either constant at a vertex, or sits at a start vertex up to some switch
// index k and at a fixed edge from position k on. Keys pack a 6-bit field
// per coordinate (coordinate 0 most significant):
//   bits 0-1 final state, bits 2-4 switch index, bit 5 start vertex,
// and the degree p in bits 60-63. G acts coordinatewise on the fields and
// commutes with the face maps; a simplex of the quotient is a G-orbit and is
// stored by its smallest key.

#include "flatk/complexes.hpp"
#include "flatk/torus.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace flatk {

class ResourceBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ResourceBudget {
    double memory_gib = 16.0;
    double hours = 2.0;

    std::size_t memory_bytes() const;
};

/// Deadline tracker for a ResourceBudget.
class BudgetClock {
public:
    explicit BudgetClock(const ResourceBudget& budget);
    /// Throws ResourceBudgetExceeded once the time allowance is spent.
    void check(const char* stage) const;
    void require_memory(std::size_t bytes, const char* stage) const;
    const ResourceBudget& budget() const { return budget_; }

private:
    ResourceBudget budget_;
    std::chrono::steady_clock::time_point start_;
};

using FlagKey = std::uint64_t;

constexpr int kMaxFlagTorusDimension = 9;

/// Number of flags of degree p in T^n.
std::uint64_t torus_flag_count(int n, int p);

class FlagCodec {
public:
    explicit FlagCodec(int n);

    int dimension() const { return n_; }
    static int degree(FlagKey k) { return static_cast<int>(k >> 60); }
    unsigned field(FlagKey k, int i) const { return (k >> (6 * (n_ - 1 - i))) & 63u; }

    FlagKey encode(const std::vector<CellCode>& chain) const;
    std::vector<CellCode> decode(FlagKey k) const;
    /// Cell at position j of the chain.
    CellCode cell_at(FlagKey k, int j) const;
    CellCode top_cell(FlagKey k) const { return cell_at(k, degree(k)); }

    /// Face d_i (delete position i).
    FlagKey face(FlagKey k, int i) const;
    /// Positions first..last as a simplex (front and back faces).
    FlagKey sub_flag(FlagKey k, int first, int last) const;
    FlagKey act(const HalfAffineMap& g, FlagKey k) const;

private:
    int n_;
};

/// G acting on flag keys through per-coordinate field tables.
class FlagSymmetry {
public:
    FlagSymmetry(const FlagCodec& codec, const SymmetryGroup& G);

    std::size_t order() const { return tables_.size(); }
    FlagKey act(std::size_t element, FlagKey k) const;
    /// Smallest key in the orbit; optionally reports the element g with
    /// g.(rep) = k.
    FlagKey canonical(FlagKey k, std::size_t* element = nullptr) const;

private:
    int n_;
    std::vector<std::vector<std::array<std::uint8_t, 64>>> tables_;
};

class FlagComplex {
public:
    /// Enumerates orbit representatives. Throws CellStabilizer for a
    /// non-free action and ResourceBudgetExceeded when the estimated
    /// footprint is over budget.
    FlagComplex(const TorusComplex& T, const SymmetryGroup& G, const ResourceBudget& budget = {});

    const TorusComplex& torus() const { return *T_; }
    const SymmetryGroup& group() const { return *G_; }
    const FlagCodec& codec() const { return codec_; }
    int dimension() const { return codec_.dimension(); }

    std::size_t count(int p) const { return keys_.at(static_cast<std::size_t>(p)).size(); }
    std::size_t total_count() const;
    const std::vector<FlagKey>& keys(int p) const { return keys_.at(static_cast<std::size_t>(p)); }

    const FlagSymmetry& symmetry() const { return symmetry_; }
    FlagKey canonical(FlagKey k, std::size_t* element = nullptr) const { return symmetry_.canonical(k, element); }
    /// Index of the orbit of k among keys(degree(k)).
    std::size_t index_of(FlagKey k) const;
    /// Orbit index of face d_i of representative `index` in degree p.
    std::uint32_t face(int p, std::size_t index, int i) const
    {
        return faces_[static_cast<std::size_t>(p)][index * static_cast<std::size_t>(p + 1) + static_cast<std::size_t>(i)];
    }

    /// Quotient chain complex with boundary sum (-1)^i d_i. Intended for
    /// small instances; throws ResourceBudgetExceeded above `max_cells`.
    ChainComplex chain_complex(std::size_t max_cells = 2000000) const;

    struct Homology {
        std::map<int, FinAbGroup> groups;
        /// Critical cells per degree of the Morse complex that was reduced.
        std::vector<std::size_t> critical;
    };

    /// Integral homology by coreduction to a small Morse complex.
    Homology homology(const ResourceBudget& budget = {}) const;

private:
    const TorusComplex* T_;
    const SymmetryGroup* G_;
    FlagCodec codec_;
    FlagSymmetry symmetry_;
    std::vector<std::vector<FlagKey>> keys_;
    std::vector<std::vector<std::uint32_t>> faces_;
};

/// Homology of the flag complex of a builtin space compared with the
/// homology of its cellular quotient.
struct SubdivisionCheck {
    std::map<int, FinAbGroup> flag;
    std::map<int, FinAbGroup> cellular;
    std::vector<std::size_t> simplices;
    bool agree() const { return flag == cellular; }
};

SubdivisionCheck check_subdivision_invariance(const BuiltinSpace& X, const ResourceBudget& budget = {});

}  // namespace flatk
