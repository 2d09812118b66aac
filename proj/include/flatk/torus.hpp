#pragma once

// Product cell structure on T^n = (R/Z)^n and the sign-and-half-shift affine
// maps acting on it.
//
// Each circle factor carries two vertices v0 = {0}, v1 = {1/2} and two edges
// e0 = (0, 1/2), e1 = (1/2, 1), oriented by increasing angle. A cell of T^n
// is an n-tuple of circle cells; its code packs two bits per coordinate with
// coordinate 0 most significant, so numeric order is lexicographic order.

#include "flatk/complexes.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace flatk {

class CellStabilizer : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownSpace : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum CircleCell : std::uint8_t { kV0 = 0, kV1 = 1, kE0 = 2, kE1 = 3 };

inline bool is_edge(unsigned state) { return state >= 2; }

using CellCode = std::uint32_t;

struct SignedCell {
    CellCode cell;
    int sign;
    bool operator==(const SignedCell&) const = default;
};

/// theta_i -> sign_i * theta_i + shift_i, with shift_i in {0, 1/2}.
class HalfAffineMap {
public:
    HalfAffineMap() = default;
    /// signs[i] in {+1, -1}; half_shift[i] true for a shift by 1/2.
    HalfAffineMap(std::vector<int> signs, std::vector<bool> half_shift);
    static HalfAffineMap identity(int n);
    static HalfAffineMap from_masks(int n, std::uint32_t negate, std::uint32_t shift);

    int dimension() const { return n_; }
    int sign(int i) const { return (negate_ >> i) & 1u ? -1 : 1; }
    bool half_shift(int i) const { return (shift_ >> i) & 1u; }
    std::uint32_t negate_mask() const { return negate_; }
    std::uint32_t shift_mask() const { return shift_; }
    bool is_identity() const { return negate_ == 0 && shift_ == 0; }
    /// Some coordinate is a pure half translation.
    bool moves_every_point() const { return (shift_ & ~negate_) != 0; }
    /// Product of the signs (orientation character).
    int determinant() const;

    /// (e, s) o (e', s') = (e e', e s' + s); half shifts are their own negatives.
    HalfAffineMap operator*(const HalfAffineMap& rhs) const;
    bool operator==(const HalfAffineMap&) const = default;
    auto operator<=>(const HalfAffineMap&) const = default;

    SignedCell apply(CellCode cell) const;

    std::string to_string() const;

private:
    int n_ = 0;
    std::uint32_t negate_ = 0;
    std::uint32_t shift_ = 0;
};

class TorusComplex {
public:
    explicit TorusComplex(int n);

    int dimension() const { return n_; }
    static unsigned state(CellCode c, int n, int i) { return (c >> (2 * (n - 1 - i))) & 3u; }
    unsigned state(CellCode c, int i) const { return state(c, n_, i); }
    static CellCode with_state(CellCode c, int n, int i, unsigned s);
    int cell_dimension(CellCode c) const;

    const std::vector<CellCode>& cells(int d) const { return cells_.at(static_cast<std::size_t>(d)); }
    std::size_t cell_count() const { return std::size_t(1) << (2 * n_); }
    std::size_t index_in_degree(CellCode c) const { return index_[c]; }

    /// Cellular boundary; sign (-1)^(edges before coordinate i) on coordinate i.
    std::vector<SignedCell> boundary(CellCode c) const;

    ChainComplex chain_complex() const;
    std::string cell_name(CellCode c) const;

private:
    int n_;
    std::vector<std::vector<CellCode>> cells_;
    std::vector<std::size_t> index_;
};

class SymmetryGroup {
public:
    SymmetryGroup() = default;
    SymmetryGroup(int n, std::vector<HalfAffineMap> elements, std::vector<HalfAffineMap> generators);

    int dimension() const { return n_; }
    std::size_t order() const { return elements_.size(); }
    /// Identity first, then ascending.
    const std::vector<HalfAffineMap>& elements() const { return elements_; }
    const std::vector<HalfAffineMap>& generators() const { return generators_; }
    std::size_t index_of(const HalfAffineMap& g) const;

private:
    int n_ = 0;
    std::vector<HalfAffineMap> elements_;
    std::vector<HalfAffineMap> generators_;
};

SymmetryGroup generate_group(int n, const std::vector<HalfAffineMap>& generators);

struct FreenessResult {
    bool free = true;
    std::optional<HalfAffineMap> offending;
};

/// A sign-affine map on the torus has no fixed point iff some coordinate is
/// translated by 1/2 without being negated.
FreenessResult is_free_action(const SymmetryGroup& G);

SignedCell cell_action(const HalfAffineMap& g, CellCode cell);
/// Matrix of g on the cellular chain group C_d(T^n).
IntMatrix action_matrix(const TorusComplex& T, const HalfAffineMap& g, int d);

/// Orbit data of a free cellular action. For every cell x there is a unique
/// group element g and sign s with g.[rep] = s [x].
class CellOrbits {
public:
    CellOrbits(const TorusComplex& T, const SymmetryGroup& G);

    const TorusComplex& torus() const { return *T_; }
    const SymmetryGroup& group() const { return *G_; }
    /// Orbit representatives (lexicographically smallest cell) in degree d.
    const std::vector<CellCode>& reps(int d) const { return reps_.at(static_cast<std::size_t>(d)); }
    std::size_t orbit_of(CellCode c) const { return orbit_[c]; }
    int sign_of(CellCode c) const { return sign_[c]; }
    std::size_t element_of(CellCode c) const { return element_[c]; }

private:
    const TorusComplex* T_;
    const SymmetryGroup* G_;
    std::vector<std::vector<CellCode>> reps_;
    std::vector<std::size_t> orbit_;
    std::vector<int> sign_;
    std::vector<std::size_t> element_;
};

/// Cellular chain complex of T^n/G (basis = orbit representatives).
ChainComplex quotient_chain_complex(const TorusComplex& T, const SymmetryGroup& G);
/// G-invariant cellular cochains of T^n, in cochain form (degrees -n..0).
ChainComplex invariant_cochain_complex(const TorusComplex& T, const SymmetryGroup& G);

struct BuiltinSpace {
    std::string name;
    TorusComplex torus;
    SymmetryGroup group;
    int dimension() const { return torus.dimension(); }
};

/// "B", "X04", "X15", "X111", "X212".
BuiltinSpace builtin_space(const std::string& name);
const std::vector<std::string>& builtin_space_names();
/// The four tri-elliptic 3-folds.
const std::vector<std::string>& threefold_names();
/// T^n with the trivial group.
BuiltinSpace torus_space(int n);
/// T^2 / <(x, y) -> (x + 1/2, -y)>.
BuiltinSpace klein_bottle_space();
/// Builtin names, "T1".."T9" and "Klein".
BuiltinSpace space_by_name(const std::string& name);

/// The three nontrivial operators alpha, beta, gamma acting on T^3.
std::vector<HalfAffineMap> fedorov_schoenflies_real();
/// Their complexification on T^6 in coordinates (x1, y1, x2, y2, x3, y3).
std::vector<HalfAffineMap> fedorov_schoenflies_complex();

}  // namespace flatk
