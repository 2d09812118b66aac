#pragma once

// Z[G]-lattices for the point group G = (Z/2)^2 = {1, alpha, beta, gamma}
// acting on V = R^3 by diag(+,-,-), diag(-,-,+), diag(-,+,-).

#include "flatk/intlin.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace flatk {

using Rational = mpq_class;

class UnknownLattice : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BadDegree : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidLattice : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense 3x3 rational matrix.
using RatMatrix3 = std::array<std::array<Rational, 3>, 3>;

RatMatrix3 rat_identity();
RatMatrix3 rat_diagonal(const std::array<Rational, 3>& d);
RatMatrix3 operator*(const RatMatrix3& a, const RatMatrix3& b);
RatMatrix3 transpose(const RatMatrix3& a);
Rational determinant(const RatMatrix3& a);
/// Throws std::domain_error when singular.
RatMatrix3 inverse(const RatMatrix3& a);
bool is_integral(const RatMatrix3& a);
std::string to_string(const RatMatrix3& a);

/// Point group elements in the fixed order identity, alpha, beta, gamma.
constexpr std::size_t kPointGroupOrder = 4;
const std::array<std::array<int, 3>, kPointGroupOrder>& point_group_signs();
/// Product in the point group (the Klein four-group).
std::size_t point_group_multiply(std::size_t a, std::size_t b);

class GLattice {
public:
    /// Columns of `basis` span the lattice in V coordinates. Checks that the
    /// basis is nonsingular, has denominators dividing 2 and is preserved by G.
    GLattice(std::string name, RatMatrix3 basis);

    const std::string& name() const { return name_; }
    const RatMatrix3& basis() const { return basis_; }
    /// B^-1 D_g B, an integral unimodular matrix.
    IntMatrix action(std::size_t g) const;
    /// Covolume relative to Z^3.
    Rational covolume() const { return abs(determinant(basis_)); }
    bool contains(const std::array<Rational, 3>& v) const;

private:
    std::string name_;
    RatMatrix3 basis_;
};

/// "M04", "M15", "M111", "M212".
GLattice builtin_lattice(const std::string& name);
const std::vector<std::string>& builtin_lattice_names();

/// Basis inverse-transpose; the action is contragredient, which for diagonal
/// sign matrices is the same action.
GLattice dual_lattice(const GLattice& L);

/// A G-equivariant W (in V coordinates) with W(L1) = L2, if one exists.
std::optional<RatMatrix3> equivariant_isomorphic(const GLattice& L1, const GLattice& L2);

/// Verifies that W commutes with the action and maps L1 onto L2.
bool is_equivariant_isomorphism(const GLattice& L1, const GLattice& L2, const RatMatrix3& W);

/// Integral representation of G, indexed as point_group_signs().
class GModule {
public:
    GModule(std::size_t rank, std::array<IntMatrix, kPointGroupOrder> action);

    std::size_t rank() const { return rank_; }
    const IntMatrix& action(std::size_t g) const { return action_.at(g); }

    static GModule trivial(std::size_t rank = 1);
    bool operator==(const GModule&) const = default;

private:
    std::size_t rank_;
    std::array<IntMatrix, kPointGroupOrder> action_;
};

/// M in lattice coordinates.
GModule module_of(const GLattice& L);
/// Hom(M, Z) with action (A_g^-1)^T.
GModule dual_module(const GModule& M);
/// Basis e_I for increasing index sets I, lexicographic; entry (I, J) is the
/// minor of A_g on rows I and columns J.
GModule exterior_power(const GModule& M, std::size_t t);

struct InvariantSublattice {
    FinAbGroup group;  // always free
    IntMatrix basis;   // rank x k, columns span the invariants
};

InvariantSublattice invariants(const GModule& M);

/// The identity tensor in M* (x) M is fixed by g -> (A_g^-1)^T (x) A_g.
bool coev_invariant(const GLattice& L);

/// H^s(pi_1(B); N) for s = 0..3, from the complex of G-equivariant cellular
/// cochains of T^3 with values in N.
std::vector<FinAbGroup> serre_e2_column(const GModule& N);
FinAbGroup serre_e2(const GModule& N, int s);

}  // namespace flatk
