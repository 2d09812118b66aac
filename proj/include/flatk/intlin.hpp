#pragma once

// Exact integer linear algebra: sparse matrices over Z, Smith normal form,
// finitely generated abelian groups and quadratic refinements of bilinear
// forms on them.

#include <gmpxx.h>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flatk {

using Integer = mpz_class;

inline int cmpabs(const Integer& a, const Integer& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }
inline int cmpabs(const Integer& a, unsigned long b) { return mpz_cmpabs_ui(a.get_mpz_t(), b); }

class CompositionNonzero : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IllFormedForm : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MatrixFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sparse integer matrix. Rows are stored as column-sorted lists of nonzero
/// entries; absent entries are zero.
class IntMatrix {
public:
    struct Entry {
        std::size_t col;
        Integer value;
    };

    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_dense(const std::vector<std::vector<Integer>>& rows, std::size_t cols);
    static IntMatrix from_dense(std::initializer_list<std::initializer_list<long>> rows);
    static IntMatrix diagonal(const std::vector<Integer>& diag, std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const;
    bool is_zero() const { return nnz() == 0; }

    Integer at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, const Integer& v);
    void add(std::size_t r, std::size_t c, const Integer& v);

    const std::vector<Entry>& row(std::size_t r) const { return data_[r]; }

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& rhs) const;
    IntMatrix operator+(const IntMatrix& rhs) const;
    IntMatrix operator-(const IntMatrix& rhs) const;
    IntMatrix operator-() const;
    std::vector<Integer> apply(const std::vector<Integer>& v) const;

    std::vector<std::vector<Integer>> to_dense() const;

    /// Columns [first, last) as a new matrix.
    IntMatrix column_block(std::size_t first, std::size_t last) const;
    IntMatrix row_block(std::size_t first, std::size_t last) const;

    bool operator==(const IntMatrix& other) const;
    bool operator!=(const IntMatrix& other) const { return !(*this == other); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::vector<Entry>> data_;
};

std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

/// Text format: "rows cols nnz" then one "row col value" line per entry,
/// row-major, 0-indexed.
std::string write_sparse(const IntMatrix& m);
IntMatrix read_sparse(const std::string& text);
void write_sparse_file(const std::string& path, const IntMatrix& m);
IntMatrix read_sparse_file(const std::string& path);

/// Isomorphism type of a finitely generated abelian group,
/// Z^rank + Z/d_1 + ... + Z/d_k with d_1 | d_2 | ... | d_k and d_1 >= 2.
class FinAbGroup {
public:
    FinAbGroup() = default;
    explicit FinAbGroup(std::size_t rank, std::vector<Integer> orders = {});

    static FinAbGroup zero() { return FinAbGroup(); }
    static FinAbGroup free(std::size_t rank) { return FinAbGroup(rank); }
    /// Z/c for each c in `cyclic` (any order, 0 meaning Z, 1 ignored).
    static FinAbGroup from_cyclic(const std::vector<Integer>& cyclic);

    std::size_t rank() const { return rank_; }
    const std::vector<Integer>& torsion() const { return torsion_; }
    bool is_zero() const { return rank_ == 0 && torsion_.empty(); }
    bool is_free() const { return torsion_.empty(); }
    FinAbGroup torsion_part() const { return FinAbGroup(0, torsion_); }
    /// Order of the torsion subgroup.
    Integer torsion_order() const;

    /// Prime-power cyclic factors, sorted; a derived view only.
    std::vector<Integer> primary_factors() const;

    FinAbGroup operator+(const FinAbGroup& other) const;
    bool operator==(const FinAbGroup& other) const = default;

    std::string to_string() const;

private:
    std::size_t rank_ = 0;
    std::vector<Integer> torsion_;
};

std::ostream& operator<<(std::ostream& os, const FinAbGroup& g);

struct SnfResult {
    IntMatrix D;
    IntMatrix U;
    IntMatrix V;
    /// Nonzero diagonal entries of D, in order.
    std::vector<Integer> divisors;
    std::size_t rank() const { return divisors.size(); }
};

/// U*M*V = D with U, V unimodular and D diagonal in divisor-chain form.
SnfResult smith_normal_form(const IntMatrix& M);

/// Divisors only; no transforms are tracked.
std::vector<Integer> smith_divisors(const IntMatrix& M);

/// Full decomposition used internally: also returns U^-1 and V^-1.
struct SnfFull {
    std::vector<Integer> divisors;
    IntMatrix U, Uinv, V, Vinv;
};
SnfFull smith_normal_form_full(const IntMatrix& M);

/// Z^rows / column span of M.
FinAbGroup cokernel_invariants(const IntMatrix& M);

/// ker(d_out) / im(d_in), where d_in : A -> B and d_out : B -> C.
FinAbGroup homology_at(const IntMatrix& d_in, const IntMatrix& d_out);

/// Rank of M over Q.
std::size_t rank_over_q(const IntMatrix& M);

/// Basis of ker(M) as columns of a (cols x k) matrix, saturated in Z^cols.
IntMatrix kernel_basis(const IntMatrix& M);

/// Element of a FinAbGroup in its generator coordinates: torsion
/// generators first (orders d_1..d_k), then free generators.
using GroupElement = std::vector<Integer>;

/// Reduce coordinates into canonical range [0, d) for torsion slots.
GroupElement normalize_element(const FinAbGroup& G, GroupElement x);
bool is_zero_element(const FinAbGroup& G, const GroupElement& x);
std::size_t generator_count(const FinAbGroup& G);
/// Order of generator i (0 for free generators).
Integer generator_order(const FinAbGroup& G, std::size_t i);

/// Presentation of H = ker(d_out)/im(d_in) with explicit generators and a
/// coordinate map from cycles to H.
class HomologyPresentation {
public:
    HomologyPresentation(const IntMatrix& d_in, const IntMatrix& d_out);

    const FinAbGroup& group() const { return group_; }
    /// Cycle representatives of the generators, ordered as in GroupElement.
    const std::vector<std::vector<Integer>>& generators() const { return generators_; }
    /// Coordinates of a cycle z. Throws if z is not a cycle.
    GroupElement coordinates(const std::vector<Integer>& z) const;
    bool is_cycle(const std::vector<Integer>& z) const;

private:
    IntMatrix d_out_;
    FinAbGroup group_;
    std::size_t ambient_ = 0;
    std::size_t kernel_offset_ = 0;   // rank of d_out
    IntMatrix vinv_;                  // V^-1 from SNF of d_out
    IntMatrix u_;                     // U from SNF of the relation block
    std::vector<std::size_t> slots_;  // rows of U used as coordinates
    std::vector<Integer> orders_;     // order per slot, 0 = free
    std::vector<std::vector<Integer>> generators_;
};

/// Bilinear form on the generators of H2 with values in H4:
/// form[i][j] is b(g_i, g_j) as a GroupElement of H4.
using BilinearForm = std::vector<std::vector<GroupElement>>;

struct QuadraticRefinement {
    bool exists = false;
    /// phi(g_i) for every generator of H2, when exists.
    std::vector<GroupElement> witness;
    /// First torsion generator whose congruence fails, when not exists.
    std::optional<std::size_t> obstruction_generator;
    std::optional<GroupElement> obstruction_value;
};

/// Decides whether some phi : H2 -> H4 satisfies
/// phi(c + c') - phi(c) - phi(c') = b(c, c').
QuadraticRefinement quadratic_refinement_exists(const FinAbGroup& H2, const FinAbGroup& H4,
                                                const BilinearForm& b);

/// Evaluates phi on an arbitrary element of H2 given its values on the
/// generators, using the quadratic expansion.
GroupElement evaluate_refinement(const FinAbGroup& H2, const FinAbGroup& H4,
                                 const BilinearForm& b, const std::vector<GroupElement>& phi,
                                 const GroupElement& c);

GroupElement evaluate_form(const FinAbGroup& H2, const FinAbGroup& H4, const BilinearForm& b,
                           const GroupElement& c, const GroupElement& d);

}  // namespace flatk
