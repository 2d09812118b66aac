#include "flatk/glattice.hpp"

#include "flatk/complexes.hpp"
#include "flatk/torus.hpp"

#include <sstream>

namespace flatk {

// ----------------------------------------------------------- 3x3 rationals

RatMatrix3 rat_identity()
{
    return rat_diagonal({1, 1, 1});
}

RatMatrix3 rat_diagonal(const std::array<Rational, 3>& d)
{
    RatMatrix3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[i][j] = i == j ? d[i] : Rational(0);
    return m;
}

RatMatrix3 operator*(const RatMatrix3& a, const RatMatrix3& b)
{
    RatMatrix3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Rational s = 0;
            for (int k = 0; k < 3; ++k)
                s += a[i][k] * b[k][j];
            c[i][j] = s;
        }
    return c;
}

RatMatrix3 transpose(const RatMatrix3& a)
{
    RatMatrix3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t[i][j] = a[j][i];
    return t;
}

Rational determinant(const RatMatrix3& a)
{
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

RatMatrix3 inverse(const RatMatrix3& a)
{
    Rational det = determinant(a);
    if (det == 0)
        throw std::domain_error("singular 3x3 matrix");
    RatMatrix3 inv;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            // cofactor of (j, i)
            int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            inv[i][j] = (a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]) / det;
        }
    return inv;
}

bool is_integral(const RatMatrix3& a)
{
    for (const auto& row : a)
        for (const auto& x : row)
            if (x.get_den() != 1)
                return false;
    return true;
}

std::string to_string(const RatMatrix3& a)
{
    std::ostringstream os;
    os << '[';
    for (int i = 0; i < 3; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < 3; ++j)
            os << (j ? " " : "") << a[i][j];
    }
    os << ']';
    return os.str();
}

// ------------------------------------------------------------- point group

const std::array<std::array<int, 3>, kPointGroupOrder>& point_group_signs()
{
    static const std::array<std::array<int, 3>, kPointGroupOrder> signs{{
        {1, 1, 1},
        {1, -1, -1},
        {-1, -1, 1},
        {-1, 1, -1},
    }};
    return signs;
}

std::size_t point_group_multiply(std::size_t a, std::size_t b)
{
    // Klein four-group: x*x = 1, and the product of two distinct
    // nontrivial elements is the third
    if (a == 0)
        return b;
    if (b == 0)
        return a;
    if (a == b)
        return 0;
    return 6 - a - b;
}

namespace {

RatMatrix3 sign_matrix(std::size_t g)
{
    const auto& s = point_group_signs().at(g);
    return rat_diagonal({s[0], s[1], s[2]});
}

IntMatrix to_int_matrix(const RatMatrix3& a)
{
    IntMatrix m(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (a[i][j].get_den() != 1)
                throw std::logic_error("to_int_matrix: non-integral entry");
            m.set(i, j, a[i][j].get_num());
        }
    return m;
}

bool is_unimodular(const RatMatrix3& a)
{
    return is_integral(a) && abs(determinant(a)) == 1;
}

}  // namespace

// ---------------------------------------------------------------- GLattice

GLattice::GLattice(std::string name, RatMatrix3 basis) : name_(std::move(name)), basis_(std::move(basis))
{
    if (determinant(basis_) == 0)
        throw InvalidLattice(name_ + ": singular basis");
    for (const auto& row : basis_)
        for (const auto& x : row)
            if (2 % x.get_den() != 0)
                throw InvalidLattice(name_ + ": basis denominators must divide 2");
    RatMatrix3 inv = inverse(basis_);
    for (std::size_t g = 1; g < kPointGroupOrder; ++g)
        if (!is_unimodular(inv * sign_matrix(g) * basis_))
            throw InvalidLattice(name_ + ": not preserved by the point group");
}

IntMatrix GLattice::action(std::size_t g) const
{
    return to_int_matrix(inverse(basis_) * sign_matrix(g) * basis_);
}

bool GLattice::contains(const std::array<Rational, 3>& v) const
{
    RatMatrix3 inv = inverse(basis_);
    for (int i = 0; i < 3; ++i) {
        Rational c = inv[i][0] * v[0] + inv[i][1] * v[1] + inv[i][2] * v[2];
        if (c.get_den() != 1)
            return false;
    }
    return true;
}

const std::vector<std::string>& builtin_lattice_names()
{
    static const std::vector<std::string> names{"M04", "M15", "M111", "M212"};
    return names;
}

GLattice builtin_lattice(const std::string& name)
{
    const Rational h(1, 2);
    auto columns = [](std::array<Rational, 3> a, std::array<Rational, 3> b, std::array<Rational, 3> c) {
        RatMatrix3 m;
        for (int i = 0; i < 3; ++i) {
            m[i][0] = a[i];
            m[i][1] = b[i];
            m[i][2] = c[i];
        }
        return m;
    };
    if (name == "M04")
        return GLattice(name, rat_identity());
    if (name == "M15")
        return GLattice(name, columns({1, 0, 0}, {0, 1, 0}, {h, h, h}));
    if (name == "M111")
        return GLattice(name, columns({h, h, 0}, {0, 1, 0}, {0, 0, 1}));
    if (name == "M212")
        return GLattice(name, columns({h, h, 0}, {0, h, h}, {0, 0, 1}));
    throw UnknownLattice("unknown lattice '" + name + "' (expected M04, M15, M111, M212)");
}

GLattice dual_lattice(const GLattice& L)
{
    std::string n = L.name();
    if (n.rfind("dual(", 0) == 0 && n.back() == ')')
        n = n.substr(5, n.size() - 6);
    else
        n = "dual(" + n + ")";
    return GLattice(n, transpose(inverse(L.basis())));
}

namespace {

// Generator t > 0 of {t : t e_i in L}.
Rational axis_generator(const RatMatrix3& basis_inverse, int i)
{
    // t e_i in L  <=>  t c in Z^3 with c = B^-1 e_i; the admissible t form
    // the intersection of the groups (q/p) Z over the entries p/q of c
    Integer num_lcm = 1, den_gcd = 0;
    for (int k = 0; k < 3; ++k) {
        const Rational& c = basis_inverse[k][i];
        if (c == 0)
            continue;
        mpz_lcm(num_lcm.get_mpz_t(), num_lcm.get_mpz_t(), c.get_den_mpz_t());
        Integer p = abs(c.get_num());
        mpz_gcd(den_gcd.get_mpz_t(), den_gcd.get_mpz_t(), p.get_mpz_t());
    }
    return Rational(num_lcm, den_gcd);
}

}  // namespace

bool is_equivariant_isomorphism(const GLattice& L1, const GLattice& L2, const RatMatrix3& W)
{
    for (std::size_t g = 1; g < kPointGroupOrder; ++g)
        if (W * sign_matrix(g) != sign_matrix(g) * W)
            return false;
    return is_unimodular(inverse(L2.basis()) * W * L1.basis());
}

std::optional<RatMatrix3> equivariant_isomorphic(const GLattice& L1, const GLattice& L2)
{
    // The three coordinate lines carry pairwise distinct characters of G, so
    // every equivariant map is diagonal, and it must carry L1 n R e_i onto
    // L2 n R e_i. That fixes |w_i|; only the 8 sign patterns remain.
    RatMatrix3 inv1 = inverse(L1.basis()), inv2 = inverse(L2.basis());
    std::array<Rational, 3> w;
    for (int i = 0; i < 3; ++i)
        w[i] = axis_generator(inv2, i) / axis_generator(inv1, i);
    for (int mask = 0; mask < 8; ++mask) {
        std::array<Rational, 3> d = w;
        for (int i = 0; i < 3; ++i)
            if (mask >> i & 1)
                d[i] = -d[i];
        RatMatrix3 W = rat_diagonal(d);
        if (is_equivariant_isomorphism(L1, L2, W))
            return W;
    }
    return std::nullopt;
}

// ----------------------------------------------------------------- GModule

GModule::GModule(std::size_t rank, std::array<IntMatrix, kPointGroupOrder> action)
    : rank_(rank), action_(std::move(action))
{
    for (const auto& a : action_)
        if (a.rows() != rank_ || a.cols() != rank_)
            throw std::invalid_argument("GModule: action matrix has wrong shape");
    if (action_[0] != IntMatrix::identity(rank_))
        throw std::invalid_argument("GModule: identity must act trivially");
    for (std::size_t a = 0; a < kPointGroupOrder; ++a)
        for (std::size_t b = 0; b < kPointGroupOrder; ++b)
            if (action_[a] * action_[b] != action_[point_group_multiply(a, b)])
                throw std::invalid_argument("GModule: matrices violate the group law");
}

GModule GModule::trivial(std::size_t rank)
{
    auto I = IntMatrix::identity(rank);
    return GModule(rank, {I, I, I, I});
}

GModule module_of(const GLattice& L)
{
    std::array<IntMatrix, kPointGroupOrder> a;
    for (std::size_t g = 0; g < kPointGroupOrder; ++g)
        a[g] = L.action(g);
    return GModule(3, std::move(a));
}

GModule dual_module(const GModule& M)
{
    // every element is an involution, so (A^-1)^T = A^T
    std::array<IntMatrix, kPointGroupOrder> a;
    for (std::size_t g = 0; g < kPointGroupOrder; ++g)
        a[g] = M.action(g).transpose();
    return GModule(M.rank(), std::move(a));
}

namespace {

Integer bareiss_determinant(std::vector<std::vector<Integer>> m)
{
    std::size_t n = m.size();
    if (n == 0)
        return 1;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0)
                ++p;
            if (p == n)
                return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

void subsets(std::size_t n, std::size_t t, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out)
{
    if (cur.size() == t) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, t, i + 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

GModule exterior_power(const GModule& M, std::size_t t)
{
    if (t > M.rank())
        throw BadDegree("exterior power degree " + std::to_string(t) + " exceeds rank " +
                        std::to_string(M.rank()));
    std::vector<std::vector<std::size_t>> sets;
    std::vector<std::size_t> cur;
    subsets(M.rank(), t, 0, cur, sets);
    std::array<IntMatrix, kPointGroupOrder> a;
    for (std::size_t g = 0; g < kPointGroupOrder; ++g) {
        auto dense = M.action(g).to_dense();
        IntMatrix E(sets.size(), sets.size());
        for (std::size_t I = 0; I < sets.size(); ++I)
            for (std::size_t J = 0; J < sets.size(); ++J) {
                std::vector<std::vector<Integer>> minor(t, std::vector<Integer>(t));
                for (std::size_t r = 0; r < t; ++r)
                    for (std::size_t c = 0; c < t; ++c)
                        minor[r][c] = dense[sets[I][r]][sets[J][c]];
                E.set(I, J, bareiss_determinant(std::move(minor)));
            }
        a[g] = std::move(E);
    }
    return GModule(sets.size(), std::move(a));
}

InvariantSublattice invariants(const GModule& M)
{
    std::size_t n = M.rank();
    IntMatrix stacked(n * (kPointGroupOrder - 1), n);
    auto I = IntMatrix::identity(n);
    for (std::size_t g = 1; g < kPointGroupOrder; ++g) {
        IntMatrix D = M.action(g) - I;
        for (std::size_t r = 0; r < n; ++r)
            for (const auto& e : D.row(r))
                stacked.set((g - 1) * n + r, e.col, e.value);
    }
    IntMatrix K = kernel_basis(stacked);
    return {FinAbGroup::free(K.cols()), K};
}

bool coev_invariant(const GLattice& L)
{
    // g acts on X in M* (x) M = Hom(M, M) by X -> (A^-1)^T X A^T in the
    // tensor coordinates; X = I is the coevaluation element
    for (std::size_t g = 0; g < kPointGroupOrder; ++g) {
        RatMatrix3 A = inverse(L.basis()) * sign_matrix(g) * L.basis();
        RatMatrix3 image = transpose(inverse(A)) * rat_identity() * transpose(A);
        if (image != rat_identity())
            return false;
    }
    return true;
}

// ------------------------------------------------------------- Serre E_2

std::vector<FinAbGroup> serre_e2_column(const GModule& N)
{
    BuiltinSpace B = builtin_space("B");
    CellOrbits orbits(B.torus, B.group);
    const auto& elems = B.group.elements();
    // point group index of each element of the deck group, by linear part
    std::vector<std::size_t> linear(elems.size());
    for (std::size_t k = 0; k < elems.size(); ++k) {
        bool found = false;
        for (std::size_t g = 0; g < kPointGroupOrder && !found; ++g) {
            bool match = true;
            for (int i = 0; i < 3; ++i)
                match = match && elems[k].sign(i) == point_group_signs()[g][i];
            if (match) {
                linear[k] = g;
                found = true;
            }
        }
        if (!found)
            throw std::logic_error("serre_e2: deck transformation with unexpected linear part");
    }
    // Equivariant cochains F(g c) = A_g F(c) are determined by their values
    // on orbit representatives; [x] = s g [rep] gives F(x) = s A_g F(rep).
    std::size_t n = N.rank();
    std::vector<std::size_t> ranks;
    for (int p = 3; p >= 0; --p)
        ranks.push_back(orbits.reps(p).size() * n);
    std::vector<IntMatrix> bds;
    for (int p = 2; p >= 0; --p) {
        const auto& src = orbits.reps(p);
        const auto& dst = orbits.reps(p + 1);
        IntMatrix delta(dst.size() * n, src.size() * n);
        for (std::size_t r = 0; r < dst.size(); ++r)
            for (const auto& f : B.torus.boundary(dst[r])) {
                std::size_t o = orbits.orbit_of(f.cell);
                int coef = f.sign * orbits.sign_of(f.cell);
                const IntMatrix& A = N.action(linear[orbits.element_of(f.cell)]);
                for (std::size_t i = 0; i < n; ++i)
                    for (const auto& e : A.row(i))
                        delta.add(r * n + i, o * n + e.col, coef * e.value);
            }
        bds.push_back(std::move(delta));
    }
    auto H = cohomology(ChainComplex(-3, std::move(ranks), std::move(bds)));
    std::vector<FinAbGroup> out;
    for (int s = 0; s <= 3; ++s)
        out.push_back(H[s]);
    return out;
}

FinAbGroup serre_e2(const GModule& N, int s)
{
    if (s < 0 || s > 3)
        return FinAbGroup::zero();
    return serre_e2_column(N).at(static_cast<std::size_t>(s));
}

}  // namespace flatk
