#include "flatk/torus.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>
#include <sstream>

namespace flatk {

// ------------------------------------------------------------ HalfAffineMap

HalfAffineMap::HalfAffineMap(std::vector<int> signs, std::vector<bool> half_shift)
    : n_(static_cast<int>(signs.size()))
{
    if (signs.size() != half_shift.size())
        throw std::invalid_argument("HalfAffineMap: sign and shift vectors differ in length");
    if (n_ > 16)
        throw std::invalid_argument("HalfAffineMap: dimension above 16");
    for (int i = 0; i < n_; ++i) {
        if (signs[i] != 1 && signs[i] != -1)
            throw std::invalid_argument("HalfAffineMap: signs must be +1 or -1");
        if (signs[i] == -1)
            negate_ |= 1u << i;
        if (half_shift[i])
            shift_ |= 1u << i;
    }
}

HalfAffineMap HalfAffineMap::identity(int n) { return from_masks(n, 0, 0); }

HalfAffineMap HalfAffineMap::from_masks(int n, std::uint32_t negate, std::uint32_t shift)
{
    HalfAffineMap g;
    g.n_ = n;
    std::uint32_t mask = n >= 32 ? ~0u : ((1u << n) - 1);
    g.negate_ = negate & mask;
    g.shift_ = shift & mask;
    return g;
}

int HalfAffineMap::determinant() const { return std::popcount(negate_) % 2 ? -1 : 1; }

HalfAffineMap HalfAffineMap::operator*(const HalfAffineMap& rhs) const
{
    if (n_ != rhs.n_)
        throw std::invalid_argument("HalfAffineMap: dimension mismatch");
    return from_masks(n_, negate_ ^ rhs.negate_, shift_ ^ rhs.shift_);
}

SignedCell HalfAffineMap::apply(CellCode cell) const
{
    CellCode out = 0;
    int sign = 1;
    for (int i = 0; i < n_; ++i) {
        unsigned s = TorusComplex::state(cell, n_, i);
        bool neg = (negate_ >> i) & 1u;
        bool sh = (shift_ >> i) & 1u;
        if (is_edge(s) && neg)
            sign = -sign;
        // negation swaps e0/e1 and fixes vertices; a half shift swaps both pairs
        unsigned flip = (is_edge(s) && neg ? 1u : 0u) ^ (sh ? 1u : 0u);
        out = TorusComplex::with_state(out, n_, i, s ^ flip);
    }
    return {out, sign};
}

std::string HalfAffineMap::to_string() const
{
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < n_; ++i)
        os << (i ? "," : "") << (sign(i) < 0 ? '-' : '+');
    os << " | ";
    for (int i = 0; i < n_; ++i)
        os << (i ? "," : "") << (half_shift(i) ? "1/2" : "0");
    os << ')';
    return os.str();
}

SignedCell cell_action(const HalfAffineMap& g, CellCode cell) { return g.apply(cell); }

// ------------------------------------------------------------- TorusComplex

TorusComplex::TorusComplex(int n) : n_(n)
{
    if (n < 0 || n > 10)
        throw std::invalid_argument("TorusComplex: dimension out of range");
    cells_.resize(static_cast<std::size_t>(n) + 1);
    index_.resize(cell_count());
    for (CellCode c = 0; c < cell_count(); ++c) {
        auto& bucket = cells_[static_cast<std::size_t>(cell_dimension(c))];
        index_[c] = bucket.size();
        bucket.push_back(c);
    }
}

CellCode TorusComplex::with_state(CellCode c, int n, int i, unsigned s)
{
    int shift = 2 * (n - 1 - i);
    return (c & ~(3u << shift)) | (s << shift);
}

int TorusComplex::cell_dimension(CellCode c) const
{
    int d = 0;
    for (int i = 0; i < n_; ++i)
        d += is_edge(state(c, i)) ? 1 : 0;
    return d;
}

std::vector<SignedCell> TorusComplex::boundary(CellCode c) const
{
    std::vector<SignedCell> out;
    int before = 0;
    for (int i = 0; i < n_; ++i) {
        unsigned s = state(c, i);
        if (!is_edge(s))
            continue;
        int sign = before % 2 ? -1 : 1;
        // d e0 = v1 - v0, d e1 = v0 - v1
        unsigned head = s == kE0 ? kV1 : kV0;
        unsigned tail = s == kE0 ? kV0 : kV1;
        out.push_back({with_state(c, n_, i, head), sign});
        out.push_back({with_state(c, n_, i, tail), -sign});
        ++before;
    }
    return out;
}

ChainComplex TorusComplex::chain_complex() const
{
    std::vector<std::size_t> ranks;
    std::vector<IntMatrix> bds;
    std::map<int, std::vector<std::string>> labels;
    for (int d = 0; d <= n_; ++d) {
        ranks.push_back(cells(d).size());
        for (auto c : cells(d))
            labels[d].push_back(cell_name(c));
    }
    for (int d = 1; d <= n_; ++d) {
        IntMatrix B(cells(d - 1).size(), cells(d).size());
        for (std::size_t j = 0; j < cells(d).size(); ++j)
            for (const auto& f : boundary(cells(d)[j]))
                B.add(index_[f.cell], j, f.sign);
        bds.push_back(std::move(B));
    }
    return ChainComplex(0, ranks, std::move(bds), std::move(labels));
}

std::string TorusComplex::cell_name(CellCode c) const
{
    static const char* names[] = {"v0", "v1", "e0", "e1"};
    std::string out;
    for (int i = 0; i < n_; ++i) {
        if (i)
            out += '.';
        out += names[state(c, i)];
    }
    return out;
}

IntMatrix action_matrix(const TorusComplex& T, const HalfAffineMap& g, int d)
{
    const auto& cells = T.cells(d);
    IntMatrix M(cells.size(), cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
        auto img = g.apply(cells[j]);
        M.set(T.index_in_degree(img.cell), j, img.sign);
    }
    return M;
}

// ------------------------------------------------------------ SymmetryGroup

SymmetryGroup::SymmetryGroup(int n, std::vector<HalfAffineMap> elements,
                             std::vector<HalfAffineMap> generators)
    : n_(n), elements_(std::move(elements)), generators_(std::move(generators))
{
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    std::set<HalfAffineMap> set(elements_.begin(), elements_.end());
    if (!set.count(HalfAffineMap::identity(n)))
        throw std::invalid_argument("SymmetryGroup: identity missing");
    for (const auto& a : elements_)
        for (const auto& b : elements_)
            if (!set.count(a * b))
                throw std::invalid_argument("SymmetryGroup: not closed under composition");
    // every element is an involution or the identity, so inverses are present
    std::size_t full = std::size_t(1) << (2 * n);
    if (full % elements_.size() != 0)
        throw std::invalid_argument("SymmetryGroup: order does not divide 4^n");
}

std::size_t SymmetryGroup::index_of(const HalfAffineMap& g) const
{
    auto it = std::lower_bound(elements_.begin(), elements_.end(), g);
    if (it == elements_.end() || !(*it == g))
        throw std::out_of_range("SymmetryGroup: element not in group");
    return static_cast<std::size_t>(it - elements_.begin());
}

SymmetryGroup generate_group(int n, const std::vector<HalfAffineMap>& generators)
{
    std::set<HalfAffineMap> seen{HalfAffineMap::identity(n)};
    std::deque<HalfAffineMap> todo{HalfAffineMap::identity(n)};
    while (!todo.empty()) {
        auto x = todo.front();
        todo.pop_front();
        for (const auto& g : generators) {
            if (g.dimension() != n)
                throw std::invalid_argument("generate_group: generator dimension mismatch");
            auto y = g * x;
            if (seen.insert(y).second)
                todo.push_back(y);
        }
    }
    return SymmetryGroup(n, std::vector<HalfAffineMap>(seen.begin(), seen.end()), generators);
}

FreenessResult is_free_action(const SymmetryGroup& G)
{
    for (const auto& g : G.elements())
        if (!g.is_identity() && !g.moves_every_point())
            return {false, g};
    return {true, std::nullopt};
}

// --------------------------------------------------------------- CellOrbits

CellOrbits::CellOrbits(const TorusComplex& T, const SymmetryGroup& G) : T_(&T), G_(&G)
{
    if (G.dimension() != T.dimension())
        throw std::invalid_argument("CellOrbits: group and torus dimensions differ");
    constexpr std::size_t unset = SIZE_MAX;
    orbit_.assign(T.cell_count(), unset);
    sign_.assign(T.cell_count(), 0);
    element_.assign(T.cell_count(), 0);
    reps_.resize(static_cast<std::size_t>(T.dimension()) + 1);
    const auto& elems = G.elements();
    for (int d = 0; d <= T.dimension(); ++d) {
        for (auto c : T.cells(d)) {
            if (orbit_[c] != unset)
                continue;
            // cells are visited in ascending order, so c is the smallest of its orbit
            std::size_t id = reps_[static_cast<std::size_t>(d)].size();
            reps_[static_cast<std::size_t>(d)].push_back(c);
            for (std::size_t k = 0; k < elems.size(); ++k) {
                auto img = elems[k].apply(c);
                if (orbit_[img.cell] != unset) {
                    throw CellStabilizer("cell " + T.cell_name(c) + " has a nontrivial stabilizer (" +
                                         elems[k].to_string() + ")");
                }
                orbit_[img.cell] = id;
                sign_[img.cell] = img.sign;
                element_[img.cell] = k;
            }
        }
    }
}

ChainComplex quotient_chain_complex(const TorusComplex& T, const SymmetryGroup& G)
{
    CellOrbits orbits(T, G);
    int n = T.dimension();
    std::vector<std::size_t> ranks;
    std::map<int, std::vector<std::string>> labels;
    for (int d = 0; d <= n; ++d) {
        ranks.push_back(orbits.reps(d).size());
        for (auto c : orbits.reps(d))
            labels[d].push_back(T.cell_name(c));
        std::size_t expected = T.cells(d).size() / G.order();
        if (orbits.reps(d).size() != expected)
            throw CellStabilizer("orbit count mismatch in degree " + std::to_string(d));
    }
    std::vector<IntMatrix> bds;
    for (int d = 1; d <= n; ++d) {
        const auto& reps = orbits.reps(d);
        IntMatrix B(ranks[static_cast<std::size_t>(d - 1)], reps.size());
        for (std::size_t j = 0; j < reps.size(); ++j)
            for (const auto& f : T.boundary(reps[j]))
                B.add(orbits.orbit_of(f.cell), j, f.sign * orbits.sign_of(f.cell));
        bds.push_back(std::move(B));
    }
    return ChainComplex(0, ranks, std::move(bds), std::move(labels));
}

ChainComplex invariant_cochain_complex(const TorusComplex& T, const SymmetryGroup& G)
{
    ChainComplex C = dualize(quotient_chain_complex(T, G));
    // rank of the invariants in degree i is C(n, i) 2^n / |G|
    int n = T.dimension();
    std::size_t binom = 1;
    for (int i = 0; i <= n; ++i) {
        std::size_t expected = (binom << n) / G.order();
        if (C.rank(-i) != expected)
            throw CellStabilizer("invariant cochain rank mismatch in degree " + std::to_string(i));
        binom = binom * static_cast<std::size_t>(n - i) / static_cast<std::size_t>(i + 1);
    }
    return C;
}

// ----------------------------------------------------------- builtin spaces

std::vector<HalfAffineMap> fedorov_schoenflies_real()
{
    // alpha(x) = (x1 + 1/2, -x2 + 1/2, -x3)
    // beta(x)  = (-x1 + 1/2, -x2, x3 + 1/2)
    // gamma(x) = (-x1, x2 + 1/2, -x3 + 1/2)
    return {
        HalfAffineMap({1, -1, -1}, {true, true, false}),
        HalfAffineMap({-1, -1, 1}, {true, false, true}),
        HalfAffineMap({-1, 1, -1}, {false, true, true}),
    };
}

std::vector<HalfAffineMap> fedorov_schoenflies_complex()
{
    // z_j = x_j + tau_j y_j: z -> -z negates (x_j, y_j), z -> z + 1/2 shifts x_j
    std::vector<HalfAffineMap> out;
    for (const auto& g : fedorov_schoenflies_real()) {
        std::vector<int> signs;
        std::vector<bool> shifts;
        for (int j = 0; j < 3; ++j) {
            signs.push_back(g.sign(j));
            signs.push_back(g.sign(j));
            shifts.push_back(g.half_shift(j));
            shifts.push_back(false);
        }
        out.emplace_back(signs, shifts);
    }
    return out;
}

namespace {

// z_j -> z_j + tau_j / 2 for the selected j
HalfAffineMap tau_shift(bool s1, bool s2, bool s3)
{
    return HalfAffineMap({1, 1, 1, 1, 1, 1}, {false, s1, false, s2, false, s3});
}

}  // namespace

const std::vector<std::string>& builtin_space_names()
{
    static const std::vector<std::string> names{"B", "X04", "X15", "X111", "X212"};
    return names;
}

const std::vector<std::string>& threefold_names()
{
    static const std::vector<std::string> names{"X04", "X15", "X111", "X212"};
    return names;
}

BuiltinSpace builtin_space(const std::string& name)
{
    if (name == "B") {
        auto gens = fedorov_schoenflies_real();
        gens.pop_back();  // gamma = beta * alpha
        return {name, TorusComplex(3), generate_group(3, gens)};
    }
    auto gens = fedorov_schoenflies_complex();
    gens.pop_back();
    if (name == "X04") {
    } else if (name == "X15") {
        gens.push_back(tau_shift(true, true, true));
    } else if (name == "X111") {
        gens.push_back(tau_shift(true, true, false));
    } else if (name == "X212") {
        gens.push_back(tau_shift(true, true, false));
        gens.push_back(tau_shift(false, true, true));
    } else {
        throw UnknownSpace("unknown space '" + name + "' (expected B, X04, X15, X111, X212)");
    }
    return {name, TorusComplex(6), generate_group(6, gens)};
}

BuiltinSpace torus_space(int n)
{
    return {"T" + std::to_string(n), TorusComplex(n), generate_group(n, {})};
}

BuiltinSpace klein_bottle_space()
{
    return {"Klein", TorusComplex(2), generate_group(2, {HalfAffineMap({1, -1}, {true, false})})};
}

BuiltinSpace space_by_name(const std::string& name)
{
    if (name == "Klein")
        return klein_bottle_space();
    if (name.size() == 2 && name[0] == 'T' && name[1] >= '1' && name[1] <= '9')
        return torus_space(name[1] - '0');
    return builtin_space(name);
}

}  // namespace flatk
