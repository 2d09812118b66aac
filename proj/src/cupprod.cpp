#include "flatk/cupprod.hpp"

#include <algorithm>
#include <functional>
#include <iterator>
#include <map>

namespace flatk {

std::string to_string(Ring r) { return r == Ring::Z ? "Z" : "Z/2"; }

namespace {

long checked_mul(long a, long b)
{
    long r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("cellular chain coefficient overflow");
    return r;
}

long checked_add(long a, long b)
{
    long r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("cellular chain coefficient overflow");
    return r;
}

void normalize(CellChain& z)
{
    std::sort(z.begin(), z.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    CellChain out;
    for (const auto& [c, a] : z) {
        if (!out.empty() && out.back().first == c)
            out.back().second = checked_add(out.back().second, a);
        else
            out.emplace_back(c, a);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& x) { return x.second == 0; }), out.end());
    z = std::move(out);
}

CellCode base_vertex(CellCode c, int n)
{
    // e0 = (0, 1/2) has base v0, e1 = (1/2, 1) has base v1
    CellCode out = 0;
    for (int i = 0; i < n; ++i) {
        unsigned s = TorusComplex::state(c, n, i);
        out = (out << 2) | (is_edge(s) ? (s == kE0 ? kV0 : kV1) : s);
    }
    return out;
}

}  // namespace

// ------------------------------------------------------------- subdivision

std::vector<std::pair<FlagKey, int>> subdivide(const TorusComplex& T, const FlagCodec& codec, CellCode c)
{
    // sd(c) = (-1)^p sd(dc) * c, carried as explicit chains of cells
    std::function<std::vector<std::pair<std::vector<CellCode>, int>>(CellCode)> rec =
        [&](CellCode x) -> std::vector<std::pair<std::vector<CellCode>, int>> {
        int p = T.cell_dimension(x);
        if (p == 0)
            return {{{x}, 1}};
        std::vector<std::pair<std::vector<CellCode>, int>> out;
        for (const auto& f : T.boundary(x))
            for (auto [chain, eps] : rec(f.cell)) {
                chain.push_back(x);
                out.emplace_back(std::move(chain), (p % 2 ? -1 : 1) * f.sign * eps);
            }
        return out;
    };
    std::map<FlagKey, int> acc;
    for (const auto& [chain, eps] : rec(c))
        acc[codec.encode(chain)] += eps;
    std::vector<std::pair<FlagKey, int>> out;
    for (const auto& [k, e] : acc)
        if (e != 0)
            out.emplace_back(k, e);
    return out;
}

// --------------------------------------------------------------- CarrierMap

CarrierMap::CarrierMap(const TorusComplex& T, const SymmetryGroup& G)
    : T_(&T), G_(&G), codec_(T.dimension()), symmetry_(codec_, G)
{
}

CellChain CarrierMap::contract(CellCode top, const CellChain& z) const
{
    // h(x) = sum_i [x_j vertex for j < i, x_i = t_i] (s_1..s_{i-1}, e_i, x_{i+1}..)
    // over the edge coordinates i of top; e0 runs s = v0 -> t = v1, e1 runs v1 -> v0
    const int n = T_->dimension();
    CellChain out;
    for (const auto& [x, a] : z) {
        CellCode y = x;
        for (int i = 0; i < n; ++i) {
            unsigned ti = TorusComplex::state(top, n, i);
            unsigned xi = TorusComplex::state(x, n, i);
            if (!is_edge(ti)) {
                if (xi != ti)
                    throw std::logic_error("CarrierMap: chain leaves the closed cell");
                continue;
            }
            if (is_edge(xi)) {
                if (xi != ti)
                    throw std::logic_error("CarrierMap: chain leaves the closed cell");
                break;
            }
            unsigned s = ti == kE0 ? kV0 : kV1;
            if (xi != s)
                out.emplace_back(TorusComplex::with_state(y, n, i, ti), a);
            y = TorusComplex::with_state(y, n, i, s);
        }
    }
    normalize(out);
    return out;
}

const CellChain& CarrierMap::on_representative(FlagKey k) const
{
    if (auto it = cache_.find(k); it != cache_.end())
        return it->second;
    const int p = FlagCodec::degree(k);
    const int n = T_->dimension();
    CellCode top = codec_.top_cell(k);
    CellChain result;
    if (p == 0) {
        result = {{base_vertex(top, n), 1}};
    } else {
        CellChain z;
        for (int i = 0; i <= p; ++i) {
            std::size_t e = 0;
            FlagKey rep = symmetry_.canonical(codec_.face(k, i), &e);
            const HalfAffineMap& g = G_->elements()[e];
            for (const auto& [x, a] : on_representative(rep)) {
                auto img = g.apply(x);
                z.emplace_back(img.cell, checked_mul(a, (i % 2 ? -1 : 1) * img.sign));
            }
        }
        normalize(z);
        result = contract(top, z);
    }
    return cache_.emplace(k, std::move(result)).first->second;
}

CellChain CarrierMap::operator()(FlagKey k) const
{
    std::size_t e = 0;
    FlagKey rep = symmetry_.canonical(k, &e);
    const HalfAffineMap& g = G_->elements()[e];
    CellChain out;
    for (const auto& [x, a] : on_representative(rep)) {
        auto img = g.apply(x);
        out.emplace_back(img.cell, a * img.sign);
    }
    normalize(out);
    return out;
}

// ------------------------------------------------------------ F2 algebra

namespace {

class BitVec {
public:
    explicit BitVec(std::size_t n = 0) : n_(n), w_((n + 63) / 64, 0) {}
    std::size_t size() const { return n_; }
    bool get(std::size_t i) const { return (w_[i / 64] >> (i % 64)) & 1u; }
    void flip(std::size_t i) { w_[i / 64] ^= std::uint64_t(1) << (i % 64); }
    void set(std::size_t i, bool v)
    {
        if (get(i) != v)
            flip(i);
    }
    BitVec& operator^=(const BitVec& o)
    {
        for (std::size_t k = 0; k < w_.size(); ++k)
            w_[k] ^= o.w_[k];
        return *this;
    }
    std::optional<std::size_t> lowest() const
    {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k])
                return k * 64 + static_cast<std::size_t>(__builtin_ctzll(w_[k]));
        return std::nullopt;
    }
    bool any() const { return lowest().has_value(); }

private:
    std::size_t n_;
    std::vector<std::uint64_t> w_;
};

BitVec to_bits(const std::vector<Integer>& v)
{
    BitVec b(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        if (mpz_odd_p(v[i].get_mpz_t()))
            b.flip(i);
    return b;
}

// Rows of M mod 2 as bit vectors over the columns.
std::vector<BitVec> rows_mod2(const IntMatrix& M)
{
    std::vector<BitVec> rows;
    for (std::size_t r = 0; r < M.rows(); ++r) {
        BitVec b(M.cols());
        for (const auto& e : M.row(r))
            if (mpz_odd_p(e.value.get_mpz_t()))
                b.flip(e.col);
        rows.push_back(std::move(b));
    }
    return rows;
}

std::vector<BitVec> kernel_mod2(const IntMatrix& M)
{
    std::size_t n = M.cols();
    auto rows = rows_mod2(M);
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && !rows[p].get(c))
            ++p;
        if (p == rows.size())
            continue;
        std::swap(rows[r], rows[p]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r && rows[i].get(c))
                rows[i] ^= rows[r];
        pivot_cols.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivot_cols)
        is_pivot[c] = true;
    std::vector<BitVec> out;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f])
            continue;
        BitVec v(n);
        v.flip(f);
        for (std::size_t i = 0; i < pivot_cols.size(); ++i)
            if (rows[i].get(f))
                v.flip(pivot_cols[i]);
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

/// ker(d_out) / im(d_in) over Z/2 with explicit generators.
class F2Presentation {
public:
    F2Presentation(const IntMatrix& d_in, const IntMatrix& d_out) : n_(d_out.cols()), d_out_(rows_mod2(d_out))
    {
        pivot_.assign(n_, kNone);
        auto imgs = rows_mod2(d_in.transpose());
        for (auto& v : imgs)
            insert(std::move(v), false);
        for (auto& v : kernel_mod2(d_out)) {
            BitVec copy = v;
            if (insert(std::move(copy), true))
                gens_.push_back(v);
        }
        // a row equals (image) + sum of the generators in its tag
        for (auto& row : rows_) {
            BitVec t(gens_.size());
            for (auto i : row.tag_bits)
                t.flip(i);
            row.tag = std::move(t);
        }
    }

    std::size_t dim() const { return gens_.size(); }
    const std::vector<BitVec>& generators() const { return gens_; }

    bool is_cocycle(const BitVec& z) const
    {
        for (const auto& r : d_out_) {
            BitVec t = r;
            bool parity = false;
            for (std::size_t i = 0; i < n_; ++i)
                if (t.get(i) && z.get(i))
                    parity = !parity;
            if (parity)
                return false;
        }
        return true;
    }

    BitVec coordinates(BitVec z) const
    {
        BitVec tag(gens_.size());
        while (auto low = z.lowest()) {
            std::size_t r = pivot_[*low];
            if (r == kNone)
                throw std::invalid_argument("F2Presentation: not a cocycle");
            z ^= rows_[r].vec;
            tag ^= rows_[r].tag;
        }
        return tag;
    }

private:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    struct Row {
        BitVec vec;
        BitVec tag;
        std::vector<std::size_t> tag_bits;
    };

    bool insert(BitVec v, bool as_generator)
    {
        std::vector<std::size_t> bits;
        while (auto low = v.lowest()) {
            std::size_t r = pivot_[*low];
            if (r == kNone)
                break;
            v ^= rows_[r].vec;
            for (auto b : rows_[r].tag_bits) {
                auto it = std::find(bits.begin(), bits.end(), b);
                if (it == bits.end())
                    bits.push_back(b);
                else
                    bits.erase(it);
            }
        }
        auto low = v.lowest();
        if (!low)
            return false;
        if (as_generator)
            bits.push_back(gens_.size());
        pivot_[*low] = rows_.size();
        rows_.push_back({std::move(v), BitVec(0), std::move(bits)});
        return true;
    }

    std::size_t n_;
    std::vector<BitVec> d_out_;
    std::vector<Row> rows_;
    std::vector<std::size_t> pivot_;
    std::vector<BitVec> gens_;
};

// ------------------------------------------------------- CellularCohomology

CellularCohomology::CellularCohomology(const TorusComplex& T, const SymmetryGroup& G, Ring ring)
    : T_(&T), G_(&G), ring_(ring), orbits_(T, G), cochains_(invariant_cochain_complex(T, G)), carrier_(T, G)
{
    std::size_t slots = static_cast<std::size_t>(T.dimension()) + 1;
    z_.resize(slots);
    f2_.resize(slots);
    groups_.resize(slots);
    generators_.resize(slots);
}

CellularCohomology::~CellularCohomology() = default;

void CellularCohomology::ensure(int k) const
{
    if (k < 0 || k > dimension())
        throw std::out_of_range("CellularCohomology: degree out of range");
    auto s = static_cast<std::size_t>(k);
    if (groups_[s])
        return;
    // cochain form: boundary(-k) is delta^k : C^k -> C^{k+1}
    IntMatrix d_in = cochains_.boundary(-k + 1);
    IntMatrix d_out = cochains_.boundary(-k);
    if (ring_ == Ring::Z) {
        z_[s] = std::make_unique<HomologyPresentation>(d_in, d_out);
        groups_[s] = z_[s]->group();
        generators_[s] = z_[s]->generators();
    } else {
        f2_[s] = std::make_unique<F2Presentation>(d_in, d_out);
        groups_[s] = FinAbGroup(0, std::vector<Integer>(f2_[s]->dim(), 2));
        for (const auto& g : f2_[s]->generators()) {
            std::vector<Integer> v(g.size());
            for (std::size_t i = 0; i < g.size(); ++i)
                v[i] = g.get(i) ? 1 : 0;
            generators_[s].push_back(std::move(v));
        }
    }
}

const FinAbGroup& CellularCohomology::group(int k) const
{
    ensure(k);
    return *groups_[static_cast<std::size_t>(k)];
}

const std::vector<std::vector<Integer>>& CellularCohomology::generators(int k) const
{
    ensure(k);
    return generators_[static_cast<std::size_t>(k)];
}

bool CellularCohomology::is_cocycle(int k, const std::vector<Integer>& cochain) const
{
    ensure(k);
    if (ring_ == Ring::Z)
        return z_[static_cast<std::size_t>(k)]->is_cycle(cochain);
    return f2_[static_cast<std::size_t>(k)]->is_cocycle(to_bits(cochain));
}

GroupElement CellularCohomology::coordinates(int k, const std::vector<Integer>& cocycle) const
{
    ensure(k);
    if (ring_ == Ring::Z)
        return z_[static_cast<std::size_t>(k)]->coordinates(cocycle);
    auto bits = to_bits(cocycle);
    if (!f2_[static_cast<std::size_t>(k)]->is_cocycle(bits))
        throw std::invalid_argument("CellularCohomology::coordinates: not a cocycle");
    auto tag = f2_[static_cast<std::size_t>(k)]->coordinates(bits);
    GroupElement out(tag.size());
    for (std::size_t i = 0; i < tag.size(); ++i)
        out[i] = tag.get(i) ? 1 : 0;
    return out;
}

Integer CellularCohomology::reduce(const Integer& x) const
{
    if (ring_ == Ring::Z)
        return x;
    return mpz_odd_p(x.get_mpz_t()) ? 1 : 0;
}

Integer CellularCohomology::evaluate(int k, const std::vector<Integer>& cochain, CellCode cell) const
{
    if (T_->cell_dimension(cell) != k)
        return 0;
    return orbits_.sign_of(cell) * cochain.at(orbits_.orbit_of(cell));
}

Integer CellularCohomology::pullback(int k, const std::vector<Integer>& cochain, FlagKey sigma) const
{
    Integer s = 0;
    for (const auto& [x, a] : carrier_(sigma))
        if (T_->cell_dimension(x) == k)
            s += a * evaluate(k, cochain, x);
    return s;
}

const std::vector<std::pair<FlagKey, int>>& CellularCohomology::subdivision(CellCode c) const
{
    if (auto it = sd_cache_.find(c); it != sd_cache_.end())
        return it->second;
    return sd_cache_.emplace(c, subdivide(*T_, carrier_.codec(), c)).first->second;
}

std::vector<Integer> CellularCohomology::cup(int p, const std::vector<Integer>& a, int q,
                                            const std::vector<Integer>& b) const
{
    if (p + q > dimension())
        return {};
    const auto& codec = carrier_.codec();
    const auto& sym = carrier_.symmetry();
    // both factors are invariant, so their pullbacks only depend on the orbit
    std::unordered_map<FlagKey, Integer> memo_a, memo_b;
    auto value = [&](std::unordered_map<FlagKey, Integer>& memo, int k, const std::vector<Integer>& c,
                     FlagKey sigma) -> const Integer& {
        FlagKey rep = sym.canonical(sigma);
        if (auto it = memo.find(rep); it != memo.end())
            return it->second;
        return memo.emplace(rep, pullback(k, c, rep)).first->second;
    };
    return restrict_to_cells(p + q, [&](FlagKey sigma) -> Integer {
        const Integer& x = value(memo_a, p, a, codec.sub_flag(sigma, 0, p));
        if (x == 0)
            return 0;
        return x * value(memo_b, q, b, codec.sub_flag(sigma, p, p + q));
    });
}

// ------------------------------------------------------------- flag classes

std::vector<Integer> flag_coboundary(const CohomologyClassRep& a)
{
    const FlagComplex& F = *a.complex;
    int k = a.degree;
    if (k + 1 > F.dimension())
        return {};
    std::vector<Integer> out(F.count(k + 1));
    for (std::size_t j = 0; j < out.size(); ++j) {
        Integer s = 0;
        for (int i = 0; i <= k + 1; ++i) {
            const Integer& v = a.values[F.face(k + 1, j, i)];
            if (i % 2)
                s -= v;
            else
                s += v;
        }
        out[j] = a.ring == Ring::Z ? s : Integer(mpz_odd_p(s.get_mpz_t()) ? 1 : 0);
    }
    return out;
}

bool is_cocycle(const CohomologyClassRep& a)
{
    auto d = flag_coboundary(a);
    return std::all_of(d.begin(), d.end(), [](const Integer& x) { return x == 0; });
}

CohomologyClassRep cup(const CohomologyClassRep& a, const CohomologyClassRep& b)
{
    if (a.complex != b.complex || a.complex == nullptr)
        throw MixedComplex("cup: classes live on different flag complexes");
    if (a.ring != b.ring)
        throw MixedComplex("cup: classes have different coefficient rings");
    const FlagComplex& F = *a.complex;
    int p = a.degree, q = b.degree;
    CohomologyClassRep out{&F, p + q, a.ring, {}};
    if (p + q > F.dimension())
        return out;
    const auto& codec = F.codec();
    out.values.resize(F.count(p + q));
    for (std::size_t j = 0; j < out.values.size(); ++j) {
        FlagKey sigma = F.keys(p + q)[j];
        const Integer& x = a.values[F.index_of(codec.sub_flag(sigma, 0, p))];
        if (x == 0)
            continue;
        Integer v = x * b.values[F.index_of(codec.sub_flag(sigma, p, p + q))];
        out.values[j] = a.ring == Ring::Z ? v : Integer(mpz_odd_p(v.get_mpz_t()) ? 1 : 0);
    }
    return out;
}

FlagCohomology::FlagCohomology(const FlagComplex& F, Ring ring) : F_(&F), cellular_(F.torus(), F.group(), ring) {}

CohomologyClassRep FlagCohomology::pullback(int k, const std::vector<Integer>& cochain) const
{
    CohomologyClassRep out{F_, k, cellular_.ring(), {}};
    out.values.reserve(F_->count(k));
    for (FlagKey sigma : F_->keys(k))
        out.values.push_back(cellular_.reduce(cellular_.pullback(k, cochain, sigma)));
    return out;
}

std::vector<CohomologyClassRep> FlagCohomology::basis(int k) const
{
    std::vector<CohomologyClassRep> out;
    for (const auto& g : cellular_.generators(k))
        out.push_back(pullback(k, g));
    return out;
}

GroupElement FlagCohomology::coordinates(const CohomologyClassRep& a) const
{
    if (a.complex != F_)
        throw MixedComplex("coordinates: class lives on a different flag complex");
    if (a.ring != cellular_.ring())
        throw MixedComplex("coordinates: coefficient ring differs");
    auto cell = cellular_.restrict_to_cells(a.degree, [&](FlagKey sigma) { return a.values[F_->index_of(sigma)]; });
    return cellular_.coordinates(a.degree, cell);
}

CohomologyBasis cohomology_basis(const FlagComplex& F, int degree, Ring ring)
{
    FlagCohomology H(F, ring);
    return {H.group(degree), H.basis(degree)};
}

// ------------------------------------------------------------------ pairing

CupPairing cup_pairing(const CellularCohomology& H, int p, int q, const BudgetClock* clock, const std::string& name)
{
    if (p < 0 || q < 0 || p + q > H.dimension())
        throw std::invalid_argument("cup_pairing: degrees out of range");
    CupPairing out;
    out.space = name;
    out.ring = H.ring();
    out.p = p;
    out.q = q;
    out.left = H.group(p);
    out.right = H.group(q);
    out.target = H.group(p + q);
    const auto& gp = H.generators(p);
    const auto& gq = H.generators(q);
    for (const auto& a : gp) {
        std::vector<GroupElement> row;
        for (const auto& b : gq) {
            if (clock)
                clock->check("cup pairing");
            row.push_back(normalize_element(out.target, H.coordinates(p + q, H.cup(p, a, q, b))));
        }
        out.products.push_back(std::move(row));
    }
    return out;
}

CupPairing cup_pairing(const std::string& space, int p, int q, Ring ring, const ResourceBudget& budget)
{
    BudgetClock clock(budget);
    BuiltinSpace X = space_by_name(space);
    // invariant cochains, carrier cache and subdivisions stay far below 1 GiB
    clock.require_memory(std::size_t(64) << 20, "cup pairing");
    CellularCohomology H(X.torus, X.group, ring);
    return cup_pairing(H, p, q, &clock, X.name);
}

SplittingReport splitting_test(const std::string& space, Ring ring, const ResourceBudget& budget)
{
    SplittingReport out;
    out.space = space;
    out.ring = ring;
    out.pairing = cup_pairing(space, 2, 2, ring, budget);
    BilinearForm b = out.pairing.products;
    out.refinement = quadratic_refinement_exists(out.pairing.left, out.pairing.target, b);
    return out;
}

// --------------------------------------------------------------- naturality

Integer evaluate_on_subtorus(const CellularCohomology& H, int k, const std::vector<Integer>& cochain,
                             const std::vector<int>& coordinates)
{
    // [T_I] = sum of the cells with e0 or e1 on I and v0 elsewhere
    const int n = H.dimension();
    if (static_cast<int>(coordinates.size()) != k)
        throw std::invalid_argument("evaluate_on_subtorus: degree mismatch");
    Integer s = 0;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        CellCode c = 0;
        for (int i = 0; i < k; ++i)
            c = TorusComplex::with_state(c, n, coordinates[static_cast<std::size_t>(i)], (mask >> i) & 1u ? kE1 : kE0);
        s += H.evaluate(k, cochain, c);
    }
    return H.reduce(s);
}

namespace {

void subsets_of(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (int i = start; i < n; ++i) {
        cur.push_back(i);
        subsets_of(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> subsets_of(int n, int k)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    subsets_of(n, k, 0, cur, out);
    return out;
}

}  // namespace

NaturalityReport check_naturality(const CellularCohomology& H, int p, int q)
{
    NaturalityReport rep;
    const int n = H.dimension();
    if (p + q > n)
        return rep;
    auto Ip = subsets_of(n, p), Iq = subsets_of(n, q), Ipq = subsets_of(n, p + q);
    auto evals = [&](int k, const std::vector<Integer>& c, const std::vector<std::vector<int>>& sets) {
        std::map<std::vector<int>, Integer> m;
        for (const auto& I : sets)
            m[I] = evaluate_on_subtorus(H, k, c, I);
        return m;
    };
    for (std::size_t i = 0; i < H.generators(p).size(); ++i)
        for (std::size_t j = 0; j < H.generators(q).size(); ++j) {
            const auto& a = H.generators(p)[i];
            const auto& b = H.generators(q)[j];
            auto ea = evals(p, a, Ip), eb = evals(q, b, Iq);
            auto ec = evals(p + q, H.cup(p, a, q, b), Ipq);
            for (const auto& K : Ipq) {
                // (a ^ b)_K = sum over splittings K = I u J of sign(I, J) a_I b_J
                Integer expect = 0;
                for (const auto& I : Ip) {
                    if (!std::includes(K.begin(), K.end(), I.begin(), I.end()))
                        continue;
                    std::vector<int> J;
                    std::set_difference(K.begin(), K.end(), I.begin(), I.end(), std::back_inserter(J));
                    int inversions = 0;
                    for (int x : I)
                        for (int y : J)
                            inversions += x > y ? 1 : 0;
                    expect += (inversions % 2 ? -1 : 1) * ea[I] * eb[J];
                }
                expect = H.reduce(expect);
                if (ec[K] != expect && rep.ok) {
                    rep.ok = false;
                    rep.first_failure = "generators (" + std::to_string(i) + ", " + std::to_string(j) +
                                        ") on subtorus of size " + std::to_string(K.size()) + ": got " +
                                        ec[K].get_str() + ", expected " + expect.get_str();
                }
            }
            ++rep.pairs_checked;
        }
    return rep;
}

}  // namespace flatk
