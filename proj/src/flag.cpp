#include "flatk/flag.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <queue>
#include <sstream>

namespace flatk {

// ------------------------------------------------------------------ budget

std::size_t ResourceBudget::memory_bytes() const
{
    return static_cast<std::size_t>(memory_gib * 1024.0 * 1024.0 * 1024.0);
}

BudgetClock::BudgetClock(const ResourceBudget& budget) : budget_(budget), start_(std::chrono::steady_clock::now()) {}

void BudgetClock::check(const char* stage) const
{
    double hours = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() / 3600.0;
    if (hours > budget_.hours) {
        std::ostringstream os;
        os << "time budget of " << budget_.hours << " h exceeded during " << stage;
        throw ResourceBudgetExceeded(os.str());
    }
}

void BudgetClock::require_memory(std::size_t bytes, const char* stage) const
{
    if (bytes > budget_.memory_bytes()) {
        std::ostringstream os;
        os << stage << " needs about " << double(bytes) / (1024.0 * 1024.0 * 1024.0) << " GiB, budget is "
           << budget_.memory_gib << " GiB";
        throw ResourceBudgetExceeded(os.str());
    }
}

// ------------------------------------------------------------------- codec

std::uint64_t torus_flag_count(int n, int p)
{
    if (p < 0 || p > n)
        return 0;
    // 4^n times the number of maps {coordinates} -> {0..p} hitting 1..p
    std::int64_t surj = 0;
    std::int64_t binom = 1;
    for (int j = 0; j <= p; ++j) {
        std::int64_t pw = 1;
        for (int i = 0; i < n; ++i)
            pw *= (p + 1 - j);
        surj += (j % 2 ? -1 : 1) * binom * pw;
        binom = binom * (p - j) / (j + 1);
    }
    return (std::uint64_t(1) << (2 * n)) * static_cast<std::uint64_t>(surj);
}

namespace {

constexpr unsigned kStateMask = 3u;

inline unsigned make_field(unsigned final_state, unsigned k, unsigned start)
{
    return final_state | (k << 2) | (start << 5);
}

inline unsigned field_state(unsigned f) { return f & kStateMask; }
inline unsigned field_switch(unsigned f) { return (f >> 2) & 7u; }
inline unsigned field_start(unsigned f) { return (f >> 5) & 1u; }

unsigned act_field(unsigned f, bool neg, bool shift)
{
    unsigned s = field_state(f);
    if (!is_edge(s))
        return s ^ (shift ? 1u : 0u);
    unsigned k = field_switch(f);
    unsigned st = s ^ ((neg ? 1u : 0u) ^ (shift ? 1u : 0u));
    unsigned start = k ? field_start(f) ^ (shift ? 1u : 0u) : 0u;
    return make_field(st, k, start);
}

inline FlagKey with_degree(FlagKey body, int p) { return body | (FlagKey(p) << 60); }

}  // namespace

FlagCodec::FlagCodec(int n) : n_(n)
{
    if (n < 0 || n > kMaxFlagTorusDimension)
        throw std::invalid_argument("FlagCodec: torus dimension out of range");
}

FlagKey FlagCodec::encode(const std::vector<CellCode>& chain) const
{
    if (chain.empty())
        throw std::invalid_argument("FlagCodec::encode: empty chain");
    int p = static_cast<int>(chain.size()) - 1;
    for (int j = 0; j < p; ++j)
        if (chain[j] == chain[j + 1])
            throw std::invalid_argument("FlagCodec::encode: chain is not strict");
    FlagKey body = 0;
    for (int i = 0; i < n_; ++i) {
        unsigned first = TorusComplex::state(chain[0], n_, i);
        unsigned last = TorusComplex::state(chain[p], n_, i);
        unsigned f;
        if (!is_edge(last)) {
            for (auto c : chain)
                if (TorusComplex::state(c, n_, i) != last)
                    throw std::invalid_argument("FlagCodec::encode: not a chain of faces");
            f = last;
        } else {
            int k = 0;
            while (!is_edge(TorusComplex::state(chain[k], n_, i)))
                ++k;
            for (int j = 0; j <= p; ++j) {
                unsigned s = TorusComplex::state(chain[j], n_, i);
                if ((j < k && s != first) || (j >= k && s != last))
                    throw std::invalid_argument("FlagCodec::encode: not a chain of faces");
            }
            f = make_field(last, static_cast<unsigned>(k), k ? first : 0u);
        }
        body = (body << 6) | f;
    }
    return with_degree(body, p);
}

CellCode FlagCodec::cell_at(FlagKey k, int j) const
{
    CellCode c = 0;
    for (int i = 0; i < n_; ++i) {
        unsigned f = field(k, i);
        unsigned s = field_state(f);
        if (is_edge(s) && static_cast<unsigned>(j) < field_switch(f))
            s = field_start(f);
        c = (c << 2) | s;
    }
    return c;
}

std::vector<CellCode> FlagCodec::decode(FlagKey k) const
{
    std::vector<CellCode> out;
    for (int j = 0; j <= degree(k); ++j)
        out.push_back(cell_at(k, j));
    return out;
}

FlagKey FlagCodec::face(FlagKey k, int i) const
{
    int p = degree(k);
    if (p == 0 || i < 0 || i > p)
        throw std::invalid_argument("FlagCodec::face: bad face index");
    FlagKey body = 0;
    for (int c = 0; c < n_; ++c) {
        unsigned f = field(k, c);
        unsigned s = field_state(f);
        if (is_edge(s)) {
            unsigned sw = field_switch(f);
            if (sw > static_cast<unsigned>(i)) {
                --sw;
                f = make_field(s, sw, sw ? field_start(f) : 0u);
            } else if (i == p && sw == static_cast<unsigned>(p)) {
                f = field_start(f);  // the edge only occurred at the deleted top
            }
        }
        body = (body << 6) | f;
    }
    return with_degree(body, p - 1);
}

FlagKey FlagCodec::sub_flag(FlagKey k, int first, int last) const
{
    int p = degree(k);
    if (first < 0 || last > p || first > last)
        throw std::invalid_argument("FlagCodec::sub_flag: bad range");
    FlagKey body = 0;
    for (int c = 0; c < n_; ++c) {
        unsigned f = field(k, c);
        unsigned s = field_state(f);
        if (is_edge(s)) {
            int sw = static_cast<int>(field_switch(f));
            if (sw <= first)
                f = s;
            else if (sw > last)
                f = field_start(f);
            else
                f = make_field(s, static_cast<unsigned>(sw - first), field_start(f));
        }
        body = (body << 6) | f;
    }
    return with_degree(body, last - first);
}

FlagKey FlagCodec::act(const HalfAffineMap& g, FlagKey k) const
{
    FlagKey body = 0;
    for (int i = 0; i < n_; ++i)
        body = (body << 6) | act_field(field(k, i), (g.negate_mask() >> i) & 1u, (g.shift_mask() >> i) & 1u);
    return with_degree(body, degree(k));
}

// ----------------------------------------------------------- FlagSymmetry

FlagSymmetry::FlagSymmetry(const FlagCodec& codec, const SymmetryGroup& G) : n_(codec.dimension())
{
    if (G.dimension() != n_)
        throw std::invalid_argument("FlagSymmetry: group and torus dimensions differ");
    tables_.resize(G.order());
    for (std::size_t e = 0; e < G.order(); ++e) {
        const auto& g = G.elements()[e];
        tables_[e].resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i)
            for (unsigned f = 0; f < 64; ++f)
                tables_[e][static_cast<std::size_t>(i)][f] = static_cast<std::uint8_t>(
                    act_field(f, (g.negate_mask() >> i) & 1u, (g.shift_mask() >> i) & 1u));
    }
}

FlagKey FlagSymmetry::act(std::size_t element, FlagKey k) const
{
    const auto& t = tables_[element];
    FlagKey body = 0;
    for (int i = 0; i < n_; ++i)
        body = (body << 6) | t[static_cast<std::size_t>(i)][(k >> (6 * (n_ - 1 - i))) & 63u];
    return with_degree(body, FlagCodec::degree(k));
}

FlagKey FlagSymmetry::canonical(FlagKey k, std::size_t* element) const
{
    FlagKey best = k;
    std::size_t best_e = 0;
    for (std::size_t e = 1; e < tables_.size(); ++e) {
        FlagKey img = act(e, k);
        if (img < best) {
            best = img;
            best_e = e;
        }
    }
    // every element is an involution: g.k = rep  <=>  g.rep = k
    if (element)
        *element = best_e;
    return best;
}

// ------------------------------------------------------------ FlagComplex

FlagComplex::FlagComplex(const TorusComplex& T, const SymmetryGroup& G, const ResourceBudget& budget)
    : T_(&T), G_(&G), codec_(T.dimension()), symmetry_(codec_, G)
{
    const int n = T.dimension();
    if (G.dimension() != n)
        throw std::invalid_argument("FlagComplex: group and torus dimensions differ");
    CellOrbits check(T, G);  // throws CellStabilizer for a non-free action
    (void)check;

    BudgetClock clock(budget);
    std::size_t estimate = 0;
    for (int p = 0; p <= n; ++p) {
        std::size_t c = torus_flag_count(n, p) / G.order();
        // keys, faces, cofaces and the per-cell reduction state
        estimate += c * (8 + 8 * static_cast<std::size_t>(p + 1) + 4 + 14);
    }
    clock.require_memory(estimate, "flag complex");

    const std::size_t order = G.order();

    keys_.resize(static_cast<std::size_t>(n) + 1);
    faces_.resize(static_cast<std::size_t>(n) + 1);
    std::vector<unsigned> fields(static_cast<std::size_t>(n));
    for (int p = 0; p <= n; ++p) {
        auto& out = keys_[static_cast<std::size_t>(p)];
        out.reserve(torus_flag_count(n, p) / order);
        std::vector<unsigned> sw(static_cast<std::size_t>(n), 0);
        std::vector<unsigned> hits(static_cast<std::size_t>(p) + 1);
        std::uint64_t assignments = 1;
        for (int i = 0; i < n; ++i)
            assignments *= static_cast<std::uint64_t>(p + 1);
        for (std::uint64_t a = 0; a < assignments; ++a) {
            std::uint64_t r = a;
            std::fill(hits.begin(), hits.end(), 0u);
            for (int i = n - 1; i >= 0; --i) {
                sw[static_cast<std::size_t>(i)] = static_cast<unsigned>(r % static_cast<std::uint64_t>(p + 1));
                r /= static_cast<std::uint64_t>(p + 1);
                hits[sw[static_cast<std::size_t>(i)]] = 1;
            }
            bool onto = true;
            for (int j = 1; j <= p; ++j)
                onto = onto && hits[static_cast<std::size_t>(j)];
            if (!onto)
                continue;
            clock.check("flag enumeration");
            for (std::uint64_t choice = 0; choice < (std::uint64_t(1) << (2 * n)); ++choice) {
                FlagKey body = 0;
                for (int i = 0; i < n; ++i) {
                    unsigned c = (choice >> (2 * (n - 1 - i))) & 3u;
                    unsigned k = sw[static_cast<std::size_t>(i)];
                    // switch 0: any of the four states; otherwise an edge and its start vertex
                    unsigned f = k == 0 ? c : make_field(2u + (c & 1u), k, c >> 1);
                    body = (body << 6) | f;
                }
                FlagKey key = with_degree(body, p);
                bool minimal = true;
                for (std::size_t e = 1; e < order && minimal; ++e)
                    minimal = symmetry_.act(e, key) > key;
                if (minimal)
                    out.push_back(key);
            }
        }
        std::sort(out.begin(), out.end());
        if (out.size() * order != torus_flag_count(n, p))
            throw CellStabilizer("flag orbit count mismatch in degree " + std::to_string(p));
    }

    for (int p = 1; p <= n; ++p) {
        const auto& ks = keys_[static_cast<std::size_t>(p)];
        auto& fs = faces_[static_cast<std::size_t>(p)];
        fs.resize(ks.size() * static_cast<std::size_t>(p + 1));
        for (std::size_t j = 0; j < ks.size(); ++j) {
            if ((j & 0xFFFFF) == 0)
                clock.check("face computation");
            for (int i = 0; i <= p; ++i)
                fs[j * static_cast<std::size_t>(p + 1) + static_cast<std::size_t>(i)] =
                    static_cast<std::uint32_t>(index_of(codec_.face(ks[j], i)));
        }
    }
}

std::size_t FlagComplex::total_count() const
{
    std::size_t s = 0;
    for (const auto& k : keys_)
        s += k.size();
    return s;
}

std::size_t FlagComplex::index_of(FlagKey k) const
{
    FlagKey rep = canonical(k);
    const auto& ks = keys_.at(static_cast<std::size_t>(FlagCodec::degree(k)));
    auto it = std::lower_bound(ks.begin(), ks.end(), rep);
    if (it == ks.end() || *it != rep)
        throw std::logic_error("FlagComplex::index_of: key is not a flag of this complex");
    return static_cast<std::size_t>(it - ks.begin());
}

ChainComplex FlagComplex::chain_complex(std::size_t max_cells) const
{
    if (total_count() > max_cells)
        throw ResourceBudgetExceeded("flag complex has " + std::to_string(total_count()) +
                                     " simplices; explicit chain complex limited to " + std::to_string(max_cells));
    const int n = dimension();
    std::vector<std::size_t> ranks;
    std::vector<IntMatrix> bds;
    for (int p = 0; p <= n; ++p)
        ranks.push_back(count(p));
    for (int p = 1; p <= n; ++p) {
        IntMatrix B(count(p - 1), count(p));
        for (std::size_t j = 0; j < count(p); ++j)
            for (int i = 0; i <= p; ++i)
                B.add(face(p, j, i), j, i % 2 ? -1 : 1);
        bds.push_back(std::move(B));
    }
    return ChainComplex(0, std::move(ranks), std::move(bds));
}

// ------------------------------------------------------ coreduction engine

namespace {

enum : std::uint8_t { kAlive = 0, kCritical = 1, kLower = 2, kUpper = 3 };

struct Incidence {
    std::uint32_t index;
    std::int64_t coef;
};

class Coreducer {
public:
    Coreducer(const FlagComplex& F, const BudgetClock& clock) : F_(F), clock_(clock), n_(F.dimension())
    {
        offset_.push_back(0);
        for (int p = 0; p <= n_; ++p)
            offset_.push_back(offset_.back() + F.count(p));
        std::size_t total = offset_.back();
        if (total >= std::numeric_limits<std::uint32_t>::max())
            throw ResourceBudgetExceeded("flag complex too large for 32-bit indexing");
        kind_.assign(total, kAlive);
        time_.assign(total, 0);
        partner_.assign(total, 0);
        // cofaces in CSR form, per degree
        cob_off_.resize(static_cast<std::size_t>(n_) + 1);
        cob_.resize(static_cast<std::size_t>(n_) + 1);
        for (int p = 0; p < n_; ++p) {
            auto& off = cob_off_[static_cast<std::size_t>(p)];
            auto& cob = cob_[static_cast<std::size_t>(p)];
            off.assign(F.count(p) + 1, 0);
            for (std::size_t j = 0; j < F.count(p + 1); ++j)
                for (int i = 0; i <= p + 1; ++i)
                    ++off[F.face(p + 1, j, i) + 1];
            for (std::size_t t = 0; t < F.count(p); ++t)
                off[t + 1] += off[t];
            cob.resize(off.back());
            std::vector<std::uint32_t> fill(off.begin(), off.end() - 1);
            for (std::size_t j = 0; j < F.count(p + 1); ++j)
                for (int i = 0; i <= p + 1; ++i)
                    cob[fill[F.face(p + 1, j, i)]++] = static_cast<std::uint32_t>(j);
        }
    }

    std::map<int, FinAbGroup> run(std::vector<std::size_t>& critical_counts)
    {
        reduce();
        return morse_homology(critical_counts);
    }

private:
    int degree_of(std::uint32_t g) const
    {
        return static_cast<int>(std::upper_bound(offset_.begin(), offset_.end(), g) - offset_.begin()) - 1;
    }

    // Faces of global cell g with aggregated coefficients, optionally only alive ones.
    void faces(std::uint32_t g, bool alive_only, std::vector<Incidence>& out) const
    {
        out.clear();
        int p = degree_of(g);
        if (p == 0)
            return;
        std::size_t local = g - offset_[static_cast<std::size_t>(p)];
        for (int i = 0; i <= p; ++i) {
            auto f = static_cast<std::uint32_t>(offset_[static_cast<std::size_t>(p - 1)] + F_.face(p, local, i));
            if (alive_only && kind_[f] != kAlive)
                continue;
            std::int64_t c = i % 2 ? -1 : 1;
            auto it = std::find_if(out.begin(), out.end(), [&](const Incidence& x) { return x.index == f; });
            if (it == out.end())
                out.push_back({f, c});
            else
                it->coef += c;
        }
        out.erase(std::remove_if(out.begin(), out.end(), [](const Incidence& x) { return x.coef == 0; }),
                  out.end());
    }

    void enqueue_cofaces(std::uint32_t g)
    {
        int p = degree_of(g);
        if (p >= n_)
            return;
        std::size_t local = g - offset_[static_cast<std::size_t>(p)];
        const auto& off = cob_off_[static_cast<std::size_t>(p)];
        const auto& cob = cob_[static_cast<std::size_t>(p)];
        for (std::uint32_t e = off[local]; e < off[local + 1]; ++e) {
            auto s = static_cast<std::uint32_t>(offset_[static_cast<std::size_t>(p + 1)] + cob[e]);
            if (kind_[s] == kAlive)
                queue_.push_back(s);
        }
    }

    void make_critical(std::uint32_t c)
    {
        kind_[c] = kCritical;
        time_[c] = ++clock_tick_;
        critical_.push_back(c);
        enqueue_cofaces(c);
    }

    void reduce()
    {
        std::vector<std::vector<std::uint32_t>> candidates(static_cast<std::size_t>(n_) + 1);
        for (std::size_t v = 0; v < F_.count(0); ++v)
            candidates[0].push_back(static_cast<std::uint32_t>(F_.count(0) - 1 - v));
        std::vector<Incidence> fs;
        std::size_t cursor = 0, steps = 0;
        for (;;) {
            while (!queue_.empty()) {
                if ((++steps & 0xFFFFF) == 0)
                    clock_.check("coreduction");
                std::uint32_t s = queue_.front();
                queue_.pop_front();
                if (kind_[s] != kAlive)
                    continue;
                faces(s, true, fs);
                if (fs.empty()) {
                    candidates[static_cast<std::size_t>(degree_of(s))].push_back(s);
                } else if (fs.size() == 1 && (fs[0].coef == 1 || fs[0].coef == -1)) {
                    std::uint32_t t = fs[0].index;
                    kind_[t] = kLower;
                    kind_[s] = kUpper;
                    partner_[t] = s;
                    partner_[s] = t;
                    time_[t] = time_[s] = ++clock_tick_;
                    enqueue_cofaces(t);
                    enqueue_cofaces(s);
                }
            }
            bool found = false;
            for (auto& bucket : candidates) {
                while (!bucket.empty() && !found) {
                    std::uint32_t c = bucket.back();
                    bucket.pop_back();
                    if (kind_[c] != kAlive)
                        continue;
                    faces(c, true, fs);
                    if (fs.empty()) {
                        make_critical(c);
                        found = true;
                    }
                }
                if (found)
                    break;
            }
            if (found)
                continue;
            // no free cell: the lowest alive cell is declared critical
            while (cursor < kind_.size() && kind_[cursor] != kAlive)
                ++cursor;
            if (cursor == kind_.size())
                break;
            make_critical(static_cast<std::uint32_t>(cursor));
        }
    }

    static std::int64_t checked_muladd(std::int64_t acc, std::int64_t a, std::int64_t b)
    {
        std::int64_t prod, sum;
        if (__builtin_mul_overflow(a, b, &prod) || __builtin_add_overflow(acc, prod, &sum))
            throw std::overflow_error("Morse boundary coefficient overflow");
        return sum;
    }

    std::map<int, FinAbGroup> morse_homology(std::vector<std::size_t>& critical_counts)
    {
        std::vector<std::vector<std::uint32_t>> crit(static_cast<std::size_t>(n_) + 1);
        std::sort(critical_.begin(), critical_.end());
        std::vector<std::uint32_t> crit_index(kind_.size(), 0);
        for (auto c : critical_) {
            auto& bucket = crit[static_cast<std::size_t>(degree_of(c))];
            crit_index[c] = static_cast<std::uint32_t>(bucket.size());
            bucket.push_back(c);
        }
        critical_counts.clear();
        std::vector<std::size_t> ranks;
        for (const auto& b : crit) {
            ranks.push_back(b.size());
            critical_counts.push_back(b.size());
        }
        std::vector<IntMatrix> bds;
        std::vector<std::int64_t> coef;
        std::vector<std::uint8_t> queued;
        std::vector<Incidence> fs;
        for (int p = 1; p <= n_; ++p) {
            std::size_t lo = offset_[static_cast<std::size_t>(p - 1)];
            coef.assign(F_.count(p - 1), 0);
            queued.assign(F_.count(p - 1), 0);
            IntMatrix B(ranks[static_cast<std::size_t>(p - 1)], ranks[static_cast<std::size_t>(p)]);
            for (std::size_t col = 0; col < crit[static_cast<std::size_t>(p)].size(); ++col) {
                std::priority_queue<std::pair<std::uint32_t, std::uint32_t>> heap;
                auto push = [&](std::uint32_t g, std::int64_t c) {
                    std::size_t l = g - lo;
                    coef[l] = checked_muladd(coef[l], c, 1);
                    if (!queued[l]) {
                        queued[l] = 1;
                        heap.push({time_[g], g});
                    }
                };
                faces(crit[static_cast<std::size_t>(p)][col], false, fs);
                for (const auto& f : fs)
                    push(f.index, f.coef);
                std::size_t steps = 0;
                while (!heap.empty()) {
                    if ((++steps & 0xFFFFF) == 0)
                        clock_.check("Morse boundary");
                    std::uint32_t x = heap.top().second;
                    heap.pop();
                    std::size_t l = x - lo;
                    std::int64_t a = coef[l];
                    coef[l] = 0;
                    queued[l] = 0;
                    if (a == 0)
                        continue;
                    if (kind_[x] == kCritical) {
                        B.add(crit_index[x], col, Integer(static_cast<long>(a)));
                    } else if (kind_[x] == kLower) {
                        // x is eliminated against its partner y: x -> -u^-1 (dy - u x)
                        std::uint32_t y = partner_[x];
                        faces(y, false, fs);
                        std::int64_t u = 0;
                        for (const auto& f : fs)
                            if (f.index == x)
                                u = f.coef;
                        for (const auto& f : fs)
                            if (f.index != x)
                                push(f.index, checked_muladd(0, -a * u, f.coef));
                    }
                }
            }
            bds.push_back(std::move(B));
        }
        ChainComplex M(0, std::move(ranks), std::move(bds));
        return homology(M);
    }

    const FlagComplex& F_;
    const BudgetClock& clock_;
    int n_;
    std::vector<std::size_t> offset_;
    std::vector<std::uint8_t> kind_;
    std::vector<std::uint32_t> time_;
    std::vector<std::uint32_t> partner_;
    std::vector<std::vector<std::uint32_t>> cob_off_;
    std::vector<std::vector<std::uint32_t>> cob_;
    std::deque<std::uint32_t> queue_;
    std::vector<std::uint32_t> critical_;
    std::uint32_t clock_tick_ = 0;
};

}  // namespace

FlagComplex::Homology FlagComplex::homology(const ResourceBudget& budget) const
{
    BudgetClock clock(budget);
    Coreducer engine(*this, clock);
    Homology out;
    out.groups = engine.run(out.critical);
    return out;
}

SubdivisionCheck check_subdivision_invariance(const BuiltinSpace& X, const ResourceBudget& budget)
{
    FlagComplex F(X.torus, X.group, budget);
    SubdivisionCheck out;
    out.flag = F.homology(budget).groups;
    out.cellular = flatk::homology(quotient_chain_complex(X.torus, X.group));
    for (int p = 0; p <= F.dimension(); ++p)
        out.simplices.push_back(F.count(p));
    return out;
}

}  // namespace flatk
