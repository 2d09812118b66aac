#include "flatk/complexes.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace flatk {

ChainComplex::ChainComplex(int min_degree, std::vector<std::size_t> ranks,
                           std::vector<IntMatrix> boundaries,
                           std::map<int, std::vector<std::string>> labels)
    : min_degree_(min_degree), ranks_(std::move(ranks)), boundaries_(std::move(boundaries)),
      labels_(std::move(labels))
{
    std::size_t expected = ranks_.empty() ? 0 : ranks_.size() - 1;
    if (boundaries_.size() != expected)
        throw MalformedComplex("ChainComplex: need one boundary per adjacent degree pair");
    for (std::size_t i = 0; i < boundaries_.size(); ++i) {
        const auto& b = boundaries_[i];
        if (b.rows() != ranks_[i] || b.cols() != ranks_[i + 1])
            throw MalformedComplex("ChainComplex: boundary " + std::to_string(min_degree_ + i + 1) +
                                   " has the wrong shape");
    }
    for (std::size_t i = 0; i + 1 < boundaries_.size(); ++i)
        if (!(boundaries_[i] * boundaries_[i + 1]).is_zero())
            throw MalformedComplex("ChainComplex: d*d != 0 at degree " +
                                   std::to_string(min_degree_ + i + 2));
    for (const auto& [d, l] : labels_)
        if (l.size() != rank(d))
            throw MalformedComplex("ChainComplex: label count mismatch");
}

std::size_t ChainComplex::rank(int d) const
{
    if (ranks_.empty() || d < min_degree_ || d > max_degree())
        return 0;
    return ranks_[static_cast<std::size_t>(d - min_degree_)];
}

IntMatrix ChainComplex::boundary(int d) const
{
    if (ranks_.empty() || d <= min_degree_ || d > max_degree())
        return IntMatrix(rank(d - 1), rank(d));
    return boundaries_[static_cast<std::size_t>(d - min_degree_ - 1)];
}

const std::vector<std::string>* ChainComplex::labels(int d) const
{
    auto it = labels_.find(d);
    return it == labels_.end() ? nullptr : &it->second;
}

std::size_t ChainComplex::total_rank() const
{
    std::size_t n = 0;
    for (auto r : ranks_)
        n += r;
    return n;
}

long ChainComplex::euler_characteristic() const
{
    long chi = 0;
    for (int d = min_degree_; d <= max_degree(); ++d)
        chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(rank(d));
    return chi;
}

bool ChainComplex::operator==(const ChainComplex& other) const
{
    return min_degree_ == other.min_degree_ && ranks_ == other.ranks_ &&
           boundaries_ == other.boundaries_ && labels_ == other.labels_;
}

std::map<int, FinAbGroup> homology(const ChainComplex& C)
{
    std::map<int, FinAbGroup> out;
    for (int d = C.min_degree(); d <= C.max_degree(); ++d)
        out[d] = homology_at(C.boundary(d + 1), C.boundary(d));
    return out;
}

std::map<int, FinAbGroup> cohomology(const ChainComplex& C)
{
    std::map<int, FinAbGroup> out;
    for (const auto& [d, g] : homology(C))
        out[-d] = g;
    return out;
}

long euler_characteristic(const std::map<int, FinAbGroup>& H)
{
    long chi = 0;
    for (const auto& [d, g] : H)
        chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(g.rank());
    return chi;
}

namespace {

std::size_t rank_mod2(const IntMatrix& M)
{
    std::size_t words = (M.cols() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> rows;
    rows.reserve(M.rows());
    for (std::size_t r = 0; r < M.rows(); ++r) {
        std::vector<std::uint64_t> bits(words, 0);
        bool any = false;
        for (const auto& e : M.row(r))
            if (mpz_odd_p(e.value.get_mpz_t())) {
                bits[e.col / 64] |= std::uint64_t(1) << (e.col % 64);
                any = true;
            }
        if (any)
            rows.push_back(std::move(bits));
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < M.cols() && rank < rows.size(); ++c) {
        std::size_t w = c / 64;
        std::uint64_t mask = std::uint64_t(1) << (c % 64);
        std::size_t piv = rank;
        while (piv < rows.size() && !(rows[piv][w] & mask))
            ++piv;
        if (piv == rows.size())
            continue;
        std::swap(rows[rank], rows[piv]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r)
            if (rows[r][w] & mask)
                for (std::size_t k = w; k < words; ++k)
                    rows[r][k] ^= rows[rank][k];
        ++rank;
    }
    return rank;
}

}  // namespace

std::map<int, std::size_t> homology_mod2(const ChainComplex& C)
{
    std::map<int, std::size_t> ranks;
    for (int d = C.min_degree(); d <= C.max_degree() + 1; ++d)
        ranks[d] = rank_mod2(C.boundary(d));
    std::map<int, std::size_t> out;
    for (int d = C.min_degree(); d <= C.max_degree(); ++d)
        out[d] = C.rank(d) - ranks[d] - ranks[d + 1];
    return out;
}

ChainComplex dualize(const ChainComplex& C)
{
    if (C.empty())
        return C;
    // D_{-d} = C_d^*, boundary(D)_{-d} = boundary(C)_{d+1}^T
    int lo = -C.max_degree();
    std::vector<std::size_t> ranks;
    std::vector<IntMatrix> bds;
    std::map<int, std::vector<std::string>> labels;
    for (int e = lo; e <= -C.min_degree(); ++e) {
        ranks.push_back(C.rank(-e));
        if (const auto* l = C.labels(-e))
            labels[e] = *l;
    }
    for (int e = lo + 1; e <= -C.min_degree(); ++e)
        bds.push_back(C.boundary(-e + 1).transpose());
    return ChainComplex(lo, std::move(ranks), std::move(bds), std::move(labels));
}

// ---------------------------------------------------------- ChainEquivalence

std::optional<std::string> ChainEquivalence::verify() const
{
    auto get = [](const GradedMap& m, int d, std::size_t rows, std::size_t cols) {
        auto it = m.find(d);
        return it == m.end() ? IntMatrix(rows, cols) : it->second;
    };
    int lo = std::min(source.min_degree(), target.min_degree());
    int hi = std::max(source.max_degree(), target.max_degree());
    for (int d = lo; d <= hi; ++d) {
        std::size_t s = source.rank(d), t = target.rank(d);
        IntMatrix f = get(to_target, d, t, s);
        IntMatrix g = get(to_source, d, s, t);
        IntMatrix f_lo = get(to_target, d - 1, target.rank(d - 1), source.rank(d - 1));
        IntMatrix g_lo = get(to_source, d - 1, source.rank(d - 1), target.rank(d - 1));
        if (target.boundary(d) * f != f_lo * source.boundary(d))
            return "to_target is not a chain map in degree " + std::to_string(d);
        if (source.boundary(d) * g != g_lo * target.boundary(d))
            return "to_source is not a chain map in degree " + std::to_string(d);

        IntMatrix h = get(source_homotopy, d, source.rank(d + 1), s);
        IntMatrix h_lo = get(source_homotopy, d - 1, s, source.rank(d - 1));
        IntMatrix lhs = g * f - IntMatrix::identity(s);
        IntMatrix rhs = source.boundary(d + 1) * h + h_lo * source.boundary(d);
        if (lhs != rhs)
            return "source homotopy identity fails in degree " + std::to_string(d);

        IntMatrix k = get(target_homotopy, d, target.rank(d + 1), t);
        IntMatrix k_lo = get(target_homotopy, d - 1, t, target.rank(d - 1));
        IntMatrix lhs_t = f * g - IntMatrix::identity(t);
        IntMatrix rhs_t = target.boundary(d + 1) * k + k_lo * target.boundary(d);
        if (lhs_t != rhs_t)
            return "target homotopy identity fails in degree " + std::to_string(d);
    }
    return std::nullopt;
}

namespace {

using Chain = std::map<std::size_t, Integer>;

void axpy(Chain& into, const Integer& k, const Chain& x)
{
    if (sgn(k) == 0)
        return;
    for (const auto& [i, v] : x) {
        auto& slot = into[i];
        slot += k * v;
        if (sgn(slot) == 0)
            into.erase(i);
    }
}

// Sequential elimination of unit incidences, tracking the equivalence.
class MorseReducer {
public:
    explicit MorseReducer(const ChainComplex& C) : C_(C), lo_(C.min_degree()), hi_(C.max_degree())
    {
        int n = hi_ - lo_ + 1;
        bd_.resize(n);
        cob_.resize(n);
        alive_.resize(n);
        f_.resize(n);
        g_.resize(n);
        h_.resize(n);
        for (int d = lo_; d <= hi_; ++d) {
            std::size_t r = C.rank(d);
            auto k = idx(d);
            bd_[k].assign(r, {});
            cob_[k].assign(r, {});
            alive_[k].assign(r, true);
            f_[k].resize(r);
            g_[k].resize(r);
            h_[k].assign(r, {});
            for (std::size_t i = 0; i < r; ++i) {
                f_[k][i][i] = 1;
                g_[k][i][i] = 1;
            }
        }
        for (int d = lo_ + 1; d <= hi_; ++d) {
            IntMatrix B = C.boundary(d);
            for (std::size_t r = 0; r < B.rows(); ++r)
                for (const auto& e : B.row(r)) {
                    bd_[idx(d)][e.col][r] = e.value;
                    cob_[idx(d - 1)][r].insert(e.col);
                }
        }
    }

    ChainEquivalence run()
    {
        while (auto p = pick())
            eliminate(p->d, p->a, p->b);
        return assemble();
    }

private:
    struct Pair {
        int d;  // degree of b
        std::size_t a, b;
    };

    std::size_t idx(int d) const { return static_cast<std::size_t>(d - lo_); }

    std::optional<Pair> pick() const
    {
        std::optional<Pair> best;
        std::size_t best_cost = 0;
        for (int d = lo_ + 1; d <= hi_; ++d) {
            const auto& B = bd_[idx(d)];
            for (std::size_t b = 0; b < B.size(); ++b) {
                if (!alive_[idx(d)][b])
                    continue;
                for (const auto& [a, v] : B[b]) {
                    if (cmpabs(v, 1) != 0)
                        continue;
                    std::size_t cost = (cob_[idx(d - 1)][a].size() - 1) * (B[b].size() - 1);
                    if (!best || cost < best_cost) {
                        best = Pair{d, a, b};
                        best_cost = cost;
                    }
                }
            }
        }
        return best;
    }

    void eliminate(int p, std::size_t a, std::size_t b)
    {
        auto P = idx(p), Q = idx(p - 1);
        Integer u = bd_[P][b].at(a);  // +1 or -1, so 1/u == u
        Chain w = bd_[P][b];
        w.erase(a);
        Chain gb = g_[P][b];

        // homotopy and projection updates use the previous projection
        for (std::size_t i = 0; i < f_[Q].size(); ++i) {
            auto it = f_[Q][i].find(a);
            if (it == f_[Q][i].end())
                continue;
            Integer fa = it->second;
            axpy(h_[Q][i], -fa * u, gb);
            f_[Q][i].erase(it);
            axpy(f_[Q][i], -fa * u, w);
        }
        for (auto& fi : f_[P])
            fi.erase(b);

        // boundaries of the other cofaces of a lose their a-component
        std::vector<std::size_t> cofaces(cob_[Q][a].begin(), cob_[Q][a].end());
        for (auto x : cofaces) {
            if (x == b)
                continue;
            Integer c = bd_[P][x].at(a);
            Integer k = -c * u;
            for (const auto& [face, v] : bd_[P][b]) {
                auto& slot = bd_[P][x][face];
                slot += k * v;
                if (sgn(slot) == 0) {
                    bd_[P][x].erase(face);
                    cob_[Q][face].erase(x);
                } else {
                    cob_[Q][face].insert(x);
                }
            }
            axpy(g_[P][x], k, gb);
        }

        // drop b from boundaries of its cofaces
        if (p < hi_)
            for (auto y : cob_[P][b])
                bd_[idx(p + 1)][y].erase(b);
        cob_[P][b].clear();
        for (const auto& [face, v] : bd_[P][b])
            cob_[Q][face].erase(b);
        bd_[P][b].clear();
        if (p - 1 > lo_) {
            for (const auto& [face, v] : bd_[Q][a])
                cob_[idx(p - 2)][face].erase(a);
            bd_[Q][a].clear();
        }
        cob_[Q][a].clear();
        alive_[P][b] = false;
        alive_[Q][a] = false;
    }

    ChainEquivalence assemble() const
    {
        ChainEquivalence eq;
        eq.source = C_;
        std::vector<std::vector<std::size_t>> newidx(alive_.size());
        std::vector<std::size_t> ranks;
        std::map<int, std::vector<std::string>> labels;
        for (int d = lo_; d <= hi_; ++d) {
            auto k = idx(d);
            newidx[k].assign(alive_[k].size(), SIZE_MAX);
            std::size_t n = 0;
            const auto* lab = C_.labels(d);
            for (std::size_t i = 0; i < alive_[k].size(); ++i)
                if (alive_[k][i]) {
                    newidx[k][i] = n++;
                    if (lab)
                        labels[d].push_back((*lab)[i]);
                }
            ranks.push_back(n);
        }
        std::vector<IntMatrix> bds;
        for (int d = lo_ + 1; d <= hi_; ++d) {
            IntMatrix B(ranks[idx(d - 1)], ranks[idx(d)]);
            for (std::size_t j = 0; j < alive_[idx(d)].size(); ++j) {
                if (!alive_[idx(d)][j])
                    continue;
                for (const auto& [i, v] : bd_[idx(d)][j])
                    B.set(newidx[idx(d - 1)][i], newidx[idx(d)][j], v);
            }
            bds.push_back(std::move(B));
        }
        eq.target = ChainComplex(lo_, ranks, std::move(bds), std::move(labels));

        for (int d = lo_; d <= hi_; ++d) {
            auto k = idx(d);
            std::size_t s = C_.rank(d), t = ranks[k];
            IntMatrix F(t, s), G(s, t), H(C_.rank(d + 1), s);
            for (std::size_t i = 0; i < s; ++i) {
                for (const auto& [j, v] : f_[k][i])
                    F.set(newidx[k][j], i, v);
                for (const auto& [j, v] : h_[k][i])
                    H.set(j, i, v);
            }
            for (std::size_t j = 0; j < alive_[k].size(); ++j) {
                if (!alive_[k][j])
                    continue;
                for (const auto& [i, v] : g_[k][j])
                    G.set(i, newidx[k][j], v);
            }
            eq.to_target[d] = std::move(F);
            eq.to_source[d] = std::move(G);
            eq.source_homotopy[d] = std::move(H);
            eq.target_homotopy[d] = IntMatrix(eq.target.rank(d + 1), t);
        }
        return eq;
    }

    const ChainComplex& C_;
    int lo_, hi_;
    // per degree, per cell
    std::vector<std::vector<Chain>> bd_;
    std::vector<std::vector<std::set<std::size_t>>> cob_;
    std::vector<std::vector<bool>> alive_;
    std::vector<std::vector<Chain>> f_;  // original cell -> current cells
    std::vector<std::vector<Chain>> g_;  // current cell -> original cells
    std::vector<std::vector<Chain>> h_;  // original cell -> original cells, degree + 1
};

}  // namespace

ChainEquivalence morse_reduce(const ChainComplex& C)
{
    if (C.empty()) {
        ChainEquivalence eq;
        eq.source = C;
        eq.target = C;
        return eq;
    }
    return MorseReducer(C).run();
}

// ------------------------------------------------------------ serialization

void write_complex(const std::string& directory, const ChainComplex& C)
{
    namespace fs = std::filesystem;
    fs::create_directories(directory);
    nlohmann::json manifest;
    manifest["min_degree"] = C.min_degree();
    manifest["max_degree"] = C.max_degree();
    std::vector<std::size_t> ranks;
    nlohmann::json files = nlohmann::json::object();
    nlohmann::json labels = nlohmann::json::object();
    for (int d = C.min_degree(); d <= C.max_degree(); ++d) {
        ranks.push_back(C.rank(d));
        if (const auto* l = C.labels(d))
            labels[std::to_string(d)] = *l;
        if (d > C.min_degree()) {
            std::string name = "boundary_" + std::to_string(d) + ".txt";
            write_sparse_file((fs::path(directory) / name).string(), C.boundary(d));
            files[std::to_string(d)] = name;
        }
    }
    manifest["ranks"] = ranks;
    manifest["boundaries"] = files;
    if (!labels.empty())
        manifest["labels"] = labels;
    std::ofstream out(fs::path(directory) / "manifest.json");
    out << manifest.dump(2) << '\n';
}

ChainComplex read_complex(const std::string& directory)
{
    namespace fs = std::filesystem;
    std::ifstream in(fs::path(directory) / "manifest.json");
    if (!in)
        throw std::runtime_error("no manifest.json in " + directory);
    nlohmann::json manifest = nlohmann::json::parse(in);
    int lo = manifest.at("min_degree").get<int>();
    int hi = manifest.at("max_degree").get<int>();
    auto ranks = manifest.at("ranks").get<std::vector<std::size_t>>();
    if (ranks.size() != static_cast<std::size_t>(hi - lo + 1))
        throw MalformedComplex("manifest: rank list does not match degree range");
    std::vector<IntMatrix> bds;
    for (int d = lo + 1; d <= hi; ++d) {
        auto name = manifest.at("boundaries").at(std::to_string(d)).get<std::string>();
        bds.push_back(read_sparse_file((fs::path(directory) / name).string()));
    }
    std::map<int, std::vector<std::string>> labels;
    if (manifest.contains("labels"))
        for (auto& [k, v] : manifest["labels"].items())
            labels[std::stoi(k)] = v.get<std::vector<std::string>>();
    return ChainComplex(lo, std::move(ranks), std::move(bds), std::move(labels));
}

}  // namespace flatk
