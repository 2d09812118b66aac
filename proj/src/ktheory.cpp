#include "flatk/ktheory.hpp"

#include "flatk/complexes.hpp"
#include "flatk/torus.hpp"

#include <algorithm>

namespace flatk {

namespace {

FinAbGroup direct_sum(const std::vector<FinAbGroup>& parts)
{
    FinAbGroup out;
    for (const auto& g : parts)
        out = out + g;
    return out;
}

const FinAbGroup& at(const CohomologyTable& H, int k)
{
    auto it = H.find(k);
    if (it == H.end())
        throw std::invalid_argument("ahss_assemble: missing H^" + std::to_string(k));
    return it->second;
}

FinAbGroup z(std::size_t rank, std::vector<long> torsion = {})
{
    std::vector<Integer> t(torsion.begin(), torsion.end());
    return FinAbGroup::from_cyclic(t) + FinAbGroup::free(rank);
}

}  // namespace

FinAbGroup GradedKGroups::total_k0() const { return direct_sum(grK0); }
FinAbGroup GradedKGroups::total_k1() const { return direct_sum(grK1); }

GradedKGroups ahss_assemble(const CohomologyTable& H)
{
    for (int k = 0; k <= 6; ++k)
        at(H, k);
    if (H.rbegin()->first > 6 || H.begin()->first < 0)
        throw std::invalid_argument("ahss_assemble: degrees must be 0..6");
    const auto& top = at(H, 6);
    if (top != FinAbGroup::free(1))
        throw NotOriented("ahss_assemble: H^6 = " + top.to_string() + ", expected Z");
    if (at(H, 0) != FinAbGroup::free(1))
        throw NotOriented("ahss_assemble: H^0 = " + at(H, 0).to_string() + ", expected Z");
    GradedKGroups out;
    for (int k : {0, 2, 4, 6})
        out.grK0.push_back(at(H, k));
    for (int k : {1, 3, 5})
        out.grK1.push_back(at(H, k));
    return out;
}

CohomologyTable cohomology_table(const std::string& space)
{
    auto X = space_by_name(space);
    return cohomology(invariant_cochain_complex(X.torus, X.group));
}

CohomologyTable reference_table(const std::string& space)
{
    // H^1..H^5 of the threefolds; H^0 = H^6 = Z and H^1 = 0 throughout.
    CohomologyTable H;
    if (space == "B") {
        // Dual to H_0 = Z, H_1 = (Z/4)^2, H_2 = 0, H_3 = Z.
        H[0] = z(1);
        H[1] = z(0);
        H[2] = z(0, {4, 4});
        H[3] = z(1);
        return H;
    }
    H[0] = z(1);
    H[1] = z(0);
    H[6] = z(1);
    if (space == "X04") {
        H[2] = z(3, {4, 4, 2, 2, 2});
        H[3] = z(8, {2, 2, 2});
        H[4] = z(3, {2, 2, 2});
        H[5] = z(0, {4, 4, 2, 2, 2});
    } else if (space == "X15") {
        H[2] = z(3, {4, 4, 4});
        H[3] = z(8, {2, 2});
        H[4] = z(3, {2, 2});
        H[5] = z(0, {4, 4, 4});
    } else if (space == "X111") {
        H[2] = z(3, {4, 4, 2, 2});
        H[3] = z(8, {2, 2});
        H[4] = z(3, {2, 2});
        H[5] = z(0, {4, 4, 2, 2});
    } else if (space == "X212") {
        H[2] = z(3, {4, 4, 2, 2});
        H[3] = z(8, {4});
        H[4] = z(3, {4});
        H[5] = z(0, {4, 4, 2, 2});
    } else {
        throw UnknownSpace("no reference table for '" + space + "'");
    }
    return H;
}

const std::vector<std::pair<std::string, std::string>>& mirror_pairs()
{
    static const std::vector<std::pair<std::string, std::string>> pairs = {
        {"X04", "X04"}, {"X111", "X111"}, {"X15", "X212"}};
    return pairs;
}

MirrorReport mirror_graded_check(const std::string& space, const CohomologyTable& H, const std::string& dual,
                                 const CohomologyTable& H_dual)
{
    MirrorReport r;
    r.space = space;
    r.dual = dual;
    r.graded_space = ahss_assemble(H);
    r.graded_dual = ahss_assemble(H_dual);
    r.k0_matches = r.graded_space.total_k0() == r.graded_dual.total_k1();
    r.k1_matches = r.graded_space.total_k1() == r.graded_dual.total_k0();
    return r;
}

MirrorReport mirror_graded_check(const std::string& space, const std::string& dual)
{
    return mirror_graded_check(space, cohomology_table(space), dual, cohomology_table(dual));
}

bool TorsionReport::pass() const
{
    return std::all_of(comparisons.begin(), comparisons.end(), [](const auto& c) { return c.equal(); });
}

TorsionReport torsion_h_check(const std::string& space, const CohomologyTable& H, const std::string& dual,
                              const CohomologyTable& H_dual)
{
    TorsionReport r;
    r.space = space;
    r.dual = dual;
    for (auto [k, l] : {std::pair{2, 3}, std::pair{4, 5}}) {
        TorsionComparison c;
        c.degree = k;
        c.dual_degree = l;
        c.torsion = at(H, k).torsion_part();
        c.dual_torsion = at(H_dual, l).torsion_part();
        r.comparisons.push_back(std::move(c));
    }
    return r;
}

TorsionReport torsion_h_check(const std::string& space, const std::string& dual)
{
    return torsion_h_check(space, cohomology_table(space), dual, cohomology_table(dual));
}

}  // namespace flatk
