#include "flatk/complexes.hpp"
#include "flatk/glattice.hpp"
#include "flatk/torus.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace flatk;

namespace {

RatMatrix3 columns(std::array<std::array<Rational, 3>, 3> cols)
{
    RatMatrix3 m;
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 3; ++r)
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
    return m;
}

bool same_lattice(const GLattice& a, const GLattice& b)
{
    auto T = inverse(a.basis()) * b.basis();
    return is_integral(T) && abs(determinant(T)) == 1;
}

// Independent check of a witness: W commutes with every D_g and carries the
// basis of L1 to a basis of L2.
bool witness_ok(const GLattice& L1, const GLattice& L2, const RatMatrix3& W)
{
    for (const auto& s : point_group_signs()) {
        RatMatrix3 D = rat_diagonal({s[0], s[1], s[2]});
        if (D * W != W * D)
            return false;
    }
    auto T = inverse(L2.basis()) * W * L1.basis();
    return is_integral(T) && abs(determinant(T)) == 1;
}

const Rational half(1, 2);

}  // namespace

TEST_CASE("builtin lattices", "[glattice]")
{
    CHECK(builtin_lattice("M04").basis() == rat_identity());
    CHECK(builtin_lattice("M15").basis() == columns({{{1, 0, 0}, {0, 1, 0}, {half, half, half}}}));
    auto M212 = builtin_lattice("M212");
    CHECK(M212.contains({half, half, 0}));
    CHECK(M212.contains({0, half, half}));
    CHECK_FALSE(M212.contains({half, 0, 0}));
    const std::map<std::string, int> index{{"M04", 1}, {"M15", 2}, {"M111", 2}, {"M212", 4}};
    for (const auto& [name, i] : index) {
        auto L = builtin_lattice(name);
        CHECK(L.covolume() == Rational(1, i));
        for (std::size_t g = 0; g < kPointGroupOrder; ++g)
            CHECK(L.action(g) * L.action(g) == IntMatrix::identity(3));
    }
    CHECK_THROWS_AS(builtin_lattice("M99"), UnknownLattice);
    // not preserved by alpha: (1,1,0) -> (1,-1,0) differs by (0,2,0)
    CHECK_THROWS_AS(GLattice("bad", columns({{{1, 1, 0}, {0, 4, 0}, {0, 0, 1}}})), InvalidLattice);
    CHECK_THROWS_AS(GLattice("thirds", columns({{{Rational(1, 3), 0, 0}, {0, 1, 0}, {0, 0, 1}}})), InvalidLattice);
    CHECK_THROWS_AS(GLattice("flat", columns({{{1, 0, 0}, {1, 0, 0}, {0, 0, 1}}})), InvalidLattice);
}

TEST_CASE("dual lattices", "[glattice]")
{
    CHECK(same_lattice(dual_lattice(builtin_lattice("M04")), builtin_lattice("M04")));
    for (const auto& name : builtin_lattice_names()) {
        auto L = builtin_lattice(name);
        auto DD = dual_lattice(dual_lattice(L));
        CHECK(same_lattice(DD, L));
        CHECK(DD.name() == name);
        CHECK(dual_lattice(L).covolume() * L.covolume() == 1);
    }
    // dual(M15) = {v in Z^3 : v1 + v2 + v3 even}
    auto D = dual_lattice(builtin_lattice("M15"));
    CHECK(D.covolume() == 2);
    for (int c = 0; c < 3; ++c) {
        Rational s = 0;
        for (int r = 0; r < 3; ++r) {
            const auto& x = D.basis()[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            CHECK(x.get_den() == 1);
            s += x;
        }
        CHECK(s.get_num() % 2 == 0);
    }
}

TEST_CASE("equivariant isomorphisms reproduce the T-duality pattern", "[glattice]")
{
    const std::map<std::string, std::string> dual_of{{"M04", "M04"}, {"M111", "M111"}, {"M15", "M212"}, {"M212", "M15"}};
    for (const auto& a : builtin_lattice_names()) {
        auto D = dual_lattice(builtin_lattice(a));
        for (const auto& b : builtin_lattice_names()) {
            INFO(a << "^ vs " << b);
            auto W = equivariant_isomorphic(D, builtin_lattice(b));
            CHECK(W.has_value() == (dual_of.at(a) == b));
            if (W) {
                CHECK(witness_ok(D, builtin_lattice(b), *W));
                CHECK(is_equivariant_isomorphism(D, builtin_lattice(b), *W));
            }
        }
    }
    // distinct builtins are never equivariantly isomorphic
    for (const auto& a : builtin_lattice_names())
        for (const auto& b : builtin_lattice_names())
            CHECK(equivariant_isomorphic(builtin_lattice(a), builtin_lattice(b)).has_value() == (a == b));
    CHECK_FALSE(is_equivariant_isomorphism(builtin_lattice("M04"), builtin_lattice("M15"), rat_identity()));
}

TEST_CASE("equivariant maps are diagonal", "[glattice][random]")
{
    // The averaging projector sum_g D_g A D_g lands in the commutant; it is
    // always diagonal because the three nontrivial characters differ on
    // every pair of coordinates.
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> v(-9, 9);
    for (int trial = 0; trial < 200; ++trial) {
        RatMatrix3 A;
        for (auto& row : A)
            for (auto& x : row)
                x = v(rng);
        RatMatrix3 P{};
        for (auto& row : P)
            for (auto& x : row)
                x = 0;
        for (const auto& s : point_group_signs()) {
            RatMatrix3 D = rat_diagonal({s[0], s[1], s[2]});
            auto term = D * A * D;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += term[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const auto& x = P[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (i == j)
                    CHECK(x == 4 * A[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]);
                else
                    CHECK(x == 0);
            }
    }
}

TEST_CASE("G-modules, exterior powers and invariants", "[glattice]")
{
    CHECK(exterior_power(GModule::trivial(3), 0) == GModule::trivial(1));
    auto M04 = module_of(builtin_lattice("M04"));
    auto M04dual = dual_module(M04);
    CHECK(exterior_power(M04dual, 3) == GModule::trivial(1));
    CHECK_THROWS_AS(exterior_power(M04dual, 4), BadDegree);
    // wedge^2 M04* is M04 with the basis reversed: e23 <-> e1, e13 <-> e2, e12 <-> e3
    auto W2 = exterior_power(M04dual, 2);
    for (std::size_t g = 0; g < kPointGroupOrder; ++g)
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(W2.action(g).at(i, i) == M04.action(g).at(2 - i, 2 - i));

    CHECK(invariants(GModule::trivial()).group == FinAbGroup::free(1));
    CHECK(invariants(M04).group == FinAbGroup::zero());
    for (const auto& name : builtin_lattice_names()) {
        INFO(name);
        auto L = builtin_lattice(name);
        auto Mstar = dual_module(module_of(L));
        std::vector<std::size_t> ranks;
        for (std::size_t t = 0; t <= 3; ++t) {
            auto P = exterior_power(Mstar, t);
            CHECK(P.rank() == std::vector<std::size_t>{1, 3, 3, 1}[t]);
            ranks.push_back(invariants(P).group.rank());
        }
        CHECK(ranks == std::vector<std::size_t>{1, 0, 0, 1});
        CHECK(invariants(Mstar).group.is_zero());
        CHECK(coev_invariant(L));
    }
    // group law is enforced
    std::array<IntMatrix, kPointGroupOrder> bad{IntMatrix::identity(1), IntMatrix::from_dense({{-1}}),
                                                IntMatrix::from_dense({{-1}}), IntMatrix::from_dense({{-1}})};
    CHECK_THROWS(GModule(1, bad));
}

TEST_CASE("Serre E2 column", "[glattice]")
{
    auto column = serre_e2_column(GModule::trivial());
    auto B = builtin_space("B");
    auto HB = cohomology(invariant_cochain_complex(B.torus, B.group));
    for (int s = 0; s <= 3; ++s)
        CHECK(column[static_cast<std::size_t>(s)] == HB.at(s));
    CHECK(column[2] == FinAbGroup(0, {4, 4}));
    CHECK(serre_e2(exterior_power(dual_module(module_of(builtin_lattice("M15"))), 2), 0).is_zero());
    CHECK(serre_e2(dual_module(module_of(builtin_lattice("M04"))), 0).is_zero());
    for (const auto& name : builtin_lattice_names()) {
        auto Mstar = dual_module(module_of(builtin_lattice(name)));
        // wedge^3 is trivial, so the column is H^*(B)
        auto top = serre_e2_column(exterior_power(Mstar, 3));
        for (int s = 0; s <= 3; ++s)
            CHECK(top[static_cast<std::size_t>(s)] == HB.at(s));
        for (std::size_t t = 1; t <= 2; ++t)
            CHECK(serre_e2(exterior_power(Mstar, t), 0).is_zero());
    }
    CHECK(serre_e2(GModule::trivial(), 4).is_zero());
}
