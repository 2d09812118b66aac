#include "flatk/complexes.hpp"
#include "flatk/torus.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace flatk;

namespace {

std::size_t binomial(int n, int k)
{
    std::size_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
    return r;
}

FinAbGroup Z(std::size_t r, std::vector<Integer> t = {}) { return FinAbGroup::from_cyclic(t) + FinAbGroup::free(r); }

CellCode cell(int n, std::initializer_list<unsigned> states)
{
    CellCode c = 0;
    int i = 0;
    for (auto s : states)
        c = TorusComplex::with_state(c, n, i++, s);
    return c;
}

}  // namespace

TEST_CASE("torus cell complex", "[torus]")
{
    for (int n = 1; n <= 6; ++n) {
        TorusComplex T(n);
        for (int i = 0; i <= n; ++i)
            CHECK(T.cells(i).size() == binomial(n, i) << n);
        auto C = T.chain_complex();  // checks d^2 = 0
        auto H = homology(C);
        for (int i = 0; i <= n; ++i)
            CHECK(H.at(i) == FinAbGroup::free(binomial(n, i)));
    }
}

TEST_CASE("group generation", "[torus]")
{
    CHECK(generate_group(3, {}).order() == 1);
    auto real = fedorov_schoenflies_real();
    auto G = generate_group(3, {real[0], real[1]});
    CHECK(G.order() == 4);
    CHECK(G.index_of(real[2]) < 4);
    // gamma beta alpha = 1 on linear parts and as affine maps up to Z^3
    CHECK((real[2] * real[1] * real[0]).is_identity());
    CHECK(G.elements().front().is_identity());
    for (const auto& a : G.elements())
        for (const auto& b : G.elements())
            CHECK(G.index_of(a * b) < G.order());
}

TEST_CASE("builtin spaces", "[torus]")
{
    const std::map<std::string, std::size_t> orders{{"B", 4}, {"X04", 4}, {"X15", 8}, {"X111", 8}, {"X212", 16}};
    for (const auto& [name, order] : orders) {
        INFO(name);
        auto X = builtin_space(name);
        CHECK(X.group.order() == order);
        CHECK(is_free_action(X.group).free);
        // order divides 4^n
        CHECK((std::size_t(1) << (2 * X.dimension())) % order == 0);
    }
    auto X15 = builtin_space("X15");
    CHECK(X15.group.index_of(HalfAffineMap({1, 1, 1, 1, 1, 1}, {false, true, false, true, false, true})) < 8);
    CHECK_THROWS_AS(builtin_space("X99"), UnknownSpace);
}

TEST_CASE("freeness criterion", "[torus]")
{
    auto neg = generate_group(2, {HalfAffineMap({-1, -1}, {false, false})});
    auto r = is_free_action(neg);
    CHECK_FALSE(r.free);
    REQUIRE(r.offending.has_value());
    CHECK(*r.offending == HalfAffineMap({-1, -1}, {false, false}));
    // a reflection composed with a half shift in the other coordinate is free
    CHECK(is_free_action(klein_bottle_space().group).free);
    // a negation with shift has fixed points: x -> -x + 1/2 fixes 1/4
    CHECK_FALSE(is_free_action(generate_group(1, {HalfAffineMap({-1}, {true})})).free);
    CHECK_THROWS_AS(invariant_cochain_complex(TorusComplex(2), neg), CellStabilizer);
    CHECK_THROWS_AS(quotient_chain_complex(TorusComplex(2), neg), CellStabilizer);
}

TEST_CASE("cell action", "[torus]")
{
    auto id = HalfAffineMap::identity(1);
    auto shift = HalfAffineMap({1}, {true});
    auto flip = HalfAffineMap({-1}, {false});
    CellCode e0 = cell(1, {kE0}), e1 = cell(1, {kE1});
    CHECK(cell_action(id, e0) == SignedCell{e0, 1});
    CHECK(cell_action(shift, e0) == SignedCell{e1, 1});
    CHECK(cell_action(flip, e0) == SignedCell{e1, -1});
    CHECK(cell_action(flip, cell(1, {kV1})) == SignedCell{cell(1, {kV1}), 1});
    CHECK(cell_action(shift, cell(1, {kV1})) == SignedCell{cell(1, {kV0}), 1});

    // matrices compose: A(g h) = A(g) A(h), and commute with the boundary
    std::mt19937 rng(1);
    std::uniform_int_distribution<std::uint32_t> mask(0, 7);
    TorusComplex T(3);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = HalfAffineMap::from_masks(3, mask(rng), mask(rng));
        auto h = HalfAffineMap::from_masks(3, mask(rng), mask(rng));
        for (int d = 0; d <= 3; ++d) {
            CHECK(action_matrix(T, g * h, d) == action_matrix(T, g, d) * action_matrix(T, h, d));
            if (d > 0)
                CHECK(T.chain_complex().boundary(d) * action_matrix(T, g, d) ==
                      action_matrix(T, g, d - 1) * T.chain_complex().boundary(d));
        }
    }
}

TEST_CASE("invariant complex ranks", "[torus]")
{
    for (const auto& name : builtin_space_names()) {
        auto X = builtin_space(name);
        auto C = invariant_cochain_complex(X.torus, X.group);
        CellOrbits orbits(X.torus, X.group);
        int n = X.dimension();
        for (int i = 0; i <= n; ++i) {
            std::size_t expected = (binomial(n, i) << n) / X.group.order();
            CHECK(C.rank(-i) == expected);
            CHECK(orbits.reps(i).size() == expected);
        }
        CHECK(C.euler_characteristic() == 0);
    }
    auto X04 = builtin_space("X04");
    auto C = invariant_cochain_complex(X04.torus, X04.group);
    std::vector<std::size_t> ranks;
    for (int i = 0; i <= 6; ++i)
        ranks.push_back(C.rank(-i));
    CHECK(ranks == std::vector<std::size_t>{16, 96, 240, 320, 240, 96, 16});
    auto X212 = builtin_space("X212");
    auto D = quotient_chain_complex(X212.torus, X212.group);
    ranks.clear();
    for (int i = 0; i <= 6; ++i)
        ranks.push_back(D.rank(i));
    CHECK(ranks == std::vector<std::size_t>{4, 24, 60, 80, 60, 24, 4});
    auto T2 = torus_space(2);
    CHECK(invariant_cochain_complex(T2.torus, T2.group).rank(-1) == 8);
}

TEST_CASE("homology of quotients", "[torus]")
{
    auto B = builtin_space("B");
    auto HB = homology(quotient_chain_complex(B.torus, B.group));
    CHECK(HB.at(0) == Z(1));
    CHECK(HB.at(1) == Z(0, {4, 4}));
    CHECK(HB.at(2) == Z(0));
    CHECK(HB.at(3) == Z(1));

    auto T2 = torus_space(2);
    auto HT = homology(quotient_chain_complex(T2.torus, T2.group));
    CHECK(HT.at(1) == Z(2));

    auto K = klein_bottle_space();
    auto HK = homology(quotient_chain_complex(K.torus, K.group));
    CHECK(HK.at(1) == Z(1, {2}));
    CHECK(HK.at(2) == Z(0));

    auto X111 = builtin_space("X111");
    CHECK(homology(quotient_chain_complex(X111.torus, X111.group)).at(1) == Z(0, {4, 4, 2, 2}));
}

TEST_CASE("published cohomology table", "[torus]")
{
    // H^2 .. H^5; H^0 = H^6 = Z and H^1 = 0
    const std::map<std::string, std::array<FinAbGroup, 4>> table{
        {"X04", {Z(3, {4, 4, 2, 2, 2}), Z(8, {2, 2, 2}), Z(3, {2, 2, 2}), Z(0, {4, 4, 2, 2, 2})}},
        {"X15", {Z(3, {4, 4, 4}), Z(8, {2, 2}), Z(3, {2, 2}), Z(0, {4, 4, 4})}},
        {"X111", {Z(3, {4, 4, 2, 2}), Z(8, {2, 2}), Z(3, {2, 2}), Z(0, {4, 4, 2, 2})}},
        {"X212", {Z(3, {4, 4, 2, 2}), Z(8, {4}), Z(3, {4}), Z(0, {4, 4, 2, 2})}},
    };
    for (const auto& [name, row] : table) {
        INFO(name);
        auto X = builtin_space(name);
        auto H = cohomology(invariant_cochain_complex(X.torus, X.group));
        CHECK(H.at(0) == Z(1));
        CHECK(H.at(1) == Z(0));
        CHECK(H.at(6) == Z(1));
        for (int k = 2; k <= 5; ++k)
            CHECK(H.at(k) == row[static_cast<std::size_t>(k - 2)]);
    }
}

TEST_CASE("Poincare duality between invariant and quotient complexes", "[torus]")
{
    for (const auto& name : builtin_space_names()) {
        INFO(name);
        auto X = builtin_space(name);
        auto Hup = cohomology(invariant_cochain_complex(X.torus, X.group));
        auto Hlow = homology(quotient_chain_complex(X.torus, X.group));
        int n = X.dimension();
        for (int k = 0; k <= n; ++k)
            CHECK(Hup.at(k) == Hlow.at(n - k));
        CHECK(euler_characteristic(Hlow) == 0);
    }
}
