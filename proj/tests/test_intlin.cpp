#include "flatk/intlin.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace flatk;

namespace {

IntMatrix to_matrix(const oracle::Dense& d, std::size_t cols) { return IntMatrix::from_dense(d, cols); }

oracle::Dense random_dense(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi, double density = 1.0)
{
    std::uniform_int_distribution<int> v(lo, hi);
    std::bernoulli_distribution keep(density);
    oracle::Dense m = oracle::zeros(r, c);
    for (auto& row : m)
        for (auto& x : row)
            x = keep(rng) ? v(rng) : 0;
    return m;
}

bool divisor_chain(const std::vector<Integer>& d)
{
    for (std::size_t i = 0; i + 1 < d.size(); ++i)
        if (d[i] == 0 || d[i + 1] % d[i] != 0)
            return false;
    return true;
}

}  // namespace

TEST_CASE("smith normal form on small fixed matrices", "[intlin]")
{
    SECTION("zero matrix")
    {
        auto S = smith_normal_form(IntMatrix(3, 2));
        CHECK(S.D.is_zero());
        CHECK(S.divisors.empty());
        CHECK(S.U * IntMatrix(3, 2) * S.V == S.D);
    }
    SECTION("identity")
    {
        auto S = smith_normal_form(IntMatrix::identity(4));
        CHECK(S.D == IntMatrix::identity(4));
    }
    SECTION("diag(2,3) becomes diag(1,6)")
    {
        auto M = IntMatrix::from_dense({{2, 0}, {0, 3}});
        auto S = smith_normal_form(M);
        CHECK(S.divisors == std::vector<Integer>{1, 6});
        CHECK(S.U * M * S.V == S.D);
        CHECK(oracle::invariant_factors(M.to_dense(), 2, 2) == S.divisors);
    }
}

TEST_CASE("smith normal form agrees with determinantal divisors on random matrices", "[intlin][random]")
{
    std::mt19937 rng(20240611);
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t r = dim(rng), c = dim(rng);
        auto d = random_dense(rng, r, c, -5, 5, trial % 3 == 0 ? 0.4 : 1.0);
        IntMatrix M = to_matrix(d, c);
        auto S = smith_normal_form(M);
        INFO("trial " << trial << "\n" << M);
        REQUIRE(S.U * M * S.V == S.D);
        REQUIRE(cmpabs(oracle::determinant(S.U.to_dense()), 1) == 0);
        REQUIRE(cmpabs(oracle::determinant(S.V.to_dense()), 1) == 0);
        REQUIRE(divisor_chain(S.divisors));
        REQUIRE(S.divisors == oracle::invariant_factors(d, r, c));
        // D is diagonal with the divisors in order
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                REQUIRE(S.D.at(i, j) == (i == j && i < S.divisors.size() ? S.divisors[i] : Integer(0)));
        REQUIRE(rank_over_q(M) == S.divisors.size());
        REQUIRE(smith_divisors(M) == S.divisors);
    }
}

TEST_CASE("finitely generated abelian groups are canonical", "[intlin]")
{
    CHECK(FinAbGroup::from_cyclic({2, 3}) == FinAbGroup::from_cyclic({6}));
    CHECK(FinAbGroup::from_cyclic({6, 1}) == FinAbGroup(0, {6}));
    CHECK(FinAbGroup::from_cyclic({4, 2, 0}) == FinAbGroup(1, {2, 4}));
    CHECK(FinAbGroup::from_cyclic({12, 18}).torsion() == std::vector<Integer>{6, 36});
    CHECK(FinAbGroup(0, {2, 4}).primary_factors() == std::vector<Integer>{2, 4});
    CHECK(FinAbGroup(2, {4, 4}).to_string() == "Z^2 + Z/4^2");
    CHECK(FinAbGroup(0, {4, 2}) == FinAbGroup(0, {2, 4}));
}

TEST_CASE("cokernels", "[intlin]")
{
    CHECK(cokernel_invariants(IntMatrix(2, 0)) == FinAbGroup::free(2));
    CHECK(cokernel_invariants(IntMatrix::from_dense({{4, 0}, {0, 4}})) == FinAbGroup(0, {4, 4}));
    CHECK(cokernel_invariants(IntMatrix::from_dense({{2, 0}, {0, 3}})) == FinAbGroup(0, {6}));
}

TEST_CASE("homology_at", "[intlin]")
{
    SECTION("zero maps")
    {
        CHECK(homology_at(IntMatrix(3, 0), IntMatrix(0, 3)) == FinAbGroup::free(3));
    }
    SECTION("circle with two vertices and two edges, degree 0")
    {
        auto d1 = IntMatrix::from_dense({{-1, 1}, {1, -1}});
        CHECK(homology_at(d1, IntMatrix(0, 2)) == FinAbGroup::free(1));
        CHECK(homology_at(IntMatrix(2, 0), d1) == FinAbGroup::free(1));
    }
    SECTION("composition must vanish")
    {
        auto a = IntMatrix::from_dense({{1}});
        CHECK_THROWS_AS(homology_at(a, a), CompositionNonzero);
    }
}

TEST_CASE("homology_at recovers homology built into scrambled complexes", "[intlin][random]")
{
    // A -> B -> C as a sum of pieces with known homology at B, conjugated by
    // random unimodular changes of basis.
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> count(0, 2), mult(2, 6), extra(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        int free_part = count(rng), torsion_pieces = count(rng), out_pieces = count(rng), dead = count(rng);
        std::vector<Integer> torsion;
        std::size_t a = static_cast<std::size_t>(torsion_pieces + dead);
        std::size_t b = static_cast<std::size_t>(free_part + torsion_pieces + out_pieces);
        std::size_t c = static_cast<std::size_t>(out_pieces + count(rng));
        if (a + b + c > 8 || b == 0)
            continue;
        oracle::Dense din = oracle::zeros(b, a), dout = oracle::zeros(c, b);
        std::size_t row = static_cast<std::size_t>(free_part);
        for (int t = 0; t < torsion_pieces; ++t, ++row) {
            int k = mult(rng);
            din[row][static_cast<std::size_t>(t)] = k;
            torsion.push_back(k);
        }
        for (int o = 0; o < out_pieces; ++o, ++row)
            dout[static_cast<std::size_t>(o)][row] = (o % 2 ? 1 : mult(rng));
        auto [P, Pi] = oracle::random_unimodular(a, rng);
        auto [Q, Qi] = oracle::random_unimodular(b, rng);
        auto [R, Ri] = oracle::random_unimodular(c, rng);
        auto din2 = oracle::multiply(oracle::multiply(Q, din, b), P, a);
        auto dout2 = oracle::multiply(oracle::multiply(R, dout, c), Qi, b);
        auto expected = FinAbGroup::from_cyclic(torsion) + FinAbGroup::free(static_cast<std::size_t>(free_part));
        INFO("trial " << trial);
        REQUIRE(homology_at(IntMatrix::from_dense(din2, a), IntMatrix::from_dense(dout2, b)) == expected);
        HomologyPresentation hp(IntMatrix::from_dense(din2, a), IntMatrix::from_dense(dout2, b));
        REQUIRE(hp.group() == expected);
        for (const auto& g : hp.generators())
            REQUIRE(hp.is_cycle(g));
    }
}

TEST_CASE("homology presentation coordinates", "[intlin]")
{
    // Z^2 / <(2, 0)>: cycles e0, e1; e0 has order 2
    auto din = IntMatrix::from_dense({{2}, {0}});
    HomologyPresentation hp(din, IntMatrix(0, 2));
    REQUIRE(hp.group() == FinAbGroup(1, {2}));
    CHECK(normalize_element(hp.group(), hp.coordinates({2, 0})) == GroupElement{0, 0});
    for (std::size_t i = 0; i < hp.generators().size(); ++i) {
        GroupElement e(2, 0);
        e[i] = 1;
        CHECK(normalize_element(hp.group(), hp.coordinates(hp.generators()[i])) == e);
    }
    CHECK_THROWS(hp.coordinates({1}));
}

TEST_CASE("sparse text format round trips", "[intlin]")
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        auto d = random_dense(rng, 4, 6, -1000000, 1000000, 0.3);
        IntMatrix M = IntMatrix::from_dense(d, 6);
        M.set(0, 0, Integer("123456789012345678901234567890"));
        auto text = write_sparse(M);
        CHECK(read_sparse(text) == M);
        CHECK(write_sparse(read_sparse(text)) == text);
    }
    CHECK(write_sparse(IntMatrix::from_dense({{0, 5}, {-7, 0}})) == "2 2 2\n0 1 5\n1 0 -7\n");
    CHECK_THROWS_AS(read_sparse("2 2 1\n5 0 1\n"), MatrixFormatError);
}

// ---------------------------------------------------------------- refinements

namespace {

GroupElement to_element(const std::vector<long>& v) { return GroupElement(v.begin(), v.end()); }


/// 1 x 1 form with the single value b(g, g) = (v).
BilinearForm scalar_form(long v) { return BilinearForm(1, std::vector<GroupElement>(1, GroupElement{Integer(v)})); }

}  // namespace

TEST_CASE("quadratic refinement examples", "[intlin]")
{
    SECTION("zero form")
    {
        FinAbGroup H2(1, {2, 4}), H4(0, {2});
        BilinearForm b(3, std::vector<GroupElement>(3, GroupElement{0}));
        auto r = quadratic_refinement_exists(H2, H4, b);
        REQUIRE(r.exists);
        for (const auto& w : r.witness)
            CHECK(is_zero_element(H4, w));
    }
    SECTION("Z/2 with b(g, g) = 1")
    {
        auto r = quadratic_refinement_exists(FinAbGroup(0, {2}), FinAbGroup(0, {2}), scalar_form(1));
        CHECK_FALSE(r.exists);
        CHECK(r.obstruction_generator == 0u);
        oracle::SmallGroup G{{2}};
        CHECK_FALSE(oracle::refinement_exists_brute_force(G, G, {{{1}}}));
    }
    SECTION("free H2: phi(n g) = n(n-1)/2 b(g, g)")
    {
        FinAbGroup H2 = FinAbGroup::free(1), H4 = FinAbGroup::free(1);
        BilinearForm b = scalar_form(3);
        auto r = quadratic_refinement_exists(H2, H4, b);
        REQUIRE(r.exists);
        for (long n = -4; n <= 4; ++n)
            for (long m = -4; m <= 4; ++m) {
                auto phi = [&](long x) { return evaluate_refinement(H2, H4, b, r.witness, GroupElement{Integer(x)}); };
                Integer lhs = phi(n + m)[0] - phi(n)[0] - phi(m)[0];
                CHECK(lhs == 3 * n * m);
            }
    }
    SECTION("free H2 with even form splits by c^2/2")
    {
        FinAbGroup H2 = FinAbGroup::free(2), H4 = FinAbGroup::free(1);
        BilinearForm b{{{2}, {1}}, {{1}, {4}}};
        CHECK(quadratic_refinement_exists(H2, H4, b).exists);
    }
    SECTION("ill formed forms")
    {
        CHECK_THROWS_AS(quadratic_refinement_exists(FinAbGroup(0, {2}), FinAbGroup::free(1), scalar_form(1)), IllFormedForm);
        CHECK_THROWS_AS(
            quadratic_refinement_exists(FinAbGroup::free(2), FinAbGroup::free(1), {{{0}, {1}}, {{2}, {0}}}),
            IllFormedForm);
    }
}

TEST_CASE("quadratic refinement agrees with exhaustive search", "[intlin][random]")
{
    std::mt19937 rng(99);
    int existing = 0, obstructed = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto inst = oracle::random_refinement_instance(rng);
        const auto& S2 = inst.H2;
        const auto& S4 = inst.H4;
        const auto& b = inst.b;
        const std::size_t k = S2.orders.size();
        FinAbGroup H2(0, std::vector<Integer>(S2.orders.begin(), S2.orders.end()));
        FinAbGroup H4(0, std::vector<Integer>(S4.orders.begin(), S4.orders.end()));
        REQUIRE(H2.torsion().size() == k);
        BilinearForm form(k, std::vector<GroupElement>(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                form[i][j] = to_element(b[i][j]);

        auto r = quadratic_refinement_exists(H2, H4, form);
        bool brute = oracle::refinement_exists_brute_force(S2, S4, b);
        INFO("trial " << trial << " H2 = " << H2 << " H4 = " << H4);
        REQUIRE(r.exists == brute);
        if (r.exists) {
            ++existing;
            // the functional equation for the witness on all pairs
            for (long x = 0; x < S2.size(); ++x)
                for (long y = 0; y < S2.size(); ++y) {
                    auto cx = to_element(S2.element(x)), cy = to_element(S2.element(y));
                    auto cxy = to_element(S2.add(S2.element(x), S2.element(y)));
                    auto lhs = evaluate_refinement(H2, H4, form, r.witness, cxy);
                    auto px = evaluate_refinement(H2, H4, form, r.witness, cx);
                    auto py = evaluate_refinement(H2, H4, form, r.witness, cy);
                    auto bxy = evaluate_form(H2, H4, form, cx, cy);
                    GroupElement diff(lhs.size());
                    for (std::size_t c = 0; c < lhs.size(); ++c)
                        diff[c] = lhs[c] - px[c] - py[c] - bxy[c];
                    REQUIRE(is_zero_element(H4, diff));
                }
        } else {
            ++obstructed;
            REQUIRE(r.obstruction_generator.has_value());
        }
    }
    CHECK(existing > 20);
    CHECK(obstructed > 20);
}
