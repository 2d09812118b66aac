#include "flatk/crystgrp.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace flatk;

namespace {

// Affine map x -> diag(signs) x + shift of R^3 with exact rational shifts.
struct Affine {
    std::array<int, 3> signs{1, 1, 1};
    std::array<mpq_class, 3> shift{0, 0, 0};

    // (a * b)(x) = a(b(x))
    Affine operator*(const Affine& b) const
    {
        Affine c;
        for (int i = 0; i < 3; ++i) {
            c.signs[i] = signs[i] * b.signs[i];
            c.shift[i] = signs[i] * b.shift[i] + shift[i];
        }
        return c;
    }
    Affine inverse() const
    {
        Affine c;
        for (int i = 0; i < 3; ++i) {
            c.signs[i] = signs[i];
            c.shift[i] = -signs[i] * shift[i];
        }
        return c;
    }
    bool is_identity() const { return signs == std::array<int, 3>{1, 1, 1} && shift[0] == 0 && shift[1] == 0 && shift[2] == 0; }
};

Affine affine_of(const std::string& g)
{
    const mpq_class h(1, 2);
    if (g == "alpha")
        return {{1, -1, -1}, {h, h, 0}};
    if (g == "beta")
        return {{-1, -1, 1}, {h, 0, h}};
    if (g == "gamma")
        return {{-1, 1, -1}, {0, h, h}};
    Affine t;
    t.shift[static_cast<std::size_t>(g[1] - '1')] = 1;
    return t;
}

Affine evaluate(const Presentation& P, const Word& w)
{
    Affine a;
    for (const auto& l : w) {
        Affine g = affine_of(P.generators[l.generator]);
        a = a * (l.exponent > 0 ? g : g.inverse());
    }
    return a;
}

Word random_word(std::mt19937& rng, std::size_t generators, std::size_t length)
{
    std::uniform_int_distribution<std::size_t> g(0, generators - 1);
    std::bernoulli_distribution inv(0.5);
    Word w;
    for (std::size_t i = 0; i < length; ++i)
        w.push_back({g(rng), inv(rng) ? -1 : 1});
    return w;
}

}  // namespace

TEST_CASE("presentation parsing", "[crystgrp]")
{
    auto P = parse_presentation("generators: a b\na^2 b^-1 # comment\nb b b\n");
    REQUIRE(P.generators == std::vector<std::string>{"a", "b"});
    REQUIRE(P.relators.size() == 2);
    CHECK(P.word_to_string(P.relators[0]) == "a a b^-1");
    CHECK(parse_presentation(write_presentation(P)).relators == P.relators);
    CHECK_THROWS_AS(P.parse_word("a c"), UnknownGenerator);
    CHECK_THROWS_AS(parse_presentation("a a^-1\n"), PresentationFormatError);
    CHECK_THROWS_AS(parse_presentation("a^x\n"), PresentationFormatError);
    CHECK(free_reduce(P.parse_word("a b b^-1 a^-1 b")) == P.parse_word("b"));
}

TEST_CASE("abelianizations", "[crystgrp]")
{
    CHECK(abelianization(parse_presentation("a a\n")) == FinAbGroup(0, {2}));
    CHECK(abelianization(parse_presentation("a b a^-1 b^-1\n")) == FinAbGroup::free(2));
    auto W = wolf_presentation();
    CHECK(W.relators.size() == 13);
    CHECK(abelianization(W) == FinAbGroup(0, {4, 4}));
}

TEST_CASE("the presentation of pi_1(B) holds for the affine maps", "[crystgrp]")
{
    auto W = wolf_presentation();
    for (const auto& r : W.relators) {
        INFO(W.word_to_string(r));
        CHECK(evaluate(W, r).is_identity());
    }
}

TEST_CASE("holonomy", "[crystgrp]")
{
    CHECK(holonomy("alpha") == DiagonalSigns{1, -1, -1});
    CHECK(holonomy("beta") == DiagonalSigns{-1, -1, 1});
    CHECK(holonomy("gamma") == DiagonalSigns{-1, 1, -1});
    CHECK(holonomy("t1") == DiagonalSigns{1, 1, 1});
    CHECK_THROWS_AS(holonomy("delta"), UnknownGenerator);

    auto W = wolf_presentation();
    CHECK(holonomy(W, W.parse_word("gamma beta alpha")) == DiagonalSigns{1, 1, 1});
    for (const auto& r : W.relators)
        CHECK(holonomy(W, r) == DiagonalSigns{1, 1, 1});

    std::mt19937 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        Word a = random_word(rng, W.generators.size(), 7), b = random_word(rng, W.generators.size(), 5);
        Word ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        auto ha = holonomy(W, a), hb = holonomy(W, b), hab = holonomy(W, ab);
        for (int i = 0; i < 3; ++i)
            CHECK(hab[static_cast<std::size_t>(i)] == ha[static_cast<std::size_t>(i)] * hb[static_cast<std::size_t>(i)]);
        // and equals the linear part of the affine evaluation
        CHECK(evaluate(W, ab).signs == hab);
    }
}

TEST_CASE("quaternions", "[crystgrp]")
{
    auto i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k(), one = Quaternion::one();
    CHECK(i * i == -one);
    CHECK(j * j == -one);
    CHECK(k * k == -one);
    CHECK(i * j * k == -one);
    CHECK(i * j == k);
    CHECK(j * i == -k);
    Quaternion q(1, 2, 3, 4), p(-2, 0, 5, 1);
    CHECK((q * p).norm() == q.norm() * p.norm());
    CHECK(q * q.conjugate() == Quaternion(q.norm(), 0, 0, 0));
}

TEST_CASE("spin lift", "[crystgrp]")
{
    auto report = verify_spin_lift();
    CHECK(report.all_pass());
    CHECK(report.relations.size() == 13);
    auto W = wolf_presentation();
    CHECK(evaluate_in_quaternions(W, W.parse_word("alpha alpha")) == -Quaternion::one());
    CHECK(evaluate_in_quaternions(W, W.parse_word("gamma beta alpha")) == Quaternion::one());
    CHECK(evaluate_in_quaternions(W, W.parse_word("t1 t2")) == Quaternion::one());

    // conjugation by the lift projects to the holonomy
    for (const auto& g : {"alpha", "beta", "gamma"}) {
        INFO(g);
        auto R = rotation_of(spin_lift(g));
        auto h = holonomy(g);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                CHECK(R[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] ==
                      (a == b ? h[static_cast<std::size_t>(a)] : 0));
    }
}
