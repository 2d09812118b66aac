#pragma once

// The crystallographic fundamental group of B: a finite presentation,
// its abelianization, the holonomy representation, and the quaternionic
// solution of its relations in Spin(3).

#include "flatk/intlin.hpp"

#include <array>
#include <string>
#include <vector>

namespace flatk {

class UnknownGenerator : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PresentationFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Letter {
    std::size_t generator;
    int exponent;  // +1 or -1
    bool operator==(const Letter&) const = default;
};

using Word = std::vector<Letter>;

struct Presentation {
    std::vector<std::string> generators;
    std::vector<Word> relators;

    std::size_t generator_index(const std::string& name) const;
    std::string word_to_string(const Word& w) const;
    /// Words are read left to right as group products.
    Word parse_word(const std::string& text) const;
};

/// Cancels adjacent x x^-1 pairs.
Word free_reduce(Word w);

/// One relator per line, generators as whitespace separated tokens,
/// "x^-1" for inverses ("x^k" expands to |k| letters). An optional first
/// line "generators: a b ..." declares the generators; otherwise they are
/// taken in order of first appearance. '#' starts a comment.
Presentation parse_presentation(const std::string& text);
std::string write_presentation(const Presentation& P);

/// Generators alpha beta gamma t1 t2 t3 with the nine twisted relations,
/// the three translation commutators and gamma*beta*alpha.
Presentation wolf_presentation();

/// Cokernel of the exponent-sum matrix.
FinAbGroup abelianization(const Presentation& P);

/// Diagonal of a 3x3 diagonal sign matrix.
using DiagonalSigns = std::array<int, 3>;

/// Linear part of the action on R^3: alpha -> (+,-,-), beta -> (-,-,+),
/// gamma -> (-,+,-), translations -> identity.
DiagonalSigns holonomy(const Presentation& P, const Word& w);
DiagonalSigns holonomy(const std::string& generator);

class Quaternion {
public:
    Quaternion() = default;
    Quaternion(Integer a, Integer b, Integer c, Integer d)
        : re_(std::move(a)), i_(std::move(b)), j_(std::move(c)), k_(std::move(d)) {}

    static Quaternion one() { return {1, 0, 0, 0}; }
    static Quaternion i() { return {0, 1, 0, 0}; }
    static Quaternion j() { return {0, 0, 1, 0}; }
    static Quaternion k() { return {0, 0, 0, 1}; }

    const Integer& re() const { return re_; }
    const Integer& im_i() const { return i_; }
    const Integer& im_j() const { return j_; }
    const Integer& im_k() const { return k_; }

    Quaternion operator*(const Quaternion& q) const;
    Quaternion operator-() const { return {-re_, -i_, -j_, -k_}; }
    Quaternion conjugate() const { return {re_, -i_, -j_, -k_}; }
    Integer norm() const { return re_ * re_ + i_ * i_ + j_ * j_ + k_ * k_; }
    bool operator==(const Quaternion&) const = default;

    std::string to_string() const;

private:
    Integer re_, i_, j_, k_;
};

/// alpha = i, beta = j, gamma = k, t1 = t2 = t3 = -1.
Quaternion spin_lift(const std::string& generator);
Quaternion evaluate_in_quaternions(const Presentation& P, const Word& w);

/// Matrix of v -> q v q^-1 on the imaginary quaternions in the ordered basis
/// (i, k, j), identified with the coordinates (x1, x2, x3). Requires a unit q.
std::array<std::array<Integer, 3>, 3> rotation_of(const Quaternion& q);

struct RelationCheck {
    std::string relator;
    Quaternion value;
    bool pass;
};

struct SpinLiftReport {
    std::vector<RelationCheck> relations;
    bool all_pass() const;
};

SpinLiftReport verify_spin_lift();

}  // namespace flatk
