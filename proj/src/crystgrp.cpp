#include "flatk/crystgrp.hpp"

#include <algorithm>
#include <sstream>

namespace flatk {

std::size_t Presentation::generator_index(const std::string& name) const
{
    auto it = std::find(generators.begin(), generators.end(), name);
    if (it == generators.end())
        throw UnknownGenerator("unknown generator '" + name + "'");
    return static_cast<std::size_t>(it - generators.begin());
}

std::string Presentation::word_to_string(const Word& w) const
{
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            out += ' ';
        out += generators.at(w[i].generator);
        if (w[i].exponent < 0)
            out += "^-1";
    }
    return out;
}

namespace {

std::pair<std::string, long> split_token(const std::string& tok)
{
    auto caret = tok.find('^');
    if (caret == std::string::npos)
        return {tok, 1};
    std::string name = tok.substr(0, caret);
    std::string exp = tok.substr(caret + 1);
    long e = 0;
    try {
        std::size_t used = 0;
        e = std::stol(exp, &used);
        if (used != exp.size())
            throw std::invalid_argument(exp);
    } catch (const std::exception&) {
        throw PresentationFormatError("bad exponent in token '" + tok + "'");
    }
    if (name.empty() || e == 0)
        throw PresentationFormatError("bad token '" + tok + "'");
    return {name, e};
}

void append_token(Word& w, std::size_t gen, long e)
{
    for (long k = 0; k < std::labs(e); ++k)
        w.push_back({gen, e > 0 ? 1 : -1});
}

}  // namespace

Word Presentation::parse_word(const std::string& text) const
{
    std::istringstream is(text);
    std::string tok;
    Word w;
    while (is >> tok) {
        auto [name, e] = split_token(tok);
        append_token(w, generator_index(name), e);
    }
    return w;
}

Word free_reduce(Word w)
{
    Word out;
    for (const auto& l : w) {
        if (!out.empty() && out.back().generator == l.generator && out.back().exponent == -l.exponent)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

Presentation parse_presentation(const std::string& text)
{
    Presentation P;
    bool declared = false;
    std::vector<std::vector<std::pair<std::string, long>>> lines;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first))
            continue;
        if (first == "generators:") {
            if (declared || !lines.empty())
                throw PresentationFormatError("generator declaration must come first");
            std::string g;
            while (ls >> g)
                P.generators.push_back(g);
            declared = true;
            continue;
        }
        std::vector<std::pair<std::string, long>> toks{split_token(first)};
        std::string tok;
        while (ls >> tok)
            toks.push_back(split_token(tok));
        lines.push_back(std::move(toks));
    }
    if (!declared)
        for (const auto& l : lines)
            for (const auto& [name, e] : l)
                if (std::find(P.generators.begin(), P.generators.end(), name) == P.generators.end())
                    P.generators.push_back(name);
    for (const auto& l : lines) {
        Word w;
        for (const auto& [name, e] : l)
            append_token(w, P.generator_index(name), e);
        w = free_reduce(std::move(w));
        if (w.empty())
            throw PresentationFormatError("relator reduces to the empty word");
        P.relators.push_back(std::move(w));
    }
    return P;
}

std::string write_presentation(const Presentation& P)
{
    std::ostringstream os;
    os << "generators:";
    for (const auto& g : P.generators)
        os << ' ' << g;
    os << '\n';
    for (const auto& r : P.relators)
        os << P.word_to_string(r) << '\n';
    return os.str();
}

Presentation wolf_presentation()
{
    // x = t y  is encoded as the relator x y^-1 t^-1 (or its cyclic variants);
    // a t = t^-1 a becomes a t a^-1 t.
    static const char* text = R"(generators: alpha beta gamma t1 t2 t3
alpha alpha t1^-1
alpha t2 alpha^-1 t2
alpha t3 alpha^-1 t3
beta t1 beta^-1 t1
beta t2 beta^-1 t2
beta beta t3^-1
gamma t1 gamma^-1 t1
gamma gamma t2^-1
gamma t3 gamma^-1 t3
t1 t2 t1^-1 t2^-1
t2 t3 t2^-1 t3^-1
t3 t1 t3^-1 t1^-1
gamma beta alpha
)";
    return parse_presentation(text);
}

FinAbGroup abelianization(const Presentation& P)
{
    IntMatrix M(P.generators.size(), P.relators.size());
    for (std::size_t r = 0; r < P.relators.size(); ++r)
        for (const auto& l : P.relators[r])
            M.add(l.generator, r, l.exponent);
    return cokernel_invariants(M);
}

DiagonalSigns holonomy(const std::string& generator)
{
    if (generator == "alpha")
        return {1, -1, -1};
    if (generator == "beta")
        return {-1, -1, 1};
    if (generator == "gamma")
        return {-1, 1, -1};
    if (generator == "t1" || generator == "t2" || generator == "t3")
        return {1, 1, 1};
    throw UnknownGenerator("no holonomy for generator '" + generator + "'");
}

DiagonalSigns holonomy(const Presentation& P, const Word& w)
{
    DiagonalSigns out{1, 1, 1};
    for (const auto& l : w) {
        auto h = holonomy(P.generators.at(l.generator));
        for (int i = 0; i < 3; ++i)
            out[i] *= h[i];  // diagonal sign matrices are their own inverses
    }
    return out;
}

// --------------------------------------------------------------- Quaternion

Quaternion Quaternion::operator*(const Quaternion& q) const
{
    return {re_ * q.re_ - i_ * q.i_ - j_ * q.j_ - k_ * q.k_,
            re_ * q.i_ + i_ * q.re_ + j_ * q.k_ - k_ * q.j_,
            re_ * q.j_ - i_ * q.k_ + j_ * q.re_ + k_ * q.i_,
            re_ * q.k_ + i_ * q.j_ - j_ * q.i_ + k_ * q.re_};
}

std::string Quaternion::to_string() const
{
    std::ostringstream os;
    bool any = false;
    auto term = [&](const Integer& c, const char* unit) {
        if (sgn(c) == 0)
            return;
        if (any)
            os << (sgn(c) > 0 ? " + " : " - ");
        else if (sgn(c) < 0)
            os << "-";
        Integer a = abs(c);
        if (a != 1 || !*unit)
            os << a;
        os << unit;
        any = true;
    };
    term(re_, "");
    term(i_, "i");
    term(j_, "j");
    term(k_, "k");
    if (!any)
        os << "0";
    return os.str();
}

Quaternion spin_lift(const std::string& generator)
{
    if (generator == "alpha")
        return Quaternion::i();
    if (generator == "beta")
        return Quaternion::j();
    if (generator == "gamma")
        return Quaternion::k();
    if (generator == "t1" || generator == "t2" || generator == "t3")
        return -Quaternion::one();
    throw UnknownGenerator("no spin lift for generator '" + generator + "'");
}

Quaternion evaluate_in_quaternions(const Presentation& P, const Word& w)
{
    Quaternion q = Quaternion::one();
    for (const auto& l : w) {
        Quaternion x = spin_lift(P.generators.at(l.generator));
        // unit quaternions: inverse = conjugate
        q = q * (l.exponent > 0 ? x : x.conjugate());
    }
    return q;
}

std::array<std::array<Integer, 3>, 3> rotation_of(const Quaternion& q)
{
    if (q.norm() != 1)
        throw std::invalid_argument("rotation_of: quaternion is not a unit");
    // basis order (i, k, j) for the coordinates (x1, x2, x3)
    const Quaternion basis[3] = {Quaternion::i(), Quaternion::k(), Quaternion::j()};
    auto coord = [](const Quaternion& v, int axis) -> Integer {
        switch (axis) {
        case 0:
            return v.im_i();
        case 1:
            return v.im_k();
        default:
            return v.im_j();
        }
    };
    std::array<std::array<Integer, 3>, 3> R;
    for (int col = 0; col < 3; ++col) {
        Quaternion img = q * basis[col] * q.conjugate();
        for (int row = 0; row < 3; ++row)
            R[row][col] = coord(img, row);
    }
    return R;
}

bool SpinLiftReport::all_pass() const
{
    return std::all_of(relations.begin(), relations.end(), [](const auto& r) { return r.pass; });
}

SpinLiftReport verify_spin_lift()
{
    auto P = wolf_presentation();
    SpinLiftReport report;
    for (const auto& r : P.relators) {
        auto v = evaluate_in_quaternions(P, r);
        report.relations.push_back({P.word_to_string(r), v, v == Quaternion::one()});
    }
    return report;
}

}  // namespace flatk
