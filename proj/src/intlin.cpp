#include "flatk/intlin.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace flatk {

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows) {}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.data_[i].push_back({i, Integer(1)});
    return m;
}

IntMatrix IntMatrix::from_dense(const std::vector<std::vector<Integer>>& rows, std::size_t cols)
{
    IntMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols)
            throw std::invalid_argument("from_dense: ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            if (sgn(rows[r][c]) != 0)
                m.data_[r].push_back({c, rows[r][c]});
    }
    return m;
}

IntMatrix IntMatrix::from_dense(std::initializer_list<std::initializer_list<long>> rows)
{
    std::vector<std::vector<Integer>> dense;
    std::size_t cols = rows.size() ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
        std::vector<Integer> row;
        for (long v : r)
            row.emplace_back(v);
        dense.push_back(std::move(row));
    }
    return from_dense(dense, cols);
}

IntMatrix IntMatrix::diagonal(const std::vector<Integer>& diag, std::size_t rows, std::size_t cols)
{
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < diag.size() && i < rows && i < cols; ++i)
        if (sgn(diag[i]) != 0)
            m.data_[i].push_back({i, diag[i]});
    return m;
}

std::size_t IntMatrix::nnz() const
{
    std::size_t n = 0;
    for (const auto& r : data_)
        n += r.size();
    return n;
}

Integer IntMatrix::at(std::size_t r, std::size_t c) const
{
    if (r >= rows_ || c >= cols_)
        throw std::out_of_range("IntMatrix::at");
    const auto& row = data_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, std::size_t col) { return e.col < col; });
    if (it != row.end() && it->col == c)
        return it->value;
    return 0;
}

void IntMatrix::set(std::size_t r, std::size_t c, const Integer& v)
{
    if (r >= rows_ || c >= cols_)
        throw std::out_of_range("IntMatrix::set");
    auto& row = data_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, std::size_t col) { return e.col < col; });
    if (it != row.end() && it->col == c) {
        if (sgn(v) == 0)
            row.erase(it);
        else
            it->value = v;
    } else if (sgn(v) != 0) {
        row.insert(it, Entry{c, v});
    }
}

void IntMatrix::add(std::size_t r, std::size_t c, const Integer& v)
{
    if (sgn(v) == 0)
        return;
    if (r >= rows_ || c >= cols_)
        throw std::out_of_range("IntMatrix::add");
    auto& row = data_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, std::size_t col) { return e.col < col; });
    if (it != row.end() && it->col == c) {
        it->value += v;
        if (sgn(it->value) == 0)
            row.erase(it);
    } else {
        row.insert(it, Entry{c, v});
    }
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& e : data_[r])
            t.data_[e.col].push_back({r, e.value});
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const
{
    if (cols_ != rhs.rows_)
        throw std::invalid_argument("IntMatrix: dimension mismatch in product");
    IntMatrix out(rows_, rhs.cols_);
    std::map<std::size_t, Integer> acc;
    for (std::size_t r = 0; r < rows_; ++r) {
        acc.clear();
        for (const auto& e : data_[r])
            for (const auto& f : rhs.data_[e.col])
                acc[f.col] += e.value * f.value;
        for (auto& [c, v] : acc)
            if (sgn(v) != 0)
                out.data_[r].push_back({c, std::move(v)});
    }
    return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& rhs) const
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("IntMatrix: dimension mismatch in sum");
    IntMatrix out = *this;
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& e : rhs.data_[r])
            out.add(r, e.col, e.value);
    return out;
}

IntMatrix IntMatrix::operator-() const
{
    IntMatrix out = *this;
    for (auto& row : out.data_)
        for (auto& e : row)
            e.value = -e.value;
    return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& rhs) const { return *this + (-rhs); }

std::vector<Integer> IntMatrix::apply(const std::vector<Integer>& v) const
{
    if (v.size() != cols_)
        throw std::invalid_argument("IntMatrix::apply: dimension mismatch");
    std::vector<Integer> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& e : data_[r])
            out[r] += e.value * v[e.col];
    return out;
}

std::vector<std::vector<Integer>> IntMatrix::to_dense() const
{
    std::vector<std::vector<Integer>> d(rows_, std::vector<Integer>(cols_));
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& e : data_[r])
            d[r][e.col] = e.value;
    return d;
}

IntMatrix IntMatrix::column_block(std::size_t first, std::size_t last) const
{
    IntMatrix out(rows_, last - first);
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& e : data_[r])
            if (e.col >= first && e.col < last)
                out.data_[r].push_back({e.col - first, e.value});
    return out;
}

IntMatrix IntMatrix::row_block(std::size_t first, std::size_t last) const
{
    IntMatrix out(last - first, cols_);
    for (std::size_t r = first; r < last; ++r)
        out.data_[r - first] = data_[r];
    return out;
}

bool IntMatrix::operator==(const IntMatrix& other) const
{
    if (rows_ != other.rows_ || cols_ != other.cols_)
        return false;
    for (std::size_t r = 0; r < rows_; ++r) {
        const auto& a = data_[r];
        const auto& b = other.data_[r];
        if (a.size() != b.size())
            return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].col != b[i].col || a[i].value != b[i].value)
                return false;
    }
    return true;
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m)
{
    auto d = m.to_dense();
    for (const auto& row : d) {
        os << '[';
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? " " : "") << row[c];
        os << "]\n";
    }
    return os;
}

// ------------------------------------------------------------- text format

std::string write_sparse(const IntMatrix& m)
{
    std::ostringstream os;
    os << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (const auto& e : m.row(r))
            os << r << ' ' << e.col << ' ' << e.value.get_str() << '\n';
    return os.str();
}

IntMatrix read_sparse(const std::string& text)
{
    std::istringstream is(text);
    std::size_t rows = 0, cols = 0, nnz = 0;
    if (!(is >> rows >> cols >> nnz))
        throw MatrixFormatError("sparse matrix: bad header");
    IntMatrix m(rows, cols);
    std::vector<std::vector<std::pair<std::size_t, Integer>>> tmp(rows);
    for (std::size_t k = 0; k < nnz; ++k) {
        std::size_t r = 0, c = 0;
        std::string value;
        if (!(is >> r >> c >> value))
            throw MatrixFormatError("sparse matrix: truncated entry list");
        if (r >= rows || c >= cols)
            throw MatrixFormatError("sparse matrix: index out of bounds");
        Integer v;
        if (v.set_str(value, 10) != 0)
            throw MatrixFormatError("sparse matrix: bad integer '" + value + "'");
        if (sgn(v) == 0)
            throw MatrixFormatError("sparse matrix: explicit zero entry");
        if (sgn(m.at(r, c)) != 0)
            throw MatrixFormatError("sparse matrix: duplicate entry");
        m.set(r, c, v);
    }
    std::string extra;
    if (is >> extra)
        throw MatrixFormatError("sparse matrix: trailing data");
    return m;
}

void write_sparse_file(const std::string& path, const IntMatrix& m)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << write_sparse(m);
}

IntMatrix read_sparse_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_sparse(ss.str());
}

// -------------------------------------------------------------- FinAbGroup

namespace {

// Invariant factors from an arbitrary list of cyclic orders.
std::vector<Integer> invariant_factors(const std::vector<Integer>& cyclic)
{
    // prime -> exponents of prime powers
    std::map<Integer, std::vector<unsigned long>> primes;
    for (Integer c : cyclic) {
        c = abs(c);
        if (c <= 1)
            continue;
        Integer p = 2;
        while (c > 1) {
            if (p * p > c)
                p = c;
            unsigned long e = 0;
            while (c % p == 0) {
                c /= p;
                ++e;
            }
            if (e > 0)
                primes[p].push_back(e);
            ++p;
        }
    }
    std::size_t k = 0;
    for (auto& [p, exps] : primes) {
        std::sort(exps.begin(), exps.end(), std::greater<>());
        k = std::max(k, exps.size());
    }
    // The largest invariant factor collects the largest power of each prime.
    std::vector<Integer> out(k, Integer(1));
    for (const auto& [p, exps] : primes)
        for (std::size_t i = 0; i < exps.size(); ++i) {
            Integer pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), exps[i]);
            out[k - 1 - i] *= pe;
        }
    return out;
}

}  // namespace

FinAbGroup::FinAbGroup(std::size_t rank, std::vector<Integer> orders) : rank_(rank)
{
    bool chain = true;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 2 || (i > 0 && orders[i] % orders[i - 1] != 0))
            chain = false;
    }
    torsion_ = chain ? std::move(orders) : invariant_factors(orders);
}

FinAbGroup FinAbGroup::from_cyclic(const std::vector<Integer>& cyclic)
{
    std::size_t rank = 0;
    std::vector<Integer> tors;
    for (const auto& c : cyclic) {
        if (sgn(c) == 0)
            ++rank;
        else if (abs(c) > 1)
            tors.push_back(abs(c));
    }
    return FinAbGroup(rank, invariant_factors(tors));
}

Integer FinAbGroup::torsion_order() const
{
    Integer n = 1;
    for (const auto& d : torsion_)
        n *= d;
    return n;
}

std::vector<Integer> FinAbGroup::primary_factors() const
{
    std::vector<Integer> out;
    for (Integer c : torsion_) {
        Integer p = 2;
        while (c > 1) {
            if (p * p > c)
                p = c;
            Integer pe = 1;
            while (c % p == 0) {
                c /= p;
                pe *= p;
            }
            if (pe > 1)
                out.push_back(pe);
            ++p;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

FinAbGroup FinAbGroup::operator+(const FinAbGroup& other) const
{
    std::vector<Integer> all = torsion_;
    all.insert(all.end(), other.torsion_.begin(), other.torsion_.end());
    return FinAbGroup(rank_ + other.rank_, invariant_factors(all));
}

std::string FinAbGroup::to_string() const
{
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    if (rank_ > 0) {
        os << "Z";
        if (rank_ > 1)
            os << "^" << rank_;
        first = false;
    }
    // group equal factors: Z/4^2
    for (std::size_t i = 0; i < torsion_.size();) {
        std::size_t j = i;
        while (j < torsion_.size() && torsion_[j] == torsion_[i])
            ++j;
        if (!first)
            os << " + ";
        os << "Z/" << torsion_[i];
        if (j - i > 1)
            os << "^" << (j - i);
        first = false;
        i = j;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const FinAbGroup& g) { return os << g.to_string(); }

// ------------------------------------------------------- Smith normal form

namespace {

using Dense = std::vector<std::vector<Integer>>;

Dense dense_identity(std::size_t n)
{
    Dense d(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i)
        d[i][i] = 1;
    return d;
}

// row_i += q * row_t
void row_axpy(Dense& A, std::size_t i, std::size_t t, const Integer& q, std::size_t from = 0)
{
    auto& ri = A[i];
    const auto& rt = A[t];
    for (std::size_t c = from; c < rt.size(); ++c)
        if (sgn(rt[c]) != 0)
            ri[c] += q * rt[c];
}

// col_j += q * col_t
void col_axpy(Dense& A, std::size_t j, std::size_t t, const Integer& q, std::size_t from = 0)
{
    for (std::size_t r = from; r < A.size(); ++r)
        if (sgn(A[r][t]) != 0)
            A[r][j] += q * A[r][t];
}

void swap_cols(Dense& A, std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    for (auto& row : A)
        std::swap(row[a], row[b]);
}

// Works on a dense copy; transforms are recorded only when requested.
class SnfWorker {
public:
    SnfWorker(const IntMatrix& M, bool track) : m_(M.rows()), n_(M.cols()), track_(track)
    {
        A_ = M.to_dense();
        if (track_) {
            U_ = dense_identity(m_);
            Uinv_ = dense_identity(m_);
            V_ = dense_identity(n_);
            Vinv_ = dense_identity(n_);
        }
    }

    void run()
    {
        std::size_t t = 0;
        while (t < m_ && t < n_) {
            if (!choose_pivot(t))
                break;
            for (;;) {
                clear_cross(t);
                auto bad = find_nondivisible(t);
                if (!bad)
                    break;
                // row_t += row_i brings a non-multiple into row t
                row_op_add(t, bad->first, Integer(1), t);
            }
            if (sgn(A_[t][t]) < 0)
                row_negate(t);
            divisors_.push_back(A_[t][t]);
            ++t;
        }
    }

    std::vector<Integer> divisors_;
    std::size_t m_, n_;
    bool track_;
    Dense A_, U_, Uinv_, V_, Vinv_;

private:
    // Swap the smallest-magnitude entry (ties broken by fill estimate) to (t, t).
    bool choose_pivot(std::size_t t)
    {
        std::vector<std::size_t> row_nz(m_, 0), col_nz(n_, 0);
        bool any = false;
        for (std::size_t r = t; r < m_; ++r)
            for (std::size_t c = t; c < n_; ++c)
                if (sgn(A_[r][c]) != 0) {
                    ++row_nz[r];
                    ++col_nz[c];
                    any = true;
                }
        if (!any)
            return false;
        std::size_t br = 0, bc = 0;
        Integer best_abs;
        std::size_t best_fill = 0;
        bool have = false;
        for (std::size_t r = t; r < m_; ++r) {
            if (row_nz[r] == 0)
                continue;
            for (std::size_t c = t; c < n_; ++c) {
                if (sgn(A_[r][c]) == 0)
                    continue;
                int cmp = have ? cmpabs(A_[r][c], best_abs) : -1;
                std::size_t fill = (row_nz[r] - 1) * (col_nz[c] - 1);
                if (cmp < 0 || (cmp == 0 && fill < best_fill)) {
                    best_abs = abs(A_[r][c]);
                    best_fill = fill;
                    br = r;
                    bc = c;
                    have = true;
                }
            }
        }
        row_swap(t, br);
        col_swap(t, bc);
        return true;
    }

    void clear_cross(std::size_t t)
    {
        for (;;) {
            bool dirty = false;
            for (std::size_t r = t + 1; r < m_; ++r) {
                if (sgn(A_[r][t]) == 0)
                    continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), A_[r][t].get_mpz_t(), A_[t][t].get_mpz_t());
                row_op_add(r, t, -q, t);
                if (sgn(A_[r][t]) != 0)
                    dirty = true;
            }
            for (std::size_t c = t + 1; c < n_; ++c) {
                if (sgn(A_[t][c]) == 0)
                    continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), A_[t][c].get_mpz_t(), A_[t][t].get_mpz_t());
                col_op_add(c, t, -q, t);
                if (sgn(A_[t][c]) != 0)
                    dirty = true;
            }
            if (!dirty)
                return;
            // A remainder survived: move the smallest entry of the cross to the pivot.
            std::size_t br = t, bc = t;
            Integer best = abs(A_[t][t]);
            for (std::size_t r = t + 1; r < m_; ++r)
                if (sgn(A_[r][t]) != 0 && cmpabs(A_[r][t], best) < 0) {
                    best = abs(A_[r][t]);
                    br = r;
                    bc = t;
                }
            for (std::size_t c = t + 1; c < n_; ++c)
                if (sgn(A_[t][c]) != 0 && cmpabs(A_[t][c], best) < 0) {
                    best = abs(A_[t][c]);
                    br = t;
                    bc = c;
                }
            row_swap(t, br);
            col_swap(t, bc);
        }
    }

    std::optional<std::pair<std::size_t, std::size_t>> find_nondivisible(std::size_t t)
    {
        const Integer& p = A_[t][t];
        if (cmpabs(p, 1) == 0)
            return std::nullopt;
        for (std::size_t r = t + 1; r < m_; ++r)
            for (std::size_t c = t + 1; c < n_; ++c)
                if (sgn(A_[r][c]) != 0 && !mpz_divisible_p(A_[r][c].get_mpz_t(), p.get_mpz_t()))
                    return std::make_pair(r, c);
        return std::nullopt;
    }

    // row_i += q row_j on A, recorded into U / U^-1.
    void row_op_add(std::size_t i, std::size_t j, const Integer& q, std::size_t from)
    {
        row_axpy(A_, i, j, q, from);
        if (track_) {
            row_axpy(U_, i, j, q);
            col_axpy(Uinv_, j, i, -q);
        }
    }

    // col_i += q col_j on A, recorded into V / V^-1.
    void col_op_add(std::size_t i, std::size_t j, const Integer& q, std::size_t from)
    {
        col_axpy(A_, i, j, q, from);
        if (track_) {
            col_axpy(V_, i, j, q);
            row_axpy(Vinv_, j, i, -q);
        }
    }

    void row_swap(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        std::swap(A_[a], A_[b]);
        if (track_) {
            std::swap(U_[a], U_[b]);
            swap_cols(Uinv_, a, b);
        }
    }

    void col_swap(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        swap_cols(A_, a, b);
        if (track_) {
            swap_cols(V_, a, b);
            std::swap(Vinv_[a], Vinv_[b]);
        }
    }

    void row_negate(std::size_t t)
    {
        for (auto& v : A_[t])
            v = -v;
        if (track_) {
            for (auto& v : U_[t])
                v = -v;
            for (auto& row : Uinv_)
                row[t] = -row[t];
        }
    }
};

}  // namespace

SnfFull smith_normal_form_full(const IntMatrix& M)
{
    SnfWorker w(M, true);
    w.run();
    SnfFull out;
    out.divisors = w.divisors_;
    out.U = IntMatrix::from_dense(w.U_, M.rows());
    out.Uinv = IntMatrix::from_dense(w.Uinv_, M.rows());
    out.V = IntMatrix::from_dense(w.V_, M.cols());
    out.Vinv = IntMatrix::from_dense(w.Vinv_, M.cols());
    return out;
}

SnfResult smith_normal_form(const IntMatrix& M)
{
    SnfWorker w(M, true);
    w.run();
    SnfResult out;
    out.divisors = w.divisors_;
    out.D = IntMatrix::diagonal(w.divisors_, M.rows(), M.cols());
    out.U = IntMatrix::from_dense(w.U_, M.rows());
    out.V = IntMatrix::from_dense(w.V_, M.cols());
    return out;
}

std::vector<Integer> smith_divisors(const IntMatrix& M)
{
    SnfWorker w(M, false);
    w.run();
    return w.divisors_;
}

FinAbGroup cokernel_invariants(const IntMatrix& M)
{
    auto d = smith_divisors(M);
    std::vector<Integer> tors;
    for (const auto& x : d)
        if (x > 1)
            tors.push_back(x);
    return FinAbGroup(M.rows() - d.size(), tors);
}

std::size_t rank_over_q(const IntMatrix& M) { return smith_divisors(M).size(); }

FinAbGroup homology_at(const IntMatrix& d_in, const IntMatrix& d_out)
{
    if (d_in.rows() != d_out.cols())
        throw std::invalid_argument("homology_at: incompatible shapes");
    if (d_in.cols() > 0 && d_out.rows() > 0 && !(d_out * d_in).is_zero())
        throw CompositionNonzero("homology_at: d_out * d_in != 0");
    std::size_t n = d_out.cols();
    std::size_t r_out = d_out.rows() && n ? smith_divisors(d_out).size() : 0;
    auto din = d_in.cols() && n ? smith_divisors(d_in) : std::vector<Integer>{};
    std::vector<Integer> tors;
    for (const auto& x : din)
        if (x > 1)
            tors.push_back(x);
    return FinAbGroup(n - r_out - din.size(), tors);
}

IntMatrix kernel_basis(const IntMatrix& M)
{
    auto snf = smith_normal_form_full(M);
    std::size_t r = snf.divisors.size();
    return snf.V.column_block(r, M.cols());
}

// ---------------------------------------------------- group element helpers

std::size_t generator_count(const FinAbGroup& G) { return G.torsion().size() + G.rank(); }

Integer generator_order(const FinAbGroup& G, std::size_t i)
{
    if (i < G.torsion().size())
        return G.torsion()[i];
    return 0;
}

GroupElement normalize_element(const FinAbGroup& G, GroupElement x)
{
    if (x.size() != generator_count(G))
        throw std::invalid_argument("group element has wrong length");
    for (std::size_t i = 0; i < G.torsion().size(); ++i)
        mpz_fdiv_r(x[i].get_mpz_t(), x[i].get_mpz_t(), G.torsion()[i].get_mpz_t());
    return x;
}

bool is_zero_element(const FinAbGroup& G, const GroupElement& x)
{
    auto n = normalize_element(G, x);
    return std::all_of(n.begin(), n.end(), [](const Integer& v) { return sgn(v) == 0; });
}

// ---------------------------------------------------- HomologyPresentation

HomologyPresentation::HomologyPresentation(const IntMatrix& d_in, const IntMatrix& d_out)
    : d_out_(d_out), ambient_(d_out.cols())
{
    if (d_in.rows() != d_out.cols())
        throw std::invalid_argument("HomologyPresentation: incompatible shapes");
    if (!(d_out * d_in).is_zero())
        throw CompositionNonzero("HomologyPresentation: d_out * d_in != 0");

    auto outer = smith_normal_form_full(d_out);
    kernel_offset_ = outer.divisors.size();
    vinv_ = outer.Vinv;
    std::size_t k = ambient_ - kernel_offset_;

    // relations of H in kernel coordinates
    IntMatrix rel = (vinv_ * d_in).row_block(kernel_offset_, ambient_);
    auto inner = smith_normal_form_full(rel);
    u_ = inner.U;
    IntMatrix kernel = outer.V.column_block(kernel_offset_, ambient_);

    std::vector<Integer> tors;
    std::vector<std::size_t> free_slots;
    for (std::size_t i = 0; i < k; ++i) {
        if (i < inner.divisors.size()) {
            if (inner.divisors[i] > 1) {
                slots_.push_back(i);
                orders_.push_back(inner.divisors[i]);
                tors.push_back(inner.divisors[i]);
            }
        } else {
            free_slots.push_back(i);
        }
    }
    for (auto s : free_slots) {
        slots_.push_back(s);
        orders_.push_back(0);
    }
    group_ = FinAbGroup(free_slots.size(), tors);

    for (auto s : slots_) {
        std::vector<Integer> x(k);
        for (std::size_t r = 0; r < k; ++r)
            x[r] = inner.Uinv.at(r, s);
        generators_.push_back(kernel.apply(x));
    }
}

bool HomologyPresentation::is_cycle(const std::vector<Integer>& z) const
{
    auto b = d_out_.apply(z);
    return std::all_of(b.begin(), b.end(), [](const Integer& v) { return sgn(v) == 0; });
}

GroupElement HomologyPresentation::coordinates(const std::vector<Integer>& z) const
{
    if (z.size() != ambient_)
        throw std::invalid_argument("coordinates: wrong length");
    if (!is_cycle(z))
        throw std::invalid_argument("coordinates: not a cycle");
    auto full = vinv_.apply(z);
    std::vector<Integer> x(full.begin() + static_cast<std::ptrdiff_t>(kernel_offset_), full.end());
    auto y = u_.apply(x);
    GroupElement out;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        Integer v = y[slots_[i]];
        if (sgn(orders_[i]) != 0)
            mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), orders_[i].get_mpz_t());
        out.push_back(v);
    }
    return out;
}

// ------------------------------------------------- quadratic refinements

GroupElement evaluate_form(const FinAbGroup& H2, const FinAbGroup& H4, const BilinearForm& b,
                           const GroupElement& c, const GroupElement& d)
{
    std::size_t n = generator_count(H2);
    GroupElement out(generator_count(H4));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Integer k = c[i] * d[j];
            if (sgn(k) == 0)
                continue;
            for (std::size_t s = 0; s < out.size(); ++s)
                out[s] += k * b[i][j][s];
        }
    return normalize_element(H4, out);
}

GroupElement evaluate_refinement(const FinAbGroup& H2, const FinAbGroup& H4,
                                 const BilinearForm& b, const std::vector<GroupElement>& phi,
                                 const GroupElement& c)
{
    // phi(sum n_i g_i) = sum n_i phi(g_i) + sum C(n_i,2) b_ii + sum_{i<j} n_i n_j b_ij
    std::size_t n = generator_count(H2);
    GroupElement out(generator_count(H4));
    for (std::size_t i = 0; i < n; ++i) {
        Integer choose2 = c[i] * (c[i] - 1) / 2;
        for (std::size_t s = 0; s < out.size(); ++s)
            out[s] += c[i] * phi[i][s] + choose2 * b[i][i][s];
        for (std::size_t j = i + 1; j < n; ++j) {
            Integer k = c[i] * c[j];
            for (std::size_t s = 0; s < out.size(); ++s)
                out[s] += k * b[i][j][s];
        }
    }
    return normalize_element(H4, out);
}

namespace {

// Solve d * x = y in H4, coordinatewise.
std::optional<GroupElement> divide_in_group(const FinAbGroup& H4, const Integer& d,
                                            const GroupElement& y)
{
    GroupElement x(y.size());
    for (std::size_t s = 0; s < y.size(); ++s) {
        Integer e = generator_order(H4, s);
        if (sgn(e) == 0) {
            if (!mpz_divisible_p(y[s].get_mpz_t(), d.get_mpz_t()))
                return std::nullopt;
            x[s] = y[s] / d;
            continue;
        }
        Integer g;
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), e.get_mpz_t());
        Integer ys;
        mpz_fdiv_r(ys.get_mpz_t(), y[s].get_mpz_t(), e.get_mpz_t());
        if (!mpz_divisible_p(ys.get_mpz_t(), g.get_mpz_t()))
            return std::nullopt;
        Integer dg = d / g, eg = e / g, inv;
        if (eg == 1) {
            x[s] = 0;
            continue;
        }
        Integer dgm;
        mpz_fdiv_r(dgm.get_mpz_t(), dg.get_mpz_t(), eg.get_mpz_t());
        mpz_invert(inv.get_mpz_t(), dgm.get_mpz_t(), eg.get_mpz_t());
        x[s] = (ys / g) * inv;
        mpz_fdiv_r(x[s].get_mpz_t(), x[s].get_mpz_t(), eg.get_mpz_t());
    }
    return normalize_element(H4, x);
}

}  // namespace

QuadraticRefinement quadratic_refinement_exists(const FinAbGroup& H2, const FinAbGroup& H4,
                                                const BilinearForm& b)
{
    std::size_t n = generator_count(H2);
    std::size_t m = generator_count(H4);
    if (b.size() != n)
        throw IllFormedForm("form has wrong number of rows");
    for (const auto& row : b) {
        if (row.size() != n)
            throw IllFormedForm("form has wrong number of columns");
        for (const auto& v : row)
            if (v.size() != m)
                throw IllFormedForm("form value has wrong length");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (normalize_element(H4, b[i][j]) != normalize_element(H4, b[j][i]))
                throw IllFormedForm("form is not symmetric");
            Integer d = generator_order(H2, i);
            if (sgn(d) != 0) {
                GroupElement dv = b[i][j];
                for (auto& v : dv)
                    v *= d;
                if (!is_zero_element(H4, dv))
                    throw IllFormedForm("form does not vanish on d_i g_i");
            }
        }

    QuadraticRefinement out;
    out.witness.assign(n, GroupElement(m));
    for (std::size_t i = 0; i < n; ++i) {
        Integer d = generator_order(H2, i);
        if (sgn(d) == 0)
            continue;  // free generators take any value
        // d * phi(g) = -(d(d-1)/2) b(g, g)
        GroupElement rhs = b[i][i];
        Integer c = -(d * (d - 1) / 2);
        for (auto& v : rhs)
            v *= c;
        auto x = divide_in_group(H4, d, rhs);
        if (!x) {
            out.exists = false;
            out.witness.clear();
            out.obstruction_generator = i;
            out.obstruction_value = normalize_element(H4, rhs);
            return out;
        }
        out.witness[i] = *x;
    }
    out.exists = true;
    return out;
}

}  // namespace flatk
