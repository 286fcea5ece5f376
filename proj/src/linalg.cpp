/*
 * linalg.cpp
 * Exact dense elimination kernels, serial and OpenMP. Row updates within one
 * elimination step are independent, so the parallel schedule cannot change
 * any result.
 */
#include "perfdim/linalg.hpp"

#include <cassert>
#include <sstream>
#include <utility>

namespace perfdim {

namespace {

Exec g_default_exec = Exec::parallel;

void require(bool cond, const std::string& msg) {
    if (!cond) throw LinalgError(msg);
}

bool is_prime_long(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

long p_mod(long v, long p) {
    v %= p;
    return v < 0 ? v + p : v;
}

// Modular inverse by extended Euclid; a need not be reduced.
long p_inv(long a, long p) {
    a = p_mod(a, p);
    require(a != 0, "division by zero in F_p");
    long t = 0, nt = 1, r = p, nr = a;
    while (nr != 0) {
        long q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    assert(r == 1);
    return p_mod(t, p);
}

}  // namespace

Exec default_exec() { return g_default_exec; }
void set_default_exec(Exec e) { g_default_exec = e; }

// ---------------------------------------------------------------- FieldSpec

FieldSpec FieldSpec::prime(long p) {
    if (p < 2 || p >= (1L << 31) || !is_prime_long(p))
        throw LinalgError("FieldSpec::prime requires a prime p with 2 <= p < 2^31");
    return FieldSpec(p);
}

std::string FieldSpec::str() const {
    return is_rationals() ? std::string("Q") : "F_" + std::to_string(p_);
}

// ------------------------------------------------------------------- Scalar

Scalar Scalar::zero(FieldSpec f) {
    Scalar s;
    s.fld_ = f;
    return s;
}

Scalar Scalar::one(FieldSpec f) {
    Scalar s;
    s.fld_ = f;
    if (f.is_rationals())
        s.q_ = 1;
    else
        s.r_ = 1 % f.characteristic();
    return s;
}

Scalar Scalar::of_long(FieldSpec f, long num, long den) {
    require(den != 0, "zero denominator");
    Scalar s;
    s.fld_ = f;
    if (f.is_rationals()) {
        s.q_ = mpq_class(num, den);
        s.q_.canonicalize();
    } else {
        long p = f.characteristic();
        long d = p_mod(den, p);
        require(d != 0, "denominator divisible by field characteristic");
        s.r_ = p_mod(num, p) * p_inv(d, p) % p;
    }
    return s;
}

Scalar Scalar::of_mpq(FieldSpec f, const mpq_class& v) {
    Scalar s;
    s.fld_ = f;
    if (f.is_rationals()) {
        s.q_ = v;
        s.q_.canonicalize();
    } else {
        long p = f.characteristic();
        long num = (long)mpz_fdiv_ui(v.get_num().get_mpz_t(), (unsigned long)p);
        long den = (long)mpz_fdiv_ui(v.get_den().get_mpz_t(), (unsigned long)p);
        require(den != 0, "denominator divisible by field characteristic");
        s.r_ = num * p_inv(den, p) % p;
    }
    return s;
}

Scalar Scalar::parse(FieldSpec f, const std::string& text) {
    mpq_class v;
    try {
        v = mpq_class(text);
    } catch (const std::invalid_argument&) {
        throw LinalgError("cannot parse scalar '" + text + "'");
    }
    require(v.get_den() != 0, "zero denominator in scalar '" + text + "'");
    v.canonicalize();
    return of_mpq(f, v);
}

bool Scalar::is_zero() const {
    return fld_.is_rationals() ? sgn(q_) == 0 : r_ == 0;
}

bool Scalar::is_one() const {
    return fld_.is_rationals() ? q_ == 1 : r_ == 1 % fld_.characteristic();
}

#define PERFDIM_SCALAR_BINOP_GUARD(o) \
    require(fld_ == (o).fld_, "scalar field mismatch")

Scalar Scalar::operator+(const Scalar& o) const {
    PERFDIM_SCALAR_BINOP_GUARD(o);
    Scalar s;
    s.fld_ = fld_;
    if (fld_.is_rationals())
        s.q_ = q_ + o.q_;
    else
        s.r_ = (r_ + o.r_) % fld_.characteristic();
    return s;
}

Scalar Scalar::operator-(const Scalar& o) const {
    PERFDIM_SCALAR_BINOP_GUARD(o);
    Scalar s;
    s.fld_ = fld_;
    if (fld_.is_rationals())
        s.q_ = q_ - o.q_;
    else
        s.r_ = p_mod(r_ - o.r_, fld_.characteristic());
    return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
    PERFDIM_SCALAR_BINOP_GUARD(o);
    Scalar s;
    s.fld_ = fld_;
    if (fld_.is_rationals())
        s.q_ = q_ * o.q_;
    else
        s.r_ = r_ * o.r_ % fld_.characteristic();
    return s;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inv(); }

Scalar Scalar::operator-() const {
    Scalar s;
    s.fld_ = fld_;
    if (fld_.is_rationals())
        s.q_ = -q_;
    else
        s.r_ = p_mod(-r_, fld_.characteristic());
    return s;
}

Scalar Scalar::inv() const {
    require(!is_zero(), "inverse of zero");
    Scalar s;
    s.fld_ = fld_;
    if (fld_.is_rationals())
        s.q_ = 1 / q_;
    else
        s.r_ = p_inv(r_, fld_.characteristic());
    return s;
}

bool Scalar::operator==(const Scalar& o) const {
    PERFDIM_SCALAR_BINOP_GUARD(o);
    return fld_.is_rationals() ? q_ == o.q_ : r_ == o.r_;
}

std::string Scalar::str() const {
    return fld_.is_rationals() ? q_.get_str() : std::to_string(r_);
}

#undef PERFDIM_SCALAR_BINOP_GUARD

// ------------------------------------------------------------------- Matrix

Matrix::Matrix(FieldSpec f, int rows, int cols) : fld_(f), rows_(rows), cols_(cols) {
    require(rows >= 0 && cols >= 0, "negative matrix shape");
    if (f.is_rationals())
        q_.assign((size_t)rows * cols, mpq_class(0));
    else
        m_.assign((size_t)rows * cols, 0);
}

Matrix Matrix::identity(FieldSpec f, int n) {
    Matrix a(f, n, n);
    for (int i = 0; i < n; ++i) a.set(i, i, Scalar::one(f));
    return a;
}

Matrix Matrix::from_rows(FieldSpec f, const std::vector<std::vector<Scalar>>& rows) {
    int r = (int)rows.size();
    int c = r == 0 ? 0 : (int)rows[0].size();
    Matrix a(f, r, c);
    for (int i = 0; i < r; ++i) {
        require((int)rows[i].size() == c, "ragged row list");
        for (int j = 0; j < c; ++j) a.set(i, j, rows[i][j]);
    }
    return a;
}

Matrix Matrix::from_longs(FieldSpec f, const std::vector<std::vector<long>>& rows) {
    int r = (int)rows.size();
    int c = r == 0 ? 0 : (int)rows[0].size();
    Matrix a(f, r, c);
    for (int i = 0; i < r; ++i) {
        require((int)rows[i].size() == c, "ragged row list");
        for (int j = 0; j < c; ++j) a.set(i, j, Scalar::of_long(f, rows[i][j]));
    }
    return a;
}

Scalar Matrix::at(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    Scalar s = Scalar::zero(fld_);
    if (fld_.is_rationals())
        s = Scalar::of_mpq(fld_, q_[(size_t)i * cols_ + j]);
    else
        s = Scalar::of_long(fld_, m_[(size_t)i * cols_ + j]);
    return s;
}

void Matrix::set(int i, int j, const Scalar& v) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    require(v.field() == fld_, "matrix/scalar field mismatch");
    if (fld_.is_rationals())
        q_[(size_t)i * cols_ + j] = v.rat();
    else
        m_[(size_t)i * cols_ + j] = v.residue();
}

bool Matrix::entry_is_zero(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return fld_.is_rationals() ? sgn(q_[(size_t)i * cols_ + j]) == 0
                               : m_[(size_t)i * cols_ + j] == 0;
}

Matrix Matrix::operator+(const Matrix& o) const {
    require(fld_ == o.fld_ && rows_ == o.rows_ && cols_ == o.cols_, "shape/field mismatch in +");
    Matrix r = *this;
    if (fld_.is_rationals())
        for (size_t k = 0; k < q_.size(); ++k) r.q_[k] += o.q_[k];
    else {
        long p = fld_.characteristic();
        for (size_t k = 0; k < m_.size(); ++k) r.m_[k] = (m_[k] + o.m_[k]) % p;
    }
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    require(fld_ == o.fld_ && rows_ == o.rows_ && cols_ == o.cols_, "shape/field mismatch in -");
    Matrix r = *this;
    if (fld_.is_rationals())
        for (size_t k = 0; k < q_.size(); ++k) r.q_[k] -= o.q_[k];
    else {
        long p = fld_.characteristic();
        for (size_t k = 0; k < m_.size(); ++k) r.m_[k] = p_mod(m_[k] - o.m_[k], p);
    }
    return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
    require(fld_ == o.fld_, "field mismatch in *");
    require(cols_ == o.rows_, "shape mismatch in *");
    Matrix r(fld_, rows_, o.cols_);
    int C = o.cols_;
    if (fld_.is_rationals()) {
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const mpq_class& aik = q_[(size_t)i * cols_ + k];
                if (sgn(aik) == 0) continue;
                for (int j = 0; j < C; ++j) r.q_[(size_t)i * C + j] += aik * o.q_[(size_t)k * C + j];
            }
    } else {
        long p = fld_.characteristic();
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                long aik = m_[(size_t)i * cols_ + k];
                if (aik == 0) continue;
                for (int j = 0; j < C; ++j) {
                    long& t = r.m_[(size_t)i * C + j];
                    t = (t + aik * o.m_[(size_t)k * C + j]) % p;
                }
            }
    }
    return r;
}

Matrix Matrix::operator-() const {
    Matrix r = *this;
    if (fld_.is_rationals())
        for (auto& v : r.q_) v = -v;
    else {
        long p = fld_.characteristic();
        for (auto& v : r.m_) v = p_mod(-v, p);
    }
    return r;
}

Matrix Matrix::scaled(const Scalar& c) const {
    require(c.field() == fld_, "field mismatch in scaled");
    Matrix r = *this;
    if (fld_.is_rationals())
        for (auto& v : r.q_) v *= c.rat();
    else {
        long p = fld_.characteristic();
        for (auto& v : r.m_) v = v * c.residue() % p;
    }
    return r;
}

Matrix Matrix::transpose() const {
    Matrix r(fld_, cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) {
            if (fld_.is_rationals())
                r.q_[(size_t)j * rows_ + i] = q_[(size_t)i * cols_ + j];
            else
                r.m_[(size_t)j * rows_ + i] = m_[(size_t)i * cols_ + j];
        }
    return r;
}

bool Matrix::operator==(const Matrix& o) const {
    if (!(fld_ == o.fld_) || rows_ != o.rows_ || cols_ != o.cols_) return false;
    return fld_.is_rationals() ? q_ == o.q_ : m_ == o.m_;
}

bool Matrix::is_zero() const {
    if (fld_.is_rationals()) {
        for (const auto& v : q_)
            if (sgn(v) != 0) return false;
    } else {
        for (long v : m_)
            if (v != 0) return false;
    }
    return true;
}

Matrix Matrix::hcat(const Matrix& a, const Matrix& b) {
    require(a.fld_ == b.fld_ && a.rows_ == b.rows_, "hcat mismatch");
    Matrix r(a.fld_, a.rows_, a.cols_ + b.cols_);
    r.set_block(0, 0, a);
    r.set_block(0, a.cols_, b);
    return r;
}

Matrix Matrix::vcat(const Matrix& a, const Matrix& b) {
    require(a.fld_ == b.fld_ && a.cols_ == b.cols_, "vcat mismatch");
    Matrix r(a.fld_, a.rows_ + b.rows_, a.cols_);
    r.set_block(0, 0, a);
    r.set_block(a.rows_, 0, b);
    return r;
}

Matrix Matrix::block(int i0, int j0, int r, int c) const {
    require(i0 >= 0 && j0 >= 0 && i0 + r <= rows_ && j0 + c <= cols_, "block out of range");
    Matrix b(fld_, r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            if (fld_.is_rationals())
                b.q_[(size_t)i * c + j] = q_[(size_t)(i0 + i) * cols_ + (j0 + j)];
            else
                b.m_[(size_t)i * c + j] = m_[(size_t)(i0 + i) * cols_ + (j0 + j)];
        }
    return b;
}

void Matrix::set_block(int i0, int j0, const Matrix& b) {
    require(b.fld_ == fld_, "set_block field mismatch");
    require(i0 >= 0 && j0 >= 0 && i0 + b.rows_ <= rows_ && j0 + b.cols_ <= cols_,
            "set_block out of range");
    for (int i = 0; i < b.rows_; ++i)
        for (int j = 0; j < b.cols_; ++j) {
            if (fld_.is_rationals())
                q_[(size_t)(i0 + i) * cols_ + (j0 + j)] = b.q_[(size_t)i * b.cols_ + j];
            else
                m_[(size_t)(i0 + i) * cols_ + (j0 + j)] = b.m_[(size_t)i * b.cols_ + j];
        }
}

std::string Matrix::str() const {
    std::ostringstream os;
    os << rows_ << "x" << cols_ << " over " << fld_.str() << "\n";
    for (int i = 0; i < rows_; ++i) {
        os << "[";
        for (int j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).str();
        os << "]\n";
    }
    return os.str();
}

// --------------------------------------------------------------- elimination

namespace {

struct QOps {
    using E = mpq_class;
    static bool is_zero(const E& a) { return sgn(a) == 0; }
    static bool is_one(const E& a) { return a == 1; }
    static E inv(const E& a) { return 1 / a; }
    static void submul(E& t, const E& f, const E& s) { t -= f * s; }  // t -= f*s
    static void mul_by(E& t, const E& f) { t *= f; }
};

struct POps {
    long p;
    using E = long;
    bool is_zero(E a) const { return a == 0; }
    bool is_one(E a) const { return a == 1; }
    E inv(E a) const { return p_inv(a, p); }
    void submul(E& t, E f, E s) const { t = p_mod(t - f * s % p, p); }
    void mul_by(E& t, E f) const { t = t * f % p; }
};

// Full reduced row echelon form over a raw payload. Pivot choice (first
// nonzero in column) and update order are fixed, so serial and parallel runs
// agree exactly.
template <class Ops>
int rref_kernel(const Ops& ops, std::vector<typename Ops::E>& a, int rows, int cols,
                std::vector<int>* pivots, bool par) {
    using E = typename Ops::E;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pr = -1;
        for (int i = r; i < rows; ++i)
            if (!ops.is_zero(a[(size_t)i * cols + c])) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        if (pr != r)
            for (int j = 0; j < cols; ++j) std::swap(a[(size_t)r * cols + j], a[(size_t)pr * cols + j]);
        E piv = a[(size_t)r * cols + c];
        if (!ops.is_one(piv)) {
            E ip = ops.inv(piv);
            for (int j = c; j < cols; ++j) ops.mul_by(a[(size_t)r * cols + j], ip);
        }
        auto elim_row = [&](int i) {
            if (i == r) return;
            E f = a[(size_t)i * cols + c];
            if (ops.is_zero(f)) return;
            a[(size_t)i * cols + c] = E(0);
            for (int j = c + 1; j < cols; ++j)
                ops.submul(a[(size_t)i * cols + j], f, a[(size_t)r * cols + j]);
        };
        if (par && rows >= 32) {
#ifdef PERFDIM_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
            for (int i = 0; i < rows; ++i) elim_row(i);
        } else {
            for (int i = 0; i < rows; ++i) elim_row(i);
        }
        if (pivots) pivots->push_back(c);
        ++r;
    }
    return r;
}

}  // namespace

int rref_in_place(Matrix& a, std::vector<int>* pivots, Exec exec) {
    bool par = exec == Exec::parallel;
    if (a.field().is_rationals())
        return rref_kernel(QOps{}, a.qdata(), a.rows(), a.cols(), pivots, par);
    return rref_kernel(POps{a.field().characteristic()}, a.pdata(), a.rows(), a.cols(), pivots,
                       par);
}

int rank(const Matrix& a, Exec exec) {
    Matrix w = a;
    return rref_in_place(w, nullptr, exec);
}

Matrix kernel_basis(const Matrix& a, Exec exec) {
    Matrix w = a;
    std::vector<int> pivots;
    int r = rref_in_place(w, &pivots, exec);
    int n = a.cols();
    std::vector<bool> is_pivot(n, false);
    for (int c : pivots) is_pivot[c] = true;
    Matrix k(a.field(), n, n - r);
    int out = 0;
    for (int fc = 0; fc < n; ++fc) {
        if (is_pivot[fc]) continue;
        k.set(fc, out, Scalar::one(a.field()));
        for (int t = 0; t < r; ++t) {
            int pc = pivots[t];
            if (!w.entry_is_zero(t, fc)) k.set(pc, out, -w.at(t, fc));
        }
        ++out;
    }
    assert(out == n - r);
    return k;
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b, Exec exec) {
    require(a.field() == b.field() && a.rows() == b.rows(), "solve shape/field mismatch");
    Matrix aug = Matrix::hcat(a, b);
    std::vector<int> pivots;
    rref_in_place(aug, &pivots, exec);
    int n = a.cols();
    for (int c : pivots)
        if (c >= n) return std::nullopt;  // pivot in the rhs block: inconsistent
    Matrix x(a.field(), n, b.cols());
    for (int t = 0; t < (int)pivots.size(); ++t)
        x.set_block(pivots[t], 0, aug.block(t, n, 1, b.cols()));
    return x;
}

std::optional<Matrix> inverse(const Matrix& a, Exec exec) {
    require(a.rows() == a.cols(), "inverse of non-square matrix");
    return solve(a, Matrix::identity(a.field(), a.rows()), exec);
}

}  // namespace perfdim
