/*
 * linalg.hpp
 * Exact dense linear algebra over the rationals (GMP) or a prime field F_p.
 * Elimination kernels come in a serial reference flavor and an OpenMP flavor;
 * both produce bitwise-identical results, only the schedule differs.
 */
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace perfdim {

struct LinalgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Execution policy for elimination kernels.
enum class Exec { serial, parallel };

Exec default_exec();
void set_default_exec(Exec e);

// Scalar domain: exact rationals (characteristic 0) or F_p with p prime, p < 2^31.
class FieldSpec {
public:
    FieldSpec() = default;
    static FieldSpec rationals() { return FieldSpec(); }
    static FieldSpec prime(long p);

    bool is_rationals() const { return p_ == 0; }
    long characteristic() const { return p_; }
    bool operator==(const FieldSpec&) const = default;
    std::string str() const;

private:
    explicit FieldSpec(long p) : p_(p) {}
    long p_ = 0;  // 0 = rationals
};

// A value in a fixed field. For rationals q_ is authoritative, for F_p the
// residue r_ in [0, p). All binary ops require matching fields.
class Scalar {
public:
    Scalar() = default;  // rational zero
    static Scalar zero(FieldSpec f);
    static Scalar one(FieldSpec f);
    static Scalar of_long(FieldSpec f, long num, long den = 1);
    static Scalar of_mpq(FieldSpec f, const mpq_class& v);
    static Scalar parse(FieldSpec f, const std::string& s);  // "-3", "5/7"

    FieldSpec field() const { return fld_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inv() const;
    bool operator==(const Scalar& o) const;

    // Payload accessors; rat() is only meaningful over the rationals,
    // residue() only over a prime field.
    const mpq_class& rat() const { return q_; }
    long residue() const { return r_; }
    std::string str() const;

private:
    FieldSpec fld_;
    mpq_class q_;
    long r_ = 0;
};

// Dense row-major matrix over a fixed field. Storage is split by field kind so
// prime-field matrices carry no GMP overhead.
class Matrix {
public:
    Matrix() = default;
    Matrix(FieldSpec f, int rows, int cols);  // zero matrix

    static Matrix identity(FieldSpec f, int n);
    static Matrix from_rows(FieldSpec f, const std::vector<std::vector<Scalar>>& rows);
    static Matrix from_longs(FieldSpec f, const std::vector<std::vector<long>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    FieldSpec field() const { return fld_; }

    Scalar at(int i, int j) const;
    void set(int i, int j, const Scalar& v);
    bool entry_is_zero(int i, int j) const;

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Matrix& o) const;
    Matrix operator-() const;
    Matrix scaled(const Scalar& c) const;
    Matrix transpose() const;
    bool operator==(const Matrix& o) const;
    bool is_zero() const;

    // Block assembly / extraction.
    static Matrix hcat(const Matrix& a, const Matrix& b);
    static Matrix vcat(const Matrix& a, const Matrix& b);
    Matrix block(int i0, int j0, int r, int c) const;
    void set_block(int i0, int j0, const Matrix& b);

    std::string str() const;

    // Raw payload access for kernels.
    std::vector<mpq_class>& qdata() { return q_; }
    const std::vector<mpq_class>& qdata() const { return q_; }
    std::vector<long>& pdata() { return m_; }
    const std::vector<long>& pdata() const { return m_; }

private:
    FieldSpec fld_;
    int rows_ = 0, cols_ = 0;
    std::vector<mpq_class> q_;  // rationals payload, size rows*cols
    std::vector<long> m_;       // prime payload, size rows*cols
};

// Reduced row echelon form. Returns the rank; pivot columns appended to
// *pivots when non-null. Deterministic for either execution policy.
int rref_in_place(Matrix& a, std::vector<int>* pivots = nullptr, Exec exec = default_exec());

int rank(const Matrix& a, Exec exec = default_exec());

// Columns form a basis of { x : a x = 0 }. cols() == a.cols() - rank(a).
Matrix kernel_basis(const Matrix& a, Exec exec = default_exec());

// Exact solution X of A X = B (free variables set to zero), or nullopt when
// the system is inconsistent.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b, Exec exec = default_exec());

// Inverse of a square matrix, or nullopt when singular.
std::optional<Matrix> inverse(const Matrix& a, Exec exec = default_exec());

}  // namespace perfdim
