#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace subsplit {

using Vector = std::vector<double>;

/// Dense real matrix, row-major, value semantics.
///
/// Rows and columns are both at least one and every entry is finite; the
/// checked constructors enforce this. Arithmetic results are not re-checked
/// (overflow during a divergent iteration is detected by the caller).
class Matrix {
public:
    /// Zero matrix.
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix diagonal(std::span<const double> diag);
    static Matrix column(std::span<const double> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    Vector col(std::size_t c) const;

    const std::vector<double>& data() const noexcept { return data_; }

    Matrix transpose() const;
    double frobenius_norm() const;
    double trace() const;
    double max_abs() const;
    bool all_finite() const;

    /// Copy of the sub-block starting at (r0, c0).
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(double s);

    friend bool operator==(const Matrix& a, const Matrix& b) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);

Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, std::span<const double> x);
/// Writes a·x into out (out must not alias x).
void apply_into(const Matrix& a, std::span<const double> x, std::span<double> out);

/// (A + Aᵀ)/2.
Matrix symmetrize(const Matrix& a);

/// Frobenius norm of a − b.
double distance(const Matrix& a, const Matrix& b);

/// Grid of blocks; every block in a grid row shares its row count and every
/// block in a grid column shares its column count.
using BlockGrid = std::vector<std::vector<Matrix>>;

Matrix block_assemble(const BlockGrid& blocks);
/// Splits m into blocks of the given row and column sizes.
BlockGrid block_extract(const Matrix& m, std::span<const std::size_t> row_sizes,
                        std::span<const std::size_t> col_sizes);

/// Block-diagonal matrix diag(b_1, …, b_k).
Matrix block_diagonal(std::span<const Matrix> blocks);

// Vector helpers.
double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double distance(std::span<const double> a, std::span<const double> b);
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& a);
bool all_finite(std::span<const double> a);

/// Text format: "rows cols" then `rows` lines of `cols` numbers.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);

/// Formats with 17 significant digits (round-trips a double exactly).
std::string format_double(double x);

}  // namespace subsplit
