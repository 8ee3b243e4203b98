#include "subsplit/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "subsplit/error.hpp"

namespace subsplit {

namespace {

void require_dims(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
        throw Error(ErrorCode::kInvalidArgument, "matrix dimensions must be positive");
    }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream msg;
        msg << op << ": " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
        throw Error(ErrorCode::kDimensionMismatch, msg.str());
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    require_dims(rows, cols);
    data_.assign(rows * cols, 0.0);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require_dims(rows, cols);
    if (data_.size() != rows * cols) {
        throw Error(ErrorCode::kDimensionMismatch, "entry count does not match rows*cols");
    }
    if (!all_finite()) {
        throw Error(ErrorCode::kNonFinite, "matrix entries must be finite");
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    require_dims(rows_, cols_);
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw Error(ErrorCode::kDimensionMismatch, "ragged initializer");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
    if (!all_finite()) {
        throw Error(ErrorCode::kNonFinite, "matrix entries must be finite");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

Matrix Matrix::column(std::span<const double> v) {
    return Matrix(v.size(), 1, Vector(v.begin(), v.end()));
}

Vector Matrix::col(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

double Matrix::trace() const {
    double s = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const {
    if (r0 + nrows > rows_ || c0 + ncols > cols_) {
        throw Error(ErrorCode::kDimensionMismatch, "block out of range");
    }
    Matrix b(nrows, ncols);
    for (std::size_t r = 0; r < nrows; ++r)
        for (std::size_t c = 0; c < ncols; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
        throw Error(ErrorCode::kDimensionMismatch, "block out of range");
    }
    for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

Matrix& Matrix::operator+=(const Matrix& o) {
    require_same_shape(*this, o, "add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    require_same_shape(*this, o, "subtract");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }
Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        std::ostringstream msg;
        msg << "matmul: " << a.rows() << "x" << a.cols() << " * " << b.rows() << "x" << b.cols();
        throw Error(ErrorCode::kDimensionMismatch, msg.str());
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

void apply_into(const Matrix& a, std::span<const double> x, std::span<double> out) {
    if (x.size() != a.cols() || out.size() != a.rows()) {
        throw Error(ErrorCode::kDimensionMismatch, "apply: vector length mismatch");
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ai = a.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < ai.size(); ++j) s += ai[j] * x[j];
        out[i] = s;
    }
}

Vector matvec(const Matrix& a, std::span<const double> x) {
    Vector out(a.rows());
    apply_into(a, x, out);
    return out;
}

Matrix symmetrize(const Matrix& a) {
    if (!a.is_square()) throw Error(ErrorCode::kDimensionMismatch, "symmetrize: not square");
    Matrix s = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    return s;
}

double distance(const Matrix& a, const Matrix& b) { return (a - b).frobenius_norm(); }

Matrix block_assemble(const BlockGrid& blocks) {
    if (blocks.empty() || blocks.front().empty()) {
        throw Error(ErrorCode::kInvalidArgument, "block_assemble: empty grid");
    }
    const std::size_t grid_cols = blocks.front().size();
    std::vector<std::size_t> row_sizes;
    std::vector<std::size_t> col_sizes;
    for (const auto& b : blocks.front()) col_sizes.push_back(b.cols());
    for (const auto& grid_row : blocks) {
        if (grid_row.size() != grid_cols) {
            throw Error(ErrorCode::kDimensionMismatch, "block_assemble: ragged grid");
        }
        const std::size_t h = grid_row.front().rows();
        for (std::size_t j = 0; j < grid_cols; ++j) {
            if (grid_row[j].rows() != h || grid_row[j].cols() != col_sizes[j]) {
                throw Error(ErrorCode::kDimensionMismatch, "block_assemble: ragged grid");
            }
        }
        row_sizes.push_back(h);
    }
    std::size_t total_rows = 0;
    std::size_t total_cols = 0;
    for (auto h : row_sizes) total_rows += h;
    for (auto w : col_sizes) total_cols += w;
    Matrix m(total_rows, total_cols);
    std::size_t r0 = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        std::size_t c0 = 0;
        for (std::size_t j = 0; j < grid_cols; ++j) {
            m.set_block(r0, c0, blocks[i][j]);
            c0 += col_sizes[j];
        }
        r0 += row_sizes[i];
    }
    return m;
}

BlockGrid block_extract(const Matrix& m, std::span<const std::size_t> row_sizes,
                        std::span<const std::size_t> col_sizes) {
    std::size_t total_rows = 0;
    std::size_t total_cols = 0;
    for (auto h : row_sizes) total_rows += h;
    for (auto w : col_sizes) total_cols += w;
    if (total_rows != m.rows() || total_cols != m.cols()) {
        throw Error(ErrorCode::kDimensionMismatch, "block_extract: sizes do not tile the matrix");
    }
    BlockGrid grid;
    std::size_t r0 = 0;
    for (auto h : row_sizes) {
        std::vector<Matrix> grid_row;
        std::size_t c0 = 0;
        for (auto w : col_sizes) {
            grid_row.push_back(m.block(r0, c0, h, w));
            c0 += w;
        }
        grid.push_back(std::move(grid_row));
        r0 += h;
    }
    return grid;
}

Matrix block_diagonal(std::span<const Matrix> blocks) {
    if (blocks.empty()) throw Error(ErrorCode::kInvalidArgument, "block_diagonal: no blocks");
    std::size_t rows = 0;
    std::size_t cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Matrix m(rows, cols);
    std::size_t r0 = 0;
    std::size_t c0 = 0;
    for (const auto& b : blocks) {
        m.set_block(r0, c0, b);
        r0 += b.rows();
        c0 += b.cols();
    }
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::kDimensionMismatch, "dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::kDimensionMismatch, "distance: length mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Vector operator+(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::kDimensionMismatch, "add: length mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vector operator-(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorCode::kDimensionMismatch, "subtract: length mismatch");
    }
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vector operator*(double s, const Vector& a) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

bool all_finite(std::span<const double> a) {
    return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
}

Matrix read_matrix(std::istream& in) {
    long long rows = 0;
    long long cols = 0;
    if (!(in >> rows >> cols) || rows < 1 || cols < 1) {
        throw Error(ErrorCode::kParse, "expected header 'rows cols' with positive counts");
    }
    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(rows * cols));
    std::string token;
    for (long long i = 0; i < rows * cols; ++i) {
        if (!(in >> token)) {
            throw Error(ErrorCode::kParse, "matrix body truncated after " + std::to_string(i) +
                                               " entries");
        }
        double x = 0.0;
        const char* first = token.data();
        const char* last = token.data() + token.size();
        if (*first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, x);
        if (ec != std::errc() || ptr != last) {
            throw Error(ErrorCode::kParse, "bad number '" + token + "'");
        }
        if (!std::isfinite(x)) throw Error(ErrorCode::kNonFinite, "non-finite entry '" + token + "'");
        entries.push_back(x);
    }
    return Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                  std::move(entries));
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
    return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
    write_matrix(out, m);
}

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

}  // namespace subsplit
