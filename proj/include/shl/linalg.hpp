#pragma once

// Dense and sparse exact linear algebra over Q(theta). Everything here is
// plain Gaussian elimination; no pivot magnitude heuristics are meaningful in
// exact arithmetic, so pivots are chosen for sparsity or position only.

#include <algorithm>
#include <optional>
#include <tuple>

#include "field.hpp"

namespace shl {

class FMatrix {
public:
    FMatrix() = default;
    FMatrix(FieldPtr f, size_t rows, size_t cols)
        : f_(std::move(f)), r_(rows), c_(cols), a_(rows * cols, AlgebraicReal::zero(f_)) {}

    static FMatrix identity(const FieldPtr& f, size_t n) {
        FMatrix m(f, n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = AlgebraicReal::one(f);
        return m;
    }

    size_t rows() const { return r_; }
    size_t cols() const { return c_; }
    const FieldPtr& field() const { return f_; }

    AlgebraicReal& at(size_t i, size_t j) { return a_[i * c_ + j]; }
    const AlgebraicReal& at(size_t i, size_t j) const { return a_[i * c_ + j]; }

    friend FMatrix operator*(const FMatrix& x, const FMatrix& y) {
        if (x.c_ != y.r_) throw InternalError("matrix product shape mismatch");
        FMatrix z(x.f_, x.r_, y.c_);
        for (size_t i = 0; i < x.r_; ++i)
            for (size_t k = 0; k < x.c_; ++k) {
                const AlgebraicReal& v = x.at(i, k);
                if (v.is_zero()) continue;
                for (size_t j = 0; j < y.c_; ++j) {
                    if (y.at(k, j).is_zero()) continue;
                    z.at(i, j) += v * y.at(k, j);
                }
            }
        return z;
    }
    friend FMatrix operator+(const FMatrix& x, const FMatrix& y) {
        if (x.r_ != y.r_ || x.c_ != y.c_) throw InternalError("matrix sum shape mismatch");
        FMatrix z = x;
        for (size_t i = 0; i < z.a_.size(); ++i) z.a_[i] += y.a_[i];
        return z;
    }
    friend FMatrix operator-(const FMatrix& x, const FMatrix& y) {
        if (x.r_ != y.r_ || x.c_ != y.c_) throw InternalError("matrix diff shape mismatch");
        FMatrix z = x;
        for (size_t i = 0; i < z.a_.size(); ++i) z.a_[i] -= y.a_[i];
        return z;
    }
    friend FMatrix operator*(const AlgebraicReal& s, const FMatrix& y) {
        FMatrix z = y;
        for (auto& v : z.a_) v = s * v;
        return z;
    }
    friend bool operator==(const FMatrix& x, const FMatrix& y) {
        return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_;
    }

    FMatrix transpose() const {
        FMatrix t(f_, c_, r_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    bool is_zero() const {
        for (const auto& v : a_)
            if (!v.is_zero()) return false;
        return true;
    }

    std::vector<AlgebraicReal> apply(const std::vector<AlgebraicReal>& v) const {
        if (v.size() != c_) throw InternalError("matrix apply shape mismatch");
        std::vector<AlgebraicReal> r(r_, AlgebraicReal::zero(f_));
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] += at(i, j) * v[j];
        return r;
    }

    size_t rank() const {
        FMatrix m = *this;
        size_t rank = 0;
        for (size_t col = 0; col < c_ && rank < r_; ++col) {
            size_t piv = rank;
            while (piv < r_ && m.at(piv, col).is_zero()) ++piv;
            if (piv == r_) continue;
            m.swap_rows(piv, rank);
            AlgebraicReal inv = m.at(rank, col).inverse();
            for (size_t i = rank + 1; i < r_; ++i) {
                if (m.at(i, col).is_zero()) continue;
                AlgebraicReal fct = m.at(i, col) * inv;
                for (size_t j = col; j < c_; ++j) m.at(i, j) -= fct * m.at(rank, j);
            }
            ++rank;
        }
        return rank;
    }

    // canonical nullspace basis (free variable = 1 pattern), sorted by free column
    std::vector<std::vector<AlgebraicReal>> nullspace() const {
        FMatrix m = *this;
        std::vector<size_t> pivot_col;
        size_t rank = 0;
        for (size_t col = 0; col < c_ && rank < r_; ++col) {
            size_t piv = rank;
            while (piv < r_ && m.at(piv, col).is_zero()) ++piv;
            if (piv == r_) continue;
            m.swap_rows(piv, rank);
            AlgebraicReal inv = m.at(rank, col).inverse();
            for (size_t j = col; j < c_; ++j) m.at(rank, j) = inv * m.at(rank, j);
            for (size_t i = 0; i < r_; ++i) {
                if (i == rank || m.at(i, col).is_zero()) continue;
                AlgebraicReal fct = m.at(i, col);
                for (size_t j = col; j < c_; ++j) m.at(i, j) -= fct * m.at(rank, j);
            }
            pivot_col.push_back(col);
            ++rank;
        }
        std::vector<bool> is_pivot(c_, false);
        for (size_t p : pivot_col) is_pivot[p] = true;
        std::vector<std::vector<AlgebraicReal>> basis;
        for (size_t fc = 0; fc < c_; ++fc) {
            if (is_pivot[fc]) continue;
            std::vector<AlgebraicReal> v(c_, AlgebraicReal::zero(f_));
            v[fc] = AlgebraicReal::one(f_);
            for (size_t k = 0; k < pivot_col.size(); ++k) v[pivot_col[k]] = -m.at(k, fc);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    // one solution of A x = b, if consistent
    std::optional<std::vector<AlgebraicReal>> solve(const std::vector<AlgebraicReal>& b) const {
        if (b.size() != r_) throw InternalError("solve shape mismatch");
        FMatrix m(f_, r_, c_ + 1);
        for (size_t i = 0; i < r_; ++i) {
            for (size_t j = 0; j < c_; ++j) m.at(i, j) = at(i, j);
            m.at(i, c_) = b[i];
        }
        std::vector<size_t> pivot_col;
        size_t rank = 0;
        for (size_t col = 0; col < c_ && rank < r_; ++col) {
            size_t piv = rank;
            while (piv < r_ && m.at(piv, col).is_zero()) ++piv;
            if (piv == r_) continue;
            m.swap_rows(piv, rank);
            AlgebraicReal inv = m.at(rank, col).inverse();
            for (size_t j = col; j <= c_; ++j) m.at(rank, j) = inv * m.at(rank, j);
            for (size_t i = 0; i < r_; ++i) {
                if (i == rank || m.at(i, col).is_zero()) continue;
                AlgebraicReal fct = m.at(i, col);
                for (size_t j = col; j <= c_; ++j) m.at(i, j) -= fct * m.at(rank, j);
            }
            pivot_col.push_back(col);
            ++rank;
        }
        for (size_t i = rank; i < r_; ++i)
            if (!m.at(i, c_).is_zero()) return std::nullopt;
        std::vector<AlgebraicReal> x(c_, AlgebraicReal::zero(f_));
        for (size_t k = 0; k < pivot_col.size(); ++k) x[pivot_col[k]] = m.at(k, c_);
        return x;
    }

    std::optional<FMatrix> inverse() const {
        if (r_ != c_) return std::nullopt;
        FMatrix m(f_, r_, 2 * c_);
        for (size_t i = 0; i < r_; ++i) {
            for (size_t j = 0; j < c_; ++j) m.at(i, j) = at(i, j);
            m.at(i, c_ + i) = AlgebraicReal::one(f_);
        }
        size_t rank = 0;
        for (size_t col = 0; col < c_; ++col) {
            size_t piv = rank;
            while (piv < r_ && m.at(piv, col).is_zero()) ++piv;
            if (piv == r_) return std::nullopt;
            m.swap_rows(piv, rank);
            AlgebraicReal inv = m.at(rank, col).inverse();
            for (size_t j = col; j < 2 * c_; ++j) m.at(rank, j) = inv * m.at(rank, j);
            for (size_t i = 0; i < r_; ++i) {
                if (i == rank || m.at(i, col).is_zero()) continue;
                AlgebraicReal fct = m.at(i, col);
                for (size_t j = col; j < 2 * c_; ++j) m.at(i, j) -= fct * m.at(rank, j);
            }
            ++rank;
        }
        FMatrix out(f_, r_, c_);
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = 0; j < c_; ++j) out.at(i, j) = m.at(i, c_ + j);
        return out;
    }

    // signature (p, n, z) of a symmetric matrix via congruence transforms
    std::tuple<size_t, size_t, size_t> signature() const {
        if (r_ != c_) throw InternalError("signature of non-square matrix");
        for (size_t i = 0; i < r_; ++i)
            for (size_t j = i + 1; j < c_; ++j)
                if (!(at(i, j) == at(j, i))) throw InternalError("signature of non-symmetric matrix");
        FMatrix m = *this;
        size_t p = 0, n = 0, z = 0;
        size_t dim = r_;
        for (size_t k = 0; k < dim; ++k) {
            size_t piv = dim;
            for (size_t i = k; i < dim; ++i)
                if (!m.at(i, i).is_zero()) {
                    piv = i;
                    break;
                }
            if (piv == dim) {
                // all remaining diagonal entries vanish; find any nonzero entry
                size_t bi = dim, bj = dim;
                for (size_t i = k; i < dim && bi == dim; ++i)
                    for (size_t j = i + 1; j < dim; ++j)
                        if (!m.at(i, j).is_zero()) {
                            bi = i;
                            bj = j;
                            break;
                        }
                if (bi == dim) {
                    z += dim - k;
                    break;
                }
                // symmetric row+column addition creates a nonzero diagonal entry
                for (size_t j = 0; j < dim; ++j) m.at(bi, j) += m.at(bj, j);
                for (size_t i = 0; i < dim; ++i) m.at(i, bi) += m.at(i, bj);
                piv = bi;
            }
            if (piv != k) {
                m.swap_rows(piv, k);
                m.swap_cols(piv, k);
            }
            AlgebraicReal d = m.at(k, k);
            int s = d.sign();
            if (s > 0)
                ++p;
            else
                ++n;
            AlgebraicReal inv = d.inverse();
            for (size_t i = k + 1; i < dim; ++i) {
                if (m.at(i, k).is_zero()) continue;
                AlgebraicReal fct = m.at(i, k) * inv;
                for (size_t j = k; j < dim; ++j) m.at(i, j) -= fct * m.at(k, j);
                for (size_t j = 0; j < dim; ++j) m.at(j, i) = m.at(i, j);
            }
            // zero out row/col k beyond diagonal for cleanliness
            for (size_t j = k + 1; j < dim; ++j) {
                m.at(k, j) = AlgebraicReal::zero(f_);
                m.at(j, k) = AlgebraicReal::zero(f_);
            }
        }
        return {p, n, z};
    }

    std::string key() const {
        std::string s = std::to_string(r_) + "x" + std::to_string(c_) + ":";
        for (const auto& v : a_) {
            s += v.key();
            s += ';';
        }
        return s;
    }

    void swap_rows(size_t i, size_t j) {
        if (i == j) return;
        for (size_t k = 0; k < c_; ++k) std::swap(at(i, k), at(j, k));
    }
    void swap_cols(size_t i, size_t j) {
        if (i == j) return;
        for (size_t k = 0; k < r_; ++k) std::swap(at(k, i), at(k, j));
    }

private:
    FieldPtr f_;
    size_t r_ = 0, c_ = 0;
    std::vector<AlgebraicReal> a_;
};

// Sparse homogeneous system A x = 0, rows fed incrementally; nullspace via
// back-substitution on the accumulated echelon. Suited to the large, very
// sparse morphism systems, where dense elimination would not fit the budget.
class SparseKernel {
public:
    using Entry = std::pair<std::uint32_t, AlgebraicReal>;  // (column, value), sorted by column

    SparseKernel(FieldPtr f, size_t ncols) : f_(std::move(f)), ncols_(ncols), pivot_of_col_(ncols, SIZE_MAX) {}

    size_t num_cols() const { return ncols_; }

    // reduce a row against the echelon and insert it if independent
    void add_row(std::vector<Entry> row) {
        for (;;) {
            while (!row.empty() && row.front().second.is_zero()) row.erase(row.begin());
            if (row.empty()) return;
            size_t pr = pivot_of_col_[row.front().first];
            if (pr == SIZE_MAX) break;
            axpy(row, -row.front().second, rows_[pr]);
        }
        // normalize leading coefficient to 1
        AlgebraicReal inv = row.front().second.inverse();
        for (auto& e : row) e.second = inv * e.second;
        pivot_of_col_[row.front().first] = rows_.size();
        lead_.push_back(row.front().first);
        rows_.push_back(std::move(row));
    }

    size_t rank() const { return rows_.size(); }

    // canonical basis of the kernel: one vector per free column, free coord = 1
    std::vector<std::vector<AlgebraicReal>> kernel_basis() const {
        std::vector<size_t> order(rows_.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return lead_[a] > lead_[b]; });
        std::vector<std::vector<AlgebraicReal>> basis;
        for (size_t fc = 0; fc < ncols_; ++fc) {
            if (pivot_of_col_[fc] != SIZE_MAX) continue;
            std::vector<AlgebraicReal> v(ncols_, AlgebraicReal::zero(f_));
            v[fc] = AlgebraicReal::one(f_);
            for (size_t oi : order) {
                const auto& row = rows_[oi];
                std::uint32_t lead = row.front().first;
                if (lead > fc) continue;  // row only involves columns >= lead > fc, all zero in v
                AlgebraicReal acc = AlgebraicReal::zero(f_);
                for (size_t k = 1; k < row.size(); ++k) {
                    const auto& v_at = v[row[k].first];
                    if (!v_at.is_zero()) acc += row[k].second * v_at;
                }
                v[lead] = -acc;
            }
            basis.push_back(std::move(v));
        }
        return basis;
    }

private:
    // row += s * other (sparse merge, columns ascending)
    void axpy(std::vector<Entry>& row, const AlgebraicReal& s, const std::vector<Entry>& other) {
        std::vector<Entry> out;
        out.reserve(row.size() + other.size());
        size_t i = 0, j = 0;
        while (i < row.size() || j < other.size()) {
            if (j == other.size() || (i < row.size() && row[i].first < other[j].first)) {
                out.push_back(std::move(row[i++]));
            } else if (i == row.size() || other[j].first < row[i].first) {
                out.emplace_back(other[j].first, s * other[j].second);
                ++j;
            } else {
                AlgebraicReal v = row[i].second + s * other[j].second;
                if (!v.is_zero()) out.emplace_back(row[i].first, std::move(v));
                ++i;
                ++j;
            }
        }
        row = std::move(out);
    }

    FieldPtr f_;
    size_t ncols_;
    std::vector<size_t> pivot_of_col_;
    std::vector<std::uint32_t> lead_;
    std::vector<std::vector<Entry>> rows_;
};

}  // namespace shl
