#pragma once

// Morphisms of Bott-Samelson bimodules. A morphism is recorded by its matrix
// on the c bases as a map of right R-modules; being a bimodule map is the
// extra condition that it commutes with left multiplication by every
// coordinate, and the solver below imposes exactly that. Left multiplication
// by a linear form has a two-band structure on the c basis (a twisted linear
// form on the diagonal, Demazure scalars on single up-flips), which keeps the
// linear systems sparse.

#include "bimodule.hpp"
#include "invariants.hpp"

namespace shl {

struct PolyMatrix {
    // entry[r][c] is the coefficient of target basis r in the image of source basis c
    std::vector<std::vector<Poly>> m;

    PolyMatrix() = default;
    PolyMatrix(const FieldPtr& f, size_t nvars, size_t rows, size_t cols)
        : m(rows, std::vector<Poly>(cols, Poly::zero(f, nvars))) {}

    size_t rows() const { return m.size(); }
    size_t cols() const { return m.empty() ? 0 : m[0].size(); }

    static PolyMatrix identity(const FieldPtr& f, size_t nvars, size_t n) {
        PolyMatrix p(f, nvars, n, n);
        for (size_t i = 0; i < n; ++i) p.m[i][i] = Poly::one(f, nvars);
        return p;
    }

    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
        if (a.cols() != b.rows()) throw InternalError("morphism composition shape mismatch");
        const Poly& probe = a.m.empty() ? b.m[0][0] : a.m[0][0];
        PolyMatrix r(probe.field(), probe.nvars(), a.rows(), b.cols());
        for (size_t i = 0; i < a.rows(); ++i)
            for (size_t k = 0; k < a.cols(); ++k) {
                if (a.m[i][k].is_zero()) continue;
                for (size_t j = 0; j < b.cols(); ++j) {
                    if (b.m[k][j].is_zero()) continue;
                    r.m[i][j] += a.m[i][k] * b.m[k][j];
                }
            }
        return r;
    }

    friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) {
        for (size_t i = 0; i < a.rows(); ++i)
            for (size_t j = 0; j < a.cols(); ++j) a.m[i][j] += b.m[i][j];
        return a;
    }
    friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) {
        for (size_t i = 0; i < a.rows(); ++i)
            for (size_t j = 0; j < a.cols(); ++j) a.m[i][j] -= b.m[i][j];
        return a;
    }
    friend PolyMatrix operator*(const AlgebraicReal& c, PolyMatrix a) {
        for (auto& row : a.m)
            for (auto& p : row) p = p * c;
        return a;
    }

    bool operator==(const PolyMatrix& o) const { return m == o.m; }
    bool operator!=(const PolyMatrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& row : m)
            for (const auto& p : row)
                if (!p.is_zero()) return false;
        return true;
    }

    BSBimodule::Elt apply(const BSBimodule::Elt& e) const {
        if (e.size() != cols()) throw InternalError("morphism applied to an element of the wrong module");
        const Poly& probe = m.empty() || m[0].empty() ? e[0] : m[0][0];
        BSBimodule::Elt out(rows(), Poly::zero(probe.field(), probe.nvars()));
        for (size_t c = 0; c < cols(); ++c) {
            if (e[c].is_zero()) continue;
            for (size_t r = 0; r < rows(); ++r) {
                if (m[r][c].is_zero()) continue;
                out[r] += m[r][c] * e[c];
            }
        }
        return out;
    }

    PolyMatrix transpose() const {
        const Poly& probe = m[0][0];
        PolyMatrix r(probe.field(), probe.nvars(), cols(), rows());
        for (size_t i = 0; i < rows(); ++i)
            for (size_t j = 0; j < cols(); ++j) r.m[j][i] = m[i][j];
        return r;
    }

    // constant terms: the induced map on reductions
    FMatrix reduced(const FieldPtr& f) const {
        FMatrix r(f, rows(), cols());
        for (size_t i = 0; i < rows(); ++i)
            for (size_t j = 0; j < cols(); ++j) r.at(i, j) = m[i][j].constant_term();
        return r;
    }
};

// left multiplication by the coordinate x_t as a matrix on the c basis:
// diagonal carries the fully twisted linear form, up-flips carry Demazure
// scalars
struct LeftLinearOp {
    // twist[mask]: row vector of the carried linear form at the far right
    std::vector<std::vector<AlgebraicReal>> twist;
    // flip[mask]: per id-slot i, the scalar emitted into mask | 1<<i
    std::vector<std::vector<std::pair<size_t, AlgebraicReal>>> flip;
};

inline LeftLinearOp left_linear_op(const BSBimodule& B, size_t t) {
    auto& W = *B.group();
    LeftLinearOp op;
    op.twist.resize(B.dim());
    op.flip.resize(B.dim());
    std::vector<AlgebraicReal> x(W.rep_dim(), AlgebraicReal::zero(W.field()));
    x[t] = AlgebraicReal::one(W.field());
    for (BSBimodule::Mask m = 0; m < B.dim(); ++m) {
        std::vector<AlgebraicReal> carry = x;
        for (size_t i = 0; i < B.word().size(); ++i) {
            if (m & (BSBimodule::Mask(1) << i)) continue;
            op.flip[m].emplace_back(i, W.eval_on_coroot(carry, B.word()[i]));
            carry = W.act_row(W.element_of_word({B.word()[i]}), carry);
        }
        op.twist[m] = std::move(carry);
    }
    return op;
}

// the full polynomial matrix of left multiplication by x_t
inline PolyMatrix left_mul_matrix(const BSBimodule& B, size_t t) {
    auto op = left_linear_op(B, t);
    PolyMatrix L(B.field(), B.nvars(), B.dim(), B.dim());
    for (BSBimodule::Mask m = 0; m < B.dim(); ++m) {
        L.m[m][m] = Poly::linear_form(B.field(), op.twist[m]);
        for (const auto& [i, c] : op.flip[m])
            if (!c.is_zero())
                L.m[m | (BSBimodule::Mask(1) << i)][m] = Poly::constant(B.field(), B.nvars(), c);
    }
    return L;
}

// all bimodule maps A -> B of degree k, as a canonical basis of PolyMatrix
class HomSpaceSolver {
public:
    HomSpaceSolver(const BSBimodule& A, const BSBimodule& B, int k) : A_(A), B_(B), k_(k) {
        if (A.group() != B.group()) throw InternalError("hom spaces need a common group");
        build();
    }

    size_t dim() const { return basis_.size(); }
    const std::vector<PolyMatrix>& basis() const { return basis_; }

private:
    // polynomial degree of the (r, c) entry; negative or half-integral means zero
    int entry_degree(BSBimodule::Mask r, BSBimodule::Mask c) const {
        int d = k_ + A_.basis_degree(c) - B_.basis_degree(r);
        if (d < 0 || d % 2) return -1;
        return d / 2;
    }

    void build() {
        const FieldPtr& F = A_.field();
        size_t nv = A_.nvars();
        GradedPolySpace gs(F, nv);
        // unknown layout: per (r, c) with valid degree, one unknown per monomial
        std::vector<std::vector<size_t>> offset(B_.dim(), std::vector<size_t>(A_.dim(), SIZE_MAX));
        size_t nunk = 0;
        for (BSBimodule::Mask r = 0; r < B_.dim(); ++r)
            for (BSBimodule::Mask c = 0; c < A_.dim(); ++c) {
                int d = entry_degree(r, c);
                if (d < 0) continue;
                offset[r][c] = nunk;
                nunk += gs.dim(static_cast<unsigned>(d));
            }
        if (nunk == 0) return;

        SparseKernel sk(F, nunk);
        for (size_t t = 0; t < nv; ++t) {
            auto opA = left_linear_op(A_, t);
            auto opB = left_linear_op(B_, t);
            for (BSBimodule::Mask r = 0; r < B_.dim(); ++r) {
                for (BSBimodule::Mask c = 0; c < A_.dim(); ++c) {
                    // the (r, c) entry of M L_A - L_B M, a polynomial of degree
                    // entry_degree(r, c) + 1, must vanish
                    int dq = k_ + A_.basis_degree(c) + 2 - B_.basis_degree(r);
                    if (dq < 0 || dq % 2) continue;
                    unsigned deg = static_cast<unsigned>(dq / 2);
                    // collect: coefficient map monomial -> sum of unknown contributions
                    std::map<Mono, std::vector<std::pair<size_t, AlgebraicReal>>> rows;
                    auto add_poly_times_unknowns = [&](BSBimodule::Mask rr, BSBimodule::Mask cc,
                                                       const Poly& mult, int sign) {
                        int d = entry_degree(rr, cc);
                        if (d < 0) return;
                        size_t base = offset[rr][cc];
                        const auto& monos = gs.basis(static_cast<unsigned>(d));
                        for (size_t i = 0; i < monos.size(); ++i) {
                            for (const auto& [mm, cf] : mult.terms()) {
                                Mono prod(nv);
                                for (size_t v = 0; v < nv; ++v)
                                    prod[v] = static_cast<std::uint8_t>(monos[i][v] + mm[v]);
                                AlgebraicReal val = sign > 0 ? cf : -cf;
                                rows[prod].emplace_back(base + i, val);
                            }
                        }
                    };
                    // (M L_A)[r][c] = M[r][c] w^A_c + sum_flips S^A M[r][c|bit]
                    add_poly_times_unknowns(r, c, Poly::linear_form(F, opA.twist[c]), +1);
                    for (const auto& [i, s] : opA.flip[c]) {
                        if (s.is_zero()) continue;
                        add_poly_times_unknowns(r, c | (BSBimodule::Mask(1) << i),
                                                Poly::constant(F, nv, s), +1);
                    }
                    // (L_B M)[r][c] = w^B_r M[r][c] + sum_downflips S^B M[r&~bit][c]
                    add_poly_times_unknowns(r, c, Poly::linear_form(F, opB.twist[r]), -1);
                    for (size_t i = 0; i < B_.word().size(); ++i) {
                        if (!(r & (BSBimodule::Mask(1) << i))) continue;
                        BSBimodule::Mask rd = r & ~(BSBimodule::Mask(1) << i);
                        for (const auto& [fi, s] : opB.flip[rd]) {
                            if (fi != i || s.is_zero()) continue;
                            add_poly_times_unknowns(rd, c, Poly::constant(F, nv, s), -1);
                        }
                    }
                    for (auto& [mono, entries] : rows) {
                        // merge duplicate unknowns
                        std::map<size_t, AlgebraicReal> acc;
                        for (auto& [u, v] : entries) {
                            auto [it, fresh] = acc.try_emplace(u, v);
                            if (!fresh) it->second += v;
                        }
                        std::vector<SparseKernel::Entry> row;
                        for (auto& [u, v] : acc)
                            if (!v.is_zero()) row.emplace_back(static_cast<uint32_t>(u), v);
                        if (!row.empty()) sk.add_row(std::move(row));
                    }
                }
            }
        }

        for (const auto& vec : sk.kernel_basis()) {
            PolyMatrix M(F, nv, B_.dim(), A_.dim());
            for (BSBimodule::Mask r = 0; r < B_.dim(); ++r)
                for (BSBimodule::Mask c = 0; c < A_.dim(); ++c) {
                    int d = entry_degree(r, c);
                    if (d < 0) continue;
                    size_t base = offset[r][c];
                    const auto& monos = gs.basis(static_cast<unsigned>(d));
                    std::map<Mono, AlgebraicReal> terms;
                    for (size_t i = 0; i < monos.size(); ++i)
                        if (!vec[base + i].is_zero()) terms.emplace(monos[i], vec[base + i]);
                    M.m[r][c] = Poly::from_terms(F, nv, std::move(terms));
                }
            basis_.push_back(std::move(M));
        }
    }

    const BSBimodule& A_;
    const BSBimodule& B_;
    int k_;
    std::vector<PolyMatrix> basis_;
};

inline std::vector<PolyMatrix> hom_space(const BSBimodule& A, const BSBimodule& B, int k) {
    return HomSpaceSolver(A, B, k).basis();
}

// extend a morphism F: A -> B to F (x) id_{B_s}: A B_s -> B B_s; the image
// coefficients cross the new slot
inline PolyMatrix tensor_id_right(const BSBimodule& A, const BSBimodule& B, const PolyMatrix& F, size_t s) {
    const auto& W = *A.group();
    const FieldPtr& Fd = A.field();
    size_t nv = A.nvars();
    PolyMatrix out(Fd, nv, B.dim() * 2, A.dim() * 2);
    for (size_t r = 0; r < B.dim(); ++r)
        for (size_t c = 0; c < A.dim(); ++c) {
            const Poly& q = F.m[r][c];
            if (q.is_zero()) continue;
            // source slot c_s: q passes; source slot c_id: q branches
            out.m[r + B.dim()][c + A.dim()] += q;
            out.m[r][c] += act_gen(W, s, q);
            out.m[r + B.dim()][c] += demazure(W, s, q);
        }
    return out;
}

// adjoint of F: A -> B for the intersection forms: G_A X = F^T G_B
inline PolyMatrix adjoint(const BSBimodule& A, const BSBimodule& B, const PolyMatrix& F, int k) {
    const FieldPtr& Fd = A.field();
    size_t nv = A.nvars();
    GradedPolySpace gs(Fd, nv);
    // X: B -> A of degree k (same degree as F)
    auto deg_of = [&](BSBimodule::Mask r, BSBimodule::Mask c) {
        int d = k + B.basis_degree(c) - A.basis_degree(r);
        if (d < 0 || d % 2) return -1;
        return d / 2;
    };
    std::vector<std::vector<size_t>> offset(A.dim(), std::vector<size_t>(B.dim(), SIZE_MAX));
    size_t nunk = 0;
    for (BSBimodule::Mask r = 0; r < A.dim(); ++r)
        for (BSBimodule::Mask c = 0; c < B.dim(); ++c) {
            int d = deg_of(r, c);
            if (d < 0) continue;
            offset[r][c] = nunk;
            nunk += gs.dim(static_cast<unsigned>(d));
        }
    const auto& GA = A.gram();
    const auto& GB = B.gram();
    // rows: (g, c, monomial): sum_r GA[g][r] X[r][c] - (F^T GB)[g][c] = 0,
    // with one slack unknown multiplying the right hand side
    SparseKernel sk(Fd, nunk + 1);
    for (BSBimodule::Mask g = 0; g < A.dim(); ++g)
        for (BSBimodule::Mask c = 0; c < B.dim(); ++c) {
            Poly rhs = Poly::zero(Fd, nv);
            for (BSBimodule::Mask r = 0; r < B.dim(); ++r) {
                if (F.m[r][g].is_zero() || GB[r][c].is_zero()) continue;
                rhs += F.m[r][g] * GB[r][c];
            }
            std::map<Mono, std::map<size_t, AlgebraicReal>> rows;
            for (const auto& [mm, cf] : rhs.terms()) {
                auto [it, fresh] = rows[mm].try_emplace(nunk, -cf);
                if (!fresh) it->second -= cf;
            }
            for (BSBimodule::Mask r = 0; r < A.dim(); ++r) {
                if (GA[g][r].is_zero()) continue;
                int d = deg_of(r, c);
                if (d < 0) continue;
                size_t base = offset[r][c];
                const auto& monos = gs.basis(static_cast<unsigned>(d));
                for (size_t i = 0; i < monos.size(); ++i)
                    for (const auto& [mm, cf] : GA[g][r].terms()) {
                        Mono prod(nv);
                        for (size_t v = 0; v < nv; ++v)
                            prod[v] = static_cast<std::uint8_t>(monos[i][v] + mm[v]);
                        auto [it, fresh] = rows[prod].try_emplace(base + i, cf);
                        if (!fresh) it->second += cf;
                    }
            }
            for (auto& [mono, acc] : rows) {
                std::vector<SparseKernel::Entry> row;
                for (auto& [u, v] : acc)
                    if (!v.is_zero()) row.emplace_back(static_cast<uint32_t>(u), v);
                if (!row.empty()) sk.add_row(std::move(row));
            }
        }
    auto kb = sk.kernel_basis();
    // pick the kernel vector with nonzero slack; the homogeneous part is zero
    // because the form is non-degenerate
    for (const auto& vec : kb) {
        if (vec[nunk].is_zero()) continue;
        AlgebraicReal inv = vec[nunk].inverse();
        PolyMatrix X(Fd, nv, A.dim(), B.dim());
        for (BSBimodule::Mask r = 0; r < A.dim(); ++r)
            for (BSBimodule::Mask c = 0; c < B.dim(); ++c) {
                int d = deg_of(r, c);
                if (d < 0) continue;
                size_t base = offset[r][c];
                const auto& monos = gs.basis(static_cast<unsigned>(d));
                std::map<Mono, AlgebraicReal> terms;
                for (size_t i = 0; i < monos.size(); ++i) {
                    AlgebraicReal v = vec[base + i] * inv;
                    if (!v.is_zero()) terms.emplace(monos[i], v);
                }
                X.m[r][c] = Poly::from_terms(Fd, nv, std::move(terms));
            }
        return X;
    }
    throw InternalError("no adjoint found; the intersection form degenerated");
}

}  // namespace shl
