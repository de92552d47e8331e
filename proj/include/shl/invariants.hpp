#pragma once

// Invariant polynomials and the coinvariant ring. Homogeneous invariants of a
// given degree are the common kernel of (s . -) - id over the generators. The
// coinvariant ring is R modulo the ideal generated by positive-degree
// invariants; for finite W it is |W|-dimensional with top degree ell(w0), and
// carries the exact pairing <f, g> = D_{w0}(f g) built from Demazure
// operators, which kills the ideal and so is well defined on the quotient.

#include "poly.hpp"

namespace shl {

class GradedPolySpace {
public:
    GradedPolySpace(FieldPtr f, size_t nvars) : field_(std::move(f)), nvars_(nvars) {}

    const std::vector<Mono>& basis(unsigned d) const {
        if (d >= bases_.size()) {
            for (unsigned k = static_cast<unsigned>(bases_.size()); k <= d; ++k) {
                std::vector<Mono> ms;
                monomials_of_degree(nvars_, k, ms);
                bases_.push_back(std::move(ms));
                std::map<Mono, size_t> idx;
                for (size_t i = 0; i < bases_.back().size(); ++i) idx.emplace(bases_.back()[i], i);
                index_.push_back(std::move(idx));
            }
        }
        return bases_[d];
    }

    size_t dim(unsigned d) const { return basis(d).size(); }

    size_t index(unsigned d, const Mono& m) const {
        basis(d);
        auto it = index_[d].find(m);
        if (it == index_[d].end()) throw InternalError("monomial outside its graded piece");
        return it->second;
    }

    std::vector<AlgebraicReal> to_vec(unsigned d, const Poly& p) const {
        std::vector<AlgebraicReal> v(dim(d), AlgebraicReal::zero(field_));
        for (const auto& [m, c] : p.terms()) {
            unsigned td = 0;
            for (auto e : m) td += e;
            if (td != d) throw InternalError("polynomial is not homogeneous of the expected degree");
            v[index(d, m)] = c;
        }
        return v;
    }

    Poly from_vec(unsigned d, const std::vector<AlgebraicReal>& v) const {
        const auto& ms = basis(d);
        std::map<Mono, AlgebraicReal> terms;
        for (size_t i = 0; i < ms.size(); ++i)
            if (!v[i].is_zero()) terms.emplace(ms[i], v[i]);
        return Poly::from_terms(field_, nvars_, std::move(terms));
    }

    // matrix of p -> s . p on the degree-d piece
    FMatrix gen_action_matrix(const CoxeterSystem& W, size_t s, unsigned d) const {
        const auto& ms = basis(d);
        FMatrix a(field_, ms.size(), ms.size());
        for (size_t c = 0; c < ms.size(); ++c) {
            Poly img = act_gen(W, s, from_vec(d, unit(c, ms.size())));
            auto col = to_vec(d, img);
            for (size_t r = 0; r < ms.size(); ++r) a.at(r, c) = col[r];
        }
        return a;
    }

private:
    std::vector<AlgebraicReal> unit(size_t i, size_t n) const {
        std::vector<AlgebraicReal> v(n, AlgebraicReal::zero(field_));
        v[i] = AlgebraicReal::one(field_);
        return v;
    }

    FieldPtr field_;
    size_t nvars_;
    mutable std::vector<std::vector<Mono>> bases_;
    mutable std::vector<std::map<Mono, size_t>> index_;
};

// homogeneous invariants of degree d, canonical basis
inline std::vector<Poly> invariant_basis(const CoxeterSystem& W, const GradedPolySpace& gs, unsigned d) {
    size_t M = gs.dim(d);
    SparseKernel sk(W.field(), M);
    for (size_t s = 0; s < W.rank(); ++s) {
        FMatrix a = gs.gen_action_matrix(W, s, d);
        for (size_t r = 0; r < M; ++r) {
            std::vector<SparseKernel::Entry> row;
            for (size_t c = 0; c < M; ++c) {
                AlgebraicReal v = a.at(r, c);
                if (r == c) v -= AlgebraicReal::one(W.field());
                if (!v.is_zero()) row.emplace_back(static_cast<uint32_t>(c), std::move(v));
            }
            if (!row.empty()) sk.add_row(std::move(row));
        }
    }
    std::vector<Poly> out;
    for (auto& v : sk.kernel_basis()) out.push_back(gs.from_vec(d, v));
    return out;
}

// Demazure composite for a reduced word, rightmost letter applied first
inline Poly demazure_word(const CoxeterSystem& W, const std::vector<std::uint8_t>& word, Poly f) {
    for (size_t i = word.size(); i-- > 0;) f = demazure(W, word[i], f);
    return f;
}

class CoinvariantRing {
public:
    // w0 must be the longest element of a finite group, fully enumerated
    CoinvariantRing(CoxeterPtr W, ElementId w0)
        : W_(std::move(W)), w0_(w0), top_(W_->length(w0)), gs_(W_->field(), W_->rep_dim()) {
        build();
    }

    const CoxeterSystem& group() const { return *W_; }
    unsigned top_degree() const { return top_; }
    size_t dim(unsigned k) const { return k > top_ ? 0 : free_cols_[k].size(); }

    size_t total_dim() const {
        size_t n = 0;
        for (unsigned k = 0; k <= top_; ++k) n += dim(k);
        return n;
    }

    // quotient basis: monomials at the non-pivot columns of the ideal's RREF
    std::vector<Mono> quotient_basis(unsigned k) const {
        std::vector<Mono> out;
        for (size_t c : free_cols_[k]) out.push_back(gs_.basis(k)[c]);
        return out;
    }

    // coordinates of a homogeneous polynomial in the quotient basis
    std::vector<AlgebraicReal> reduce_vec(unsigned k, const Poly& p) const {
        if (k > top_) {
            if (!p.is_zero() && !ideal_contains(k, p))
                throw InternalError("nonzero class above the top degree of the coinvariant ring");
            return {};
        }
        auto v = gs_.to_vec(k, p);
        // eliminate ideal pivots
        for (const auto& row : ideal_rref_[k]) {
            size_t piv = row.first;
            if (v[piv].is_zero()) continue;
            AlgebraicReal f = v[piv];
            for (size_t j = 0; j < v.size(); ++j)
                if (!row.second[j].is_zero()) v[j] -= f * row.second[j];
        }
        std::vector<AlgebraicReal> out;
        out.reserve(free_cols_[k].size());
        for (size_t c : free_cols_[k]) out.push_back(v[c]);
        return out;
    }

    // matrix of multiplication by a linear form, degree k -> k+1, in quotient bases
    FMatrix multiplication_matrix(unsigned k, const Poly& linear) const {
        FMatrix m(W_->field(), dim(k + 1), dim(k));
        auto qb = quotient_basis(k);
        for (size_t c = 0; c < qb.size(); ++c) {
            Poly p = Poly::from_terms(W_->field(), gs_nvars(), {{qb[c], AlgebraicReal::one(W_->field())}});
            auto col = reduce_vec(k + 1, linear * p);
            for (size_t r = 0; r < col.size(); ++r) m.at(r, c) = col[r];
        }
        return m;
    }

    // <f, g> = D_{w0}(f g) on quotient bases of complementary degrees
    FMatrix top_pairing(unsigned k) const {
        auto bk = quotient_basis(k);
        auto bt = quotient_basis(top_ - k);
        FMatrix m(W_->field(), bk.size(), bt.size());
        for (size_t i = 0; i < bk.size(); ++i)
            for (size_t j = 0; j < bt.size(); ++j) {
                Mono prod(gs_nvars(), 0);
                for (size_t t = 0; t < gs_nvars(); ++t)
                    prod[t] = static_cast<std::uint8_t>(bk[i][t] + bt[j][t]);
                Poly p = Poly::from_terms(W_->field(), gs_nvars(), {{prod, AlgebraicReal::one(W_->field())}});
                Poly val = demazure_word(*W_, W_->word(w0_), p);
                if (val.degree() > 0) throw InternalError("top Demazure composite did not reach degree zero");
                m.at(i, j) = val.constant_term();
            }
        return m;
    }

    const std::vector<Poly>& invariants(unsigned d) const { return inv_[d]; }

private:
    size_t gs_nvars() const { return W_->rep_dim(); }

    void build() {
        inv_.resize(top_ + 2);
        ideal_rref_.resize(top_ + 2);
        free_cols_.resize(top_ + 2);
        // degree 0: ideal is zero, quotient is the constants
        free_cols_[0] = {0};
        std::vector<std::vector<AlgebraicReal>> prev_ideal_basis;  // full-coordinate rows of I_{k-1}
        for (unsigned k = 1; k <= top_ + 1; ++k) {
            inv_[k] = invariant_basis(*W_, gs_, k);
            size_t M = gs_.dim(k);
            // I_k = span(inv_k) + sum_i x_i I_{k-1}
            std::vector<std::vector<AlgebraicReal>> rows;
            for (const auto& f : inv_[k]) rows.push_back(gs_.to_vec(k, f));
            for (const auto& r : prev_ideal_basis) {
                Poly p = gs_.from_vec(k - 1, r);
                for (size_t i = 0; i < gs_nvars(); ++i) {
                    Poly xi = Poly::variable(W_->field(), gs_nvars(), i);
                    rows.push_back(gs_.to_vec(k, xi * p));
                }
            }
            rref(rows, M, ideal_rref_[k], free_cols_[k]);
            prev_ideal_basis.clear();
            for (const auto& [piv, row] : ideal_rref_[k]) prev_ideal_basis.push_back(row);
        }
        if (dim(top_) != 1) throw InternalError("coinvariant top degree is not one dimensional");
        if (free_cols_[top_ + 1].size() != 0)
            throw InternalError("coinvariant ring does not vanish above the top degree");
    }

    bool ideal_contains(unsigned k, const Poly& p) const {
        if (k >= ideal_rref_.size()) return false;
        auto v = gs_.to_vec(k, p);
        for (const auto& row : ideal_rref_[k]) {
            if (v[row.first].is_zero()) continue;
            AlgebraicReal f = v[row.first];
            for (size_t j = 0; j < v.size(); ++j)
                if (!row.second[j].is_zero()) v[j] -= f * row.second[j];
        }
        for (const auto& x : v)
            if (!x.is_zero()) return false;
        return true;
    }

    // rows -> reduced row echelon form; pivots become (pivot_col, row) pairs,
    // non-pivot columns are the quotient basis
    void rref(std::vector<std::vector<AlgebraicReal>>& rows, size_t M,
              std::vector<std::pair<size_t, std::vector<AlgebraicReal>>>& out,
              std::vector<size_t>& free_cols) const {
        out.clear();
        for (auto& r : rows) {
            for (const auto& [piv, prow] : out) {
                if (r[piv].is_zero()) continue;
                AlgebraicReal f = r[piv];
                for (size_t j = 0; j < M; ++j)
                    if (!prow[j].is_zero()) r[j] -= f * prow[j];
            }
            size_t lead = M;
            for (size_t j = 0; j < M; ++j)
                if (!r[j].is_zero()) {
                    lead = j;
                    break;
                }
            if (lead == M) continue;
            AlgebraicReal inv = r[lead].inverse();
            for (size_t j = lead; j < M; ++j)
                if (!r[j].is_zero()) r[j] *= inv;
            // eliminate above
            for (auto& [piv, prow] : out) {
                if (prow[lead].is_zero()) continue;
                AlgebraicReal f = prow[lead];
                for (size_t j = 0; j < M; ++j)
                    if (!r[j].is_zero()) prow[j] -= f * r[j];
            }
            out.emplace_back(lead, r);
        }
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        free_cols.clear();
        size_t oi = 0;
        for (size_t c = 0; c < M; ++c) {
            if (oi < out.size() && out[oi].first == c)
                ++oi;
            else
                free_cols.push_back(c);
        }
    }

    CoxeterPtr W_;
    ElementId w0_;
    unsigned top_;
    GradedPolySpace gs_;
    std::vector<std::vector<Poly>> inv_;
    std::vector<std::vector<std::pair<size_t, std::vector<AlgebraicReal>>>> ideal_rref_;
    std::vector<std::vector<size_t>> free_cols_;
};

}  // namespace shl
