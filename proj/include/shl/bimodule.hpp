#pragma once

// Bott-Samelson bimodules in the product-of-c bases. For a word (s_1 .. s_m)
// the bimodule is the tensor product over R of the elementary bimodules for
// the letters; as a right R-module it is free on the 2^m products c_mask
// where bit i of mask picks c_{s_i} (set) or c_id (clear) in slot i. The slot
// relations
//     r c_s = c_s r,   r c_id = c_id (s r) + D_s(r) c_s
// drive every computation: pushing a polynomial rightward through a slot
// either passes (c_s), or branches into a carried reflection and a Demazure
// emission (c_id). Shifted by the word length, the bimodule is a commutative
// ring with termwise multiplication; Tr reads off the coefficient of the top
// basis element, and <b, b'> = Tr(b b') is the intersection form, for which
// multiplication by any ring element is self-adjoint.

#include "poly.hpp"

namespace shl {

class BSBimodule {
public:
    using Mask = std::uint32_t;

    BSBimodule(CoxeterPtr W, std::vector<std::uint8_t> word) : W_(std::move(W)), word_(std::move(word)) {
        if (word_.size() > 20) throw InputError("Bott-Samelson word too long");
        for (auto s : word_)
            if (s >= W_->rank()) throw InputError("word letter out of range");
    }

    const CoxeterPtr& group() const { return W_; }
    const std::vector<std::uint8_t>& word() const { return word_; }
    size_t length() const { return word_.size(); }
    size_t dim() const { return size_t(1) << word_.size(); }
    size_t nvars() const { return W_->rep_dim(); }
    const FieldPtr& field() const { return W_->field(); }

    int basis_degree(Mask m) const {
        return 2 * static_cast<int>(std::popcount(m)) - static_cast<int>(word_.size());
    }

    // an element: right R-module coefficients indexed by basis mask
    using Elt = std::vector<Poly>;

    Elt zero_elt() const { return Elt(dim(), Poly::zero(field(), nvars())); }

    Elt basis_elt(Mask m) const {
        Elt e = zero_elt();
        e[m] = Poly::one(field(), nvars());
        return e;
    }

    Elt c_top() const { return basis_elt(static_cast<Mask>(dim() - 1)); }
    Elt c_bot() const { return basis_elt(0); }

    // push r through slots j, j+1, ... of the basis element `mask`,
    // accumulating the re-expressed terms into out (scaled by scale)
    void push(Elt& out, size_t j, Mask mask, const Poly& r, const Poly* scale = nullptr) const {
        if (r.is_zero()) return;
        if (j == word_.size()) {
            out[mask] += scale ? r * *scale : r;
            return;
        }
        size_t s = word_[j];
        if (mask & (Mask(1) << j)) {
            push(out, j + 1, mask, r, scale);
        } else {
            push(out, j + 1, mask, act_gen(*W_, s, r), scale);
            push(out, j + 1, mask | (Mask(1) << j), demazure(*W_, s, r), scale);
        }
    }

    Elt left_mul(const Poly& p, const Elt& e) const {
        Elt out = zero_elt();
        for (Mask m = 0; m < e.size(); ++m) {
            if (e[m].is_zero()) continue;
            push(out, 0, m, p, &e[m]);
        }
        return out;
    }

    Elt right_mul(Elt e, const Poly& p) const {
        for (auto& q : e) q = q * p;
        return e;
    }

    static Elt add(Elt a, const Elt& b) {
        for (size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return a;
    }
    static Elt sub(Elt a, const Elt& b) {
        for (size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
        return a;
    }
    static bool is_zero(const Elt& e) {
        for (const auto& q : e)
            if (!q.is_zero()) return false;
        return true;
    }

    // termwise ring multiplication (of the shifted commutative ring)
    Elt multiply(const Elt& a, const Elt& b) const {
        Elt out = zero_elt();
        for (Mask ma = 0; ma < a.size(); ++ma) {
            if (a[ma].is_zero()) continue;
            for (Mask mb = 0; mb < b.size(); ++mb) {
                if (b[mb].is_zero()) continue;
                Poly q = a[ma] * b[mb];
                mul_basis_into(out, ma, mb, q);
            }
        }
        return out;
    }

    Poly trace(const Elt& e) const { return e[dim() - 1]; }

    // Gram matrix of the intersection form on the c basis, G[e][d] = Tr(c_e c_d),
    // by extending one slot at a time
    const std::vector<std::vector<Poly>>& gram() const {
        if (!gram_.empty()) return gram_;
        std::vector<std::vector<Poly>> g{{Poly::one(field(), nvars())}};
        for (size_t j = 0; j < word_.size(); ++j) {
            size_t n = g.size();
            size_t s = word_[j];
            Poly alpha = Poly::variable(field(), nvars(), s);
            std::vector<std::vector<Poly>> h(2 * n, std::vector<Poly>(2 * n, Poly::zero(field(), nvars())));
            for (size_t a = 0; a < n; ++a)
                for (size_t b = 0; b < n; ++b) {
                    if (g[a][b].is_zero()) continue;
                    h[a][b] = demazure(*W_, s, g[a][b]);
                    h[a][b + n] = g[a][b];
                    h[a + n][b] = g[a][b];
                    h[a + n][b + n] = alpha * g[a][b];
                }
            g = std::move(h);
        }
        gram_ = std::move(g);
        return gram_;
    }

    // <a, b> = Tr(a b); right-bilinear in the coefficients
    Poly form(const Elt& a, const Elt& b) const {
        const auto& g = gram();
        Poly out = Poly::zero(field(), nvars());
        for (Mask ma = 0; ma < a.size(); ++ma) {
            if (a[ma].is_zero()) continue;
            for (Mask mb = 0; mb < b.size(); ++mb) {
                if (b[mb].is_zero()) continue;
                if (g[ma][mb].is_zero()) continue;
                out += g[ma][mb] * a[ma] * b[mb];
            }
        }
        return out;
    }

    // tensor over R with another Bott-Samelson element (word concatenation);
    // the left factor's coefficients cross the right factor's slots
    static std::pair<BSBimodule, Elt> tensor(const BSBimodule& A, const Elt& a, const BSBimodule& B,
                                             const Elt& b) {
        std::vector<std::uint8_t> w = A.word_;
        w.insert(w.end(), B.word_.begin(), B.word_.end());
        BSBimodule C(A.W_, std::move(w));
        Elt out = C.zero_elt();
        size_t shift = A.word_.size();
        for (Mask mb = 0; mb < b.size(); ++mb) {
            if (b[mb].is_zero()) continue;
            for (Mask ma = 0; ma < a.size(); ++ma) {
                if (a[ma].is_zero()) continue;
                // a-coefficient crosses B's slots, then b's coefficient lands
                Elt crossed = B.zero_elt();
                B.push(crossed, 0, mb, a[ma], &b[mb]);
                for (Mask mc = 0; mc < crossed.size(); ++mc) {
                    if (crossed[mc].is_zero()) continue;
                    out[(static_cast<Mask>(mc) << shift) | ma] += crossed[mc];
                }
            }
        }
        return {std::move(C), std::move(out)};
    }

    // slot-merge map: apply the multiplication B_{s_i} -> R(1) in slot i
    // (c_id -> 1, c_{s_i} -> alpha_{s_i}), landing in the word with slot i
    // removed
    std::pair<BSBimodule, Elt> merge_slot(size_t i, const Elt& e) const {
        std::vector<std::uint8_t> w = word_;
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
        BSBimodule C(W_, std::move(w));
        Elt out = C.zero_elt();
        Poly alpha = Poly::variable(field(), nvars(), word_[i]);
        for (Mask m = 0; m < e.size(); ++m) {
            if (e[m].is_zero()) continue;
            Mask low = m & ((Mask(1) << i) - 1);
            Mask high = (m >> (i + 1)) << i;
            if (m & (Mask(1) << i)) {
                // alpha emerges at the boundary and pushes right through the tail
                C.push(out, i, low | high, alpha, &e[m]);
            } else {
                out[low | high] += e[m];
            }
        }
        return {std::move(C), std::move(out)};
    }

    // slot-insert map: put c_{s} into a new slot at position i
    std::pair<BSBimodule, Elt> insert_slot(size_t i, size_t s, const Elt& e) const {
        std::vector<std::uint8_t> w = word_;
        w.insert(w.begin() + static_cast<std::ptrdiff_t>(i), static_cast<std::uint8_t>(s));
        BSBimodule C(W_, std::move(w));
        Elt out = C.zero_elt();
        for (Mask m = 0; m < e.size(); ++m) {
            if (e[m].is_zero()) continue;
            Mask low = m & ((Mask(1) << i) - 1);
            Mask high = (m >> i) << (i + 1);
            out[low | (Mask(1) << i) | high] += e[m];
        }
        return {std::move(C), std::move(out)};
    }

    // ---- the reduction B ox_R k (constant terms of right coefficients) ----

    // matrix (on the c basis of the reduction) of multiplication by the ring
    // element "rho in slot j" for a linear form rho: paths emit a Demazure
    // scalar at one id slot i >= j, with the carry reflected at id slots in
    // between
    FMatrix reduced_linear_op(size_t j, const std::vector<AlgebraicReal>& rho) const {
        FMatrix op(field(), dim(), dim());
        for (Mask m = 0; m < dim(); ++m) {
            std::vector<AlgebraicReal> carry = rho;
            for (size_t i = j; i < word_.size(); ++i) {
                if (m & (Mask(1) << i)) continue;
                op.at(m | (Mask(1) << i), m) += W_->eval_on_coroot(carry, word_[i]);
                carry = W_->act_row(W_->element_of_word({word_[i]}), carry);
            }
        }
        return op;
    }

    // constant terms of the Gram matrix: the intersection form on the reduction
    FMatrix reduced_gram() const {
        const auto& g = gram();
        FMatrix out(field(), dim(), dim());
        for (size_t a = 0; a < g.size(); ++a)
            for (size_t b = 0; b < g.size(); ++b) out.at(a, b) = g[a][b].constant_term();
        return out;
    }

    std::string basis_str(Mask m) const {
        std::string out;
        for (size_t i = 0; i < word_.size(); ++i) {
            if (!out.empty()) out += " ";
            out += (m & (Mask(1) << i)) ? "c" + W_->letter_name(word_[i]) : "1";
        }
        return out.empty() ? "()" : out;
    }

private:
    // multiply two basis elements and accumulate coeff * (c_ma c_mb) into out
    void mul_basis_into(Elt& out, Mask ma, Mask mb, const Poly& coeff) const {
        Mask both = ma & mb;
        if (both == 0) {
            out[ma | mb] += coeff;
            return;
        }
        // c_s c_s = alpha_s c_s in each doubly-occupied slot; insert the
        // alphas one at a time, rightmost first
        Elt cur = zero_elt();
        cur[ma | mb] = coeff;
        for (size_t i = word_.size(); i-- > 0;) {
            if (!(both & (Mask(1) << i))) continue;
            Poly alpha = Poly::variable(field(), nvars(), word_[i]);
            Elt next = zero_elt();
            for (Mask m = 0; m < cur.size(); ++m) {
                if (cur[m].is_zero()) continue;
                push(next, i, m, alpha, &cur[m]);
            }
            cur = std::move(next);
        }
        for (Mask m = 0; m < cur.size(); ++m) out[m] += cur[m];
    }

    CoxeterPtr W_;
    std::vector<std::uint8_t> word_;
    mutable std::vector<std::vector<Poly>> gram_;
};

}  // namespace shl
