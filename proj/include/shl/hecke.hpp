#pragma once

// Hecke algebra of a Coxeter system over Z[v, v^{-1}], in the normalization
// where H_s^2 = (v^{-1} - v) H_s + H_e. Provides the canonical basis b_x by
// the classical recursion, mu-coefficients, the standard pairing making the
// H_x orthonormal, and inverse canonical-basis coefficients on a downward
// closed set of elements.

#include <sstream>

#include "coxeter.hpp"

namespace shl {

class LaurentPoly {
public:
    LaurentPoly() = default;

    static LaurentPoly monomial(int e, Int c = Int(1)) {
        LaurentPoly p;
        if (c != 0) p.c_.emplace(e, std::move(c));
        return p;
    }
    static LaurentPoly one() { return monomial(0); }

    bool is_zero() const { return c_.empty(); }
    const std::map<int, Int>& terms() const { return c_; }

    Int coeff(int e) const {
        auto it = c_.find(e);
        return it == c_.end() ? Int(0) : it->second;
    }
    int min_exp() const { return c_.empty() ? 0 : c_.begin()->first; }
    int max_exp() const { return c_.empty() ? 0 : c_.rbegin()->first; }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.c_) add(e, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (const auto& [e, c] : o.c_) add(e, -c);
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    LaurentPoly operator-() const {
        LaurentPoly p;
        for (const auto& [e, c] : c_) p.c_.emplace(e, -c);
        return p;
    }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly p;
        for (const auto& [ea, ca] : a.c_)
            for (const auto& [eb, cb] : b.c_) p.add(ea + eb, ca * cb);
        return p;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    bool operator==(const LaurentPoly& o) const { return c_ == o.c_; }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    // v -> v^{-1}
    LaurentPoly bar() const {
        LaurentPoly p;
        for (const auto& [e, c] : c_) p.c_.emplace(-e, c);
        return p;
    }

    // substitute v -> v^k (k nonzero integer)
    LaurentPoly compose_power(int k) const {
        LaurentPoly p;
        for (const auto& [e, c] : c_) p.add(e * k, c);
        return p;
    }

    Int eval_at_one() const {
        Int s(0);
        for (const auto& [e, c] : c_) s += c;
        return s;
    }

    bool nonneg() const {
        for (const auto& [e, c] : c_)
            if (c < 0) return false;
        return true;
    }

    std::string str() const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : c_) {
            Int a = c;
            if (!first) os << (a < 0 ? " - " : " + ");
            if (first && a < 0) os << "-";
            first = false;
            Int aa = abs(a);
            if (aa != 1 || e == 0) os << aa.get_str();
            if (e != 0) {
                if (aa != 1) os << "*";
                os << "v";
                if (e != 1) os << "^" << e;
            }
        }
        return os.str();
    }

private:
    void add(int e, Int c) {
        if (c == 0) return;
        auto [it, fresh] = c_.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) c_.erase(it);
        }
    }

    std::map<int, Int> c_;
};

inline LaurentPoly laurent_v(int e = 1) { return LaurentPoly::monomial(e); }

class HeckeElt {
public:
    HeckeElt() = default;
    explicit HeckeElt(CoxeterPtr W) : W_(std::move(W)) {}

    static HeckeElt std_basis(CoxeterPtr W, ElementId x, LaurentPoly c = LaurentPoly::one()) {
        HeckeElt h(std::move(W));
        if (!c.is_zero()) h.c_.emplace(x, std::move(c));
        return h;
    }
    static HeckeElt unit(CoxeterPtr W) { return std_basis(std::move(W), 0); }

    const CoxeterPtr& group() const { return W_; }
    bool is_zero() const { return c_.empty(); }
    const std::map<ElementId, LaurentPoly>& terms() const { return c_; }

    LaurentPoly coeff(ElementId x) const {
        auto it = c_.find(x);
        return it == c_.end() ? LaurentPoly() : it->second;
    }

    HeckeElt& operator+=(const HeckeElt& o) {
        for (const auto& [x, p] : o.c_) add(x, p);
        return *this;
    }
    HeckeElt& operator-=(const HeckeElt& o) {
        for (const auto& [x, p] : o.c_) add(x, -p);
        return *this;
    }
    friend HeckeElt operator+(HeckeElt a, const HeckeElt& b) { return a += b; }
    friend HeckeElt operator-(HeckeElt a, const HeckeElt& b) { return a -= b; }

    friend HeckeElt operator*(const LaurentPoly& p, HeckeElt h) {
        for (auto& [x, q] : h.c_) q *= p;
        h.prune();
        return h;
    }

    bool operator==(const HeckeElt& o) const { return c_ == o.c_; }
    bool operator!=(const HeckeElt& o) const { return !(*this == o); }

    // right multiplication by H_s: H_x H_s = H_{xs} if ascent,
    // (v^{-1} - v) H_x + H_{xs} if descent
    HeckeElt mul_gen(size_t s) const {
        HeckeElt r(W_);
        LaurentPoly vdiff = laurent_v(-1) - laurent_v(1);
        for (const auto& [x, p] : c_) {
            ElementId xs = W_->right(x, s);
            if (W_->length(xs) > W_->length(x)) {
                r.add(xs, p);
            } else {
                r.add(x, vdiff * p);
                r.add(xs, p);
            }
        }
        return r;
    }

    HeckeElt operator*(const HeckeElt& o) const {
        HeckeElt r(W_);
        for (const auto& [y, q] : o.c_) {
            HeckeElt t = *this;
            for (auto s : W_->word(y)) t = t.mul_gen(s);
            for (auto& [x, p] : t.c_) r.add(x, p * q);
        }
        return r;
    }

    // bar involution: v -> v^{-1}, H_x -> (H_{x^{-1}})^{-1}
    HeckeElt bar() const {
        HeckeElt r(W_);
        // H_s^{-1} = H_s + (v - v^{-1}) H_e
        LaurentPoly vdiff = laurent_v(1) - laurent_v(-1);
        for (const auto& [x, p] : c_) {
            HeckeElt t = unit(W_);
            const auto& wd = W_->word(x);
            for (auto s : wd) {
                HeckeElt u = t.mul_gen(s);
                u += vdiff * t;
                t = std::move(u);
            }
            for (auto& [z, q] : t.c_) r.add(z, q * p.bar());
        }
        return r;
    }

    // coefficient of H_e after H_x -> H_{x^{-1}} on the left argument;
    // this makes the standard basis orthonormal, so it is a coefficient dot
    LaurentPoly pairing(const HeckeElt& o) const {
        LaurentPoly r;
        for (const auto& [x, p] : c_) {
            auto it = o.c_.find(x);
            if (it != o.c_.end()) r += p * it->second;
        }
        return r;
    }

    // the anti-involution H_x -> H_{x^{-1}} (coefficients untouched)
    HeckeElt flip() const {
        HeckeElt r(W_);
        for (const auto& [x, p] : c_) r.add(W_->inverse_element(x), p);
        return r;
    }

    LaurentPoly counit_std() const {  // coefficient of H_e
        return coeff(0);
    }

    // specialization H_x -> v^{-ell(x)}; multiplicative, gives graded
    // dimensions of reductions
    LaurentPoly graded_dim() const {
        LaurentPoly r;
        for (const auto& [x, p] : c_)
            r += p * laurent_v(-static_cast<int>(W_->length(x)));
        return r;
    }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string out;
        for (const auto& [x, p] : c_) {
            if (!out.empty()) out += "  +  ";
            out += "(" + p.str() + ") H(" + W_->word_str(x) + ")";
        }
        return out;
    }

private:
    void add(ElementId x, LaurentPoly p) {
        if (p.is_zero()) return;
        auto [it, fresh] = c_.try_emplace(x, std::move(p));
        if (!fresh) {
            it->second += p;
            if (it->second.is_zero()) c_.erase(it);
        }
    }
    void prune() {
        for (auto it = c_.begin(); it != c_.end();)
            it = it->second.is_zero() ? c_.erase(it) : std::next(it);
    }

    CoxeterPtr W_;
    std::map<ElementId, LaurentPoly> c_;
};

// Canonical basis cache with the defining self-checks: each b_x must be bar
// invariant with h_{x,x} = 1 and h_{z,x} in vZ[v] for z != x.
class CanonicalBasis {
public:
    explicit CanonicalBasis(CoxeterPtr W) : W_(std::move(W)) {}

    const CoxeterPtr& group() const { return W_; }

    const HeckeElt& kl(ElementId x) {
        auto it = cache_.find(x);
        if (it != cache_.end()) return it->second;
        HeckeElt b = compute(x);
        return cache_.emplace(x, std::move(b)).first->second;
    }

    // KL polynomial h_{z,x} in this normalization
    LaurentPoly h(ElementId z, ElementId x) { return kl(x).coeff(z); }

    // mu(z, x): coefficient of v in h_{z,x}
    Int mu(ElementId z, ElementId x) { return h(z, x).coeff(1); }

    // inverse matrix on a downward closed list of elements (sorted by length):
    // sum_y g[z][y] h_{y,x} = delta_{z,x}
    std::map<ElementId, std::map<ElementId, LaurentPoly>> inverse_on_ideal(const std::vector<ElementId>& ids) {
        std::map<ElementId, std::map<ElementId, LaurentPoly>> g;
        for (ElementId z : ids) {
            auto& row = g[z];
            for (ElementId x : ids) {
                if (!W_->bruhat_leq(z, x)) continue;
                LaurentPoly acc = (z == x) ? LaurentPoly::one() : LaurentPoly();
                for (const auto& [y, gy] : row) {
                    if (y == x) continue;
                    if (!W_->bruhat_leq(y, x)) continue;
                    acc -= gy * h(y, x);
                }
                if (!acc.is_zero()) row.emplace(x, std::move(acc));
            }
        }
        return g;
    }

private:
    HeckeElt compute(ElementId x) {
        if (x == W_->identity_id()) return HeckeElt::unit(W_);
        size_t s = W_->word(x).back();
        ElementId y = W_->right(x, s);
        const HeckeElt by = kl(y);  // copy: cache_ may rehash during recursion
        // b_y b_s = b_{ys} + sum_{z s < z} mu(z, y) b_z
        HeckeElt b = by.mul_gen(s) + laurent_v(1) * by;
        std::vector<std::pair<ElementId, Int>> corrections;
        for (const auto& [z, p] : by.terms()) {
            if (W_->length(W_->right(z, s)) > W_->length(z)) continue;
            Int m = p.coeff(1);
            if (m != 0) corrections.emplace_back(z, m);
        }
        for (const auto& [z, m] : corrections) b -= LaurentPoly::monomial(0, m) * kl(z);
        validate(x, b);
        return b;
    }

    void validate(ElementId x, const HeckeElt& b) const {
        for (const auto& [z, p] : b.terms()) {
            if (z == x) {
                if (p != LaurentPoly::one()) throw InternalError("canonical basis: leading coefficient is not 1");
            } else {
                if (p.min_exp() < 1) throw InternalError("canonical basis: lower coefficient not in vZ[v]");
                if (!W_->bruhat_leq(z, x)) throw InternalError("canonical basis: support outside the Bruhat interval");
            }
        }
        if (b.coeff(x).is_zero()) throw InternalError("canonical basis: missing leading term");
    }

    CoxeterPtr W_;
    std::map<ElementId, HeckeElt> cache_;
};

// vector-space dimension of the degree-k part of a free graded module over
// the polynomial ring in nvars variables (generators in degree 2) whose
// graded rank is r
inline Int graded_free_dim(const LaurentPoly& r, int k, size_t nvars) {
    Int total(0);
    for (const auto& [j, c] : r.terms()) {
        int d = k - j;
        if (d < 0 || d % 2) continue;
        // monomials of polynomial degree d/2 in nvars variables
        Int binom(1);
        for (size_t i = 1; i < nvars; ++i) {
            binom *= Int(d / 2 + static_cast<long>(i));
            binom /= Int(static_cast<long>(i));
        }
        total += c * binom;
    }
    return total;
}

}  // namespace shl
