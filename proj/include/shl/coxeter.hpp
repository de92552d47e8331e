#pragma once

// Coxeter systems from a generalized Coxeter matrix. Group elements are
// identified with their matrices in a reflection representation (geometric on
// the span of the simple roots, or a doubled version when the simple coroots
// of the geometric one are dependent). Words, lengths, Bruhat order and the
// enumeration of length ideals all hang off that identification.

#include <cstdint>
#include <map>
#include <numeric>
#include <unordered_map>

#include "linalg.hpp"

namespace shl {

struct CoxeterMatrix {
    // m[s][t] with m[s][s] = 1, m[s][t] = m[t][s] >= 2 or 0 (= infinity)
    std::vector<std::vector<unsigned>> m;

    size_t rank() const { return m.size(); }

    void validate() const {
        size_t n = m.size();
        if (n == 0) throw InputError("empty Coxeter matrix");
        for (size_t i = 0; i < n; ++i) {
            if (m[i].size() != n) throw InputError("Coxeter matrix is not square");
            if (m[i][i] != 1) throw InputError("Coxeter matrix diagonal must be 1");
            for (size_t j = 0; j < n; ++j) {
                if (m[i][j] != m[j][i]) throw InputError("Coxeter matrix must be symmetric");
                if (i != j && m[i][j] == 1) throw InputError("off-diagonal Coxeter entries must be >= 2 or 0");
            }
        }
    }

    // conductor: lcm of the finite entries that force an irrationality
    unsigned conductor() const {
        unsigned N = 1;
        for (size_t i = 0; i < m.size(); ++i)
            for (size_t j = i + 1; j < m.size(); ++j)
                if (m[i][j] >= 4) N = static_cast<unsigned>(std::lcm(N, m[i][j]));
        return N;
    }

    std::string key() const {
        std::string s;
        for (const auto& row : m)
            for (unsigned v : row) {
                s += std::to_string(v);
                s += ',';
            }
        return s;
    }
};

enum class RepChoice { geometric, doubled };

inline const char* rep_choice_name(RepChoice r) { return r == RepChoice::geometric ? "geometric" : "doubled"; }

using ElementId = std::uint32_t;
inline constexpr ElementId kNoElement = UINT32_MAX;

class CoxeterSystem;
using CoxeterPtr = std::shared_ptr<CoxeterSystem>;

class CoxeterSystem : public std::enable_shared_from_this<CoxeterSystem> {
public:
    static CoxeterPtr build(const CoxeterMatrix& cm, RepChoice rep) {
        cm.validate();
        return CoxeterPtr(new CoxeterSystem(cm, rep));
    }

    const CoxeterMatrix& coxeter_matrix() const { return cm_; }
    RepChoice rep_choice() const { return rep_; }
    const FieldPtr& field() const { return field_; }
    size_t rank() const { return cm_.rank(); }
    size_t rep_dim() const { return rep_dim_; }

    // alpha_t(alpha_s^vee) = -2cos(pi/m_ts) off-diagonal, 2 on the diagonal
    const AlgebraicReal& pairing(size_t t, size_t s) const { return pairing_[t * rank() + s]; }

    // coroot of s as a column vector in h
    const std::vector<AlgebraicReal>& coroot(size_t s) const { return coroots_[s]; }

    // ---- elements ----

    ElementId identity_id() const { return 0; }
    unsigned length(ElementId w) const { return els_[w].length; }
    const std::vector<std::uint8_t>& word(ElementId w) const { return els_[w].word; }
    const FMatrix& matrix(ElementId w) const { return els_[w].mat; }
    const FMatrix& inverse_matrix(ElementId w) const { return els_[w].inv; }
    size_t num_elements() const { return els_.size(); }

    ElementId right(ElementId w, size_t s) {
        if (els_[w].right[s] != kNoElement) return els_[w].right[s];
        bool ascent = is_right_ascent(w, s);
        FMatrix m = els_[w].mat * gen_mat_[s];
        FMatrix mi = gen_mat_[s] * els_[w].inv;
        unsigned len = els_[w].length + (ascent ? 1 : -1);
        std::vector<std::uint8_t> wd;
        if (registry_.find(m.key()) == registry_.end())
            wd = ascent ? append_word(w, s) : deleted_letter_word(els_[w].word, m);
        ElementId id = intern(std::move(m), std::move(mi), len, std::move(wd));
        els_[w].right[s] = id;
        els_[id].right[s] = w;
        return id;
    }

    ElementId left(ElementId w, size_t s) {
        bool ascent = is_left_ascent(w, s);
        FMatrix m = gen_mat_[s] * els_[w].mat;
        FMatrix mi = els_[w].inv * gen_mat_[s];
        unsigned len = els_[w].length + (ascent ? 1 : -1);
        std::vector<std::uint8_t> wd;
        if (registry_.find(m.key()) == registry_.end()) {
            if (ascent) {
                wd.reserve(els_[w].word.size() + 1);
                wd.push_back(static_cast<std::uint8_t>(s));
                wd.insert(wd.end(), els_[w].word.begin(), els_[w].word.end());
            } else {
                wd = deleted_letter_word(els_[w].word, m);
            }
        }
        return intern(std::move(m), std::move(mi), len, std::move(wd));
    }

    ElementId inverse_element(ElementId w) {
        ElementId r = identity_id();
        const auto& wd = els_[w].word;
        for (size_t i = wd.size(); i-- > 0;) r = right(r, wd[i]);
        return r;
    }

    // ell(ws) > ell(w) iff w(alpha_s) is a positive root
    bool is_right_ascent(ElementId w, size_t s) const { return root_row_positive(els_[w].inv, s); }
    // ell(sw) > ell(w) iff w^{-1}(alpha_s) is a positive root
    bool is_left_ascent(ElementId w, size_t s) const { return root_row_positive(els_[w].mat, s); }

    ElementId element_of_word(const std::vector<std::uint8_t>& word) {
        ElementId r = identity_id();
        for (auto s : word) {
            if (s >= rank()) throw InputError("word letter out of range");
            r = right(r, s);
        }
        return r;
    }

    bool is_reduced(const std::vector<std::uint8_t>& word) {
        ElementId r = identity_id();
        unsigned len = 0;
        for (auto s : word) {
            if (s >= rank()) throw InputError("word letter out of range");
            if (!is_right_ascent(r, s)) return false;
            r = right(r, s);
            ++len;
        }
        return els_[r].length == len;
    }

    // all elements of length <= max_len, ids sorted by (length, shortlex word)
    std::vector<ElementId> enumerate_ideal(unsigned max_len, size_t element_cap = 2000000) {
        while (enumerated_len_ < max_len && !group_complete_) {
            grow_one_level(element_cap);
        }
        std::vector<ElementId> out;
        for (ElementId i = 0; i < els_.size(); ++i)
            if (els_[i].length <= max_len) out.push_back(i);
        sort_by_length(out);
        return out;
    }

    // enumerate the whole group; throws if it is not finite within the cap
    std::vector<ElementId> enumerate_group(size_t element_cap = 2000000) {
        while (!group_complete_) grow_one_level(element_cap);
        std::vector<ElementId> out(els_.size());
        for (ElementId i = 0; i < els_.size(); ++i) out[i] = i;
        sort_by_length(out);
        return out;
    }

    // (length, shortlex) order; ad hoc products can intern ids out of order
    void sort_by_length(std::vector<ElementId>& ids) const {
        std::sort(ids.begin(), ids.end(), [&](ElementId a, ElementId b) {
            if (els_[a].length != els_[b].length) return els_[a].length < els_[b].length;
            return els_[a].word < els_[b].word;
        });
    }

    bool group_known_finite() const { return group_complete_; }
    unsigned enumerated_length() const { return enumerated_len_; }

    bool bruhat_leq(ElementId y, ElementId x) {
        if (y == x) return true;
        if (els_[y].length >= els_[x].length) return false;
        std::uint64_t k = (static_cast<std::uint64_t>(y) << 32) | x;
        auto it = bruhat_memo_.find(k);
        if (it != bruhat_memo_.end()) return it->second;
        size_t s = els_[x].word.back();
        ElementId xs = right(x, s);
        ElementId ys = right(y, s);
        bool r;
        if (els_[ys].length < els_[y].length)
            r = bruhat_leq(ys, xs);
        else
            r = bruhat_leq(y, xs);
        bruhat_memo_.emplace(k, r);
        return r;
    }

    std::vector<std::vector<std::uint8_t>> all_reduced_words(ElementId x) {
        if (x == identity_id()) return {{}};
        std::vector<std::vector<std::uint8_t>> out;
        for (size_t s = 0; s < rank(); ++s) {
            if (is_right_ascent(x, s)) continue;
            for (auto w : all_reduced_words(right(x, s))) {
                w.push_back(static_cast<std::uint8_t>(s));
                out.push_back(std::move(w));
            }
        }
        return out;
    }

    // ---- action on linear forms (rows) ----

    // w . f with f a row vector on h: (w.f)(v) = f(w^{-1} v)
    std::vector<AlgebraicReal> act_row(ElementId w, const std::vector<AlgebraicReal>& f) const {
        return row_times(f, els_[w].inv);
    }
    std::vector<AlgebraicReal> act_row_inverse(ElementId w, const std::vector<AlgebraicReal>& f) const {
        return row_times(f, els_[w].mat);
    }

    // evaluation of a row form on the coroot of s
    AlgebraicReal eval_on_coroot(const std::vector<AlgebraicReal>& f, size_t s) const {
        AlgebraicReal r = AlgebraicReal::zero(field_);
        for (size_t i = 0; i < rep_dim_; ++i)
            if (!f[i].is_zero() && !coroots_[s][i].is_zero()) r += f[i] * coroots_[s][i];
        return r;
    }

    // row form of the simple root alpha_s (a coordinate form)
    std::vector<AlgebraicReal> simple_root_row(size_t s) const {
        std::vector<AlgebraicReal> r(rep_dim_, AlgebraicReal::zero(field_));
        r[s] = AlgebraicReal::one(field_);
        return r;
    }

    // dominant weight with prescribed positive coroot values
    std::vector<AlgebraicReal> dominant_weight(const std::vector<Rat>& targets) const {
        if (targets.size() != rank()) throw InputError("dominant weight needs one target per generator");
        for (const auto& t : targets)
            if (sgn(t) <= 0) throw InputError("dominant weight targets must be positive");
        std::vector<AlgebraicReal> rho(rep_dim_, AlgebraicReal::zero(field_));
        if (rep_ == RepChoice::geometric) {
            // solve rho . coroot_s = t_s; coroots are the columns of the pairing matrix
            FMatrix P(field_, rank(), rank());
            for (size_t t = 0; t < rank(); ++t)
                for (size_t s = 0; s < rank(); ++s) P.at(t, s) = pairing(t, s);
            std::vector<AlgebraicReal> b(rank(), AlgebraicReal::zero(field_));
            for (size_t s = 0; s < rank(); ++s) b[s] = AlgebraicReal::rational(field_, targets[s]);
            auto sol = P.transpose().solve(b);  // row*P = b  <=>  P^T rho^T = b^T
            if (!sol) throw InternalError("dominant weight solve failed in a nonsingular representation");
            rho = *sol;
        } else {
            for (size_t s = 0; s < rank(); ++s)
                rho[rank() + s] = AlgebraicReal::rational(field_, targets[s]);
        }
        return rho;
    }

    std::vector<AlgebraicReal> canonical_rho() const {
        return dominant_weight(std::vector<Rat>(rank(), Rat(1)));
    }

    // sign test of (3.1)-type: for every w in ids and generator s,
    // (w rho)(alpha_s^vee) is nonzero with sign + iff sw > w.
    void validate_dominant_positivity(const std::vector<ElementId>& ids, const std::vector<AlgebraicReal>& rho) {
        for (ElementId w : ids) {
            auto wrho = act_row(w, rho);
            for (size_t s = 0; s < rank(); ++s) {
                int sg = eval_on_coroot(wrho, s).sign();
                bool ascent = is_left_ascent(w, s);
                if (sg == 0 || (sg > 0) != ascent)
                    throw InternalError("dominant positivity failed at an enumerated element");
            }
        }
    }

    std::string word_str(ElementId w) const {
        if (els_[w].word.empty()) return "e";
        std::string out;
        for (auto s : els_[w].word) {
            if (!out.empty()) out += ' ';
            out += letter_name(s);
        }
        return out;
    }

    std::string letter_name(size_t s) const {
        static const char* names = "stuvw";
        if (rank() <= 5) return std::string(1, names[s]);
        return std::to_string(s);
    }

    std::optional<size_t> letter_of_token(const std::string& tok) const {
        static const std::string names = "stuvw";
        if (tok.size() == 1 && rank() <= 5) {
            auto p = names.find(tok[0]);
            if (p != std::string::npos && p < rank()) return p;
        }
        try {
            size_t idx = std::stoul(tok);
            if (idx < rank()) return idx;
        } catch (...) {
        }
        return std::nullopt;
    }

private:
    struct ElementData {
        FMatrix mat, inv;
        unsigned length;
        std::vector<std::uint8_t> word;
        std::vector<ElementId> right;  // cached right products, kNoElement = unknown
    };

    CoxeterSystem(const CoxeterMatrix& cm, RepChoice rep) : cm_(cm), rep_(rep) {
        field_ = FieldDescriptor::create(cm.conductor());
        size_t n = rank();
        rep_dim_ = (rep == RepChoice::geometric) ? n : 2 * n;
        pairing_.reserve(n * n);
        for (size_t t = 0; t < n; ++t)
            for (size_t s = 0; s < n; ++s) {
                if (t == s)
                    pairing_.push_back(AlgebraicReal::rational(field_, Rat(2)));
                else if (cm_.m[t][s] == 0)
                    pairing_.push_back(AlgebraicReal::rational(field_, Rat(-2)));
                else
                    pairing_.push_back(-AlgebraicReal::embed(field_, cm_.m[t][s]));
            }
        coroots_.assign(n, std::vector<AlgebraicReal>(rep_dim_, AlgebraicReal::zero(field_)));
        for (size_t s = 0; s < n; ++s) {
            for (size_t t = 0; t < n; ++t) coroots_[s][t] = pairing(t, s);
            if (rep_ == RepChoice::doubled) coroots_[s][n + s] = AlgebraicReal::one(field_);
        }
        if (rep_ == RepChoice::geometric) {
            FMatrix P(field_, n, n);
            for (size_t t = 0; t < n; ++t)
                for (size_t s = 0; s < n; ++s) P.at(t, s) = pairing(t, s);
            if (P.rank() < n)
                throw InputError(
                    "geometric representation has dependent coroots for this matrix; "
                    "use the doubled representation");
        }
        // generator matrices M_s = I - coroot_s * e_s^T
        for (size_t s = 0; s < n; ++s) {
            FMatrix m = FMatrix::identity(field_, rep_dim_);
            for (size_t i = 0; i < rep_dim_; ++i) m.at(i, s) -= coroots_[s][i];
            gen_mat_.push_back(m);
        }
        // identity element
        intern(FMatrix::identity(field_, rep_dim_), FMatrix::identity(field_, rep_dim_), 0, {});
    }

    std::vector<std::uint8_t> append_word(ElementId w, size_t s) const {
        auto wd = els_[w].word;
        wd.push_back(static_cast<std::uint8_t>(s));
        return wd;
    }

    // exchange property: a descent of w is obtained from any reduced word of w
    // by deleting one letter; find one matching the target matrix
    std::vector<std::uint8_t> deleted_letter_word(const std::vector<std::uint8_t>& wd, const FMatrix& target) const {
        std::vector<FMatrix> pref, suf;
        pref.reserve(wd.size() + 1);
        pref.push_back(FMatrix::identity(field_, rep_dim_));
        for (auto t : wd) pref.push_back(pref.back() * gen_mat_[t]);
        suf.assign(wd.size() + 1, FMatrix::identity(field_, rep_dim_));
        for (size_t i = wd.size(); i-- > 0;) suf[i] = gen_mat_[wd[i]] * suf[i + 1];
        for (size_t i = 0; i < wd.size(); ++i) {
            if (pref[i] * suf[i + 1] == target) {
                auto out = wd;
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
                return out;
            }
        }
        throw InternalError("exchange property produced no matching deletion");
    }

    ElementId intern(FMatrix m, FMatrix mi, unsigned len, std::vector<std::uint8_t> word_if_new) {
        std::string k = m.key();
        auto it = registry_.find(k);
        if (it != registry_.end()) {
            if (els_[it->second].length != len)
                throw InternalError(
                    "representation identified two elements of different lengths; "
                    "the chosen representation is not faithful on this ideal");
            return it->second;
        }
        ElementData e;
        e.mat = std::move(m);
        e.inv = std::move(mi);
        e.length = len;
        e.word = std::move(word_if_new);
        e.right.assign(rank(), kNoElement);
        ElementId id = static_cast<ElementId>(els_.size());
        els_.push_back(std::move(e));
        registry_.emplace(std::move(k), id);
        return id;
    }

    void grow_one_level(size_t element_cap) {
        // elements of length enumerated_len_ are fully present; build the next level
        struct Cand {
            FMatrix mat, inv;
            std::vector<std::uint8_t> word;
            std::vector<std::pair<ElementId, size_t>> parents;
        };
        std::map<std::string, Cand> next;
        size_t count_at_level = 0, linked_next = 0;
        for (ElementId w = 0; w < els_.size(); ++w) {
            if (els_[w].length != enumerated_len_) continue;
            ++count_at_level;
            for (size_t s = 0; s < rank(); ++s) {
                if (!is_right_ascent(w, s)) continue;
                FMatrix m = els_[w].mat * gen_mat_[s];
                std::string k = m.key();
                auto have = registry_.find(k);
                if (have != registry_.end()) {
                    // interned out of order by an earlier ad hoc product
                    if (els_[have->second].length != enumerated_len_ + 1)
                        throw InternalError(
                            "representation identified two elements of different lengths; "
                            "the chosen representation is not faithful on this ideal");
                    els_[w].right[s] = have->second;
                    ++linked_next;
                    continue;
                }
                auto it = next.find(k);
                if (it == next.end()) {
                    Cand c;
                    c.mat = std::move(m);
                    c.inv = gen_mat_[s] * els_[w].inv;
                    c.word = append_word(w, s);
                    c.parents.emplace_back(w, s);
                    next.emplace(std::move(k), std::move(c));
                } else {
                    auto wd = append_word(w, s);
                    if (wd < it->second.word) it->second.word = std::move(wd);
                    it->second.parents.emplace_back(w, s);
                }
            }
        }
        if (enumerated_len_ > 0 && count_at_level == 0) {
            group_complete_ = true;
            return;
        }
        if (next.empty()) {
            // complete only if the next level is empty outright; elements
            // already interned ad hoc still need their own expansion
            if (linked_next == 0) group_complete_ = true;
            ++enumerated_len_;
            return;
        }
        // sort by shortlex word, then intern in that order for stable ids
        std::vector<std::pair<std::vector<std::uint8_t>, std::string>> order;
        for (auto& [k, c] : next) order.emplace_back(c.word, k);
        std::sort(order.begin(), order.end());
        for (auto& [wd, k] : order) {
            Cand& c = next.at(k);
            ElementId id = intern(std::move(c.mat), std::move(c.inv), enumerated_len_ + 1, std::move(c.word));
            for (auto [w, s] : c.parents) {
                els_[w].right[s] = id;
                els_[id].right[s] = w;
            }
        }
        if (els_.size() > element_cap)
            throw InputError("group enumeration exceeded the element cap; the group may be infinite");
        ++enumerated_len_;
    }

    bool root_row_positive(const FMatrix& m, size_t s) const {
        // row s of m expresses the image of alpha_s in the simple root basis;
        // a root has all coefficients of one sign
        int seen = 0;
        for (size_t j = 0; j < rank(); ++j) {
            int sg = m.at(s, j).sign();
            if (sg == 0) continue;
            if (seen == 0)
                seen = sg;
            else if (seen != sg)
                throw InternalError("image of a simple root is not sign-coherent");
        }
        if (seen == 0) throw InternalError("image of a simple root vanished");
        return seen > 0;
    }

    static std::vector<AlgebraicReal> row_times(const std::vector<AlgebraicReal>& f, const FMatrix& m) {
        std::vector<AlgebraicReal> r(m.cols(), AlgebraicReal::zero(m.field()));
        for (size_t i = 0; i < f.size(); ++i) {
            if (f[i].is_zero()) continue;
            for (size_t j = 0; j < m.cols(); ++j)
                if (!m.at(i, j).is_zero()) r[j] += f[i] * m.at(i, j);
        }
        return r;
    }

    CoxeterMatrix cm_;
    RepChoice rep_;
    FieldPtr field_;
    size_t rep_dim_ = 0;
    std::vector<AlgebraicReal> pairing_;
    std::vector<std::vector<AlgebraicReal>> coroots_;
    std::vector<FMatrix> gen_mat_;
    std::vector<ElementData> els_;
    std::unordered_map<std::string, ElementId> registry_;
    std::unordered_map<std::uint64_t, bool> bruhat_memo_;
    unsigned enumerated_len_ = 0;
    bool group_complete_ = false;
};

}  // namespace shl
