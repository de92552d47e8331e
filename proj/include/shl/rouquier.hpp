#pragma once

// Complexes of Soergel bimodules attached to words in the generators. Two-term
// atoms B_s -> R are tensored with the standard Koszul sign, terms are split
// into catalogued indecomposable summands by explicit section pairs, and
// contractible pairs are removed by Gaussian elimination. On top of the
// minimal complexes: multiplicity and linearity checks against the inverse
// canonical-basis coefficients, cohomology of the termwise scalar reduction,
// and the slotwise factorization of the Lefschetz form through the first
// differential.

#include <optional>
#include <set>

#include "hodge.hpp"

namespace shl {

// ---- complex terms ----

// a Bott-Samelson piece BS(word) placed in internal shift `shift`
struct BSObject {
    std::vector<std::uint8_t> word;
    int shift = 0;
    bool operator==(const BSObject&) const = default;
};

// a catalogued indecomposable summand placed in internal shift `shift`
struct SummandObject {
    ElementId z = 0;
    int shift = 0;
    bool operator==(const SummandObject&) const = default;
};

using BlockRow = std::vector<PolyMatrix>;
using BlockMatrix = std::vector<BlockRow>;  // [target object][source object]

// complex of Bott-Samelson pieces; diffs[t] maps terms[t] to terms[t+1]
struct BSComplex {
    CoxeterPtr W;
    int lo = 0;  // cohomological index of terms.front()
    std::vector<std::vector<BSObject>> terms;
    std::vector<BlockMatrix> diffs;

    int hi() const { return lo + static_cast<int>(terms.size()) - 1; }
};

// complex of catalogued summands
struct SoergelComplex {
    CoxeterPtr W;
    int lo = 0;
    std::vector<std::vector<SummandObject>> terms;
    std::vector<BlockMatrix> diffs;

    int hi() const { return lo + static_cast<int>(terms.size()) - 1; }
    size_t objects() const {
        size_t n = 0;
        for (const auto& t : terms) n += t.size();
        return n;
    }
};

namespace detail {

inline int bs_degree(size_t word_len, size_t mask) {
    return 2 * static_cast<int>(std::popcount(static_cast<std::uint64_t>(mask))) - static_cast<int>(word_len);
}

inline int mono_degree(const Mono& m) {
    int d = 0;
    for (auto e : m) d += static_cast<int>(e);
    return d;
}

// shape, homogeneity and d.d = 0 for a complex described by its block sizes,
// coordinate degrees and shifts
template <typename Count, typename Dim, typename Deg, typename Shift>
inline void check_blocks(const std::vector<BlockMatrix>& diffs, size_t nterms, Count count, Dim dim, Deg deg,
                         Shift shift, const char* what) {
    if (nterms > 0 && diffs.size() + 1 != nterms)
        throw InternalError(std::string(what) + ": differential count does not match the terms");
    for (size_t t = 0; t + 1 < nterms; ++t) {
        const BlockMatrix& D = diffs[t];
        if (D.size() != count(t + 1))
            throw InternalError(std::string(what) + ": differential has the wrong number of block rows");
        for (size_t j = 0; j < D.size(); ++j) {
            if (D[j].size() != count(t))
                throw InternalError(std::string(what) + ": differential has the wrong number of block columns");
            for (size_t i = 0; i < D[j].size(); ++i) {
                const PolyMatrix& M = D[j][i];
                if (M.rows() != dim(t + 1, j) || M.cols() != dim(t, i))
                    throw InternalError(std::string(what) + ": block has the wrong shape");
                int dd = shift(t, i) - shift(t + 1, j);
                for (size_t r = 0; r < M.rows(); ++r)
                    for (size_t c = 0; c < M.cols(); ++c)
                        for (const auto& [mono, cf] : M.m[r][c].terms()) {
                            (void)cf;
                            if (2 * mono_degree(mono) != deg(t, i, c) + dd - deg(t + 1, j, r))
                                throw InternalError(std::string(what) + ": block entry is not homogeneous");
                        }
            }
        }
    }
    for (size_t t = 0; t + 2 < nterms; ++t) {
        const BlockMatrix& D1 = diffs[t];
        const BlockMatrix& D2 = diffs[t + 1];
        for (size_t a = 0; a < count(t); ++a)
            for (size_t c = 0; c < count(t + 2); ++c) {
                PolyMatrix acc;
                for (size_t b = 0; b < count(t + 1); ++b) {
                    PolyMatrix p = D2[c][b] * D1[b][a];
                    acc = acc.rows() == 0 ? std::move(p) : acc + p;
                }
                if (acc.rows() != 0 && !acc.is_zero())
                    throw InternalError(std::string(what) + ": differential does not square to zero");
            }
    }
}

inline void check_complex(const BSComplex& X) {
    auto count = [&](size_t t) { return X.terms[t].size(); };
    auto dim = [&](size_t t, size_t i) { return size_t(1) << X.terms[t][i].word.size(); };
    auto deg = [&](size_t t, size_t i, size_t r) { return bs_degree(X.terms[t][i].word.size(), r); };
    auto shift = [&](size_t t, size_t i) { return X.terms[t][i].shift; };
    check_blocks(X.diffs, X.terms.size(), count, dim, deg, shift, "tensor complex");
}

inline void check_complex(SoergelCatalogue& cat, const SoergelComplex& X) {
    auto count = [&](size_t t) { return X.terms[t].size(); };
    auto dim = [&](size_t t, size_t i) { return cat.at(X.terms[t][i].z).ambient.dim(); };
    auto deg = [&](size_t t, size_t i, size_t r) {
        return cat.at(X.terms[t][i].z).ambient.basis_degree(static_cast<BSBimodule::Mask>(r));
    };
    auto shift = [&](size_t t, size_t i) { return X.terms[t][i].shift; };
    check_blocks(X.diffs, X.terms.size(), count, dim, deg, shift, "summand complex");
}

}  // namespace detail

// the one-term complex R in degree zero, the unit for the tensor product
inline BSComplex unit_complex(const CoxeterPtr& W) {
    BSComplex F;
    F.W = W;
    F.terms = {{BSObject{{}, 0}}};
    return F;
}

// the two-term atom: BS(s) in degree 0, R shifted down in degree 1, with the
// multiplication map c_id -> 1, c_s -> alpha_s as the differential
inline BSComplex f_s(const CoxeterPtr& W, size_t s) {
    if (s >= W->rank()) throw InputError("atom complex needs a generator of the group");
    const FieldPtr& f = W->field();
    size_t n = W->rep_dim();
    BSComplex F;
    F.W = W;
    F.terms = {{BSObject{{static_cast<std::uint8_t>(s)}, 0}}, {BSObject{{}, -1}}};
    PolyMatrix d(f, n, 1, 2);
    d.m[0][0] = Poly::one(f, n);
    d.m[0][1] = Poly::variable(f, n, s);
    F.diffs = {BlockMatrix{BlockRow{std::move(d)}}};
    detail::check_complex(F);
    return F;
}

namespace detail {

// M tensor id: a map BS(src) -> BS(tgt) extended by a trailing factor BS(w);
// moved coefficients are pushed rightward through the new slots
inline PolyMatrix tensor_left(const CoxeterPtr& W, const PolyMatrix& M, const std::vector<std::uint8_t>& src,
                              const std::vector<std::uint8_t>& tgt, const std::vector<std::uint8_t>& w) {
    std::vector<std::uint8_t> full = tgt;
    full.insert(full.end(), w.begin(), w.end());
    BSBimodule E(W, full);
    size_t sl = src.size(), tl = tgt.size();
    size_t cols = (size_t(1) << sl) << w.size();
    PolyMatrix out(W->field(), W->rep_dim(), E.dim(), cols);
    for (size_t eu = 0; eu < (size_t(1) << sl); ++eu)
        for (size_t ew = 0; ew < (size_t(1) << w.size()); ++ew) {
            BSBimodule::Elt acc = E.zero_elt();
            for (size_t du = 0; du < M.rows(); ++du) {
                if (M.m[du][eu].is_zero()) continue;
                E.push(acc, tl, static_cast<BSBimodule::Mask>(du | (ew << tl)), M.m[du][eu]);
            }
            size_t col = eu | (ew << sl);
            for (size_t r = 0; r < E.dim(); ++r) out.m[r][col] = acc[r];
        }
    return out;
}

// id tensor M: a map BS(src) -> BS(tgt) extended by a leading factor of
// pre_len letters; coefficients already sit to the right of everything
inline PolyMatrix tensor_right(const FieldPtr& f, size_t nvars, size_t pre_len, const PolyMatrix& M) {
    size_t pre = size_t(1) << pre_len;
    PolyMatrix out(f, nvars, pre * M.rows(), pre * M.cols());
    for (size_t eu = 0; eu < pre; ++eu)
        for (size_t r = 0; r < M.rows(); ++r)
            for (size_t c = 0; c < M.cols(); ++c) {
                if (M.m[r][c].is_zero()) continue;
                out.m[eu | (r << pre_len)][eu | (c << pre_len)] = M.m[r][c];
            }
    return out;
}

}  // namespace detail

// total complex of the tensor product, with the Koszul sign (-1)^p on the
// second factor's differential under a degree-p piece of the first factor
inline BSComplex complex_tensor(const BSComplex& F, const BSComplex& G) {
    if (F.W != G.W) throw InputError("tensor of complexes over different groups");
    const CoxeterPtr& W = F.W;
    const FieldPtr& f = W->field();
    size_t n = W->rep_dim();

    BSComplex T;
    T.W = W;
    T.lo = F.lo + G.lo;
    int thi = F.hi() + G.hi();
    size_t nt = static_cast<size_t>(thi - T.lo + 1);
    struct Part {
        int p;
        size_t ia, ib;
    };
    std::vector<std::vector<Part>> parts(nt);
    T.terms.resize(nt);
    for (int t = T.lo; t <= thi; ++t)
        for (int p = F.lo; p <= F.hi(); ++p) {
            int q = t - p;
            if (q < G.lo || q > G.hi()) continue;
            const auto& ta = F.terms[static_cast<size_t>(p - F.lo)];
            const auto& tb = G.terms[static_cast<size_t>(q - G.lo)];
            for (size_t ia = 0; ia < ta.size(); ++ia)
                for (size_t ib = 0; ib < tb.size(); ++ib) {
                    BSObject o;
                    o.word = ta[ia].word;
                    o.word.insert(o.word.end(), tb[ib].word.begin(), tb[ib].word.end());
                    o.shift = ta[ia].shift + tb[ib].shift;
                    T.terms[static_cast<size_t>(t - T.lo)].push_back(std::move(o));
                    parts[static_cast<size_t>(t - T.lo)].push_back({p, ia, ib});
                }
        }

    const AlgebraicReal m1 = -AlgebraicReal::one(f);
    if (nt > 1) T.diffs.resize(nt - 1);
    for (size_t t = 0; t + 1 < nt; ++t) {
        const auto& S = parts[t];
        const auto& R = parts[t + 1];
        BlockMatrix D(R.size(), BlockRow(S.size()));
        for (size_t j = 0; j < R.size(); ++j)
            for (size_t i = 0; i < S.size(); ++i) {
                const Part& a = S[i];
                const Part& b = R[j];
                int q = T.lo + static_cast<int>(t) - a.p;
                const BSObject& src = T.terms[t][i];
                const BSObject& tgt = T.terms[t + 1][j];
                PolyMatrix blk(f, n, size_t(1) << tgt.word.size(), size_t(1) << src.word.size());
                if (b.p == a.p + 1 && b.ib == a.ib) {
                    const auto& fa = F.terms[static_cast<size_t>(a.p - F.lo)][a.ia];
                    const auto& fb = F.terms[static_cast<size_t>(b.p - F.lo)][b.ia];
                    const auto& wb = G.terms[static_cast<size_t>(q - G.lo)][a.ib].word;
                    blk = detail::tensor_left(W, F.diffs[static_cast<size_t>(a.p - F.lo)][b.ia][a.ia], fa.word,
                                              fb.word, wb);
                } else if (b.p == a.p && b.ia == a.ia) {
                    const auto& fa = F.terms[static_cast<size_t>(a.p - F.lo)][a.ia];
                    blk = detail::tensor_right(f, n, fa.word.size(),
                                               G.diffs[static_cast<size_t>(q - G.lo)][b.ib][a.ib]);
                    if (a.p % 2 != 0) blk = m1 * blk;
                }
                D[j][i] = std::move(blk);
            }
        T.diffs[t] = std::move(D);
    }
    detail::check_complex(T);
    return T;
}

// ---- exact splitting of a Bott-Samelson bimodule into catalogued copies ----

// one catalogued copy inside BS(word): a section pair with prj . inc = e_z
struct SplitPiece {
    ElementId z = 0;
    int shift = 0;
    PolyMatrix inc;  // degree +shift map from the ambient of z into BS(word)
    PolyMatrix prj;  // degree -shift map back, normalized against inc
};

// split BS(word) into summand copies with explicit section pairs; the pairs
// are peeled in the catalogue order and must exhaust the identity exactly
inline std::vector<SplitPiece> full_split(SoergelCatalogue& cat, const std::vector<std::uint8_t>& word) {
    const CoxeterPtr& W = cat.group();
    const FieldPtr& f = W->field();
    BSBimodule B(W, word);
    const std::string ctx = "split of BS(" + detail::word_text(*W, word) + ")";

    HeckeElt ch = HeckeElt::unit(W);
    for (auto s : word) ch = ch * cat.basis().kl(W->element_of_word({s}));
    auto expansion = canonical_expansion(cat.basis(), ch);

    ElementId delta = W->identity_id();
    for (auto s : word) {
        ElementId d = W->right(delta, s);
        if (W->length(d) > W->length(delta)) delta = d;
    }
    int top_shift = static_cast<int>(W->length(delta)) - static_cast<int>(word.size());

    std::vector<std::tuple<ElementId, int, Int>> targets;
    for (const auto& [z, p] : expansion)
        for (const auto& [k, c] : p.terms()) {
            if (c < 0)
                throw MathFailure(ctx + ": negative multiplicity at (" + W->word_str(z) + ", " + std::to_string(k) +
                                  ")");
            Int m = c;
            if (z == delta && k == top_shift) m -= 1;
            if (m > 0) targets.emplace_back(z, k, m);
        }
    std::sort(targets.begin(), targets.end(), [&](const auto& a, const auto& b) {
        unsigned la = W->length(std::get<0>(a)), lb = W->length(std::get<0>(b));
        if (la != lb) return la > lb;
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        int ka = std::get<1>(a), kb = std::get<1>(b);
        if (std::abs(ka) != std::abs(kb)) return std::abs(ka) < std::abs(kb);
        return ka > kb;
    });

    PolyMatrix e = PolyMatrix::identity(f, W->rep_dim(), B.dim());
    std::vector<SplitPiece> out;
    auto peel_one = [&](const Summand& Z, int k, const detail::HomPairing& hp, const Int& remaining) {
        FMatrix C = hp.pairing_matrix(B, e.reduced(f), Z);
        if (Int(static_cast<unsigned long>(C.rank())) != remaining)
            throw MathFailure(ctx + ": composition pairing with (" + W->word_str(Z.x) + ", " + std::to_string(k) +
                              ") has rank " + std::to_string(C.rank()) + ", expected " + remaining.get_str());
        size_t pi = SIZE_MAX, pj = SIZE_MAX;
        for (size_t j = 0; j < C.rows() && pi == SIZE_MAX; ++j)
            for (size_t i = 0; i < C.cols(); ++i)
                if (!C.at(j, i).is_zero()) {
                    pj = j;
                    pi = i;
                    break;
                }
        if (pi == SIZE_MAX) throw InternalError(ctx + ": positive pairing rank without a nonzero scalar");
        const AlgebraicReal c = C.at(pj, pi);
        SplitPiece p;
        p.z = Z.x;
        p.shift = k;
        p.inc = e * (hp.F[pi] * Z.e);
        p.prj = c.inverse() * ((Z.e * hp.G[pj]) * e);
        if (!(p.prj * p.inc == Z.e)) throw InternalError(ctx + ": split pair is not a section");
        e = e - p.inc * p.prj;
        out.push_back(std::move(p));
    };

    for (const auto& [z, k, m] : targets) {
        const Summand& Z = cat.at(z);
        detail::HomPairing hp(Z, k, B);
        for (Int remaining = m; remaining > 0; remaining -= 1) peel_one(Z, k, hp, remaining);
        if (composition_pairing_rank(Z, k, B, e) != 0)
            throw MathFailure(ctx + ": copies of (" + W->word_str(z) + ", " + std::to_string(k) +
                              ") remain after peeling");
    }

    const Summand& D = cat.at(delta);
    detail::HomPairing hp(D, top_shift, B);
    peel_one(D, top_shift, hp, Int(1));
    if (!e.is_zero()) throw InternalError(ctx + ": section pairs do not exhaust the identity");
    return out;
}

namespace detail {

// replace every Bott-Samelson term by its catalogued summands and transport
// the differentials through the section pairs
inline SoergelComplex summandize(SoergelCatalogue& cat, const BSComplex& F) {
    SoergelComplex C;
    C.W = F.W;
    C.lo = F.lo;
    std::map<std::vector<std::uint8_t>, std::vector<SplitPiece>> memo;
    auto split_of = [&](const std::vector<std::uint8_t>& w) -> const std::vector<SplitPiece>& {
        auto it = memo.find(w);
        if (it == memo.end()) it = memo.emplace(w, full_split(cat, w)).first;
        return it->second;
    };

    struct Piece {
        size_t obj;  // originating object in the tensor term
        const SplitPiece* sp;
    };
    std::vector<std::vector<Piece>> pieces(F.terms.size());
    C.terms.resize(F.terms.size());
    for (size_t t = 0; t < F.terms.size(); ++t)
        for (size_t o = 0; o < F.terms[t].size(); ++o) {
            const BSObject& b = F.terms[t][o];
            for (const SplitPiece& sp : split_of(b.word)) {
                C.terms[t].push_back({sp.z, b.shift + sp.shift});
                pieces[t].push_back({o, &sp});
            }
        }

    if (F.terms.size() > 1) C.diffs.resize(F.terms.size() - 1);
    for (size_t t = 0; t + 1 < F.terms.size(); ++t) {
        BlockMatrix D(pieces[t + 1].size(), BlockRow(pieces[t].size()));
        for (size_t j = 0; j < pieces[t + 1].size(); ++j)
            for (size_t i = 0; i < pieces[t].size(); ++i)
                D[j][i] = pieces[t + 1][j].sp->prj * F.diffs[t][pieces[t + 1][j].obj][pieces[t][i].obj] *
                          pieces[t][i].sp->inc;
        C.diffs[t] = std::move(D);
    }
    check_complex(cat, C);
    return C;
}

// scalar of a degree-zero component between equal summand labels; the
// catalogue certifies that such a component is a multiple of the projector
inline AlgebraicReal component_scalar(const Summand& Z, const PolyMatrix& blk) {
    const FieldPtr& f = Z.ambient.field();
    FMatrix br = blk.reduced(f);
    AlgebraicReal c = AlgebraicReal::zero(f);
    for (size_t r = 0; r < Z.ebar.rows() && c.is_zero(); ++r)
        for (size_t cc = 0; cc < Z.ebar.cols(); ++cc)
            if (!Z.ebar.at(r, cc).is_zero()) {
                c = br.at(r, cc) * Z.ebar.at(r, cc).inverse();
                break;
            }
    if (!(blk == c * Z.e)) throw InternalError("degree-zero endomorphism of a summand is not a scalar");
    return c;
}

// remove contractible pairs: repeatedly find the first isomorphism component
// (lowest cohomological index, then source and target position) and apply the
// elimination rewrite to the neighbouring blocks
inline void eliminate_isos(SoergelCatalogue& cat, SoergelComplex& C) {
    for (;;) {
        size_t et = SIZE_MAX, ea = 0, eb = 0;
        AlgebraicReal c = AlgebraicReal::zero(cat.group()->field());
        for (size_t t = 0; t < C.diffs.size() && et == SIZE_MAX; ++t)
            for (size_t a = 0; a < C.terms[t].size() && et == SIZE_MAX; ++a)
                for (size_t b = 0; b < C.terms[t + 1].size(); ++b) {
                    if (!(C.terms[t][a] == C.terms[t + 1][b])) continue;
                    AlgebraicReal s = component_scalar(cat.at(C.terms[t][a].z), C.diffs[t][b][a]);
                    if (s.is_zero()) continue;
                    et = t;
                    ea = a;
                    eb = b;
                    c = s;
                    break;
                }
        if (et == SIZE_MAX) return;

        const AlgebraicReal ci = c.inverse();
        BlockMatrix& D = C.diffs[et];
        BlockMatrix nd(C.terms[et + 1].size() - 1, BlockRow(C.terms[et].size() - 1));
        for (size_t j = 0, nj = 0; j < C.terms[et + 1].size(); ++j) {
            if (j == eb) continue;
            for (size_t i = 0, ni = 0; i < C.terms[et].size(); ++i) {
                if (i == ea) continue;
                nd[nj][ni] = D[j][i] - ci * (D[j][ea] * D[eb][i]);
                ++ni;
            }
            ++nj;
        }
        C.diffs[et] = std::move(nd);
        if (et > 0) C.diffs[et - 1].erase(C.diffs[et - 1].begin() + static_cast<std::ptrdiff_t>(ea));
        if (et + 1 < C.diffs.size())
            for (auto& row : C.diffs[et + 1]) row.erase(row.begin() + static_cast<std::ptrdiff_t>(eb));
        C.terms[et].erase(C.terms[et].begin() + static_cast<std::ptrdiff_t>(ea));
        C.terms[et + 1].erase(C.terms[et + 1].begin() + static_cast<std::ptrdiff_t>(eb));
        check_complex(cat, C);
    }
}

}  // namespace detail

// split every term into catalogued summands, then cancel all isomorphism
// components; the result carries no degree-zero isomorphism between adjacent
// terms (rescanning finds none), and minimal complexes pass through unchanged
inline SoergelComplex minimalize(SoergelCatalogue& cat, const BSComplex& F) {
    SoergelComplex C = detail::summandize(cat, F);
    detail::eliminate_isos(cat, C);
    return C;
}

inline SoergelComplex minimalize(SoergelCatalogue& cat, SoergelComplex C) {
    detail::check_complex(cat, C);
    detail::eliminate_isos(cat, C);
    return C;
}

// minimal complex of the element x: tensor the atoms over the stored reduced
// word of x and minimalize
inline SoergelComplex rouquier_complex(SoergelCatalogue& cat, ElementId x) {
    const CoxeterPtr& W = cat.group();
    BSComplex F = unit_complex(W);
    for (auto s : W->word(x)) F = complex_tensor(F, f_s(W, s));
    return minimalize(cat, F);
}

// multiplicities of the summand z per cohomological index
inline std::map<ElementId, std::map<int, Int>> multiplicity_table(const SoergelComplex& C) {
    std::map<ElementId, std::map<int, Int>> table;
    for (size_t t = 0; t < C.terms.size(); ++t)
        for (const SummandObject& o : C.terms[t]) table[o.z][C.lo + static_cast<int>(t)] += 1;
    return table;
}

// ---- linearity of minimal complexes ----

struct LinearityReport {
    bool pass = true;
    std::string witness;
    std::map<ElementId, std::map<int, Int>> table;
};

// the minimal complex of x must be B_x in degree zero, carry only summands
// B_z(-i) with z strictly below x in cohomological degree i > 0, obey the
// length parity, and reproduce the inverse canonical-basis coefficients as
// its graded Euler characteristic
inline LinearityReport verify_linearity(SoergelCatalogue& cat, const SoergelComplex& C, ElementId x) {
    const CoxeterPtr& W = cat.group();
    LinearityReport R;
    R.table = multiplicity_table(C);
    auto fail = [&](std::string w) {
        R.pass = false;
        if (R.witness.empty()) R.witness = std::move(w);
    };

    if (C.lo != 0) fail("complex does not start in cohomological degree zero");
    if (C.terms.empty() || C.terms[0].size() != 1 || C.terms[0][0].z != x || C.terms[0][0].shift != 0)
        fail("degree-zero term is not a single unshifted copy of " + W->word_str(x));
    for (size_t t = 1; t < C.terms.size(); ++t)
        for (const SummandObject& o : C.terms[t]) {
            int i = C.lo + static_cast<int>(t);
            std::string at = "(" + W->word_str(o.z) + ", " + std::to_string(o.shift) + ") in cohomological degree " +
                             std::to_string(i);
            if (o.shift != -i) {
                fail("summand " + at + " has the wrong shift");
                continue;
            }
            if (o.z == x || !W->bruhat_leq(o.z, x)) {
                fail("summand " + at + " is not strictly below the element");
                continue;
            }
            int gap = static_cast<int>(W->length(x)) - static_cast<int>(W->length(o.z));
            if (((i - gap) % 2 + 2) % 2 != 0) fail("summand " + at + " violates the length parity");
        }

    std::vector<ElementId> ids;
    for (ElementId z : W->enumerate_ideal(W->length(x)))
        if (W->bruhat_leq(z, x)) ids.push_back(z);
    std::sort(ids.begin(), ids.end(), [&](ElementId a, ElementId b) {
        if (W->length(a) != W->length(b)) return W->length(a) < W->length(b);
        return a < b;
    });
    auto g = cat.basis().inverse_on_ideal(ids);
    for (ElementId z : ids) {
        LaurentPoly lhs;
        auto it = R.table.find(z);
        if (it != R.table.end())
            for (const auto& [i, m] : it->second) lhs += LaurentPoly::monomial(i, (i % 2 != 0) ? Int(-m) : m);
        LaurentPoly rhs;
        auto rit = g.find(z);
        if (rit != g.end()) {
            auto xit = rit->second.find(x);
            if (xit != rit->second.end()) rhs = xit->second;
        }
        if (!(lhs == rhs))
            fail("multiplicities of " + W->word_str(z) + " disagree with the inverse canonical coefficient");
    }
    return R;
}

// ---- cohomology of the termwise scalar reduction ----

struct CohomologyReport {
    bool pass = true;
    std::string witness;
};

// the reduction of the minimal complex of x must be exact except for a single
// class in cohomological degree zero and internal degree l(x)
inline CohomologyReport cohomology_check(SoergelCatalogue& cat, const SoergelComplex& C, ElementId x) {
    const CoxeterPtr& W = cat.group();
    const FieldPtr& f = W->field();
    CohomologyReport R;

    // per term: coordinate degrees of the ambient columns and reduced Betti
    // dimensions of the summands
    std::vector<std::vector<int>> cdeg(C.terms.size());
    std::vector<std::map<int, size_t>> bdim(C.terms.size());
    std::set<int> degrees;
    for (size_t t = 0; t < C.terms.size(); ++t) {
        for (const SummandObject& o : C.terms[t]) {
            const Summand& Z = cat.at(o.z);
            for (size_t r = 0; r < Z.ambient.dim(); ++r)
                cdeg[t].push_back(Z.ambient.basis_degree(static_cast<BSBimodule::Mask>(r)) + o.shift);
            for (const auto& [d, n] : Z.betti) {
                bdim[t][d + o.shift] += n.get_ui();
                degrees.insert(d + o.shift);
            }
        }
    }

    // reduced differentials on the full ambient coordinates
    std::vector<FMatrix> rd;
    for (size_t t = 0; t + 1 < C.terms.size(); ++t) {
        size_t rows = cdeg[t + 1].size(), cols = cdeg[t].size();
        FMatrix D(f, rows, cols);
        size_t roff = 0;
        for (size_t j = 0; j < C.terms[t + 1].size(); ++j) {
            size_t coff = 0;
            for (size_t i = 0; i < C.terms[t].size(); ++i) {
                FMatrix blk = C.diffs[t][j][i].reduced(f);
                for (size_t r = 0; r < blk.rows(); ++r)
                    for (size_t c = 0; c < blk.cols(); ++c) D.at(roff + r, coff + c) = blk.at(r, c);
                coff += blk.cols();
            }
            roff += cat.at(C.terms[t + 1][j].z).ambient.dim();
        }
        rd.push_back(std::move(D));
    }

    auto sliced_rank = [&](size_t t, int d) -> size_t {
        if (t >= rd.size()) return 0;
        std::vector<size_t> rs, cs;
        for (size_t r = 0; r < cdeg[t + 1].size(); ++r)
            if (cdeg[t + 1][r] == d) rs.push_back(r);
        for (size_t c = 0; c < cdeg[t].size(); ++c)
            if (cdeg[t][c] == d) cs.push_back(c);
        if (rs.empty() || cs.empty()) return 0;
        FMatrix S(f, rs.size(), cs.size());
        for (size_t r = 0; r < rs.size(); ++r)
            for (size_t c = 0; c < cs.size(); ++c) S.at(r, c) = rd[t].at(rs[r], cs[c]);
        return S.rank();
    };

    int lx = static_cast<int>(W->length(x));
    degrees.insert(lx);
    for (int d : degrees)
        for (size_t t = 0; t < C.terms.size(); ++t) {
            auto it = bdim[t].find(d);
            size_t dim = it == bdim[t].end() ? 0 : it->second;
            size_t kernel = dim - sliced_rank(t, d);
            size_t image = t == 0 ? 0 : sliced_rank(t - 1, d);
            size_t h = kernel - image;
            int i = C.lo + static_cast<int>(t);
            size_t want = (i == 0 && d == lx) ? 1 : 0;
            if (h != want) {
                R.pass = false;
                R.witness = "reduced cohomology has dimension " + std::to_string(h) + " in cohomological degree " +
                            std::to_string(i) + " and internal degree " + std::to_string(d);
                return R;
            }
        }
    return R;
}

// ---- slotwise factorization of the Lefschetz form ----

struct FactoredReport {
    bool pass = true;
    std::string witness;
    std::vector<AlgebraicReal> gammas;
};

// on the reduction of BS(word) (or BS(word.s) with the zeta-deformed
// operator), the Lefschetz form factors through the slotwise multiplication
// maps with positive breaking weights: <b, L b'> = sum_i gamma_i <phi_i b,
// phi_i b'>, where gamma_i is the value of (s_{i-1}..s_1 rho) on the coroot
// of slot i and the trailing slot picks up zeta rho(alpha_s-check)
inline FactoredReport factored_lefschetz_check(const CoxeterPtr& W, const std::vector<std::uint8_t>& word,
                                               std::optional<size_t> trailing, const Rat& zeta,
                                               const std::vector<AlgebraicReal>& rho) {
    const FieldPtr& f = W->field();
    size_t n = W->rep_dim();
    if (W->length(W->element_of_word(word)) != word.size())
        throw InputError("factored Lefschetz needs a reduced word");
    if (trailing && *trailing >= W->rank()) throw InputError("trailing letter out of range");
    if (sgn(zeta) < 0) throw InputError("factored Lefschetz needs a nonnegative zeta");
    if (!trailing && sgn(zeta) != 0) throw InputError("a nonzero zeta needs a trailing letter");
    if (!is_dominant(*W, rho)) throw InputError("factored Lefschetz needs a dominant form");

    std::vector<std::uint8_t> full = word;
    if (trailing) full.push_back(static_cast<std::uint8_t>(*trailing));
    BSBimodule E(W, full);
    FMatrix GE = E.reduced_gram();
    FMatrix L = E.reduced_linear_op(0, rho);
    const AlgebraicReal zr = AlgebraicReal::rational(f, zeta);
    if (trailing && !zr.is_zero()) L = L + zr * E.reduced_linear_op(word.size(), rho);

    FactoredReport R;
    std::vector<AlgebraicReal> carried = rho;
    for (size_t i = 0; i < full.size(); ++i) {
        AlgebraicReal g = W->eval_on_coroot(carried, full[i]);
        if (trailing && i + 1 == full.size() && !zr.is_zero()) g += zr * W->eval_on_coroot(rho, full[i]);
        R.gammas.push_back(g);
        carried = W->act_row(W->element_of_word({full[i]}), carried);
    }
    for (size_t i = 0; i < word.size(); ++i)
        if (R.gammas[i].sign() <= 0)
            throw MathFailure("breaking weight " + std::to_string(i + 1) + " of BS(" + detail::word_text(*W, word) +
                              ") is not positive");

    FMatrix rhs(f, E.dim(), E.dim());
    for (size_t i = 0; i < full.size(); ++i) {
        std::vector<std::uint8_t> rest = full;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        BSBimodule T(W, rest);
        PolyMatrix phi(f, n, T.dim(), E.dim());
        for (size_t m = 0; m < E.dim(); ++m) {
            size_t low = m & ((size_t(1) << i) - 1);
            size_t bit = (m >> i) & 1;
            size_t high = m >> (i + 1);
            BSBimodule::Elt col = T.zero_elt();
            Poly fc = bit ? Poly::variable(f, n, full[i]) : Poly::one(f, n);
            T.push(col, i, static_cast<BSBimodule::Mask>(low | (high << i)), fc);
            for (size_t r = 0; r < T.dim(); ++r) phi.m[r][m] = col[r];
        }
        FMatrix pr = phi.reduced(f);
        rhs = rhs + R.gammas[i] * (pr.transpose() * (T.reduced_gram() * pr));
    }

    FMatrix lhs = GE * L;
    if (!(lhs == rhs)) {
        R.pass = false;
        for (size_t a = 0; a < E.dim() && R.witness.empty(); ++a)
            for (size_t b = 0; b < E.dim(); ++b)
                if (!(lhs.at(a, b) == rhs.at(a, b))) {
                    R.witness = "factored Lefschetz identity fails at basis pair (" + std::to_string(a) + ", " +
                                std::to_string(b) + ")";
                    break;
                }
    }
    return R;
}

// ---- perversity and positivity side checks ----

// negative-degree morphisms between catalogued summands must vanish
inline bool hom_vanishing_check(SoergelCatalogue& cat, ElementId a, ElementId b, unsigned max_shift,
                                std::string* witness = nullptr) {
    const Summand& A = cat.at(a);
    const Summand& B = cat.at(b);
    const FieldPtr& f = cat.group()->field();
    for (unsigned i = 1; i <= max_shift; ++i) {
        auto maps = hom_space(A.ambient, B.ambient, -static_cast<int>(i));
        std::vector<PolyMatrix> sand;
        for (const auto& M : maps) sand.push_back(B.e * M * A.e);
        size_t dim = detail::independent_maps(f, sand).size();
        if (dim != 0) {
            if (witness)
                *witness = "morphisms of degree -" + std::to_string(i) + " from " + cat.group()->word_str(a) +
                           " to " + cat.group()->word_str(b) + " form a space of dimension " + std::to_string(dim);
            return false;
        }
    }
    return true;
}

// the inverse canonical-basis coefficients on a downward closed set must be
// sign alternating with the length gap and obey its parity
inline bool inverse_kl_positive(CanonicalBasis& C, std::vector<ElementId> ideal, std::string* witness = nullptr) {
    const CoxeterPtr& W = C.group();
    std::sort(ideal.begin(), ideal.end(), [&](ElementId a, ElementId b) {
        if (W->length(a) != W->length(b)) return W->length(a) < W->length(b);
        return a < b;
    });
    ideal.erase(std::unique(ideal.begin(), ideal.end()), ideal.end());
    auto g = C.inverse_on_ideal(ideal);
    for (const auto& [z, row] : g)
        for (const auto& [x, p] : row) {
            int gap = static_cast<int>(W->length(x)) - static_cast<int>(W->length(z));
            for (const auto& [e, cf] : p.terms()) {
                bool bad = e < 0 || ((e - gap) % 2 + 2) % 2 != 0 || (gap % 2 == 0 ? cf < 0 : cf > 0);
                if (bad) {
                    if (witness)
                        *witness = "inverse coefficient of (" + W->word_str(z) + ", " + W->word_str(x) +
                                   ") fails sign alternation at exponent " + std::to_string(e);
                    return false;
                }
            }
        }
    return true;
}

}  // namespace shl
