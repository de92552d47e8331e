#pragma once
// Certification driver. Runs the requested checks over a Bruhat ideal in
// increasing length, never consuming an unverified premise, and assembles a
// machine readable certificate with an explicit witness for every failure
// and an explicit reason for every skipped check. Results are cached content
// addressed under a key derived from the mathematical configuration.

#include <chrono>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rouquier.hpp"

namespace shl {

using Json = nlohmann::ordered_json;

inline std::string content_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> k = {"soergel", "hl",   "hr",       "local",
                                               "embedding", "zeta", "rouquier", "coinvariant"};
    return k;
}

// Full run description. The matrix entry 0 encodes an infinite bond.
struct RunConfig {
    std::vector<std::vector<unsigned>> coxeter_matrix;
    RepChoice rep_choice = RepChoice::geometric;
    bool canonical_rho = true;
    std::vector<Rat> rho;  // direct coordinates when canonical_rho is false
    unsigned max_length = 0;
    std::vector<Rat> zeta_grid = {Rat(0), Rat(1, 2), Rat(1), Rat(2), Rat(10)};
    std::set<std::string> checks = {"soergel", "hl", "hr", "local", "embedding", "zeta", "rouquier"};
    size_t dimension_cap = 4000;
    std::string cache_dir;
    bool stop_on_failure = false;
};

inline RunConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("config must be a JSON object");
    static const std::set<std::string> keys = {"coxeter_matrix", "rep_choice",    "rho",
                                               "max_length",     "zeta_grid",     "checks",
                                               "dimension_cap",  "cache_dir",     "stop_on_failure"};
    for (const auto& [k, v] : j.items())
        if (!keys.count(k)) throw InputError("unknown config key: " + k);
    RunConfig c;
    if (!j.contains("coxeter_matrix")) throw InputError("config needs a coxeter_matrix");
    for (const auto& row : j.at("coxeter_matrix")) {
        std::vector<unsigned> r;
        for (const auto& e : row) {
            if (!e.is_number_integer() || e.get<long long>() < 0)
                throw InputError("Coxeter matrix entries must be nonnegative integers");
            r.push_back(e.get<unsigned>());
        }
        c.coxeter_matrix.push_back(std::move(r));
    }
    if (j.contains("rep_choice")) {
        std::string rc = j.at("rep_choice").get<std::string>();
        if (rc == "geometric")
            c.rep_choice = RepChoice::geometric;
        else if (rc == "doubled")
            c.rep_choice = RepChoice::doubled;
        else
            throw InputError("rep_choice must be geometric or doubled");
    }
    if (j.contains("rho")) {
        const Json& r = j.at("rho");
        if (r.is_string()) {
            if (r.get<std::string>() != "canonical") throw InputError("rho must be \"canonical\" or a coordinate list");
        } else if (r.is_array()) {
            c.canonical_rho = false;
            for (const auto& e : r) c.rho.push_back(rat_parse(e.get<std::string>()));
        } else {
            throw InputError("rho must be \"canonical\" or a coordinate list");
        }
    }
    if (j.contains("max_length")) {
        if (!j.at("max_length").is_number_integer() || j.at("max_length").get<long long>() < 0)
            throw InputError("max_length must be a nonnegative integer");
        c.max_length = j.at("max_length").get<unsigned>();
    }
    if (j.contains("zeta_grid")) {
        c.zeta_grid.clear();
        for (const auto& e : j.at("zeta_grid")) c.zeta_grid.push_back(rat_parse(e.get<std::string>()));
        for (const auto& z : c.zeta_grid)
            if (z < 0) throw InputError("zeta grid must be nonnegative");
    }
    if (j.contains("checks")) {
        c.checks.clear();
        for (const auto& e : j.at("checks")) {
            std::string name = e.get<std::string>();
            const auto& k = known_checks();
            if (std::find(k.begin(), k.end(), name) == k.end()) throw InputError("unknown check: " + name);
            c.checks.insert(name);
        }
    }
    if (j.contains("dimension_cap")) {
        if (!j.at("dimension_cap").is_number_integer() || j.at("dimension_cap").get<long long>() < 0)
            throw InputError("dimension_cap must be a nonnegative integer");
        c.dimension_cap = j.at("dimension_cap").get<size_t>();
    }
    if (j.contains("cache_dir")) c.cache_dir = j.at("cache_dir").get<std::string>();
    if (j.contains("stop_on_failure")) c.stop_on_failure = j.at("stop_on_failure").get<bool>();
    if (c.checks.count("zeta") && std::find(c.zeta_grid.begin(), c.zeta_grid.end(), Rat(0)) == c.zeta_grid.end())
        throw InputError("zeta grid must contain zero when the zeta check is requested");
    return c;
}

// canonical serialization; the hash covers the mathematical fields only, so
// moving the cache or toggling stop_on_failure does not invalidate results
inline Json config_to_json(const RunConfig& c) {
    Json j;
    j["coxeter_matrix"] = c.coxeter_matrix;
    j["rep_choice"] = c.rep_choice == RepChoice::geometric ? "geometric" : "doubled";
    if (c.canonical_rho) {
        j["rho"] = "canonical";
    } else {
        std::vector<std::string> r;
        for (const auto& q : c.rho) r.push_back(rat_str(q));
        j["rho"] = r;
    }
    j["max_length"] = c.max_length;
    std::vector<std::string> zg;
    for (const auto& z : c.zeta_grid) zg.push_back(rat_str(z));
    j["zeta_grid"] = zg;
    j["checks"] = std::vector<std::string>(c.checks.begin(), c.checks.end());
    j["dimension_cap"] = c.dimension_cap;
    j["cache_dir"] = c.cache_dir;
    j["stop_on_failure"] = c.stop_on_failure;
    return j;
}

inline std::string config_hash(const RunConfig& c) {
    Json j = config_to_json(c);
    j.erase("cache_dir");
    j.erase("stop_on_failure");
    return content_hash(j.dump());
}

inline CoxeterPtr build_group(const RunConfig& c) {
    CoxeterMatrix cm{c.coxeter_matrix};
    return CoxeterSystem::build(cm, c.rep_choice);
}

inline std::vector<AlgebraicReal> resolve_rho(const RunConfig& c, const CoxeterPtr& W) {
    if (c.canonical_rho) return W->canonical_rho();
    if (c.rho.size() != W->rep_dim())
        throw InputError("rho needs one coordinate per representation dimension");
    std::vector<AlgebraicReal> r;
    for (const auto& q : c.rho) r.push_back(AlgebraicReal::rational(W->field(), q));
    return r;
}

inline std::vector<std::uint8_t> parse_word(const CoxeterSystem& W, const std::string& text) {
    std::vector<std::string> toks;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) toks.push_back(tok);
    if (toks.size() == 1 && toks[0] == "e") return {};
    std::vector<std::uint8_t> out;
    for (const auto& t : toks) {
        auto s = W.letter_of_token(t);
        if (!s) throw InputError("unknown generator: " + t);
        out.push_back(static_cast<std::uint8_t>(*s));
    }
    return out;
}

inline Json preset_config(const std::string& name) {
    auto mk = [](std::vector<std::vector<unsigned>> m, unsigned len, std::vector<std::string> checks,
                 const char* rep = "geometric") {
        Json j;
        j["coxeter_matrix"] = m;
        j["rep_choice"] = rep;
        j["rho"] = "canonical";
        j["max_length"] = len;
        j["zeta_grid"] = std::vector<std::string>{"0", "1/2", "1", "2", "10"};
        j["checks"] = checks;
        j["dimension_cap"] = 4000;
        return j;
    };
    const std::vector<std::string> all = {"soergel", "hl",   "hr",       "local",
                                          "embedding", "zeta", "rouquier", "coinvariant"};
    const std::vector<std::string> no_rq = {"soergel", "hl", "hr", "local", "embedding", "zeta", "coinvariant"};
    if (name == "i22") return mk({{1, 2}, {2, 1}}, 2, all);
    if (name == "a2") return mk({{1, 3}, {3, 1}}, 3, all);
    if (name == "b2") return mk({{1, 4}, {4, 1}}, 4, all);
    if (name == "i25") return mk({{1, 5}, {5, 1}}, 5, all);
    if (name == "i26") return mk({{1, 6}, {6, 1}}, 6, all);
    if (name == "a3") return mk({{1, 3, 2}, {3, 1, 3}, {2, 3, 1}}, 6, no_rq);
    if (name == "h3") return mk({{1, 5, 2}, {5, 1, 3}, {2, 3, 1}}, 0, {"coinvariant"});
    if (name == "universal2") return mk({{1, 0}, {0, 1}}, 4, {"soergel", "rouquier"}, "doubled");
    throw InputError("unknown preset: " + name + " (available: i22 a2 b2 i25 i26 a3 h3 universal2)");
}

// Content addressed result store: <dir>/<config hash>/<module>/<id>.json,
// each entry wrapping its payload with an integrity hash. A missing,
// unreadable, or corrupted entry is treated as absent and recomputed.
class CertCache {
public:
    CertCache() = default;
    CertCache(std::string dir, std::string key) : dir_(std::move(dir)), key_(std::move(key)) {}

    bool enabled() const { return !dir_.empty(); }

    std::filesystem::path entry_path(const std::string& module, const std::string& id) const {
        return std::filesystem::path(dir_) / key_ / module / (sanitize(id) + ".json");
    }

    std::optional<Json> load(const std::string& module, const std::string& id) const {
        if (!enabled()) return std::nullopt;
        std::ifstream in(entry_path(module, id));
        if (!in) return std::nullopt;
        std::stringstream ss;
        ss << in.rdbuf();
        Json e = Json::parse(ss.str(), nullptr, false);
        if (e.is_discarded() || !e.is_object() || !e.contains("hash") || !e.contains("payload"))
            return std::nullopt;
        if (!e["hash"].is_string() || e["hash"].get<std::string>() != content_hash(e["payload"].dump()))
            return std::nullopt;
        return e["payload"];
    }

    void store(const std::string& module, const std::string& id, const Json& payload) const {
        if (!enabled()) return;
        auto p = entry_path(module, id);
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) throw InputError("cache: cannot create " + p.parent_path().string() + ": " + ec.message());
        Json e;
        e["hash"] = content_hash(payload.dump());
        e["payload"] = payload;
        std::ofstream out(p, std::ios::trunc);
        if (!out) throw InputError("cache: cannot open " + p.string());
        out << e.dump() << "\n";
        out.flush();
        if (!out) throw InputError("cache: write failed: " + p.string());
    }

    static std::string sanitize(const std::string& id) {
        std::string s;
        for (char c : id)
            s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '-';
        return s.empty() ? std::string("-") : s;
    }

private:
    std::string dir_, key_;
};

inline std::string effective_cache_dir(const RunConfig& c) {
    if (!c.cache_dir.empty()) return c.cache_dir;
    const char* e = std::getenv("SHL_CACHE_DIR");
    return e ? std::string(e) : std::string();
}

namespace detail {

inline Json hecke_json(const CoxeterSystem& W, const HeckeElt& h) {
    Json o = Json::object();
    for (const auto& [y, p] : h.terms()) o[W.word_str(y)] = p.str();
    return o;
}

inline Json betti_json(const std::map<int, Int>& b) {
    Json o = Json::object();
    for (const auto& [d, n] : b) o[std::to_string(d)] = static_cast<long>(n.get_si());
    return o;
}

inline Json hl_json(const HLReport& r) {
    Json o;
    o["pass"] = r.pass;
    if (!r.pass) o["witness"] = r.witness;
    Json t = Json::array();
    for (const auto& row : r.table) {
        Json e;
        e["i"] = row.i;
        e["dim"] = row.dim;
        e["rank"] = row.rank;
        t.push_back(e);
    }
    o["table"] = t;
    return o;
}

inline Json hr_json(const SignatureReport& r) {
    Json o;
    o["pass"] = r.pass;
    if (!r.pass) o["witness"] = r.witness;
    Json ds = Json::array();
    for (const auto& d : r.degrees) {
        Json e;
        e["i"] = d.i;
        e["dim"] = d.dim;
        e["rank"] = d.rank;
        e["prim_dim"] = d.prim_dim;
        e["signature"] = Json::array({d.pos, d.neg, d.zero});
        e["expected_sign"] = d.expected_sign;
        ds.push_back(e);
    }
    o["degrees"] = ds;
    return o;
}

inline Json gram_json(const FMatrix& g) {
    Json rows = Json::array();
    for (size_t r = 0; r < g.rows(); ++r) {
        Json row = Json::array();
        for (size_t c = 0; c < g.cols(); ++c) row.push_back(g.at(r, c).str());
        rows.push_back(row);
    }
    return rows;
}

inline Json mult_table_json(const CoxeterSystem& W, const std::map<ElementId, std::map<int, Int>>& t) {
    Json o = Json::object();
    for (const auto& [z, row] : t) {
        Json r = Json::object();
        for (const auto& [i, m] : row) r[std::to_string(i)] = static_cast<long>(m.get_si());
        o[W.word_str(z)] = r;
    }
    return o;
}

// a record fails when any nested check reports pass false, except for scan
// entries explicitly marked inconclusive (those count as skipped instead)
inline void record_flags(const Json& v, bool& fail, bool& skip) {
    if (v.is_object()) {
        auto it = v.find("pass");
        if (it != v.end() && it->is_boolean() && !it->get<bool>() &&
            !(v.contains("inconclusive") && v["inconclusive"] == true))
            fail = true;
        for (const auto& [k, sub] : v.items()) {
            if (k == "skipped" && sub.is_array() && !sub.empty()) skip = true;
            record_flags(sub, fail, skip);
        }
    } else if (v.is_array()) {
        for (const auto& sub : v) record_flags(sub, fail, skip);
    }
}

}  // namespace detail

inline Json run_certify(const RunConfig& cfg, bool deterministic = false) {
    auto wall0 = std::chrono::steady_clock::now();
    CoxeterPtr W = build_group(cfg);
    const std::string hash = config_hash(cfg);
    std::vector<AlgebraicReal> rho = resolve_rho(cfg, W);
    SoergelCatalogue cat(W);
    CanonicalBasis& C = cat.basis();
    std::vector<ElementId> ids = W->enumerate_ideal(cfg.max_length);
    CertCache cache(effective_cache_dir(cfg), hash);

    std::map<std::string, long long> ms;
    auto timed = [&](const char* key, auto&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        ms[key] += std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    };

    const bool want_s = cfg.checks.count("soergel");
    const bool want_hl = cfg.checks.count("hl");
    const bool want_hr = cfg.checks.count("hr");
    const bool want_local = cfg.checks.count("local");
    const bool want_emb = cfg.checks.count("embedding");
    const bool want_zeta = cfg.checks.count("zeta");
    const bool want_rq = cfg.checks.count("rouquier");
    const bool want_coinv = cfg.checks.count("coinvariant");

    std::map<unsigned, std::vector<ElementId>> by_len;
    for (ElementId x : ids) by_len[W->length(x)].push_back(x);

    Json elements = Json::array();
    bool any_fail = false, any_skip = false;
    bool premise_below = true;  // every strictly shorter element has S verified
    bool stopped = false;

    for (const auto& [L, group] : by_len) {
        if (stopped || (any_fail && cfg.stop_on_failure)) {
            stopped = true;
            for (ElementId x : group) {
                Json rec;
                rec["x"] = W->word_str(x);
                rec["length"] = L;
                rec["skipped"] = Json::array({Json{{"check", "all"}, {"reason", "run stopped after earlier failure"}}});
                elements.push_back(std::move(rec));
                any_skip = true;
            }
            continue;
        }

        std::map<ElementId, Json> recs;
        std::map<ElementId, Json> skips;
        std::map<ElementId, bool> s_ok, cached, failed;
        bool len_ok = true;

        // first pass: the Soergel check for every element of this length
        for (ElementId x : group) {
            std::string xw = W->word_str(x);
            if (auto hit = cache.load("element", xw); hit && hit->is_object() && hit->value("x", std::string()) == xw) {
                bool f = false, sk = false;
                detail::record_flags(*hit, f, sk);
                any_fail |= f;
                any_skip |= sk;
                failed[x] = f;
                s_ok[x] = !want_s || (hit->contains("S") && (*hit)["S"].value("pass", false));
                len_ok = len_ok && s_ok[x];
                recs[x] = std::move(*hit);
                cached[x] = true;
                continue;
            }
            cached[x] = false;
            Json rec;
            rec["x"] = xw;
            rec["length"] = L;
            Json skipped = Json::array();
            bool ok = !want_s;
            if (want_s) {
                if (!premise_below) {
                    skipped.push_back({{"check", "soergel"}, {"reason", "unverified premise at smaller length"}});
                } else if ((size_t(1) << L) > cfg.dimension_cap) {
                    skipped.push_back({{"check", "soergel"}, {"reason", "ambient dimension above the configured cap"}});
                } else {
                    try {
                        timed("soergel", [&] {
                            const Summand& Z = cat.at(x);
                            bool pass = Z.character == C.kl(x);
                            Json S;
                            S["pass"] = pass;
                            if (!pass)
                                S["witness"] = "character of the realized summand differs from the canonical basis element";
                            S["ch"] = detail::hecke_json(*W, Z.character);
                            S["kl"] = detail::hecke_json(*W, C.kl(x));
                            S["betti"] = detail::betti_json(Z.betti);
                            rec["S"] = std::move(S);
                            ok = pass;
                        });
                    } catch (const MathFailure& e) {
                        rec["S"] = Json{{"pass", false}, {"witness", std::string(e.what())}};
                        ok = false;
                    } catch (const InputError& e) {
                        skipped.push_back({{"check", "soergel"}, {"reason", std::string(e.what())}});
                    }
                }
            }
            s_ok[x] = ok;
            len_ok = len_ok && ok;
            recs[x] = std::move(rec);
            skips[x] = std::move(skipped);
        }

        // downward closure through this length; local, zeta and Rouquier
        // checks consume summands of every element up to length L
        const bool premise_through = premise_below && len_ok;

        // second pass: everything that builds on the realized summands
        for (ElementId x : group) {
            if (cached[x]) {
                elements.push_back(std::move(recs[x]));
                continue;
            }
            Json& rec = recs[x];
            Json& skipped = skips[x];
            bool fail_here = false;
            {
                bool f = false, sk = false;
                detail::record_flags(rec, f, sk);
                fail_here = f;
            }
            auto mark_skip = [&](const char* check, const std::string& why) {
                skipped.push_back({{"check", check}, {"reason", why}});
            };
            const char* gate_elem = nullptr;  // reason the element level gate is closed
            if (want_s && !premise_below)
                gate_elem = "unverified premise at smaller length";
            else if (want_s && !s_ok[x])
                gate_elem = "Soergel check did not pass for this element";
            const char* gate_wide = nullptr;  // reason the ideal level gate is closed
            if (want_s && !premise_through) gate_wide = "unverified premise in the Bruhat ideal";

            std::optional<LefschetzDatum> datum;
            auto need_datum = [&]() -> const LefschetzDatum& {
                if (!datum) datum = reduce(cat.at(x), rho, cfg.dimension_cap);
                return *datum;
            };

            if (want_hl) {
                if (gate_elem) {
                    mark_skip("hl", gate_elem);
                } else {
                    try {
                        timed("hl", [&] {
                            Json h = detail::hl_json(hard_lefschetz_check(need_datum()));
                            if (!h["pass"].get<bool>()) fail_here = true;
                            rec["hL"] = std::move(h);
                        });
                    } catch (const MathFailure& e) {
                        rec["hL"] = Json{{"pass", false}, {"witness", std::string(e.what())}};
                        fail_here = true;
                    } catch (const InputError& e) {
                        mark_skip("hl", e.what());
                    }
                }
            }

            if (want_hr) {
                if (gate_elem) {
                    mark_skip("hr", gate_elem);
                } else {
                    try {
                        timed("hr", [&] {
                            Json h = detail::hr_json(hodge_riemann_check(need_datum()));
                            if (!h["pass"].get<bool>()) fail_here = true;
                            rec["HR"] = std::move(h);
                        });
                    } catch (const MathFailure& e) {
                        rec["HR"] = Json{{"pass", false}, {"witness", std::string(e.what())}};
                        fail_here = true;
                    } catch (const InputError& e) {
                        mark_skip("hr", e.what());
                    }
                }
            }

            // ascents staying inside the ideal, with the hom spaces that can
            // carry a nonzero local form
            std::vector<std::pair<size_t, std::vector<ElementId>>> fronts;
            if (want_local || want_emb) {
                for (size_t s = 0; s < W->rank(); ++s) {
                    ElementId xs = W->right(x, s);
                    if (W->length(xs) <= L || W->length(xs) > cfg.max_length) continue;
                    ElementId se = W->right(W->identity_id(), s);
                    std::vector<ElementId> ys;
                    for (ElementId y : ids) {
                        if (y == xs || !W->bruhat_leq(y, xs)) continue;
                        LaurentPoly hom = C.kl(y).pairing(C.kl(x) * C.kl(se));
                        if (graded_free_dim(hom, 0, W->rep_dim()) != 0) ys.push_back(y);
                    }
                    fronts.emplace_back(s, std::move(ys));
                }
            }

            if (want_local) {
                if (gate_wide) {
                    mark_skip("local", gate_wide);
                } else if ((size_t(1) << (L + 1)) > cfg.dimension_cap && !fronts.empty()) {
                    mark_skip("local", "ambient dimension above the configured cap");
                } else {
                    try {
                        timed("local", [&] {
                            Json arr = Json::array();
                            for (const auto& [s, ys] : fronts) {
                                for (ElementId y : ys) {
                                    LocalFormReport r = local_intersection_form(cat, y, x, s);
                                    Json e;
                                    e["y"] = W->word_str(y);
                                    e["s"] = W->letter_name(s);
                                    e["dim"] = r.dim;
                                    e["expected_sign"] = r.expected_sign;
                                    e["pass"] = r.pass;
                                    if (!r.pass) {
                                        e["witness"] = r.witness;
                                        e["gram"] = detail::gram_json(r.gram);
                                        fail_here = true;
                                    }
                                    arr.push_back(std::move(e));
                                }
                            }
                            rec["local"] = std::move(arr);
                        });
                    } catch (const MathFailure& e) {
                        rec["local"] = Json::array({Json{{"pass", false}, {"witness", std::string(e.what())}}});
                        fail_here = true;
                    } catch (const InputError& e) {
                        mark_skip("local", e.what());
                    }
                }
            }

            if (want_emb) {
                if (gate_wide) {
                    mark_skip("embedding", gate_wide);
                } else if ((size_t(1) << (L + 1)) > cfg.dimension_cap && !fronts.empty()) {
                    mark_skip("embedding", "ambient dimension above the configured cap");
                } else {
                    try {
                        timed("embedding", [&] {
                            Json arr = Json::array();
                            for (const auto& [s, ys] : fronts) {
                                for (ElementId y : ys) {
                                    std::string w;
                                    bool pass = embedding_isometry_check(cat, y, x, s, rho, &w);
                                    Json e;
                                    e["y"] = W->word_str(y);
                                    e["s"] = W->letter_name(s);
                                    e["pass"] = pass;
                                    if (!pass) {
                                        e["witness"] = w;
                                        fail_here = true;
                                    }
                                    arr.push_back(std::move(e));
                                }
                            }
                            rec["embedding"] = std::move(arr);
                        });
                    } catch (const MathFailure& e) {
                        rec["embedding"] = Json::array({Json{{"pass", false}, {"witness", std::string(e.what())}}});
                        fail_here = true;
                    } catch (const InputError& e) {
                        mark_skip("embedding", e.what());
                    }
                }
            }

            if (want_zeta) {
                if (gate_wide) {
                    mark_skip("zeta", gate_wide);
                } else {
                    Json arr = Json::array();
                    for (size_t s = 0; s < W->rank(); ++s) {
                        ElementId xs = W->right(x, s);
                        bool ascent = W->length(xs) > L;
                        if (ascent && W->length(xs) > cfg.max_length) continue;
                        if ((size_t(1) << (L + 1)) > cfg.dimension_cap) {
                            mark_skip("zeta", "ambient dimension above the configured cap");
                            break;
                        }
                        try {
                            timed("zeta", [&] {
                                ZetaScanReport r = zeta_family_scan(cat, x, s, rho, cfg.zeta_grid, 3, cfg.dimension_cap);
                                Json e;
                                e["s"] = W->letter_name(s);
                                e["ascent"] = r.ascent;
                                e["pass"] = r.pass;
                                if (r.inconclusive) e["inconclusive"] = true;
                                if (!r.witness.empty()) e["witness"] = r.witness;
                                Json pts = Json::array();
                                for (const auto& pt : r.points) {
                                    Json p;
                                    p["zeta"] = rat_str(pt.zeta);
                                    p["relevant"] = pt.relevant;
                                    p["hl"] = pt.hl;
                                    pts.push_back(std::move(p));
                                }
                                e["points"] = std::move(pts);
                                if (!r.pass) {
                                    if (r.inconclusive)
                                        mark_skip("zeta", "scan inconclusive: " + r.witness);
                                    else
                                        fail_here = true;
                                }
                                arr.push_back(std::move(e));
                            });
                        } catch (const MathFailure& e) {
                            arr.push_back(Json{{"s", W->letter_name(s)}, {"pass", false}, {"witness", std::string(e.what())}});
                            fail_here = true;
                        } catch (const InputError& e) {
                            mark_skip("zeta", e.what());
                        }
                    }
                    rec["zeta"] = std::move(arr);
                }
            }

            if (want_rq) {
                if (gate_wide) {
                    mark_skip("rouquier", gate_wide);
                } else if ((size_t(1) << L) > cfg.dimension_cap) {
                    mark_skip("rouquier", "ambient dimension above the configured cap");
                } else {
                    try {
                        timed("rouquier", [&] {
                            SoergelComplex Cx = rouquier_complex(cat, x);
                            LinearityReport lr = verify_linearity(cat, Cx, x);
                            CohomologyReport cr = cohomology_check(cat, Cx, x);
                            Json rq;
                            rq["pass"] = lr.pass && cr.pass;
                            Json lin;
                            lin["pass"] = lr.pass;
                            if (!lr.pass) lin["witness"] = lr.witness;
                            Json coh;
                            coh["pass"] = cr.pass;
                            if (!cr.pass) coh["witness"] = cr.witness;
                            rq["linearity"] = std::move(lin);
                            rq["cohomology"] = std::move(coh);
                            rq["table"] = detail::mult_table_json(*W, lr.table);
                            if (!lr.pass || !cr.pass) fail_here = true;
                            rec["rouquier"] = std::move(rq);
                        });
                    } catch (const MathFailure& e) {
                        rec["rouquier"] = Json{{"pass", false}, {"witness", std::string(e.what())}};
                        fail_here = true;
                    } catch (const InputError& e) {
                        mark_skip("rouquier", e.what());
                    }
                }
            }

            if (!skipped.empty()) {
                rec["skipped"] = skipped;
                any_skip = true;
            }
            any_fail |= fail_here;
            cache.store("element", rec["x"].get<std::string>(), rec);
            elements.push_back(std::move(rec));
        }

        premise_below = premise_through;
    }

    Json doc;
    doc["schema"] = "shl/1";
    doc["config_hash"] = hash;
    doc["elements"] = std::move(elements);

    if (want_rq && !stopped) {
        if (auto hit = cache.load("global", "inverse_kl")) {
            doc["inverse_kl"] = *hit;
        } else {
            Json ik;
            timed("rouquier", [&] {
                std::string w;
                bool pass = inverse_kl_positive(C, ids, &w);
                ik["pass"] = pass;
                if (!pass) ik["witness"] = w;
            });
            cache.store("global", "inverse_kl", ik);
            doc["inverse_kl"] = ik;
        }
        if (!doc["inverse_kl"].value("pass", false)) any_fail = true;
    } else {
        doc["inverse_kl"] = nullptr;
        if (want_rq && stopped) any_skip = true;
    }

    if (want_coinv && !stopped) {
        if (auto hit = cache.load("coinvariant", "ring")) {
            bool f = false, sk = false;
            detail::record_flags(*hit, f, sk);
            any_fail |= f;
            any_skip |= sk;
            doc["coinvariant"] = *hit;
        } else {
            Json co;
            try {
                timed("coinvariant", [&] {
                    LefschetzDatum d = coinvariant_datum(W, rho, cfg.dimension_cap);
                    HLReport hl = hard_lefschetz_check(d);
                    SignatureReport hr = hodge_riemann_check(d);
                    co["pass"] = hl.pass && hr.pass;
                    co["dim"] = d.total_dim();
                    Json dims = Json::object();
                    for (const auto& [deg, k] : d.dims) dims[std::to_string(deg)] = k;
                    co["dims"] = std::move(dims);
                    co["hL"] = detail::hl_json(hl);
                    co["HR"] = detail::hr_json(hr);
                    if (!co["pass"].get<bool>()) any_fail = true;
                });
            } catch (const MathFailure& e) {
                co = Json{{"pass", false}, {"witness", std::string(e.what())}};
                any_fail = true;
            } catch (const InputError& e) {
                co = Json{{"skipped", Json::array({Json{{"check", "coinvariant"}, {"reason", std::string(e.what())}}})}};
                any_skip = true;
            }
            cache.store("coinvariant", "ring", co);
            doc["coinvariant"] = std::move(co);
        }
    } else {
        doc["coinvariant"] = nullptr;
        if (want_coinv && stopped) any_skip = true;
    }

    doc["verdict"] = any_fail ? "fail" : (any_skip ? "partial" : "pass");

    Json timings;
    if (deterministic) {
        timings["total_ms"] = 0;
        timings["checks"] = Json::object();
    } else {
        timings["total_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - wall0)
                                  .count();
        Json per = Json::object();
        for (const auto& [k, v] : ms) per[k] = v;
        timings["checks"] = std::move(per);
    }
    doc["timings"] = std::move(timings);
    return doc;
}

namespace detail {

inline const char* pf(const Json& o) { return o.value("pass", false) ? "pass" : "FAIL"; }

inline std::string sign_row(const Json& degrees) {
    std::string s = "(";
    for (const auto& d : degrees) {
        if (s.size() > 1) s += ",";
        s += d.value("expected_sign", 0) >= 0 ? "+" : "-";
    }
    return s + ")";
}

inline void print_gram(std::ostream& os, const Json& g) {
    for (const auto& row : g) {
        os << "      [";
        bool first = true;
        for (const auto& e : row) {
            if (!first) os << ", ";
            os << e.get<std::string>();
            first = false;
        }
        os << "]\n";
    }
}

}  // namespace detail

inline std::string report(const Json& cert, const std::string& format) {
    if (format == "json") return cert.dump(2) + "\n";
    if (format != "text") throw InputError("unknown report format: " + format);
    if (!cert.is_object() || cert.empty()) return "empty certificate\n";
    std::ostringstream os;
    os << "certificate " << cert.value("config_hash", std::string("?")) << "\n";
    os << "verdict: " << cert.value("verdict", std::string("?")) << "\n";
    for (const auto& rec : cert.value("elements", Json::array())) {
        std::string x = rec.value("x", std::string("?"));
        if (rec.contains("S")) {
            os << "S(" << x << "): " << detail::pf(rec["S"]) << "\n";
            if (rec["S"].contains("witness")) os << "    " << rec["S"]["witness"].get<std::string>() << "\n";
        }
        if (rec.contains("hL")) {
            os << "hL(" << x << "): " << detail::pf(rec["hL"]) << "\n";
            if (rec["hL"].contains("witness")) os << "    " << rec["hL"]["witness"].get<std::string>() << "\n";
        }
        if (rec.contains("HR")) {
            os << "HR(" << x << "): " << detail::pf(rec["HR"]);
            if (rec["HR"].contains("degrees")) os << ", signs " << detail::sign_row(rec["HR"]["degrees"]);
            os << "\n";
            if (rec["HR"].contains("witness")) os << "    " << rec["HR"]["witness"].get<std::string>() << "\n";
        }
        if (rec.contains("local")) {
            size_t n = rec["local"].size();
            bool ok = true;
            for (const auto& e : rec["local"]) ok = ok && e.value("pass", false);
            os << "local(" << x << "): " << n << (n == 1 ? " form, " : " forms, ") << (ok ? "pass" : "FAIL") << "\n";
            for (const auto& e : rec["local"])
                if (!e.value("pass", false)) {
                    os << "    " << e.value("witness", std::string("?")) << "\n";
                    if (e.contains("gram")) detail::print_gram(os, e["gram"]);
                }
        }
        if (rec.contains("embedding")) {
            size_t n = rec["embedding"].size();
            bool ok = true;
            for (const auto& e : rec["embedding"]) ok = ok && e.value("pass", false);
            os << "embedding(" << x << "): " << n << (n == 1 ? " map, " : " maps, ") << (ok ? "pass" : "FAIL") << "\n";
            for (const auto& e : rec["embedding"])
                if (!e.value("pass", false)) os << "    " << e.value("witness", std::string("?")) << "\n";
        }
        if (rec.contains("zeta")) {
            size_t n = rec["zeta"].size();
            bool ok = true;
            for (const auto& e : rec["zeta"]) ok = ok && (e.value("pass", false) || e.value("inconclusive", false));
            os << "zeta(" << x << "): " << n << (n == 1 ? " scan, " : " scans, ") << (ok ? "pass" : "FAIL") << "\n";
            for (const auto& e : rec["zeta"])
                if (!e.value("pass", false) && e.contains("witness"))
                    os << "    " << e["witness"].get<std::string>() << "\n";
        }
        if (rec.contains("rouquier")) {
            const Json& rq = rec["rouquier"];
            os << "rouquier(" << x << "): ";
            if (rq.contains("linearity"))
                os << "linearity " << detail::pf(rq["linearity"]) << ", cohomology " << detail::pf(rq["cohomology"]) << "\n";
            else
                os << detail::pf(rq) << "\n";
            if (rq.contains("witness")) os << "    " << rq["witness"].get<std::string>() << "\n";
        }
        if (rec.contains("skipped"))
            for (const auto& e : rec["skipped"])
                os << "skipped(" << x << "): " << e.value("check", std::string("?")) << ": "
                   << e.value("reason", std::string("?")) << "\n";
    }
    if (cert.contains("inverse_kl") && !cert["inverse_kl"].is_null()) {
        os << "inverse KL signs: " << detail::pf(cert["inverse_kl"]) << "\n";
        if (cert["inverse_kl"].contains("witness"))
            os << "    " << cert["inverse_kl"]["witness"].get<std::string>() << "\n";
    }
    if (cert.contains("coinvariant") && !cert["coinvariant"].is_null()) {
        const Json& co = cert["coinvariant"];
        if (co.contains("skipped")) {
            os << "coinvariant: skipped\n";
        } else {
            os << "coinvariant: dim " << co.value("dim", 0) << ", " << detail::pf(co);
            if (co.contains("HR") && co["HR"].contains("degrees"))
                os << ", signs " << detail::sign_row(co["HR"]["degrees"]);
            os << "\n";
            if (co.contains("witness")) os << "    " << co["witness"].get<std::string>() << "\n";
        }
    }
    return os.str();
}

// tables of both canonical basis transition matrices over the ideal:
// h[x][y] is the coefficient of H(y) in b(x), g[x][z] the coefficient of
// b(z) in H(x)
inline Json kl_table(const CoxeterPtr& W, unsigned max_length) {
    CanonicalBasis C(W);
    std::vector<ElementId> ids = W->enumerate_ideal(max_length);
    Json names = Json::array();
    for (ElementId x : ids) names.push_back(W->word_str(x));
    Json h = Json::object();
    for (ElementId x : ids) h[W->word_str(x)] = detail::hecke_json(*W, C.kl(x));
    auto ginv = C.inverse_on_ideal(ids);
    Json g = Json::object();
    for (ElementId x : ids) {
        Json gx = Json::object();
        for (ElementId z : ids) {
            auto zi = ginv.find(z);
            if (zi == ginv.end()) continue;
            auto xi = zi->second.find(x);
            if (xi == zi->second.end() || xi->second.is_zero()) continue;
            gx[W->word_str(z)] = xi->second.str();
        }
        g[W->word_str(x)] = std::move(gx);
    }
    Json out;
    out["elements"] = std::move(names);
    out["h"] = std::move(h);
    out["g"] = std::move(g);
    return out;
}

inline Json decompose_report(SoergelCatalogue& cat, const std::vector<std::uint8_t>& word) {
    const CoxeterPtr& W = cat.group();
    Decomposition D = decompose(cat, word);
    Json pieces = Json::array();
    for (const auto& p : D.pieces) {
        Json e;
        e["z"] = W->word_str(p.z);
        e["shift"] = p.shift;
        e["mult"] = static_cast<long>(p.mult.get_si());
        pieces.push_back(std::move(e));
    }
    Json out;
    out["word"] = shl::detail::word_text(*W, word);
    out["top"] = W->word_str(D.top);
    out["top_shift"] = D.top_shift;
    out["pieces"] = std::move(pieces);
    out["top_betti"] = detail::betti_json(D.top_betti);
    return out;
}

inline Json rouquier_report(SoergelCatalogue& cat, ElementId x) {
    const CoxeterPtr& W = cat.group();
    SoergelComplex Cx = rouquier_complex(cat, x);
    LinearityReport lr = verify_linearity(cat, Cx, x);
    CohomologyReport cr = cohomology_check(cat, Cx, x);
    Json terms = Json::array();
    for (size_t t = 0; t < Cx.terms.size(); ++t) {
        Json objs = Json::array();
        for (const auto& o : Cx.terms[t]) {
            Json e;
            e["z"] = W->word_str(o.z);
            e["shift"] = o.shift;
            objs.push_back(std::move(e));
        }
        terms.push_back(std::move(objs));
    }
    Json out;
    out["element"] = W->word_str(x);
    out["lo"] = Cx.lo;
    out["terms"] = std::move(terms);
    out["table"] = detail::mult_table_json(*W, lr.table);
    Json lin;
    lin["pass"] = lr.pass;
    if (!lr.pass) lin["witness"] = lr.witness;
    Json coh;
    coh["pass"] = cr.pass;
    if (!cr.pass) coh["witness"] = cr.witness;
    out["linearity"] = std::move(lin);
    out["cohomology"] = std::move(coh);
    out["pass"] = lr.pass && cr.pass;
    return out;
}

inline Json coinvariant_report(const CoxeterPtr& W, const std::vector<AlgebraicReal>& rho, size_t cap = 4000) {
    LefschetzDatum d = coinvariant_datum(W, rho, cap);
    HLReport hl = hard_lefschetz_check(d);
    SignatureReport hr = hodge_riemann_check(d);
    Json out;
    out["dim"] = d.total_dim();
    Json dims = Json::object();
    for (const auto& [deg, k] : d.dims) dims[std::to_string(deg)] = k;
    out["dims"] = std::move(dims);
    out["hL"] = detail::hl_json(hl);
    out["HR"] = detail::hr_json(hr);
    out["pass"] = hl.pass && hr.pass;
    return out;
}

}  // namespace shl
