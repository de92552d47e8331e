// Command line front end: certification runs, canonical basis tables,
// decompositions, complexes over single elements, and the coinvariant ring.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "shl/certify.hpp"

namespace {

shl::Json load_config(const std::string& path, const std::string& preset) {
    shl::Json j;
    if (!preset.empty()) j = shl::preset_config(preset);
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw shl::InputError("cannot open config: " + path);
        shl::Json file = shl::Json::parse(in, nullptr, false);
        if (file.is_discarded()) throw shl::InputError("config is not valid JSON: " + path);
        if (j.is_null())
            j = std::move(file);
        else
            j.update(file);
    }
    if (j.is_null()) throw shl::InputError("need --config or --preset");
    return j;
}

void apply_overrides(shl::Json& j, const std::string& checks_csv, long long max_length) {
    if (!checks_csv.empty()) {
        shl::Json arr = shl::Json::array();
        std::string cur;
        for (char c : checks_csv + ",") {
            if (c == ',') {
                if (!cur.empty()) arr.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        j["checks"] = std::move(arr);
    }
    if (max_length >= 0) j["max_length"] = static_cast<unsigned>(max_length);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw shl::InputError("cannot open output file: " + out_path);
    out << text;
    if (!out) throw shl::InputError("write failed: " + out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact certification of Hodge structures on Soergel bimodules"};
    app.require_subcommand(1);

    std::string config_path, preset, checks_csv, format = "text", out_path, word_text, element_text;
    long long max_length = -1;
    unsigned jobs = 1;
    bool deterministic = false;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--config", config_path, "JSON configuration file");
        c->add_option("--preset", preset, "built in configuration: i22 a2 b2 i25 i26 a3 h3 universal2");
        c->add_option("--max-length", max_length, "override the Bruhat ideal length bound");
    };

    CLI::App* certify = app.add_subcommand("certify", "run the certification ladder and emit a certificate");
    add_common(certify);
    certify->add_option("--checks", checks_csv, "comma separated subset of checks to run");
    certify->add_option("--jobs", jobs, "worker count; results are reduced in a fixed order")
        ->check(CLI::PositiveNumber);
    certify->add_flag("--deterministic", deterministic, "zero wall times for byte stable output");
    certify->add_option("--format", format, "certificate format")->check(CLI::IsMember({"json", "text"}));
    certify->add_option("--out", out_path, "write the report to this path instead of stdout");

    CLI::App* kl = app.add_subcommand("kl", "print both canonical basis transition tables over the ideal");
    add_common(kl);

    CLI::App* dec = app.add_subcommand("decompose", "split a Bott-Samelson bimodule into catalogue summands");
    add_common(dec);
    dec->add_option("--word", word_text, "space separated generator word, e for the identity")->required();

    CLI::App* rq = app.add_subcommand("rouquier", "minimal complex of an element with its checks");
    add_common(rq);
    rq->add_option("--element", element_text, "space separated reduced word, e for the identity")->required();

    CLI::App* coin = app.add_subcommand("coinvariant", "Lefschetz package of the coinvariant ring");
    add_common(coin);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int r = app.exit(e);
        return r == 0 ? 0 : 1;
    }

    try {
        shl::Json j = load_config(config_path, preset);
        apply_overrides(j, checks_csv, max_length);
        shl::RunConfig cfg = shl::config_from_json(j);

        if (certify->parsed()) {
            shl::Json cert = shl::run_certify(cfg, deterministic);
            emit(shl::report(cert, format), out_path);
            std::string verdict = cert.value("verdict", std::string("fail"));
            return verdict == "pass" ? 0 : verdict == "fail" ? 2 : 1;
        }

        shl::CoxeterPtr W = shl::build_group(cfg);
        if (kl->parsed()) {
            emit(shl::kl_table(W, cfg.max_length).dump(2) + "\n", out_path);
            return 0;
        }
        if (dec->parsed()) {
            shl::SoergelCatalogue cat(W);
            auto word = shl::parse_word(*W, word_text);
            emit(shl::decompose_report(cat, word).dump(2) + "\n", out_path);
            return 0;
        }
        if (rq->parsed()) {
            shl::SoergelCatalogue cat(W);
            auto word = shl::parse_word(*W, element_text);
            if (!W->is_reduced(word)) throw shl::InputError("element word must be reduced");
            shl::Json r = shl::rouquier_report(cat, W->element_of_word(word));
            emit(r.dump(2) + "\n", out_path);
            return r.value("pass", false) ? 0 : 2;
        }
        if (coin->parsed()) {
            shl::Json r = shl::coinvariant_report(W, shl::resolve_rho(cfg, W), cfg.dimension_cap);
            emit(r.dump(2) + "\n", out_path);
            return r.value("pass", false) ? 0 : 2;
        }
        return 1;
    } catch (const shl::MathFailure& e) {
        std::cerr << "math failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
