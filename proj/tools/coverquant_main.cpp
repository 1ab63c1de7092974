// coverquant: command-line front end.
//
// Subcommands: datum validate, half gram, theta, module dump, cb N, cb udot,
// udot gram, twist check, verify all.  Reports are JSON (schema 1) with a
// deterministic field and element order, so identical configurations produce
// byte-identical files; Gram matrices and exponent tables can also be
// written as CSV.  Exit codes: 0 success, 1 computation failure, 2 bad
// configuration.  When COVERQUANT_CACHE_DIR is set, reports are memoized
// there keyed by the canonical configuration string.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "coverquant/report.hpp"
#include "coverquant/twistor.hpp"
#include "json.hpp"

using namespace coverquant;
using ordered_json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Helpers.
// ---------------------------------------------------------------------------
std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    return out;
}

Weight parse_weight(const std::string& s, const RootDatum& rd,
                    const char* flag) {
    std::vector<int> w = parse_ints(s);
    if (static_cast<int>(w.size()) != rd.x_rank)
        throw CLI::ValidationError(
            std::string(flag) + " must have " + std::to_string(rd.x_rank) +
            " comma-separated entries for this datum");
    return w;
}

std::string nu_str(const NuVec& nu) {
    std::string s;
    for (size_t i = 0; i < nu.size(); ++i)
        s += (i ? "," : "") + std::to_string(nu[i]);
    return s;
}

ordered_json scalar_json(const PiScalar& c) {
    return ordered_json{{"eps+", c.plus().str()}, {"eps-", c.minus().str()}};
}

ordered_json matrix_json(const std::vector<std::vector<PiScalar>>& m) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : m) {
        ordered_json r = ordered_json::array();
        for (const auto& c : row) r.push_back(scalar_json(c));
        rows.push_back(r);
    }
    return rows;
}

// Enumerate all nu in N[I] of height exactly h (lexicographic order).
void each_nu(int rank, int h, const std::function<void(const NuVec&)>& fn) {
    NuVec nu(static_cast<size_t>(rank), 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == rank - 1) {
            nu[static_cast<size_t>(pos)] = left;
            fn(nu);
            return;
        }
        for (int c = left; c >= 0; --c) {
            nu[static_cast<size_t>(pos)] = c;
            rec(pos + 1, left - c);
        }
    };
    if (rank > 0) rec(0, h);
}

ordered_json udot_json(const UDotElem& a) {
    ordered_json terms = ordered_json::array();
    for (const auto& [key, mat] : a.comps) {
        ordered_json t;
        t["zeta"] = key.zeta;
        t["nu_minus"] = key.nm;
        t["nu_plus"] = key.np;
        t["coeffs"] = matrix_json(mat);
        terms.push_back(t);
    }
    return terms;
}

struct Output {
    std::string out_path;  // empty: stdout
    std::string format = "json";

    void write(const ordered_json& j, const std::string& csv = "") const {
        std::string text =
            format == "csv" && !csv.empty() ? csv : j.dump(2) + "\n";
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + out_path);
            out << text;
        }
    }
};

// Config-keyed memoization under COVERQUANT_CACHE_DIR.
std::string cache_lookup(const std::string& key) {
    const char* dir = std::getenv("COVERQUANT_CACHE_DIR");
    if (!dir || !*dir) return {};
    std::hash<std::string> h;
    return std::string(dir) + "/cq-" + std::to_string(h(key)) + ".cache";
}

bool cache_read(const std::string& path, std::string& text) {
    if (path.empty()) return false;
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    return true;
}

void cache_write(const std::string& path, const std::string& text) {
    if (path.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(
        std::filesystem::path(path).parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (out) out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coverquant: exact canonical-basis computations for "
                 "anisotropic covering quantum groups"};
    app.require_subcommand(1);

    std::string datum = "osp(1|2)";
    int height = 4;
    std::string lambda_s, rlw_s, lhw_s, zeta_s, form = "dot";
    int s_index = 3;
    int jobs = 1;
    Output out;

    app.add_option("--datum", datum, "builtin name or datum JSON path")
        ->capture_default_str();
    app.add_option("--height", height, "height / depth bound")
        ->capture_default_str();
    app.add_option("--lambda", lambda_s, "weight (comma-separated)");
    app.add_option("--lhw", lhw_s, "left highest weight lambda");
    app.add_option("--rlw", rlw_s, "right lowest weight lambda'");
    app.add_option("--zeta", zeta_s, "Udot block weight");
    app.add_option("-s", s_index, "coproduct index (1..4)")
        ->capture_default_str();
    app.add_option("--form", form, "bilinear form: dot | prime");
    app.add_option("--out", out.out_path, "output file (default stdout)");
    app.add_option("--format", out.format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--jobs", jobs, "worker cap (computations are exact and "
                                   "run per weight block)");

    // datum validate <file>
    auto* c_datum = app.add_subcommand("datum", "root datum utilities");
    auto* c_validate = c_datum->add_subcommand("validate", "validate a datum");
    std::string datum_file;
    c_validate->add_option("file", datum_file, "datum JSON file or builtin")
        ->required();

    auto* c_half = app.add_subcommand("half", "half-algebra utilities");
    auto* c_half_gram = c_half->add_subcommand(
        "gram", "Gram matrices of the bilinear form on f per weight");

    auto* c_theta = app.add_subcommand(
        "theta", "quasi-R-matrix truncation and unitarity report");

    auto* c_module = app.add_subcommand("module", "module utilities");
    auto* c_module_dump = c_module->add_subcommand(
        "dump", "weights, dimensions and basis words of V(lambda)");

    auto* c_cb = app.add_subcommand("cb", "canonical bases");
    auto* c_cb_n = c_cb->add_subcommand(
        "N", "canonical basis of the tensor module N(lambda, lambda')");
    auto* c_cb_udot = c_cb->add_subcommand(
        "udot", "canonical basis of a Udot block");

    auto* c_udot = app.add_subcommand("udot", "modified-form utilities");
    auto* c_udot_gram = c_udot->add_subcommand(
        "gram", "Gram matrix of the bilinear form on a Udot block basis");

    auto* c_twist = app.add_subcommand("twist", "twistor maps");
    auto* c_twist_check = c_twist->add_subcommand(
        "check", "eigen-exponent table of the twistor on the canonical basis");

    auto* c_verify = app.add_subcommand("verify", "verification suites");
    auto* c_verify_all =
        c_verify->add_subcommand("all", "run the acceptance suite");
    std::string data_dir = "data";
    c_verify_all->add_option("--data-dir", data_dir,
                             "directory with canonical basis data files")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        // --- verify all (no report file) -----------------------------------
        if (c_verify_all->parsed())
            return run_acceptance(data_dir, std::cout) == 0 ? 0 : 1;

        // --- datum validate ------------------------------------------------
        if (c_validate->parsed()) {
            ordered_json j;
            j["schema"] = 1;
            j["command"] = "datum validate";
            j["input"] = datum_file;
            try {
                RootDatum rd = resolve_datum(datum_file);
                j["valid"] = true;
                j["rank"] = rd.rank();
                j["violations"] = ordered_json::array();
                out.write(j);
                return 0;
            } catch (const std::exception& ex) {
                j["valid"] = false;
                j["violations"] = ordered_json::array({ex.what()});
                out.write(j);
                return 1;
            }
        }

        RootDatum rd = resolve_datum(datum);
        if (s_index < 1 || s_index > 4)
            throw CLI::ValidationError("-s must be 1..4");

        // Canonical configuration string (cache key + reproducibility tag).
        std::ostringstream cfg;
        cfg << app.get_subcommands().front()->get_name() << "|" << datum << "|h"
            << height << "|s" << s_index << "|lam:" << lambda_s
            << "|lhw:" << lhw_s << "|rlw:" << rlw_s << "|z:" << zeta_s
            << "|form:" << form << "|fmt:" << out.format;
        std::string cache_path = cache_lookup(cfg.str());
        std::string cached;
        if (cache_read(cache_path, cached)) {
            if (out.out_path.empty()) {
                std::cout << cached;
            } else {
                std::ofstream o(out.out_path, std::ios::binary);
                o << cached;
            }
            return 0;
        }
        std::ostringstream captured;

        auto emit = [&](const ordered_json& j, const std::string& csv = "") {
            std::string text =
                out.format == "csv" && !csv.empty() ? csv : j.dump(2) + "\n";
            cache_write(cache_path, text);
            if (out.out_path.empty()) {
                std::cout << text;
            } else {
                std::ofstream o(out.out_path, std::ios::binary);
                if (!o) throw std::runtime_error("cannot write " + out.out_path);
                o << text;
            }
        };

        ordered_json j;
        j["schema"] = 1;
        j["datum"] = datum;

        // --- half gram -----------------------------------------------------
        if (c_half_gram->parsed()) {
            j["command"] = "half gram";
            j["height"] = height;
            HalfAlg f(rd, height);
            ordered_json comps = ordered_json::array();
            std::string csv = "nu,k,l,eps+,eps-\n";
            for (int h = 0; h <= height; ++h)
                each_nu(rd.rank(), h, [&](const NuVec& nu) {
                    const auto& g = f.gram(nu);
                    ordered_json c;
                    c["nu"] = nu;
                    c["dim"] = g.size();
                    c["gram"] = matrix_json(g);
                    comps.push_back(c);
                    for (size_t k = 0; k < g.size(); ++k)
                        for (size_t l = 0; l < g.size(); ++l)
                            csv += "\"" + nu_str(nu) + "\"," +
                                   std::to_string(k) + "," +
                                   std::to_string(l) + ",\"" +
                                   g[k][l].plus().str() + "\",\"" +
                                   g[k][l].minus().str() + "\"\n";
                });
            j["components"] = comps;
            emit(j, csv);
            return 0;
        }

        // --- theta ---------------------------------------------------------
        if (c_theta->parsed()) {
            j["command"] = "theta";
            j["s"] = s_index;
            j["height"] = height;
            HalfAlg f(rd, height + 1);
            ThetaTruncation th = compute_theta(f, s_index, height);
            ordered_json comps = ordered_json::array();
            for (const auto& [nu, mat] : th.comps) {
                ordered_json c;
                c["nu"] = nu;
                c["coeffs"] = matrix_json(mat);
                comps.push_back(c);
            }
            j["jslot"] = th.jslot;
            j["components"] = comps;
            UnitarityReport rep = check_unitarity(f, th);
            j["unitarity"] = rep.pass;
            emit(j);
            return rep.pass ? 0 : 1;
        }

        // --- module dump ---------------------------------------------------
        if (c_module_dump->parsed()) {
            if (lambda_s.empty())
                throw CLI::ValidationError("module dump requires --lambda");
            Weight lam = parse_weight(lambda_s, rd, "--lambda");
            j["command"] = "module dump";
            j["lambda"] = lam;
            j["depth"] = height;
            auto f = std::make_shared<HalfAlg>(rd, height);
            WeightModule m(f, lam, true, height);
            ordered_json comps = ordered_json::array();
            for (int h = 0; h <= height; ++h)
                each_nu(rd.rank(), h, [&](const NuVec& nu) {
                    int d = m.dim(nu);
                    if (d == 0 && h > 0) return;
                    ordered_json c;
                    c["nu"] = nu;
                    c["weight"] = sub_w(lam, rd.nu_to_x(nu));
                    c["dim"] = d;
                    ordered_json words = ordered_json::array();
                    const auto& gc = f->component(nu);
                    for (int k : m.basis(nu))
                        words.push_back(gc.words[static_cast<size_t>(
                            gc.basis[static_cast<size_t>(k)])]);
                    c["basis_words"] = words;
                    comps.push_back(c);
                });
            j["components"] = comps;
            emit(j);
            return 0;
        }

        // --- cb N ----------------------------------------------------------
        if (c_cb_n->parsed()) {
            if (lhw_s.empty() || rlw_s.empty())
                throw CLI::ValidationError("cb N requires --lhw and --rlw");
            Weight lam = parse_weight(lhw_s, rd, "--lhw");
            Weight lamp = parse_weight(rlw_s, rd, "--rlw");
            j["command"] = "cb N";
            j["lambda"] = lam;
            j["lambda_prime"] = lamp;
            j["s"] = s_index;
            j["height"] = height;
            auto f = std::make_shared<HalfAlg>(
                rd, 2 * height + 2 + std::abs(rd.pair_i(0, lam)));
            std::unique_ptr<CBProvider> bp;
            if (rd.rank() == 1)
                bp = std::make_unique<RankOneCBProvider>(f);
            else
                bp = std::make_unique<FileCBProvider>(
                    f, data_dir + "/osp1-4_cb.json");
            NCanonicalBasis ncb = cb_of_N(*bp, lam, lamp, height, s_index);
            ordered_json els = ordered_json::array();
            for (size_t a = 0; a < ncb.standard.size(); ++a) {
                ordered_json e;
                e["b1"] = ordered_json{{"nu", ncb.standard[a].b1.nu},
                                       {"k", ncb.standard[a].b1.k}};
                e["b2"] = ordered_json{{"nu", ncb.standard[a].b2.nu},
                                       {"k", ncb.standard[a].b2.k}};
                ordered_json coeffs = ordered_json::array();
                for (size_t b = 0; b < ncb.standard.size(); ++b)
                    if (!ncb.p[a][b].is_zero())
                        coeffs.push_back(ordered_json{
                            {"index", b}, {"coeff", scalar_json(ncb.p[a][b])}});
                e["p"] = coeffs;
                els.push_back(e);
            }
            j["elements"] = els;
            emit(j);
            return 0;
        }

        // --- cb udot -------------------------------------------------------
        if (c_cb_udot->parsed()) {
            if (zeta_s.empty())
                throw CLI::ValidationError("cb udot requires --zeta");
            Weight zeta = parse_weight(zeta_s, rd, "--zeta");
            j["command"] = "cb udot";
            j["zeta"] = zeta;
            j["height"] = height;
            if (rd.rank() != 1)
                throw std::runtime_error(
                    "cb udot: only the rank-one provider is built in");
            auto f = std::make_shared<HalfAlg>(
                rd, 4 * height + 4 + std::abs(zeta[0]));
            RankOneCBProvider bp(f);
            UDotCanonicalBasis ub = cb_of_udot(bp, zeta, height);
            j["stabilization_pair"] =
                ordered_json{{"lambda", ub.lambda},
                             {"lambda_pp", ub.lambdapp}};
            ordered_json els = ordered_json::array();
            for (const auto& e : ub.elements) {
                ordered_json el;
                el["b1"] = ordered_json{{"nu", e.index.b1.nu},
                                        {"k", e.index.b1.k}};
                el["b2"] = ordered_json{{"nu", e.index.b2.nu},
                                        {"k", e.index.b2.k}};
                el["value"] = udot_json(e.value);
                els.push_back(el);
            }
            j["elements"] = els;
            emit(j);
            return 0;
        }

        // --- udot gram -----------------------------------------------------
        if (c_udot_gram->parsed()) {
            if (zeta_s.empty())
                throw CLI::ValidationError("udot gram requires --zeta");
            Weight zeta = parse_weight(zeta_s, rd, "--zeta");
            if (form != "dot" && form != "prime")
                throw CLI::ValidationError("--form must be dot or prime");
            j["command"] = "udot gram";
            j["zeta"] = zeta;
            j["height"] = height;
            j["form"] = form;
            HalfAlg f(rd, 2 * height + 2);
            // Basis: minus-plus monomials theta^{(a)}-side over all nu pairs
            // with heights <= height (deterministic order).
            std::vector<UDotElem> basis;
            ordered_json labels = ordered_json::array();
            for (int h1 = 0; h1 <= height; ++h1)
                each_nu(rd.rank(), h1, [&](const NuVec& n1) {
                    for (int h2 = 0; h2 <= height; ++h2)
                        each_nu(rd.rank(), h2, [&](const NuVec& n2) {
                            const auto& g1 = f.component(n1);
                            const auto& g2 = f.component(n2);
                            for (int k = 0; k < g1.dim(); ++k)
                                for (int l = 0; l < g2.dim(); ++l) {
                                    FElem xm = f.from_word(g1.basis_word(k));
                                    FElem xp = f.from_word(g2.basis_word(l));
                                    basis.push_back(
                                        udot_monomial(f, xm, zeta, xp));
                                    labels.push_back(ordered_json{
                                        {"nu_minus", n1},
                                        {"k", k},
                                        {"nu_plus", n2},
                                        {"l", l}});
                                }
                        });
                });
            std::vector<std::vector<PiScalar>> g(
                basis.size(), std::vector<PiScalar>(basis.size()));
            for (size_t a = 0; a < basis.size(); ++a)
                for (size_t b = a; b < basis.size(); ++b) {
                    g[a][b] = form == "dot"
                                  ? dot_form(f, basis[a], basis[b])
                                  : dot_form_prime(f, basis[a], basis[b]);
                    g[b][a] = g[a][b];
                }
            j["labels"] = labels;
            j["gram"] = matrix_json(g);
            std::string csv = "a,b,eps+,eps-\n";
            for (size_t a = 0; a < basis.size(); ++a)
                for (size_t b = 0; b < basis.size(); ++b)
                    csv += std::to_string(a) + "," + std::to_string(b) +
                           ",\"" + g[a][b].plus().str() + "\",\"" +
                           g[a][b].minus().str() + "\"\n";
            emit(j, csv);
            return 0;
        }

        // --- twist check ---------------------------------------------------
        if (c_twist_check->parsed()) {
            if (zeta_s.empty())
                throw CLI::ValidationError("twist check requires --zeta");
            Weight zeta = parse_weight(zeta_s, rd, "--zeta");
            j["command"] = "twist check";
            j["zeta"] = zeta;
            j["height"] = height;
            if (rd.rank() != 1)
                throw std::runtime_error(
                    "twist check: only the rank-one provider is built in");
            auto f = std::make_shared<HalfAlg>(
                rd, 4 * height + 4 + std::abs(zeta[0]));
            RankOneCBProvider bp(f);
            Enhancer e = build_enhancer(rd);
            TwistEigenTable t = cb_eigencheck(bp, e, zeta, height);
            ordered_json els = ordered_json::array();
            std::string csv = "b1_nu,b1_k,b2_nu,b2_k,exponent\n";
            for (size_t a = 0; a < t.index.size(); ++a) {
                els.push_back(
                    ordered_json{{"b1",
                                  ordered_json{{"nu", t.index[a].b1.nu},
                                               {"k", t.index[a].b1.k}}},
                                 {"b2",
                                  ordered_json{{"nu", t.index[a].b2.nu},
                                               {"k", t.index[a].b2.k}}},
                                 {"exponent", t.exponent[a]}});
                csv += "\"" + nu_str(t.index[a].b1.nu) + "\"," +
                       std::to_string(t.index[a].b1.k) + ",\"" +
                       nu_str(t.index[a].b2.nu) + "\"," +
                       std::to_string(t.index[a].b2.k) + "," +
                       std::to_string(t.exponent[a]) + "\n";
            }
            j["exponents_mod_4"] = els;
            emit(j, csv);
            return 0;
        }

        std::cerr << "no operation selected; see --help\n";
        return 2;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "computation failed: " << e.what() << "\n";
        return 1;
    }
}
