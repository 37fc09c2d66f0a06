// Command-line surface for the volume/bracket engine.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.
// All exact values print in the canonical "p/q*pi^k" form so output is
// byte-identical across runs and thread counts.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wpvol/cut_json.hpp"
#include "wpvol/wpvol.hpp"

namespace {

using namespace wpvol;

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw CLI::ValidationError("empty entry in list '" + csv + "'");
        out.push_back(std::stoi(item));
    }
    if (out.empty()) throw CLI::ValidationError("empty list");
    return out;
}

std::vector<BigRational> parse_rational_list(const std::string& csv) {
    std::vector<BigRational> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
    return out;
}

int resolve_float_digits(const std::string& raw) {
    if (raw.empty()) return 15;
    int d = std::stoi(raw);
    if (d < 1 || d > 50) throw CLI::ValidationError("--float digits must be in 1..50");
    return d;
}

struct VerifyCounters {
    std::size_t oracle_checked = 0, oracle_defects = 0;
    std::size_t invariant_checked = 0, invariant_defects = 0;
};

VerifyCounters verify_oracle_and_invariants(BracketEngine& engine, int max_weight) {
    VerifyCounters c;
    for (const auto& key : BracketEngine::bracket_range(std::min(max_weight, 7))) {
        auto oracle = try_bracket_oracle(key.g, key.d);
        if (!oracle) continue;
        ++c.oracle_checked;
        if (!(engine.bracket(key) == *oracle)) ++c.oracle_defects;
    }
    for (const auto& [key, value] : engine.snapshot()) {
        ++c.invariant_checked;
        if (value.sign() <= 0 || value.pi_exp() != key.dim() - key.dsum()) ++c.invariant_defects;
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace wpvol;
    CLI::App app{"Weil-Petersson volume polynomials and intersection brackets"};
    app.require_subcommand(1);

    unsigned threads = BracketEngine::default_threads();
    app.add_option("--threads", threads, "engine parallelism (default: hardware)");

    BracketEngine engine;

    // --- bracket
    auto* cmd_bracket = app.add_subcommand("bracket", "exact bracket [tau_{d_1}...]_{g,n}");
    int b_g = 0, b_n = 0;
    std::string b_d, b_float;
    cmd_bracket->add_option("--g", b_g)->required();
    cmd_bracket->add_option("--n", b_n)->required();
    cmd_bracket->add_option("--d", b_d, "comma-separated exponents")->required();
    cmd_bracket->add_option("--float", b_float, "render as float [digits]")->expected(0, 1);

    // --- volume
    auto* cmd_volume = app.add_subcommand("volume", "volume polynomial V_{g,n}(L)");
    int v_g = 0, v_n = 0;
    std::string v_at, v_float;
    cmd_volume->add_option("--g", v_g)->required();
    cmd_volume->add_option("--n", v_n)->required();
    cmd_volume->add_option("--at", v_at, "evaluate at L1,...,Ln");
    cmd_volume->add_option("--float", v_float, "digits for evaluation output")->expected(0, 1);

    // --- genus-volume
    auto* cmd_gv = app.add_subcommand("genus-volume", "V_g of the closed surface");
    int gv_g = 0;
    std::string gv_float;
    cmd_gv->add_option("--g", gv_g)->required();
    cmd_gv->add_option("--float", gv_float)->expected(0, 1);

    // --- verify
    auto* cmd_verify = app.add_subcommand("verify", "recursion and oracle identity suites");
    int verify_weight = 8;
    cmd_verify->add_option("--max-weight", verify_weight, "sweep keys with 2g-2+n <= W");

    // --- ratios
    auto* cmd_ratios = app.add_subcommand("ratios", "B / C / tau ratio tables");
    int r_maxg = 8, r_n = 0, r_k = 1;
    std::string r_which = "C", r_format = "csv";
    cmd_ratios->add_option("--max-g", r_maxg);
    cmd_ratios->add_option("--n", r_n);
    cmd_ratios->add_option("--which", r_which)->check(CLI::IsMember({"B", "C", "tau"}));
    cmd_ratios->add_option("--k", r_k, "tau_k index (tau table only)");
    cmd_ratios->add_option("--format", r_format)->check(CLI::IsMember({"csv", "json"}));

    // --- zograf
    auto* cmd_zograf = app.add_subcommand("zograf", "V_{g,n} against the factorial prediction");
    int z_maxg = 8, z_n = 0;
    std::string z_format = "csv";
    cmd_zograf->add_option("--max-g", z_maxg);
    cmd_zograf->add_option("--n", z_n);
    cmd_zograf->add_option("--format", z_format)->check(CLI::IsMember({"csv", "json"}));

    // --- integrate
    auto* cmd_integrate = app.add_subcommand("integrate", "integral of f_gamma for a cut JSON");
    std::string i_cut, i_weight = "indicator", i_method = "auto", i_lambda = "1", i_scale = "1",
                i_table;
    int i_power = 0;
    cmd_integrate->add_option("--cut", i_cut, "cut description JSON file")->required();
    cmd_integrate->add_option("--weight", i_weight)
        ->check(CLI::IsMember({"indicator", "monomial", "reciprocal", "exp", "custom"}));
    cmd_integrate->add_option("--lambda", i_lambda, "cutoff (rational or decimal)");
    cmd_integrate->add_option("--power", i_power, "monomial exponent p");
    cmd_integrate->add_option("--scale", i_scale, "exp weight scale s");
    cmd_integrate->add_option("--table", i_table, "custom weight t1:f1,t2:f2,...");
    cmd_integrate->add_option("--method", i_method)
        ->check(CLI::IsMember({"auto", "exact", "quadrature"}));

    // --- systole
    auto* cmd_systole = app.add_subcommand("systole", "thin-part volume estimate");
    int s_g = 2;
    std::string s_eps = "0.1", s_eps0 = "0.1";
    cmd_systole->add_option("--g", s_g)->required();
    cmd_systole->add_option("--eps", s_eps)->required();
    cmd_systole->add_option("--eps0", s_eps0, "largest admissible eps");

    // --- sep-bound
    auto* cmd_sep = app.add_subcommand("sep-bound", "separating-geodesic tail bounds");
    int sb_g = 4, sb_m = -1;
    double sb_len = 1.0;
    cmd_sep->add_option("--g", sb_g)->required();
    cmd_sep->add_option("--length", sb_len)->required();
    cmd_sep->add_option("--m", sb_m, "two-block bound with split m");

    // --- cache
    auto* cmd_cache = app.add_subcommand("cache", "persistent bracket cache");
    cmd_cache->require_subcommand(1);
    auto* cache_save_cmd = cmd_cache->add_subcommand("save");
    auto* cache_load_cmd = cmd_cache->add_subcommand("load");
    auto* cache_stats_cmd = cmd_cache->add_subcommand("stats");
    std::string cache_path;
    int cache_weight = 0;
    for (auto* c : {cache_save_cmd, cache_load_cmd, cache_stats_cmd})
        c->add_option("--path", cache_path, "cache file")->required();
    cache_save_cmd->add_option("--max-weight", cache_weight, "warm the sweep before saving");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (const char* env = std::getenv("WPVOL_CACHE")) {
            std::ifstream probe(env);
            if (probe.good()) cache_load(engine, env);
        }

        if (*cmd_bracket) {
            std::vector<int> d = parse_int_list(b_d);
            if (static_cast<int>(d.size()) != b_n) {
                std::cerr << "bracket: --n does not match the number of --d entries\n";
                return 2;
            }
            PiScalar v = engine.bracket(b_g, d);
            if (cmd_bracket->count("--float"))
                std::cout << to_float(v).str(resolve_float_digits(b_float)) << "\n";
            else
                std::cout << v.str() << "\n";
            return 0;
        }

        if (*cmd_volume) {
            VolumePolynomial vol(engine, v_g, v_n);
            if (cmd_volume->count("--at")) {
                std::vector<BigRational> at = parse_rational_list(v_at);
                if (static_cast<int>(at.size()) != v_n) {
                    std::cerr << "volume: --at needs exactly n lengths\n";
                    return 2;
                }
                std::vector<BigFloat> lengths;
                lengths.reserve(at.size());
                for (const auto& q : at) lengths.emplace_back(q, BigFloat::kDefaultPrec);
                std::cout << vol.evaluate(lengths).str(resolve_float_digits(v_float)) << "\n";
            } else {
                std::cout << vol.str() << "\n";
            }
            return 0;
        }

        if (*cmd_gv) {
            PiScalar v = genus_volume(engine, gv_g);
            if (cmd_gv->count("--float"))
                std::cout << to_float(v).str(resolve_float_digits(gv_float)) << "\n";
            else
                std::cout << v.str() << "\n";
            return 0;
        }

        if (*cmd_verify) {
            engine.ensure_weight(verify_weight + 1, threads);
            VerifyCounters vc = verify_oracle_and_invariants(engine, verify_weight);
            IdentityReport ii = sweep_recursion_II(engine, verify_weight);
            IdentityReport i = sweep_recursion_I(engine, verify_weight);
            bool oracle_pass = vc.oracle_defects == 0;
            bool inv_pass = vc.invariant_defects == 0;
            std::cout << "oracle-equivalence: " << vc.oracle_checked << " keys, "
                      << vc.oracle_defects << " defects ... " << (oracle_pass ? "PASS" : "FAIL")
                      << "\n";
            std::cout << ii.summary() << "\n";
            std::cout << i.summary() << "\n";
            std::cout << "homogeneity-positivity: " << vc.invariant_checked << " brackets, "
                      << vc.invariant_defects << " defects ... " << (inv_pass ? "PASS" : "FAIL")
                      << "\n";
            return (oracle_pass && inv_pass && ii.pass && i.pass) ? 0 : 1;
        }

        if (*cmd_ratios) {
            RatioReport rep = ratio_sweep(engine, r_which, r_maxg, r_n, r_k);
            if (r_format == "csv") {
                std::cout << "g,n,k,exact,float,deviation\n";
                for (const auto& row : rep.rows)
                    std::cout << row.g << "," << row.n << "," << row.k << "," << row.exact.str()
                              << "," << row.value.str(15) << "," << fmt_double(row.deviation)
                              << "\n";
            } else {
                nlohmann::json j;
                j["which"] = rep.which;
                j["sup_deviation"] = rep.sup_deviation;
                auto rows = nlohmann::json::array();
                for (const auto& row : rep.rows)
                    rows.push_back({{"g", row.g},
                                    {"n", row.n},
                                    {"k", row.k},
                                    {"exact", row.exact.str()},
                                    {"float", row.value.str(15)},
                                    {"deviation", row.deviation}});
                j["rows"] = rows;
                std::cout << j.dump(2) << "\n";
            }
            return 0;
        }

        if (*cmd_zograf) {
            if (z_format == "csv") std::cout << "g,n,log_F,ratio,log_deviation\n";
            nlohmann::json rows = nlohmann::json::array();
            for (int g = 2; g <= z_maxg; ++g) {
                ZografRow row = zograf_deviation(engine, g, z_n);
                if (z_format == "csv")
                    std::cout << row.g << "," << row.n << "," << row.log_F.str(15) << ","
                              << row.ratio.str(15) << "," << fmt_double(row.log_deviation)
                              << "\n";
                else
                    rows.push_back({{"g", row.g},
                                    {"n", row.n},
                                    {"log_F", row.log_F.str(15)},
                                    {"ratio", row.ratio.str(15)},
                                    {"log_deviation", row.log_deviation}});
            }
            if (z_format == "json") std::cout << rows.dump(2) << "\n";
            return 0;
        }

        if (*cmd_integrate) {
            std::ifstream in(i_cut);
            if (!in) {
                std::cerr << "integrate: cannot open " << i_cut << "\n";
                return 2;
            }
            std::stringstream buf;
            buf << in.rdbuf();
            CutDescription cut = cut_from_json_text(buf.str());
            WeightSpec w = WeightSpec::indicator(BigRational(1));
            if (i_weight == "indicator")
                w = WeightSpec::indicator(parse_rational(i_lambda));
            else if (i_weight == "monomial")
                w = WeightSpec::monomial(i_power, parse_rational(i_lambda));
            else if (i_weight == "reciprocal")
                w = WeightSpec::reciprocal(parse_rational(i_lambda));
            else if (i_weight == "exp")
                w = WeightSpec::exp_scaled(parse_rational(i_scale));
            else {
                std::vector<std::pair<BigRational, BigRational>> table;
                std::stringstream ts(i_table);
                std::string entry;
                while (std::getline(ts, entry, ',')) {
                    auto colon = entry.find(':');
                    if (colon == std::string::npos)
                        throw CLI::ValidationError("--table entries must be t:f");
                    table.emplace_back(parse_rational(entry.substr(0, colon)),
                                       parse_rational(entry.substr(colon + 1)));
                }
                w = WeightSpec::custom(std::move(table));
            }
            IntegrationMethod method = IntegrationMethod::automatic;
            if (i_method == "exact") method = IntegrationMethod::exact;
            if (i_method == "quadrature") method = IntegrationMethod::quadrature;
            IntegralResult res = integrate_f_gamma(engine, cut, w, method);
            std::cout << integral_result_to_json(res).dump(2) << "\n";
            return 0;
        }

        if (*cmd_systole) {
            BigRational eps = parse_rational(s_eps);
            ThinPartEstimate est = thin_part_estimate(engine, s_g, eps, parse_rational(s_eps0));
            BigFloat eps_f(eps, BigFloat::kDefaultPrec);
            std::cout << "g=" << s_g << " eps=" << rational_str(eps) << "\n";
            std::cout << "upper = " << est.upper.str(15) << "\n";
            std::cout << "upper/eps^2 = " << (est.upper / (eps_f * eps_f)).str(15) << "\n";
            std::cout << "lower (first-moment heuristic) = " << est.lower.str(15) << "\n";
            return 0;
        }

        if (*cmd_sep) {
            BigFloat L(sb_len, BigFloat::kDefaultPrec);
            if (cmd_sep->count("--m"))
                std::cout << multi_sep_bound(engine, sb_g, sb_m, L).str(15) << "\n";
            else
                std::cout << prob_sep_bound(engine, sb_g, L).str(15) << "\n";
            return 0;
        }

        if (*cache_save_cmd) {
            if (cache_weight > 0) engine.ensure_weight(cache_weight, threads);
            std::size_t n = cache_save(engine, cache_path);
            std::cout << "saved " << n << " records to " << cache_path << "\n";
            return 0;
        }
        if (*cache_load_cmd) {
            std::size_t n = cache_load(engine, cache_path);
            std::cout << "loaded " << n << " records from " << cache_path << "\n";
            return 0;
        }
        if (*cache_stats_cmd) {
            BracketEngine fresh;
            std::size_t n = cache_load(fresh, cache_path);
            std::map<long, std::size_t> by_level;
            for (const auto& [key, value] : fresh.snapshot()) ++by_level[key.level()];
            std::cout << "records: " << n << "\n";
            for (const auto& [lvl, cnt] : by_level)
                std::cout << "level " << lvl << ": " << cnt << "\n";
            std::ifstream in(cache_path, std::ios::binary);
            std::stringstream buf;
            buf << in.rdbuf();
            std::string text = buf.str();
            auto mark = text.rfind("#sha256:");
            if (mark != std::string::npos)
                std::cout << "checksum: " << text.substr(mark + 8, 64) << "\n";
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
