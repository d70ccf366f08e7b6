// Command-line front end: parses a request, runs the library, and emits a
// deterministic report.
//
//   * JSON is the default format.  Keys are emitted sorted, no floating-point
//     numbers appear (enclosures are decimal strings produced by directed
//     rounding), and integers whose magnitude exceeds 2^53 are serialized as
//     decimal strings, so identical requests produce identical bytes.
//   * CSV is available for the tower table (`tower --format csv`).
//   * Exit codes: 0 success, 2 input/validation error, 3 internal-consistency
//     failure (including genus integrality violations and cross-check
//     mismatches).
//   * Configuration precedence: command-line flags, then DORMANT_-prefixed
//     environment variables, then a key-value config file given via --config
//     (INI style, one section per command).

#include "CLI11.hpp"
#include "json.hpp"

#include "dormant/heun.hpp"
#include "dormant/tower.hpp"

#include <array>
#include <cstdint>
#include <ctime>
#include <iostream>
#include <optional>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace {

using dormant::Int;
using dormant::Rat;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Small parsing helpers
// ---------------------------------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

Int parse_int(const std::string& s) {
    Int v;
    if (s.empty() || mpz_set_str(v.get_mpz_t(), s.c_str(), 10) != 0)
        throw dormant::ValidationError("not an integer: '" + s + "'");
    return v;
}

Rat parse_rat(const std::string& s) {
    Rat v;
    if (s.empty() || mpq_set_str(v.get_mpq_t(), s.c_str(), 10) != 0)
        throw dormant::ValidationError("not a rational (use a or a/b): '" + s + "'");
    if (v.get_den() == 0) throw dormant::ValidationError("zero denominator in '" + s + "'");
    v.canonicalize();
    return v;
}

// A comma-separated list of exactly four entries, or one entry broadcast.
template <typename T, typename Parse>
std::array<T, 4> parse_quad(const std::string& csv, const char* what, Parse parse) {
    std::vector<std::string> parts = split(csv, ',');
    if (parts.size() == 1) {
        T v = parse(parts[0]);
        return {v, v, v, v};
    }
    if (parts.size() != 4)
        throw dormant::ValidationError(std::string(what) + " needs 1 or 4 comma-separated values, got " +
                                       std::to_string(parts.size()));
    return {parse(parts[0]), parse(parts[1]), parse(parts[2]), parse(parts[3])};
}

std::array<int, 4> parse_signs(const std::string& csv) {
    auto one = [](const std::string& s) -> int {
        if (s == "1" || s == "+1" || s == "+") return 1;
        if (s == "-1" || s == "-") return -1;
        throw dormant::ValidationError("sign entries must be +1 or -1, got '" + s + "'");
    };
    auto q = parse_quad<int>(csv, "--signs", one);
    return q;
}

// ---------------------------------------------------------------------------
// JSON serialization policy
// ---------------------------------------------------------------------------

json json_int(const Int& v) {
    static const Int kLimit("9007199254740992"); // 2^53
    if (v > kLimit || v < -kLimit) return v.get_str();
    return static_cast<std::int64_t>(v.get_si());
}

json json_rat(const Rat& v) { return v.get_str(); }

json radii_json(const dormant::RadiiTuple4& r) {
    json reps = json::array();
    json idx = json::array();
    for (const auto& rho : r.rho) {
        reps.push_back(json_int(rho.rep));
        idx.push_back(json_int(dormant::delta_inv(rho).value));
    }
    return json{{"reps", reps}, {"indices", idx}};
}

json classes_json(const std::vector<dormant::RadiusClass>& v) {
    json out = json::array();
    for (const auto& c : v) out.push_back(json_int(c.rep));
    return out;
}

json spec_json(const dormant::PadicRadiusSpec& spec) {
    json out;
    out["p"] = json_int(spec.p);
    switch (spec.kind) {
        case dormant::PadicRadiusSpec::Kind::ConstantLambda: {
            out["kind"] = "constant";
            json l = json::array();
            for (const auto& v : spec.lambdas) l.push_back(json_int(v));
            out["labels"] = l;
            break;
        }
        case dormant::PadicRadiusSpec::Kind::Rational: {
            out["kind"] = "rational";
            json l = json::array();
            for (const auto& v : spec.values) l.push_back(json_rat(v));
            out["values"] = l;
            break;
        }
        case dormant::PadicRadiusSpec::Kind::DigitStream: {
            out["kind"] = "digits";
            json groups = json::array();
            for (const auto& d : spec.digits) {
                json g = json::array();
                for (unsigned dig : d) g.push_back(dig);
                groups.push_back(g);
            }
            out["digits"] = groups;
            break;
        }
    }
    return out;
}

void print_report(const json& request, const json& result,
                  const std::vector<std::string>& formulas, bool timestamps) {
    json doc;
    doc["request"] = request;
    doc["result"] = result;
    doc["provenance"] = json{{"formulas", formulas}};
    if (timestamps) {
        std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        doc["generated_at"] = buf;
    }
    std::cout << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Configuration file support
//
// Precedence is flags > DORMANT_* environment variables > config file.  CLI11
// applies config files before environment variables, the wrong way around for
// that contract, so the config file is merged manually after parsing: a value
// is taken from the file only when the option received nothing from the
// command line or the environment (option count == 0).
// ---------------------------------------------------------------------------

struct ConfigBinding {
    CLI::Option* opt;
    std::function<void(const std::string&)> set;
};
using ConfigMap = std::map<std::string, ConfigBinding>;        // option name → binding
using ConfigSections = std::map<std::string, ConfigMap>;       // command name → bindings

void bind_str(ConfigMap& cfg, const std::string& key, CLI::Option* opt, std::string& var) {
    cfg[key] = {opt, [&var](const std::string& v) { var = v; }};
}

template <typename T>
void bind_num(ConfigMap& cfg, const std::string& key, CLI::Option* opt, T& var) {
    cfg[key] = {opt, [&var, key](const std::string& v) {
                    Int x = parse_int(v);
                    if (x < 0 || !x.fits_slong_p())
                        throw dormant::ValidationError("config value for '" + key +
                                                       "' out of range: " + v);
                    var = static_cast<T>(x.get_ui());
                }};
}

void bind_long(ConfigMap& cfg, const std::string& key, CLI::Option* opt, long& var) {
    cfg[key] = {opt, [&var, key](const std::string& v) {
                    Int x = parse_int(v);
                    if (!x.fits_slong_p())
                        throw dormant::ValidationError("config value for '" + key +
                                                       "' out of range: " + v);
                    var = x.get_si();
                }};
}

void bind_flag(ConfigMap& cfg, const std::string& key, CLI::Option* opt, bool& var) {
    cfg[key] = {opt, [&var, key](const std::string& v) {
                    if (v == "true" || v == "1")
                        var = true;
                    else if (v == "false" || v == "0")
                        var = false;
                    else
                        throw dormant::ValidationError("config value for '" + key +
                                                       "' must be true/false: " + v);
                }};
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Minimal INI: [section] headers, key=value lines, # or ; comments, optional
// matching quotes around values (so radii=3,2,4,2 needs no quoting).
std::map<std::string, std::map<std::string, std::string>> read_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dormant::ValidationError("cannot open config file: " + path);
    std::map<std::string, std::map<std::string, std::string>> out;
    std::string line, section;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw dormant::ValidationError("config line is not key=value: '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (val.size() >= 2 && ((val.front() == '"' && val.back() == '"') ||
                                (val.front() == '\'' && val.back() == '\'')))
            val = val.substr(1, val.size() - 2);
        out[section][key] = val;
    }
    return out;
}

void apply_config(const std::string& path, const std::string& command, const ConfigMap& bindings) {
    auto ini = read_ini(path);
    auto apply = [&](const std::map<std::string, std::string>& kv, bool strict) {
        for (const auto& [key, val] : kv) {
            auto it = bindings.find(key);
            if (it == bindings.end()) {
                if (strict)
                    throw dormant::ValidationError("unknown config key '" + key +
                                                   "' in section [" + command + "]");
                continue; // unsectioned keys may target other commands
            }
            if (it->second.opt->count() == 0) it->second.set(val);
        }
    };
    auto sec = ini.find(command);
    if (sec != ini.end()) apply(sec->second, /*strict=*/true);
    auto top = ini.find("");
    if (top != ini.end()) apply(top->second, /*strict=*/false);
}

// ---------------------------------------------------------------------------
// Shared option bundles
// ---------------------------------------------------------------------------

struct RadiiOpts {
    std::string p_str;
    unsigned N = 1;
    std::string reps;
    std::string indices;
    long max_enum = dormant::kDefaultMaxEnum;
    std::string format = "json";
    bool timestamps = false;

    void attach(CLI::App* sc, ConfigMap& cfg, bool with_level = true) {
        bind_str(cfg, "prime",
                 sc->add_option("-p,--prime", p_str, "odd prime p")->envname("DORMANT_P"), p_str);
        if (with_level)
            bind_num(cfg, "level",
                     sc->add_option("-N,--level", N, "residue level N (default 1)")
                         ->envname("DORMANT_N"),
                     N);
        CLI::Option* radii_opt = sc->add_option(
            "--radii", reps, "radius classes as canonical unit representatives (a,b,c,d)");
        CLI::Option* index_opt = sc->add_option(
            "--radii-index", indices, "radius classes as delta-indices (labels) (a,b,c,d)");
        // The two spellings are alternatives: a config value for one is
        // ignored whenever the other arrived by flag or environment.
        cfg["radii"] = {radii_opt, [this, index_opt](const std::string& v) {
                            if (index_opt->count() == 0) reps = v;
                        }};
        cfg["radii-index"] = {index_opt, [this, radii_opt](const std::string& v) {
                                  if (radii_opt->count() == 0) indices = v;
                              }};
        bind_long(cfg, "max-enum",
                  sc->add_option("--max-enum", max_enum, "enumeration cutoff (default 1000000)")
                      ->envname("DORMANT_MAX_ENUM"),
                  max_enum);
        bind_str(cfg, "format",
                 sc->add_option("--format", format, "output format: json")->envname("DORMANT_FORMAT"),
                 format);
        sc->add_flag("--timestamps", timestamps, "embed a generation timestamp (breaks determinism)");
    }

    dormant::PrimeLevel ctx() const {
        if (p_str.empty())
            throw dormant::ValidationError("missing prime: give -p, DORMANT_P, or a config entry");
        return dormant::PrimeLevel(parse_int(p_str), N);
    }

    dormant::RadiiTuple4 radii(const dormant::PrimeLevel& c) const {
        if (reps.empty() == indices.empty())
            throw dormant::ValidationError("give exactly one of --radii and --radii-index");
        std::array<dormant::RadiusClass, 4> out{
            dormant::RadiusClass(c, 1), dormant::RadiusClass(c, 1), dormant::RadiusClass(c, 1),
            dormant::RadiusClass(c, 1)};
        if (!reps.empty()) {
            auto q = parse_quad<Int>(reps, "--radii", parse_int);
            for (size_t i = 0; i < 4; ++i) out[i] = dormant::RadiusClass(c, q[i]);
        } else {
            auto q = parse_quad<Int>(indices, "--radii-index", parse_int);
            for (size_t i = 0; i < 4; ++i) out[i] = dormant::delta(c, q[i]);
        }
        return dormant::RadiiTuple4(c, out);
    }

    void require_json() const {
        if (format != "json")
            throw dormant::ValidationError("format '" + format +
                                           "' is not available here (CSV is tower-only)");
    }

    json request_json(const char* command, const dormant::RadiiTuple4& r) const {
        json req;
        req["command"] = command;
        req["p"] = json_int(r.ctx.p);
        req["N"] = r.ctx.N;
        req["radii"] = radii_json(r);
        req["max_enum"] = max_enum;
        req["format"] = format;
        return req;
    }
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int run_csets(const RadiiOpts& opt) {
    opt.require_json();
    dormant::PrimeLevel ctx = opt.ctx();
    dormant::RadiiTuple4 r = opt.radii(ctx);
    dormant::CSetReport rep = dormant::csets_04(r, opt.max_enum);

    json result;
    result["radii"] = radii_json(r);
    result["counts"] = json{{"c0", json_int(rep.n0)},
                            {"c1", json_int(rep.n1)},
                            {"c_inf", json_int(rep.ninf)},
                            {"total", json_int(rep.total)}};
    result["lists_present"] = rep.lists_present;
    if (rep.lists_present) {
        result["c0"] = classes_json(rep.c0);
        result["c1"] = classes_json(rep.c1);
        result["c_inf"] = classes_json(rep.cinf);
    }
    print_report(opt.request_json("csets", r), result,
                 {"digit-window-membership", "delta-fold-coordinates"}, opt.timestamps);
    return 0;
}

int run_genus(const RadiiOpts& opt) {
    opt.require_json();
    dormant::PrimeLevel ctx = opt.ctx();
    dormant::RadiiTuple4 r = opt.radii(ctx);
    dormant::GenusReport rep = dormant::genus_04(r, opt.max_enum);

    json result;
    result["radii"] = radii_json(r);
    result["genus"] = json_int(rep.genus);
    result["genus_raw"] = json_rat(rep.genus_raw);
    result["degree"] = json_int(rep.degree);
    result["count_total"] = json_int(rep.cset.total);
    result["genus_upper"] = json_rat(rep.genus_upper);
    result["degree_upper"] = json_int(rep.degree_upper);
    result["critical_points_bound"] = json_rat(rep.crit_bound);
    result["simplified_applicable"] = rep.simplified_applicable;
    if (rep.simplified_applicable)
        result["genus_simplified"] = json_int(dormant::genus_04_simplified(r, opt.max_enum));
    result["pair_identity"] =
        rep.pair_identity_holds ? json(*rep.pair_identity_holds) : json(nullptr);
    print_report(opt.request_json("genus", r), result,
                 {"digit-window-membership", "genus-exact-rational-places",
                  "simplified-genus-gate", "pair-identity", "genus-degree-upper-bounds"},
                 opt.timestamps);
    return 0;
}

int run_degree(const RadiiOpts& opt) {
    opt.require_json();
    dormant::PrimeLevel ctx = opt.ctx();
    dormant::RadiiTuple4 r = opt.radii(ctx);
    dormant::CSetReport rep = dormant::csets_04(r, opt.max_enum);

    json result;
    result["radii"] = radii_json(r);
    result["degree"] = json_int(rep.n0);
    result["degree_upper"] = json_int(dormant::degree_upper_bound(ctx));
    result["count_total"] = json_int(rep.total);
    print_report(opt.request_json("degree", r), result,
                 {"digit-window-membership", "tri-equality-degree"}, opt.timestamps);
    return 0;
}

struct DsOpts {
    std::string p_str;
    unsigned N = 1;
    std::string s_str;
    std::string lambdas;
    bool timestamps = false;
};

int run_ds_check(const DsOpts& opt) {
    if (opt.p_str.empty())
        throw dormant::ValidationError("missing prime: give -p, DORMANT_P, or a config entry");
    if (opt.s_str.empty()) throw dormant::ValidationError("missing --slack");
    if (opt.lambdas.empty()) throw dormant::ValidationError("missing --lambdas");
    dormant::PrimeLevel ctx(parse_int(opt.p_str), opt.N);
    Int s = parse_int(opt.s_str);
    auto lam = parse_quad<Int>(opt.lambdas, "--lambdas", parse_int);
    bool member = dormant::dsn_membership(ctx, s, lam);

    json req;
    req["command"] = "ds-check";
    req["p"] = json_int(ctx.p);
    req["N"] = ctx.N;
    req["s"] = json_int(s);
    json lamj = json::array();
    for (const auto& v : lam) lamj.push_back(json_int(v));
    req["lambdas"] = lamj;

    json result;
    result["member"] = member;
    print_report(req, result, {"slack-digit-class"}, opt.timestamps);
    return 0;
}

struct TowerOpts {
    std::string p_str;
    std::string kind;
    std::string labels;
    std::string values;
    std::string digits;
    unsigned levels = 1;
    std::string alphas = "0,1/2,1";
    std::string s_str;
    unsigned precision = 128;
    long max_enum = dormant::kDefaultMaxEnum;
    std::string format = "json";
    bool timestamps = false;

    dormant::PadicRadiusSpec spec() const {
        if (p_str.empty())
            throw dormant::ValidationError("missing prime: give -p, DORMANT_P, or a config entry");
        if (kind.empty()) throw dormant::ValidationError("missing --kind (constant|rational|digits)");
        Int p = parse_int(p_str);
        if (kind == "constant") {
            if (labels.empty()) throw dormant::ValidationError("--kind constant needs --labels");
            return dormant::PadicRadiusSpec::constant_lambda(
                p, parse_quad<Int>(labels, "--labels", parse_int));
        }
        if (kind == "rational") {
            if (values.empty()) throw dormant::ValidationError("--kind rational needs --values");
            return dormant::PadicRadiusSpec::rational(
                p, parse_quad<Rat>(values, "--values", parse_rat));
        }
        if (kind == "digits") {
            if (digits.empty()) throw dormant::ValidationError("--kind digits needs --digits");
            auto one = [](const std::string& grp) {
                std::vector<unsigned> d;
                for (const std::string& tok : split(grp, '.')) {
                    Int v = parse_int(tok);
                    if (v < 0 || v > 1000000)
                        throw dormant::ValidationError("digit out of range: " + tok);
                    d.push_back(unsigned(v.get_ui()));
                }
                return d;
            };
            auto q = parse_quad<std::vector<unsigned>>(digits, "--digits", one);
            return dormant::PadicRadiusSpec::digit_stream(p, q);
        }
        throw dormant::ValidationError("--kind must be constant, rational, or digits; got '" +
                                       kind + "'");
    }
};

const char* tri_str(dormant::TriBool v) { return dormant::to_string(v); }

int run_tower(const TowerOpts& opt) {
    if (opt.format != "json" && opt.format != "csv")
        throw dormant::ValidationError("--format must be json or csv");
    if (opt.levels == 0) throw dormant::ValidationError("set --levels to at least 1");
    dormant::PadicRadiusSpec spec = opt.spec();
    std::vector<Rat> alphas;
    for (const std::string& tok : split(opt.alphas, ','))
        if (!tok.empty()) alphas.push_back(parse_rat(tok));

    dormant::TowerReport rep =
        dormant::tower_report(spec, opt.levels, alphas, mpfr_prec_t(opt.precision), opt.max_enum);

    std::optional<dormant::GoodnessCertificate> cert;
    if (!opt.s_str.empty()) {
        if (opt.format == "csv")
            throw dormant::ValidationError("certificate output requires --format json");
        cert.emplace(dormant::alpha_goodness_certificate(spec, parse_int(opt.s_str), opt.levels,
                                                         mpfr_prec_t(opt.precision),
                                                         opt.max_enum));
    }

    if (opt.format == "csv") {
        std::string header = "N,degree,count,genus,p_lower";
        for (const Rat& a : alphas)
            header += ",ratio_lo[" + a.get_str() + "],ratio_hi[" + a.get_str() + "]";
        std::cout << header << "\n";
        for (const auto& row : rep.rows) {
            std::string line = std::to_string(row.N) + "," + row.degree.get_str() + "," +
                               row.count.get_str() + "," + row.genus.get_str() + "," +
                               row.p_lower.get_str();
            for (const auto& cell : row.ratios) line += "," + cell.lo + "," + cell.hi;
            std::cout << line << "\n";
        }
        return 0;
    }

    json req;
    req["command"] = "tower";
    req["spec"] = spec_json(spec);
    req["levels"] = opt.levels;
    json aj = json::array();
    for (const Rat& a : alphas) aj.push_back(json_rat(a));
    req["alphas"] = aj;
    if (!opt.s_str.empty()) req["s"] = json_int(parse_int(opt.s_str));
    req["precision"] = opt.precision;
    req["max_enum"] = opt.max_enum;
    req["format"] = opt.format;

    json result;
    json rows = json::array();
    for (const auto& row : rep.rows) {
        json r;
        r["N"] = row.N;
        r["degree"] = json_int(row.degree);
        r["count"] = json_int(row.count);
        r["genus"] = json_int(row.genus);
        r["p_lower"] = json_int(row.p_lower);
        json cells = json::array();
        for (const auto& cell : row.ratios)
            cells.push_back(json{{"alpha", json_rat(cell.alpha)},
                                 {"infinite", cell.infinite},
                                 {"lo", cell.lo},
                                 {"hi", cell.hi}});
        r["ratios"] = cells;
        rows.push_back(r);
    }
    result["rows"] = rows;
    json verdicts = json::array();
    for (bool v : rep.alpha_verdicts) verdicts.push_back(v);
    result["alpha_trend_certified"] = verdicts;
    result["non_tower"] = rep.non_tower;
    result["delta_lower"] = rep.delta_lower ? json(json_rat(*rep.delta_lower)) : json(nullptr);
    result["failed_level"] = rep.failed_level ? json(*rep.failed_level) : json(nullptr);
    if (!rep.failure_reason.empty()) result["failure_reason"] = rep.failure_reason;

    if (cert) {
        json c;
        c["s"] = json_int(cert->s);
        json crows = json::array();
        for (const auto& row : cert->rows)
            crows.push_back(json{{"N", row.N},
                                 {"degree", json_int(row.degree)},
                                 {"count", json_int(row.count)},
                                 {"genus", json_int(row.genus)},
                                 {"bound_check", tri_str(row.bound_check)}});
        c["rows"] = crows;
        c["certified"] = cert->certified;
        c["failed_level"] = cert->failed_level ? json(*cert->failed_level) : json(nullptr);
        if (!cert->failure_reason.empty()) c["failure_reason"] = cert->failure_reason;
        result["certificate"] = c;
    }

    print_report(req, result,
                 {"genus-exact-rational-places", "growth-inequality-interval",
                  "slack-digit-class", "rational-place-floor"},
                 opt.timestamps);
    return 0;
}

struct HeunScanOpts {
    RadiiOpts base; // level forced to 1
    std::string t_list;
    std::string signs = "1,1,1,1";
    unsigned ext = 1;
};

int run_heun_scan(const HeunScanOpts& opt) {
    opt.base.require_json();
    if (opt.base.p_str.empty())
        throw dormant::ValidationError("missing prime: give -p, DORMANT_P, or a config entry");
    if (opt.t_list.empty()) throw dormant::ValidationError("missing --t");
    dormant::PrimeLevel ctx(parse_int(opt.base.p_str), 1);
    dormant::RadiiTuple4 r = opt.base.radii(ctx);
    std::array<int, 4> signs = parse_signs(opt.signs);
    if (opt.ext < 1 || opt.ext > 8)
        throw dormant::ValidationError("--ext must be between 1 and 8");
    Int cells = dormant::pow_int(ctx.p, opt.ext);
    if (cells > opt.base.max_enum)
        throw dormant::ValidationError("scan field size " + cells.get_str() +
                                       " exceeds --max-enum");
    dormant::FieldPtr F = dormant::make_field(ctx.p, opt.ext);

    json req = opt.base.request_json("heun-scan", r);
    req["t"] = json::array();
    for (const std::string& tok : split(opt.t_list, ','))
        req["t"].push_back(json_int(parse_int(tok)));
    json sj = json::array();
    for (int s : signs) sj.push_back(s);
    req["signs"] = sj;
    req["ext"] = opt.ext;

    json result;
    result["radii"] = radii_json(r);
    result["field"] = F->str();
    json per_t = json::array();
    for (const json& tj : req["t"]) {
        Int t = tj.is_string() ? parse_int(tj.get<std::string>()) : Int(tj.get<std::int64_t>());
        auto qs = dormant::scan_dormant_q(F, t, r, signs);
        json entry;
        entry["t"] = json_int(t);
        entry["scan_count"] = json(qs.size());
        json qv = json::array();
        for (const auto& q : qs) qv.push_back(q.str());
        entry["q_values"] = qv;
        entry["family_poly_degree"] =
            json_int(Int(long(dormant::dormancy_polynomial(t, r, signs).degree())));
        entry["distinct_invariants"] = json_int(dormant::count_dormant_opers(t, r));
        per_t.push_back(entry);
    }
    result["per_t"] = per_t;
    print_report(req, result, {"companion-p-curvature", "sign-family-polynomial"},
                 opt.base.timestamps);
    return 0;
}

int run_heun_validate(const RadiiOpts& opt) {
    opt.require_json();
    if (opt.p_str.empty())
        throw dormant::ValidationError("missing prime: give -p, DORMANT_P, or a config entry");
    dormant::PrimeLevel ctx(parse_int(opt.p_str), 1);
    dormant::RadiiTuple4 r = opt.radii(ctx);
    dormant::DormancyValidation v = dormant::validate_dormant_counts(r, opt.max_enum);

    json result;
    result["radii"] = radii_json(r);
    result["degree"] = json_int(v.degree);
    result["max_count"] = json_int(v.max_count);
    json per_t = json::array();
    for (const auto& [t, c] : v.per_t)
        per_t.push_back(json{{"t", json_int(t)}, {"count", json_int(c)}});
    result["per_t"] = per_t;
    result["verdict"] = v.match ? "match" : "mismatch";
    print_report(opt.request_json("heun-validate", r), result,
                 {"companion-p-curvature", "radical-degree-count", "digit-window-membership"},
                 opt.timestamps);
    return v.match ? 0 : 3;
}

struct SweepOpts {
    std::string p_str;
    unsigned N = 1;
    long samples = 500;
    bool exhaustive = false;
    std::uint64_t seed = 20250815;
    long max_enum = dormant::kDefaultMaxEnum;
    bool timestamps = false;
};

struct SweepStats {
    long checked = 0;
    long empty = 0;
    long violations_total = 0;
    json violations = json::array();
    std::map<std::string, long> by_check;
};

void sweep_violation(SweepStats& st, const std::array<Int, 4>& lam,
                     const dormant::RadiiTuple4& r, const std::string& check,
                     const std::string& detail) {
    ++st.violations_total;
    ++st.by_check[check];
    if (st.violations.size() < 50) {
        json labels = json::array();
        for (const auto& v : lam) labels.push_back(json_int(v));
        st.violations.push_back(
            json{{"labels", labels}, {"radii", radii_json(r)}, {"check", check},
                 {"detail", detail}});
    }
}

void sweep_one(SweepStats& st, const dormant::PrimeLevel& ctx, const std::array<Int, 4>& lam,
               long max_enum) {
    ++st.checked;
    std::array<dormant::RadiusClass, 4> rho{dormant::delta(ctx, lam[0]), dormant::delta(ctx, lam[1]),
                                            dormant::delta(ctx, lam[2]), dormant::delta(ctx, lam[3])};
    dormant::RadiiTuple4 r(ctx, rho);

    dormant::CSetReport cs = [&] {
        try {
            return dormant::csets_04(r, max_enum);
        } catch (const dormant::ConsistencyError& e) {
            sweep_violation(st, lam, r, "tri-equality", e.what());
            throw;
        }
    }();
    if (cs.total == 0) {
        ++st.empty;
        return;
    }

    // Digit-DP counts must agree with enumeration, pairing by pairing.
    if (cs.lists_present) {
        const std::array<std::array<Int, 4>, 3> pairings{
            std::array<Int, 4>{lam[0], lam[3], lam[1], lam[2]},
            std::array<Int, 4>{lam[0], lam[2], lam[1], lam[3]},
            std::array<Int, 4>{lam[0], lam[1], lam[2], lam[3]}};
        const std::array<Int, 3> counts{cs.n0, cs.n1, cs.ninf};
        for (size_t i = 0; i < 3; ++i) {
            Int dp = dormant::count_B04_dp(ctx, pairings[i]).count;
            if (dp != counts[i])
                sweep_violation(st, lam, r, "digit-dp-counts",
                                "dp " + dp.get_str() + " vs enumerated " + counts[i].get_str());
        }
    }

    try {
        dormant::GenusReport gr = dormant::genus_04(r, max_enum);
        if (gr.pair_identity_holds && !*gr.pair_identity_holds)
            sweep_violation(st, lam, r, "pair-identity", "nonzero on a hypothesis tuple");
    } catch (const dormant::IntegralityViolation& e) {
        sweep_violation(st, lam, r, "genus-integrality", e.what());
    } catch (const dormant::ConsistencyError& e) {
        sweep_violation(st, lam, r, "bounds", e.what());
    }
}

int run_sweep(const SweepOpts& opt) {
    if (opt.p_str.empty())
        throw dormant::ValidationError("missing prime: give -p, DORMANT_P, or a config entry");
    dormant::PrimeLevel ctx(parse_int(opt.p_str), opt.N);
    if (!ctx.pn.fits_slong_p())
        throw dormant::ValidationError("p^N too large to sweep");
    long label_max = long(ctx.label_max().get_si());
    long excluded_residue = long(Int((ctx.p - 1) / 2).get_si());
    long pl = long(ctx.p.get_si());

    std::vector<long> valid;
    for (long v = 0; v <= label_max; ++v)
        if (v % pl != excluded_residue) valid.push_back(v);

    SweepStats st;
    if (opt.exhaustive) {
        for (long a : valid)
            for (long b : valid)
                for (long c : valid)
                    for (long d : valid) {
                        std::array<Int, 4> lam{Int(a), Int(b), Int(c), Int(d)};
                        try {
                            sweep_one(st, ctx, lam, opt.max_enum);
                        } catch (const dormant::ConsistencyError&) {
                            // already recorded; keep sweeping
                        }
                    }
    } else {
        if (opt.samples < 1) throw dormant::ValidationError("--samples must be positive");
        std::mt19937_64 rng(opt.seed);
        auto draw = [&]() -> long { return valid[size_t(rng() % valid.size())]; };
        for (long i = 0; i < opt.samples; ++i) {
            std::array<Int, 4> lam{Int(draw()), Int(draw()), Int(draw()), Int(draw())};
            try {
                sweep_one(st, ctx, lam, opt.max_enum);
            } catch (const dormant::ConsistencyError&) {
            }
        }
    }

    json req;
    req["command"] = "sweep";
    req["p"] = json_int(ctx.p);
    req["N"] = ctx.N;
    req["exhaustive"] = opt.exhaustive;
    if (!opt.exhaustive) {
        req["samples"] = opt.samples;
        req["seed"] = opt.seed;
    }
    req["max_enum"] = opt.max_enum;

    json result;
    result["tuples_checked"] = st.checked;
    result["empty_tuples"] = st.empty;
    result["violations_total"] = st.violations_total;
    json by_check;
    for (const auto& [k, v] : st.by_check) by_check[k] = v;
    result["violations_by_check"] = by_check;
    result["violations"] = st.violations;
    print_report(req, result,
                 {"digit-window-membership", "tri-equality-degree",
                  "genus-exact-rational-places", "pair-identity",
                  "genus-degree-upper-bounds", "digit-dp-counts"},
                 opt.timestamps);
    return st.violations_total == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dormant (0,4) modular-curve invariants: enumeration, genus/degree formulas, "
                 "tower asymptotics, and a Heun p-curvature cross-validator"};
    app.require_subcommand(1);
    app.fallthrough(); // lets --config appear after the command name
    std::string config_path;
    app.add_option("--config", config_path,
                   "key-value configuration file (INI; one section per command)")
        ->envname("DORMANT_CONFIG");

    RadiiOpts csets_opt, genus_opt, degree_opt, validate_opt;
    DsOpts ds_opt;
    TowerOpts tower_opt;
    HeunScanOpts scan_opt;
    SweepOpts sweep_opt;
    ConfigSections cfg;

    csets_opt.attach(app.add_subcommand("csets", "enumerate the three classifying sets"),
                     cfg["csets"]);
    genus_opt.attach(app.add_subcommand("genus", "evaluate the exact genus formula"), cfg["genus"]);
    degree_opt.attach(app.add_subcommand("degree", "count one classifying set (the degree)"),
                      cfg["degree"]);

    CLI::App* ds = app.add_subcommand("ds-check", "slack-class membership of a label quadruple");
    {
        ConfigMap& m = cfg["ds-check"];
        bind_str(m, "prime", ds->add_option("-p,--prime", ds_opt.p_str, "odd prime p")
                                 ->envname("DORMANT_P"), ds_opt.p_str);
        bind_num(m, "level", ds->add_option("-N,--level", ds_opt.N, "residue level N (default 1)")
                                 ->envname("DORMANT_N"), ds_opt.N);
        bind_str(m, "slack", ds->add_option("-s,--slack", ds_opt.s_str, "slack parameter s"),
                 ds_opt.s_str);
        bind_str(m, "lambdas", ds->add_option("--lambdas", ds_opt.lambdas, "label quadruple (a,b,c,d)"),
                 ds_opt.lambdas);
        ds->add_flag("--timestamps", ds_opt.timestamps, "embed a generation timestamp");
    }

    CLI::App* tw = app.add_subcommand("tower", "levelwise tower table, ratios, and certificate");
    {
        ConfigMap& m = cfg["tower"];
        bind_str(m, "prime", tw->add_option("-p,--prime", tower_opt.p_str, "odd prime p")
                                 ->envname("DORMANT_P"), tower_opt.p_str);
        bind_str(m, "kind",
                 tw->add_option("--kind", tower_opt.kind, "spec kind: constant | rational | digits"),
                 tower_opt.kind);
        bind_str(m, "labels",
                 tw->add_option("--labels", tower_opt.labels, "constant spec: label quadruple"),
                 tower_opt.labels);
        bind_str(m, "values",
                 tw->add_option("--values", tower_opt.values, "rational spec: p-adic units a/b (1 or 4)"),
                 tower_opt.values);
        bind_str(m, "digits",
                 tw->add_option("--digits", tower_opt.digits,
                                "digit spec: dot-separated digit groups (1 or 4, comma-separated)"),
                 tower_opt.digits);
        bind_num(m, "levels", tw->add_option("--levels", tower_opt.levels, "number of levels N_max"),
                 tower_opt.levels);
        bind_str(m, "alphas",
                 tw->add_option("--alphas", tower_opt.alphas, "comma list of exponents (default 0,1/2,1)"),
                 tower_opt.alphas);
        bind_str(m, "slack",
                 tw->add_option("-s,--slack", tower_opt.s_str,
                                "also emit the slack-s goodness certificate"),
                 tower_opt.s_str);
        bind_num(m, "precision",
                 tw->add_option("--precision", tower_opt.precision,
                                "interval precision in bits (default 128)")
                     ->envname("DORMANT_PRECISION"),
                 tower_opt.precision);
        bind_long(m, "max-enum",
                  tw->add_option("--max-enum", tower_opt.max_enum, "enumeration cutoff")
                      ->envname("DORMANT_MAX_ENUM"),
                  tower_opt.max_enum);
        bind_str(m, "format", tw->add_option("--format", tower_opt.format, "json | csv")
                                  ->envname("DORMANT_FORMAT"), tower_opt.format);
        tw->add_flag("--timestamps", tower_opt.timestamps, "embed a generation timestamp");
    }

    CLI::App* hs = app.add_subcommand("heun-scan", "list dormant accessory parameters by direct "
                                                   "p-curvature scan");
    {
        ConfigMap& m = cfg["heun-scan"];
        scan_opt.base.attach(hs, m, /*with_level=*/false);
        bind_str(m, "t",
                 hs->add_option("-t,--t", scan_opt.t_list, "comma list of t values (mod p, not 0 or 1)"),
                 scan_opt.t_list);
        bind_str(m, "signs",
                 hs->add_option("--signs", scan_opt.signs, "sign family (four of +1/-1; default all +1)"),
                 scan_opt.signs);
        bind_num(m, "ext",
                 hs->add_option("--ext", scan_opt.ext, "scan over the degree-e extension field (default 1)"),
                 scan_opt.ext);
    }

    validate_opt.attach(
        app.add_subcommand("heun-validate",
                           "cross-validate the classifying-set degree against the dormant count"),
        cfg["heun-validate"], /*with_level=*/false);

    CLI::App* sw = app.add_subcommand("sweep", "run the invariant suite over many radii tuples");
    {
        ConfigMap& m = cfg["sweep"];
        bind_str(m, "prime", sw->add_option("-p,--prime", sweep_opt.p_str, "odd prime p")
                                 ->envname("DORMANT_P"), sweep_opt.p_str);
        bind_num(m, "level", sw->add_option("-N,--level", sweep_opt.N, "residue level N (default 1)")
                                 ->envname("DORMANT_N"), sweep_opt.N);
        bind_long(m, "samples",
                  sw->add_option("--samples", sweep_opt.samples, "number of random tuples (default 500)"),
                  sweep_opt.samples);
        bind_flag(m, "exhaustive",
                  sw->add_flag("--exhaustive", sweep_opt.exhaustive, "sweep every label tuple instead"),
                  sweep_opt.exhaustive);
        bind_num(m, "seed", sw->add_option("--seed", sweep_opt.seed, "RNG seed (default 20250815)")
                                ->envname("DORMANT_SEED"), sweep_opt.seed);
        bind_long(m, "max-enum",
                  sw->add_option("--max-enum", sweep_opt.max_enum, "enumeration cutoff")
                      ->envname("DORMANT_MAX_ENUM"),
                  sweep_opt.max_enum);
        sw->add_flag("--timestamps", sweep_opt.timestamps, "embed a generation timestamp");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!config_path.empty()) {
            CLI::App* active = app.get_subcommands().at(0);
            apply_config(config_path, active->get_name(), cfg[active->get_name()]);
        }
        if (app.got_subcommand("csets")) return run_csets(csets_opt);
        if (app.got_subcommand("genus")) return run_genus(genus_opt);
        if (app.got_subcommand("degree")) return run_degree(degree_opt);
        if (app.got_subcommand("ds-check")) return run_ds_check(ds_opt);
        if (app.got_subcommand("tower")) return run_tower(tower_opt);
        if (app.got_subcommand("heun-scan")) return run_heun_scan(scan_opt);
        if (app.got_subcommand("heun-validate")) return run_heun_validate(validate_opt);
        if (app.got_subcommand("sweep")) return run_sweep(sweep_opt);
    } catch (const dormant::ConsistencyError& e) {
        std::cerr << "consistency error: " << e.what() << "\n";
        return 3;
    } catch (const dormant::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
