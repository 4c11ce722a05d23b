#include "qrf/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "qrf/errors.hpp"
#include "qrf/version.hpp"

namespace qrf {

namespace {

using ojson = nlohmann::ordered_json;

// ---- deterministic JSON writing --------------------------------------------
// nlohmann's dump() is already stable, but the report format pins the exact
// float rendering (17 significant digits, trailing ".0" on integral values),
// so the writer is spelled out here.

std::string format_double(double x) {
    if (!std::isfinite(x)) throw NumericError("non-finite number in JSON output");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

void escape_string(const std::string& s, std::string& out) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    out += '"';
}

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

void dump_json(const ojson& v, std::string& out, int depth, bool pretty) {
    switch (v.type()) {
        case ojson::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (const auto& [key, val] : v.items()) {
                if (!first) out += ',';
                first = false;
                if (pretty) {
                    out += '\n';
                    indent(out, depth + 1);
                }
                escape_string(key, out);
                out += pretty ? ": " : ":";
                dump_json(val, out, depth + 1, pretty);
            }
            if (pretty) {
                out += '\n';
                indent(out, depth);
            }
            out += '}';
            break;
        }
        case ojson::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            bool flat = true;
            for (const auto& el : v)
                if (el.is_structured()) flat = false;
            out += '[';
            bool first = true;
            for (const auto& el : v) {
                if (!first) out += pretty && flat ? ", " : ",";
                if (!first && pretty && !flat) out += '\n';
                if (first && pretty && !flat) out += '\n';
                if (pretty && !flat) indent(out, depth + 1);
                first = false;
                dump_json(el, out, depth + 1, pretty);
            }
            if (pretty && !flat) {
                out += '\n';
                indent(out, depth);
            }
            out += ']';
            break;
        }
        case ojson::value_t::string:
            escape_string(v.get_ref<const std::string&>(), out);
            break;
        case ojson::value_t::boolean:
            out += v.get<bool>() ? "true" : "false";
            break;
        case ojson::value_t::number_integer:
            out += std::to_string(v.get<std::int64_t>());
            break;
        case ojson::value_t::number_unsigned:
            out += std::to_string(v.get<std::uint64_t>());
            break;
        case ojson::value_t::number_float:
            out += format_double(v.get<double>());
            break;
        case ojson::value_t::null:
            out += "null";
            break;
        default:
            throw NumericError("unsupported JSON value type in writer");
    }
}

std::string dump_pretty(const ojson& v) {
    std::string out;
    dump_json(v, out, 0, true);
    out += '\n';
    return out;
}

std::string dump_compact(const ojson& v) {
    std::string out;
    dump_json(v, out, 0, false);
    return out;
}

// ---- strict parsing ---------------------------------------------------------

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw ConfigError(where.empty() ? what : where + ": " + what);
}

void reject_unknown(const ojson& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, val] : obj.items()) {
        (void)val;
        bool known = false;
        for (const char* a : allowed)
            if (key == a) known = true;
        if (!known) bad(where, "unknown key \"" + key + "\"");
    }
}

const ojson& get_object(const ojson& v, const std::string& where) {
    if (!v.is_object()) bad(where, "must be an object");
    return v;
}

const ojson& get_array(const ojson& v, const std::string& where) {
    if (!v.is_array()) bad(where, "must be an array");
    return v;
}

int get_int(const ojson& v, const std::string& where) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        bad(where, "must be an integer");
    return v.get<int>();
}

std::uint64_t get_u64(const ojson& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const auto x = v.get<std::int64_t>();
        if (x < 0) bad(where, "must be >= 0");
        return static_cast<std::uint64_t>(x);
    }
    bad(where, "must be an integer");
}

double get_number(const ojson& v, const std::string& where) {
    if (!v.is_number()) bad(where, "must be a number");
    return v.get<double>();
}

bool get_bool(const ojson& v, const std::string& where) {
    if (!v.is_boolean()) bad(where, "must be true or false");
    return v.get<bool>();
}

std::string get_string(const ojson& v, const std::string& where) {
    if (!v.is_string()) bad(where, "must be a string");
    return v.get<std::string>();
}

std::vector<int> get_int_vector(const ojson& v, const std::string& where) {
    get_array(v, where);
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(get_int(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

GroupKind kind_from_name(const std::string& name, const std::string& where) {
    if (name == "cyclic") return GroupKind::Cyclic;
    if (name == "dihedral") return GroupKind::Dihedral;
    if (name == "symmetric") return GroupKind::Symmetric;
    bad(where, "unknown group kind \"" + name +
                   "\" (known: cyclic, dihedral, symmetric)");
}

const char* kind_name(GroupKind k) {
    switch (k) {
        case GroupKind::Cyclic: return "cyclic";
        case GroupKind::Dihedral: return "dihedral";
        case GroupKind::Symmetric: return "symmetric";
    }
    return "";
}

std::vector<std::complex<double>> get_seed(const ojson& v, const std::string& where) {
    get_array(v, where);
    std::vector<std::complex<double>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        const ojson& pair = get_array(v[i], at);
        if (pair.size() != 2) bad(at, "must be a [re, im] pair");
        out.emplace_back(get_number(pair[0], at + "[0]"),
                         get_number(pair[1], at + "[1]"));
    }
    return out;
}

ojson spec_to_json(const ExperimentSpec& spec) {
    ojson j;
    {
        ojson g;
        g["kind"] = kind_name(spec.group.kind);
        g["n"] = spec.group.n;
        j["group"] = std::move(g);
    }
    {
        ojson frames = ojson::array();
        for (const auto& fc : spec.frames) {
            ojson f;
            f["ideal"] = fc.ideal;
            if (!fc.ideal) {
                f["mults"] = fc.mults;
                if (!fc.seed.empty()) {
                    ojson seed = ojson::array();
                    for (const auto& z : fc.seed)
                        seed.push_back(ojson::array({z.real(), z.imag()}));
                    f["seed"] = std::move(seed);
                }
                f["qrf_wellformed"] = fc.qrf_wellformed;
            }
            frames.push_back(std::move(f));
        }
        j["frames"] = std::move(frames);
    }
    {
        ojson s;
        s["regular"] = spec.system.regular;
        if (!spec.system.regular) s["mults"] = spec.system.mults;
        j["system"] = std::move(s);
    }
    j["trials"] = spec.trials;
    j["seed"] = spec.rng_seed;
    j["alphas"] = spec.alphas;
    j["tolerance"] = spec.tolerance;
    j["log_base"] = spec.log_base == LogBase::two ? "two" : "natural";
    {
        ojson checks = ojson::array();
        for (Check c : spec.checks) checks.push_back(check_name(c));
        j["checks"] = std::move(checks);
    }
    j["subset_cap"] = spec.subset_cap;
    if (spec.tradeoff_search) {
        ojson t;
        t["attempts"] = spec.tradeoff_search->attempts;
        t["expect_witness"] = spec.tradeoff_search->expect_witness;
        j["tradeoff_search"] = std::move(t);
    }
    return j;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// ---- presets ----------------------------------------------------------------

ExperimentSpec make_z2_ideal_pair() {
    ExperimentSpec s;
    s.group = {GroupKind::Cyclic, 2};
    s.frames = {FrameConfig{}, FrameConfig{}};
    s.trials = 50;
    s.checks = applicable_checks(s);
    return s;
}

ExperimentSpec make_z3_three_frames() {
    ExperimentSpec s;
    s.group = {GroupKind::Cyclic, 3};
    s.frames = {FrameConfig{}, FrameConfig{}, FrameConfig{}};
    s.trials = 20;
    s.checks = applicable_checks(s);
    return s;
}

ExperimentSpec make_s3_two_frames() {
    ExperimentSpec s;
    s.group = {GroupKind::Symmetric, 3};
    s.frames = {FrameConfig{}, FrameConfig{}};
    s.trials = 20;
    s.checks = applicable_checks(s);
    return s;
}

ExperimentSpec make_z2_nonideal_deff1() {
    ExperimentSpec s;
    s.group = {GroupKind::Cyclic, 2};
    FrameConfig truncated;
    truncated.ideal = false;
    truncated.mults = {1, 0}; // trivial sector only
    s.frames = {truncated, truncated};
    s.system.regular = false;
    s.system.mults = {2, 1};
    s.trials = 200;
    s.checks = {Check::Theorem3, Check::Povm};
    return s;
}

ExperimentSpec make_z3_tradeoff_violation() {
    ExperimentSpec s;
    s.group = {GroupKind::Cyclic, 3};
    FrameConfig nonideal;
    nonideal.ideal = false;
    nonideal.mults = {1, 1, 0}; // one charge sector missing
    s.frames = {nonideal, FrameConfig{}};
    s.trials = 50;
    s.checks = {Check::Theorem3, Check::Povm};
    s.tradeoff_search = TradeoffSearchConfig{200, true};
    return s;
}

ExperimentSpec make_zn_clock_cutoff() {
    ExperimentSpec s;
    s.group = {GroupKind::Cyclic, 8};
    FrameConfig clock;
    clock.ideal = false;
    clock.mults = {1, 1, 1, 0, 0, 0, 1, 1}; // charges |q| <= 2 out of Z8
    s.frames = {clock, clock};
    s.trials = 20;
    s.checks = {Check::Theorem3, Check::Povm};
    return s;
}

struct PresetDef {
    const char* name;
    const char* description;
    ExperimentSpec (*make)();
};

const std::vector<PresetDef>& presets() {
    static const std::vector<PresetDef> defs = {
        {"z2-ideal-pair",
         "Two ideal Z2 frames with a regular-representation system; every "
         "check enabled.",
         &make_z2_ideal_pair},
        {"z3-three-frames",
         "Three ideal Z3 frames plus a regular system; the multi-frame "
         "identities at kinematical dimension 81.",
         &make_z3_three_frames},
        {"s3-two-frames",
         "Two ideal S3 frames (smallest non-abelian group) with a regular "
         "system; every check enabled.",
         &make_s3_two_frames},
        {"z2-nonideal-deff1",
         "Two truncated Z2 frames with effective relational dimension 1: both "
         "observers are forced to assign the system the same entropy.",
         &make_z2_nonideal_deff1},
        {"z3-tradeoff-violation",
         "A non-ideal Z3 frame against an ideal one; searches for a state "
         "whose dephased reductions break the ideal-frame tradeoff identity.",
         &make_z3_tradeoff_violation},
        {"zn-clock-cutoff",
         "Z8 clock frames carrying only charges |q| <= 2; the entropy "
         "difference bound drops below log 8.",
         &make_zn_clock_cutoff},
    };
    return defs;
}

std::string summary_line(const CheckResult& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s  %-24s  max_residual=%.3e  tolerance=%.1e  trials=%d",
                  r.pass ? "PASS" : "FAIL", r.name.c_str(), r.max_residual,
                  r.tolerance, r.trials_run);
    std::string line(buf);
    if (r.trials_excluded > 0)
        line += "  excluded=" + std::to_string(r.trials_excluded);
    return line;
}

} // namespace

ExperimentSpec parse_config(const std::string& json_text) {
    ojson j;
    try {
        j = ojson::parse(json_text);
    } catch (const ojson::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    get_object(j, "config root");
    reject_unknown(j, "config root",
                   {"group", "frames", "system", "trials", "seed", "alphas",
                    "tolerance", "log_base", "checks", "subset_cap",
                    "tradeoff_search"});

    ExperimentSpec spec;

    if (!j.contains("group")) bad("config root", "missing required key \"group\"");
    {
        const ojson& g = get_object(j["group"], "group");
        reject_unknown(g, "group", {"kind", "n"});
        if (!g.contains("kind")) bad("group", "missing required key \"kind\"");
        if (!g.contains("n")) bad("group", "missing required key \"n\"");
        spec.group.kind = kind_from_name(get_string(g["kind"], "group.kind"), "group.kind");
        spec.group.n = get_int(g["n"], "group.n");
    }

    if (!j.contains("frames")) bad("config root", "missing required key \"frames\"");
    {
        const ojson& farr = get_array(j["frames"], "frames");
        spec.frames.clear();
        for (std::size_t i = 0; i < farr.size(); ++i) {
            const std::string where = "frames[" + std::to_string(i) + "]";
            const ojson& f = get_object(farr[i], where);
            reject_unknown(f, where, {"ideal", "mults", "seed", "qrf_wellformed"});
            FrameConfig fc;
            fc.ideal = f.contains("ideal") ? get_bool(f["ideal"], where + ".ideal")
                                           : !f.contains("mults");
            if (f.contains("mults"))
                fc.mults = get_int_vector(f["mults"], where + ".mults");
            if (f.contains("seed")) fc.seed = get_seed(f["seed"], where + ".seed");
            if (f.contains("qrf_wellformed"))
                fc.qrf_wellformed = get_bool(f["qrf_wellformed"], where + ".qrf_wellformed");
            spec.frames.push_back(std::move(fc));
        }
    }

    if (j.contains("system")) {
        const ojson& s = get_object(j["system"], "system");
        reject_unknown(s, "system", {"regular", "mults"});
        spec.system.regular = s.contains("regular")
                                  ? get_bool(s["regular"], "system.regular")
                                  : !s.contains("mults");
        if (s.contains("mults"))
            spec.system.mults = get_int_vector(s["mults"], "system.mults");
        if (spec.system.regular && !spec.system.mults.empty())
            bad("system", "a regular system takes no multiplicities");
    }

    if (j.contains("trials")) spec.trials = get_int(j["trials"], "trials");
    if (j.contains("seed")) spec.rng_seed = get_u64(j["seed"], "seed");
    if (j.contains("alphas")) {
        const ojson& a = get_array(j["alphas"], "alphas");
        spec.alphas.clear();
        for (std::size_t i = 0; i < a.size(); ++i)
            spec.alphas.push_back(
                get_number(a[i], "alphas[" + std::to_string(i) + "]"));
    }
    if (j.contains("tolerance"))
        spec.tolerance = get_number(j["tolerance"], "tolerance");
    if (j.contains("log_base")) {
        const std::string base = get_string(j["log_base"], "log_base");
        if (base == "natural")
            spec.log_base = LogBase::natural;
        else if (base == "two")
            spec.log_base = LogBase::two;
        else
            bad("log_base", "must be \"natural\" or \"two\"");
    }
    if (j.contains("subset_cap"))
        spec.subset_cap = get_int(j["subset_cap"], "subset_cap");

    if (j.contains("tradeoff_search")) {
        const ojson& t = get_object(j["tradeoff_search"], "tradeoff_search");
        reject_unknown(t, "tradeoff_search", {"attempts", "expect_witness"});
        TradeoffSearchConfig cfg;
        if (t.contains("attempts"))
            cfg.attempts = get_int(t["attempts"], "tradeoff_search.attempts");
        if (t.contains("expect_witness"))
            cfg.expect_witness =
                get_bool(t["expect_witness"], "tradeoff_search.expect_witness");
        spec.tradeoff_search = cfg;
    }

    if (j.contains("checks")) {
        const ojson& carr = get_array(j["checks"], "checks");
        spec.checks.clear();
        for (std::size_t i = 0; i < carr.size(); ++i) {
            const std::string where = "checks[" + std::to_string(i) + "]";
            const std::string name = get_string(carr[i], where);
            const auto c = check_from_name(name);
            if (!c) {
                std::string known;
                for (Check k : all_checks()) {
                    if (!known.empty()) known += ", ";
                    known += check_name(k);
                }
                bad(where, "unknown check \"" + name + "\" (known: " + known + ")");
            }
            spec.checks.push_back(*c);
        }
    } else {
        spec.checks = applicable_checks(spec);
    }

    validate_spec(spec);
    return spec;
}

ExperimentSpec load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_spec(const ExperimentSpec& spec) {
    return dump_pretty(spec_to_json(spec));
}

std::uint64_t spec_hash(const ExperimentSpec& spec) {
    return fnv1a64(dump_compact(spec_to_json(spec)));
}

std::string spec_hash_hex(const ExperimentSpec& spec) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(spec_hash(spec)));
    return buf;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : presets()) out.push_back(p.name);
    return out;
}

ExperimentSpec preset_spec(const std::string& name) {
    for (const auto& p : presets())
        if (name == p.name) return p.make();
    std::string known;
    for (const auto& p : presets()) {
        if (!known.empty()) known += ", ";
        known += p.name;
    }
    throw ConfigError("unknown preset \"" + name + "\" (known: " + known + ")");
}

std::string preset_description(const std::string& name) {
    for (const auto& p : presets())
        if (name == p.name) return p.description;
    throw ConfigError("unknown preset \"" + name + "\"");
}

std::string report_to_json(const InvariantReport& report) {
    ojson j;
    j["schema_version"] = kReportSchemaVersion;
    {
        ojson gen;
        gen["name"] = "qrf-lab";
        gen["version"] = kVersion;
        j["generator"] = std::move(gen);
    }
    j["spec"] = spec_to_json(report.spec);
    j["spec_hash"] = spec_hash_hex(report.spec);
    j["rng_seed"] = report.spec.rng_seed;
    j["all_pass"] = report.all_pass;
    {
        ojson checks = ojson::array();
        for (const auto& r : report.checks) {
            ojson c;
            c["name"] = r.name;
            c["pass"] = r.pass;
            c["max_residual"] = r.max_residual;
            c["tolerance"] = r.tolerance;
            c["trials_run"] = r.trials_run;
            c["trials_excluded"] = r.trials_excluded;
            ojson details;
            for (const auto& [key, value] : r.details) details[key] = value;
            c["details"] = std::move(details);
            c["columns"] = r.csv_columns;
            ojson rows = ojson::array();
            for (const auto& row : r.rows) rows.push_back(row);
            c["rows"] = std::move(rows);
            checks.push_back(std::move(c));
        }
        j["checks"] = std::move(checks);
    }
    if (report.tradeoff) {
        const auto& t = *report.tradeoff;
        ojson tj;
        tj["expected"] = t.expected;
        tj["found"] = t.found;
        tj["attempts_made"] = t.attempts_made;
        tj["attempts_excluded"] = t.attempts_excluded;
        tj["found_at"] = t.found_at;
        tj["gap"] = t.gap;
        tj["threshold"] = t.threshold;
        ojson amps = ojson::array();
        for (const auto& z : t.witness_amplitudes)
            amps.push_back(ojson::array({z.real(), z.imag()}));
        tj["witness_amplitudes"] = std::move(amps);
        tj["pass"] = t.pass;
        j["tradeoff_search"] = std::move(tj);
    }
    return dump_pretty(j);
}

void write_report_files(const InvariantReport& report, const RunOptions& opts) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(opts.out_dir, ec);
    if (ec)
        throw ConfigError("cannot create output directory \"" + opts.out_dir +
                          "\": " + ec.message());

    if (opts.write_json) {
        const fs::path path = fs::path(opts.out_dir) / "report.json";
        std::ofstream out(path, std::ios::binary);
        out << report_to_json(report);
        if (!out) throw ConfigError("cannot write \"" + path.string() + "\"");
    }
    if (opts.write_csv) {
        for (const auto& r : report.checks) {
            const fs::path path = fs::path(opts.out_dir) / (r.name + ".csv");
            std::ofstream out(path, std::ios::binary);
            for (std::size_t i = 0; i < r.csv_columns.size(); ++i)
                out << (i ? "," : "") << r.csv_columns[i];
            out << "\n";
            char buf[40];
            for (const auto& row : r.rows) {
                for (std::size_t i = 0; i < row.size(); ++i) {
                    std::snprintf(buf, sizeof buf, "%.17g", row[i]);
                    out << (i ? "," : "") << buf;
                }
                out << "\n";
            }
            if (!out) throw ConfigError("cannot write \"" + path.string() + "\"");
        }
    }
}

int run_experiment(ExperimentSpec spec, const RunOptions& opts, std::ostream& out) {
    if (opts.trials) spec.trials = *opts.trials;
    if (opts.seed) spec.rng_seed = *opts.seed;
    if (opts.tolerance) spec.tolerance = *opts.tolerance;
    validate_spec(spec);

    const InvariantReport report = run_checks(spec);
    write_report_files(report, opts);

    for (const auto& r : report.checks) out << summary_line(r) << "\n";
    if (report.tradeoff) {
        const auto& t = *report.tradeoff;
        char buf[160];
        if (t.found)
            std::snprintf(buf, sizeof buf,
                          "%s  tradeoff_search           witness at attempt %d, gap=%.6e",
                          t.pass ? "PASS" : "FAIL", t.found_at, t.gap);
        else
            std::snprintf(buf, sizeof buf,
                          "%s  tradeoff_search           no witness in %d attempts",
                          t.pass ? "PASS" : "FAIL", t.attempts_made);
        out << buf << "\n";
    }

    int failed = 0;
    for (const auto& r : report.checks) failed += r.pass ? 0 : 1;
    if (report.tradeoff && !report.tradeoff->pass) ++failed;
    if (failed == 0)
        out << "all checks passed";
    else
        out << failed << " check(s) failed";
    if (opts.write_json)
        out << "; report written to "
            << (std::filesystem::path(opts.out_dir) / "report.json").string();
    out << "\n";
    return report.all_pass ? 0 : 2;
}

} // namespace qrf
