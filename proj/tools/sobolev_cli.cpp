// Experiment driver: profile, constants, equivalence, hormander, mms, szero.
//
//   sobolev_cli <command> [--config FILE] [options]
//
// A config file holds key=value lines using the long option names; options on the
// command line override it. A `command=` line selects the subcommand when none is
// given. Exit codes: 0 ok, 1 internal, 2 usage, 3 schema (missing or invalid keys),
// 4 domain error, 5 non-convergence, 6 I/O.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sobolev.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace sobolev;

constexpr const char* schema_prefix = "sobolev-msq";
constexpr int schema_version = 1;

enum Exit { ok = 0, internal = 1, usage = 2, schema = 3, domain = 4, convergence = 5, io = 6 };

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A cell is a number, integer, string, boolean or empty.
using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

struct Report {
    std::string command;
    json config = json::object();
    json summary = json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_cell(const Cell& c) {
    struct {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double v) const { return fmt_double(v); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(const std::string& v) const {
            if (v.find_first_of(",\"\n") == std::string::npos) return v;
            std::string q = "\"";
            for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        }
        std::string operator()(bool v) const { return v ? "1" : "0"; }
    } vis;
    return std::visit(vis, c);
}

json json_cell(const Cell& c) {
    struct {
        json operator()(std::monostate) const { return nullptr; }
        json operator()(double v) const { return std::isfinite(v) ? json(v) : json(nullptr); }
        json operator()(long long v) const { return v; }
        json operator()(const std::string& v) const { return v; }
        json operator()(bool v) const { return v; }
    } vis;
    return std::visit(vis, c);
}

std::string echo_value(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return fmt_double(v.get<double>());
    if (v.is_array()) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + echo_value(v[i]);
        return s;
    }
    return v.dump();
}

std::string render(const Report& r, const std::string& format) {
    std::string id = std::string(schema_prefix) + "/" + r.command + "/" + std::to_string(schema_version);
    if (format == "json") {
        json out;
        out["schema"] = id;
        out["config"] = r.config;
        out["summary"] = r.summary;
        json rows = json::array();
        for (const auto& row : r.rows) {
            json o = json::object();
            for (std::size_t c = 0; c < r.columns.size(); ++c) o[r.columns[c]] = json_cell(row[c]);
            rows.push_back(std::move(o));
        }
        out["rows"] = std::move(rows);
        return out.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "# schema: " << id << "\n";
    for (const auto& [k, v] : r.config.items()) os << "# config " << k << "=" << echo_value(v) << "\n";
    for (const auto& [k, v] : r.summary.items()) os << "# summary " << k << "=" << echo_value(v) << "\n";
    for (std::size_t c = 0; c < r.columns.size(); ++c) os << (c ? "," : "") << r.columns[c];
    os << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
        os << "\n";
    }
    return os.str();
}

void emit(const std::string& text, const std::string& path) {
    if (path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_error("cannot open output file " + path);
    f << text;
    if (!f.flush()) throw io_error("failed writing " + path);
}

// Options shared by every subcommand.
struct Common {
    std::string out = "-";
    std::string format;
    std::uint64_t seed = 0;
    std::string config;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
    c.format = default_format;
    sub->add_option("--config", c.config, "key=value config file");
    sub->add_option("--out", c.out, "output path, - for stdout");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", c.seed, "random seed");
}

void echo_common(Report& r, const Common& c) {
    r.config["command"] = r.command;
    r.config["seed"] = c.seed;
    r.config["format"] = c.format;
}

BallMode parse_mode(const std::string& m) { return m == "direct" ? BallMode::direct : BallMode::spectral; }

GridSpec cube_grid(int dim, int size, double period) {
    return make_grid(dim, std::vector<int>(dim, size), std::vector<double>(dim, period));
}

int default_size(int dim) { return dim == 1 ? 256 : dim == 2 ? 64 : 24; }

std::vector<CorpusKind> parse_corpus(const std::vector<std::string>& names) {
    std::vector<CorpusKind> kinds;
    for (const auto& n : names) {
        if (n == "all") {
            kinds.insert(kinds.end(), {CorpusKind::single_mode, CorpusKind::band_limited, CorpusKind::gaussian_bump,
                                       CorpusKind::polynomial_window});
        } else if (n == "mode") kinds.push_back(CorpusKind::single_mode);
        else if (n == "band") kinds.push_back(CorpusKind::band_limited);
        else if (n == "bump") kinds.push_back(CorpusKind::gaussian_bump);
        else kinds.push_back(CorpusKind::polynomial_window);
    }
    return kinds;
}

// ---------------------------------------------------------------------------

struct ProfileArgs {
    Common c;
    int dim = 0;
    double tau_max = 20.0;
    int points = 201;
    std::optional<double> alpha;
};

Report run_profile(const ProfileArgs& a) {
    Report r{"profile"};
    echo_common(r, a.c);
    r.config["dim"] = a.dim;
    r.config["tau-max"] = a.tau_max;
    r.config["points"] = a.points;
    if (a.alpha) r.config["alpha"] = *a.alpha;
    detail::require(a.points >= 2 && a.tau_max > 0.0, "profile: need points >= 2 and tau-max > 0");
    r.columns = {"tau", "F", "F_minus_one"};
    std::optional<DeficitSpec> phi;
    if (a.alpha) {
        phi.emplace(a.dim, SmoothnessOrder(*a.alpha));
        r.columns.push_back("deficit");
    }
    for (int i = 0; i < a.points; ++i) {
        double tau = a.tau_max * i / (a.points - 1);
        std::vector<Cell> row{tau, ball_profile(a.dim, tau), ball_profile_minus_one(a.dim, tau)};
        if (phi) row.push_back((*phi)(tau));
        r.rows.push_back(std::move(row));
    }
    r.summary["dim"] = a.dim;
    return r;
}

struct ConstantsArgs {
    Common c;
    std::vector<int> dims;
    std::vector<double> alphas;
    double tol = 1e-8;
};

Report run_constants(const ConstantsArgs& a) {
    Report r{"constants"};
    echo_common(r, a.c);
    r.config["dim"] = a.dims;
    r.config["alpha"] = a.alphas;
    r.config["tol"] = a.tol;
    r.columns = {"dim", "alpha", "N", "I", "sqrt_I", "scheme_a", "scheme_b", "relative_difference", "tail", "cutoff",
                 "converged", "slope", "expected_slope"};
    bool all_converged = true;
    for (int d : a.dims)
        for (double al : a.alphas) {
            SmoothnessOrder o(al);
            auto res = constant_I(d, o, a.tol);
            all_converged = all_converged && res.converged;
            r.rows.push_back({(long long)d, al, (long long)o.N(), res.value, std::sqrt(res.value), res.scheme_a,
                              res.scheme_b, res.relative_difference, res.tail, res.cutoff, res.converged,
                              deficit_slope(d, al), double(2 * o.N() + 2)});
        }
    r.summary["entries"] = r.rows.size();
    r.summary["all_converged"] = all_converged;
    return r;
}

struct FieldExperimentArgs {
    Common c;
    int dim = 0;
    std::optional<double> alpha;
    double p = 2.0;
    int count = 20;
    int size = 0;
    double period = 2.0 * std::numbers::pi;
    std::vector<std::string> corpus{"all"};
    int kmax = 6;
    int scales = 512;
    std::string mode = "spectral";
    double t_lo = 1e-3;
    double t_hi = 1e3;
};

void echo_fields(Report& r, const FieldExperimentArgs& a, int size) {
    r.config["dim"] = a.dim;
    r.config["count"] = a.count;
    r.config["size"] = size;
    r.config["period"] = a.period;
    r.config["corpus"] = a.corpus;
    r.config["kmax"] = a.kmax;
    r.config["scales"] = a.scales;
    r.config["mode"] = a.mode;
    r.config["t-lo"] = a.t_lo;
    r.config["t-hi"] = a.t_hi;
}

void summarize_ratios(Report& r, const std::vector<double>& ratios) {
    double lo = *std::min_element(ratios.begin(), ratios.end()), hi = *std::max_element(ratios.begin(), ratios.end());
    r.summary["fields"] = ratios.size();
    r.summary["ratio_min"] = lo;
    r.summary["ratio_max"] = hi;
    r.summary["ratio_spread"] = hi / lo;
}

Report run_equivalence(const FieldExperimentArgs& a) {
    Report r{"equivalence"};
    int size = a.size ? a.size : default_size(a.dim);
    echo_common(r, a.c);
    r.config["alpha"] = *a.alpha;
    r.config["p"] = a.p;
    echo_fields(r, a, size);
    SmoothnessOrder order(*a.alpha, a.p);
    auto corpus = make_corpus(cube_grid(a.dim, size, a.period), a.count, a.c.seed, a.kmax, parse_corpus(a.corpus));
    r.columns = {"field_id", "kind", "norm_S", "norm_frac", "ratio", "predicted", "deviation", "truncation_warning"};
    std::vector<double> ratios;
    std::optional<double> predicted;
    for (const auto& e : corpus) {
        auto q = default_scale_quadrature(e.field, a.scales, a.t_lo, a.t_hi);
        auto rep = equivalence_report(e.field, order, q, parse_mode(a.mode));
        predicted = rep.predicted_ratio;
        ratios.push_back(rep.ratio);
        Cell pred, dev;
        if (rep.predicted_ratio) {
            pred = *rep.predicted_ratio;
            dev = rep.ratio / *rep.predicted_ratio - 1.0;
        }
        r.rows.push_back({e.id, std::string(corpus_kind_name(e.kind)), rep.norm_S, rep.norm_frac, rep.ratio, pred, dev,
                          rep.truncation_warning});
    }
    summarize_ratios(r, ratios);
    if (predicted) r.summary["predicted"] = *predicted;
    return r;
}

Report run_szero(const FieldExperimentArgs& a) {
    Report r{"szero"};
    int size = a.size ? a.size : default_size(a.dim);
    echo_common(r, a.c);
    echo_fields(r, a, size);
    auto corpus = make_corpus(cube_grid(a.dim, size, a.period), a.count, a.c.seed, a.kmax, parse_corpus(a.corpus));
    double predicted = std::sqrt(constant_S0(a.dim).value);
    r.columns = {"field_id", "kind", "norm_S0", "norm_f", "ratio", "predicted", "deviation", "truncation_warning"};
    std::vector<double> ratios;
    for (const auto& e : corpus) {
        // S_0 sees the mean-zero part only.
        ScalarField f = e.field;
        double mean = 0.0;
        for (double v : f.values) mean += v;
        mean /= static_cast<double>(f.values.size());
        for (double& v : f.values) v -= mean;
        auto q = default_scale_quadrature(f, a.scales, a.t_lo, a.t_hi);
        auto S = s0_square_function(f, q, parse_mode(a.mode));
        double nS = lp_norm(S.values, 2.0), nf = lp_norm(f, 2.0);
        ratios.push_back(nS / nf);
        r.rows.push_back({e.id, std::string(corpus_kind_name(e.kind)), nS, nf, nS / nf, predicted, nS / nf / predicted - 1.0,
                          S.truncation_warning});
    }
    summarize_ratios(r, ratios);
    r.summary["predicted"] = predicted;
    return r;
}

struct HormanderArgs {
    Common c;
    int dim = 0;
    std::optional<double> alpha;
    int samples = 500;
    int refinement = 1;
    int ascents = 4;
    double scale = 1.0;
};

Report run_hormander(const HormanderArgs& a) {
    Report r{"hormander"};
    echo_common(r, a.c);
    r.config["dim"] = a.dim;
    r.config["alpha"] = *a.alpha;
    r.config["samples"] = a.samples;
    r.config["refinement"] = a.refinement;
    r.config["ascents"] = a.ascents;
    r.config["scale"] = a.scale;
    auto rep = hormander_scan(a.dim, *a.alpha, a.samples, a.c.seed, a.refinement, a.scale, a.ascents);
    r.columns = {"index"};
    for (int d = 0; d < a.dim; ++d) r.columns.push_back("x" + std::to_string(d));
    for (int d = 0; d < a.dim; ++d) r.columns.push_back("y" + std::to_string(d));
    for (const char* c : {"norm", "bound", "ratio", "ascent"}) r.columns.push_back(c);
    for (std::size_t i = 0; i < rep.samples.size(); ++i) {
        const auto& s = rep.samples[i];
        std::vector<Cell> row{(long long)i};
        for (int d = 0; d < a.dim; ++d) row.push_back(s.x[d]);
        for (int d = 0; d < a.dim; ++d) row.push_back(s.y[d]);
        row.insert(row.end(), {s.norm, s.bound, s.ratio, s.ascent});
        r.rows.push_back(std::move(row));
    }
    r.summary["gamma"] = rep.gamma;
    r.summary["sup_ratio"] = rep.sup_ratio;
    r.summary["median_ratio"] = rep.median_ratio;
    r.summary["evaluations"] = rep.samples.size();
    return r;
}

struct MmsArgs {
    Common c;
    std::string points;
    std::string distances;
    std::optional<double> alpha;
    double p = 2.0;
    std::vector<double> period;
    int scales = 128;
    std::optional<double> t_min, t_max;
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') quoted = !quoted;
        else if (ch == ',' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') cur += ch;
    }
    out.push_back(cur);
    for (auto& s : out) s = CLI::detail::trim_copy(s);
    return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (CLI::detail::trim_copy(line).empty() || line[0] == '#') continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

double to_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    detail::require(used == s.size() && !s.empty(), "mms: cannot parse " + what + " value '" + s + "'");
    return v;
}

Report run_mms(const MmsArgs& a) {
    Report r{"mms"};
    echo_common(r, a.c);
    r.config["points"] = a.points;
    if (!a.distances.empty()) r.config["distances"] = a.distances;
    r.config["alpha"] = *a.alpha;
    r.config["p"] = a.p;
    if (!a.period.empty()) r.config["period"] = a.period;
    r.config["scales"] = a.scales;
    if (a.t_min) r.config["t-min"] = *a.t_min;
    if (a.t_max) r.config["t-max"] = *a.t_max;

    SmoothnessOrder order(*a.alpha, a.p);
    auto table = read_csv(a.points);
    detail::require(table.size() >= 2, "mms: point file needs a header and at least one row");
    const auto& header = table[0];
    std::map<std::string, std::size_t> col;
    for (std::size_t c = 0; c < header.size(); ++c) col[header[c]] = c;
    for (const char* need : {"id", "weight", "f"})
        detail::require(col.count(need), std::string("mms: point file lacks column '") + need + "'");
    int dim = 0;
    while (col.count("x" + std::to_string(dim))) ++dim;
    const int N = order.N();
    for (int j = 1; j <= N; ++j)
        detail::require(col.count("g" + std::to_string(j)), "mms: point file lacks correction column g" + std::to_string(j));

    std::vector<std::string> ids;
    std::vector<double> coords, weights, f;
    std::vector<std::vector<double>> gs(N);
    for (std::size_t i = 1; i < table.size(); ++i) {
        const auto& row = table[i];
        detail::require(row.size() == header.size(), "mms: row " + std::to_string(i) + " has the wrong column count");
        ids.push_back(row[col["id"]]);
        for (int d = 0; d < dim; ++d) coords.push_back(to_double(row[col["x" + std::to_string(d)]], "coordinate"));
        weights.push_back(to_double(row[col["weight"]], "weight"));
        f.push_back(to_double(row[col["f"]], "f"));
        for (int j = 1; j <= N; ++j) gs[j - 1].push_back(to_double(row[col["g" + std::to_string(j)]], "g"));
    }
    MetricMeasureSpace space;
    if (!a.distances.empty()) {
        auto dm = read_csv(a.distances);
        detail::require(dm.size() == ids.size(), "mms: distance matrix row count differs from the point count");
        std::vector<double> dist;
        for (const auto& row : dm) {
            detail::require(row.size() == ids.size(), "mms: distance matrix must be square");
            for (const auto& s : row) dist.push_back(to_double(s, "distance"));
        }
        space = build_space(std::move(dist), weights, ids);
    } else {
        detail::require(dim >= 1, "mms: need coordinate columns x0.. or a distance matrix");
        space = build_space_from_points(coords, dim, weights, a.period, ids);
    }
    ScaleQuadrature q = mms_default_quadrature(space, a.scales);
    if (a.t_min || a.t_max) q = make_scale_quadrature(a.t_min.value_or(q.t_min), a.t_max.value_or(q.t_max), a.scales);
    auto res = square_function_mms(space, f, gs, order, q);

    r.columns = {"id", "S"};
    double norm = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        r.rows.push_back({ids[i], res.S[i]});
        norm += space.weight(i) * std::pow(res.S[i], a.p);
    }
    r.summary["points"] = space.size();
    r.summary["diameter"] = space.diameter();
    r.summary["t_min"] = res.t_min;
    r.summary["t_max"] = res.t_max;
    r.summary["balls"] = res.balls;
    r.summary["singleton_balls"] = res.singleton_balls;
    r.summary["min_points"] = res.min_points;
    r.summary["mean_points"] = res.mean_points;
    r.summary["norm_S"] = std::pow(norm, 1.0 / a.p);
    return r;
}

// ---------------------------------------------------------------------------

const std::set<std::string> commands{"profile", "constants", "equivalence", "hormander", "mms", "szero"};

// Rebuilds argv with config-file entries inserted ahead of the command-line
// options; keys already given on the command line are skipped.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_file(path);
    } catch (const CLI::FileError& e) {
        throw io_error(e.what());
    }
    std::set<std::string> given;
    for (const auto& a : args)
        if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    std::vector<std::string> extra;
    std::string command;
    for (const auto& it : items) {
        std::string key = it.fullname();
        if (key == "command") {
            command = it.inputs.empty() ? "" : it.inputs.front();
            continue;
        }
        if (given.count(key)) continue;
        extra.push_back("--" + key);
        std::string joined;
        for (std::size_t i = 0; i < it.inputs.size(); ++i) joined += (i ? "," : "") + it.inputs[i];
        extra.push_back(joined);
    }
    std::vector<std::string> out;
    std::size_t start = 0;
    if (!args.empty() && commands.count(args[0])) {
        out.push_back(args[0]);
        start = 1;
    } else if (!command.empty()) {
        out.push_back(command);
    }
    out.insert(out.end(), extra.begin(), extra.end());
    out.insert(out.end(), args.begin() + start, args.end());
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Multiscale square functions and Sobolev norms: batch experiments"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    ProfileArgs pa;
    auto* profile = app.add_subcommand("profile", "tabulate the ball profile F(tau)");
    add_common(profile, pa.c, "csv");
    profile->add_option("--dim", pa.dim, "dimension")->required()->check(CLI::Range(1, 3));
    profile->add_option("--tau-max", pa.tau_max, "largest tau");
    profile->add_option("--points", pa.points, "number of tau samples");
    profile->add_option("--alpha", pa.alpha, "also tabulate the deficit for this alpha");

    ConstantsArgs ca;
    auto* constants = app.add_subcommand("constants", "equivalence constants I(alpha, n)");
    add_common(constants, ca.c, "json");
    constants->add_option("--dim", ca.dims, "dimensions")->required()->delimiter(',')->check(CLI::Range(1, 3));
    constants->add_option("--alpha", ca.alphas, "smoothness orders")->required()->delimiter(',');
    constants->add_option("--tol", ca.tol, "two-scheme tolerance");

    FieldExperimentArgs ea;
    auto* equivalence = app.add_subcommand("equivalence", "norm ratio experiment over a field corpus");
    FieldExperimentArgs za;
    auto* szero = app.add_subcommand("szero", "zero-smoothness square function experiment");
    for (auto [sub, args] : {std::pair{equivalence, &ea}, std::pair{szero, &za}}) {
        add_common(sub, args->c, "csv");
        sub->add_option("--dim", args->dim, "dimension")->required()->check(CLI::Range(1, 3));
        sub->add_option("--count", args->count, "number of corpus fields")->check(CLI::PositiveNumber);
        sub->add_option("--size", args->size, "points per axis");
        sub->add_option("--period", args->period, "torus period")->check(CLI::PositiveNumber);
        sub->add_option("--corpus", args->corpus, "families: all, mode, band, bump, window")
            ->delimiter(',')
            ->check(CLI::IsMember({"all", "mode", "band", "bump", "window"}));
        sub->add_option("--kmax", args->kmax, "band limit of random fields")->check(CLI::PositiveNumber);
        sub->add_option("--scales", args->scales, "number of scale nodes");
        sub->add_option("--mode", args->mode, "spectral or direct")->check(CLI::IsMember({"spectral", "direct"}));
        sub->add_option("--t-lo", args->t_lo, "t_min * xi_max");
        sub->add_option("--t-hi", args->t_hi, "t_max * xi_min");
    }
    equivalence->add_option("--alpha", ea.alpha, "smoothness order")->required();
    equivalence->add_option("--p", ea.p, "Lebesgue exponent");

    HormanderArgs ha;
    auto* hormander = app.add_subcommand("hormander", "kernel-difference scan");
    add_common(hormander, ha.c, "json");
    hormander->add_option("--dim", ha.dim, "dimension")->required()->check(CLI::Range(1, 3));
    hormander->add_option("--alpha", ha.alpha, "smoothness order")->required();
    hormander->add_option("--samples", ha.samples, "random pairs");
    hormander->add_option("--refinement", ha.refinement, "scale quadrature refinement");
    hormander->add_option("--ascents", ha.ascents, "local ascents from the largest ratios");
    hormander->add_option("--scale", ha.scale, "dilation of every sampled pair");

    MmsArgs ma;
    auto* mms = app.add_subcommand("mms", "square function on a point cloud");
    add_common(mms, ma.c, "csv");
    mms->add_option("--points", ma.points, "CSV: id, x0.., weight, f, g1..")->required();
    mms->add_option("--distances", ma.distances, "optional CSV distance matrix");
    mms->add_option("--alpha", ma.alpha, "smoothness order")->required();
    mms->add_option("--p", ma.p, "exponent of the reported norm");
    mms->add_option("--period", ma.period, "torus period per axis")->delimiter(',');
    mms->add_option("--scales", ma.scales, "number of scale nodes");
    mms->add_option("--t-min", ma.t_min, "smallest scale");
    mms->add_option("--t-max", ma.t_max, "largest scale");

    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(std::move(args));
    bool known_command = !args.empty() && commands.count(args[0]);
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return known_command ? Exit::schema : Exit::usage;
    }

    Report rep;
    const Common* c = nullptr;
    if (*profile) rep = run_profile(pa), c = &pa.c;
    else if (*constants) rep = run_constants(ca), c = &ca.c;
    else if (*equivalence) rep = run_equivalence(ea), c = &ea.c;
    else if (*szero) rep = run_szero(za), c = &za.c;
    else if (*hormander) rep = run_hormander(ha), c = &ha.c;
    else rep = run_mms(ma), c = &ma.c;
    emit(render(rep, c->format), c->out);
    return Exit::ok;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::io;
    } catch (const sobolev::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::domain;
    } catch (const sobolev::convergence_error& e) {
        std::cerr << "error: " << e.what() << " (partial " << e.partial_value << ", achieved " << e.achieved_error
                  << ")\n";
        return Exit::convergence;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return Exit::internal;
    }
}
