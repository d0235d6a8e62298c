#include "tvreg/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tvreg/bandwidth.hpp"
#include "tvreg/kernels.hpp"
#include "tvreg/metrics.hpp"
#include "tvreg/rng.hpp"
#include "tvreg/simulate.hpp"

namespace tvreg::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- config

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw InvalidConfig(where + ": " + what);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!obj.is_object()) bad(where, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            bad(where, "unknown key '" + key + "'");
    }
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) bad(where, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(where, "expected a finite number");
    return d;
}

double positive(const json& v, const std::string& where) {
    const double d = number(v, where);
    if (!(d > 0.0)) bad(where, "must be positive");
    return d;
}

std::uint64_t unsigned_integer(const json& v, const std::string& where) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        bad(where, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::size_t count_at_least(const json& v, std::size_t lo, const std::string& where) {
    const std::uint64_t n = unsigned_integer(v, where);
    if (n < lo) bad(where, "must be at least " + std::to_string(lo));
    return static_cast<std::size_t>(n);
}

bool boolean(const json& v, const std::string& where) {
    if (!v.is_boolean()) bad(where, "expected true or false");
    return v.get<bool>();
}

template <typename F>
auto scalar_or_list(const json& v, const std::string& where, F&& item) {
    std::vector<decltype(item(v, where))> out;
    if (v.is_array()) {
        if (v.empty()) bad(where, "list is empty");
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(item(v[i], where + "[" + std::to_string(i) + "]"));
    } else {
        out.push_back(item(v, where));
    }
    return out;
}

std::vector<double> positive_list(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) bad(where, "expected a non-empty list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(positive(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<double> nonnegative_list(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) bad(where, "expected a non-empty list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = number(v[i], where + "[" + std::to_string(i) + "]");
        if (d < 0.0) bad(where, "values must be non-negative");
        out.push_back(d);
    }
    return out;
}

// A grid axis is a list of values or {"from", "to", "count"}.
std::vector<double> axis(const json& v, const std::string& where) {
    if (v.is_array()) {
        if (v.empty()) bad(where, "list is empty");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
        return out;
    }
    check_keys(v, {"from", "to", "count"}, where);
    if (!v.contains("from") || !v.contains("to") || !v.contains("count"))
        bad(where, "needs 'from', 'to' and 'count'");
    const double from = number(v["from"], where + ".from");
    const double to = number(v["to"], where + ".to");
    const std::size_t n = count_at_least(v["count"], 1, where + ".count");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = n == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

void parse_simulation(const json& s, RunConfig& c) {
    const std::string w = "simulation";
    check_keys(s, {"model", "sigma", "T", "seed", "replications", "burn_in"}, w);
    if (s.contains("model")) {
        c.models = scalar_or_list(s["model"], w + ".model", [](const json& v, const std::string& where) {
            if (!v.is_string()) bad(where, "expected \"a\", \"b\" or \"c\"");
            try {
                return model_name(model_by_name(v.get<std::string>()).label);
            } catch (const InvalidArgument&) {
                bad(where, "unknown model '" + v.get<std::string>() + "'");
            }
        });
    }
    if (s.contains("sigma")) c.sigmas = scalar_or_list(s["sigma"], w + ".sigma", positive);
    if (s.contains("T"))
        c.lengths = scalar_or_list(s["T"], w + ".T",
                                   [](const json& v, const std::string& where) { return count_at_least(v, 50, where); });
    if (s.contains("seed")) c.seed = unsigned_integer(s["seed"], w + ".seed");
    if (s.contains("replications")) c.replications = count_at_least(s["replications"], 1, w + ".replications");
    if (s.contains("burn_in")) c.burn_in = static_cast<std::size_t>(unsigned_integer(s["burn_in"], w + ".burn_in"));
}

void parse_bandwidth(const json& b, RunConfig& c) {
    const std::string w = "bandwidth";
    check_keys(b, {"h_star", "h_e", "factor", "h_star_candidates", "h_e_candidates", "cv_trim", "window"}, w);
    PipelineOptions& o = c.pipeline;
    if (b.contains("h_star")) o.h_star = positive(b["h_star"], w + ".h_star");
    if (b.contains("h_e")) o.h_e = positive(b["h_e"], w + ".h_e");
    if (b.contains("factor")) {
        o.factor = positive(b["factor"], w + ".factor");
        if (o.factor > 1.0) bad(w + ".factor", "must lie in (0, 1]");
    }
    if (b.contains("h_star_candidates")) o.h_star_candidates = positive_list(b["h_star_candidates"], w + ".h_star_candidates");
    if (b.contains("h_e_candidates")) o.h_e_candidates = positive_list(b["h_e_candidates"], w + ".h_e_candidates");
    if (b.contains("cv_trim")) {
        o.cv_trim = number(b["cv_trim"], w + ".cv_trim");
        if (o.cv_trim < 0.0 || o.cv_trim >= 0.5) bad(w + ".cv_trim", "must lie in [0, 0.5)");
    }
    if (b.contains("window")) {
        const json& win = b["window"];
        const std::string ww = w + ".window";
        check_keys(win, {"mode", "min_count", "widen_factor", "max_widen"}, ww);
        if (win.contains("mode")) {
            const json& m = win["mode"];
            if (m == "widen") o.window.mode = SparseWindow::Widen;
            else if (m == "fail") o.window.mode = SparseWindow::Fail;
            else bad(ww + ".mode", "expected \"widen\" or \"fail\"");
        }
        if (win.contains("min_count")) o.window.min_count = count_at_least(win["min_count"], 3, ww + ".min_count");
        if (win.contains("widen_factor")) {
            o.window.widen_factor = number(win["widen_factor"], ww + ".widen_factor");
            if (!(o.window.widen_factor > 1.0)) bad(ww + ".widen_factor", "must exceed 1");
        }
        if (win.contains("max_widen"))
            o.window.max_widen = static_cast<int>(std::min<std::uint64_t>(unsigned_integer(win["max_widen"], ww + ".max_widen"), 1000));
    }
}

void parse_tuning(const json& t, RunConfig& c) {
    const std::string w = "tuning";
    check_keys(t, {"lambda", "gamma", "grid_count", "shared"}, w);
    if (t.contains("lambda")) c.pipeline.lambda_grid = nonnegative_list(t["lambda"], w + ".lambda");
    if (t.contains("gamma")) c.pipeline.gamma_grid = nonnegative_list(t["gamma"], w + ".gamma");
    if (t.contains("grid_count")) c.grid_count = count_at_least(t["grid_count"], 1, w + ".grid_count");
    if (t.contains("shared")) c.pipeline.shared_tuning = boolean(t["shared"], w + ".shared");
}

void parse_order(const json& o, RunConfig& c) {
    check_keys(o, {"known", "max"}, "order");
    if (o.contains("known")) c.pipeline.known_order = count_at_least(o["known"], 1, "order.known");
    if (o.contains("max")) c.pipeline.max_order = count_at_least(o["max"], 1, "order.max");
}

void parse_replicate(const json& r, RunConfig& c) {
    check_keys(r, {"routes"}, "replicate");
    if (r.contains("routes")) {
        const json& routes = r["routes"];
        if (!routes.is_array() || routes.empty()) bad("replicate.routes", "expected a non-empty list");
        c.routes = {.known = false, .selection = false};
        for (const auto& v : routes) {
            if (v == "known") c.routes.known = true;
            else if (v == "selection") c.routes.selection = true;
            else bad("replicate.routes", "expected \"known\" or \"selection\"");
        }
    }
}

// ---------------------------------------------------------------- output

fs::path prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

std::string fixed(double v, int digits = 3) {
    if (!std::isfinite(v)) return "nan";
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

std::string join(const IndexSet& set) {
    std::string s;
    for (std::size_t i = 0; i < set.size(); ++i) s += (i ? ";" : "") + std::to_string(set[i]);
    return s;
}

json index_json(const IndexSet& set) {
    json a = json::array();
    for (std::size_t k : set) a.push_back(k);
    return a;
}

json number_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string stem(const std::string& model, double sigma, std::size_t T) {
    return "model-" + model + "_sigma-" + format_number(sigma) + "_T-" + std::to_string(T);
}

std::string replication_file(const std::string& model, double sigma, std::size_t T, std::size_t rep) {
    std::ostringstream s;
    s << stem(model, sigma, T) << "_rep-" << std::setw(4) << std::setfill('0') << rep + 1 << ".csv";
    return s.str();
}

SimulationConfig simulation_for(const RunConfig& c, const std::string& model, double sigma, std::size_t T) {
    SimulationConfig s;
    s.model = model_by_name(model);
    s.sigma = sigma;
    s.T = T;
    s.seed = c.seed;
    s.replications = c.replications;
    s.burn_in = c.burn_in;
    try {
        s.validate();
    } catch (const InvalidArgument& e) {
        throw InvalidConfig(std::string("simulation: ") + e.what());
    }
    return s;
}

TimeSeries dataset_of(const RunConfig& c) {
    if (c.dataset.empty()) throw InvalidConfig("no dataset given (positional argument or fit.dataset)");
    return read_dataset(fs::path(c.dataset));
}

std::vector<double> default_x_grid(const TimeSeries& data, std::size_t n = 21) {
    std::vector<double> xs = data.x();
    std::sort(xs.begin(), xs.end());
    const auto q = [&](double p) { return xs[static_cast<std::size_t>(p * static_cast<double>(xs.size() - 1))]; };
    const double lo = q(0.05), hi = q(0.95);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

std::vector<double> default_u_grid() {
    std::vector<double> out;
    for (int i = 1; i <= 19; ++i) out.push_back(0.05 * i);
    return out;
}

}  // namespace

// ---------------------------------------------------------------- public

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidConfig(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig c;
    check_keys(root, {"simulation", "bandwidth", "tuning", "order", "grid", "replicate", "fit", "output", "threads"},
               "config");
    if (root.contains("simulation")) parse_simulation(root["simulation"], c);
    if (root.contains("bandwidth")) parse_bandwidth(root["bandwidth"], c);
    if (root.contains("tuning")) parse_tuning(root["tuning"], c);
    if (root.contains("order")) parse_order(root["order"], c);
    if (root.contains("grid")) {
        check_keys(root["grid"], {"u", "x"}, "grid");
        if (root["grid"].contains("u")) c.u_grid = axis(root["grid"]["u"], "grid.u");
        if (root["grid"].contains("x")) c.x_grid = axis(root["grid"]["x"], "grid.x");
    }
    if (root.contains("replicate")) parse_replicate(root["replicate"], c);
    if (root.contains("fit")) {
        check_keys(root["fit"], {"dataset"}, "fit");
        if (root["fit"].contains("dataset")) {
            if (!root["fit"]["dataset"].is_string()) bad("fit.dataset", "expected a path string");
            c.dataset = root["fit"]["dataset"].get<std::string>();
        }
    }
    if (root.contains("output")) {
        check_keys(root["output"], {"dir"}, "output");
        if (root["output"].contains("dir")) {
            if (!root["output"]["dir"].is_string()) bad("output.dir", "expected a path string");
            c.out_dir = root["output"]["dir"].get<std::string>();
        }
    }
    if (root.contains("threads")) c.threads = static_cast<std::size_t>(unsigned_integer(root["threads"], "threads"));
    return c;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidConfig("cannot read config " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return parse_config(s.str());
}

PipelineOptions pipeline_options(const RunConfig& config, std::size_t T) {
    PipelineOptions o = config.pipeline;
    if (config.grid_count) {
        const auto grid = default_tuning_grid(T, *config.grid_count);
        if (o.lambda_grid.empty()) o.lambda_grid = grid;
        if (o.gamma_grid.empty()) o.gamma_grid = grid;
    }
    return o;
}

std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

TimeSeries read_dataset(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("dataset is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,x,y") throw DataError("dataset header must be 't,x,y', got '" + line + "'");
    std::vector<double> x, y;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        const std::string where = "dataset row " + std::to_string(row) + ": ";
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
            throw DataError(where + "expected three comma-separated fields");
        const char* b = line.data();
        std::size_t t = 0;
        auto rt = std::from_chars(b, b + c1, t);
        if (rt.ec != std::errc() || rt.ptr != b + c1) throw DataError(where + "t is not an integer");
        if (t != row) throw DataError(where + "t must run 1..T without gaps, got " + std::to_string(t));
        double xv = 0.0, yv = 0.0;
        auto rx = std::from_chars(b + c1 + 1, b + c2, xv);
        if (rx.ec != std::errc() || rx.ptr != b + c2 || !std::isfinite(xv)) throw DataError(where + "bad x value");
        auto ry = std::from_chars(b + c2 + 1, b + line.size(), yv);
        if (ry.ec != std::errc() || ry.ptr != b + line.size() || !std::isfinite(yv))
            throw DataError(where + "bad y value");
        x.push_back(xv);
        y.push_back(yv);
    }
    if (in.bad()) throw IoError("failed reading dataset");
    try {
        return TimeSeries(std::move(x), std::move(y));
    } catch (const InvalidArgument& e) {
        throw DataError(e.what());
    }
}

TimeSeries read_dataset(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset " + path.string());
    return read_dataset(in);
}

void write_dataset(std::ostream& out, const TimeSeries& data) {
    out << "t,x,y\n";
    for (std::size_t t = 1; t <= data.size(); ++t)
        out << t << ',' << format_number(data.x()[t - 1]) << ',' << format_number(data.y()[t - 1]) << '\n';
}

void cmd_simulate(const RunConfig& config, std::ostream& log) {
    const fs::path dir = prepare_dir(config.out_dir);
    std::ostringstream manifest;
    manifest << "rng_version=" << kRngVersion << "\nseed=" << config.seed << "\n";
    for (const auto& model : config.models) {
        for (double sigma : config.sigmas) {
            for (std::size_t T : config.lengths) {
                const SimulationConfig sim = simulation_for(config, model, sigma, T);
                manifest << "model=" << model << " sigma=" << format_number(sigma) << " T=" << T
                         << " replications=" << config.replications << " burn_in=" << config.burn_in << "\n";
                for (std::size_t r = 0; r < config.replications; ++r) {
                    const SimulatedDataset d = gen_dataset(sim, r);
                    const std::string name = replication_file(model, sigma, T, r);
                    std::ostringstream csv;
                    write_dataset(csv, d.series);
                    write_file(dir / name, csv.str());
                    manifest << "file=" << name << (d.explosive ? " explosive" : "") << "\n";
                }
            }
        }
    }
    write_file(dir / "manifest.txt", manifest.str());
    log << "wrote " << config.models.size() * config.sigmas.size() * config.lengths.size() * config.replications
        << " dataset(s) to " << dir.string() << "\n";
}

void cmd_fit(const RunConfig& config, std::ostream& log) {
    const TimeSeries data = dataset_of(config);
    const PipelineOptions options = pipeline_options(config, data.size());
    const PipelineResult result = run_pipeline(data, options);
    const StructureStage& st = result.structure;
    const BandwidthSet& bw = result.bandwidths;

    json report;
    report["T"] = data.size();
    report["bandwidths"] = {{"h", bw.h}, {"h_e", bw.h_e}, {"h_star", bw.h_star}};
    report["known_order"] = options.known_order ? json(*options.known_order) : json(nullptr);
    report["p0"] = st.p0;
    if (st.selection) {
        const UlassoSolution& s = *st.selection;
        report["lambda"] = s.lambda;
        report["gamma"] = s.gamma;
        report["S1"] = index_json(s.s1);
        report["S2"] = index_json(s.s2);
        report["df"] = s.df;
        report["rss"] = number_json(s.rss);
        report["bic"] = number_json(s.bic);
    } else {
        for (const char* k : {"lambda", "gamma", "S1", "S2", "df", "rss", "bic"}) report[k] = nullptr;
    }

    const std::vector<double> us = config.u_grid.empty() ? default_u_grid() : config.u_grid;
    const std::vector<double> xs = config.x_grid.empty() ? default_x_grid(data) : config.x_grid;
    const FitOptions pre_options{.window = options.window};
    const FitOptions ref_options{.response = result.whitened, .sample_start = st.p0 + 1, .window = options.window};
    std::vector<SurfaceFit> g_pre, g_ref;
    try {
        g_pre = fit_grid(data, us, xs, bw.h, options.kernel, pre_options);
        g_ref = fit_grid(data, us, xs, bw.h_star, options.kernel, ref_options);
    } catch (const Error& e) {
        throw PipelineError("grid", e.what());
    }
    report["grid"] = {{"u_points", us.size()}, {"x_points", xs.size()}};

    const fs::path dir = prepare_dir(config.out_dir);
    write_file(dir / "report.json", report.dump(2) + "\n");

    std::ostringstream phi;
    phi << "u";
    for (std::size_t k = 1; k <= st.path.p; ++k) phi << ",phi_" << k;
    for (std::size_t k = 1; k <= st.path.p; ++k) phi << ",dphi_scaled_" << k;
    phi << "\n";
    for (std::size_t g = 0; g < st.path.size(); ++g) {
        phi << format_number(st.path.grid[g]);
        const auto col = static_cast<Eigen::Index>(g);
        for (std::size_t k = 0; k < st.path.p; ++k) phi << ',' << format_number(st.path.phi(static_cast<Eigen::Index>(k), col));
        for (std::size_t k = 0; k < st.path.p; ++k)
            phi << ',' << format_number(st.path.dphi_scaled(static_cast<Eigen::Index>(k), col));
        phi << "\n";
    }
    write_file(dir / "phi_path.csv", phi.str());

    std::ostringstream grid;
    grid << "u,x,g_preliminary,g_refined\n";
    for (std::size_t i = 0; i < us.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const std::size_t n = i * xs.size() + j;
            grid << format_number(us[i]) << ',' << format_number(xs[j]) << ',' << format_number(g_pre[n].g) << ','
                 << format_number(g_ref[n].g) << "\n";
        }
    write_file(dir / "surface_grid.csv", grid.str());

    log << "h=" << format_number(bw.h) << " h_e=" << format_number(bw.h_e) << " h_star=" << format_number(bw.h_star)
        << " p0=" << st.p0;
    if (st.selection)
        log << " lambda=" << format_number(st.selection->lambda) << " gamma=" << format_number(st.selection->gamma)
            << " S1={" << join(st.selection->s1) << "} S2={" << join(st.selection->s2) << "}";
    log << "\nwrote report.json, phi_path.csv, surface_grid.csv to " << dir.string() << "\n";
}

void cmd_replicate(const RunConfig& config, std::ostream& log) {
    std::vector<ExperimentReport> reports;
    for (const auto& model : config.models)
        for (double sigma : config.sigmas)
            for (std::size_t T : config.lengths) {
                const SimulationConfig sim = simulation_for(config, model, sigma, T);
                reports.push_back(run_experiment(sim, pipeline_options(config, T), config.threads, config.routes));
                const ExperimentReport& r = reports.back();
                log << "model=" << model << " sigma=" << format_number(sigma) << " T=" << T << " failures=" << r.failures
                    << "/" << r.replications << "\n";
            }

    std::ostringstream rec;
    rec << "model,sigma,T,index,ok,h_star,h,h_e,h_e_selection,rase_preliminary,rase_refined,rase_oracle,"
           "rase_refined_selected,lambda,gamma,s1,s2,vs,vs_ci,constant_estimate,probe_pre_1,probe_pre_2,probe_pre_3,"
           "probe_ref_1,probe_ref_2,probe_ref_3,failure\n";
    for (const auto& r : reports) {
        for (const auto& x : r.records) {
            rec << r.model << ',' << format_number(r.sigma) << ',' << r.T << ',' << x.index << ',' << (x.ok ? 1 : 0);
            for (double v : {x.h_star, x.h, x.h_e, x.h_e_selection, x.rase_preliminary, x.rase_refined, x.rase_oracle,
                             x.rase_refined_selected, x.lambda, x.gamma})
                rec << ',' << format_number(v);
            rec << ',' << join(x.s1_hat) << ',' << join(x.s2_hat);
            rec << ',' << (x.has_selection ? to_string(x.selection.vs) : "") << ','
                << (x.has_selection ? to_string(x.selection.vs_ci) : "");
            rec << ',' << (x.constant_estimate ? format_number(*x.constant_estimate) : "");
            for (double v : x.probe_preliminary) rec << ',' << format_number(v);
            for (double v : x.probe_refined) rec << ',' << format_number(v);
            std::string failure = x.failure;
            std::replace(failure.begin(), failure.end(), ',', ';');
            std::replace(failure.begin(), failure.end(), '\n', ' ');
            rec << ',' << failure << "\n";
        }
    }

    std::ostringstream t1c, t1m, t2c, t2m, t3c, t3m;
    t1c << "model,sigma,T,pre_mean,pre_sd,refined_mean,refined_sd,oracle_mean,oracle_sd\n";
    t1m << "| Model | sigma | T | g mean | g SD | g* mean | g* SD | g_OR mean | g_OR SD |\n"
        << "|---|---|---|---|---|---|---|---|---|\n";
    t2c << "model,sigma,T,vs_under,vs_correct,vs_over,vsci_under,vsci_correct,vsci_over\n";
    t2m << "| Model | sigma | T | VS under | VS correct | VS over | VS&CI under | VS&CI correct | VS&CI over |\n"
        << "|---|---|---|---|---|---|---|---|---|\n";
    t3c << "model,sigma,T,phi1_mean,phi1_sd,phi2_mean,phi2_sd,constant_bias,constant_se,constant_count\n";
    t3m << "| Model | sigma | T | phi1 mean | phi1 SD | phi2 mean | phi2 SD | const bias | const SE |\n"
        << "|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : reports) {
        const std::string key = r.model + "," + format_number(r.sigma) + "," + std::to_string(r.T);
        const std::string mkey = "| (" + r.model + ") | " + format_number(r.sigma) + " | " + std::to_string(r.T) + " |";
        t1c << key;
        t1m << mkey;
        for (const Summary* s : {&r.preliminary, &r.refined, &r.oracle}) {
            t1c << ',' << format_number(s->mean) << ',' << format_number(s->sd);
            t1m << ' ' << fixed(s->mean) << " | " << fixed(s->sd) << " |";
        }
        t1c << "\n";
        t1m << "\n";
        t2c << key;
        t2m << mkey;
        for (const auto* a : {&r.vs, &r.vs_ci})
            for (double v : *a) {
                t2c << ',' << format_number(v);
                t2m << ' ' << fixed(v) << " |";
            }
        t2c << "\n";
        t2m << "\n";
        t3c << key;
        t3m << mkey;
        for (std::size_t k = 0; k < 2; ++k) {
            if (k < r.phi.size() && r.phi[k].count > 0) {
                t3c << ',' << format_number(r.phi[k].mean) << ',' << format_number(r.phi[k].sd);
                t3m << ' ' << fixed(r.phi[k].mean) << " | " << fixed(r.phi[k].sd) << " |";
            } else {
                t3c << ",,";
                t3m << " - | - |";
            }
        }
        if (r.constant_lag > 0 && r.constant_count > 0) {
            t3c << ',' << format_number(r.constant_bias) << ',' << format_number(r.constant_se) << ',' << r.constant_count;
            t3m << ' ' << fixed(r.constant_bias) << " | " << fixed(r.constant_se) << " |";
        } else {
            t3c << ",,," << r.constant_count;
            t3m << " - | - |";
        }
        t3c << "\n";
        t3m << "\n";
    }

    const fs::path dir = prepare_dir(config.out_dir);
    write_file(dir / "records.csv", rec.str());
    write_file(dir / "table1.csv", t1c.str());
    write_file(dir / "table1.md", t1m.str());
    write_file(dir / "table2.csv", t2c.str());
    write_file(dir / "table2.md", t2m.str());
    write_file(dir / "table3.csv", t3c.str());
    write_file(dir / "table3.md", t3m.str());
    log << "wrote records.csv and table1-3 to " << dir.string() << "\n";

    std::string failed;
    for (const auto& r : reports)
        if (static_cast<double>(r.failures) > 0.05 * static_cast<double>(r.replications))
            failed += " model=" + r.model + " sigma=" + format_number(r.sigma) + " T=" + std::to_string(r.T) + " (" +
                      std::to_string(r.failures) + "/" + std::to_string(r.replications) + ")";
    if (!failed.empty()) throw NumericalFailure("more than 5% of replications failed in:" + failed);
}

void cmd_bandwidth(const RunConfig& config, std::ostream& log) {
    const TimeSeries data = dataset_of(config);
    const PipelineOptions options = pipeline_options(config, data.size());
    const auto hs = options.h_star_candidates.empty() ? default_surface_candidates(data.size()) : options.h_star_candidates;
    std::vector<double> s_scores, e_scores;
    double h_star = 0.0, h_e = 0.0;
    std::vector<double> es;
    const std::size_t p = options.known_order.value_or(options.max_order);
    try {
        s_scores = loocv_surface_scores(data, hs, options.kernel, {.window = options.window}, options.cv_trim);
        h_star = hs[argmin_prefer_larger(hs, s_scores)];
        const double h = derive_set(h_star, 1.0, options.factor).h;
        const ResidualSeries pre = preliminary_fit(data, h, options.kernel, options.window);
        es = options.h_e_candidates.empty() ? default_tvar_candidates(data.size()) : options.h_e_candidates;
        e_scores = loocv_tvar_scores(pre.ehat, p, es, options.kernel);
        h_e = es[argmin_prefer_larger(es, e_scores)];
    } catch (const Error& e) {
        throw PipelineError("bandwidth", e.what());
    }
    std::ostringstream csv;
    csv << "stage,candidate,score\n";
    for (std::size_t i = 0; i < hs.size(); ++i) csv << "h_star," << format_number(hs[i]) << ',' << format_number(s_scores[i]) << "\n";
    for (std::size_t i = 0; i < es.size(); ++i) csv << "h_e," << format_number(es[i]) << ',' << format_number(e_scores[i]) << "\n";
    const fs::path dir = prepare_dir(config.out_dir);
    write_file(dir / "bandwidth.csv", csv.str());
    log << "h_star=" << format_number(h_star) << " h=" << format_number(options.factor * h_star)
        << " h_e=" << format_number(h_e) << " (p=" << p << ")\nwrote bandwidth.csv to " << dir.string() << "\n";
}

void cmd_moments(std::ostream& out) {
    const KernelMoments m = moments(epanechnikov);
    const json j = {{"kernel", "epanechnikov"}, {"mu2", m.mu2}, {"nu0", m.nu0}, {"nu1", m.nu1}, {"nu2", m.nu2}};
    out << j.dump(2) << "\n";
}

int exit_code(const std::exception& e) noexcept {
    if (dynamic_cast<const InvalidConfig*>(&e)) return 1;
    if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const IoError*>(&e)) return 2;
    return 3;
}

}  // namespace tvreg::cli
