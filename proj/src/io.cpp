#include "bitmarket/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "bitmarket/observables.hpp"

namespace bitmarket::io {

namespace {

using nlohmann::json;

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

long parse_long(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size())
        throw std::invalid_argument(key + ": not an integer: '" + value + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || (!value.empty() && value[0] == '-'))
        throw std::invalid_argument(key + ": not an unsigned integer: '" + value + "'");
    return v;
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size())
        throw std::invalid_argument(key + ": not a number: '" + value + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Applies every key=value line of `text` through `apply`.
template <typename Target>
void parse_key_value_text(const std::string& text, Target& target) {
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(lineno) +
                                        ": expected key=value, got '" + line + "'");
        apply_key(target, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

kernels::Backend backend_from_name(const std::string& name) {
    if (name == "serial") return kernels::Backend::serial;
    if (name == "openmp") return kernels::Backend::openmp;
    throw std::invalid_argument("backend must be 'serial' or 'openmp', got '" + name + "'");
}

const char* backend_name(kernels::Backend b) {
    return b == kernels::Backend::openmp ? "openmp" : "serial";
}

SimConfig config_from_json(const json& j) {
    SimConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "k") cfg.k = value.get<int>();
        else if (key == "theta") cfg.theta = value.get<double>();
        else if (key == "a_c") cfg.a_c = value.get<double>();
        else if (key == "a_p") cfg.a_p = value.get<double>();
        else if (key == "N_p") cfg.n_producers = value.get<int>();
        else if (key == "N_c") cfg.n_consumers = value.get<int>();
        else if (key == "C_p") cfg.producer_capital = value.get<double>();
        else if (key == "S_0") cfg.initial_satisfaction = value.get<double>();
        else if (key == "steps") cfg.steps = value.get<long>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
    return cfg;
}

json config_to_json(const SimConfig& cfg) {
    return json{{"k", cfg.k},
                {"theta", cfg.theta},
                {"a_c", cfg.a_c},
                {"a_p", cfg.a_p},
                {"N_p", cfg.n_producers},
                {"N_c", cfg.n_consumers},
                {"C_p", cfg.producer_capital},
                {"S_0", cfg.initial_satisfaction},
                {"steps", cfg.steps},
                {"seed", cfg.seed}};
}

RunOptions options_from_json(const json& j) {
    RunOptions opts;
    for (const auto& [key, value] : j.items()) {
        if (key == "backend") opts.backend = backend_from_name(value.get<std::string>());
        else if (key == "record_customer_maps") opts.record_customer_maps = value.get<bool>();
        else if (key == "hist_stride") opts.hist_stride = value.get<int>();
        else if (key == "track_basins") opts.track_basins = value.get<bool>();
        else if (key == "track_radius") opts.track_radius = value.get<int>();
        else if (key == "track_random_sites") opts.track_random_sites = value.get<int>();
        else if (key == "log_every") opts.log_every = value.get<int>();
        else throw std::invalid_argument("unknown options key '" + key + "'");
    }
    return opts;
}

json options_to_json(const RunOptions& opts) {
    return json{{"backend", backend_name(opts.backend)},
                {"record_customer_maps", opts.record_customer_maps},
                {"hist_stride", opts.hist_stride},
                {"track_basins", opts.track_basins},
                {"track_radius", opts.track_radius},
                {"track_random_sites", opts.track_random_sites},
                {"log_every", opts.log_every}};
}

class OutFile {
public:
    explicit OutFile(const std::filesystem::path& path)
        : path_(path), out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
    }
    ~OutFile() {
        try {
            close_check();
        } catch (...) {
            // errors surface through the explicit close_check() calls;
            // never throw out of a destructor
        }
    }
    template <typename T>
    OutFile& operator<<(const T& v) {
        out_ << v;
        return *this;
    }
    void close_check() {
        if (closed_) return;
        closed_ = true;
        out_.flush();
        if (!out_) throw std::runtime_error("write failed: " + path_.string());
        out_.close();
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    bool closed_ = false;
};

}  // namespace

std::string fmt_g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void apply_key(SimConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "k") cfg.k = static_cast<int>(parse_long(key, value));
    else if (key == "theta") cfg.theta = parse_double(key, value);
    else if (key == "a_c") cfg.a_c = parse_double(key, value);
    else if (key == "a_p") cfg.a_p = parse_double(key, value);
    else if (key == "N_p") cfg.n_producers = static_cast<int>(parse_long(key, value));
    else if (key == "N_c") cfg.n_consumers = static_cast<int>(parse_long(key, value));
    else if (key == "C_p") cfg.producer_capital = parse_double(key, value);
    else if (key == "S_0") cfg.initial_satisfaction = parse_double(key, value);
    else if (key == "steps") cfg.steps = parse_long(key, value);
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

void apply_key(SweepSpec& spec, const std::string& key, const std::string& value) {
    if (key == "Np_grid") {
        spec.np_grid.clear();
        for (const auto& item : split_list(value))
            spec.np_grid.push_back(static_cast<int>(parse_long(key, item)));
    } else if (key == "ac_values") {
        spec.ac_values.clear();
        for (const auto& item : split_list(value))
            spec.ac_values.push_back(parse_double(key, item));
    } else if (key == "theta_values") {
        spec.theta_values.clear();
        for (const auto& item : split_list(value))
            spec.theta_values.push_back(parse_double(key, item));
    } else if (key == "n_seeds") {
        spec.n_seeds = static_cast<int>(parse_long(key, value));
    } else if (key == "seed_base") {
        spec.seed_base = parse_u64(key, value);
    } else {
        apply_key(spec.base, key, value);
    }
}

LoadedRun parse_run_config(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    LoadedRun loaded;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j = json::parse(text);
        loaded.config = config_from_json(j.at("config"));
        if (j.contains("options")) {
            loaded.options = options_from_json(j.at("options"));
            loaded.has_options = true;
        }
    } else {
        parse_key_value_text(text, loaded.config);
    }
    validate(loaded.config);
    return loaded;
}

SweepSpec parse_sweep_spec(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    SweepSpec spec;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j = json::parse(text);
        spec.base = config_from_json(j.at("base"));
        spec.np_grid = j.at("Np_grid").get<std::vector<int>>();
        spec.ac_values = j.at("ac_values").get<std::vector<double>>();
        spec.theta_values = j.at("theta_values").get<std::vector<double>>();
        spec.n_seeds = j.at("n_seeds").get<int>();
        spec.seed_base = j.at("seed_base").get<std::uint64_t>();
    } else {
        parse_key_value_text(text, spec);
    }
    validate(spec);
    return spec;
}

std::string to_key_value(const SimConfig& cfg) {
    std::ostringstream out;
    out << "k = " << cfg.k << "\n"
        << "theta = " << fmt_full(cfg.theta) << "\n"
        << "a_c = " << fmt_full(cfg.a_c) << "\n"
        << "a_p = " << fmt_full(cfg.a_p) << "\n"
        << "N_p = " << cfg.n_producers << "\n"
        << "N_c = " << cfg.n_consumers << "\n"
        << "C_p = " << fmt_full(cfg.producer_capital) << "\n"
        << "S_0 = " << fmt_full(cfg.initial_satisfaction) << "\n"
        << "steps = " << cfg.steps << "\n"
        << "seed = " << cfg.seed << "\n";
    return out.str();
}

std::string to_key_value(const SweepSpec& spec) {
    std::ostringstream out;
    out << to_key_value(spec.base);
    out << "Np_grid = ";
    for (std::size_t i = 0; i < spec.np_grid.size(); ++i)
        out << (i ? "," : "") << spec.np_grid[i];
    out << "\nac_values = ";
    for (std::size_t i = 0; i < spec.ac_values.size(); ++i)
        out << (i ? "," : "") << fmt_full(spec.ac_values[i]);
    out << "\ntheta_values = ";
    for (std::size_t i = 0; i < spec.theta_values.size(); ++i)
        out << (i ? "," : "") << fmt_full(spec.theta_values[i]);
    out << "\nn_seeds = " << spec.n_seeds << "\n"
        << "seed_base = " << spec.seed_base << "\n";
    return out.str();
}

std::string manifest_json(const SimConfig& cfg, const RunOptions& opts) {
    json j{{"format", "bitmarket-run/1"},
           {"config", config_to_json(cfg)},
           {"options", options_to_json(opts)}};
    return j.dump(2) + "\n";
}

void write_run_outputs(const Trajectory& traj, const SimConfig& cfg,
                       const RunOptions& opts,
                       const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    {
        OutFile f(out_dir / "run_meta.json");
        f << manifest_json(cfg, opts);
        f.close_check();
    }
    {
        OutFile f(out_dir / "timeseries.csv");
        f << "t,n_producers,mean_capital,mean_satisfaction,deaths,transactions\n";
        for (const StepStats& s : traj.steps)
            f << s.t << ',' << s.n_producers << ',' << fmt_g6(s.mean_capital)
              << ',' << fmt_g6(s.mean_satisfaction) << ',' << s.deaths << ','
              << s.transactions << '\n';
        f.close_check();
    }
    {
        OutFile f(out_dir / "producers_final.csv");
        f << "id,product_string,capital,customers_last_step\n";
        for (const Producer& p : traj.final_state.producers)
            f << p.id << ',' << p.product.to_string() << ','
              << fmt_g6(p.capital) << ',' << p.customers_this_step << '\n';
        f.close_check();
    }
    {
        const MarketState& st = traj.final_state;
        double sum = 0.0, lo = 0.0, hi = 0.0;
        if (!st.consumers.empty()) {
            lo = hi = st.consumers.front().satisfaction;
            for (const Consumer& c : st.consumers) {
                sum += c.satisfaction;
                lo = std::min(lo, c.satisfaction);
                hi = std::max(hi, c.satisfaction);
            }
        }
        const double mean = st.consumers.empty()
                                ? 0.0
                                : sum / static_cast<double>(st.consumers.size());
        OutFile f(out_dir / "consumers_summary.csv");
        f << "metric,value\n";
        f << "n_consumers," << st.consumers.size() << '\n';
        f << "mean_satisfaction," << fmt_g6(mean) << '\n';
        f << "min_satisfaction," << fmt_g6(lo) << '\n';
        f << "max_satisfaction," << fmt_g6(hi) << '\n';
        f << "exact_match_fraction," << fmt_g6(exact_match_fraction(st)) << '\n';
        f << "condensed_fraction_estimate,"
          << fmt_g6(condensed_fraction(mean, cfg.initial_satisfaction)) << '\n';
        if (!std::isnan(traj.final_mean_rel_overlap)) {
            f << "mean_transaction_overlap," << fmt_g6(traj.final_mean_rel_overlap)
              << '\n';
            if (cfg.a_p > 0.0)
                f << "capacity_bound,"
                  << fmt_g6(producer_capacity_bound(traj, cfg)) << '\n';
        }
        f.close_check();
    }
    {
        std::vector<BitString> needs;
        needs.reserve(traj.final_state.consumers.size());
        for (const Consumer& c : traj.final_state.consumers)
            needs.push_back(c.need);
        const auto h = overlap_histogram(needs, cfg.k);
        OutFile f(out_dir / "need_overlap_hist.csv");
        f << "bin,count\n";
        for (std::size_t v = 0; v < h.size(); ++v)
            f << v << ',' << h[v] << '\n';
        f.close_check();
    }
    {
        std::vector<BitString> products;
        products.reserve(traj.final_state.producers.size());
        for (const Producer& p : traj.final_state.producers)
            products.push_back(p.product);
        const auto d = distance_histogram(products, cfg.k);
        OutFile f(out_dir / "producer_distance_hist.csv");
        f << "bin,count\n";
        for (std::size_t v = 0; v < d.size(); ++v)
            f << v << ',' << d[v] << '\n';
        f.close_check();
    }
    if (!traj.occupancy.empty()) {
        OutFile f(out_dir / "occupancy.csv");
        f << "t,center_id,count\n";
        const std::size_t n = traj.occupancy.front().counts.size();
        for (std::size_t ti = 0; ti < n; ++ti)
            for (const OccupancySeries& series : traj.occupancy)
                f << ti << ',' << series.label << ',' << series.counts[ti] << '\n';
        f.close_check();
    }
}

void write_sweep_outputs(const std::vector<EnsembleRecord>& records,
                         const SweepSpec& spec,
                         const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        json j{{"format", "bitmarket-sweep/1"},
               {"base", config_to_json(spec.base)},
               {"Np_grid", spec.np_grid},
               {"ac_values", spec.ac_values},
               {"theta_values", spec.theta_values},
               {"n_seeds", spec.n_seeds},
               {"seed_base", spec.seed_base}};
        OutFile f(out_dir / "sweep_meta.json");
        f << j.dump(2) << "\n";
        f.close_check();
    }
    OutFile f(out_dir / "sweep.csv");
    f << "N_p,a_c,theta,n_seeds,survivors_mean,survivors_std,"
         "capital_mean,capital_std,satisfaction_mean,satisfaction_std,"
         "order_ratio_defined,order_ratio_mean,order_ratio_std,"
         "condensed_fraction_mean,condensed_fraction_std,"
         "exact_match_mean,exact_match_std\n";
    for (const EnsembleRecord& r : records) {
        f << r.n_producers << ',' << fmt_g6(r.a_c) << ',' << fmt_g6(r.theta)
          << ',' << r.n_seeds << ',' << fmt_g6(r.survivors.mean) << ','
          << fmt_g6(r.survivors.stddev) << ',' << fmt_g6(r.mean_capital.mean)
          << ',' << fmt_g6(r.mean_capital.stddev) << ','
          << fmt_g6(r.mean_satisfaction.mean) << ','
          << fmt_g6(r.mean_satisfaction.stddev) << ',' << r.order_ratio_defined
          << ',';
        if (r.order_ratio_defined > 0)
            f << fmt_g6(r.order_ratio.mean) << ',' << fmt_g6(r.order_ratio.stddev);
        else
            f << ',';
        f << ',' << fmt_g6(r.condensed_fraction.mean) << ','
          << fmt_g6(r.condensed_fraction.stddev) << ','
          << fmt_g6(r.exact_match.mean) << ',' << fmt_g6(r.exact_match.stddev)
          << '\n';
    }
    f.close_check();
}

}  // namespace bitmarket::io
