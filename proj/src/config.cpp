#include "hotspot/error.hpp"
#include "hotspot/harness.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace hotspot {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used == v.size())
            return d;
    } catch (const std::logic_error&) {
    }
    fail(ErrorCode::Parse, "config: '" + key + "' expects a number, got '" + v + "'");
}

std::size_t to_count(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        unsigned long long d = std::stoull(v, &used);
        if (used == v.size() && v.find('-') == std::string::npos)
            return static_cast<std::size_t>(d);
    } catch (const std::logic_error&) {
    }
    fail(ErrorCode::Parse, "config: '" + key + "' expects a non-negative integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    fail(ErrorCode::Parse, "config: '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(to_double(key, trim(item)));
    return out;
}

template <class E>
E to_enum(const std::string& key, const std::string& v, std::initializer_list<std::pair<const char*, E>> names) {
    for (const auto& [n, e] : names)
        if (v == n)
            return e;
    std::string choices;
    for (const auto& [n, e] : names)
        choices += std::string(choices.empty() ? "" : "|") + n;
    fail(ErrorCode::Parse, "config: '" + key + "' expects one of " + choices + ", got '" + v + "'");
}

template <class E>
const char* enum_name(E e, std::initializer_list<std::pair<const char*, E>> names) {
    for (const auto& [n, x] : names)
        if (x == e)
            return n;
    return "?";
}

const std::initializer_list<std::pair<const char*, TopologyKind>> kTopologies = {
    {"er", TopologyKind::ErdosRenyi}, {"grid", TopologyKind::Grid}, {"tree", TopologyKind::Tree},
    {"powerlaw", TopologyKind::PowerLaw}, {"file", TopologyKind::File}};
const std::initializer_list<std::pair<const char*, StopRule>> kStops = {{"size", StopRule::FixedSize},
                                                                        {"time", StopRule::FixedTime}};
const std::initializer_list<std::pair<const char*, SeedPlacement>> kPlacements = {
    {"giant", SeedPlacement::LargestComponent}, {"uniform", SeedPlacement::Uniform}};
const std::initializer_list<std::pair<const char*, DetectorKind>> kDetectors = {
    {"fixed", DetectorKind::Fixed}, {"dense", DetectorKind::Dense}, {"small", DetectorKind::Small}};
const std::initializer_list<std::pair<const char*, GammaSource>> kGammaSources = {
    {"value", GammaSource::Value}, {"fallback", GammaSource::Fallback}, {"tree", GammaSource::Tree},
    {"grid", GammaSource::Grid}};
const std::initializer_list<std::pair<const char*, NeighborhoodMode>> kModes = {
    {"nn", NeighborhoodMode::NearestNeighbors}, {"ball", NeighborhoodMode::Ball}};

using Setter = std::function<void(ExperimentSpec&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"topology", [](auto& s, auto& k, auto& v) { s.topology.kind = to_enum(k, v, kTopologies); }},
        {"n", [](auto& s, auto& k, auto& v) { s.topology.n = to_count(k, v); }},
        {"er_p", [](auto& s, auto& k, auto& v) { s.topology.er_p = to_double(k, v); }},
        {"er_mean_degree", [](auto& s, auto& k, auto& v) { s.topology.er_mean_degree = to_double(k, v); }},
        {"grid_dim", [](auto& s, auto& k, auto& v) { s.topology.grid_dim = to_count(k, v); }},
        {"grid_side", [](auto& s, auto& k, auto& v) { s.topology.grid_side = to_count(k, v); }},
        {"tree_degree", [](auto& s, auto& k, auto& v) { s.topology.tree_degree = to_count(k, v); }},
        {"tree_depth", [](auto& s, auto& k, auto& v) { s.topology.tree_depth = to_count(k, v); }},
        {"powerlaw_exponent", [](auto& s, auto& k, auto& v) { s.topology.powerlaw_exponent = to_double(k, v); }},
        {"graph", [](auto& s, auto&, auto& v) { s.topology.path = v; s.topology.kind = TopologyKind::File; }},
        {"compact", [](auto& s, auto& k, auto& v) { s.topology.compact = to_bool(k, v); }},
        {"alpha", [](auto& s, auto& k, auto& v) { s.alpha.coef = to_double(k, v); }},
        {"alpha_exp", [](auto& s, auto& k, auto& v) { s.alpha.exponent = to_double(k, v); }},
        {"q", [](auto& s, auto& k, auto& v) { s.q.coef = to_double(k, v); }},
        {"q_exp", [](auto& s, auto& k, auto& v) { s.q.exponent = to_double(k, v); }},
        {"f", [](auto& s, auto& k, auto& v) { s.f.coef = to_double(k, v); }},
        {"f_exp", [](auto& s, auto& k, auto& v) { s.f.exponent = to_double(k, v); }},
        {"seeds", [](auto& s, auto& k, auto& v) { s.num_seeds = to_count(k, v); }},
        {"stop", [](auto& s, auto& k, auto& v) { s.stop = to_enum(k, v, kStops); }},
        {"time_budget", [](auto& s, auto& k, auto& v) { s.time_budget = to_double(k, v); }},
        {"seed_placement", [](auto& s, auto& k, auto& v) { s.seed_placement = to_enum(k, v, kPlacements); }},
        {"null_p", [](auto& s, auto& k, auto& v) { s.null_p = to_double(k, v); }},
        {"detector", [](auto& s, auto& k, auto& v) { s.detector.kind = to_enum(k, v, kDetectors); }},
        {"mode", [](auto& s, auto& k, auto& v) { s.detector.fixed.mode = to_enum(k, v, kModes); }},
        {"k", [](auto& s, auto& k, auto& v) { s.detector.fixed.k_or_l = to_count(k, v); }},
        {"l", [](auto& s, auto& k, auto& v) { s.detector.fixed.k_or_l = to_count(k, v); }},
        {"s", [](auto& s, auto& k, auto& v) { s.detector.fixed.s = to_count(k, v); }},
        {"t", [](auto& s, auto& k, auto& v) { s.detector.fixed.t = to_double(k, v); }},
        {"gamma_source", [](auto& s, auto& k, auto& v) { s.detector.gamma_source = to_enum(k, v, kGammaSources); }},
        {"gamma", [](auto& s, auto& k, auto& v) { s.detector.gamma = to_double(k, v); s.detector.gamma_source = GammaSource::Value; }},
        {"log_base", [](auto& s, auto& k, auto& v) { s.detector.log_base = to_double(k, v); }},
        {"noise_prob", [](auto& s, auto& k, auto& v) {
             if (!s.noise) s.noise.emplace();
             s.noise->flip_prob = to_double(k, v);
         }},
        {"noise_d", [](auto& s, auto& k, auto& v) {
             if (!s.noise) s.noise.emplace();
             s.noise->magnitude = static_cast<std::uint32_t>(to_count(k, v));
         }},
        {"sweep", [](auto& s, auto&, auto& v) { s.sweep_var = v; }},
        {"values", [](auto& s, auto& k, auto& v) { s.sweep_values = to_list(k, v); }},
        {"trials", [](auto& s, auto& k, auto& v) { s.trials = to_count(k, v); }},
        {"seed", [](auto& s, auto& k, auto& v) { s.master_seed = to_count(k, v); }},
        {"threads", [](auto& s, auto& k, auto& v) { s.threads = static_cast<unsigned>(to_count(k, v)); }},
        {"crn", [](auto& s, auto& k, auto& v) { s.common_random_numbers = to_bool(k, v); }},
    };
    return table;
}

std::string num(double v) {
    std::ostringstream o;
    o.precision(12);
    o << v;
    return o.str();
}

} // namespace

const std::vector<std::string>& sweep_variables() {
    static const std::vector<std::string> names = {"n", "alpha", "q", "f", "seeds", "noise_prob", "noise_d",
                                                   "k", "l", "s", "t", "time_budget"};
    return names;
}

ExperimentSpec ExperimentSpec::at_sweep_value(double value) const {
    ExperimentSpec s = *this;
    s.current_sweep_value = value;
    const auto count = [&] {
        require(value >= 0.0 && value == std::floor(value), "sweep: '" + sweep_var + "' needs integer values");
        return static_cast<std::size_t>(value);
    };
    if (sweep_var == "n")
        s.topology.n = count();
    else if (sweep_var == "alpha")
        s.alpha.coef = value;
    else if (sweep_var == "q")
        s.q.coef = value;
    else if (sweep_var == "f")
        s.f.coef = value;
    else if (sweep_var == "seeds")
        s.num_seeds = count();
    else if (sweep_var == "noise_prob") {
        if (!s.noise) s.noise.emplace();
        s.noise->flip_prob = value;
    } else if (sweep_var == "noise_d") {
        if (!s.noise) s.noise.emplace();
        s.noise->magnitude = static_cast<std::uint32_t>(count());
    } else if (sweep_var == "k" || sweep_var == "l")
        s.detector.fixed.k_or_l = count();
    else if (sweep_var == "s")
        s.detector.fixed.s = count();
    else if (sweep_var == "t")
        s.detector.fixed.t = value;
    else if (sweep_var == "time_budget")
        s.time_budget = value;
    else if (!sweep_var.empty())
        fail(ErrorCode::InvalidArgument, "sweep: unknown variable '" + sweep_var + "'");
    return s;
}

void ExperimentSpec::validate() const {
    require(trials >= 1, "experiment: trials must be >= 1");
    require(num_seeds >= 1, "experiment: seeds must be >= 1");
    if (!sweep_var.empty()) {
        const auto& names = sweep_variables();
        require(std::find(names.begin(), names.end(), sweep_var) != names.end(),
                "experiment: unknown sweep variable '" + sweep_var + "'");
        require(!sweep_values.empty(), "experiment: sweep has no values");
    }
    if (topology.kind == TopologyKind::File)
        require(!topology.path.empty(), "experiment: topology=file needs graph=<path>");
    if (noise)
        noise->validate();
    if (detector.kind == DetectorKind::Fixed)
        detector.fixed.validate();
    if (stop == StopRule::FixedTime)
        require(time_budget > 0.0, "experiment: time_budget must be > 0");
}

ExperimentSpec parse_experiment_config(std::string_view text) {
    ExperimentSpec spec;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const std::string body = trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (!setters().count(key))
            fail(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        set_config_value(spec, key, value);
    }
    return spec;
}

void set_config_value(ExperimentSpec& spec, const std::string& key, const std::string& value) {
    const auto it = setters().find(key);
    if (it == setters().end())
        fail(ErrorCode::Parse, "config: unknown key '" + key + "'");
    it->second(spec, key, value);
}

ExperimentSpec load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::Io, "cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

std::string format_experiment_config(const ExperimentSpec& s) {
    std::ostringstream o;
    o << "topology = " << enum_name(s.topology.kind, kTopologies) << '\n'
      << "n = " << s.topology.n << '\n';
    if (s.topology.er_p)
        o << "er_p = " << num(*s.topology.er_p) << '\n';
    o << "er_mean_degree = " << num(s.topology.er_mean_degree) << '\n'
      << "grid_dim = " << s.topology.grid_dim << '\n'
      << "grid_side = " << s.topology.grid_side << '\n'
      << "tree_degree = " << s.topology.tree_degree << '\n'
      << "tree_depth = " << s.topology.tree_depth << '\n'
      << "powerlaw_exponent = " << num(s.topology.powerlaw_exponent) << '\n';
    if (!s.topology.path.empty())
        o << "graph = " << s.topology.path.string() << '\n';
    o << "compact = " << (s.topology.compact ? "true" : "false") << '\n'
      << "alpha = " << num(s.alpha.coef) << '\n'
      << "alpha_exp = " << num(s.alpha.exponent) << '\n'
      << "q = " << num(s.q.coef) << '\n'
      << "q_exp = " << num(s.q.exponent) << '\n'
      << "f = " << num(s.f.coef) << '\n'
      << "f_exp = " << num(s.f.exponent) << '\n'
      << "seeds = " << s.num_seeds << '\n'
      << "stop = " << enum_name(s.stop, kStops) << '\n'
      << "time_budget = " << num(s.time_budget) << '\n'
      << "seed_placement = " << enum_name(s.seed_placement, kPlacements) << '\n';
    if (s.null_p)
        o << "null_p = " << num(*s.null_p) << '\n';
    o << "detector = " << enum_name(s.detector.kind, kDetectors) << '\n'
      << "mode = " << enum_name(s.detector.fixed.mode, kModes) << '\n'
      << (s.detector.fixed.mode == NeighborhoodMode::Ball ? "l = " : "k = ") << s.detector.fixed.k_or_l << '\n'
      << "s = " << s.detector.fixed.s << '\n'
      << "t = " << num(s.detector.fixed.t) << '\n'
      << "gamma_source = " << enum_name(s.detector.gamma_source, kGammaSources) << '\n';
    if (s.detector.gamma_source == GammaSource::Value)
        o << "gamma = " << num(s.detector.gamma) << '\n';
    o << "log_base = " << num(s.detector.log_base) << '\n';
    if (s.noise)
        o << "noise_prob = " << num(s.noise->flip_prob) << '\n' << "noise_d = " << s.noise->magnitude << '\n';
    if (!s.sweep_var.empty()) {
        o << "sweep = " << s.sweep_var << '\n' << "values = ";
        for (std::size_t i = 0; i < s.sweep_values.size(); ++i)
            o << (i ? "," : "") << num(s.sweep_values[i]);
        o << '\n';
    }
    o << "trials = " << s.trials << '\n'
      << "seed = " << s.master_seed << '\n'
      << "threads = " << s.threads << '\n'
      << "crn = " << (s.common_random_numbers ? "true" : "false") << '\n';
    return o.str();
}

std::string describe_defaults() {
    std::ostringstream o;
    o << "# experiment config defaults (key = value)\n" << format_experiment_config(ExperimentSpec{});
    o << "#\n# conventions\n"
         "# nn_tie_break = ascending node id within the last partially used distance shell\n"
         "# neighborhood_center = excluded; a node's own report never counts toward its hotspot\n"
         "# undersized_neighborhood = all reachable nodes; the indicator cannot reach s > size\n"
         "# hotspot_counts = reporting members of the neighborhood (not the unobservable infected set)\n"
         "# decision = Epidemic iff hotspot_count > t (strict)\n"
         "# log_base = natural log for K = ceil(log((f+1)/gamma)); override with --log-base\n"
         "# k_floor = 1\n"
         "# small_regime = K = max(1, ceil(1/beta) - 1), fires on any hotspot (t = 0.5)\n"
         "# auto_regime_cutoff = 0.01 (N_reporting/N above it selects the dense rule; not from the model)\n"
         "# extras_rounding = round(f |S_r|) half to even, drawn from V \\ S_r\n"
         "# stop_rule = |S| = ceil(alpha N); edge clock rate 1\n"
         "# null_probability = (f+1) q |S| / N unless null_p is set\n"
         "# seed_placement = giant (largest connected component) unless seed_placement = uniform\n"
         "# noise = per ordered (observer, target) pair, stable within a trial, sign equiprobable\n"
         "# seed_derivation = splitmix64 chain over (master_seed, stream, trial[, label][, sweep value])\n"
         "# exit_codes(detect) = 0 UniformNull, 2 Epidemic, 1 error\n";
    return o.str();
}

} // namespace hotspot
