#include "randheston/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace randheston {

namespace {

using boost::property_tree::ptree;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw, const std::string& what) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("not a number for " + what + ": '" + s + "'");
    return v;
}

int parse_int(const std::string& raw, const std::string& what) {
    const std::string s = trim(raw);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigError("not an integer for " + what + ": '" + s + "'");
    return v;
}

double need(const ptree& sec, const std::string& section, const std::string& key) {
    const auto v = sec.get_optional<std::string>(key);
    if (!v) throw ConfigError("missing " + section + "." + key);
    return parse_number(*v, section + "." + key);
}

double maybe(const ptree& sec, const std::string& section, const std::string& key, double fallback) {
    const auto v = sec.get_optional<std::string>(key);
    return v ? parse_number(*v, section + "." + key) : fallback;
}

Randomiser read_randomiser(const ptree& sec) {
    const auto type = sec.get_optional<std::string>("kind");
    if (!type) throw ConfigError("missing randomiser.kind");
    const std::string t = trim(*type);
    auto get = [&](const char* key) { return need(sec, "randomiser", key); };
    if (t == "dirac") return Dirac{get("v0")};
    if (t == "uniform") return Uniform{maybe(sec, "randomiser", "lo", 0.0), get("hi")};
    if (t == "exponential") return Exponential{get("rate")};
    if (t == "gamma") return Gamma{get("shape"), get("rate")};
    if (t == "ncx2") return ScaledNCX2{get("scale"), get("dof"), get("noncentrality")};
    if (t == "folded_gaussian") return FoldedGaussian{get("l1")};
    if (t == "weibull") return Weibull{get("scale"), get("shape")};
    throw ConfigError("unknown randomiser kind '" + t + "'");
}

// Shortest text that reads back to the same double.
std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::vector<double> GridSpec::points() const {
    std::vector<double> out;
    if (n <= 0) return out;
    if (n == 1) return {lo};
    out.reserve(static_cast<std::size_t>(n));
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) out.push_back(i == n - 1 ? hi : lo + step * i);
    return out;
}

GridSpec parse_grid_spec(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError("grid must read lo:hi:n, got '" + text + "'");
    GridSpec g{parse_number(parts[0], "grid lo"), parse_number(parts[1], "grid hi"), parse_int(parts[2], "grid n")};
    if (g.n < 0) throw ConfigError("grid size must be non-negative");
    if (g.n > 1 && !(g.hi >= g.lo)) throw ConfigError("grid upper end below lower end");
    return g;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

Config parse_config(std::istream& in) {
    ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(e.what());
    }
    Config cfg;
    const auto model = tree.get_child_optional("model");
    if (!model) throw ConfigError("missing [model] section");
    try {
        cfg.model = ModelParams::make(need(*model, "model", "kappa"), need(*model, "model", "theta"),
                                      need(*model, "model", "xi"), need(*model, "model", "rho"));
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }

    const auto rand = tree.get_child_optional("randomiser");
    if (!rand) throw ConfigError("missing [randomiser] section");
    cfg.randomiser = read_randomiser(*rand);
    try {
        validate(cfg.randomiser);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    cfg.v0 = maybe(*rand, "randomiser", "v0_target", cfg.v0);

    if (const auto grid = tree.get_child_optional("grid")) {
        if (const auto t = grid->get_optional<std::string>("t")) cfg.t = parse_grid_spec(trim(*t));
        if (const auto x = grid->get_optional<std::string>("x")) cfg.x = parse_grid_spec(trim(*x));
        cfg.elapsed = maybe(*grid, "grid", "elapsed", cfg.elapsed);
    }
    if (const auto eng = tree.get_child_optional("engines")) {
        if (const auto list = eng->get_optional<std::string>("list")) cfg.engines = split_list(*list);
        if (const auto order = eng->get_optional<std::string>("order"))
            cfg.order = parse_int(*order, "engines.order");
    }
    if (cfg.order < 1 || cfg.order > 3) throw ConfigError("engines.order must be 1, 2 or 3");
    if (!(cfg.elapsed > 0.0)) throw ConfigError("grid.elapsed must be positive");
    for (double t : cfg.t.points())
        if (!(t > 0.0)) throw ConfigError("maturities must be positive");
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return parse_config(in);
}

void apply_grid_override(Config& cfg, const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ConfigError("--grid must read tmin:tmax:n,xmin:xmax:n");
    cfg.t = parse_grid_spec(text.substr(0, comma));
    cfg.x = parse_grid_spec(text.substr(comma + 1));
    for (double t : cfg.t.points())
        if (!(t > 0.0)) throw ConfigError("maturities must be positive");
}

std::string randomiser_block(const Randomiser& r) {
    std::string out = "[randomiser]\nkind = " + name(r) + "\n";
    auto line = [&](const char* key, double v) { out += std::string(key) + " = " + num(v) + "\n"; };
    std::visit(
        [&](const auto& law) {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, Dirac>) {
                line("v0", law.v0);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                line("lo", law.lo);
                line("hi", law.hi);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                line("rate", law.rate);
            } else if constexpr (std::is_same_v<T, Gamma>) {
                line("shape", law.shape);
                line("rate", law.rate);
            } else if constexpr (std::is_same_v<T, ScaledNCX2>) {
                line("scale", law.scale);
                line("dof", law.dof);
                line("noncentrality", law.noncentrality);
            } else if constexpr (std::is_same_v<T, FoldedGaussian>) {
                line("l1", law.l1);
            } else {
                line("scale", law.scale);
                line("shape", law.shape);
            }
        },
        r);
    return out;
}

}  // namespace randheston
