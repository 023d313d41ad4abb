#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "randheston/heston.hpp"
#include "randheston/randomiser.hpp"

namespace randheston {

/// Thrown for malformed or incomplete configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// lo:hi:n, n evenly spaced points including both ends (n = 1 gives lo, n = 0 nothing).
struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;

    std::vector<double> points() const;
};

GridSpec parse_grid_spec(const std::string& text);

struct Config {
    ModelParams model;
    Randomiser randomiser = Dirac{0.06};
    /// Maturities (remaining maturities for forward runs) and log-strikes.
    GridSpec t;
    GridSpec x;
    /// Elapsed time for forward smiles.
    double elapsed = 1.0 / 12.0;
    std::vector<std::string> engines;
    int order = 1;
    /// Spot variance used by calibrate.
    double v0 = 0.06;
};

/// Sections model, randomiser, grid and engines, one key = value per line; # and ; start comments.
Config parse_config(std::istream& in);
Config load_config(const std::string& path);

/// Overrides t and x from "tmin:tmax:n,xmin:xmax:n".
void apply_grid_override(Config& cfg, const std::string& text);
std::vector<std::string> split_list(const std::string& text);

/// randomiser section text for r, as read back by parse_config.
std::string randomiser_block(const Randomiser& r);

}  // namespace randheston
