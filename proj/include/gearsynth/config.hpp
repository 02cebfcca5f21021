#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "gearsynth/common.hpp"

namespace gearsynth {

/**
 * Process-wide tunables. Defaults are desk-scale; the CLI can override them
 * from a key=value config file. Values are read once at startup, so the
 * struct itself needs no locking.
 */
struct Config {
    // Exact-synthesis base database is built from a BFS of this many T layers.
    long db_bfs_tcount = 4;
    // Approximate-synthesis BFS budget.
    long approx_bfs_tcount = 8;
    long approx_bfs_node_cap = 400000;
    // Search caps.
    long search_max_tcount = 40;
    long search_candidate_cap = 50000000;
    // Default seed when neither flag nor environment provides one.
    std::uint64_t default_seed = 20140701;

    void load_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("config: cannot open " + path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config: bad line '" + line + "'");
            std::string key = line.substr(0, eq);
            std::string val = line.substr(eq + 1);
            set(key, val);
        }
    }

    void set(const std::string& key, const std::string& val) {
        if (key == "db_bfs_tcount") db_bfs_tcount = std::stol(val);
        else if (key == "approx_bfs_tcount") approx_bfs_tcount = std::stol(val);
        else if (key == "approx_bfs_node_cap") approx_bfs_node_cap = std::stol(val);
        else if (key == "search_max_tcount") search_max_tcount = std::stol(val);
        else if (key == "search_candidate_cap") search_candidate_cap = std::stol(val);
        else if (key == "default_seed") default_seed = std::stoull(val);
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
};

inline Config& config() {
    static Config cfg;
    return cfg;
}

// Seed resolution order: explicit flag, GEARSYNTH_SEED, built-in default.
inline std::uint64_t default_seed_from_env() {
    if (const char* env = std::getenv("GEARSYNTH_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return config().default_seed;
}

} // namespace gearsynth
