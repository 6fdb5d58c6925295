#include "tdpp/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tdpp {

namespace {

std::string trim(const std::string& text) {
    const size_t begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const size_t end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> parts;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

int to_int(const std::string& value, const std::string& key) {
    try {
        size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "' needs an integer, got '" + value + "'");
    }
}

double to_real(const std::string& value, const std::string& key) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "' needs a number, got '" + value + "'");
    }
}

bool to_flag(const std::string& value, const std::string& key) {
    if (value == "on" || value == "true" || value == "1") return true;
    if (value == "off" || value == "false" || value == "0") return false;
    throw std::runtime_error("config key '" + key + "' needs on/off, got '" + value + "'");
}

} // namespace

void apply_config_value(ExperimentConfig& config, const std::string& key,
                        const std::string& value) {
    if (key == "topology") {
        config.topology_path = value;
    } else if (key == "pairs") {
        if (value.find(':') == std::string::npos) {
            config.pair_count = to_int(value, key);
            config.explicit_pairs.clear();
        } else {
            config.explicit_pairs.clear();
            for (const std::string& item : split_list(value)) {
                const size_t colon = item.find(':');
                if (colon == std::string::npos || colon == 0 || colon + 1 == item.size())
                    throw std::runtime_error("config key 'pairs' expects s:d entries, got '" +
                                             item + "'");
                config.explicit_pairs.push_back(
                    {item.substr(0, colon), item.substr(colon + 1)});
            }
            if (config.explicit_pairs.empty())
                throw std::runtime_error("config key 'pairs' got an empty list");
        }
    } else if (key == "algorithm" || key == "algorithms") {
        config.algorithms.clear();
        for (const std::string& name : split_list(value)) {
            try {
                config.algorithms.push_back(algorithm_from_name(name));
            } catch (const std::invalid_argument& e) {
                throw std::runtime_error(std::string("config key 'algorithm': ") + e.what());
            }
        }
        if (config.algorithms.empty())
            throw std::runtime_error("config key 'algorithm' got an empty list");
    } else if (key == "trials") {
        config.trials = to_int(value, key);
    } else if (key == "seed") {
        config.rng_seed = static_cast<std::uint64_t>(std::stoull(value));
    } else if (key == "alpha") {
        config.alpha = to_real(value, key);
    } else if (key == "beta") {
        config.beta = to_real(value, key);
    } else if (key == "capacity" || key == "capacities") {
        config.capacities.clear();
        for (const std::string& item : split_list(value))
            config.capacities.push_back(to_int(item, key));
        if (config.capacities.empty())
            throw std::runtime_error("config key 'capacity' got an empty list");
    } else if (key == "memory") {
        config.memory_per_node = to_int(value, key);
    } else if (key == "mean_fidelity") {
        config.mean_fidelity = to_real(value, key);
    } else if (key == "fidelity_std") {
        config.fidelity_std = to_real(value, key);
    } else if (key == "threshold") {
        config.fidelity_threshold = to_real(value, key);
    } else if (key == "k") {
        config.k_paths = to_int(value, key);
    } else if (key == "slot_ms") {
        config.slot_ms = to_int(value, key);
    } else if (key == "lifetime_ms") {
        config.lifetime_ms = to_int(value, key);
    } else if (key == "state_factor") {
        config.use_state_factor = to_flag(value, key);
    } else if (key == "threads") {
        config.threads = to_int(value, key);
    } else {
        throw std::runtime_error("unknown config key '" + key + "'");
    }
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": empty key or value");
        apply_config_value(config, key, value);
    }
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string config_to_text(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "topology = " << config.topology_path << "\n";
    if (config.explicit_pairs.empty()) {
        out << "pairs = " << config.pair_count << "\n";
    } else {
        out << "pairs = ";
        for (size_t i = 0; i < config.explicit_pairs.size(); ++i) {
            if (i) out << ",";
            out << config.explicit_pairs[i].source << ":" << config.explicit_pairs[i].destination;
        }
        out << "\n";
    }
    out << "algorithm = ";
    for (size_t i = 0; i < config.algorithms.size(); ++i) {
        if (i) out << ",";
        out << algorithm_name(config.algorithms[i]);
    }
    out << "\n";
    out << "trials = " << config.trials << "\n";
    out << "seed = " << config.rng_seed << "\n";
    out << "alpha = " << config.alpha << "\n";
    out << "beta = " << config.beta << "\n";
    out << "capacity = ";
    for (size_t i = 0; i < config.capacities.size(); ++i) {
        if (i) out << ",";
        out << config.capacities[i];
    }
    out << "\n";
    out << "memory = " << config.memory_per_node << "\n";
    out << "mean_fidelity = " << config.mean_fidelity << "\n";
    out << "fidelity_std = " << config.fidelity_std << "\n";
    out << "threshold = " << config.fidelity_threshold << "\n";
    out << "k = " << config.k_paths << "\n";
    out << "slot_ms = " << config.slot_ms << "\n";
    out << "lifetime_ms = " << config.lifetime_ms << "\n";
    out << "state_factor = " << (config.use_state_factor ? "on" : "off") << "\n";
    out << "threads = " << config.threads << "\n";
    return out.str();
}

} // namespace tdpp
