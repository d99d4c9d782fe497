#include "gridpath/config.hpp"

#include "gridpath/errors.hpp"

#include <fstream>
#include <sstream>

namespace gridpath {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " expects a number, got '" + value + "'");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " expects an integer, got '" + value + "'");
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::apply(const std::string& key, const std::string& value) {
    if (key == "solver") {
        if (value == "dijkstra") solver = SolverChoice::Dijkstra;
        else if (value == "astar") solver = SolverChoice::AStar;
        else if (value == "hyper") solver = SolverChoice::Hyper;
        else throw ConfigError("config: solver must be dijkstra|astar|hyper, got '" + value + "'");
    } else if (key == "heuristic") {
        if (value == "zero") heuristic = HeuristicKind::Zero;
        else if (value == "min_chebyshev") heuristic = HeuristicKind::MinWeightChebyshev;
        else throw ConfigError("config: heuristic must be zero|min_chebyshev, got '" + value + "'");
        heuristic_set = true;
    } else if (key == "lambda") {
        bbox.lambda = parse_double(key, value);
    } else if (key == "lambda_t") {
        tcr.lambda_t = parse_double(key, value);
    } else if (key == "tcr_unit") {
        if (value == "expansions") tcr.unit = TimeUnit::ExpansionsNormalized;
        else if (value == "wall") tcr.unit = TimeUnit::WallSeconds;
        else if (value == "work") tcr.unit = TimeUnit::WorkNormalized;
        else throw ConfigError("config: tcr_unit must be expansions|wall|work, got '" + value + "'");
    } else if (key == "tcr_grad_mode") {
        if (value == "monitor") tcr.grad_mode = TcrGradMode::Monitor;
        else if (value == "contrast") tcr.grad_mode = TcrGradMode::Contrast;
        else throw ConfigError("config: tcr_grad_mode must be monitor|contrast, got '" + value + "'");
    } else if (key == "tcr_kappa") {
        tcr.kappa = parse_double(key, value);
    } else if (key == "hyper_mode") {
        if (value == "learned_choice") hyper.mode = HyperMode::LearnedChoice;
        else if (value == "internal_decision") hyper.mode = HyperMode::InternalDecision;
        else if (value == "hybrid") hyper.mode = HyperMode::Hybrid;
        else throw ConfigError("config: hyper_mode must be learned_choice|internal_decision|hybrid");
        hyper_keys_set = true;
    } else if (key == "informativeness_threshold") {
        hyper.informativeness_threshold = parse_double(key, value);
        hyper_keys_set = true;
    } else if (key == "probe_probability") {
        hyper.probe_probability = parse_double(key, value);
        hyper_keys_set = true;
    } else if (key == "choice_delta") {
        choice_delta = parse_double(key, value);
        hyper_keys_set = true;
    } else if (key == "optimizer") {
        if (value == "sgd") optimizer = OptimizerKind::Sgd;
        else if (value == "momentum") optimizer = OptimizerKind::Momentum;
        else if (value == "adam") optimizer = OptimizerKind::Adam;
        else throw ConfigError("config: optimizer must be sgd|momentum|adam, got '" + value + "'");
    } else if (key == "momentum") {
        momentum = parse_double(key, value);
    } else if (key == "alpha_l1") {
        alpha_l1 = parse_double(key, value);
    } else if (key == "epochs") {
        epochs = static_cast<int>(parse_int(key, value));
    } else if (key == "batch_size") {
        batch_size = static_cast<int>(parse_int(key, value));
    } else if (key == "lr") {
        lr = parse_double(key, value);
    } else if (key == "lr_decay") {
        lr_decay = parse_double(key, value);
    } else if (key == "center_grad") {
        if (value == "true" || value == "1") center_grad = true;
        else if (value == "false" || value == "0") center_grad = false;
        else throw ConfigError("config: center_grad must be true|false");
    } else if (key == "seed") {
        seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "k") {
        k = static_cast<Eigen::Index>(parse_int(key, value));
    } else if (key == "tile_px") {
        tile_px = static_cast<Eigen::Index>(parse_int(key, value));
    } else if (key == "cluster_prob") {
        cluster_prob = parse_double(key, value);
    } else if (key == "train_count") {
        train_count = parse_int(key, value);
    } else if (key == "val_count") {
        val_count = parse_int(key, value);
    } else if (key == "test_count") {
        test_count = parse_int(key, value);
    } else if (key == "dataset") {
        dataset_dir = value;
    } else if (key == "out") {
        out_dir = value;
    } else if (key == "eval_split") {
        eval_split = value;
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

void RunConfig::validate() const {
    if (heuristic_set && solver == SolverChoice::Dijkstra) {
        throw ConfigError("config: heuristic is set but solver=dijkstra never uses one");
    }
    if (hyper_keys_set && solver != SolverChoice::Hyper) {
        // the choice head exists only for the hyper solver
        throw ConfigError("config: hyper_* keys require solver=hyper");
    }
    if (bbox.lambda <= 0.0) throw ConfigError("config: lambda must be > 0");
    if (tcr.lambda_t < 0.0) throw ConfigError("config: lambda_t must be >= 0");
    if (tcr.kappa < 0.0) throw ConfigError("config: tcr_kappa must be >= 0");
    if (hyper.probe_probability < 0.0 || hyper.probe_probability > 1.0) {
        throw ConfigError("config: probe_probability must be in [0, 1]");
    }
    if (choice_delta <= 0.0) throw ConfigError("config: choice_delta must be > 0");
    if (alpha_l1 < 0.0) throw ConfigError("config: alpha_l1 must be >= 0");
    if (momentum < 0.0 || momentum >= 1.0) {
        throw ConfigError("config: momentum must be in [0, 1)");
    }
    if (epochs < 1) throw ConfigError("config: epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("config: batch_size must be >= 1");
    if (lr <= 0.0) throw ConfigError("config: lr must be > 0");
    if (lr_decay <= 0.0 || lr_decay > 1.0) {
        throw ConfigError("config: lr_decay must be in (0, 1]");
    }
    if (k < 2) throw ConfigError("config: k must be >= 2");
    if (tile_px < 2) throw ConfigError("config: tile_px must be >= 2");
    if (cluster_prob < 0.0 || cluster_prob > 1.0) {
        throw ConfigError("config: cluster_prob must be in [0, 1]");
    }
    if (train_count < 0 || val_count < 0 || test_count < 0) {
        throw ConfigError("config: split counts must be >= 0");
    }
    if (eval_split != "none" && eval_split != "train" && eval_split != "val" &&
        eval_split != "test") {
        throw ConfigError("config: eval_split must be none|train|val|test");
    }
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open " + path.string());
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: " + path.string() + ":" + std::to_string(lineno) +
                              ": expected key = value");
        }
        cfg.apply(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return cfg;
}

void RunConfig::apply_overrides(const std::vector<std::string>& assignments) {
    for (const std::string& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: override '" + a + "' is not key=value");
        }
        apply(trim(a.substr(0, eq)), trim(a.substr(eq + 1)));
    }
}

}  // namespace gridpath
