#include "xlab/run_config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <sstream>

#include "xlab/errors.hpp"
#include "xlab/sweep.hpp"

namespace xlab {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why, std::size_t line) {
    std::string msg = "config key '" + key + "': " + why;
    if (line) msg += " (line " + std::to_string(line) + ")";
    throw ConfigError(msg);
}

double parse_double(const std::string& key, const std::string& v, std::size_t line) {
    if (v == "inf" || v == "clean") return kCleanSnr;
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) bad(key, "trailing characters in '" + v + "'", line);
        return d;
    } catch (const std::exception&) {
        bad(key, "expected a number, got '" + v + "'", line);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v, std::size_t line) {
    std::uint64_t out = 0;
    const auto* b = v.data();
    const auto* e = v.data() + v.size();
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc{} || p != e) bad(key, "expected a non-negative integer, got '" + v + "'", line);
    return out;
}

bool parse_bool(const std::string& key, const std::string& v, std::size_t line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    bad(key, "expected true|false, got '" + v + "'", line);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& v,
                                      std::size_t line) {
    std::vector<double> out;
    for (const auto& s : split_list(v)) {
        if (s.empty()) bad(key, "empty list element", line);
        out.push_back(parse_double(key, s, line));
    }
    if (out.empty()) bad(key, "list must be nonempty", line);
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& v,
                                         std::size_t line) {
    std::vector<std::size_t> out;
    for (const auto& s : split_list(v)) {
        if (s.empty()) bad(key, "empty list element", line);
        out.push_back(parse_u64(key, s, line));
    }
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::isinf(v[i]) ? "inf" : format_double(v[i]);
    }
    return s;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

std::string join_strings(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i];
    }
    return s;
}

struct KeyBinding {
    const char* key;
    std::function<void(RunConfig&, const std::string&, std::size_t)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::vector<KeyBinding>& schema() {
    static const std::vector<KeyBinding> s = [] {
        std::vector<KeyBinding> v;
        auto add = [&v](const char* key, auto set, auto get) { v.push_back({key, set, get}); };

        add("data.kind",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                if (val != "synthetic" && val != "mnist" && val != "csv")
                    bad("data.kind", "expected synthetic|mnist|csv", ln);
                c.data.kind = val;
            },
            [](const RunConfig& c) { return c.data.kind; });
        add("data.dir", [](RunConfig& c, const std::string& val, std::size_t) { c.data.dir = val; },
            [](const RunConfig& c) { return c.data.dir; });
        add("data.features",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                if (val != "auto" && val != "pxl" && val != "hog" && val != "synthetic")
                    bad("data.features", "expected auto|pxl|hog|synthetic", ln);
                c.data.features = val;
            },
            [](const RunConfig& c) { return c.data.features; });
        add("data.val_fraction",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                const double f = parse_double("data.val_fraction", val, ln);
                if (f < 0.0 || f >= 1.0) bad("data.val_fraction", "must be in [0, 1)", ln);
                c.data.val_fraction = f;
            },
            [](const RunConfig& c) { return format_double(c.data.val_fraction); });
        add("data.pxl_grid",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.data.fparams.pxl.grid = parse_u64("data.pxl_grid", val, ln);
                if (c.data.fparams.pxl.grid == 0) bad("data.pxl_grid", "must be >= 1", ln);
            },
            [](const RunConfig& c) { return std::to_string(c.data.fparams.pxl.grid); });
        add("data.hog_cell",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.data.fparams.hog.cell = parse_u64("data.hog_cell", val, ln);
            },
            [](const RunConfig& c) { return std::to_string(c.data.fparams.hog.cell); });
        add("data.hog_bins",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.data.fparams.hog.bins = parse_u64("data.hog_bins", val, ln);
            },
            [](const RunConfig& c) { return std::to_string(c.data.fparams.hog.bins); });
        add("data.hog_block",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.data.fparams.hog.block = parse_u64("data.hog_block", val, ln);
            },
            [](const RunConfig& c) { return std::to_string(c.data.fparams.hog.block); });
        add("data.hog_stride",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.data.fparams.hog.stride = parse_u64("data.hog_stride", val, ln);
            },
            [](const RunConfig& c) { return std::to_string(c.data.fparams.hog.stride); });
        add("data.synth_n",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.data.synth.n = parse_u64("data.synth_n", val, ln);
            },
            [](const RunConfig& c) { return std::to_string(c.data.synth.n); });
        add("data.synth_dim",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.data.synth.dim = parse_u64("data.synth_dim", val, ln);
            },
            [](const RunConfig& c) { return std::to_string(c.data.synth.dim); });
        add("data.synth_classes",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.data.synth.classes =
                    static_cast<int>(parse_u64("data.synth_classes", val, ln));
            },
            [](const RunConfig& c) { return std::to_string(c.data.synth.classes); });
        add("data.synth_separation",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.data.synth.separation = parse_double("data.synth_separation", val, ln);
            },
            [](const RunConfig& c) { return format_double(c.data.synth.separation); });
        add("data.synth_seed",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.data.synth.seed = parse_u64("data.synth_seed", val, ln);
            },
            [](const RunConfig& c) { return std::to_string(c.data.synth.seed); });
        add("data.train_csv",
            [](RunConfig& c, const std::string& val, std::size_t) { c.data.train_csv = val; },
            [](const RunConfig& c) { return c.data.train_csv; });
        add("data.val_csv",
            [](RunConfig& c, const std::string& val, std::size_t) { c.data.val_csv = val; },
            [](const RunConfig& c) { return c.data.val_csv; });
        add("data.test_csv",
            [](RunConfig& c, const std::string& val, std::size_t) { c.data.test_csv = val; },
            [](const RunConfig& c) { return c.data.test_csv; });

        add("model.kind",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                try {
                    model_kind_from_string(val);
                } catch (const Error& e) {
                    bad("model.kind", e.what(), ln);
                }
                c.model_kind = val;
            },
            [](const RunConfig& c) { return c.model_kind; });
        add("model.dict_size",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.model.dict_size = parse_u64("model.dict_size", val, ln);
                if (c.model.dict_size == 0) bad("model.dict_size", "must be >= 1", ln);
            },
            [](const RunConfig& c) { return std::to_string(c.model.dict_size); });
        add("model.hidden",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.model.hidden = parse_size_list("model.hidden", val, ln);
            },
            [](const RunConfig& c) { return join_sizes(c.model.hidden); });

        add("train.learning_rate",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.train.learning_rate = parse_double("train.learning_rate", val, ln);
                if (!(c.train.learning_rate > 0.0)) bad("train.learning_rate", "must be > 0", ln);
            },
            [](const RunConfig& c) { return format_double(c.train.learning_rate); });
        add("train.momentum",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.train.momentum = parse_double("train.momentum", val, ln);
                if (c.train.momentum < 0.0 || c.train.momentum >= 1.0)
                    bad("train.momentum", "must be in [0, 1)", ln);
            },
            [](const RunConfig& c) { return format_double(c.train.momentum); });
        add("train.batch_size",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.train.batch_size = parse_u64("train.batch_size", val, ln);
                if (c.train.batch_size == 0) bad("train.batch_size", "must be >= 1", ln);
            },
            [](const RunConfig& c) { return std::to_string(c.train.batch_size); });
        add("train.epochs",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.train.epochs = parse_u64("train.epochs", val, ln);
            },
            [](const RunConfig& c) { return std::to_string(c.train.epochs); });
        add("train.l2_penalty",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.train.l2_penalty = parse_double("train.l2_penalty", val, ln);
                if (c.train.l2_penalty < 0.0) bad("train.l2_penalty", "must be >= 0", ln);
            },
            [](const RunConfig& c) { return format_double(c.train.l2_penalty); });
        add("train.eval_every",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.train.eval_every = parse_u64("train.eval_every", val, ln);
                if (c.train.eval_every == 0) bad("train.eval_every", "must be >= 1", ln);
            },
            [](const RunConfig& c) { return std::to_string(c.train.eval_every); });
        add("train.check_invariants",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.train.check_invariants = parse_bool("train.check_invariants", val, ln);
            },
            [](const RunConfig& c) { return c.train.check_invariants ? "true" : "false"; });

        add("lime.sigma",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.lime.kernel.sigma = parse_double("lime.sigma", val, ln);
            },
            [](const RunConfig& c) { return format_double(c.lime.kernel.sigma); });
        add("lime.distance",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                try {
                    c.lime.kernel.distance = distance_from_string(val);
                } catch (const Error& e) {
                    bad("lime.distance", e.what(), ln);
                }
            },
            [](const RunConfig& c) { return to_string(c.lime.kernel.distance); });
        add("lime.n_samples",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.lime.n_samples = parse_u64("lime.n_samples", val, ln);
                if (c.lime.n_samples == 0) bad("lime.n_samples", "must be >= 1", ln);
            },
            [](const RunConfig& c) { return std::to_string(c.lime.n_samples); });
        add("lime.perturb_scale",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.lime.perturb_scale = parse_double("lime.perturb_scale", val, ln);
                if (c.lime.perturb_scale < 0.0) bad("lime.perturb_scale", "must be >= 0", ln);
            },
            [](const RunConfig& c) { return format_double(c.lime.perturb_scale); });
        add("lime.l1_penalty",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.lime.l1_penalty = parse_double("lime.l1_penalty", val, ln);
                if (c.lime.l1_penalty < 0.0) bad("lime.l1_penalty", "must be >= 0", ln);
            },
            [](const RunConfig& c) { return format_double(c.lime.l1_penalty); });
        add("lime.max_features",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                const std::uint64_t mf = parse_u64("lime.max_features", val, ln);
                if (mf == 0)
                    c.lime.max_features.reset();
                else
                    c.lime.max_features = mf;
            },
            [](const RunConfig& c) {
                return std::to_string(c.lime.max_features ? *c.lime.max_features : 0);
            });
        add("lime.ridge_penalty",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.lime.ridge_penalty = parse_double("lime.ridge_penalty", val, ln);
                if (c.lime.ridge_penalty < 0.0) bad("lime.ridge_penalty", "must be >= 0", ln);
            },
            [](const RunConfig& c) { return format_double(c.lime.ridge_penalty); });

        add("sweep.snr_levels",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.snr_levels = parse_double_list("sweep.snr_levels", val, ln);
            },
            [](const RunConfig& c) { return join_doubles(c.snr_levels); });
        add("sweep.feature_fractions",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.feature_fractions = parse_double_list("sweep.feature_fractions", val, ln);
            },
            [](const RunConfig& c) { return join_doubles(c.feature_fractions); });
        add("sweep.data_fractions",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.data_fractions = parse_double_list("sweep.data_fractions", val, ln);
            },
            [](const RunConfig& c) { return join_doubles(c.data_fractions); });
        add("sweep.n_trials",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.n_trials = static_cast<int>(parse_u64("sweep.n_trials", val, ln));
                if (c.n_trials < 1) bad("sweep.n_trials", "must be >= 1", ln);
            },
            [](const RunConfig& c) { return std::to_string(c.n_trials); });
        add("sweep.lime_eval_instances",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.lime_eval_instances = parse_u64("sweep.lime_eval_instances", val, ln);
                if (c.lime_eval_instances == 0) bad("sweep.lime_eval_instances", "must be >= 1", ln);
            },
            [](const RunConfig& c) { return std::to_string(c.lime_eval_instances); });
        add("sweep.table_models",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.table_models = split_list(val);
                if (c.table_models.empty()) bad("sweep.table_models", "must be nonempty", ln);
            },
            [](const RunConfig& c) { return join_strings(c.table_models); });

        add("run.out_dir",
            [](RunConfig& c, const std::string& val, std::size_t) { c.out_dir = val; },
            [](const RunConfig& c) { return c.out_dir; });
        add("run.seed",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.seed = parse_u64("run.seed", val, ln);
            },
            [](const RunConfig& c) { return std::to_string(c.seed); });
        add("run.jobs",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.jobs = parse_u64("run.jobs", val, ln);
                if (c.jobs == 0) bad("run.jobs", "must be >= 1", ln);
            },
            [](const RunConfig& c) { return std::to_string(c.jobs); });

        add("prepare.fraction",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.prepare_fraction = parse_double("prepare.fraction", val, ln);
                if (!(c.prepare_fraction > 0.0) || c.prepare_fraction > 1.0)
                    bad("prepare.fraction", "must be in (0, 1]", ln);
            },
            [](const RunConfig& c) { return format_double(c.prepare_fraction); });

        add("explain.checkpoint",
            [](RunConfig& c, const std::string& val, std::size_t) { c.explain_checkpoint = val; },
            [](const RunConfig& c) { return c.explain_checkpoint; });
        add("explain.instance",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                c.explain_instance = parse_u64("explain.instance", val, ln);
            },
            [](const RunConfig& c) { return std::to_string(c.explain_instance); });
        add("explain.method",
            [](RunConfig& c, const std::string& val, std::size_t ln) {
                if (val != "lime" && val != "cen") bad("explain.method", "expected lime|cen", ln);
                c.explain_method = val;
            },
            [](const RunConfig& c) { return c.explain_method; });

        add("report.path",
            [](RunConfig& c, const std::string& val, std::size_t) { c.report_path = val; },
            [](const RunConfig& c) { return c.report_path; });

        return v;
    }();
    return s;
}

}  // namespace

std::string to_string(Command c) {
    switch (c) {
        case Command::prepare: return "prepare";
        case Command::train_cmd: return "train";
        case Command::explain_cmd: return "explain";
        case Command::sweep: return "sweep";
        case Command::report: return "report";
    }
    return "?";
}

FeatureKind DataConfig::resolved_features() const {
    if (features == "auto")
        return kind == "mnist" ? FeatureKind::pxl : FeatureKind::synthetic;
    return feature_kind_from_string(features);
}

SweepConfig RunConfig::sweep_config() const {
    SweepConfig s;
    s.snr_levels = snr_levels;
    s.feature_fractions = feature_fractions;
    s.data_fractions = data_fractions;
    s.n_trials = n_trials;
    s.train = train;
    s.model = model;
    s.lime = lime;
    s.lime_eval_instances = lime_eval_instances;
    s.features = data.resolved_features();
    s.feature_params = data.fparams;
    s.table_models = table_models;
    s.jobs = jobs;
    s.seed_base = seed;
    return s;
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value,
                        std::size_t line) {
    for (const auto& b : schema()) {
        if (key == b.key) {
            b.set(cfg, value, line);
            return;
        }
    }
    std::string msg = "unknown config key '" + key + "'";
    if (line) msg += " (line " + std::to_string(line) + ")";
    throw ConfigError(msg);
}

RunConfig parse_run_config(const std::vector<ConfigEntry>& file_entries,
                           const std::vector<ConfigEntry>& overrides) {
    RunConfig cfg;
    for (const auto& e : file_entries) apply_config_entry(cfg, e.key, e.value, e.line);
    for (const auto& e : overrides) apply_config_entry(cfg, e.key, e.value, e.line);
    return cfg;
}

void validate_run_config(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    const auto require_file = [](const std::string& path, const std::string& key) {
        if (path.empty()) throw ConfigError("config key '" + key + "' is required but empty");
        if (!fs::exists(path))
            throw ConfigError("config key '" + key + "': path does not exist: " + path);
    };

    cfg.train.validate();
    if (cfg.data.kind == "synthetic") {
        if (cfg.data.synth.n == 0) throw ConfigError("config key 'data.synth_n': must be >= 1");
        if (cfg.data.synth.classes < 2)
            throw ConfigError("config key 'data.synth_classes': must be >= 2");
    }

    const bool needs_dataset = cfg.command != Command::report;
    if (needs_dataset) {
        if (cfg.data.kind == "mnist") {
            require_file(cfg.data.dir, "data.dir");
            for (const char* f : {"train-images-idx3-ubyte", "train-labels-idx1-ubyte",
                                  "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"})
                require_file(cfg.data.dir + "/" + f, "data.dir");
        } else if (cfg.data.kind == "csv") {
            require_file(cfg.data.train_csv, "data.train_csv");
            if (!cfg.data.val_csv.empty()) require_file(cfg.data.val_csv, "data.val_csv");
            if (!cfg.data.test_csv.empty()) require_file(cfg.data.test_csv, "data.test_csv");
        }
        const FeatureKind fk = cfg.data.resolved_features();
        if (cfg.data.kind != "mnist" && (fk == FeatureKind::pxl || fk == FeatureKind::hog) &&
            cfg.data.kind == "synthetic")
            throw ConfigError(
                "config key 'data.features': pxl/hog need square images; synthetic data uses "
                "'synthetic'");
    }

    if (cfg.command == Command::explain_cmd)
        require_file(cfg.explain_checkpoint, "explain.checkpoint");
    if (cfg.command == Command::report) require_file(cfg.report_path, "report.path");
    if (cfg.command == Command::sweep) {
        if (cfg.sweep_kind != "noise" && cfg.sweep_kind != "features" &&
            cfg.sweep_kind != "samples" && cfg.sweep_kind != "table" &&
            cfg.sweep_kind != "convergence")
            throw ConfigError(
                "sweep kind must be one of noise|features|samples|table|convergence, got '" +
                cfg.sweep_kind + "'");
        cfg.sweep_config().validate();
    }
    if (cfg.command == Command::train_cmd || cfg.command == Command::explain_cmd)
        model_kind_from_string(cfg.model_kind);
}

std::string effective_config(const RunConfig& cfg) {
    std::string out = "# effective configuration (explain-lab)\n";
    for (const auto& b : schema()) {
        out += b.key;
        out += " = ";
        out += b.get(cfg);
        out += "\n";
    }
    return out;
}

}  // namespace xlab
