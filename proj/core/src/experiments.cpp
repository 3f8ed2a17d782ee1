#include "xlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <memory>
#include <thread>

#include "xlab/errors.hpp"
#include "xlab/rng.hpp"

namespace xlab {

namespace {

// Experiment ids and sub-stream tags for seed derivation.
constexpr std::uint64_t kExpNoise = 1, kExpFeatures = 2, kExpSamples = 3, kExpTable = 4,
                        kExpConv = 5;
constexpr std::uint64_t kBaselineTag = 100, kTrainTag = 101, kNoiseTrainTag = 102,
                        kNoiseTestTag = 103, kLimePhiTag = 104, kLimeFitTag = 105,
                        kDimsTag = 106, kFracTag = 107, kEvalPickTag = 108;

struct Prepared {
    const SplitData* raw = nullptr;
    FeatureKind kind = FeatureKind::pxl;
    FeatureParams fp;
    Matrix Ztr_raw, Zte_raw;  // raw interpretable features
    Standardizer stdz;        // fitted on clean train features
    Dataset train_ds, val_ds, test_ds;  // standardized clean Z attached
    Vector xlo, xhi;          // raw-input box from the training inputs
};

Matrix raw_features(const Dataset& d, FeatureKind kind, const FeatureParams& fp) {
    if (kind == FeatureKind::synthetic && !d.Z.empty()) return d.Z;
    return extract_features(d.X, kind, fp);
}

Prepared prepare(const SplitData& data, FeatureKind kind, const FeatureParams& fp) {
    Prepared p;
    p.raw = &data;
    p.kind = kind;
    p.fp = fp;
    p.Ztr_raw = raw_features(data.train, kind, fp);
    p.stdz = Standardizer::fit(p.Ztr_raw);

    p.train_ds = data.train;
    p.train_ds.Z = p.stdz.transform(p.Ztr_raw);
    p.train_ds.feature_kind = kind;
    if (data.val.size() > 0) {
        p.val_ds = data.val;
        p.val_ds.Z = p.stdz.transform(raw_features(data.val, kind, fp));
        p.val_ds.feature_kind = kind;
    }
    if (data.test.size() > 0) {
        p.Zte_raw = raw_features(data.test, kind, fp);
        p.test_ds = data.test;
        p.test_ds.Z = p.stdz.transform(p.Zte_raw);
        p.test_ds.feature_kind = kind;
    }

    p.xlo.assign(data.train.X.cols(), 0.0);
    p.xhi.assign(data.train.X.cols(), 0.0);
    for (std::size_t j = 0; j < data.train.X.cols(); ++j) {
        double lo = data.train.X(0, j), hi = lo;
        for (std::size_t i = 1; i < data.train.X.rows(); ++i) {
            lo = std::min(lo, data.train.X(i, j));
            hi = std::max(hi, data.train.X(i, j));
        }
        p.xlo[j] = lo;
        p.xhi[j] = hi;
    }
    return p;
}

BatchPredictor make_predictor(const Model& model) {
    return [&model](const Matrix& X) { return predict_proba(model, X, Matrix()); };
}

std::size_t argmax(std::span<const double> v) {
    std::size_t a = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[a]) a = i;
    return a;
}

std::vector<std::size_t> eval_instances(const SweepConfig& cfg, std::uint64_t exp_id,
                                        std::size_t test_n) {
    Rng pick = Rng(cfg.seed_base).derive(exp_id, kEvalPickTag);
    const auto perm = pick.permutation(test_n);
    const std::size_t n = std::min(cfg.lime_eval_instances, test_n);
    return {perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n)};
}

// Shared core of the two corruption sweeps. `make_phi(ci, instance)` builds
// the per-instance feature map for condition ci; `corrupt_test(ci)` returns
// the standardized corrupted test features used both for the dictionary
// model and for scoring explanations.
struct CorruptionHooks {
    std::function<Matrix(std::size_t)> corrupt_train;           // standardized train Z at ci
    std::function<Matrix(std::size_t)> corrupt_test;            // standardized test Z at ci
    std::function<FeatureMap(std::size_t, std::size_t)> make_phi;  // (ci, eval index)
};

TrialResult corruption_trial(const Prepared& p, const SweepConfig& cfg, int trial,
                             const std::string& exp_name, std::uint64_t exp_id,
                             const std::vector<double>& conditions,
                             const CorruptionHooks& hooks) {
    TrialResult out;
    const Rng trial_rng = Rng(cfg.seed_base).derive(exp_id, static_cast<std::uint64_t>(trial));

    // Baseline on clean x, one per trial, reused across conditions.
    bool baseline_ok = false;
    TrainResult baseline;
    double baseline_err = 0.0;
    try {
        TrainConfig btc = cfg.train;
        btc.seed = trial_rng.derive(kBaselineTag).seed();
        btc.eval_every = std::max<std::size_t>(btc.epochs, 1);
        baseline = train(ModelKind::mlp, p.train_ds, nullptr, cfg.model, btc);
        baseline_err = evaluate(baseline.model, p.test_ds).error_rate;
        baseline_ok = true;
    } catch (const Error& e) {
        out.failures.push_back(exp_name + " trial " + std::to_string(trial) + " baseline: " +
                               e.what());
    }

    const auto idx = eval_instances(cfg, exp_id, p.test_ds.size());
    Matrix Xe, f_probs;
    if (baseline_ok) {
        Xe = p.test_ds.X.take_rows(idx);
        f_probs = predict_proba(baseline.model, Xe, Matrix());
    }

    for (std::size_t ci = 0; ci < conditions.size(); ++ci) {
        const double cond = conditions[ci];
        if (baseline_ok)
            out.rows.push_back({exp_name, cond, "mlp", trial, "test_error", baseline_err});

        Matrix Zte_c;
        bool test_ok = false;
        try {
            Zte_c = hooks.corrupt_test(ci);
            test_ok = true;
        } catch (const Error& e) {
            out.failures.push_back(exp_name + " trial " + std::to_string(trial) + " condition " +
                                   format_double(cond) + " corruption: " + e.what());
        }

        if (test_ok) {
            try {
                TrainConfig tc = cfg.train;
                tc.seed = trial_rng.derive(kTrainTag, ci).seed();
                tc.eval_every = std::max<std::size_t>(tc.epochs, 1);
                Dataset train_c = p.train_ds;
                train_c.Z = hooks.corrupt_train(ci);
                const TrainResult cen = train(ModelKind::cen, train_c, nullptr, cfg.model, tc);
                Dataset test_c = p.test_ds;
                test_c.Z = Zte_c;
                out.rows.push_back({exp_name, cond, "cen", trial, "test_error",
                                    evaluate(cen.model, test_c).error_rate});
            } catch (const Error& e) {
                out.failures.push_back(exp_name + " trial " + std::to_string(trial) +
                                       " condition " + format_double(cond) + " cen: " + e.what());
            }
        }

        if (baseline_ok && test_ok) {
            try {
                const BatchPredictor f = make_predictor(baseline.model);
                std::size_t agree = 0, wrong = 0;
                for (std::size_t ii = 0; ii < idx.size(); ++ii) {
                    const FeatureMap phi = hooks.make_phi(ci, ii);
                    LimeConfig lc = cfg.lime;
                    lc.seed = trial_rng.derive(kLimeFitTag, ci, ii).seed();
                    const LinearExplanation e = explain(f, Xe.row_copy(ii), phi, lc);
                    const Vector gz = e.logits(Zte_c.row_copy(idx[ii]));
                    const std::size_t g_arg = argmax(gz);
                    if (g_arg == argmax(f_probs.row(ii))) ++agree;
                    if (g_arg != static_cast<std::size_t>(p.test_ds.y[idx[ii]])) ++wrong;
                }
                const double n = static_cast<double>(idx.size());
                out.rows.push_back({exp_name, cond, "lime", trial, "fidelity", agree / n});
                out.rows.push_back(
                    {exp_name, cond, "lime", trial, "explanation_test_error", wrong / n});
            } catch (const Error& e) {
                out.failures.push_back(exp_name + " trial " + std::to_string(trial) +
                                       " condition " + format_double(cond) + " lime: " + e.what());
            }
        }
    }
    return out;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string list_str(const std::vector<double>& v) {
    std::string s;
    for (double x : v) {
        s += format_double(x);
        s += ',';
    }
    return s;
}

std::string sweep_config_canonical(const SweepConfig& c) {
    std::string s;
    s += "snr=" + list_str(c.snr_levels) + ";";
    s += "ff=" + list_str(c.feature_fractions) + ";";
    s += "df=" + list_str(c.data_fractions) + ";";
    s += "trials=" + std::to_string(c.n_trials) + ";";
    s += "lr=" + format_double(c.train.learning_rate) + ";";
    s += "mom=" + format_double(c.train.momentum) + ";";
    s += "batch=" + std::to_string(c.train.batch_size) + ";";
    s += "epochs=" + std::to_string(c.train.epochs) + ";";
    s += "l2=" + format_double(c.train.l2_penalty) + ";";
    s += "K=" + std::to_string(c.model.dict_size) + ";";
    s += "hidden=";
    for (auto h : c.model.hidden) s += std::to_string(h) + ",";
    s += ";sigma=" + format_double(c.lime.kernel.sigma) + ";";
    s += "dist=" + to_string(c.lime.kernel.distance) + ";";
    s += "ns=" + std::to_string(c.lime.n_samples) + ";";
    s += "ps=" + format_double(c.lime.perturb_scale) + ";";
    s += "l1=" + format_double(c.lime.l1_penalty) + ";";
    s += "mf=" + (c.lime.max_features ? std::to_string(*c.lime.max_features) : "none") + ";";
    s += "ridge=" + format_double(c.lime.ridge_penalty) + ";";
    s += "li=" + std::to_string(c.lime_eval_instances) + ";";
    s += "feat=" + to_string(c.features) + ";";
    s += "grid=" + std::to_string(c.feature_params.pxl.grid) + ";";
    s += "hog=" + std::to_string(c.feature_params.hog.cell) + "," +
         std::to_string(c.feature_params.hog.bins) + "," +
         std::to_string(c.feature_params.hog.block) + "," +
         std::to_string(c.feature_params.hog.stride) + ";";
    s += "models=";
    for (const auto& m : c.table_models) s += m + ",";
    s += ";seed=" + std::to_string(c.seed_base);
    return s;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<TrialResult> run_parallel(std::size_t n_tasks, std::size_t jobs,
                                      const std::function<TrialResult(std::size_t)>& work) {
    std::vector<TrialResult> results(n_tasks);
    if (jobs <= 1) {
        for (std::size_t t = 0; t < n_tasks; ++t) results[t] = work(t);
        return results;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t workers = std::min(jobs, n_tasks);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                const std::size_t t = next.fetch_add(1);
                if (t >= n_tasks) return;
                results[t] = work(t);
            }
        });
    for (auto& th : pool) th.join();
    return results;
}

SweepReport assemble(const SweepConfig& cfg, std::vector<TrialResult> parts) {
    SweepReport rep;
    rep.seed_base = cfg.seed_base;
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(sweep_config_canonical(cfg))));
    rep.config_hash = buf;
    rep.timestamp = utc_now();
    for (auto& p : parts) {
        rep.rows.insert(rep.rows.end(), p.rows.begin(), p.rows.end());
        rep.failures.insert(rep.failures.end(), p.failures.begin(), p.failures.end());
    }
    rep.sort_canonical();
    rep.validate();
    return rep;
}

void require_split(const Dataset& d, const char* which) {
    if (d.size() == 0)
        throw ParameterError(std::string("sweep: dataset is missing its ") + which + " split");
}

CorruptionHooks noise_hooks(const Prepared& p, const Rng& trial_rng,
                            std::shared_ptr<std::vector<Vector>> sds) {
    CorruptionHooks h;
    const auto* prep = &p;
    h.corrupt_train = [prep, trial_rng, sds](std::size_t ci) {
        return prep->stdz.transform(inject_noise_sd(prep->Ztr_raw, (*sds)[ci],
                                                    trial_rng.derive(kNoiseTrainTag, ci).seed()));
    };
    h.corrupt_test = [prep, trial_rng, sds](std::size_t ci) {
        return prep->stdz.transform(inject_noise_sd(prep->Zte_raw, (*sds)[ci],
                                                    trial_rng.derive(kNoiseTestTag, ci).seed()));
    };
    h.make_phi = [prep, trial_rng, sds](std::size_t ci, std::size_t ii) {
        FeatureMap phi;
        phi.lo = prep->xlo;
        phi.hi = prep->xhi;
        auto rng = std::make_shared<Rng>(trial_rng.derive(kLimePhiTag, ci, ii).seed());
        const Vector* sd = &(*sds)[ci];
        phi.map = [prep, rng, sd, sds](const Vector& x) {
            Vector z = extract_features_row(x, prep->kind, prep->fp);
            for (std::size_t j = 0; j < z.size(); ++j) {
                const double g = rng->normal();
                if ((*sd)[j] > 0.0) z[j] += (*sd)[j] * g;
            }
            return prep->stdz.transform(z);
        };
        return phi;
    };
    return h;
}

CorruptionHooks feature_hooks(const Prepared& p,
                              std::shared_ptr<std::vector<std::vector<std::size_t>>> kept) {
    CorruptionHooks h;
    const auto* prep = &p;
    h.corrupt_train = [prep, kept](std::size_t ci) {
        return subsample_features(prep->train_ds.Z, (*kept)[ci]);
    };
    h.corrupt_test = [prep, kept](std::size_t ci) {
        return subsample_features(prep->test_ds.Z, (*kept)[ci]);
    };
    h.make_phi = [prep, kept](std::size_t ci, std::size_t) {
        FeatureMap phi;
        phi.lo = prep->xlo;
        phi.hi = prep->xhi;
        const std::vector<std::size_t>* dims = &(*kept)[ci];
        phi.map = [prep, dims](const Vector& x) {
            const Vector z =
                prep->stdz.transform(extract_features_row(x, prep->kind, prep->fp));
            Vector out(dims->size());
            for (std::size_t k = 0; k < dims->size(); ++k) out[k] = z[(*dims)[k]];
            return out;
        };
        return phi;
    };
    return h;
}

}  // namespace

void SweepConfig::validate() const {
    if (snr_levels.empty() || feature_fractions.empty() || data_fractions.empty())
        throw ParameterError("sweep: condition grids must be nonempty");
    for (double s : snr_levels)
        if (!(s > 0.0)) throw ParameterError("sweep: snr levels must be positive");
    for (double f : feature_fractions)
        if (!(f > 0.0) || f > 1.0) throw ParameterError("sweep: feature fractions must be in (0,1]");
    for (double f : data_fractions)
        if (!(f > 0.0) || f > 1.0) throw ParameterError("sweep: data fractions must be in (0,1]");
    if (n_trials < 1) throw ParameterError("sweep: n_trials must be >= 1");
    if (jobs < 1) throw ParameterError("sweep: jobs must be >= 1");
    if (lime_eval_instances < 1) throw ParameterError("sweep: lime_eval_instances must be >= 1");
    train.validate();
}

TrialResult noise_trial(const SplitData& data, const SweepConfig& cfg, int trial) {
    cfg.validate();
    require_split(data.train, "train");
    require_split(data.test, "test");
    const Prepared p = prepare(data, cfg.features, cfg.feature_params);
    const Rng trial_rng = Rng(cfg.seed_base).derive(kExpNoise, static_cast<std::uint64_t>(trial));
    auto sds = std::make_shared<std::vector<Vector>>();
    for (double snr : cfg.snr_levels) sds->push_back(column_noise_sd(p.Ztr_raw, snr));
    return corruption_trial(p, cfg, trial, "noise", kExpNoise, cfg.snr_levels,
                            noise_hooks(p, trial_rng, sds));
}

TrialResult feature_trial(const SplitData& data, const SweepConfig& cfg, int trial) {
    cfg.validate();
    require_split(data.train, "train");
    require_split(data.test, "test");
    const Prepared p = prepare(data, cfg.features, cfg.feature_params);
    const Rng trial_rng =
        Rng(cfg.seed_base).derive(kExpFeatures, static_cast<std::uint64_t>(trial));
    auto kept = std::make_shared<std::vector<std::vector<std::size_t>>>();
    for (std::size_t ci = 0; ci < cfg.feature_fractions.size(); ++ci)
        kept->push_back(draw_kept_dims(p.train_ds.Z.cols(), cfg.feature_fractions[ci],
                                       trial_rng.derive(kDimsTag, ci).seed()));
    return corruption_trial(p, cfg, trial, "features", kExpFeatures, cfg.feature_fractions,
                            feature_hooks(p, kept));
}

TrialResult sample_trial(const SplitData& data, const SweepConfig& cfg,
                         std::size_t fraction_index, int trial) {
    cfg.validate();
    require_split(data.train, "train");
    require_split(data.val, "val");
    if (fraction_index >= cfg.data_fractions.size())
        throw ParameterError("sample_trial: fraction index out of range");
    const Prepared p = prepare(data, cfg.features, cfg.feature_params);
    const Rng trial_rng = Rng(cfg.seed_base).derive(kExpSamples, static_cast<std::uint64_t>(trial));
    const double fraction = cfg.data_fractions[fraction_index];

    TrialResult out;
    Dataset sub;
    try {
        sub = take_fraction(p.train_ds, fraction,
                            trial_rng.derive(kFracTag, fraction_index).seed());
    } catch (const Error& e) {
        out.failures.push_back("samples trial " + std::to_string(trial) + " fraction " +
                               format_double(fraction) + ": " + e.what());
        return out;
    }
    const ModelKind kinds[] = {ModelKind::linear, ModelKind::mlp, ModelKind::moe, ModelKind::cen};
    for (std::size_t mi = 0; mi < 4; ++mi) {
        try {
            TrainConfig tc = cfg.train;
            tc.seed = trial_rng.derive(kTrainTag, fraction_index, mi).seed();
            tc.eval_every = std::max<std::size_t>(tc.epochs, 1);
            const TrainResult r = train(kinds[mi], sub, nullptr, cfg.model, tc);
            out.rows.push_back({"samples", fraction, to_string(kinds[mi]), trial, "val_error",
                                evaluate(r.model, p.val_ds).error_rate});
        } catch (const Error& e) {
            out.failures.push_back("samples trial " + std::to_string(trial) + " fraction " +
                                   format_double(fraction) + " " + to_string(kinds[mi]) + ": " +
                                   e.what());
        }
    }
    return out;
}

namespace {

struct TableModelSpec {
    ModelKind kind;
    FeatureKind features;
};

TableModelSpec parse_table_model(const std::string& name) {
    const auto split = name.find('_');
    const std::string head = split == std::string::npos ? name : name.substr(0, split);
    TableModelSpec spec{model_kind_from_string(head), FeatureKind::pxl};
    if (split != std::string::npos)
        spec.features = feature_kind_from_string(name.substr(split + 1));
    else if (spec.kind != ModelKind::mlp)
        throw ParameterError("table model '" + name + "' needs a feature suffix (_pxl or _hog)");
    return spec;
}

}  // namespace

TrialResult table_trial(const SplitData& data, const SweepConfig& cfg, std::size_t model_index,
                        int trial) {
    cfg.validate();
    require_split(data.train, "train");
    require_split(data.test, "test");
    if (model_index >= cfg.table_models.size())
        throw ParameterError("table_trial: model index out of range");
    const std::string& name = cfg.table_models[model_index];
    const TableModelSpec spec = parse_table_model(name);
    // The MLP never looks at z; reuse the cheap feature kind for it.
    const FeatureKind fk = spec.kind == ModelKind::mlp ? cfg.features : spec.features;
    const Prepared p = prepare(data, fk, cfg.feature_params);
    const Rng trial_rng = Rng(cfg.seed_base).derive(kExpTable, static_cast<std::uint64_t>(trial));

    TrialResult out;
    try {
        TrainConfig tc = cfg.train;
        tc.seed = trial_rng.derive(kTrainTag, model_index).seed();
        tc.eval_every = std::max<std::size_t>(tc.epochs, 1);
        const TrainResult r = train(spec.kind, p.train_ds, nullptr, cfg.model, tc);
        const EvalResult ev = evaluate(r.model, p.test_ds);
        out.rows.push_back({"table", 0.0, name, trial, "test_error", ev.error_rate});
        out.rows.push_back({"table", 0.0, name, trial, "test_xent", ev.mean_xent});
    } catch (const Error& e) {
        out.failures.push_back("table trial " + std::to_string(trial) + " " + name + ": " +
                               e.what());
    }
    return out;
}

TrialResult convergence_trial(const SplitData& data, const SweepConfig& cfg, int trial) {
    cfg.validate();
    require_split(data.train, "train");
    const Prepared p = prepare(data, cfg.features, cfg.feature_params);
    const Rng trial_rng = Rng(cfg.seed_base).derive(kExpConv, static_cast<std::uint64_t>(trial));

    TrialResult out;
    TrainConfig tc = cfg.train;
    tc.seed = trial_rng.derive(kTrainTag).seed();  // shared: seed-matched batch order
    tc.eval_every = 1;
    const std::pair<ModelKind, const char*> kinds[] = {{ModelKind::mlp, "mlp"},
                                                       {ModelKind::cen, "cen"}};
    for (const auto& [kind, name] : kinds) {
        try {
            const TrainResult r = train(kind, p.train_ds, nullptr, cfg.model, tc);
            for (const auto& row : r.log) {
                out.rows.push_back({"convergence", static_cast<double>(row.epoch), name, trial,
                                    "train_error", row.train_error});
                out.rows.push_back({"convergence", static_cast<double>(row.epoch), name, trial,
                                    "train_loss", row.train_loss});
            }
        } catch (const Error& e) {
            out.failures.push_back("convergence trial " + std::to_string(trial) + " " + name +
                                   ": " + e.what());
        }
    }
    return out;
}

SweepReport run_noise_sweep(const SplitData& data, const SweepConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(cfg.n_trials);
    return assemble(cfg, run_parallel(n, cfg.jobs, [&](std::size_t t) {
                        return noise_trial(data, cfg, static_cast<int>(t));
                    }));
}

SweepReport run_feature_sweep(const SplitData& data, const SweepConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(cfg.n_trials);
    return assemble(cfg, run_parallel(n, cfg.jobs, [&](std::size_t t) {
                        return feature_trial(data, cfg, static_cast<int>(t));
                    }));
}

SweepReport run_sample_complexity(const SplitData& data, const SweepConfig& cfg) {
    cfg.validate();
    const std::size_t n_frac = cfg.data_fractions.size();
    const auto n_tasks = n_frac * static_cast<std::size_t>(cfg.n_trials);
    return assemble(cfg, run_parallel(n_tasks, cfg.jobs, [&](std::size_t t) {
                        return sample_trial(data, cfg, t % n_frac, static_cast<int>(t / n_frac));
                    }));
}

SweepReport run_table(const SplitData& data, const SweepConfig& cfg) {
    cfg.validate();
    const std::size_t n_models = cfg.table_models.size();
    const auto n_tasks = n_models * static_cast<std::size_t>(cfg.n_trials);
    auto parts = run_parallel(n_tasks, cfg.jobs, [&](std::size_t t) {
        return table_trial(data, cfg, t % n_models, static_cast<int>(t / n_models));
    });
    // mean +/- std aggregates per model
    TrialResult agg;
    std::vector<SweepRow> all;
    for (const auto& p : parts) all.insert(all.end(), p.rows.begin(), p.rows.end());
    for (const auto& name : cfg.table_models) {
        const auto v = select_values(all, "table", 0.0, name, "test_error");
        if (v.empty()) continue;
        agg.rows.push_back({"table", 0.0, name, 0, "test_error_mean", mean_of(v)});
        agg.rows.push_back({"table", 0.0, name, 0, "test_error_std", std_of(v)});
    }
    parts.push_back(std::move(agg));
    return assemble(cfg, std::move(parts));
}

SweepReport convergence_compare(const SplitData& data, const SweepConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(cfg.n_trials);
    return assemble(cfg, run_parallel(n, cfg.jobs, [&](std::size_t t) {
                        return convergence_trial(data, cfg, static_cast<int>(t));
                    }));
}

}  // namespace xlab
