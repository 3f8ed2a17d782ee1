#include "xlab/lime.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "xlab/errors.hpp"
#include "xlab/rng.hpp"

namespace xlab {

std::string to_string(DistanceKind d) {
    return d == DistanceKind::euclidean ? "euclidean" : "cosine";
}

DistanceKind distance_from_string(const std::string& s) {
    if (s == "euclidean") return DistanceKind::euclidean;
    if (s == "cosine") return DistanceKind::cosine;
    throw ParameterError("unknown distance '" + s + "' (expected euclidean|cosine)");
}

double kernel_distance(DistanceKind kind, const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("kernel_distance: length mismatch");
    if (kind == DistanceKind::euclidean) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    const double na = std::sqrt(norm_sq(a)), nb = std::sqrt(norm_sq(b));
    if (na == 0.0 || nb == 0.0) return na == nb ? 0.0 : 1.0;
    const double c = dot(a, b) / (na * nb);
    return 1.0 - std::clamp(c, -1.0, 1.0);
}

double kernel_weight(double distance, double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("kernel: sigma must be positive");
    const double r = distance / sigma;
    return std::exp(-r * r);
}

double effective_sigma(const KernelSpec& k, std::size_t dz) {
    return k.sigma > 0.0 ? k.sigma : 0.75 * std::sqrt(static_cast<double>(dz));
}

void LimeConfig::validate(std::size_t dz) const {
    if (n_samples < dz + 1)
        throw ParameterError("lime.n_samples = " + std::to_string(n_samples) +
                             " leaves the system underdetermined (need >= dz+1 = " +
                             std::to_string(dz + 1) + ")");
    if (perturb_scale < 0.0) throw ParameterError("lime.perturb_scale must be >= 0");
    if (l1_penalty < 0.0) throw ParameterError("lime.l1_penalty must be >= 0");
    if (ridge_penalty < 0.0) throw ParameterError("lime.ridge_penalty must be >= 0");
    if (l1_penalty > 0.0 && max_features)
        throw ParameterError("lime: choose either l1_penalty or max_features to drive sparsity, not both");
    if (max_features && *max_features == 0)
        throw ParameterError("lime.max_features must be >= 1 when set");
}

void Neighborhood::validate() const {
    if (Z.rows() != targets.rows() || Z.rows() != weights.size())
        throw DimensionError("neighborhood: row counts disagree");
    if (Z.rows() == 0) throw ParameterError("neighborhood: empty");
    double max_w = 0.0;
    for (double w : weights) {
        if (!(w > 0.0) || w > 1.0)
            throw ParameterError("neighborhood: weights must lie in (0, 1]");
        max_w = std::max(max_w, w);
    }
    if (max_w <= 1e-6) throw KernelError("neighborhood: all weights below 1e-6");
}

Neighborhood sample_neighborhood(const BatchPredictor& f, const Vector& x, const FeatureMap& phi,
                                 const LimeConfig& config) {
    if (x.size() != phi.lo.size() || x.size() != phi.hi.size())
        throw DimensionError("sample_neighborhood: clip bounds do not match input dim");
    const Vector z0 = phi.map(x);
    config.validate(z0.size());
    const double sigma = effective_sigma(config.kernel, z0.size());

    Rng rng = Rng(config.seed).derive(21);
    Matrix Xp(config.n_samples, x.size());
    std::copy(x.begin(), x.end(), Xp.row(0).begin());
    for (std::size_t i = 1; i < config.n_samples; ++i) {
        auto row = Xp.row(i);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double range = phi.hi[j] - phi.lo[j];
            const double g = rng.normal();  // one draw per cell regardless of range
            row[j] = std::clamp(x[j] + config.perturb_scale * range * g, phi.lo[j], phi.hi[j]);
        }
    }

    Neighborhood n;
    n.Z = Matrix(config.n_samples, z0.size());
    std::copy(z0.begin(), z0.end(), n.Z.row(0).begin());
    for (std::size_t i = 1; i < config.n_samples; ++i) {
        const Vector zi = phi.map(Xp.row_copy(i));
        if (zi.size() != z0.size())
            throw DimensionError("sample_neighborhood: feature map changed output length");
        std::copy(zi.begin(), zi.end(), n.Z.row(i).begin());
    }
    n.targets = f(Xp);
    if (n.targets.rows() != config.n_samples)
        throw ContractError("sample_neighborhood: predictor returned wrong row count");

    n.weights.assign(config.n_samples, 0.0);
    double max_rest = 0.0;
    for (std::size_t i = 0; i < config.n_samples; ++i) {
        const double d = kernel_distance(config.kernel.distance, z0, n.Z.row_copy(i));
        n.weights[i] = kernel_weight(d, sigma);
        if (i > 0) max_rest = std::max(max_rest, n.weights[i]);
    }
    if (config.n_samples > 1 && max_rest < 1e-6)
        throw KernelError("kernel too narrow: every perturbed sample has weight < 1e-6; "
                          "increase lime.sigma");
    return n;
}

namespace {

// Weighted, centered normal-equation quantities shared by all classes.
struct CenteredProblem {
    double s0 = 0.0;   // sum of weights
    Vector mu;         // weighted column means of Z
    Vector tau;        // weighted column means of targets
    Matrix gram;       // centered Z^T Pi Z
    Matrix q;          // centered Z^T Pi T (dz x C)
};

CenteredProblem center(const Neighborhood& n) {
    const std::size_t dz = n.Z.cols(), C = n.targets.cols(), m = n.Z.rows();
    CenteredProblem p;
    for (double w : n.weights) p.s0 += w;
    p.mu.assign(dz, 0.0);
    p.tau.assign(C, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double w = n.weights[i];
        auto zr = n.Z.row(i);
        auto tr = n.targets.row(i);
        for (std::size_t j = 0; j < dz; ++j) p.mu[j] += w * zr[j];
        for (std::size_t c = 0; c < C; ++c) p.tau[c] += w * tr[c];
    }
    for (double& v : p.mu) v /= p.s0;
    for (double& v : p.tau) v /= p.s0;

    // weighted gram via one gemm on sqrt(w)-scaled rows
    Matrix zs = n.Z, ts = n.targets;
    for (std::size_t i = 0; i < m; ++i) {
        const double sw = std::sqrt(n.weights[i]);
        for (double& v : zs.row(i)) v *= sw;
        for (double& v : ts.row(i)) v *= sw;
    }
    p.gram = Matrix(dz, dz);
    gemm(zs, true, zs, false, 1.0, p.gram);
    p.q = Matrix(dz, C);
    gemm(zs, true, ts, false, 1.0, p.q);
    for (std::size_t j = 0; j < dz; ++j) {
        for (std::size_t k = 0; k < dz; ++k) p.gram(j, k) -= p.s0 * p.mu[j] * p.mu[k];
        for (std::size_t c = 0; c < C; ++c) p.q(j, c) -= p.s0 * p.mu[j] * p.tau[c];
    }
    return p;
}

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

// Coordinate descent for one class on the centered problem, restricted to
// `support` (empty = all coordinates). Returns centered weights.
Vector cd_solve(const CenteredProblem& p, std::size_t cls, double l1, double l2,
                const std::vector<std::size_t>& support, double tol, std::size_t max_sweeps) {
    const std::size_t dz = p.mu.size();
    std::vector<std::size_t> cols = support;
    if (cols.empty())
        for (std::size_t j = 0; j < dz; ++j) cols.push_back(j);

    Vector w(dz, 0.0), gw(dz, 0.0);  // gw = gram * w
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double violation = 0.0;
        for (std::size_t j : cols) {
            const double gjj = p.gram(j, j);
            const double rho = p.q(j, cls) - gw[j] + gjj * w[j];
            double wj = 0.0;
            if (gjj + l2 > 0.0) wj = soft_threshold(rho, l1 / 2.0) / (gjj + l2);
            const double delta = wj - w[j];
            if (delta != 0.0) {
                for (std::size_t k = 0; k < dz; ++k) gw[k] += p.gram(k, j) * delta;
                w[j] = wj;
            }
        }
        // first-order optimality violation over the active columns
        for (std::size_t j : cols) {
            const double g = -2.0 * (p.q(j, cls) - gw[j]) + 2.0 * l2 * w[j];
            double v;
            if (w[j] != 0.0)
                v = std::abs(g + l1 * (w[j] > 0.0 ? 1.0 : -1.0));
            else
                v = std::max(0.0, std::abs(g) - l1);
            violation = std::max(violation, v);
        }
        if (violation <= tol) return w;
    }
    throw IllConditionedError(
        "weighted least squares did not reach optimality; the design may be singular "
        "(consider a positive lime.ridge_penalty)");
}

}  // namespace

LinearExplanation fit_explanation(const Neighborhood& n, const LimeConfig& config) {
    n.validate();
    const std::size_t dz = n.Z.cols(), C = n.targets.cols();
    config.validate(dz);
    const CenteredProblem p = center(n);

    // Cheap singularity screen for the unpenalized case: a Cholesky pivot
    // collapsing on the centered gram means the design has no unique optimum.
    if (config.l1_penalty == 0.0 && config.ridge_penalty == 0.0 && !config.max_features) {
        Matrix chol = p.gram;
        double max_diag = 0.0;
        for (std::size_t j = 0; j < dz; ++j) max_diag = std::max(max_diag, chol(j, j));
        for (std::size_t j = 0; j < dz; ++j) {
            double d = chol(j, j);
            for (std::size_t k = 0; k < j; ++k) d -= chol(j, k) * chol(j, k);
            if (d <= 1e-12 * std::max(max_diag, 1.0))
                throw IllConditionedError(
                    "weighted design is singular and ridge_penalty is 0; add a ridge term or "
                    "more samples");
            const double root = std::sqrt(d);
            chol(j, j) = root;
            for (std::size_t i = j + 1; i < dz; ++i) {
                double v = chol(i, j);
                for (std::size_t k = 0; k < j; ++k) v -= chol(i, k) * chol(j, k);
                chol(i, j) = v / root;
            }
        }
    }

    const double tol = 1e-7;
    const std::size_t max_sweeps = 200000;
    LinearExplanation e;
    e.bias.assign(C, 0.0);
    e.weights = Matrix(dz, C, 0.0);
    for (std::size_t c = 0; c < C; ++c) {
        Vector w;
        if (config.max_features && *config.max_features < dz) {
            // Stage one: walk the l1 path down from lambda_max until the
            // support would exceed the budget; keep the largest support seen.
            double lmax = 0.0;
            for (std::size_t j = 0; j < dz; ++j) lmax = std::max(lmax, 2.0 * std::abs(p.q(j, c)));
            std::vector<std::size_t> best;
            double lambda = lmax;
            for (int step = 0; step < 80 && lambda > 1e-12 * std::max(lmax, 1.0); ++step) {
                const Vector ws = cd_solve(p, c, lambda, config.ridge_penalty, {}, tol, max_sweeps);
                std::vector<std::size_t> sup;
                for (std::size_t j = 0; j < dz; ++j)
                    if (ws[j] != 0.0) sup.push_back(j);
                if (sup.size() > *config.max_features) break;
                if (sup.size() >= best.size()) best = std::move(sup);
                if (best.size() == *config.max_features) break;
                lambda *= 0.8;
            }
            if (best.empty()) {
                w.assign(dz, 0.0);  // nothing survives even a tiny budget
            } else {
                w = cd_solve(p, c, 0.0, config.ridge_penalty, best, tol, max_sweeps);
            }
        } else {
            w = cd_solve(p, c, config.l1_penalty, config.ridge_penalty, {}, tol, max_sweeps);
        }
        double b = p.tau[c];
        for (std::size_t j = 0; j < dz; ++j) {
            e.weights(j, c) = w[j];
            b -= p.mu[j] * w[j];
        }
        e.bias[c] = b;
    }
    return e;
}

LinearExplanation explain(const BatchPredictor& f, const Vector& x, const FeatureMap& phi,
                          const LimeConfig& config) {
    return fit_explanation(sample_neighborhood(f, x, phi, config), config);
}

double fidelity(const LinearExplanation& e, const Matrix& black_box_probs, const Matrix& Z) {
    if (black_box_probs.rows() != Z.rows())
        throw DimensionError("fidelity: probability and feature row counts differ");
    if (Z.rows() == 0) throw ParameterError("fidelity: empty evaluation set");
    std::size_t agree = 0;
    for (std::size_t i = 0; i < Z.rows(); ++i) {
        const Vector gz = e.logits(Z.row_copy(i));
        std::size_t ag = 0, af = 0;
        auto fr = black_box_probs.row(i);
        for (std::size_t c = 1; c < gz.size(); ++c)
            if (gz[c] > gz[ag]) ag = c;
        for (std::size_t c = 1; c < fr.size(); ++c)
            if (fr[c] > fr[af]) af = c;
        if (ag == af) ++agree;
    }
    return static_cast<double>(agree) / static_cast<double>(Z.rows());
}

double fidelity(const LinearExplanation& e, const Neighborhood& n) {
    return fidelity(e, n.targets, n.Z);
}

double explanation_error(const LinearExplanation& e, const Matrix& Z, const std::vector<int>& y) {
    if (Z.rows() != y.size()) throw DimensionError("explanation_error: row counts differ");
    if (Z.rows() == 0) throw ParameterError("explanation_error: empty evaluation set");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < Z.rows(); ++i) {
        const Vector gz = e.logits(Z.row_copy(i));
        std::size_t ag = 0;
        for (std::size_t c = 1; c < gz.size(); ++c)
            if (gz[c] > gz[ag]) ag = c;
        if (ag != static_cast<std::size_t>(y[i])) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(Z.rows());
}

std::string explanation_json(const LinearExplanation& e, const LimeConfig& config, std::size_t dz) {
    nlohmann::json j;
    j["bias"] = e.bias;
    struct Entry {
        std::size_t feature;
        std::size_t cls;
        double weight;
    };
    std::vector<Entry> entries;
    for (std::size_t f = 0; f < e.weights.rows(); ++f)
        for (std::size_t c = 0; c < e.weights.cols(); ++c)
            entries.push_back({f, c, e.weights(f, c)});
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::abs(a.weight) > std::abs(b.weight);
    });
    j["weights"] = nlohmann::json::array();
    for (const auto& en : entries)
        j["weights"].push_back({{"feature_index", en.feature}, {"class", en.cls}, {"weight", en.weight}});
    j["meta"] = {{"sigma", effective_sigma(config.kernel, dz)},
                 {"n_samples", config.n_samples},
                 {"seed", config.seed}};
    return j.dump(2);
}

}  // namespace xlab
