#include "geosent/classify/baseline.hpp"

#include "geosent/core/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <deque>
#include <map>
#include <numeric>

namespace geosent::classify {

namespace {

constexpr std::size_t K = kSentimentClasses;
constexpr std::string_view kMagic = "geosent-baseline 1\n";

std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t hash_ngram(std::span<const std::string> tokens, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ mix(seed);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) {
            h ^= 0x1F;  // unit separator between tokens
            h *= 0x100000001b3ULL;
        }
        for (unsigned char c : tokens[i]) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    }
    return mix(h ^ tokens.size());
}

struct Problem {
    std::vector<SparseVector> x;
    std::vector<std::size_t> y;
    std::size_t dim = 0;
    double l2 = 0.0;

    std::size_t size() const { return K * dim + K; }

    /// Objective value; writes the gradient.
    double evaluate(const std::vector<double>& theta, std::vector<double>& grad) const {
        std::fill(grad.begin(), grad.end(), 0.0);
        const double* bias = theta.data() + K * dim;
        double loss = 0.0;
        const double inv_n = 1.0 / static_cast<double>(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            std::array<double, K> z{};
            for (std::size_t k = 0; k < K; ++k) {
                double s = bias[k];
                const double* w = theta.data() + k * dim;
                for (const auto& [index, value] : x[i]) s += w[index] * value;
                z[k] = s;
            }
            const double zmax = *std::max_element(z.begin(), z.end());
            double denom = 0.0;
            for (double v : z) denom += std::exp(v - zmax);
            const double lse = zmax + std::log(denom);
            loss += lse - z[y[i]];
            for (std::size_t k = 0; k < K; ++k) {
                const double coef = (std::exp(z[k] - lse) - (k == y[i] ? 1.0 : 0.0)) * inv_n;
                double* g = grad.data() + k * dim;
                for (const auto& [index, value] : x[i]) g[index] += coef * value;
                grad[K * dim + k] += coef;
            }
        }
        loss *= inv_n;
        double reg = 0.0;
        for (std::size_t j = 0; j < theta.size(); ++j) {
            reg += theta[j] * theta[j];
            grad[j] += l2 * theta[j];
        }
        return loss + 0.5 * l2 * reg;
    }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<double> minimize_lbfgs(const Problem& problem, const BaselineConfig& config, TrainingSummary& summary) {
    const std::size_t n = problem.size();
    std::vector<double> theta(n, 0.0);
    std::vector<double> grad(n);
    double value = problem.evaluate(theta, grad);

    struct Pair {
        std::vector<double> s;
        std::vector<double> y;
        double rho;
    };
    std::deque<Pair> history;
    std::vector<double> direction(n);
    std::vector<double> candidate(n);
    std::vector<double> candidate_grad(n);
    std::vector<double> alpha(config.history);

    summary = {};
    for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
        const double gnorm = norm(grad);
        summary.gradient_norm = gnorm;
        if (gnorm <= config.gradient_tolerance * std::max(1.0, norm(theta))) {
            summary.converged = true;
            break;
        }

        // Two-loop recursion: direction = -H * grad.
        direction = grad;
        for (std::size_t m = history.size(); m-- > 0;) {
            alpha[m] = history[m].rho * dot(history[m].s, direction);
            for (std::size_t j = 0; j < n; ++j) direction[j] -= alpha[m] * history[m].y[j];
        }
        double gamma = 1.0 / std::max(gnorm, 1.0);
        if (!history.empty()) gamma = dot(history.back().s, history.back().y) / dot(history.back().y, history.back().y);
        for (double& d : direction) d *= gamma;
        for (std::size_t m = 0; m < history.size(); ++m) {
            const double beta = history[m].rho * dot(history[m].y, direction);
            for (std::size_t j = 0; j < n; ++j) direction[j] += (alpha[m] - beta) * history[m].s[j];
        }
        for (double& d : direction) d = -d;

        double slope = dot(grad, direction);
        if (slope >= 0.0) {
            // Not a descent direction; restart from steepest descent.
            history.clear();
            for (std::size_t j = 0; j < n; ++j) direction[j] = -grad[j] / std::max(gnorm, 1.0);
            slope = dot(grad, direction);
        }

        // Backtracking line search with the Armijo condition.
        double step = 1.0;
        double candidate_value = 0.0;
        bool accepted = false;
        for (int trial = 0; trial < 60; ++trial) {
            for (std::size_t j = 0; j < n; ++j) candidate[j] = theta[j] + step * direction[j];
            candidate_value = problem.evaluate(candidate, candidate_grad);
            if (candidate_value <= value + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        summary.iterations = iter + 1;
        if (!accepted) break;

        Pair pair{std::vector<double>(n), std::vector<double>(n), 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            pair.s[j] = candidate[j] - theta[j];
            pair.y[j] = candidate_grad[j] - grad[j];
        }
        const double sy = dot(pair.s, pair.y);
        theta.swap(candidate);
        grad.swap(candidate_grad);
        const double previous = value;
        value = candidate_value;
        if (sy > 1e-12) {
            pair.rho = 1.0 / sy;
            history.push_back(std::move(pair));
            if (history.size() > config.history) history.pop_front();
        }
        if (previous - value <= 1e-15 * std::max(1.0, std::abs(value))) {
            summary.converged = norm(grad) <= config.gradient_tolerance * std::max(1.0, norm(theta));
            break;
        }
    }
    summary.objective = value;
    summary.gradient_norm = norm(grad);
    return theta;
}

template <typename T>
void write_le(std::ostream& out, T value) {
    std::uint64_t bits = 0;
    static_assert(sizeof(T) == sizeof bits);
    std::memcpy(&bits, &value, sizeof bits);
    for (int i = 0; i < 8; ++i) out.put(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

template <typename T>
T read_le(std::istream& in) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        const int c = in.get();
        if (c == std::char_traits<char>::eof()) throw InputError("truncated model file");
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
    }
    T value;
    std::memcpy(&value, &bits, sizeof bits);
    return value;
}

}  // namespace

SparseVector hashed_features(std::span<const std::string> tokens, const BaselineConfig& config) {
    const std::uint64_t mask = (std::uint64_t{1} << config.hash_bits) - 1;
    std::map<std::uint32_t, double> counts;
    for (unsigned n = 1; n <= config.max_ngram; ++n) {
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            counts[static_cast<std::uint32_t>(hash_ngram(tokens.subspan(i, n), config.seed) & mask)] += 1.0;
        }
    }
    double sq = 0.0;
    for (const auto& [index, value] : counts) sq += value * value;
    SparseVector out(counts.begin(), counts.end());
    if (sq > 0.0) {
        const double scale = 1.0 / std::sqrt(sq);
        for (auto& entry : out) entry.second *= scale;
    }
    return out;
}

BaselineModel BaselineModel::train(const AnnotatedSet& data, const BaselineConfig& config, TrainingSummary* summary) {
    if (data.classes_present() < 2) throw InputError("degenerate training data");
    if (config.hash_bits == 0 || config.hash_bits > 24) throw ConfigError("hash_bits must be in 1..24");
    if (config.max_ngram == 0) throw ConfigError("max_ngram must be at least 1");

    Problem problem;
    problem.dim = std::size_t{1} << config.hash_bits;
    problem.l2 = config.l2;
    for (const auto& item : data.items) {
        problem.x.push_back(hashed_features(item.document.tokens, config));
        problem.y.push_back(static_cast<std::size_t>(item.label));
    }
    TrainingSummary local;
    auto theta = minimize_lbfgs(problem, config, local);
    if (summary) *summary = local;
    return BaselineModel(config, std::move(theta));
}

Scores BaselineModel::scores(std::span<const std::string> tokens) const {
    const std::size_t dim = std::size_t{1} << config_.hash_bits;
    const auto x = hashed_features(tokens, config_);
    std::array<double, K> z{};
    for (std::size_t k = 0; k < K; ++k) {
        double s = parameters_[K * dim + k];
        for (const auto& [index, value] : x) s += parameters_[k * dim + index] * value;
        z[k] = s;
    }
    const double zmax = *std::max_element(z.begin(), z.end());
    Scores p{};
    double denom = 0.0;
    for (std::size_t k = 0; k < K; ++k) denom += (p[k] = std::exp(z[k] - zmax));
    for (double& v : p) v /= denom;
    return p;
}

Prediction BaselineModel::predict(const std::string& post_id, std::span<const std::string> tokens) const {
    return make_prediction(post_id, scores(tokens));
}

void BaselineModel::save(std::ostream& out) const {
    out << kMagic;
    out << "hash_bits " << config_.hash_bits << "\nmax_ngram " << config_.max_ngram << "\nseed " << config_.seed
        << "\nparameters " << parameters_.size() << "\n";
    for (double v : parameters_) write_le(out, v);
}

BaselineModel BaselineModel::load(std::istream& in) {
    std::string magic(kMagic.size(), '\0');
    in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
    if (magic != kMagic) throw InputError("not a baseline model file");
    BaselineConfig config;
    std::size_t count = 0;
    std::string key;
    in >> key >> config.hash_bits;
    if (key != "hash_bits") throw InputError("model header: expected hash_bits");
    in >> key >> config.max_ngram;
    if (key != "max_ngram") throw InputError("model header: expected max_ngram");
    in >> key >> config.seed;
    if (key != "seed") throw InputError("model header: expected seed");
    in >> key >> count;
    if (key != "parameters" || in.get() != '\n') throw InputError("model header: expected parameters");
    if (config.hash_bits == 0 || config.hash_bits > 24 || count != K * (std::size_t{1} << config.hash_bits) + K) {
        throw InputError("model header inconsistent");
    }
    std::vector<double> parameters(count);
    for (double& v : parameters) v = read_le<double>(in);
    return BaselineModel(config, std::move(parameters));
}

}  // namespace geosent::classify
