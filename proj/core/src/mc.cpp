#include "lvsmile/mc.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <random>
#include <stdexcept>
#include <thread>

namespace lvsmile {

namespace {

constexpr long kChunkPaths = 8192;  // observations per RNG substream

// Moro (1995) rational approximation of the inverse normal CDF. Fully
// deterministic arithmetic; accuracy ~3e-9 centrally, ~1e-7 in the tails,
// far below any Monte Carlo resolution used here.
double moro_inverse_cdf(double u) {
    static constexpr double a0 = 2.50662823884, a1 = -18.61500062529,
                            a2 = 41.39119773534, a3 = -25.44106049637;
    static constexpr double b0 = -8.47351093090, b1 = 23.08336743743,
                            b2 = -21.06224101826, b3 = 3.13082909833;
    static constexpr double c0 = 0.3374754822726147, c1 = 0.9761690190917186,
                            c2 = 0.1607979714918209, c3 = 0.0276438810333863,
                            c4 = 0.0038405729373609, c5 = 0.0003951896511919,
                            c6 = 0.0000321767881768, c7 = 0.0000002888167364,
                            c8 = 0.0000003960315187;
    const double x = u - 0.5;
    if (std::abs(x) < 0.42) {
        const double r = x * x;
        return x * (a0 + r * (a1 + r * (a2 + r * a3))) /
               (1.0 + r * (b0 + r * (b1 + r * (b2 + r * b3))));
    }
    double r = (x < 0.0) ? u : 1.0 - u;
    r = std::log(-std::log(r));
    const double z = c0 + r * (c1 + r * (c2 + r * (c3 + r * (c4 + r * (c5 + r * (c6 + r * (c7 + r * c8)))))));
    return (x < 0.0) ? -z : z;
}

class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t chunk) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
        gen_.seed(seq);
    }
    double next() {
        double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        u = std::min(std::max(u, 1e-15), 1.0 - 1e-15);
        return moro_inverse_cdf(u);
    }

private:
    std::mt19937_64 gen_;
};

struct Accum {
    std::vector<double> sum;
    std::vector<double> sum_sq;
    explicit Accum(size_t n) : sum(n, 0.0), sum_sq(n, 0.0) {}
    void add(size_t i, double v) {
        sum[i] += v;
        sum_sq[i] += v * v;
    }
};

void validate(const McConfig& cfg, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("mc: t must be positive");
    if (cfg.n_paths < 100) throw std::invalid_argument("McConfig: n_paths must be >= 100");
    if (!(cfg.dt > 0.0) || cfg.dt > t) throw std::invalid_argument("McConfig: need 0 < dt <= t");
    if (cfg.antithetic && cfg.n_paths % 2 != 0)
        throw std::invalid_argument("McConfig: antithetic requires an even path count");
}

// One Euler sweep. Observe(obs_index, span_of_terminal_y) is called once per
// observation unit (a path, or an antithetic pair of paths).
template <class VarFn, class Observe>
void sweep(double y0, double t, const McConfig& cfg, const VarFn& local_var,
           const Observe& observe_chunk) {
    const long n_obs = cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths;
    const long n_chunks = (n_obs + kChunkPaths - 1) / kChunkPaths;
    const long n_steps = std::max<long>(1, std::lround(t / cfg.dt));
    const double dt = t / static_cast<double>(n_steps);
    const double sqrt_dt = std::sqrt(dt);

    int n_threads = cfg.threads > 0 ? cfg.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = static_cast<int>(std::min<long>(n_threads, n_chunks));

    std::atomic<long> next_chunk{0};
    auto worker = [&] {
        for (;;) {
            const long c = next_chunk.fetch_add(1);
            if (c >= n_chunks) return;
            const long lo = c * kChunkPaths;
            const long hi = std::min(n_obs, lo + kChunkPaths);
            NormalStream rng(cfg.seed, static_cast<std::uint64_t>(c));
            for (long i = lo; i < hi; ++i) {
                double y = y0, ya = y0;
                for (long s = 0; s < n_steps; ++s) {
                    const double z = rng.next();
                    {
                        const double v = local_var(y);
                        y += -0.5 * v * dt + std::sqrt(v) * sqrt_dt * z;
                    }
                    if (cfg.antithetic) {
                        const double v = local_var(ya);
                        ya += -0.5 * v * dt - std::sqrt(v) * sqrt_dt * z;
                    }
                }
                observe_chunk(c, i, y, ya);
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
}

std::vector<McEstimate> finalize(const std::vector<Accum>& per_chunk, long n_obs,
                                 size_t n_strikes, const McConfig& cfg) {
    std::vector<McEstimate> out(n_strikes);
    for (size_t s = 0; s < n_strikes; ++s) {
        double sum = 0.0, sum_sq = 0.0;
        for (const Accum& a : per_chunk) {  // fixed chunk order
            sum += a.sum[s];
            sum_sq += a.sum_sq[s];
        }
        const double mean = sum / static_cast<double>(n_obs);
        const double var =
            std::max(0.0, (sum_sq - static_cast<double>(n_obs) * mean * mean) /
                              static_cast<double>(n_obs - 1));
        out[s].price = mean;
        out[s].std_error = std::sqrt(var / static_cast<double>(n_obs));
        out[s].n_paths = cfg.n_paths;
        out[s].dt = cfg.dt;
        out[s].seed = cfg.seed;
    }
    return out;
}

template <class VarFn>
std::vector<McEstimate> run_calls(double y0, double t, std::span<const double> ks,
                                  const McConfig& cfg, const VarFn& local_var) {
    validate(cfg, t);
    const long n_obs = cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths;
    const long n_chunks = (n_obs + kChunkPaths - 1) / kChunkPaths;
    std::vector<double> strikes(ks.begin(), ks.end());
    for (double& k : strikes) k = std::exp(k);

    std::vector<Accum> per_chunk(n_chunks, Accum(strikes.size()));
    sweep(y0, t, cfg, local_var, [&](long c, long, double y, double ya) {
        const double x = std::exp(y);
        const double xa = cfg.antithetic ? std::exp(ya) : 0.0;
        for (size_t s = 0; s < strikes.size(); ++s) {
            double pay = std::max(x - strikes[s], 0.0);
            if (cfg.antithetic) pay = 0.5 * (pay + std::max(xa - strikes[s], 0.0));
            per_chunk[c].add(s, pay);
        }
    });
    return finalize(per_chunk, n_obs, strikes.size(), cfg);
}

}  // namespace

double inverse_normal_cdf(double u) { return moro_inverse_cdf(u); }

McEstimate simulate_call(const ModelParams& params, double t, double k_logstrike,
                         const McConfig& cfg) {
    const double ks[1] = {k_logstrike};
    return simulate_calls(params, t, ks, cfg)[0];
}

std::vector<McEstimate> simulate_calls(const ModelParams& params, double t,
                                       std::span<const double> k_logstrikes,
                                       const McConfig& cfg) {
    const double a2 = params.a * params.a, eps = params.eps, beta = params.beta;
    return run_calls(params.y, t, k_logstrikes, cfg,
                     [a2, eps, beta](double y) { return a2 + eps * std::exp(beta * y); });
}

std::vector<McEstimate> simulate_calls_eta(double a, double eps, const EtaFn& eta, double y,
                                           double t, std::span<const double> k_logstrikes,
                                           const McConfig& cfg) {
    if (!(a > 0.0)) throw std::invalid_argument("simulate_calls_eta: a must be positive");
    if (!(eps >= 0.0)) throw std::invalid_argument("simulate_calls_eta: eps must be >= 0");
    const double a2 = a * a;
    return run_calls(y, t, k_logstrikes, cfg,
                     [a2, eps, &eta](double yv) { return a2 + eps * eta(yv); });
}

namespace {

// Two eps legs in lockstep on shared draws.
template <class EtaLike>
SensitivityEstimate run_sensitivity(double a, double eps, const EtaLike& eta, double y0,
                                    double t, double k_logstrike, const McConfig& cfg,
                                    double d_eps) {
    validate(cfg, t);
    if (!(d_eps > 0.0)) throw std::invalid_argument("eps_sensitivity: d_eps must be positive");
    const double a2 = a * a;
    const double strike = std::exp(k_logstrike);
    const long n_obs = cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths;
    const long n_chunks = (n_obs + kChunkPaths - 1) / kChunkPaths;
    const long n_steps = std::max<long>(1, std::lround(t / cfg.dt));
    const double dt = t / static_cast<double>(n_steps);
    const double sqrt_dt = std::sqrt(dt);

    std::vector<Accum> per_chunk(n_chunks, Accum(1));
    int n_threads = cfg.threads > 0 ? cfg.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    n_threads = static_cast<int>(std::min<long>(n_threads, n_chunks));

    std::atomic<long> next_chunk{0};
    auto worker = [&] {
        for (;;) {
            const long c = next_chunk.fetch_add(1);
            if (c >= n_chunks) return;
            const long lo = c * kChunkPaths;
            const long hi = std::min(n_obs, lo + kChunkPaths);
            NormalStream rng(cfg.seed, static_cast<std::uint64_t>(c));
            for (long i = lo; i < hi; ++i) {
                double yb = y0, yu = y0, yb_a = y0, yu_a = y0;
                for (long s = 0; s < n_steps; ++s) {
                    const double z = rng.next();
                    const double vb = a2 + eps * eta(yb);
                    const double vu = a2 + (eps + d_eps) * eta(yu);
                    yb += -0.5 * vb * dt + std::sqrt(vb) * sqrt_dt * z;
                    yu += -0.5 * vu * dt + std::sqrt(vu) * sqrt_dt * z;
                    if (cfg.antithetic) {
                        const double vba = a2 + eps * eta(yb_a);
                        const double vua = a2 + (eps + d_eps) * eta(yu_a);
                        yb_a += -0.5 * vba * dt - std::sqrt(vba) * sqrt_dt * z;
                        yu_a += -0.5 * vua * dt - std::sqrt(vua) * sqrt_dt * z;
                    }
                }
                double diff = (std::max(std::exp(yu) - strike, 0.0) -
                               std::max(std::exp(yb) - strike, 0.0)) / d_eps;
                if (cfg.antithetic) {
                    const double diff_a = (std::max(std::exp(yu_a) - strike, 0.0) -
                                           std::max(std::exp(yb_a) - strike, 0.0)) / d_eps;
                    diff = 0.5 * (diff + diff_a);
                }
                per_chunk[c].add(0, diff);
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    const std::vector<McEstimate> est = finalize(per_chunk, n_obs, 1, cfg);
    return {est[0].price, est[0].std_error};
}

}  // namespace

SensitivityEstimate eps_sensitivity(const ModelParams& params, double t, double k_logstrike,
                                    const McConfig& cfg, double d_eps) {
    if (params.eps > 0.0 && d_eps > params.eps)
        throw std::invalid_argument("eps_sensitivity: d_eps must be <= eps (or eps = 0)");
    const double beta = params.beta;
    return run_sensitivity(params.a, params.eps,
                           [beta](double y) { return std::exp(beta * y); }, params.y, t,
                           k_logstrike, cfg, d_eps);
}

SensitivityEstimate eps_sensitivity_eta(double a, double eps, const EtaFn& eta, double y,
                                        double t, double k_logstrike, const McConfig& cfg,
                                        double d_eps) {
    if (eps > 0.0 && d_eps > eps)
        throw std::invalid_argument("eps_sensitivity_eta: d_eps must be <= eps (or eps = 0)");
    return run_sensitivity(a, eps, eta, y, t, k_logstrike, cfg, d_eps);
}

}  // namespace lvsmile
