#include "cellnet/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace cellnet {

namespace {

// Per-attempt result; `valid` is false for discarded realizations.
struct TrialSlot {
    bool valid = false;
    double a = 0.0;
    double b = 0.0;
};

void run_parallel(std::uint64_t begin, std::uint64_t end,
                  const std::function<void(std::uint64_t)>& body) {
    const std::uint64_t n = end - begin;
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, std::max<std::uint64_t>(n, 1)));
    if (workers <= 1 || n < 256) {
        for (std::uint64_t i = begin; i < end; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t lo = begin + w * chunk;
        const std::uint64_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::uint64_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

// Runs attempts in deterministic index order until `trials` of them are
// valid; collects (a, b) pairs in attempt order. Returns discard count.
std::uint64_t collect_trials(std::uint64_t trials,
                             const std::function<TrialSlot(std::uint64_t)>& trial,
                             std::vector<double>& out_a,
                             std::vector<double>& out_b) {
    out_a.clear();
    out_b.clear();
    out_a.reserve(trials);
    out_b.reserve(trials);
    std::uint64_t discards = 0;
    std::uint64_t next_attempt = 0;
    while (out_a.size() < trials) {
        const std::uint64_t need = trials - out_a.size();
        const std::uint64_t batch = need + std::max<std::uint64_t>(need / 256, 8);
        std::vector<TrialSlot> slots(batch);
        run_parallel(next_attempt, next_attempt + batch,
                     [&](std::uint64_t i) { slots[i - next_attempt] = trial(i); });
        for (std::uint64_t k = 0; k < batch && out_a.size() < trials; ++k) {
            if (slots[k].valid) {
                out_a.push_back(slots[k].a);
                out_b.push_back(slots[k].b);
            } else {
                ++discards;
            }
        }
        next_attempt += batch;
    }
    return discards;
}

// Path-gain d^{-alpha} from squared distance; the alpha = 3 case skips pow.
inline double path_gain_sq(double d2, double half_alpha, bool cubic) {
    return cubic ? 1.0 / (d2 * std::sqrt(d2)) : std::pow(d2, -half_alpha);
}

inline double torus_d2(const Point& a, const Point& b, const Window& w) {
    double dx = std::fabs(a.x - b.x);
    double dy = std::fabs(a.y - b.y);
    if (w.torus) {
        if (dx > 0.5 * w.width) dx = w.width - dx;
        if (dy > 0.5 * w.height) dy = w.height - dy;
    }
    return dx * dx + dy * dy;
}

double interference_at(const Point& mobile, const NetworkRealization& net,
                       const std::vector<int>& sources, int serving_bs,
                       double alpha) {
    const Window& w = net.bs.window;
    const double half = 0.5 * alpha;
    const bool cubic = alpha == 3.0;
    double sum = 0.0;
    for (int b : sources) {
        if (b == serving_bs) continue;
        const double d2 = torus_d2(mobile, net.bs.points[b], w);
        sum += net.fading[b] * path_gain_sq(d2, half, cubic);
    }
    return sum;
}

std::vector<int> all_indices(std::size_t n) {
    std::vector<int> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(i);
    return v;
}

// Outage indicators for one served mobile under both interference sets.
// tail_j adds the mean far-field term (interferer density * J) to each sum;
// pass 0 to disable.
std::pair<double, double> outage_pair(int mob, const NetworkRealization& net,
                                      const std::vector<int>& everyone,
                                      double theta, double alpha,
                                      double tail_j) {
    const int bs = net.assoc.serving_bs[mob];
    const Point& u = net.mobiles.points[mob];
    const double d2 = torus_d2(u, net.bs.points[bs], net.bs.window);
    const double signal =
        net.fading[bs] * path_gain_sq(d2, 0.5 * alpha, alpha == 3.0);
    const double area = net.bs.window.area();
    const double tail_silent =
        tail_j * static_cast<double>(net.assoc.active_bs.size() - 1) / area;
    const double tail_all =
        tail_j * static_cast<double>(everyone.size() - 1) / area;
    const double i_silent =
        interference_at(u, net, net.assoc.active_bs, bs, alpha) + tail_silent;
    const double i_all =
        interference_at(u, net, everyone, bs, alpha) + tail_all;
    const double out_silent = (i_silent > 0.0 && signal < theta * i_silent);
    const double out_all = (i_all > 0.0 && signal < theta * i_all);
    return {out_silent, out_all};
}

}  // namespace

void SimConfig::validate() const {
    window.validate();
    if (trials < 1) throw InvalidParameter("trials must be >= 1");
    if (!(ci_level > 0.0 && ci_level < 1.0))
        throw InvalidParameter("ci_level must be in (0, 1)");
}

double farfield_tail_integral(const Window& window, double alpha) {
    window.validate();
    if (alpha <= 2.0)
        throw NumericalFailure(
            "farfield_tail_integral: diverges for alpha <= 2");
    // In polar coordinates the region outside the centered w x h rectangle is
    // r > rho(phi) with rho(phi) = min(w/(2|cos phi|), h/(2|sin phi|)), so
    //   J = int_0^{2pi} rho(phi)^{2-alpha} dphi / (alpha - 2).
    // By symmetry integrate one quadrant and split at the corner angle
    // atan(h/w), where the binding edge switches; each piece is smooth.
    const double w = window.width;
    const double h = window.height;
    const double corner = std::atan2(h, w);
    const double half_pi = 1.57079632679489661923;

    auto simpson = [](auto f, double a, double b, int panels) {
        const double step = (b - a) / panels;
        double acc = f(a) + f(b);
        for (int i = 1; i < panels; ++i)
            acc += (i % 2 ? 4.0 : 2.0) * f(a + i * step);
        return acc * step / 3.0;
    };
    const auto p = 2.0 - alpha;
    const auto vertical = [&](double phi) {
        return std::pow(0.5 * w / std::cos(phi), p);
    };
    const auto horizontal = [&](double phi) {
        return std::pow(0.5 * h / std::sin(phi), p);
    };
    const double quadrant = simpson(vertical, 0.0, corner, 2048) +
                            simpson(horizontal, corner, half_pi, 2048);
    return 4.0 * quadrant / (alpha - 2.0);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw InvalidParameter("normal_quantile: p must be in (0, 1)");
    // Acklam's approximation, |relative error| < 1.15e-9
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
                c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
                 c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
            a[5]) *
           q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

Estimate make_estimate(const std::vector<double>& values, double ci_level,
                       bool binary, std::uint64_t discards) {
    if (values.empty()) throw InvalidParameter("make_estimate: no trials");
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double variance = values.size() > 1 ? ss / (n - 1.0) : 0.0;
    const double se = std::sqrt(variance / n);

    Estimate est;
    est.mean = mean;
    est.std_error = se;
    est.trials_used = values.size();
    est.discards = discards;

    const double z = normal_quantile(0.5 + 0.5 * ci_level);
    if (binary && mean * n < 10.0) {
        // Wilson interval for rare events
        const double z2 = z * z;
        const double denom = 1.0 + z2 / n;
        const double center = (mean + z2 / (2.0 * n)) / denom;
        const double half =
            z * std::sqrt(mean * (1.0 - mean) / n + z2 / (4.0 * n * n)) / denom;
        est.ci_low = std::max(0.0, center - half);
        est.ci_high = std::min(1.0, center + half);
        est.ci_low = std::min(est.ci_low, mean);
        est.ci_high = std::max(est.ci_high, mean);
    } else {
        est.ci_low = mean - z * se;
        est.ci_high = mean + z * se;
    }
    return est;
}

OutageTrials run_outage_trials(const ModelParams& model, const SimConfig& sim,
                               std::uint64_t stream_offset) {
    model.validate();
    sim.validate();
    const double theta = model.theta;
    const double alpha = model.alpha;
    const double tail_j = sim.tail_correction && sim.window.torus
                              ? farfield_tail_integral(sim.window, alpha)
                              : 0.0;

    auto trial = [&](std::uint64_t attempt) -> TrialSlot {
        RngStream rng(sim.seed, stream_offset + attempt);
        NetworkRealization net;
        if (!sample_realization(model.lambda_b, model.lambda_u, model.lambda_s,
                                sim.window, rng, net))
            return {};
        const auto everyone = all_indices(net.bs.size());
        TrialSlot slot;
        slot.valid = true;
        if (sim.estimator == EstimatorKind::OneTypical) {
            const auto [s, a] = outage_pair(net.served.typical, net, everyone,
                                            theta, alpha, tail_j);
            slot.a = s;
            slot.b = a;
        } else {
            // Average over every mobile: all mobiles are served, and the
            // analytic curves describe the mobile-weighted viewpoint.
            double acc_s = 0.0, acc_a = 0.0;
            const auto mobiles = net.mobiles.size();
            for (std::size_t m = 0; m < mobiles; ++m) {
                const auto [s, a] = outage_pair(static_cast<int>(m), net,
                                                everyone, theta, alpha, tail_j);
                acc_s += s;
                acc_a += a;
            }
            slot.a = acc_s / static_cast<double>(mobiles);
            slot.b = acc_a / static_cast<double>(mobiles);
        }
        return slot;
    };

    OutageTrials out;
    out.discards = collect_trials(sim.trials, trial, out.silent, out.all_transmit);
    return out;
}

Estimate estimate_outage(const ModelParams& model, const SimConfig& sim) {
    const OutageTrials trials = run_outage_trials(model, sim);
    const bool binary = sim.estimator == EstimatorKind::OneTypical;
    const auto& column = sim.mode == OutageMode::SilentEmptyCells
                             ? trials.silent
                             : trials.all_transmit;
    return make_estimate(column, sim.ci_level, binary, trials.discards);
}

Estimate estimate_empty_cell_prob(double lambda_b, double lambda_u,
                                  const SimConfig& sim) {
    if (lambda_b <= 0.0)
        throw InvalidParameter("estimate_empty_cell_prob: lambda_b must be > 0");
    if (lambda_u < 0.0)
        throw InvalidParameter("estimate_empty_cell_prob: lambda_u must be >= 0");
    sim.validate();

    auto trial = [&](std::uint64_t attempt) -> TrialSlot {
        RngStream rng(sim.seed, attempt);
        const PointPattern bs = sample_ppp(lambda_b, sim.window, rng);
        const PointPattern mobiles = sample_ppp(lambda_u, sim.window, rng);
        if (bs.empty()) return {};
        TrialSlot slot;
        slot.valid = true;
        if (mobiles.empty()) {
            slot.a = 1.0;
            return slot;
        }
        const Association assoc = associate(mobiles, bs, sim.window);
        slot.a = 1.0 - static_cast<double>(assoc.active_bs.size()) /
                           static_cast<double>(bs.size());
        return slot;
    };

    std::vector<double> values, unused;
    const std::uint64_t discards = collect_trials(sim.trials, trial, values, unused);
    return make_estimate(values, sim.ci_level, false, discards);
}

Estimate estimate_link_distance(double lambda_b, const SimConfig& sim) {
    if (lambda_b <= 0.0)
        throw InvalidParameter("estimate_link_distance: lambda_b must be > 0");
    sim.validate();

    // A uniform probe point is the typical mobile by stationarity.
    auto trial = [&](std::uint64_t attempt) -> TrialSlot {
        RngStream rng(sim.seed, attempt);
        const PointPattern bs = sample_ppp(lambda_b, sim.window, rng);
        const Point probe{rng.uniform() * sim.window.width,
                          rng.uniform() * sim.window.height};
        if (bs.empty()) return {};
        NearestNeighborGrid grid(bs);
        return {true, grid.nearest(probe).second, 0.0};
    };

    std::vector<double> values, unused;
    const std::uint64_t discards = collect_trials(sim.trials, trial, values, unused);
    return make_estimate(values, sim.ci_level, false, discards);
}

CableEstimate estimate_cable_length(double lambda_b, double lambda_s,
                                    const SimConfig& sim) {
    if (lambda_b < 0.0 || lambda_s <= 0.0)
        throw InvalidParameter("estimate_cable_length: invalid densities");
    sim.validate();

    auto trial = [&](std::uint64_t attempt) -> TrialSlot {
        RngStream rng(sim.seed, attempt);
        const PointPattern bs = sample_ppp(lambda_b, sim.window, rng);
        const PointPattern scs = sample_ppp(lambda_s, sim.window, rng);
        if (scs.empty()) return {};
        double total = 0.0;
        if (!bs.empty()) {
            NearestNeighborGrid grid(scs);
            for (const Point& p : bs.points) total += grid.nearest(p).second;
        }
        return {true, total / sim.window.area(),
                total / static_cast<double>(scs.size())};
    };

    std::vector<double> per_area, per_cell;
    const std::uint64_t discards =
        collect_trials(sim.trials, trial, per_area, per_cell);
    CableEstimate est;
    est.per_unit_area = make_estimate(per_area, sim.ci_level, false, discards);
    est.per_sc_cell = make_estimate(per_cell, sim.ci_level, false, discards);
    return est;
}

std::vector<OutageSweepRow> sweep_outage(const ModelParams& model_template,
                                         const std::vector<double>& lambda_b_grid,
                                         const SimConfig& sim,
                                         const QuadratureSpec& quad) {
    if (lambda_b_grid.empty())
        throw InvalidParameter("sweep_outage: empty lambda_b grid");
    if (!std::is_sorted(lambda_b_grid.begin(), lambda_b_grid.end()))
        throw InvalidParameter("sweep_outage: grid must be ascending");
    const double beta = beta_integral(model_template.theta,
                                      model_template.alpha, quad);
    const bool binary = sim.estimator == EstimatorKind::OneTypical;

    std::vector<OutageSweepRow> rows;
    rows.reserve(lambda_b_grid.size());
    for (std::size_t i = 0; i < lambda_b_grid.size(); ++i) {
        ModelParams model = model_template;
        model.lambda_b = lambda_b_grid[i];
        // Decorrelate rows: each density gets its own stream block.
        const std::uint64_t offset = static_cast<std::uint64_t>(i) << 40;
        const OutageTrials trials = run_outage_trials(model, sim, offset);
        const Estimate silent =
            make_estimate(trials.silent, sim.ci_level, binary, trials.discards);
        const Estimate alltx = make_estimate(trials.all_transmit, sim.ci_level,
                                             binary, trials.discards);
        OutageSweepRow row;
        row.lambda_b = model.lambda_b;
        row.mc_mean = silent.mean;
        row.mc_stderr = silent.std_error;
        row.ci_low = silent.ci_low;
        row.ci_high = silent.ci_high;
        row.analytic_exact = outage_exact(
            empty_cell_probability(model.lambda_b, model.lambda_u), beta);
        row.analytic_asymptotic =
            outage_asymptotic(model.lambda_b, model.lambda_u, beta).value;
        row.alltransmit_mc = alltx.mean;
        row.alltransmit_stderr = alltx.std_error;
        row.discards = trials.discards;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cellnet
