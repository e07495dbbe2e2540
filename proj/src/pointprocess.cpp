#include "cellnet/pointprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <unordered_map>

namespace cellnet {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

void Window::validate() const {
    if (!(width > 0.0) || !(height > 0.0))
        throw InvalidParameter("window dimensions must be > 0");
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t sm = seed ^ (stream_id * 0xD2B74407B1CE6E93ULL);
    for (auto& s : state_) s = splitmix64(sm);
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::exponential() {
    return -std::log1p(-uniform());
}

std::size_t RngStream::uniform_index(std::size_t n) {
    if (n == 0) throw InvalidParameter("uniform_index: n must be > 0");
    // Lemire multiply-shift with rejection
    __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        const std::uint64_t t = (0 - static_cast<std::uint64_t>(n)) % n;
        while (lo < t) {
            m = static_cast<__uint128_t>(next_u64()) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::size_t>(m >> 64);
}

std::uint64_t RngStream::poisson(double mean) {
    if (mean < 0.0) throw InvalidParameter("poisson: mean must be >= 0");
    // Knuth's product method in chunks to avoid exp underflow
    std::uint64_t total = 0;
    while (mean > 0.0) {
        const double chunk = std::min(mean, 30.0);
        const double limit = std::exp(-chunk);
        double prod = uniform();
        while (prod > limit) {
            ++total;
            prod *= uniform();
        }
        mean -= chunk;
    }
    return total;
}

PointPattern sample_ppp(double density, const Window& window, RngStream& rng) {
    if (density < 0.0) throw InvalidParameter("sample_ppp: density must be >= 0");
    window.validate();
    PointPattern pattern;
    pattern.window = window;
    const std::uint64_t count = rng.poisson(density * window.area());
    pattern.points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double x = rng.uniform() * window.width;
        const double y = rng.uniform() * window.height;
        pattern.points.push_back({x, y});
    }
    return pattern;
}

double distance(const Point& a, const Point& b, const Window& window) {
    double dx = std::fabs(a.x - b.x);
    double dy = std::fabs(a.y - b.y);
    if (window.torus) {
        if (dx > 0.5 * window.width) dx = window.width - dx;
        if (dy > 0.5 * window.height) dy = window.height - dy;
    }
    return std::sqrt(dx * dx + dy * dy);
}

NearestNeighborGrid::NearestNeighborGrid(const PointPattern& pattern)
    : pattern_(pattern) {
    const auto n = pattern.points.size();
    const Window& w = pattern.window;
    // Target roughly one point per cell
    const double spacing =
        n > 0 ? std::sqrt(w.area() / static_cast<double>(n)) : w.width;
    nx_ = std::max(1, static_cast<int>(w.width / spacing));
    ny_ = std::max(1, static_cast<int>(w.height / spacing));
    cell_w_ = w.width / nx_;
    cell_h_ = w.height / ny_;
    cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = pattern.points[i];
        int ix = std::min(nx_ - 1, static_cast<int>(p.x / cell_w_));
        int iy = std::min(ny_ - 1, static_cast<int>(p.y / cell_h_));
        cells_[static_cast<std::size_t>(iy) * nx_ + ix].push_back(
            static_cast<int>(i));
    }
}

std::pair<int, double> NearestNeighborGrid::nearest(const Point& query) const {
    const Window& w = pattern_.window;
    int best_idx = -1;
    double best_dist = std::numeric_limits<double>::infinity();

    auto scan_cell = [&](int ix, int iy) {
        for (int idx : cells_[static_cast<std::size_t>(iy) * nx_ + ix]) {
            const double d = distance(query, pattern_.points[idx], w);
            if (d < best_dist || (d == best_dist && idx < best_idx)) {
                best_dist = d;
                best_idx = idx;
            }
        }
    };

    auto scan_all = [&] {
        for (std::size_t i = 0; i < pattern_.points.size(); ++i) {
            const double d = distance(query, pattern_.points[i], w);
            if (d < best_dist ||
                (d == best_dist && static_cast<int>(i) < best_idx)) {
                best_dist = d;
                best_idx = static_cast<int>(i);
            }
        }
    };

    const int qx = std::min(nx_ - 1, static_cast<int>(query.x / cell_w_));
    const int qy = std::min(ny_ - 1, static_cast<int>(query.y / cell_h_));
    const double min_cell = std::min(cell_w_, cell_h_);
    const int max_ring = std::max(nx_, ny_);

    for (int r = 0; r <= max_ring; ++r) {
        if (best_idx >= 0 && (r - 1) * min_cell > best_dist) break;
        // Wrapped ring cells stay distinct only while the ring diameter is
        // below the grid size; past that, finish with a full scan.
        if (w.torus && (2 * r >= nx_ || 2 * r >= ny_)) {
            scan_all();
            break;
        }
        for (int dy = -r; dy <= r; ++dy) {
            const bool edge_row = (dy == -r || dy == r);
            const int step = edge_row ? 1 : 2 * r;
            for (int dx = -r; dx <= r; dx += step) {
                int ix = qx + dx;
                int iy = qy + dy;
                if (w.torus) {
                    ix = (ix % nx_ + nx_) % nx_;
                    iy = (iy % ny_ + ny_) % ny_;
                } else if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) {
                    continue;
                }
                scan_cell(ix, iy);
            }
        }
    }
    return {best_idx, best_dist};
}

Association associate(const PointPattern& mobiles, const PointPattern& bs,
                      const Window& window) {
    if (bs.empty()) throw InvalidParameter("associate: BS pattern is empty");
    (void)window;
    Association result;
    result.serving_bs.resize(mobiles.size());
    NearestNeighborGrid grid(bs);
    std::vector<char> seen(bs.size(), 0);
    for (std::size_t m = 0; m < mobiles.size(); ++m) {
        const int b = grid.nearest(mobiles.points[m]).first;
        result.serving_bs[m] = b;
        seen[static_cast<std::size_t>(b)] = 1;
    }
    for (std::size_t b = 0; b < bs.size(); ++b)
        if (seen[b]) result.active_bs.push_back(static_cast<int>(b));
    return result;
}

ServedSelection select_served(const Association& assoc,
                              const PointPattern& mobiles, RngStream& rng) {
    if (assoc.active_bs.empty())
        throw InvalidParameter("select_served: no active BS");
    std::unordered_map<int, int> slot_of_bs;
    slot_of_bs.reserve(assoc.active_bs.size());
    for (std::size_t s = 0; s < assoc.active_bs.size(); ++s)
        slot_of_bs[assoc.active_bs[s]] = static_cast<int>(s);

    std::vector<std::vector<int>> members(assoc.active_bs.size());
    for (std::size_t m = 0; m < mobiles.size(); ++m)
        members[static_cast<std::size_t>(slot_of_bs[assoc.serving_bs[m]])]
            .push_back(static_cast<int>(m));

    ServedSelection sel;
    sel.served_mobile.resize(assoc.active_bs.size());
    for (std::size_t s = 0; s < members.size(); ++s)
        sel.served_mobile[s] = members[s][rng.uniform_index(members[s].size())];
    sel.typical = static_cast<int>(rng.uniform_index(mobiles.size()));
    return sel;
}

void write_realization_csv(const NetworkRealization& net, std::ostream& os) {
    char buf[128];
    auto row = [&](const char* kind, const Point& p, int assoc, int active,
                   int served) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%d,%d,%d\n", kind, p.x,
                      p.y, assoc, active, served);
        os << buf;
    };
    os << "kind,x,y,assoc_bs_index,active_flag,served_flag\n";
    std::vector<char> active(net.bs.size(), 0);
    for (int b : net.assoc.active_bs) active[static_cast<std::size_t>(b)] = 1;
    std::vector<char> served(net.mobiles.size(), 0);
    for (int m : net.served.served_mobile) served[static_cast<std::size_t>(m)] = 1;
    for (std::size_t b = 0; b < net.bs.size(); ++b)
        row("bs", net.bs.points[b], -1, active[b], 0);
    for (std::size_t m = 0; m < net.mobiles.size(); ++m)
        row("mobile", net.mobiles.points[m], net.assoc.serving_bs[m], 0,
            served[m]);
    for (const Point& p : net.switching_centers.points) row("sc", p, -1, 0, 0);
}

bool sample_realization(double lambda_b, double lambda_u, double lambda_s,
                        const Window& window, RngStream& rng,
                        NetworkRealization& out) {
    out.bs = sample_ppp(lambda_b, window, rng);
    out.mobiles = sample_ppp(lambda_u, window, rng);
    out.switching_centers = sample_ppp(lambda_s, window, rng);
    if (out.bs.empty() || out.mobiles.empty()) return false;
    out.assoc = associate(out.mobiles, out.bs, window);
    out.served = select_served(out.assoc, out.mobiles, rng);
    out.fading.resize(out.bs.size());
    for (auto& h : out.fading) h = rng.exponential();
    return true;
}

}  // namespace cellnet
