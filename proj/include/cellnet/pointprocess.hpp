#ifndef CELLNET_POINTPROCESS_HPP
#define CELLNET_POINTPROCESS_HPP

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "cellnet/analytic.hpp"

// Sampling and geometric bookkeeping for one network realization:
// homogeneous PPPs on a rectangular (optionally toroidal) window,
// nearest-BS association, cell occupancy, per-slot served-mobile selection.

namespace cellnet {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Window {
    double width = 50.0;
    double height = 50.0;
    bool torus = true;

    double area() const { return width * height; }
    void validate() const;
};

struct PointPattern {
    std::vector<Point> points;
    Window window;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

// Counter-based stream: identical (seed, stream_id) reproduces the exact
// sample sequence; distinct stream_ids give independent streams. Backed by
// xoshiro256++ seeded through splitmix64, so sequences are bit-stable
// across platforms and standard libraries.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();
    double uniform();                         // [0, 1)
    double exponential();                     // Exp(1)
    std::size_t uniform_index(std::size_t n); // unbiased in [0, n)
    std::uint64_t poisson(double mean);

  private:
    std::uint64_t state_[4];
};

// Homogeneous PPP of the given density restricted to the window.
PointPattern sample_ppp(double density, const Window& window, RngStream& rng);

// Torus: minimum over periodic images; planar: Euclidean.
double distance(const Point& a, const Point& b, const Window& window);

// Uniform-grid spatial index for nearest-neighbor queries under the window
// metric. Queries expand cell rings until the best candidate beats the
// ring's lower distance bound.
class NearestNeighborGrid {
  public:
    explicit NearestNeighborGrid(const PointPattern& pattern);

    // Returns (index of nearest point, distance); ties go to the lowest index.
    std::pair<int, double> nearest(const Point& query) const;

  private:
    const PointPattern& pattern_;
    int nx_ = 1;
    int ny_ = 1;
    double cell_w_ = 0.0;
    double cell_h_ = 0.0;
    std::vector<std::vector<int>> cells_;
};

struct Association {
    std::vector<int> serving_bs;   // per mobile: index of nearest BS
    std::vector<int> active_bs;    // ascending indices of BSs with >= 1 mobile
};

// Nearest-BS association; throws InvalidParameter when bs is empty.
Association associate(const PointPattern& mobiles, const PointPattern& bs,
                      const Window& window);

struct ServedSelection {
    std::vector<int> served_mobile;  // aligned with Association::active_bs
    int typical = -1;                // uniformly chosen mobile index
};

// One uniformly chosen mobile per active cell (the cell's served
// representative), plus the typical mobile drawn uniformly over all mobiles
// — every mobile's own cell is active, so all mobiles are served, and the
// analytic outage curves describe this mobile-weighted (Palm) viewpoint.
// Throws when no cell is active.
ServedSelection select_served(const Association& assoc,
                              const PointPattern& mobiles, RngStream& rng);

struct NetworkRealization {
    PointPattern bs;
    PointPattern mobiles;
    PointPattern switching_centers;
    Association assoc;
    ServedSelection served;
    std::vector<double> fading;  // per BS, i.i.d. Exp(1)

    int typical_mobile() const { return served.typical; }
    int typical_bs() const { return assoc.serving_bs[served.typical]; }
};

// Samples BS/mobile/SC patterns, associates, selects served mobiles and
// draws fading. Returns false (realization untouched beyond the patterns)
// when there are no BSs or no mobiles; the caller counts a discard.
bool sample_realization(double lambda_b, double lambda_u, double lambda_s,
                        const Window& window, RngStream& rng,
                        NetworkRealization& out);

// Dump for external visualization:
// kind in {bs, mobile, sc}, x, y, assoc_bs_index, active_flag, served_flag.
void write_realization_csv(const NetworkRealization& net, std::ostream& os);

}  // namespace cellnet

#endif  // CELLNET_POINTPROCESS_HPP
