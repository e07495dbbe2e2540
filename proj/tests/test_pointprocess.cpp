#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cellnet/pointprocess.hpp"

using namespace cellnet;

TEST_CASE("rng streams are reproducible and distinct") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        all_equal &= (x == b.next_u64());
        any_diff |= (x != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("uniform_index is unbiased over small n") {
    RngStream rng(1, 0);
    std::vector<int> counts(3, 0);
    const int draws = 30000;
    for (int i = 0; i < draws; ++i) ++counts[rng.uniform_index(3)];
    for (int k = 0; k < 3; ++k) {
        const double frac = counts[k] / static_cast<double>(draws);
        CHECK(std::fabs(frac - 1.0 / 3.0) < 3.0 * std::sqrt(2.0 / 9.0 / draws));
    }
}

TEST_CASE("poisson sampler matches mean and dispersion") {
    RngStream rng(5, 0);
    const double mean = 50.0;  // matches density 0.02 on a 50x50 window
    const int draws = 10000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double k = static_cast<double>(rng.poisson(mean));
        sum += k;
        sumsq += k * k;
    }
    const double m = sum / draws;
    const double var = sumsq / draws - m * m;
    CHECK(std::fabs(m - mean) < 3.0 * std::sqrt(mean / draws));
    CHECK(var / m == doctest::Approx(1.0).epsilon(0.06));  // dispersion ~ 1
}

TEST_CASE("sample_ppp basics") {
    Window w{50.0, 50.0, true};
    RngStream rng(3, 0);
    CHECK(sample_ppp(0.0, w, rng).empty());

    RngStream r1(11, 4), r2(11, 4);
    const auto p1 = sample_ppp(0.1, w, r1);
    const auto p2 = sample_ppp(0.1, w, r2);
    REQUIRE(p1.size() == p2.size());
    for (std::size_t i = 0; i < p1.size(); ++i) {
        CHECK(p1.points[i].x == p2.points[i].x);
        CHECK(p1.points[i].y == p2.points[i].y);
        CHECK(p1.points[i].x >= 0.0);
        CHECK(p1.points[i].x < 50.0);
        CHECK(p1.points[i].y >= 0.0);
        CHECK(p1.points[i].y < 50.0);
    }
    CHECK_THROWS_AS(sample_ppp(-1.0, w, rng), InvalidParameter);
}

TEST_CASE("distance with and without wraparound") {
    Window torus{10.0, 10.0, true};
    Window plane{10.0, 10.0, false};
    Point a{0.5, 5.0}, b{9.5, 5.0};
    CHECK(distance(a, a, torus) == 0.0);
    CHECK(distance(a, b, torus) == doctest::Approx(1.0));
    CHECK(distance(a, b, plane) == doctest::Approx(9.0));
    CHECK(distance(a, b, torus) == distance(b, a, torus));

    // Triangle inequality on random triples
    RngStream rng(17, 0);
    for (int i = 0; i < 200; ++i) {
        Point p{rng.uniform() * 10, rng.uniform() * 10};
        Point q{rng.uniform() * 10, rng.uniform() * 10};
        Point r{rng.uniform() * 10, rng.uniform() * 10};
        CHECK(distance(p, r, torus) <=
              distance(p, q, torus) + distance(q, r, torus) + 1e-12);
    }
}

TEST_CASE("grid nearest agrees with brute force") {
    Window w{50.0, 50.0, true};
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        RngStream rng(123, trial);
        const auto pts = sample_ppp(0.05 + 0.1 * (trial % 4), w, rng);
        if (pts.empty()) continue;
        NearestNeighborGrid grid(pts);
        for (int q = 0; q < 50; ++q) {
            Point probe{rng.uniform() * 50, rng.uniform() * 50};
            int best = -1;
            double best_d = 1e300;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double d = distance(probe, pts.points[i], w);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int>(i);
                }
            }
            const auto [idx, d] = grid.nearest(probe);
            CHECK(idx == best);
            CHECK(d == doctest::Approx(best_d));
        }
    }
}

TEST_CASE("grid nearest agrees with brute force on non-torus window") {
    Window w{30.0, 20.0, false};
    RngStream rng(321, 0);
    PointPattern pts = sample_ppp(0.2, w, rng);
    REQUIRE(!pts.empty());
    NearestNeighborGrid grid(pts);
    for (int q = 0; q < 200; ++q) {
        Point probe{rng.uniform() * 30, rng.uniform() * 20};
        int best = -1;
        double best_d = 1e300;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double d = distance(probe, pts.points[i], w);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        CHECK(grid.nearest(probe).first == best);
    }
}

TEST_CASE("associate maps every mobile to its nearest BS") {
    Window w{50.0, 50.0, true};
    RngStream rng(9, 0);
    const auto bs = sample_ppp(0.05, w, rng);
    const auto mobiles = sample_ppp(0.02, w, rng);
    REQUIRE(!bs.empty());
    const Association assoc = associate(mobiles, bs, w);
    REQUIRE(assoc.serving_bs.size() == mobiles.size());
    for (std::size_t m = 0; m < mobiles.size(); ++m) {
        const double chosen =
            distance(mobiles.points[m], bs.points[assoc.serving_bs[m]], w);
        for (std::size_t b = 0; b < bs.size(); ++b)
            CHECK(chosen <= distance(mobiles.points[m], bs.points[b], w) + 1e-12);
    }
    // active set is the image of the association
    std::vector<int> image(assoc.serving_bs);
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    CHECK(image == assoc.active_bs);
    CHECK(assoc.active_bs.size() <= std::min(bs.size(), mobiles.size()));

    // idempotence
    const Association again = associate(mobiles, bs, w);
    CHECK(again.serving_bs == assoc.serving_bs);
    CHECK(again.active_bs == assoc.active_bs);
}

TEST_CASE("associate edge cases") {
    Window w{10.0, 10.0, true};
    PointPattern one_bs{{{2.0, 2.0}}, w};
    PointPattern mobiles{{{1.0, 1.0}, {9.0, 9.0}, {5.0, 5.0}}, w};
    const Association assoc = associate(mobiles, one_bs, w);
    for (int b : assoc.serving_bs) CHECK(b == 0);

    PointPattern none{{}, w};
    const Association empty_assoc = associate(none, one_bs, w);
    CHECK(empty_assoc.active_bs.empty());

    CHECK_THROWS_AS(associate(mobiles, none, w), InvalidParameter);
}

TEST_CASE("select_served uniformity and contracts") {
    Window w{10.0, 10.0, true};
    PointPattern bs{{{5.0, 5.0}}, w};
    PointPattern mobiles{{{1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}}, w};
    const Association assoc = associate(mobiles, bs, w);

    std::vector<int> counts(3, 0);
    std::vector<int> typical_counts(3, 0);
    const int draws = 30000;
    for (int i = 0; i < draws; ++i) {
        RngStream rng(77, static_cast<std::uint64_t>(i));
        const ServedSelection sel = select_served(assoc, mobiles, rng);
        REQUIRE(sel.served_mobile.size() == 1);
        ++counts[sel.served_mobile[0]];
        REQUIRE(sel.typical >= 0);
        REQUIRE(sel.typical < 3);
        ++typical_counts[sel.typical];
    }
    for (int k = 0; k < 3; ++k) {
        const double frac = counts[k] / static_cast<double>(draws);
        CHECK(std::fabs(frac - 1.0 / 3.0) < 3.0 * std::sqrt(2.0 / 9.0 / draws));
        const double tfrac = typical_counts[k] / static_cast<double>(draws);
        CHECK(std::fabs(tfrac - 1.0 / 3.0) <
              3.0 * std::sqrt(2.0 / 9.0 / draws));
    }

    Association no_active;
    RngStream rng(1, 1);
    CHECK_THROWS_AS(select_served(no_active, mobiles, rng), InvalidParameter);
}

TEST_CASE("served mobile belongs to its serving cell") {
    Window w{50.0, 50.0, true};
    for (std::uint64_t t = 0; t < 10; ++t) {
        RngStream rng(2024, t);
        NetworkRealization net;
        if (!sample_realization(0.1, 0.02, 0.01, w, rng, net)) continue;
        REQUIRE(net.served.served_mobile.size() == net.assoc.active_bs.size());
        for (std::size_t s = 0; s < net.assoc.active_bs.size(); ++s)
            CHECK(net.assoc.serving_bs[net.served.served_mobile[s]] ==
                  net.assoc.active_bs[s]);
        CHECK(net.fading.size() == net.bs.size());
        for (double h : net.fading) CHECK(h > 0.0);
        CHECK(net.assoc.serving_bs[net.typical_mobile()] == net.typical_bs());
    }
}

TEST_CASE("typical-mobile statistics are translation invariant on the torus") {
    Window w{50.0, 50.0, true};
    RngStream rng(5150, 0);
    NetworkRealization net;
    REQUIRE(sample_realization(0.1, 0.02, 0.01, w, rng, net));

    const double shift_x = 13.7, shift_y = 29.1;
    auto shifted = [&](const PointPattern& p) {
        PointPattern out = p;
        for (auto& pt : out.points) {
            pt.x = std::fmod(pt.x + shift_x, w.width);
            pt.y = std::fmod(pt.y + shift_y, w.height);
        }
        return out;
    };
    const PointPattern bs2 = shifted(net.bs);
    const PointPattern mob2 = shifted(net.mobiles);
    const Association assoc2 = associate(mob2, bs2, w);
    CHECK(assoc2.serving_bs == net.assoc.serving_bs);
    CHECK(assoc2.active_bs == net.assoc.active_bs);
}
