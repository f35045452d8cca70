#include "hdperc/contour.hpp"
#include "hdperc/percolation.hpp"

#include <doctest.h>

#include <cmath>
#include <deque>
#include <random>

using namespace hdperc;

namespace {

struct BfsResult
{
    std::vector<std::uint32_t> label;
    std::vector<bool> wrapsX, wrapsY;
};

// Plain O(N^2) breadth-first search; on a torus it carries unwrapped lifts and
// records a winding whenever an edge closes a cycle with a nonzero period.
BfsResult bfsClusters(const std::vector<Point>& pts, double L, std::optional<Torus> t)
{
    const std::size_t n = pts.size();
    BfsResult out;
    out.label.assign(n, UINT32_MAX);
    std::vector<Point> lift(n);
    std::uint32_t next = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (out.label[s] != UINT32_MAX)
            continue;
        const std::uint32_t c = next++;
        out.wrapsX.push_back(false);
        out.wrapsY.push_back(false);
        out.label[s] = c;
        lift[s] = pts[s];
        std::deque<std::size_t> q{s};
        while (!q.empty()) {
            const std::size_t i = q.front();
            q.pop_front();
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                Point d = pts[j] - pts[i];
                if (t)
                    d = t->wrapDelta(d);
                if (d.norm2() > L * L)
                    continue;
                const Point lj = lift[i] + d;
                if (out.label[j] == UINT32_MAX) {
                    out.label[j] = c;
                    lift[j] = lj;
                    q.push_back(j);
                } else if (t) {
                    const Point gap = lj - lift[j];
                    if (std::abs(gap.x) > 0.5 * t->side)
                        out.wrapsX[c] = true;
                    if (std::abs(gap.y) > 0.5 * t->side)
                        out.wrapsY[c] = true;
                }
            }
        }
    }
    return out;
}

std::vector<Point> randomHardCore(std::mt19937_64& rng, std::size_t want, double n, double r)
{
    std::uniform_real_distribution<double> u(-n, n);
    std::vector<Point> pts;
    for (int tries = 0; tries < 20000 && pts.size() < want; ++tries) {
        const Point p{u(rng), u(rng)};
        bool ok = true;
        for (Point q : pts)
            ok = ok && distance(p, q) >= 2 * r;
        if (ok)
            pts.push_back(p);
    }
    return pts;
}

} // namespace

TEST_CASE("clusters equal breadth-first search, planar and periodic")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-8, 8);
    for (int trial = 0; trial < 120; ++trial) {
        std::vector<Point> pts(1 + rng() % 200);
        for (auto& p : pts)
            p = {u(rng), u(rng)};
        const double L = 0.5 + 1.5 * static_cast<double>(trial % 7) / 6.0;
        for (bool periodic : {false, true}) {
            const std::optional<Torus> t = periodic ? std::optional<Torus>(Torus{16.0}) : std::nullopt;
            const auto got = buildClusters(pts, L, t);
            const auto want = bfsClusters(pts, L, t);
            CHECK(got.label == want.label);
            if (periodic) {
                CHECK(got.wrapsX == want.wrapsX);
                CHECK(got.wrapsY == want.wrapsY);
            }
        }
    }
}

TEST_CASE("edges use the closed distance rule")
{
    const std::vector<Point> pts{{0, 0}, {1.6, 0}};
    CHECK(buildClusters(pts, 1.6).clusterCount() == 1);
    CHECK(buildClusters(pts, 1.5999).clusterCount() == 2);
}

TEST_CASE("spanning chain in a planar box and a torus")
{
    ModelParams p;
    p.r = 0.5;
    p.L = 1.6;
    p.delta = 0.03;
    p.epsilon = 0.01;
    p.boxHalfWidth = 5.0;
    std::vector<Point> chain;
    for (double x = -4.5; x <= 4.51; x += 1.5)
        chain.push_back({x, 0.3});
    auto obs = observe(chain, p);
    CHECK(obs.spansHorizontally);
    CHECK_FALSE(obs.spansVertically);
    CHECK(obs.originEvent);
    CHECK(obs.originEventDiscrete);
    CHECK(obs.largestClusterFraction == doctest::Approx(1.0));

    // Torus of side 10: 7 points at spacing 1.5 do not close the loop (gap 1 + 10 - 9 = 1.0 <= L does).
    const Torus t{10.0};
    auto wrapped = observe(chain, p, t);
    CHECK(wrapped.spansHorizontally);
    std::vector<Point> open(chain.begin(), chain.end() - 1);
    CHECK_FALSE(observe(open, p, t).spans());
    CHECK_FALSE(observe(open, p).spans());

    // Far from the origin: spanning but no origin event.
    for (auto& q : chain)
        q.y = 3.0;
    obs = observe(chain, p);
    CHECK(obs.spans());
    CHECK_FALSE(obs.originEvent);
    CHECK_FALSE(obs.originEventDiscrete);
}

TEST_CASE("discrete origin event implies the continuum one")
{
    ModelParams p;
    p.r = 0.5;
    p.L = 1.6;
    p.delta = 0.03;
    p.epsilon = 0.01;
    p.boxHalfWidth = 4.0;
    std::mt19937_64 rng(8);
    int discrete = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const auto pts = randomHardCore(rng, 30 + rng() % 30, 4.0, 0.5);
        for (bool periodic : {false, true}) {
            const std::optional<Torus> t = periodic ? std::optional<Torus>(Torus{8.0}) : std::nullopt;
            const auto obs = observe(pts, p, t);
            if (obs.originEventDiscrete) {
                ++discrete;
                CHECK(obs.originEvent);
            }
        }
    }
    CHECK(discrete > 20);
}

TEST_CASE("empty configuration")
{
    const std::vector<Point> none;
    const auto obs = observe(none, ModelParams{});
    CHECK_FALSE(obs.spans());
    CHECK(obs.largestClusterFraction == 0.0);
}
