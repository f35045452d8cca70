#pragma once

#include "hdperc/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace hdperc {

/// Disjoint sets that also track each element's lifted position relative to its
/// root. On a torus, joining two elements already in one set with an
/// inconsistent lift means the set winds around the torus.
class LiftedUnionFind
{
  public:
    explicit LiftedUnionFind(std::size_t n, std::optional<Torus> torus = std::nullopt)
        : parent_(n)
        , size_(n, 1)
        , offset_(n)
        , wrapsX_(n, 0)
        , wrapsY_(n, 0)
        , torus_(torus)
    {
        for (std::size_t i = 0; i < n; ++i)
            parent_[i] = static_cast<std::uint32_t>(i);
    }

    /// Root of i; `lift` receives position(i) - position(root).
    std::size_t find(std::size_t i, Point* lift = nullptr)
    {
        path_.clear();
        std::size_t root = i;
        while (parent_[root] != root) {
            path_.push_back(root);
            root = parent_[root];
        }
        // Compress from the node nearest the root outward.
        Point acc{0.0, 0.0};
        for (auto it = path_.rbegin(); it != path_.rend(); ++it) {
            acc = acc + offset_[*it];
            offset_[*it] = acc;
            parent_[*it] = static_cast<std::uint32_t>(root);
        }
        if (lift)
            *lift = path_.empty() ? Point{0.0, 0.0} : offset_[i];
        return root;
    }

    /// Records an edge with displacement d = position(j) - position(i).
    void unite(std::size_t i, std::size_t j, Point d)
    {
        Point li, lj;
        std::size_t ri = find(i, &li);
        std::size_t rj = find(j, &lj);
        if (ri == rj) {
            if (torus_) {
                const Point mismatch = (li + d) - lj;
                const double h = 0.5 * torus_->side;
                if (std::abs(mismatch.x) > h)
                    wrapsX_[ri] = 1;
                if (std::abs(mismatch.y) > h)
                    wrapsY_[ri] = 1;
            }
            return;
        }
        // position(rj) - position(ri)
        Point rel = (li + d) - lj;
        if (size_[ri] < size_[rj]) {
            std::swap(ri, rj);
            rel = -1.0 * rel;
        }
        parent_[rj] = static_cast<std::uint32_t>(ri);
        offset_[rj] = rel;
        size_[ri] += size_[rj];
        wrapsX_[ri] |= wrapsX_[rj];
        wrapsY_[ri] |= wrapsY_[rj];
    }

    bool wrapsX(std::size_t root) const { return wrapsX_[root] != 0; }
    bool wrapsY(std::size_t root) const { return wrapsY_[root] != 0; }
    std::size_t size() const { return parent_.size(); }

  private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::vector<Point> offset_;
    std::vector<std::uint8_t> wrapsX_;
    std::vector<std::uint8_t> wrapsY_;
    std::optional<Torus> torus_;
    std::vector<std::size_t> path_;
};

} // namespace hdperc
