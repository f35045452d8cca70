#include "hdperc/params.hpp"

#include "hdperc/errors.hpp"

#include <cmath>
#include <sstream>

namespace hdperc {

namespace {

void require(bool ok, const char* constraint, const ModelParams& p)
{
    if (ok)
        return;
    std::ostringstream os;
    os << "constraint violated: " << constraint << " (r=" << p.r << ", L=" << p.L
       << ", delta=" << p.delta << ", epsilon=" << p.epsilon << ", z=" << p.z
       << ", box=" << p.boxHalfWidth << ")";
    throw InvalidParams(os.str());
}

} // namespace

void ModelParams::validate() const
{
    const bool finite = std::isfinite(r) && std::isfinite(L) && std::isfinite(delta) &&
                        std::isfinite(epsilon) && std::isfinite(z) && std::isfinite(boxHalfWidth);
    require(finite, "all parameters finite", *this);
    require(r > 0.0, "r > 0", *this);
    require(L > 3.0 * r, "L > 3r", *this);
    require(delta > 0.0 && delta < 0.5 * r, "0 < delta < r/2", *this);
    require(epsilon > 0.0 && epsilon < 0.5 * delta, "0 < epsilon < delta/2", *this);
    require(3.0 * r + 2.0 * delta + 2.0 * epsilon < L, "3r + 2delta + 2epsilon < L", *this);
    require(z >= 0.0, "z >= 0", *this);
    require(boxHalfWidth > 0.0, "box half-width n > 0", *this);
}

} // namespace hdperc
