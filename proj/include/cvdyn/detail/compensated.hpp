#pragma once

#include <cmath>
#include <cstddef>

namespace cvdyn::detail {

// a*d - b*c with ~1.5 ulp relative accuracy (Kahan's fma trick). The naive
// expression loses all digits when the products nearly cancel, which is the
// common case for the covariance determinants handled here.
inline long double det2(long double a, long double b, long double c, long double d) {
    const long double w = b * c;
    const long double e = std::fmal(b, c, -w); // exact: bc - w
    const long double f = std::fmal(a, d, -w); // rounded: ad - w
    return f - e;
}

// Neumaier compensated accumulator.
class KahanSum {
  public:
    void add(long double x) {
        const long double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    long double value() const { return sum_ + comp_; }

  private:
    long double sum_ = 0.0L;
    long double comp_ = 0.0L;
};

} // namespace cvdyn::detail
