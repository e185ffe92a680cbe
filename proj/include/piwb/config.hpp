#pragma once

#include <cstdint>

namespace piwb {

/// Size caps for symbolic computations. The free algebra is infinite; every
/// operation that can blow up takes one of these.
struct Limits {
    int degree_cap = 12;
    std::uint64_t term_cap = 1'000'000;
    int dim_cap = 64;

    static Limits unbounded() {
        Limits l;
        l.degree_cap = 1 << 20;
        l.term_cap = UINT64_MAX;
        l.dim_cap = 1 << 20;
        return l;
    }
};

/// Work meter for enumeration-heavy operations. `used` counts elementary
/// multiplications / accumulations. Exceeding the limit is reported as a
/// distinct "unknown" outcome, never silently as a verdict.
struct Budget {
    std::uint64_t limit = 100'000'000;
    std::uint64_t used = 0;

    explicit Budget(std::uint64_t lim = 100'000'000) : limit(lim) {}

    bool charge(std::uint64_t n) {
        used += n;
        return used <= limit;
    }
    bool exhausted() const { return used > limit; }
};

} // namespace piwb
