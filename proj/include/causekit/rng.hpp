#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace causekit {

// Seeded RNG with hand-rolled reductions. std::mt19937_64's raw output stream
// is fully specified by the standard; the std:: distributions are not, so we
// map outputs to indices/doubles ourselves to keep artifacts reproducible
// across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, n). Modulo reduction; the bias is < n / 2^64.
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(gen_() % n);
    }

    // Standard normal via Box-Muller.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = next_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace causekit
