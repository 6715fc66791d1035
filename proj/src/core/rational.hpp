#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace cppa {

/// Exact non-negative rational. Security coefficients are compared exactly,
/// so the lattice operations (min/max/dominance) never depend on a float
/// tolerance. Values in practice are tiny (the 0..5 range of typical
/// policies), so int64 components are more than enough.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t value) : num_(value), den_(1) {
        if (value < 0) throw std::invalid_argument("negative coefficient");
    }
    constexpr Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den_ <= 0 || num_ < 0) throw std::invalid_argument("invalid rational");
        reduce();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        // Cross-multiplication is exact for the magnitudes we handle.
        return a.num_ * b.den_ <=> b.num_ * a.den_;
    }

    static Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
    static Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }

    /// Accepts "3", "1.5" or "3/2".
    static std::optional<Rational> parse(const std::string& text);

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    constexpr void reduce() {
        const std::int64_t g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline std::optional<Rational> Rational::parse(const std::string& text) {
    if (text.empty()) return std::nullopt;
    try {
        if (auto slash = text.find('/'); slash != std::string::npos) {
            const std::int64_t n = std::stoll(text.substr(0, slash));
            const std::int64_t d = std::stoll(text.substr(slash + 1));
            if (n < 0 || d <= 0) return std::nullopt;
            return Rational(n, d);
        }
        if (auto dot = text.find('.'); dot != std::string::npos) {
            const std::string frac = text.substr(dot + 1);
            if (frac.empty() || frac.size() > 9) return std::nullopt;
            const std::int64_t whole = std::stoll(text.substr(0, dot));
            std::int64_t scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
            const std::int64_t part = std::stoll(frac);
            if (whole < 0 || part < 0) return std::nullopt;
            return Rational(whole * scale + part, scale);
        }
        const std::int64_t n = std::stoll(text);
        if (n < 0) return std::nullopt;
        return Rational(n);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

} // namespace cppa
