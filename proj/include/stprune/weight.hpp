// Copyright 2026 The stprune Authors.
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stprune {

/// Base class for all stprune errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** Fixed-precision edge weight.
 *
 * Weights are stored as 64-bit integers in units of 1e-6 (micros), so
 * objective values of integer-weight instances compare exactly and
 * serialization round-trips without float noise.
 */
class Weight {
public:
    static constexpr std::int64_t kScale = 1'000'000;

    constexpr Weight() = default;

    static constexpr Weight from_micros(std::int64_t m)
    {
        Weight w;
        w.micros_ = m;
        return w;
    }

    static constexpr Weight from_int(std::int64_t units)
    {
        return from_micros(units * kScale);
    }

    /// Parse a decimal literal with at most six fractional digits.
    /// Scientific notation is not part of the STP grammar and is rejected.
    static std::optional<Weight> parse(std::string_view text)
    {
        if (text.empty())
            return std::nullopt;
        std::size_t pos = 0;
        bool negative = false;
        if (text[pos] == '-') {
            negative = true;
            ++pos;
        }
        std::int64_t int_part = 0;
        std::size_t digits = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (int_part > (INT64_MAX - 9) / 10)
                return std::nullopt;
            int_part = int_part * 10 + (text[pos] - '0');
            ++digits;
            ++pos;
        }
        std::int64_t frac_part = 0;
        std::size_t frac_digits = 0;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
                if (frac_digits < 6) {
                    frac_part = frac_part * 10 + (text[pos] - '0');
                    ++frac_digits;
                } else if (text[pos] != '0') {
                    return std::nullopt;  // more precision than we store
                }
                ++pos;
            }
            if (frac_digits == 0)
                return std::nullopt;
        }
        if (digits == 0 && frac_digits == 0)
            return std::nullopt;
        if (pos != text.size())
            return std::nullopt;
        while (frac_digits < 6) {
            frac_part *= 10;
            ++frac_digits;
        }
        if (int_part > INT64_MAX / kScale)
            return std::nullopt;
        std::int64_t m = int_part * kScale + frac_part;
        return from_micros(negative ? -m : m);
    }

    constexpr std::int64_t micros() const { return micros_; }

    /// Value in natural units (lossy; for numerics only).
    constexpr double value() const { return static_cast<double>(micros_) / kScale; }

    /// Shortest decimal form: integers print without a decimal point.
    std::string str() const
    {
        std::int64_t m = micros_;
        std::string sign;
        if (m < 0) {
            sign = "-";
            m = -m;
        }
        std::int64_t ip = m / kScale;
        std::int64_t fp = m % kScale;
        std::string out = sign + std::to_string(ip);
        if (fp != 0) {
            std::string frac = std::to_string(fp);
            frac.insert(frac.begin(), 6 - frac.size(), '0');
            while (frac.back() == '0')
                frac.pop_back();
            out += "." + frac;
        }
        return out;
    }

    friend constexpr Weight operator+(Weight a, Weight b)
    {
        return from_micros(a.micros_ + b.micros_);
    }
    friend constexpr Weight operator-(Weight a, Weight b)
    {
        return from_micros(a.micros_ - b.micros_);
    }
    Weight& operator+=(Weight o)
    {
        micros_ += o.micros_;
        return *this;
    }
    friend constexpr auto operator<=>(Weight, Weight) = default;

private:
    std::int64_t micros_ = 0;
};

}  // namespace stprune
