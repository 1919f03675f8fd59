#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace thompson_clt {

  using BigInt      = boost::multiprecision::cpp_int;
  using BigRational = boost::multiprecision::cpp_rational;

  // numerator / 2^exponent, kept in lowest terms: the numerator is odd, or it
  // is zero and the exponent is zero.
  class Dyadic {
   public:
    Dyadic() = default;
    Dyadic(BigInt numerator, std::uint32_t exponent)
        : num_(std::move(numerator)), exp_(exponent) {
      normalize();
    }
    // NOLINTNEXTLINE(google-explicit-constructor)
    Dyadic(long long integer) : num_(integer), exp_(0) {}

    // 2^-k
    [[nodiscard]] static Dyadic pow2_inverse(std::uint32_t k) {
      return Dyadic(BigInt(1), k);
    }
    // 1 - c * 2^-k
    [[nodiscard]] static Dyadic one_minus(unsigned c, std::uint32_t k) {
      BigInt n = BigInt(1) << k;
      n -= c;
      return Dyadic(std::move(n), k);
    }

    [[nodiscard]] BigInt const& numerator() const noexcept {
      return num_;
    }
    [[nodiscard]] std::uint32_t exponent() const noexcept {
      return exp_;
    }
    [[nodiscard]] bool is_zero() const noexcept {
      return num_.is_zero();
    }
    [[nodiscard]] int sign() const noexcept {
      return num_.sign();
    }

    // this * 2^shift
    [[nodiscard]] Dyadic scaled(int shift) const {
      Dyadic out(*this);
      if (out.num_.is_zero() || shift == 0) {
        return out;
      }
      if (shift > 0) {
        auto const s = static_cast<std::uint32_t>(shift);
        if (out.exp_ >= s) {
          out.exp_ -= s;
        } else {
          out.num_ <<= (s - out.exp_);
          out.exp_ = 0;
        }
      } else {
        out.exp_ += static_cast<std::uint32_t>(-shift);
        out.normalize();
      }
      return out;
    }

    friend Dyadic operator+(Dyadic const& a, Dyadic const& b) {
      return combine(a, b, false);
    }
    friend Dyadic operator-(Dyadic const& a, Dyadic const& b) {
      return combine(a, b, true);
    }
    friend Dyadic operator*(Dyadic const& a, Dyadic const& b) {
      return Dyadic(a.num_ * b.num_, a.exp_ + b.exp_);
    }

    friend bool operator==(Dyadic const& a, Dyadic const& b) {
      return a.exp_ == b.exp_ && a.num_ == b.num_;
    }
    friend std::strong_ordering operator<=>(Dyadic const& a, Dyadic const& b) {
      if (a.exp_ == b.exp_) {
        return cmp(a.num_, b.num_);
      }
      if (a.exp_ < b.exp_) {
        return cmp(BigInt(a.num_ << (b.exp_ - a.exp_)), b.num_);
      }
      return cmp(a.num_, BigInt(b.num_ << (a.exp_ - b.exp_)));
    }

    // "n/2^e", or "n" when e = 0.
    [[nodiscard]] std::string to_string() const {
      std::string out = num_.str();
      if (exp_ != 0) {
        out += "/2^" + std::to_string(exp_);
      }
      return out;
    }

    [[nodiscard]] BigRational to_rational() const {
      return BigRational(num_, BigInt(1) << exp_);
    }

   private:
    static std::strong_ordering cmp(BigInt const& x, BigInt const& y) {
      int const c = x.compare(y);
      return c < 0 ? std::strong_ordering::less
                   : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    static Dyadic combine(Dyadic const& a, Dyadic const& b, bool subtract) {
      Dyadic out;
      if (a.exp_ == b.exp_) {
        out.num_ = subtract ? BigInt(a.num_ - b.num_) : BigInt(a.num_ + b.num_);
        out.exp_ = a.exp_;
      } else if (a.exp_ > b.exp_) {
        BigInt bb = b.num_ << (a.exp_ - b.exp_);
        out.num_  = subtract ? BigInt(a.num_ - bb) : BigInt(a.num_ + bb);
        out.exp_  = a.exp_;
      } else {
        BigInt aa = a.num_ << (b.exp_ - a.exp_);
        out.num_  = subtract ? BigInt(aa - b.num_) : BigInt(aa + b.num_);
        out.exp_  = b.exp_;
      }
      out.normalize();
      return out;
    }

    void normalize() {
      if (num_.is_zero()) {
        exp_ = 0;
        return;
      }
      if (exp_ == 0) {
        return;
      }
      auto const tz = static_cast<std::uint32_t>(
          boost::multiprecision::lsb(num_.sign() < 0 ? BigInt(-num_) : num_));
      auto const drop = tz < exp_ ? tz : exp_;
      if (drop != 0) {
        num_ >>= drop;
        exp_ -= drop;
      }
    }

    BigInt num_ = 0;
    std::uint32_t exp_ = 0;
  };

}  // namespace thompson_clt
