#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace thompson_clt {

  class error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // Malformed word text. `offset` is the byte offset of the offending input.
  class parse_error : public error {
   public:
    parse_error(std::string const& what, std::size_t offset)
        : error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    [[nodiscard]] std::size_t offset() const noexcept {
      return offset_;
    }

   private:
    std::size_t offset_;
  };

  class overflow_error : public error {
   public:
    using error::error;
  };

  // A configured resource limit would be exceeded.
  class budget_error : public error {
   public:
    budget_error(std::string const& parameter, std::uint64_t attempted, std::uint64_t limit)
        : error("budget exceeded: " + parameter + " needs " + std::to_string(attempted)
                + " > limit " + std::to_string(limit)),
          parameter_(parameter),
          attempted_(attempted),
          limit_(limit) {}

    [[nodiscard]] std::string const& parameter() const noexcept {
      return parameter_;
    }
    [[nodiscard]] std::uint64_t attempted() const noexcept {
      return attempted_;
    }
    [[nodiscard]] std::uint64_t limit() const noexcept {
      return limit_;
    }

   private:
    std::string parameter_;
    std::uint64_t attempted_;
    std::uint64_t limit_;
  };

  class domain_error : public error {
   public:
    using error::error;
  };

  class not_a_redex : public error {
   public:
    using error::error;
  };

  class not_neutral : public error {
   public:
    using error::error;
  };

  // Partial data that no neutral word explains.
  class inconsistent_data : public error {
   public:
    using error::error;
  };

  // Raised when a proved property fails at runtime; always an implementation bug.
  class internal_error : public error {
   public:
    using error::error;
  };

}  // namespace thompson_clt
