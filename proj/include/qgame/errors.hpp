#pragma once

#include <stdexcept>
#include <string>

namespace qgame {

enum class Errc {
    DuplicatePayoff,
    NotNormalized,
    EmptyState,
    UnknownPayoff,
    PayoffCollision,
    ExpansionTooLarge,
    EnclosureTooWide,
    MalformedTrace,
    ParseError,
};

const char* errc_name(Errc c);

// Single exception type; code() distinguishes the contract errors.
class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

} // namespace qgame
