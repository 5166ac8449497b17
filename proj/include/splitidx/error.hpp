#pragma once

#include <stdexcept>
#include <string>

namespace splitidx {

// Base for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameter or unknown identifier (hash name, policy, grid value).
class config_error : public error {
public:
    using error::error;
};

// Dictionary content that cannot be indexed with the requested layout.
class build_error : public error {
public:
    using error::error;
};

// Encoding/decoding failure in the q-gram codec.
class codec_error : public error {
public:
    using error::error;
};

class io_error : public error {
public:
    using error::error;
};

// Problems reading a serialized index back.
class format_error : public error {
public:
    enum class kind { bad_magic, version_mismatch, truncated, corrupt };

    format_error(kind k, const std::string& what) : error(what), kind_(k) {}

    [[nodiscard]] kind reason() const noexcept { return kind_; }

private:
    kind kind_;
};

} // namespace splitidx
