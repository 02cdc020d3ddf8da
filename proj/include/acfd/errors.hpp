#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace acfd {

/// Invalid scalar parameter (negative radius, m < 1, ...).
class param_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dimensionality or shape mismatch between a grid and its consumer.
class dimension_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad run configuration (stability violation, unknown preset, ...).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The explicit scheme produced a non-finite value.
class divergence_error : public std::runtime_error {
public:
    divergence_error(long step, std::int64_t flat_index, const std::string& what)
        : std::runtime_error(what), step_(step), flat_index_(flat_index) {}

    long step() const noexcept { return step_; }
    std::int64_t flat_index() const noexcept { return flat_index_; }

private:
    long step_;
    std::int64_t flat_index_;
};

/// Radius measurement found no sign change along the probe ray.
class no_interface_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The shrinking circle/sphere has already vanished at the requested time.
class circle_vanished_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace acfd
