#pragma once

#include <stdexcept>
#include <string>

namespace ych {

// I/O failures (missing files, bad magic/version, short reads).
struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures that survive fallbacks (e.g. Cholesky breakdown).
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ych
