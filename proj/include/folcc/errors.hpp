#pragma once

#include <stdexcept>
#include <string>

namespace folcc {

// Error taxonomy shared by the library and the CLI exit-code contract:
// usage_error -> 2, guard_error -> 1, model_error -> 3.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct usage_error : error {
    using error::error;
};

struct guard_error : error {
    using error::error;
};

struct model_error : error {
    using error::error;
};

} // namespace folcc
