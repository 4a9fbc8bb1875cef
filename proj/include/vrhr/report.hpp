#pragma once

#include <string>
#include <vector>

namespace vrhr {

struct Violation {
    std::string message;
};

/// Accumulates violations; empty report means the check passed.
struct ValidationReport {
    std::vector<Violation> items;

    bool ok() const { return items.empty(); }
    void add(std::string message) { items.push_back({std::move(message)}); }
    std::string to_string() const;
};

} // namespace vrhr
