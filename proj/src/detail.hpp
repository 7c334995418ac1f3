#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "microformal/biseries.hpp"

namespace microformal::detail {

// Image slots for evaluate(): overrides first, then same-named variables of
// target, otherwise empty.
inline std::vector<std::optional<BiSeries>> images_for(const Context& src, const ContextPtr& target, const Grading& g,
                                                       const std::map<std::string, BiSeries>& overrides = {}) {
    std::vector<std::optional<BiSeries>> images(src.size());
    for (std::size_t v = 0; v < src.size(); ++v) {
        const std::string& name = src[v].name;
        if (auto it = overrides.find(name); it != overrides.end())
            images[v] = it->second;
        else if (target->index_of(name))
            images[v] = BiSeries::constant(Poly::variable(target, name), g);
    }
    return images;
}

// Re-expresses every coefficient of s in target by variable name.
inline BiSeries embed(const BiSeries& s, const ContextPtr& target,
                      const std::map<std::string, std::string>& renames = {}) {
    return s.map([&](const Poly& p) { return microformal::embed(p, target, renames); }, target);
}

inline std::string indexed(const char* family, int i) { return family + std::to_string(i); }

} // namespace microformal::detail
