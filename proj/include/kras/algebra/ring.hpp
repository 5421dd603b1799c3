#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kras {

/// Ordered variable names; a Laurent variable may carry negative exponents.
struct Ring {
    std::vector<std::string> names;
    std::vector<bool> laurent;

    std::size_t arity() const { return names.size(); }
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::size_t require(std::string_view name) const;
    bool is_laurent(std::size_t i) const { return laurent[i]; }
    bool has_laurent() const;

    friend bool operator==(const Ring& a, const Ring& b) = default;
};

using RingPtr = std::shared_ptr<const Ring>;

RingPtr make_ring(std::vector<std::string> names, const std::vector<std::string>& laurent_names = {});
/// Same ring with one more (fresh) variable appended.
RingPtr extend_ring(const RingPtr& ring, const std::string& name, bool laurent = false);
bool same_ring(const RingPtr& a, const RingPtr& b);

using Monomial = std::vector<int>;

/// Graded lexicographic order, strict "greater than", so that maps keyed with
/// it iterate from the leading term down.
struct GrLexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

}  // namespace kras
